//! Acceptance suite. Prints one PASS/FAIL line per criterion; every count is
//! compared against an oracle written directly in this file.

mod common;

use std::collections::HashSet;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use varietal::algebra::{enumerate_algebras, enumerate_on, satisfies, Algebra, DEFAULT_CEILING};
use varietal::base::{jointly_surjective, HomSet, IndexCategory, Presheaf};
use varietal::birkhoff::{check_galois_bits, restrict_to_generators, GaloisScale, GaloisWindow};
use varietal::clones::{
    affine_clone, check_h_algebra, check_relative_monad, is_relative_monad, matrix_clone, standardized_presentation,
    state_clone, HAlgebra, RelativeMonad,
};
use varietal::library::{bundled, global_state, internal_category, monoid, semilattice, state_transformers, FiniteRig};
use varietal::presentation::{free_algebra, quotient_map_equal, sum, tensor, Presentation, Verdict};
use varietal::pretheory::{check_concrete_model, kleisli_pretheory, presentation_of_pretheory, ConcreteModel};
use varietal::syntax::{FreeFormSignature, ParamTerm, Symbol, Term};

type Outcome = Result<String, String>;

/// Criteria whose statement is false as written. The suite still reports
/// them as FAIL and requires the documented failure to persist.
const DOCUMENTED_FAILURES: &[(usize, &str)] = &[(
    8,
    "objects {0,1,2} omit arity 3, so the compiled theory cannot impose associativity",
)];

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn sym(name: &str, arity: usize, param: usize) -> Symbol {
    Symbol {
        name: name.into(),
        arity: Presheaf::set(arity),
        param: Presheaf::set(param),
    }
}

/// Every table `n×n → n`, indexed `x*n + y`.
fn binary_tables(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let cells = n * n;
    let count = if n == 0 { 1 } else { n.pow(cells as u32) };
    (0..count).map(move |mut code| {
        (0..cells)
            .map(|_| {
                let d = code % n;
                code /= n;
                d
            })
            .collect()
    })
}

fn associative(t: &[usize], n: usize) -> bool {
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| t[t[x * n + y] * n + z] == t[x * n + t[y * n + z]])))
}

fn commutative(t: &[usize], n: usize) -> bool {
    (0..n).all(|x| (0..n).all(|y| t[x * n + y] == t[y * n + x]))
}

fn idempotent(t: &[usize], n: usize) -> bool {
    (0..n).all(|x| t[x * n + x] == x)
}

fn semilattice_tables(n: usize) -> Vec<Vec<usize>> {
    binary_tables(n)
        .filter(|t| associative(t, n) && commutative(t, n) && idempotent(t, n))
        .collect()
}

/// Monoid tables with their unit.
fn monoid_tables(n: usize, commutative_only: bool) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for t in binary_tables(n) {
        if !associative(&t, n) || (commutative_only && !commutative(&t, n)) {
            continue;
        }
        for u in 0..n {
            if (0..n).all(|x| t[u * n + x] == x && t[x * n + u] == x) {
                out.push((t.clone(), u));
            }
        }
    }
    out
}

fn models_on(p: &Presentation, carrier: &Presheaf) -> Result<Vec<Algebra>, String> {
    enumerate_on(p.signature(), p.equations(), carrier, DEFAULT_CEILING).map_err(err)
}

// 1. Free semilattices are the nonempty subsets of the generators.
fn free_semilattice() -> Outcome {
    let p = semilattice();
    let mut counts = Vec::new();
    for (k, depth) in [(1, 3), (2, 3), (3, 3), (4, 4)] {
        let q = free_algebra(&p, &Presheaf::set(k), depth).map_err(err)?;
        if !q.saturated() {
            return Err(format!("k={k} depth={depth} not saturated"));
        }
        let subset: Vec<u32> = (0..q.class_count())
            .map(|c| q.representative(0, c).variables().iter().fold(0, |m, &(_, x)| m | 1 << x))
            .collect();
        let distinct: HashSet<u32> = subset.iter().copied().collect();
        if distinct.len() != subset.len() || distinct.len() != (1 << k) - 1 || distinct.contains(&0) {
            return Err(format!("k={k}: classes do not biject with nonempty subsets"));
        }
        for x in 0..k {
            if subset[q.generator_class(0, x)] != 1 << x {
                return Err(format!("k={k}: generator {x} is not a singleton"));
            }
        }
        for a in 0..subset.len() {
            for b in 0..subset.len() {
                let c = q.apply(0, &[a, b], 0, 0).ok_or("join undefined on classes")?;
                if subset[c] != subset[a] | subset[b] {
                    return Err(format!("k={k}: join of classes {a},{b} is not the union"));
                }
            }
        }
        counts.push(q.class_count());
    }
    if counts != [1, 3, 7, 15] {
        return Err(format!("classes={counts:?}"));
    }
    Ok(format!("classes={counts:?} saturated; subset bijection and union verified"))
}

// 2. Free global-state algebras are state transformers (X×S)^S.
fn free_global_state() -> Outcome {
    let p = global_state(1, 2);
    let states = 2;
    let mut counts = Vec::new();
    for (x, expected) in [(1, 4), (2, 16)] {
        let q = free_algebra(&p, &Presheaf::set(x), 3).map_err(err)?;
        if !q.saturated() {
            return Err(format!("|X|={x} not saturated"));
        }
        let base = x * states;
        let target = state_transformers(1, 2, base);
        let generator = |i: usize| (0..states).map(|s| (i * states + s) * base.pow(s as u32)).sum::<usize>();
        let image: Vec<usize> = (0..q.class_count())
            .map(|c| target.eval(q.representative(0, c), &|_, i| generator(i)).ok_or("evaluation failed"))
            .collect::<Result<_, _>>()?;
        let distinct: HashSet<usize> = image.iter().copied().collect();
        if q.class_count() != expected || distinct.len() != expected || target.carrier().total() != expected {
            return Err(format!(
                "|X|={x}: classes={} distinct images={} transformers={}",
                q.class_count(),
                distinct.len(),
                target.carrier().total()
            ));
        }
        for a in 0..expected {
            for b in 0..expected {
                let c = q.apply(0, &[a, b], 0, 0).ok_or("lookup undefined")?;
                if Some(image[c]) != target.apply(0, &[image[a], image[b]], 0, 0) {
                    return Err(format!("|X|={x}: lookup is not preserved"));
                }
            }
            for v in 0..2 {
                let c = q.apply(1, &[a], 0, v).ok_or("update undefined")?;
                if Some(image[c]) != target.apply(1, &[image[a]], 0, v) {
                    return Err(format!("|X|={x}: update is not preserved"));
                }
            }
        }
        counts.push(expected);
    }
    Ok(format!("classes={counts:?} saturated; evaluation into (X×S)^S is a bijective homomorphism"))
}

// 3. Models of a sum are pairs of models on a shared carrier.
fn sum_law() -> Outcome {
    let s = sum(&semilattice(), &monoid()).map_err(err)?;
    let mut counts = Vec::new();
    for n in 0..=3 {
        let carrier = Presheaf::set(n);
        let found: HashSet<Algebra> = models_on(&s, &carrier)?.into_iter().collect();
        let mut oracle = HashSet::new();
        for j in semilattice_tables(n) {
            for (m, u) in monoid_tables(n, false) {
                let a = Algebra::from_fn(s.signature(), &carrier, |op, f, _, _| match op {
                    0 => j[f[0] * n + f[1]],
                    1 => m[f[0] * n + f[1]],
                    _ => u,
                })
                .map_err(err)?;
                oracle.insert(a);
            }
        }
        if found != oracle {
            return Err(format!("n={n}: sum models {} vs pairs {}", found.len(), oracle.len()));
        }
        counts.push(found.len());
    }
    Ok(format!("labeled models by size 0..3 = {counts:?}, equal to pairs"))
}

// 4. Eckmann-Hilton: the tensor of monoids is commutative monoids.
fn tensor_law() -> Outcome {
    let t = tensor(&monoid(), &monoid()).map_err(err)?;
    let mut counts = Vec::new();
    for n in 0..=3 {
        let carrier = Presheaf::set(n);
        let found: HashSet<Algebra> = models_on(&t, &carrier)?.into_iter().collect();
        let mut oracle = HashSet::new();
        for (m, u) in monoid_tables(n, true) {
            let a = Algebra::from_fn(t.signature(), &carrier, |op, f, _, _| {
                if op % 2 == 0 {
                    m[f[0] * n + f[1]]
                } else {
                    u
                }
            })
            .map_err(err)?;
            oracle.insert(a);
        }
        if found != oracle {
            return Err(format!("n={n}: tensor models {} vs commutative monoids {}", found.len(), oracle.len()));
        }
        counts.push(found.len());
    }
    Ok(format!("labeled models by size 0..3 = {counts:?}, equal to commutative monoids"))
}

fn random_term(rng: &mut ChaCha8Rng, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.25) {
        return Term::var(0, rng.gen_range(0..2));
    }
    match rng.gen_range(0..3) {
        0 => Term::app(
            0,
            vec![vec![random_term(rng, depth - 1), random_term(rng, depth - 1)]],
            (0, 0),
        ),
        1 => Term::app(1, vec![vec![random_term(rng, depth - 1)]], (0, 0)),
        _ => Term::app(2, vec![vec![]], (0, 0)),
    }
}

/// Replaces one randomly chosen leaf variable by the other variable.
fn perturb(rng: &mut ChaCha8Rng, t: &Term) -> Term {
    use varietal::syntax::TermNode;
    match t.node() {
        TermNode::Var { id, .. } => Term::var(0, 1 - id),
        TermNode::App { op, binding, param } => {
            let args = &binding[0];
            if args.is_empty() {
                return Term::var(0, 0);
            }
            let i = rng.gen_range(0..args.len());
            let mut new_args = args.clone();
            new_args[i] = perturb(rng, &args[i]);
            Term::app(*op, vec![new_args], *param)
        }
    }
}

// 5. Without equations, free-algebra satisfaction is structural equality.
fn empty_theory_terms() -> Outcome {
    let sig = FreeFormSignature::new(&IndexCategory::point(), vec![sym("f", 2, 1), sym("g", 1, 1), sym("a", 0, 1)])
        .map_err(err)?;
    let p = Presentation::new("free", &sig, vec![]).map_err(err)?;
    let vars = Presheaf::set(2);
    let quotients = (0..=3)
        .map(|d| free_algebra(&p, &vars, d).map_err(err))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut equal, mut discrepancies) = (0, 0);
    for i in 0..200 {
        let t = random_term(&mut rng, 3);
        let u = match i % 3 {
            0 => random_term(&mut rng, 3),
            1 => perturb(&mut rng, &t),
            _ => t.clone(),
        };
        let depth = t.depth().max(u.depth());
        let q = &quotients[depth];
        let same_class = matches!((q.class_of(&t), q.class_of(&u)), (Some(x), Some(y)) if x == y);
        let verdict = quotient_map_equal(
            &p,
            &ParamTerm::single(&sig, &vars, t.clone()).map_err(err)?,
            &ParamTerm::single(&sig, &vars, u.clone()).map_err(err)?,
            depth,
            &[2],
            DEFAULT_CEILING,
        )
        .map_err(err)?;
        let structural = t == u;
        equal += structural as usize;
        if same_class != structural || (verdict == Verdict::Equal) != structural {
            discrepancies += 1;
        }
    }
    if discrepancies > 0 {
        return Err(format!("{discrepancies} discrepancies in 200 pairs"));
    }
    Ok(format!("200 pairs ({equal} structurally equal), 0 discrepancies"))
}

/// The relative-monad laws recomputed from the public tables, for clones
/// over finite sets.
fn monad_laws_hold(m: &RelativeMonad) -> bool {
    let n = m.objects().len();
    let compose = |inner: &[usize], outer: &[usize]| inner.iter().map(|&x| outer[x]).collect::<Vec<usize>>();
    for j in 0..n {
        let Some(e) = m.homs(j, j).index_of(m.unit(j)) else {
            return false;
        };
        if m.extend(j, j, e) != (0..m.h(j).total()).collect::<Vec<_>>() {
            return false;
        }
        for k in 0..n {
            for g in 0..m.homs(j, k).len() {
                if compose(m.unit(j), m.extend(j, k, g)) != m.homs(j, k).get(g) {
                    return false;
                }
            }
        }
    }
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                for g in 0..m.homs(j, k).len() {
                    let gf = m.homs(j, k).get(g);
                    for h in 0..m.homs(k, l).len() {
                        let mh = m.extend(k, l, h);
                        let Some(i) = m.homs(j, l).index_of(&compose(&gf, mh)) else {
                            return false;
                        };
                        if m.extend(j, l, i) != compose(m.extend(j, k, g), mh) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

// 6. Clone validity and mutation coverage.
fn clone_suite() -> Outcome {
    let z2 = FiniteRig::z2();
    let valid = [
        state_clone(&[0, 1, 2], 2),
        matrix_clone(&z2, &[0, 1, 2, 3]),
        affine_clone(&z2, &[0, 1, 2, 3]),
    ];
    for m in &valid {
        let m = m.as_ref().map_err(err)?;
        if !check_relative_monad(m).is_empty() || !monad_laws_hold(m) {
            return Err(format!("{} fails the monad laws", m.name()));
        }
    }
    let mutated = [
        state_clone(&[0, 1, 2], 2),
        matrix_clone(&z2, &[0, 1, 2]),
        affine_clone(&z2, &[0, 1, 2]),
    ];
    let mut summary = Vec::new();
    for m in &mutated {
        let m = m.as_ref().map_err(err)?;
        let (mut total, mut missed) = (0usize, 0usize);
        for e in m.entries() {
            for v in 0..m.entry_range(e) {
                if v == m.entry(e) {
                    continue;
                }
                total += 1;
                if is_relative_monad(&m.with_entry(e, v).map_err(err)?) {
                    missed += 1;
                }
            }
        }
        if missed > 0 {
            return Err(format!("{}: {missed} of {total} mutations undetected", m.name()));
        }
        summary.push(format!("{} {total}", m.name()));
    }
    Ok(format!("valid at n<=3; mutations caught 100% ({})", summary.join(", ")))
}

// 7. Algebras of the standardized presentation are the H-algebras.
fn standardized_clone() -> Outcome {
    let z2 = FiniteRig::z2();
    let clones = [
        state_clone(&[0, 1], 2).map_err(err)?,
        matrix_clone(&z2, &[0, 1]).map_err(err)?,
        affine_clone(&z2, &[0, 1, 2]).map_err(err)?,
    ];
    let mut summary = Vec::new();
    for m in &clones {
        let p = standardized_presentation(m).map_err(err)?;
        let mut counts = Vec::new();
        for n in 0..=2 {
            let carrier = Presheaf::set(n);
            let found: HashSet<HAlgebra> = models_on(&p, &carrier)?
                .iter()
                .map(|a| HAlgebra::from_algebra(m, a))
                .collect::<Result<_, _>>()
                .map_err(err)?;
            let mut oracle = HashSet::new();
            for h in HAlgebra::enumerate(m, &carrier, DEFAULT_CEILING).map_err(err)? {
                if check_h_algebra(m, &h).map_err(err)?.is_empty() {
                    oracle.insert(h);
                }
            }
            if found != oracle {
                return Err(format!("{} n={n}: {} algebras vs {} H-algebras", m.name(), found.len(), oracle.len()));
            }
            counts.push(found.len());
        }
        summary.push(format!("{} {counts:?}", m.name()));
    }
    Ok(format!("bijection at sizes 0..2 ({})", summary.join(", ")))
}

// 8. Concrete models of the Kleisli pretheory are semilattices.
fn kleisli_semilattice() -> Outcome {
    let objects: Vec<Presheaf> = (0..3).map(Presheaf::set).collect();
    let t = kleisli_pretheory(&semilattice(), &objects, 3)
        .map_err(err)?
        .ok_or("free algebras did not saturate")?;
    let p = presentation_of_pretheory(&t).map_err(err)?;
    let (mut models, mut oracle) = (Vec::new(), Vec::new());
    for n in 0..=3 {
        let algebras = models_on(&p, &Presheaf::set(n))?;
        for a in &algebras {
            let m = ConcreteModel::from_algebra(&t, a).map_err(err)?;
            if !check_concrete_model(&t, &m).map_err(err)?.is_empty() {
                return Err(format!("n={n}: compiled algebra is not a concrete model"));
            }
        }
        models.push(algebras.len());
        oracle.push(semilattice_tables(n).len());
    }
    if models != oracle {
        return Err(format!(
            "concrete models by size 0..3 = {models:?}, semilattices = {oracle:?}; the extra models on 3 points \
             are commutative idempotent magmas that are not associative"
        ));
    }
    Ok(format!("models by size 0..3 = {models:?}"))
}

/// Directed multigraphs with at most three vertices and three edges, with
/// edges listed in non-decreasing order.
fn small_graphs() -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for v in 0..=3 {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|s| (0..v).map(move |t| (s, t))).collect();
        let mut stack: Vec<(usize, Vec<(usize, usize)>)> = vec![(0, vec![])];
        while let Some((start, edges)) = stack.pop() {
            if edges.len() < 3 {
                for i in start..pairs.len() {
                    let mut next = edges.clone();
                    next.push(pairs[i]);
                    stack.push((i, next));
                }
            }
            out.push((v, edges));
        }
    }
    out
}

/// Category structures on a graph: identity loops and a composition of
/// composable pairs, counted by direct search.
fn category_count(v: usize, edges: &[(usize, usize)]) -> usize {
    let loops: Vec<Vec<usize>> = (0..v)
        .map(|x| (0..edges.len()).filter(|&i| edges[i] == (x, x)).collect())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..edges.len())
        .flat_map(|f| (0..edges.len()).map(move |g| (f, g)))
        .filter(|&(f, g)| edges[f].1 == edges[g].0)
        .collect();
    let choices: Vec<Vec<usize>> = pairs
        .iter()
        .map(|&(f, g)| (0..edges.len()).filter(|&h| edges[h] == (edges[f].0, edges[g].1)).collect())
        .collect();
    let ne = edges.len();
    let mut count = 0;
    let mut ids = vec![0; v];
    let mut comp = vec![usize::MAX; ne * ne];
    fn each_choice(lists: &[Vec<usize>], at: usize, out: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if at == lists.len() {
            f(out);
            return;
        }
        for &x in &lists[at] {
            out[at] = x;
            each_choice(lists, at + 1, out, f);
        }
    }
    each_choice(&loops, 0, &mut ids, &mut |ids| {
        let mut picked = vec![0; pairs.len()];
        each_choice(&choices, 0, &mut picked, &mut |picked| {
            for (p, &(f, g)) in pairs.iter().enumerate() {
                comp[f * ne + g] = picked[p];
            }
            let units = (0..ne).all(|f| {
                let (s, t) = edges[f];
                comp[ids[s] * ne + f] == f && comp[f * ne + ids[t]] == f
            });
            let assoc = pairs.iter().all(|&(f, g)| {
                (0..ne)
                    .filter(|&h| edges[g].1 == edges[h].0)
                    .all(|h| comp[comp[f * ne + g] * ne + h] == comp[f * ne + comp[g * ne + h]])
            });
            if units && assoc {
                count += 1;
            }
        });
    });
    count
}

// 9. Internal categories on a fixed graph.
fn internal_categories() -> Outcome {
    let p = internal_category();
    let graphs = small_graphs();
    let mut structures = 0;
    for (v, edges) in &graphs {
        let carrier = Presheaf::graph(*v, edges).map_err(err)?;
        let found = models_on(&p, &carrier)?.len();
        let expected = category_count(*v, edges);
        if found != expected {
            return Err(format!("graph {v} {edges:?}: {found} models vs {expected} categories"));
        }
        structures += found;
    }
    Ok(format!("{} graphs, {structures} category structures, all counts equal", graphs.len()))
}

fn point_window(symbols: Vec<Symbol>) -> Result<GaloisWindow, String> {
    let sig = FreeFormSignature::new(&IndexCategory::point(), symbols).map_err(err)?;
    let mut contexts: Vec<Presheaf> = Vec::new();
    for s in sig.symbols() {
        if !contexts.contains(&s.arity) {
            contexts.push(s.arity.clone());
        }
    }
    let scale = GaloisScale::new(vec![2], 2, vec![Presheaf::set(1)], contexts).map_err(err)?;
    GaloisWindow::new(&sig, &scale, DEFAULT_CEILING).map_err(err)
}

fn words_of(bits: &fixedbitset::FixedBitSet, len: usize) -> Vec<u64> {
    let mut w = vec![0u64; len.div_ceil(64)];
    for i in bits.ones() {
        w[i / 64] |= 1 << (i % 64);
    }
    w
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

// 10. The Galois laws, exhaustively over algebra sets for one binary symbol
// and on random pairs for two-symbol signatures.
fn galois_laws() -> Outcome {
    let window = point_window(vec![sym("op", 2, 1)])?;
    let (na, ne) = (window.algebras().len(), window.equations().len());
    if na > 20 {
        return Err(format!("{na} algebras is too many for exhaustive subsets"));
    }
    let sat: Vec<Vec<u64>> = (0..na)
        .map(|i| {
            let mut w = vec![0u64; ne.div_ceil(64)];
            for e in 0..ne {
                if satisfies(&window.algebras()[i], &window.equation(e)) {
                    w[e / 64] |= 1 << (e % 64);
                }
            }
            w
        })
        .collect();
    for (i, s) in sat.iter().enumerate() {
        if words_of(window.satisfied_by(i), ne) != *s {
            return Err(format!("satisfaction of algebra #{i} disagrees with direct evaluation"));
        }
    }
    let full: Vec<u64> = {
        let mut w = vec![u64::MAX; ne.div_ceil(64)];
        if ne % 64 != 0 {
            *w.last_mut().unwrap() = (1u64 << (ne % 64)) - 1;
        }
        w
    };
    let star = |e: &[u64]| -> u32 { (0..na).filter(|&i| subset(e, &sat[i])).fold(0, |m, i| m | 1 << i) };
    let subsets = 1usize << na;
    let mut lower: Vec<Vec<u64>> = Vec::with_capacity(subsets);
    lower.push(full.clone());
    for a in 1..subsets {
        let i = a.trailing_zeros() as usize;
        let prev = &lower[a & (a - 1)];
        lower.push(prev.iter().zip(&sat[i]).map(|(x, y)| x & y).collect());
    }
    let single: Vec<u32> = (0..ne)
        .map(|e| (0..na).filter(|&i| sat[i][e / 64] >> (e % 64) & 1 == 1).fold(0, |m, i| m | 1 << i))
        .collect();
    let mut failures = 0usize;
    for a in 0..subsets {
        let am = a as u32;
        let la = &lower[a];
        for (e, &s) in single.iter().enumerate() {
            if (am & !s == 0) != (la[e / 64] >> (e % 64) & 1 == 1) {
                failures += 1;
            }
        }
        let closure = star(la);
        if am & !closure != 0 || lower[closure as usize] != *la || star(&lower[closure as usize]) != closure {
            failures += 1;
        }
    }
    let mut star_sets: Vec<u32> = single.clone();
    star_sets.push(star(&vec![0u64; full.len()]));
    for &s in &star_sets {
        if star(&lower[s as usize]) != s {
            failures += 1;
        }
    }
    let mut library_checks = 0;
    let mut e_bits = fixedbitset::FixedBitSet::with_capacity(ne);
    let mut a_bits = fixedbitset::FixedBitSet::with_capacity(na);
    for a in 0..subsets {
        e_bits.clear();
        e_bits.insert(a % ne);
        a_bits.clear();
        (0..na).filter(|i| a >> i & 1 == 1).for_each(|i| a_bits.insert(i));
        if !check_galois_bits(&window, &e_bits, &a_bits).ok() {
            failures += 1;
        }
        library_checks += 1;
    }
    if failures > 0 {
        return Err(format!("{failures} failures in the exhaustive window"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut seeded = 0;
    for _ in 0..100 {
        let symbols = vec![sym("f", rng.gen_range(0..=2), 1), sym("g", rng.gen_range(0..=2), 1)];
        let w = point_window(symbols)?;
        let (na, ne) = (w.algebras().len(), w.equations().len());
        for _ in 0..20 {
            let i = rng.gen_range(0..na.max(1));
            if na == 0 || ne == 0 {
                break;
            }
            let e = rng.gen_range(0..ne);
            if satisfies(&w.algebras()[i], &w.equation(e)) != w.satisfied_by(i).contains(e) {
                return Err("random window satisfaction disagrees with direct evaluation".into());
            }
        }
        for round in 0..3 {
            let mut eb = fixedbitset::FixedBitSet::with_capacity(ne);
            let mut ab = fixedbitset::FixedBitSet::with_capacity(na);
            (0..na).filter(|_| rng.gen_bool(0.5)).for_each(|i| ab.insert(i));
            match round {
                0 => {}
                1 => (0..ne).filter(|_| rng.gen_bool(0.01)).for_each(|e| eb.insert(e)),
                _ => eb = w.sat_lower(&ab),
            }
            let direct_left = ab.ones().all(|i| eb.is_subset(w.satisfied_by(i)));
            let direct_right = eb.is_subset(&w.sat_lower(&ab));
            if direct_left != direct_right || !check_galois_bits(&w, &eb, &ab).ok() {
                return Err(format!("seeded window {seeded} fails a law"));
            }
        }
        seeded += 1;
    }
    Ok(format!(
        "exhaustive: {subsets} algebra sets x {} equation sets, {library_checks} library reports; {seeded} random windows; 0 failures",
        ne + 1
    ))
}

// 11. Satisfaction is unchanged by restriction along points of parameters.
fn jointly_epi() -> Outcome {
    let mut checked = 0usize;
    for p in bundled() {
        let index = p.signature().index().clone();
        let gens: Vec<Presheaf> = (0..index.object_count()).map(|b| Presheaf::representable(&index, b)).collect();
        let algebras = enumerate_algebras(p.signature(), &[], &vec![2; index.object_count()], DEFAULT_CEILING)
            .map_err(err)?;
        for e in p.equations() {
            let insertions: Vec<_> = gens
                .iter()
                .map(|g| HomSet::new(g, e.param()).map(|h| (0..h.len()).map(|x| h.morphism(x)).collect::<Vec<_>>()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?
                .concat();
            if !jointly_surjective(e.param(), &insertions).map_err(err)? {
                return Err(format!("{}: insertions into {} are not jointly surjective", p.name(), e.name));
            }
            let restricted = restrict_to_generators(std::slice::from_ref(e), &gens).map_err(err)?;
            for a in &algebras {
                if satisfies(a, e) != restricted.iter().all(|r| satisfies(a, r)) {
                    return Err(format!("{}: {} changes satisfaction under restriction", p.name(), e.name));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (algebra, equation) pairs agree"))
}

// 12. CLI goldens are byte-identical across runs and thread counts.
fn golden_determinism() -> Outcome {
    let bad = common::check_goldens(Path::new(env!("CARGO_BIN_EXE_varietal")));
    if !bad.is_empty() {
        return Err(format!("mismatches: {bad:?}"));
    }
    Ok(format!("{} cases x 4 runs (1 and 4 threads) identical", common::cases().len()))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("free semilattice exactness", free_semilattice),
        ("free global state", free_global_state),
        ("sum law", sum_law),
        ("tensor of monoids", tensor_law),
        ("empty theory term equality", empty_theory_terms),
        ("relative monad suite", clone_suite),
        ("standardized clone presentation", standardized_clone),
        ("kleisli pretheory of semilattices", kleisli_semilattice),
        ("internal categories", internal_categories),
        ("galois laws", galois_laws),
        ("jointly epi invariance", jointly_epi),
        ("golden determinism", golden_determinism),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let documented = DOCUMENTED_FAILURES.iter().find(|(c, _)| *c == n);
        match (&outcome, documented) {
            (Ok(detail), None) => println!("PASS {n:>2} {name}: {detail} [{secs:.1}s]"),
            (Err(detail), Some((_, why))) => {
                println!("FAIL {n:>2} {name}: {detail} [{secs:.1}s] (documented: {why})")
            }
            (Err(detail), None) => {
                println!("FAIL {n:>2} {name}: {detail} [{secs:.1}s]");
                unexpected.push(n);
            }
            (Ok(detail), Some(_)) => {
                println!("FAIL {n:>2} {name}: passed but is listed as a documented failure: {detail} [{secs:.1}s]");
                unexpected.push(n);
            }
        }
    }
    let passed = criteria.len() - DOCUMENTED_FAILURES.len() - unexpected.len();
    println!(
        "acceptance: {passed}/{} pass, {} documented failure(s), {} unexpected",
        criteria.len(),
        DOCUMENTED_FAILURES.len(),
        unexpected.len()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
