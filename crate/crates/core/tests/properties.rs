//! Property tests for the invariants of each layer.

use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use proptest::prelude::*;

use varietal::algebra::{
    bundle, enumerate_algebras, enumerate_on, interpretation_table, is_homomorphism, satisfies, unbundle, Algebra,
    DEFAULT_CEILING,
};
use varietal::base::{HomSet, IndexCategory, Presheaf, PresheafMorphism};
use varietal::birkhoff::{
    check_galois_bits, restrict_to_generators, sat_star, variety_generated, GaloisScale, GaloisWindow,
};
use varietal::clones::{check_relative_monad, clone_of_presentation};
use varietal::library::{global_state, reading_bits, restriction, rmodule, semilattice, FiniteRig};
use varietal::presentation::{
    bundled_equations, free_algebra, palg_satisfies, quotient_map_equal, Presentation, Verdict,
};
use varietal::pretheory::{
    check_concrete_model, free_pretheory, kleisli_pretheory, presentation_of_pretheory, ConcreteModel, Pretheory,
};
use varietal::syntax::{
    enumerate_terms, from_traditional, standardize, substitute, Equation, FreeFormSignature, ParamTerm, Symbol, Term,
};

fn sym(name: &str, arity: usize, param: usize) -> Symbol {
    Symbol {
        name: name.into(),
        arity: Presheaf::set(arity),
        param: Presheaf::set(param),
    }
}

/// `f` binary, `g` unary and `a` nullary, all with one parameter.
fn fga() -> Arc<FreeFormSignature> {
    FreeFormSignature::new(&IndexCategory::point(), vec![sym("f", 2, 1), sym("g", 1, 1), sym("a", 0, 1)]).unwrap()
}

fn binary() -> Arc<FreeFormSignature> {
    FreeFormSignature::new(&IndexCategory::point(), vec![sym("op", 2, 1)]).unwrap()
}

/// Terms over `fga` in `vars` variables of depth at most `depth`.
fn term(vars: usize, depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..vars).prop_map(|x| Term::var(0, x)),
        Just(Term::app(2, vec![vec![]], (0, 0))),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::app(0, vec![vec![l, r]], (0, 0))),
            inner.prop_map(|t| Term::app(1, vec![vec![t]], (0, 0))),
        ]
    })
}

/// Terms over the single binary symbol in `vars` variables.
fn binary_term(vars: usize, depth: u32) -> impl Strategy<Value = Term> {
    (0..vars)
        .prop_map(|x| Term::var(0, x))
        .prop_recursive(depth, 16, 2, |inner| {
            (inner.clone(), inner).prop_map(|(l, r)| Term::app(0, vec![vec![l, r]], (0, 0)))
        })
}

/// An `fga`-algebra on `n` points from flat tables.
fn fga_algebra(n: usize, f: &[usize], g: &[usize], a: usize) -> Algebra {
    Algebra::from_fn(&fga(), &Presheaf::set(n), |op, x, _, _| match op {
        0 => f[x[0] * n + x[1]] % n,
        1 => g[x[0]] % n,
        _ => a % n,
    })
    .unwrap()
}

fn fga_algebras() -> impl Strategy<Value = Algebra> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(0..n, n * n),
            proptest::collection::vec(0..n, n),
            0..n,
        )
            .prop_map(|(n, f, g, a)| fga_algebra(n, &f, &g, a))
    })
}

fn graphs() -> impl Strategy<Value = Presheaf> {
    (0usize..=2).prop_flat_map(|v| {
        let edge = if v == 0 {
            Just((0, 0)).boxed()
        } else {
            (0..v, 0..v).boxed()
        };
        let max = if v == 0 { 0 } else { 3 };
        proptest::collection::vec(edge, 0..=max).prop_map(move |edges| Presheaf::graph(v, &edges).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hom_sets_are_bounded_natural_and_stable(x in graphs(), y in graphs()) {
        let h = HomSet::new(&x, &y).unwrap();
        let bound: usize = (0..2).map(|b| y.size(b).pow(x.size(b) as u32)).product();
        prop_assert!(h.len() <= bound);
        let again = HomSet::new(&x, &y).unwrap();
        for i in 0..h.len() {
            let flat = h.get(i);
            prop_assert_eq!(&flat, &again.get(i));
            prop_assert_eq!(h.index_of(&flat), Some(i));
            prop_assert!(PresheafMorphism::from_flat(&x, &y, &flat).is_ok());
        }
    }

    #[test]
    fn hom_sets_between_sets_are_all_functions(n in 0usize..4, m in 0usize..4) {
        let h = HomSet::new(&Presheaf::set(n), &Presheaf::set(m)).unwrap();
        prop_assert_eq!(h.len(), m.pow(n as u32));
    }

    #[test]
    fn substitution_is_a_monad(t in term(2, 3), s0 in term(2, 2), s1 in term(2, 2), r0 in term(2, 2), r1 in term(2, 2)) {
        let vars = vec![vec![Term::var(0, 0), Term::var(0, 1)]];
        prop_assert_eq!(substitute(&t, &vars), t.clone());
        prop_assert_eq!(substitute(&Term::var(0, 1), &[vec![s0.clone(), s1.clone()]]), s1.clone());
        let phi = vec![vec![s0, s1]];
        let psi = vec![vec![r0, r1]];
        let composed = vec![phi[0].iter().map(|s| substitute(s, &psi)).collect::<Vec<_>>()];
        prop_assert_eq!(substitute(&substitute(&t, &phi), &psi), substitute(&t, &composed));
    }

    #[test]
    fn substitution_lemma(a in fga_algebras(), t in term(2, 3), s0 in term(3, 2), s1 in term(3, 2), psi in proptest::collection::vec(0usize..3, 3)) {
        let n = a.carrier().total();
        let psi: Vec<usize> = psi.iter().map(|x| x % n).collect();
        let j3 = Presheaf::set(3);
        let inner = [a.evaluate(&s0, &j3, &psi).unwrap(), a.evaluate(&s1, &j3, &psi).unwrap()];
        let lhs = a.evaluate(&substitute(&t, &[vec![s0, s1]]), &j3, &psi).unwrap();
        let rhs = a.evaluate(&t, &Presheaf::set(2), &inner).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn subalgebras_inherit_equations(table in proptest::collection::vec(0usize..3, 9), l in binary_term(2, 3), r in binary_term(2, 3)) {
        let sig = binary();
        let b = Algebra::from_fn(&sig, &Presheaf::set(3), |_, x, _, _| table[x[0] * 3 + x[1]]).unwrap();
        let j = Presheaf::set(2);
        let e = Equation::new(
            &sig,
            "e",
            ParamTerm::single(&sig, &j, l).unwrap(),
            ParamTerm::single(&sig, &j, r).unwrap(),
        )
        .unwrap();
        for mask in 1u32..8 {
            let members: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
            let closed = members.iter().all(|&x| members.iter().all(|&y| members.contains(&table[x * 3 + y])));
            if !closed {
                continue;
            }
            let pos = |v: usize| members.iter().position(|&m| m == v).unwrap();
            let sub = Algebra::from_fn(&sig, &Presheaf::set(members.len()), |_, x, _, _| {
                pos(table[members[x[0]] * 3 + members[x[1]]])
            })
            .unwrap();
            let inclusion = PresheafMorphism::new(sub.carrier(), b.carrier(), vec![members.clone()]).unwrap();
            prop_assert!(inclusion.is_injective());
            prop_assert!(is_homomorphism(&inclusion, &sub, &b));
            if satisfies(&b, &e) {
                prop_assert!(satisfies(&sub, &e));
            }
        }
    }

    #[test]
    fn free_semilattice_identifications_are_sound(l in binary_term(2, 3), r in binary_term(2, 3)) {
        let p = semilattice();
        let j = Presheaf::set(2);
        let q = free_algebra(&p, &j, 3).unwrap();
        prop_assert!(q.saturated());
        let same = q.class_of(&l).is_some() && q.class_of(&l) == q.class_of(&r);
        let e = Equation::new(
            p.signature(),
            "query",
            ParamTerm::single(p.signature(), &j, l.clone()).unwrap(),
            ParamTerm::single(p.signature(), &j, r.clone()).unwrap(),
        )
        .unwrap();
        let models = p.models(&[3], DEFAULT_CEILING).unwrap();
        prop_assert_eq!(same, models.iter().all(|a| satisfies(a, &e)));
        let verdict = quotient_map_equal(&p, &e.lhs, &e.rhs, 3, &[3], DEFAULT_CEILING).unwrap();
        prop_assert_eq!(same, verdict == Verdict::Equal);
    }

    #[test]
    fn bundling_is_a_bijection(f in proptest::collection::vec(0usize..2, 4), g in proptest::collection::vec(0usize..2, 8), h in proptest::collection::vec(0usize..2, 2)) {
        let sig = FreeFormSignature::new(&IndexCategory::point(), vec![sym("f", 2, 1), sym("g", 2, 2), sym("h", 1, 1)]).unwrap();
        let a = Algebra::from_fn(&sig, &Presheaf::set(2), |op, x, _, c| match op {
            0 => f[x[0] * 2 + x[1]],
            1 => g[(x[0] * 2 + x[1]) * 2 + c],
            _ => h[x[0]],
        })
        .unwrap();
        let st = standardize(&sig).unwrap();
        let target = from_traditional(&st.traditional).unwrap();
        prop_assert_eq!(target.len(), 2);
        let b = bundle(&a, &st, &target).unwrap();
        prop_assert_eq!(unbundle(&b, &st, &sig).unwrap(), a);
    }

    #[test]
    fn galois_laws_on_random_sets(a_mask in 0u32..(1 << 18), e_seed in proptest::collection::vec(0usize..703, 0..6)) {
        let window = binary_window();
        let mut a = FixedBitSet::with_capacity(window.algebras().len());
        (0..window.algebras().len()).filter(|i| a_mask >> i & 1 == 1).for_each(|i| a.insert(i));
        let mut e = FixedBitSet::with_capacity(window.equations().len());
        e_seed.iter().for_each(|&i| e.insert(i % window.equations().len()));
        let report = check_galois_bits(window, &e, &a);
        prop_assert!(report.ok(), "{}", report);
        let closed = window.sat_star(&e);
        let algebras = window.algebras_of(&closed);
        let regenerated = window.algebra_bits(&variety_generated(window, &algebras).unwrap()).unwrap();
        prop_assert_eq!(regenerated, closed);
    }

    #[test]
    fn satisfaction_kernel_matches_interpretation(i in 0usize..18, e in 0usize..703) {
        let window = binary_window();
        let a = &window.algebras()[i];
        let eq = window.equation(e);
        let table = interpretation_table(a, eq.arity(), 2).unwrap();
        let l = table.row(eq.lhs.component(0, 0)).unwrap();
        let r = table.row(eq.rhs.component(0, 0)).unwrap();
        prop_assert_eq!(window.satisfied_by(i).contains(e), l == r);
    }

    #[test]
    fn varieties_are_closed_under_subobjects_and_products(e_seed in proptest::collection::vec(0usize..703, 0..4)) {
        let window = binary_window();
        let mut e = FixedBitSet::with_capacity(window.equations().len());
        e_seed.iter().for_each(|&i| e.insert(i % window.equations().len()));
        let v = window.sat_star(&e);
        let algebras = window.algebras();
        for i in v.ones() {
            for j in 0..algebras.len() {
                let (small, big) = (&algebras[j], &algebras[i]);
                let hs = HomSet::new(small.carrier(), big.carrier()).unwrap();
                for m in 0..hs.len() {
                    let f = hs.morphism(m);
                    if f.is_injective() && is_homomorphism(&f, small, big) {
                        prop_assert!(v.contains(j), "subalgebra #{} of #{} escapes", j, i);
                    }
                }
            }
            for k in v.ones() {
                let (x, y) = (&algebras[i], &algebras[k]);
                let (nx, ny) = (x.carrier().total(), y.carrier().total());
                if nx * ny > 2 {
                    continue;
                }
                let prod = Algebra::from_fn(x.signature(), &Presheaf::set(nx * ny), |_, f, _, _| {
                    let l = x.apply(0, &[f[0] / ny, f[1] / ny], 0, 0).unwrap();
                    let r = y.apply(0, &[f[0] % ny, f[1] % ny], 0, 0).unwrap();
                    l * ny + r
                })
                .unwrap();
                let p = window.algebra_index(&prod).unwrap();
                prop_assert!(v.contains(p), "product of #{} and #{} escapes", i, k);
            }
        }
    }

    #[test]
    fn clones_of_presentations_are_relative_monads(which in 0usize..4, mask in 1u32..8) {
        let p = match which {
            0 => semilattice(),
            1 => restriction(2),
            2 => reading_bits(1),
            _ => global_state(1, 2),
        };
        let objects: Vec<Presheaf> = (0..3).filter(|i| mask >> i & 1 == 1).map(Presheaf::set).collect();
        if let Some(m) = clone_of_presentation(&p, &objects, 3).unwrap() {
            prop_assert!(check_relative_monad(&m).is_empty());
        }
    }
}

fn binary_window() -> &'static GaloisWindow {
    static WINDOW: std::sync::OnceLock<GaloisWindow> = std::sync::OnceLock::new();
    WINDOW.get_or_init(|| {
        let scale = GaloisScale::new(vec![2], 2, vec![Presheaf::set(1)], vec![Presheaf::set(2)]).unwrap();
        let w = GaloisWindow::new(&binary(), &scale, DEFAULT_CEILING).unwrap();
        assert_eq!((w.algebras().len(), w.equations().len()), (18, 703));
        w
    })
}

#[test]
fn enumerated_terms_form_the_depth_filtration() {
    let sig = fga();
    let vars = Presheaf::set(2);
    let mut previous: Option<HashSet<Term>> = None;
    for d in 0..=2 {
        let u = enumerate_terms(&sig, &vars, d).unwrap();
        let terms: HashSet<Term> = u.all_terms().cloned().collect();
        assert_eq!(terms.len(), u.len());
        for t in &terms {
            t.validate(&sig, &vars).unwrap();
            assert!(t.depth() <= d);
        }
        if let Some(prev) = &previous {
            assert!(prev.is_subset(&terms));
            for l in prev {
                assert!(terms.contains(&Term::app(1, vec![vec![l.clone()]], (0, 0))));
                for r in prev {
                    assert!(terms.contains(&Term::app(0, vec![vec![l.clone(), r.clone()]], (0, 0))));
                }
            }
        }
        previous = Some(terms);
    }
}

#[test]
fn saturated_free_algebras_are_free() {
    let p = semilattice();
    for k in 1..=2 {
        let gens = Presheaf::set(k);
        let q = free_algebra(&p, &gens, 3).unwrap();
        assert!(q.saturated());
        let free = q.to_algebra().unwrap();
        assert!(palg_satisfies(&free, &p));
        for a in p.models(&[3], DEFAULT_CEILING).unwrap() {
            let phis = HomSet::new(&gens, a.carrier()).unwrap();
            let maps = HomSet::new(free.carrier(), a.carrier()).unwrap();
            for phi in 0..phis.len() {
                let phi = phis.get(phi);
                let extensions = (0..maps.len())
                    .map(|m| maps.morphism(m))
                    .filter(|h| (0..k).all(|x| h.apply(0, q.generator_class(0, x)) == phi[x]))
                    .filter(|h| is_homomorphism(h, &free, &a))
                    .count();
                assert_eq!(extensions, 1);
            }
        }
    }
}

#[test]
fn bundled_equations_have_the_same_models() {
    for p in [global_state(1, 2), rmodule(&FiniteRig::z2()), reading_bits(2)] {
        let bundled = bundled_equations(&p).unwrap();
        assert!(bundled.len() <= p.equations().len());
        for a in enumerate_algebras(p.signature(), &[], &[2], DEFAULT_CEILING).unwrap() {
            assert_eq!(palg_satisfies(&a, &p), bundled.iter().all(|e| satisfies(&a, e)), "{}", p.name());
        }
    }
}

#[test]
fn restriction_to_points_preserves_satisfaction() {
    let p = global_state(1, 2);
    let points = [Presheaf::set(1)];
    for a in enumerate_algebras(p.signature(), &[], &[2], DEFAULT_CEILING).unwrap() {
        for e in p.equations() {
            let r = restrict_to_generators(std::slice::from_ref(e), &points).unwrap();
            assert_eq!(satisfies(&a, e), r.iter().all(|x| satisfies(&a, x)));
        }
    }
}

/// Every action table of a pretheory on a carrier, by brute force.
fn all_models(t: &Pretheory, carrier: &Presheaf) -> Vec<ConcreteModel> {
    let n = t.objects().len();
    let mut shapes = Vec::new();
    for j in 0..n {
        for k in 0..n {
            let points_j = HomSet::new(&t.objects()[j], carrier).unwrap().len();
            let points_k = HomSet::new(&t.objects()[k], carrier).unwrap().len();
            shapes.push((t.hom_count(j, k) * points_j, points_k));
        }
    }
    let mut out = Vec::new();
    let mut tables: Vec<Vec<usize>> = shapes.iter().map(|&(len, _)| vec![0; len]).collect();
    loop {
        let action = (0..n).map(|j| (0..n).map(|k| tables[j * n + k].clone()).collect()).collect();
        if let Ok(m) = ConcreteModel::new(t, carrier, action) {
            if check_concrete_model(t, &m).unwrap().is_empty() {
                out.push(m);
            }
        }
        let mut carry = true;
        for (table, &(_, radix)) in tables.iter_mut().zip(&shapes) {
            for v in table.iter_mut() {
                if !carry {
                    break;
                }
                *v += 1;
                if *v == radix {
                    *v = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            return out;
        }
    }
}

#[test]
fn compiled_pretheories_biject_with_concrete_models() {
    let pretheories = [
        free_pretheory(vec![Presheaf::set(1)]).unwrap(),
        free_pretheory(vec![Presheaf::set(0), Presheaf::set(1)]).unwrap(),
        kleisli_pretheory(&semilattice(), &[Presheaf::set(1)], 3).unwrap().unwrap(),
        kleisli_pretheory(&involution(), &[Presheaf::set(1)], 3).unwrap().unwrap(),
    ];
    for t in &pretheories {
        let p = presentation_of_pretheory(t).unwrap();
        for n in 0..=2 {
            let carrier = Presheaf::set(n);
            let compiled: HashSet<Vec<Vec<usize>>> = enumerate_on(p.signature(), p.equations(), &carrier, DEFAULT_CEILING)
                .unwrap()
                .iter()
                .map(|a| {
                    let m = ConcreteModel::from_algebra(t, a).unwrap();
                    assert_eq!(&m.to_algebra(t, p.signature()).unwrap(), a);
                    flatten(t, &m)
                })
                .collect();
            let direct: HashSet<Vec<Vec<usize>>> = all_models(t, &carrier).iter().map(|m| flatten(t, m)).collect();
            assert_eq!(compiled, direct, "{} on {n} points", t.name());
        }
    }
}

/// One unary symbol `g` with `g(g(x)) = x`.
fn involution() -> Presentation {
    let sig = FreeFormSignature::new(&IndexCategory::point(), vec![sym("g", 1, 1)]).unwrap();
    let j = Presheaf::set(1);
    let x = Term::var(0, 0);
    let gg = Term::app(0, vec![vec![Term::app(0, vec![vec![x.clone()]], (0, 0))]], (0, 0));
    let e = Equation::new(
        &sig,
        "involutive",
        ParamTerm::single(&sig, &j, gg).unwrap(),
        ParamTerm::single(&sig, &j, x).unwrap(),
    )
    .unwrap();
    Presentation::new("involution", &sig, vec![e]).unwrap()
}

fn flatten(t: &Pretheory, m: &ConcreteModel) -> Vec<Vec<usize>> {
    let n = t.objects().len();
    (0..n).flat_map(|j| (0..n).map(move |k| m.table(j, k).to_vec())).collect()
}

/// Commutative idempotent tables with `x(xy) = xy`: the binary operations
/// whose two-generated behaviour is that of a semilattice.
fn two_variable_semilattices(n: usize) -> Vec<Vec<usize>> {
    let cells = n * n;
    let count = if n == 0 { 1 } else { n.pow(cells as u32) };
    (0..count)
        .map(|mut code| {
            (0..cells)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect::<Vec<usize>>()
        })
        .filter(|t| {
            (0..n).all(|x| {
                t[x * n + x] == x
                    && (0..n).all(|y| t[x * n + y] == t[y * n + x] && t[x * n + t[x * n + y]] == t[x * n + y])
            })
        })
        .collect()
}

#[test]
fn kleisli_semilattice_models_obey_the_two_variable_laws() {
    let objects = [Presheaf::set(1), Presheaf::set(2)];
    let t = kleisli_pretheory(&semilattice(), &objects, 3).unwrap().unwrap();
    let p = presentation_of_pretheory(&t).unwrap();
    let join = (0..t.hom_count(1, 0))
        .find(|&f| t.label(1, 0, f).contains("join"))
        .expect("the join of both variables");
    let mut counts = Vec::new();
    for n in 0..=3 {
        let carrier = Presheaf::set(n);
        let pairs = HomSet::new(&objects[1], &carrier).unwrap();
        let points = HomSet::new(&objects[0], &carrier).unwrap();
        let found: HashSet<Vec<usize>> = enumerate_on(p.signature(), p.equations(), &carrier, DEFAULT_CEILING)
            .unwrap()
            .iter()
            .map(|a| {
                let m = ConcreteModel::from_algebra(&t, a).unwrap();
                let mut table = vec![0; n * n];
                for phi in 0..pairs.len() {
                    let xy = pairs.get(phi);
                    table[xy[0] * n + xy[1]] = points.get(m.act(1, 0, join, phi, pairs.len()))[0];
                }
                table
            })
            .collect();
        let oracle: HashSet<Vec<usize>> = two_variable_semilattices(n).into_iter().collect();
        assert_eq!(found, oracle, "carrier {n}");
        counts.push(found.len());
    }
    assert_eq!(counts, vec![1, 1, 2, 11]);
}

#[test]
fn free_algebras_generate_the_variety_at_scale() {
    let p = semilattice();
    let scale = GaloisScale::new(vec![2], 2, vec![Presheaf::set(1)], vec![Presheaf::set(2)]).unwrap();
    let window = GaloisWindow::new(p.signature(), &scale, DEFAULT_CEILING).unwrap();
    let frees: Vec<Algebra> = (1..=3)
        .map(|k| free_algebra(&p, &Presheaf::set(k), 3).unwrap().to_algebra().unwrap())
        .collect();
    let mut e = FixedBitSet::with_capacity(window.equations().len());
    for i in 0..window.equations().len() {
        let eq = window.equation(i);
        if frees.iter().all(|a| satisfies(a, &eq)) {
            e.insert(i);
        }
    }
    let generated: HashSet<Algebra> = window.algebras_of(&window.sat_star(&e)).into_iter().collect();
    let models: HashSet<Algebra> = sat_star(p.signature(), p.equations(), &scale_for(&p), DEFAULT_CEILING)
        .unwrap()
        .into_iter()
        .collect();
    assert_eq!(generated, models);
    assert_eq!(models.len(), 1 + 1 + 2);
}

/// A scale whose contexts cover every arity of the presentation.
fn scale_for(p: &Presentation) -> GaloisScale {
    let contexts: Vec<Presheaf> = p.equations().iter().map(|e| e.arity().clone()).collect();
    GaloisScale::new(vec![2], 3, vec![Presheaf::set(1)], contexts).unwrap()
}
