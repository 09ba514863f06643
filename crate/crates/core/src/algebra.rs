//! Finite algebras for a free-form signature: evaluation, satisfaction,
//! homomorphisms and exhaustive model search.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::base::{HomSet, IndexCategory, Presheaf, PresheafMorphism, Sort};
use crate::error::{Error, Result};
use crate::syntax::{enumerate_terms, Equation, FreeFormSignature, Standardization, Term, TermNode, TermUniverse};

/// Default number of search nodes an enumeration may visit.
pub const DEFAULT_CEILING: u64 = 10_000_000;

/// The enumeration ceiling, overridable through `VARIETAL_CEILING`.
pub fn default_ceiling() -> u64 {
    std::env::var("VARIETAL_CEILING")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CEILING)
}

/// The interpretation of one symbol: a value of sort `b` for every natural
/// map `h: J_σ → A` and parameter element `c ∈ C_σ(b)`.
#[derive(Clone)]
pub struct OpTable {
    homs: Arc<HomSet>,
    param: Presheaf,
    values: Vec<usize>,
}

impl OpTable {
    pub fn homs(&self) -> &Arc<HomSet> {
        &self.homs
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn entry(&self, h: usize, b: Sort, c: usize) -> usize {
        h * self.param.total() + self.param.flat(b, c)
    }

    pub fn get(&self, h: usize, b: Sort, c: usize) -> usize {
        self.values[self.entry(h, b, c)]
    }
}

/// A finite algebra: a carrier with one natural operation table per symbol.
#[derive(Clone)]
pub struct Algebra {
    signature: Arc<FreeFormSignature>,
    carrier: Presheaf,
    tables: Vec<OpTable>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.signature, &other.signature) || self.signature == other.signature)
            && self.carrier == other.carrier
            && self.tables.iter().zip(&other.tables).all(|(a, b)| a.values == b.values)
    }
}

impl Eq for Algebra {}

impl Hash for Algebra {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.carrier.hash(state);
        for t in &self.tables {
            t.values.hash(state);
        }
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({:?}", self.carrier)?;
        for (s, t) in self.signature.symbols().iter().zip(&self.tables) {
            write!(f, " {}={:?}", s.name, t.values)?;
        }
        write!(f, ")")
    }
}

/// Builds the hom sets `J_σ → A` for every symbol.
pub fn operation_homs(sig: &FreeFormSignature, carrier: &Presheaf) -> Result<Vec<Arc<HomSet>>> {
    sig.symbols()
        .iter()
        .map(|s| HomSet::new(&s.arity, carrier).map(Arc::new))
        .collect()
}

impl Algebra {
    /// Builds an algebra from raw tables laid out as in [`OpTable::entry`],
    /// checking ranges and naturality.
    pub fn new(sig: &Arc<FreeFormSignature>, carrier: &Presheaf, tables: Vec<Vec<usize>>) -> Result<Self> {
        let homs = operation_homs(sig, carrier)?;
        Self::with_homs(sig, carrier, homs, tables)
    }

    pub fn with_homs(
        sig: &Arc<FreeFormSignature>,
        carrier: &Presheaf,
        homs: Vec<Arc<HomSet>>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if carrier.index() != sig.index() {
            return Err(Error::MismatchedIndex);
        }
        if tables.len() != sig.len() {
            return Err(Error::Shape(format!("expected {} operation tables", sig.len())));
        }
        let index = sig.index();
        let mut out = Vec::with_capacity(sig.len());
        for ((s, values), homs) in sig.symbols().iter().zip(tables).zip(homs) {
            let p = &s.param;
            if values.len() != homs.len() * p.total() {
                return Err(Error::Shape(format!(
                    "table of {} has {} entries, expected {}",
                    s.name,
                    values.len(),
                    homs.len() * p.total()
                )));
            }
            for h in 0..homs.len() {
                for (b, c) in p.elements() {
                    let v = values[h * p.total() + p.flat(b, c)];
                    if v >= carrier.size(b) {
                        return Err(Error::Shape(format!("table of {} has an out-of-range value {}", s.name, v)));
                    }
                    for &u in index.out_of(b) {
                        let m = index.morphism(u);
                        if carrier.act(u, v) != values[h * p.total() + p.flat(m.target, p.act(u, c))] {
                            return Err(Error::NotNatural(format!(
                                "operation {} along {}",
                                s.name, m.name
                            )));
                        }
                    }
                }
            }
            out.push(OpTable {
                homs,
                param: p.clone(),
                values,
            });
        }
        Ok(Algebra {
            signature: sig.clone(),
            carrier: carrier.clone(),
            tables: out,
        })
    }

    /// Builds an algebra from a function of `(symbol, flat binding, sort, param)`.
    pub fn from_fn(
        sig: &Arc<FreeFormSignature>,
        carrier: &Presheaf,
        f: impl Fn(usize, &[usize], Sort, usize) -> usize,
    ) -> Result<Self> {
        let homs = operation_homs(sig, carrier)?;
        let tables = sig
            .symbols()
            .iter()
            .enumerate()
            .map(|(op, s)| {
                let hs = &homs[op];
                let mut values = Vec::with_capacity(hs.len() * s.param.total());
                let mut flat = vec![0; hs.stride()];
                for h in 0..hs.len() {
                    hs.get_into(h, &mut flat);
                    for (b, c) in s.param.elements() {
                        values.push(f(op, &flat, b, c));
                    }
                }
                values
            })
            .collect();
        Self::with_homs(sig, carrier, homs, tables)
    }

    /// A copy with one table entry changed, revalidated.
    pub fn with_entry(&self, op: usize, entry: usize, value: usize) -> Result<Self> {
        let mut tables: Vec<Vec<usize>> = self.tables.iter().map(|t| t.values.clone()).collect();
        tables[op][entry] = value;
        let homs = self.tables.iter().map(|t| t.homs.clone()).collect();
        Self::with_homs(&self.signature, &self.carrier, homs, tables)
    }

    pub fn signature(&self) -> &Arc<FreeFormSignature> {
        &self.signature
    }

    pub fn carrier(&self) -> &Presheaf {
        &self.carrier
    }

    pub fn table(&self, op: usize) -> &OpTable {
        &self.tables[op]
    }

    pub fn tables(&self) -> &[OpTable] {
        &self.tables
    }

    /// Applies `σ` to a flat binding, or `None` if the binding is not natural.
    pub fn apply(&self, op: usize, binding: &[usize], b: Sort, c: usize) -> Option<usize> {
        let t = &self.tables[op];
        t.homs.index_of(binding).map(|h| t.get(h, b, c))
    }

    /// Evaluates a term under an assignment of its variables. Returns `None`
    /// if some binding evaluates to a non-natural family.
    pub fn eval(&self, t: &Term, phi: &dyn Fn(Sort, usize) -> usize) -> Option<usize> {
        let mut memo = HashMap::new();
        self.eval_rec(t, phi, &mut memo)
    }

    fn eval_rec(&self, t: &Term, phi: &dyn Fn(Sort, usize) -> usize, memo: &mut HashMap<Term, Option<usize>>) -> Option<usize> {
        if let Some(v) = memo.get(t) {
            return *v;
        }
        let v = match t.node() {
            TermNode::Var { sort, id } => Some(phi(*sort, *id)),
            TermNode::App { op, binding, param } => {
                let mut flat = Vec::with_capacity(binding.iter().map(|r| r.len()).sum());
                let mut ok = true;
                for s in binding.iter().flatten() {
                    match self.eval_rec(s, phi, memo) {
                        Some(v) => flat.push(v),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    self.apply(*op, &flat, param.0, param.1)
                } else {
                    None
                }
            }
        };
        memo.insert(t.clone(), v);
        v
    }

    /// Evaluates under a flat assignment over the variable object `j`.
    pub fn evaluate(&self, t: &Term, j: &Presheaf, phi: &[usize]) -> Option<usize> {
        self.eval(t, &|b, x| phi[j.flat(b, x)])
    }
}

/// Evaluates `t` under the flat assignment `phi: J → A`.
pub fn evaluate(t: &Term, a: &Algebra, j: &Presheaf, phi: &[usize]) -> Result<usize> {
    a.evaluate(t, j, phi)
        .ok_or_else(|| Error::NotNatural("a binding evaluates to a non-natural family".into()))
}

/// A failed equation instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub equation: String,
    pub assignment: Vec<usize>,
    pub sort: Sort,
    pub param: usize,
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<usize>| v.map_or("undefined".to_string(), |v| v.to_string());
        write!(
            f,
            "φ={:?} param=({},{}) lhs={} rhs={}",
            self.assignment,
            self.sort,
            self.param,
            show(self.lhs),
            show(self.rhs)
        )
    }
}

/// The first instance of `e` that fails in `a`, in canonical order.
pub fn first_violation(a: &Algebra, e: &Equation) -> Result<Option<Violation>> {
    let j = e.arity();
    let homs = HomSet::new(j, a.carrier())?;
    let mut phi = vec![0; homs.stride()];
    for i in 0..homs.len() {
        homs.get_into(i, &mut phi);
        let look = |b: Sort, x: usize| phi[j.flat(b, x)];
        let mut memo = HashMap::new();
        for (b, c) in e.param().elements() {
            let l = a.eval_rec(e.lhs.component(b, c), &look, &mut memo);
            let r = a.eval_rec(e.rhs.component(b, c), &look, &mut memo);
            if l.is_none() || r.is_none() || l != r {
                return Ok(Some(Violation {
                    equation: e.name.clone(),
                    assignment: phi.clone(),
                    sort: b,
                    param: c,
                    lhs: l,
                    rhs: r,
                }));
            }
        }
    }
    Ok(None)
}

pub fn satisfies(a: &Algebra, e: &Equation) -> bool {
    matches!(first_violation(a, e), Ok(None))
}

/// True iff `f` commutes with every operation.
pub fn is_homomorphism(f: &PresheafMorphism, a: &Algebra, b: &Algebra) -> bool {
    if f.source() != a.carrier() || f.target() != b.carrier() {
        return false;
    }
    let sig = a.signature();
    for (op, s) in sig.symbols().iter().enumerate() {
        let ta = a.table(op);
        let hs = ta.homs();
        let mut flat = vec![0; hs.stride()];
        for h in 0..hs.len() {
            hs.get_into(h, &mut flat);
            let image: Vec<usize> = (0..flat.len())
                .map(|p| {
                    let (sort, _) = s.arity.unflat(p);
                    f.apply(sort, flat[p])
                })
                .collect();
            let Some(hb) = b.table(op).homs().index_of(&image) else {
                return false;
            };
            for (sort, c) in s.param.elements() {
                if f.apply(sort, ta.get(h, sort, c)) != b.table(op).get(hb, sort, c) {
                    return false;
                }
            }
        }
    }
    true
}

/// True iff a bijective homomorphism `a → b` exists.
pub fn are_isomorphic(a: &Algebra, b: &Algebra) -> Result<bool> {
    if a.carrier().sizes() != b.carrier().sizes() {
        return Ok(false);
    }
    let hs = HomSet::new(a.carrier(), b.carrier())?;
    for i in 0..hs.len() {
        let f = hs.morphism(i);
        if f.is_bijective() && is_homomorphism(&f, a, b) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Keeps the first algebra of each isomorphism class, in input order.
pub fn iso_representatives(algebras: &[Algebra]) -> Result<Vec<Algebra>> {
    let mut reps: Vec<Algebra> = Vec::new();
    for a in algebras {
        let mut found = false;
        for r in &reps {
            if are_isomorphic(r, a)? {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(a.clone());
        }
    }
    Ok(reps)
}

/// All presheaves over `index` with the given sort sizes, in lexicographic
/// order of their action tables.
pub fn presheaves_with_sizes(index: &Arc<IndexCategory>, sizes: &[usize]) -> Vec<Presheaf> {
    let maps: Vec<(usize, usize)> = index
        .non_identities()
        .map(|u| (sizes[index.morphism(u).source], sizes[index.morphism(u).target]))
        .collect();
    let digits: Vec<usize> = maps.iter().flat_map(|&(s, t)| std::iter::repeat(t).take(s)).collect();
    if digits.iter().any(|&d| d == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = vec![0; digits.len()];
    loop {
        let mut tables = Vec::new();
        let mut pos = 0;
        for &(s, _) in &maps {
            tables.push(current[pos..pos + s].to_vec());
            pos += s;
        }
        if let Ok(p) = Presheaf::new(index, sizes.to_vec(), tables) {
            out.push(p);
        }
        let mut k = digits.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            current[k] += 1;
            if current[k] < digits[k] {
                break;
            }
            current[k] = 0;
        }
    }
}

/// All carriers with `|A(b)| ≤ bounds[b]`, ordered by size vector and then
/// by action tables.
pub fn carriers_up_to(index: &Arc<IndexCategory>, bounds: &[usize]) -> Vec<Presheaf> {
    let mut out = Vec::new();
    let mut sizes = vec![0; bounds.len()];
    loop {
        out.extend(presheaves_with_sizes(index, &sizes));
        let mut k = bounds.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            sizes[k] += 1;
            if sizes[k] <= bounds[k] {
                break;
            }
            sizes[k] = 0;
        }
    }
}

const UNSET: usize = usize::MAX;

enum Partial {
    Value(usize),
    Blocked(usize),
    Ill,
}

struct Instance {
    eq: usize,
    phi: Vec<usize>,
    sort: Sort,
    param: usize,
}

struct Layout {
    homs: Vec<Arc<HomSet>>,
    base: Vec<usize>,
    /// For each entry: its sort.
    sort: Vec<Sort>,
}

/// Backtracking search for operation tables on a fixed carrier.
struct Search<'a> {
    sig: &'a Arc<FreeFormSignature>,
    carrier: &'a Presheaf,
    equations: &'a [Equation],
    layout: Layout,
    checks: Vec<Vec<(usize, usize, usize)>>,
    instances: Vec<Instance>,
    buckets: Vec<Vec<usize>>,
    vals: Vec<usize>,
    explored: &'a mut u64,
    ceiling: u64,
    projected: String,
    found: Vec<Algebra>,
}

impl<'a> Search<'a> {
    fn peval(&self, t: &Term, phi: &[usize], j: &Presheaf) -> Partial {
        match t.node() {
            TermNode::Var { sort, id } => Partial::Value(phi[j.flat(*sort, *id)]),
            TermNode::App { op, binding, param } => {
                let mut flat = Vec::with_capacity(binding.iter().map(|r| r.len()).sum());
                for s in binding.iter().flatten() {
                    match self.peval(s, phi, j) {
                        Partial::Value(v) => flat.push(v),
                        other => return other,
                    }
                }
                let Some(h) = self.layout.homs[*op].index_of(&flat) else {
                    return Partial::Ill;
                };
                let p = &self.sig.symbol(*op).param;
                let e = self.layout.base[*op] + h * p.total() + p.flat(param.0, param.1);
                match self.vals[e] {
                    UNSET => Partial::Blocked(e),
                    v => Partial::Value(v),
                }
            }
        }
    }

    /// Re-examines an instance. `Ok(Some(e))` means it is now waiting on `e`.
    fn examine(&self, i: usize) -> std::result::Result<Option<usize>, ()> {
        let inst = &self.instances[i];
        let eq = &self.equations[inst.eq];
        let j = eq.arity();
        let l = self.peval(eq.lhs.component(inst.sort, inst.param), &inst.phi, j);
        let l = match l {
            Partial::Value(v) => v,
            Partial::Blocked(e) => return Ok(Some(e)),
            Partial::Ill => return Err(()),
        };
        match self.peval(eq.rhs.component(inst.sort, inst.param), &inst.phi, j) {
            Partial::Value(r) if r == l => Ok(None),
            Partial::Value(_) | Partial::Ill => Err(()),
            Partial::Blocked(e) => Ok(Some(e)),
        }
    }

    fn run(&mut self, i: usize) -> Result<()> {
        if i == self.vals.len() {
            let mut tables = Vec::with_capacity(self.sig.len());
            for op in 0..self.sig.len() {
                let end = if op + 1 < self.sig.len() {
                    self.layout.base[op + 1]
                } else {
                    self.vals.len()
                };
                tables.push(self.vals[self.layout.base[op]..end].to_vec());
            }
            let a = Algebra::with_homs(self.sig, self.carrier, self.layout.homs.clone(), tables)
                .map_err(|e| Error::Internal(format!("search produced an invalid algebra: {e}")))?;
            self.found.push(a);
            return Ok(());
        }
        let b = self.layout.sort[i];
        for v in 0..self.carrier.size(b) {
            *self.explored += 1;
            if *self.explored > self.ceiling {
                return Err(Error::Ceiling {
                    explored: *self.explored,
                    ceiling: self.ceiling,
                    projected: self.projected.clone(),
                });
            }
            self.vals[i] = v;
            let natural = self.checks[i]
                .iter()
                .all(|&(from, to, u)| self.carrier.act(u, self.vals[from]) == self.vals[to]);
            if !natural {
                continue;
            }
            let mut moved: Vec<usize> = Vec::new();
            let mut ok = true;
            let pending = std::mem::take(&mut self.buckets[i]);
            for &k in &pending {
                match self.examine(k) {
                    Ok(None) => {}
                    Ok(Some(e)) => {
                        self.buckets[e].push(k);
                        moved.push(e);
                    }
                    Err(()) => {
                        ok = false;
                        break;
                    }
                }
            }
            let result = if ok { self.run(i + 1) } else { Ok(()) };
            for &e in moved.iter().rev() {
                self.buckets[e].pop();
            }
            self.buckets[i] = pending;
            result?;
        }
        self.vals[i] = UNSET;
        Ok(())
    }
}

fn search_on(
    sig: &Arc<FreeFormSignature>,
    equations: &[Equation],
    carrier: &Presheaf,
    explored: &mut u64,
    ceiling: u64,
) -> Result<Vec<Algebra>> {
    let index = sig.index();
    let homs = operation_homs(sig, carrier)?;
    let mut base = Vec::with_capacity(sig.len());
    let mut sort = Vec::new();
    for (op, s) in sig.symbols().iter().enumerate() {
        base.push(sort.len());
        for _ in 0..homs[op].len() {
            for (b, _) in s.param.elements() {
                sort.push(b);
            }
        }
    }
    let n = sort.len();
    let mut checks = vec![Vec::new(); n];
    for (op, s) in sig.symbols().iter().enumerate() {
        let p = &s.param;
        for h in 0..homs[op].len() {
            for (b, c) in p.elements() {
                let e1 = base[op] + h * p.total() + p.flat(b, c);
                for &u in index.out_of(b) {
                    let m = index.morphism(u);
                    let e2 = base[op] + h * p.total() + p.flat(m.target, p.act(u, c));
                    checks[e1.max(e2)].push((e1, e2, u));
                }
            }
        }
    }
    let log_space: f64 = sort.iter().map(|&b| (carrier.size(b).max(1) as f64).log10()).sum();
    let mut search = Search {
        sig,
        carrier,
        equations,
        layout: Layout { homs, base, sort },
        checks,
        instances: Vec::new(),
        buckets: vec![Vec::new(); n],
        vals: vec![UNSET; n],
        explored,
        ceiling,
        projected: format!("10^{log_space:.1}"),
        found: Vec::new(),
    };
    for (k, e) in equations.iter().enumerate() {
        if e.arity().index() != index {
            return Err(Error::MismatchedIndex);
        }
        let hs = HomSet::new(e.arity(), carrier)?;
        for i in 0..hs.len() {
            let phi = hs.get(i);
            for (b, c) in e.param().elements() {
                search.instances.push(Instance {
                    eq: k,
                    phi: phi.clone(),
                    sort: b,
                    param: c,
                });
            }
        }
    }
    for k in 0..search.instances.len() {
        match search.examine(k) {
            Ok(None) => {}
            Ok(Some(e)) => search.buckets[e].push(k),
            Err(()) => return Ok(Vec::new()),
        }
    }
    // Recursion depth equals the number of table entries.
    let stack = (8 << 20) + n * 1024;
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(stack)
            .spawn_scoped(scope, move || search.run(0).map(|()| search.found))
            .map_err(|e| Error::Internal(format!("cannot spawn search thread: {e}")))?
            .join()
            .unwrap_or_else(|panic| std::panic::resume_unwind(panic))
    })
}

/// All algebras on a fixed carrier satisfying `equations`, in lexicographic
/// order of their concatenated tables.
pub fn enumerate_on(sig: &Arc<FreeFormSignature>, equations: &[Equation], carrier: &Presheaf, ceiling: u64) -> Result<Vec<Algebra>> {
    let mut explored = 0;
    search_on(sig, equations, carrier, &mut explored, ceiling)
}

/// All algebras satisfying `equations` on carriers with `|A(b)| ≤ bounds[b]`.
/// The ceiling bounds the total number of search nodes across carriers.
pub fn enumerate_algebras(
    sig: &Arc<FreeFormSignature>,
    equations: &[Equation],
    bounds: &[usize],
    ceiling: u64,
) -> Result<Vec<Algebra>> {
    if bounds.len() != sig.index().object_count() {
        return Err(Error::Shape("one size bound per sort is required".into()));
    }
    let mut explored = 0;
    let mut out = Vec::new();
    for carrier in carriers_up_to(sig.index(), bounds) {
        out.extend(search_on(sig, equations, &carrier, &mut explored, ceiling)?);
    }
    Ok(out)
}

/// Values of every term of depth at most `d` under every assignment.
pub struct InterpretationTable {
    pub universe: TermUniverse,
    pub assignments: HomSet,
    /// `rows[sort][position][assignment]`.
    pub rows: Vec<Vec<Vec<usize>>>,
}

impl InterpretationTable {
    pub fn row(&self, t: &Term) -> Option<&[usize]> {
        self.universe.position(t).map(|p| self.rows[t.sort()][p].as_slice())
    }
}

pub fn interpretation_table(a: &Algebra, j: &Presheaf, d: usize) -> Result<InterpretationTable> {
    let universe = enumerate_terms(a.signature(), j, d)?;
    interpretation_table_for(a, universe)
}

/// Interprets an already enumerated universe.
pub fn interpretation_table_for(a: &Algebra, universe: TermUniverse) -> Result<InterpretationTable> {
    let j = universe.vars().clone();
    let assignments = HomSet::new(&j, a.carrier())?;
    let n = j.index().object_count();
    let mut rows: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|b| vec![Vec::with_capacity(assignments.len()); universe.terms(b).len()])
        .collect();
    let mut phi = vec![0; assignments.stride()];
    let mut values: Vec<Vec<usize>> = (0..n).map(|b| vec![0; universe.terms(b).len()]).collect();
    let mut order: Vec<&Term> = universe.all_terms().collect();
    order.sort_by_key(|t| t.depth());
    for i in 0..assignments.len() {
        assignments.get_into(i, &mut phi);
        for t in &order {
            let p = universe.position(t).expect("universe term");
            let v = match t.node() {
                TermNode::Var { sort, id } => phi[j.flat(*sort, *id)],
                TermNode::App { op, binding, param } => {
                    let flat: Vec<usize> = binding
                        .iter()
                        .flatten()
                        .map(|s| values[s.sort()][universe.position(s).expect("subterm in universe")])
                        .collect();
                    a.apply(*op, &flat, param.0, param.1)
                        .ok_or_else(|| Error::Internal("natural term evaluated to a non-natural binding".into()))?
                }
            };
            values[t.sort()][p] = v;
        }
        for b in 0..n {
            for (p, row) in rows[b].iter_mut().enumerate() {
                row.push(values[b][p]);
            }
        }
    }
    Ok(InterpretationTable {
        universe,
        assignments,
        rows,
    })
}

/// Re-expresses an algebra over the bundled signature of a standardization.
pub fn bundle(a: &Algebra, st: &Standardization, target: &Arc<FreeFormSignature>) -> Result<Algebra> {
    let sig = a.signature();
    Algebra::from_fn(target, a.carrier(), |slot, flat, b, c| {
        for (i, ins) in st.insertions.iter().enumerate() {
            if st.slot[i] != slot {
                continue;
            }
            if let Some(orig) = ins.component(b).iter().position(|&y| y == c) {
                return a.apply(i, flat, b, orig).expect("same arity");
            }
        }
        unreachable!("coproduct insertions are jointly surjective for {}", sig.len())
    })
}

/// Inverse of [`bundle`].
pub fn unbundle(a: &Algebra, st: &Standardization, original: &Arc<FreeFormSignature>) -> Result<Algebra> {
    Algebra::from_fn(original, a.carrier(), |op, flat, b, c| {
        a.apply(st.slot[op], flat, b, st.insertions[op].apply(b, c)).expect("same arity")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::IndexCategory;
    use crate::syntax::{ParamTerm, Symbol};

    fn binary_sig() -> Arc<FreeFormSignature> {
        FreeFormSignature::new(
            &IndexCategory::point(),
            vec![Symbol {
                name: "mul".into(),
                arity: Presheaf::set(2),
                param: Presheaf::set(1),
            }],
        )
        .unwrap()
    }

    fn op(a: Term, b: Term) -> Term {
        Term::app(0, vec![vec![a, b]], (0, 0))
    }

    fn x(i: usize) -> Term {
        Term::var(0, i)
    }

    fn eq(sig: &FreeFormSignature, name: &str, n: usize, l: Term, r: Term) -> Equation {
        let j = Presheaf::set(n);
        Equation::new(
            sig,
            name,
            ParamTerm::single(sig, &j, l).unwrap(),
            ParamTerm::single(sig, &j, r).unwrap(),
        )
        .unwrap()
    }

    fn table(sig: &Arc<FreeFormSignature>, n: usize, t: &[usize]) -> Algebra {
        Algebra::new(sig, &Presheaf::set(n), vec![t.to_vec()]).unwrap()
    }

    #[test]
    fn evaluation_and_satisfaction() {
        let sig = binary_sig();
        let chain = table(&sig, 2, &[0, 1, 1, 1]);
        let comm = eq(&sig, "comm", 2, op(x(0), x(1)), op(x(1), x(0)));
        assert!(satisfies(&chain, &comm));
        let groupoid = table(&sig, 2, &[0, 0, 1, 0]);
        let v = first_violation(&groupoid, &comm).unwrap().unwrap();
        assert_eq!(v.assignment, vec![0, 1]);
        let refl = eq(&sig, "refl", 2, op(x(0), x(1)), op(x(0), x(1)));
        assert!(satisfies(&groupoid, &refl));
        let idem = op(x(0), x(0));
        assert_eq!(chain.evaluate(&idem, &Presheaf::set(1), &[1]), Some(1));
    }

    #[test]
    fn homomorphisms() {
        let sig = binary_sig();
        let chain = table(&sig, 2, &[0, 1, 1, 1]);
        let id = PresheafMorphism::identity(chain.carrier());
        assert!(is_homomorphism(&id, &chain, &chain));
        let nonidem = table(&sig, 2, &[1, 0, 0, 1]);
        let constant = PresheafMorphism::new(&Presheaf::set(2), &Presheaf::set(2), vec![vec![0, 0]]).unwrap();
        assert!(!is_homomorphism(&constant, &chain, &nonidem));
    }

    #[test]
    fn semilattice_counts_match_a_table_filter() {
        let sig = binary_sig();
        let eqs = vec![
            eq(&sig, "assoc", 3, op(op(x(0), x(1)), x(2)), op(x(0), op(x(1), x(2)))),
            eq(&sig, "comm", 2, op(x(0), x(1)), op(x(1), x(0))),
            eq(&sig, "idem", 1, op(x(0), x(0)), x(0)),
        ];
        for n in 0..=3usize {
            let found = enumerate_on(&sig, &eqs, &Presheaf::set(n), DEFAULT_CEILING).unwrap();
            let mut direct = 0;
            let total = n.pow((n * n) as u32);
            for mut code in 0..total {
                let mut t = vec![0; n * n];
                for k in (0..n * n).rev() {
                    t[k] = code % n;
                    code /= n;
                }
                let f = |a: usize, b: usize| t[a * n + b];
                let ok = (0..n).all(|a| f(a, a) == a)
                    && (0..n).all(|a| (0..n).all(|b| f(a, b) == f(b, a)))
                    && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| f(f(a, b), c) == f(a, f(b, c)))));
                if ok {
                    direct += 1;
                }
            }
            assert_eq!(found.len(), if n == 0 { 1 } else { direct });
        }
        assert_eq!(enumerate_algebras(&sig, &eqs, &[1], DEFAULT_CEILING).unwrap().len(), 2);
    }

    #[test]
    fn empty_signature_has_one_algebra_per_carrier() {
        let sig = FreeFormSignature::new(&IndexCategory::point(), vec![]).unwrap();
        assert_eq!(enumerate_algebras(&sig, &[], &[3], DEFAULT_CEILING).unwrap().len(), 4);
        let pair = IndexCategory::parallel_pair();
        let sig = FreeFormSignature::new(&pair, vec![]).unwrap();
        // graphs with ≤ 1 vertex and ≤ 1 edge: (0,0), (1,0), (1,1)
        assert_eq!(enumerate_algebras(&sig, &[], &[1, 1], DEFAULT_CEILING).unwrap().len(), 3);
    }

    #[test]
    fn ceiling_is_enforced() {
        let sig = binary_sig();
        let err = enumerate_on(&sig, &[], &Presheaf::set(3), 100).unwrap_err();
        assert!(matches!(err, Error::Ceiling { .. }));
    }

    #[test]
    fn interpretation_rows() {
        let sig = binary_sig();
        let chain = table(&sig, 2, &[0, 1, 1, 1]);
        let it = interpretation_table(&chain, &Presheaf::set(2), 1).unwrap();
        assert_eq!(it.row(&x(0)).unwrap(), &[0, 0, 1, 1]);
        assert_eq!(it.row(&op(x(0), x(1))).unwrap(), it.row(&op(x(1), x(0))).unwrap());
    }

    #[test]
    fn isomorphism_reduction() {
        let sig = binary_sig();
        let all = enumerate_on(&sig, &[], &Presheaf::set(2), DEFAULT_CEILING).unwrap();
        assert_eq!(all.len(), 16);
        assert_eq!(iso_representatives(&all).unwrap().len(), 10);
    }
}
