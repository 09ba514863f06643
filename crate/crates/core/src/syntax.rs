//! Free-form signatures, sorted terms, parametrized terms and equations.
//!
//! Terms are hash-consed: two terms are equal exactly when they are the same
//! interned node, so equality and hashing are pointer operations. The
//! ordering on terms is structural (depth first) and therefore stable across
//! runs.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use crate::base::{coproduct_all, HomSet, IndexCategory, MorphismId, Presheaf, PresheafMorphism, Sort};
use crate::error::{Error, Result};

/// An operation symbol with its arity and parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: Presheaf,
    pub param: Presheaf,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeFormSignature {
    index: Arc<IndexCategory>,
    symbols: Vec<Symbol>,
}

impl FreeFormSignature {
    pub fn new(index: &Arc<IndexCategory>, symbols: Vec<Symbol>) -> Result<Arc<Self>> {
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::Signature(format!("duplicate symbol {}", s.name)));
            }
            if s.arity.index() != index || s.param.index() != index {
                return Err(Error::Signature(format!(
                    "symbol {} lives over a different index category",
                    s.name
                )));
            }
        }
        Ok(Arc::new(FreeFormSignature {
            index: index.clone(),
            symbols,
        }))
    }

    pub fn index(&self) -> &Arc<IndexCategory> {
        &self.index
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, op: usize) -> &Symbol {
        &self.symbols[op]
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

/// One parameter object per distinct arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraditionalSignature {
    pub index: Arc<IndexCategory>,
    pub arities: Vec<Presheaf>,
    pub params: Vec<Presheaf>,
}

/// The result of bundling a free-form signature by arity.
#[derive(Debug, Clone)]
pub struct Standardization {
    pub traditional: TraditionalSignature,
    /// For each symbol, the arity slot it was bundled into.
    pub slot: Vec<usize>,
    /// For each symbol, the insertion of its parameter into the bundled one.
    pub insertions: Vec<PresheafMorphism>,
}

/// Bundles symbols of equal arity into one parameter object, the coproduct
/// of their parameters in symbol order.
pub fn standardize(sig: &FreeFormSignature) -> Result<Standardization> {
    let mut arities: Vec<Presheaf> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![0; sig.len()];
    for (i, s) in sig.symbols().iter().enumerate() {
        let k = match arities.iter().position(|a| *a == s.arity) {
            Some(k) => k,
            None => {
                arities.push(s.arity.clone());
                members.push(Vec::new());
                arities.len() - 1
            }
        };
        members[k].push(i);
        slot[i] = k;
    }
    let mut params = Vec::new();
    let mut insertions: Vec<Option<PresheafMorphism>> = vec![None; sig.len()];
    for m in &members {
        let family: Vec<Presheaf> = m.iter().map(|&i| sig.symbol(i).param.clone()).collect();
        let c = coproduct_all(sig.index(), &family)?;
        for (j, &i) in m.iter().enumerate() {
            insertions[i] = Some(c.injections[j].clone());
        }
        params.push(c.object);
    }
    Ok(Standardization {
        traditional: TraditionalSignature {
            index: sig.index().clone(),
            arities,
            params,
        },
        slot,
        insertions: insertions.into_iter().map(|x| x.expect("every symbol bundled")).collect(),
    })
}

/// One symbol `op<k>` per arity slot, with the slot's parameter.
pub fn from_traditional(t: &TraditionalSignature) -> Result<Arc<FreeFormSignature>> {
    for (i, a) in t.arities.iter().enumerate() {
        if t.arities[..i].contains(a) {
            return Err(Error::Signature("arity objects must be pairwise distinct".into()));
        }
    }
    let symbols = t
        .arities
        .iter()
        .zip(&t.params)
        .enumerate()
        .map(|(k, (a, p))| Symbol {
            name: format!("op{k}"),
            arity: a.clone(),
            param: p.clone(),
        })
        .collect();
    FreeFormSignature::new(&t.index, symbols)
}

/// The shape of a term node.
#[derive(Debug, PartialEq, Eq, Hash)]
pub enum TermNode {
    Var {
        sort: Sort,
        id: usize,
    },
    /// `binding[b][x]` is the argument at element `x` of sort `b` of the arity.
    App {
        op: usize,
        binding: Vec<Vec<Term>>,
        param: (Sort, usize),
    },
}

struct TermData {
    node: TermNode,
    depth: u32,
}

impl PartialEq for TermData {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl Eq for TermData {}

impl Hash for TermData {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.node.hash(state)
    }
}

struct Interned(Arc<TermData>);

impl PartialEq for Interned {
    fn eq(&self, other: &Self) -> bool {
        self.0.node == other.0.node
    }
}

impl Eq for Interned {}

impl Hash for Interned {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.node.hash(state)
    }
}

impl Borrow<TermNode> for Interned {
    fn borrow(&self) -> &TermNode {
        &self.0.node
    }
}

fn interner() -> &'static Mutex<HashSet<Interned>> {
    static TABLE: OnceLock<Mutex<HashSet<Interned>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashSet::new()))
}

/// An interned term. The variable object is carried by the context.
#[derive(Clone)]
pub struct Term(Arc<TermData>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state)
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.depth().cmp(&other.depth()).then_with(|| match (self.node(), other.node()) {
            (TermNode::Var { sort: a, id: x }, TermNode::Var { sort: b, id: y }) => (a, x).cmp(&(b, y)),
            (TermNode::Var { .. }, TermNode::App { .. }) => Ordering::Less,
            (TermNode::App { .. }, TermNode::Var { .. }) => Ordering::Greater,
            (
                TermNode::App {
                    op: o1,
                    binding: h1,
                    param: p1,
                },
                TermNode::App {
                    op: o2,
                    binding: h2,
                    param: p2,
                },
            ) => o1.cmp(o2).then(p1.cmp(p2)).then_with(|| h1.cmp(h2)),
        })
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            TermNode::Var { sort, id } => write!(f, "v{sort}.{id}"),
            TermNode::App { op, binding, param } => {
                write!(f, "s{op}[")?;
                for (b, row) in binding.iter().enumerate() {
                    if b > 0 {
                        write!(f, "|")?;
                    }
                    for (i, t) in row.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{t:?}")?;
                    }
                }
                write!(f, "]@{}.{}", param.0, param.1)
            }
        }
    }
}

impl Term {
    fn intern(node: TermNode) -> Term {
        let mut table = interner().lock().expect("term table");
        if let Some(t) = table.get(&node) {
            return Term(t.0.clone());
        }
        let depth = match &node {
            TermNode::Var { .. } => 0,
            TermNode::App { binding, .. } => {
                1 + binding.iter().flatten().map(|t| t.0.depth).max().unwrap_or(0)
            }
        };
        let data = Arc::new(TermData { node, depth });
        table.insert(Interned(data.clone()));
        Term(data)
    }

    pub fn var(sort: Sort, id: usize) -> Term {
        Term::intern(TermNode::Var { sort, id })
    }

    /// Builds an application without checking its binding for naturality.
    pub fn app(op: usize, binding: Vec<Vec<Term>>, param: (Sort, usize)) -> Term {
        Term::intern(TermNode::App { op, binding, param })
    }

    /// The identity binding of a variable object: `x ↦ Var(x)`.
    pub fn vars_of(j: &Presheaf) -> Vec<Vec<Term>> {
        j.sizes()
            .iter()
            .enumerate()
            .map(|(b, &n)| (0..n).map(|x| Term::var(b, x)).collect())
            .collect()
    }

    pub fn node(&self) -> &TermNode {
        &self.0.node
    }

    pub fn depth(&self) -> usize {
        self.0.depth as usize
    }

    pub fn sort(&self) -> Sort {
        match self.node() {
            TermNode::Var { sort, .. } => *sort,
            TermNode::App { param, .. } => param.0,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self.node(), TermNode::Var { .. })
    }

    /// Variables occurring in the term.
    pub fn variables(&self) -> BTreeSet<(Sort, usize)> {
        let mut out = BTreeSet::new();
        let mut seen = HashSet::new();
        self.collect_vars(&mut out, &mut seen);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<(Sort, usize)>, seen: &mut HashSet<Term>) {
        if !seen.insert(self.clone()) {
            return;
        }
        match self.node() {
            TermNode::Var { sort, id } => {
                out.insert((*sort, *id));
            }
            TermNode::App { binding, .. } => {
                for t in binding.iter().flatten() {
                    t.collect_vars(out, seen);
                }
            }
        }
    }

    /// Checks sorts, table shapes and variable bounds, but not naturality.
    pub fn check_shape(&self, sig: &FreeFormSignature, vars: &Presheaf) -> Result<()> {
        let mut seen = HashSet::new();
        self.check_shape_rec(sig, vars, &mut seen)
    }

    fn check_shape_rec(&self, sig: &FreeFormSignature, vars: &Presheaf, seen: &mut HashSet<Term>) -> Result<()> {
        if !seen.insert(self.clone()) {
            return Ok(());
        }
        match self.node() {
            TermNode::Var { sort, id } => {
                if *sort >= vars.sizes().len() || *id >= vars.size(*sort) {
                    return Err(Error::Term(format!("variable {sort}.{id} is out of range")));
                }
            }
            TermNode::App { op, binding, param } => {
                if *op >= sig.len() {
                    return Err(Error::Term(format!("unknown symbol index {op}")));
                }
                let s = sig.symbol(*op);
                if param.0 >= s.param.sizes().len() || param.1 >= s.param.size(param.0) {
                    return Err(Error::Term(format!("parameter out of range for {}", s.name)));
                }
                if binding.len() != s.arity.sizes().len() {
                    return Err(Error::Term(format!("binding of {} has the wrong number of sorts", s.name)));
                }
                for (b, row) in binding.iter().enumerate() {
                    if row.len() != s.arity.size(b) {
                        return Err(Error::Term(format!("binding of {} has the wrong size", s.name)));
                    }
                    for t in row {
                        if t.sort() != b {
                            return Err(Error::Term(format!("binding of {} is ill-sorted", s.name)));
                        }
                        t.check_shape_rec(sig, vars, seen)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// True when every binding in the term is a natural family.
    pub fn is_natural(&self, sig: &FreeFormSignature, vars: &Presheaf) -> bool {
        let mut seen = HashSet::new();
        self.is_natural_rec(sig, vars, &mut seen)
    }

    fn is_natural_rec(&self, sig: &FreeFormSignature, vars: &Presheaf, seen: &mut HashSet<Term>) -> bool {
        if !seen.insert(self.clone()) {
            return true;
        }
        let TermNode::App { op, binding, .. } = self.node() else {
            return true;
        };
        let arity = &sig.symbol(*op).arity;
        let index = sig.index();
        for u in index.non_identities() {
            let m = index.morphism(u);
            for x in 0..arity.size(m.source) {
                if binding[m.target][arity.act(u, x)] != act(sig, vars, u, &binding[m.source][x]) {
                    return false;
                }
            }
        }
        binding.iter().flatten().all(|t| t.is_natural_rec(sig, vars, seen))
    }

    /// Shape and naturality together.
    pub fn validate(&self, sig: &FreeFormSignature, vars: &Presheaf) -> Result<()> {
        self.check_shape(sig, vars)?;
        if !self.is_natural(sig, vars) {
            return Err(Error::Term("binding is not a natural family".into()));
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, sig: &'a FreeFormSignature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

/// Renders a term in the file syntax; arguments follow the flat order of
/// the arity.
pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a FreeFormSignature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let index = self.sig.index();
        match self.term.node() {
            TermNode::Var { sort, id } => write!(f, "(var {} {})", index.object_name(*sort), id),
            TermNode::App { op, binding, param } => {
                write!(f, "(app {} (", self.sig.symbol(*op).name)?;
                for (i, t) in binding.iter().flatten().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", t.display(self.sig))?;
                }
                write!(f, ") ({} {}))", index.object_name(param.0), param.1)
            }
        }
    }
}

/// Kleisli extension: replaces each variable by its image under `phi`.
pub fn substitute_with(t: &Term, phi: &dyn Fn(Sort, usize) -> Term) -> Term {
    let mut memo = HashMap::new();
    subst_rec(t, phi, &mut memo)
}

fn subst_rec(t: &Term, phi: &dyn Fn(Sort, usize) -> Term, memo: &mut HashMap<Term, Term>) -> Term {
    if let Some(r) = memo.get(t) {
        return r.clone();
    }
    let r = match t.node() {
        TermNode::Var { sort, id } => phi(*sort, *id),
        TermNode::App { op, binding, param } => {
            let binding = binding
                .iter()
                .map(|row| row.iter().map(|s| subst_rec(s, phi, memo)).collect())
                .collect();
            Term::app(*op, binding, *param)
        }
    };
    memo.insert(t.clone(), r.clone());
    r
}

/// Substitutes along a per-sort table of terms.
pub fn substitute(t: &Term, phi: &[Vec<Term>]) -> Term {
    substitute_with(t, &|b, x| phi[b][x].clone())
}

/// The action of an index morphism `u: b → b'` on a term of sort `b`.
pub fn act(sig: &FreeFormSignature, vars: &Presheaf, u: MorphismId, t: &Term) -> Term {
    let index = sig.index();
    if index.is_identity(u) {
        return t.clone();
    }
    let m = index.morphism(u);
    debug_assert_eq!(t.sort(), m.source);
    match t.node() {
        TermNode::Var { id, .. } => Term::var(m.target, vars.act(u, *id)),
        TermNode::App { op, binding, param } => {
            let c = sig.symbol(*op).param.act(u, param.1);
            Term::app(*op, binding.clone(), (m.target, c))
        }
    }
}

/// All terms of depth at most `depth` over a variable object, with the
/// presheaf structure given by [`act`].
#[derive(Debug, Clone)]
pub struct TermUniverse {
    vars: Presheaf,
    depth: usize,
    terms: Vec<Vec<Term>>,
    position: HashMap<Term, usize>,
    presheaf: Presheaf,
}

impl TermUniverse {
    pub fn vars(&self) -> &Presheaf {
        &self.vars
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Terms of sort `b`, ordered by depth and then by generation order.
    pub fn terms(&self, b: Sort) -> &[Term] {
        &self.terms[b]
    }

    pub fn all_terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.terms.iter().map(|t| t.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of a term within its sort.
    pub fn position(&self, t: &Term) -> Option<usize> {
        self.position.get(t).copied()
    }

    /// The universe as a presheaf; element ids are positions.
    pub fn presheaf(&self) -> &Presheaf {
        &self.presheaf
    }
}

fn universe_presheaf(sig: &FreeFormSignature, vars: &Presheaf, terms: &[Vec<Term>], position: &HashMap<Term, usize>) -> Presheaf {
    let index = sig.index();
    let maps = index
        .non_identities()
        .map(|u| {
            let m = index.morphism(u);
            terms[m.source]
                .iter()
                .map(|t| position[&act(sig, vars, u, t)])
                .collect()
        })
        .collect();
    Presheaf::new(index, terms.iter().map(|t| t.len()).collect(), maps).expect("term universe is a presheaf")
}

/// Enumerates all terms of depth at most `depth` over `vars`. Level `k` lists,
/// for each symbol in order, each natural binding into the level `k−1`
/// universe whose deepest argument has depth `k−1`, and each parameter.
pub fn enumerate_terms(sig: &FreeFormSignature, vars: &Presheaf, depth: usize) -> Result<TermUniverse> {
    let n = sig.index().object_count();
    let mut terms: Vec<Vec<Term>> = Term::vars_of(vars);
    let mut position: HashMap<Term, usize> = HashMap::new();
    for row in &terms {
        for (i, t) in row.iter().enumerate() {
            position.insert(t.clone(), i);
        }
    }
    let mut presheaf = universe_presheaf(sig, vars, &terms, &position);
    for level in 1..=depth {
        let mut fresh: Vec<Vec<Term>> = vec![Vec::new(); n];
        for (op, s) in sig.symbols().iter().enumerate() {
            let homs = HomSet::new(&s.arity, &presheaf)?;
            let mut flat = vec![0; homs.stride()];
            for i in 0..homs.len() {
                homs.get_into(i, &mut flat);
                let binding: Vec<Vec<Term>> = (0..n)
                    .map(|b| {
                        (0..s.arity.size(b))
                            .map(|x| terms[b][flat[s.arity.flat(b, x)]].clone())
                            .collect()
                    })
                    .collect();
                let max = binding.iter().flatten().map(|t| t.depth()).max();
                if max.map_or(level != 1, |d| d + 1 != level) {
                    continue;
                }
                for b in 0..n {
                    for c in 0..s.param.size(b) {
                        fresh[b].push(Term::app(op, binding.clone(), (b, c)));
                    }
                }
            }
        }
        for (b, row) in fresh.into_iter().enumerate() {
            for t in row {
                position.insert(t.clone(), terms[b].len());
                terms[b].push(t);
            }
        }
        presheaf = universe_presheaf(sig, vars, &terms, &position);
    }
    Ok(TermUniverse {
        vars: vars.clone(),
        depth,
        terms,
        position,
        presheaf,
    })
}

/// A natural family of terms `C → T_S J`: one term of sort `b` over `J` for
/// each element of `C(b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamTerm {
    arity: Presheaf,
    param: Presheaf,
    components: Vec<Vec<Term>>,
}

impl ParamTerm {
    /// Checks shapes and naturality in the parameter. Bindings inside the
    /// terms are not required to be natural; see [`ParamTerm::is_strict`].
    pub fn new(sig: &FreeFormSignature, arity: &Presheaf, param: &Presheaf, components: Vec<Vec<Term>>) -> Result<Self> {
        if arity.index() != sig.index() || param.index() != sig.index() {
            return Err(Error::MismatchedIndex);
        }
        if components.len() != param.sizes().len() {
            return Err(Error::Term("one component row per sort is required".into()));
        }
        for (b, row) in components.iter().enumerate() {
            if row.len() != param.size(b) {
                return Err(Error::Term(format!(
                    "component row for sort {} has {} terms, expected {}",
                    sig.index().object_name(b),
                    row.len(),
                    param.size(b)
                )));
            }
            for t in row {
                if t.sort() != b {
                    return Err(Error::Term("component has the wrong sort".into()));
                }
                t.check_shape(sig, arity)?;
            }
        }
        let index = sig.index();
        for u in index.non_identities() {
            let m = index.morphism(u);
            for c in 0..param.size(m.source) {
                if act(sig, arity, u, &components[m.source][c]) != components[m.target][param.act(u, c)] {
                    return Err(Error::Term(format!(
                        "family is not natural in the parameter along {}",
                        m.name
                    )));
                }
            }
        }
        Ok(ParamTerm {
            arity: arity.clone(),
            param: param.clone(),
            components,
        })
    }

    /// A single term as a family over the terminal parameter (trivial index).
    pub fn single(sig: &FreeFormSignature, arity: &Presheaf, t: Term) -> Result<Self> {
        ParamTerm::new(sig, arity, &Presheaf::terminal(sig.index()), vec![vec![t]])
    }

    pub fn arity(&self) -> &Presheaf {
        &self.arity
    }

    pub fn param(&self) -> &Presheaf {
        &self.param
    }

    pub fn components(&self) -> &[Vec<Term>] {
        &self.components
    }

    pub fn component(&self, b: Sort, c: usize) -> &Term {
        &self.components[b][c]
    }

    pub fn depth(&self) -> usize {
        self.components.iter().flatten().map(|t| t.depth()).max().unwrap_or(0)
    }

    /// True when all bindings are syntactically natural.
    pub fn is_strict(&self, sig: &FreeFormSignature) -> bool {
        self.components.iter().flatten().all(|t| t.is_natural(sig, &self.arity))
    }

    /// `t ∘ x` for `x: G → C`.
    pub fn precompose(&self, x: &PresheafMorphism) -> Result<ParamTerm> {
        if *x.target() != self.param {
            return Err(Error::Shape("precomposed map must land in the parameter".into()));
        }
        let components = x
            .components()
            .iter()
            .enumerate()
            .map(|(b, row)| row.iter().map(|&c| self.components[b][c].clone()).collect())
            .collect();
        Ok(ParamTerm {
            arity: self.arity.clone(),
            param: x.source().clone(),
            components,
        })
    }

    /// Substitutes every component along `phi`.
    pub fn substitute(&self, new_arity: &Presheaf, phi: &[Vec<Term>]) -> ParamTerm {
        ParamTerm {
            arity: new_arity.clone(),
            param: self.param.clone(),
            components: self
                .components
                .iter()
                .map(|row| row.iter().map(|t| substitute(t, phi)).collect())
                .collect(),
        }
    }

    /// Renumbers operation symbols.
    pub fn map_ops(&self, f: &dyn Fn(usize) -> usize) -> ParamTerm {
        ParamTerm {
            arity: self.arity.clone(),
            param: self.param.clone(),
            components: self
                .components
                .iter()
                .map(|row| row.iter().map(|t| map_ops(t, f)).collect())
                .collect(),
        }
    }
}

/// Renumbers the operation symbols of a term.
pub fn map_ops(t: &Term, f: &dyn Fn(usize) -> usize) -> Term {
    match t.node() {
        TermNode::Var { .. } => t.clone(),
        TermNode::App { op, binding, param } => Term::app(
            f(*op),
            binding
                .iter()
                .map(|row| row.iter().map(|s| map_ops(s, f)).collect())
                .collect(),
            *param,
        ),
    }
}

/// A parametrized equation `lhs ≐ rhs`.
///
/// A strict equation has syntactically natural bindings throughout. A
/// relative equation may contain bindings that are natural only in the
/// algebras of interest; it is satisfied by an algebra only where every
/// binding evaluates to a natural family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub name: String,
    pub lhs: ParamTerm,
    pub rhs: ParamTerm,
    pub relative: bool,
}

impl Equation {
    pub fn new(sig: &FreeFormSignature, name: &str, lhs: ParamTerm, rhs: ParamTerm) -> Result<Self> {
        Self::build(sig, name, lhs, rhs, false)
    }

    pub fn relative(sig: &FreeFormSignature, name: &str, lhs: ParamTerm, rhs: ParamTerm) -> Result<Self> {
        Self::build(sig, name, lhs, rhs, true)
    }

    fn build(sig: &FreeFormSignature, name: &str, lhs: ParamTerm, rhs: ParamTerm, relative: bool) -> Result<Self> {
        let fail = |reason: &str| Error::Equation {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        if lhs.arity != rhs.arity {
            return Err(fail("sides have different arities"));
        }
        if lhs.param != rhs.param {
            return Err(fail("sides have different parameters"));
        }
        if !relative && !(lhs.is_strict(sig) && rhs.is_strict(sig)) {
            return Err(fail("a binding is not natural; mark the equation relative if intended"));
        }
        Ok(Equation {
            name: name.to_string(),
            lhs,
            rhs,
            relative,
        })
    }

    pub fn arity(&self) -> &Presheaf {
        &self.lhs.arity
    }

    pub fn param(&self) -> &Presheaf {
        &self.lhs.param
    }

    pub fn depth(&self) -> usize {
        self.lhs.depth().max(self.rhs.depth())
    }

    /// Restricts the parameter along `x: G → C`.
    pub fn precompose(&self, x: &PresheafMorphism) -> Result<Equation> {
        Ok(Equation {
            name: self.name.clone(),
            lhs: self.lhs.precompose(x)?,
            rhs: self.rhs.precompose(x)?,
            relative: self.relative,
        })
    }

    pub fn map_ops(&self, name: &str, f: &dyn Fn(usize) -> usize) -> Equation {
        Equation {
            name: name.to_string(),
            lhs: self.lhs.map_ops(f),
            rhs: self.rhs.map_ops(f),
            relative: self.relative,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{product, IndexCategory};

    fn semilattice_sig() -> Arc<FreeFormSignature> {
        FreeFormSignature::new(
            &IndexCategory::point(),
            vec![Symbol {
                name: "join".into(),
                arity: Presheaf::set(2),
                param: Presheaf::set(1),
            }],
        )
        .unwrap()
    }

    fn join(a: Term, b: Term) -> Term {
        Term::app(0, vec![vec![a, b]], (0, 0))
    }

    #[test]
    fn interning_gives_pointer_equality() {
        let x = Term::var(0, 0);
        let y = Term::var(0, 1);
        assert_eq!(join(x.clone(), y.clone()), join(x.clone(), y.clone()));
        assert_ne!(join(x.clone(), y.clone()), join(y.clone(), x.clone()));
        assert_eq!(join(x.clone(), join(x.clone(), y)).depth(), 2);
        assert!(x < join(x.clone(), x.clone()));
    }

    #[test]
    fn term_counts_for_a_binary_symbol() {
        let sig = semilattice_sig();
        let u = enumerate_terms(&sig, &Presheaf::set(2), 0).unwrap();
        assert_eq!(u.len(), 2);
        let u = enumerate_terms(&sig, &Presheaf::set(2), 1).unwrap();
        assert_eq!(u.len(), 6);
        let u = enumerate_terms(&sig, &Presheaf::set(2), 2).unwrap();
        assert_eq!(u.len(), 2 + 36);
        let u = enumerate_terms(&sig, &Presheaf::set(1), 3).unwrap();
        assert_eq!(u.len(), 1 + 1 + 3 + 21);
        for (i, t) in u.terms(0).iter().enumerate() {
            assert_eq!(u.position(t), Some(i));
            assert!(t.validate(&sig, &Presheaf::set(1)).is_ok());
        }
        assert!(u.terms(0).windows(2).all(|w| w[0].depth() <= w[1].depth()));
    }

    #[test]
    fn substitution_unit_laws() {
        let sig = semilattice_sig();
        let j = Presheaf::set(2);
        let vars = Term::vars_of(&j);
        let u = enumerate_terms(&sig, &j, 2).unwrap();
        for t in u.all_terms() {
            assert_eq!(&substitute(t, &vars), t);
        }
        let phi = vec![vec![join(Term::var(0, 1), Term::var(0, 1)), Term::var(0, 0)]];
        assert_eq!(substitute(&Term::var(0, 0), &phi), phi[0][0]);
    }

    #[test]
    fn standardization_of_global_state() {
        let point = IndexCategory::point();
        let v = Presheaf::set(2);
        let l = Presheaf::set(1);
        let lv = product(&l, &v).unwrap().object;
        let sig = FreeFormSignature::new(
            &point,
            vec![
                Symbol {
                    name: "lookup".into(),
                    arity: v.clone(),
                    param: l.clone(),
                },
                Symbol {
                    name: "update".into(),
                    arity: Presheaf::set(1),
                    param: lv,
                },
            ],
        )
        .unwrap();
        let st = standardize(&sig).unwrap();
        assert_eq!(st.traditional.arities.len(), 2);
        assert_eq!(st.traditional.params[0].size(0), 1);
        assert_eq!(st.traditional.params[1].size(0), 2);
        let back = from_traditional(&st.traditional).unwrap();
        assert_eq!(back.len(), 2);
    }

    #[test]
    fn bundling_equal_arities() {
        let sig = FreeFormSignature::new(
            &IndexCategory::point(),
            vec![
                Symbol {
                    name: "a".into(),
                    arity: Presheaf::set(2),
                    param: Presheaf::set(2),
                },
                Symbol {
                    name: "b".into(),
                    arity: Presheaf::set(2),
                    param: Presheaf::set(3),
                },
            ],
        )
        .unwrap();
        let st = standardize(&sig).unwrap();
        assert_eq!(st.traditional.params[0].size(0), 5);
        assert_eq!(st.insertions[1].apply(0, 0), 2);
        let empty = TraditionalSignature {
            index: IndexCategory::point(),
            arities: vec![],
            params: vec![],
        };
        assert!(from_traditional(&empty).unwrap().is_empty());
    }

    #[test]
    fn action_on_graph_terms() {
        let pair = IndexCategory::parallel_pair();
        let sig = FreeFormSignature::new(&pair, vec![]).unwrap();
        let edge = Presheaf::path(1);
        let e = Term::var(1, 0);
        assert_eq!(act(&sig, &edge, 2, &e), Term::var(0, 0));
        assert_eq!(act(&sig, &edge, 3, &e), Term::var(0, 1));
        assert_eq!(act(&sig, &edge, 1, &e), e);
    }

    #[test]
    fn precompose_picks_columns() {
        let sig = semilattice_sig();
        let j = Presheaf::set(2);
        let x = Term::var(0, 0);
        let y = Term::var(0, 1);
        let t = ParamTerm::new(&sig, &j, &Presheaf::set(2), vec![vec![join(x.clone(), y.clone()), y.clone()]]).unwrap();
        let id = PresheafMorphism::identity(&Presheaf::set(2));
        assert_eq!(t.precompose(&id).unwrap(), t);
        let pick = PresheafMorphism::new(&Presheaf::set(1), &Presheaf::set(2), vec![vec![1]]).unwrap();
        assert_eq!(t.precompose(&pick).unwrap().component(0, 0), &y);
    }
}
