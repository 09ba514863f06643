//! Free algebras by depth-bounded congruence closure.
//!
//! Terms are grown in rounds. Round `r` adds one node for every symbol,
//! every natural binding into the current quotient and every parameter
//! element. After each round the partition is closed under congruence,
//! under the index action and under all instances of the equations that
//! can be matched against existing classes. The result is saturated when a
//! further round would add nothing, in which case the quotient is the free
//! algebra on the generators.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{enumerate_algebras, first_violation, Algebra};
use crate::base::{HomSet, MorphismId, Presheaf, Sort, HOM_SET_LIMIT};
use crate::error::{Error, Result};
use crate::syntax::{Equation, FreeFormSignature, ParamTerm, Term, TermNode};

use super::Presentation;

/// Largest number of term nodes a single free-algebra computation may build.
pub const NODE_LIMIT: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Head {
    Var(Sort, usize),
    App(usize, Sort, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    head: Head,
    children: Vec<usize>,
}

struct Node {
    key: Key,
    term: Term,
}

/// Why two classes were merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MergeReason {
    Equation { name: String, assignment: Vec<Term> },
    Congruence,
    Action,
}

/// One entry of the audit log: two witness terms that were identified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Merge {
    pub left: Term,
    pub right: Term,
    pub reason: MergeReason,
}

impl Merge {
    /// The audit line for this merge.
    pub fn render(&self, sig: &FreeFormSignature) -> String {
        let base = format!("merge {} {}", self.left.display(sig), self.right.display(sig));
        match &self.reason {
            MergeReason::Congruence => format!("{base} cong"),
            MergeReason::Action => format!("{base} act"),
            MergeReason::Equation { name, assignment } => {
                let phi: Vec<String> = assignment.iter().map(|t| t.display(sig).to_string()).collect();
                format!("{base} by {name} φ=({})", phi.join(" "))
            }
        }
    }
}

struct EGraph<'a> {
    sig: &'a Arc<FreeFormSignature>,
    equations: &'a [Equation],
    gens: Presheaf,
    nodes: Vec<Node>,
    parent: Vec<usize>,
    sort: Vec<Sort>,
    table: HashMap<Key, usize>,
    act_map: HashMap<(usize, MorphismId), usize>,
    audit: Vec<Merge>,
    limit: usize,
}

/// Per-iteration indexes used for matching.
struct MatchIndex {
    members: HashMap<usize, Vec<usize>>,
    classes: Vec<Vec<usize>>,
}

impl<'a> EGraph<'a> {
    fn find(&self, mut c: usize) -> usize {
        while self.parent[c] != c {
            c = self.parent[c];
        }
        c
    }

    fn find_mut(&mut self, c: usize) -> usize {
        let root = self.find(c);
        let mut c = c;
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize, reason: MergeReason) -> bool {
        let (ra, rb) = (self.find_mut(a), self.find_mut(b));
        if ra == rb {
            return false;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.audit.push(Merge {
            left: self.nodes[keep].term.clone(),
            right: self.nodes[drop].term.clone(),
            reason,
        });
        self.parent[drop] = keep;
        true
    }

    fn canon(&self, key: &Key) -> Key {
        Key {
            head: key.head,
            children: key.children.iter().map(|&c| self.find(c)).collect(),
        }
    }

    fn add(&mut self, key: Key, term: Term, sort: Sort) -> Result<usize> {
        if self.nodes.len() >= self.limit {
            return Err(Error::Ceiling {
                explored: self.nodes.len() as u64,
                ceiling: self.limit as u64,
                projected: "term nodes".into(),
            });
        }
        let id = self.nodes.len();
        self.nodes.push(Node { key: key.clone(), term });
        self.parent.push(id);
        self.sort.push(sort);
        self.table.insert(key, id);
        Ok(id)
    }

    fn act_key(&self, key: &Key, u: MorphismId) -> Key {
        let index = self.sig.index();
        let m = index.morphism(u);
        let head = match key.head {
            Head::Var(_, x) => Head::Var(m.target, self.gens.act(u, x)),
            Head::App(op, _, c) => Head::App(op, m.target, self.sig.symbol(op).param.act(u, c)),
        };
        Key {
            head,
            children: key.children.clone(),
        }
    }

    /// Closes under congruence and the index action.
    fn rebuild(&mut self) -> Result<()> {
        let index = self.sig.index().clone();
        loop {
            let mut changed = false;
            let mut table: HashMap<Key, usize> = HashMap::with_capacity(self.nodes.len());
            for n in 0..self.nodes.len() {
                let key = self.canon(&self.nodes[n].key);
                let c = self.find(n);
                match table.get(&key) {
                    Some(&other) => {
                        if self.find(other) != c {
                            changed |= self.union(other, c, MergeReason::Congruence);
                        }
                    }
                    None => {
                        table.insert(key, c);
                    }
                }
            }
            self.table = table;
            let mut act_map: HashMap<(usize, MorphismId), usize> = HashMap::new();
            if !index.is_discrete() {
                for n in 0..self.nodes.len() {
                    for &u in index.out_of(self.sort[n]) {
                        let key = self.canon(&self.act_key(&self.nodes[n].key, u));
                        let target = match self.table.get(&key) {
                            Some(&t) => self.find(t),
                            None => {
                                return Err(Error::Internal("action image of a term node is missing".into()));
                            }
                        };
                        let c = self.find(n);
                        match act_map.get(&(c, u)) {
                            Some(&t0) => {
                                if self.find(t0) != target {
                                    changed |= self.union(t0, target, MergeReason::Action);
                                }
                            }
                            None => {
                                act_map.insert((c, u), target);
                            }
                        }
                    }
                }
            }
            self.act_map = act_map;
            if !changed {
                return Ok(());
            }
        }
    }

    fn act_class(&self, u: MorphismId, c: usize) -> usize {
        let c = self.find(c);
        self.find(self.act_map[&(c, u)])
    }

    fn match_index(&self) -> MatchIndex {
        let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); self.sig.index().object_count()];
        let mut seen: HashMap<Key, ()> = HashMap::new();
        for n in 0..self.nodes.len() {
            let c = self.find(n);
            if c == n {
                classes[self.sort[n]].push(c);
            }
            let key = self.canon(&self.nodes[n].key);
            if seen.insert(key, ()).is_none() {
                members.entry(c).or_default().push(n);
            }
        }
        MatchIndex { members, classes }
    }

    /// Assigns generator position `p` to class `c` and propagates along the
    /// index action. Returns false on a clash.
    fn bind(&self, arity: &Presheaf, p: usize, c: usize, phi: &mut [Option<usize>]) -> bool {
        let c = self.find(c);
        if let Some(k) = phi[p] {
            return self.find(k) == c;
        }
        phi[p] = Some(c);
        let (b, x) = arity.unflat(p);
        let index = self.sig.index();
        for &u in index.out_of(b) {
            let m = index.morphism(u);
            let q = arity.flat(m.target, arity.act(u, x));
            let image = self.act_class(u, c);
            match phi[q] {
                Some(k) if self.find(k) != image => return false,
                Some(_) => {}
                None => phi[q] = Some(image),
            }
        }
        true
    }

    fn match_goals(
        &self,
        mi: &MatchIndex,
        arity: &Presheaf,
        goals: &[(Term, usize)],
        phi: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        let Some(((pat, class), rest)) = goals.split_first() else {
            out.push(phi.clone());
            return;
        };
        match pat.node() {
            TermNode::Var { sort, id } => {
                let saved = phi.clone();
                if self.bind(arity, arity.flat(*sort, *id), *class, phi) {
                    self.match_goals(mi, arity, rest, phi, out);
                }
                *phi = saved;
            }
            TermNode::App { op, binding, param } => {
                let root = self.find(*class);
                let Some(members) = mi.members.get(&root) else { return };
                for &n in members {
                    if self.nodes[n].key.head != Head::App(*op, param.0, param.1) {
                        continue;
                    }
                    let mut next: Vec<(Term, usize)> = binding
                        .iter()
                        .flatten()
                        .cloned()
                        .zip(self.nodes[n].key.children.iter().map(|&c| self.find(c)))
                        .collect();
                    next.extend_from_slice(rest);
                    self.match_goals(mi, arity, &next, phi, out);
                }
            }
        }
    }

    /// Extends a partial assignment to all total ones.
    fn complete(
        &self,
        mi: &MatchIndex,
        arity: &Presheaf,
        p: usize,
        phi: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p == phi.len() {
            out.push(phi.iter().map(|c| c.expect("assigned")).collect());
            return;
        }
        if phi[p].is_some() {
            self.complete(mi, arity, p + 1, phi, out);
            return;
        }
        let (b, _) = arity.unflat(p);
        for &c in &mi.classes[b] {
            let saved = phi.clone();
            if self.bind(arity, p, c, phi) {
                self.complete(mi, arity, p + 1, phi, out);
            }
            *phi = saved;
        }
    }

    /// The class of a term under an assignment of its variables to classes,
    /// if every subterm is present.
    fn eval(&self, t: &Term, phi: &[usize], arity: &Presheaf) -> Option<usize> {
        match t.node() {
            TermNode::Var { sort, id } => Some(self.find(phi[arity.flat(*sort, *id)])),
            TermNode::App { op, binding, param } => {
                let mut children = Vec::with_capacity(binding.iter().map(|r| r.len()).sum());
                for s in binding.iter().flatten() {
                    children.push(self.eval(s, phi, arity)?);
                }
                let key = Key {
                    head: Head::App(*op, param.0, param.1),
                    children,
                };
                self.table.get(&key).map(|&c| self.find(c))
            }
        }
    }

    /// Applies every equation instance found among existing classes.
    fn apply_equations(&mut self) -> bool {
        let mi = self.match_index();
        let mut merges: Vec<(usize, usize, usize, Vec<usize>)> = Vec::new();
        for (k, e) in self.equations.iter().enumerate() {
            let arity = e.arity();
            for (b, c) in e.param().elements() {
                let l = e.lhs.component(b, c);
                let r = e.rhs.component(b, c);
                if l == r {
                    continue;
                }
                let pattern = if !l.is_var() {
                    Some(l)
                } else if !r.is_var() {
                    Some(r)
                } else {
                    None
                };
                let mut partials = Vec::new();
                let empty = vec![None; arity.total()];
                match pattern {
                    Some(pat) => {
                        for &cls in &mi.classes[b] {
                            let mut phi = empty.clone();
                            self.match_goals(&mi, arity, &[(pat.clone(), cls)], &mut phi, &mut partials);
                        }
                    }
                    None => partials.push(empty),
                }
                let mut totals = Vec::new();
                for mut phi in partials {
                    self.complete(&mi, arity, 0, &mut phi, &mut totals);
                }
                for phi in totals {
                    let (Some(lc), Some(rc)) = (self.eval(l, &phi, arity), self.eval(r, &phi, arity)) else {
                        continue;
                    };
                    if lc != rc {
                        merges.push((lc, rc, k, phi));
                    }
                }
            }
        }
        let mut changed = false;
        for (a, b, k, phi) in merges {
            let assignment = phi.iter().map(|&c| self.nodes[self.find(c)].term.clone()).collect();
            changed |= self.union(
                a,
                b,
                MergeReason::Equation {
                    name: self.equations[k].name.clone(),
                    assignment,
                },
            );
        }
        changed
    }

    fn close(&mut self) -> Result<()> {
        loop {
            self.rebuild()?;
            if !self.apply_equations() {
                return Ok(());
            }
        }
    }

    /// The current quotient as a presheaf, with the root of each element.
    fn quotient(&self) -> (Presheaf, Vec<Vec<usize>>) {
        let index = self.sig.index();
        let mi = self.match_index();
        let roots = mi.classes;
        let pos: HashMap<usize, usize> = roots
            .iter()
            .flat_map(|r| r.iter().enumerate().map(|(i, &c)| (c, i)))
            .collect();
        let maps = index
            .non_identities()
            .map(|u| {
                let m = index.morphism(u);
                roots[m.source].iter().map(|&c| pos[&self.act_class(u, c)]).collect()
            })
            .collect();
        let sizes = roots.iter().map(|r| r.len()).collect();
        let q = Presheaf::new(index, sizes, maps).expect("quotient is a presheaf");
        (q, roots)
    }

    /// Adds one round of applications; returns how many nodes were added.
    /// With `dry_run`, only counts the missing ones.
    fn grow(&mut self, dry_run: bool) -> Result<usize> {
        let (q, roots) = self.quotient();
        let sig = self.sig.clone();
        let n = sig.index().object_count();
        let mut added = 0;
        for (op, s) in sig.symbols().iter().enumerate() {
            let homs = match HomSet::new(&s.arity, &q) {
                Ok(h) => h,
                // More bindings than the table can hold: some are missing.
                Err(Error::Shape(_)) if dry_run && s.param.total() > 0 && self.table.len() < HOM_SET_LIMIT => {
                    return Ok(1);
                }
                Err(e) => return Err(e),
            };
            let mut flat = vec![0; homs.stride()];
            for h in 0..homs.len() {
                homs.get_into(h, &mut flat);
                let children: Vec<usize> = (0..flat.len())
                    .map(|p| roots[s.arity.unflat(p).0][flat[p]])
                    .collect();
                let mut binding: Option<Vec<Vec<Term>>> = None;
                for (b, c) in s.param.elements() {
                    let key = Key {
                        head: Head::App(op, b, c),
                        children: children.clone(),
                    };
                    if self.table.contains_key(&key) {
                        continue;
                    }
                    added += 1;
                    if dry_run {
                        return Ok(added);
                    }
                    let binding = binding.get_or_insert_with(|| {
                        (0..n)
                            .map(|sb| {
                                (0..s.arity.size(sb))
                                    .map(|x| self.nodes[children[s.arity.flat(sb, x)]].term.clone())
                                    .collect()
                            })
                            .collect()
                    });
                    let term = Term::app(op, binding.clone(), (b, c));
                    self.add(key, term, b)?;
                }
            }
        }
        Ok(added)
    }
}

/// A depth-bounded quotient of the term algebra on a generator object.
#[derive(Clone)]
pub struct QuotientAlgebra {
    signature: Arc<FreeFormSignature>,
    generators: Presheaf,
    depth: usize,
    saturated: bool,
    carrier: Presheaf,
    representatives: Vec<Vec<Term>>,
    generator_class: Vec<Vec<usize>>,
    lookup: HashMap<(usize, Vec<usize>, Sort, usize), usize>,
    nodes: usize,
    audit: Vec<Merge>,
}

impl fmt::Debug for QuotientAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuotientAlgebra(classes={:?}, saturated={}, nodes={})",
            self.carrier.sizes(),
            self.saturated,
            self.nodes
        )
    }
}

impl QuotientAlgebra {
    pub fn signature(&self) -> &Arc<FreeFormSignature> {
        &self.signature
    }

    pub fn generators(&self) -> &Presheaf {
        &self.generators
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// The classes as a presheaf.
    pub fn carrier(&self) -> &Presheaf {
        &self.carrier
    }

    pub fn class_count(&self) -> usize {
        self.carrier.total()
    }

    /// Number of term nodes built.
    pub fn universe_size(&self) -> usize {
        self.nodes
    }

    /// The least term (by depth, then structure) of each class.
    pub fn representative(&self, b: Sort, k: usize) -> &Term {
        &self.representatives[b][k]
    }

    pub fn representatives(&self, b: Sort) -> &[Term] {
        &self.representatives[b]
    }

    /// The class of the generator `x` of sort `b`.
    pub fn generator_class(&self, b: Sort, x: usize) -> usize {
        self.generator_class[b][x]
    }

    /// The class of `σ` applied to a flat binding of classes, if present.
    pub fn apply(&self, op: usize, children: &[usize], b: Sort, c: usize) -> Option<usize> {
        self.lookup.get(&(op, children.to_vec(), b, c)).copied()
    }

    /// Evaluates a term with variables sent to classes.
    pub fn eval(&self, t: &Term, phi: &dyn Fn(Sort, usize) -> usize) -> Option<usize> {
        match t.node() {
            TermNode::Var { sort, id } => Some(phi(*sort, *id)),
            TermNode::App { op, binding, param } => {
                let mut children = Vec::new();
                for s in binding.iter().flatten() {
                    children.push(self.eval(s, phi)?);
                }
                self.apply(*op, &children, param.0, param.1)
            }
        }
    }

    /// The class of a term over the generators, if it lies in the universe.
    pub fn class_of(&self, t: &Term) -> Option<usize> {
        self.eval(t, &|b, x| self.generator_class[b][x])
    }

    /// The quotient as an algebra; only total when saturated.
    pub fn to_algebra(&self) -> Result<Algebra> {
        if !self.saturated {
            return Err(Error::Internal("quotient is not saturated".into()));
        }
        let missing = std::cell::Cell::new(false);
        let a = Algebra::from_fn(&self.signature, &self.carrier, |op, flat, b, c| {
            self.apply(op, flat, b, c).unwrap_or_else(|| {
                missing.set(true);
                0
            })
        });
        if missing.get() {
            return Err(Error::Internal("saturated quotient has a missing operation entry".into()));
        }
        a
    }

    pub fn audit(&self) -> &[Merge] {
        &self.audit
    }

    /// The audit log, one line per merge.
    pub fn audit_lines(&self) -> Vec<String> {
        self.audit.iter().map(|m| m.render(&self.signature)).collect()
    }
}

/// The free algebra on `gens` truncated at term depth `depth`.
pub fn free_algebra(p: &Presentation, gens: &Presheaf, depth: usize) -> Result<QuotientAlgebra> {
    free_algebra_with_limit(p, gens, depth, NODE_LIMIT)
}

pub fn free_algebra_with_limit(p: &Presentation, gens: &Presheaf, depth: usize, limit: usize) -> Result<QuotientAlgebra> {
    let sig = p.signature();
    if gens.index() != sig.index() {
        return Err(Error::MismatchedIndex);
    }
    let mut g = EGraph {
        sig,
        equations: p.equations(),
        gens: gens.clone(),
        nodes: Vec::new(),
        parent: Vec::new(),
        sort: Vec::new(),
        table: HashMap::new(),
        act_map: HashMap::new(),
        audit: Vec::new(),
        limit,
    };
    for (b, x) in gens.elements() {
        g.add(
            Key {
                head: Head::Var(b, x),
                children: vec![],
            },
            Term::var(b, x),
            b,
        )?;
    }
    g.close()?;
    for _ in 0..depth {
        if g.grow(false)? == 0 {
            break;
        }
        g.close()?;
    }
    let saturated = g.grow(true)? == 0;
    extract(g, gens, depth, saturated)
}

fn extract(g: EGraph<'_>, gens: &Presheaf, depth: usize, saturated: bool) -> Result<QuotientAlgebra> {
    let sig = g.sig.clone();
    let n = sig.index().object_count();
    let (carrier_raw, roots) = g.quotient();
    let mut best: HashMap<usize, Term> = HashMap::new();
    loop {
        let mut changed = false;
        for node in &g.nodes {
            let root = g.find(g.table[&g.canon(&node.key)]);
            let candidate = match node.key.head {
                Head::Var(b, x) => Term::var(b, x),
                Head::App(op, b, c) => {
                    let s = sig.symbol(op);
                    let mut kids = Vec::with_capacity(node.key.children.len());
                    for &ch in &node.key.children {
                        match best.get(&g.find(ch)) {
                            Some(t) => kids.push(t.clone()),
                            None => break,
                        }
                    }
                    if kids.len() != node.key.children.len() {
                        continue;
                    }
                    let binding = (0..n)
                        .map(|sb| (0..s.arity.size(sb)).map(|x| kids[s.arity.flat(sb, x)].clone()).collect())
                        .collect();
                    Term::app(op, binding, (b, c))
                }
            };
            match best.get(&root) {
                Some(t) if *t <= candidate => {}
                _ => {
                    best.insert(root, candidate);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Canonical numbering: within each sort, classes ordered by representative.
    let mut order: Vec<Vec<usize>> = roots.clone();
    for r in order.iter_mut() {
        r.sort_by(|a, b| best[a].cmp(&best[b]));
    }
    let renumber: HashMap<usize, usize> = order
        .iter()
        .flat_map(|r| r.iter().enumerate().map(|(i, &c)| (c, i)))
        .collect();
    let old_pos: HashMap<usize, usize> = roots
        .iter()
        .flat_map(|r| r.iter().enumerate().map(|(i, &c)| (c, i)))
        .collect();
    let index = sig.index();
    let maps = index
        .non_identities()
        .map(|u| {
            let m = index.morphism(u);
            order[m.source]
                .iter()
                .map(|&c| {
                    let image = roots[m.target][carrier_raw.act(u, old_pos[&c])];
                    renumber[&image]
                })
                .collect()
        })
        .collect();
    let carrier = Presheaf::new(index, order.iter().map(|r| r.len()).collect(), maps)?;
    let representatives = order
        .iter()
        .map(|r| r.iter().map(|c| best[c].clone()).collect())
        .collect();
    let generator_class = (0..n)
        .map(|b| {
            (0..gens.size(b))
                .map(|x| {
                    let key = Key {
                        head: Head::Var(b, x),
                        children: vec![],
                    };
                    renumber[&g.find(g.table[&key])]
                })
                .collect()
        })
        .collect();
    let mut lookup = HashMap::new();
    for (key, &c) in &g.table {
        if let Head::App(op, b, p) = key.head {
            let children = key.children.iter().map(|&ch| renumber[&g.find(ch)]).collect();
            lookup.insert((op, children, b, p), renumber[&g.find(c)]);
        }
    }
    Ok(QuotientAlgebra {
        signature: sig,
        generators: gens.clone(),
        depth,
        saturated,
        carrier,
        representatives,
        generator_class,
        lookup,
        nodes: g.nodes.len(),
        audit: g.audit,
    })
}

/// Three-valued comparison of two parametrized terms in the free algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Distinct(String),
    Unknown,
}

/// Compares `t` and `u` in the free algebra on their arity. Equal when every
/// component pair shares a class (identifications are always entailed);
/// Distinct when a saturated quotient separates them or a model on a
/// carrier within `counter_bounds` violates `t ≐ u`; Unknown otherwise.
pub fn quotient_map_equal(
    p: &Presentation,
    t: &ParamTerm,
    u: &ParamTerm,
    depth: usize,
    counter_bounds: &[usize],
    ceiling: u64,
) -> Result<Verdict> {
    if t.arity() != u.arity() || t.param() != u.param() {
        return Err(Error::Shape("terms must share arity and parameter".into()));
    }
    if t == u {
        return Ok(Verdict::Equal);
    }
    let q = free_algebra(p, t.arity(), depth)?;
    let mut all_equal = true;
    for (b, c) in t.param().elements() {
        let l = q.class_of(t.component(b, c));
        let r = q.class_of(u.component(b, c));
        match (l, r) {
            (Some(x), Some(y)) if x == y => {}
            (Some(x), Some(y)) if q.saturated() => {
                return Ok(Verdict::Distinct(format!(
                    "saturated quotient separates classes {x} and {y} at ({b},{c})"
                )));
            }
            _ => all_equal = false,
        }
    }
    if all_equal {
        return Ok(Verdict::Equal);
    }
    let e = Equation::relative(p.signature(), "query", t.clone(), u.clone())?;
    let models = enumerate_algebras(p.signature(), p.equations(), counter_bounds, ceiling)?;
    for a in &models {
        if let Some(v) = first_violation(a, &e)? {
            return Ok(Verdict::Distinct(format!("model {:?} violates at {}", a.carrier().sizes(), v)));
        }
    }
    Ok(Verdict::Unknown)
}
