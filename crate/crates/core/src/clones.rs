//! Relative monads over a finite list of arities, their algebras, and the
//! standardized presentation.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::base::{compose_flat, copower, HomSet, Presheaf};
use crate::error::{Error, Result};
use crate::library::FiniteRig;
use crate::presentation::{free_algebra, Presentation};
use crate::syntax::{Equation, FreeFormSignature, ParamTerm, Symbol, Term};

/// A relative monad `(H, e, m)` on the arities `K`.
///
/// `unit[j]` is the flat map `e_J: J → HJ`; `mult[j][k]` stores, for every
/// `g` in `HomSet(J, HK)`, the flat map `m_{JK}(g): HJ → HK` at offset
/// `g · |HJ|`.
#[derive(Clone)]
pub struct RelativeMonad {
    name: String,
    objects: Vec<Presheaf>,
    h: Vec<Presheaf>,
    unit: Vec<Vec<usize>>,
    homs: Vec<Vec<Arc<HomSet>>>,
    mult: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for RelativeMonad {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.objects == other.objects
            && self.h == other.h
            && self.unit == other.unit
            && self.mult == other.mult
    }
}

impl Eq for RelativeMonad {}

impl fmt::Debug for RelativeMonad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<usize> = self.h.iter().map(|h| h.total()).collect();
        write!(f, "RelativeMonad({}, |HJ|={sizes:?})", self.name)
    }
}

/// One entry of the unit or multiplication tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    Unit { j: usize, pos: usize },
    Mult { j: usize, k: usize, index: usize },
}

/// A failed law of a relative monad, with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonadViolation {
    /// `e_J` or some `m_{JK}(g)` is not a natural map.
    Unnatural { what: String },
    /// `m_{JJ}(e_J)` is not the identity.
    ExtendUnit { j: usize },
    /// `m_{JK}(g) ∘ e_J ≠ g`.
    UnitThenExtend { j: usize, k: usize, g: usize },
    /// `m_{JL}(m_{KL}(h) ∘ g) ≠ m_{KL}(h) ∘ m_{JK}(g)`.
    Associativity { j: usize, k: usize, l: usize, g: usize, h: usize },
}

impl fmt::Display for MonadViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadViolation::Unnatural { what } => write!(f, "unnatural {what}"),
            MonadViolation::ExtendUnit { j } => write!(f, "extend-unit J={j}"),
            MonadViolation::UnitThenExtend { j, k, g } => write!(f, "unit-then-extend J={j} K={k} g={g}"),
            MonadViolation::Associativity { j, k, l, g, h } => {
                write!(f, "associativity J={j} K={k} L={l} g={g} h={h}")
            }
        }
    }
}

impl RelativeMonad {
    /// Builds a relative monad from its tables; only shapes are checked.
    pub fn new(
        name: &str,
        objects: Vec<Presheaf>,
        h: Vec<Presheaf>,
        unit: Vec<Vec<usize>>,
        mult: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let n = objects.len();
        if h.len() != n || unit.len() != n || mult.len() != n {
            return Err(Error::Shape("relative monad tables must have one entry per object".into()));
        }
        let index = objects.first().map(|o| o.index().clone());
        for x in objects.iter().chain(&h) {
            if Some(x.index()) != index.as_ref() {
                return Err(Error::MismatchedIndex);
            }
        }
        let mut homs = Vec::with_capacity(n);
        for j in 0..n {
            if unit[j].len() != objects[j].total() {
                return Err(Error::Shape(format!("unit table for object {j} has the wrong length")));
            }
            for (p, &v) in unit[j].iter().enumerate() {
                if v >= h[j].size(objects[j].unflat(p).0) {
                    return Err(Error::Shape(format!("unit value out of range for object {j}")));
                }
            }
            let mut row = Vec::with_capacity(n);
            if mult[j].len() != n {
                return Err(Error::Shape("multiplication table must be square".into()));
            }
            for k in 0..n {
                let hs = Arc::new(HomSet::new(&objects[j], &h[k])?);
                let width = h[j].total();
                if mult[j][k].len() != hs.len() * width {
                    return Err(Error::Shape(format!("multiplication table ({j},{k}) has the wrong length")));
                }
                for (i, &v) in mult[j][k].iter().enumerate() {
                    if v >= h[k].size(h[j].unflat(i % width.max(1)).0) {
                        return Err(Error::Shape(format!("multiplication value out of range at ({j},{k})")));
                    }
                }
                row.push(hs);
            }
            homs.push(row);
        }
        Ok(RelativeMonad {
            name: name.to_string(),
            objects,
            h,
            unit,
            homs,
            mult,
        })
    }

    /// Builds the tables from `e(j, flat position)` and
    /// `m(j, k, flat g, flat position of HJ)`.
    pub fn from_fn(
        name: &str,
        objects: Vec<Presheaf>,
        h: Vec<Presheaf>,
        e: impl Fn(usize, usize) -> usize,
        m: impl Fn(usize, usize, &[usize], usize) -> usize + Sync,
    ) -> Result<Self> {
        let n = objects.len();
        let unit = (0..n).map(|j| (0..objects[j].total()).map(|p| e(j, p)).collect()).collect();
        let mut mult = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = Vec::with_capacity(n);
            for k in 0..n {
                let hs = HomSet::new(&objects[j], &h[k])?;
                let width = h[j].total();
                let table: Vec<usize> = (0..hs.len())
                    .into_par_iter()
                    .flat_map_iter(|g| {
                        let flat = hs.get(g);
                        (0..width).map(|p| m(j, k, &flat, p)).collect::<Vec<_>>()
                    })
                    .collect();
                row.push(table);
            }
            mult.push(row);
        }
        Self::new(name, objects, h, unit, mult)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[Presheaf] {
        &self.objects
    }

    pub fn h(&self, j: usize) -> &Presheaf {
        &self.h[j]
    }

    pub fn unit(&self, j: usize) -> &[usize] {
        &self.unit[j]
    }

    /// `HomSet(J, HK)`.
    pub fn homs(&self, j: usize, k: usize) -> &Arc<HomSet> {
        &self.homs[j][k]
    }

    pub fn mult_table(&self, j: usize, k: usize) -> &[usize] {
        &self.mult[j][k]
    }

    /// The flat map `m_{JK}(g)` for the `g`-th map `J → HK`.
    pub fn extend(&self, j: usize, k: usize, g: usize) -> &[usize] {
        let w = self.h[j].total();
        &self.mult[j][k][g * w..(g + 1) * w]
    }

    /// Every table entry, units first.
    pub fn entries(&self) -> Vec<Entry> {
        let n = self.objects.len();
        let mut out = Vec::new();
        for j in 0..n {
            out.extend((0..self.unit[j].len()).map(|pos| Entry::Unit { j, pos }));
        }
        for j in 0..n {
            for k in 0..n {
                out.extend((0..self.mult[j][k].len()).map(|index| Entry::Mult { j, k, index }));
            }
        }
        out
    }

    pub fn entry(&self, e: Entry) -> usize {
        match e {
            Entry::Unit { j, pos } => self.unit[j][pos],
            Entry::Mult { j, k, index } => self.mult[j][k][index],
        }
    }

    /// Number of values an entry may take.
    pub fn entry_range(&self, e: Entry) -> usize {
        match e {
            Entry::Unit { j, pos } => self.h[j].size(self.objects[j].unflat(pos).0),
            Entry::Mult { j, k, index } => {
                let w = self.h[j].total();
                self.h[k].size(self.h[j].unflat(index % w).0)
            }
        }
    }

    /// A copy with one entry changed.
    pub fn with_entry(&self, e: Entry, value: usize) -> Result<Self> {
        if value >= self.entry_range(e) {
            return Err(Error::Shape("entry value out of range".into()));
        }
        let mut out = self.clone();
        match e {
            Entry::Unit { j, pos } => out.unit[j][pos] = value,
            Entry::Mult { j, k, index } => out.mult[j][k][index] = value,
        }
        Ok(out)
    }

    fn index_of(&self, j: usize, k: usize, flat: &[usize]) -> Option<usize> {
        self.homs[j][k].index_of(flat)
    }

    fn naturality(&self) -> Vec<MonadViolation> {
        let n = self.objects.len();
        let mut out = Vec::new();
        for j in 0..n {
            if HomSet::new(&self.objects[j], &self.h[j])
                .map(|hs| hs.index_of(&self.unit[j]).is_none())
                .unwrap_or(true)
            {
                out.push(MonadViolation::Unnatural { what: format!("e[{j}]") });
            }
        }
        if self.h.iter().all(|o| o.index().is_discrete()) {
            return out;
        }
        for j in 0..n {
            for k in 0..n {
                let hs = HomSet::new(&self.h[j], &self.h[k]).expect("same index");
                for g in 0..self.homs[j][k].len() {
                    if hs.index_of(self.extend(j, k, g)).is_none() {
                        out.push(MonadViolation::Unnatural {
                            what: format!("m[{j}][{k}]({g})"),
                        });
                    }
                }
            }
        }
        out
    }

    fn unit_laws(&self) -> Vec<MonadViolation> {
        let n = self.objects.len();
        let mut out = Vec::new();
        for j in 0..n {
            let id: Vec<usize> = (0..self.h[j].total()).map(|p| self.h[j].unflat(p).1).collect();
            match self.index_of(j, j, &self.unit[j]) {
                Some(e) if self.extend(j, j, e) == id.as_slice() => {}
                _ => out.push(MonadViolation::ExtendUnit { j }),
            }
        }
        for j in 0..n {
            for k in 0..n {
                let hs = &self.homs[j][k];
                let mut flat = vec![0; hs.stride()];
                for g in 0..hs.len() {
                    hs.get_into(g, &mut flat);
                    let back = compose_flat(&self.unit[j], &self.objects[j], self.extend(j, k, g), &self.h[j]);
                    if back != flat {
                        out.push(MonadViolation::UnitThenExtend { j, k, g });
                    }
                }
            }
        }
        out
    }

    fn associativity_for(&self, j: usize, k: usize, l: usize, first_only: bool) -> Vec<MonadViolation> {
        let gs = &self.homs[j][k];
        let hs = &self.homs[k][l];
        let (oj, hj, hk) = (&self.objects[j], &self.h[j], &self.h[k]);
        let mut out = Vec::new();
        let mut g_flat = vec![0; gs.stride()];
        for g in 0..gs.len() {
            gs.get_into(g, &mut g_flat);
            let mg = self.extend(j, k, g);
            for h in 0..hs.len() {
                let mh = self.extend(k, l, h);
                let inner = compose_flat(&g_flat, oj, mh, hk);
                let right = compose_flat(mg, hj, mh, hk);
                let ok = match self.index_of(j, l, &inner) {
                    Some(i) => self.extend(j, l, i) == right.as_slice(),
                    None => false,
                };
                if !ok {
                    out.push(MonadViolation::Associativity { j, k, l, g, h });
                    if first_only {
                        return out;
                    }
                }
            }
        }
        out
    }

    fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.objects.len();
        (0..n)
            .flat_map(|j| (0..n).flat_map(move |k| (0..n).map(move |l| (j, k, l))))
            .collect()
    }
}

/// Every violated law with a witness, in a fixed order: naturality, the two
/// unit laws, then associativity by `(J, K, L, g, h)`.
pub fn check_relative_monad(m: &RelativeMonad) -> Vec<MonadViolation> {
    let mut out = m.naturality();
    out.extend(m.unit_laws());
    let assoc: Vec<Vec<MonadViolation>> = m
        .triples()
        .into_par_iter()
        .map(|(j, k, l)| m.associativity_for(j, k, l, false))
        .collect();
    out.extend(assoc.into_iter().flatten());
    out
}

/// True iff all laws hold; stops at the first failure.
pub fn is_relative_monad(m: &RelativeMonad) -> bool {
    m.naturality().is_empty()
        && m.unit_laws().is_empty()
        && !m
            .triples()
            .into_par_iter()
            .any(|(j, k, l)| !m.associativity_for(j, k, l, true).is_empty())
}

/// `HJ = J`, `e = id`, `m_{JK}(g) = g`.
pub fn identity_clone(objects: Vec<Presheaf>) -> Result<RelativeMonad> {
    let h = objects.clone();
    let ids: Vec<Vec<usize>> = objects
        .iter()
        .map(|o| (0..o.total()).map(|p| o.unflat(p).1).collect())
        .collect();
    RelativeMonad::from_fn("identity", objects, h, |j, p| ids[j][p], |_, _, g, p| g[p])
}

/// The state clone over finite sets: `HJ = (J×S)^S`, with `e_J(j) = λs.(j, s)`
/// and `m_{JK}(g)(w) = λs. let (j, s') = w(s) in g(j)(s')`.
pub fn state_clone(sizes: &[usize], states: usize) -> Result<RelativeMonad> {
    let s = states;
    let objects: Vec<Presheaf> = sizes.iter().map(|&n| Presheaf::set(n)).collect();
    let h: Vec<Presheaf> = sizes.iter().map(|&n| Presheaf::set((n * s).pow(s as u32))).collect();
    let encode = |base: usize, f: &dyn Fn(usize) -> usize| (0..s).map(|t| f(t) * base.pow(t as u32)).sum::<usize>();
    let decode = |base: usize, w: usize, t: usize| (w / base.pow(t as u32)) % base;
    RelativeMonad::from_fn(
        &format!("state{s}"),
        objects,
        h,
        |j, p| encode(sizes[j] * s, &|t| p * s + t),
        |j, k, g, p| {
            let (bj, bk) = (sizes[j] * s, sizes[k] * s);
            encode(bk, &|t| {
                let pair = decode(bj, p, t);
                decode(bk, g[pair / s], pair % s)
            })
        },
    )
}

/// The matrix clone of a finite rig: `H(n) = R^n`, `e` the standard basis,
/// `m_{JK}(g)(w) = Σ_j w_j · g(j)`.
pub fn matrix_clone(rig: &FiniteRig, sizes: &[usize]) -> Result<RelativeMonad> {
    let r = rig.size;
    let objects: Vec<Presheaf> = sizes.iter().map(|&n| Presheaf::set(n)).collect();
    let h: Vec<Presheaf> = sizes.iter().map(|&n| Presheaf::set(r.pow(n as u32))).collect();
    let digit = |w: usize, i: usize| (w / r.pow(i as u32)) % r;
    RelativeMonad::from_fn(
        &format!("matrix_{}", rig.name),
        objects,
        h,
        |_, p| rig.one * r.pow(p as u32),
        |j, k, g, p| {
            (0..sizes[k])
                .map(|i| {
                    let v = (0..sizes[j]).fold(rig.zero, |acc, jj| rig.add(acc, rig.mul(digit(p, jj), digit(g[jj], i))));
                    v * r.pow(i as u32)
                })
                .sum()
        },
    )
}

/// The affine sub-clone: rows of `R^n` whose entries sum to one.
pub fn affine_clone(rig: &FiniteRig, sizes: &[usize]) -> Result<RelativeMonad> {
    let r = rig.size;
    let digit = |w: usize, i: usize| (w / r.pow(i as u32)) % r;
    let rows: Vec<Vec<usize>> = sizes
        .iter()
        .map(|&n| {
            (0..r.pow(n as u32))
                .filter(|&w| (0..n).fold(rig.zero, |acc, i| rig.add(acc, digit(w, i))) == rig.one)
                .collect()
        })
        .collect();
    let objects: Vec<Presheaf> = sizes.iter().map(|&n| Presheaf::set(n)).collect();
    let h: Vec<Presheaf> = rows.iter().map(|v| Presheaf::set(v.len())).collect();
    let pos = |k: usize, w: usize| rows[k].binary_search(&w).expect("affine row");
    RelativeMonad::from_fn(
        &format!("affine_{}", rig.name),
        objects,
        h,
        |j, p| pos(j, rig.one * r.pow(p as u32)),
        |j, k, g, p| {
            let w = rows[j][p];
            let v: usize = (0..sizes[k])
                .map(|i| {
                    let x = (0..sizes[j]).fold(rig.zero, |acc, jj| {
                        rig.add(acc, rig.mul(digit(w, jj), digit(rows[k][g[jj]], i)))
                    });
                    x * r.pow(i as u32)
                })
                .sum();
            pos(k, v)
        },
    )
}

/// An algebra for a relative monad: `alpha[j]` stores, for every
/// `φ: J → A`, the flat map `α_J(φ): HJ → A` at offset `φ · |HJ|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HAlgebra {
    carrier: Presheaf,
    alpha: Vec<Vec<usize>>,
}

/// A failed law of an H-algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HAlgebraViolation {
    Unnatural { j: usize, phi: usize },
    /// `α_J(φ) ∘ e_J ≠ φ`.
    Unit { j: usize, phi: usize },
    /// `α_J(α_K(φ) ∘ g) ≠ α_K(φ) ∘ m_{JK}(g)`.
    Multiplication { j: usize, k: usize, phi: usize, g: usize },
}

impl fmt::Display for HAlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HAlgebraViolation::Unnatural { j, phi } => write!(f, "unnatural J={j} phi={phi}"),
            HAlgebraViolation::Unit { j, phi } => write!(f, "unit J={j} phi={phi}"),
            HAlgebraViolation::Multiplication { j, k, phi, g } => {
                write!(f, "multiplication J={j} K={k} phi={phi} g={g}")
            }
        }
    }
}

impl HAlgebra {
    pub fn new(m: &RelativeMonad, carrier: &Presheaf, alpha: Vec<Vec<usize>>) -> Result<Self> {
        if alpha.len() != m.objects.len() {
            return Err(Error::Shape("one structure map per object".into()));
        }
        for (j, table) in alpha.iter().enumerate() {
            let phis = HomSet::new(&m.objects[j], carrier)?;
            let w = m.h[j].total();
            if table.len() != phis.len() * w {
                return Err(Error::Shape(format!("structure map {j} has the wrong length")));
            }
            for (i, &v) in table.iter().enumerate() {
                if v >= carrier.size(m.h[j].unflat(i % w.max(1)).0) {
                    return Err(Error::Shape(format!("structure map {j} value out of range")));
                }
            }
        }
        Ok(HAlgebra {
            carrier: carrier.clone(),
            alpha,
        })
    }

    pub fn carrier(&self) -> &Presheaf {
        &self.carrier
    }

    pub fn alpha(&self, j: usize) -> &[usize] {
        &self.alpha[j]
    }

    /// The algebra of the standardized presentation with the same tables.
    pub fn to_algebra(&self, sig: &Arc<FreeFormSignature>) -> Result<Algebra> {
        Algebra::new(sig, &self.carrier, self.alpha.clone())
    }

    /// Reads the structure maps off an algebra of the standardized
    /// presentation.
    pub fn from_algebra(m: &RelativeMonad, a: &Algebra) -> Result<Self> {
        let alpha = a.tables().iter().map(|t| t.values().to_vec()).collect();
        Self::new(m, a.carrier(), alpha)
    }

    /// Every `α` on a carrier, by exhaustive enumeration of the tables.
    pub fn enumerate(m: &RelativeMonad, carrier: &Presheaf, ceiling: u64) -> Result<Vec<HAlgebra>> {
        let sig = standardized_signature(m)?;
        let all = crate::algebra::enumerate_on(&sig, &[], carrier, ceiling)?;
        all.iter().map(|a| Self::from_algebra(m, a)).collect()
    }
}

/// Every violated H-algebra law, in a fixed order.
pub fn check_h_algebra(m: &RelativeMonad, a: &HAlgebra) -> Result<Vec<HAlgebraViolation>> {
    let n = m.objects.len();
    let phis: Vec<HomSet> = m
        .objects
        .iter()
        .map(|o| HomSet::new(o, &a.carrier))
        .collect::<Result<_>>()?;
    let rows = |j: usize, phi: usize| {
        let w = m.h[j].total();
        &a.alpha[j][phi * w..(phi + 1) * w]
    };
    let mut out = Vec::new();
    let h_to_a: Vec<HomSet> = m.h.iter().map(|h| HomSet::new(h, &a.carrier)).collect::<Result<_>>()?;
    for j in 0..n {
        let mut flat = vec![0; phis[j].stride()];
        for phi in 0..phis[j].len() {
            if h_to_a[j].index_of(rows(j, phi)).is_none() {
                out.push(HAlgebraViolation::Unnatural { j, phi });
            }
            phis[j].get_into(phi, &mut flat);
            let back = compose_flat(&m.unit[j], &m.objects[j], rows(j, phi), &m.h[j]);
            if back != flat {
                out.push(HAlgebraViolation::Unit { j, phi });
            }
        }
    }
    for j in 0..n {
        for k in 0..n {
            let gs = &m.homs[j][k];
            let mut g_flat = vec![0; gs.stride()];
            for phi in 0..phis[k].len() {
                let ak = rows(k, phi);
                for g in 0..gs.len() {
                    gs.get_into(g, &mut g_flat);
                    let inner = compose_flat(&g_flat, &m.objects[j], ak, &m.h[k]);
                    let right = compose_flat(m.extend(j, k, g), &m.h[j], ak, &m.h[k]);
                    let ok = match phis[j].index_of(&inner) {
                        Some(i) => rows(j, i) == right.as_slice(),
                        None => false,
                    };
                    if !ok {
                        out.push(HAlgebraViolation::Multiplication { j, k, phi, g });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// One symbol `alpha<J>` of arity `J` and parameter `HJ` per object.
pub fn standardized_signature(m: &RelativeMonad) -> Result<Arc<FreeFormSignature>> {
    let index = m
        .objects
        .first()
        .map(|o| o.index().clone())
        .ok_or_else(|| Error::Shape("relative monad without objects".into()))?;
    let symbols = (0..m.objects.len())
        .map(|j| Symbol {
            name: format!("alpha{j}"),
            arity: m.objects[j].clone(),
            param: m.h[j].clone(),
        })
        .collect();
    FreeFormSignature::new(&index, symbols)
}

/// The presentation whose algebras are the H-algebras: a unit equation per
/// object and a multiplication equation per pair of objects.
pub fn standardized_presentation(m: &RelativeMonad) -> Result<Presentation> {
    let sig = standardized_signature(m)?;
    let n = m.objects.len();
    let sorts = sig.index().object_count();
    let vars = |j: usize| Term::vars_of(&m.objects[j]);
    let mut eqs = Vec::with_capacity(n + n * n);
    for j in 0..n {
        let o = &m.objects[j];
        let lhs: Vec<Vec<Term>> = (0..sorts)
            .map(|b| {
                (0..o.size(b))
                    .map(|x| Term::app(j, vars(j), (b, m.unit[j][o.flat(b, x)])))
                    .collect()
            })
            .collect();
        eqs.push(Equation::new(
            &sig,
            &format!("unit{j}"),
            ParamTerm::new(&sig, o, o, lhs)?,
            ParamTerm::new(&sig, o, o, vars(j))?,
        )?);
    }
    for j in 0..n {
        for k in 0..n {
            let gs = &m.homs[j][k];
            let (hj, ok) = (&m.h[j], &m.objects[k]);
            let param = copower(gs.len(), hj);
            let mut lhs: Vec<Vec<Term>> = vec![Vec::new(); sorts];
            let mut rhs: Vec<Vec<Term>> = vec![Vec::new(); sorts];
            for b in 0..sorts {
                for id in 0..param.size(b) {
                    let (g, w) = (id / hj.size(b), id % hj.size(b));
                    let mg = m.extend(j, k, g);
                    let g_flat = gs.get(g);
                    lhs[b].push(Term::app(k, vars(k), (b, mg[hj.flat(b, w)])));
                    let binding: Vec<Vec<Term>> = (0..sorts)
                        .map(|b2| {
                            (0..m.objects[j].size(b2))
                                .map(|x| Term::app(k, vars(k), (b2, g_flat[m.objects[j].flat(b2, x)])))
                                .collect()
                        })
                        .collect();
                    rhs[b].push(Term::app(j, binding, (b, w)));
                }
            }
            eqs.push(Equation::new(
                &sig,
                &format!("mult{j}_{k}"),
                ParamTerm::new(&sig, ok, &param, lhs)?,
                ParamTerm::new(&sig, ok, &param, rhs)?,
            )?);
        }
    }
    Presentation::new(&format!("standard_{}", m.name), &sig, eqs)
}

/// The relative monad of a presentation on the given arities, read off
/// saturated free algebras; `None` when some free algebra fails to saturate
/// at depth `d`.
pub fn clone_of_presentation(p: &Presentation, objects: &[Presheaf], depth: usize) -> Result<Option<RelativeMonad>> {
    let mut frees = Vec::with_capacity(objects.len());
    for o in objects {
        let q = free_algebra(p, o, depth)?;
        if !q.saturated() {
            return Ok(None);
        }
        frees.push(q);
    }
    let h: Vec<Presheaf> = frees.iter().map(|q| q.carrier().clone()).collect();
    let m = RelativeMonad::from_fn(
        &format!("clone_{}", p.name()),
        objects.to_vec(),
        h.clone(),
        |j, pos| {
            let (b, x) = objects[j].unflat(pos);
            frees[j].generator_class(b, x)
        },
        |j, k, g, pos| {
            let (b, c) = h[j].unflat(pos);
            let t = frees[j].representative(b, c);
            frees[k]
                .eval(t, &|sb, x| g[objects[j].flat(sb, x)])
                .expect("saturated quotient is total")
        },
    )?;
    let violations = check_relative_monad(&m);
    if let Some(v) = violations.first() {
        return Err(Error::Internal(format!("clone of a presentation violates {v}")));
    }
    Ok(Some(m))
}
