//! Presentations, their combinators, and free algebras.

mod free;

pub use free::{free_algebra, free_algebra_with_limit, quotient_map_equal, Merge, MergeReason, QuotientAlgebra, Verdict};

use std::sync::Arc;

use crate::algebra::{enumerate_algebras, first_violation, Algebra, Violation};
use crate::base::{coproduct_all, product, IndexCategory, Presheaf};
use crate::error::{Error, Result};
use crate::syntax::{Equation, FreeFormSignature, ParamTerm, Symbol, Term};

/// A signature together with a finite list of equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    signature: Arc<FreeFormSignature>,
    equations: Vec<Equation>,
}

impl Presentation {
    pub fn new(name: &str, signature: &Arc<FreeFormSignature>, equations: Vec<Equation>) -> Result<Self> {
        for (i, e) in equations.iter().enumerate() {
            if equations[..i].iter().any(|f| f.name == e.name) {
                return Err(Error::Equation {
                    name: e.name.clone(),
                    reason: "duplicate equation name".into(),
                });
            }
            if e.arity().index() != signature.index() || e.param().index() != signature.index() {
                return Err(Error::Equation {
                    name: e.name.clone(),
                    reason: "arity or parameter over a different index category".into(),
                });
            }
            for t in e.lhs.components().iter().chain(e.rhs.components()).flatten() {
                t.check_shape(signature, e.arity()).map_err(|err| Error::Equation {
                    name: e.name.clone(),
                    reason: err.to_string(),
                })?;
            }
        }
        Ok(Presentation {
            name: name.to_string(),
            signature: signature.clone(),
            equations,
        })
    }

    /// No symbols and no equations.
    pub fn empty(index: &Arc<IndexCategory>) -> Self {
        Presentation {
            name: "empty".into(),
            signature: FreeFormSignature::new(index, vec![]).expect("empty signature"),
            equations: vec![],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Arc<FreeFormSignature> {
        &self.signature
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn equation(&self, name: &str) -> Option<&Equation> {
        self.equations.iter().find(|e| e.name == name)
    }

    /// All models on carriers within the per-sort bounds.
    pub fn models(&self, bounds: &[usize], ceiling: u64) -> Result<Vec<Algebra>> {
        enumerate_algebras(&self.signature, &self.equations, bounds, ceiling)
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

/// True iff `a` satisfies every equation of `p`.
pub fn palg_satisfies(a: &Algebra, p: &Presentation) -> bool {
    check_presentation(a, p).iter().all(|(_, v)| v.is_none())
}

/// Per equation: the first failing instance, if any.
pub fn check_presentation(a: &Algebra, p: &Presentation) -> Vec<(String, Option<Violation>)> {
    p.equations()
        .iter()
        .map(|e| {
            let v = first_violation(a, e).unwrap_or_else(|err| {
                Some(Violation {
                    equation: format!("{} ({err})", e.name),
                    assignment: vec![],
                    sort: 0,
                    param: 0,
                    lhs: None,
                    rhs: None,
                })
            });
            (e.name.clone(), v)
        })
        .collect()
}

fn tags(p1: &Presentation, p2: &Presentation) -> (String, String) {
    if p1.name != p2.name {
        (p1.name.clone(), p2.name.clone())
    } else {
        (format!("{}1", p1.name), format!("{}2", p2.name))
    }
}

/// The disjoint union of signatures and equations; names are prefixed
/// with the name of the presentation they came from.
pub fn sum(p1: &Presentation, p2: &Presentation) -> Result<Presentation> {
    if p1.signature.index() != p2.signature.index() {
        return Err(Error::MismatchedIndex);
    }
    let (t1, t2) = tags(p1, p2);
    let mut symbols = Vec::new();
    for (tag, p) in [(&t1, p1), (&t2, p2)] {
        for s in p.signature.symbols() {
            symbols.push(Symbol {
                name: format!("{tag}.{}", s.name),
                arity: s.arity.clone(),
                param: s.param.clone(),
            });
        }
    }
    let sig = FreeFormSignature::new(p1.signature.index(), symbols)?;
    let shift = p1.signature.len();
    let mut equations = Vec::new();
    for e in &p1.equations {
        equations.push(e.map_ops(&format!("{t1}.{}", e.name), &|op| op));
    }
    for e in &p2.equations {
        equations.push(e.map_ops(&format!("{t2}.{}", e.name), &|op| op + shift));
    }
    Presentation::new(&format!("{}+{}", p1.name, p2.name), &sig, equations)
}

/// The commutation equation between two symbols over the trivial index
/// category: arity `J1×J2`, parameter `C1×C2`. The left side nests `σ1`
/// inside `σ2`, the right side `σ2` inside `σ1`.
pub fn kronecker_equation(sig: &FreeFormSignature, s1: usize, s2: usize) -> Result<Equation> {
    if !sig.index().is_trivial() {
        return Err(Error::NonTrivialIndex("commutation equations".into()));
    }
    let a = sig.symbol(s1);
    let b = sig.symbol(s2);
    let (n1, n2) = (a.arity.size(0), b.arity.size(0));
    let (c1n, c2n) = (a.param.size(0), b.param.size(0));
    let arity = product(&a.arity, &b.arity)?.object;
    let param = product(&a.param, &b.param)?.object;
    let var = |j1: usize, j2: usize| Term::var(0, j1 * n2 + j2);
    let mut lhs = Vec::with_capacity(c1n * c2n);
    let mut rhs = Vec::with_capacity(c1n * c2n);
    for c1 in 0..c1n {
        for c2 in 0..c2n {
            let inner_first: Vec<Term> = (0..n2)
                .map(|j2| Term::app(s1, vec![(0..n1).map(|j1| var(j1, j2)).collect()], (0, c1)))
                .collect();
            lhs.push(Term::app(s2, vec![inner_first], (0, c2)));
            let inner_second: Vec<Term> = (0..n1)
                .map(|j1| Term::app(s2, vec![(0..n2).map(|j2| var(j1, j2)).collect()], (0, c2)))
                .collect();
            rhs.push(Term::app(s1, vec![inner_second], (0, c1)));
        }
    }
    Equation::new(
        sig,
        &format!("commute.{}.{}", a.name, b.name),
        ParamTerm::new(sig, &arity, &param, vec![lhs])?,
        ParamTerm::new(sig, &arity, &param, vec![rhs])?,
    )
}

/// The sum together with the commutation of every symbol of `p1` with every
/// symbol of `p2`.
pub fn tensor(p1: &Presentation, p2: &Presentation) -> Result<Presentation> {
    if !p1.signature.index().is_trivial() {
        return Err(Error::NonTrivialIndex("tensor product".into()));
    }
    let s = sum(p1, p2)?;
    let shift = p1.signature.len();
    let mut equations = s.equations.clone();
    for s1 in 0..shift {
        for s2 in 0..p2.signature.len() {
            equations.push(kronecker_equation(&s.signature, s1, shift + s2)?);
        }
    }
    Presentation::new(&format!("{}*{}", p1.name, p2.name), &s.signature, equations)
}

/// Groups equations by arity into one equation per arity whose parameter is
/// the coproduct of the parameters, in order of first occurrence.
pub fn bundled_equations(p: &Presentation) -> Result<Vec<Equation>> {
    let sig = &p.signature;
    let mut groups: Vec<(Presheaf, Vec<&Equation>)> = Vec::new();
    for e in &p.equations {
        match groups.iter_mut().find(|(a, _)| a == e.arity()) {
            Some((_, g)) => g.push(e),
            None => groups.push((e.arity().clone(), vec![e])),
        }
    }
    let n = sig.index().object_count();
    let mut out = Vec::new();
    for (k, (arity, members)) in groups.iter().enumerate() {
        let params: Vec<Presheaf> = members.iter().map(|e| e.param().clone()).collect();
        let c = coproduct_all(sig.index(), &params)?;
        let mut lhs: Vec<Vec<Term>> = vec![Vec::new(); n];
        let mut rhs: Vec<Vec<Term>> = vec![Vec::new(); n];
        for e in members {
            for b in 0..n {
                lhs[b].extend(e.lhs.components()[b].iter().cloned());
                rhs[b].extend(e.rhs.components()[b].iter().cloned());
            }
        }
        let relative = members.iter().any(|e| e.relative);
        let l = ParamTerm::new(sig, arity, &c.object, lhs)?;
        let r = ParamTerm::new(sig, arity, &c.object, rhs)?;
        let name = format!("bundle{k}");
        out.push(if relative {
            Equation::relative(sig, &name, l, r)?
        } else {
            Equation::new(sig, &name, l, r)?
        });
    }
    Ok(out)
}
