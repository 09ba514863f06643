//! The Galois connection between sets of algebras and sets of
//! generator-parametrized equations, computed inside a finite window.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::algebra::{enumerate_algebras, interpretation_table_for, Algebra};
use crate::base::{HomSet, Presheaf, PresheafMorphism};
use crate::error::{Error, Result};
use crate::syntax::{enumerate_terms, Equation, FreeFormSignature, ParamTerm, TermUniverse};

/// The finite window: carrier bounds per sort, term depth, generator
/// objects for parameters, and the variable contexts equations may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisScale {
    pub sizes: Vec<usize>,
    pub depth: usize,
    pub generators: Vec<Presheaf>,
    pub contexts: Vec<Presheaf>,
}

impl GaloisScale {
    pub fn new(sizes: Vec<usize>, depth: usize, generators: Vec<Presheaf>, contexts: Vec<Presheaf>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::Scale("the generator list is empty".into()));
        };
        let index = first.index();
        if generators.iter().chain(&contexts).any(|g| g.index() != index) {
            return Err(Error::MismatchedIndex);
        }
        if sizes.len() != index.object_count() {
            return Err(Error::Scale(format!(
                "{} size bounds for {} sorts",
                sizes.len(),
                index.object_count()
            )));
        }
        Ok(GaloisScale {
            sizes,
            depth,
            generators,
            contexts,
        })
    }

    /// `(n,d,|G|)` as printed in reports.
    pub fn label(&self) -> String {
        let n = match self.sizes.as_slice() {
            [n] => n.to_string(),
            many => format!("[{}]", many.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")),
        };
        format!("({n},{},{})", self.depth, self.generators.len())
    }

    fn admits_algebra(&self, a: &Algebra) -> bool {
        a.carrier().sizes().iter().zip(&self.sizes).all(|(s, n)| s <= n)
    }
}

/// An equation of the window: two natural maps `G → T_S J` into the depth
/// bounded terms, by index in the corresponding hom set, with `lhs < rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WindowEquation {
    pub context: usize,
    pub generator: usize,
    pub lhs: usize,
    pub rhs: usize,
}

/// Every algebra and every equation of a scale, with the satisfaction
/// relation between them.
pub struct GaloisWindow {
    signature: Arc<FreeFormSignature>,
    scale: GaloisScale,
    algebras: Vec<Algebra>,
    universes: Vec<TermUniverse>,
    maps: Vec<Vec<HomSet>>,
    equations: Vec<WindowEquation>,
    position: HashMap<WindowEquation, usize>,
    satisfied: Vec<FixedBitSet>,
}

impl GaloisWindow {
    /// Enumerates the window. `ceiling` bounds the algebra search and the
    /// number of equations.
    pub fn new(sig: &Arc<FreeFormSignature>, scale: &GaloisScale, ceiling: u64) -> Result<Self> {
        if scale.generators[0].index() != sig.index() {
            return Err(Error::MismatchedIndex);
        }
        let algebras = enumerate_algebras(sig, &[], &scale.sizes, ceiling)?;
        let universes: Vec<TermUniverse> = scale
            .contexts
            .iter()
            .map(|j| enumerate_terms(sig, j, scale.depth))
            .collect::<Result<_>>()?;
        let maps: Vec<Vec<HomSet>> = universes
            .iter()
            .map(|u| {
                scale
                    .generators
                    .iter()
                    .map(|g| HomSet::new(g, u.presheaf()))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let total: u64 = maps
            .iter()
            .flatten()
            .map(|h| (h.len() as u64) * (h.len() as u64).saturating_sub(1) / 2)
            .sum();
        if total > ceiling {
            return Err(Error::Ceiling {
                explored: total,
                ceiling,
                projected: format!("{total} equations"),
            });
        }
        let mut equations = Vec::with_capacity(total as usize);
        for (context, row) in maps.iter().enumerate() {
            for (generator, h) in row.iter().enumerate() {
                for lhs in 0..h.len() {
                    for rhs in lhs + 1..h.len() {
                        equations.push(WindowEquation {
                            context,
                            generator,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
        let position = equations.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let satisfied = algebras
            .par_iter()
            .map(|a| {
                let keys = map_kernels(a, &universes, &maps)?;
                let mut bits = FixedBitSet::with_capacity(equations.len());
                for (i, e) in equations.iter().enumerate() {
                    let k = &keys[e.context][e.generator];
                    if k[e.lhs] == k[e.rhs] {
                        bits.insert(i);
                    }
                }
                Ok(bits)
            })
            .collect::<Result<_>>()?;
        Ok(GaloisWindow {
            signature: sig.clone(),
            scale: scale.clone(),
            algebras,
            universes,
            maps,
            equations,
            position,
            satisfied,
        })
    }

    pub fn scale(&self) -> &GaloisScale {
        &self.scale
    }

    pub fn algebras(&self) -> &[Algebra] {
        &self.algebras
    }

    pub fn equations(&self) -> &[WindowEquation] {
        &self.equations
    }

    /// The equations satisfied by one algebra.
    pub fn satisfied_by(&self, algebra: usize) -> &FixedBitSet {
        &self.satisfied[algebra]
    }

    pub fn algebra_index(&self, a: &Algebra) -> Option<usize> {
        self.algebras.iter().position(|b| b == a)
    }

    /// Locates an equation with parameter in `G`, context in the scale and
    /// depth within bound; reflexive equations have no index.
    pub fn equation_index(&self, e: &Equation) -> Result<Option<usize>> {
        let outside = |why: &str| Err(Error::Scale(format!("equation {} {why}", e.name)));
        let Some(context) = self.scale.contexts.iter().position(|j| j == e.arity()) else {
            return outside("has an arity outside the scale contexts");
        };
        let Some(generator) = self.scale.generators.iter().position(|g| g == e.param()) else {
            return outside("has a parameter outside the generators");
        };
        if e.depth() > self.scale.depth {
            return outside("is deeper than the scale");
        }
        let locate = |t: &ParamTerm| -> Option<usize> {
            let u = &self.universes[context];
            let flat: Vec<usize> = t.components().iter().flatten().map(|s| u.position(s)).collect::<Option<_>>()?;
            self.maps[context][generator].index_of(&flat)
        };
        let (Some(l), Some(r)) = (locate(&e.lhs), locate(&e.rhs)) else {
            return outside("is not a natural family of window terms");
        };
        if l == r {
            return Ok(None);
        }
        let key = WindowEquation {
            context,
            generator,
            lhs: l.min(r),
            rhs: l.max(r),
        };
        Ok(Some(self.position[&key]))
    }

    /// The equation as a pair of parametrized terms.
    pub fn equation(&self, i: usize) -> Equation {
        let e = self.equations[i];
        let g = &self.scale.generators[e.generator];
        let u = &self.universes[e.context];
        let h = &self.maps[e.context][e.generator];
        let side = |m: usize| {
            let flat = h.get(m);
            let comps = (0..g.index().object_count())
                .map(|b| (0..g.size(b)).map(|c| u.terms(b)[flat[g.flat(b, c)]].clone()).collect())
                .collect();
            ParamTerm::new(&self.signature, u.vars(), g, comps).expect("window maps are natural")
        };
        Equation::new(
            &self.signature,
            &format!("w{}_{}_{}_{}", e.context, e.generator, e.lhs, e.rhs),
            side(e.lhs),
            side(e.rhs),
        )
        .expect("window equations are well formed")
    }

    pub fn algebra_bits(&self, algebras: &[Algebra]) -> Result<FixedBitSet> {
        let mut bits = FixedBitSet::with_capacity(self.algebras.len());
        for a in algebras {
            if !Arc::ptr_eq(a.signature(), &self.signature) && **a.signature() != *self.signature {
                return Err(Error::Scale("algebra over a different signature".into()));
            }
            if !self.scale.admits_algebra(a) {
                return Err(Error::Scale(format!(
                    "carrier {:?} exceeds the bound {:?}",
                    a.carrier().sizes(),
                    self.scale.sizes
                )));
            }
            bits.insert(self.algebra_index(a).ok_or_else(|| Error::Internal("algebra missing from window".into()))?);
        }
        Ok(bits)
    }

    pub fn equation_bits(&self, equations: &[Equation]) -> Result<FixedBitSet> {
        let mut bits = FixedBitSet::with_capacity(self.equations.len());
        for e in equations {
            if let Some(i) = self.equation_index(e)? {
                bits.insert(i);
            }
        }
        Ok(bits)
    }

    /// Algebras satisfying every equation in `e`.
    pub fn sat_star(&self, e: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.algebras.len());
        for (i, s) in self.satisfied.iter().enumerate() {
            if e.is_subset(s) {
                out.insert(i);
            }
        }
        out
    }

    /// Equations satisfied by every algebra in `a`.
    pub fn sat_lower(&self, a: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.equations.len());
        out.insert_range(..);
        for i in a.ones() {
            out.intersect_with(&self.satisfied[i]);
        }
        out
    }

    pub fn algebras_of(&self, bits: &FixedBitSet) -> Vec<Algebra> {
        bits.ones().map(|i| self.algebras[i].clone()).collect()
    }

    pub fn equations_of(&self, bits: &FixedBitSet) -> Vec<Equation> {
        bits.ones().map(|i| self.equation(i)).collect()
    }
}

/// For each context and generator: the kernel class of each natural map
/// `G → T_S J` under interpretation in `a`.
fn map_kernels(a: &Algebra, universes: &[TermUniverse], maps: &[Vec<HomSet>]) -> Result<Vec<Vec<Vec<u32>>>> {
    let mut out = Vec::with_capacity(universes.len());
    for (u, row) in universes.iter().zip(maps) {
        let table = interpretation_table_for(a, u.clone())?;
        let sorts = u.vars().index().object_count();
        let mut class: Vec<Vec<u32>> = Vec::with_capacity(sorts);
        for b in 0..sorts {
            let mut ids: HashMap<&[usize], u32> = HashMap::new();
            class.push(
                table.rows[b]
                    .iter()
                    .map(|r| {
                        let next = ids.len() as u32;
                        *ids.entry(r.as_slice()).or_insert(next)
                    })
                    .collect(),
            );
        }
        let mut per_generator = Vec::with_capacity(row.len());
        for h in row {
            let g = h.source();
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut flat = vec![0; h.stride()];
            let mut keys = Vec::with_capacity(h.len());
            for m in 0..h.len() {
                h.get_into(m, &mut flat);
                let key: Vec<u32> = flat
                    .iter()
                    .enumerate()
                    .map(|(p, &t)| class[g.unflat(p).0][t])
                    .collect();
                let next = ids.len() as u32;
                keys.push(*ids.entry(key).or_insert(next));
            }
            per_generator.push(keys);
        }
        out.push(per_generator);
    }
    Ok(out)
}

/// Algebras within the scale satisfying every equation of `e`.
pub fn sat_star(sig: &Arc<FreeFormSignature>, e: &[Equation], scale: &GaloisScale, ceiling: u64) -> Result<Vec<Algebra>> {
    for eq in e {
        let in_scale = scale.contexts.contains(eq.arity())
            && scale.generators.contains(eq.param())
            && eq.depth() <= scale.depth;
        if !in_scale {
            return Err(Error::Scale(format!("equation {} lies outside {}", eq.name, scale.label())));
        }
    }
    enumerate_algebras(sig, e, &scale.sizes, ceiling)
}

/// All non-reflexive window equations satisfied by every algebra of `a`,
/// one per unordered pair.
pub fn sat_lower_g(window: &GaloisWindow, a: &[Algebra]) -> Result<Vec<Equation>> {
    let bits = window.algebra_bits(a)?;
    Ok(window.equations_of(&window.sat_lower(&bits)))
}

/// Every restriction of every equation along every map from a generator into
/// its parameter.
pub fn restrict_to_generators(e: &[Equation], generators: &[Presheaf]) -> Result<Vec<Equation>> {
    let mut out = Vec::new();
    for eq in e {
        for (gi, g) in generators.iter().enumerate() {
            let h = HomSet::new(g, eq.param())?;
            for x in 0..h.len() {
                let m: PresheafMorphism = h.morphism(x);
                let mut r = eq.precompose(&m)?;
                r.name = format!("{}@{gi}.{x}", eq.name);
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// `sat_star(sat_lower_g(a))` within the window.
pub fn variety_generated(window: &GaloisWindow, a: &[Algebra]) -> Result<Vec<Algebra>> {
    let bits = window.algebra_bits(a)?;
    Ok(window.algebras_of(&window.sat_star(&window.sat_lower(&bits))))
}

/// One checked law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawResult {
    pub name: &'static str,
    pub witness: Option<String>,
}

/// Law results together with the scale they were checked at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisReport {
    pub scale: String,
    pub laws: Vec<LawResult>,
}

impl GaloisReport {
    pub fn ok(&self) -> bool {
        self.laws.iter().all(|l| l.witness.is_none())
    }
}

impl fmt::Display for GaloisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.laws {
            match &l.witness {
                None => writeln!(f, "LAW {} OK witness=- scale={}", l.name, self.scale)?,
                Some(w) => writeln!(f, "LAW {} FAIL witness={w} scale={}", l.name, self.scale)?,
            }
        }
        Ok(())
    }
}

/// Checks the Galois laws at one pair `(E, A)` given as window bitsets.
pub fn check_galois_bits(window: &GaloisWindow, e: &FixedBitSet, a: &FixedBitSet) -> GaloisReport {
    let star_e = window.sat_star(e);
    let lower_a = window.sat_lower(a);
    let first_missing = |small: &FixedBitSet, big: &FixedBitSet| small.difference(big).next();
    let mut laws = Vec::new();
    let left = a.is_subset(&star_e);
    let right = e.is_subset(&lower_a);
    laws.push(LawResult {
        name: "adjunction",
        witness: (left != right).then(|| format!("A<=Sat*(E)={left},E<=Sat_*(A)={right}")),
    });
    let triple_star = window.sat_star(&window.sat_lower(&star_e));
    laws.push(LawResult {
        name: "triple-star",
        witness: (triple_star != star_e).then(|| {
            let alg = triple_star.symmetric_difference(&star_e).next().unwrap_or(0);
            format!("algebra#{alg}")
        }),
    });
    let triple_lower = window.sat_lower(&window.sat_star(&lower_a));
    laws.push(LawResult {
        name: "triple-lower",
        witness: (triple_lower != lower_a).then(|| {
            let eq = triple_lower.symmetric_difference(&lower_a).next().unwrap_or(0);
            format!("equation#{eq}")
        }),
    });
    let closure_a = window.sat_star(&lower_a);
    let closure_e = window.sat_lower(&star_e);
    laws.push(LawResult {
        name: "unit-algebras",
        witness: first_missing(a, &closure_a).map(|i| format!("algebra#{i}")),
    });
    laws.push(LawResult {
        name: "unit-equations",
        witness: first_missing(e, &closure_e).map(|i| format!("equation#{i}")),
    });
    let twice_a = window.sat_star(&window.sat_lower(&closure_a));
    laws.push(LawResult {
        name: "idempotent-algebras",
        witness: (twice_a != closure_a).then(|| "closure moved".to_string()),
    });
    let twice_e = window.sat_lower(&window.sat_star(&closure_e));
    laws.push(LawResult {
        name: "idempotent-equations",
        witness: (twice_e != closure_e).then(|| "closure moved".to_string()),
    });
    GaloisReport {
        scale: window.scale.label(),
        laws,
    }
}

/// Checks the Galois laws at `(E, A)`; inputs outside the window are a
/// scale error.
pub fn check_galois_laws(window: &GaloisWindow, e: &[Equation], a: &[Algebra]) -> Result<GaloisReport> {
    let eb = window.equation_bits(e)?;
    let ab = window.algebra_bits(a)?;
    Ok(check_galois_bits(window, &eb, &ab))
}
