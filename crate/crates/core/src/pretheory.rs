//! Pretheories, their concrete models, and compilation to presentations.

use std::fmt;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::base::{compose_flat, copower, HomSet, Presheaf};
use crate::error::{Error, Result};
use crate::presentation::{free_algebra, Presentation};
use crate::syntax::{Equation, FreeFormSignature, ParamTerm, Symbol, Term};

/// A category on the objects `K` with an identity-on-objects functor
/// `τ: K^op → T`.
///
/// Morphisms `J → K` of `T` are tokens `0..homs[j][k]`. Composition is stored
/// in diagrammatic order: `comp[j][k][l][f · |T(K,L)| + g]` is `f` followed
/// by `g`. `tau[j][k][u]` is the token of the `u`-th map `K → J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pretheory {
    name: String,
    objects: Vec<Presheaf>,
    homs: Vec<Vec<usize>>,
    comp: Vec<Vec<Vec<Vec<usize>>>>,
    identity: Vec<usize>,
    tau: Vec<Vec<Vec<usize>>>,
    labels: Vec<Vec<Vec<String>>>,
}

/// A failed pretheory law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PretheoryViolation {
    Associativity { objects: [usize; 4], f: usize, g: usize, h: usize },
    LeftUnit { j: usize, k: usize, f: usize },
    RightUnit { j: usize, k: usize, f: usize },
    TauIdentity { j: usize },
    TauComposition { j: usize, k: usize, l: usize, u: usize, v: usize },
}

impl fmt::Display for PretheoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PretheoryViolation::Associativity { objects: o, f: a, g, h } => {
                write!(f, "associativity objects={o:?} f={a} g={g} h={h}")
            }
            PretheoryViolation::LeftUnit { j, k, f: a } => write!(f, "left-unit J={j} K={k} f={a}"),
            PretheoryViolation::RightUnit { j, k, f: a } => write!(f, "right-unit J={j} K={k} f={a}"),
            PretheoryViolation::TauIdentity { j } => write!(f, "tau-identity J={j}"),
            PretheoryViolation::TauComposition { j, k, l, u, v } => {
                write!(f, "tau-composition J={j} K={k} L={l} u={u} v={v}")
            }
        }
    }
}

impl Pretheory {
    /// Builds a pretheory from its tables; only shapes are checked.
    pub fn new(
        name: &str,
        objects: Vec<Presheaf>,
        homs: Vec<Vec<usize>>,
        comp: Vec<Vec<Vec<Vec<usize>>>>,
        identity: Vec<usize>,
        tau: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let n = objects.len();
        let bad = |what: &str| Err(Error::Shape(format!("pretheory {what} has the wrong shape")));
        if homs.len() != n || homs.iter().any(|r| r.len() != n) {
            return bad("hom counts");
        }
        if identity.len() != n || identity.iter().enumerate().any(|(j, &i)| i >= homs[j][j]) {
            return bad("identities");
        }
        if comp.len() != n {
            return bad("composition");
        }
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let t = comp[j].get(k).and_then(|r| r.get(l));
                    match t {
                        Some(t) if t.len() == homs[j][k] * homs[k][l] && t.iter().all(|&x| x < homs[j][l]) => {}
                        _ => return bad("composition"),
                    }
                }
            }
        }
        if tau.len() != n {
            return bad("tau");
        }
        for j in 0..n {
            for k in 0..n {
                let maps = HomSet::new(&objects[k], &objects[j])?.len();
                match tau[j].get(k) {
                    Some(t) if t.len() == maps && t.iter().all(|&x| x < homs[j][k]) => {}
                    _ => return bad("tau"),
                }
            }
        }
        let labels = (0..n)
            .map(|j| (0..n).map(|k| (0..homs[j][k]).map(|f| format!("f{f}")).collect()).collect())
            .collect();
        Ok(Pretheory {
            name: name.to_string(),
            objects,
            homs,
            comp,
            identity,
            tau,
            labels,
        })
    }

    /// Replaces the token names.
    pub fn with_labels(mut self, labels: Vec<Vec<Vec<String>>>) -> Result<Self> {
        let n = self.objects.len();
        let ok = labels.len() == n
            && (0..n).all(|j| labels[j].len() == n && (0..n).all(|k| labels[j][k].len() == self.homs[j][k]));
        if !ok {
            return Err(Error::Shape("pretheory labels have the wrong shape".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[Presheaf] {
        &self.objects
    }

    /// `|T(J, K)|`.
    pub fn hom_count(&self, j: usize, k: usize) -> usize {
        self.homs[j][k]
    }

    /// `f` followed by `g`.
    pub fn compose(&self, j: usize, k: usize, l: usize, f: usize, g: usize) -> usize {
        self.comp[j][k][l][f * self.homs[k][l] + g]
    }

    pub fn composition_table(&self, j: usize, k: usize, l: usize) -> &[usize] {
        &self.comp[j][k][l]
    }

    pub fn identity(&self, j: usize) -> usize {
        self.identity[j]
    }

    pub fn tau(&self, j: usize, k: usize) -> &[usize] {
        &self.tau[j][k]
    }

    pub fn label(&self, j: usize, k: usize, f: usize) -> &str {
        &self.labels[j][k][f]
    }

    /// A copy with one composition entry changed.
    pub fn with_composition(&self, j: usize, k: usize, l: usize, index: usize, value: usize) -> Result<Self> {
        if value >= self.homs[j][l] || index >= self.comp[j][k][l].len() {
            return Err(Error::Shape("composition entry out of range".into()));
        }
        let mut out = self.clone();
        out.comp[j][k][l][index] = value;
        Ok(out)
    }
}

/// Every violated law, in a fixed order.
pub fn check_pretheory(t: &Pretheory) -> Result<Vec<PretheoryViolation>> {
    let n = t.objects.len();
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            for f in 0..t.homs[j][k] {
                if t.compose(j, j, k, t.identity[j], f) != f {
                    out.push(PretheoryViolation::LeftUnit { j, k, f });
                }
                if t.compose(j, k, k, f, t.identity[k]) != f {
                    out.push(PretheoryViolation::RightUnit { j, k, f });
                }
            }
        }
    }
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                for m in 0..n {
                    for f in 0..t.homs[j][k] {
                        for g in 0..t.homs[k][l] {
                            let fg = t.compose(j, k, l, f, g);
                            for h in 0..t.homs[l][m] {
                                let left = t.compose(j, l, m, fg, h);
                                let right = t.compose(j, k, m, f, t.compose(k, l, m, g, h));
                                if left != right {
                                    out.push(PretheoryViolation::Associativity {
                                        objects: [j, k, l, m],
                                        f,
                                        g,
                                        h,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for j in 0..n {
        let maps = HomSet::new(&t.objects[j], &t.objects[j])?;
        let id: Vec<usize> = (0..t.objects[j].total()).map(|p| t.objects[j].unflat(p).1).collect();
        let u = maps.index_of(&id).expect("identity is natural");
        if t.tau[j][j][u] != t.identity[j] {
            out.push(PretheoryViolation::TauIdentity { j });
        }
    }
    // For u: K → J and v: L → K, τ(u ∘ v) = τ(u) followed by τ(v).
    for j in 0..n {
        for k in 0..n {
            let us = HomSet::new(&t.objects[k], &t.objects[j])?;
            for l in 0..n {
                let vs = HomSet::new(&t.objects[l], &t.objects[k])?;
                let uvs = HomSet::new(&t.objects[l], &t.objects[j])?;
                for u in 0..us.len() {
                    let uf = us.get(u);
                    for v in 0..vs.len() {
                        let uv = compose_flat(&vs.get(v), &t.objects[l], &uf, &t.objects[k]);
                        let w = uvs.index_of(&uv).expect("composite is natural");
                        if t.tau[j][l][w] != t.compose(j, k, l, t.tau[j][k][u], t.tau[k][l][v]) {
                            out.push(PretheoryViolation::TauComposition { j, k, l, u, v });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The free pretheory: `T(J, K)` is the set of maps `K → J`, with `τ` the
/// identity.
pub fn free_pretheory(objects: Vec<Presheaf>) -> Result<Pretheory> {
    let n = objects.len();
    let maps: Vec<Vec<HomSet>> = (0..n)
        .map(|j| (0..n).map(|k| HomSet::new(&objects[k], &objects[j])).collect())
        .collect::<Result<_>>()?;
    let homs = (0..n).map(|j| (0..n).map(|k| maps[j][k].len()).collect()).collect();
    let mut comp = vec![vec![vec![Vec::new(); n]; n]; n];
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                let mut table = Vec::with_capacity(maps[j][k].len() * maps[k][l].len());
                for f in 0..maps[j][k].len() {
                    let ff = maps[j][k].get(f);
                    for g in 0..maps[k][l].len() {
                        let fg = compose_flat(&maps[k][l].get(g), &objects[l], &ff, &objects[k]);
                        table.push(maps[j][l].index_of(&fg).expect("natural"));
                    }
                }
                comp[j][k][l] = table;
            }
        }
    }
    let identity = (0..n)
        .map(|j| {
            let id: Vec<usize> = (0..objects[j].total()).map(|p| objects[j].unflat(p).1).collect();
            maps[j][j].index_of(&id).expect("identity")
        })
        .collect();
    let tau = (0..n)
        .map(|j| (0..n).map(|k| (0..maps[j][k].len()).collect()).collect())
        .collect();
    Pretheory::new("free", objects, homs, comp, identity, tau)
}

/// The Kleisli pretheory of a presentation: `T(J, K)` is the set of maps
/// `K → T_P J` into the saturated free algebra on `J`. `None` when some free
/// algebra fails to saturate at depth `d`.
pub fn kleisli_pretheory(p: &Presentation, objects: &[Presheaf], depth: usize) -> Result<Option<Pretheory>> {
    let n = objects.len();
    let mut frees = Vec::with_capacity(n);
    for o in objects {
        let q = free_algebra(p, o, depth)?;
        if !q.saturated() {
            return Ok(None);
        }
        frees.push(q);
    }
    let maps: Vec<Vec<HomSet>> = (0..n)
        .map(|j| (0..n).map(|k| HomSet::new(&objects[k], frees[j].carrier())).collect())
        .collect::<Result<_>>()?;
    let homs = (0..n).map(|j| (0..n).map(|k| maps[j][k].len()).collect()).collect();
    let mut comp = vec![vec![vec![Vec::new(); n]; n]; n];
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                let mut table = Vec::with_capacity(maps[j][k].len() * maps[k][l].len());
                for f in 0..maps[j][k].len() {
                    let ff = maps[j][k].get(f);
                    for g in 0..maps[k][l].len() {
                        let gf = maps[k][l].get(g);
                        let composite: Vec<usize> = (0..objects[l].total())
                            .map(|pos| {
                                let (b, _) = objects[l].unflat(pos);
                                let t = frees[k].representative(b, gf[pos]);
                                frees[j]
                                    .eval(t, &|sb, x| ff[objects[k].flat(sb, x)])
                                    .expect("saturated quotient is total")
                            })
                            .collect();
                        table.push(maps[j][l].index_of(&composite).expect("Kleisli composite is natural"));
                    }
                }
                comp[j][k][l] = table;
            }
        }
    }
    let unit = |j: usize, u: &[usize], k: usize| -> Vec<usize> {
        (0..objects[k].total())
            .map(|pos| {
                let (b, _) = objects[k].unflat(pos);
                frees[j].generator_class(b, u[pos])
            })
            .collect()
    };
    let identity = (0..n)
        .map(|j| {
            let id: Vec<usize> = (0..objects[j].total()).map(|p| objects[j].unflat(p).1).collect();
            maps[j][j].index_of(&unit(j, &id, j)).expect("unit is natural")
        })
        .collect();
    let mut tau = vec![vec![Vec::new(); n]; n];
    for j in 0..n {
        for k in 0..n {
            let us = HomSet::new(&objects[k], &objects[j])?;
            tau[j][k] = (0..us.len())
                .map(|u| maps[j][k].index_of(&unit(j, &us.get(u), k)).expect("natural"))
                .collect();
        }
    }
    let sig = p.signature();
    let labels = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    (0..maps[j][k].len())
                        .map(|f| {
                            let flat = maps[j][k].get(f);
                            let parts: Vec<String> = flat
                                .iter()
                                .enumerate()
                                .map(|(pos, &c)| {
                                    let (b, _) = objects[k].unflat(pos);
                                    frees[j].representative(b, c).display(sig).to_string()
                                })
                                .collect();
                            format!("[{}]", parts.join(" "))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let t = Pretheory::new(&format!("kleisli_{}", p.name()), objects.to_vec(), homs, comp, identity, tau)?
        .with_labels(labels)?;
    if let Some(v) = check_pretheory(&t)?.first() {
        return Err(Error::Internal(format!("Kleisli pretheory violates {v}")));
    }
    Ok(Some(t))
}

/// A concrete model: for each token `f: J → K` and each `φ: J → A`, the
/// index of `M(f)(φ)` in `HomSet(K, A)`, stored at `f · |hom(J, A)| + φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteModel {
    carrier: Presheaf,
    action: Vec<Vec<Vec<usize>>>,
}

/// A failed concrete-model law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelViolation {
    Composition { j: usize, k: usize, l: usize, f: usize, g: usize, phi: usize },
    Identity { j: usize, phi: usize },
    Nerve { j: usize, k: usize, u: usize, phi: usize },
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelViolation::Composition { j, k, l, f: a, g, phi } => {
                write!(f, "composition J={j} K={k} L={l} f={a} g={g} phi={phi}")
            }
            ModelViolation::Identity { j, phi } => write!(f, "identity J={j} phi={phi}"),
            ModelViolation::Nerve { j, k, u, phi } => write!(f, "nerve J={j} K={k} u={u} phi={phi}"),
        }
    }
}

impl ConcreteModel {
    pub fn new(t: &Pretheory, carrier: &Presheaf, action: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let n = t.objects.len();
        let points: Vec<usize> = t
            .objects
            .iter()
            .map(|o| HomSet::new(o, carrier).map(|h| h.len()))
            .collect::<Result<_>>()?;
        let ok = action.len() == n
            && (0..n).all(|j| {
                action[j].len() == n
                    && (0..n).all(|k| {
                        action[j][k].len() == t.homs[j][k] * points[j] && action[j][k].iter().all(|&x| x < points[k])
                    })
            });
        if !ok {
            return Err(Error::Shape("concrete model table has the wrong shape".into()));
        }
        Ok(ConcreteModel {
            carrier: carrier.clone(),
            action,
        })
    }

    /// Precomposition: the model of the free pretheory on any carrier.
    pub fn nerve(t: &Pretheory, carrier: &Presheaf) -> Result<Self> {
        let n = t.objects.len();
        let points: Vec<HomSet> = t.objects.iter().map(|o| HomSet::new(o, carrier)).collect::<Result<_>>()?;
        let mut action = vec![vec![Vec::new(); n]; n];
        for j in 0..n {
            for k in 0..n {
                let us = HomSet::new(&t.objects[k], &t.objects[j])?;
                let mut table = Vec::new();
                for u in 0..us.len() {
                    let uf = us.get(u);
                    for phi in 0..points[j].len() {
                        let composite = compose_flat(&uf, &t.objects[k], &points[j].get(phi), &t.objects[j]);
                        table.push(points[k].index_of(&composite).expect("natural"));
                    }
                }
                action[j][k] = table;
            }
        }
        Self::new(t, carrier, action)
    }

    pub fn carrier(&self) -> &Presheaf {
        &self.carrier
    }

    pub fn act(&self, j: usize, k: usize, f: usize, phi: usize, points_j: usize) -> usize {
        self.action[j][k][f * points_j + phi]
    }

    pub fn table(&self, j: usize, k: usize) -> &[usize] {
        &self.action[j][k]
    }

    /// A copy with one entry changed.
    pub fn with_entry(&self, j: usize, k: usize, index: usize, value: usize) -> Self {
        let mut out = self.clone();
        out.action[j][k][index] = value;
        out
    }

    /// The corresponding algebra of the compiled presentation.
    pub fn to_algebra(&self, t: &Pretheory, sig: &Arc<FreeFormSignature>) -> Result<Algebra> {
        let n = t.objects.len();
        let points: Vec<HomSet> = t
            .objects
            .iter()
            .map(|o| HomSet::new(o, &self.carrier))
            .collect::<Result<_>>()?;
        let mut tables = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let ok = &t.objects[k];
                let param = copower(t.homs[j][k], ok);
                let mut values = Vec::with_capacity(points[j].len() * param.total());
                for phi in 0..points[j].len() {
                    for (b, c) in param.elements() {
                        let (f, x) = (c / ok.size(b), c % ok.size(b));
                        let image = points[k].get(self.action[j][k][f * points[j].len() + phi]);
                        values.push(image[ok.flat(b, x)]);
                    }
                }
                tables.push(values);
            }
        }
        Algebra::new(sig, &self.carrier, tables)
    }

    /// Reads a model off an algebra of the compiled presentation.
    pub fn from_algebra(t: &Pretheory, a: &Algebra) -> Result<Self> {
        let n = t.objects.len();
        let carrier = a.carrier();
        let points: Vec<HomSet> = t.objects.iter().map(|o| HomSet::new(o, carrier)).collect::<Result<_>>()?;
        let mut action = vec![vec![Vec::new(); n]; n];
        for j in 0..n {
            for k in 0..n {
                let ok = &t.objects[k];
                let table = a.table(j * n + k);
                let mut out = vec![0; t.homs[j][k] * points[j].len()];
                for phi in 0..points[j].len() {
                    for f in 0..t.homs[j][k] {
                        let flat: Vec<usize> = (0..ok.total())
                            .map(|pos| {
                                let (b, x) = ok.unflat(pos);
                                table.get(phi, b, f * ok.size(b) + x)
                            })
                            .collect();
                        out[f * points[j].len() + phi] = points[k]
                            .index_of(&flat)
                            .ok_or_else(|| Error::Internal("operation output is not natural".into()))?;
                    }
                }
                action[j][k] = out;
            }
        }
        Self::new(t, carrier, action)
    }
}

/// Every violated concrete-model law, in a fixed order.
pub fn check_concrete_model(t: &Pretheory, m: &ConcreteModel) -> Result<Vec<ModelViolation>> {
    let n = t.objects.len();
    let points: Vec<HomSet> = t
        .objects
        .iter()
        .map(|o| HomSet::new(o, &m.carrier))
        .collect::<Result<_>>()?;
    let np: Vec<usize> = points.iter().map(|p| p.len()).collect();
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                for f in 0..t.homs[j][k] {
                    for g in 0..t.homs[k][l] {
                        let fg = t.compose(j, k, l, f, g);
                        for phi in 0..np[j] {
                            let left = m.act(j, l, fg, phi, np[j]);
                            let right = m.act(k, l, g, m.act(j, k, f, phi, np[j]), np[k]);
                            if left != right {
                                out.push(ModelViolation::Composition { j, k, l, f, g, phi });
                            }
                        }
                    }
                }
            }
        }
    }
    for j in 0..n {
        for phi in 0..np[j] {
            if m.act(j, j, t.identity[j], phi, np[j]) != phi {
                out.push(ModelViolation::Identity { j, phi });
            }
        }
    }
    for j in 0..n {
        for k in 0..n {
            let us = HomSet::new(&t.objects[k], &t.objects[j])?;
            for u in 0..us.len() {
                let uf = us.get(u);
                for phi in 0..np[j] {
                    let composite = compose_flat(&uf, &t.objects[k], &points[j].get(phi), &t.objects[j]);
                    let expected = points[k].index_of(&composite).expect("natural");
                    if m.act(j, k, t.tau[j][k][u], phi, np[j]) != expected {
                        out.push(ModelViolation::Nerve { j, k, u, phi });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The presentation whose algebras are the concrete models: a symbol
/// `M<J>_<K>` of arity `J` and parameter `T(J,K)·K` per pair of objects, with
/// composition, identity and nerve equations.
pub fn presentation_of_pretheory(t: &Pretheory) -> Result<Presentation> {
    let n = t.objects.len();
    let index = t
        .objects
        .first()
        .map(|o| o.index().clone())
        .ok_or_else(|| Error::Shape("pretheory without objects".into()))?;
    let sorts = index.object_count();
    let obj = &t.objects;
    let symbols = (0..n)
        .flat_map(|j| {
            (0..n).map(move |k| Symbol {
                name: format!("M{j}_{k}"),
                arity: obj[j].clone(),
                param: copower(t.homs[j][k], &obj[k]),
            })
        })
        .collect();
    let sig = FreeFormSignature::new(&index, symbols)?;
    let op = |j: usize, k: usize| j * n + k;
    let vars = |j: usize| Term::vars_of(&obj[j]);
    let mut eqs = Vec::with_capacity(n * n * n + n + n * n);
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                let (tk, tl) = (t.homs[j][k], t.homs[k][l]);
                let param = copower(tk * tl, &obj[l]);
                let mut lhs = vec![Vec::new(); sorts];
                let mut rhs = vec![Vec::new(); sorts];
                for b in 0..sorts {
                    let lb = obj[l].size(b);
                    for id in 0..param.size(b) {
                        let (pair, z) = (id / lb, id % lb);
                        let (f, g) = (pair / tl, pair % tl);
                        let fg = t.compose(j, k, l, f, g);
                        lhs[b].push(Term::app(op(j, l), vars(j), (b, fg * lb + z)));
                        let binding: Vec<Vec<Term>> = (0..sorts)
                            .map(|b2| {
                                let kb = obj[k].size(b2);
                                (0..kb)
                                    .map(|y| Term::app(op(j, k), vars(j), (b2, f * kb + y)))
                                    .collect()
                            })
                            .collect();
                        rhs[b].push(Term::app(op(k, l), binding, (b, g * lb + z)));
                    }
                }
                eqs.push(Equation::new(
                    &sig,
                    &format!("comp{j}_{k}_{l}"),
                    ParamTerm::new(&sig, &obj[j], &param, lhs)?,
                    ParamTerm::new(&sig, &obj[j], &param, rhs)?,
                )?);
            }
        }
    }
    for j in 0..n {
        let lhs: Vec<Vec<Term>> = (0..sorts)
            .map(|b| {
                let jb = obj[j].size(b);
                (0..jb)
                    .map(|x| Term::app(op(j, j), vars(j), (b, t.identity[j] * jb + x)))
                    .collect()
            })
            .collect();
        eqs.push(Equation::new(
            &sig,
            &format!("id{j}"),
            ParamTerm::new(&sig, &obj[j], &obj[j], lhs)?,
            ParamTerm::new(&sig, &obj[j], &obj[j], vars(j))?,
        )?);
    }
    for j in 0..n {
        for k in 0..n {
            let us = HomSet::new(&obj[k], &obj[j])?;
            let param = copower(us.len(), &obj[k]);
            let mut lhs = vec![Vec::new(); sorts];
            let mut rhs = vec![Vec::new(); sorts];
            for b in 0..sorts {
                let kb = obj[k].size(b);
                for id in 0..param.size(b) {
                    let (u, y) = (id / kb, id % kb);
                    let uf = us.get(u);
                    lhs[b].push(Term::app(op(j, k), vars(j), (b, t.tau[j][k][u] * kb + y)));
                    rhs[b].push(Term::var(b, uf[obj[k].flat(b, y)]));
                }
            }
            eqs.push(Equation::new(
                &sig,
                &format!("nerve{j}_{k}"),
                ParamTerm::new(&sig, &obj[j], &param, lhs)?,
                ParamTerm::new(&sig, &obj[j], &param, rhs)?,
            )?);
        }
    }
    Presentation::new(&format!("compiled_{}", t.name), &sig, eqs)
}
