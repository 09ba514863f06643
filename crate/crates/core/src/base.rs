//! Finite presheaves over a finite index category.
//!
//! An [`IndexCategory`] is given by a complete composition table. A
//! [`Presheaf`] is a covariant functor from it into finite sets, with
//! elements of each sort numbered densely from zero. Morphisms between
//! presheaves are natural families of functions, and [`HomSet`] enumerates
//! all of them in lexicographic order of their concatenated component
//! tables.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// A sort is an object of the index category, identified by position.
pub type Sort = usize;

/// A morphism of the index category, identified by position.
pub type MorphismId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexMorphism {
    pub name: String,
    pub source: Sort,
    pub target: Sort,
}

/// A finite category presented by its full composition table.
///
/// Morphism ids `0..objects.len()` are the identities, in object order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct IndexCategory {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<IndexMorphism>,
    /// `compose[g][f]` is `g ∘ f` when `f.target == g.source`.
    compose: Vec<Vec<Option<MorphismId>>>,
    /// Non-identity morphisms out of each sort.
    out: Vec<Vec<MorphismId>>,
}

impl IndexCategory {
    /// Builds a category from object names, non-identity morphisms
    /// `(name, source, target)` and composites `(g, f, g∘f)` given by name.
    /// Composites with an identity are implicit.
    pub fn new(
        name: &str,
        objects: &[&str],
        morphisms: &[(&str, &str, &str)],
        composites: &[(&str, &str, &str)],
    ) -> Result<Arc<Self>> {
        let err = |m: String| Error::IndexCategory(format!("{name}: {m}"));
        let n = objects.len();
        for (i, o) in objects.iter().enumerate() {
            if objects[..i].contains(o) {
                return Err(err(format!("duplicate object {o}")));
            }
        }
        let sort = |o: &str| {
            objects
                .iter()
                .position(|x| *x == o)
                .ok_or_else(|| err(format!("unknown object {o}")))
        };
        let mut all: Vec<IndexMorphism> = objects
            .iter()
            .enumerate()
            .map(|(b, o)| IndexMorphism {
                name: format!("id_{o}"),
                source: b,
                target: b,
            })
            .collect();
        for (m, s, t) in morphisms {
            if all.iter().any(|x| x.name == *m) {
                return Err(err(format!("duplicate morphism {m}")));
            }
            all.push(IndexMorphism {
                name: m.to_string(),
                source: sort(s)?,
                target: sort(t)?,
            });
        }
        let by_name = |m: &str| {
            all.iter()
                .position(|x| x.name == m)
                .ok_or_else(|| err(format!("unknown morphism {m}")))
        };
        let total = all.len();
        let mut compose = vec![vec![None; total]; total];
        for g in 0..total {
            for f in 0..total {
                if all[f].target != all[g].source {
                    continue;
                }
                if f < n {
                    compose[g][f] = Some(g);
                } else if g < n {
                    compose[g][f] = Some(f);
                }
            }
        }
        for (g, f, gf) in composites {
            let (g, f, gf) = (by_name(g)?, by_name(f)?, by_name(gf)?);
            if all[f].target != all[g].source {
                return Err(err(format!(
                    "{} and {} are not composable",
                    all[g].name, all[f].name
                )));
            }
            if all[gf].source != all[f].source || all[gf].target != all[g].target {
                return Err(err(format!(
                    "composite {} has the wrong source or target",
                    all[gf].name
                )));
            }
            if compose[g][f].is_some() {
                return Err(err(format!(
                    "composite of {} after {} given twice",
                    all[g].name, all[f].name
                )));
            }
            compose[g][f] = Some(gf);
        }
        for g in 0..total {
            for f in 0..total {
                if all[f].target == all[g].source && compose[g][f].is_none() {
                    return Err(err(format!(
                        "missing composite of {} after {}",
                        all[g].name, all[f].name
                    )));
                }
            }
        }
        for h in 0..total {
            for g in 0..total {
                let Some(hg) = compose[h][g] else { continue };
                for f in 0..total {
                    let Some(gf) = compose[g][f] else { continue };
                    if compose[hg][f] != compose[h][gf] {
                        return Err(err(format!(
                            "composition is not associative at ({}, {}, {})",
                            all[h].name, all[g].name, all[f].name
                        )));
                    }
                }
            }
        }
        let out = (0..n)
            .map(|b| (n..total).filter(|&u| all[u].source == b).collect())
            .collect();
        Ok(Arc::new(IndexCategory {
            name: name.to_string(),
            objects: objects.iter().map(|s| s.to_string()).collect(),
            morphisms: all,
            compose,
            out,
        }))
    }

    /// The one-object discrete category; presheaves over it are finite sets.
    pub fn point() -> Arc<Self> {
        static POINT: OnceLock<Arc<IndexCategory>> = OnceLock::new();
        POINT
            .get_or_init(|| IndexCategory::new("point", &["*"], &[], &[]).expect("point"))
            .clone()
    }

    /// The parallel pair `s, t: 1 → 0`; presheaves over it are directed
    /// multigraphs with vertices in sort 0 and edges in sort 1.
    pub fn parallel_pair() -> Arc<Self> {
        static PAIR: OnceLock<Arc<IndexCategory>> = OnceLock::new();
        PAIR.get_or_init(|| {
            IndexCategory::new("graph", &["0", "1"], &[("s", "1", "0"), ("t", "1", "0")], &[])
                .expect("parallel pair")
        })
        .clone()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, b: Sort) -> &str {
        &self.objects[b]
    }

    pub fn sort_by_name(&self, name: &str) -> Option<Sort> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, u: MorphismId) -> &IndexMorphism {
        &self.morphisms[u]
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorphismId> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn identity(&self, b: Sort) -> MorphismId {
        b
    }

    pub fn is_identity(&self, u: MorphismId) -> bool {
        u < self.objects.len()
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: MorphismId, f: MorphismId) -> Option<MorphismId> {
        self.compose[g][f]
    }

    /// Non-identity morphisms with source `b`.
    pub fn out_of(&self, b: Sort) -> &[MorphismId] {
        &self.out[b]
    }

    /// Non-identity morphisms, in id order.
    pub fn non_identities(&self) -> std::ops::Range<MorphismId> {
        self.objects.len()..self.morphisms.len()
    }

    /// True when the only morphisms are identities.
    pub fn is_discrete(&self) -> bool {
        self.morphisms.len() == self.objects.len()
    }

    /// True for a one-object discrete category.
    pub fn is_trivial(&self) -> bool {
        self.objects.len() == 1 && self.is_discrete()
    }
}

#[derive(Debug, PartialEq, Eq)]
struct PresheafData {
    index: Arc<IndexCategory>,
    sizes: Vec<usize>,
    /// One table per morphism id, identities included.
    actions: Vec<Vec<usize>>,
    offsets: Vec<usize>,
}

/// A finite covariant presheaf. Cheap to clone.
#[derive(Clone)]
pub struct Presheaf(Arc<PresheafData>);

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Presheaf {}

impl Hash for Presheaf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.sizes.hash(state);
        self.0.actions.hash(state);
    }
}

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presheaf{:?}", self.0.sizes)?;
        for u in self.0.index.non_identities() {
            write!(f, " {}={:?}", self.0.index.morphism(u).name, self.0.actions[u])?;
        }
        Ok(())
    }
}

impl Presheaf {
    /// Builds a presheaf from sort sizes and one action table per
    /// non-identity morphism (in id order), checking functoriality.
    pub fn new(index: &Arc<IndexCategory>, sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let n = index.object_count();
        if sizes.len() != n {
            return Err(Error::Shape(format!(
                "presheaf over {} needs {} sizes, got {}",
                index.name(),
                n,
                sizes.len()
            )));
        }
        if maps.len() != index.morphism_count() - n {
            return Err(Error::Shape(format!(
                "presheaf over {} needs {} action tables, got {}",
                index.name(),
                index.morphism_count() - n,
                maps.len()
            )));
        }
        let mut actions: Vec<Vec<usize>> = (0..n).map(|b| (0..sizes[b]).collect()).collect();
        actions.extend(maps);
        for u in index.non_identities() {
            let m = index.morphism(u);
            let table = &actions[u];
            if table.len() != sizes[m.source] {
                return Err(Error::NotFunctorial(format!(
                    "action of {} has {} entries, expected {}",
                    m.name,
                    table.len(),
                    sizes[m.source]
                )));
            }
            if let Some(&bad) = table.iter().find(|&&y| y >= sizes[m.target]) {
                return Err(Error::NotFunctorial(format!(
                    "action of {} sends to {} outside sort {}",
                    m.name,
                    bad,
                    index.object_name(m.target)
                )));
            }
        }
        for g in 0..index.morphism_count() {
            for f in 0..index.morphism_count() {
                let Some(gf) = index.compose(g, f) else { continue };
                for x in 0..sizes[index.morphism(f).source] {
                    if actions[g][actions[f][x]] != actions[gf][x] {
                        return Err(Error::NotFunctorial(format!(
                            "{} ∘ {} differs from {} at element {}",
                            index.morphism(g).name,
                            index.morphism(f).name,
                            index.morphism(gf).name,
                            x
                        )));
                    }
                }
            }
        }
        Ok(Self::assemble(index.clone(), sizes, actions))
    }

    fn assemble(index: Arc<IndexCategory>, sizes: Vec<usize>, actions: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0;
        for &s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        offsets.push(acc);
        Presheaf(Arc::new(PresheafData {
            index,
            sizes,
            actions,
            offsets,
        }))
    }

    /// A finite set of size `n`, as a presheaf over the point.
    pub fn set(n: usize) -> Self {
        Self::assemble(IndexCategory::point(), vec![n], vec![(0..n).collect()])
    }

    pub fn empty(index: &Arc<IndexCategory>) -> Self {
        let n = index.object_count();
        Self::new(index, vec![0; n], vec![vec![]; index.morphism_count() - n]).expect("empty presheaf")
    }

    pub fn terminal(index: &Arc<IndexCategory>) -> Self {
        let n = index.object_count();
        Self::new(index, vec![1; n], vec![vec![0]; index.morphism_count() - n]).expect("terminal presheaf")
    }

    /// The representable presheaf `hom(b, -)`; elements of sort `b'` are the
    /// morphisms `b → b'` in id order.
    pub fn representable(index: &Arc<IndexCategory>, b: Sort) -> Self {
        let n = index.object_count();
        let elems: Vec<Vec<MorphismId>> = (0..n)
            .map(|t| {
                (0..index.morphism_count())
                    .filter(|&u| index.morphism(u).source == b && index.morphism(u).target == t)
                    .collect()
            })
            .collect();
        let sizes = elems.iter().map(|e| e.len()).collect();
        let maps = index
            .non_identities()
            .map(|u| {
                let m = index.morphism(u);
                elems[m.source]
                    .iter()
                    .map(|&f| {
                        let g = index.compose(u, f).expect("composable");
                        elems[m.target].iter().position(|&x| x == g).expect("element")
                    })
                    .collect()
            })
            .collect();
        Self::new(index, sizes, maps).expect("representable presheaf")
    }

    /// A directed multigraph over the parallel pair: `edges[i] = (source, target)`.
    pub fn graph(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            &IndexCategory::parallel_pair(),
            vec![vertices, edges.len()],
            vec![
                edges.iter().map(|e| e.0).collect(),
                edges.iter().map(|e| e.1).collect(),
            ],
        )
    }

    /// The path graph with `n` edges `i → i+1`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
        Self::graph(n + 1, &edges).expect("path graph")
    }

    pub fn index(&self) -> &Arc<IndexCategory> {
        &self.0.index
    }

    pub fn size(&self, b: Sort) -> usize {
        self.0.sizes[b]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0.sizes
    }

    /// Total number of elements across sorts.
    pub fn total(&self) -> usize {
        self.0.offsets[self.0.sizes.len()]
    }

    /// Position of the first element of sort `b` in the flat enumeration.
    pub fn offset(&self, b: Sort) -> usize {
        self.0.offsets[b]
    }

    pub fn flat(&self, b: Sort, x: usize) -> usize {
        self.0.offsets[b] + x
    }

    /// The sort and id of a flat position.
    pub fn unflat(&self, p: usize) -> (Sort, usize) {
        let b = self.0.offsets.partition_point(|&o| o <= p) - 1;
        (b, p - self.0.offsets[b])
    }

    pub fn act(&self, u: MorphismId, x: usize) -> usize {
        self.0.actions[u][x]
    }

    pub fn action(&self, u: MorphismId) -> &[usize] {
        &self.0.actions[u]
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Elements as `(sort, id)` in flat order.
    pub fn elements(&self) -> impl Iterator<Item = (Sort, usize)> + '_ {
        (0..self.0.sizes.len()).flat_map(move |b| (0..self.0.sizes[b]).map(move |x| (b, x)))
    }

    fn same_index(&self, other: &Presheaf) -> Result<()> {
        if self.0.index == other.0.index {
            Ok(())
        } else {
            Err(Error::MismatchedIndex)
        }
    }
}

/// `(S·X)(b) = S × X(b)`; the pair `(s, x)` has id `s·|X(b)| + x`.
pub fn copower(s: usize, x: &Presheaf) -> Presheaf {
    let index = x.index();
    let sizes = x.sizes().iter().map(|&k| s * k).collect();
    let maps = index
        .non_identities()
        .map(|u| {
            let m = index.morphism(u);
            let (ks, kt) = (x.size(m.source), x.size(m.target));
            (0..s * ks).map(|p| (p / ks.max(1)) * kt + x.act(u, p % ks.max(1))).collect()
        })
        .collect();
    Presheaf::new(index, sizes, maps).expect("copower")
}

pub struct Product {
    pub object: Presheaf,
    pub first: PresheafMorphism,
    pub second: PresheafMorphism,
}

/// The pointwise product; `(x, y)` has id `x·|Y(b)| + y`.
pub fn product(x: &Presheaf, y: &Presheaf) -> Result<Product> {
    x.same_index(y)?;
    let index = x.index();
    let n = index.object_count();
    let sizes: Vec<usize> = (0..n).map(|b| x.size(b) * y.size(b)).collect();
    let maps = index
        .non_identities()
        .map(|u| {
            let m = index.morphism(u);
            let (ys, yt) = (y.size(m.source), y.size(m.target));
            (0..sizes[m.source])
                .map(|p| x.act(u, p / ys) * yt + y.act(u, p % ys))
                .collect()
        })
        .collect();
    let object = Presheaf::new(index, sizes.clone(), maps)?;
    let first = (0..n)
        .map(|b| (0..sizes[b]).map(|p| p / y.size(b)).collect())
        .collect();
    let second = (0..n)
        .map(|b| (0..sizes[b]).map(|p| p % y.size(b)).collect())
        .collect();
    Ok(Product {
        first: PresheafMorphism::new(&object, x, first)?,
        second: PresheafMorphism::new(&object, y, second)?,
        object,
    })
}

pub struct Coproduct {
    pub object: Presheaf,
    pub injections: Vec<PresheafMorphism>,
}

/// The disjoint union of a family, summands laid out in order within
/// each sort.
pub fn coproduct_all(index: &Arc<IndexCategory>, family: &[Presheaf]) -> Result<Coproduct> {
    for x in family {
        if x.index() != index {
            return Err(Error::MismatchedIndex);
        }
    }
    let n = index.object_count();
    let mut starts = vec![vec![0; n]; family.len() + 1];
    for (i, x) in family.iter().enumerate() {
        for b in 0..n {
            starts[i + 1][b] = starts[i][b] + x.size(b);
        }
    }
    let sizes = starts[family.len()].clone();
    let maps = index
        .non_identities()
        .map(|u| {
            let m = index.morphism(u);
            let mut table = Vec::with_capacity(sizes[m.source]);
            for (i, x) in family.iter().enumerate() {
                for e in 0..x.size(m.source) {
                    table.push(starts[i][m.target] + x.act(u, e));
                }
            }
            table
        })
        .collect();
    let object = Presheaf::new(index, sizes, maps)?;
    let injections = family
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let comps = (0..n)
                .map(|b| (0..x.size(b)).map(|e| starts[i][b] + e).collect())
                .collect();
            PresheafMorphism::new(x, &object, comps)
        })
        .collect::<Result<_>>()?;
    Ok(Coproduct { object, injections })
}

pub fn coproduct(x: &Presheaf, y: &Presheaf) -> Result<Coproduct> {
    x.same_index(y)?;
    coproduct_all(x.index(), &[x.clone(), y.clone()])
}

/// A natural transformation between presheaves.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PresheafMorphism {
    source: Presheaf,
    target: Presheaf,
    components: Vec<Vec<usize>>,
}

impl PresheafMorphism {
    pub fn new(source: &Presheaf, target: &Presheaf, components: Vec<Vec<usize>>) -> Result<Self> {
        source.same_index(target)?;
        let index = source.index();
        if components.len() != index.object_count() {
            return Err(Error::Shape("one component per sort is required".into()));
        }
        for (b, c) in components.iter().enumerate() {
            if c.len() != source.size(b) || c.iter().any(|&y| y >= target.size(b)) {
                return Err(Error::Shape(format!(
                    "component at sort {} is not a function {} → {}",
                    index.object_name(b),
                    source.size(b),
                    target.size(b)
                )));
            }
        }
        for u in index.non_identities() {
            let m = index.morphism(u);
            for x in 0..source.size(m.source) {
                if components[m.target][source.act(u, x)] != target.act(u, components[m.source][x]) {
                    return Err(Error::NotNatural(format!(
                        "square for {} fails at element {}",
                        m.name, x
                    )));
                }
            }
        }
        Ok(PresheafMorphism {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    /// Builds from a flat table of target ids indexed by source flat position.
    pub fn from_flat(source: &Presheaf, target: &Presheaf, flat: &[usize]) -> Result<Self> {
        let comps = (0..source.index().object_count())
            .map(|b| flat[source.offset(b)..source.offset(b) + source.size(b)].to_vec())
            .collect();
        Self::new(source, target, comps)
    }

    pub fn identity(x: &Presheaf) -> Self {
        let comps = x.sizes().iter().map(|&n| (0..n).collect()).collect();
        PresheafMorphism {
            source: x.clone(),
            target: x.clone(),
            components: comps,
        }
    }

    /// `g ∘ f`.
    pub fn compose(g: &PresheafMorphism, f: &PresheafMorphism) -> Result<Self> {
        if f.target != g.source {
            return Err(Error::Shape("morphisms are not composable".into()));
        }
        let comps = f
            .components
            .iter()
            .enumerate()
            .map(|(b, c)| c.iter().map(|&x| g.components[b][x]).collect())
            .collect();
        Ok(PresheafMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            components: comps,
        })
    }

    pub fn source(&self) -> &Presheaf {
        &self.source
    }

    pub fn target(&self) -> &Presheaf {
        &self.target
    }

    pub fn apply(&self, b: Sort, x: usize) -> usize {
        self.components[b][x]
    }

    pub fn component(&self, b: Sort) -> &[usize] {
        &self.components[b]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Concatenated component tables.
    pub fn flat(&self) -> Vec<usize> {
        self.components.concat()
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|c| {
            let mut seen = c.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.source.sizes() == self.target.sizes()
    }
}

/// True iff every element of `codomain` is hit by some member of `family`.
pub fn jointly_surjective(codomain: &Presheaf, family: &[PresheafMorphism]) -> Result<bool> {
    let mut hit: Vec<Vec<bool>> = codomain.sizes().iter().map(|&n| vec![false; n]).collect();
    for f in family {
        if f.target() != codomain {
            return Err(Error::Shape("family member has a different codomain".into()));
        }
        for (b, c) in f.components().iter().enumerate() {
            for &y in c {
                hit[b][y] = true;
            }
        }
    }
    Ok(hit.iter().flatten().all(|&h| h))
}

/// One naturality constraint checked once both positions are assigned:
/// `Y(u)(value[from]) == value[to]`.
#[derive(Clone, Copy, Debug)]
struct Check {
    from: usize,
    to: usize,
    u: MorphismId,
}

enum HomStore {
    /// All functions; position `p` is the digit of weight `weights[p]`.
    Discrete { weights: Vec<usize>, radices: Vec<usize> },
    General {
        data: Vec<usize>,
        index: HashMap<Vec<usize>, usize>,
    },
}

/// All natural maps `X → Y` as flat tables in lexicographic order.
pub struct HomSet {
    source: Presheaf,
    target: Presheaf,
    len: usize,
    store: HomStore,
}

impl fmt::Debug for HomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomSet({:?} → {:?}, {} maps)", self.source, self.target, self.len)
    }
}

/// Refuse to materialize hom sets beyond this many maps.
pub const HOM_SET_LIMIT: usize = 1 << 26;

impl HomSet {
    pub fn new(source: &Presheaf, target: &Presheaf) -> Result<Self> {
        source.same_index(target)?;
        let index = source.index();
        let stride = source.total();
        let radices: Vec<usize> = (0..stride).map(|p| target.size(source.unflat(p).0)).collect();
        if index.is_discrete() {
            let mut weights = vec![0; stride];
            let mut w: usize = 1;
            for p in (0..stride).rev() {
                weights[p] = w;
                w = w
                    .checked_mul(radices[p])
                    .filter(|&w| w <= HOM_SET_LIMIT)
                    .ok_or_else(|| Error::Shape("hom set too large to enumerate".into()))?;
            }
            return Ok(HomSet {
                source: source.clone(),
                target: target.clone(),
                len: w,
                store: HomStore::Discrete { weights, radices },
            });
        }
        let mut checks: Vec<Vec<Check>> = vec![Vec::new(); stride];
        for p in 0..stride {
            let (b, x) = source.unflat(p);
            for &u in index.out_of(b) {
                let m = index.morphism(u);
                let q = source.flat(m.target, source.act(u, x));
                checks[p.max(q)].push(Check { from: p, to: q, u });
            }
        }
        let mut data = Vec::new();
        let mut current = vec![0usize; stride];
        let mut count = 0usize;
        Self::search(0, &radices, &checks, target, &mut current, &mut data, &mut count)?;
        let index_map = (0..count)
            .map(|i| (data[i * stride..(i + 1) * stride].to_vec(), i))
            .collect();
        Ok(HomSet {
            source: source.clone(),
            target: target.clone(),
            len: count,
            store: HomStore::General { data, index: index_map },
        })
    }

    fn search(
        p: usize,
        radices: &[usize],
        checks: &[Vec<Check>],
        target: &Presheaf,
        current: &mut Vec<usize>,
        data: &mut Vec<usize>,
        count: &mut usize,
    ) -> Result<()> {
        if p == radices.len() {
            data.extend_from_slice(current);
            *count += 1;
            if *count > HOM_SET_LIMIT {
                return Err(Error::Shape("hom set too large to enumerate".into()));
            }
            return Ok(());
        }
        for v in 0..radices[p] {
            current[p] = v;
            let ok = checks[p]
                .iter()
                .all(|c| target.act(c.u, current[c.from]) == current[c.to]);
            if ok {
                Self::search(p + 1, radices, checks, target, current, data, count)?;
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Presheaf {
        &self.source
    }

    pub fn target(&self) -> &Presheaf {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Length of each flat table.
    pub fn stride(&self) -> usize {
        self.source.total()
    }

    /// Writes map `i` into `out` (length `stride`).
    pub fn get_into(&self, i: usize, out: &mut [usize]) {
        match &self.store {
            HomStore::Discrete { weights, radices } => {
                for p in 0..weights.len() {
                    out[p] = (i / weights[p]) % radices[p];
                }
            }
            HomStore::General { data, .. } => {
                let s = self.stride();
                out.copy_from_slice(&data[i * s..(i + 1) * s]);
            }
        }
    }

    pub fn get(&self, i: usize) -> Vec<usize> {
        let mut out = vec![0; self.stride()];
        self.get_into(i, &mut out);
        out
    }

    /// Position of a flat table, or `None` if it is not a natural map.
    pub fn index_of(&self, flat: &[usize]) -> Option<usize> {
        match &self.store {
            HomStore::Discrete { weights, radices } => {
                let mut i = 0;
                for p in 0..weights.len() {
                    if flat[p] >= radices[p] {
                        return None;
                    }
                    i += flat[p] * weights[p];
                }
                Some(i)
            }
            HomStore::General { index, .. } => index.get(flat).copied(),
        }
    }

    pub fn morphism(&self, i: usize) -> PresheafMorphism {
        let flat = self.get(i);
        PresheafMorphism::from_flat(&self.source, &self.target, &flat).expect("enumerated map is natural")
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

/// All natural maps `X → Y` in canonical order.
pub fn hom_set(x: &Presheaf, y: &Presheaf) -> Result<Vec<PresheafMorphism>> {
    let hs = HomSet::new(x, y)?;
    Ok((0..hs.len()).map(|i| hs.morphism(i)).collect())
}

/// Composes flat maps: `outer ∘ inner`, where `inner: X → Y` and
/// `outer: Y → Z` are flat tables over `X` and `Y`.
pub fn compose_flat(inner: &[usize], x: &Presheaf, outer: &[usize], y: &Presheaf) -> Vec<usize> {
    (0..inner.len())
        .map(|p| {
            let (b, _) = x.unflat(p);
            outer[y.offset(b) + inner[p]]
        })
        .collect()
}
