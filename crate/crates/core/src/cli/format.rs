//! The on-disk text format: declarations read into a [`Workspace`] and
//! written back by a [`Printer`].

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::base::{IndexCategory, Presheaf};
use crate::clones::RelativeMonad;
use crate::presentation::Presentation;
use crate::pretheory::Pretheory;
use crate::syntax::{Equation, FreeFormSignature, ParamTerm, Symbol, Term};

use super::sexpr::{read_all, Pos, Sexp, SyntaxError};

/// Where a declaration came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub file: String,
    pub line: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{file}:{source}")]
    Syntax { file: String, source: SyntaxError },
    #[error("{file}:{pos}: {message}")]
    Semantic { file: String, pos: Pos, message: String },
    #[error("{file}: {message}")]
    Io { file: String, message: String },
}

/// Named declarations of one kind, in file order.
#[derive(Clone, Debug)]
pub struct Table<T> {
    entries: Vec<(String, T, Provenance)>,
}

impl<T> Default for Table<T> {
    fn default() -> Self {
        Table { entries: Vec::new() }
    }
}

impl<T> Table<T> {
    pub fn get(&self, name: &str) -> Option<&T> {
        self.entries.iter().find(|e| e.0 == name).map(|e| &e.1)
    }

    pub fn provenance(&self, name: &str) -> Option<&Provenance> {
        self.entries.iter().find(|e| e.0 == name).map(|e| &e.2)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &T)> {
        self.entries.iter().map(|e| (e.0.as_str(), &e.1))
    }

    pub fn last(&self) -> Option<(&str, &T)> {
        self.entries.last().map(|e| (e.0.as_str(), &e.1))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Everything declared in one file.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub indexes: Table<Arc<IndexCategory>>,
    pub objects: Table<Presheaf>,
    pub signatures: Table<Arc<FreeFormSignature>>,
    pub equations: Table<Equation>,
    pub presentations: Table<Presentation>,
    pub algebras: Table<Algebra>,
    pub relmonads: Table<RelativeMonad>,
    pub pretheories: Table<Pretheory>,
    equation_signatures: Vec<(String, String)>,
}

type Fallible<T> = std::result::Result<T, (Pos, String)>;

fn fail<T>(pos: Pos, message: impl Into<String>) -> Fallible<T> {
    Err((pos, message.into()))
}

fn lib<T>(pos: Pos, r: crate::Result<T>) -> Fallible<T> {
    r.map_err(|e| (pos, e.to_string()))
}

impl Workspace {
    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| FormatError::Io {
            file: file.clone(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &file)
    }

    pub fn parse(text: &str, file: &str) -> Result<Self, FormatError> {
        let forms = read_all(text).map_err(|source| FormatError::Syntax {
            file: file.to_string(),
            source,
        })?;
        let mut ws = Workspace::default();
        for form in &forms {
            ws.declare(form, file).map_err(|(pos, message)| FormatError::Semantic {
                file: file.to_string(),
                pos,
                message,
            })?;
        }
        Ok(ws)
    }

    fn declare(&mut self, form: &Sexp, file: &str) -> Fallible<()> {
        let pos = form.pos();
        let Some(items) = form.list() else {
            return fail(pos, "expected a declaration");
        };
        let (Some(kind), Some(name)) = (form.head(), items.get(1).and_then(|n| n.atom())) else {
            return fail(pos, "a declaration starts with its kind and name");
        };
        let name = name.to_string();
        let prov = Provenance {
            file: file.to_string(),
            line: pos.line,
        };
        let rest = &items[2..];
        macro_rules! insert {
            ($table:ident, $kind:literal, $value:expr) => {{
                if self.$table.get(&name).is_some() {
                    return fail(pos, format!("duplicate {} {}", $kind, name));
                }
                let value = $value;
                self.$table.entries.push((name, value, prov));
            }};
        }
        match kind {
            "index" => insert!(indexes, "index", self.read_index(&name, rest, pos)?),
            "object" => insert!(objects, "object", self.read_object(rest, pos)?),
            "signature" => insert!(signatures, "signature", self.read_signature(rest, pos)?),
            "equation" => {
                let (eq, sig) = self.read_equation(&name, rest, pos)?;
                self.equation_signatures.push((name.clone(), sig));
                insert!(equations, "equation", eq)
            }
            "presentation" => insert!(presentations, "presentation", self.read_presentation(&name, rest, pos)?),
            "algebra" => insert!(algebras, "algebra", self.read_algebra(rest, pos)?),
            "relmonad" => insert!(relmonads, "relmonad", self.read_relmonad(&name, rest, pos)?),
            "pretheory" => insert!(pretheories, "pretheory", self.read_pretheory(&name, rest, pos)?),
            other => return fail(pos, format!("unknown declaration kind {other}")),
        }
        Ok(())
    }

    pub fn index(&self, name: &str) -> Option<Arc<IndexCategory>> {
        match name {
            "point" => Some(IndexCategory::point()),
            "graph" => Some(IndexCategory::parallel_pair()),
            _ => self.indexes.get(name).cloned(),
        }
    }

    /// Resolves an object reference: a declared name or `(set n)`.
    pub fn object(&self, s: &Sexp) -> Fallible<Presheaf> {
        if let Some(name) = s.atom() {
            return self
                .objects
                .get(name)
                .cloned()
                .ok_or_else(|| (s.pos(), format!("unknown object {name}")));
        }
        match s.list() {
            Some([head, n]) if head.atom() == Some("set") => Ok(Presheaf::set(number(n)?)),
            _ => fail(s.pos(), format!("expected an object reference, found {s}")),
        }
    }

    fn read_index(&self, name: &str, rest: &[Sexp], pos: Pos) -> Fallible<Arc<IndexCategory>> {
        if matches!(name, "point" | "graph") {
            return fail(pos, format!("{name} is a built-in index category"));
        }
        let mut objects: Vec<String> = Vec::new();
        let mut morphisms: Vec<(String, String, String)> = Vec::new();
        let mut composites: Vec<(String, String, String)> = Vec::new();
        for clause in rest {
            let words = atoms(clause)?;
            match words.first().map(String::as_str) {
                Some("objects") => objects.extend(words[1..].iter().cloned()),
                Some("morphism") if words.len() == 4 => {
                    morphisms.push((words[1].clone(), words[2].clone(), words[3].clone()))
                }
                Some("composite") if words.len() == 4 => {
                    composites.push((words[1].clone(), words[2].clone(), words[3].clone()))
                }
                _ => return fail(clause.pos(), format!("unexpected index clause {clause}")),
            }
        }
        let o: Vec<&str> = objects.iter().map(String::as_str).collect();
        let m: Vec<(&str, &str, &str)> = morphisms.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
        let c: Vec<(&str, &str, &str)> = composites.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
        lib(pos, IndexCategory::new(name, &o, &m, &c))
    }

    fn read_object(&self, rest: &[Sexp], pos: Pos) -> Fallible<Presheaf> {
        let (keys, clauses) = keywords(rest)?;
        let index_name = required_atom(&keys, "index", pos)?;
        let index = self
            .index(index_name)
            .ok_or_else(|| (pos, format!("unknown index {index_name}")))?;
        let mut sizes = None;
        let mut maps = vec![None; index.morphism_count() - index.object_count()];
        for clause in clauses {
            let items = clause.list().unwrap_or(&[]);
            match clause.head() {
                Some("sizes") => sizes = Some(numbers(&items[1..])?),
                Some("action") if items.len() >= 2 => {
                    let m = items[1].atom().unwrap_or("");
                    let u = index
                        .morphism_by_name(m)
                        .filter(|&u| !index.is_identity(u))
                        .ok_or_else(|| (items[1].pos(), format!("unknown morphism {m}")))?;
                    maps[u - index.object_count()] = Some(numbers(&items[2..])?);
                }
                _ => return fail(clause.pos(), format!("unexpected object clause {clause}")),
            }
        }
        let sizes = sizes.ok_or_else(|| (pos, "object without sizes".to_string()))?;
        let maps: Vec<Vec<usize>> = maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| (pos, format!("missing action of {}", index.morphism(i + index.object_count()).name))))
            .collect::<Fallible<_>>()?;
        lib(pos, Presheaf::new(&index, sizes, maps))
    }

    fn read_signature(&self, rest: &[Sexp], pos: Pos) -> Fallible<Arc<FreeFormSignature>> {
        let (keys, clauses) = keywords(rest)?;
        let index_name = required_atom(&keys, "index", pos)?;
        let index = self
            .index(index_name)
            .ok_or_else(|| (pos, format!("unknown index {index_name}")))?;
        let mut symbols = Vec::new();
        for clause in clauses {
            let items = clause.list().unwrap_or(&[]);
            if clause.head() != Some("op") || items.len() < 2 {
                return fail(clause.pos(), format!("unexpected signature clause {clause}"));
            }
            let name = items[1]
                .atom()
                .ok_or_else(|| (items[1].pos(), "operation name must be an atom".to_string()))?;
            let (k, _) = keywords(&items[2..])?;
            symbols.push(Symbol {
                name: name.to_string(),
                arity: self.object(required(&k, "arity", clause.pos())?)?,
                param: self.object(required(&k, "param", clause.pos())?)?,
            });
        }
        lib(pos, FreeFormSignature::new(&index, symbols))
    }

    fn signature(&self, name: &str, pos: Pos) -> Fallible<Arc<FreeFormSignature>> {
        self.signatures
            .get(name)
            .cloned()
            .ok_or_else(|| (pos, format!("unknown signature {name}")))
    }

    fn read_term(&self, sig: &FreeFormSignature, s: &Sexp) -> Fallible<Term> {
        let items = s.list().ok_or_else(|| (s.pos(), format!("expected a term, found {s}")))?;
        let index = sig.index();
        let sort = |x: &Sexp| {
            let name = x.atom().unwrap_or("");
            index
                .sort_by_name(name)
                .ok_or_else(|| (x.pos(), format!("unknown sort {name}")))
        };
        match s.head() {
            Some("var") if items.len() == 3 => Ok(Term::var(sort(&items[1])?, number(&items[2])?)),
            Some("app") if items.len() == 4 => {
                let name = items[1].atom().unwrap_or("");
                let op = sig
                    .find(name)
                    .ok_or_else(|| (items[1].pos(), format!("unknown operation {name}")))?;
                let args = items[2]
                    .list()
                    .ok_or_else(|| (items[2].pos(), "expected an argument list".to_string()))?;
                let arity = &sig.symbol(op).arity;
                if args.len() != arity.total() {
                    return fail(
                        items[2].pos(),
                        format!("{name} takes {} arguments, found {}", arity.total(), args.len()),
                    );
                }
                let mut binding: Vec<Vec<Term>> = vec![Vec::new(); index.object_count()];
                for (p, a) in args.iter().enumerate() {
                    binding[arity.unflat(p).0].push(self.read_term(sig, a)?);
                }
                let (b, c) = element(&items[3], &sort)?;
                Ok(Term::app(op, binding, (b, c)))
            }
            _ => fail(s.pos(), format!("expected (var ...) or (app ...), found {s}")),
        }
    }

    fn read_equation(&self, name: &str, rest: &[Sexp], pos: Pos) -> Fallible<(Equation, String)> {
        let (keys, clauses) = keywords(rest)?;
        let sig_name = required_atom(&keys, "signature", pos)?;
        let sig = self.signature(sig_name, pos)?;
        let arity = self.object(required(&keys, "arity", pos)?)?;
        let param = self.object(required(&keys, "param", pos)?)?;
        let relative = keys.iter().any(|(k, _)| k == "relative");
        let index = sig.index();
        let sort = |x: &Sexp| {
            let n = x.atom().unwrap_or("");
            index.sort_by_name(n).ok_or_else(|| (x.pos(), format!("unknown sort {n}")))
        };
        let mut lhs: Vec<Vec<Option<Term>>> = (0..index.object_count()).map(|b| vec![None; param.size(b)]).collect();
        let mut rhs = lhs.clone();
        for clause in clauses {
            let items = clause.list().unwrap_or(&[]);
            if clause.head() != Some("pair") || items.len() != 4 {
                return fail(clause.pos(), format!("equation {name}: expected (pair <element> <term> <term>)"));
            }
            let (b, c) = element(&items[1], &sort)?;
            if c >= param.size(b) {
                return fail(items[1].pos(), format!("equation {name}: parameter element out of range"));
            }
            if lhs[b][c].is_some() {
                return fail(items[1].pos(), format!("equation {name}: parameter element given twice"));
            }
            let wrap = |r: Fallible<Term>| r.map_err(|(p, m)| (p, format!("equation {name}: {m}")));
            lhs[b][c] = Some(wrap(self.read_term(&sig, &items[2]))?);
            rhs[b][c] = Some(wrap(self.read_term(&sig, &items[3]))?);
        }
        let complete = |side: Vec<Vec<Option<Term>>>| -> Fallible<Vec<Vec<Term>>> {
            side.into_iter()
                .map(|row| row.into_iter().collect::<Option<Vec<Term>>>())
                .collect::<Option<_>>()
                .ok_or_else(|| (pos, format!("equation {name}: some parameter element has no pair")))
        };
        let (l, r) = (complete(lhs)?, complete(rhs)?);
        for t in l.iter().chain(&r).flatten() {
            t.check_shape(&sig, &arity)
                .map_err(|e| (pos, format!("equation {name}: {e}")))?;
        }
        let wrap = |r: crate::Result<ParamTerm>| r.map_err(|e| (pos, format!("equation {name}: {e}")));
        let l = wrap(ParamTerm::new(&sig, &arity, &param, l))?;
        let r = wrap(ParamTerm::new(&sig, &arity, &param, r))?;
        let e = if relative {
            Equation::relative(&sig, name, l, r)
        } else {
            Equation::new(&sig, name, l, r)
        };
        e.map(|e| (e, sig_name.to_string())).map_err(|e| (pos, e.to_string()))
    }

    fn read_presentation(&self, name: &str, rest: &[Sexp], pos: Pos) -> Fallible<Presentation> {
        let Some(sig_name) = rest.first().and_then(|s| s.atom()) else {
            return fail(pos, "presentation needs a signature name");
        };
        let sig = self.signature(sig_name, pos)?;
        let mut eqs = Vec::new();
        for s in &rest[1..] {
            let n = s.atom().unwrap_or("");
            let e = self
                .equations
                .get(n)
                .ok_or_else(|| (s.pos(), format!("unknown equation {n}")))?;
            let over = self.equation_signatures.iter().find(|(e, _)| e == n).map(|(_, s)| s.as_str());
            if over != Some(sig_name) {
                return fail(s.pos(), format!("equation {n} is over a different signature"));
            }
            eqs.push(e.clone());
        }
        lib(pos, Presentation::new(name, &sig, eqs))
    }

    fn read_algebra(&self, rest: &[Sexp], pos: Pos) -> Fallible<Algebra> {
        let (keys, clauses) = keywords(rest)?;
        let sig = self.signature(required_atom(&keys, "signature", pos)?, pos)?;
        let carrier = self.object(required(&keys, "carrier", pos)?)?;
        let mut tables = vec![None; sig.len()];
        for clause in clauses {
            let items = clause.list().unwrap_or(&[]);
            if clause.head() != Some("table") || items.len() < 2 {
                return fail(clause.pos(), format!("unexpected algebra clause {clause}"));
            }
            let name = items[1].atom().unwrap_or("");
            let op = sig
                .find(name)
                .ok_or_else(|| (items[1].pos(), format!("unknown operation {name}")))?;
            if tables[op].is_some() {
                return fail(clause.pos(), format!("table for {name} given twice"));
            }
            tables[op] = Some(numbers(&items[2..])?);
        }
        let tables: Vec<Vec<usize>> = tables
            .into_iter()
            .enumerate()
            .map(|(op, t)| t.ok_or_else(|| (pos, format!("missing table for {}", sig.symbol(op).name))))
            .collect::<Fallible<_>>()?;
        lib(pos, Algebra::new(&sig, &carrier, tables))
    }

    fn objects_clause(&self, items: &[Sexp]) -> Fallible<Vec<Presheaf>> {
        items.iter().map(|s| self.object(s)).collect()
    }

    fn read_relmonad(&self, name: &str, rest: &[Sexp], pos: Pos) -> Fallible<RelativeMonad> {
        let mut objects = None;
        let mut h = None;
        let mut unit: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut mult: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for clause in rest {
            let items = clause.list().unwrap_or(&[]);
            match clause.head() {
                Some("objects") => objects = Some(self.objects_clause(&items[1..])?),
                Some("h") => h = Some(self.objects_clause(&items[1..])?),
                Some("unit") if items.len() >= 2 => unit.push((number(&items[1])?, numbers(&items[2..])?)),
                Some("mult") if items.len() >= 3 => {
                    mult.push((number(&items[1])?, number(&items[2])?, numbers(&items[3..])?))
                }
                _ => return fail(clause.pos(), format!("unexpected relmonad clause {clause}")),
            }
        }
        let objects = objects.ok_or_else(|| (pos, "relmonad without objects".to_string()))?;
        let h = h.ok_or_else(|| (pos, "relmonad without h".to_string()))?;
        let n = objects.len();
        let mut units = vec![None; n];
        for (j, t) in unit {
            *units.get_mut(j).ok_or_else(|| (pos, format!("unit index {j} out of range")))? = Some(t);
        }
        let mut mults = vec![vec![None; n]; n];
        for (j, k, t) in mult {
            if j >= n || k >= n {
                return fail(pos, format!("mult index ({j},{k}) out of range"));
            }
            mults[j][k] = Some(t);
        }
        let units = units
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| (pos, "missing unit table".to_string()))?;
        let mults = mults
            .into_iter()
            .map(|r| r.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| (pos, "missing mult table".to_string()))?;
        lib(pos, RelativeMonad::new(name, objects, h, units, mults))
    }

    fn read_pretheory(&self, name: &str, rest: &[Sexp], pos: Pos) -> Fallible<Pretheory> {
        let mut objects = None;
        let mut homs: Vec<(usize, usize, usize)> = Vec::new();
        let mut identity: Vec<(usize, usize)> = Vec::new();
        let mut comp: Vec<([usize; 3], Vec<usize>)> = Vec::new();
        let mut tau: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        let mut labels: Vec<(usize, usize, Vec<String>)> = Vec::new();
        for clause in rest {
            let items = clause.list().unwrap_or(&[]);
            let at = |i: usize| number(&items[i]);
            match clause.head() {
                Some("objects") => objects = Some(self.objects_clause(&items[1..])?),
                Some("homs") if items.len() == 4 => homs.push((at(1)?, at(2)?, at(3)?)),
                Some("identity") if items.len() == 3 => identity.push((at(1)?, at(2)?)),
                Some("comp") if items.len() >= 4 => comp.push(([at(1)?, at(2)?, at(3)?], numbers(&items[4..])?)),
                Some("tau") if items.len() >= 3 => tau.push((at(1)?, at(2)?, numbers(&items[3..])?)),
                Some("labels") if items.len() >= 3 => {
                    let strings = items[3..]
                        .iter()
                        .map(|s| match s {
                            Sexp::Str(t, _) => Ok(t.clone()),
                            _ => fail(s.pos(), "labels are strings"),
                        })
                        .collect::<Fallible<_>>()?;
                    labels.push((at(1)?, at(2)?, strings));
                }
                _ => return fail(clause.pos(), format!("unexpected pretheory clause {clause}")),
            }
        }
        let objects = objects.ok_or_else(|| (pos, "pretheory without objects".to_string()))?;
        let n = objects.len();
        let range = |i: usize| if i < n { Ok(i) } else { fail(pos, format!("object index {i} out of range")) };
        let mut hom_table = vec![vec![None; n]; n];
        for (j, k, c) in homs {
            hom_table[range(j)?][range(k)?] = Some(c);
        }
        let hom_table: Vec<Vec<usize>> = hom_table
            .into_iter()
            .map(|r| r.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<_>>()
            .ok_or_else(|| (pos, "missing hom count".to_string()))?;
        let mut ids = vec![None; n];
        for (j, f) in identity {
            ids[range(j)?] = Some(f);
        }
        let ids = ids
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| (pos, "missing identity".to_string()))?;
        let mut comps = vec![vec![vec![None; n]; n]; n];
        for ([j, k, l], t) in comp {
            comps[range(j)?][range(k)?][range(l)?] = Some(t);
        }
        let comps: Vec<Vec<Vec<Vec<usize>>>> = comps
            .into_iter()
            .map(|a| {
                a.into_iter()
                    .map(|b| b.into_iter().collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<_>>()
            .ok_or_else(|| (pos, "missing composition table".to_string()))?;
        let mut taus = vec![vec![None; n]; n];
        for (j, k, t) in tau {
            taus[range(j)?][range(k)?] = Some(t);
        }
        let taus: Vec<Vec<Vec<usize>>> = taus
            .into_iter()
            .map(|r| r.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<_>>()
            .ok_or_else(|| (pos, "missing tau table".to_string()))?;
        let t = lib(pos, Pretheory::new(name, objects, hom_table, comps, ids, taus))?;
        if labels.is_empty() {
            return Ok(t);
        }
        let mut table: Vec<Vec<Vec<String>>> = (0..n)
            .map(|j| (0..n).map(|k| (0..t.hom_count(j, k)).map(|f| t.label(j, k, f).to_string()).collect()).collect())
            .collect();
        for (j, k, l) in labels {
            table[range(j)?][range(k)?] = l;
        }
        lib(pos, t.with_labels(table))
    }
}

fn number(s: &Sexp) -> Fallible<usize> {
    s.atom()
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| (s.pos(), format!("expected a number, found {s}")))
}

fn numbers(items: &[Sexp]) -> Fallible<Vec<usize>> {
    items.iter().map(number).collect()
}

fn atoms(s: &Sexp) -> Fallible<Vec<String>> {
    s.list()
        .ok_or_else(|| (s.pos(), format!("expected a list, found {s}")))?
        .iter()
        .map(|x| x.atom().map(str::to_string).ok_or_else(|| (x.pos(), format!("expected an atom, found {x}"))))
        .collect()
}

/// `(<sort> <id>)`.
fn element(s: &Sexp, sort: &dyn Fn(&Sexp) -> Fallible<usize>) -> Fallible<(usize, usize)> {
    match s.list() {
        Some([b, c]) => Ok((sort(b)?, number(c)?)),
        _ => fail(s.pos(), format!("expected (<sort> <id>), found {s}")),
    }
}

type Keys<'a> = Vec<(String, Option<&'a Sexp>)>;

/// Splits `:key value` pairs (and bare `:flag`s) from the remaining clauses.
fn keywords(items: &[Sexp]) -> Fallible<(Keys<'_>, Vec<&Sexp>)> {
    let mut keys = Vec::new();
    let mut rest = Vec::new();
    let mut i = 0;
    while i < items.len() {
        match items[i].atom() {
            Some(k) if k.starts_with(':') => {
                let key = k[1..].to_string();
                if key == "relative" {
                    keys.push((key, None));
                    i += 1;
                } else {
                    let v = items
                        .get(i + 1)
                        .ok_or_else(|| (items[i].pos(), format!("{k} needs a value")))?;
                    keys.push((key, Some(v)));
                    i += 2;
                }
            }
            Some(a) => return fail(items[i].pos(), format!("unexpected atom {a}")),
            None => {
                rest.push(&items[i]);
                i += 1;
            }
        }
    }
    Ok((keys, rest))
}

fn required<'a>(keys: &Keys<'a>, key: &str, pos: Pos) -> Fallible<&'a Sexp> {
    keys.iter()
        .find(|(k, _)| k == key)
        .and_then(|(_, v)| *v)
        .ok_or_else(|| (pos, format!("missing :{key}")))
}

fn required_atom<'a>(keys: &Keys<'a>, key: &str, pos: Pos) -> Fallible<&'a str> {
    let v = required(keys, key, pos)?;
    v.atom().ok_or_else(|| (v.pos(), format!(":{key} expects a name")))
}

/// Writes declarations, emitting each dependency once before first use.
#[derive(Default)]
pub struct Printer {
    out: String,
    indexes: Vec<String>,
    objects: Vec<(Presheaf, String)>,
    hints: Vec<(Presheaf, String)>,
    signatures: Vec<(Arc<FreeFormSignature>, String)>,
    equations: Vec<String>,
    names: Vec<String>,
}

impl Printer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Names an object before it is first printed.
    pub fn hint_object(&mut self, p: &Presheaf, name: &str) {
        self.hints.push((p.clone(), name.to_string()));
    }

    pub fn finish(self) -> String {
        self.out
    }

    fn fresh(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        let mut k = 2;
        while self.names.contains(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        self.names.push(name.clone());
        name
    }

    fn index_ref(&mut self, index: &Arc<IndexCategory>) -> String {
        if **index == *IndexCategory::point() {
            return "point".into();
        }
        if **index == *IndexCategory::parallel_pair() {
            return "graph".into();
        }
        let name = index.name().to_string();
        if self.indexes.contains(&name) {
            return name;
        }
        self.indexes.push(name.clone());
        let _ = write!(self.out, "(index {name}\n  (objects {})", index.objects().join(" "));
        for u in index.non_identities() {
            let m = index.morphism(u);
            let _ = write!(
                self.out,
                "\n  (morphism {} {} {})",
                m.name,
                index.object_name(m.source),
                index.object_name(m.target)
            );
        }
        for g in index.non_identities() {
            for f in index.non_identities() {
                if let Some(gf) = index.compose(g, f) {
                    let _ = write!(
                        self.out,
                        "\n  (composite {} {} {})",
                        index.morphism(g).name,
                        index.morphism(f).name,
                        index.morphism(gf).name
                    );
                }
            }
        }
        self.out.push_str(")\n\n");
        name
    }

    pub fn object_ref(&mut self, p: &Presheaf) -> String {
        if **p.index() == *IndexCategory::point() {
            return format!("(set {})", p.size(0));
        }
        if let Some((_, n)) = self.objects.iter().find(|(q, _)| q == p) {
            return n.clone();
        }
        let index = self.index_ref(p.index());
        let base = self
            .hints
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, n)| n.clone())
            .unwrap_or_else(|| format!("obj{}", self.objects.len()));
        let name = self.fresh(&base);
        let _ = write!(self.out, "(object {name} :index {index} (sizes{})", join(p.sizes()));
        let i = p.index().clone();
        for u in i.non_identities() {
            let _ = write!(self.out, "\n  (action {}{})", i.morphism(u).name, join(p.action(u)));
        }
        self.out.push_str(")\n\n");
        self.objects.push((p.clone(), name.clone()));
        name
    }

    pub fn signature_ref(&mut self, sig: &Arc<FreeFormSignature>, hint: &str) -> String {
        if let Some((_, n)) = self.signatures.iter().find(|(s, _)| s == sig) {
            return n.clone();
        }
        let index = self.index_ref(sig.index());
        let ops: Vec<(String, String, String)> = sig
            .symbols()
            .iter()
            .map(|s| (s.name.clone(), self.object_ref(&s.arity), self.object_ref(&s.param)))
            .collect();
        let name = self.fresh(hint);
        let _ = write!(self.out, "(signature {name} :index {index}");
        for (op, a, p) in ops {
            let _ = write!(self.out, "\n  (op {op} :arity {a} :param {p})");
        }
        self.out.push_str(")\n\n");
        self.signatures.push((sig.clone(), name.clone()));
        name
    }

    fn equation(&mut self, e: &Equation, sig: &Arc<FreeFormSignature>, sig_name: &str, prefix: &str) -> String {
        let arity = self.object_ref(e.arity());
        let param = self.object_ref(e.param());
        let name = if self.equations.contains(&e.name) {
            let mut n = format!("{prefix}.{}", e.name);
            while self.equations.contains(&n) {
                n.push('\'');
            }
            n
        } else {
            e.name.clone()
        };
        self.equations.push(name.clone());
        let index = sig.index();
        let relative = if e.relative { " :relative" } else { "" };
        let _ = write!(
            self.out,
            "(equation {name} :signature {sig_name} :arity {arity} :param {param}{relative}"
        );
        for (b, c) in e.param().elements() {
            let _ = write!(
                self.out,
                "\n  (pair ({} {c})\n    {}\n    {})",
                index.object_name(b),
                term_text(e.lhs.component(b, c), sig),
                term_text(e.rhs.component(b, c), sig)
            );
        }
        self.out.push_str(")\n\n");
        name
    }

    pub fn presentation(&mut self, p: &Presentation) {
        let sig_name = self.signature_ref(p.signature(), &format!("{}_sig", p.name()));
        let names: Vec<String> = p
            .equations()
            .iter()
            .map(|e| self.equation(e, p.signature(), &sig_name, p.name()))
            .collect();
        let name = self.fresh(p.name());
        let _ = write!(self.out, "(presentation {name} {sig_name}");
        for n in names {
            let _ = write!(self.out, "\n  {n}");
        }
        self.out.push_str(")\n\n");
    }

    pub fn algebra(&mut self, name: &str, a: &Algebra, sig_hint: &str) {
        let sig_name = self.signature_ref(a.signature(), sig_hint);
        let carrier = self.object_ref(a.carrier());
        let name = self.fresh(name);
        let _ = write!(self.out, "(algebra {name} :signature {sig_name} :carrier {carrier}");
        for (s, t) in a.signature().symbols().iter().zip(a.tables()) {
            let _ = write!(self.out, "\n  (table {}{})", s.name, join(t.values()));
        }
        self.out.push_str(")\n\n");
    }

    pub fn relmonad(&mut self, m: &RelativeMonad) {
        let objects: Vec<String> = m.objects().iter().map(|o| self.object_ref(o)).collect();
        let h: Vec<String> = (0..m.objects().len()).map(|j| self.object_ref(m.h(j))).collect();
        let name = self.fresh(m.name());
        let _ = write!(self.out, "(relmonad {name}\n  (objects {})\n  (h {})", objects.join(" "), h.join(" "));
        let n = m.objects().len();
        for j in 0..n {
            let _ = write!(self.out, "\n  (unit {j}{})", join(m.unit(j)));
        }
        for j in 0..n {
            for k in 0..n {
                let _ = write!(self.out, "\n  (mult {j} {k}{})", join(m.mult_table(j, k)));
            }
        }
        self.out.push_str(")\n\n");
    }

    pub fn pretheory(&mut self, t: &Pretheory) {
        let objects: Vec<String> = t.objects().iter().map(|o| self.object_ref(o)).collect();
        let name = self.fresh(t.name());
        let n = objects.len();
        let _ = write!(self.out, "(pretheory {name}\n  (objects {})", objects.join(" "));
        for j in 0..n {
            for k in 0..n {
                let _ = write!(self.out, "\n  (homs {j} {k} {})", t.hom_count(j, k));
            }
        }
        for j in 0..n {
            let _ = write!(self.out, "\n  (identity {j} {})", t.identity(j));
        }
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let _ = write!(self.out, "\n  (comp {j} {k} {l}{})", join(t.composition_table(j, k, l)));
                }
            }
        }
        for j in 0..n {
            for k in 0..n {
                let _ = write!(self.out, "\n  (tau {j} {k}{})", join(t.tau(j, k)));
            }
        }
        for j in 0..n {
            for k in 0..n {
                let labels: Vec<String> = (0..t.hom_count(j, k)).map(|f| format!("{:?}", t.label(j, k, f))).collect();
                let _ = write!(self.out, "\n  (labels {j} {k}{})", labels.iter().map(|l| format!(" {l}")).collect::<String>());
            }
        }
        self.out.push_str(")\n\n");
    }
}

/// ` x y z`, or nothing for an empty table.
fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| format!(" {x}")).collect()
}

/// A term in the file syntax.
pub fn term_text(t: &Term, sig: &FreeFormSignature) -> String {
    t.display(sig).to_string()
}
