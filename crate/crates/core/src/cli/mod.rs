//! Command-line front end: argument parsing, file loading and reports.

pub mod format;
pub mod sexpr;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::algebra::{default_ceiling, iso_representatives, Algebra};
use crate::base::{IndexCategory, Presheaf};
use crate::birkhoff::{check_galois_laws, variety_generated, GaloisScale, GaloisWindow};
use crate::clones::{check_relative_monad, clone_of_presentation, standardized_presentation, RelativeMonad};
use crate::error::Error;
use crate::presentation::{check_presentation, free_algebra, sum, tensor, Presentation};
use crate::pretheory::{check_pretheory, kleisli_pretheory, presentation_of_pretheory, Pretheory};

pub use format::{FormatError, Printer, Workspace};

#[derive(Parser, Debug)]
#[command(name = "varietal", version, about = "Finite parametrized universal algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check every algebra of a file against a presentation.
    Check {
        presentation: PathBuf,
        algebras: PathBuf,
        /// Presentation to use when the file declares several.
        #[arg(long)]
        name: Option<String>,
    },
    /// Enumerate the models of a presentation on small carriers.
    Models {
        presentation: PathBuf,
        /// Carrier bound, one number or one per sort separated by commas.
        #[arg(long)]
        size: String,
        /// Keep one model per isomorphism class.
        #[arg(long)]
        iso: bool,
        #[arg(long)]
        name: Option<String>,
    },
    /// Build the free algebra on a generator object.
    Free {
        presentation: PathBuf,
        /// A number of generators, or an object expression.
        #[arg(long)]
        gens: String,
        #[arg(long)]
        depth: usize,
        /// List every class by its representative.
        #[arg(long)]
        table: bool,
        /// List the merges that produced the quotient.
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        name: Option<String>,
    },
    /// Disjoint union of two presentations.
    Sum(Combine),
    /// Sum plus commutation of every pair of symbols.
    Tensor(Combine),
    /// Relative monads: validate, standardize, or extract from a presentation.
    Clone(CloneArgs),
    /// Pretheories: validate, compile, or extract from a presentation.
    Pretheory(PretheoryArgs),
    /// Variety generated by a set of algebras, with the Galois law report.
    Birkhoff(BirkhoffArgs),
}

#[derive(Args, Debug)]
pub struct Combine {
    pub left: PathBuf,
    pub right: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "clone_mode")]
pub struct CloneMode {
    #[arg(long)]
    pub check: Option<PathBuf>,
    #[arg(long)]
    pub standardize: Option<PathBuf>,
    #[arg(long)]
    pub of: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CloneArgs {
    #[command(flatten)]
    pub mode: CloneMode,
    /// Objects: set sizes separated by commas, or object expressions.
    #[arg(long)]
    pub objs: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "pretheory_mode")]
pub struct PretheoryMode {
    #[arg(long)]
    pub check: Option<PathBuf>,
    #[arg(long)]
    pub compile: Option<PathBuf>,
    #[arg(long)]
    pub kleisli: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PretheoryArgs {
    #[command(flatten)]
    pub mode: PretheoryMode,
    #[arg(long)]
    pub objs: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BirkhoffArgs {
    /// File of algebras over one signature.
    #[arg(long)]
    pub generate: PathBuf,
    /// Carrier bound and term depth, as `n,d`.
    #[arg(long)]
    pub scale: String,
    /// Generator objects for equation parameters.
    #[arg(long)]
    pub gens: String,
    /// Variable contexts; defaults to the arities of the signature.
    #[arg(long)]
    pub contexts: Option<String>,
    /// Presentation whose equations form the equation side of the report.
    #[arg(long)]
    pub equations: Option<PathBuf>,
}

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Violation = 1,
    Unknown = 2,
    InputError = 3,
    Ceiling = 4,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Unknown => "unknown",
            Status::InputError => "input-error",
            Status::Ceiling => "ceiling",
        }
    }
}

/// A failed command with its status.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Ceiling { .. } => Status::Ceiling,
            Error::Internal(_) => Status::Violation,
            _ => Status::InputError,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        input(e.to_string())
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        status: Status::InputError,
        message: message.into(),
    }
}

type Outcome = std::result::Result<Status, Failure>;

/// Runs a command, writing the report and a final `status=` line.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Status {
    let result = match &cli.command {
        Command::Check {
            presentation,
            algebras,
            name,
        } => check(presentation, algebras, name.as_deref(), out),
        Command::Models {
            presentation,
            size,
            iso,
            name,
        } => models(presentation, size, *iso, name.as_deref(), out),
        Command::Free {
            presentation,
            gens,
            depth,
            table,
            audit,
            name,
        } => free(presentation, gens, *depth, *table, *audit, name.as_deref(), out),
        Command::Sum(c) => combine(c, false, out),
        Command::Tensor(c) => combine(c, true, out),
        Command::Clone(c) => clone_command(c, out),
        Command::Pretheory(p) => pretheory_command(p, out),
        Command::Birkhoff(b) => birkhoff(b, out),
    };
    let status = match result {
        Ok(s) => s,
        Err(f) => {
            let _ = writeln!(out, "error: {}", f.message);
            f.status
        }
    };
    let _ = writeln!(out, "status={}", status.label());
    status
}

fn presentation_in(ws: &Workspace, name: Option<&str>, file: &Path) -> std::result::Result<Presentation, Failure> {
    match name {
        Some(n) => ws.presentations.get(n).cloned(),
        None => ws.presentations.last().map(|(_, p)| p.clone()),
    }
    .ok_or_else(|| input(format!("{}: no presentation {}", file.display(), name.unwrap_or(""))))
}

fn load_presentation(file: &Path, name: Option<&str>) -> std::result::Result<(Workspace, Presentation), Failure> {
    let ws = Workspace::load(file)?;
    let p = presentation_in(&ws, name, file)?;
    Ok((ws, p))
}

/// Parses `2` or `2,3` into per-sort bounds.
fn bounds(text: &str, index: &IndexCategory) -> std::result::Result<Vec<usize>, Failure> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| input(format!("bad size {text}"))))
        .collect::<std::result::Result<_, _>>()?;
    match parts.as_slice() {
        [n] => Ok(vec![*n; index.object_count()]),
        many if many.len() == index.object_count() => Ok(many.to_vec()),
        _ => Err(input(format!("expected {} sizes, got {text}", index.object_count()))),
    }
}

/// Objects from `0,1,2` (set sizes) or object expressions resolved in `ws`.
fn objects(text: &str, ws: &Workspace) -> std::result::Result<Vec<Presheaf>, Failure> {
    let trimmed = text.trim();
    if !trimmed.is_empty() && trimmed.chars().all(|c| c.is_ascii_digit() || c == ',' || c == ' ') {
        return trimmed
            .split(',')
            .map(|s| s.trim().parse().map(Presheaf::set).map_err(|_| input(format!("bad object list {text}"))))
            .collect();
    }
    let forms = sexpr::read_all(text).map_err(|e| input(format!("object list: {e}")))?;
    forms
        .iter()
        .map(|s| ws.object(s).map_err(|(_, m)| input(m)))
        .collect()
}

fn write_or_print(text: &str, output: Option<&Path>, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            writeln!(out, "wrote {}", path.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn check(presentation: &Path, algebras: &Path, name: Option<&str>, out: &mut dyn Write) -> Outcome {
    let (_, p) = load_presentation(presentation, name)?;
    let ws = Workspace::load(algebras)?;
    if ws.algebras.is_empty() {
        return Err(input(format!("{}: no algebras", algebras.display())));
    }
    let mut status = Status::Ok;
    for (aname, a) in ws.algebras.iter() {
        if **a.signature() != **p.signature() {
            return Err(input(format!("algebra {aname} is over a different signature")));
        }
        writeln!(out, "algebra {aname}")?;
        let results = check_presentation(a, &p);
        let passed = results.iter().filter(|(_, v)| v.is_none()).count();
        for (eq, v) in &results {
            match v {
                None => writeln!(out, "  {eq} OK")?,
                Some(v) => writeln!(out, "  {eq} FAIL {v}")?,
            }
        }
        let verdict = if passed == results.len() { "OK" } else { "FAIL" };
        writeln!(out, "{verdict} {passed}/{} equations", results.len())?;
        if passed != results.len() {
            status = Status::Violation;
        }
    }
    Ok(status)
}

fn models(presentation: &Path, size: &str, iso: bool, name: Option<&str>, out: &mut dyn Write) -> Outcome {
    let (_, p) = load_presentation(presentation, name)?;
    let b = bounds(size, p.signature().index())?;
    let mut found = p.models(&b, default_ceiling())?;
    if iso {
        found = iso_representatives(&found)?;
    }
    writeln!(out, "models={}", found.len())?;
    let mut printer = Printer::new();
    for (i, a) in found.iter().enumerate() {
        printer.algebra(&format!("m{i}"), a, &format!("{}_sig", p.name()));
    }
    out.write_all(printer.finish().as_bytes())?;
    Ok(Status::Ok)
}

fn generator_object(text: &str, ws: &Workspace, index: &Arc<IndexCategory>) -> std::result::Result<Presheaf, Failure> {
    if let Ok(k) = text.trim().parse::<usize>() {
        if !index.is_trivial() {
            return Err(input("a generator count needs the point index; give an object instead"));
        }
        return Ok(Presheaf::set(k));
    }
    let objs = objects(text, ws)?;
    match objs.as_slice() {
        [o] => Ok(o.clone()),
        _ => Err(input("expected one generator object")),
    }
}

fn free(
    presentation: &Path,
    gens: &str,
    depth: usize,
    table: bool,
    audit: bool,
    name: Option<&str>,
    out: &mut dyn Write,
) -> Outcome {
    let (ws, p) = load_presentation(presentation, name)?;
    let g = generator_object(gens, &ws, p.signature().index())?;
    let q = free_algebra(&p, &g, depth)?;
    writeln!(out, "classes={} saturated={}", q.class_count(), q.saturated())?;
    let sig = p.signature();
    if table {
        for b in 0..sig.index().object_count() {
            for (k, t) in q.representatives(b).iter().enumerate() {
                writeln!(out, "class {} {k} {}", sig.index().object_name(b), format::term_text(t, sig))?;
            }
        }
    }
    if audit {
        for line in q.audit_lines() {
            writeln!(out, "{line}")?;
        }
    }
    Ok(if q.saturated() { Status::Ok } else { Status::Unknown })
}

fn combine(c: &Combine, tensored: bool, out: &mut dyn Write) -> Outcome {
    let (_, p1) = load_presentation(&c.left, None)?;
    let (_, p2) = load_presentation(&c.right, None)?;
    let p = if tensored { tensor(&p1, &p2)? } else { sum(&p1, &p2)? };
    let mut printer = Printer::new();
    printer.presentation(&p);
    write_or_print(&printer.finish(), c.output.as_deref(), out)?;
    Ok(Status::Ok)
}

fn relmonad_in(ws: &Workspace, file: &Path) -> std::result::Result<RelativeMonad, Failure> {
    ws.relmonads
        .last()
        .map(|(_, m)| m.clone())
        .ok_or_else(|| input(format!("{}: no relmonad", file.display())))
}

fn clone_command(c: &CloneArgs, out: &mut dyn Write) -> Outcome {
    if let Some(file) = &c.mode.check {
        let ws = Workspace::load(file)?;
        let mut status = Status::Ok;
        for (name, m) in ws.relmonads.iter() {
            let v = check_relative_monad(m);
            writeln!(out, "relmonad {name} violations={}", v.len())?;
            for x in v.iter().take(20) {
                writeln!(out, "  {x}")?;
            }
            if !v.is_empty() {
                status = Status::Violation;
            }
        }
        if ws.relmonads.is_empty() {
            return Err(input(format!("{}: no relmonad", file.display())));
        }
        return Ok(status);
    }
    if let Some(file) = &c.mode.standardize {
        let ws = Workspace::load(file)?;
        let m = relmonad_in(&ws, file)?;
        let p = standardized_presentation(&m)?;
        let mut printer = Printer::new();
        printer.presentation(&p);
        write_or_print(&printer.finish(), c.output.as_deref(), out)?;
        return Ok(Status::Ok);
    }
    let file = c.mode.of.as_ref().expect("clap enforces one mode");
    let (ws, p) = load_presentation(file, None)?;
    let objs = objects(c.objs.as_deref().ok_or_else(|| input("--of needs --objs"))?, &ws)?;
    let depth = c.depth.ok_or_else(|| input("--of needs --depth"))?;
    match clone_of_presentation(&p, &objs, depth)? {
        None => {
            writeln!(out, "free algebras did not saturate at depth {depth}")?;
            Ok(Status::Unknown)
        }
        Some(m) => {
            for j in 0..objs.len() {
                writeln!(out, "H{j} sizes={:?}", m.h(j).sizes())?;
            }
            let mut printer = Printer::new();
            printer.relmonad(&m);
            write_or_print(&printer.finish(), c.output.as_deref(), out)?;
            Ok(Status::Ok)
        }
    }
}

fn pretheory_in(ws: &Workspace, file: &Path) -> std::result::Result<Pretheory, Failure> {
    ws.pretheories
        .last()
        .map(|(_, t)| t.clone())
        .ok_or_else(|| input(format!("{}: no pretheory", file.display())))
}

fn pretheory_command(c: &PretheoryArgs, out: &mut dyn Write) -> Outcome {
    if let Some(file) = &c.mode.check {
        let ws = Workspace::load(file)?;
        let t = pretheory_in(&ws, file)?;
        let v = check_pretheory(&t)?;
        writeln!(out, "pretheory {} violations={}", t.name(), v.len())?;
        for x in v.iter().take(20) {
            writeln!(out, "  {x}")?;
        }
        return Ok(if v.is_empty() { Status::Ok } else { Status::Violation });
    }
    if let Some(file) = &c.mode.compile {
        let ws = Workspace::load(file)?;
        let t = pretheory_in(&ws, file)?;
        let p = presentation_of_pretheory(&t)?;
        let mut printer = Printer::new();
        printer.presentation(&p);
        write_or_print(&printer.finish(), c.output.as_deref(), out)?;
        return Ok(Status::Ok);
    }
    let file = c.mode.kleisli.as_ref().expect("clap enforces one mode");
    let (ws, p) = load_presentation(file, None)?;
    let objs = objects(c.objs.as_deref().ok_or_else(|| input("--kleisli needs --objs"))?, &ws)?;
    let depth = c.depth.ok_or_else(|| input("--kleisli needs --depth"))?;
    match kleisli_pretheory(&p, &objs, depth)? {
        None => {
            writeln!(out, "free algebras did not saturate at depth {depth}")?;
            Ok(Status::Unknown)
        }
        Some(t) => {
            for j in 0..objs.len() {
                let row: Vec<String> = (0..objs.len()).map(|k| t.hom_count(j, k).to_string()).collect();
                writeln!(out, "homs {j} {}", row.join(" "))?;
            }
            let mut printer = Printer::new();
            printer.pretheory(&t);
            write_or_print(&printer.finish(), c.output.as_deref(), out)?;
            Ok(Status::Ok)
        }
    }
}

fn birkhoff(b: &BirkhoffArgs, out: &mut dyn Write) -> Outcome {
    let ws = Workspace::load(&b.generate)?;
    let algebras: Vec<Algebra> = ws.algebras.iter().map(|(_, a)| a.clone()).collect();
    let sig = match (algebras.first(), ws.signatures.last()) {
        (Some(a), _) => a.signature().clone(),
        (None, Some((_, s))) => s.clone(),
        (None, None) => return Err(input(format!("{}: no signature", b.generate.display()))),
    };
    if algebras.iter().any(|a| **a.signature() != *sig) {
        return Err(input("algebras over different signatures"));
    }
    let parts: Vec<&str> = b.scale.split(',').collect();
    let [n, d] = parts.as_slice() else {
        return Err(input(format!("--scale expects n,d, got {}", b.scale)));
    };
    let n: usize = n.trim().parse().map_err(|_| input("bad carrier bound"))?;
    let d: usize = d.trim().parse().map_err(|_| input("bad depth"))?;
    let gens = objects(&b.gens, &ws)?;
    let equations = match &b.equations {
        Some(file) => {
            let (_, p) = load_presentation(file, None)?;
            if **p.signature() != *sig {
                return Err(input("the equations are over a different signature"));
            }
            p.equations().to_vec()
        }
        None => Vec::new(),
    };
    let contexts = match &b.contexts {
        Some(text) => objects(text, &ws)?,
        None => {
            let mut cs: Vec<Presheaf> = Vec::new();
            for a in sig.symbols().iter().map(|s| &s.arity).chain(equations.iter().map(|e| e.arity())) {
                if !cs.contains(a) {
                    cs.push(a.clone());
                }
            }
            cs
        }
    };
    let scale = GaloisScale::new(vec![n; sig.index().object_count()], d, gens, contexts)?;
    let window = GaloisWindow::new(&sig, &scale, default_ceiling())?;
    let closure = variety_generated(&window, &algebras)?;
    writeln!(
        out,
        "window algebras={} equations={} scale={}",
        window.algebras().len(),
        window.equations().len(),
        scale.label()
    )?;
    writeln!(out, "generated={}", closure.len())?;
    let sig_name = ws
        .signatures
        .iter()
        .find(|(_, s)| **s == sig)
        .map_or("sig", |(n, _)| n);
    let mut printer = Printer::new();
    for (i, a) in closure.iter().enumerate() {
        printer.algebra(&format!("v{i}"), a, sig_name);
    }
    out.write_all(printer.finish().as_bytes())?;
    let report = check_galois_laws(&window, &equations, &algebras)?;
    write!(out, "{report}")?;
    Ok(if report.ok() { Status::Ok } else { Status::Violation })
}

/// The bundled example files, rendered from the library constructors, as
/// `(file name, contents)`.
pub fn bundled_files() -> Vec<(String, String)> {
    use crate::clones::{matrix_clone, state_clone};
    use crate::library::{bundled, bundled_witnesses, FiniteRig};
    use crate::pretheory::free_pretheory;

    let mut files = Vec::new();
    let presentations = bundled();
    let hints = |printer: &mut Printer, name: &str| {
        if name == "internal_category" {
            printer.hint_object(&crate::library::vertex(), "vertex");
            for n in 1..=3 {
                printer.hint_object(&Presheaf::path(n), &format!("path{n}"));
            }
        }
    };
    for (p, (wname, w)) in presentations.iter().zip(bundled_witnesses()) {
        let mut printer = Printer::new();
        hints(&mut printer, p.name());
        printer.presentation(p);
        files.push((format!("{}.var", p.name()), printer.finish()));
        let mut printer = Printer::new();
        hints(&mut printer, p.name());
        printer.hint_object(w.carrier(), &format!("{wname}_carrier"));
        printer.algebra(&wname, &w, &format!("{}_sig", p.name()));
        files.push((format!("{wname}.alg"), printer.finish()));
    }
    let mut printer = Printer::new();
    printer.relmonad(&state_clone(&[0, 1, 2], 2).expect("state clone"));
    files.push(("state_clone.rel".into(), printer.finish()));
    let mut printer = Printer::new();
    printer.relmonad(&matrix_clone(&FiniteRig::z2(), &[0, 1, 2]).expect("matrix clone"));
    files.push(("matrix_z2.rel".into(), printer.finish()));
    let mut printer = Printer::new();
    printer.pretheory(&free_pretheory(vec![Presheaf::set(1), Presheaf::set(2)]).expect("free pretheory"));
    files.push(("free_sets.pre".into(), printer.finish()));
    files
}
