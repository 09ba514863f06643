//! The bundled library files match the constructors they are rendered
//! from, parse back, and pass against their witnesses.
//!
//! Set `UPDATE_LIBRARY=1` to rewrite the files.

use std::path::PathBuf;

use varietal::cli::{bundled_files, Printer, Workspace};
use varietal::clones::is_relative_monad;
use varietal::library::{bundled, bundled_witnesses};
use varietal::presentation::palg_satisfies;
use varietal::pretheory::check_pretheory;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("library")
}

#[test]
fn files_match_constructors() {
    let update = std::env::var_os("UPDATE_LIBRARY").is_some();
    for (name, text) in bundled_files() {
        let path = dir().join(&name);
        if update {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_default();
        assert_eq!(on_disk, text, "{name} is stale; rerun with UPDATE_LIBRARY=1");
    }
}

#[test]
fn presentations_accept_their_witnesses() {
    for (p, (wname, w)) in bundled().iter().zip(bundled_witnesses()) {
        let ws = Workspace::load(&dir().join(format!("{}.var", p.name()))).unwrap();
        let parsed = ws.presentations.last().unwrap().1;
        assert_eq!(parsed, p);
        let algs = Workspace::load(&dir().join(format!("{wname}.alg"))).unwrap();
        let a = algs.algebras.get(&wname).unwrap();
        assert_eq!(a, &w);
        assert!(palg_satisfies(a, parsed), "{wname} fails {}", p.name());
    }
}

#[test]
fn global_state_round_trips() {
    let path = dir().join("global_state.var");
    let text = std::fs::read_to_string(&path).unwrap();
    let ws = Workspace::parse(&text, "global_state.var").unwrap();
    let mut printer = Printer::new();
    printer.presentation(ws.presentations.last().unwrap().1);
    let again = printer.finish();
    assert_eq!(again, text);
    let ws2 = Workspace::parse(&again, "again").unwrap();
    assert_eq!(ws2.presentations.last().unwrap().1, ws.presentations.last().unwrap().1);
}

#[test]
fn bundled_clones_and_pretheories_are_valid() {
    for name in ["state_clone.rel", "matrix_z2.rel"] {
        let ws = Workspace::load(&dir().join(name)).unwrap();
        assert!(is_relative_monad(ws.relmonads.last().unwrap().1), "{name}");
    }
    let ws = Workspace::load(&dir().join("free_sets.pre")).unwrap();
    assert!(check_pretheory(ws.pretheories.last().unwrap().1).unwrap().is_empty());
}
