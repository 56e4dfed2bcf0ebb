use std::fs;
use std::path::PathBuf;

use superforms_cli::dsl::{format_program, parse, Evaluator};

fn scripts() -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut out: Vec<_> = fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "sf"))
        .map(|p| {
            let src = fs::read_to_string(&p).expect("readable");
            (p, src)
        })
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_is_not_empty() {
    assert!(scripts().len() >= 5);
}

#[test]
fn formatting_round_trips() {
    for (path, src) in scripts() {
        let p = parse(&src).unwrap_or_else(|e| panic!("{}: {}", path.display(), e.render(&src)));
        let printed = format_program(&p);
        let q = parse(&printed).unwrap_or_else(|e| panic!("{}: reformatted text fails: {}", path.display(), e.render(&printed)));
        assert_eq!(p, q, "{}", path.display());
        assert_eq!(printed, format_program(&q), "{}: formatting is not idempotent", path.display());
    }
}

#[test]
fn scripts_evaluate_and_verify() {
    for (path, src) in scripts() {
        let p = parse(&src).expect("parses");
        let mut ev = Evaluator::new(0);
        assert!(ev.analyze(&p).is_empty(), "{}", path.display());
        let out = ev.run(&p).unwrap_or_else(|e| panic!("{}: {}", path.display(), e.render(&src)));
        assert!(out.verified, "{}", path.display());
        assert!(!out.outputs.is_empty(), "{}", path.display());
    }
}

#[test]
fn fourier_script_returns_to_the_start() {
    let src = fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/fourier.sf")).unwrap();
    let out = Evaluator::new(0).run(&parse(&src).unwrap()).unwrap();
    assert_eq!(out.outputs[0].value.text(), "i d(f) (b - i*a*f)");
    assert_eq!(out.last().unwrap().text(), "0");
}
