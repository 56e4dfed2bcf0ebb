use superforms::suites::{run_suite, SUITES};

fn assert_suite(name: &str) {
    let r = run_suite(name, 0).expect("registered");
    assert!(r.cases > 0);
    assert!(r.ok(), "{}: {:?}", name, r.failures);
}

macro_rules! suite_tests {
    ($($f:ident => $n:literal),* $(,)?) => {
        $( #[test] fn $f() { assert_suite($n); } )*
    };
}

suite_tests! {
    scalars => "scalars",
    grassmann => "grassmann",
    berezinian => "berezinian",
    supertrace => "supertrace",
    moment => "moment",
    fubini => "fubini",
    translation => "translation",
    change_of_variables => "change-of-variables",
    liouville => "liouville",
    fourier => "fourier",
    cartan => "cartan",
    thom => "thom",
    euler => "euler",
    localization => "localization",
}

#[test]
fn every_suite_is_covered() {
    assert_eq!(SUITES.len(), 14);
}
