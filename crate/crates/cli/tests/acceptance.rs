//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact over the symbolic scalar field, so the tolerance is zero
//! throughout; the last criterion compares bytes.

use std::process::{Command, ExitCode};

use superforms::berezin::{fourier_transform, Distribution, FourierDirection, FourierSpace};
use superforms::equivariant::{beta_form, euler_form, localize_linear, mathai_quillen_thom, LinearAction};
use superforms::suites::run_suite;
use superforms::{Parity, Scalar, SuperFn, VariableTable};
use superforms_cli::dsl::{parse, Evaluator, Value};

type Verdict = Result<String, String>;

fn suites(names: &[&str], min_cases: usize) -> Verdict {
    let mut parts = Vec::new();
    for n in names {
        let r = run_suite(n, 0).ok_or_else(|| format!("no suite {n}"))?;
        if !r.ok() {
            return Err(format!("{n}: {}/{} ({:?})", r.passed, r.cases, r.failures.first()));
        }
        if r.cases < min_cases {
            return Err(format!("{n}: only {} cases", r.cases));
        }
        parts.push(format!("{n} {}/{}", r.passed, r.cases));
    }
    Ok(parts.join(", "))
}

fn script(src: &str) -> Result<superforms_cli::dsl::Outcome, String> {
    let p = parse(src).map_err(|e| e.render(src))?;
    Evaluator::new(0).run(&p).map_err(|e| e.render(src))
}

fn is_zero(v: &Value) -> bool {
    matches!(v, Value::Form(f) if f.is_zero())
}

fn worked_example() -> Verdict {
    let out = script(
        "action rot02; param z; let X = z*X0; let t = thom(X);
         let q = xi*eta - i/(2*z)*(dxi^2 + deta^2);
         t - i/z*exp(q);
         2*pi*t - 2*pi*i/z*exp(q);",
    )?;
    if !out.outputs.iter().all(|o| is_zero(&o.value)) {
        return Err(format!("θ = {}", out.outputs[0].value.text()));
    }
    let a = LinearAction::preset("rot02").unwrap();
    let th = mathai_quillen_thom(&a, &a.generic()).map_err(|e| e.to_string())?;
    if th.pushforward != SuperFn::one(th.pushforward.table()) {
        return Err(format!("π_*θ = {}", th.pushforward.render()));
    }
    if th.caveat.is_none() || out.caveats.is_empty() {
        return Err("normalization caveat missing".into());
    }
    Ok("θ = (i/z)exp(ξη − (i/2z)(dξ²+dη²)), (2π)θ has constant 2πi/z, π_*θ = 1, caveat flagged".into())
}

fn closed() -> Verdict {
    for p in ["rot02", "rot20", "rot22"] {
        let a = LinearAction::preset(p).unwrap();
        let th = mathai_quillen_thom(&a, &a.generic()).map_err(|e| e.to_string())?;
        if !th.closed {
            return Err(format!("{p}: d_gθ ≠ 0"));
        }
    }
    Ok(format!("rot02, rot20, rot22 at generic points; {}", suites(&["thom"], 8)?))
}

fn localization() -> Verdict {
    for p in ["rot02", "rot22"] {
        let a = LinearAction::preset(p).unwrap();
        let x = a.generic();
        let th = mathai_quillen_thom(&a, &x).map_err(|e| e.to_string())?.theta;
        let omega = beta_form(&a, &x).map_err(|e| e.to_string())?.d_g_beta;
        let t = a.table();
        let poly = SuperFn::one(t).add(&omega.scale(&Scalar::from_ratio(-2, 3))).add(&omega.mul(&omega).scale(&Scalar::from_i64(5)));
        let alphas = [("θ", th.clone()), ("θc", th.scale(&Scalar::from_ratio(3, 7))), ("θp(Ω)", th.mul(&poly))];
        for (name, alpha) in alphas {
            let r = localize_linear(&alpha, &a, &x).map_err(|e| e.to_string())?;
            if !r.equal {
                return Err(format!("{p}, {name}: {} ≠ {}", r.lhs, r.rhs));
            }
        }
    }
    Ok(format!("θ, θc, θp(Ω) on rot02 and rot22; {}", suites(&["localization"], 18)?))
}

fn euler() -> Verdict {
    let mut done = Vec::new();
    for p in LinearAction::PRESETS {
        let a = LinearAction::preset(p).unwrap();
        let x = a.generic();
        if p == "hyp22" {
            // Indefinite even form: no Thom form exists and the engine must refuse.
            if euler_form(&a, &x).is_ok() || mathai_quillen_thom(&a, &x).map(|t| t.verified()).unwrap_or(false) {
                return Err("hyp22 produced an Euler form".into());
            }
            continue;
        }
        let e = euler_form(&a, &x).map_err(|e| format!("{p}: {e}"))?;
        if !e.holds {
            return Err(format!("{p}: E = {}, Spf = {}", e.value, e.spf));
        }
        done.push(p);
    }
    Ok(format!("{}; hyp22 refused (indefinite form); {}", done.join(", "), suites(&["euler"], 8)?))
}

fn fourier() -> Verdict {
    let t = VariableTable::coordinates(&[("xi", Parity::Odd)]).unwrap();
    let (a, b) = (Scalar::param("a"), Scalar::param("b"));
    let xi = SuperFn::var(&t, "xi").unwrap();
    let phi = SuperFn::constant(&t, a.clone()).add(&xi.scale(&b));
    let fwd = FourierSpace { vars: vec!["xi".into()], duals: vec!["f".into()] };
    let (hat, _) = fourier_transform(&Distribution::function(phi.clone()), FourierDirection::FunctionToDistribution, &fwd)
        .map_err(|e| e.to_string())?;
    let f = SuperFn::var(hat.density.table(), "f").map_err(|e| e.to_string())?;
    let expected = SuperFn::constant(hat.density.table(), b).sub(&f.scale(&(&Scalar::i() * &a)));
    if hat.prefactor != Scalar::i() || hat.measure != ["f"] || hat.density != expected {
        return Err(format!("φ̂ = {} d({}) ({})", hat.prefactor, hat.measure.join(","), hat.density.render()));
    }
    let back = FourierSpace { vars: vec!["f".into()], duals: vec!["xi".into()] };
    let (again, _) = fourier_transform(&hat, FourierDirection::DistributionToFunction, &back).map_err(|e| e.to_string())?;
    if again.density.rehome(&t).map_err(|e| e.to_string())? != phi {
        return Err("inverse transform does not return a + ξb".into());
    }
    Ok(format!("φ̂ = i d(f)(b − i a f), inverse exact; {}", suites(&["fourier"], 50)?))
}

fn deterministic() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_superforms"))
            .args(["check", "all", "--json", "--seed", "0"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() {
        return Err(format!("exit status {}", a.status));
    }
    if a.stdout != b.stdout {
        return Err("outputs differ".into());
    }
    Ok(format!("{} bytes identical across two runs", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("Thom form on R^(0|2)", worked_example),
        ("d_g-closedness of θ", closed),
        ("localization to the origin", localization),
        ("Euler form vs Spf", euler),
        ("Fourier transform", fourier),
        ("Berezinian", || suites(&["berezinian"], 150)),
        ("moment map bracket", || suites(&["moment"], 1)),
        ("Berezin integral laws", || suites(&["fubini", "translation", "change-of-variables", "liouville"], 2)),
        ("Cartan relations", || suites(&["cartan"], 100)),
        ("deterministic JSON", deterministic),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let tol = if i == 9 { "byte-exact" } else { "exact, tolerance 0" };
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS [{tol}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{tol}] {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
