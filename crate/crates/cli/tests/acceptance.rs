//! One line per acceptance criterion; exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hyperdist::format::{parse_dist, parse_hyper, parse_tagged, Workspace};
use hyperdist::laws::generators::random_workspace;
use hyperdist::laws::{self, CheckConfig, Counterexample, Verdict, COUNIT_COUNTEREXAMPLE};
use hyperdist::predicates::Predicate;
use hyperdist::{
    check_witness, condition, h_from_witness, hyper_condition, hyper_condition_direct, hyper_normalise, nrm, q,
    recover_state, recover_test, test_refines, validity, witness_from_h, Channel, Space, SubDist,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn load(name: &str) -> Workspace {
    let path = format!("{}/workspaces/{name}", env!("CARGO_MANIFEST_DIR"));
    Workspace::from_json(&std::fs::read_to_string(path).expect("workspace file")).expect("workspace loads")
}

fn colour() -> Outcome {
    let space = Space::labels("Colour", &["R", "G", "B"]).unwrap();
    let phi = SubDist::from_terms([
        (space.label("R").unwrap(), q(1, 8)),
        (space.label("G").unwrap(), q(1, 4)),
        (space.label("B").unwrap(), q(1, 2)),
    ])
    .unwrap();
    let expected = parse_dist("1/7|R> + 2/7|G> + 4/7|B>", &space).unwrap();
    let fastest = (0..50)
        .map(|_| {
            let t = Instant::now();
            let out = nrm(&phi).unwrap();
            (t.elapsed(), out)
        })
        .inspect(|(_, out)| assert_eq!(*out, expected))
        .map(|(d, _)| d)
        .min()
        .unwrap();
    ensure(fastest < Duration::from_millis(1), format!("took {fastest:?}"))?;
    Ok(format!("1/7, 2/7, 4/7 in {fastest:?}"))
}

fn hyper_norm() -> Outcome {
    let ws = load("abcd.json");
    let omega = &ws.joints["omega"];
    let out = hyper_normalise(&omega.value);
    let expected = parse_hyper("3/8|k0(1/3|a> + 2/3|b>)> + 5/8|k1(4/5|c> + 1/5|d>)>", &omega.space, 3).unwrap();
    ensure(out == expected, format!("got {out}"))?;
    ensure(out.arity() == 3, "arity changed")?;
    Ok(format!("{out}, arity 3"))
}

fn table() -> Outcome {
    let ws = load("table.json");
    let omega = &ws.dists["omega"].value;
    let a = &ws.dists["omega"].space;
    let p = &ws.predicates["p"];
    let e = &ws.predicates["E"];
    let d = |s: &str| parse_dist(s, a).unwrap();
    ensure(validity(omega, p).unwrap() == q(5, 8), "validity of p")?;
    ensure(validity(omega, &p.complement()).unwrap() == q(3, 8), "validity of the complement")?;
    ensure(validity(omega, e).unwrap() == q(2, 3), "probability of E")?;
    ensure(condition(omega, p).unwrap() == d("1/5|a> + 2/15|b> + 2/3|c>"), "conditioning on p")?;
    ensure(
        condition(omega, &p.complement()).unwrap() == d("1/3|a> + 2/3|b>"),
        "conditioning on the complement",
    )?;
    ensure(condition(omega, e).unwrap() == d("3/8|a> + 5/8|c>"), "conditioning on E")?;
    let truth = Predicate::truth(a.clone());
    ensure(p.psum(&p.complement()).unwrap() == truth, "p and its complement sum to truth")?;
    Ok("5/8, 3/8, 2/3 and the three posteriors".into())
}

fn hyper_conditional() -> Outcome {
    let ws = load("table.json");
    let omega = &ws.dists["omega"];
    let t = &ws.tests["p_test"];
    let out = hyper_condition(&omega.value, t).unwrap();
    let expected = parse_hyper(
        "5/8|k0(1/5|a> + 2/15|b> + 2/3|c>)> + 3/8|k1(1/3|a> + 2/3|b>)>",
        &omega.space,
        2,
    )
    .unwrap();
    ensure(out == expected, format!("got {out}"))?;
    let direct = hyper_condition_direct(&omega.value, &t.components()).unwrap();
    ensure(direct == out, "direct form disagrees")?;
    Ok(out.to_string())
}

fn medical() -> Outcome {
    let ws = load("medical.json");
    let omega = &ws.dists["omega"];
    let out = hyper_condition(&omega.value, &ws.tests["s"]).unwrap();
    ensure(out.weights() == vec![q(117, 2000), q(1883, 2000)], "weights")?;
    let d = omega.space.label("d").unwrap();
    let nd = omega.space.label("d\u{304}").unwrap();
    let inner: Vec<_> = out.iter().map(|(t, _)| (t.value.mass(&d), t.value.mass(&nd))).collect();
    ensure(
        inner == vec![(q(18, 117), q(99, 117)), (q(2, 1883), q(1881, 1883))],
        format!("inner masses {out}"),
    )?;
    Ok("117/2000 and 1883/2000 with exact posteriors".into())
}

fn recovery() -> Outcome {
    let ws = load("coin.json");
    let space = ws.space("Coin").unwrap();
    let half = parse_dist("1/2|H> + 1/2|T>", &space).unwrap();
    for (hyper, test) in [("Phi", "s"), ("Psi", "t")] {
        let h = &ws.hyperdists[hyper].value;
        ensure(recover_state(h) == half, format!("state of {hyper}"))?;
        ensure(recover_test(h, &space).unwrap() == ws.tests[test], format!("test of {hyper}"))?;
    }
    let st2 = ws.hyperdists["Phi"].value.strength_flatten();
    let joint = parse_tagged("1/3|k0(H)> + 1/6|k0(T)> + 1/6|k1(H)> + 1/3|k1(T)>", &space, 2).unwrap();
    ensure(st2 == joint, "flattened joint")?;
    Ok("both states and both tests recovered".into())
}

fn refinement() -> Outcome {
    let ws = load("coin.json");
    let omega = &ws.dists["omega"].value;
    let (s, t) = (&ws.tests["s"], &ws.tests["t"]);
    let (phi, psi) = (&ws.hyperdists["Phi"].value, &ws.hyperdists["Psi"].value);
    let w = &ws.witnesses["Omega"].value;
    ensure(check_witness(phi, psi, w).unwrap(), "witness rejected")?;
    let h = h_from_witness(w, omega, s).unwrap();
    let rows = [
        parse_dist("2/3|0> + 1/3|1>", &Space::numeric_labels(3)).unwrap(),
        parse_dist("1/3|1> + 2/3|2>", &Space::numeric_labels(3)).unwrap(),
    ];
    let expected = Channel::from_fn(Space::numeric(2), Space::numeric(3), |i| {
        hyperdist::format::to_numeric_dist(&rows[*i]).unwrap()
    })
    .unwrap();
    ensure(h == expected, format!("h from witness is {h}"))?;
    let found = test_refines(s, t).unwrap().ok_or("no post-processing found")?;
    ensure(s.channel().then(&found).unwrap() == *t.channel(), "found h does not verify")?;
    let rebuilt = witness_from_h(omega, s, &expected).unwrap();
    ensure(rebuilt == *w, "witness from h differs")?;
    Ok("witness valid, h recovered, test refinement verified".into())
}

fn law_suite() -> Outcome {
    let cfg = CheckConfig::exhaustive(3, 3, 4);
    let start = Instant::now();
    let suites = [
        laws::check_kleisli_laws(&cfg),
        laws::check_norm_laws(&cfg),
        laws::check_characterisation(&cfg),
        laws::check_n_naturality(&cfg),
        laws::check_hyper_point(&cfg),
    ];
    let elapsed = start.elapsed();
    let mut instances = 0;
    for s in suites {
        let s = s.map_err(|e| e.to_string())?;
        ensure(s.ok(), s.to_string())?;
        for r in &s.reports {
            ensure(r.verdict == Verdict::Pass, r.to_string())?;
        }
        instances += s.instances();
    }
    ensure(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"))?;
    Ok(format!("{instances} instances in {:.1}s", elapsed.as_secs_f64()))
}

fn negative_fixtures() -> Outcome {
    let na = laws::check_non_affine();
    ensure(na.ok(), na.to_string())?;
    let values = hyperdist::fixtures::non_affine();
    let space = Space::labels("A", &["a", "b"]).unwrap();
    let lhs = parse_hyper("1/4|k0(1|a>)> + 3/4|k0(1|b>)>", &space, 2).unwrap();
    let rhs = parse_hyper("1|k0(1/4|a> + 3/4|b>)>", &space, 2).unwrap();
    ensure(values.mixed_outputs == lhs && values.output_of_mix == rhs, "mixture values")?;
    ensure(lhs != rhs, "sides coincide")?;
    ensure(
        matches!(na.report("non-affine.mix").map(|r| &r.verdict), Some(Verdict::ExpectedFail(_))),
        "mixing law not refuted",
    )?;

    let dl = laws::check_distributive_law(&CheckConfig::exhaustive(3, 3, 4)).map_err(|e| e.to_string())?;
    for r in &dl.reports {
        let expected_fail = r.law.starts_with("distributive.counit-rectangle") && !r.law.ends_with("unary");
        if expected_fail {
            ensure(matches!(r.verdict, Verdict::ExpectedFail(_)), r.to_string())?;
        } else {
            ensure(r.verdict == Verdict::Pass, r.to_string())?;
        }
    }
    let stored = Counterexample::from_json(COUNIT_COUNTEREXAMPLE).map_err(|e| e.to_string())?;
    let replay = stored.replay().map_err(|e| e.to_string())?;
    ensure(!replay.holds, "stored counterexample no longer fails")?;
    Ok(format!("non-affine values exact; counit rectangle fails at {}", stored.lhs))
}

fn bijection() -> Outcome {
    let s = laws::check_disintegration(&CheckConfig::exhaustive(3, 3, 4)).map_err(|e| e.to_string())?;
    ensure(s.ok(), s.to_string())?;
    for r in &s.reports {
        ensure(r.verdict == Verdict::Pass && r.instances > 0, r.to_string())?;
    }
    Ok(format!("{} instances", s.instances()))
}

fn cli_golden() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperdist"))
        .args(["examples", "--all"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.success(), format!("exit {:?}", out.status.code()))?;
    ensure(text.ends_with("8/8 fixtures exact\n"), text.to_string())?;
    for seed in 0..1000 {
        let ws = random_workspace(seed);
        let json = ws.to_json();
        let back = Workspace::from_json(&json).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == ws, format!("seed {seed}: value changed"))?;
        ensure(back.to_json() == json, format!("seed {seed}: rendering changed"))?;
    }
    Ok("8/8 fixtures exact; 1000 workspaces round-trip".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("colour normalisation", colour),
        ("hyper normalisation example", hyper_norm),
        ("validity table", table),
        ("hyper conditional", hyper_conditional),
        ("medical test", medical),
        ("state and test recovery", recovery),
        ("refinement witness", refinement),
        ("law suite at 3/3/4", law_suite),
        ("negative fixtures", negative_fixtures),
        ("disintegration bijection", bijection),
        ("CLI golden and round trip", cli_golden),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
