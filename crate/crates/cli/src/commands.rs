use std::fmt::Write as _;

use hyperdist::fixtures::{self, NAMES};
use hyperdist::format::{from_numeric_channel, Typed, Workspace};
use hyperdist::laws::{self, CheckConfig, Execution, Suite};
use hyperdist::refinement::Refinement;
use hyperdist::{
    check_witness, denote_channel, disintegrate, hyper_condition, hyper_normalise, hyper_refines, nrm, test_refines,
    validity, witness_from_h, Channel, Space, Test,
};
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Ket,
    Json,
}

/// What a command printed and how it should exit.
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn lookup<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    kind: &'static str,
    name: &str,
) -> Result<&'a T, CliError> {
    map.get(name).ok_or_else(|| CliError::Missing {
        kind,
        name: name.to_string(),
    })
}

fn with_line(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn result_workspace(spaces: &[&Space]) -> Workspace {
    let mut ws = Workspace::new();
    for s in spaces {
        if !s.name().bytes().all(|b| b.is_ascii_digit()) {
            ws.declare(s);
        }
    }
    ws
}

fn pretty(v: &Value) -> String {
    with_line(serde_json::to_string_pretty(v).expect("JSON value"))
}

pub fn nrm_cmd(ws: &Workspace, name: &str, format: Format) -> Result<Output, CliError> {
    let (space, sub) = match ws.subdists.get(name) {
        Some(t) => (t.space.clone(), t.value.clone()),
        None => {
            let d = lookup(&ws.dists, "subdistribution", name)?;
            (d.space.clone(), d.value.to_sub())
        }
    };
    let out = nrm(&sub)?;
    Ok(Output::ok(match format {
        Format::Ket => with_line(out.to_string()),
        Format::Json => {
            let mut res = result_workspace(&[&space]);
            res.dists.insert("result".into(), Typed::new(space, out));
            res.to_json()
        }
    }))
}

pub fn hypernorm_cmd(ws: &Workspace, name: &str, format: Format) -> Result<Output, CliError> {
    let j = lookup(&ws.joints, "joint", name)?;
    let out = hyper_normalise(&j.value);
    Ok(Output::ok(match format {
        Format::Ket => with_line(out.to_string()),
        Format::Json => {
            let mut res = result_workspace(&[&j.space]);
            res.hyperdists.insert("result".into(), Typed::new(j.space.clone(), out));
            res.to_json()
        }
    }))
}

pub fn condition_cmd(ws: &Workspace, dist: &str, pred: &str, format: Format) -> Result<Output, CliError> {
    let d = lookup(&ws.dists, "distribution", dist)?;
    let p = lookup(&ws.predicates, "predicate", pred)?;
    let v = validity(&d.value, p)?;
    let out = hyperdist::condition(&d.value, p)?;
    Ok(Output::ok(match format {
        Format::Ket => format!("validity = {v}\n{out}\n"),
        Format::Json => {
            let mut res = result_workspace(&[&d.space]);
            res.dists.insert("result".into(), Typed::new(d.space.clone(), out));
            res.params.insert("validity".into(), v.to_string());
            res.to_json()
        }
    }))
}

pub fn hypercond_cmd(ws: &Workspace, dist: &str, test: &str, format: Format) -> Result<Output, CliError> {
    let d = lookup(&ws.dists, "distribution", dist)?;
    let t = lookup(&ws.tests, "test", test)?;
    let out = hyper_condition(&d.value, t)?;
    Ok(Output::ok(match format {
        Format::Ket => with_line(out.to_string()),
        Format::Json => {
            let mut res = result_workspace(&[&d.space]);
            res.hyperdists.insert("result".into(), Typed::new(d.space.clone(), out));
            res.to_json()
        }
    }))
}

pub fn disintegrate_cmd(ws: &Workspace, name: &str, format: Format) -> Result<Output, CliError> {
    let j = lookup(&ws.joints, "joint", name)?;
    let out = disintegrate(&j.value, &j.space)?;
    Ok(Output::ok(match format {
        Format::Ket => format!("marginal = {}\n{}\n", out.marginal, out.conditional),
        Format::Json => {
            let mut res = result_workspace(&[&j.space]);
            res.dists.insert("marginal".into(), Typed::new(j.space.clone(), out.marginal));
            res.tests.insert("result".into(), Test::new(out.conditional));
            res.to_json()
        }
    }))
}

pub fn denote_cmd(ws: &Workspace, dist: &str, test: &str, format: Format) -> Result<Output, CliError> {
    let d = lookup(&ws.dists, "distribution", dist)?;
    let t = lookup(&ws.tests, "test", test)?;
    let out = denote_channel(t, &d.value)?;
    Ok(Output::ok(match format {
        Format::Ket => with_line(out.to_string()),
        Format::Json => {
            let mass: serde_json::Map<String, Value> = out
                .iter()
                .map(|(inner, p)| (inner.to_string(), Value::String(p.to_string())))
                .collect();
            pretty(&json!({ "space": d.space.name(), "mass": mass }))
        }
    }))
}

fn render_h(h: &Channel<usize, usize>, verdict: &str, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Ket => format!("{h}\n{verdict}\n"),
        Format::Json => {
            let mut res = Workspace::new();
            res.channels.insert("h".into(), from_numeric_channel(h)?);
            res.params.insert("verdict".into(), verdict.into());
            res.to_json()
        }
    })
}

fn verdict_only(verdict: &str, format: Format) -> String {
    match format {
        Format::Ket => format!("{verdict}\n"),
        Format::Json => {
            let mut res = Workspace::new();
            res.params.insert("verdict".into(), verdict.into());
            res.to_json()
        }
    }
}

pub fn refine_cmd(ws: &Workspace, from: &str, to: &str, format: Format) -> Result<Output, CliError> {
    if let (Some(s), Some(t)) = (ws.tests.get(from), ws.tests.get(to)) {
        return Ok(Output::ok(match test_refines(s, t)? {
            Some(h) => render_h(&h, "REFINES", format)?,
            None => verdict_only("DOES NOT REFINE", format),
        }));
    }
    let phi = lookup(&ws.hyperdists, "test or hyper distribution", from)?;
    let psi = lookup(&ws.hyperdists, "test or hyper distribution", to)?;
    match hyper_refines(&phi.value, &psi.value, &phi.space)? {
        Refinement::Refines { h, .. } => Ok(Output::ok(render_h(&h, "REFINES", format)?)),
        Refinement::NotRefinable => Ok(Output::ok(verdict_only("DOES NOT REFINE", format))),
        Refinement::Undetermined(e) => Err(CliError::Undetermined(e)),
    }
}

pub fn witness_cmd(
    ws: &Workspace,
    dist: Option<&str>,
    witness: Option<&str>,
    from: &str,
    to: &str,
    format: Format,
) -> Result<Output, CliError> {
    if let Some(w) = witness {
        let w = lookup(&ws.witnesses, "witness", w)?;
        let phi = lookup(&ws.hyperdists, "hyper distribution", from)?;
        let psi = lookup(&ws.hyperdists, "hyper distribution", to)?;
        let ok = check_witness(&phi.value, &psi.value, &w.value)?;
        let verdict = if ok { "VALID" } else { "INVALID" };
        return Ok(Output {
            text: verdict_only(verdict, format),
            code: if ok { 0 } else { 1 },
        });
    }
    let dist = dist.ok_or_else(|| CliError::Usage("witness needs --dist or --witness".into()))?;
    let d = lookup(&ws.dists, "distribution", dist)?;
    let s = lookup(&ws.tests, "test", from)?;
    let t = lookup(&ws.tests, "test", to)?;
    let Some(h) = test_refines(s, t)? else {
        return Ok(Output {
            text: verdict_only("DOES NOT REFINE", format),
            code: 1,
        });
    };
    let w = witness_from_h(&d.value, s, &h)?;
    Ok(Output::ok(match format {
        Format::Ket => with_line(w.omega().to_string()),
        Format::Json => {
            let mut res = result_workspace(&[&d.space]);
            res.witnesses.insert("result".into(), Typed::new(d.space.clone(), w));
            res.to_json()
        }
    }))
}

/// Law-suite bounds and mode.
pub struct LawArgs {
    pub suite: String,
    pub max_size: usize,
    pub max_arity: usize,
    pub max_denominator: u64,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub sequential: bool,
}

pub const SUITES: [&str; 8] = [
    "kleisli",
    "norm",
    "characterisation",
    "naturality",
    "hyper-point",
    "distributive",
    "non-affine",
    "disintegration",
];

pub fn laws_cmd(args: &LawArgs, format: Format) -> Result<Output, CliError> {
    let mut cfg = match args.trials {
        Some(trials) => CheckConfig::randomised(
            args.max_size,
            args.max_arity,
            args.max_denominator,
            args.seed.unwrap_or(0),
            trials,
        ),
        None => CheckConfig::exhaustive(args.max_size, args.max_arity, args.max_denominator),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.sequential {
        cfg = cfg.with_execution(Execution::Sequential);
    }
    let suites: Vec<Suite> = match args.suite.as_str() {
        "all" => laws::check_all(&cfg)?,
        "kleisli" => vec![laws::check_kleisli_laws(&cfg)?],
        "norm" => vec![laws::check_norm_laws(&cfg)?],
        "characterisation" => vec![laws::check_characterisation(&cfg)?],
        "naturality" => vec![laws::check_n_naturality(&cfg)?],
        "hyper-point" => vec![laws::check_hyper_point(&cfg)?],
        "distributive" => vec![laws::check_distributive_law(&cfg)?],
        "non-affine" => vec![laws::check_non_affine()],
        "disintegration" => vec![laws::check_disintegration(&cfg)?],
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite `{other}`; expected all or one of {}",
                SUITES.join(", ")
            )))
        }
    };
    let ok = suites.iter().all(Suite::ok);
    let text = match format {
        Format::Ket => {
            let mut s = String::new();
            for suite in &suites {
                write!(s, "{suite}").expect("string write");
            }
            let total: usize = suites.iter().map(Suite::instances).sum();
            let good = suites.iter().filter(|s| s.ok()).count();
            writeln!(s, "{good}/{} suites ok, {total} instances", suites.len()).expect("string write");
            s
        }
        Format::Json => pretty(&json!({
            "ok": ok,
            "suites": suites.iter().map(Suite::to_json_value).collect::<Vec<_>>(),
        })),
    };
    Ok(Output {
        text,
        code: if ok { 0 } else { 1 },
    })
}

pub fn examples_cmd(only: Option<&str>, format: Format) -> Result<Output, CliError> {
    let names: Vec<&str> = match only {
        Some(n) if NAMES.contains(&n) => vec![n],
        Some(n) => {
            return Err(CliError::Usage(format!(
                "unknown example `{n}`; expected one of {}",
                NAMES.join(", ")
            )))
        }
        None => NAMES.to_vec(),
    };
    let mut reports = Vec::new();
    for n in &names {
        reports.push(fixtures::run(n).expect("listed fixture")?);
    }
    let exact = reports.iter().filter(|r| r.exact()).count();
    let text = match format {
        Format::Ket => {
            let mut s = String::new();
            for r in &reports {
                writeln!(s, "{}: {}", r.name, if r.exact() { "exact" } else { "MISMATCH" }).expect("string write");
                for c in &r.checks {
                    let computed = c.computed.replace('\n', "\n      ");
                    let expected = c.expected.replace('\n', "\n      ");
                    if c.exact {
                        writeln!(s, "  {} = {computed}", c.what).expect("string write");
                    } else {
                        writeln!(s, "  {} = {computed} (expected {expected})", c.what).expect("string write");
                    }
                }
            }
            writeln!(s, "{exact}/{} fixtures exact", reports.len()).expect("string write");
            s
        }
        Format::Json => pretty(&json!({
            "exact": exact,
            "total": reports.len(),
            "fixtures": reports.iter().map(|r| json!({
                "name": r.name,
                "exact": r.exact(),
                "checks": r.checks.iter().map(|c| json!({
                    "what": c.what,
                    "expected": c.expected,
                    "computed": c.computed,
                    "exact": c.exact,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Output {
        text,
        code: if exact == reports.len() { 0 } else { 1 },
    })
}
