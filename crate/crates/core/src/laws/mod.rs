//! Executable checks of the algebraic laws on small generated instances.
//!
//! Every law is an equation between two computed values. A checker
//! evaluates a law on every generated instance (or a seeded sample of
//! them), counts the instances whose preconditions hold, and reports the
//! first failing instance as a replayable [`Counterexample`].

mod catalogue;
mod exec;
pub mod generators;
mod instance;

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::channel::Channel;
use crate::dist::Dist;
use crate::error::{Error, ParseError};
use crate::format::Workspace;
use crate::space::Label;

pub use catalogue::{law, LAWS};
pub use instance::Instance;

use catalogue::Family;
use exec::Step;

/// The Kleisli lifting `(f, ω) ↦ f_*(ω)` used by the Kleisli law checks.
pub type Lift = fn(&Channel<Label, Label>, &Dist<Label>) -> Dist<Label>;

/// The library's own lifting.
pub fn standard_lift(f: &Channel<Label, Label>, omega: &Dist<Label>) -> Dist<Label> {
    f.apply(omega).expect("state lives in the channel's source")
}

/// A stored counterexample to the counit rectangle, found by exhaustive search.
pub const COUNIT_COUNTEREXAMPLE: &str = include_str!("../../fixtures/counit-counterexample.json");

#[derive(Debug, Error)]
pub enum LawError {
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("law input `{0}` is missing")]
    MissingInput(&'static str),
    #[error("invalid check configuration: {0}")]
    InvalidConfig(String),
    #[error("instance does not meet the law's preconditions")]
    NotApplicable,
    #[error(transparent)]
    Domain(#[from] Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every generated instance.
    Exhaustive,
    /// `trials` instances per law drawn uniformly with a seeded generator.
    Randomised { seed: u64, trials: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Data-parallel when built with the `parallel` feature, sequential otherwise.
    Parallel,
}

/// Generation bounds and evaluation strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub max_space_size: usize,
    pub max_arity: usize,
    pub max_denominator: u64,
    pub mode: Mode,
    pub execution: Execution,
    /// Seed for the channels sampled alongside each enumerated instance.
    pub seed: u64,
    /// How many channel samples accompany each enumerated state.
    pub channel_samples: usize,
}

impl CheckConfig {
    pub fn exhaustive(max_space_size: usize, max_arity: usize, max_denominator: u64) -> Self {
        CheckConfig {
            max_space_size,
            max_arity,
            max_denominator,
            mode: Mode::Exhaustive,
            execution: Execution::Parallel,
            seed: 0,
            channel_samples: 2,
        }
    }

    pub fn randomised(max_space_size: usize, max_arity: usize, max_denominator: u64, seed: u64, trials: usize) -> Self {
        CheckConfig {
            mode: Mode::Randomised { seed, trials },
            seed,
            ..CheckConfig::exhaustive(max_space_size, max_arity, max_denominator)
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<(), LawError> {
        let bounds = [
            ("max_space_size", self.max_space_size as u64),
            ("max_arity", self.max_arity as u64),
            ("max_denominator", self.max_denominator),
            ("channel_samples", self.channel_samples as u64),
        ];
        match bounds.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(LawError::InvalidConfig(format!("{name} must be at least 1"))),
            None => Ok(()),
        }
    }
}

/// Both sides of one law evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

impl Comparison {
    pub fn of<T: PartialEq + fmt::Display>(lhs: &T, rhs: &T) -> Self {
        Comparison {
            holds: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

/// A failing instance in workspace form.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub law: String,
    pub workspace: Workspace,
    pub lhs: String,
    pub rhs: String,
}

impl Counterexample {
    fn new(law: &str, inst: &Instance, cmp: Comparison) -> Self {
        let mut workspace = inst.to_workspace(law);
        workspace.params.insert("lhs".into(), cmp.lhs.clone());
        workspace.params.insert("rhs".into(), cmp.rhs.clone());
        Counterexample {
            law: law.to_string(),
            workspace,
            lhs: cmp.lhs,
            rhs: cmp.rhs,
        }
    }

    pub fn to_json(&self) -> String {
        self.workspace.to_json()
    }

    pub fn from_json(text: &str) -> Result<Self, LawError> {
        let workspace = Workspace::from_json(text)?;
        let param = |k: &'static str| workspace.params.get(k).cloned().ok_or(LawError::MissingInput(k));
        Ok(Counterexample {
            law: param("law")?,
            lhs: param("lhs").unwrap_or_default(),
            rhs: param("rhs").unwrap_or_default(),
            workspace,
        })
    }

    /// Re-evaluates the law on the stored instance.
    pub fn replay(&self) -> Result<Comparison, LawError> {
        self.replay_with(standard_lift)
    }

    pub fn replay_with(&self, lift: Lift) -> Result<Comparison, LawError> {
        let law = law(&self.law).ok_or_else(|| LawError::UnknownLaw(self.law.clone()))?;
        let inst = Instance::from_workspace(&self.workspace)?;
        law.evaluate(&inst, lift)?.ok_or(LawError::NotApplicable)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(Box<Counterexample>),
    /// The law is known not to hold and a witness of that was found.
    ExpectedFail(Box<Counterexample>),
    /// The law is known not to hold but no instance refuted it.
    Unrefuted,
}

/// The outcome of checking one law.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub law: String,
    pub instances: usize,
    pub skipped: usize,
    pub verdict: Verdict,
}

impl CheckReport {
    /// Pass, or the expected failure was witnessed.
    pub fn ok(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::ExpectedFail(_))
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.verdict {
            Verdict::Fail(c) | Verdict::ExpectedFail(c) => Some(c),
            _ => None,
        }
    }

    pub fn to_json_value(&self) -> Value {
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "fail",
            Verdict::ExpectedFail(_) => "expected-fail",
            Verdict::Unrefuted => "unrefuted",
        };
        let mut v = json!({
            "law": self.law,
            "instances": self.instances,
            "skipped": self.skipped,
            "verdict": verdict,
        });
        if let Some(c) = self.counterexample() {
            v["counterexample"] = serde_json::from_str(&c.to_json()).expect("workspace JSON");
        }
        v
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail(_) => "FAIL",
            Verdict::ExpectedFail(_) => "EXPECTED-FAIL",
            Verdict::Unrefuted => "UNREFUTED",
        };
        write!(f, "{tag:<13} {} ({} instances", self.law, self.instances)?;
        if self.skipped > 0 {
            write!(f, ", {} skipped", self.skipped)?;
        }
        f.write_str(")")?;
        if let Some(c) = self.counterexample() {
            write!(f, "\n    lhs: {}\n    rhs: {}", c.lhs, c.rhs)?;
        }
        Ok(())
    }
}

/// The reports of one checker.
#[derive(Clone, Debug, PartialEq)]
pub struct Suite {
    pub name: &'static str,
    pub reports: Vec<CheckReport>,
}

impl Suite {
    pub fn ok(&self) -> bool {
        self.reports.iter().all(CheckReport::ok)
    }

    pub fn instances(&self) -> usize {
        self.reports.iter().map(|r| r.instances).sum()
    }

    pub fn report(&self, law: &str) -> Option<&CheckReport> {
        self.reports.iter().find(|r| r.law == law)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "suite": self.name,
            "ok": self.ok(),
            "reports": self.reports.iter().map(CheckReport::to_json_value).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]", self.name, if self.ok() { "ok" } else { "FAILED" })?;
        for r in &self.reports {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

fn run(law_id: &str, families: &[Family], cfg: &CheckConfig, lift: Lift) -> CheckReport {
    let law = law(law_id).expect("registered law");
    let offsets: Vec<usize> = families
        .iter()
        .scan(0, |acc, f| {
            let start = *acc;
            *acc += f.count;
            Some(start)
        })
        .collect();
    let total: usize = families.iter().map(|f| f.count).sum();
    let locate = |global: usize| -> Instance {
        let k = offsets.partition_point(|&o| o <= global) - 1;
        (families[k].make)(global - offsets[k])
    };
    let sample: Option<Vec<usize>> = match cfg.mode {
        Mode::Exhaustive => None,
        Mode::Randomised { seed, trials } if total > 0 => {
            use rand::Rng;
            let mut r = generators::rng(seed, catalogue::salt(law_id));
            Some((0..trials).map(|_| r.gen_range(0..total)).collect())
        }
        Mode::Randomised { .. } => Some(Vec::new()),
    };
    let index = |pos: usize| sample.as_ref().map_or(pos, |s| s[pos]);
    let len = sample.as_ref().map_or(total, Vec::len);
    let eval = |pos: usize| match law.evaluate(&locate(index(pos)), lift) {
        Ok(None) => Step::Skipped,
        Ok(Some(c)) if c.holds => Step::Held,
        Ok(Some(c)) => Step::Failed(c),
        Err(e) => Step::Failed(Comparison {
            holds: false,
            lhs: format!("error: {e}"),
            rhs: String::new(),
        }),
    };
    let tally = match cfg.execution {
        Execution::Sequential => exec::sequential(len, eval),
        Execution::Parallel => exec::parallel(len, eval),
    };
    let cex = tally
        .first_failure
        .map(|(pos, c)| Box::new(Counterexample::new(law_id, &locate(index(pos)), c)));
    let verdict = match (law.expect_fail, cex) {
        (false, None) => Verdict::Pass,
        (false, Some(c)) => Verdict::Fail(c),
        (true, Some(c)) => Verdict::ExpectedFail(c),
        (true, None) => Verdict::Unrefuted,
    };
    CheckReport {
        law: law_id.to_string(),
        instances: tally.checked,
        skipped: tally.skipped,
        verdict,
    }
}

/// Unit and associativity laws of Kleisli extension, and the projections
/// of strength and graph.
pub fn check_kleisli_laws(cfg: &CheckConfig) -> Result<Suite, LawError> {
    check_kleisli_laws_with(cfg, standard_lift)
}

/// [`check_kleisli_laws`] with a replacement lifting, for testing the checker itself.
pub fn check_kleisli_laws_with(cfg: &CheckConfig, lift: Lift) -> Result<Suite, LawError> {
    cfg.validate()?;
    let fam = catalogue::states(cfg);
    let reports = catalogue::KLEISLI
        .iter()
        .map(|id| run(id, &fam, cfg, lift))
        .collect();
    Ok(Suite {
        name: "kleisli",
        reports,
    })
}

/// Trivial inputs, projections, idempotence, left inverse and naturality of `N`.
pub fn check_norm_laws(cfg: &CheckConfig) -> Result<Suite, LawError> {
    cfg.validate()?;
    let joints = catalogue::joints(cfg, 1);
    let reports = vec![
        run("norm.trivial-input", &catalogue::tagged_states(cfg), cfg, standard_lift),
        run("norm.trivial-strength", &catalogue::weighted_points(cfg), cfg, standard_lift),
        run("norm.tags", &joints, cfg, standard_lift),
        run("norm.underlying", &joints, cfg, standard_lift),
        run("norm.idempotent", &joints, cfg, standard_lift),
        run("norm.flatten-inverse", &joints, cfg, standard_lift),
        run("norm.left-inverse", &joints, cfg, standard_lift),
        run("norm.natural-map", &joints, cfg, standard_lift),
        run("norm.natural-bind", &joints, cfg, standard_lift),
    ];
    Ok(Suite { name: "norm", reports })
}

/// `N` as the unique map making the sprinkle rectangle commute.
pub fn check_characterisation(cfg: &CheckConfig) -> Result<Suite, LawError> {
    cfg.validate()?;
    let reports = vec![
        run("characterisation.rectangle", &catalogue::rectangles(cfg), cfg, standard_lift),
        run("characterisation.table", &catalogue::tables(cfg), cfg, standard_lift),
    ];
    Ok(Suite {
        name: "characterisation",
        reports,
    })
}

/// Naturality of `N` in the arity, for postprocessing channels `h : n ⊸ m`.
pub fn check_n_naturality(cfg: &CheckConfig) -> Result<Suite, LawError> {
    cfg.validate()?;
    let reports = vec![run("naturality.retag", &catalogue::joints(cfg, 1), cfg, standard_lift)];
    Ok(Suite {
        name: "n-naturality",
        reports,
    })
}

/// The twisted normalisation as a graph over the tag marginal.
pub fn check_hyper_point(cfg: &CheckConfig) -> Result<Suite, LawError> {
    cfg.validate()?;
    let joints = catalogue::joints(cfg, 1);
    let reports = vec![
        run("hyper-point.twist", &joints, cfg, standard_lift),
        run("hyper-point.disintegration", &joints, cfg, standard_lift),
    ];
    Ok(Suite {
        name: "hyper-point",
        reports,
    })
}

/// The distributive law between `D̄` and `n∗(−)` in the Kleisli category,
/// including the counit rectangle that fails for `n ≥ 2`.
pub fn check_distributive_law(cfg: &CheckConfig) -> Result<Suite, LawError> {
    cfg.validate()?;
    let joints = catalogue::joints(cfg, 1);
    let mut reports: Vec<CheckReport> = [
        "distributive.naturality",
        "distributive.comult-left",
        "distributive.comult-right",
        "distributive.counit",
        "distributive.two-counit",
    ]
    .iter()
    .map(|id| run(id, &joints, cfg, standard_lift))
    .collect();
    reports.push(run(
        "distributive.counit-rectangle",
        &catalogue::joints(cfg, 2),
        cfg,
        standard_lift,
    ));
    reports.push(run(
        "distributive.counit-rectangle-unary",
        &catalogue::unary_joints(cfg),
        cfg,
        standard_lift,
    ));
    reports.push(stored_counit_report()?);
    Ok(Suite {
        name: "distributive",
        reports,
    })
}

fn stored_counit_report() -> Result<CheckReport, LawError> {
    let cex = Counterexample::from_json(COUNIT_COUNTEREXAMPLE)?;
    let replayed = cex.replay()?;
    Ok(CheckReport {
        law: "distributive.counit-rectangle-stored".into(),
        instances: 1,
        skipped: 0,
        verdict: if replayed.holds {
            Verdict::Unrefuted
        } else {
            Verdict::ExpectedFail(Box::new(cex))
        },
    })
}

/// `N` is not affine, though it is on mixtures that keep every normalised block.
pub fn check_non_affine() -> Suite {
    let cfg = CheckConfig::exhaustive(2, 2, 2);
    let reports = vec![
        run("non-affine.values", &catalogue::single(), &cfg, standard_lift),
        run("non-affine.mix", &catalogue::mixing(), &cfg, standard_lift),
        run("non-affine.fixed-blocks", &catalogue::mixtures(&cfg), &cfg, standard_lift),
        run("non-affine.unary", &catalogue::unary_joints(&cfg), &cfg, standard_lift),
    ];
    Suite {
        name: "non-affine",
        reports,
    }
}

/// Joint states over `n·A` correspond to conditionals `A ⊸ n` with a
/// full-support marginal.
pub fn check_disintegration(cfg: &CheckConfig) -> Result<Suite, LawError> {
    cfg.validate()?;
    let reports = vec![
        run("disintegration.joint-round-trip", &catalogue::joints(cfg, 1), cfg, standard_lift),
        run(
            "disintegration.conditional-round-trip",
            &catalogue::conditionals(cfg),
            cfg,
            standard_lift,
        ),
    ];
    Ok(Suite {
        name: "disintegration",
        reports,
    })
}

/// Every suite.
pub fn check_all(cfg: &CheckConfig) -> Result<Vec<Suite>, LawError> {
    Ok(vec![
        check_kleisli_laws(cfg)?,
        check_norm_laws(cfg)?,
        check_characterisation(cfg)?,
        check_n_naturality(cfg)?,
        check_hyper_point(cfg)?,
        check_distributive_law(cfg)?,
        check_non_affine(),
        check_disintegration(cfg)?,
    ])
}
