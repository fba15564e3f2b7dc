//! Worked examples with hand-entered expected values, replayed exactly.

use std::fmt::Display;

use crate::channel::Channel;
use crate::dist::{Dist, SubDist};
use crate::error::Result;
use crate::hypercond::{hyper_condition, hyper_condition_direct, recover_state, recover_test};
use crate::normalise::{hyper_normalise, joint_from_conditional, nrm};
use crate::predicates::{condition, validity, wp, Predicate, Test};
use crate::prob::q;
use crate::refinement::{check_witness, h_from_witness, test_refines, theta, witness_from_h, RefinementWitness};
use crate::space::{Label, Space, Tagged};
use crate::tagged::{HyperDist, TaggedDist};

/// Builds a distribution from `(label, numerator, denominator)` triples.
pub fn dist(space: &Space, terms: &[(&str, u64, u64)]) -> Dist<Label> {
    Dist::from_terms(terms.iter().map(|(l, n, d)| (space.label(l).expect("fixture label"), q(*n, *d))))
        .expect("fixture distribution")
}

/// Builds a numeric distribution from `(point, numerator, denominator)` triples.
pub fn ndist(terms: &[(usize, u64, u64)]) -> Dist<usize> {
    Dist::from_terms(terms.iter().map(|(i, n, d)| (*i, q(*n, *d)))).expect("fixture distribution")
}

/// Builds a tagged distribution from `(tag, label, numerator, denominator)`.
pub fn tagged(space: &Space, arity: usize, terms: &[(usize, &str, u64, u64)]) -> TaggedDist<Label> {
    TaggedDist::from_terms(
        arity,
        terms
            .iter()
            .map(|(i, l, n, d)| (Tagged::new(*i, space.label(l).expect("fixture label")), q(*n, *d))),
    )
    .expect("fixture tagged distribution")
}

/// Builds a hyper distribution from `(tag, inner, numerator, denominator)`.
pub fn hyper<T: crate::space::Outcome>(arity: usize, terms: Vec<(usize, Dist<T>, u64, u64)>) -> HyperDist<T> {
    TaggedDist::from_terms(
        arity,
        terms.into_iter().map(|(i, inner, n, d)| (Tagged::new(i, inner), q(n, d))),
    )
    .expect("fixture hyper distribution")
}

/// Builds a channel into a numeric space from one row per source label.
pub fn test_rows(space: &Space, arity: usize, rows: &[(&str, Dist<usize>)]) -> Test {
    let s = space.clone();
    Test::new(
        Channel::from_fn(space.clone(), Space::numeric(arity), |a| {
            rows.iter()
                .find(|(l, _)| s.label(l).expect("fixture label") == *a)
                .expect("fixture row")
                .1
                .clone()
        })
        .expect("fixture test"),
    )
}

/// Builds a channel `n ⊸ m` from rows.
pub fn numeric_channel(m: usize, rows: &[Dist<usize>]) -> Channel<usize, usize> {
    Channel::from_fn(Space::numeric(rows.len()), Space::numeric(m), |i| rows[*i].clone())
        .expect("fixture channel")
}

pub struct Colour {
    pub space: Space,
    pub phi: SubDist<Label>,
}

pub fn colour() -> Colour {
    let space = Space::labels("Colour", &["R", "G", "B"]).expect("labels");
    let l = |n| space.label(n).expect("label");
    let phi = SubDist::from_terms([(l("R"), q(1, 8)), (l("G"), q(1, 4)), (l("B"), q(1, 2))]).expect("sub");
    Colour { space, phi }
}

pub struct Section3 {
    pub space: Space,
    pub omega: TaggedDist<Label>,
}

pub fn section3() -> Section3 {
    let space = Space::labels("A", &["a", "b", "c", "d"]).expect("labels");
    let omega = tagged(
        &space,
        3,
        &[(0, "a", 1, 8), (0, "b", 1, 4), (1, "c", 1, 2), (1, "d", 1, 8)],
    );
    Section3 { space, omega }
}

pub struct Table {
    pub space: Space,
    pub omega: Dist<Label>,
    pub p: Predicate,
    pub event: Predicate,
}

pub fn table() -> Table {
    let space = Space::labels("A", &["a", "b", "c"]).expect("labels");
    let omega = dist(&space, &[("a", 1, 4), ("b", 1, 3), ("c", 5, 12)]);
    let p = Predicate::from_values(space.clone(), &[q(1, 2), q(1, 4), q(1, 1)]).expect("predicate");
    let event = Predicate::indicator(
        space.clone(),
        &[space.label("a").expect("a"), space.label("c").expect("c")],
    )
    .expect("event");
    Table {
        space,
        omega,
        p,
        event,
    }
}

pub struct Coin {
    pub space: Space,
    pub omega: Dist<Label>,
    pub s: Test,
    pub t: Test,
    pub h: Channel<usize, usize>,
    pub phi: HyperDist<Label>,
    pub psi: HyperDist<Label>,
    pub witness: RefinementWitness<Label>,
}

pub fn coin() -> Coin {
    let space = Space::labels("Coin", &["H", "T"]).expect("labels");
    let omega = dist(&space, &[("H", 1, 2), ("T", 1, 2)]);
    let phi0 = dist(&space, &[("H", 2, 3), ("T", 1, 3)]);
    let phi1 = dist(&space, &[("H", 1, 3), ("T", 2, 3)]);
    let even = dist(&space, &[("H", 1, 2), ("T", 1, 2)]);
    let s = test_rows(
        &space,
        2,
        &[
            ("H", ndist(&[(0, 2, 3), (1, 1, 3)])),
            ("T", ndist(&[(0, 1, 3), (1, 2, 3)])),
        ],
    );
    let t = test_rows(
        &space,
        3,
        &[
            ("H", ndist(&[(0, 4, 9), (1, 1, 3), (2, 2, 9)])),
            ("T", ndist(&[(0, 2, 9), (1, 1, 3), (2, 4, 9)])),
        ],
    );
    let h = numeric_channel(3, &[ndist(&[(0, 2, 3), (1, 1, 3)]), ndist(&[(1, 1, 3), (2, 2, 3)])]);
    let phi = hyper(2, vec![(0, phi0.clone(), 1, 2), (1, phi1.clone(), 1, 2)]);
    let psi = hyper(
        3,
        vec![(0, phi0.clone(), 1, 3), (1, even, 1, 3), (2, phi1.clone(), 1, 3)],
    );
    let k0 = Tagged::new(0, phi0);
    let k1 = Tagged::new(1, phi1);
    let mix = Dist::from_terms([(k0.clone(), q(1, 2)), (k1.clone(), q(1, 2))]).expect("mix");
    let omega_w = hyper(
        3,
        vec![
            (0, Dist::dirac(k0), 1, 3),
            (1, mix, 1, 3),
            (2, Dist::dirac(k1), 1, 3),
        ],
    );
    let witness = RefinementWitness::new(2, omega_w).expect("witness");
    Coin {
        space,
        omega,
        s,
        t,
        h,
        phi,
        psi,
        witness,
    }
}

pub struct Medical {
    pub space: Space,
    pub outcomes: Space,
    pub omega: Dist<Label>,
    /// The test as a channel into `{t, t̄}`.
    pub sensor: Channel<Label, Label>,
    /// The same test as a 2-test, outcome 0 being positive.
    pub s: Test,
}

pub fn medical() -> Medical {
    let space = Space::labels("Disease", &["d", "d\u{304}"]).expect("labels");
    let outcomes = Space::labels("Result", &["t", "t\u{304}"]).expect("labels");
    let omega = dist(&space, &[("d", 1, 100), ("d\u{304}", 99, 100)]);
    let rows = [
        ("d", dist(&outcomes, &[("t", 9, 10), ("t\u{304}", 1, 10)])),
        ("d\u{304}", dist(&outcomes, &[("t", 1, 20), ("t\u{304}", 19, 20)])),
    ];
    let sp = space.clone();
    let sensor = Channel::from_fn(space.clone(), outcomes.clone(), |a| {
        rows.iter()
            .find(|(l, _)| sp.label(l).expect("label") == *a)
            .expect("row")
            .1
            .clone()
    })
    .expect("sensor");
    let s = test_rows(
        &space,
        2,
        &[
            ("d", ndist(&[(0, 9, 10), (1, 1, 10)])),
            ("d\u{304}", ndist(&[(0, 1, 20), (1, 19, 20)])),
        ],
    );
    Medical {
        space,
        outcomes,
        omega,
        sensor,
        s,
    }
}

/// The two sides of the non-affineness counterexample.
pub struct NonAffine {
    pub mixed_outputs: HyperDist<Label>,
    pub output_of_mix: HyperDist<Label>,
}

pub fn non_affine() -> NonAffine {
    let space = Space::labels("A", &["a", "b"]).expect("labels");
    let na = hyper_normalise(&tagged(&space, 2, &[(0, "a", 1, 1)]));
    let nb = hyper_normalise(&tagged(&space, 2, &[(0, "b", 1, 1)]));
    let mix = Dist::from_terms([(na.into_dist(), q(1, 4)), (nb.into_dist(), q(3, 4))])
        .expect("mix")
        .flatten();
    let mixed_outputs = TaggedDist::new(2, mix).expect("tags in range");
    let output_of_mix = hyper_normalise(&tagged(&space, 2, &[(0, "a", 1, 4), (0, "b", 3, 4)]));
    NonAffine {
        mixed_outputs,
        output_of_mix,
    }
}

/// One expected-versus-computed comparison.
#[derive(Clone, Debug)]
pub struct FixtureCheck {
    pub what: String,
    pub expected: String,
    pub computed: String,
    pub exact: bool,
}

/// The result of replaying one example.
#[derive(Clone, Debug)]
pub struct FixtureReport {
    pub name: &'static str,
    pub checks: Vec<FixtureCheck>,
}

impl FixtureReport {
    fn new(name: &'static str) -> Self {
        FixtureReport {
            name,
            checks: Vec::new(),
        }
    }

    fn check<T: PartialEq + Display>(&mut self, what: &str, expected: &T, computed: &T) {
        self.checks.push(FixtureCheck {
            what: what.to_string(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            exact: expected == computed,
        });
    }

    fn holds(&mut self, what: &str, computed: bool) {
        self.check(what, &true, &computed);
    }

    pub fn exact(&self) -> bool {
        self.checks.iter().all(|c| c.exact)
    }
}

pub const NAMES: [&str; 8] = [
    "colour",
    "hyper-norm",
    "validity-table",
    "hyper-conditional",
    "recovery",
    "medical",
    "refinement",
    "non-affine",
];

/// Replays the named example.
pub fn run(name: &str) -> Option<Result<FixtureReport>> {
    let f: fn() -> Result<FixtureReport> = match name {
        "colour" => run_colour,
        "hyper-norm" => run_hyper_norm,
        "validity-table" => run_validity_table,
        "hyper-conditional" => run_hyper_conditional,
        "recovery" => run_recovery,
        "medical" => run_medical,
        "refinement" => run_refinement,
        "non-affine" => run_non_affine,
        _ => return None,
    };
    Some(f())
}

fn run_colour() -> Result<FixtureReport> {
    let c = colour();
    let mut r = FixtureReport::new("colour");
    let out = nrm(&c.phi)?;
    for (l, n) in [("R", 1), ("G", 2), ("B", 4)] {
        let label = c.space.label(l)?;
        r.check(&format!("nrm({l})"), &q(n, 7), &out.mass(&label));
    }
    Ok(r)
}

fn run_hyper_norm() -> Result<FixtureReport> {
    let s = section3();
    let mut r = FixtureReport::new("hyper-norm");
    let expected = hyper(
        3,
        vec![
            (0, dist(&s.space, &[("a", 1, 3), ("b", 2, 3)]), 3, 8),
            (1, dist(&s.space, &[("c", 4, 5), ("d", 1, 5)]), 5, 8),
        ],
    );
    let out = hyper_normalise(&s.omega);
    r.check("N(omega)", &expected, &out);
    r.check("arity", &3, &out.arity());
    r.check("weights", &format!("{:?}", [q(3, 8), q(5, 8), q(0, 1)]), &format!("{:?}", s.omega.weights()));
    Ok(r)
}

fn run_validity_table() -> Result<FixtureReport> {
    let t = table();
    let mut r = FixtureReport::new("validity-table");
    let pc = t.p.complement();
    r.check("omega |= p", &q(5, 8), &validity(&t.omega, &t.p)?);
    r.check("omega |= p^perp", &q(3, 8), &validity(&t.omega, &pc)?);
    r.check("P(E)", &q(2, 3), &validity(&t.omega, &t.event)?);
    r.check(
        "omega|_p",
        &dist(&t.space, &[("a", 1, 5), ("b", 2, 15), ("c", 2, 3)]),
        &condition(&t.omega, &t.p)?,
    );
    r.check(
        "omega|_p^perp",
        &dist(&t.space, &[("a", 1, 3), ("b", 2, 3)]),
        &condition(&t.omega, &pc)?,
    );
    r.check(
        "omega|_E",
        &dist(&t.space, &[("a", 3, 8), ("c", 5, 8)]),
        &condition(&t.omega, &t.event)?,
    );
    Ok(r)
}

fn run_hyper_conditional() -> Result<FixtureReport> {
    let t = table();
    let mut r = FixtureReport::new("hyper-conditional");
    let test = Test::from_predicate(&t.p);
    r.check(
        "gr(t)_*(omega)",
        &tagged(
            &t.space,
            2,
            &[
                (0, "a", 1, 8),
                (0, "b", 1, 12),
                (0, "c", 5, 12),
                (1, "a", 1, 8),
                (1, "b", 1, 4),
            ],
        ),
        &joint_from_conditional(test.channel(), &t.omega)?,
    );
    let expected = hyper(
        2,
        vec![
            (0, dist(&t.space, &[("a", 1, 5), ("b", 2, 15), ("c", 2, 3)]), 5, 8),
            (1, dist(&t.space, &[("a", 1, 3), ("b", 2, 3)]), 3, 8),
        ],
    );
    let computed = hyper_condition(&t.omega, &test)?;
    r.check("omega || t", &expected, &computed);
    r.check(
        "direct form",
        &expected,
        &hyper_condition_direct(&t.omega, &[t.p.clone(), t.p.complement()])?,
    );
    Ok(r)
}

fn run_recovery() -> Result<FixtureReport> {
    let c = coin();
    let mut r = FixtureReport::new("recovery");
    r.check(
        "(st2)_*(Phi)",
        &tagged(&c.space, 2, &[(0, "H", 1, 3), (0, "T", 1, 6), (1, "H", 1, 6), (1, "T", 1, 3)]),
        &c.phi.strength_flatten(),
    );
    r.check("state of Phi", &c.omega, &recover_state(&c.phi));
    r.check("test of Phi", &format!("{}", c.s.channel()), &format!("{}", recover_test(&c.phi, &c.space)?.channel()));
    r.holds("test of Phi is s", recover_test(&c.phi, &c.space)? == c.s);
    r.check("state of Psi", &c.omega, &recover_state(&c.psi));
    r.check("test of Psi", &format!("{}", c.t.channel()), &format!("{}", recover_test(&c.psi, &c.space)?.channel()));
    r.holds("test of Psi is t", recover_test(&c.psi, &c.space)? == c.t);
    Ok(r)
}

fn run_medical() -> Result<FixtureReport> {
    let m = medical();
    let mut r = FixtureReport::new("medical");
    r.check(
        "s_*(omega)",
        &dist(&m.outcomes, &[("t", 117, 2000), ("t\u{304}", 1883, 2000)]),
        &m.sensor.apply(&m.omega)?,
    );
    let positive = Predicate::indicator(m.outcomes.clone(), &[m.outcomes.label("t")?])?;
    let pre = wp(&m.sensor, &positive)?;
    r.check("s*(T?)(d)", &q(9, 10), pre.value(&m.space.label("d")?)?);
    r.check("s*(T?)(not d)", &q(1, 20), pre.value(&m.space.label("d\u{304}")?)?);
    r.check("omega |= s*(T?)", &q(117, 2000), &validity(&m.omega, &pre)?);
    r.check(
        "joint",
        &tagged(
            &m.space,
            2,
            &[
                (0, "d", 9, 1000),
                (1, "d", 1, 1000),
                (0, "d\u{304}", 99, 2000),
                (1, "d\u{304}", 1881, 2000),
            ],
        ),
        &joint_from_conditional(m.s.channel(), &m.omega)?,
    );
    let expected = hyper(
        2,
        vec![
            (0, dist(&m.space, &[("d", 18, 117), ("d\u{304}", 99, 117)]), 117, 2000),
            (1, dist(&m.space, &[("d", 2, 1883), ("d\u{304}", 1881, 1883)]), 1883, 2000),
        ],
    );
    r.check("omega || s", &expected, &hyper_condition(&m.omega, &m.s)?);
    Ok(r)
}

fn run_refinement() -> Result<FixtureReport> {
    let c = coin();
    let mut r = FixtureReport::new("refinement");
    r.check("h . s", &format!("{}", c.t.channel()), &format!("{}", c.s.channel().then(&c.h)?));
    r.holds("check_witness(Phi, Psi, Omega)", check_witness(&c.phi, &c.psi, &c.witness)?);
    let expected_theta = TaggedDist::from_terms(
        3,
        [
            (Tagged::new(0, 0usize), q(1, 3)),
            (Tagged::new(1, 0), q(1, 6)),
            (Tagged::new(1, 1), q(1, 6)),
            (Tagged::new(2, 1), q(1, 3)),
        ],
    )?;
    r.check("Theta", &expected_theta, &theta(&c.witness));
    let h = h_from_witness(&c.witness, &c.omega, &c.s)?;
    r.check("h from witness", &format!("{}", c.h), &format!("{h}"));
    r.holds("h from witness equals h", h == c.h);
    match test_refines(&c.s, &c.t)? {
        Some(found) => r.holds("test_refines verified", c.s.channel().then(&found)? == *c.t.channel()),
        None => r.holds("test_refines found h", false),
    }
    let w = witness_from_h(&c.omega, &c.s, &c.h)?;
    r.check("witness_from_h", c.witness.omega(), w.omega());
    Ok(r)
}

fn run_non_affine() -> Result<FixtureReport> {
    let na = non_affine();
    let space = Space::labels("A", &["a", "b"])?;
    let mut r = FixtureReport::new("non-affine");
    r.check(
        "1/4 N(k0 a) + 3/4 N(k0 b)",
        &hyper(
            2,
            vec![
                (0, dist(&space, &[("a", 1, 1)]), 1, 4),
                (0, dist(&space, &[("b", 1, 1)]), 3, 4),
            ],
        ),
        &na.mixed_outputs,
    );
    r.check(
        "N(1/4 k0 a + 3/4 k0 b)",
        &hyper(2, vec![(0, dist(&space, &[("a", 1, 4), ("b", 3, 4)]), 1, 1)]),
        &na.output_of_mix,
    );
    r.holds("sides differ", na.mixed_outputs != na.output_of_mix);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_is_exact() {
        for name in NAMES {
            let rep = run(name).unwrap().unwrap();
            for c in &rep.checks {
                assert!(c.exact, "{name}: {} expected {} got {}", c.what, c.expected, c.computed);
            }
        }
        assert!(run("nope").is_none());
    }
}
