use hyperdist::fixtures::{self, NAMES};
use hyperdist::{hyper_normalise, nrm, q, Dist, Error, SubDist};

#[test]
fn every_named_example_is_exact() {
    for name in NAMES {
        let report = fixtures::run(name).expect("known name").expect("runs");
        assert!(!report.checks.is_empty(), "{name}");
        for c in &report.checks {
            assert!(c.exact, "{name}: {} expected {} got {}", c.what, c.expected, c.computed);
        }
    }
    assert!(fixtures::run("nope").is_none());
}

#[test]
fn zero_subdistribution_has_no_normalisation() {
    let z: SubDist<usize> = SubDist::zero();
    assert!(matches!(nrm(&z), Err(Error::ZeroSubdistribution)));
}

#[test]
fn unary_normalisation_is_the_unit() {
    let s = fixtures::section3();
    let flat = s.omega.codiagonal();
    let one = hyperdist::TaggedDist::new(
        1,
        flat.map(|x| hyperdist::Tagged::new(0, x.clone())),
    )
    .unwrap();
    let n = hyper_normalise(&one);
    assert_eq!(n.iter().count(), 1);
    let (t, p) = n.iter().next().unwrap();
    assert_eq!(*p, q(1, 1));
    assert_eq!(t.value, flat);
    let d: Dist<usize> = Dist::dirac(0);
    assert_eq!(nrm(&d.to_sub()).unwrap(), d);
}
