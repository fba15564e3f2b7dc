//! Traditional and hyper normalisation, sprinkling, and disintegration.

use crate::channel::Channel;
use crate::dist::{Dist, SubDist};
use crate::error::{Error, Result};
use crate::prob::Prob;
use crate::space::{Outcome, Space, Sum, Tagged};
use crate::tagged::{HyperDist, TaggedDist};

/// Traditional normalisation `φ / Σφ`; fails on the zero subdistribution.
pub fn nrm<T: Outcome>(phi: &SubDist<T>) -> Result<Dist<T>> {
    phi.normalise()
}

/// Hyper normalisation `N : D(n·A) → D(n·D(A))`.
///
/// Each nonempty tag block is normalised in place and weighted by its
/// mass. Empty blocks vanish from the support; the arity is kept.
pub fn hyper_normalise<T: Outcome>(omega: &TaggedDist<T>) -> HyperDist<T> {
    let weights = omega.weights();
    let terms = weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, w)| {
        let inner = omega
            .block(i)
            .normalise()
            .expect("block with nonzero weight");
        (Tagged::new(i, inner), w.clone())
    });
    TaggedDist::new_unchecked(omega.arity(), Dist::from_terms_unchecked(terms))
}

/// `spr(r, φs) = Σ_i r_i φ_i`.
pub fn sprinkle<T: Outcome>(r: &Dist<usize>, phis: &[Dist<T>]) -> Result<Dist<T>> {
    if let Some(i) = r.support().find(|i| **i >= phis.len()) {
        return Err(Error::LengthMismatch {
            expected: i + 1,
            found: phis.len(),
        });
    }
    Ok(r.bind(|i| phis[*i].clone()))
}

/// `gr(f)_*(ω)`, the joint `Ω(κ_i a) = ω(a)·f(a)(i)` over `n·A`.
pub fn joint_from_conditional<A: Outcome>(f: &Channel<A, usize>, omega: &Dist<A>) -> Result<TaggedDist<A>> {
    let joint = f.instrument().apply(omega)?;
    Ok(TaggedDist::new_unchecked(f.target().len(), joint))
}

/// A conditional channel together with the marginal it was split from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disintegration<A: Outcome> {
    pub conditional: Channel<A, usize>,
    pub marginal: Dist<A>,
}

/// Splits `Ω ∈ D(n·A)` into `D(π₂)(Ω)` and the channel `a ↦ Ω_a / ω(a)`.
///
/// Every point of `base` must carry nonzero marginal mass.
pub fn disintegrate<A: Outcome>(joint: &TaggedDist<A>, base: &Space<A>) -> Result<Disintegration<A>> {
    joint.check_in(base)?;
    let marginal = joint.codiagonal();
    let missing: Vec<String> = base
        .points()
        .iter()
        .filter(|a| marginal.mass(a).is_zero())
        .map(|a| a.ket())
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteSupport { missing });
    }
    let conditional = Channel::from_fn_unchecked(base.clone(), Space::numeric(joint.arity()), |a| {
        joint.fiber(a).normalise().expect("nonzero marginal")
    });
    Ok(Disintegration {
        conditional,
        marginal,
    })
}

/// The coprojection pair `κ₁ + κ₂ : A+1 → (A+1)+(A+1)`, as tags 0 and 1.
fn split_deficit<A: Outcome>(x: &Sum<A, usize>) -> Tagged<Sum<A, usize>> {
    match x {
        Sum::Inl(_) => Tagged::new(0, x.clone()),
        Sum::Inr(_) => Tagged::new(1, x.clone()),
    }
}

/// Normalises a subdistribution presented as `ω ∈ D(A+1)`, totally: the
/// result is `N(D(κ₁+κ₂)(ω))` over `2·D(A+1)`.
pub fn normalise_maybe<A: Outcome>(omega: &Dist<Sum<A, usize>>) -> HyperDist<Sum<A, usize>> {
    let tagged = TaggedDist::new_unchecked(2, omega.map(split_deficit));
    hyper_normalise(&tagged)
}

/// The normalised subdistribution in the first block, if there is one.
pub fn extract_maybe<A: Outcome>(hyper: &HyperDist<Sum<A, usize>>) -> Option<Dist<A>> {
    hyper.iter().find(|(x, _)| x.tag == 0).map(|(x, _)| {
        x.value.map(|y| match y {
            Sum::Inl(a) => a.clone(),
            Sum::Inr(_) => unreachable!("first block only holds A-points"),
        })
    })
}

/// Score-based normalisation as a total map `D([0,1]×A) → D(A+1)`.
///
/// A score `s` is read as `s|1> + (1-s)|0>`; the `1`-part keeps its point
/// and the `0`-part is sent to the deficit point.
pub fn normalise_scored<A: Outcome>(sigma: &Dist<(Prob, A)>) -> Result<Dist<Sum<A, usize>>> {
    if let Some((s, a)) = sigma.support().find(|(s, _)| !s.is_probability()) {
        return Err(Error::NotAProbability {
            label: a.ket(),
            value: s.clone(),
        });
    }
    let as_coin = |s: &Prob| {
        Dist::from_terms_unchecked([(1usize, s.clone()), (0, s.complement().expect("score in [0,1]"))])
    };
    let strengthened: Dist<Dist<(usize, A)>> = sigma.map(|(s, a)| as_coin(s).strength_left(a));
    Ok(strengthened.flatten().map(|(bit, a)| {
        if *bit == 1 {
            Sum::Inl(a.clone())
        } else {
            Sum::Inr(0)
        }
    }))
}

/// `Σ_i (r_i·s_i / Σ_j r_j·s_j)|a_i>`; fails when no score mass remains.
pub fn extract_scored<A: Outcome>(sigma: &Dist<(Prob, A)>) -> Result<Dist<A>> {
    let sub = normalise_scored(sigma)?;
    let kept = SubDist::from_terms_unchecked(sub.iter().filter_map(|(x, p)| match x {
        Sum::Inl(a) => Some((a.clone(), p.clone())),
        Sum::Inr(_) => None,
    }));
    kept.normalise().map_err(|_| Error::ZeroScoreMass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::q;
    use crate::space::{Label, Space};

    fn abcd() -> (Space, impl Fn(&str) -> Label) {
        let s = Space::labels("A", &["a", "b", "c", "d"]).unwrap();
        let s2 = s.clone();
        (s, move |n: &str| s2.label(n).unwrap())
    }

    #[test]
    fn colour_example() {
        let s = Space::labels("RGB", &["R", "G", "B"]).unwrap();
        let l = |n| s.label(n).unwrap();
        let phi = SubDist::from_terms([(l("R"), q(1, 8)), (l("G"), q(1, 4)), (l("B"), q(1, 2))]).unwrap();
        let n = nrm(&phi).unwrap();
        assert_eq!(n.mass(&l("R")), q(1, 7));
        assert_eq!(n.mass(&l("G")), q(2, 7));
        assert_eq!(n.mass(&l("B")), q(4, 7));
    }

    #[test]
    fn hyper_normalise_worked_example() {
        let (_, l) = abcd();
        let w = TaggedDist::from_terms(
            3,
            [
                (Tagged::new(0, l("a")), q(1, 8)),
                (Tagged::new(0, l("b")), q(1, 4)),
                (Tagged::new(1, l("c")), q(1, 2)),
                (Tagged::new(1, l("d")), q(1, 8)),
            ],
        )
        .unwrap();
        let n = hyper_normalise(&w);
        assert_eq!(n.arity(), 3);
        assert_eq!(
            n.to_string(),
            "3/8|k0(1/3|a> + 2/3|b>)> + 5/8|k1(4/5|c> + 1/5|d>)>"
        );
    }

    #[test]
    fn arity_one_is_dirac() {
        let (_, l) = abcd();
        let phi = Dist::from_terms([(l("a"), q(1, 3)), (l("b"), q(2, 3))]).unwrap();
        let w = TaggedDist::new(1, phi.map(|a| Tagged::new(0, a.clone()))).unwrap();
        assert_eq!(
            hyper_normalise(&w).into_dist(),
            Dist::dirac(Tagged::new(0, phi))
        );
    }

    #[test]
    fn sprinkle_flattens_worked_example() {
        let (_, l) = abcd();
        let r = Dist::from_terms([(0usize, q(3, 8)), (1, q(5, 8))]).unwrap();
        let phis = [
            Dist::from_terms([(l("a"), q(1, 3)), (l("b"), q(2, 3))]).unwrap(),
            Dist::from_terms([(l("c"), q(4, 5)), (l("d"), q(1, 5))]).unwrap(),
            Dist::dirac(l("a")),
        ];
        let s = sprinkle(&r, &phis).unwrap();
        assert_eq!(s.to_string(), "1/8|a> + 1/4|b> + 1/2|c> + 1/8|d>");
        assert!(sprinkle(&Dist::dirac(3usize), &phis).is_err());
    }

    #[test]
    fn disintegrate_reports_missing_labels() {
        let (s, l) = abcd();
        let w = TaggedDist::new(1, Dist::dirac(Tagged::new(0, l("a")))).unwrap();
        match disintegrate(&w, &s) {
            Err(Error::IncompleteSupport { missing }) => assert_eq!(missing, ["b", "c", "d"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn normalise_maybe_cases() {
        let (_, l) = abcd();
        let w = Dist::from_terms([
            (Sum::Inl(l("a")), q(1, 4)),
            (Sum::Inl(l("b")), q(1, 4)),
            (Sum::Inr(0usize), q(1, 2)),
        ])
        .unwrap();
        let n = normalise_maybe(&w);
        assert_eq!(
            n.to_string(),
            "1/2|k0(1/2|inl(a)> + 1/2|inl(b)>)> + 1/2|k1(1|inr(0)>)>"
        );
        assert_eq!(
            extract_maybe(&n).unwrap(),
            Dist::from_terms([(l("a"), q(1, 2)), (l("b"), q(1, 2))]).unwrap()
        );
        let z = normalise_maybe(&Dist::<Sum<Label, usize>>::dirac(Sum::Inr(0)));
        assert_eq!(z.to_string(), "1|k1(1|inr(0)>)>");
        assert_eq!(extract_maybe(&z), None);
    }

    #[test]
    fn scored_normalisation() {
        let (_, l) = abcd();
        let sigma = Dist::from_terms([((q(1, 2), l("a")), q(1, 2)), ((q(1, 4), l("b")), q(1, 2))]).unwrap();
        let e = extract_scored(&sigma).unwrap();
        assert_eq!(e.to_string(), "2/3|a> + 1/3|b>");
        let zero = Dist::from_terms([((Prob::zero(), l("a")), q(1, 1))]).unwrap();
        assert_eq!(extract_scored(&zero), Err(Error::ZeroScoreMass));
        let bad = Dist::from_terms([((q(3, 2), l("a")), q(1, 1))]).unwrap();
        assert!(normalise_scored(&bad).is_err());
    }
}
