//! Hyper conditioning, recovery of state and test, and channel denotation.

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::normalise::{disintegrate, hyper_normalise, joint_from_conditional};
use crate::predicates::{condition, validity, Predicate, Test};
use crate::space::{Outcome, Space, Tagged};
use crate::tagged::{HyperDist, TaggedDist};

/// `ω ∥ t = N(gr(t)_*(ω))`. Total for every state and test on the same space.
pub fn hyper_condition<A: Outcome>(omega: &Dist<A>, t: &Test<A>) -> Result<HyperDist<A>> {
    omega.check_in(t.space())?;
    let joint = joint_from_conditional(t.channel(), omega)?;
    Ok(hyper_normalise(&joint))
}

/// `Σ_{ω⊨p_i ≠ 0} (ω⊨p_i)|κ_i(ω|_{p_i})>`, via traditional conditioning.
pub fn hyper_condition_direct<A: Outcome>(omega: &Dist<A>, components: &[Predicate<A>]) -> Result<HyperDist<A>> {
    Test::from_components(components)?;
    let mut terms = Vec::with_capacity(components.len());
    for (i, p) in components.iter().enumerate() {
        let v = validity(omega, p)?;
        if !v.is_zero() {
            terms.push((Tagged::new(i, condition(omega, p)?), v));
        }
    }
    TaggedDist::from_terms(components.len(), terms)
}

/// `(π₂)_*(Φ) = μ(D(π₂)(Φ))`.
pub fn recover_state<A: Outcome>(phi: &HyperDist<A>) -> Dist<A> {
    phi.underlying()
}

/// The test obtained by disintegrating `(st₂)_*(Φ)` over `base`.
pub fn recover_test<A: Outcome>(phi: &HyperDist<A>, base: &Space<A>) -> Result<Test<A>> {
    let joint = phi.strength_flatten();
    Ok(Test::new(disintegrate(&joint, base)?.conditional))
}

/// `D(∇)(ω ∥ c)`: the hyper conditional with tags erased, equal posteriors merged.
pub fn denote_channel<A: Outcome>(c: &Test<A>, omega: &Dist<A>) -> Result<Dist<Dist<A>>> {
    Ok(hyper_condition(omega, c)?.codiagonal())
}

/// Checks the normalisedness criterion `N(Φ) = D(n·η)(Φ)`.
pub fn is_hyper_conditional<A: Outcome>(phi: &HyperDist<A>) -> bool {
    hyper_normalise(phi) == phi.map_values(|x| Dist::dirac(x.clone()))
}

/// Rejects a candidate hyper conditional whose tags repeat.
pub fn ensure_normalised<A: Outcome>(phi: &HyperDist<A>) -> Result<()> {
    if phi.is_normalised() {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(
            "hyper distribution is not normalised: some tag occurs twice".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::q;
    use crate::space::Label;

    fn setup() -> (Space, Dist<Label>, Predicate) {
        let s = Space::labels("A", &["a", "b", "c"]).unwrap();
        let l = |n| s.label(n).unwrap();
        let w = Dist::from_terms([(l("a"), q(1, 4)), (l("b"), q(1, 3)), (l("c"), q(5, 12))]).unwrap();
        let p = Predicate::from_values(s.clone(), &[q(1, 2), q(1, 4), q(1, 1)]).unwrap();
        (s, w, p)
    }

    #[test]
    fn conditional_matches_closed_form() {
        let (s, w, p) = setup();
        let t = Test::from_predicate(&p);
        let h = hyper_condition(&w, &t).unwrap();
        assert_eq!(
            h.to_string(),
            "5/8|k0(1/5|a> + 2/15|b> + 2/3|c>)> + 3/8|k1(1/3|a> + 2/3|b>)>"
        );
        assert_eq!(hyper_condition_direct(&w, &t.components()).unwrap(), h);
        assert!(is_hyper_conditional(&h));
        assert_eq!(recover_state(&h), w);
        assert_eq!(recover_test(&h, &s).unwrap(), t);
    }

    #[test]
    fn zero_validity_component_is_absent() {
        let (s, w, _) = setup();
        let comps = [Predicate::truth(s.clone()), Predicate::falsity(s)];
        let h = hyper_condition_direct(&w, &comps).unwrap();
        assert_eq!(h.arity(), 2);
        assert_eq!(h.into_dist(), Dist::dirac(Tagged::new(0, w)));
    }

    #[test]
    fn denotation_merges_equal_posteriors() {
        let (s, w, _) = setup();
        let half = Predicate::from_fn(s, |_| q(1, 2)).unwrap();
        let c = Test::from_components(&[half.clone(), half]).unwrap();
        assert_eq!(denote_channel(&c, &w).unwrap(), Dist::dirac(w.clone()));
        assert_eq!(hyper_condition(&w, &c).unwrap().weights(), vec![q(1, 2), q(1, 2)]);
    }
}
