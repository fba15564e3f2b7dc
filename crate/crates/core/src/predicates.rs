//! Fuzzy predicates, tests, validity and traditional conditioning.

use std::collections::BTreeMap;
use std::fmt;

use crate::channel::Channel;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::prob::Prob;
use crate::space::{Label, Outcome, Space, Tagged};

/// A fuzzy predicate `A → [0,1]`, stored total over its space.
#[derive(Clone, PartialEq, Eq)]
pub struct Predicate<A: Outcome = Label> {
    space: Space<A>,
    values: BTreeMap<A, Prob>,
}

impl<A: Outcome> Predicate<A> {
    pub fn new(space: Space<A>, values: BTreeMap<A, Prob>) -> Result<Self> {
        if let Some(a) = values.keys().find(|a| !space.contains(a)) {
            return Err(Error::UnknownLabel {
                label: a.ket(),
                space: space.name().to_string(),
            });
        }
        if let Some(a) = space.points().iter().find(|a| !values.contains_key(a)) {
            return Err(Error::MissingRow(a.ket()));
        }
        if let Some((a, v)) = values.iter().find(|(_, v)| !v.is_probability()) {
            return Err(Error::NotAProbability {
                label: a.ket(),
                value: v.clone(),
            });
        }
        Ok(Predicate { space, values })
    }

    pub fn from_fn(space: Space<A>, f: impl Fn(&A) -> Prob) -> Result<Self> {
        let values = space.points().iter().map(|a| (a.clone(), f(a))).collect();
        Predicate::new(space, values)
    }

    /// Values listed in the space's point order.
    pub fn from_values(space: Space<A>, values: &[Prob]) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        let values = space.points().iter().cloned().zip(values.iter().cloned()).collect();
        Predicate::new(space, values)
    }

    pub fn truth(space: Space<A>) -> Self {
        Predicate::from_fn(space, |_| Prob::one()).expect("constant 1")
    }

    pub fn falsity(space: Space<A>) -> Self {
        Predicate::from_fn(space, |_| Prob::zero()).expect("constant 0")
    }

    /// The sharp predicate `1_E`.
    pub fn indicator<'a>(space: Space<A>, event: impl IntoIterator<Item = &'a A>) -> Result<Self> {
        let mut values: BTreeMap<A, Prob> =
            space.points().iter().map(|a| (a.clone(), Prob::zero())).collect();
        for a in event {
            space.check(a)?;
            values.insert(a.clone(), Prob::one());
        }
        Predicate::new(space, values)
    }

    pub fn space(&self) -> &Space<A> {
        &self.space
    }

    pub fn value(&self, a: &A) -> Result<&Prob> {
        self.values.get(a).ok_or_else(|| Error::UnknownLabel {
            label: a.ket(),
            space: self.space.name().to_string(),
        })
    }

    pub fn values(&self) -> impl Iterator<Item = (&A, &Prob)> {
        self.values.iter()
    }

    pub fn is_sharp(&self) -> bool {
        self.values.values().all(|v| v.is_zero() || v.is_one())
    }

    fn same_space(&self, other: &Predicate<A>) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(format!(
                "predicates over `{}` and `{}`",
                self.space.name(),
                other.space.name()
            )));
        }
        Ok(())
    }

    /// Partial sum `p ⊎ q`, defined when `p + q ≤ 1` pointwise.
    pub fn psum(&self, other: &Predicate<A>) -> Result<Self> {
        self.same_space(other)?;
        let mut values = BTreeMap::new();
        for (a, p) in &self.values {
            let s = p + &other.values[a];
            if !s.is_probability() {
                return Err(Error::NotOrthogonal { label: a.ket() });
            }
            values.insert(a.clone(), s);
        }
        Ok(Predicate {
            space: self.space.clone(),
            values,
        })
    }

    /// Orthosupplement `p^⊥ = 1 - p`.
    pub fn complement(&self) -> Self {
        Predicate {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .map(|(a, p)| (a.clone(), p.complement().expect("value in [0,1]")))
                .collect(),
        }
    }

    /// Scalar multiple `s·p` for `s ∈ [0,1]`.
    pub fn scale(&self, s: &Prob) -> Result<Self> {
        if !s.is_probability() {
            return Err(Error::NotAProbability {
                label: "scalar".into(),
                value: s.clone(),
            });
        }
        Ok(Predicate {
            space: self.space.clone(),
            values: self.values.iter().map(|(a, p)| (a.clone(), s * p)).collect(),
        })
    }

    fn check_state(&self, omega: &Dist<A>) -> Result<()> {
        omega.check_in(&self.space)
    }
}

impl<A: Outcome> fmt::Debug for Predicate<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.values.iter()).finish()
    }
}

/// Validity `ω ⊨ p = Σ_a ω(a)·p(a)`.
pub fn validity<A: Outcome>(omega: &Dist<A>, p: &Predicate<A>) -> Result<Prob> {
    p.check_state(omega)?;
    Ok(omega.iter().map(|(a, w)| w * &p.values[a]).sum())
}

/// Conditioning `ω|_p`; fails when `ω ⊨ p = 0`.
pub fn condition<A: Outcome>(omega: &Dist<A>, p: &Predicate<A>) -> Result<Dist<A>> {
    let v = validity(omega, p)?;
    if v.is_zero() {
        return Err(Error::ZeroValidity);
    }
    Ok(Dist::from_terms_unchecked(omega.iter().map(|(a, w)| {
        let num = w * &p.values[a];
        (a.clone(), num.checked_div(&v).expect("nonzero validity"))
    })))
}

/// Weakest precondition `f*(q)(a) = Σ_b f(a)(b)·q(b)`.
pub fn wp<A: Outcome, B: Outcome>(f: &Channel<A, B>, q: &Predicate<B>) -> Result<Predicate<A>> {
    if f.target() != q.space() {
        return Err(Error::SpaceMismatch(format!(
            "channel target `{}` differs from predicate space `{}`",
            f.target().name(),
            q.space().name()
        )));
    }
    let values = f
        .rows()
        .map(|(a, row)| (a.clone(), validity(row, q).expect("row inside target")))
        .collect();
    Ok(Predicate {
        space: f.source().clone(),
        values,
    })
}

/// An `n`-test: a channel into the numeric space `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Test<A: Outcome = Label>(Channel<A, usize>);

impl<A: Outcome> Test<A> {
    pub fn new(channel: Channel<A, usize>) -> Self {
        Test(channel)
    }

    /// The 2-test `(p, p^⊥)`.
    pub fn from_predicate(p: &Predicate<A>) -> Self {
        Test(Channel::from_fn_unchecked(p.space.clone(), Space::numeric(2), |a| {
            let v = p.values[a].clone();
            Dist::from_terms_unchecked([(0usize, v.clone()), (1, v.complement().expect("in [0,1]"))])
        }))
    }

    /// Assembles a test from component predicates summing pointwise to 1.
    pub fn from_components(components: &[Predicate<A>]) -> Result<Self> {
        let first = components.first().ok_or(Error::LengthMismatch {
            expected: 1,
            found: 0,
        })?;
        for c in components {
            first.same_space(c)?;
        }
        let space = first.space.clone();
        for a in space.points() {
            let sum: Prob = components.iter().map(|c| &c.values[a]).sum();
            if !sum.is_one() {
                return Err(Error::NotATest {
                    label: a.ket(),
                    sum,
                });
            }
        }
        Ok(Test(Channel::from_fn_unchecked(
            space,
            Space::numeric(components.len()),
            |a| {
                Dist::from_terms_unchecked(
                    components.iter().enumerate().map(|(i, c)| (i, c.values[a].clone())),
                )
            },
        )))
    }

    /// The component predicates `p_i(a) = t(a)(i)`.
    pub fn components(&self) -> Vec<Predicate<A>> {
        (0..self.arity())
            .map(|i| Predicate {
                space: self.0.source().clone(),
                values: self.0.rows().map(|(a, row)| (a.clone(), row.mass(&i))).collect(),
            })
            .collect()
    }

    pub fn arity(&self) -> usize {
        self.0.target().len()
    }

    pub fn space(&self) -> &Space<A> {
        self.0.source()
    }

    pub fn channel(&self) -> &Channel<A, usize> {
        &self.0
    }

    pub fn into_channel(self) -> Channel<A, usize> {
        self.0
    }

    /// The instrument `gr(t) : A ⊸ n·A`.
    pub fn instrument(&self) -> Channel<A, Tagged<A>> {
        self.0.instrument()
    }
}

impl<A: Outcome> From<Channel<A, usize>> for Test<A> {
    fn from(c: Channel<A, usize>) -> Self {
        Test(c)
    }
}
