//! Finitely supported distributions and the distribution monad.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::prob::Prob;
use crate::space::{Outcome, Space};

fn accumulate<T: Ord>(terms: impl IntoIterator<Item = (T, Prob)>) -> BTreeMap<T, Prob> {
    let mut mass: BTreeMap<T, Prob> = BTreeMap::new();
    for (x, p) in terms {
        if p.is_zero() {
            continue;
        }
        *mass.entry(x).or_default() += p;
    }
    mass
}

fn write_terms<T: Outcome>(mass: &BTreeMap<T, Prob>, out: &mut String) {
    if mass.is_empty() {
        out.push('0');
        return;
    }
    for (k, (x, p)) in mass.iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        out.push_str(&p.to_string());
        out.push('|');
        x.write_ket(out);
        out.push('>');
    }
}

/// A probability distribution: a canonical, zero-free mass map summing to 1.
///
/// Equality and ordering are structural on the canonical map, so
/// distributions can themselves be outcomes of outer distributions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dist<T: Ord>(BTreeMap<T, Prob>);

impl<T: Outcome> Dist<T> {
    /// Builds a distribution from weighted terms, merging duplicates and
    /// dropping zero terms. The total must be exactly 1.
    pub fn from_terms(terms: impl IntoIterator<Item = (T, Prob)>) -> Result<Self> {
        let mass = accumulate(terms);
        let total: Prob = mass.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "distribution mass {total} \u{2260} 1"
            )));
        }
        Ok(Dist(mass))
    }

    /// Caller guarantees the terms sum to 1.
    pub(crate) fn from_terms_unchecked(terms: impl IntoIterator<Item = (T, Prob)>) -> Self {
        let d = Dist(accumulate(terms));
        debug_assert!(d.total().is_one(), "unnormalised: {d:?}");
        d
    }

    /// The Dirac distribution `1|a>`.
    pub fn dirac(a: T) -> Self {
        Dist(BTreeMap::from([(a, Prob::one())]))
    }

    /// The uniform distribution on the given (nonempty, distinct) outcomes.
    pub fn uniform(points: impl IntoIterator<Item = T>) -> Result<Self> {
        let points: Vec<T> = points.into_iter().collect();
        if points.is_empty() {
            return Err(Error::InvalidDistribution(
                "uniform distribution on an empty set".into(),
            ));
        }
        let p = Prob::new(1, points.len() as u64);
        Dist::from_terms(points.into_iter().map(|x| (x, p.clone())))
    }

    pub fn mass(&self, x: &T) -> Prob {
        self.0.get(x).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Prob)> {
        self.0.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.0.keys()
    }

    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn as_map(&self) -> &BTreeMap<T, Prob> {
        &self.0
    }

    fn total(&self) -> Prob {
        self.0.values().sum()
    }

    /// Fails with `UnknownLabel` if some support point lies outside `space`.
    pub fn check_in(&self, space: &Space<T>) -> Result<()> {
        self.support().try_for_each(|x| space.check(x))
    }

    /// True when every point of `space` has nonzero mass.
    pub fn has_full_support(&self, space: &Space<T>) -> bool {
        space.points().iter().all(|x| self.0.contains_key(x))
    }

    /// Push-forward `D(f)`.
    pub fn map<U: Outcome>(&self, f: impl Fn(&T) -> U) -> Dist<U> {
        Dist(accumulate(self.iter().map(|(x, p)| (f(x), p.clone()))))
    }

    /// Kleisli extension `g_* = μ ∘ D(g)`.
    pub fn bind<U: Outcome>(&self, g: impl Fn(&T) -> Dist<U>) -> Dist<U> {
        let terms = self.iter().flat_map(|(x, p)| {
            g(x).0
                .into_iter()
                .map(|(y, q)| (y, p * &q))
                .collect::<Vec<_>>()
        });
        Dist(accumulate(terms))
    }

    /// Fallible Kleisli extension.
    pub fn try_bind<U: Outcome>(&self, g: impl Fn(&T) -> Result<Dist<U>>) -> Result<Dist<U>> {
        let mut terms = Vec::new();
        for (x, p) in self.iter() {
            for (y, q) in g(x)?.0 {
                terms.push((y, p * &q));
            }
        }
        Ok(Dist(accumulate(terms)))
    }

    /// Left strength `st₁(ω, b) = Σ ω(a)|a,b>`.
    pub fn strength_left<B: Outcome>(&self, b: &B) -> Dist<(T, B)> {
        self.map(|a| (a.clone(), b.clone()))
    }

    /// Right strength `st₂(a, ω) = Σ ω(b)|a,b>`.
    pub fn strength_right<A: Outcome>(a: &A, omega: &Dist<T>) -> Dist<(A, T)> {
        omega.map(|b| (a.clone(), b.clone()))
    }

    /// Relaxes to a subdistribution.
    pub fn to_sub(&self) -> SubDist<T> {
        SubDist(self.0.clone())
    }

    /// Renders `r1|x1> + r2|x2> + ...` in canonical order.
    pub fn to_ket(&self) -> String {
        self.ket()
    }
}

impl<T: Outcome> Dist<Dist<T>> {
    /// Multiplication `μ`, flattening a distribution of distributions.
    pub fn flatten(&self) -> Dist<T> {
        self.bind(|inner| inner.clone())
    }
}

impl<A: Outcome, B: Outcome> Dist<(A, B)> {
    pub fn first(&self) -> Dist<A> {
        self.map(|(a, _)| a.clone())
    }

    pub fn second(&self) -> Dist<B> {
        self.map(|(_, b)| b.clone())
    }

    /// Push-forward along the twist `(a, b) ↦ (b, a)`.
    pub fn twist(&self) -> Dist<(B, A)> {
        self.map(|(a, b)| (b.clone(), a.clone()))
    }
}

impl<T: Outcome> Outcome for Dist<T> {
    fn write_ket(&self, out: &mut String) {
        write_terms(&self.0, out);
    }
}

impl<T: Outcome> fmt::Display for Dist<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ket())
    }
}

impl<T: Outcome> fmt::Debug for Dist<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ket())
    }
}

/// A subdistribution: canonical mass map with total at most 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubDist<T: Ord>(BTreeMap<T, Prob>);

impl<T: Outcome> SubDist<T> {
    pub fn from_terms(terms: impl IntoIterator<Item = (T, Prob)>) -> Result<Self> {
        let mass = accumulate(terms);
        let total: Prob = mass.values().sum();
        if !total.is_probability() {
            return Err(Error::InvalidDistribution(format!(
                "subdistribution mass {total} exceeds 1"
            )));
        }
        Ok(SubDist(mass))
    }

    pub(crate) fn from_terms_unchecked(terms: impl IntoIterator<Item = (T, Prob)>) -> Self {
        SubDist(accumulate(terms))
    }

    pub fn zero() -> Self {
        SubDist(BTreeMap::new())
    }

    pub fn mass(&self, x: &T) -> Prob {
        self.0.get(x).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> Prob {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Prob)> {
        self.0.iter()
    }

    pub fn check_in(&self, space: &Space<T>) -> Result<()> {
        self.0.keys().try_for_each(|x| space.check(x))
    }

    /// Traditional normalisation; partial at the zero subdistribution.
    pub fn normalise(&self) -> Result<Dist<T>> {
        let total = self.total();
        if total.is_zero() {
            return Err(Error::ZeroSubdistribution);
        }
        Ok(Dist(
            self.0
                .iter()
                .map(|(x, p)| (x.clone(), p.checked_div(&total).expect("nonzero total")))
                .collect(),
        ))
    }

    /// Promotes to a distribution when the total is exactly 1.
    pub fn to_dist(&self) -> Result<Dist<T>> {
        Dist::from_terms(self.0.clone())
    }
}

impl<T: Outcome> fmt::Display for SubDist<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_terms(&self.0, &mut s);
        f.write_str(&s)
    }
}

impl<T: Outcome> fmt::Debug for SubDist<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
