//! Distributions over copowers `n·A`, and hyper distributions.

use std::fmt;

use crate::channel::Channel;
use crate::dist::{Dist, SubDist};
use crate::error::{Error, Result};
use crate::prob::Prob;
use crate::space::{Outcome, Space, Tagged};

/// A distribution over the copower `n·A` with its arity made explicit.
///
/// Two tagged distributions with the same mass but different arity are
/// different values.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedDist<T: Ord> {
    arity: usize,
    dist: Dist<Tagged<T>>,
}

/// A tagged distribution whose base points are themselves distributions:
/// an element of `D(n·D(A))`.
pub type HyperDist<T> = TaggedDist<Dist<T>>;

impl<T: Outcome> TaggedDist<T> {
    /// Wraps a distribution over tagged points, checking every tag is below `arity`.
    pub fn new(arity: usize, dist: Dist<Tagged<T>>) -> Result<Self> {
        if let Some(x) = dist.support().find(|x| x.tag >= arity) {
            return Err(Error::TagOutOfRange { tag: x.tag, arity });
        }
        Ok(TaggedDist { arity, dist })
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Tagged<T>, Prob)>) -> Result<Self> {
        TaggedDist::new(arity, Dist::from_terms(terms)?)
    }

    pub(crate) fn new_unchecked(arity: usize, dist: Dist<Tagged<T>>) -> Self {
        debug_assert!(dist.support().all(|x| x.tag < arity));
        TaggedDist { arity, dist }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dist(&self) -> &Dist<Tagged<T>> {
        &self.dist
    }

    pub fn into_dist(self) -> Dist<Tagged<T>> {
        self.dist
    }

    pub fn mass(&self, tag: usize, x: &T) -> Prob {
        self.dist.mass(&Tagged::new(tag, x.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tagged<T>, &Prob)> {
        self.dist.iter()
    }

    /// `ω[i] = Σ_a ω(κ_i a)`.
    pub fn weight(&self, tag: usize) -> Result<Prob> {
        if tag >= self.arity {
            return Err(Error::TagOutOfRange {
                tag,
                arity: self.arity,
            });
        }
        Ok(self
            .iter()
            .filter(|(x, _)| x.tag == tag)
            .map(|(_, p)| p)
            .sum())
    }

    /// All weights `ω[0], ..., ω[n-1]`.
    pub fn weights(&self) -> Vec<Prob> {
        let mut w = vec![Prob::zero(); self.arity];
        for (x, p) in self.iter() {
            w[x.tag] += p;
        }
        w
    }

    /// The tag-`i` block `Σ_a ω(κ_i a)|a>` as a subdistribution.
    pub fn block(&self, tag: usize) -> SubDist<T> {
        SubDist::from_terms_unchecked(
            self.iter()
                .filter(|(x, _)| x.tag == tag)
                .map(|(x, p)| (x.value.clone(), p.clone())),
        )
    }

    /// The fiber `Ω_a = Σ_i Ω(κ_i a)|i>` over the numeric space `n`.
    pub fn fiber(&self, a: &T) -> SubDist<usize> {
        SubDist::from_terms_unchecked(
            self.iter()
                .filter(|(x, _)| x.value == *a)
                .map(|(x, p)| (x.tag, p.clone())),
        )
    }

    /// Like [`TaggedDist::fiber`], first checking `a` belongs to `space`.
    pub fn fiber_in(&self, space: &Space<T>, a: &T) -> Result<SubDist<usize>> {
        space.check(a)?;
        Ok(self.fiber(a))
    }

    /// First projection `D(π₁)`, the tag marginal over `n`.
    pub fn tags(&self) -> Dist<usize> {
        self.dist.map(|x| x.tag)
    }

    /// Codiagonal `D(∇)`, erasing tags.
    pub fn codiagonal(&self) -> Dist<T> {
        self.dist.map(|x| x.value.clone())
    }

    /// `D(n·f)`: relabel base points, keeping tags and arity.
    pub fn map_values<U: Outcome>(&self, f: impl Fn(&T) -> U) -> TaggedDist<U> {
        TaggedDist {
            arity: self.arity,
            dist: self.dist.map(|x| Tagged::new(x.tag, f(&x.value))),
        }
    }

    /// `(n·g)_*`: push each block through the Kleisli map `g`.
    pub fn bind_values<U: Outcome>(&self, g: impl Fn(&T) -> Dist<U>) -> TaggedDist<U> {
        TaggedDist {
            arity: self.arity,
            dist: self
                .dist
                .bind(|x| g(&x.value).map(|u| Tagged::new(x.tag, u.clone()))),
        }
    }

    /// `(h·A)_*` for `h: n ⊸ m`: move mass between tags, keeping base points.
    pub fn retag(&self, h: &Channel<usize, usize>) -> Result<TaggedDist<T>> {
        if h.source().len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: h.source().len(),
                found: self.arity,
            });
        }
        let dist = self.dist.try_bind(|x| {
            Ok(h.row(&x.tag)?.map(|j| Tagged::new(*j, x.value.clone())))
        })?;
        Ok(TaggedDist {
            arity: h.target().len(),
            dist,
        })
    }

    /// Checks every base point lies in `space`.
    pub fn check_in(&self, space: &Space<T>) -> Result<()> {
        self.dist.support().try_for_each(|x| space.check(&x.value))
    }

    /// Same mass, different arity; fails if some tag would fall out of range.
    pub fn with_arity(&self, arity: usize) -> Result<Self> {
        TaggedDist::new(arity, self.dist.clone())
    }
}

impl<T: Outcome> HyperDist<T> {
    /// `(st₂)_*`: `κ_i φ ↦ Σ_a φ(a)|κ_i a>`.
    pub fn strength_flatten(&self) -> TaggedDist<T> {
        self.bind_values(|phi| phi.clone())
    }

    /// `μ ∘ D(∇)`: the underlying state.
    pub fn underlying(&self) -> Dist<T> {
        self.codiagonal().flatten()
    }

    /// `D(n·μ)` for a distribution over `n·D²(A)`.
    pub fn flatten_values(this: &HyperDist<Dist<T>>) -> HyperDist<T> {
        this.map_values(|xi| xi.flatten())
    }

    /// Checks every inner distribution lives in `space`.
    pub fn check_in_hyper(&self, space: &Space<T>) -> Result<()> {
        self.iter().try_for_each(|(x, _)| x.value.check_in(space))
    }

    /// True when every tag occurs at most once.
    pub fn is_normalised(&self) -> bool {
        let tags: Vec<usize> = self.iter().map(|(x, _)| x.tag).collect();
        tags.windows(2).all(|w| w[0] != w[1])
    }
}

impl<T: Outcome> Outcome for TaggedDist<T> {
    fn write_ket(&self, out: &mut String) {
        self.dist.write_ket(out);
    }
}

impl<T: Outcome> fmt::Display for TaggedDist<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.dist, f)
    }
}

impl<T: Outcome> fmt::Debug for TaggedDist<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}] {}", self.arity, self.dist)
    }
}
