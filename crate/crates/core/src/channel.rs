//! Kleisli maps between finite spaces, stored as total row maps.

use std::collections::BTreeMap;
use std::fmt;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::{Outcome, Space, Tagged};

/// A channel `A ⊸ B`: one distribution over `B` for every point of `A`.
#[derive(Clone, PartialEq, Eq)]
pub struct Channel<A: Outcome, B: Outcome> {
    source: Space<A>,
    target: Space<B>,
    rows: BTreeMap<A, Dist<B>>,
}

impl<A: Outcome, B: Outcome> Channel<A, B> {
    /// Builds a channel, requiring a row for every source point and row
    /// supports inside the target.
    pub fn new(source: Space<A>, target: Space<B>, rows: BTreeMap<A, Dist<B>>) -> Result<Self> {
        if let Some(a) = rows.keys().find(|a| !source.contains(a)) {
            return Err(Error::UnknownLabel {
                label: a.ket(),
                space: source.name().to_string(),
            });
        }
        if let Some(a) = source.points().iter().find(|a| !rows.contains_key(a)) {
            return Err(Error::MissingRow(a.ket()));
        }
        for row in rows.values() {
            row.check_in(&target)?;
        }
        Ok(Channel {
            source,
            target,
            rows,
        })
    }

    pub fn from_fn(source: Space<A>, target: Space<B>, f: impl Fn(&A) -> Dist<B>) -> Result<Self> {
        let rows = source.points().iter().map(|a| (a.clone(), f(a))).collect();
        Channel::new(source, target, rows)
    }

    /// The deterministic channel `η ∘ f`.
    pub fn deterministic(source: Space<A>, target: Space<B>, f: impl Fn(&A) -> B) -> Result<Self> {
        Channel::from_fn(source, target, |a| Dist::dirac(f(a)))
    }

    pub(crate) fn from_fn_unchecked(
        source: Space<A>,
        target: Space<B>,
        f: impl Fn(&A) -> Dist<B>,
    ) -> Self {
        let rows = source.points().iter().map(|a| (a.clone(), f(a))).collect();
        Channel {
            source,
            target,
            rows,
        }
    }

    pub fn source(&self) -> &Space<A> {
        &self.source
    }

    pub fn target(&self) -> &Space<B> {
        &self.target
    }

    pub fn rows(&self) -> impl Iterator<Item = (&A, &Dist<B>)> {
        self.rows.iter()
    }

    pub fn row(&self, a: &A) -> Result<&Dist<B>> {
        self.rows.get(a).ok_or_else(|| Error::UnknownLabel {
            label: a.ket(),
            space: self.source.name().to_string(),
        })
    }

    /// Kleisli lifting `g_*(ω)`.
    pub fn apply(&self, omega: &Dist<A>) -> Result<Dist<B>> {
        omega.try_bind(|a| self.row(a).cloned())
    }

    /// Kleisli composition `g • self`.
    pub fn then<C: Outcome>(&self, g: &Channel<B, C>) -> Result<Channel<A, C>> {
        if g.source != self.target {
            return Err(Error::SpaceMismatch(format!(
                "cannot compose: target `{}` differs from source `{}`",
                self.target.name(),
                g.source.name()
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|(a, row)| Ok((a.clone(), g.apply(row)?)))
            .collect::<Result<_>>()?;
        Ok(Channel {
            source: self.source.clone(),
            target: g.target.clone(),
            rows,
        })
    }

    /// The graph `gr(f)(a) = Σ_b f(a)(b)|b,a>`.
    pub fn graph(&self) -> Channel<A, (B, A)> {
        Channel {
            source: self.source.clone(),
            target: self.target.product(&self.source),
            rows: self
                .rows
                .iter()
                .map(|(a, row)| (a.clone(), row.map(|b| (b.clone(), a.clone()))))
                .collect(),
        }
    }

    /// The copower lift `n·g : κ_i a ↦ Σ_b g(a)(b)|κ_i b>`.
    pub fn copower_right(&self, n: usize) -> Channel<Tagged<A>, Tagged<B>> {
        let source = self.source.copower(n);
        Channel {
            target: self.target.copower(n),
            rows: source
                .points()
                .iter()
                .map(|x| {
                    let row = self.rows[&x.value].map(|b| Tagged::new(x.tag, b.clone()));
                    (x.clone(), row)
                })
                .collect(),
            source,
        }
    }
}

impl<A: Outcome> Channel<A, A> {
    /// The unit channel `η`.
    pub fn identity(space: Space<A>) -> Self {
        Channel::from_fn_unchecked(space.clone(), space, |a| Dist::dirac(a.clone()))
    }
}

impl<A: Outcome> Channel<A, usize> {
    /// The tagged graph `A ⊸ n·A`, `a ↦ Σ_i f(a)(i)|κ_i a>`.
    pub fn instrument(&self) -> Channel<A, Tagged<A>> {
        Channel {
            source: self.source.clone(),
            target: self.source.copower(self.target.len()),
            rows: self
                .rows
                .iter()
                .map(|(a, row)| (a.clone(), row.map(|i| Tagged::new(*i, a.clone()))))
                .collect(),
        }
    }
}

impl Channel<usize, usize> {
    /// The copower lift `h·A : κ_i a ↦ Σ_j h(i)(j)|κ_j a>`.
    pub fn copower_left<T: Outcome>(&self, space: &Space<T>) -> Channel<Tagged<T>, Tagged<T>> {
        let source = space.copower(self.source.len());
        Channel {
            target: space.copower(self.target.len()),
            rows: source
                .points()
                .iter()
                .map(|x| {
                    let row = self.rows[&x.tag].map(|j| Tagged::new(*j, x.value.clone()));
                    (x.clone(), row)
                })
                .collect(),
            source,
        }
    }
}

impl<A: Outcome, B: Outcome> fmt::Debug for Channel<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.rows.iter()).finish()
    }
}

impl<A: Outcome, B: Outcome> fmt::Display for Channel<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (a, row)) in self.rows.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{} -> {}", a.ket(), row)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::q;
    use crate::space::Space;

    fn stoch(rows: &[&[(usize, (u64, u64))]]) -> Channel<usize, usize> {
        let n = rows.len();
        let m = rows
            .iter()
            .flat_map(|r| r.iter().map(|(j, _)| j + 1))
            .max()
            .unwrap_or(1);
        Channel::from_fn(Space::numeric(n), Space::numeric(m), |i| {
            Dist::from_terms(rows[*i].iter().map(|(j, (a, b))| (*j, q(*a, *b)))).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn composition_is_matrix_product() {
        // f = [[1/2,1/2],[1/4,3/4]], g = [[1/3,2/3],[1,0]]
        let f = stoch(&[&[(0, (1, 2)), (1, (1, 2))], &[(0, (1, 4)), (1, (3, 4))]]);
        let g = stoch(&[&[(0, (1, 3)), (1, (2, 3))], &[(0, (1, 1))]]);
        let gf = f.then(&g).unwrap();
        // row 0: 1/2*1/3 + 1/2*1 = 2/3, 1/2*2/3 = 1/3
        assert_eq!(gf.row(&0).unwrap().mass(&0), q(2, 3));
        assert_eq!(gf.row(&0).unwrap().mass(&1), q(1, 3));
        // row 1: 1/4*1/3 + 3/4 = 5/6, 1/4*2/3 = 1/6
        assert_eq!(gf.row(&1).unwrap().mass(&0), q(5, 6));
        assert_eq!(gf.row(&1).unwrap().mass(&1), q(1, 6));
    }

    #[test]
    fn unit_laws() {
        let f = stoch(&[&[(0, (1, 2)), (1, (1, 2))], &[(1, (1, 1))]]);
        let id = Channel::identity(Space::numeric(2));
        assert_eq!(id.then(&f).unwrap(), f);
        assert_eq!(f.then(&id).unwrap(), f);
    }

    #[test]
    fn totality_enforced() {
        let s = Space::labels("A", &["a", "b"]).unwrap();
        let a = s.label("a").unwrap();
        let rows = BTreeMap::from([(a, Dist::dirac(0usize))]);
        assert!(matches!(
            Channel::new(s, Space::numeric(1), rows),
            Err(Error::MissingRow(_))
        ));
    }

    #[test]
    fn graph_projections() {
        let f = stoch(&[&[(0, (1, 2)), (1, (1, 2))], &[(1, (1, 1))]]);
        let gr = f.graph();
        for (a, row) in gr.rows() {
            assert_eq!(row.first(), *f.row(a).unwrap());
            assert_eq!(row.second(), Dist::dirac(*a));
        }
    }

    #[test]
    fn copower_lifts() {
        let s = Space::labels("C", &["H", "T"]).unwrap();
        let h = s.label("H").unwrap();
        let hh = stoch(&[&[(0, (2, 3)), (1, (1, 3))], &[(1, (1, 3)), (2, (2, 3))]]);
        let lifted = hh.copower_left(&s);
        let row = lifted.row(&Tagged::new(0, h.clone())).unwrap();
        assert_eq!(row.mass(&Tagged::new(0, h.clone())), q(2, 3));
        assert_eq!(row.mass(&Tagged::new(1, h.clone())), q(1, 3));
        let g = Channel::identity(s.clone()).copower_right(1);
        assert_eq!(
            *g.row(&Tagged::new(0, h.clone())).unwrap(),
            Dist::dirac(Tagged::new(0, h))
        );
    }
}
