//! Refinement of tests and of hyper distributions.

use num_rational::BigRational;
use num_traits::Zero;

use crate::channel::Channel;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::feasibility::nonneg_solution;
use crate::hypercond::{ensure_normalised, hyper_condition, recover_state, recover_test};
use crate::normalise::{disintegrate, hyper_normalise};
use crate::predicates::Test;
use crate::prob::Prob;
use crate::space::{Outcome, Space, Tagged};
use crate::tagged::{HyperDist, TaggedDist};

/// A two-level witness `Ω ∈ D(m·D(n·D(A)))` for `Φ ⊑ Ψ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RefinementWitness<A: Outcome> {
    inner_arity: usize,
    omega: HyperDist<Tagged<Dist<A>>>,
}

impl<A: Outcome> RefinementWitness<A> {
    /// Checks every inner tag is below `inner_arity`.
    pub fn new(inner_arity: usize, omega: HyperDist<Tagged<Dist<A>>>) -> Result<Self> {
        for (x, _) in omega.iter() {
            if let Some(y) = x.value.support().find(|y| y.tag >= inner_arity) {
                return Err(Error::TagOutOfRange {
                    tag: y.tag,
                    arity: inner_arity,
                });
            }
        }
        Ok(RefinementWitness { inner_arity, omega })
    }

    pub fn inner_arity(&self) -> usize {
        self.inner_arity
    }

    pub fn outer_arity(&self) -> usize {
        self.omega.arity()
    }

    pub fn omega(&self) -> &HyperDist<Tagged<Dist<A>>> {
        &self.omega
    }

    /// `(π₂)_*(Ω)`, a distribution over `n·D(A)`.
    pub fn left_projection(&self) -> HyperDist<A> {
        TaggedDist::new_unchecked(self.inner_arity, self.omega.codiagonal().flatten())
    }

    /// `D(m·(π₂)_*)(Ω)`, a distribution over `m·D(A)`.
    pub fn right_projection(&self) -> HyperDist<A> {
        self.omega
            .map_values(|xi| xi.map(|x| x.value.clone()).flatten())
    }
}

/// True iff `Ω` projects to `Φ` and to `Ψ`.
pub fn check_witness<A: Outcome>(phi: &HyperDist<A>, psi: &HyperDist<A>, w: &RefinementWitness<A>) -> Result<bool> {
    if w.outer_arity() != psi.arity() {
        return Err(Error::ArityMismatch {
            expected: psi.arity(),
            found: w.outer_arity(),
        });
    }
    if w.inner_arity() != phi.arity() {
        return Err(Error::ArityMismatch {
            expected: phi.arity(),
            found: w.inner_arity(),
        });
    }
    Ok(w.left_projection() == *phi && w.right_projection() == *psi)
}

fn check_postprocessor(s: &Test<impl Outcome>, h: &Channel<usize, usize>) -> Result<()> {
    if h.source().len() != s.arity() {
        return Err(Error::ArityMismatch {
            expected: s.arity(),
            found: h.source().len(),
        });
    }
    Ok(())
}

/// `Ω = N(gr(h ∘ π₁)_*(ω ∥ s))`.
pub fn witness_from_h<A: Outcome>(omega: &Dist<A>, s: &Test<A>, h: &Channel<usize, usize>) -> Result<RefinementWitness<A>> {
    check_postprocessor(s, h)?;
    let phi = hyper_condition(omega, s)?;
    let graph = phi
        .dist()
        .try_bind(|x| Ok(h.row(&x.tag)?.map(|j| Tagged::new(*j, x.clone()))))?;
    let lifted = TaggedDist::new_unchecked(h.target().len(), graph);
    Ok(RefinementWitness {
        inner_arity: s.arity(),
        omega: hyper_normalise(&lifted),
    })
}

/// `Θ = ((st₂)_* ∘ D(m·D(π₁)))(Ω)` over `m·n`.
pub fn theta<A: Outcome>(w: &RefinementWitness<A>) -> TaggedDist<usize> {
    w.omega.bind_values(|xi| xi.map(|x| x.tag))
}

/// Recovers a postprocessor `h : n ⊸ m` from a witness by disintegrating `Θ`.
///
/// Needs `supp(ω) = A` and `supp(s_*(ω)) = n`.
pub fn h_from_witness<A: Outcome>(w: &RefinementWitness<A>, omega: &Dist<A>, s: &Test<A>) -> Result<Channel<usize, usize>> {
    let missing: Vec<String> = s
        .space()
        .points()
        .iter()
        .filter(|a| omega.mass(a).is_zero())
        .map(|a| a.ket())
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteSupport { missing });
    }
    if w.inner_arity() != s.arity() {
        return Err(Error::ArityMismatch {
            expected: s.arity(),
            found: w.inner_arity(),
        });
    }
    Ok(disintegrate(&theta(w), &Space::numeric(s.arity()))?.conditional)
}

fn ratio(p: &Prob) -> BigRational {
    p.as_ratio().clone()
}

/// Decides `s ⊑ t`: returns some stochastic `h` with `h • s = t`.
///
/// Tags `i` never produced by `s` get the fixed row `h(i) = 1|0>`.
pub fn test_refines<A: Outcome>(s: &Test<A>, t: &Test<A>) -> Result<Option<Channel<usize, usize>>> {
    if s.space() != t.space() {
        return Err(Error::SpaceMismatch(format!(
            "tests over `{}` and `{}`",
            s.space().name(),
            t.space().name()
        )));
    }
    let (n, m) = (s.arity(), t.arity());
    let src = Space::numeric(n);
    let tgt = Space::numeric(m);
    if m == 0 {
        return Ok((n == 0).then(|| Channel::from_fn_unchecked(src, tgt, |_| unreachable!())));
    }
    if n == m && s == t {
        return Ok(Some(Channel::identity(src)));
    }

    let sc = s.channel();
    let live: Vec<usize> = (0..n)
        .filter(|i| sc.rows().any(|(_, row)| !row.mass(i).is_zero()))
        .collect();
    let var = |k: usize, j: usize| k * m + j;
    let nvars = live.len() * m;
    let mut a_mat: Vec<Vec<BigRational>> = Vec::new();
    let mut b_vec: Vec<BigRational> = Vec::new();
    for (a, srow) in sc.rows() {
        let trow = t.channel().row(a)?;
        for j in 0..m {
            let mut row = vec![BigRational::zero(); nvars];
            for (k, i) in live.iter().enumerate() {
                row[var(k, j)] = ratio(&srow.mass(i));
            }
            a_mat.push(row);
            b_vec.push(ratio(&trow.mass(&j)));
        }
    }
    for k in 0..live.len() {
        let mut row = vec![BigRational::zero(); nvars];
        for j in 0..m {
            row[var(k, j)] = BigRational::from_integer(1.into());
        }
        a_mat.push(row);
        b_vec.push(BigRational::from_integer(1.into()));
    }

    let Some(x) = nonneg_solution(&a_mat, &b_vec) else {
        return Ok(None);
    };
    let h = Channel::from_fn(src, tgt, |i| match live.iter().position(|l| l == i) {
        Some(k) => Dist::from_terms_unchecked((0..m).map(|j| {
            let v = Prob::from_ratio(x[var(k, j)].clone()).expect("solver returns x ≥ 0");
            (j, v)
        })),
        None => Dist::dirac(0),
    })?;
    let composed = sc.then(&h)?;
    assert_eq!(&composed, t.channel(), "feasibility solution failed verification");
    Ok(Some(h))
}

/// Outcome of deciding `Φ ⊑ Ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refinement<A: Outcome> {
    Refines {
        h: Channel<usize, usize>,
        witness: RefinementWitness<A>,
    },
    NotRefinable,
    /// The support conditions needed to reduce to test refinement fail.
    Undetermined(Error),
}

/// Decides refinement of two hyper conditionals of a common full-support state.
pub fn hyper_refines<A: Outcome>(phi: &HyperDist<A>, psi: &HyperDist<A>, base: &Space<A>) -> Result<Refinement<A>> {
    ensure_normalised(phi)?;
    ensure_normalised(psi)?;
    phi.check_in_hyper(base)?;
    psi.check_in_hyper(base)?;
    let omega = recover_state(phi);
    if omega != recover_state(psi) {
        return Err(Error::StateMismatch);
    }
    let s = match recover_test(phi, base) {
        Ok(s) => s,
        Err(e @ Error::IncompleteSupport { .. }) => return Ok(Refinement::Undetermined(e)),
        Err(e) => return Err(e),
    };
    let t = recover_test(psi, base)?;
    match test_refines(&s, &t)? {
        Some(h) => {
            let witness = witness_from_h(&omega, &s, &h)?;
            assert!(
                check_witness(phi, psi, &witness)?,
                "constructed witness failed verification"
            );
            Ok(Refinement::Refines { h, witness })
        }
        None => Ok(Refinement::NotRefinable),
    }
}
