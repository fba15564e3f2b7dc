//! Evaluation of many instances with deterministic aggregation.

use super::Comparison;

/// What happened to one instance.
pub(crate) enum Step {
    Held,
    Skipped,
    Failed(Comparison),
}

/// Counts over a batch, keeping the failure at the smallest position.
#[derive(Default)]
pub(crate) struct Tally {
    pub checked: usize,
    pub skipped: usize,
    pub first_failure: Option<(usize, Comparison)>,
}

impl Tally {
    fn add(mut self, pos: usize, step: Step) -> Self {
        match step {
            Step::Held => self.checked += 1,
            Step::Skipped => self.skipped += 1,
            Step::Failed(c) => {
                self.checked += 1;
                if self.first_failure.as_ref().is_none_or(|(p, _)| pos < *p) {
                    self.first_failure = Some((pos, c));
                }
            }
        }
        self
    }

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn merge(mut self, other: Tally) -> Self {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

pub(crate) fn sequential(len: usize, eval: impl Fn(usize) -> Step) -> Tally {
    (0..len).fold(Tally::default(), |t, pos| t.add(pos, eval(pos)))
}

#[cfg(feature = "parallel")]
pub(crate) fn parallel(len: usize, eval: impl Fn(usize) -> Step + Sync) -> Tally {
    use rayon::prelude::*;
    (0..len)
        .into_par_iter()
        .fold(Tally::default, |t, pos| t.add(pos, eval(pos)))
        .reduce(Tally::default, Tally::merge)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn parallel(len: usize, eval: impl Fn(usize) -> Step + Sync) -> Tally {
    sequential(len, eval)
}
