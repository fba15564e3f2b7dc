//! Small-instance generators.
//!
//! Exhaustive generation enumerates every distribution whose masses are
//! multiples of `1/q` for some `q ≤ max_denominator`, each exactly once.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::Channel;
use crate::dist::{Dist, SubDist};
use crate::format::{Typed, Workspace};
use crate::hypercond::hyper_condition;
use crate::normalise::hyper_normalise;
use crate::predicates::{Predicate, Test};
use crate::prob::Prob;
use crate::refinement::witness_from_h;
use crate::space::{Outcome, Space};
use crate::tagged::TaggedDist;

/// A deterministic generator seeded from a base seed and a stream index.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn letter_labels(prefix: Option<&str>, k: usize) -> Vec<String> {
    (0..k)
        .map(|i| match prefix {
            None if i < 26 => char::from(b'a' + i as u8).to_string(),
            None => format!("a{i}"),
            Some(p) => format!("{p}{i}"),
        })
        .collect()
}

/// `A = {a, b, c, ...}` of size `k`.
pub fn space_a(k: usize) -> Space {
    Space::labels("A", &letter_labels(None, k)).expect("generated labels")
}

/// `B = {b0, b1, ...}` of size `k`.
pub fn space_b(k: usize) -> Space {
    Space::labels("B", &letter_labels(Some("b"), k)).expect("generated labels")
}

/// `C = {c0, c1, ...}` of size `k`.
pub fn space_c(k: usize) -> Space {
    Space::labels("C", &letter_labels(Some("c"), k)).expect("generated labels")
}

fn compositions(total: u64, parts: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Every distribution over `points` with denominators at most `max_den`,
/// in order of first appearance by denominator.
pub fn grid<T: Outcome>(points: &[T], max_den: u64) -> Vec<Dist<T>> {
    if points.is_empty() {
        return Vec::new();
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for den in 1..=max_den {
        let mut comps = Vec::new();
        compositions(den, points.len(), &mut Vec::new(), &mut comps);
        for c in comps {
            let d = Dist::from_terms_unchecked(
                points
                    .iter()
                    .zip(&c)
                    .filter(|(_, k)| **k > 0)
                    .map(|(x, k)| (x.clone(), Prob::new(*k, den))),
            );
            if seen.insert(d.clone()) {
                out.push(d);
            }
        }
    }
    out
}

/// A random distribution over `points` with denominator at most `max_den`.
pub fn random_dist<T: Outcome>(rng: &mut impl Rng, points: &[T], max_den: u64) -> Dist<T> {
    let den = rng.gen_range(1..=max_den);
    let mut cuts: Vec<u64> = (0..points.len() - 1).map(|_| rng.gen_range(0..=den)).collect();
    cuts.sort_unstable();
    cuts.push(den);
    let mut prev = 0;
    let terms = points.iter().zip(cuts).filter_map(|(x, c)| {
        let k = c - prev;
        prev = c;
        (k > 0).then(|| (x.clone(), Prob::new(k, den)))
    });
    Dist::from_terms_unchecked(terms.collect::<Vec<_>>())
}

/// A random channel with every row drawn by [`random_dist`].
pub fn random_channel<A: Outcome, B: Outcome>(
    rng: &mut impl Rng,
    source: &Space<A>,
    target: &Space<B>,
    max_den: u64,
) -> Channel<A, B> {
    let rows: Vec<Dist<B>> = source
        .points()
        .iter()
        .map(|_| random_dist(rng, target.points(), max_den))
        .collect();
    Channel::from_fn_unchecked(source.clone(), target.clone(), |a| {
        rows[source.points().binary_search(a).expect("source point")].clone()
    })
}

/// A random deterministic channel, the graph of a function.
pub fn random_function<A: Outcome, B: Outcome>(rng: &mut impl Rng, source: &Space<A>, target: &Space<B>) -> Channel<A, B> {
    let image: Vec<B> = source
        .points()
        .iter()
        .map(|_| target.points().choose(rng).expect("nonempty target").clone())
        .collect();
    Channel::from_fn_unchecked(source.clone(), target.clone(), |a| {
        let i = source.points().binary_search(a).expect("source point");
        Dist::dirac(image[i].clone())
    })
}

const LABEL_POOL: [&str; 10] = ["a", "b", "c", "H", "T", "d\u{304}", "0", "x_1", "long-name", "\u{3c9}"];

fn random_space(rng: &mut impl Rng, name: &str) -> Space {
    let k = rng.gen_range(1..=4);
    let mut pool = LABEL_POOL.to_vec();
    pool.shuffle(rng);
    Space::labels(name, &pool[..k]).expect("pool labels are valid")
}

/// A random workspace holding at least one object of every kind.
pub fn random_workspace(seed: u64) -> Workspace {
    let mut r = rng(seed, 0);
    let r = &mut r;
    let den = 6;
    let mut ws = Workspace::new();
    let a = random_space(r, "A");
    let b = random_space(r, "B");
    ws.declare(&a);
    ws.declare(&b);
    if r.gen_bool(0.5) {
        ws.spaces.insert(
            "N".into(),
            crate::format::SpaceDecl {
                space: Space::labels("N", &["0", "1", "2"]).expect("numerals"),
                numeric: true,
            },
        );
    }

    for name in ["omega", "rho"] {
        let sp = if r.gen_bool(0.5) { &a } else { &b };
        ws.dists
            .insert(name.into(), Typed::new(sp.clone(), random_dist(r, sp.points(), den)));
    }
    let n = r.gen_range(1..=3);
    let numeric = Space::numeric_labels(n);
    ws.dists.insert(
        "r".into(),
        Typed::new(numeric.clone(), random_dist(r, numeric.points(), den)),
    );

    let d = random_dist(r, a.points(), den);
    let scale = Prob::new(r.gen_range(0..=4), 4);
    let sub = SubDist::from_terms(d.iter().map(|(x, p)| (x.clone(), p * &scale))).expect("scaled");
    ws.subdists.insert("phi".into(), Typed::new(a.clone(), sub));

    ws.channels.insert("f".into(), random_channel(r, &a, &b, den));
    ws.channels.insert("g".into(), random_channel(r, &b, &numeric, den));

    let s = Test::new(random_channel(r, &a, &Space::numeric(n), den));
    let m = r.gen_range(1..=3);
    let h = random_channel(r, &Space::numeric(n), &Space::numeric(m), den);
    ws.tests.insert("s".into(), s.clone());

    let values: Vec<Prob> = a.points().iter().map(|_| Prob::new(r.gen_range(0..=7), 7)).collect();
    let p = Predicate::from_values(a.clone(), &values).expect("in range");
    ws.predicates.insert("p".into(), p);

    let joint = TaggedDist::new(n, random_dist(r, a.copower(n).points(), den)).expect("tags below n");
    ws.hyperdists
        .insert("nj".into(), Typed::new(a.clone(), hyper_normalise(&joint)));
    ws.joints.insert("j".into(), Typed::new(a.clone(), joint));

    let omega = random_dist(r, a.points(), den);
    ws.hyperdists.insert(
        "phi_s".into(),
        Typed::new(a.clone(), hyper_condition(&omega, &s).expect("same space")),
    );
    ws.witnesses.insert(
        "w".into(),
        Typed::new(a.clone(), witness_from_h(&omega, &s, &h).expect("arities agree")),
    );
    ws.params.insert("seed".into(), seed.to_string());
    ws
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n - k + i) / i)
    }

    #[test]
    fn grid_is_complete_and_distinct() {
        let pts = space_a(3);
        // With q = 1 and q = 2 together every vector is of the form k/2.
        assert_eq!(grid(pts.points(), 2).len() as u64, binomial(2 + 2, 2));
        // q = 1..4 with repeats removed: the union of the k/4 and k/3 grids.
        let fours = binomial(4 + 2, 2);
        let threes = binomial(3 + 2, 2) - 3;
        assert_eq!(grid(pts.points(), 4).len() as u64, fours + threes);
        let g = grid(pts.points(), 4);
        let set: HashSet<_> = g.iter().cloned().collect();
        assert_eq!(set.len(), g.len());
    }

    #[test]
    fn random_dist_respects_bounds() {
        let mut r = rng(7, 1);
        let pts = space_a(3);
        for _ in 0..200 {
            let d = random_dist(&mut r, pts.points(), 5);
            assert!(d.iter().all(|(_, p)| *p.denom() <= 5.into()));
        }
    }

    #[test]
    fn random_workspace_is_deterministic() {
        assert_eq!(random_workspace(3), random_workspace(3));
        assert_eq!(random_workspace(3).to_json(), random_workspace(3).to_json());
    }
}
