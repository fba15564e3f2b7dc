use std::collections::BTreeMap;

use proptest::prelude::*;

use hyperdist::format::{parse_dist, parse_hyper, parse_tagged, Workspace};
use hyperdist::laws::generators::{random_workspace, space_a};
use hyperdist::predicates::Predicate;
use hyperdist::refinement::Refinement;
use hyperdist::*;

fn weights(k: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..6, k).prop_filter("some mass", |w| w.iter().any(|x| *x > 0))
}

fn from_weights<T: Outcome>(points: &[T], w: &[u64]) -> Dist<T> {
    let total: u64 = w.iter().sum();
    Dist::from_terms(points.iter().cloned().zip(w.iter().map(|x| Prob::new(*x, total)))).unwrap()
}

fn state(k: usize) -> impl Strategy<Value = (Space, Dist<Label>)> {
    weights(k).prop_map(move |w| {
        let a = space_a(k);
        let d = from_weights(a.points(), &w);
        (a, d)
    })
}

fn rows(k: usize, n: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(weights(n), k)
}

fn test_from(a: &Space, n: usize, rows: &[Vec<u64>]) -> Test {
    let target = Space::numeric(n);
    let pts: Vec<usize> = target.points().to_vec();
    Test::new(Channel::from_fn(a.clone(), target, |x| from_weights(&pts, &rows[x.index()])).unwrap())
}

fn channel(a: &Space, b: &Space, rows: &[Vec<u64>]) -> Channel<Label, Label> {
    Channel::from_fn(a.clone(), b.clone(), |x| from_weights(b.points(), &rows[x.index()])).unwrap()
}

fn numeric_channel(n: usize, m: usize, rows: &[Vec<u64>]) -> Channel<usize, usize> {
    let target = Space::numeric(m);
    let pts: Vec<usize> = target.points().to_vec();
    Channel::from_fn(Space::numeric(n), target, |i| from_weights(&pts, &rows[*i])).unwrap()
}

fn predicate(a: &Space, v: &[u64]) -> Predicate {
    Predicate::from_values(a.clone(), &v.iter().map(|x| Prob::new(*x, 6)).collect::<Vec<_>>()).unwrap()
}

fn joint(k: usize, n: usize) -> impl Strategy<Value = (Space, TaggedDist<Label>)> {
    weights(k * n).prop_map(move |w| {
        let a = space_a(k);
        let pts = a.copower(n);
        (a, TaggedDist::new(n, from_weights(pts.points(), &w)).unwrap())
    })
}

/// Blockwise normalisation computed term by term.
fn oracle_normalise(omega: &TaggedDist<Label>) -> BTreeMap<usize, (Prob, BTreeMap<Label, Prob>)> {
    let mut blocks: BTreeMap<usize, (Prob, BTreeMap<Label, Prob>)> = BTreeMap::new();
    for (t, p) in omega.iter() {
        let e = blocks.entry(t.tag).or_insert((Prob::zero(), BTreeMap::new()));
        e.0 += p;
        e.1.insert(t.value.clone(), p.clone());
    }
    for (w, inner) in blocks.values_mut() {
        for v in inner.values_mut() {
            *v = v.checked_div(w).unwrap();
        }
    }
    blocks
}

fn as_blocks(h: &HyperDist<Label>) -> BTreeMap<usize, (Prob, BTreeMap<Label, Prob>)> {
    h.iter()
        .map(|(t, p)| {
            let inner = t.value.iter().map(|(x, q)| (x.clone(), q.clone())).collect();
            (t.tag, (p.clone(), inner))
        })
        .collect()
}

fn canonical<T: Outcome>(d: &Dist<T>) -> bool {
    d.iter().all(|(_, p)| !p.is_zero()) && d.iter().map(|(_, p)| p).sum::<Prob>().is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn kleisli_outputs_are_canonical_and_compose(
        (a, omega) in state(3),
        f in rows(3, 2),
        g in rows(2, 3),
        k in rows(3, 3),
    ) {
        let b = hyperdist::laws::generators::space_b(2);
        let c = hyperdist::laws::generators::space_c(3);
        let f = channel(&a, &b, &f);
        let g = channel(&b, &c, &g);
        let k = channel(&c, &a, &k);
        let out = f.apply(&omega).unwrap();
        prop_assert!(canonical(&out));
        prop_assert_eq!(g.apply(&out).unwrap(), f.then(&g).unwrap().apply(&omega).unwrap());
        prop_assert_eq!(
            f.then(&g).unwrap().then(&k).unwrap(),
            f.then(&g.then(&k).unwrap()).unwrap()
        );
        prop_assert_eq!(&Channel::identity(a.clone()).then(&f).unwrap(), &f);
        prop_assert_eq!(&f.then(&Channel::identity(b.clone())).unwrap(), &f);
        prop_assert_eq!(Channel::identity(a).apply(&omega).unwrap(), omega);
    }

    #[test]
    fn normalisation_matches_the_blockwise_oracle((_, omega) in joint(3, 3)) {
        let n = hyper_normalise(&omega);
        prop_assert_eq!(n.arity(), 3);
        prop_assert!(n.is_normalised());
        prop_assert_eq!(as_blocks(&n), oracle_normalise(&omega));
    }

    #[test]
    fn normalisation_laws((a, omega) in joint(3, 2), f in rows(3, 2)) {
        let n = hyper_normalise(&omega);
        prop_assert_eq!(n.tags(), omega.tags());
        prop_assert_eq!(n.underlying(), omega.codiagonal());
        prop_assert_eq!(hyper_normalise(&n), n.map_values(|d| Dist::dirac(d.clone())));
        prop_assert_eq!(n.strength_flatten(), omega.clone());

        let b = hyperdist::laws::generators::space_b(2);
        let f = channel(&a, &b, &f);
        let pushed = omega.bind_values(|x| f.row(x).unwrap().clone());
        let lhs = hyper_normalise(&pushed);
        let rhs = n.map_values(|d| f.apply(d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn effect_module_laws(
        k in 1usize..4,
        p in prop::collection::vec(0u64..=6, 3),
        q in prop::collection::vec(0u64..=6, 3),
        r in 0u64..=6,
        s in 0u64..=6,
    ) {
        let a = space_a(k);
        let p = predicate(&a, &p[..k]);
        let q = predicate(&a, &q[..k]);
        let (r, s) = (Prob::new(r, 6), Prob::new(s, 6));
        let truth = Predicate::truth(a.clone());
        prop_assert_eq!(p.psum(&p.complement()).unwrap(), truth.clone());
        prop_assert_eq!(p.complement().complement(), p.clone());
        prop_assert_eq!(p.psum(&Predicate::falsity(a.clone())).unwrap(), p.clone());
        prop_assert_eq!(p.scale(&Prob::one()).unwrap(), p.clone());
        prop_assert_eq!(p.scale(&Prob::zero()).unwrap(), Predicate::falsity(a.clone()));
        prop_assert_eq!(
            p.scale(&s).unwrap().scale(&r).unwrap(),
            p.scale(&(&r * &s)).unwrap()
        );
        match (p.psum(&q), q.psum(&p)) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(&x, &y);
                prop_assert_eq!(x.scale(&r).unwrap(), p.scale(&r).unwrap().psum(&q.scale(&r).unwrap()).unwrap());
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "psum is not symmetric in definedness"),
        }
        let rest = r.complement().unwrap();
        prop_assert_eq!(p.scale(&r).unwrap().psum(&p.scale(&rest).unwrap()).unwrap(), p);
    }

    #[test]
    fn weakest_preconditions(
        (a, omega) in state(3),
        f in rows(3, 2),
        g in rows(2, 3),
        q in prop::collection::vec(0u64..=6, 3),
        s in 0u64..=6,
    ) {
        let b = hyperdist::laws::generators::space_b(2);
        let c = hyperdist::laws::generators::space_c(3);
        let f = channel(&a, &b, &f);
        let g = channel(&b, &c, &g);
        let qc = predicate(&c, &q);
        let qb = predicate(&b, &q[..2]);
        let s = Prob::new(s, 6);

        prop_assert_eq!(wp(&f, &Predicate::truth(b.clone())).unwrap(), Predicate::truth(a.clone()));
        prop_assert_eq!(wp(&f, &qb.complement()).unwrap(), wp(&f, &qb).unwrap().complement());
        prop_assert_eq!(wp(&f, &qb.scale(&s).unwrap()).unwrap(), wp(&f, &qb).unwrap().scale(&s).unwrap());
        let half = qb.scale(&Prob::new(1, 2)).unwrap();
        prop_assert_eq!(
            wp(&f, &half.psum(&half).unwrap()).unwrap(),
            wp(&f, &half).unwrap().psum(&wp(&f, &half).unwrap()).unwrap()
        );
        prop_assert_eq!(
            wp(&f.then(&g).unwrap(), &qc).unwrap(),
            wp(&f, &wp(&g, &qc).unwrap()).unwrap()
        );
        prop_assert_eq!(
            validity(&f.apply(&omega).unwrap(), &qb).unwrap(),
            validity(&omega, &wp(&f, &qb).unwrap()).unwrap()
        );
    }

    #[test]
    fn total_probability_via_sprinkle((a, omega) in state(3), t in rows(3, 3)) {
        let t = test_from(&a, 3, &t);
        let comps = t.components();
        let r: Vec<Prob> = comps.iter().map(|p| validity(&omega, p).unwrap()).collect();
        let posts: Vec<Dist<Label>> = comps
            .iter()
            .zip(&r)
            .map(|(p, v)| if v.is_zero() { omega.clone() } else { condition(&omega, p).unwrap() })
            .collect();
        let r = Dist::from_terms(r.into_iter().enumerate()).unwrap();
        prop_assert_eq!(sprinkle(&r, &posts).unwrap(), omega);
    }

    #[test]
    fn hyper_conditioning((a, omega) in state(3), t in rows(3, 3)) {
        let t = test_from(&a, 3, &t);
        let hc = hyper_condition(&omega, &t).unwrap();
        prop_assert!(hc.is_normalised());
        prop_assert_eq!(&hc, &hyper_condition_direct(&omega, &t.components()).unwrap());

        let mut oracle = BTreeMap::new();
        for (i, p) in t.components().iter().enumerate() {
            let v = validity(&omega, p).unwrap();
            if !v.is_zero() {
                let post = condition(&omega, p).unwrap();
                oracle.insert(i, (v, post.iter().map(|(x, q)| (x.clone(), q.clone())).collect()));
            }
        }
        prop_assert_eq!(as_blocks(&hc), oracle);

        prop_assert_eq!(recover_state(&hc), omega.clone());
        prop_assert_eq!(denote_channel(&t, &omega).unwrap().flatten(), omega.clone());
        if omega.has_full_support(&a) {
            prop_assert_eq!(recover_test(&hc, &a).unwrap(), t);
        }
    }

    #[test]
    fn postprocessing_refines((a, omega) in state(2), s in rows(2, 2), h in rows(2, 3), h2 in rows(3, 2)) {
        let s = test_from(&a, 2, &s);
        let h = numeric_channel(2, 3, &h);
        let h2 = numeric_channel(3, 2, &h2);
        let t = Test::new(s.channel().then(&h).unwrap());
        let u = Test::new(t.channel().then(&h2).unwrap());

        let found = test_refines(&s, &t).unwrap().expect("t is a post-processing of s");
        prop_assert_eq!(s.channel().then(&found).unwrap(), t.channel().clone());
        prop_assert!(test_refines(&t, &u).unwrap().is_some());
        prop_assert!(test_refines(&s, &u).unwrap().is_some());
        prop_assert!(test_refines(&s, &s).unwrap().is_some());

        let phi = hyper_condition(&omega, &s).unwrap();
        let psi = hyper_condition(&omega, &t).unwrap();
        let w = witness_from_h(&omega, &s, &h).unwrap();
        prop_assert!(check_witness(&phi, &psi, &w).unwrap());

        if omega.has_full_support(&a) {
            match hyper_refines(&phi, &psi, &a).unwrap() {
                Refinement::Refines { h, witness } => {
                    prop_assert!(check_witness(&phi, &psi, &witness).unwrap());
                    let s2 = recover_test(&phi, &a).unwrap();
                    prop_assert_eq!(Test::new(s2.channel().then(&h).unwrap()), recover_test(&psi, &a).unwrap());
                }
                other => prop_assert!(false, "expected refinement, got {:?}", other),
            }
        }
    }

    #[test]
    fn uninformative_tests_do_not_refine_to_informative_ones(row in weights(2)) {
        let a = space_a(2);
        let flat = test_from(&a, 2, &[row.clone(), row]);
        let exact = test_from(&a, 2, &[vec![1, 0], vec![0, 1]]);
        prop_assert!(test_refines(&flat, &exact).unwrap().is_none());
        prop_assert!(test_refines(&exact, &flat).unwrap().is_some());
    }

    #[test]
    fn ket_round_trips((a, omega) in state(3), (b, j) in joint(2, 3)) {
        prop_assert_eq!(parse_dist(&omega.to_string(), &a).unwrap(), omega);
        prop_assert_eq!(parse_tagged(&j.to_string(), &b, 3).unwrap(), j.clone());
        let n = hyper_normalise(&j);
        prop_assert_eq!(parse_hyper(&n.to_string(), &b, 3).unwrap(), n);
    }

    #[test]
    fn workspace_round_trips(seed in any::<u64>()) {
        let ws = random_workspace(seed);
        let text = ws.to_json();
        let back = Workspace::from_json(&text).unwrap();
        prop_assert_eq!(&back, &ws);
        prop_assert_eq!(back.to_json(), text);
    }
}
