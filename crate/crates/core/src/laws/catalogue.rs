//! The registered laws and the instance families they are checked on.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::channel::Channel;
use crate::dist::Dist;
use crate::error::Error;
use crate::fixtures;
use crate::normalise::{disintegrate, hyper_normalise, joint_from_conditional, nrm, sprinkle};
use crate::predicates::Test;
use crate::prob::{q, Prob};
use crate::space::{Label, Space, Tagged};
use crate::tagged::{HyperDist, TaggedDist};

use super::generators::{grid, random_channel, random_function, rng, space_a, space_b, space_c};
use super::{CheckConfig, Comparison, Instance, LawError, Lift};

type Eval = fn(&Instance, Lift) -> Result<Option<Comparison>, LawError>;

/// A named equation between two computed values.
pub struct Law {
    pub id: &'static str,
    /// The equation is known not to hold in general.
    pub expect_fail: bool,
    pub statement: &'static str,
    eval: Eval,
}

impl Law {
    /// Evaluates both sides; `None` when the instance misses a precondition.
    pub fn evaluate(&self, inst: &Instance, lift: Lift) -> Result<Option<Comparison>, LawError> {
        (self.eval)(inst, lift)
    }
}

macro_rules! law {
    ($id:literal, $statement:literal, $eval:expr) => {
        Law {
            id: $id,
            expect_fail: false,
            statement: $statement,
            eval: $eval,
        }
    };
    ($id:literal, $statement:literal, $eval:expr, expect_fail) => {
        Law {
            id: $id,
            expect_fail: true,
            statement: $statement,
            eval: $eval,
        }
    };
}

pub static LAWS: &[Law] = &[
    law!("kleisli.unit-left", "f_*(η(a)) = f(a)", kleisli_unit_left),
    law!("kleisli.unit-right", "η_*(ω) = ω", kleisli_unit_right),
    law!("kleisli.pure", "(η∘u)_*(ω) = D(u)(ω)", kleisli_pure),
    law!("kleisli.map-after-bind", "D(v)(f_*(ω)) = (D(v)∘f)_*(ω)", kleisli_map_after_bind),
    law!("kleisli.compose", "g_*(f_*(ω)) = (g•f)_*(ω)", kleisli_compose),
    law!("kleisli.associative", "k•(g•f) = (k•g)•f", kleisli_associative),
    law!("kleisli.unital", "f•η = f = η•f", kleisli_unital),
    law!("strength.first", "D(π₁)(st₁(ω, a)) = ω", strength_first),
    law!("strength.second", "D(π₂)(st₁(ω, a)) = η(a)", strength_second),
    law!("graph.first", "D(π₁)(gr(f)(a)) = f(a)", graph_first),
    law!("graph.second", "D(π₂)(gr(f)(a)) = η(a)", graph_second),
    law!("norm.trivial-input", "N(D(κ_i)(φ)) = η(κ_i φ)", norm_trivial_input),
    law!("norm.trivial-strength", "N(st₁(ρ, a)) = Σ ρ(i)|κ_i(1|a>)>", norm_trivial_strength),
    law!("norm.tags", "D(π₁)(N(ω)) = D(π₁)(ω)", norm_tags),
    law!("norm.underlying", "μ(D(∇)(N(ω))) = D(∇)(ω)", norm_underlying),
    law!("norm.idempotent", "N(N(ω)) = D(n·η)(N(ω))", norm_idempotent),
    law!("norm.flatten-inverse", "D(n·μ)(N(N(ω))) = N(ω)", norm_flatten_inverse),
    law!("norm.left-inverse", "(st₂)_*(N(ω)) = ω", norm_left_inverse),
    law!("norm.natural-map", "N(D(n·u)(ω)) = D(n·D(u))(N(ω))", norm_natural_map),
    law!("norm.natural-bind", "N((n·f)_*(ω)) = D(n·f_*)(N(ω))", norm_natural_bind),
    law!("characterisation.rectangle", "N(spr(r, D(κ_i)(φ_i))) = Σ r(i)|κ_i φ_i>", characterisation_rectangle),
    law!("characterisation.table", "every preimage of ω under the rectangle yields N(ω)", characterisation_table),
    law!("naturality.retag", "D(m·μ)(N((h·D(A))_*(N(ω)))) = N((h·A)_*(ω))", naturality_retag),
    law!("hyper-point.twist", "D(tw)(N(ω)) = gr(η∘f)_*(ω₁)", hyper_point_twist),
    law!("hyper-point.disintegration", "Σ ω₁(i) f(i)(a)|κ_i a> = ω", hyper_point_disintegration),
    law!("distributive.naturality", "D(n·f_*)(N(ω)) = N((n∗f)_*(ω))", distributive_naturality),
    law!("distributive.comult-left", "N_{D̄A} • D̄(N_A) • δ = (n∗δ_A) • N_A", distributive_comult_left),
    law!("distributive.comult-right", "(n∗N_A) • N_{n∗A} • D̄(δ_A) = δ_{D̄A} • N_A", distributive_comult_right),
    law!("distributive.counit", "(n∗ε_A) • N_A = ε_{n∗A}", distributive_counit),
    law!("distributive.two-counit", "ε_A • ε_{D̄A} • N_A = ε_A • D̄(ε_A)", distributive_two_counit),
    law!("distributive.counit-rectangle", "ε_{D̄A} • N_A = D̄(ε_A)", distributive_counit_rectangle, expect_fail),
    law!("distributive.counit-rectangle-unary", "ε_{D̄A} • N_A = D̄(ε_A) at n = 1", distributive_counit_rectangle),
    law!("non-affine.values", "the two sides of the mixture example are the exact values", non_affine_values),
    law!("non-affine.mix", "λN(ω) + (1-λ)N(ω') = N(λω + (1-λ)ω')", non_affine_mix, expect_fail),
    law!("non-affine.fixed-blocks", "N is affine on mixtures with equal normalised blocks", non_affine_fixed_blocks),
    law!("non-affine.unary", "N(ω) = η(κ₀ D(∇)(ω)) at n = 1", non_affine_unary),
    law!("disintegration.joint-round-trip", "joint_from_conditional(disintegrate(ω)) = ω", disintegration_joint),
    law!("disintegration.conditional-round-trip", "disintegrate(joint_from_conditional(c, ω)) = (c, ω)", disintegration_conditional),
];

pub(crate) const KLEISLI: [&str; 11] = [
    "kleisli.unit-left",
    "kleisli.unit-right",
    "kleisli.pure",
    "kleisli.map-after-bind",
    "kleisli.compose",
    "kleisli.associative",
    "kleisli.unital",
    "strength.first",
    "strength.second",
    "graph.first",
    "graph.second",
];

/// Looks up a registered law.
pub fn law(id: &str) -> Option<&'static Law> {
    LAWS.iter().find(|l| l.id == id)
}

/// A stable per-law stream identifier.
pub(crate) fn salt(id: &str) -> u64 {
    id.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

fn need<'a, T>(x: &'a Option<T>, name: &'static str) -> Result<&'a T, LawError> {
    x.as_ref().ok_or(LawError::MissingInput(name))
}

fn joint(inst: &Instance) -> Result<&TaggedDist<Label>, LawError> {
    need(&inst.joint, "omega")
}

/// The value of a deterministic channel at `a`.
fn fun(c: &Channel<Label, Label>, a: &Label) -> Result<Label, LawError> {
    let row = c.row(a)?;
    match (row.support_len(), row.support().next()) {
        (1, Some(b)) => Ok(b.clone()),
        _ => Err(Error::InvalidDistribution(format!("row {row} is not a point mass")).into()),
    }
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join("; ")
}

fn pointwise<T: PartialEq + std::fmt::Display>(lhs: Vec<T>, rhs: Vec<T>) -> Comparison {
    Comparison {
        holds: lhs == rhs,
        lhs: join(&lhs),
        rhs: join(&rhs),
    }
}

fn tagged<T: crate::space::Outcome>(n: usize, d: Dist<Tagged<T>>) -> TaggedDist<T> {
    TaggedDist::new_unchecked(n, d)
}

fn kleisli_unit_left(inst: &Instance, lift: Lift) -> Result<Option<Comparison>, LawError> {
    let f = need(&inst.f, "f")?;
    let pts = inst.a.points();
    let lhs = pts.iter().map(|a| lift(f, &Dist::dirac(a.clone()))).collect();
    let rhs = pts.iter().map(|a| f.row(a).cloned()).collect::<Result<_, _>>()?;
    Ok(Some(pointwise(lhs, rhs)))
}

fn kleisli_unit_right(inst: &Instance, lift: Lift) -> Result<Option<Comparison>, LawError> {
    let omega = need(&inst.state, "omega")?;
    let unit = Channel::identity(inst.a.clone());
    Ok(Some(Comparison::of(&lift(&unit, omega), omega)))
}

fn kleisli_pure(inst: &Instance, lift: Lift) -> Result<Option<Comparison>, LawError> {
    let omega = need(&inst.state, "omega")?;
    let u = need(&inst.u, "u")?;
    let image = omega.iter().map(|(a, _)| fun(u, a)).collect::<Result<Vec<_>, _>>()?;
    let mapped = Dist::from_terms(image.into_iter().zip(omega.iter().map(|(_, p)| p.clone())))?;
    Ok(Some(Comparison::of(&lift(u, omega), &mapped)))
}

fn kleisli_map_after_bind(inst: &Instance, lift: Lift) -> Result<Option<Comparison>, LawError> {
    let omega = need(&inst.state, "omega")?;
    let f = need(&inst.f, "f")?;
    let v = need(&inst.v, "v")?;
    let c = need(&inst.c, "C")?;
    let vmap = |d: &Dist<Label>| -> Result<Dist<Label>, LawError> {
        let terms = d
            .iter()
            .map(|(b, p)| Ok((fun(v, b)?, p.clone())))
            .collect::<Result<Vec<_>, LawError>>()?;
        Ok(Dist::from_terms(terms)?)
    };
    let lhs = vmap(&lift(f, omega))?;
    let rows = inst
        .a
        .points()
        .iter()
        .map(|a| Ok((a.clone(), vmap(f.row(a)?)?)))
        .collect::<Result<_, LawError>>()?;
    let composite = Channel::new(inst.a.clone(), c.clone(), rows)?;
    Ok(Some(Comparison::of(&lhs, &lift(&composite, omega))))
}

fn kleisli_compose(inst: &Instance, lift: Lift) -> Result<Option<Comparison>, LawError> {
    let omega = need(&inst.state, "omega")?;
    let f = need(&inst.f, "f")?;
    let g = need(&inst.g, "g")?;
    let lhs = lift(g, &lift(f, omega));
    Ok(Some(Comparison::of(&lhs, &lift(&f.then(g)?, omega))))
}

fn kleisli_associative(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let f = need(&inst.f, "f")?;
    let g = need(&inst.g, "g")?;
    let k = need(&inst.k, "k")?;
    let lhs = f.then(g)?.then(k)?;
    let rhs = f.then(&g.then(k)?)?;
    Ok(Some(Comparison::of(&lhs, &rhs)))
}

fn kleisli_unital(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let f = need(&inst.f, "f")?;
    let before = Channel::identity(f.source().clone()).then(f)?;
    let after = f.then(&Channel::identity(f.target().clone()))?;
    Ok(Some(Comparison {
        holds: before == *f && after == *f,
        lhs: format!("{before} / {after}").replace('\n', "; "),
        rhs: f.to_string().replace('\n', "; "),
    }))
}

fn strength_first(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let omega = need(&inst.state, "omega")?;
    let a = need(&inst.point, "point")?;
    Ok(Some(Comparison::of(&omega.strength_left(a).first(), omega)))
}

fn strength_second(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let omega = need(&inst.state, "omega")?;
    let a = need(&inst.point, "point")?;
    Ok(Some(Comparison::of(&omega.strength_left(a).second(), &Dist::dirac(a.clone()))))
}

fn graph_first(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let f = need(&inst.f, "f")?;
    let gr = f.graph();
    let pts = inst.a.points();
    let lhs = pts.iter().map(|a| Ok(gr.row(a)?.first())).collect::<Result<_, Error>>()?;
    let rhs = pts.iter().map(|a| f.row(a).cloned()).collect::<Result<_, _>>()?;
    Ok(Some(pointwise(lhs, rhs)))
}

fn graph_second(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let f = need(&inst.f, "f")?;
    let gr = f.graph();
    let pts = inst.a.points();
    let lhs = pts.iter().map(|a| Ok(gr.row(a)?.second())).collect::<Result<_, Error>>()?;
    let rhs = pts.iter().map(|a| Dist::dirac(a.clone())).collect();
    Ok(Some(pointwise(lhs, rhs)))
}

fn norm_trivial_input(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let phi = need(&inst.state, "omega")?;
    let i = *need(&inst.tag, "tag")?;
    let n = inst.arity;
    let input = tagged(n, phi.map(|a| Tagged::new(i, a.clone())));
    let expected = tagged(n, Dist::dirac(Tagged::new(i, phi.clone())));
    Ok(Some(Comparison::of(&hyper_normalise(&input), &expected)))
}

fn norm_trivial_strength(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let rho = need(&inst.weights, "r")?;
    let a = need(&inst.point, "point")?;
    let n = inst.arity;
    let input = tagged(n, rho.map(|i| Tagged::new(*i, a.clone())));
    let expected = tagged(n, rho.map(|i| Tagged::new(*i, Dist::dirac(a.clone()))));
    Ok(Some(Comparison::of(&hyper_normalise(&input), &expected)))
}

fn norm_tags(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    Ok(Some(Comparison::of(&hyper_normalise(w).tags(), &w.tags())))
}

fn norm_underlying(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    Ok(Some(Comparison::of(&hyper_normalise(w).underlying(), &w.codiagonal())))
}

fn norm_idempotent(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let nw = hyper_normalise(joint(inst)?);
    let lhs = hyper_normalise(&nw);
    Ok(Some(Comparison::of(&lhs, &nw.map_values(|phi| Dist::dirac(phi.clone())))))
}

fn norm_flatten_inverse(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let nw = hyper_normalise(joint(inst)?);
    let lhs = HyperDist::flatten_values(&hyper_normalise(&nw));
    Ok(Some(Comparison::of(&lhs, &nw)))
}

fn norm_left_inverse(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    Ok(Some(Comparison::of(&hyper_normalise(w).strength_flatten(), w)))
}

fn norm_natural_map(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let u = need(&inst.u, "u")?;
    let image: std::collections::BTreeMap<Label, Label> = inst
        .a
        .points()
        .iter()
        .map(|a| Ok((a.clone(), fun(u, a)?)))
        .collect::<Result<_, LawError>>()?;
    let lhs = hyper_normalise(&w.map_values(|a| image[a].clone()));
    let rhs = hyper_normalise(w).map_values(|phi| phi.map(|a| image[a].clone()));
    Ok(Some(Comparison::of(&lhs, &rhs)))
}

fn norm_natural_bind(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let f = need(&inst.f, "f")?;
    let lhs = hyper_normalise(&w.bind_values(|a| f.row(a).expect("total").clone()));
    let rhs = hyper_normalise(w).map_values(|phi| f.apply(phi).expect("within source"));
    Ok(Some(Comparison::of(&lhs, &rhs)))
}

fn rectangle_rhs(n: usize, r: &Dist<usize>, phis: &[Dist<Label>]) -> HyperDist<Label> {
    tagged(n, r.map(|i| Tagged::new(*i, phis[*i].clone())))
}

fn sprinkled(n: usize, r: &Dist<usize>, phis: &[Dist<Label>]) -> Result<TaggedDist<Label>, Error> {
    let injected: Vec<_> = phis
        .iter()
        .enumerate()
        .map(|(i, phi)| phi.map(|a| Tagged::new(i, a.clone())))
        .collect();
    TaggedDist::new(n, sprinkle(r, &injected)?)
}

fn characterisation_rectangle(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let r = need(&inst.weights, "r")?;
    let n = inst.arity;
    let lhs = hyper_normalise(&sprinkled(n, r, &inst.components)?);
    Ok(Some(Comparison::of(&lhs, &rectangle_rhs(n, r, &inst.components))))
}

fn characterisation_table(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let n = w.arity();
    let r = w.tags();
    let preimage = |alt: &Dist<Label>| -> Result<Vec<Dist<Label>>, Error> {
        (0..n)
            .map(|i| {
                let block = w.block(i);
                if block.is_zero() {
                    Ok(alt.clone())
                } else {
                    nrm(&block)
                }
            })
            .collect()
    };
    let images = inst
        .components
        .iter()
        .map(|alt| {
            let phis = preimage(alt)?;
            let covers = sprinkled(n, &r, &phis)? == *w;
            Ok((rectangle_rhs(n, &r, &phis), covers))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let nw = hyper_normalise(w);
    let holds = !images.is_empty() && images.iter().all(|(img, covers)| *covers && *img == nw);
    Ok(Some(Comparison {
        holds,
        lhs: nw.to_string(),
        rhs: join(&images.iter().map(|(img, _)| img).collect::<Vec<_>>()),
    }))
}

fn naturality_retag(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let h = need(&inst.h, "h")?;
    let lhs = HyperDist::flatten_values(&hyper_normalise(&hyper_normalise(w).retag(h)?));
    let rhs = hyper_normalise(&w.retag(h)?);
    Ok(Some(Comparison::of(&lhs, &rhs)))
}

type Adapted = (Dist<usize>, Vec<Dist<Label>>);

/// The tag marginal and the normalised blocks, when every tag has mass.
fn adapted(w: &TaggedDist<Label>) -> Result<Option<Adapted>, LawError> {
    let marginal = w.tags();
    if marginal.support_len() != w.arity() {
        return Ok(None);
    }
    let f = (0..w.arity()).map(|i| nrm(&w.block(i))).collect::<Result<_, _>>()?;
    Ok(Some((marginal, f)))
}

fn hyper_point_twist(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let Some((marginal, f)) = adapted(w)? else {
        return Ok(None);
    };
    let lhs = hyper_normalise(w).dist().map(|x| (x.value.clone(), x.tag));
    let rhs = marginal.bind(|i| Dist::dirac((f[*i].clone(), *i)));
    Ok(Some(Comparison::of(&lhs, &rhs)))
}

fn hyper_point_disintegration(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let Some((marginal, f)) = adapted(w)? else {
        return Ok(None);
    };
    let rebuilt = tagged(w.arity(), marginal.bind(|i| f[*i].map(|a| Tagged::new(*i, a.clone()))));
    Ok(Some(Comparison::of(&rebuilt, w)))
}

fn distributive_naturality(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let f = need(&inst.f, "f")?;
    let n = w.arity();
    let lhs = hyper_normalise(w).map_values(|phi| f.apply(phi).expect("within source"));
    let pushed = f.copower_right(n).apply(w.dist())?;
    Ok(Some(Comparison::of(&lhs, &hyper_normalise(&tagged(n, pushed)))))
}

fn normalise_at(n: usize) -> impl Fn(&Dist<Tagged<Label>>) -> Dist<Tagged<Dist<Label>>> {
    move |d| hyper_normalise(&tagged(n, d.clone())).into_dist()
}

fn distributive_comult_left(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let n = w.arity();
    let delta = Dist::dirac(Dist::dirac(w.dist().clone()));
    let lifted_n = delta.bind(|xi| Dist::dirac(xi.bind(normalise_at(n))));
    let lhs = lifted_n.bind(|d| hyper_normalise(&tagged(n, d.clone())).into_dist());
    let rhs = normalise_at(n)(w.dist()).bind(|x| Dist::dirac(Tagged::new(x.tag, Dist::dirac(x.value.clone()))));
    Ok(Some(Comparison::of(&lhs, &rhs)))
}

fn distributive_comult_right(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let n = w.arity();
    let doubled = w.dist().map(|x| Tagged::new(x.tag, Tagged::new(x.tag, x.value.clone())));
    let lifted = Dist::dirac(doubled);
    let normalised = lifted.bind(|xi| hyper_normalise(&tagged(n, xi.clone())).into_dist());
    let lhs = normalised.bind(|x| normalise_at(n)(&x.value).map(|y| Tagged::new(x.tag, y.clone())));
    let rhs = normalise_at(n)(w.dist()).map(|x| Tagged::new(x.tag, Tagged::new(x.tag, x.value.clone())));
    Ok(Some(Comparison::of(&lhs, &rhs)))
}

fn distributive_counit(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let lhs = normalise_at(w.arity())(w.dist()).bind(|x| x.value.map(|a| Tagged::new(x.tag, a.clone())));
    Ok(Some(Comparison::of(&lhs, w.dist())))
}

fn distributive_two_counit(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let counit = normalise_at(w.arity())(w.dist()).bind(|x| Dist::dirac(x.value.clone()));
    let lhs = counit.bind(Dist::clone);
    let rhs = Dist::dirac(w.codiagonal()).bind(Dist::clone);
    Ok(Some(Comparison::of(&lhs, &rhs)))
}

fn distributive_counit_rectangle(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let lhs = normalise_at(w.arity())(w.dist()).bind(|x| Dist::dirac(x.value.clone()));
    Ok(Some(Comparison::of(&lhs, &Dist::dirac(w.codiagonal()))))
}

fn non_affine_values(_: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let report = fixtures::run("non-affine").expect("registered fixture")?;
    let na = fixtures::non_affine();
    Ok(Some(Comparison {
        holds: report.exact(),
        lhs: na.mixed_outputs.to_string(),
        rhs: na.output_of_mix.to_string(),
    }))
}

fn mix<T: crate::space::Outcome>(lambda: &Prob, x: &TaggedDist<T>, y: &TaggedDist<T>) -> Result<TaggedDist<T>, LawError> {
    let rest = lambda.complement().ok_or(Error::NotAProbability {
        label: "lambda".into(),
        value: lambda.clone(),
    })?;
    let terms = [(x.dist().clone(), lambda.clone()), (y.dist().clone(), rest)];
    Ok(tagged(x.arity(), Dist::from_terms(terms)?.flatten()))
}

fn non_affine_mix(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let w2 = need(&inst.other, "omega2")?;
    let lambda = need(&inst.lambda, "lambda")?;
    let lhs = mix(lambda, &hyper_normalise(w), &hyper_normalise(w2))?;
    let rhs = hyper_normalise(&mix(lambda, w, w2)?);
    Ok(Some(Comparison::of(&lhs, &rhs)))
}

fn non_affine_fixed_blocks(inst: &Instance, lift: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    let w2 = need(&inst.other, "omega2")?;
    for i in 0..w.arity() {
        let (b1, b2) = (w.block(i), w2.block(i));
        if !b1.is_zero() && !b2.is_zero() && nrm(&b1)? != nrm(&b2)? {
            return Ok(None);
        }
    }
    non_affine_mix(inst, lift)
}

fn non_affine_unary(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    if w.arity() != 1 {
        return Ok(None);
    }
    let rhs = tagged(1, Dist::dirac(Tagged::new(0, w.codiagonal())));
    Ok(Some(Comparison::of(&hyper_normalise(w), &rhs)))
}

fn disintegration_joint(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let w = joint(inst)?;
    match disintegrate(w, &inst.a) {
        Err(Error::IncompleteSupport { .. }) => Ok(None),
        Err(e) => Err(e.into()),
        Ok(d) => Ok(Some(Comparison::of(&joint_from_conditional(&d.conditional, &d.marginal)?, w))),
    }
}

fn disintegration_conditional(inst: &Instance, _: Lift) -> Result<Option<Comparison>, LawError> {
    let c = need(&inst.cond, "c")?;
    let omega = need(&inst.state, "omega")?;
    if !omega.has_full_support(&inst.a) {
        return Ok(None);
    }
    let d = disintegrate(&joint_from_conditional(c.channel(), omega)?, &inst.a)?;
    let lhs = format!("{}; {}", d.marginal, d.conditional.to_string().replace('\n', "; "));
    let rhs = format!("{}; {}", omega, c.channel().to_string().replace('\n', "; "));
    Ok(Some(Comparison {
        holds: d.marginal == *omega && d.conditional == *c.channel(),
        lhs,
        rhs,
    }))
}

/// A block of instances addressed by index.
pub(crate) struct Family {
    pub count: usize,
    pub make: Box<dyn Fn(usize) -> Instance + Send + Sync>,
}

fn stream(kind: u64, k: usize, n: usize, idx: usize) -> u64 {
    (kind << 56) ^ ((k as u64) << 48) ^ ((n as u64) << 40) ^ idx as u64
}

fn sizes(cfg: &CheckConfig) -> RangeInclusive<usize> {
    1..=cfg.max_space_size
}

fn numeric_grid(n: usize, den: u64) -> Vec<Dist<usize>> {
    grid(Space::numeric(n).points(), den)
}

/// States over `A` with sampled channels and functions around them.
pub(crate) fn states(cfg: &CheckConfig) -> Vec<Family> {
    sizes(cfg)
        .map(|k| {
            let a = space_a(k);
            let g = Arc::new(grid(a.points(), cfg.max_denominator));
            let (samples, seed, max, den) = (cfg.channel_samples, cfg.seed, cfg.max_space_size, cfg.max_denominator);
            Family {
                count: g.len() * samples,
                make: Box::new(move |idx| {
                    let mut r = rng(seed, stream(1, k, 0, idx));
                    let b = space_b(r.gen_range(1..=max));
                    let c = space_c(r.gen_range(1..=max));
                    let mut inst = Instance::over(a.clone());
                    inst.state = Some(g[idx / samples].clone());
                    inst.f = Some(random_channel(&mut r, &a, &b, den));
                    inst.g = Some(random_channel(&mut r, &b, &c, den));
                    inst.u = Some(random_function(&mut r, &a, &b));
                    inst.v = Some(random_function(&mut r, &b, &c));
                    inst.k = Some(random_channel(&mut r, &c, &a, den));
                    inst.point = a.points().choose(&mut r).cloned();
                    inst.b = Some(b);
                    inst.c = Some(c);
                    inst
                }),
            }
        })
        .collect()
}

/// Pairs of a state over `A` and a tag below `n`.
pub(crate) fn tagged_states(cfg: &CheckConfig) -> Vec<Family> {
    let mut out = Vec::new();
    for k in sizes(cfg) {
        for n in 1..=cfg.max_arity {
            let a = space_a(k);
            let g = grid(a.points(), cfg.max_denominator);
            out.push(Family {
                count: g.len() * n,
                make: Box::new(move |idx| {
                    let mut inst = Instance::over(a.clone());
                    inst.arity = n;
                    inst.state = Some(g[idx / n].clone());
                    inst.tag = Some(idx % n);
                    inst
                }),
            });
        }
    }
    out
}

/// Pairs of weights over `n` and a point of `A`.
pub(crate) fn weighted_points(cfg: &CheckConfig) -> Vec<Family> {
    let mut out = Vec::new();
    for k in sizes(cfg) {
        for n in 1..=cfg.max_arity {
            let a = space_a(k);
            let g = numeric_grid(n, cfg.max_denominator);
            out.push(Family {
                count: g.len() * k,
                make: Box::new(move |idx| {
                    let mut inst = Instance::over(a.clone());
                    inst.arity = n;
                    inst.weights = Some(g[idx / k].clone());
                    inst.point = Some(a.points()[idx % k].clone());
                    inst
                }),
            });
        }
    }
    out
}

fn joints_in(cfg: &CheckConfig, arities: RangeInclusive<usize>, alternatives: bool) -> Vec<Family> {
    let mut out = Vec::new();
    for k in sizes(cfg) {
        for n in arities.clone() {
            let a = space_a(k);
            let g = grid(a.copower(n).points(), cfg.max_denominator);
            let alts = if alternatives {
                let ga = grid(a.points(), cfg.max_denominator);
                vec![ga[0].clone(), ga[ga.len() - 1].clone()]
            } else {
                Vec::new()
            };
            let (seed, max, max_n, den) = (cfg.seed, cfg.max_space_size, cfg.max_arity, cfg.max_denominator);
            out.push(Family {
                count: g.len(),
                make: Box::new(move |idx| {
                    let mut r = rng(seed, stream(2, k, n, idx));
                    let b = space_b(r.gen_range(1..=max));
                    let m = r.gen_range(1..=max_n);
                    let mut inst = Instance::over(a.clone());
                    inst.arity = n;
                    inst.joint = Some(tagged(n, g[idx].clone()));
                    inst.components = alts.clone();
                    inst.f = Some(random_channel(&mut r, &a, &b, den));
                    inst.u = Some(random_function(&mut r, &a, &b));
                    inst.h = Some(random_channel(&mut r, &Space::numeric(n), &Space::numeric(m), den));
                    inst.b = Some(b);
                    inst
                }),
            });
        }
    }
    out
}

/// Joint states over `n·A` for arities from `min_arity`.
pub(crate) fn joints(cfg: &CheckConfig, min_arity: usize) -> Vec<Family> {
    joints_in(cfg, min_arity..=cfg.max_arity, false)
}

pub(crate) fn unary_joints(cfg: &CheckConfig) -> Vec<Family> {
    joints_in(cfg, 1..=1, false)
}

/// Joint states with two alternative components for the empty blocks.
pub(crate) fn tables(cfg: &CheckConfig) -> Vec<Family> {
    joints_in(cfg, 1..=cfg.max_arity, true)
}

/// Weights `r` over `n` with one state over `A` per tag.
pub(crate) fn rectangles(cfg: &CheckConfig) -> Vec<Family> {
    let mut out = Vec::new();
    for k in sizes(cfg) {
        for n in 1..=cfg.max_arity {
            let a = space_a(k);
            let gn = numeric_grid(n, cfg.max_denominator);
            let ga = grid(a.points(), cfg.max_denominator);
            let count = gn.len() * ga.len().pow(n as u32);
            out.push(Family {
                count,
                make: Box::new(move |idx| {
                    let mut inst = Instance::over(a.clone());
                    inst.arity = n;
                    inst.weights = Some(gn[idx % gn.len()].clone());
                    let mut rest = idx / gn.len();
                    inst.components = (0..n)
                        .map(|_| {
                            let d = ga[rest % ga.len()].clone();
                            rest /= ga.len();
                            d
                        })
                        .collect();
                    inst
                }),
            });
        }
    }
    out
}

/// Every conditional `A ⊸ n` with grid rows, paired with full-support states.
pub(crate) fn conditionals(cfg: &CheckConfig) -> Vec<Family> {
    let mut out = Vec::new();
    for k in sizes(cfg) {
        for n in 1..=cfg.max_arity {
            let a = space_a(k);
            let rows = numeric_grid(n, cfg.max_denominator);
            let full: Vec<_> = grid(a.points(), cfg.max_denominator)
                .into_iter()
                .filter(|d| d.has_full_support(&a))
                .collect();
            let count = rows.len().pow(k as u32) * full.len();
            out.push(Family {
                count,
                make: Box::new(move |idx| {
                    let mut inst = Instance::over(a.clone());
                    inst.arity = n;
                    inst.state = Some(full[idx % full.len()].clone());
                    let mut rest = idx / full.len();
                    let choice: Vec<usize> = (0..k)
                        .map(|_| {
                            let c = rest % rows.len();
                            rest /= rows.len();
                            c
                        })
                        .collect();
                    let channel = Channel::from_fn_unchecked(a.clone(), Space::numeric(n), |x| {
                        rows[choice[x.index()]].clone()
                    });
                    inst.cond = Some(Test::new(channel));
                    inst
                }),
            });
        }
    }
    out
}

/// A single input-free instance.
pub(crate) fn single() -> Vec<Family> {
    vec![Family {
        count: 1,
        make: Box::new(|_| Instance::over(space_a(2))),
    }]
}

/// `¼κ₀a` against `¾κ₀b` at arity 2.
pub(crate) fn mixing() -> Vec<Family> {
    vec![Family {
        count: 1,
        make: Box::new(|_| {
            let a = space_a(2);
            let point = |l: &str| {
                let x = Tagged::new(0, a.label(l).expect("generated label"));
                tagged(2, Dist::dirac(x))
            };
            let mut inst = Instance::over(a.clone());
            inst.arity = 2;
            inst.joint = Some(point("a"));
            inst.other = Some(point("b"));
            inst.lambda = Some(q(1, 4));
            inst
        }),
    }]
}

/// Pairs of joint states and a mixing weight.
pub(crate) fn mixtures(cfg: &CheckConfig) -> Vec<Family> {
    let lambdas = [q(1, 4), q(1, 2), q(3, 4)];
    let mut out = Vec::new();
    for k in sizes(cfg) {
        for n in 1..=cfg.max_arity {
            let a = space_a(k);
            let g = grid(a.copower(n).points(), cfg.max_denominator);
            let lambdas = lambdas.clone();
            out.push(Family {
                count: g.len() * g.len() * lambdas.len(),
                make: Box::new(move |idx| {
                    let mut inst = Instance::over(a.clone());
                    inst.arity = n;
                    inst.lambda = Some(lambdas[idx % lambdas.len()].clone());
                    let rest = idx / lambdas.len();
                    inst.joint = Some(tagged(n, g[rest % g.len()].clone()));
                    inst.other = Some(tagged(n, g[rest / g.len()].clone()));
                    inst
                }),
            });
        }
    }
    out
}
