//! The JSON workspace document.
//!
//! A workspace names spaces and the values declared over them. Every
//! object is validated on load; rendering is deterministic, and loading a
//! rendered workspace gives back an equal workspace.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::channel::Channel;
use crate::dist::{Dist, SubDist};
use crate::error::{Error, ParseError};
use crate::predicates::{Predicate, Test};
use crate::prob::Prob;
use crate::refinement::RefinementWitness;
use crate::space::{Label, Outcome, Space, Tagged};
use crate::tagged::{HyperDist, TaggedDist};

use super::ket::{parse_hyper_point, parse_witness_point};

/// An exact rational in a document: a `"p/q"` string or a nonnegative integer.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Rat(Prob);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a \"p/q\" string or a nonnegative integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                v.parse().map(Rat).map_err(|e: ParseError| E::custom(e))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat(Prob::from(v)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                u64::try_from(v)
                    .map(|v| Rat(Prob::from(v)))
                    .map_err(|_| E::custom(format!("negative rational {v}")))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rat, E> {
                Err(E::custom(format!("inexact number {v}; write rationals as \"p/q\"")))
            }
        }

        d.deserialize_any(RatVisitor)
    }
}

/// A reference to a space: a declared name or an inline numeric space.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SpaceRef {
    Named(String),
    Numeric(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawSpace {
    Labels(Vec<String>),
    Numeric(usize),
}

type Masses = BTreeMap<String, Rat>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDist {
    space: SpaceRef,
    mass: Masses,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    source: SpaceRef,
    target: SpaceRef,
    rows: BTreeMap<String, Masses>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTest {
    space: SpaceRef,
    arity: usize,
    rows: BTreeMap<String, Masses>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPredicate {
    space: SpaceRef,
    values: Masses,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    space: SpaceRef,
    arity: usize,
    mass: Vec<((usize, String), Rat)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHyper {
    space: SpaceRef,
    arity: usize,
    mass: Masses,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWitness {
    space: SpaceRef,
    outer_arity: usize,
    inner_arity: usize,
    mass: Masses,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawWorkspace {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    spaces: BTreeMap<String, RawSpace>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    dists: BTreeMap<String, RawDist>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    subdists: BTreeMap<String, RawDist>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    channels: BTreeMap<String, RawChannel>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    tests: BTreeMap<String, RawTest>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    predicates: BTreeMap<String, RawPredicate>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    joints: BTreeMap<String, RawJoint>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    hyperdists: BTreeMap<String, RawHyper>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    witnesses: BTreeMap<String, RawWitness>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, String>,
}

/// A declared space and whether it was declared by size alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDecl {
    pub space: Space,
    pub numeric: bool,
}

/// A value together with the space its points live in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typed<T> {
    pub space: Space,
    pub value: T,
}

impl<T> Typed<T> {
    pub fn new(space: Space, value: T) -> Self {
        Typed { space, value }
    }
}

/// A validated workspace.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Workspace {
    pub spaces: BTreeMap<String, SpaceDecl>,
    pub dists: BTreeMap<String, Typed<Dist<Label>>>,
    pub subdists: BTreeMap<String, Typed<SubDist<Label>>>,
    pub channels: BTreeMap<String, Channel<Label, Label>>,
    pub tests: BTreeMap<String, Test<Label>>,
    pub predicates: BTreeMap<String, Predicate<Label>>,
    pub joints: BTreeMap<String, Typed<TaggedDist<Label>>>,
    pub hyperdists: BTreeMap<String, Typed<HyperDist<Label>>>,
    pub witnesses: BTreeMap<String, Typed<RefinementWitness<Label>>>,
    /// Free-form named scalars.
    pub params: BTreeMap<String, String>,
}

fn is_numeral(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn invalid(object: String, e: impl fmt::Display) -> ParseError {
    ParseError::Invalid {
        object,
        message: e.to_string(),
    }
}

fn masses(space: &Space, raw: &Masses) -> Result<Vec<(Label, Prob)>, Error> {
    raw.iter()
        .map(|(k, v)| Ok((space.label(k)?, v.0.clone())))
        .collect()
}

fn numeric_masses(arity: usize, raw: &Masses) -> Result<Vec<(usize, Prob)>, Error> {
    raw.iter()
        .map(|(k, v)| {
            let i = k
                .parse::<usize>()
                .ok()
                .filter(|i| *i < arity && is_numeral(k))
                .ok_or_else(|| Error::UnknownLabel {
                    label: k.clone(),
                    space: arity.to_string(),
                })?;
            Ok((i, v.0.clone()))
        })
        .collect()
}

fn raw_masses<'a, T: Outcome + 'a>(terms: impl Iterator<Item = (&'a T, &'a Prob)>, key: impl Fn(&T) -> String) -> Masses {
    terms.map(|(x, p)| (key(x), Rat(p.clone()))).collect()
}

impl Workspace {
    pub fn new() -> Self {
        Workspace::default()
    }

    /// Parses and validates a JSON workspace.
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let raw: RawWorkspace = serde_json::from_str(text).map_err(|e| ParseError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Workspace::from_raw(raw)
    }

    /// Renders as pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("workspace serialises");
        s.push('\n');
        s
    }

    /// Declares a label space under its own name.
    pub fn declare(&mut self, space: &Space) {
        self.spaces.insert(
            space.name().to_string(),
            SpaceDecl {
                space: space.clone(),
                numeric: false,
            },
        );
    }

    /// Resolves a space name; a numeral denotes the numeric space of that size.
    pub fn space(&self, name: &str) -> Result<Space, ParseError> {
        if let Some(d) = self.spaces.get(name) {
            return Ok(d.space.clone());
        }
        if is_numeral(name) {
            let n = name
                .parse()
                .map_err(|e| invalid(format!("space `{name}`"), e))?;
            return Ok(Space::numeric_labels(n));
        }
        Err(invalid(format!("space `{name}`"), "undeclared space"))
    }

    fn resolve(&self, r: &SpaceRef, object: &str) -> Result<Space, ParseError> {
        match r {
            SpaceRef::Named(n) => self.space(n).map_err(|_| invalid(object.to_string(), format!("undeclared space `{n}`"))),
            SpaceRef::Numeric(n) => Ok(Space::numeric_labels(*n)),
        }
    }

    fn reference(&self, space: &Space) -> SpaceRef {
        let name = space.name();
        if !self.spaces.contains_key(name) && is_numeral(name) {
            SpaceRef::Numeric(space.len())
        } else {
            SpaceRef::Named(name.to_string())
        }
    }

    fn from_raw(raw: RawWorkspace) -> Result<Self, ParseError> {
        let mut ws = Workspace::new();
        for (name, decl) in raw.spaces {
            let object = format!("spaces.{name}");
            if name.is_empty() || is_numeral(&name) {
                return Err(invalid(object, "space names must be nonempty and not numerals"));
            }
            let (space, numeric) = match decl {
                RawSpace::Labels(labels) => (Space::labels(&name, &labels).map_err(|e| invalid(object, e))?, false),
                RawSpace::Numeric(n) => {
                    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
                    (Space::labels(&name, &names).expect("numerals are valid labels"), true)
                }
            };
            ws.spaces.insert(name, SpaceDecl { space, numeric });
        }

        for (name, d) in &raw.dists {
            let object = format!("dists.{name}");
            let space = ws.resolve(&d.space, &object)?;
            let value = masses(&space, &d.mass)
                .and_then(Dist::from_terms)
                .map_err(|e| invalid(object, e))?;
            ws.dists.insert(name.clone(), Typed::new(space, value));
        }
        for (name, d) in &raw.subdists {
            let object = format!("subdists.{name}");
            let space = ws.resolve(&d.space, &object)?;
            let value = masses(&space, &d.mass)
                .and_then(SubDist::from_terms)
                .map_err(|e| invalid(object, e))?;
            ws.subdists.insert(name.clone(), Typed::new(space, value));
        }
        for (name, c) in &raw.channels {
            let object = format!("channels.{name}");
            let source = ws.resolve(&c.source, &object)?;
            let target = ws.resolve(&c.target, &object)?;
            let channel = c
                .rows
                .iter()
                .map(|(a, row)| Ok((source.label(a)?, Dist::from_terms(masses(&target, row)?)?)))
                .collect::<Result<BTreeMap<_, _>, Error>>()
                .and_then(|rows| Channel::new(source, target, rows))
                .map_err(|e| invalid(object, e))?;
            ws.channels.insert(name.clone(), channel);
        }
        for (name, t) in &raw.tests {
            let object = format!("tests.{name}");
            let space = ws.resolve(&t.space, &object)?;
            let test = t
                .rows
                .iter()
                .map(|(a, row)| Ok((space.label(a)?, Dist::from_terms(numeric_masses(t.arity, row)?)?)))
                .collect::<Result<BTreeMap<_, _>, Error>>()
                .and_then(|rows| Channel::new(space, Space::numeric(t.arity), rows))
                .map_err(|e| invalid(object, e))?;
            ws.tests.insert(name.clone(), Test::new(test));
        }
        for (name, p) in &raw.predicates {
            let object = format!("predicates.{name}");
            let space = ws.resolve(&p.space, &object)?;
            let pred = masses(&space, &p.values)
                .and_then(|v| Predicate::new(space, v.into_iter().collect()))
                .map_err(|e| invalid(object, e))?;
            ws.predicates.insert(name.clone(), pred);
        }
        for (name, j) in &raw.joints {
            let object = format!("joints.{name}");
            let space = ws.resolve(&j.space, &object)?;
            let value = j
                .mass
                .iter()
                .map(|((i, a), p)| Ok((Tagged::new(*i, space.label(a)?), p.0.clone())))
                .collect::<Result<Vec<_>, Error>>()
                .and_then(|terms| TaggedDist::from_terms(j.arity, terms))
                .map_err(|e| invalid(object, e))?;
            ws.joints.insert(name.clone(), Typed::new(space, value));
        }
        for (name, h) in &raw.hyperdists {
            let object = format!("hyperdists.{name}");
            let space = ws.resolve(&h.space, &object)?;
            let mut terms = Vec::with_capacity(h.mass.len());
            for (key, p) in &h.mass {
                let x = parse_hyper_point(key, &space).map_err(|e| invalid(object.clone(), e))?;
                terms.push((x, p.0.clone()));
            }
            let value = TaggedDist::from_terms(h.arity, terms).map_err(|e| invalid(object, e))?;
            ws.hyperdists.insert(name.clone(), Typed::new(space, value));
        }
        for (name, w) in &raw.witnesses {
            let object = format!("witnesses.{name}");
            let space = ws.resolve(&w.space, &object)?;
            let mut terms = Vec::with_capacity(w.mass.len());
            for (key, p) in &w.mass {
                let x = parse_witness_point(key, &space).map_err(|e| invalid(object.clone(), e))?;
                terms.push((x, p.0.clone()));
            }
            let value = TaggedDist::from_terms(w.outer_arity, terms)
                .and_then(|omega| RefinementWitness::new(w.inner_arity, omega))
                .map_err(|e| invalid(object, e))?;
            ws.witnesses.insert(name.clone(), Typed::new(space, value));
        }
        ws.params = raw.params;
        Ok(ws)
    }

    fn to_raw(&self) -> RawWorkspace {
        let label = |l: &Label| l.name().to_string();
        let mut raw = RawWorkspace {
            params: self.params.clone(),
            ..RawWorkspace::default()
        };
        for (name, d) in &self.spaces {
            let decl = if d.numeric {
                RawSpace::Numeric(d.space.len())
            } else {
                RawSpace::Labels(d.space.points().iter().map(label).collect())
            };
            raw.spaces.insert(name.clone(), decl);
        }
        for (name, d) in &self.dists {
            raw.dists.insert(
                name.clone(),
                RawDist {
                    space: self.reference(&d.space),
                    mass: raw_masses(d.value.iter(), label),
                },
            );
        }
        for (name, d) in &self.subdists {
            raw.subdists.insert(
                name.clone(),
                RawDist {
                    space: self.reference(&d.space),
                    mass: raw_masses(d.value.iter(), label),
                },
            );
        }
        for (name, c) in &self.channels {
            raw.channels.insert(
                name.clone(),
                RawChannel {
                    source: self.reference(c.source()),
                    target: self.reference(c.target()),
                    rows: c
                        .rows()
                        .map(|(a, row)| (label(a), raw_masses(row.iter(), label)))
                        .collect(),
                },
            );
        }
        for (name, t) in &self.tests {
            raw.tests.insert(
                name.clone(),
                RawTest {
                    space: self.reference(t.space()),
                    arity: t.arity(),
                    rows: t
                        .channel()
                        .rows()
                        .map(|(a, row)| (label(a), raw_masses(row.iter(), |i| i.to_string())))
                        .collect(),
                },
            );
        }
        for (name, p) in &self.predicates {
            raw.predicates.insert(
                name.clone(),
                RawPredicate {
                    space: self.reference(p.space()),
                    values: raw_masses(p.values(), label),
                },
            );
        }
        for (name, j) in &self.joints {
            raw.joints.insert(
                name.clone(),
                RawJoint {
                    space: self.reference(&j.space),
                    arity: j.value.arity(),
                    mass: j
                        .value
                        .iter()
                        .map(|(x, p)| ((x.tag, label(&x.value)), Rat(p.clone())))
                        .collect(),
                },
            );
        }
        for (name, h) in &self.hyperdists {
            raw.hyperdists.insert(
                name.clone(),
                RawHyper {
                    space: self.reference(&h.space),
                    arity: h.value.arity(),
                    mass: raw_masses(h.value.iter(), Outcome::ket),
                },
            );
        }
        for (name, w) in &self.witnesses {
            raw.witnesses.insert(
                name.clone(),
                RawWitness {
                    space: self.reference(&w.space),
                    outer_arity: w.value.outer_arity(),
                    inner_arity: w.value.inner_arity(),
                    mass: raw_masses(w.value.omega().iter(), Outcome::ket),
                },
            );
        }
        raw
    }
}
