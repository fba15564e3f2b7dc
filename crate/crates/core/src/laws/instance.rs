//! A single law instance and its workspace form.

use crate::channel::Channel;
use crate::dist::Dist;
use crate::error::ParseError;
use crate::format::{from_numeric_channel, from_numeric_dist, to_numeric_channel, to_numeric_dist, Typed, Workspace};
use crate::predicates::Test;
use crate::prob::Prob;
use crate::space::{Label, Space};
use crate::tagged::TaggedDist;

/// The inputs of one law evaluation; each law reads the fields it needs.
///
/// In workspace form the fields are named `A`, `B`, `C` (spaces), `omega`
/// (state and joint), `omega2`, `r`, `phi0`..., `f`, `g`, `u`, `v`, `k`, `h`
/// (channels), `c` (test), and the params `tag`, `point`, `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub a: Space,
    pub b: Option<Space>,
    pub c: Option<Space>,
    pub state: Option<Dist<Label>>,
    pub joint: Option<TaggedDist<Label>>,
    pub other: Option<TaggedDist<Label>>,
    pub weights: Option<Dist<usize>>,
    pub arity: usize,
    pub components: Vec<Dist<Label>>,
    /// A channel `A ⊸ B`.
    pub f: Option<Channel<Label, Label>>,
    /// A channel `B ⊸ C`.
    pub g: Option<Channel<Label, Label>>,
    /// A function `A → B`.
    pub u: Option<Channel<Label, Label>>,
    /// A function `B → C`.
    pub v: Option<Channel<Label, Label>>,
    /// A channel `C ⊸ A`.
    pub k: Option<Channel<Label, Label>>,
    /// A channel `n ⊸ m`.
    pub h: Option<Channel<usize, usize>>,
    /// A conditional `A ⊸ n`.
    pub cond: Option<Test<Label>>,
    pub tag: Option<usize>,
    pub point: Option<Label>,
    pub lambda: Option<Prob>,
}

impl Instance {
    pub fn over(a: Space) -> Self {
        Instance {
            a,
            b: None,
            c: None,
            state: None,
            joint: None,
            other: None,
            weights: None,
            arity: 0,
            components: Vec::new(),
            f: None,
            g: None,
            u: None,
            v: None,
            k: None,
            h: None,
            cond: None,
            tag: None,
            point: None,
            lambda: None,
        }
    }

    /// The workspace form, with the law id stored in `params.law`.
    pub fn to_workspace(&self, law: &str) -> Workspace {
        let mut ws = Workspace::new();
        ws.params.insert("law".into(), law.into());
        ws.params.insert("arity".into(), self.arity.to_string());
        ws.declare(&self.a);
        for s in [&self.b, &self.c].into_iter().flatten() {
            ws.declare(s);
        }
        if let Some(d) = &self.state {
            ws.dists.insert("omega".into(), Typed::new(self.a.clone(), d.clone()));
        }
        if let Some(r) = &self.weights {
            let d = from_numeric_dist(r, self.arity).expect("weights over n");
            ws.dists.insert("r".into(), Typed::new(Space::numeric_labels(self.arity), d));
        }
        for (i, phi) in self.components.iter().enumerate() {
            ws.dists.insert(format!("phi{i}"), Typed::new(self.a.clone(), phi.clone()));
        }
        if let Some(j) = &self.joint {
            ws.joints.insert("omega".into(), Typed::new(self.a.clone(), j.clone()));
        }
        if let Some(j) = &self.other {
            ws.joints.insert("omega2".into(), Typed::new(self.a.clone(), j.clone()));
        }
        for (name, c) in [("f", &self.f), ("g", &self.g), ("u", &self.u), ("v", &self.v), ("k", &self.k)] {
            if let Some(c) = c {
                ws.channels.insert(name.into(), c.clone());
            }
        }
        if let Some(h) = &self.h {
            ws.channels.insert("h".into(), from_numeric_channel(h).expect("numeric channel"));
        }
        if let Some(c) = &self.cond {
            ws.tests.insert("c".into(), c.clone());
        }
        if let Some(t) = self.tag {
            ws.params.insert("tag".into(), t.to_string());
        }
        if let Some(p) = &self.point {
            ws.params.insert("point".into(), p.name().into());
        }
        if let Some(l) = &self.lambda {
            ws.params.insert("lambda".into(), l.to_string());
        }
        ws
    }

    /// Reads an instance back from its workspace form.
    pub fn from_workspace(ws: &Workspace) -> Result<Self, ParseError> {
        let bad = |what: &str, e: &dyn std::fmt::Display| ParseError::Invalid {
            object: what.into(),
            message: e.to_string(),
        };
        let a = ws.space("A")?;
        let mut inst = Instance::over(a.clone());
        inst.b = ws.space("B").ok();
        inst.c = ws.space("C").ok();
        inst.arity = match ws.params.get("arity") {
            Some(n) => n.parse().map_err(|e| bad("params.arity", &e))?,
            None => 0,
        };
        inst.state = ws.dists.get("omega").map(|d| d.value.clone());
        if let Some(r) = ws.dists.get("r") {
            inst.weights = Some(to_numeric_dist(&r.value).map_err(|e| bad("dists.r", &e))?);
        }
        inst.components = (0..)
            .map_while(|i| ws.dists.get(&format!("phi{i}")))
            .map(|d| d.value.clone())
            .collect();
        inst.joint = ws.joints.get("omega").map(|j| j.value.clone());
        inst.other = ws.joints.get("omega2").map(|j| j.value.clone());
        inst.f = ws.channels.get("f").cloned();
        inst.g = ws.channels.get("g").cloned();
        inst.u = ws.channels.get("u").cloned();
        inst.v = ws.channels.get("v").cloned();
        inst.k = ws.channels.get("k").cloned();
        if let Some(h) = ws.channels.get("h") {
            inst.h = Some(to_numeric_channel(h).map_err(|e| bad("channels.h", &e))?);
        }
        inst.cond = ws.tests.get("c").cloned();
        if let Some(t) = ws.params.get("tag") {
            inst.tag = Some(t.parse().map_err(|e| bad("params.tag", &e))?);
        }
        if let Some(p) = ws.params.get("point") {
            inst.point = Some(a.label(p).map_err(|e| bad("params.point", &e))?);
        }
        if let Some(l) = ws.params.get("lambda") {
            inst.lambda = Some(l.parse().map_err(|e: ParseError| bad("params.lambda", &e))?);
        }
        Ok(inst)
    }
}
