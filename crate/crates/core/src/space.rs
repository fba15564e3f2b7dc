//! Finite sample spaces and the outcome types that live in them.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Write};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Anything that can be an outcome of a distribution.
///
/// The `Ord` instance fixes the canonical term order of every distribution
/// over the type; `write_ket` renders a single outcome inside `|...>`.
pub trait Outcome: Clone + Ord + Hash + Debug + Send + Sync + 'static {
    fn write_ket(&self, out: &mut String);

    fn ket(&self) -> String {
        let mut s = String::new();
        self.write_ket(&mut s);
        s
    }
}

/// Characters that may not appear in a label name; they are ket syntax.
pub const RESERVED_LABEL_CHARS: &[char] = &['|', '<', '>', '(', ')', '+', ',', '"', '\\', '/', '[', ']', '{', '}', ':'];

/// An opaque label of a declared space.
///
/// Labels order by their declaration index, so distributions over a
/// declared space list their terms in declaration order.
#[derive(Clone)]
pub struct Label {
    index: u32,
    name: Arc<str>,
}

impl Label {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> usize {
        self.index as usize
    }
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && self.name == other.name
    }
}

impl Eq for Label {}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index
            .cmp(&other.index)
            .then_with(|| self.name.cmp(&other.name))
    }
}

impl Hash for Label {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.index.hash(state);
        self.name.hash(state);
    }
}

impl Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Outcome for Label {
    fn write_ket(&self, out: &mut String) {
        out.push_str(&self.name);
    }
}

impl Outcome for usize {
    fn write_ket(&self, out: &mut String) {
        let _ = write!(out, "{self}");
    }
}

/// The element `κ_tag(value)` of a copower `n·A`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tagged<T> {
    pub tag: usize,
    pub value: T,
}

impl<T> Tagged<T> {
    pub fn new(tag: usize, value: T) -> Self {
        Tagged { tag, value }
    }
}

impl<T: Debug> Debug for Tagged<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k{}({:?})", self.tag, self.value)
    }
}

impl<T: Outcome> Outcome for Tagged<T> {
    fn write_ket(&self, out: &mut String) {
        let _ = write!(out, "k{}(", self.tag);
        self.value.write_ket(out);
        out.push(')');
    }
}

impl<A: Outcome, B: Outcome> Outcome for (A, B) {
    fn write_ket(&self, out: &mut String) {
        out.push('(');
        self.0.write_ket(out);
        out.push(',');
        self.1.write_ket(out);
        out.push(')');
    }
}

/// Binary coproduct `A + B`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sum<A, B> {
    Inl(A),
    Inr(B),
}

impl<A: Outcome, B: Outcome> Outcome for Sum<A, B> {
    fn write_ket(&self, out: &mut String) {
        match self {
            Sum::Inl(a) => {
                out.push_str("inl(");
                a.write_ket(out);
            }
            Sum::Inr(b) => {
                out.push_str("inr(");
                b.write_ket(out);
            }
        }
        out.push(')');
    }
}

/// A finite, ordered set of outcomes.
///
/// Points are stored sorted and distinct. Label spaces, numeric spaces,
/// copowers and products of such spaces are all finite; spaces of
/// distributions are not, so nothing here enumerates `D(A)`.
#[derive(Clone)]
pub struct Space<T = Label> {
    name: Arc<str>,
    points: Arc<[T]>,
}

impl<T: Outcome> Space<T> {
    /// Builds a space from points, checking they are distinct. Points are
    /// sorted into canonical order.
    pub fn from_points(name: impl Into<Arc<str>>, points: Vec<T>) -> Result<Self> {
        let name = name.into();
        let mut points = points;
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::SpaceMismatch(format!(
                "duplicate point {} in space `{name}`",
                w[0].ket()
            )));
        }
        Ok(Space {
            name,
            points: points.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.points.binary_search(x).is_ok()
    }

    pub fn check(&self, x: &T) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::UnknownLabel {
                label: x.ket(),
                space: self.name.to_string(),
            })
        }
    }

    /// The copower `n·A`.
    pub fn copower(&self, n: usize) -> Space<Tagged<T>> {
        let points: Vec<_> = (0..n)
            .flat_map(|i| self.points.iter().map(move |a| Tagged::new(i, a.clone())))
            .collect();
        Space {
            name: format!("{n}.{}", self.name).into(),
            points: points.into(),
        }
    }

    /// The product `A × B`.
    pub fn product<U: Outcome>(&self, other: &Space<U>) -> Space<(T, U)> {
        let points: Vec<_> = self
            .points
            .iter()
            .flat_map(|a| other.points.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        Space {
            name: format!("{}x{}", self.name, other.name).into(),
            points: points.into(),
        }
    }
}

impl Space<Label> {
    /// Declares a label space. Names must be distinct and free of ket syntax.
    pub fn labels<S: AsRef<str>>(name: &str, labels: &[S]) -> Result<Self> {
        let mut points = Vec::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            let l = l.as_ref();
            validate_label_name(l)?;
            if points.iter().any(|p: &Label| p.name() == l) {
                return Err(Error::SpaceMismatch(format!(
                    "duplicate label `{l}` in space `{name}`"
                )));
            }
            points.push(Label {
                index: i as u32,
                name: l.into(),
            });
        }
        Ok(Space {
            name: name.into(),
            points: points.into(),
        })
    }

    /// Looks up a label by name.
    pub fn label(&self, name: &str) -> Result<Label> {
        self.points
            .iter()
            .find(|l| l.name() == name)
            .cloned()
            .ok_or_else(|| Error::UnknownLabel {
                label: name.to_string(),
                space: self.name.to_string(),
            })
    }

    /// The numeric space `n` as a label space with labels `0`, ..., `n-1`.
    pub fn numeric_labels(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Space::labels(&n.to_string(), &names).expect("numerals are valid labels")
    }

    /// Two label spaces agree when they declare the same labels in the
    /// same order; the space name is not significant.
    pub fn same_labels(&self, other: &Space<Label>) -> bool {
        self.points == other.points
    }
}

impl Space<usize> {
    /// The numeric space `n = {0, ..., n-1}`.
    pub fn numeric(n: usize) -> Self {
        Space {
            name: n.to_string().into(),
            points: (0..n).collect::<Vec<_>>().into(),
        }
    }
}

impl<T: Debug> Debug for Space<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name, &*self.points)
    }
}

impl<T: PartialEq> PartialEq for Space<T> {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl<T: Eq> Eq for Space<T> {}

pub fn validate_label_name(name: &str) -> Result<()> {
    if name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || RESERVED_LABEL_CHARS.contains(&c))
    {
        return Err(Error::SpaceMismatch(format!(
            "invalid label name {name:?}: labels must be nonempty and avoid whitespace and {}",
            RESERVED_LABEL_CHARS.iter().collect::<String>()
        )));
    }
    Ok(())
}
