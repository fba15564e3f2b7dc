//! Text formats: ket notation and JSON workspaces.

pub mod ket;
pub mod workspace;

pub use ket::{parse_dist, parse_hyper, parse_numeric_dist, parse_subdist, parse_tagged, KetParser};
pub use workspace::{SpaceDecl, Typed, Workspace};

use crate::channel::Channel;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::{Label, Space};

fn numeral(l: &Label) -> Result<usize> {
    l.name().parse().map_err(|_| Error::SpaceMismatch(format!("`{}` is not a numeral", l.name())))
}

/// Reads a distribution over a numeric label space as one over `usize`.
pub fn to_numeric_dist(d: &Dist<Label>) -> Result<Dist<usize>> {
    let terms = d
        .iter()
        .map(|(l, p)| Ok((numeral(l)?, p.clone())))
        .collect::<Result<Vec<_>>>()?;
    Dist::from_terms(terms)
}

/// Writes a distribution over `n` into the label space [`Space::numeric_labels`].
pub fn from_numeric_dist(d: &Dist<usize>, n: usize) -> Result<Dist<Label>> {
    let space = Space::numeric_labels(n);
    let terms = d
        .iter()
        .map(|(i, p)| Ok((space.label(&i.to_string())?, p.clone())))
        .collect::<Result<Vec<_>>>()?;
    Dist::from_terms(terms)
}

/// Reads a channel between numeric label spaces as a channel `n ⊸ m`.
pub fn to_numeric_channel(c: &Channel<Label, Label>) -> Result<Channel<usize, usize>> {
    let (n, m) = (c.source().len(), c.target().len());
    let rows = c
        .rows()
        .map(|(a, row)| Ok((numeral(a)?, to_numeric_dist(row)?)))
        .collect::<Result<_>>()?;
    Channel::new(Space::numeric(n), Space::numeric(m), rows)
}

/// Writes a channel `n ⊸ m` between numeric label spaces.
pub fn from_numeric_channel(h: &Channel<usize, usize>) -> Result<Channel<Label, Label>> {
    let (n, m) = (h.source().len(), h.target().len());
    let source = Space::numeric_labels(n);
    Channel::from_fn(source.clone(), Space::numeric_labels(m), |a| {
        let i = numeral(a).expect("numeric labels");
        from_numeric_dist(h.row(&i).expect("total"), m).expect("row over m")
    })
}
