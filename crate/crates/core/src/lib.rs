//! Exact finite probability with total hyper normalisation and hyper
//! conditioning, disintegration, channel denotation and refinement.

pub mod channel;
pub mod dist;
pub mod error;
pub mod feasibility;
pub mod fixtures;
pub mod format;
pub mod hypercond;
pub mod laws;
pub mod normalise;
pub mod predicates;
pub mod prob;
pub mod refinement;
pub mod space;
pub mod tagged;

pub use channel::Channel;
pub use dist::{Dist, SubDist};
pub use error::{Error, ParseError, Result};
pub use prob::{q, Prob};
pub use space::{Label, Outcome, Space, Sum, Tagged};
pub use tagged::{HyperDist, TaggedDist};
pub use hypercond::{denote_channel, hyper_condition, hyper_condition_direct, recover_state, recover_test};
pub use normalise::{disintegrate, hyper_normalise, joint_from_conditional, nrm, sprinkle, Disintegration};
pub use predicates::{condition, validity, wp, Predicate, Test};
pub use refinement::{check_witness, h_from_witness, hyper_refines, test_refines, witness_from_h, Refinement, RefinementWitness};
