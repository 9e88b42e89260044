//! Exact computations with Thompson's groups F, T and V.
//!
//! * [`dyadic`]: dyadic rationals and standard dyadic intervals.
//! * [`elements`]: group elements as reduced cell-pair maps.
//! * [`cosetgraph`]: coset graphs of `(G, G_[0,1/2])` explored as BFS balls.
//! * [`ends`]: finite-radius ends diagnostics and the almost invariant set `A`.
//! * [`facert`]: re-checkable certificates for the property FA arguments.
//! * [`treeact`]: the modular group acting on its Bass–Serre tree, used as a
//!   testbed for the fixed-point rules the certificates rely on.

pub mod cosetgraph;
pub mod dyadic;
pub mod elements;
pub mod ends;
pub mod error;
pub mod facert;
pub mod treeact;

pub use dyadic::{Dyadic, Relation, StdInterval};
pub use elements::{AffinePatch, CellMap, CellPair, GroupClass};
pub use error::{Error, Result};
