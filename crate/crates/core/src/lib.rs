//! Fixed-width bit headers for shortest-path routing.
//!
//! Every edge of an undirected graph carries a label, a subset of a small
//! universe stored as a bit vector. A path is encoded as the union of its edge
//! labels, and a router forwards a message along each incident edge whose label
//! is contained in the header. The labellings in this crate (bit-per-edge,
//! bit-per-vertex, the star labelling and the core/periphery combination) never
//! produce a false positive on a shortest path; [`bloom`] provides the random
//! fixed-weight baseline that does.

pub mod bits;
pub mod bloom;
pub mod cli;
pub mod decompose;
mod error;
pub mod graph;
pub mod labelling;
pub mod routing;

pub use bits::BitSet;
pub use error::{Error, Result};
pub use graph::{Graph, Path};
pub use labelling::{BitUniverse, EdgeLabel, Labelling, StarParams};
pub use routing::{Header, NextHop, RoutingTrace, VerificationReport};
