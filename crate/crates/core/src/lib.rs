//! Distributed edge coloring by fan repair.
//!
//! The crate simulates LOCAL-model edge-coloring schedulers built on Vizing
//! fans: uncolored edges are fixed by shifting a fan and flipping one
//! alternating path, long paths are cut by blocking edges (`★`), and the
//! blocking edges are recolored with a few extra colors at the end.
//!
//! Module map:
//! - [`graph`]: simple graphs, generators, edge-list I/O, distance powers.
//! - [`palette`]: partial colorings, the properness verifier, a sequential
//!   Vizing baseline and `★` finalization.
//! - [`fans`]: normal, reverse and sub-reverse fans, alternating paths and the
//!   single-fan repair procedures.
//! - [`locality`]: symmetry breaking (hop colorings, maximal matchings,
//!   conflict-graph coloring) and the round ledger.
//! - [`engines`]: the end-to-end schedulers, blocking strategies, the
//!   potential function and degree splitting.

pub mod engines;
pub mod fans;
pub mod graph;
pub mod locality;
pub mod palette;

pub use graph::{EdgeId, Graph, GraphKind, VertexId};
pub use palette::{Color, PartialColoring, Slot};
