//! Temporal graph algorithms.
//!
//! A temporal graph is a static (di)graph whose edges carry discrete time
//! labels. This crate provides the data model and the algorithms built on
//! it: foremost journeys and temporal distances, disjoint-journey duality,
//! token dissemination in dynamic networks, labeling design, temporal
//! matching / TSP / exploration, linearly available edges, and random
//! temporal graphs.

pub mod design;
pub mod dissemination;
pub mod error;
pub mod flow;
pub mod format;
pub mod graph;
pub mod journeys;
pub mod linear;
pub mod menger;
pub mod opt;
pub mod random;

pub use error::{Error, Result};
pub use graph::{Edge, NodeId, StaticExpansion, StaticGraph, TemporalGraph, Time, TimeEdge};
pub use journeys::Journey;
