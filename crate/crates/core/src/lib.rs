//! Linear 3-graphs and the crown.
//!
//! The crate covers four pieces that build on each other:
//!
//! * [`graph`], [`io`] and [`canon`]: validated linear 3-graphs, L3G/JSON encodings and
//!   canonical labeling.
//! * [`crown`]: crown detection through link graphs and rainbow matchings, with a brute-force
//!   oracle and the greedy construction for edges whose degree vector dominates `(6,4,2)`.
//! * [`discharging`]: `s`, `s*`, `T*`, and the unit-transfer sequence with its bookkeeping.
//! * [`search`], [`generators`] and [`lemma_lab`]: exact linear Turán numbers of the crown for
//!   small `n`, graph generators, and replayable verification suites.

pub mod canon;
pub mod crown;
pub mod discharging;
pub mod generators;
pub mod graph;
pub mod io;
pub mod lemma_lab;
pub mod search;

pub use canon::{Canonical, CanonicalForm};
pub use crown::{
    crown_oracle, find_crown, find_crown_with_base, find_rainbow_matching, greedy_crown_642,
    link_graph, Color, ColoredEdge, ColoredLinkGraph, CrownError, CrownWitness,
};
pub use graph::{
    dominates, validate_linear, DegreeVector, EdgeId, GraphError, LinearThreeGraph, Triple, Vertex,
};
