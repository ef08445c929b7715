//! Interference-aware multicast Steiner trees for wireless mesh networks.
//!
//! A multicast request asks for a tree rooted at a sender that reaches every
//! node hosting one of the requested network functions. Trees are scored on
//! two objectives: total link length and the number of nodes inside or
//! adjacent to the tree (`|N[V_T]|`), a proxy for wireless interference.
//!
//! The main solver, [`steiner::tssr`], builds an interference-aware metric
//! closure over the terminals and expands its minimum spanning tree back into
//! the graph. [`steiner::spt_baseline`] and [`steiner::st_baseline`] ignore
//! interference, and [`oracle`] enumerates the exact Pareto front on small
//! graphs.

mod dsu;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod interference;
pub mod io;
pub mod nodeset;
pub mod oracle;
pub mod paper;
pub mod pareto_path;
pub mod paths;
pub mod properties;
pub mod steiner;

pub use error::{MistError, Result};
pub use graph::{Edge, Graph, GraphBuilder, NodeId};
pub use nodeset::NodeSet;
