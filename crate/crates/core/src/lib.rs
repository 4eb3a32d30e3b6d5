//! Combinatorial Hubbard trees of post-singularly finite exponential maps.
//!
//! Start from a strictly preperiodic external address `s` (the base), build
//! its dynamical [`Partition`], and call [`build_tree`]:
//!
//! ```
//! use exptree_core::{build_tree, core_entropy, ExtAddress, Partition};
//!
//! let s: ExtAddress = "0(0,1)".parse().unwrap();
//! let tree = build_tree(&Partition::new(s).unwrap()).unwrap();
//! assert_eq!(tree.len(), 5);
//! let h = core_entropy(&tree, 1e-9).unwrap();
//! assert!((h - 0.4196176).abs() < 1e-6);
//! ```

pub mod analysis;
pub mod audit;
pub mod corpus;
pub mod error;
pub mod export;
pub mod itinerary;
pub mod notation;
pub mod partition;
pub mod realization;
pub mod sequences;
pub mod treebuild;
pub mod triods;

pub use analysis::{core_entropy, same_map, transition_matrix, tree_equivalent, TransitionMatrix};
pub use error::{Error, Result};
pub use itinerary::{Itinerary, Symbol};
pub use partition::{Partition, SectorResult};
pub use realization::{addresses_of, AddressSet, SearchConfig};
pub use sequences::{EventuallyPeriodic, ExtAddress};
pub use treebuild::{build_tree, build_tree_with, AbstractHubbardTree, Vertex, VertexKind};
pub use triods::{AddressTriod, Triod, TriodShape};
