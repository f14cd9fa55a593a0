//! 7/4-approximation for the matching augmentation problem: given a
//! loop-free multigraph with {0,1} edge costs whose zero-edges form a
//! matching, compute a 2-edge-connected spanning subgraph of cost at most
//! 7/4 times optimal.
//!
//! The pipeline decomposes the input into well-structured sub-instances
//! (no {0,1}-edge-pairs, redundant 4-cycles, cut nodes or bad-pairs),
//! solves each by augmenting a minimum-cost 2-edge cover with
//! credit-financed ears, and reassembles a solution of the original
//! instance. A quarter-unit credit ledger is audited after every step.
//!
//! The crate is `no_std` (with `alloc`); file formats, the CLI and JSON
//! reports live in the companion crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod bridgecover;
pub mod cover;
pub mod error;
pub mod glue;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod pipeline;
pub mod preprocess;

pub use error::{AlgoError, GraphError};
pub use graph::{ConnectivityProfile, Edge, EdgeId, MapInstance, NodeId};

