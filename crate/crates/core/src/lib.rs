//! Distributive lattices and Edge Firing Games.
//!
//! The crate works in both directions of the correspondence between finite
//! distributive lattices and the configuration spaces of Edge Firing Games
//! (EFGs):
//!
//! * [`poset`] and [`lattice`] build finite orders, enumerate filters, test
//!   distributivity and extract the order induced on join-irreducibles.
//! * [`efg`] plays an EFG exhaustively, records shot multisets and the
//!   successor relation, and checks that the resulting order is a
//!   distributive lattice.
//! * [`bridge`] builds a simple EFG whose configuration space is isomorphic
//!   to a given distributive lattice, certifies that isomorphism, and turns
//!   any EFG into an equivalent simple one.
//! * [`format`] and [`dot`] read and write the line-oriented text documents
//!   and Graphviz diagrams used by the `efg-lattice` command-line tool.
//!
//! Corpus sweeps in [`batch`] run on rayon when the `parallel` feature is
//! enabled (the default) and fall back to plain iteration otherwise.

pub mod batch;
pub mod bridge;
pub mod cli;
pub mod corpus;
pub mod dot;
pub mod efg;
pub mod exec;
pub mod format;
pub mod lattice;
pub mod poset;

pub use bridge::{lattice_to_efg, simplify_efg, verify_isomorphism, BridgeError, IsoCertificate};
pub use efg::{ConfigSpace, EfgError, EfgInstance, FiringGraph, Orientation};
pub use exec::Execution;
pub use lattice::{Lattice, LatticeError};
pub use poset::{Filter, Poset, PosetError};
