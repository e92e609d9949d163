//! Exact homomorphism counting between digraphs and tournaments, together with
//! the gadget digraphs, host tournaments, density matrices and polynomial
//! reduction built on top of it.

pub mod bitset;
pub mod digraph;
pub mod error;
pub mod format;
pub mod gadget;
pub mod hom;
pub mod host;
pub mod quantum;
pub mod reduction;
pub mod region;
pub mod spectral;

pub use digraph::{
    make_tournament, random_tournament, transitive_tournament, Digraph, RootedDigraph, Tournament,
};
pub use error::{Error, Result};
pub use hom::{count_hom, count_hom_bruteforce, count_hom_rooted, density, Density, HomCount};
pub use quantum::{eval_quantum, QuantumDigraph};
