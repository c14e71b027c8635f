//! Free-group words, Stallings subgroup graphs, transversals, and finite
//! permutation quotients.

mod graph;
mod perm;
mod transversal;
mod word;

pub use graph::{Adjacency, Index, SubgroupGraph, TreeStep};
pub use perm::{FiniteGroupTable, PermRep, DEFAULT_ELEMENT_CAP};
pub use transversal::{left_coset_decompose, Transversal};
pub use word::{Letter, Word};
