//! Counting occurrences of permutation patterns with corner trees.

pub mod algebra;
pub mod corner;
pub mod error;
pub mod exec;
pub mod io;
pub mod metrics;
pub mod perm;
pub mod profile;
pub mod stats;
pub mod sumtree;

pub use algebra::{CornerTreeFormula, PatternSum};
pub use corner::{count_corner_tree, enumerate_corner_trees, CornerLabel, CornerTree};
pub use error::{Error, Result};
pub use exec::Execution;
pub use perm::{binomial, count_pattern_brute, k_profile_brute, D4Element, Pattern, Permutation, Profile};
pub use profile::{count_pattern_fast, profile3, profile4};
pub use sumtree::{Count, PointSumTree2D, SumTree, SumTree2D};
pub use stats::{kendall_tau, rank_transform, tstar, tstar_pvalue, BivariateSample, TStarResult, TiePolicy};
