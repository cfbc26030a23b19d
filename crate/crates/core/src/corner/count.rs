//! The linear-time corner tree counter.
//!
//! Each non-root vertex `v` turns the per-position counts of its own subtree
//! into per-position counts for its parent with one sweep over the
//! positions: westward labels sweep left to right, eastward ones right to
//! left, and a sum tree indexed by value answers "how much weight lies
//! south (or north) of here among the positions already swept". Querying
//! before inserting keeps positions strictly apart; values are distinct
//! automatically.

use num_bigint::BigUint;

use super::CornerTree;
use crate::perm::Permutation;
use crate::sumtree::{Count, SumTree};

/// Number of occurrences of `tree` in `pi` (vertex maps need not be
/// injective).
///
/// Uses 128-bit counters when `n^|T|` provably fits, arbitrary precision
/// otherwise.
pub fn count_corner_tree(tree: &CornerTree, pi: &Permutation) -> BigUint {
    let bits = u64::BITS - (pi.len() as u64).leading_zeros();
    if (tree.size() as u64) * (bits as u64) < 128 {
        BigUint::from(count_corner_tree_as::<u128>(tree, pi))
    } else {
        count_corner_tree_as::<BigUint>(tree, pi)
    }
}

/// [`count_corner_tree`] with an explicit counter type. The caller is
/// responsible for `C` being wide enough to hold `n^|T|`.
pub fn count_corner_tree_as<C: Count>(tree: &CornerTree, pi: &Permutation) -> C {
    let weights = subtree_weights::<C>(tree, pi.values());
    let mut total = C::zero();
    for w in &weights {
        total += w;
    }
    total
}

/// `A[x]`: occurrences of the subtree at `v` that send `v` to position `x`.
fn subtree_weights<C: Count>(v: &CornerTree, pi: &[u32]) -> Vec<C> {
    let mut weights = vec![C::one(); pi.len()];
    for child in v.children() {
        let c = parent_weights::<C>(child, pi);
        for (a, b) in weights.iter_mut().zip(&c) {
            *a *= b;
        }
    }
    weights
}

/// `C[x]`: occurrences of the subtree at `v` given that `v`'s parent is sent
/// to position `x`.
fn parent_weights<C: Count>(v: &CornerTree, pi: &[u32]) -> Vec<C> {
    let n = pi.len();
    let weights = subtree_weights::<C>(v, pi);
    let mut out = vec![C::zero(); n];
    let mut tree = SumTree::<C>::new(n);
    let label = v.label();
    let mut step = |x: usize| {
        let y = pi[x] as usize;
        out[x] = if label.is_south() {
            tree.prefix_excl(y)
        } else {
            tree.suffix_excl(y)
        };
        tree.add(y, &weights[x]);
    };
    if label.is_west() {
        (0..n).for_each(&mut step);
    } else {
        (0..n).rev().for_each(&mut step);
    }
    out
}
