//! Exhaustive generation of canonical corner trees.

use super::{CornerLabel, CornerTree};

/// Every corner tree with exactly `k` vertices, each once up to child order,
/// in canonical form and sorted.
///
/// Re-rootings of the same underlying labeled tree count as distinct trees.
pub fn enumerate_corner_trees(k: usize) -> Vec<CornerTree> {
    if k == 0 {
        return Vec::new();
    }
    let by_size = subtrees_by_size(k - 1);
    let pool: Vec<&CornerTree> = by_size.iter().flatten().collect();
    let mut out: Vec<CornerTree> = forests(k - 1, &pool, 0)
        .into_iter()
        .map(|children| CornerTree::root(children).canonical())
        .collect();
    out.sort();
    out
}

/// All canonical trees with `1..=k` vertices, smallest first.
pub fn trees_up_to(k: usize) -> Vec<CornerTree> {
    (1..=k).flat_map(enumerate_corner_trees).collect()
}

/// `result[s - 1]`: canonical non-root subtrees with `s` vertices.
fn subtrees_by_size(max: usize) -> Vec<Vec<CornerTree>> {
    let mut by_size: Vec<Vec<CornerTree>> = Vec::with_capacity(max);
    for s in 1..=max {
        let pool: Vec<&CornerTree> = by_size.iter().flatten().collect();
        let mut level = Vec::new();
        for children in forests(s - 1, &pool, 0) {
            for label in CornerLabel::compass() {
                level.push(CornerTree::node(label, children.clone()).canonical());
            }
        }
        level.sort();
        by_size.push(level);
    }
    by_size
}

/// Multisets drawn from `pool[start..]` whose sizes add up to `budget`.
fn forests(budget: usize, pool: &[&CornerTree], start: usize) -> Vec<Vec<CornerTree>> {
    if budget == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, tree) in pool.iter().enumerate().skip(start) {
        let size = tree.size();
        if size > budget {
            continue;
        }
        for mut rest in forests(budget - size, pool, i) {
            rest.insert(0, (*tree).clone());
            out.push(rest);
        }
    }
    out
}
