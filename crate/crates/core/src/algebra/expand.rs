use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CornerTreeFormula, PatternSum};
use crate::corner::{count_corner_tree_as, CornerTree};
use crate::error::{Error, Result};
use crate::perm::{patterns_of_size, Pattern, Permutation};

/// Largest tree size [`expand_tree`] accepts.
pub const DEFAULT_BOUND: usize = 7;

/// Pattern tables for expanding trees of up to `bound` vertices.
///
/// Patterns of sizes `1..=bound` get consecutive global indices, sizes
/// ascending and lexicographic within a size. For every pattern the table
/// stores how often each strictly smaller nonempty pattern occurs in it.
#[derive(Debug)]
pub struct Expander {
    bound: usize,
    offsets: Vec<usize>,
    patterns: Vec<Pattern>,
    contained: Vec<Vec<(u32, u32)>>,
}

impl Expander {
    pub fn new(bound: usize) -> Self {
        let mut offsets = vec![0usize; bound + 2];
        let mut patterns = Vec::new();
        for s in 1..=bound {
            offsets[s] = patterns.len();
            patterns.extend(patterns_of_size(s));
        }
        offsets[bound + 1] = patterns.len();
        let mut expander = Self {
            bound,
            offsets,
            patterns,
            contained: Vec::new(),
        };
        expander.contained = (0..expander.patterns.len()).map(|i| expander.sub_patterns(i)).collect();
        expander
    }

    /// Shared instance per bound, built on first use.
    pub fn shared(bound: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Expander>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard.entry(bound).or_insert_with(|| Arc::new(Expander::new(bound))).clone()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of indexed patterns, all sizes `1..=bound`.
    pub fn dimension(&self) -> usize {
        self.patterns.len()
    }

    /// Global index range of the patterns of size `k`.
    pub fn size_range(&self, k: usize) -> std::ops::Range<usize> {
        assert!((1..=self.bound).contains(&k), "size {k} outside 1..={}", self.bound);
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn pattern(&self, index: usize) -> &Pattern {
        &self.patterns[index]
    }

    pub fn index_of(&self, pattern: &Pattern) -> Option<usize> {
        let k = pattern.len();
        (1..=self.bound).contains(&k).then(|| self.offsets[k] + pattern.lex_rank())
    }

    fn sub_patterns(&self, index: usize) -> Vec<(u32, u32)> {
        let sigma = &self.patterns[index];
        let k = sigma.len();
        let mut counts: HashMap<u32, u32> = HashMap::new();
        let full = (1u32 << k) - 1;
        for mask in 1..full {
            let picked: Vec<u32> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| sigma.values()[i]).collect();
            let rho = Permutation::standardize(&picked);
            let idx = self.offsets[rho.len()] + rho.lex_rank();
            *counts.entry(idx as u32).or_default() += 1;
        }
        let mut out: Vec<(u32, u32)> = counts.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Pattern coefficients of `#T`, dense over all indexed patterns of size
    /// at most `|T|`.
    pub fn expand_dense(&self, tree: &CornerTree) -> Result<Vec<i128>> {
        let size = tree.size();
        if size > self.bound {
            return Err(Error::BoundExceeded { size, bound: self.bound });
        }
        let end = self.offsets[size + 1];
        let mut w = vec![0i128; end];
        for idx in 0..end {
            let mut v = count_corner_tree_as::<u128>(tree, &self.patterns[idx]) as i128;
            for &(rho, c) in &self.contained[idx] {
                v -= w[rho as usize] * c as i128;
            }
            w[idx] = v;
        }
        Ok(w)
    }

    pub fn expand(&self, tree: &CornerTree) -> Result<PatternSum> {
        let dense = self.expand_dense(tree)?;
        Ok(dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (self.patterns[i].clone(), BigRational::from_integer(BigInt::from(c))))
            .collect())
    }
}

/// The pattern combination `Σ ŵ(σ)·#σ` equal to `#T`, for trees of at most
/// [`DEFAULT_BOUND`] vertices.
pub fn expand_tree(tree: &CornerTree) -> Result<PatternSum> {
    expand_tree_with_bound(tree, DEFAULT_BOUND)
}

/// Like [`expand_tree`] with a caller-chosen size bound.
pub fn expand_tree_with_bound(tree: &CornerTree, bound: usize) -> Result<PatternSum> {
    let size = tree.size();
    if size > bound {
        return Err(Error::BoundExceeded { size, bound });
    }
    Expander::shared(size).expand(tree)
}

/// Expands a whole formula term by term.
pub fn expand_formula(formula: &CornerTreeFormula) -> Result<PatternSum> {
    let bound = formula.max_tree_size();
    if bound > DEFAULT_BOUND {
        return Err(Error::BoundExceeded { size: bound, bound: DEFAULT_BOUND });
    }
    let expander = Expander::shared(bound.max(1));
    let mut out = PatternSum::new();
    for (tree, c) in formula.iter() {
        for (p, w) in expander.expand(tree)?.iter() {
            out.add_term(p.clone(), w * c);
        }
    }
    Ok(out)
}
