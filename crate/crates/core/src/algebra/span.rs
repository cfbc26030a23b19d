use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::expand::{Expander, DEFAULT_BOUND};
use super::linalg::{nullspace, IntEchelon, RationalEchelon};
use super::{CornerTreeFormula, PatternSum};
use crate::corner::{enumerate_corner_trees, trees_up_to, CornerTree};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::perm::Permutation;

/// Knobs for [`span_dimension`].
#[derive(Clone, Copy, Debug)]
pub struct SpanOptions {
    /// Use only trees with exactly `k` vertices instead of all trees with at
    /// most `k`.
    pub exact_k_only: bool,
    /// Largest `k` accepted.
    pub bound: usize,
    pub exec: Execution,
}

impl Default for SpanOptions {
    fn default() -> Self {
        Self {
            exact_k_only: false,
            bound: DEFAULT_BOUND,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpanResult {
    pub k: usize,
    /// Rank of the size-`k` parts of all tree expansions: how many
    /// independent combinations of `k`-patterns occur as leading terms of
    /// corner-tree formulas.
    pub dimension: usize,
    /// Dimension of the space of combinations of `k`-patterns that some
    /// formula computes exactly, `dim W + dim C - dim(W + C)`.
    pub intersection_dimension: usize,
    /// Trees whose size-`k` parts form a basis of the leading-term space.
    pub leading_basis: Vec<CornerTree>,
    /// Linearly independent formulas whose expansions are supported on
    /// patterns of size exactly `k`; there are `intersection_dimension`.
    pub basis: Vec<CornerTreeFormula>,
    /// Their expansions, in the same order.
    pub expansions: Vec<PatternSum>,
    /// Number of trees that were expanded.
    pub trees_considered: usize,
}

fn to_int_row(v: &[i128]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn to_rational_row(v: &[i128]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

/// Dense expansions over all patterns of size `1..=width_bound`.
fn dense_expansions(trees: &[CornerTree], e: &Expander, exec: Execution) -> Result<Vec<Vec<i128>>> {
    let width = e.dimension();
    exec.map(trees, |t| {
        e.expand_dense(t).map(|mut v| {
            v.resize(width, 0);
            v
        })
    })
    .into_iter()
    .collect()
}

/// Indices of the trees that are independent of all earlier ones.
fn independent_subset(rows: &[Vec<i128>], width: usize) -> Vec<usize> {
    let mut e = IntEchelon::new(width);
    (0..rows.len()).filter(|&i| e.insert(to_int_row(&rows[i]))).collect()
}

/// Dimension of the span of corner-tree expansions inside the space of
/// patterns of size exactly `k`, with an explicit basis.
pub fn span_dimension(k: usize, options: SpanOptions) -> Result<SpanResult> {
    if k > options.bound {
        return Err(Error::BoundExceeded { size: k, bound: options.bound });
    }
    if k == 0 {
        return Ok(SpanResult {
            k,
            dimension: 0,
            intersection_dimension: 0,
            leading_basis: Vec::new(),
            basis: Vec::new(),
            expansions: Vec::new(),
            trees_considered: 0,
        });
    }
    let trees = if options.exact_k_only {
        enumerate_corner_trees(k)
    } else {
        trees_up_to(k)
    };
    let e = Expander::shared(k);
    let width = e.dimension();
    let top = e.size_range(k);
    let rows = dense_expansions(&trees, &e, options.exec)?;
    let selected = independent_subset(&rows, width);
    let dim_w = selected.len();

    // W + C: the selected rows span W; C is spanned by the size-k unit vectors.
    let mut sum = IntEchelon::new(width);
    for col in top.clone() {
        let mut unit = vec![BigInt::zero(); width];
        unit[col] = BigInt::one();
        sum.insert(unit);
    }
    for &i in &selected {
        sum.insert(to_int_row(&rows[i]));
    }
    let dim_c = top.len();
    let intersection_dimension = dim_w + dim_c - sum.rank();

    let tops: Vec<Vec<i128>> = rows.iter().map(|r| r[top.clone()].to_vec()).collect();
    let leading = independent_subset(&tops, top.len());
    let dimension = leading.len();

    let mut ech = RationalEchelon::new(width);
    for &i in &selected {
        let kept = ech.insert(i, to_rational_row(&rows[i]));
        assert!(kept, "integer and rational elimination disagree on independence");
    }
    let mut basis = Vec::new();
    let mut expansions = Vec::new();
    for row in ech.rows().iter().filter(|r| top.contains(&r.pivot)) {
        basis.push(
            row.combination
                .iter()
                .map(|(&t, c)| (trees[t].clone(), c.clone()))
                .collect::<CornerTreeFormula>(),
        );
        expansions.push(
            top.clone()
                .map(|col| (e.pattern(col).clone(), row.values[col].clone()))
                .collect::<PatternSum>(),
        );
    }
    assert_eq!(basis.len(), intersection_dimension, "echelon basis size disagrees with the rank formula");
    Ok(SpanResult {
        k,
        dimension,
        intersection_dimension,
        leading_basis: leading.into_iter().map(|i| trees[i].clone()).collect(),
        basis,
        expansions,
        trees_considered: trees.len(),
    })
}

/// Finds rational coefficients `c_T` with `Σ c_T · expand(T) = target`, or
/// `None` if the target is outside the span of the given trees.
pub fn solve_for_target(target: &PatternSum, trees: &[CornerTree]) -> Result<Option<CornerTreeFormula>> {
    if target.is_empty() {
        return Ok(Some(CornerTreeFormula::new()));
    }
    let tree_bound = trees.iter().map(CornerTree::size).max().unwrap_or(0);
    if tree_bound > DEFAULT_BOUND {
        return Err(Error::BoundExceeded { size: tree_bound, bound: DEFAULT_BOUND });
    }
    if target.iter().any(|(p, _)| p.is_empty() || p.len() > tree_bound) {
        return Ok(None);
    }
    let e = Expander::shared(tree_bound);
    let width = e.dimension();
    let rows = dense_expansions(trees, &e, Execution::default())?;
    let mut ech = RationalEchelon::new(width);
    for i in independent_subset(&rows, width) {
        ech.insert(i, to_rational_row(&rows[i]));
    }
    let mut v = vec![BigRational::zero(); width];
    for (p, c) in target.iter() {
        v[e.index_of(p).expect("size checked above")] = c.clone();
    }
    let taken = ech.reduce(&mut v);
    if v.iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    Ok(Some(taken.into_iter().map(|(t, c)| (trees[t].clone(), c)).collect()))
}

/// Basis of the orthogonal complement of the size-`k` span, with single
/// patterns of size `k` taken as orthonormal.
pub fn orthogonal_complement(k: usize) -> Result<Vec<PatternSum>> {
    let span = span_dimension(k, SpanOptions::default())?;
    let patterns = crate::perm::patterns_of_size(k);
    let rows: Vec<Vec<BigRational>> = span
        .expansions
        .iter()
        .map(|s| patterns.iter().map(|p| s.coefficient(p)).collect())
        .collect();
    Ok(nullspace(&rows, patterns.len())
        .into_iter()
        .map(|x| patterns.iter().cloned().zip(x).collect())
        .collect())
}

/// The single pattern combination of size 4 that no corner-tree formula
/// reaches, scaled so that the coefficient of 1324 is 1.
pub fn orthogonal_complement_4() -> PatternSum {
    let mut complement = orthogonal_complement(4).expect("size 4 is within the default bound");
    assert_eq!(complement.len(), 1, "the size-4 complement is one-dimensional");
    let n = complement.remove(0);
    let c = n.coefficient(&Permutation::parse_pattern("1324").expect("valid"));
    assert!(!c.is_zero(), "1324 lies in the support of the complement");
    n.scaled(&c.recip())
}
