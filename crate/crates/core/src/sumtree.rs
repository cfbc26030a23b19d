//! Point-update / range-sum trees in one and two dimensions.
//!
//! Indices are 1-based throughout, matching permutation values and
//! positions. Every operation reports its node touches to
//! [`metrics`](crate::metrics).

use std::fmt::Debug;
use std::ops::{AddAssign, Bound, MulAssign, RangeBounds, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::metrics;

/// Counter types usable as tree values.
pub trait Count:
    Clone
    + Debug
    + Zero
    + One
    + Ord
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + From<u32>
    + Send
    + Sync
{
}

impl Count for u32 {}
impl Count for u64 {}
impl Count for u128 {}
impl Count for i64 {}
impl Count for i128 {}
impl Count for BigUint {}
impl Count for BigInt {}

/// A complete binary tree over leaves `1..=n` whose internal nodes hold the
/// sums of their children.
///
/// The leaf count is rounded up to a power of two (at least two); padding
/// leaves stay zero.
#[derive(Clone, Debug)]
pub struct SumTree<C> {
    n: usize,
    leaves: usize,
    depth: u32,
    nodes: Vec<C>,
}

impl<C: Count> SumTree<C> {
    pub fn new(n: usize) -> Self {
        let leaves = n.next_power_of_two().max(2);
        Self {
            n,
            leaves,
            depth: leaves.trailing_zeros(),
            nodes: vec![C::zero(); 2 * leaves],
        }
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    /// Number of edges from a leaf to the root.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    fn check(&self, y: usize) -> Result<()> {
        if y == 0 || y > self.n {
            Err(Error::IndexOutOfRange {
                index: y,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Adds `v` to leaf `y` and all of its ancestors.
    ///
    /// # Panics
    /// If `y` is not in `1..=n`; see [`try_add`](Self::try_add).
    pub fn add(&mut self, y: usize, v: &C) {
        assert!(y >= 1 && y <= self.n, "leaf {y} outside 1..={}", self.n);
        let mut idx = self.leaves + y - 1;
        while idx > 0 {
            self.nodes[idx] += v;
            idx >>= 1;
        }
        metrics::record(self.depth as u64 + 1);
    }

    pub fn try_add(&mut self, y: usize, v: &C) -> Result<()> {
        self.check(y)?;
        self.add(y, v);
        Ok(())
    }

    /// Overwrites leaf `y` with `v`, propagating the difference upwards.
    pub fn set(&mut self, y: usize, v: &C) {
        let old = self.value_at(y);
        match v.cmp(&old) {
            std::cmp::Ordering::Equal => {}
            std::cmp::Ordering::Greater => {
                let mut delta = v.clone();
                delta -= &old;
                self.add(y, &delta);
            }
            std::cmp::Ordering::Less => {
                let mut delta = old;
                delta -= v;
                let mut idx = self.leaves + y - 1;
                while idx > 0 {
                    self.nodes[idx] -= &delta;
                    idx >>= 1;
                }
                metrics::record(self.depth as u64 + 1);
            }
        }
    }

    pub fn value_at(&self, y: usize) -> C {
        assert!(y >= 1 && y <= self.n, "leaf {y} outside 1..={}", self.n);
        metrics::record(1);
        self.nodes[self.leaves + y - 1].clone()
    }

    pub fn total(&self) -> C {
        metrics::record(1);
        self.nodes[1].clone()
    }

    /// Sum of the leaves strictly below `y`, read off the left siblings of
    /// `y`'s ancestors.
    pub fn prefix_excl(&self, y: usize) -> C {
        assert!(y >= 1 && y <= self.n, "leaf {y} outside 1..={}", self.n);
        let mut idx = self.leaves + y - 1;
        let mut sum = C::zero();
        let mut touched = 0;
        while idx > 1 {
            if idx & 1 == 1 {
                sum += &self.nodes[idx - 1];
                touched += 1;
            }
            idx >>= 1;
        }
        metrics::record(touched);
        sum
    }

    /// Sum of the leaves strictly above `y`.
    pub fn suffix_excl(&self, y: usize) -> C {
        assert!(y >= 1 && y <= self.n, "leaf {y} outside 1..={}", self.n);
        let mut idx = self.leaves + y - 1;
        let mut sum = C::zero();
        let mut touched = 0;
        while idx > 1 {
            if idx & 1 == 0 {
                sum += &self.nodes[idx + 1];
                touched += 1;
            }
            idx >>= 1;
        }
        metrics::record(touched);
        sum
    }

    /// Sum of the leaves `1..=y`; `y = 0` gives zero.
    pub fn prefix_incl(&self, y: usize) -> C {
        assert!(y <= self.n, "leaf {y} outside 0..={}", self.n);
        if y == 0 {
            return C::zero();
        }
        let mut idx = self.leaves + y - 1;
        let mut sum = self.nodes[idx].clone();
        let mut touched = 1;
        while idx > 1 {
            if idx & 1 == 1 {
                sum += &self.nodes[idx - 1];
                touched += 1;
            }
            idx >>= 1;
        }
        metrics::record(touched);
        sum
    }

    pub fn try_prefix_excl(&self, y: usize) -> Result<C> {
        self.check(y)?;
        Ok(self.prefix_excl(y))
    }

    pub fn try_suffix_excl(&self, y: usize) -> Result<C> {
        self.check(y)?;
        Ok(self.suffix_excl(y))
    }

    pub fn try_prefix_incl(&self, y: usize) -> Result<C> {
        if y > self.n {
            return Err(Error::IndexOutOfRange {
                index: y,
                n: self.n,
            });
        }
        Ok(self.prefix_incl(y))
    }

    #[cfg(test)]
    fn internal_nodes_consistent(&self) -> bool {
        (1..self.leaves).all(|i| {
            let mut s = self.nodes[2 * i].clone();
            s += &self.nodes[2 * i + 1];
            s == self.nodes[i]
        })
    }
}

/// A sparse two-dimensional sum tree over `1..=n × 1..=n`.
///
/// This is the Cartesian product of two binary trees in implicit (Fenwick)
/// layout: node `i` of each axis stands for the complete-tree node covering
/// `(i - lowbit(i), i]`, and only those nodes are stored. Node pairs live in
/// one hash map per outer node; absent keys are zero and nothing is stored
/// for an untouched pair, so `s` insertions occupy `O(s log² n)` entries.
#[derive(Clone, Debug)]
pub struct SumTree2D<C = u64> {
    n: usize,
    cells: Vec<FxHashMap<u32, C>>,
}

fn lowbit(i: usize) -> usize {
    i & i.wrapping_neg()
}

impl<C: Count + Copy> SumTree2D<C> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            cells: vec![FxHashMap::default(); n + 1],
        }
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    /// Number of stored (nonzero-touched) node pairs.
    pub fn stored_entries(&self) -> usize {
        self.cells.iter().map(FxHashMap::len).sum()
    }

    /// Adds `v` at cell `(x, y)`.
    pub fn add(&mut self, x: usize, y: usize, v: C) -> Result<()> {
        check_axis(x, self.n)?;
        check_axis(y, self.n)?;
        let mut touched = 0;
        let mut ox = x;
        while ox <= self.n {
            let inner = &mut self.cells[ox];
            let mut oy = y;
            while oy <= self.n {
                *inner.entry(oy as u32).or_insert_with(C::zero) += &v;
                touched += 1;
                oy += lowbit(oy);
            }
            ox += lowbit(ox);
        }
        metrics::record(touched);
        Ok(())
    }

    /// Sum over `1..=x × 1..=y`.
    fn prefix(&self, x: usize, y: usize) -> C {
        let mut sum = C::zero();
        if x == 0 || y == 0 {
            return sum;
        }
        let mut touched = 0;
        let mut ox = x;
        while ox > 0 {
            let inner = &self.cells[ox];
            if !inner.is_empty() {
                let mut oy = y;
                while oy > 0 {
                    if let Some(v) = inner.get(&(oy as u32)) {
                        sum += v;
                    }
                    touched += 1;
                    oy -= lowbit(oy);
                }
            }
            ox -= lowbit(ox);
        }
        metrics::record(touched);
        sum
    }

    /// Sum of the values inside the box `xs × ys`.
    ///
    /// Each side can be open or closed (any `RangeBounds`, including
    /// `(Bound, Bound)` tuples). A side that normalizes to an empty interval
    /// (`lo = hi + 1`) yields zero; `lo > hi + 1` is an
    /// [`Error::InvalidRange`].
    pub fn box_sum(&self, xs: impl RangeBounds<usize>, ys: impl RangeBounds<usize>) -> Result<C> {
        let (Some((x1, x2)), Some((y1, y2))) = (normalize(self.n, &xs)?, normalize(self.n, &ys)?) else {
            return Ok(C::zero());
        };
        let mut sum = self.prefix(x2, y2);
        sum += &self.prefix(x1 - 1, y1 - 1);
        sum -= &self.prefix(x1 - 1, y2);
        sum -= &self.prefix(x2, y1 - 1);
        Ok(sum)
    }
}

/// Resolves a range to `Some((lo, hi))` inside `1..=n`, or `None` when it is
/// empty.
fn normalize(n: usize, r: &impl RangeBounds<usize>) -> Result<Option<(usize, usize)>> {
    let lo = match r.start_bound() {
        Bound::Included(&a) => a,
        Bound::Excluded(&a) => a + 1,
        Bound::Unbounded => 1,
    };
    let hi = match r.end_bound() {
        Bound::Included(&b) => Some(b),
        Bound::Excluded(&b) => b.checked_sub(1),
        Bound::Unbounded => Some(n),
    };
    let hi_plus_one = hi.map_or(0, |h| h + 1);
    if lo > hi_plus_one {
        return Err(Error::InvalidRange {
            lo,
            hi: hi.unwrap_or(0),
        });
    }
    if lo == hi_plus_one {
        return Ok(None);
    }
    let hi = hi.expect("nonempty range has an upper bound");
    if lo == 0 || hi > n {
        return Err(Error::IndexOutOfRange {
            index: if lo == 0 { 0 } else { hi },
            n,
        });
    }
    Ok(Some((lo, hi)))
}

fn check_axis(index: usize, n: usize) -> Result<()> {
    if index == 0 || index > n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    Ok(())
}

/// Two-dimensional sum tree over a set of cells fixed at construction.
///
/// Same Fenwick product layout as [`SumTree2D`], but each outer node keeps a
/// dense inner tree over just the `y` coordinates registered beneath it, so
/// memory is `O(s log n)` counters for `s` registered cells. Adding to a cell
/// that was not registered is an error.
#[derive(Clone, Debug)]
pub struct PointSumTree2D<C = u64> {
    n: usize,
    keys: Vec<Vec<u32>>,
    sums: Vec<Vec<C>>,
}

impl<C: Count + Copy> PointSumTree2D<C> {
    pub fn new(n: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut keys: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for (x, y) in cells {
            check_axis(x, n)?;
            check_axis(y, n)?;
            let mut ox = x;
            while ox <= n {
                keys[ox].push(y as u32);
                ox += lowbit(ox);
            }
        }
        for k in keys.iter_mut() {
            k.sort_unstable();
            k.dedup();
            k.shrink_to_fit();
        }
        let sums = keys.iter().map(|k| vec![C::zero(); k.len() + 1]).collect();
        Ok(Self { n, keys, sums })
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    /// Number of stored inner counters.
    pub fn stored_entries(&self) -> usize {
        self.keys.iter().map(Vec::len).sum()
    }

    /// Adds `v` at the registered cell `(x, y)`.
    pub fn add(&mut self, x: usize, y: usize, v: C) -> Result<()> {
        check_axis(x, self.n)?;
        check_axis(y, self.n)?;
        let mut touched = 0u64;
        let mut ox = x;
        while ox <= self.n {
            let keys = &self.keys[ox];
            let slot = keys.binary_search(&(y as u32)).map_err(|_| Error::UnregisteredPoint { x, y })?;
            touched += (usize::BITS - keys.len().leading_zeros()) as u64;
            let inner = &mut self.sums[ox];
            let mut j = slot + 1;
            while j < inner.len() {
                inner[j] += &v;
                touched += 1;
                j += lowbit(j);
            }
            ox += lowbit(ox);
        }
        metrics::record(touched);
        Ok(())
    }

    fn prefix(&self, x: usize, y: usize) -> C {
        let mut sum = C::zero();
        if x == 0 || y == 0 {
            return sum;
        }
        let mut touched = 0u64;
        let mut ox = x;
        while ox > 0 {
            let keys = &self.keys[ox];
            touched += (usize::BITS - keys.len().leading_zeros()) as u64;
            let inner = &self.sums[ox];
            let mut j = keys.partition_point(|&k| k as usize <= y);
            while j > 0 {
                sum += &inner[j];
                touched += 1;
                j -= lowbit(j);
            }
            ox -= lowbit(ox);
        }
        metrics::record(touched);
        sum
    }

    /// Sum inside the box `xs × ys`, with the range conventions of
    /// [`SumTree2D::box_sum`].
    pub fn box_sum(&self, xs: impl RangeBounds<usize>, ys: impl RangeBounds<usize>) -> Result<C> {
        let (Some((x1, x2)), Some((y1, y2))) = (normalize(self.n, &xs)?, normalize(self.n, &ys)?) else {
            return Ok(C::zero());
        };
        let mut sum = self.prefix(x2, y2);
        sum += &self.prefix(x1 - 1, y1 - 1);
        sum -= &self.prefix(x1 - 1, y2);
        sum -= &self.prefix(x2, y1 - 1);
        Ok(sum)
    }
}
