//! Rank-based independence statistics: Kendall's τ, the Bergsma–Dassios
//! statistic T*, and Monte-Carlo permutation p-values.

use std::cmp::Ordering;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, ToBigInt};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{builtin_formula, CornerTreeFormula};
use crate::corner::{count_corner_tree, CornerLabel, CornerTree};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::perm::{binomial, D4Element, Permutation};

/// What to do when a sample has repeated x or y values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TiePolicy {
    /// Reject the sample with [`Error::TiesPresent`].
    #[default]
    Strict,
    /// Order equal values by their position in the sample.
    Stable,
}

impl FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Self::Strict),
            "stable" => Ok(Self::Stable),
            other => Err(Error::Format(format!("unknown tie policy {other:?}, expected strict or stable"))),
        }
    }
}

/// Paired observations `(x_i, y_i)` with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl BivariateSample {
    pub fn new(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        Self::from_columns(xs, ys)
    }

    pub fn from_columns(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Format(format!("{} x values but {} y values", xs.len(), ys.len())));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn has_x_ties(&self) -> bool {
        has_ties(&self.xs)
    }

    pub fn has_y_ties(&self) -> bool {
        has_ties(&self.ys)
    }
}

fn has_ties(values: &[f64]) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// 0-based ranks, ties broken by index.
fn ranks(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    let mut rank = vec![0; values.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    rank
}

/// The permutation `π` with `rank(y_i) = π(rank(x_i))`.
pub fn rank_transform(sample: &BivariateSample, policy: TiePolicy) -> Result<Permutation> {
    if policy == TiePolicy::Strict {
        if sample.has_x_ties() {
            return Err(Error::TiesPresent("x"));
        }
        if sample.has_y_ties() {
            return Err(Error::TiesPresent("y"));
        }
    }
    let (rx, ry) = (ranks(&sample.xs), ranks(&sample.ys));
    let mut values = vec![0u32; sample.len()];
    for (i, &r) in rx.iter().enumerate() {
        values[r] = ry[i] as u32 + 1;
    }
    Ok(Permutation::from_vec_unchecked(values))
}

fn integer(c: BigUint) -> BigRational {
    BigRational::from_integer(c.to_bigint().expect("unsigned"))
}

/// Kendall's τ as the exact rational `2·#12/C(n,2) − 1`.
pub fn kendall_tau(pi: &Permutation) -> Result<BigRational> {
    let n = pi.len();
    if n < 2 {
        return Err(Error::NTooSmall { needed: 2, n });
    }
    let inc = count_corner_tree(&CornerTree::chain(&[CornerLabel::NE]), pi);
    let pairs = integer(binomial(n as u64, 2));
    Ok(integer(inc) * BigRational::from_integer(BigInt::from(2)) / pairs - BigRational::from_integer(BigInt::from(1)))
}

/// `T*` of a permutation: the number of 4-subsets whose pattern is one of
/// 1234, 1243, 2134, 2143, 3412, 3421, 4312, 4321.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TStarResult {
    pub n: usize,
    pub raw: BigUint,
    /// `raw / C(n,4)`.
    pub normalized: BigRational,
}

impl TStarResult {
    pub fn normalized_f64(&self) -> f64 {
        self.normalized.to_f64().unwrap_or(f64::NAN)
    }
}

/// `Σ_g g·S` over the dihedral group, merged into one formula.
fn orbit_formula() -> &'static CornerTreeFormula {
    static ORBIT: OnceLock<CornerTreeFormula> = OnceLock::new();
    ORBIT.get_or_init(|| {
        let s = builtin_formula("S").expect("S is built in");
        let mut out = CornerTreeFormula::new();
        for g in D4Element::all() {
            for (t, c) in s.transform(g).iter() {
                out.add_term(t.clone(), c.clone());
            }
        }
        out
    })
}

pub fn tstar(pi: &Permutation) -> Result<TStarResult> {
    tstar_with(pi, Execution::default())
}

/// `T* = C(n,4) − (1/8) Σ_g #S(g⁻¹·π)` with one corner-tree count per
/// distinct tree in the orbit of `S`.
pub fn tstar_with(pi: &Permutation, exec: Execution) -> Result<TStarResult> {
    let n = pi.len();
    if n < 4 {
        return Err(Error::NTooSmall { needed: 4, n });
    }
    let orbit_sum = orbit_formula().evaluate_with(pi, exec);
    let total = integer(binomial(n as u64, 4));
    let raw = &total - orbit_sum / BigRational::from_integer(BigInt::from(8));
    assert!(raw.is_integer() && !raw.is_negative(), "T* = {raw} is not a nonnegative integer");
    let normalized = &raw / &total;
    Ok(TStarResult {
        n,
        raw: raw.to_integer().to_biguint().expect("nonnegative"),
        normalized,
    })
}

/// Outcome of a Monte-Carlo permutation test.
#[derive(Clone, Debug, PartialEq)]
pub struct PValue {
    pub observed: TStarResult,
    pub iterations: u64,
    /// Iterations whose statistic was at least the observed one.
    pub exceedances: u64,
}

impl PValue {
    /// `(1 + exceedances) / (1 + iterations)`.
    pub fn value(&self) -> f64 {
        (1 + self.exceedances) as f64 / (1 + self.iterations) as f64
    }
}

/// The random permutation used by iteration `i`; each iteration draws from
/// its own ChaCha stream so results do not depend on scheduling.
pub fn null_permutation(n: usize, seed: u64, i: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    Permutation::random(n, &mut rng)
}

/// Permutation test of independence for T*: re-pairs the y values uniformly
/// at random `iterations` times.
pub fn tstar_pvalue(sample: &BivariateSample, policy: TiePolicy, iterations: u64, seed: u64, exec: Execution) -> Result<PValue> {
    let pi = rank_transform(sample, policy)?;
    tstar_pvalue_perm(&pi, iterations, seed, exec)
}

pub fn tstar_pvalue_perm(pi: &Permutation, iterations: u64, seed: u64, exec: Execution) -> Result<PValue> {
    if iterations == 0 {
        return Err(Error::Format("at least one iteration is required".into()));
    }
    let observed = tstar_with(pi, Execution::Sequential)?;
    let n = pi.len();
    let hits = exec.map_range(iterations as usize, |i| {
        let null = null_permutation(n, seed, i as u64);
        let t = tstar_with(&null, Execution::Sequential).expect("size checked above");
        t.raw >= observed.raw
    });
    Ok(PValue {
        observed,
        iterations,
        exceedances: hits.into_iter().filter(|&h| h).count() as u64,
    })
}

/// Exact rational rendered as a decimal with `digits` places, truncated
/// toward zero.
pub fn decimal_string(q: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (q.abs() * BigRational::from_integer(scale.clone())).to_integer();
    let (whole, frac) = (&scaled / &scale, &scaled % &scale);
    let sign = if q.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{frac:0>digits$}")
}
