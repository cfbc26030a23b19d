//! Fast 3- and 4-profiles and single-pattern counts for patterns of size at
//! most four.

mod basis;
mod strips;

pub use basis::{sha256_hex, Basis4, BASIS4_SHA256};
pub use strips::{count_3214_strips, count_3241_fast, default_m_3214, default_m_3241};

use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigUint, ToBigInt};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::{builtin_formula, CornerTreeFormula};
use crate::corner::{count_corner_tree, CornerTree};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::perm::{binomial, k_profile_brute, patterns_of_size, D4Element, Pattern, Permutation, Profile};

use basis::FourSystem;

/// Which extra 4-pattern count completes the 23 corner-tree equations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FourthCount {
    /// #3241 in `Õ(n^{3/2})` time and space.
    #[default]
    Count3241,
    /// #3214 in `Õ(n^{5/3})` time and `Õ(n)` space.
    Count3214,
    /// Skip the fast path and enumerate all 4-subsets.
    Brute,
}

impl FromStr for FourthCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "3241" => Ok(Self::Count3241),
            "3214" => Ok(Self::Count3214),
            "brute" => Ok(Self::Brute),
            other => Err(Error::Format(format!("unknown algorithm {other:?}, expected 3241, 3214 or brute"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Profile4Options {
    pub algorithm: FourthCount,
    /// Strip width for the extra count; `None` picks the default.
    pub m: Option<usize>,
    pub exec: Execution,
}

fn rational_to_count(q: &BigRational) -> BigUint {
    assert!(q.is_integer(), "pattern count {q} is not an integer");
    assert!(!q.is_negative(), "pattern count {q} is negative");
    q.to_integer().to_biguint().expect("nonnegative")
}

fn as_rational(c: BigUint) -> BigRational {
    BigRational::from_integer(c.to_bigint().expect("unsigned"))
}

fn find_symmetry(from: &Pattern, to: &Pattern) -> Option<D4Element> {
    D4Element::all().into_iter().find(|g| &g.apply(from) == to)
}

/// `#σ(π)` from a formula `f` for `#τ`, where `σ` is a symmetry image of `τ`.
fn count_by_symmetry(f: &CornerTreeFormula, tau: &Pattern, sigma: &Pattern, pi: &Permutation) -> Option<BigUint> {
    find_symmetry(tau, sigma).map(|g| rational_to_count(&f.transform(g).evaluate(pi)))
}

fn builtin(name: &str) -> CornerTreeFormula {
    builtin_formula(name).expect("known built-in")
}

fn pat(s: &str) -> Pattern {
    Permutation::parse_pattern(s).expect("valid pattern literal")
}

/// Exact 3-profile in `Õ(n)` time.
pub fn profile3(pi: &Permutation) -> Profile {
    let n = pi.len();
    if n < 3 {
        return Profile::zeros(3);
    }
    let (f123, f213) = (builtin("123"), builtin("213"));
    let (p123, p213) = (pat("123"), pat("213"));
    let mut counts = vec![BigUint::zero(); 6];
    let mut rest = binomial(n as u64, 3);
    let patterns = patterns_of_size(3);
    let last = patterns.iter().position(|p| p == &pat("312")).expect("312 is a 3-pattern");
    for (i, sigma) in patterns.iter().enumerate() {
        if i == last {
            continue;
        }
        let c = count_by_symmetry(&f123, &p123, sigma, pi)
            .or_else(|| count_by_symmetry(&f213, &p213, sigma, pi))
            .expect("every 3-pattern is a symmetry image of 123 or 213");
        rest -= &c;
        counts[i] = c;
    }
    counts[last] = rest;
    Profile::from_counts(3, counts)
}

fn system(extra: FourthCount) -> Result<Arc<FourSystem>> {
    static S3241: OnceLock<Result<Arc<FourSystem>>> = OnceLock::new();
    static S3214: OnceLock<Result<Arc<FourSystem>>> = OnceLock::new();
    let (cell, name) = match extra {
        FourthCount::Count3214 => (&S3214, "3214"),
        _ => (&S3241, "3241"),
    };
    cell.get_or_init(|| Ok(Arc::new(FourSystem::new(&Basis4::embedded()?, &pat(name))?)))
        .clone()
}

/// Exact 4-profile: twenty-three corner-tree formulas plus #3241.
pub fn profile4(pi: &Permutation) -> Result<Profile> {
    profile4_with(pi, Profile4Options::default())
}

pub fn profile4_with(pi: &Permutation, options: Profile4Options) -> Result<Profile> {
    let n = pi.len();
    if n < 4 {
        return Ok(Profile::zeros(4));
    }
    if options.algorithm == FourthCount::Brute {
        return k_profile_brute(pi, 4);
    }
    let sys = system(options.algorithm)?;
    let jobs = sys.trees.len() + 1;
    let mut counts: Vec<BigRational> = options.exec.map_range(jobs, |j| {
        if j < sys.trees.len() {
            as_rational(count_corner_tree(&sys.trees[j], pi))
        } else {
            as_rational(match options.algorithm {
                FourthCount::Count3214 => count_3214_strips(pi, options.m),
                _ => count_3241_fast(pi, options.m),
            })
        }
    });
    let extra = counts.pop().expect("extra count present");
    let mut values: Vec<BigRational> = sys
        .rows
        .iter()
        .map(|row| row.iter().fold(BigRational::zero(), |acc, (t, c)| acc + &counts[*t] * c))
        .collect();
    values.push(extra);
    let profile: Vec<BigUint> = sys
        .inverse
        .iter()
        .map(|row| rational_to_count(&row.iter().zip(&values).fold(BigRational::zero(), |acc, (a, v)| acc + a * v)))
        .collect();
    debug_assert_eq!(profile.iter().sum::<BigUint>(), binomial(n as u64, 4));
    Ok(Profile::from_counts(4, profile))
}

/// `#σ(π)` for `|σ| ≤ 4` without enumerating subsets.
///
/// Sizes 3 and the 4-patterns in the symmetry classes of 1234, 2134 and 2143
/// use corner-tree formulas directly, the class of 3241 uses the strip
/// algorithm, and the remaining 4-patterns go through [`profile4`]. Larger
/// patterns return [`Error::NoFastPath`].
pub fn count_pattern_fast(sigma: &Pattern, pi: &Permutation) -> Result<BigUint> {
    count_pattern_fast_with(sigma, pi, Profile4Options::default())
}

pub fn count_pattern_fast_with(sigma: &Pattern, pi: &Permutation, options: Profile4Options) -> Result<BigUint> {
    let (k, n) = (sigma.len(), pi.len());
    if k > 4 {
        return Err(Error::NoFastPath(k));
    }
    if k > n {
        return Ok(BigUint::zero());
    }
    match k {
        0 => return Ok(BigUint::from(1u32)),
        1 => return Ok(BigUint::from(n)),
        2 => {
            let inc = count_corner_tree(&CornerTree::chain(&[crate::corner::CornerLabel::NE]), pi);
            return Ok(if sigma.values()[0] == 1 { inc } else { binomial(n as u64, 2) - inc });
        }
        3 => return Ok(profile3(pi).get(sigma).clone()),
        _ => {}
    }
    for name in ["1234", "2134", "2143"] {
        if let Some(c) = count_by_symmetry(&builtin(name), &pat(name), sigma, pi) {
            return Ok(c);
        }
    }
    if options.algorithm != FourthCount::Brute {
        if let Some(g) = find_symmetry(&pat("3241"), sigma) {
            return Ok(count_3241_fast(&g.inverse().apply(pi), options.m));
        }
    }
    Ok(profile4_with(pi, options)?.get(sigma).clone())
}
