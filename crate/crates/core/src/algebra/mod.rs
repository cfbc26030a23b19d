//! Formal linear combinations of patterns and of corner trees, and the exact
//! rational machinery relating the two.

mod builtin;
mod expand;
pub mod linalg;
mod span;

pub use builtin::{builtin_formula, builtin_formulas, BUILTIN_NAMES};
pub use expand::{expand_formula, expand_tree, expand_tree_with_bound, Expander, DEFAULT_BOUND};
pub use span::{orthogonal_complement, orthogonal_complement_4, solve_for_target, span_dimension, SpanOptions, SpanResult};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, ToBigInt};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corner::{count_corner_tree, CornerTree};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::perm::{count_pattern_brute, D4Element, Pattern, Permutation};

/// Parses `"3"`, `"-1/2"` and the like.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Format(format!("not a rational number: {text:?}"));
    let t = text.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let num = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

fn rational_to_json(c: &BigRational) -> Value {
    if c.is_integer() {
        if let Some(i) = c.numer().to_i64() {
            return Value::from(i);
        }
    }
    Value::String(c.to_string())
}

fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Format(format!("expected a rational, got {other}"))),
    }
}

/// A finite rational combination of patterns, possibly of mixed sizes.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternSum {
    terms: BTreeMap<Pattern, BigRational>,
}

impl PatternSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(pattern: Pattern) -> Self {
        let mut s = Self::new();
        s.add_term(pattern, BigRational::one());
        s
    }

    pub fn add_term(&mut self, pattern: Pattern, coefficient: BigRational) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(pattern);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, pattern: &Pattern) -> BigRational {
        self.terms.get(pattern).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pattern, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.terms.keys().map(Permutation::len).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        let mut out = Self::new();
        for (p, a) in &self.terms {
            out.add_term(p.clone(), a * c);
        }
        out
    }

    /// Only the terms whose pattern has exactly `k` entries.
    pub fn restricted_to_size(&self, k: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.len() == k)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Inner product making single patterns orthonormal.
    pub fn dot(&self, other: &Self) -> BigRational {
        self.terms
            .iter()
            .filter_map(|(p, a)| other.terms.get(p).map(|b| a * b))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Applies `g` to every pattern.
    pub fn transform(&self, g: D4Element) -> Self {
        let mut out = Self::new();
        for (p, c) in &self.terms {
            out.add_term(g.apply(p), c.clone());
        }
        out
    }

    /// `Σ a_σ · #σ(π)` with brute-force pattern counts.
    pub fn evaluate_brute(&self, pi: &Permutation) -> BigRational {
        self.terms
            .iter()
            .map(|(p, c)| c * BigRational::from_integer(count_pattern_brute(p, pi).to_bigint().expect("unsigned")))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// JSON object mapping pattern strings to coefficients. Integral
    /// coefficients that fit in 64 bits are JSON numbers, all others strings
    /// such as `"-1/2"`.
    pub fn to_json(&self) -> Value {
        Value::Object(
            self.terms
                .iter()
                .map(|(p, c)| (p.to_pattern_string(), rational_to_json(c)))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Format("pattern sum must be a JSON object".into()))?;
        let mut out = Self::new();
        for (k, c) in obj {
            out.add_term(Permutation::parse_pattern(k)?, rational_from_json(c)?);
        }
        Ok(out)
    }
}

impl FromIterator<(Pattern, BigRational)> for PatternSum {
    fn from_iter<I: IntoIterator<Item = (Pattern, BigRational)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (p, c) in iter {
            out.add_term(p, c);
        }
        out
    }
}

impl Add for &PatternSum {
    type Output = PatternSum;
    fn add(self, rhs: &PatternSum) -> PatternSum {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PatternSum {
    type Output = PatternSum;
    fn sub(self, rhs: &PatternSum) -> PatternSum {
        self + &-rhs
    }
}

impl Neg for &PatternSum {
    type Output = PatternSum;
    fn neg(self) -> PatternSum {
        self.scaled(&-BigRational::one())
    }
}

impl fmt::Display for PatternSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}{}", p.to_pattern_string())?;
            } else {
                write!(f, "{sign}{mag}·{}", p.to_pattern_string())?;
            }
        }
        Ok(())
    }
}

/// A rational combination of corner trees, keyed by canonical tree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CornerTreeFormula {
    terms: BTreeMap<CornerTree, BigRational>,
}

#[derive(Serialize, Deserialize)]
struct FormulaTerm {
    tree: String,
    num: String,
    den: String,
}

impl CornerTreeFormula {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a formula from `(notation, coefficient)` pairs.
    pub fn from_notation(terms: &[(&str, &str)]) -> Result<Self> {
        let mut f = Self::new();
        for (tree, c) in terms {
            f.add_term(tree.parse()?, parse_rational(c)?);
        }
        Ok(f)
    }

    pub fn add_term(&mut self, tree: CornerTree, coefficient: BigRational) {
        if coefficient.is_zero() {
            return;
        }
        let key = tree.canonical();
        let slot = self.terms.entry(key).or_insert_with(BigRational::zero);
        *slot += coefficient;
        if slot.is_zero() {
            let key = tree.canonical();
            self.terms.remove(&key);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CornerTree, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_tree_size(&self) -> usize {
        self.terms.keys().map(CornerTree::size).max().unwrap_or(0)
    }

    pub fn transform(&self, g: D4Element) -> Self {
        let mut out = Self::new();
        for (t, c) in &self.terms {
            out.add_term(t.transform(g), c.clone());
        }
        out
    }

    /// `Σ c_T · #T(π)`.
    pub fn evaluate(&self, pi: &Permutation) -> BigRational {
        self.evaluate_with(pi, Execution::default())
    }

    pub fn evaluate_with(&self, pi: &Permutation, exec: Execution) -> BigRational {
        let terms: Vec<(&CornerTree, &BigRational)> = self.terms.iter().collect();
        exec.map(&terms, |(t, c)| {
            let count = count_corner_tree(t, pi).to_bigint().expect("unsigned");
            *c * BigRational::from_integer(count)
        })
        .into_iter()
        .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// The equivalent combination of patterns.
    pub fn expand(&self) -> Result<PatternSum> {
        expand_formula(self)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<FormulaTerm> = self
            .terms
            .iter()
            .map(|(t, c)| FormulaTerm {
                tree: t.to_string(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        serde_json::to_value(terms).expect("plain data serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let terms: Vec<FormulaTerm> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Format(format!("formula JSON: {e}")))?;
        let mut f = Self::new();
        for term in terms {
            let num = BigInt::from_str(&term.num).map_err(|_| Error::Format(format!("bad numerator {:?}", term.num)))?;
            let den = BigInt::from_str(&term.den).map_err(|_| Error::Format(format!("bad denominator {:?}", term.den)))?;
            if den.is_zero() {
                return Err(Error::Format("zero denominator".into()));
            }
            f.add_term(term.tree.parse()?, BigRational::new(num, den));
        }
        Ok(f)
    }
}

impl FromIterator<(CornerTree, BigRational)> for CornerTreeFormula {
    fn from_iter<I: IntoIterator<Item = (CornerTree, BigRational)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (t, c) in iter {
            out.add_term(t, c);
        }
        out
    }
}

impl fmt::Display for CornerTreeFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})·{t}")?;
        }
        Ok(())
    }
}
