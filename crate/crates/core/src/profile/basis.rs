//! The persisted 23-formula basis of exactly computable 4-pattern
//! combinations, and the 24 x 24 system completing it to the 4-profile.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{span_dimension, CornerTreeFormula, SpanOptions};
use crate::corner::CornerTree;
use crate::error::{Error, Result};
use crate::perm::{patterns_of_size, Pattern};

const EMBEDDED: &str = include_str!("../../data/basis4.json");

/// SHA-256 of `data/basis4.json`.
pub const BASIS4_SHA256: &str = "fd6c12da5d515cc69a9c1f7a67a1549a6d35dd30a83eb7e2fe79f0b64ef095d9";

/// Formulas whose expansions are supported on 4-patterns and span all
/// corner-tree-computable 4-pattern combinations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis4 {
    pub formulas: Vec<CornerTreeFormula>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Basis4 {
    /// Recomputes the basis from scratch by pivoting over all corner trees
    /// with at most four vertices in enumeration order.
    pub fn generate() -> Self {
        let span = span_dimension(4, SpanOptions::default()).expect("size 4 is within the default bound");
        Self { formulas: span.basis }
    }

    /// The copy compiled into the library, checked against its hash.
    pub fn embedded() -> Result<Self> {
        Self::parse_checked(EMBEDDED)
    }

    /// Reads a basis file; it must match the compiled-in hash.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::BasisMissing(format!("{}: {e}", path.display())))?;
        Self::parse_checked(&text)
    }

    fn parse_checked(text: &str) -> Result<Self> {
        let digest = sha256_hex(text.as_bytes());
        if digest != BASIS4_SHA256 {
            return Err(Error::BasisMissing(format!("hash {digest} does not match {BASIS4_SHA256}")));
        }
        Self::from_json_str(text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let bad = |what: String| Error::BasisMissing(what);
        let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        if v.get("k").and_then(Value::as_u64) != Some(4) {
            return Err(bad("expected \"k\": 4".into()));
        }
        let formulas = v
            .get("formulas")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing formulas".into()))?
            .iter()
            .map(CornerTreeFormula::from_json)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| bad(e.to_string()))?;
        Ok(Self { formulas })
    }

    /// Canonical file contents, newline terminated.
    pub fn to_json_string(&self) -> String {
        let doc = json!({
            "k": 4,
            "formulas": self.formulas.iter().map(CornerTreeFormula::to_json).collect::<Vec<_>>(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        s.push('\n');
        s
    }
}

/// The basis formulas plus one extra pattern count, as an invertible linear
/// map onto the 4-profile.
#[derive(Debug)]
pub(crate) struct FourSystem {
    /// Distinct trees over all formulas.
    pub trees: Vec<CornerTree>,
    /// For each formula, `(tree index, coefficient)`.
    pub rows: Vec<Vec<(usize, BigRational)>>,
    /// Inverse of the 24 x 24 coefficient matrix; row `σ` gives `#σ` as a
    /// combination of the formula values followed by the extra count.
    pub inverse: Vec<Vec<BigRational>>,
}

impl FourSystem {
    pub fn new(basis: &Basis4, extra: &Pattern) -> Result<Self> {
        let patterns = patterns_of_size(4);
        if basis.formulas.len() != 23 {
            return Err(Error::BasisMissing(format!("expected 23 formulas, found {}", basis.formulas.len())));
        }
        let mut trees: Vec<CornerTree> = basis.formulas.iter().flat_map(|f| f.iter().map(|(t, _)| t.clone())).collect();
        trees.sort();
        trees.dedup();
        let mut matrix = Vec::with_capacity(24);
        let mut rows = Vec::with_capacity(23);
        for f in &basis.formulas {
            let expansion = f.expand()?;
            if expansion.iter().any(|(p, _)| p.len() != 4) {
                return Err(Error::BasisMissing("a basis formula has terms outside S_4".into()));
            }
            matrix.push(patterns.iter().map(|p| expansion.coefficient(p)).collect::<Vec<_>>());
            rows.push(
                f.iter()
                    .map(|(t, c)| (trees.binary_search(t).expect("collected above"), c.clone()))
                    .collect(),
            );
        }
        matrix.push(
            patterns
                .iter()
                .map(|p| if p == extra { BigRational::one() } else { BigRational::zero() })
                .collect(),
        );
        let inverse = invert(matrix).ok_or_else(|| Error::BasisMissing(format!("basis plus {extra} is singular")))?;
        Ok(Self { trees, rows, inverse })
    }
}

/// Gauss-Jordan inverse of a square rational matrix.
fn invert(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i32))).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &scale;
            inv[col][j] *= &scale;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}
