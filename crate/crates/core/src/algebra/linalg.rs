//! Exact linear algebra over the integers and rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Fraction-free incremental row echelon form over the integers.
///
/// Inserted rows are reduced against the stored ones by cross
/// multiplication and divided by their content, so entries stay integral and
/// reasonably small.
#[derive(Clone, Debug, Default)]
pub struct IntEchelon {
    width: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IntEchelon {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; returns whether it was
    /// independent of them, in which case it is kept.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.width, "row width mismatch");
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let g = row[*pivot].gcd(&v[*pivot]);
            let a = &row[*pivot] / &g;
            let b = &v[*pivot] / &g;
            for (x, r) in v.iter_mut().zip(row) {
                if r.is_zero() {
                    *x *= &a;
                } else {
                    *x = &*x * &a - &b * r;
                }
            }
            normalize(&mut v);
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

fn normalize(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut e = IntEchelon::new(width);
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

/// One stored row of a [`RationalEchelon`]: pivot entry 1, zero at the
/// pivots of all earlier rows, plus the combination of inserted generators
/// it equals.
#[derive(Clone, Debug)]
pub struct EchelonRow {
    pub pivot: usize,
    pub values: Vec<BigRational>,
    pub combination: BTreeMap<usize, BigRational>,
}

/// Incremental row echelon form over the rationals that remembers, for each
/// stored row, which combination of the inserted generators produced it.
#[derive(Clone, Debug, Default)]
pub struct RationalEchelon {
    width: usize,
    rows: Vec<EchelonRow>,
}

impl RationalEchelon {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new() }
    }

    pub fn rows(&self) -> &[EchelonRow] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Subtracts stored rows from `v`. Returns the combination of generators
    /// that was subtracted.
    pub fn reduce(&self, v: &mut [BigRational]) -> BTreeMap<usize, BigRational> {
        assert_eq!(v.len(), self.width, "row width mismatch");
        let mut taken: BTreeMap<usize, BigRational> = BTreeMap::new();
        for row in &self.rows {
            let f = v[row.pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(&row.values) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
            for (g, c) in &row.combination {
                add_into(&mut taken, *g, &f * c);
            }
        }
        taken
    }

    /// Inserts generator number `id` with coordinates `v`; returns whether it
    /// was independent of the generators inserted so far.
    pub fn insert(&mut self, id: usize, mut v: Vec<BigRational>) -> bool {
        let taken = self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let scale = v[pivot].recip();
        for x in v.iter_mut() {
            *x *= &scale;
        }
        let mut combination = BTreeMap::new();
        combination.insert(id, BigRational::one());
        for (g, c) in taken {
            add_into(&mut combination, g, -c);
        }
        for c in combination.values_mut() {
            *c *= &scale;
        }
        self.rows.push(EchelonRow { pivot, values: v, combination });
        true
    }
}

fn add_into(map: &mut BTreeMap<usize, BigRational>, key: usize, c: BigRational) {
    let slot = map.entry(key).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        map.remove(&key);
    }
}

/// Basis of `{x : A·x = 0}` for a rational matrix given by rows.
pub fn nullspace(rows: &[Vec<BigRational>], width: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(sel) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, sel);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); width];
            x[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -m[i][f].clone();
            }
            x
        })
        .collect()
}

/// Whether every entry is an integer.
pub fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Scales a nonzero vector so its entries are coprime integers with the first
/// nonzero entry positive.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    normalize(&mut out);
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in out.iter_mut() {
            *x = -&*x;
        }
    }
    out
}
