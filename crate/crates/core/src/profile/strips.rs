//! Strip-decomposition counters for #3214 and #3241.

use std::ops::Bound::{Excluded, Included};

use num_bigint::BigUint;

use crate::perm::Permutation;
use crate::sumtree::{PointSumTree2D, SumTree};

/// `⌊n^{1/3}⌋`, at least 1.
pub fn default_m_3214(n: usize) -> usize {
    let mut m = (n as f64).cbrt() as usize;
    while (m + 1).pow(3) <= n {
        m += 1;
    }
    while m > 1 && m.pow(3) > n {
        m -= 1;
    }
    m.max(1)
}

/// `⌊√n⌋`, at least 1.
pub fn default_m_3241(n: usize) -> usize {
    n.isqrt().max(1)
}

fn values_usize(pi: &Permutation) -> Vec<usize> {
    pi.values().iter().map(|&v| v as usize).collect()
}

/// `pinv[v]` is the 1-based position of value `v`; index 0 unused.
fn inverse_usize(vals: &[usize]) -> Vec<usize> {
    let mut pinv = vec![0usize; vals.len() + 1];
    for (x, &v) in vals.iter().enumerate() {
        pinv[v] = x + 1;
    }
    pinv
}

fn choose2(k: u64) -> i128 {
    let k = k as i128;
    k * (k - 1) / 2
}

fn to_count(t: i128) -> BigUint {
    assert!(t >= 0, "negative pattern count {t}");
    BigUint::from(t as u128)
}

/// Sum over value strips of the 321s strictly below the strip that precede
/// each strip entry. With `subtract_saved`, only 321s whose last entry lies
/// in the same position strip as the strip entry are counted.
fn strip_321_scan(vals: &[usize], m: usize, subtract_saved: bool) -> i128 {
    let n = vals.len();
    let mut total = 0i128;
    let mut below = 0;
    while below < n {
        let top = (below + m).min(n);
        let size = below.max(1);
        let mut s1 = SumTree::<u64>::new(size);
        let mut s21 = SumTree::<u64>::new(size);
        let mut c321 = 0i128;
        let mut saved = 0i128;
        for (i, &v) in vals.iter().enumerate() {
            if v <= below {
                c321 += s21.suffix_excl(v) as i128;
                let higher_before = s1.suffix_excl(v);
                s21.add(v, &higher_before);
                s1.add(v, &1);
            } else if v <= top {
                total += c321 - if subtract_saved { saved } else { 0 };
            }
            if subtract_saved && (i + 1) % m == 0 {
                saved = c321;
            }
        }
        below = top;
    }
    total
}

/// Exact #3214 by strip decomposition in `Õ(n^2/m + n m^2)` time and
/// `Õ(n)` space. `m` defaults to `⌊n^{1/3}⌋`; values below 1 act as 1.
pub fn count_3214_strips(pi: &Permutation, m: Option<usize>) -> BigUint {
    let n = pi.len();
    if n < 4 {
        return BigUint::from(0u32);
    }
    let m = m.unwrap_or_else(|| default_m_3214(n)).max(1);
    let vals = values_usize(pi);
    let pinv = inverse_usize(&vals);

    // 3 and 4 in different value strips, 1 and 4 in the same position strip
    let mut t = strip_321_scan(&vals, m, true);
    // 1 and 4 in different position strips; 3214 is its own inverse
    t += strip_321_scan(&pinv[1..], m, false);

    let mut points = PointSumTree2D::<u64>::new(n, (1..=n).map(|x| (x, vals[x - 1]))).expect("points inside the grid");
    for x in 1..=n {
        points.add(x, vals[x - 1], 1).expect("registered point");
    }
    for i4 in 1..=n {
        let v4 = vals[i4 - 1];
        let position_strip = (i4 - 1) / m * m + 1;
        let value_strip = (v4 - 1) / m * m + 1;
        for i3 in position_strip..i4 {
            let v3 = vals[i3 - 1];
            if v3 > v4 {
                continue;
            }
            for v1 in value_strip.max(v3 + 1)..v4 {
                let i1 = pinv[v1];
                if i1 < i3 {
                    let inside = points
                        .box_sum((Excluded(i1), Excluded(i3)), (Excluded(v3), Excluded(v1)))
                        .expect("box inside the grid");
                    t += inside as i128;
                }
            }
        }
    }
    to_count(t)
}

/// Exact #3241 by strip decomposition in `Õ(n^2/m + n m)` time and
/// `Õ(n m)` space. `m` defaults to `⌊√n⌋`; values below 1 act as 1.
pub fn count_3241_fast(pi: &Permutation, m: Option<usize>) -> BigUint {
    let n = pi.len();
    if n < 4 {
        return BigUint::from(0u32);
    }
    let m = m.unwrap_or_else(|| default_m_3241(n)).max(1);
    let vals = values_usize(pi);
    let pinv = inverse_usize(&vals);
    let mut t = 0i128;

    let mut lo = 1;
    while lo <= n {
        let hi = (lo + m - 1).min(n);
        let mut c = 0i128;
        let mut a1 = SumTree::<u64>::new(n);
        let mut a12 = SumTree::<u64>::new(n);
        let mut b1 = SumTree::<u64>::new(n);
        let mut b21 = SumTree::<u64>::new(n);
        for &y in &vals {
            if y < lo {
                b1.add(y, &1);
                let above = b1.suffix_excl(y);
                b21.add(y, &above);
                let unseen_below = (y - 1) as u64 - b1.prefix_excl(y);
                c += above as i128 * unseen_below as i128 - b21.suffix_excl(y) as i128;
            }
            if y > hi {
                a1.add(y, &1);
                let below = a1.prefix_excl(y);
                a12.add(y, &below);
                c += choose2(below) - a12.prefix_excl(y) as i128;
                let y_strip = (y - 1) / m * m;
                c -= choose2(a1.prefix_incl(y_strip)) - a12.prefix_incl(y_strip) as i128;
            }
            if (lo..=hi).contains(&y) {
                t += c;
            }
        }
        lo += m;
    }

    let same_strip_pairs = (1..=n).flat_map(|y| {
        let y_strip = (y - 1) / m * m;
        (y_strip + 1..y).map(move |z| (z, y))
    });
    let mut pairs = PointSumTree2D::<u64>::new(n, same_strip_pairs.map(|(z, y)| (pinv[z], pinv[y])))
        .expect("positions inside the grid");
    for y in 1..=n {
        let y_strip = (y - 1) / m * m;
        for z in y_strip + 1..y {
            pairs.add(pinv[z], pinv[y], 1).expect("registered pair");
        }
        for z in y + 1..=(y_strip + m).min(n) {
            if pinv[y] < pinv[z] {
                let found = pairs
                    .box_sum((Excluded(pinv[z]), Included(n)), (Excluded(pinv[y]), Excluded(pinv[z])))
                    .expect("box inside the grid");
                t += found as i128;
            }
        }
    }
    to_count(t)
}
