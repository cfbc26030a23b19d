//! Permutations in one-line notation, the dihedral symmetries of their graphs,
//! and the brute-force pattern counters every fast path is checked against.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A permutation of `1..=n` in one-line notation.
///
/// The same type doubles as a pattern. The empty permutation is allowed and
/// plays the role of the unit pattern, which occurs exactly once in
/// everything.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    values: Vec<u32>,
}

/// Alias used where a permutation plays the role of the small pattern.
pub type Pattern = Permutation;

impl Permutation {
    /// Validates that `values` is a bijection on `1..=values.len()`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(Error::OutOfRange { value: v as i64, n });
            }
            let slot = &mut seen[v as usize - 1];
            if *slot {
                return Err(Error::DuplicateValue(v as u64));
            }
            *slot = true;
        }
        Ok(Self { values })
    }

    /// Builds a permutation from arbitrary signed tokens.
    pub fn from_tokens(tokens: &[i64]) -> Result<Self> {
        let n = tokens.len();
        let values = tokens
            .iter()
            .map(|&t| {
                if t < 1 || t as u64 > n as u64 {
                    Err(Error::OutOfRange { value: t, n })
                } else {
                    Ok(t as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Self::new(values.clone()).is_ok());
        Self { values }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            values: (1..=n as u32).collect(),
        }
    }

    pub fn reversed_identity(n: usize) -> Self {
        Self {
            values: (1..=n as u32).rev().collect(),
        }
    }

    /// Uniform random permutation by Fisher–Yates.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut values: Vec<u32> = (1..=n as u32).collect();
        values.shuffle(rng);
        Self { values }
    }

    /// The order-isomorphism class of an arbitrary sequence of distinct keys.
    pub fn standardize<T: Ord>(keys: &[T]) -> Self {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut values = vec![0u32; keys.len()];
        for (rank, &i) in order.iter().enumerate() {
            values[i] = rank as u32 + 1;
        }
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One-line values `π(1), …, π(n)`.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    /// `π(i)` for a 1-based position.
    pub fn at(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Self { values: inv }
    }

    pub fn reverse(&self) -> Self {
        Self {
            values: self.values.iter().rev().copied().collect(),
        }
    }

    /// Rank of this permutation in the lexicographic order of `S_n`.
    pub fn lex_rank(&self) -> usize {
        let n = self.len();
        let mut rank = 0usize;
        for i in 0..n {
            let smaller_after = self.values[i + 1..]
                .iter()
                .filter(|&&v| v < self.values[i])
                .count();
            rank = rank * (n - i) + smaller_after;
        }
        rank
    }

    /// Compact pattern text: digits run together when every value is a single
    /// digit (`2143`), space separated otherwise.
    pub fn to_pattern_string(&self) -> String {
        if self.len() <= 9 {
            self.values.iter().map(|v| v.to_string()).collect()
        } else {
            self.to_string()
        }
    }

    /// Parses a pattern written either as a digit run (`"2143"`) or with
    /// separators (`"2 1 4 3"`, `"2,1,4,3"`).
    pub fn parse_pattern(text: &str) -> Result<Self> {
        let t = text.trim();
        if !t.is_empty() && t.chars().all(|c| c.is_ascii_digit()) && t.len() <= 9 {
            let tokens: Vec<i64> = t.bytes().map(|b| (b - b'0') as i64).collect();
            return Self::from_tokens(&tokens);
        }
        t.parse()
    }
}

impl Ord for Permutation {
    /// Shorter permutations first; lexicographic within a size.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.values.cmp(&other.values))
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Whitespace- or comma-separated integers.
    fn from_str(s: &str) -> Result<Self> {
        let tokens = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::Malformed(format!("not an integer: {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_tokens(&tokens)
    }
}

/// All permutations of size `k` in lexicographic order.
pub fn patterns_of_size(k: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = (1..=k as u32).collect();
    loop {
        out.push(Permutation {
            values: current.clone(),
        });
        if !next_permutation(&mut current) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// An element of the dihedral group of the square acting on permutation
/// graphs.
///
/// The action on a point `(x, y)` is: optionally transpose the coordinates,
/// then optionally reflect each axis. `rev` reflects the position axis and
/// `inv` transposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct D4Element {
    swap: bool,
    flip_x: bool,
    flip_y: bool,
}

impl D4Element {
    pub const IDENTITY: Self = Self {
        swap: false,
        flip_x: false,
        flip_y: false,
    };

    pub fn rev() -> Self {
        Self {
            flip_x: true,
            ..Self::IDENTITY
        }
    }

    pub fn inv() -> Self {
        Self {
            swap: true,
            ..Self::IDENTITY
        }
    }

    /// The eight group elements in a fixed order, identity first.
    pub fn all() -> [Self; 8] {
        let mut out = [Self::IDENTITY; 8];
        for (bits, slot) in out.iter_mut().enumerate() {
            *slot = Self {
                swap: bits & 4 != 0,
                flip_x: bits & 1 != 0,
                flip_y: bits & 2 != 0,
            };
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Self) -> Self {
        let (ofx, ofy) = if self.swap {
            (other.flip_y, other.flip_x)
        } else {
            (other.flip_x, other.flip_y)
        };
        Self {
            swap: self.swap ^ other.swap,
            flip_x: self.flip_x ^ ofx,
            flip_y: self.flip_y ^ ofy,
        }
    }

    pub fn inverse(self) -> Self {
        D4Element::all()
            .into_iter()
            .find(|g| g.compose(self) == Self::IDENTITY)
            .expect("D4 is a group")
    }

    pub(crate) fn swaps_axes(self) -> bool {
        self.swap
    }

    pub(crate) fn flips(self) -> (bool, bool) {
        (self.flip_x, self.flip_y)
    }

    /// Image of a permutation: the graph of the result is this symmetry
    /// applied to the graph of `pi`.
    pub fn apply(self, pi: &Permutation) -> Permutation {
        let n = pi.len() as u32;
        let mut out = vec![0u32; pi.len()];
        for (i, &v) in pi.values.iter().enumerate() {
            let (mut x, mut y) = (i as u32 + 1, v);
            if self.swap {
                std::mem::swap(&mut x, &mut y);
            }
            if self.flip_x {
                x = n + 1 - x;
            }
            if self.flip_y {
                y = n + 1 - y;
            }
            out[x as usize - 1] = y;
        }
        Permutation { values: out }
    }
}

impl fmt::Display for D4Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "D4(swap={}, flip_x={}, flip_y={})",
            self.swap, self.flip_x, self.flip_y
        )
    }
}

/// Counts occurrences of `sigma` in `pi` by walking all increasing index
/// tuples, pruning a prefix as soon as it stops matching.
pub fn count_pattern_brute(sigma: &Pattern, pi: &Permutation) -> BigUint {
    let k = sigma.len();
    if k == 0 {
        return BigUint::from(1u32);
    }
    if k > pi.len() {
        return BigUint::zero();
    }
    let mut chosen = Vec::with_capacity(k);
    BigUint::from(extend_match(sigma.values(), pi.values(), 0, &mut chosen))
}

fn extend_match(sigma: &[u32], pi: &[u32], start: usize, chosen: &mut Vec<u32>) -> u64 {
    let j = chosen.len();
    if j == sigma.len() {
        return 1;
    }
    let remaining = sigma.len() - j;
    let mut total = 0;
    for i in start..=pi.len() - remaining {
        let v = pi[i];
        let consistent = chosen
            .iter()
            .zip(sigma)
            .all(|(&u, &s)| (u < v) == (s < sigma[j]));
        if consistent {
            chosen.push(v);
            total += extend_match(sigma, pi, i + 1, chosen);
            chosen.pop();
        }
    }
    total
}

/// The counts of every pattern of one size, indexed by lexicographic rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    k: usize,
    counts: Vec<BigUint>,
}

impl Profile {
    pub fn zeros(k: usize) -> Self {
        Self {
            k,
            counts: vec![BigUint::zero(); factorial(k)],
        }
    }

    pub fn from_counts(k: usize, counts: Vec<BigUint>) -> Self {
        assert_eq!(counts.len(), factorial(k), "profile length must be k!");
        Self { k, counts }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn get(&self, pattern: &Pattern) -> &BigUint {
        assert_eq!(pattern.len(), self.k);
        &self.counts[pattern.lex_rank()]
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `(pattern, count)` pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Permutation, &BigUint)> {
        patterns_of_size(self.k).into_iter().zip(self.counts.iter())
    }

    /// The profile of `g·π` given this profile of `π`.
    pub fn transformed(&self, g: D4Element) -> Self {
        let mut counts = vec![BigUint::zero(); self.counts.len()];
        for (sigma, c) in self.iter() {
            counts[g.apply(&sigma).lex_rank()] = c.clone();
        }
        Self { k: self.k, counts }
    }
}

/// The full `k`-profile by enumerating every `k`-subset of positions.
pub fn k_profile_brute(pi: &Permutation, k: usize) -> Result<Profile> {
    let n = pi.len();
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let mut counts = vec![0u64; factorial(k)];
    let mut idx: Vec<usize> = (0..k).collect();
    let mut keys = vec![0u32; k];
    loop {
        for (key, &i) in keys.iter_mut().zip(&idx) {
            *key = pi.values[i];
        }
        counts[Permutation::standardize(&keys).lex_rank()] += 1;
        // advance to the next k-combination of 0..n
        let mut j = k;
        loop {
            if j == 0 {
                let counts = counts.into_iter().map(BigUint::from).collect();
                return Ok(Profile { k, counts });
            }
            j -= 1;
            if idx[j] < n - k + j {
                break;
            }
        }
        idx[j] += 1;
        for t in j + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

pub(crate) fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// `C(n, k)` exactly.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Permutation {
        Permutation::parse_pattern(s).unwrap()
    }

    #[test]
    fn parses_valid_and_rejects_bad_input() {
        assert_eq!(p("2364751").len(), 7);
        assert_eq!(Permutation::from_tokens(&[1]).unwrap(), Permutation::identity(1));
        assert_eq!(
            Permutation::from_tokens(&[2, 2, 1]),
            Err(Error::DuplicateValue(2))
        );
        assert!(matches!(
            Permutation::from_tokens(&[0, 1]),
            Err(Error::OutOfRange { value: 0, .. })
        ));
        assert!(matches!(
            "1 2 4".parse::<Permutation>(),
            Err(Error::OutOfRange { value: 4, n: 3 })
        ));
        assert!(matches!("1 x".parse::<Permutation>(), Err(Error::Malformed(_))));
        assert_eq!("3, 1,2".parse::<Permutation>().unwrap(), p("312"));
        assert!("".parse::<Permutation>().unwrap().is_empty());
    }

    #[test]
    fn brute_counts_small_examples() {
        assert_eq!(count_pattern_brute(&p("132"), &p("2364751")), 7u32.into());
        for n in 0..9usize {
            let id = Permutation::identity(n);
            let pairs = (n * n.saturating_sub(1) / 2) as u32;
            assert_eq!(count_pattern_brute(&p("12"), &id), pairs.into());
            assert_eq!(count_pattern_brute(&p("21"), &id), 0u32.into());
        }
        assert_eq!(
            count_pattern_brute(&Permutation::identity(0), &p("231")),
            1u32.into()
        );
    }

    #[test]
    fn brute_2143_matches_nested_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pi = Permutation::random(9, &mut rng);
        let v = pi.values();
        let mut direct = 0u32;
        for a in 0..9 {
            for b in a + 1..9 {
                for c in b + 1..9 {
                    for d in c + 1..9 {
                        if v[b] < v[a] && v[a] < v[d] && v[d] < v[c] {
                            direct += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count_pattern_brute(&p("2143"), &pi), direct.into());
    }

    #[test]
    fn profiles() {
        let prof = k_profile_brute(&p("21"), 2).unwrap();
        assert_eq!(prof.counts(), &[0u32.into(), 1u32.into()]);
        let prof = k_profile_brute(&p("2364751"), 3).unwrap();
        assert_eq!(prof.get(&p("132")), &7u32.into());
        assert_eq!(prof.total(), binomial(7, 3));
        assert_eq!(
            k_profile_brute(&p("12"), 3),
            Err(Error::KTooLarge { k: 3, n: 2 })
        );
    }

    #[test]
    fn d4_basics() {
        assert_eq!(D4Element::rev().apply(&p("123")), p("321"));
        assert_eq!(D4Element::inv().apply(&p("231")), p("312"));
        let all = D4Element::all();
        for (i, g) in all.iter().enumerate() {
            for h in &all[i + 1..] {
                assert_ne!(g, h);
            }
        }
        let (r, v) = (D4Element::rev(), D4Element::inv());
        assert_eq!(r.compose(r), D4Element::IDENTITY);
        assert_eq!(v.compose(v), D4Element::IDENTITY);
        // the square's rotation has order four
        let rot = r.compose(v);
        assert_ne!(rot.compose(rot), D4Element::IDENTITY);
        assert_eq!(rot.compose(rot).compose(rot).compose(rot), D4Element::IDENTITY);
    }

    #[test]
    fn lex_order_and_rank_agree() {
        for k in 0..6 {
            let pats = patterns_of_size(k);
            assert_eq!(pats.len(), factorial(k));
            for (i, s) in pats.iter().enumerate() {
                assert_eq!(s.lex_rank(), i);
            }
            assert!(pats.windows(2).all(|w| w[0] < w[1]));
        }
    }

    fn perm_strategy(max: usize) -> impl Strategy<Value = Permutation> {
        (0..=max).prop_flat_map(|n| {
            Just((1..=n as u32).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::new(v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn group_relation_and_action(pi in perm_strategy(12)) {
            let (r, v) = (D4Element::rev(), D4Element::inv());
            // rev∘inv is a quarter turn: four applications return to the start
            let mut turned = pi.clone();
            for _ in 0..4 {
                turned = r.apply(&v.apply(&turned));
            }
            prop_assert_eq!(&turned, &pi);
            for g in D4Element::all() {
                for h in D4Element::all() {
                    prop_assert_eq!(g.compose(h).apply(&pi), g.apply(&h.apply(&pi)));
                }
                prop_assert_eq!(g.inverse().apply(&g.apply(&pi)), pi.clone());
            }
        }

        #[test]
        fn brute_count_is_d4_equivariant(pi in perm_strategy(9), s in perm_strategy(4)) {
            let base = count_pattern_brute(&s, &pi);
            for g in D4Element::all() {
                prop_assert_eq!(count_pattern_brute(&g.apply(&s), &g.apply(&pi)), base.clone());
            }
        }

        #[test]
        fn profile_sums_to_binomial(pi in perm_strategy(10), k in 1usize..5) {
            prop_assume!(k <= pi.len());
            let prof = k_profile_brute(&pi, k).unwrap();
            prop_assert_eq!(prof.total(), binomial(pi.len() as u64, k as u64));
            for (sigma, c) in prof.iter() {
                prop_assert_eq!(c, &count_pattern_brute(&sigma, &pi));
            }
        }

        #[test]
        fn self_occurrence(s in perm_strategy(6), t in perm_strategy(6)) {
            prop_assert_eq!(count_pattern_brute(&s, &s), BigUint::from(1u32));
            if s.len() == t.len() && s != t {
                prop_assert_eq!(count_pattern_brute(&t, &s), BigUint::zero());
            }
        }
    }
}
