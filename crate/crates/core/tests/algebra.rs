use cornertree::algebra::{
    builtin_formula, expand_formula, expand_tree, orthogonal_complement_4, solve_for_target, span_dimension, SpanOptions,
};
use cornertree::corner::trees_up_to;
use cornertree::perm::patterns_of_size;
use cornertree::{count_corner_tree, count_pattern_brute, CornerLabel, CornerTree, D4Element, PatternSum, Permutation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(s: &str) -> Permutation {
    Permutation::parse_pattern(s).unwrap()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sum(pairs: &[(&str, i64)]) -> PatternSum {
    let mut out = PatternSum::new();
    for (pat, c) in pairs {
        out.add_term(p(pat), q(*c));
    }
    out
}

/// Vertices in preorder as (label, parent index).
fn flatten(tree: &CornerTree) -> Vec<(CornerLabel, Option<usize>)> {
    fn go(t: &CornerTree, parent: Option<usize>, out: &mut Vec<(CornerLabel, Option<usize>)>) {
        let me = out.len();
        out.push((t.label(), parent));
        for c in t.children() {
            go(c, Some(me), out);
        }
    }
    let mut out = Vec::new();
    go(tree, None, &mut out);
    out
}

/// Counts maps from the tree's vertices onto all positions of `sigma` that
/// respect every edge label.
fn surjective_occurrences(tree: &CornerTree, sigma: &Permutation) -> u64 {
    let verts = flatten(tree);
    let k = sigma.len();
    if k == 0 {
        return 0;
    }
    let mut count = 0;
    let mut map = vec![0usize; verts.len()];
    let total = k.pow(verts.len() as u32);
    for code in 0..total {
        let mut c = code;
        for m in map.iter_mut() {
            *m = c % k;
            c /= k;
        }
        let mut hit = vec![false; k];
        map.iter().for_each(|&i| hit[i] = true);
        if !hit.iter().all(|&h| h) {
            continue;
        }
        let ok = verts.iter().enumerate().all(|(v, (label, parent))| match parent {
            None => true,
            Some(u) => {
                let (pv, pu) = (map[v], map[*u]);
                let (sv, su) = (sigma.values()[pv], sigma.values()[pu]);
                (if label.is_west() { pv < pu } else { pv > pu }) && (if label.is_south() { sv < su } else { sv > su })
            }
        });
        if ok {
            count += 1;
        }
    }
    count
}

#[test]
fn expansion_coefficients_are_surjective_occurrence_counts() {
    for tree in trees_up_to(3) {
        let w = expand_tree(&tree).unwrap();
        for k in 1..=3 {
            for sigma in patterns_of_size(k) {
                let expected = surjective_occurrences(&tree, &sigma);
                assert_eq!(w.coefficient(&sigma), q(expected as i64), "{tree} onto {sigma}");
            }
        }
    }
}

#[test]
fn expansion_consistency_up_to_four_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let perms: Vec<Permutation> = (0..100).map(|i| Permutation::random(i % 10, &mut rng)).collect();
    for tree in trees_up_to(4) {
        let w = expand_tree(&tree).unwrap();
        for pi in &perms {
            assert_eq!(w.evaluate_brute(pi), BigRational::from_integer(count_corner_tree(&tree, pi).into()));
        }
    }
}

#[test]
fn expansion_commutes_with_symmetries() {
    for tree in trees_up_to(4) {
        let w = expand_tree(&tree).unwrap();
        for g in D4Element::all() {
            assert_eq!(expand_tree(&tree.transform(g)).unwrap(), w.transform(g), "{tree} under {g}");
        }
    }
}

#[test]
fn ten_tree_formula_expands_to_2143() {
    let a = builtin_formula("2143").unwrap();
    assert_eq!(a.len(), 10);
    assert_eq!(expand_formula(&a).unwrap(), sum(&[("2143", 1)]));
}

#[test]
fn pattern_formulas_expand_to_unit_vectors() {
    for name in ["123", "213", "1234", "2134"] {
        let f = builtin_formula(name).unwrap();
        assert_eq!(f.expand().unwrap(), sum(&[(name, 1)]), "{name}");
    }
}

#[test]
fn s_formula_matches_known_expansion() {
    let positive = sum(&[
        ("2134", 4),
        ("2143", 4),
        ("2314", 4),
        ("2341", 4),
        ("2413", 4),
        ("2431", 4),
        ("213", 2),
        ("231", 2),
    ]);
    let chain = sum(&[("1324", 2), ("1423", 2), ("2314", 2), ("2413", 2), ("3412", 2)]);
    let negative = sum(&[
        ("2134", 4),
        ("2143", 4),
        ("2314", 2),
        ("2413", 2),
        ("3124", 2),
        ("3142", 2),
        ("3412", 2),
        ("213", 2),
    ]);
    let tail = sum(&[("213", 1), ("231", 1)]);
    let expected = &(&(&positive + &chain) - &negative) - &tail;
    let s = builtin_formula("S").unwrap();
    assert_eq!(s.expand().unwrap(), expected);
}

#[test]
fn builtin_formulas_count_patterns() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for i in 0..50 {
        let pi = Permutation::random(i % 11, &mut rng);
        for name in ["123", "213", "1234", "2134", "2143"] {
            let f = builtin_formula(name).unwrap();
            let expected = BigRational::from_integer(count_pattern_brute(&p(name), &pi).into());
            assert_eq!(f.evaluate(&pi), expected, "{name} on {pi}");
        }
    }
    let n = 12u64;
    let id = Permutation::identity(n as usize);
    assert_eq!(
        builtin_formula("123").unwrap().evaluate(&id),
        BigRational::from_integer(BigInt::from(n * (n - 1) * (n - 2) / 6))
    );
}

#[test]
fn solver_round_trips_and_rejects() {
    let target = sum(&[("213", 1)]);
    let f = solve_for_target(&target, &trees_up_to(3)).unwrap().unwrap();
    assert_eq!(expand_formula(&f).unwrap(), target);
    assert!(solve_for_target(&sum(&[("3142", 1)]), &trees_up_to(4)).unwrap().is_none());
    assert!(solve_for_target(&PatternSum::new(), &trees_up_to(2)).unwrap().unwrap().is_empty());
}

#[test]
fn solver_soundness_on_size_three_targets() {
    let trees = trees_up_to(3);
    for sigma in patterns_of_size(3) {
        let mut target = PatternSum::single(sigma.clone());
        target.add_term(p("12"), q(3));
        let f = solve_for_target(&target, &trees).unwrap().expect("every 3-pattern is reachable");
        assert_eq!(expand_formula(&f).unwrap(), target);
    }
}

fn known_n() -> PatternSum {
    let mut n = PatternSum::new();
    for s in ["1324", "4231", "1432", "2341", "3214", "4123", "2413", "3142"] {
        n.add_term(p(s), q(1));
    }
    for s in ["1342", "1423", "2314", "2431", "3124", "3241", "4132", "4213"] {
        n.add_term(p(s), q(-1));
    }
    n
}

#[test]
fn four_span_and_orthogonal_vector() {
    let span = span_dimension(4, SpanOptions::default()).unwrap();
    assert_eq!(span.dimension, 23);
    assert_eq!(span.intersection_dimension, 23);
    let n = orthogonal_complement_4();
    assert_eq!(n, known_n());
    assert_eq!(n.dot(&n), q(16));
    for tree in trees_up_to(4) {
        let restricted = expand_tree(&tree).unwrap().restricted_to_size(4);
        assert!(n.dot(&restricted).is_zero(), "{tree}");
    }
    // 3142 has a nonzero coefficient in N, so no formula reaches it alone
    assert!(!n.coefficient(&p("3142")).is_zero());
}

#[test]
fn four_basis_plus_3241_has_full_rank() {
    let span = span_dimension(4, SpanOptions::default()).unwrap();
    let patterns = patterns_of_size(4);
    let mut rows: Vec<Vec<BigInt>> = span
        .expansions
        .iter()
        .map(|s| {
            patterns
                .iter()
                .map(|pat| {
                    let c = s.coefficient(pat);
                    assert!(c.is_integer() || !c.is_zero());
                    (c * q(720)).to_integer()
                })
                .collect()
        })
        .collect();
    rows.push(patterns.iter().map(|pat| BigInt::from((pat == &p("3241")) as i32)).collect());
    assert_eq!(cornertree::algebra::linalg::rank(&rows), 24);
    for (f, x) in span.basis.iter().zip(&span.expansions) {
        assert_eq!(&f.expand().unwrap(), x);
    }
}

#[test]
fn three_span_and_exact_k_flag() {
    assert_eq!(span_dimension(3, SpanOptions::default()).unwrap().dimension, 6);
    let exact = span_dimension(3, SpanOptions { exact_k_only: true, ..SpanOptions::default() }).unwrap();
    assert!(exact.dimension <= 6);
    assert_eq!(exact.trees_considered, 26);
    let exact4 = span_dimension(4, SpanOptions { exact_k_only: true, ..SpanOptions::default() }).unwrap();
    assert_eq!((exact4.dimension, exact4.intersection_dimension), (23, 21));
}

#[test]
fn five_span_is_one_hundred() {
    let span = span_dimension(5, SpanOptions::default()).unwrap();
    assert_eq!(span.dimension, 100);
    // one leading-term direction needs lower-order terms outside the span
    assert_eq!(span.intersection_dimension, 99);
    assert_eq!(span.basis.len(), 99);
    assert_eq!(span.leading_basis.len(), 100);
    assert_eq!(span.trees_considered, 1 + 4 + 26 + 188 + 1499);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn formula_evaluation_matches_expansion(seed in any::<u64>(), n in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pi = Permutation::random(n, &mut rng);
        let s = builtin_formula("S").unwrap();
        let direct = s.evaluate(&pi);
        let via = s.expand().unwrap().evaluate_brute(&pi);
        prop_assert_eq!(direct.clone(), via);
        prop_assert!(direct.to_integer().to_i64().is_some());
    }
}
