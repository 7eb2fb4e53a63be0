//! Acceptance suite: one test per criterion, each printing a summary line.
//!
//! Criteria 9 and 11 are asserted exactly as stated. Under this crate's
//! fanout accounting (output designation is free) two of the stated
//! identities are not attainable; those tests enumerate the divergences
//! before failing, so a red run documents precisely what differs and why.

use num_bigint::BigUint;
use num_traits::One;

use prefix_circuits::asymptotics::{alpha, depth_estimate, eval_poly, growth_rate_empirical, PHI};
use prefix_circuits::builder::{build_circuit, BuildSpec};
use prefix_circuits::oracle::{min_depth_exhaustive, PartitionOracle, SearchConfig};
use prefix_circuits::recurrence::{
    fib, min_depth, star_width_direct, star_width_recurrent, StarTable, WidthTable,
};

fn pass(criterion: &str) {
    println!("acceptance {criterion}: PASS");
}

#[test]
fn criterion_01_table_identity() {
    for k in 2..=8u32 {
        for depth in 0..=64u32 {
            assert_eq!(
                star_width_direct(k, depth).unwrap(),
                star_width_recurrent(k, depth).unwrap(),
                "k={k} D={depth}"
            );
        }
    }
    pass("01 table identity (direct = recurrent, k in [2,8], D in [0,64])");
}

#[test]
fn criterion_02_oracle_equivalence() {
    for k in 2..=5u32 {
        let mut oracle = PartitionOracle::new(k).unwrap();
        let mut table = WidthTable::new(k).unwrap();
        for d in 0..=8u32 {
            for h in 0..=8u32 {
                assert_eq!(oracle.width(d, h), table.get(d, h), "k={k} d={d} h={h}");
            }
        }
    }
    pass("02 oracle equivalence (partition max = recurrence, k in [2,5], d,h in [0,8])");
}

#[test]
fn criterion_03_monotonicity_and_doubling() {
    for k in 2..=6u32 {
        let mut t = WidthTable::new(k).unwrap();
        for d in 0..=20u32 {
            for h in 0..=20u32 {
                let w = t.get(d, h);
                assert!(t.get(d + 1, h) >= w, "monotone d: k={k} d={d} h={h}");
                if d >= 1 {
                    assert!(w <= t.get(d - 1, h) * 2u32, "doubling: k={k} d={d} h={h}");
                }
            }
        }
    }
    pass("03 monotonicity and doubling laws (k <= 6, d,h <= 20)");
}

#[test]
fn criterion_04_k2_closed_forms() {
    let mut t = WidthTable::new(2).unwrap();
    for d in 0..=20u32 {
        for h in 0..=20u32 {
            assert_eq!(t.get(d, h), BigUint::from(2u32).pow(d.min(h)));
        }
    }
    let mut star = StarTable::new(2).unwrap();
    for m in 1..=20u32 {
        let even = star.value(2 * m);
        assert_eq!(even, BigUint::from(3u32) * BigUint::from(2u32).pow(m) - 2u32);
        let odd = star.value(2 * m - 1);
        assert_eq!(odd, BigUint::from(2u32).pow(m + 1) - 2u32);
    }
    pass("04 k=2 closed forms (2^min pair cells, 3*2^m-2 / 2^(m+1)-2 stars)");
}

#[test]
fn criterion_05_depth_formula_k2() {
    for n in 2..=4096u64 {
        let expect = (n as f64).log2().floor() as u32
            + largest_pow2_leq_frac(2 * n, 3);
        assert_eq!(min_depth(2, n).unwrap(), expect, "n={n}");
    }
    pass("05 closed-form depth at k=2 matches the tables for N in [2,4096]");
}

/// floor(log2(a/b)) computed in integers.
fn largest_pow2_leq_frac(a: u64, b: u64) -> u32 {
    let mut t = 0u32;
    while b << (t + 1) <= a {
        t += 1;
    }
    t
}

#[test]
fn criterion_06_fibonacci_specialization() {
    for depth in 0..=25u32 {
        let k = depth + 1;
        let star = star_width_direct(k.max(2), depth).unwrap();
        assert_eq!(star + BigUint::one(), fib(depth + 3).unwrap(), "D={depth}");
    }
    pass("06 unbounded-fanout stars are shifted Fibonacci numbers (D <= 25)");
}

#[test]
fn criterion_07_roots() {
    let mut prev = 1.0f64;
    for k in 2..=64u32 {
        let root = alpha(k, 1e-14).unwrap();
        assert!(root.residual <= 1e-12, "k={k} residual={}", root.residual);
        assert!(root.alpha > prev, "k={k} not increasing");
        assert!(root.alpha < PHI, "k={k} above the golden ratio");
        prev = root.alpha;
    }
    assert!((alpha(2, 1e-14).unwrap().alpha - std::f64::consts::SQRT_2).abs() <= 1e-12);
    assert!((alpha(32, 1e-14).unwrap().alpha - PHI).abs() < 1e-6);

    let factor = |k: u32| alpha(k, 1e-14).unwrap().depth_factor;
    assert!((factor(2) - 2.0).abs() <= 0.005);
    assert!((factor(3) - 1.65).abs() <= 0.005);
    assert!((factor(4) - 1.54).abs() <= 0.005);
    assert!(factor(9) <= 1.45);
    let limit = std::f64::consts::LN_2 / PHI.ln();
    assert!((limit - 1.44).abs() < 0.005);
    assert!((factor(64) - limit).abs() < 1e-4);
    pass("07 growth roots: residuals, ordering, and the classical depth factors");
}

#[test]
fn criterion_08_growth_rate() {
    for k in [2u32, 3, 4, 9] {
        let measured = growth_rate_empirical(k, 500, 1000).unwrap();
        let root = alpha(k, 1e-14).unwrap().alpha;
        assert!(
            (measured - root).abs() <= 1e-9,
            "k={k}: measured {measured} vs root {root}"
        );
    }
    pass("08 empirical growth over D in [500,1000] matches the roots to 1e-9");
}

#[test]
fn criterion_09_builder_soundness() {
    let mut depth_mismatches: Vec<(u32, u64, u32, u32)> = Vec::new();
    for k in [2u32, 3, 4] {
        for n in 2..=300u64 {
            let circuit = build_circuit(BuildSpec::new(k, n)).unwrap();
            assert!(circuit.verify_prefix().unwrap().passed(), "k={k} n={n}");
            let m = circuit.metrics();
            assert_eq!(m.deficiency, 0, "k={k} n={n}");
            assert_eq!(
                m.size as i64,
                2 * n as i64 - i64::from(m.depth) - 2,
                "k={k} n={n}"
            );
            assert!(m.max_fanout <= k as usize, "k={k} n={n}");
            let table = min_depth(k, n).unwrap();
            if m.depth != table {
                depth_mismatches.push((k, n, m.depth, table));
            }
        }
    }
    if depth_mismatches.is_empty() {
        pass("09 builder soundness (verified, optimal, fanout-bounded, minimal depth)");
    } else {
        let (lo, hi) = (
            depth_mismatches.first().unwrap(),
            depth_mismatches.last().unwrap(),
        );
        println!(
            "acceptance 09 builder soundness: FAIL on depth equality for {} cases \
             (all k={}, N in [{}..{}], built one level deeper than the table; \
             verification, optimality and fanout hold everywhere)",
            depth_mismatches.len(),
            lo.0,
            lo.1,
            hi.1
        );
        panic!(
            "builder reaches the table depth everywhere except {} fanout-2 cases, \
             first k={} N={} built={} table={}; see the decisions ledger",
            depth_mismatches.len(),
            lo.0,
            lo.1,
            lo.2,
            lo.3
        );
    }
}

#[test]
fn criterion_10_golden_vector() {
    let circuit = build_circuit(BuildSpec::new(2, 5)).unwrap();
    assert!(circuit.verify_prefix().unwrap().passed());
    let m = circuit.metrics();
    assert_eq!(m.depth, 3);
    assert_eq!(m.size, 5);
    assert_eq!(m.deficiency, 0);
    assert_eq!(m.max_fanout, 2);
    let (framework, outputs, chain) = circuit.node_class_counts();
    assert_eq!((framework, outputs, chain), (4, 4, 3));
    pass("10 golden vector: 5 inputs at depth 3 with 5 ops and fanout 2");
}

#[test]
fn criterion_11_exhaustive_cross_check() {
    let mut k2_failures = Vec::new();
    for n in 2..=7usize {
        let found = min_depth_exhaustive(SearchConfig::new(2, n))
            .unwrap()
            .expect("search space is bounded");
        let table = min_depth(2, n as u64).unwrap();
        let ok = found == table;
        println!(
            "acceptance 11 k=2 n={n}: exhaustive={found} table={table} {}",
            if ok { "match" } else { "MISMATCH" }
        );
        if !ok {
            k2_failures.push((n, found, table));
        }
    }
    for n in 2..=7usize {
        let found = min_depth_exhaustive(SearchConfig::new(3, n))
            .unwrap()
            .expect("search space is bounded");
        let table = min_depth(3, n as u64).unwrap();
        let delta = table as i64 - found as i64;
        println!("acceptance 11 k=3 n={n}: exhaustive={found} table={table} delta={delta}");
        assert!(
            (0..=1).contains(&delta),
            "k=3 n={n}: delta {delta} outside the bound gap"
        );
    }
    if k2_failures.is_empty() {
        pass("11 exhaustive cross-check");
    } else {
        println!(
            "acceptance 11 exhaustive cross-check: FAIL at k=2 for n={:?}; the search \
             finds strictly shallower optimal circuits than the tables under \
             output-designation-free fanout (witnesses in the decisions ledger)",
            k2_failures.iter().map(|f| f.0).collect::<Vec<_>>()
        );
        panic!("exhaustive search beats the k=2 table at n={k2_failures:?}");
    }
}

#[test]
fn criterion_12_depth_tracks_log_alpha() {
    for k in [2u32, 3, 4] {
        for exp in 2..=6u32 {
            let n = 10u64.pow(exp);
            let exact = min_depth(k, n).unwrap() as f64;
            let estimate = depth_estimate(k, n, 1e-14).unwrap();
            assert!(
                (exact - estimate).abs() <= 5.0,
                "k={k} n={n}: exact {exact} vs estimate {estimate}"
            );
        }
    }
    // spot-check the polynomial itself at the bracket ends used by the root
    for k in 2..=8u32 {
        assert!(eval_poly(k, 1.0).unwrap() > 0.0);
        assert!(eval_poly(k, 2.0).unwrap() < 0.0);
    }
    pass("12 constructive depth tracks log_alpha(N) within the O(1) band");
}
