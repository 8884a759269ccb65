use std::collections::HashMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use dpllgf::expectation::ClauseVector;
use dpllgf::instances::{
    emit_dimacs, emit_edges, gen_gnp, gen_gnp_with, gen_ksat, gen_ksat_with, parse_dimacs, parse_edges, reduce_sat,
    CnfInstance, Lit, ParseErrorKind,
};

fn clause(lits: &[i32]) -> Vec<Lit> {
    lits.iter().map(|&x| Lit::from_dimacs(x).unwrap()).collect()
}

#[test]
fn single_triple_clause() {
    for seed in 0..20 {
        let f = gen_ksat(3, 1, 3, seed, false).unwrap();
        let vars: Vec<usize> = f.clauses()[0].iter().map(|l| l.var()).collect();
        assert_eq!(vars, vec![1, 2, 3]);
    }
}

#[test]
fn clause_frequencies_are_uniform() {
    let f = gen_ksat(4, 100_000, 3, 42, false).unwrap();
    let mut freq: HashMap<Vec<i32>, u64> = HashMap::new();
    for c in f.clauses() {
        *freq.entry(c.iter().map(|l| l.to_dimacs()).collect()).or_default() += 1;
    }
    assert_eq!(freq.len(), 32);
    let expected = 100_000.0 / 32.0;
    let chi2: f64 = freq.values().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    let p = 1.0 - ChiSquared::new(31.0).unwrap().cdf(chi2);
    assert!(p > 1e-3, "chi-square {chi2}, p = {p}");
}

#[test]
fn generation_is_deterministic() {
    let a = gen_ksat(20, 40, 3, 1, false).unwrap();
    let b = gen_ksat(20, 40, 3, 1, false).unwrap();
    assert_eq!(a, b);
    assert_eq!(emit_dimacs(&a), emit_dimacs(&b));
    assert_ne!(a, gen_ksat(20, 40, 3, 2, false).unwrap());
    assert_eq!(gen_gnp(50, 3.0, 9).unwrap(), gen_gnp(50, 3.0, 9).unwrap());
}

#[test]
fn distinct_mode_has_no_repeats() {
    let f = gen_ksat(5, 80, 3, 3, true).unwrap();
    let mut seen: Vec<_> = f.clauses().to_vec();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), 80);
    assert!(gen_ksat(4, 33, 3, 0, true).is_err());
}

#[test]
fn generator_rejects_bad_sizes() {
    assert!(gen_ksat(2, 1, 3, 0, false).is_err());
    assert!(gen_ksat(5, 1, 1, 0, false).is_err());
    assert!(gen_gnp(10, 11.0, 0).is_err());
    assert!(gen_gnp(10, -1.0, 0).is_err());
}

#[test]
fn gnp_extremes() {
    assert_eq!(gen_gnp(10, 0.0, 5).unwrap().num_edges(), 0);
    assert_eq!(gen_gnp(10, 10.0, 5).unwrap().num_edges(), 45);
}

#[test]
fn gnp_mean_edge_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let samples = 10_000;
    let total: usize = (0..samples).map(|_| gen_gnp_with(100, 5.0, &mut rng).unwrap().num_edges()).sum();
    let mean = total as f64 / samples as f64;
    let sd = (4950.0 * 0.05 * 0.95 / samples as f64).sqrt();
    assert!((mean - 247.5).abs() < 3.0 * sd, "mean {mean}");
}

#[test]
fn reduce_examples() {
    let f = gen_ksat(10, 25, 3, 8, false).unwrap();
    assert_eq!(reduce_sat(&f, &[]).unwrap().clause_vector(), ClauseVector::new(0, 0, 25));

    let one = CnfInstance::new(3, 3, vec![clause(&[1, 2, 3])]).unwrap();
    assert_eq!(reduce_sat(&one, &[(1, false)]).unwrap().clause_vector(), ClauseVector::new(0, 1, 0));

    let two = CnfInstance::new(4, 3, vec![clause(&[1, 2, 3]), clause(&[-1, 2, 4])]).unwrap();
    let r = reduce_sat(&two, &[(1, true), (2, false)]).unwrap();
    assert_eq!(r.clause_vector(), ClauseVector::new(1, 0, 0));
    assert_eq!(r.clauses.len(), 1);
    assert_eq!(r.clauses[0].index, 1);
    assert_eq!(r.clauses[0].lits, clause(&[4]));

    let r = reduce_sat(&one, &[(1, false), (2, false), (3, false)]).unwrap();
    assert!(r.is_violated());
    assert!(reduce_sat(&one, &[(1, false), (1, true)]).is_err());
    assert!(reduce_sat(&one, &[(4, false)]).is_err());
}

#[test]
fn dimacs_examples() {
    let f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n").unwrap();
    assert_eq!(f.num_vars(), 3);
    assert_eq!(f.clauses(), &[clause(&[1, -2, 3])]);

    let e = parse_dimacs("p cnf 3 1\n1 1 2 0\n").unwrap_err();
    assert_eq!(e.line, 2);
    assert!(matches!(e.kind, ParseErrorKind::DuplicateVariable(1)));
    assert!(matches!(
        parse_dimacs("p cnf 3 1\n1 -1 2 0\n").unwrap_err().kind,
        ParseErrorKind::ComplementaryLiterals(1)
    ));
    assert!(matches!(parse_dimacs("p cnf 3 1\n1 2 4 0\n").unwrap_err().kind, ParseErrorKind::LiteralOutOfRange { .. }));
    assert!(matches!(parse_dimacs("1 2 3 0\n").unwrap_err().kind, ParseErrorKind::MissingHeader));
    assert!(matches!(
        parse_dimacs("p cnf 3 2\n1 2 3 0\n").unwrap_err().kind,
        ParseErrorKind::CountMismatch { declared: 2, found: 1, .. }
    ));
}

#[test]
fn dimacs_round_trip_100_clauses() {
    let f = gen_ksat(30, 100, 3, 11, false).unwrap();
    let text = emit_dimacs(&f);
    let g = parse_dimacs(&text).unwrap();
    assert_eq!(g, f);
    assert_eq!(emit_dimacs(&g), text);
}

#[test]
fn edge_list_errors() {
    assert!(matches!(parse_edges("p col 3 1\n1 1\n").unwrap_err().kind, ParseErrorKind::SelfLoop(_)));
    assert!(matches!(parse_edges("p col 3 2\n1 2\n2 1\n").unwrap_err().kind, ParseErrorKind::DuplicateEdge(..)));
    assert!(matches!(parse_edges("p col 3 1\n1 4\n").unwrap_err().kind, ParseErrorKind::VertexOutOfRange { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_clauses_are_legal(n in 3usize..30, m in 0usize..80, k in 2usize..=3, seed: u64) {
        let f = gen_ksat(n, m, k, seed, false).unwrap();
        prop_assert_eq!(f.num_clauses(), m);
        for c in f.clauses() {
            prop_assert_eq!(c.len(), k);
            prop_assert!(c.windows(2).all(|w| w[0].var() < w[1].var()));
            prop_assert!(c.iter().all(|l| (1..=n).contains(&l.var())));
        }
    }

    #[test]
    fn cnf_round_trip(n in 3usize..40, m in 0usize..60, seed: u64) {
        let f = gen_ksat(n, m, 3, seed, false).unwrap();
        prop_assert_eq!(parse_dimacs(&emit_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn edge_round_trip(n in 1usize..40, c in 0.0f64..1.0, seed: u64) {
        let g = gen_gnp(n, c * n as f64, seed).unwrap();
        let back = parse_edges(&emit_edges(&g)).unwrap();
        prop_assert_eq!(back.num_vertices(), n);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn clause_counts_only_shrink(seed: u64, order in Just((1..=12).collect::<Vec<usize>>()).prop_shuffle()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = gen_ksat_with(12, 30, 3, &mut rng, false).unwrap();
        let mut prev = reduce_sat(&f, &[]).unwrap();
        let mut assignment = Vec::new();
        for (i, &v) in order.iter().enumerate() {
            assignment.push((v, i % 2 == 0));
            let next = reduce_sat(&f, &assignment).unwrap();
            prop_assert!(next.clauses.len() <= prev.clauses.len());
            prop_assert!(next.clauses.iter().all(|c| prev.clauses.iter().any(|p| p.index == c.index)));
            prop_assert_eq!(next.unassigned, 12 - assignment.len());
            prev = next;
        }
    }
}
