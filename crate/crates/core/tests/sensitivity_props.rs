// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;
use semidp_core::dataspace::*;
use semidp_core::sensitivity::*;

fn all_datasets(space: &DataspaceSpec) -> Vec<Dataset> {
    let m = space.cell_count();
    let total = m.pow(space.n as u32);
    (0..total)
        .map(|mut code| {
            let rows = (0..space.n)
                .map(|_| {
                    let c = code % m;
                    code /= m;
                    space.record_of(c)
                })
                .collect();
            Dataset { rows }
        })
        .collect()
}

fn span_vector(s: &SensitivitySpace, coeffs: &[f64]) -> Vec<f64> {
    let nz: Vec<&Vec<f64>> = s.nonzero().collect();
    let mut v = vec![0.0; s.ambient_dim];
    for (u, &a) in nz.iter().zip(coeffs) {
        for (vi, ui) in v.iter_mut().zip(u.iter()) {
            *vi += a * ui;
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn gauge_is_a_norm_on_the_span(
        a in proptest::collection::vec(-2.0..2.0f64, 6),
        b in proptest::collection::vec(-2.0..2.0f64, 6),
        scale in -3.0..3.0f64,
    ) {
        let s = contingency_s_semi(2, 3).unwrap();
        let u = span_vector(&s, &a);
        let v = span_vector(&s, &b);
        let g = |x: &[f64]| gauge_norm(&s, x).unwrap();
        let gu = g(&u);
        let gv = g(&v);
        prop_assert!(gu.is_finite());
        let su: Vec<f64> = u.iter().map(|x| scale * x).collect();
        prop_assert!((g(&su) - scale.abs() * gu).abs() < 1e-8 * (1.0 + gu));
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        prop_assert!((g(&neg) - gu).abs() < 1e-8 * (1.0 + gu));
        let sum: Vec<f64> = u.iter().zip(&v).map(|(x, y)| x + y).collect();
        prop_assert!(g(&sum) <= gu + gv + 1e-8);
    }

    #[test]
    fn projection_contracts(v in proptest::collection::vec(-5.0..5.0f64, 9), a in proptest::collection::vec(-2.0..2.0f64, 18)) {
        let s = contingency_s_semi(3, 3).unwrap();
        let b = span_basis(&s, RANK_TOL);
        let p = projection_matrix(&b, 9).unwrap();
        prop_assert!(Norm::L2.of(&p.apply(&v)) <= Norm::L2.of(&v) + 1e-12);
        let inside = span_vector(&s, &a);
        let back = p.apply(&inside);
        for (x, y) in inside.iter().zip(&back) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn projection_matrix_invariants() {
    for (r, c) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
        let s = contingency_s_semi(r, c).unwrap();
        let b = span_basis(&s, RANK_TOL);
        for (i, u) in b.vectors.iter().enumerate() {
            assert!((Norm::L2.of(u) - 1.0).abs() < 1e-10);
            for w in &b.vectors[i + 1..] {
                assert!(u.iter().zip(w).map(|(x, y)| x * y).sum::<f64>().abs() < 1e-10);
            }
        }
        let d = r * c;
        let p = projection_matrix(&b, d).unwrap();
        assert!((p.trace() - b.dim() as f64).abs() < 1e-9);
        for i in 0..d {
            for j in 0..d {
                assert!((p.rows[i][j] - p.rows[j][i]).abs() < 1e-12);
                let pp: f64 = (0..d).map(|k| p.rows[i][k] * p.rows[k][j]).sum();
                assert!((pp - p.rows[i][j]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn brute_force_matches_analytic_on_small_tables() {
    for (r, c) in [(2usize, 2usize), (2, 3)] {
        let analytic = contingency_s_semi(r, c).unwrap();
        for n in 2..=5 {
            let space = common::table_space(r, c, n);
            let spec = InvariantSpec::all_one_way(2);
            for t in common::table_margins(r, c, n, false) {
                let dt = conforming_set(&space, &spec, &t).unwrap();
                if dt.is_empty() {
                    continue;
                }
                let a = semi_adjacent_parameter(&space, &spec, &t).unwrap();
                if a == 0 {
                    continue;
                }
                let bf = brute_force_sensitivity_space(&space, &dt, &TableQuery::default(), a).unwrap();
                if common::is_degenerate(&t) {
                    assert!(bf.is_subset_of(&analytic), "{r}x{c} n={n} t={t:?}");
                } else {
                    assert!(bf.same_vectors(&analytic), "{r}x{c} n={n} t={t:?}");
                }
            }
        }
    }
}

// With one-way margins fixed on a 3x3 table, three rows can be permuted
// cyclically across columns; that move changes three positions and so is
// within a radius of 3, giving difference vectors with six nonzero cells.
#[test]
fn three_by_three_radius_three_admits_cycles() {
    let space = common::table_space(3, 3, 3);
    let spec = InvariantSpec::all_one_way(2);
    let t = InvariantValue(vec![vec![1, 1, 1], vec![1, 1, 1]]);
    let dt = conforming_set(&space, &spec, &t).unwrap();
    assert_eq!(semi_adjacent_parameter(&space, &spec, &t).unwrap(), 3);
    let analytic = contingency_s_semi(3, 3).unwrap();
    let bf3 = brute_force_sensitivity_space(&space, &dt, &TableQuery::default(), 3).unwrap();
    assert!(analytic.is_subset_of(&bf3));
    let cycle = vec![-1.0, 0.0, 1.0, 0.0, 1.0, -1.0, 1.0, -1.0, 0.0];
    assert!(bf3.contains(&cycle));
    assert!(!analytic.contains(&cycle));
    // At radius 2 only the two-cell swaps remain.
    let bf2 = brute_force_sensitivity_space(&space, &dt, &TableQuery::default(), 2).unwrap();
    assert!(bf2.same_vectors(&analytic));
}

#[test]
fn semi_space_inside_group_space() {
    let query = TableQuery::default();
    for (r, c, n) in [(2usize, 2usize, 3usize), (2, 2, 4), (2, 3, 3)] {
        let space = common::table_space(r, c, n);
        let spec = InvariantSpec::all_one_way(2);
        let everything = all_datasets(&space);
        let s_dp = brute_force_sensitivity_space(&space, &everything, &query, 1).unwrap();
        for t in common::table_margins(r, c, n, true) {
            let dt = conforming_set(&space, &spec, &t).unwrap();
            if dt.is_empty() {
                continue;
            }
            let a = semi_adjacent_parameter(&space, &spec, &t).unwrap();
            let s_semi = brute_force_sensitivity_space(&space, &dt, &query, a).unwrap();
            let s_group = brute_force_sensitivity_space(&space, &everything, &query, a).unwrap();
            assert!(s_semi.is_subset_of(&s_group));
            for p in [Norm::L1, Norm::L2, Norm::LInf] {
                let semi = lp_sensitivity(&s_semi, p).unwrap();
                let group = lp_sensitivity(&s_group, p).unwrap();
                let dp = lp_sensitivity(&s_dp, p).unwrap();
                assert!(semi <= group + 1e-12);
                assert!(group <= a as f64 * dp + 1e-12);
            }
        }
    }
}
