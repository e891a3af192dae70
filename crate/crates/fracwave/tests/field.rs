use std::f64::consts::PI;

use fracwave::field::{
    assemble_cov, factorize_default, increment_grid_spatial, increment_grid_temporal, mc_sup, sample, GridSpec,
    IncrementMap, Statistic,
};
use fracwave::kernels::{d1, d2_sq, d3_sq, variance, KernelConfig};
use fracwave::SpaceTimePoint;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn cfg() -> KernelConfig {
    KernelConfig::default()
}

fn eight_point_grid() -> GridSpec {
    GridSpec::uniform(vec![0.5, 1.0], -0.3, 0.2, 4).unwrap()
}

#[test]
fn sample_covariance_within_five_standard_errors() {
    let grid = eight_point_grid();
    let c = assemble_cov(&grid, 0.3, &cfg()).unwrap();
    let f = factorize_default(&c).unwrap();
    let n = 10_000;
    let batch = sample(&f, &grid, n, 2024).unwrap();
    let s = batch.sample_cov();
    let a = &c.entries;
    for i in 0..8 {
        for j in 0..8 {
            // Var(u_i u_j) = a_ii a_jj + a_ij^2 for centred Gaussians.
            let se = ((a[(i, i)] * a[(j, j)] + a[(i, j)].powi(2)) / n as f64).sqrt();
            assert!((s[(i, j)] - a[(i, j)]).abs() <= 5.0 * se, "({i},{j}): {} vs {}", s[(i, j)], a[(i, j)]);
        }
    }
    let again = sample(&f, &grid, n, 2024).unwrap();
    assert_eq!(batch.to_le_bytes(), again.to_le_bytes());
}

#[test]
fn diagonal_follows_variance_law() {
    let grid = GridSpec::uniform(vec![0.25, 1.0, 3.0], 0.0, 0.5, 3).unwrap();
    let h = 0.3;
    let c = assemble_cov(&grid, h, &cfg()).unwrap();
    let kappa = variance(1.0, h, &cfg()).unwrap();
    for k in 0..grid.len() {
        let t = grid.point(k).t;
        let want = kappa * t.powf(2.0 * h + 1.0);
        assert!((c.entries[(k, k)] / want - 1.0).abs() < 1e-8);
    }
}

#[test]
fn singleton_suprema() {
    // u(2, 0) ~ N(0, 1) at H = 1/2: E|u| = sqrt(2/π), E[sup u] = E[u] = 0.
    let grid = GridSpec::uniform(vec![2.0], 0.0, 1.0, 1).unwrap();
    let f = factorize_default(&assemble_cov(&grid, 0.5, &cfg()).unwrap()).unwrap();
    let batch = sample(&f, &grid, 20_000, 5).unwrap();
    let abs = mc_sup(&batch, Statistic::SupAbs, None).unwrap();
    assert!((abs.mean - (2.0 / PI).sqrt()).abs() < 3.0 * abs.stderr, "{abs:?}");
    let sup = mc_sup(&batch, Statistic::Sup, None).unwrap();
    assert!(sup.mean.abs() < 3.0 * sup.stderr);
    assert!((abs.stderr - (1.0 - 2.0 / PI).sqrt() / (20_000f64).sqrt()).abs() < 1e-3);
}

/// Covariance of the increments `u[a] - u[b]` from the field covariance.
fn increment_cov(c: &DMatrix<f64>, m: &IncrementMap) -> DMatrix<f64> {
    let n = m.pairs.len();
    DMatrix::from_fn(n, n, |p, q| {
        let (a, b) = m.pairs[p];
        let (a2, b2) = m.pairs[q];
        c[(a, a2)] - c[(a, b2)] - c[(b, a2)] + c[(b, b2)]
    })
}

#[test]
fn spatial_increments_match_direct_kernels() {
    let h = 0.3;
    let t = 1.0;
    let grid = GridSpec::uniform(vec![t], -0.5, 0.125, 9).unwrap();
    let c = assemble_cov(&grid, h, &cfg()).unwrap();
    for k in [1usize, 3] {
        let step = k as f64 * grid.dx();
        let (g, m) = increment_grid_spatial(&grid, step).unwrap();
        let kmat = increment_cov(&c.entries, &m);
        let scale = c.entries[(0, 0)];
        for p in 0..m.pairs.len() {
            let xp = g.point(m.pairs[p].1).x;
            let dd = d1(SpaceTimePoint { t, x: xp + step }, SpaceTimePoint { t, x: xp }, h, &cfg()).unwrap();
            assert!((kmat[(p, p)] - dd * dd).abs() < 1e-8 * scale);
            for q in 0..p {
                let xq = g.point(m.pairs[q].1).x;
                let want = d2_sq(t, step, xp, xq, h, &cfg()).unwrap();
                let got = kmat[(p, p)] + kmat[(q, q)] - 2.0 * kmat[(p, q)];
                assert!((got - want).abs() < 1e-8 * scale, "k={k} p={p} q={q}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn temporal_increments_match_direct_kernels() {
    let h = 0.3;
    let grid = GridSpec::uniform(vec![0.5, 1.0], 0.0, 0.25, 5).unwrap();
    for tau in [0.5, 0.3] {
        let (g, m) = increment_grid_temporal(&grid, tau).unwrap();
        let c = assemble_cov(&g, h, &cfg()).unwrap();
        let kmat = increment_cov(&c.entries, &m);
        let scale = c.entries.diagonal().max();
        for p in 0..m.pairs.len() {
            for q in 0..p {
                let (bp, bq) = (g.point(m.pairs[p].1), g.point(m.pairs[q].1));
                if bp.t != bq.t {
                    continue;
                }
                let want = d3_sq(bp.t, tau, bp.x, bq.x, h, &cfg()).unwrap();
                let got = kmat[(p, p)] + kmat[(q, q)] - 2.0 * kmat[(p, q)];
                assert!((got - want).abs() < 1e-8 * scale, "tau={tau}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn sampled_increment_variance_matches_kernel() {
    let (h, t) = (0.3, 1.0);
    let grid = GridSpec::uniform(vec![t], 0.0, 0.25, 5).unwrap();
    let f = factorize_default(&assemble_cov(&grid, h, &cfg()).unwrap()).unwrap();
    let n = 10_000;
    let batch = sample(&f, &grid, n, 99).unwrap();
    let (_, m) = increment_grid_spatial(&grid, 0.5).unwrap();
    let want = d1(SpaceTimePoint { t, x: 0.5 }, SpaceTimePoint { t, x: 0.0 }, h, &cfg()).unwrap().powi(2);
    let (a, b) = m.pairs[0];
    let est = (0..n).map(|r| (batch.realization(r)[a] - batch.realization(r)[b]).powi(2)).sum::<f64>() / n as f64;
    assert!((est - want).abs() < 5.0 * want * (2.0 / n as f64).sqrt());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sup_never_exceeds_sup_abs(seed in any::<u64>(), nx in 1usize..6) {
        let grid = GridSpec::uniform(vec![0.5, 1.0], 0.0, 0.25, nx).unwrap();
        let f = factorize_default(&assemble_cov(&grid, 0.3, &cfg()).unwrap()).unwrap();
        let batch = sample(&f, &grid, 20, seed).unwrap();
        let s = mc_sup(&batch, Statistic::Sup, None).unwrap();
        let a = mc_sup(&batch, Statistic::SupAbs, None).unwrap();
        prop_assert!(s.mean <= a.mean);
    }

    #[test]
    fn replicate_streams_do_not_depend_on_batch_size(seed in any::<u64>(), n in 2usize..30) {
        let grid = GridSpec::uniform(vec![1.0], 0.0, 0.5, 3).unwrap();
        let f = factorize_default(&assemble_cov(&grid, 0.3, &cfg()).unwrap()).unwrap();
        let small = sample(&f, &grid, n, seed).unwrap();
        let big = sample(&f, &grid, n + 7, seed).unwrap();
        prop_assert_eq!(small.values(), &big.values()[..small.values().len()]);
    }
}
