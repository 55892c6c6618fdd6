use kdvh::imex::{solve_stage, SolverBackend, StageSolverCache};
use kdvh::sbp::{make_fourier_operator, make_grid, make_upwind_operators, OperatorSet};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn random(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed ^ 0x9e37_79b9_7f4a_7c15;
    (0..n)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
        .collect()
}

fn upwind(n: usize, q: usize) -> OperatorSet {
    make_upwind_operators(&make_grid(-40.0, 40.0, n).unwrap(), q).unwrap()
}

fn fourier(n: usize) -> OperatorSet {
    make_fourier_operator(&make_grid(-40.0, 40.0, n).unwrap()).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `(I - a G) y` evaluated by applying `G`.
fn forward(cache: &StageSolverCache, y: &[f64], a: f64) -> Vec<f64> {
    let gy = cache.stiff().apply(y).unwrap();
    y.iter().zip(gy).map(|(y, g)| y - a * g).collect()
}

#[test]
fn zero_coefficient_returns_rhs() {
    let ops = upwind(32, 4);
    let mut cache = StageSolverCache::for_kdvh(&ops, 1e-3, SolverBackend::Auto).unwrap();
    let rhs = random(96, 1);
    assert_eq!(solve_stage(&mut cache, &rhs, 0.0).unwrap(), rhs);
    assert_eq!(cache.factorizations(), 0);
}

#[test]
fn forward_apply_recovers_solution_every_backend() {
    for (ops, backends) in [
        (upwind(64, 8), vec![SolverBackend::Sparse, SolverBackend::Spectral, SolverBackend::Dense]),
        (upwind(64, 1), vec![SolverBackend::Sparse, SolverBackend::Spectral, SolverBackend::Dense]),
        (fourier(64), vec![SolverBackend::Spectral, SolverBackend::Dense]),
    ] {
        for backend in backends {
            for tau in [1.0, 1e-3, 1e-9] {
                let mut cache = StageSolverCache::for_kdvh(&ops, tau, backend).unwrap();
                let y = random(192, 7);
                let a = 0.005 * 0.29;
                let rhs = forward(&cache, &y, a);
                let x = cache.solve_stage(&rhs, a).unwrap();
                // conditioning of I - aG grows like a/τ; compare in the relative sense
                let err = max_diff(&x, &y);
                assert!(err < 1e-11 * (1.0 + a / tau), "{backend} τ={tau}: {err:e}");
            }
        }
    }
}

#[test]
fn backends_agree_on_random_rhs() {
    for ops in [upwind(64, 6), fourier(64)] {
        let rhs = random(192, 11);
        let a = 0.01;
        let solve = |b| {
            let mut c = StageSolverCache::for_kdvh(&ops, 0.1, b).unwrap();
            c.solve_stage(&rhs, a).unwrap()
        };
        let spectral = solve(SolverBackend::Spectral);
        let sparse = solve(SolverBackend::Sparse);
        let dense = solve(SolverBackend::Dense);
        assert!(max_diff(&spectral, &sparse) < 1e-10);
        assert!(max_diff(&dense, &sparse) < 1e-10);
    }
}

#[test]
fn auto_backend_selection() {
    let mut fd = StageSolverCache::for_kdvh(&upwind(64, 8), 0.1, SolverBackend::Auto).unwrap();
    fd.solve_stage(&random(192, 2), 0.01).unwrap();
    assert_eq!(fd.backend_for(0.01), Some(SolverBackend::Spectral));
    let mut sp = StageSolverCache::for_kdvh(&fourier(64), 0.1, SolverBackend::Auto).unwrap();
    sp.solve_stage(&random(192, 2), 0.01).unwrap();
    assert_eq!(sp.backend_for(0.01), Some(SolverBackend::Spectral));
    // sparse on spectral blocks and on tiny grids falls back to a dense factorization
    let mut fb = StageSolverCache::for_kdvh(&fourier(16), 0.1, SolverBackend::Sparse).unwrap();
    fb.solve_stage(&random(48, 2), 0.01).unwrap();
    assert_eq!(fb.backend_for(0.01), Some(SolverBackend::Dense));
}

#[test]
fn kdv_operator_banded_solve() {
    let ops = upwind(256, 8);
    let mut cache = StageSolverCache::for_kdv(&ops, SolverBackend::Sparse);
    let y = random(256, 5);
    let a = 0.005;
    let rhs = forward(&cache, &y, a);
    let x = cache.solve_stage(&rhs, a).unwrap();
    assert_eq!(cache.backend_for(a), Some(SolverBackend::Sparse));
    let scale = 1.0 + a * cache.stiff().norm_inf();
    assert!(max_diff(&x, &y) < 1e-12 * scale);
}

#[test]
fn cache_hits_are_bit_identical() {
    let ops = upwind(128, 8);
    let mut cache = StageSolverCache::for_kdvh(&ops, 1e-5, SolverBackend::Auto).unwrap();
    let rhs = random(384, 3);
    let x1 = cache.solve_stage(&rhs, 0.002).unwrap();
    let x2 = cache.solve_stage(&rhs, 0.002).unwrap();
    assert_eq!(cache.factorizations(), 1);
    assert_eq!(cache.hits(), 1);
    assert_eq!(x1, x2);
    cache.solve_stage(&rhs, 0.003).unwrap();
    assert_eq!(cache.factorizations(), 2);
}

#[test]
fn dense_oracle_matches_direct_inverse() {
    let ops = upwind(16, 2);
    let tau = 0.3;
    let mut cache = StageSolverCache::for_kdvh(&ops, tau, SolverBackend::Sparse).unwrap();
    let a = 0.05;
    let m = DMatrix::identity(48, 48) - cache.stiff().dense() * a;
    let rhs = random(48, 9);
    let oracle = m.lu().solve(&DVector::from_column_slice(&rhs)).unwrap();
    let x = cache.solve_stage(&rhs, a).unwrap();
    assert!(max_diff(&x, oracle.as_slice()) < 1e-13);
}

#[test]
fn invalid_inputs() {
    let ops = upwind(16, 2);
    let mut cache = StageSolverCache::for_kdvh(&ops, 0.3, SolverBackend::Auto).unwrap();
    assert!(cache.solve_stage(&[0.0; 47], 0.1).is_err());
    assert!(cache.solve_stage(&[0.0; 48], -0.1).is_err());
    assert!(StageSolverCache::for_kdvh(&ops, 0.0, SolverBackend::Auto).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solves_meet_backward_error(seed in any::<u64>(), log_tau in -9.0f64..0.0, a in 1e-4f64..0.1, q in 1usize..=8) {
        let ops = upwind(64, q);
        let tau = 10f64.powf(log_tau);
        let mut cache = StageSolverCache::for_kdvh(&ops, tau, SolverBackend::Auto).unwrap();
        let rhs = random(192, seed);
        prop_assert!(cache.solve_stage(&rhs, a).is_ok());
    }
}
