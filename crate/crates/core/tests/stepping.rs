use kdvh::imex::{find_method, imex_step, registry, step, step_kdv, Coef, ImexTableau, SolverBackend, StageSolverCache};
use kdvh::model::{kdv_soliton_periodic, well_prepared_init, KdvState, KdvhState, SolitonParams};
use kdvh::sbp::{make_fourier_operator, make_grid, make_upwind_operators};
use nalgebra::{DMatrix, DVector};

fn ars111() -> ImexTableau {
    let c = |x: f64| Coef::from(x);
    ImexTableau::new(
        "ARS(1,1,1)",
        1,
        vec![vec![c(0.0), c(0.0)], vec![c(1.0), c(0.0)]],
        vec![c(1.0), c(0.0)],
        vec![c(0.0), c(1.0)],
        vec![vec![c(0.0), c(0.0)], vec![c(0.0), c(1.0)]],
        vec![c(0.0), c(1.0)],
        vec![c(0.0), c(1.0)],
    )
    .unwrap()
}

fn wavy(n: usize) -> Vec<f64> {
    (0..n).map(|i| (0.4 * i as f64).sin() + 0.3 * (1.1 * i as f64).cos()).collect()
}

#[test]
fn zero_state_is_fixed_point() {
    let ops = make_upwind_operators(&make_grid(-10.0, 10.0, 64).unwrap(), 4).unwrap();
    for t in registry() {
        let mut cache = StageSolverCache::for_kdvh(&ops, 1e-4, SolverBackend::Auto).unwrap();
        let s = KdvhState::zeros(64, 1e-4).unwrap();
        assert_eq!(step(&t, &ops, &s, 0.01, &mut cache).unwrap(), s, "{}", t.name);
        let mut kc = StageSolverCache::for_kdv(&ops, SolverBackend::Auto);
        let e = KdvState::new(vec![0.0; 64]);
        assert_eq!(step_kdv(&t, &ops, &e, 0.01, &mut kc).unwrap(), e);
    }
}

#[test]
fn implicit_euler_on_linear_part_matches_dense_solve() {
    let ops = make_upwind_operators(&make_grid(-4.0, 4.0, 16).unwrap(), 2).unwrap();
    let tau = 0.2;
    let dt = 0.03;
    let mut cache = StageSolverCache::for_kdvh(&ops, tau, SolverBackend::Sparse).unwrap();
    let q0: Vec<f64> = wavy(48);
    let q1 = imex_step(&ars111(), |_, f| f.fill(0.0), &mut cache, &q0, dt).unwrap();
    let m = DMatrix::identity(48, 48) - cache.stiff().dense() * dt;
    let oracle = m.lu().solve(&DVector::from_column_slice(&q0)).unwrap();
    let err = q1.iter().zip(oracle.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-13, "{err:e}");
}

#[test]
fn type_two_first_stage_is_a_copy() {
    let ops = make_upwind_operators(&make_grid(-4.0, 4.0, 32).unwrap(), 4).unwrap();
    for name in ["ars222", "ars443", "ark324l2sa", "ark436l2sa"] {
        let t = find_method(name).unwrap();
        let mut cache = StageSolverCache::for_kdvh(&ops, 1e-3, SolverBackend::Auto).unwrap();
        let q0 = wavy(96);
        let mut first: Option<Vec<f64>> = None;
        imex_step(
            &t,
            |q, f| {
                first.get_or_insert_with(|| q.to_vec());
                f.fill(0.0);
            },
            &mut cache,
            &q0,
            0.01,
        )
        .unwrap();
        assert_eq!(first.unwrap(), q0, "{name}");
    }
}

#[test]
fn steps_are_deterministic() {
    let grid = make_grid(-40.0, 40.0, 128).unwrap();
    let ops = make_upwind_operators(&grid, 8).unwrap();
    let p = SolitonParams::new(1.0 / 3.0).unwrap();
    let [u0, _, _] = kdv_soliton_periodic(&p, &grid, 0.0, 0.0);
    let s0 = well_prepared_init(&ops, &u0, 1e-5).unwrap();
    let run = || {
        let mut cache = StageSolverCache::for_kdvh(&ops, 1e-5, SolverBackend::Auto).unwrap();
        let mut s = s0.clone();
        for _ in 0..20 {
            s = step(&find_method("ars443").unwrap(), &ops, &s, 0.05, &mut cache).unwrap();
        }
        s
    };
    assert_eq!(run(), run());
}

#[test]
fn cache_rebinds_on_tau_change() {
    let ops = make_upwind_operators(&make_grid(-4.0, 4.0, 32).unwrap(), 2).unwrap();
    let t = find_method("ars222").unwrap();
    let mut cache = StageSolverCache::for_kdvh(&ops, 1e-2, SolverBackend::Auto).unwrap();
    let s = KdvhState::new(wavy(32), vec![0.0; 32], vec![0.0; 32], 1e-3).unwrap();
    step(&t, &ops, &s, 0.01, &mut cache).unwrap();
    assert_eq!(cache.tau(), Some(1e-3));
    let fresh = {
        let mut c = StageSolverCache::for_kdvh(&ops, 1e-3, SolverBackend::Auto).unwrap();
        step(&t, &ops, &s, 0.01, &mut c).unwrap()
    };
    assert_eq!(step(&t, &ops, &s, 0.01, &mut cache).unwrap(), fresh);
}

/// Pure dispersion `η' = -D₊DD₋η` propagated exactly on every Fourier mode.
#[test]
fn linear_dispersion_converges_to_exact_propagation() {
    // wavenumbers up to 4, so Δt·k³ stays in the asymptotic range
    let grid = make_grid(0.0, 8.0 * std::f64::consts::PI, 32).unwrap();
    let ops = make_fourier_operator(&grid).unwrap();
    let eta0: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|x| (0.5 * (x / 4.0).sin() + 0.2 * (x / 2.0).cos()).exp())
        .collect();
    let t_end = 0.5;
    let exact = {
        let symbol = ops.dispersion().symbol();
        let mut hat = ops.fft_plan().forward_real(&eta0);
        for (h, s) in hat.iter_mut().zip(&symbol) {
            *h *= (-s * t_end).exp();
        }
        ops.fft_plan().inverse_real(hat)
    };
    for t in registry() {
        let err = |steps: usize| {
            let dt = t_end / steps as f64;
            let mut cache = StageSolverCache::for_kdv(&ops, SolverBackend::Auto);
            let mut q = eta0.clone();
            for _ in 0..steps {
                q = imex_step(&t, |_, f| f.fill(0.0), &mut cache, &q, dt).unwrap();
            }
            q.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(25), err(50));
        let rate = (e1 / e2).log2();
        println!("{}: {e1:e} {e2:e} rate {rate:.2}", t.name);
        assert!(rate > t.order as f64 - 0.3, "{}: rate {rate}", t.name);
    }
}
