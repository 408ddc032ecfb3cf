use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unifft::decomp::{gather_k, run_spmd, scatter_k, scatter_x, DecompKind, DistPlan};
use unifft::operators::OperatorGrid;
use unifft::{compute_energy_k, init_random, Complex64, GridSpec, SpectralField};

fn random_spectral(og: &OperatorGrid, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = og.zeros_k();
    for z in f.data_mut() {
        *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    f
}

fn random_vector(og: &OperatorGrid, seed: u64) -> Vec<SpectralField> {
    (0..og.ndim())
        .map(|c| random_spectral(og, seed * 10 + c as u64))
        .collect()
}

fn max_norm(f: &SpectralField) -> f64 {
    f.data().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn gradient_of_plane_waves() {
    for dims in [vec![16usize, 16], vec![8, 10, 12]] {
        let g = GridSpec::periodic(&dims).unwrap();
        let og = OperatorGrid::sequential("fast", &g).unwrap();
        let u = og.real_field_from(|p| p.iter().sum::<f64>().sin());
        let grad = og.gradfft_from_fft(&og.fft(&u).unwrap()).unwrap();
        let expected = og.real_field_from(|p| p.iter().sum::<f64>().cos());
        for comp in &grad {
            let back = og.ifft(comp).unwrap();
            for (a, b) in back.data().iter().zip(expected.data()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    // band-limited field; centered differences are O(h²) accurate
    let n = 32;
    let g = GridSpec::periodic(&[n, n]).unwrap();
    let og = OperatorGrid::sequential("fast", &g).unwrap();
    let u = og.real_field_from(|p| {
        0.3 * (p[0] + 2.0 * p[1] + 0.4).sin() + 0.2 * (2.0 * p[0] - p[1]).cos() + 0.1 * p[1].sin()
    });
    let grad = og.gradfft_from_fft(&og.fft(&u).unwrap()).unwrap();
    let h = std::f64::consts::TAU / n as f64;
    let at = |i: usize, j: usize| u.data()[(i % n) * n + (j % n)];
    let gx = og.ifft(&grad[0]).unwrap();
    let gy = og.ifft(&grad[1]).unwrap();
    for i in 0..n {
        for j in 0..n {
            // x is the last array axis
            let fd_x = (at(i, j + 1) - at(i, j + n - 1)) / (2.0 * h);
            let fd_y = (at(i + 1, j) - at(i + n - 1, j)) / (2.0 * h);
            assert!((gx.data()[i * n + j] - fd_x).abs() < 10.0 * h * h);
            assert!((gy.data()[i * n + j] - fd_y).abs() < 10.0 * h * h);
        }
    }
}

#[test]
fn projection_properties() {
    for dims in [vec![12usize, 10], vec![8, 6, 10], vec![9, 7, 5]] {
        let g = GridSpec::periodic(&dims).unwrap();
        let og = OperatorGrid::sequential("fast", &g).unwrap();
        for seed in 0..5 {
            let v = random_vector(&og, seed);
            let p = og.proj_outplace(&v).unwrap();
            assert!(max_norm(&og.divfft_from_vecfft(&p).unwrap()) <= 1e-12);
            let pp = og.proj_outplace(&p).unwrap();
            for (a, b) in pp.iter().zip(&p) {
                for (x, y) in a.data().iter().zip(b.data()) {
                    assert!((x - y).norm() <= 1e-14);
                }
            }
            for (orig, proj) in v.iter().zip(&p) {
                assert_eq!(orig.data()[0], proj.data()[0]);
            }
            let mut inplace = v.clone();
            og.proj_inplace(&mut inplace).unwrap();
            assert_eq!(inplace, p);
            let mut zero: Vec<SpectralField> = (0..og.ndim()).map(|_| og.zeros_k()).collect();
            og.proj_inplace(&mut zero).unwrap();
            assert!(zero.iter().all(|f| max_norm(f) == 0.0));
        }
    }
}

#[test]
fn divergence_of_zero_is_zero() {
    let g = GridSpec::periodic(&[6, 6, 6]).unwrap();
    let og = OperatorGrid::sequential("naive", &g).unwrap();
    let z: Vec<SpectralField> = (0..3).map(|_| og.zeros_k()).collect();
    assert_eq!(max_norm(&og.divfft_from_vecfft(&z).unwrap()), 0.0);
}

#[test]
fn distributed_operators_match_sequential() {
    let g = GridSpec::periodic(&[12, 8, 10]).unwrap();
    let seq = OperatorGrid::sequential("fast", &g).unwrap();
    let u = init_random(&g, 4);
    let u_fft = seq.fft(&u).unwrap();
    let grad = seq.gradfft_from_fft(&u_fft).unwrap();
    let proj = seq
        .proj_outplace(&grad.iter().rev().cloned().collect::<Vec<_>>())
        .unwrap();
    let shells = seq.spectrum_shell(&u_fft, None).unwrap();

    for (kind, size) in [
        (DecompKind::Slab, 3),
        (DecompKind::Pencil, 4),
        (DecompKind::Pencil, 6),
    ] {
        let out = run_spmd(size, |c| {
            let og = OperatorGrid::new(DistPlan::create("fast", &g, kind, c)?);
            let unifft::operators::OperatorPlan::Dist(plan) = og.plan() else {
                unreachable!()
            };
            let d = plan.decomposition().clone();
            let local_u = scatter_x(c, &d, c.is_root().then_some(&u))?;
            let local_fft = og.fft(&local_u)?;
            let local_grad = og.gradfft_from_fft(&local_fft)?;
            let reversed: Vec<SpectralField> = local_grad.iter().rev().cloned().collect();
            let local_proj = og.proj_outplace(&reversed)?;
            let mut g_grad = Vec::new();
            let mut g_proj = Vec::new();
            for (a, b) in local_grad.iter().zip(&local_proj) {
                g_grad.push(gather_k(c, &d, a)?);
                g_proj.push(gather_k(c, &d, b)?);
            }
            let shells = og.spectrum_shell(&local_fft, None)?;
            // wavenumbers are local slices of the global grid
            let global_kx = scatter_k(
                c,
                &d,
                c.is_root()
                    .then(|| {
                        SpectralField::new(
                            g.clone(),
                            seq.kx().iter().map(|&k| Complex64::new(k, 0.0)).collect(),
                        )
                        .unwrap()
                    })
                    .as_ref(),
            )?;
            assert!(global_kx
                .data()
                .iter()
                .zip(og.kx())
                .all(|(a, &b)| a.re == b));
            Ok((g_grad, g_proj, shells))
        })
        .unwrap();
        let (g_grad, g_proj, d_shells) = &out[0];
        for (a, b) in g_grad.iter().zip(&grad) {
            let a = a.as_ref().unwrap();
            assert!(a
                .data()
                .iter()
                .zip(b.data())
                .all(|(x, y)| (x - y).norm() <= 1e-10));
        }
        for (a, b) in g_proj.iter().zip(&proj) {
            let a = a.as_ref().unwrap();
            assert!(a
                .data()
                .iter()
                .zip(b.data())
                .all(|(x, y)| (x - y).norm() <= 1e-10));
        }
        for (a, b) in d_shells.iter().zip(&shells) {
            assert_eq!(a.k_center, b.k_center);
            assert!((a.energy - b.energy).abs() <= 1e-12);
        }
        // every rank sees the same global spectrum
        assert!(out.iter().all(|o| &o.2 == d_shells));
    }
    let total: f64 = shells.iter().map(|b| b.energy).sum();
    assert!((total - compute_energy_k(&u_fft)).abs() <= 1e-12);
}
