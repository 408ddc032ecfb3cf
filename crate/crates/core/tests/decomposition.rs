use unifft::decomp::{
    are_parameters_bad, gather_block, gather_k, gather_x, run_spmd, scatter_k, scatter_x,
    transpose_exchange, DecompKind, DistPlan,
};
use unifft::{init_random, Complex64, FftPlan, GridSpec, RealField, SpectralField};

fn max_abs_c(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Forward and inverse distributed transforms, gathered on root.
fn distributed(
    backend: &str,
    g: &GridSpec,
    kind: DecompKind,
    size: usize,
    u: &RealField,
    k: &SpectralField,
) -> (SpectralField, RealField) {
    let out = run_spmd(size, |c| {
        let plan = DistPlan::create(backend, g, kind, c)?;
        let d = plan.decomposition();
        let local_x = scatter_x(c, d, c.is_root().then_some(u))?;
        let mut local_k = plan.alloc_array_k();
        plan.dist_fft(&local_x, &mut local_k)?;
        let fwd = gather_k(c, d, &local_k)?;
        let local_k_in = scatter_k(c, d, c.is_root().then_some(k))?;
        let mut local_x_out = plan.alloc_array_x();
        plan.dist_ifft(&local_k_in, &mut local_x_out)?;
        let inv = gather_x(c, d, &local_x_out)?;
        Ok((fwd, inv))
    })
    .unwrap();
    let (f, i) = out.into_iter().next().unwrap();
    (f.unwrap(), i.unwrap())
}

#[test]
fn distributed_matches_sequential_sweep() {
    let axis = [4usize, 6, 8, 12];
    let mut checked = 0;
    for &n0 in &axis {
        for &n1 in &axis {
            for &n2 in &axis {
                let dims = [n0, n1, n2];
                let g = GridSpec::periodic(&dims).unwrap();
                let seq = FftPlan::create("fast", &g).unwrap();
                let u = init_random(&g, (n0 * 100 + n1 * 10 + n2) as u64);
                let k = seq.fft_alloc(&u).unwrap();
                let x = seq.ifft_alloc(&k).unwrap();
                for size in [1, 2, 3, 4, 6, 8] {
                    for kind in [DecompKind::Slab, DecompKind::Pencil] {
                        if are_parameters_bad(kind, &dims, size) {
                            continue;
                        }
                        let (dk, dx) = distributed("fast", &g, kind, size, &u, &k);
                        assert!(
                            max_abs_c(dk.data(), k.data()) <= 1e-10,
                            "{dims:?} {kind} {size}"
                        );
                        assert!(
                            max_abs(dx.data(), x.data()) <= 1e-10,
                            "{dims:?} {kind} {size}"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 700);
}

#[test]
fn two_dimensional_slab() {
    for dims in [[5usize, 4], [8, 8], [7, 9]] {
        let g = GridSpec::periodic(&dims).unwrap();
        let seq = FftPlan::create("naive", &g).unwrap();
        let u = init_random(&g, 2);
        let k = seq.fft_alloc(&u).unwrap();
        for size in 1..=6 {
            let (dk, dx) = distributed("naive", &g, DecompKind::Slab, size, &u, &k);
            assert!(max_abs_c(dk.data(), k.data()) <= 1e-10);
            assert!(max_abs(dx.data(), u.data()) <= 1e-10);
        }
    }
}

#[test]
fn single_rank_is_bitwise_sequential() {
    for kind in [DecompKind::Slab, DecompKind::Pencil] {
        let g = GridSpec::periodic(&[6, 10, 8]).unwrap();
        let seq = FftPlan::create("fast", &g).unwrap();
        let u = init_random(&g, 8);
        let k = seq.fft_alloc(&u).unwrap();
        let (dk, dx) = distributed("fast", &g, kind, 1, &u, &k);
        assert_eq!(dk.data(), k.data());
        assert_eq!(dx.data(), seq.ifft_alloc(&k).unwrap().data());
    }
}

#[test]
fn slab_and_pencil_agree() {
    let g = GridSpec::periodic(&[8, 8, 8]).unwrap();
    let u = init_random(&g, 99);
    let k = FftPlan::create("fast", &g).unwrap().fft_alloc(&u).unwrap();
    let (slab, _) = distributed("fast", &g, DecompKind::Slab, 4, &u, &k);
    let (pencil, _) = distributed("fast", &g, DecompKind::Pencil, 4, &u, &k);
    assert!(max_abs_c(slab.data(), pencil.data()) <= 1e-10);
}

#[test]
fn empty_blocks() {
    let g = GridSpec::periodic(&[8, 8, 8]).unwrap();
    let seq = FftPlan::create("fast", &g).unwrap();
    let u = init_random(&g, 1);
    let k = seq.fft_alloc(&u).unwrap();
    for size in [9, 10, 12] {
        let (dk, dx) = distributed("fast", &g, DecompKind::Slab, size, &u, &k);
        assert!(max_abs_c(dk.data(), k.data()) <= 1e-10);
        assert!(max_abs(dx.data(), u.data()) <= 1e-10);
    }
}

#[test]
fn distributed_roundtrips() {
    for (dims, kind, size) in [
        ([8usize, 8, 8], DecompKind::Slab, 2),
        ([12, 8, 10], DecompKind::Pencil, 4),
    ] {
        let g = GridSpec::periodic(&dims).unwrap();
        let out = run_spmd(size, |c| {
            let plan = DistPlan::create("naive", &g, kind, c)?;
            let u = plan.init_array_x_random(5);
            let back = plan.dist_ifft_alloc(&plan.dist_fft_alloc(&u)?)?;
            Ok(max_abs(back.data(), u.data()))
        })
        .unwrap();
        assert!(out.iter().all(|&e| e <= 1e-10));
    }
}

#[test]
fn runs_are_deterministic() {
    let g = GridSpec::periodic(&[12, 8, 10]).unwrap();
    let run = || {
        run_spmd(6, |c| {
            let plan = DistPlan::create("fast", &g, DecompKind::Pencil, c)?;
            plan.dist_fft_alloc(&plan.init_array_x_random(3))
        })
        .unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn transpose_twice_is_identity() {
    let g = GridSpec::periodic(&[12, 8, 10]).unwrap();
    run_spmd(6, |c| {
        let plan = DistPlan::create("fast", &g, DecompKind::Pencil, c)?;
        let d = plan.decomposition();
        let local = plan.dist_fft_alloc(&plan.init_array_x_random(1))?;
        // spectral layout back to a physical-style split of the half spectrum
        let from = d.spectral_tiling().clone();
        let to = unifft::decomp::Tiling::new(&d.shape_k_seq, c.size(), |r| vec![(0, c.size(), r)]);
        let there = transpose_exchange(c, local.data(), &from, &to)?;
        let back = transpose_exchange(c, &there, &to, &from)?;
        assert_eq!(back, local.data());
        // gathered intermediate equals gathered original
        let a = gather_block(c, &from, local.data())?;
        let b = gather_block(c, &to, &there)?;
        assert_eq!(a, b);
        Ok(())
    })
    .unwrap();
}

#[test]
fn scatter_gather_is_bitwise_identity() {
    let g = GridSpec::periodic(&[9, 6, 4]).unwrap();
    let u = init_random(&g, 77);
    for (kind, size) in [
        (DecompKind::Slab, 1),
        (DecompKind::Slab, 4),
        (DecompKind::Pencil, 6),
    ] {
        let out = run_spmd(size, |c| {
            let d = unifft::decomp::make_decomposition(kind, &g, c)?;
            let local = scatter_x(c, &d, c.is_root().then_some(&u))?;
            gather_x(c, &d, &local)
        })
        .unwrap();
        assert_eq!(out[0].as_ref(), Some(&u));
    }
}

#[test]
fn mismatched_blocks_are_rejected() {
    let g = GridSpec::periodic(&[8, 8, 8]).unwrap();
    let err = run_spmd(2, |c| {
        let plan = DistPlan::create("fast", &g, DecompKind::Slab, c)?;
        let wrong = RealField::zeros(g.clone());
        plan.dist_fft_alloc(&wrong).map(drop)
    })
    .unwrap_err();
    assert!(matches!(err.root_cause(), unifft::Error::ShapeError { .. }));
}
