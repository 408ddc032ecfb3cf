use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use unifft::operators::OperatorGrid;
use unifft::{init_random, Complex64, FftPlan, GridSpec, SpectralField};
use unifft_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(unifft_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn plan(backend: Option<&str>, dims: &[usize]) -> (UnifftStatus, *mut UnifftPlan) {
    let name = backend.map(|b| CString::new(b).unwrap());
    let mut out = ptr::null_mut();
    let status = unsafe {
        unifft_plan_create(
            name.as_ref().map_or(ptr::null(), |n| n.as_ptr()),
            dims.len(),
            dims.as_ptr(),
            ptr::null(),
            &mut out,
        )
    };
    (status, out)
}

fn operators(dims: &[usize]) -> *mut UnifftOperators {
    let mut out = ptr::null_mut();
    let status = unsafe {
        unifft_operators_create(
            ptr::null(),
            dims.len(),
            dims.as_ptr(),
            ptr::null(),
            &mut out,
        )
    };
    assert_eq!(status, UnifftStatus::Ok, "{}", last_error());
    out
}

fn as_c(data: &[Complex64]) -> Vec<UnifftComplex> {
    data.iter()
        .map(|z| UnifftComplex { re: z.re, im: z.im })
        .collect()
}

#[test]
fn transforms_match_core() {
    for dims in [vec![8usize, 6], vec![5, 4, 6]] {
        let g = GridSpec::periodic(&dims).unwrap();
        let core = FftPlan::create("fast", &g).unwrap();
        let u = init_random(&g, 3);
        let expected = core.fft_alloc(&u).unwrap();

        let (status, p) = plan(Some("fast"), &dims);
        assert_eq!(status, UnifftStatus::Ok);
        let mut shape = vec![0usize; dims.len()];
        unsafe {
            assert_eq!(unifft_plan_ndim(p), dims.len());
            assert_eq!(unifft_plan_shape_x(p, shape.as_mut_ptr()), UnifftStatus::Ok);
            assert_eq!(shape, core.shape_x());
            assert_eq!(unifft_plan_shape_k(p, shape.as_mut_ptr()), UnifftStatus::Ok);
            assert_eq!(shape, core.shape_k());
        }
        let mut k = vec![UnifftComplex::default(); expected.data().len()];
        let mut x = vec![0.0; u.data().len()];
        unsafe {
            let s = unifft_plan_fft(
                p,
                u.data().as_ptr(),
                u.data().len(),
                k.as_mut_ptr(),
                k.len(),
            );
            assert_eq!(s, UnifftStatus::Ok);
            let s = unifft_plan_ifft(p, k.as_ptr(), k.len(), x.as_mut_ptr(), x.len());
            assert_eq!(s, UnifftStatus::Ok);
            unifft_plan_destroy(p);
        }
        assert_eq!(k, as_c(expected.data()));
        assert!(x.iter().zip(u.data()).all(|(a, b)| (a - b).abs() <= 1e-12));
    }
}

#[test]
fn errors_are_reported() {
    let (status, p) = plan(Some("cufft"), &[8, 8]);
    assert_eq!(status, UnifftStatus::BackendUnavailable);
    assert!(p.is_null());
    assert!(last_error().contains("cufft"));

    assert_eq!(plan(None, &[8, 1]).0, UnifftStatus::InvalidGrid);
    assert_eq!(plan(None, &[8]).0, UnifftStatus::InvalidGrid);

    let mut out = ptr::null_mut();
    let s = unsafe { unifft_plan_create(ptr::null(), 2, ptr::null(), ptr::null(), &mut out) };
    assert_eq!(s, UnifftStatus::NullPointer);
    assert!(last_error().contains("dims"));

    let (status, p) = plan(None, &[4, 4]);
    assert_eq!(status, UnifftStatus::Ok);
    assert!(last_error().is_empty());
    let u = [0.0; 16];
    let mut k = [UnifftComplex::default(); 12];
    unsafe {
        assert_eq!(
            unifft_plan_fft(p, u.as_ptr(), 16, k.as_mut_ptr(), 11),
            UnifftStatus::ShapeMismatch
        );
        assert_eq!(
            unifft_plan_fft(p, u.as_ptr(), 16, ptr::null_mut(), 12),
            UnifftStatus::NullPointer
        );
        assert_eq!(
            unifft_plan_fft(ptr::null(), u.as_ptr(), 16, k.as_mut_ptr(), 12),
            UnifftStatus::NullPointer
        );
        assert_eq!(
            CStr::from_ptr(unifft_plan_backend(p)).to_str().unwrap(),
            "fast"
        );
        unifft_plan_destroy(p);
        unifft_plan_destroy(ptr::null_mut());
        unifft_operators_destroy(ptr::null_mut());
    }
}

#[test]
fn library_queries() {
    let version = unsafe { CStr::from_ptr(unifft_version()) }
        .to_str()
        .unwrap();
    assert_eq!(version, unifft::VERSION);
    let names: Vec<String> = (0..unifft_backend_count())
        .map(|i| {
            unsafe { CStr::from_ptr(unifft_backend_name(i)) }
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    assert_eq!(names, unifft::available_backends());
    assert!(unifft_backend_name(names.len()).is_null());

    let dims = [8usize, 8, 8];
    for size in 1..=70 {
        for (kind, core_kind) in [
            (UNIFFT_KIND_SLAB, unifft::decomp::DecompKind::Slab),
            (UNIFFT_KIND_PENCIL, unifft::decomp::DecompKind::Pencil),
        ] {
            let got = unsafe { unifft_are_parameters_bad(kind, 3, dims.as_ptr(), size) };
            assert_eq!(
                got,
                unifft::decomp::are_parameters_bad(core_kind, &dims, size)
            );
        }
    }
    unsafe {
        assert!(unifft_are_parameters_bad(7, 3, dims.as_ptr(), 4));
        assert!(unifft_are_parameters_bad(
            UNIFFT_KIND_SLAB,
            3,
            ptr::null(),
            4
        ));
    }
}

#[test]
fn operators_match_core() {
    let dims = [6usize, 8, 10];
    let g = GridSpec::periodic(&dims).unwrap();
    let core = OperatorGrid::sequential("default", &g).unwrap();
    let u_fft = core.fft(&init_random(&g, 11)).unwrap();
    let ops = operators(&dims);
    let n = unsafe { unifft_operators_len_k(ops) };
    assert_eq!(n, u_fft.data().len());

    let mut kx = vec![0.0; n];
    unsafe {
        assert_eq!(
            unifft_operators_wavenumbers(ops, 0, kx.as_mut_ptr(), n),
            UnifftStatus::Ok
        );
        assert_eq!(
            unifft_operators_wavenumbers(ops, 3, kx.as_mut_ptr(), n),
            UnifftStatus::InvalidArgument
        );
    }
    assert_eq!(kx, core.kx());

    let input = as_c(u_fft.data());
    let mut grad = vec![UnifftComplex::default(); 3 * n];
    unsafe {
        let s = unifft_operators_grad(ops, input.as_ptr(), n, grad.as_mut_ptr(), grad.len());
        assert_eq!(s, UnifftStatus::Ok);
    }
    let expected: Vec<UnifftComplex> = core
        .gradfft_from_fft(&u_fft)
        .unwrap()
        .iter()
        .flat_map(|c| as_c(c.data()))
        .collect();
    assert_eq!(grad, expected);

    // the gradient field is curl-free, so its projection vanishes
    let mut proj = grad.clone();
    let mut div = vec![UnifftComplex::default(); n];
    unsafe {
        assert_eq!(
            unifft_operators_proj_inplace(ops, proj.as_mut_ptr(), proj.len()),
            UnifftStatus::Ok
        );
        assert_eq!(
            unifft_operators_div(ops, proj.as_ptr(), proj.len(), div.as_mut_ptr(), n),
            UnifftStatus::Ok
        );
        assert_eq!(
            unifft_operators_proj_inplace(ops, proj.as_mut_ptr(), n),
            UnifftStatus::ShapeMismatch
        );
    }
    assert!(proj.iter().all(|z| z.re.hypot(z.im) <= 1e-12));
    assert!(div.iter().all(|z| z.re.hypot(z.im) <= 1e-12));

    let v: Vec<SpectralField> = (0..3)
        .map(|c| {
            SpectralField::new(
                g.clone(),
                u_fft.data().iter().map(|z| z * (c as f64 + 1.0)).collect(),
            )
            .unwrap()
        })
        .collect();
    let mut flat: Vec<UnifftComplex> = v.iter().flat_map(|c| as_c(c.data())).collect();
    unsafe {
        assert_eq!(
            unifft_operators_proj_inplace(ops, flat.as_mut_ptr(), flat.len()),
            UnifftStatus::Ok
        );
        unifft_operators_destroy(ops);
    }
    let expected: Vec<UnifftComplex> = core
        .proj_outplace(&v)
        .unwrap()
        .iter()
        .flat_map(|c| as_c(c.data()))
        .collect();
    assert_eq!(flat, expected);
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/unifft.h"))
            .unwrap();
    for item in [
        "#ifndef UNIFFT_H",
        "typedef struct UnifftPlan UnifftPlan;",
        "typedef struct UnifftOperators UnifftOperators;",
        "UNIFFT_STATUS_OK = 0",
        "UNIFFT_STATUS_SHAPE_MISMATCH = 5",
        "#define UNIFFT_KIND_PENCIL 1",
        "const char *unifft_version(void);",
        "const char *unifft_last_error(void);",
        "enum UnifftStatus unifft_plan_fft(",
        "enum UnifftStatus unifft_plan_ifft(",
        "enum UnifftStatus unifft_operators_grad(",
        "enum UnifftStatus unifft_operators_proj_inplace(",
        "bool unifft_are_parameters_bad(",
    ] {
        assert!(header.contains(item), "header is missing `{item}`");
    }
}

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = target_dir();
    assert!(
        lib_dir.join("libunifft_ffi.a").exists(),
        "static library not found in {}",
        lib_dir.display()
    );
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let compile = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(lib_dir.join("libunifft_ffi.a"))
        .args(["-lm", "-lpthread", "-ldl"])
        .output();
    let compile = match compile {
        Ok(out) => out,
        Err(e) => {
            eprintln!("skipping: no C compiler ({cc}): {e}");
            return;
        }
    };
    assert!(
        compile.status.success(),
        "{}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "{}{}",
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
}
