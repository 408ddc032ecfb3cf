use std::hint::black_box;
use std::time::Instant;

use num_complex::Complex64;

use super::record::{BenchRecord, RunKind, TransformDirection, Variant};
use crate::decomp::{DecompKind, DistPlan};
use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::grid::{RealField, SpectralField};

/// What the harness needs from a plan. Implemented for sequential and
/// distributed plans; for the latter every method is collective.
pub trait Benchable {
    fn backend_id(&self) -> &str;
    fn dims(&self) -> Vec<usize>;
    fn kind(&self) -> RunKind;
    fn size(&self) -> usize;

    fn random_x(&self, seed: u64) -> RealField;
    fn zeros_x(&self) -> RealField;
    fn zeros_k(&self) -> SpectralField;

    fn fft_core(&self, input: &[f64], output: &mut [Complex64]) -> Result<()>;
    fn fft_api(&self, input: &RealField, output: &mut SpectralField) -> Result<()>;
    fn fft_alloc(&self, input: &RealField) -> Result<SpectralField>;
    fn ifft_core(&self, input: &[Complex64], output: &mut [f64]) -> Result<()>;
    fn ifft_api(&self, input: &SpectralField, output: &mut RealField) -> Result<()>;
    fn ifft_alloc(&self, input: &SpectralField) -> Result<RealField>;

    fn sync(&self) -> Result<()>;
    fn max_across_ranks(&self, value: f64) -> Result<f64>;
}

impl Benchable for FftPlan {
    fn backend_id(&self) -> &str {
        FftPlan::backend_id(self)
    }
    fn dims(&self) -> Vec<usize> {
        self.grid().dims().to_vec()
    }
    fn kind(&self) -> RunKind {
        RunKind::Seq
    }
    fn size(&self) -> usize {
        1
    }
    fn random_x(&self, seed: u64) -> RealField {
        self.init_array_x_random(seed)
    }
    fn zeros_x(&self) -> RealField {
        self.alloc_array_x()
    }
    fn zeros_k(&self) -> SpectralField {
        self.alloc_array_k()
    }
    fn fft_core(&self, input: &[f64], output: &mut [Complex64]) -> Result<()> {
        self.fft_raw(input, output)
    }
    fn fft_api(&self, input: &RealField, output: &mut SpectralField) -> Result<()> {
        self.fft_into(input, output)
    }
    fn fft_alloc(&self, input: &RealField) -> Result<SpectralField> {
        FftPlan::fft_alloc(self, input)
    }
    fn ifft_core(&self, input: &[Complex64], output: &mut [f64]) -> Result<()> {
        self.ifft_raw(input, output)
    }
    fn ifft_api(&self, input: &SpectralField, output: &mut RealField) -> Result<()> {
        self.ifft_into(input, output)
    }
    fn ifft_alloc(&self, input: &SpectralField) -> Result<RealField> {
        FftPlan::ifft_alloc(self, input)
    }
    fn sync(&self) -> Result<()> {
        Ok(())
    }
    fn max_across_ranks(&self, value: f64) -> Result<f64> {
        Ok(value)
    }
}

impl Benchable for DistPlan {
    fn backend_id(&self) -> &str {
        DistPlan::backend_id(self)
    }
    fn dims(&self) -> Vec<usize> {
        self.grid().dims().to_vec()
    }
    fn kind(&self) -> RunKind {
        match self.decomposition().kind {
            DecompKind::Slab => RunKind::Slab,
            DecompKind::Pencil => RunKind::Pencil,
        }
    }
    fn size(&self) -> usize {
        self.context().size()
    }
    fn random_x(&self, seed: u64) -> RealField {
        self.init_array_x_random(seed)
    }
    fn zeros_x(&self) -> RealField {
        self.alloc_array_x()
    }
    fn zeros_k(&self) -> SpectralField {
        self.alloc_array_k()
    }
    fn fft_core(&self, input: &[f64], output: &mut [Complex64]) -> Result<()> {
        self.fft_raw(input, output)
    }
    fn fft_api(&self, input: &RealField, output: &mut SpectralField) -> Result<()> {
        self.dist_fft(input, output)
    }
    fn fft_alloc(&self, input: &RealField) -> Result<SpectralField> {
        self.dist_fft_alloc(input)
    }
    fn ifft_core(&self, input: &[Complex64], output: &mut [f64]) -> Result<()> {
        self.ifft_raw(input, output)
    }
    fn ifft_api(&self, input: &SpectralField, output: &mut RealField) -> Result<()> {
        self.dist_ifft(input, output)
    }
    fn ifft_alloc(&self, input: &SpectralField) -> Result<RealField> {
        self.dist_ifft_alloc(input)
    }
    fn sync(&self) -> Result<()> {
        self.context().barrier()
    }
    fn max_across_ranks(&self, value: f64) -> Result<f64> {
        self.context().all_reduce_max(value)
    }
}

fn call<P: Benchable + ?Sized>(
    plan: &P,
    direction: TransformDirection,
    variant: Variant,
    x: &RealField,
    k: &SpectralField,
    out_x: &mut RealField,
    out_k: &mut SpectralField,
) -> Result<()> {
    match (direction, variant) {
        (TransformDirection::Fft, Variant::CoreInto) => plan.fft_core(x.data(), out_k.data_mut()),
        (TransformDirection::Fft, Variant::ApiInto) => plan.fft_api(x, out_k),
        (TransformDirection::Fft, Variant::ApiAlloc) => {
            black_box(plan.fft_alloc(x)?);
            Ok(())
        }
        (TransformDirection::Ifft, Variant::CoreInto) => plan.ifft_core(k.data(), out_x.data_mut()),
        (TransformDirection::Ifft, Variant::ApiInto) => plan.ifft_api(k, out_x),
        (TransformDirection::Ifft, Variant::ApiAlloc) => {
            black_box(plan.ifft_alloc(k)?);
            Ok(())
        }
    }
}

/// Checks that all three variants produce identical values on the same
/// input before any of them is timed.
fn check_variants<P: Benchable + ?Sized>(
    plan: &P,
    direction: TransformDirection,
    x: &RealField,
    k: &SpectralField,
) -> Result<()> {
    let mismatch = |what: &str| {
        Err(Error::VariantMismatch(format!(
            "{what} results differ for {} {direction}",
            plan.backend_id()
        )))
    };
    match direction {
        TransformDirection::Fft => {
            let mut a = plan.zeros_k();
            plan.fft_core(x.data(), a.data_mut())?;
            let mut b = plan.zeros_k();
            plan.fft_api(x, &mut b)?;
            let c = plan.fft_alloc(x)?;
            if a.data() != b.data() || b.data() != c.data() {
                return mismatch("forward");
            }
        }
        TransformDirection::Ifft => {
            let mut a = plan.zeros_x();
            plan.ifft_core(k.data(), a.data_mut())?;
            let mut b = plan.zeros_x();
            plan.ifft_api(k, &mut b)?;
            let c = plan.ifft_alloc(k)?;
            if a.data() != b.data() || b.data() != c.data() {
                return mismatch("inverse");
            }
        }
    }
    Ok(())
}

/// Times `repeats` measurements of `iterations` consecutive calls.
///
/// One untimed warm-up call precedes the measurements. For distributed
/// plans each measurement is bracketed by barriers and the slowest rank's
/// time is recorded, so every rank returns the same record.
pub fn run_bench<P: Benchable + ?Sized>(
    plan: &P,
    direction: TransformDirection,
    variant: Variant,
    iterations: usize,
    repeats: usize,
    seed: u64,
) -> Result<BenchRecord> {
    if iterations == 0 || repeats == 0 {
        return Err(Error::InvalidRecord(
            "iterations and repeats must be at least 1".into(),
        ));
    }
    let x = plan.random_x(seed);
    let k = plan.fft_alloc(&x)?;
    check_variants(plan, direction, &x, &k)?;

    let mut out_x = plan.zeros_x();
    let mut out_k = plan.zeros_k();
    call(plan, direction, variant, &x, &k, &mut out_x, &mut out_k)?;

    let mut elapsed = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        plan.sync()?;
        let start = Instant::now();
        for _ in 0..iterations {
            call(plan, direction, variant, &x, &k, &mut out_x, &mut out_k)?;
        }
        plan.sync()?;
        let dt = start.elapsed().as_secs_f64();
        elapsed.push(plan.max_across_ranks(dt)?);
    }
    black_box((&out_x, &out_k));

    let record = BenchRecord {
        backend_id: plan.backend_id().to_string(),
        variant,
        direction,
        dims: plan.dims(),
        kind: plan.kind(),
        size: plan.size(),
        iterations,
        elapsed_seconds: elapsed,
    };
    record.validate()?;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::run_spmd;
    use crate::grid::GridSpec;

    #[test]
    fn structural_record() {
        let g = GridSpec::periodic(&[8, 8]).unwrap();
        let plan = FftPlan::create("naive", &g).unwrap();
        let r = run_bench(&plan, TransformDirection::Fft, Variant::CoreInto, 1, 3, 0).unwrap();
        assert_eq!(r.elapsed_seconds.len(), 3);
        assert!(r.elapsed_seconds.iter().all(|&t| t > 0.0));
        assert_eq!(r.kind, RunKind::Seq);
        for v in [Variant::ApiInto, Variant::ApiAlloc] {
            let r = run_bench(&plan, TransformDirection::Ifft, v, 2, 2, 1).unwrap();
            assert_eq!(r.iterations, 2);
        }
        assert!(run_bench(&plan, TransformDirection::Fft, Variant::ApiInto, 0, 1, 0).is_err());
    }

    #[test]
    fn distributed_record_is_rank_consistent() {
        let g = GridSpec::periodic(&[8, 8, 8]).unwrap();
        let recs = run_spmd(2, |c| {
            let plan = DistPlan::create("fast", &g, DecompKind::Slab, c)?;
            run_bench(&plan, TransformDirection::Fft, Variant::ApiInto, 2, 3, 7)
        })
        .unwrap();
        assert_eq!(recs[0], recs[1]);
        assert_eq!(recs[0].size, 2);
        assert_eq!(recs[0].kind, RunKind::Slab);
    }
}
