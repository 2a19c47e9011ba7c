//! The iterative restoration loop: select `lambda`, solve both regularized
//! deblurring problems in the Fourier domain, fuse them with the guided
//! filter, and feed the result back as the next pre-estimate.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::guided::{guided_filter, GuidedFilterParams};
use crate::image::{sq_distance, sq_norm, Image};
use crate::metrics::isnr;
use crate::psf::Kernel;
use crate::regparam::{compute_rho, select_lambda_with, BisectionSettings, DiscrepancyContext, Lambda, RegSelection};
use crate::scalar::Scalar;
use crate::spectral::{gradient_spectrum, guidance_spectrum, input_spectrum, Fft2, Spectrum};

pub const DEFAULT_MAX_ITER: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct RestorationParams<T> {
    pub filter: GuidedFilterParams<T>,
    pub max_iter: usize,
    /// Fixed `rho` in `(0, 1]` instead of the image-statistics estimate.
    pub rho_override: Option<T>,
    /// Noise standard deviation in working `[0, 1]` units.
    pub sigma: T,
    /// Stop once `|u_{k+1} - u_k|^2 / |u_k|^2` falls below this value.
    pub early_stop: Option<T>,
    /// Start from the observation instead of a zero pre-estimate.
    pub warm_start: bool,
    pub bisection: BisectionSettings,
}

impl<T: Scalar> RestorationParams<T> {
    pub fn new(sigma: T) -> Self {
        Self {
            filter: GuidedFilterParams::default(),
            max_iter: DEFAULT_MAX_ITER,
            rho_override: None,
            sigma,
            early_stop: None,
            warm_start: false,
            bisection: BisectionSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.filter.validate()?;
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        if let Some(rho) = self.rho_override {
            if !(rho > T::zero() && rho <= T::one()) {
                return Err(Error::InvalidParameter(format!("rho must lie in (0, 1], got {rho}")));
            }
        }
        if !(self.sigma > T::zero()) || !self.sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise sigma must be positive, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord<T> {
    pub k: usize,
    pub lambda: Lambda<T>,
    pub residual: T,
    /// Present only when a reference image was supplied.
    pub isnr: Option<T>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RestorationTrace<T> {
    pub records: Vec<TraceRecord<T>>,
}

impl<T: Scalar> RestorationTrace<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// CSV with header `iter,lambda,residual,isnr`; the infinite sentinel is
    /// written as `inf` and a missing ISNR as an empty field.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,lambda,residual,isnr\n");
        for r in &self.records {
            let isnr = match r.isnr {
                None => String::new(),
                Some(v) if v.is_infinite() => "inf".into(),
                Some(v) => format!("{}", v.to_f64_lossy()),
            };
            let lambda = match r.lambda {
                Lambda::Infinite => "inf".into(),
                Lambda::Finite(l) => format!("{}", l.to_f64_lossy()),
            };
            let _ = writeln!(out, "{},{},{},{}", r.k, lambda, r.residual.to_f64_lossy(), isnr);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Restoration<T> {
    pub image: Image<T>,
    pub trace: RestorationTrace<T>,
    pub rho: T,
}

/// Intermediate state exposed to observers once per iteration.
pub struct IterationView<'a, T> {
    pub k: usize,
    pub selection: &'a RegSelection<T>,
    pub guidance: &'a Image<T>,
    pub input: &'a Image<T>,
    pub guidance_spectrum: &'a Spectrum<T>,
    pub input_spectrum: &'a Spectrum<T>,
    pub output: &'a Image<T>,
}

/// Restores `y` blurred by the unit-sum kernel `h`. `reference`, when
/// given, is used only to fill the ISNR column of the trace.
pub fn deconvolve<T: Scalar>(
    y: &Image<T>,
    h: &Kernel<T>,
    params: &RestorationParams<T>,
    reference: Option<&Image<T>>,
) -> Result<Restoration<T>> {
    deconvolve_observed(y, h, params, reference, |_| {})
}

pub fn deconvolve_observed<T: Scalar>(
    y: &Image<T>,
    h: &Kernel<T>,
    params: &RestorationParams<T>,
    reference: Option<&Image<T>>,
    mut observe: impl FnMut(&IterationView<'_, T>),
) -> Result<Restoration<T>> {
    params.validate()?;
    if (h.sum() - T::one()).abs() > T::lit(1e-6) {
        return Err(Error::InvalidParameter(format!(
            "kernel must have unit sum, got {}",
            h.sum()
        )));
    }
    if let Some(r) = reference {
        y.ensure_same_dims(r)?;
    }
    let (w, ht) = y.dims();
    let fft = Fft2::new(w, ht)?;
    let fy = fft.forward(y)?;
    let otf = fft.otf(h)?;
    let grad = gradient_spectrum(w, ht)?;
    let rho = params.rho_override.unwrap_or_else(|| compute_rho(y, h, params.sigma));

    let mut u_e = if params.warm_start { y.clone() } else { Image::zeros(w, ht)? };
    let mut trace = RestorationTrace::default();
    for k in 0..params.max_iter {
        let fu_e = fft.forward(&u_e)?;
        let ctx = DiscrepancyContext::new(&fy, &fu_e, &otf, params.sigma, rho)?;
        let selection = select_lambda_with(&ctx, &params.bisection)?;

        let (spec_i, spec_p) = match selection.lambda {
            Lambda::Infinite => (fu_e.clone(), fu_e.clone()),
            lambda => (
                guidance_spectrum(&fy, &otf, &grad, &fu_e, lambda)?,
                input_spectrum(&fy, &otf, &fu_e, lambda)?,
            ),
        };
        let (u_i, u_p) = match selection.lambda {
            Lambda::Infinite => (u_e.clone(), u_e.clone()),
            Lambda::Finite(_) => (fft.inverse_real(&spec_i)?, fft.inverse_real(&spec_p)?),
        };
        let u = guided_filter(&u_i, &u_p, &params.filter)?;

        observe(&IterationView {
            k,
            selection: &selection,
            guidance: &u_i,
            input: &u_p,
            guidance_spectrum: &spec_i,
            input_spectrum: &spec_p,
            output: &u,
        });
        trace.records.push(TraceRecord {
            k,
            lambda: selection.lambda,
            residual: selection.residual,
            isnr: reference.map(|r| isnr(r, y, &u)).transpose()?,
        });

        let converged = match params.early_stop {
            Some(tol) => {
                let prev = sq_norm(&u_e);
                prev > T::zero() && sq_distance(&u, &u_e)? / prev < tol
            }
            None => false,
        };
        u_e = u;
        if converged {
            break;
        }
    }
    Ok(Restoration {
        image: u_e,
        trace,
        rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psf::{psf_binomial, psf_boxcar, psf_gaussian, psf_radial};
    use crate::spectral::circular_convolve;

    fn smooth_scene(w: usize, h: usize) -> Image<f64> {
        Image::from_fn(w, h, |x, y| {
            let (fx, fy) = (x as f64 / w as f64, y as f64 / h as f64);
            let disc = if (fx - 0.5).powi(2) + (fy - 0.5).powi(2) < 0.06 { 0.3 } else { 0.0 };
            0.2 + 0.4 * fx + disc + 0.05 * (6.0 * fy).sin()
        })
        .unwrap()
    }

    #[test]
    fn near_identity_without_blur_or_noise() {
        let y = smooth_scene(32, 32);
        let params = RestorationParams::new(1e-6);
        let out = deconvolve(&y, &Kernel::identity(), &params, None).unwrap();
        let first = out.trace.records[0].lambda.finite().unwrap();
        assert!(first < 1e-4, "first lambda {first}");
        let rms = (crate::metrics::mse(&out.image, &y).unwrap()).sqrt();
        assert!(rms < 2.0 / 255.0, "rms {rms}");
    }

    fn kernels() -> [Kernel<f64>; 4] {
        [psf_radial(), psf_boxcar(), psf_binomial(), psf_gaussian(1.6, 25).unwrap()]
    }

    #[test]
    fn constants_survive_every_kernel() {
        let c = Image::filled(32, 32, 0.42f64).unwrap();
        for k in kernels() {
            let params = RestorationParams {
                max_iter: 5,
                ..RestorationParams::new(1e-7)
            };
            let out = deconvolve(&c, &k, &params, None).unwrap();
            for &v in out.image.data() {
                assert!((v - 0.42).abs() < 1e-6, "{v}");
            }
        }
    }

    #[test]
    fn constant_scene_settles_inside_noise_budget() {
        // The iterate stops moving once N (u - c)^2 <= rho N sigma^2, so the
        // offset from the constant is bounded by sqrt(rho) sigma.
        let c = Image::filled(32, 32, 0.42f64).unwrap();
        let sigma = 0.01;
        for k in kernels() {
            let out = deconvolve(&c, &k, &RestorationParams::new(sigma), None).unwrap();
            let bound = out.rho.sqrt() * sigma * (1.0 + 1e-3);
            let (lo, hi) = out.image.min_max();
            assert!(hi - lo < 1e-9);
            assert!((lo - 0.42).abs() <= bound, "{lo} vs bound {bound}");
            assert!(out.trace.records.last().unwrap().lambda.is_infinite());
        }
    }

    #[test]
    fn trace_csv_and_lengths() {
        let x = smooth_scene(32, 32);
        let y = circular_convolve(&x, &psf_binomial()).unwrap();
        let params = RestorationParams {
            max_iter: 4,
            ..RestorationParams::new(0.01)
        };
        let out = deconvolve(&y, &psf_binomial(), &params, Some(&x)).unwrap();
        assert_eq!(out.trace.len(), 4);
        assert!(out.trace.records.iter().enumerate().all(|(i, r)| r.k == i && r.isnr.is_some()));
        let csv = out.trace.to_csv();
        assert!(csv.starts_with("iter,lambda,residual,isnr\n"));
        assert_eq!(csv.lines().count(), 5);

        let plain = deconvolve(&y, &psf_binomial(), &params, None).unwrap();
        assert!(plain.trace.to_csv().lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn infinite_sentinel_csv() {
        let trace = RestorationTrace {
            records: vec![TraceRecord {
                k: 0,
                lambda: Lambda::<f64>::Infinite,
                residual: 0.5,
                isnr: None,
            }],
        };
        assert_eq!(trace.to_csv(), "iter,lambda,residual,isnr\n0,inf,0.5,\n");
    }

    #[test]
    fn warm_start_on_clean_input_passes_through() {
        // The observation itself meets any positive noise budget when h is the identity.
        let y = smooth_scene(16, 16);
        let params = RestorationParams {
            warm_start: true,
            max_iter: 2,
            ..RestorationParams::new(0.01)
        };
        let out = deconvolve(&y, &Kernel::identity(), &params, None).unwrap();
        assert!(out.trace.records[0].lambda.is_infinite());
    }

    #[test]
    fn early_stop_shortens_trace() {
        let x = smooth_scene(32, 32);
        let y = circular_convolve(&x, &psf_binomial()).unwrap();
        let params = RestorationParams {
            early_stop: Some(1e-2),
            ..RestorationParams::new(0.01)
        };
        let out = deconvolve(&y, &psf_binomial(), &params, None).unwrap();
        assert!(out.trace.len() < DEFAULT_MAX_ITER);
    }

    #[test]
    fn rejects_invalid_inputs() {
        let y = smooth_scene(16, 16);
        let unnormalized = Kernel::new(3, 3, vec![1.0; 9]).unwrap();
        assert!(deconvolve(&y, &unnormalized, &RestorationParams::new(0.01), None).is_err());
        assert!(deconvolve(&y, &psf_binomial(), &RestorationParams::new(0.0), None).is_err());
        let bad_rho = RestorationParams {
            rho_override: Some(1.5),
            ..RestorationParams::new(0.01)
        };
        assert!(deconvolve(&y, &psf_binomial(), &bad_rho, None).is_err());
        let wrong = smooth_scene(16, 8);
        assert!(deconvolve(&y, &psf_binomial(), &RestorationParams::new(0.01), Some(&wrong)).is_err());
    }
}
