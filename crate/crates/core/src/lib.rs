//! Non-blind image deconvolution regularized by guided filtering.
//!
//! Each iteration solves two quadratic deblurring problems in closed form in
//! the Fourier domain (one penalizing gradient deviation from a pre-estimate,
//! one penalizing intensity deviation), then fuses them with a guided filter:
//! the gradient-regularized solution guides, the noisier intensity-regularized
//! one is filtered. The regularization weight is re-chosen every iteration by
//! the discrepancy principle.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below name the double-precision instantiations used by the CLI.

pub mod error;
pub mod guided;
pub mod image;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod psf;
pub mod regparam;
pub mod scalar;
pub mod spectral;

pub use crate::error::{Error, Result};
pub use crate::guided::{box_mean, guided_filter, local_linear_coeffs, GuidedFilterParams, LocalLinearCoeffs};
pub use crate::image::{image_mean, sq_distance, sq_norm, Image, NoiseModel};
pub use crate::io::{load_image, save_image};
pub use crate::metrics::{isnr, mse, psnr};
pub use crate::pipeline::{deconvolve, deconvolve_observed, Restoration, RestorationParams, RestorationTrace, TraceRecord};
pub use crate::psf::{kernel_l1, psf_binomial, psf_boxcar, psf_gaussian, psf_radial, Kernel};
pub use crate::regparam::{compute_rho, residual_at, select_lambda, DiscrepancyContext, Lambda, RegSelection};
pub use crate::scalar::Scalar;
pub use crate::spectral::{
    circular_convolve, deblur_guidance, deblur_input, fft2, gradient_spectrum, ifft2_real, psf_to_otf, Fft2,
    GradientSpectrum, Spectrum,
};

pub type Image64 = Image<f64>;
pub type Image32 = Image<f32>;
pub type Kernel64 = Kernel<f64>;
pub type Kernel32 = Kernel<f32>;
pub type Spectrum64 = Spectrum<f64>;
pub type Spectrum32 = Spectrum<f32>;
pub type RestorationParams64 = RestorationParams<f64>;
pub type RestorationParams32 = RestorationParams<f32>;
pub type Restoration64 = Restoration<f64>;
pub type Restoration32 = Restoration<f32>;
