//! Per-iteration choice of the regularization weight by the discrepancy
//! principle: pick `lambda` so that the data residual of the
//! identity-regularized solution equals `rho * N * sigma^2`.

use crate::error::{Error, Result};
use crate::image::{centered_sq_norm, sq_norm, Image};
use crate::psf::{kernel_l1, Kernel};
use crate::scalar::{CompensatedSum, Scalar};
use crate::spectral::Spectrum;

/// Regularization weight, or the sentinel meaning "keep the pre-estimate".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Lambda<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Lambda::Infinite)
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Lambda::Finite(l) => Some(l),
            Lambda::Infinite => None,
        }
    }
}

impl<T: Scalar> std::fmt::Display for Lambda<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Lambda::Finite(l) => write!(f, "{:e}", l.to_f64_lossy()),
            Lambda::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegSelection<T> {
    pub lambda: Lambda<T>,
    /// `|h * u_p - y|^2` at the chosen `lambda`.
    pub residual: T,
    /// `rho * N * sigma^2`.
    pub target: T,
    /// Bisection steps taken; zero for the infinite shortcut.
    pub iterations: usize,
}

/// Smallest `rho` returned by [`compute_rho`].
pub const RHO_MIN: f64 = 0.05;

/// Search settings for [`select_lambda`], in decades of `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionSettings {
    pub log10_lo: f64,
    pub log10_hi: f64,
    /// Decades added to a side of the bracket per expansion.
    pub expand_decades: f64,
    pub max_expansions: usize,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for BisectionSettings {
    fn default() -> Self {
        Self {
            log10_lo: -10.0,
            log10_hi: 10.0,
            expand_decades: 2.0,
            max_expansions: 3,
            rel_tol: 1e-3,
            max_steps: 200,
        }
    }
}

/// Everything the residual functional needs about one iteration: the
/// observation and pre-estimate spectra, the OTF, and the noise budget.
#[derive(Debug, Clone)]
pub struct DiscrepancyContext<T> {
    sigma: T,
    n_pixels: usize,
    rho: T,
    /// `|H E - Y|^2` per frequency.
    misfit: Vec<T>,
    /// `|H|^2` per frequency.
    otf_power: Vec<T>,
}

impl<T: Scalar> DiscrepancyContext<T> {
    pub fn new(fy: &Spectrum<T>, fu_e: &Spectrum<T>, otf: &Spectrum<T>, sigma: T, rho: T) -> Result<Self> {
        fu_e.ensure_dims(fy.dims())?;
        otf.ensure_dims(fy.dims())?;
        if !(sigma > T::zero()) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!("noise sigma must be positive, got {sigma}")));
        }
        if !(rho > T::zero() && rho <= T::one()) {
            return Err(Error::InvalidParameter(format!("rho must lie in (0, 1], got {rho}")));
        }
        let misfit = otf
            .values()
            .iter()
            .zip(fu_e.values())
            .zip(fy.values())
            .map(|((h, e), y)| (h * e - y).norm_sqr())
            .collect();
        let otf_power = otf.values().iter().map(|h| h.norm_sqr()).collect();
        Ok(Self {
            sigma,
            n_pixels: fy.width() * fy.height(),
            rho,
            misfit,
            otf_power,
        })
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn n_pixels(&self) -> usize {
        self.n_pixels
    }

    /// Discrepancy bound `rho * N * sigma^2`.
    pub fn target(&self) -> T {
        self.rho * T::from_usize(self.n_pixels).unwrap() * self.sigma * self.sigma
    }

    /// `|h * u_E - y|^2`, the residual of the pre-estimate itself.
    pub fn estimate_residual(&self) -> T {
        let mut acc = CompensatedSum::new();
        for &m in &self.misfit {
            acc.add(m);
        }
        acc.value() / T::from_usize(self.n_pixels).unwrap()
    }
}

/// Fraction of the nominal noise budget to use as the discrepancy target,
/// `sqrt(1 - (|y - mean(y)|^2 - N sigma^2) / (|h|_1^2 |y|^2))`.
///
/// The radicand is clamped to `[RHO_MIN^2, 1]`, so the result is in `(0, 1]`.
pub fn compute_rho<T: Scalar>(y: &Image<T>, h: &Kernel<T>, sigma: T) -> T {
    let n = T::from_usize(y.len()).unwrap();
    let l1 = kernel_l1(h);
    let numerator = centered_sq_norm(y) - n * sigma * sigma;
    let denominator = l1 * l1 * sq_norm(y);
    let radicand = T::one() - numerator / denominator;
    let lo = T::lit(RHO_MIN * RHO_MIN);
    if radicand.is_nan() {
        return T::one();
    }
    radicand.max(lo).min(T::one()).sqrt()
}

/// `|h * u_p(lambda) - y|^2` evaluated in the frequency domain:
/// `(1/N) sum |lambda (H E - Y) / (|H|^2 + lambda)|^2`.
pub fn residual_at<T: Scalar>(ctx: &DiscrepancyContext<T>, lambda: T) -> T {
    let mut acc = CompensatedSum::new();
    for (&m, &p) in ctx.misfit.iter().zip(&ctx.otf_power) {
        let shrink = lambda / (p + lambda);
        acc.add(shrink * shrink * m);
    }
    acc.value() / T::from_usize(ctx.n_pixels).unwrap()
}

/// Chooses `lambda` with the default bisection settings.
pub fn select_lambda<T: Scalar>(ctx: &DiscrepancyContext<T>) -> Result<RegSelection<T>> {
    select_lambda_with(ctx, &BisectionSettings::default())
}

/// Returns the infinite sentinel when the pre-estimate already meets the
/// bound; otherwise bisects on `log10(lambda)` until the residual is within
/// `rel_tol` of the target. The residual is non-decreasing in `lambda`, so
/// the crossing is unique.
pub fn select_lambda_with<T: Scalar>(
    ctx: &DiscrepancyContext<T>,
    settings: &BisectionSettings,
) -> Result<RegSelection<T>> {
    let target = ctx.target();
    let base = ctx.estimate_residual();
    if base <= target {
        return Ok(RegSelection {
            lambda: Lambda::Infinite,
            residual: base,
            target,
            iterations: 0,
        });
    }

    let ten = T::lit(10.0);
    let at = |m: T| residual_at(ctx, ten.powf(m));
    let step = T::lit(settings.expand_decades);
    let mut lo = T::lit(settings.log10_lo);
    let mut hi = T::lit(settings.log10_hi);
    let mut r_lo = at(lo);
    let mut r_hi = at(hi);
    for _ in 0..settings.max_expansions {
        if r_lo <= target {
            break;
        }
        lo = lo - step;
        r_lo = at(lo);
    }
    for _ in 0..settings.max_expansions {
        if r_hi >= target {
            break;
        }
        hi = hi + step;
        r_hi = at(hi);
    }
    if !(r_lo <= target && target <= r_hi) {
        return Err(Error::BracketFailure {
            target: target.to_f64_lossy(),
            lo_lambda: ten.powf(lo).to_f64_lossy(),
            lo_residual: r_lo.to_f64_lossy(),
            hi_lambda: ten.powf(hi).to_f64_lossy(),
            hi_residual: r_hi.to_f64_lossy(),
        });
    }

    let tol = T::lit(settings.rel_tol) * target;
    let half = T::lit(0.5);
    let mut mid = (lo + hi) * half;
    let mut r_mid = at(mid);
    let mut steps = 1;
    while (r_mid - target).abs() > tol && steps < settings.max_steps {
        if r_mid < target {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = (lo + hi) * half;
        r_mid = at(mid);
        steps += 1;
    }
    Ok(RegSelection {
        lambda: Lambda::Finite(ten.powf(mid)),
        residual: r_mid,
        target,
        iterations: steps,
    })
}
