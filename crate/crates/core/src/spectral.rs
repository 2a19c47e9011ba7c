//! Frequency-domain machinery: 2-D DFT with an unnormalized forward and a
//! `1/(W H)` inverse, kernel embedding, and the closed-form deblurring
//! solutions used by the restoration loop.
//!
//! Every operator here assumes periodic boundaries, under which circular
//! convolution and forward differences are diagonal in the DFT basis.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::psf::Kernel;
use crate::regparam::Lambda;
use crate::scalar::Scalar;

/// Complex DFT coefficients of a `width x height` grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    width: usize,
    height: usize,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> Spectrum<T> {
    pub fn new(width: usize, height: usize, values: Vec<Complex<T>>) -> Result<Self> {
        if width == 0 || height == 0 || values.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "{width}x{height} spectrum cannot hold {} coefficients",
                values.len()
            )));
        }
        Ok(Self { width, height, values })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Complex<T> {
        self.values[v * self.width + u]
    }

    pub fn ensure_dims(&self, dims: (usize, usize)) -> Result<()> {
        if self.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                actual: self.dims(),
            });
        }
        Ok(())
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Spectrum<T>) -> Result<Spectrum<T>> {
        other.ensure_dims(self.dims())?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(Spectrum {
            width: self.width,
            height: self.height,
            values,
        })
    }

    /// Largest violation of `S(u, v) = conj(S(-u, -v))`.
    pub fn hermitian_defect(&self) -> T {
        let (w, h) = self.dims();
        let mut worst = T::zero();
        for v in 0..h {
            for u in 0..w {
                let a = self.get(u, v);
                let b = self.get((w - u) % w, (h - v) % h).conj();
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }
}

/// `|F(d/dx)|^2 + |F(d/dy)|^2` for periodic forward differences `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSpectrum<T> {
    width: usize,
    height: usize,
    values: Vec<T>,
}

impl<T: Scalar> GradientSpectrum<T> {
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> T {
        self.values[v * self.width + u]
    }
}

/// Builds the gradient-operator spectrum for a `width x height` grid.
pub fn gradient_spectrum<T: Scalar>(width: usize, height: usize) -> Result<GradientSpectrum<T>> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    let response = |k: usize, n: usize| {
        let theta = T::TAU() * T::from_usize(k).unwrap() / T::from_usize(n).unwrap();
        T::lit(2.0) - T::lit(2.0) * theta.cos()
    };
    let gx: Vec<T> = (0..width).map(|u| response(u, width)).collect();
    let gy: Vec<T> = (0..height).map(|v| response(v, height)).collect();
    let mut values = Vec::with_capacity(width * height);
    for &y in &gy {
        values.extend(gx.iter().map(|&x| x + y));
    }
    Ok(GradientSpectrum { width, height, values })
}

/// Cached row and column transforms for one grid size.
#[derive(Clone)]
pub struct Fft2<T: Scalar> {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<T>>,
    row_inv: Arc<dyn Fft<T>>,
    col_fwd: Arc<dyn Fft<T>>,
    col_inv: Arc<dyn Fft<T>>,
}

impl<T: Scalar> std::fmt::Debug for Fft2<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish()
    }
}

impl<T: Scalar> Fft2<T> {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter("empty grid".into()));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    fn transform(&self, buf: &mut [Complex<T>], rows: &dyn Fft<T>, cols: &dyn Fft<T>) {
        let (w, h) = (self.width, self.height);
        rows.process(buf);
        let mut t = vec![Complex::default(); w * h];
        for y in 0..h {
            for x in 0..w {
                t[x * h + y] = buf[y * w + x];
            }
        }
        cols.process(&mut t);
        for x in 0..w {
            for y in 0..h {
                buf[y * w + x] = t[x * h + y];
            }
        }
    }

    /// Unnormalized forward DFT of a real image.
    pub fn forward(&self, img: &Image<T>) -> Result<Spectrum<T>> {
        if img.dims() != self.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                actual: img.dims(),
            });
        }
        let mut buf: Vec<Complex<T>> = img.data().iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.transform(&mut buf, self.row_fwd.as_ref(), self.col_fwd.as_ref());
        Ok(Spectrum {
            width: self.width,
            height: self.height,
            values: buf,
        })
    }

    /// Inverse DFT with the `1/(W H)` factor applied and the imaginary part
    /// discarded after checking it is negligible.
    pub fn inverse_real(&self, spec: &Spectrum<T>) -> Result<Image<T>> {
        spec.ensure_dims(self.dims())?;
        let mut buf = spec.values.clone();
        self.transform(&mut buf, self.row_inv.as_ref(), self.col_inv.as_ref());
        let scale = T::one() / T::from_usize(self.width * self.height).unwrap();
        let mut residue = T::zero();
        let data: Vec<T> = buf
            .iter()
            .map(|c| {
                residue = residue.max((c.im * scale).abs());
                c.re * scale
            })
            .collect();
        if !(residue < T::IMAG_TOL) {
            return Err(Error::ImaginaryResidue {
                residue: residue.to_f64_lossy(),
            });
        }
        Image::new(self.width, self.height, data)
    }

    /// Embeds `k` into the grid with its center wrapped to `(0, 0)` and
    /// transforms it.
    pub fn otf(&self, k: &Kernel<T>) -> Result<Spectrum<T>> {
        let (w, h) = self.dims();
        if k.size_x() > w || k.size_y() > h {
            return Err(Error::InvalidParameter(format!(
                "{}x{} kernel does not fit a {w}x{h} grid",
                k.size_x(),
                k.size_y()
            )));
        }
        let (cx, cy) = k.center();
        let mut buf = vec![Complex::default(); w * h];
        for ky in 0..k.size_y() {
            let y = (ky + h - cy) % h;
            for kx in 0..k.size_x() {
                let x = (kx + w - cx) % w;
                buf[y * w + x] = Complex::new(k.at(kx, ky), T::zero());
            }
        }
        self.transform(&mut buf, self.row_fwd.as_ref(), self.col_fwd.as_ref());
        Ok(Spectrum {
            width: w,
            height: h,
            values: buf,
        })
    }

    /// `h * img` with periodic wrap.
    pub fn circular_convolve(&self, img: &Image<T>, k: &Kernel<T>) -> Result<Image<T>> {
        let otf = self.otf(k)?;
        self.inverse_real(&self.forward(img)?.mul(&otf)?)
    }
}

pub fn fft2<T: Scalar>(img: &Image<T>) -> Result<Spectrum<T>> {
    Fft2::new(img.width(), img.height())?.forward(img)
}

pub fn ifft2_real<T: Scalar>(spec: &Spectrum<T>) -> Result<Image<T>> {
    Fft2::new(spec.width(), spec.height())?.inverse_real(spec)
}

pub fn psf_to_otf<T: Scalar>(k: &Kernel<T>, width: usize, height: usize) -> Result<Spectrum<T>> {
    Fft2::new(width, height)?.otf(k)
}

pub fn circular_convolve<T: Scalar>(img: &Image<T>, k: &Kernel<T>) -> Result<Image<T>> {
    Fft2::new(img.width(), img.height())?.circular_convolve(img, k)
}

fn check_inputs<T: Scalar>(fy: &Spectrum<T>, otf: &Spectrum<T>, fu_e: &Spectrum<T>) -> Result<()> {
    otf.ensure_dims(fy.dims())?;
    fu_e.ensure_dims(fy.dims())
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be finite and nonnegative, got {lambda}"
        )));
    }
    Ok(())
}

/// Pointwise `(conj(H) Y + lambda R E) / (|H|^2 + lambda R)` where `R` is the
/// per-frequency regularizer weight.
fn regularized_solution<T: Scalar>(
    fy: &Spectrum<T>,
    otf: &Spectrum<T>,
    fu_e: &Spectrum<T>,
    lambda: T,
    weight: impl Fn(usize) -> T,
) -> Result<Spectrum<T>> {
    let w = fy.width;
    let mut values = Vec::with_capacity(fy.values.len());
    for i in 0..fy.values.len() {
        let h = otf.values[i];
        let lr = lambda * weight(i);
        let denom = h.norm_sqr() + lr;
        if denom == T::zero() {
            return Err(Error::Singular { u: i % w, v: i / w });
        }
        values.push((h.conj() * fy.values[i] + fu_e.values[i] * lr) / denom);
    }
    Ok(Spectrum {
        width: fy.width,
        height: fy.height,
        values,
    })
}

/// Spectrum of the gradient-regularized estimate (the guidance image).
pub fn guidance_spectrum<T: Scalar>(
    fy: &Spectrum<T>,
    otf: &Spectrum<T>,
    grad: &GradientSpectrum<T>,
    fu_e: &Spectrum<T>,
    lambda: Lambda<T>,
) -> Result<Spectrum<T>> {
    check_inputs(fy, otf, fu_e)?;
    if grad.dims() != fy.dims() {
        return Err(Error::DimensionMismatch {
            expected: fy.dims(),
            actual: grad.dims(),
        });
    }
    match lambda {
        Lambda::Infinite => Ok(fu_e.clone()),
        Lambda::Finite(l) => {
            check_lambda(l)?;
            regularized_solution(fy, otf, fu_e, l, |i| grad.values[i])
        }
    }
}

/// Spectrum of the identity-regularized estimate (the filtering input).
pub fn input_spectrum<T: Scalar>(
    fy: &Spectrum<T>,
    otf: &Spectrum<T>,
    fu_e: &Spectrum<T>,
    lambda: Lambda<T>,
) -> Result<Spectrum<T>> {
    check_inputs(fy, otf, fu_e)?;
    match lambda {
        Lambda::Infinite => Ok(fu_e.clone()),
        Lambda::Finite(l) => {
            check_lambda(l)?;
            regularized_solution(fy, otf, fu_e, l, |_| T::one())
        }
    }
}

/// Minimizer of `lambda |grad u - grad u_E|^2 + |h * u - y|^2`.
///
/// The infinite sentinel returns `u_E` itself.
pub fn deblur_guidance<T: Scalar>(
    fy: &Spectrum<T>,
    otf: &Spectrum<T>,
    grad: &GradientSpectrum<T>,
    fu_e: &Spectrum<T>,
    lambda: Lambda<T>,
) -> Result<Image<T>> {
    ifft2_real(&guidance_spectrum(fy, otf, grad, fu_e, lambda)?)
}

/// Minimizer of `lambda |u - u_E|^2 + |h * u - y|^2`.
pub fn deblur_input<T: Scalar>(
    fy: &Spectrum<T>,
    otf: &Spectrum<T>,
    fu_e: &Spectrum<T>,
    lambda: Lambda<T>,
) -> Result<Image<T>> {
    ifft2_real(&input_spectrum(fy, otf, fu_e, lambda)?)
}

/// Energy of the spectrum outside the central half band, i.e. at
/// frequencies where `max(|fx|, |fy|) >= 1/4` cycles per pixel.
pub fn high_band_energy<T: Scalar>(spec: &Spectrum<T>) -> T {
    let (w, h) = spec.dims();
    let signed = |k: usize, n: usize| -> usize { k.min(n - k) };
    let mut acc = crate::scalar::CompensatedSum::new();
    for v in 0..h {
        let high_v = 4 * signed(v, h) >= h;
        for u in 0..w {
            if high_v || 4 * signed(u, w) >= w {
                acc.add(spec.get(u, v).norm_sqr());
            }
        }
    }
    acc.value()
}
