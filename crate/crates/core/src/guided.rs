//! Guided image filter with window means computed by running sums, so the
//! cost per pixel does not depend on the window size.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Scalar;

pub const DEFAULT_WINDOW: usize = 3;
pub const DEFAULT_EPSILON: f64 = 7.5e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidedFilterParams<T> {
    /// Side length of the square window, odd.
    pub w: usize,
    /// Regularization added to the local guidance variance.
    pub epsilon: T,
}

impl<T: Scalar> Default for GuidedFilterParams<T> {
    fn default() -> Self {
        Self {
            w: DEFAULT_WINDOW,
            epsilon: T::lit(DEFAULT_EPSILON),
        }
    }
}

impl<T: Scalar> GuidedFilterParams<T> {
    pub fn new(w: usize, epsilon: T) -> Result<Self> {
        let p = Self { w, epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_window(self.w)?;
        if !(self.epsilon > T::zero()) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "guided filter epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

fn check_window(w: usize) -> Result<()> {
    if w == 0 || w % 2 == 0 {
        return Err(Error::InvalidParameter(format!("window size must be odd and positive, got {w}")));
    }
    Ok(())
}

/// Per-window statistics and the local affine coefficients `a`, `b` with
/// `u ~ a * guide + b` inside each window.
#[derive(Debug, Clone)]
pub struct LocalLinearCoeffs<T> {
    pub a: Image<T>,
    pub b: Image<T>,
    pub mean_i: Image<T>,
    pub var_i: Image<T>,
    pub mean_p: Image<T>,
    pub corr_ip: Image<T>,
}

/// Row-wise sums of `data` over the clipped window `[x - r, x + r]`.
fn sliding_sums<T: Scalar>(data: &[T], width: usize, height: usize, r: usize, out: &mut [T], prefix: &mut Vec<T>) {
    for y in 0..height {
        let row = &data[y * width..(y + 1) * width];
        prefix.clear();
        prefix.push(T::zero());
        let mut acc = T::zero();
        for &v in row {
            acc = acc + v;
            prefix.push(acc);
        }
        let dst = &mut out[y * width..(y + 1) * width];
        for (x, d) in dst.iter_mut().enumerate() {
            let lo = x.saturating_sub(r);
            let hi = (x + r + 1).min(width);
            *d = prefix[hi] - prefix[lo];
        }
    }
}

/// Mean of `img` over the `w x w` window centered at each pixel, clipped to
/// the image; the divisor is the number of in-bounds pixels.
pub fn box_mean<T: Scalar>(img: &Image<T>, w: usize) -> Result<Image<T>> {
    check_window(w)?;
    let (width, height) = img.dims();
    if w > width.min(height) {
        return Err(Error::InvalidParameter(format!(
            "window {w} exceeds the {width}x{height} image"
        )));
    }
    if w == 1 {
        return Ok(img.clone());
    }
    let r = w / 2;
    let mut prefix = Vec::with_capacity(width.max(height) + 1);
    let mut rows = vec![T::zero(); width * height];
    sliding_sums(img.data(), width, height, r, &mut rows, &mut prefix);

    let transposed = Image::from_parts(width, height, rows).transpose();
    let mut cols = vec![T::zero(); width * height];
    sliding_sums(transposed.data(), height, width, r, &mut cols, &mut prefix);
    let sums = Image::from_parts(height, width, cols).transpose();

    let span = |i: usize, n: usize| T::from_usize((i + r + 1).min(n) - i.saturating_sub(r)).unwrap();
    let nx: Vec<T> = (0..width).map(|x| span(x, width)).collect();
    let mut data = sums.into_data();
    for y in 0..height {
        let ny = span(y, height);
        for x in 0..width {
            data[y * width + x] = data[y * width + x] / (nx[x] * ny);
        }
    }
    Ok(Image::from_parts(width, height, data))
}

fn product<T: Scalar>(a: &Image<T>, b: &Image<T>) -> Result<Image<T>> {
    a.zip_map(b, |x, y| x * y)
}

/// Window statistics of guidance `guide` and input `input`, and the
/// resulting per-window affine coefficients.
pub fn local_linear_coeffs<T: Scalar>(
    guide: &Image<T>,
    input: &Image<T>,
    params: &GuidedFilterParams<T>,
) -> Result<LocalLinearCoeffs<T>> {
    params.validate()?;
    guide.ensure_same_dims(input)?;
    let w = params.w;
    let mean_i = box_mean(guide, w)?;
    let mean_p = box_mean(input, w)?;
    let corr_ip = box_mean(&product(guide, input)?, w)?;
    let corr_ii = box_mean(&product(guide, guide)?, w)?;
    let var_i = corr_ii.zip_map(&mean_i, |c, m| (c - m * m).max(T::zero()))?;

    let n = guide.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let mi = mean_i.data()[k];
        let mp = mean_p.data()[k];
        let ak = (corr_ip.data()[k] - mi * mp) / (var_i.data()[k] + params.epsilon);
        a.push(ak);
        b.push(mp - ak * mi);
    }
    let (width, height) = guide.dims();
    Ok(LocalLinearCoeffs {
        a: Image::from_parts(width, height, a),
        b: Image::from_parts(width, height, b),
        mean_i,
        var_i,
        mean_p,
        corr_ip,
    })
}

/// Edge-preserving smoothing of `input` steered by `guide`: each pixel is
/// `mean(a) * guide + mean(b)` with the means taken over every window
/// containing the pixel.
pub fn guided_filter<T: Scalar>(
    guide: &Image<T>,
    input: &Image<T>,
    params: &GuidedFilterParams<T>,
) -> Result<Image<T>> {
    let coeffs = local_linear_coeffs(guide, input, params)?;
    let mean_a = box_mean(&coeffs.a, params.w)?;
    let mean_b = box_mean(&coeffs.b, params.w)?;
    let data = guide
        .data()
        .iter()
        .zip(mean_a.data().iter().zip(mean_b.data()))
        .map(|(&g, (&a, &b))| a * g + b)
        .collect();
    Ok(Image::from_parts(guide.width(), guide.height(), data))
}
