//! Grayscale raster container and the whole-image statistics used by the
//! restoration loop.

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

/// Row-major grayscale image with nominal intensity range `[0, 1]`.
///
/// Values may leave `[0, 1]` while a restoration is in progress; they are
/// clamped only when written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Scalar> Image<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "{width}x{height} image needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { width, height, data })
    }

    /// Builds an image from already-validated parts. Callers guarantee the
    /// length matches and every value is finite.
    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self { width, height, data }
    }

    pub fn filled(width: usize, height: usize, value: T) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::filled(width, height, T::zero())
    }

    /// Evaluates `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    pub fn ensure_same_dims(&self, other: &Image<T>) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                actual: other.dims(),
            });
        }
        Ok(())
    }

    /// Applies `f` to every sample. Panics in debug builds if `f` produces a
    /// non-finite value.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        let data: Vec<T> = self.data.iter().map(|&v| f(v)).collect();
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self::from_parts(self.width, self.height, data)
    }

    /// Combines two equally sized images sample by sample.
    pub fn zip_map(&self, other: &Image<T>, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.ensure_same_dims(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_parts(self.width, self.height, data))
    }

    pub fn transpose(&self) -> Self {
        let (w, h) = self.dims();
        let mut data = Vec::with_capacity(w * h);
        for x in 0..w {
            for y in 0..h {
                data.push(self.data[y * w + x]);
            }
        }
        Self::from_parts(h, w, data)
    }

    pub fn clamped(&self) -> Self {
        self.map(|v| v.max(T::zero()).min(T::one()))
    }

    pub fn min_max(&self) -> (T, T) {
        self.data
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

/// Arithmetic mean of all pixels.
pub fn image_mean<T: Scalar>(img: &Image<T>) -> T {
    compensated_sum(img.data().iter().copied()) / T::from_usize(img.len()).unwrap()
}

/// Sum of squared samples.
pub fn sq_norm<T: Scalar>(img: &Image<T>) -> T {
    compensated_sum(img.data().iter().map(|&v| v * v))
}

/// Sum of squared sample differences.
pub fn sq_distance<T: Scalar>(a: &Image<T>, b: &Image<T>) -> Result<T> {
    a.ensure_same_dims(b)?;
    Ok(compensated_sum(a.data().iter().zip(b.data()).map(|(&p, &q)| {
        let d = p - q;
        d * d
    })))
}

/// Squared norm of `img - mean(img)`.
pub fn centered_sq_norm<T: Scalar>(img: &Image<T>) -> T {
    let mu = image_mean(img);
    compensated_sum(img.data().iter().map(|&v| {
        let d = v - mu;
        d * d
    }))
}

/// AWGN level, held in both the working `[0, 1]` scale and the 8-bit
/// `[0, 255]` scale that benchmark tables quote.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel<T> {
    sigma: T,
    sigma255: T,
}

impl<T: Scalar> NoiseModel<T> {
    pub fn from_sigma255(sigma255: T) -> Result<Self> {
        if !(sigma255 >= T::zero()) || !sigma255.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise standard deviation must be finite and nonnegative, got {sigma255}"
            )));
        }
        Ok(Self {
            sigma: sigma255 / T::lit(255.0),
            sigma255,
        })
    }

    /// From a variance quoted on the `[0, 255]` scale.
    pub fn from_variance255(variance255: T) -> Result<Self> {
        if !(variance255 >= T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be nonnegative, got {variance255}"
            )));
        }
        Self::from_sigma255(variance255.sqrt())
    }

    pub fn from_sigma(sigma: T) -> Result<Self> {
        Self::from_sigma255(sigma * T::lit(255.0))
    }

    /// Standard deviation in working `[0, 1]` units.
    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn sigma255(&self) -> T {
        self.sigma255
    }

    pub fn variance(&self) -> T {
        self.sigma * self.sigma
    }
}
