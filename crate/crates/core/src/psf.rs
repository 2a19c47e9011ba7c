//! Point spread functions: the five benchmark blur kernels, normalization,
//! and a plain-text exchange format.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

/// Small blur kernel with odd support, anchored at its central sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel<T> {
    size_x: usize,
    size_y: usize,
    weights: Vec<T>,
}

impl<T: Scalar> Kernel<T> {
    pub fn new(size_x: usize, size_y: usize, weights: Vec<T>) -> Result<Self> {
        if size_x % 2 == 0 || size_y % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "kernel sizes must be odd, got {size_x}x{size_y}"
            )));
        }
        if weights.len() != size_x * size_y {
            return Err(Error::InvalidParameter(format!(
                "{size_x}x{size_y} kernel needs {} weights, got {}",
                size_x * size_y,
                weights.len()
            )));
        }
        if let Some(index) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { size_x, size_y, weights })
    }

    /// Builds a kernel from `f(dx, dy)` evaluated at offsets relative to the center.
    pub fn from_offsets(size_x: usize, size_y: usize, f: impl Fn(isize, isize) -> T) -> Result<Self> {
        let (cx, cy) = ((size_x / 2) as isize, (size_y / 2) as isize);
        let mut weights = Vec::with_capacity(size_x * size_y);
        for y in 0..size_y as isize {
            for x in 0..size_x as isize {
                weights.push(f(x - cx, y - cy));
            }
        }
        Self::new(size_x, size_y, weights)
    }

    /// The 1x1 unit impulse.
    pub fn identity() -> Self {
        Self {
            size_x: 1,
            size_y: 1,
            weights: vec![T::one()],
        }
    }

    pub fn size_x(&self) -> usize {
        self.size_x
    }

    pub fn size_y(&self) -> usize {
        self.size_y
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Index of the anchor sample, `((size_x - 1) / 2, (size_y - 1) / 2)`.
    pub fn center(&self) -> (usize, usize) {
        ((self.size_x - 1) / 2, (self.size_y - 1) / 2)
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> T {
        self.weights[y * self.size_x + x]
    }

    /// Weight at offset `(dx, dy)` from the center.
    pub fn at_offset(&self, dx: isize, dy: isize) -> T {
        let (cx, cy) = self.center();
        self.at((cx as isize + dx) as usize, (cy as isize + dy) as usize)
    }

    pub fn sum(&self) -> T {
        compensated_sum(self.weights.iter().copied())
    }

    /// Rescales to unit sum.
    pub fn normalized(&self) -> Result<Self> {
        let s = self.sum();
        if s == T::zero() {
            return Err(Error::InvalidParameter("cannot normalize a zero-sum kernel".into()));
        }
        Ok(Self {
            size_x: self.size_x,
            size_y: self.size_y,
            weights: self.weights.iter().map(|&w| w / s).collect(),
        })
    }

    /// Plain-text form: `"size_x size_y"` on the first line, then one line of
    /// weights per kernel row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.size_x, self.size_y);
        for row in self.weights.chunks(self.size_x) {
            let line: Vec<String> = row.iter().map(|w| format!("{:e}", w.to_f64_lossy())).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::KernelText("missing size header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::KernelText(format!("bad size token {t:?}"))))
            .collect::<Result<_>>()?;
        let [size_x, size_y] = dims[..] else {
            return Err(Error::KernelText(format!("header must hold two sizes, got {header:?}")));
        };
        let mut weights = Vec::with_capacity(size_x * size_y);
        for (row, line) in lines.enumerate() {
            let before = weights.len();
            for tok in line.split_whitespace() {
                let v: f64 = tok
                    .parse()
                    .map_err(|_| Error::KernelText(format!("bad weight {tok:?} on row {row}")))?;
                weights.push(T::lit(v));
            }
            if weights.len() - before != size_x {
                return Err(Error::KernelText(format!(
                    "row {row} has {} weights, expected {size_x}",
                    weights.len() - before
                )));
            }
        }
        if weights.len() != size_x * size_y {
            return Err(Error::KernelText(format!(
                "expected {size_y} rows, got {}",
                weights.len() / size_x.max(1)
            )));
        }
        Self::new(size_x, size_y, weights)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// `1 / (1 + i^2 + j^2)` on `i, j = -7..=7`, before normalization.
pub fn psf_radial_unnormalized<T: Scalar>() -> Kernel<T> {
    Kernel::from_offsets(15, 15, |i, j| T::one() / T::from_isize(1 + i * i + j * j).unwrap())
        .expect("static kernel shape")
}

/// 15x15 radial kernel of benchmark settings 1 and 2, normalized to unit sum.
pub fn psf_radial<T: Scalar>() -> Kernel<T> {
    psf_radial_unnormalized().normalized().expect("positive sum")
}

/// 9x9 uniform kernel.
pub fn psf_boxcar<T: Scalar>() -> Kernel<T> {
    let w = T::one() / T::lit(81.0);
    Kernel::new(9, 9, vec![w; 81]).expect("static kernel shape")
}

/// 5x5 separable binomial kernel `b b^T / 256`, `b = (1, 4, 6, 4, 1)`.
pub fn psf_binomial<T: Scalar>() -> Kernel<T> {
    const B: [f64; 5] = [1.0, 4.0, 6.0, 4.0, 1.0];
    Kernel::from_offsets(5, 5, |i, j| T::lit(B[(i + 2) as usize] * B[(j + 2) as usize] / 256.0))
        .expect("static kernel shape")
}

/// Isotropic Gaussian of standard deviation `sigma` on a `size x size` grid,
/// normalized to unit sum.
pub fn psf_gaussian<T: Scalar>(sigma: T, size: usize) -> Result<Kernel<T>> {
    if !(sigma > T::zero()) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("gaussian sigma must be positive, got {sigma}")));
    }
    if size % 2 == 0 {
        return Err(Error::InvalidParameter(format!("gaussian support must be odd, got {size}")));
    }
    let two_s2 = T::lit(2.0) * sigma * sigma;
    Kernel::from_offsets(size, size, |i, j| {
        let r2 = T::from_isize(i * i + j * j).unwrap();
        (-r2 / two_s2).exp()
    })?
    .normalized()
}

pub const DEFAULT_GAUSSIAN_SIGMA: f64 = 1.6;
pub const DEFAULT_GAUSSIAN_SIZE: usize = 25;

/// `sum |w|` over the kernel weights.
pub fn kernel_l1<T: Scalar>(k: &Kernel<T>) -> T {
    compensated_sum(k.weights().iter().map(|w| w.abs()))
}
