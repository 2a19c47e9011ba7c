//! Restoration quality measures on `[0, 1]`-scale images.

use crate::error::Result;
use crate::image::{sq_distance, Image};
use crate::scalar::Scalar;

pub fn mse<T: Scalar>(a: &Image<T>, b: &Image<T>) -> Result<T> {
    Ok(sq_distance(a, b)? / T::from_usize(a.len()).unwrap())
}

/// Peak signal-to-noise ratio in dB for unit peak; `+inf` for identical images.
pub fn psnr<T: Scalar>(a: &Image<T>, b: &Image<T>) -> Result<T> {
    let m = mse(a, b)?;
    if m == T::zero() {
        return Ok(T::infinity());
    }
    Ok(T::lit(-10.0) * m.log10())
}

/// Improvement in SNR: `10 log10(|degraded - orig|^2 / |restored - orig|^2)`.
/// `+inf` when the restoration is exact.
pub fn isnr<T: Scalar>(orig: &Image<T>, degraded: &Image<T>, restored: &Image<T>) -> Result<T> {
    let before = sq_distance(degraded, orig)?;
    let after = sq_distance(restored, orig)?;
    if after == T::zero() {
        return Ok(T::infinity());
    }
    Ok(T::lit(10.0) * (before / after).log10())
}

/// Formats a dB value, writing `inf` for the exact-match sentinel.
pub fn format_db<T: Scalar>(db: T) -> String {
    if db.is_infinite() && db > T::zero() {
        "inf".to_string()
    } else {
        format!("{:.4}", db.to_f64_lossy())
    }
}
