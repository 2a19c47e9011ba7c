//! Noise level estimate for observations whose sigma is not known.
//!
//! This is a convenience for the command line only: the median absolute
//! value of the finest diagonal Haar detail coefficients, divided by 0.6745.

use gdeconv::{Image, Scalar};

pub fn estimate_sigma<T: Scalar>(img: &Image<T>) -> T {
    let (w, h) = img.dims();
    let mut details: Vec<f64> = Vec::with_capacity((w / 2) * (h / 2));
    for y in (0..h.saturating_sub(1)).step_by(2) {
        for x in (0..w.saturating_sub(1)).step_by(2) {
            let d = (img.get(x, y) - img.get(x + 1, y) - img.get(x, y + 1) + img.get(x + 1, y + 1)) / T::lit(2.0);
            details.push(d.abs().to_f64_lossy());
        }
    }
    if details.is_empty() {
        return T::zero();
    }
    details.sort_by(|a, b| a.total_cmp(b));
    let mid = details.len() / 2;
    let median = if details.len() % 2 == 0 {
        0.5 * (details[mid - 1] + details[mid])
    } else {
        details[mid]
    };
    T::lit(median / 0.6745)
}
