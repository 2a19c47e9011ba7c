//! Synthetic degradation `y = h * u + noise` with reproducible noise.
//!
//! Noise samples come from a ChaCha20 stream seeded with the 64-bit seed
//! (`rand_chacha::ChaCha20Rng::seed_from_u64`), mapped to standard normals by
//! `rand_distr::StandardNormal`, and added in row-major pixel order.

use gdeconv::{circular_convolve, Image, Kernel, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::settings::TestSetting;

/// Blurs `input` circularly with `kernel` and adds white Gaussian noise of
/// standard deviation `sigma` (working scale). The result is not clamped.
pub fn degrade_with<T: Scalar>(input: &Image<T>, kernel: &Kernel<T>, sigma: T, seed: u64) -> Result<Image<T>> {
    let blurred = circular_convolve(input, kernel)?;
    if sigma == T::zero() {
        return Ok(blurred);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let noisy: Vec<T> = blurred
        .data()
        .iter()
        .map(|&v| {
            let z: f64 = StandardNormal.sample(&mut rng);
            v + sigma * T::lit(z)
        })
        .collect();
    Ok(Image::new(input.width(), input.height(), noisy)?)
}

/// Applies one of the five benchmark degradations.
pub fn degrade<T: Scalar>(input: &Image<T>, setting: &TestSetting, seed: u64, gaussian_size: usize) -> Result<Image<T>> {
    let kernel = setting.kernel(gaussian_size)?;
    degrade_with(input, &kernel, setting.noise::<T>().sigma(), seed)
}
