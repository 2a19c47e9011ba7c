//! Brute-force reference implementations used only by tests.

#![allow(dead_code)]

use gdeconv::{Image, Kernel};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(w: usize, h: usize, rng: &mut ChaCha8Rng) -> Image<f64> {
    Image::from_fn(w, h, |_, _| rng.random::<f64>()).unwrap()
}

/// Positive unit-sum kernel with random weights.
pub fn random_kernel(size: usize, rng: &mut ChaCha8Rng) -> Kernel<f64> {
    let weights: Vec<f64> = (0..size * size).map(|_| rng.random_range(0.05..1.0)).collect();
    Kernel::new(size, size, weights).unwrap().normalized().unwrap()
}

pub fn max_abs_diff(a: &Image<f64>, b: &Image<f64>) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `(h * u)(x, y) = sum_k h(k) u(x - k)` with periodic wrap, by direct summation.
pub fn wrapped_convolution(u: &Image<f64>, k: &Kernel<f64>) -> Image<f64> {
    let (w, h) = (u.width() as isize, u.height() as isize);
    let (rx, ry) = ((k.size_x() / 2) as isize, (k.size_y() / 2) as isize);
    Image::from_fn(u.width(), u.height(), |x, y| {
        let mut s = 0.0;
        for dy in -ry..=ry {
            for dx in -rx..=rx {
                let xx = (x as isize - dx).rem_euclid(w) as usize;
                let yy = (y as isize - dy).rem_euclid(h) as usize;
                s += k.at_offset(dx, dy) * u.get(xx, yy);
            }
        }
        s
    })
    .unwrap()
}

/// Dense matrix of circular convolution by `k` on a `w x h` grid.
pub fn convolution_matrix(k: &Kernel<f64>, w: usize, h: usize) -> DMatrix<f64> {
    let n = w * h;
    let mut m = DMatrix::zeros(n, n);
    let (rx, ry) = ((k.size_x() / 2) as isize, (k.size_y() / 2) as isize);
    for y in 0..h {
        for x in 0..w {
            let row = y * w + x;
            for dy in -ry..=ry {
                for dx in -rx..=rx {
                    let xx = (x as isize - dx).rem_euclid(w as isize) as usize;
                    let yy = (y as isize - dy).rem_euclid(h as isize) as usize;
                    m[(row, yy * w + xx)] += k.at_offset(dx, dy);
                }
            }
        }
    }
    m
}

/// Periodic forward differences along x and y as dense matrices.
pub fn difference_matrices(w: usize, h: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = w * h;
    let mut dx = DMatrix::zeros(n, n);
    let mut dy = DMatrix::zeros(n, n);
    for y in 0..h {
        for x in 0..w {
            let row = y * w + x;
            dx[(row, row)] -= 1.0;
            dx[(row, y * w + (x + 1) % w)] += 1.0;
            dy[(row, row)] -= 1.0;
            dy[(row, ((y + 1) % h) * w + x)] += 1.0;
        }
    }
    (dx, dy)
}

fn to_vec(img: &Image<f64>) -> DVector<f64> {
    DVector::from_column_slice(img.data())
}

fn to_image(v: DVector<f64>, w: usize, h: usize) -> Image<f64> {
    Image::new(w, h, v.as_slice().to_vec()).unwrap()
}

/// Solves `(H^T H + lambda R) u = H^T y + lambda R u_E` by LU.
pub fn dense_regularized_solve(
    k: &Kernel<f64>,
    y: &Image<f64>,
    u_e: &Image<f64>,
    lambda: f64,
    regularizer: &DMatrix<f64>,
) -> Image<f64> {
    let (w, h) = y.dims();
    let hm = convolution_matrix(k, w, h);
    let a = hm.transpose() * &hm + regularizer * lambda;
    let b = hm.transpose() * to_vec(y) + regularizer * to_vec(u_e) * lambda;
    let u = a.lu().solve(&b).expect("nonsingular normal equations");
    to_image(u, w, h)
}

/// Normal equations of `lambda |grad u - grad u_E|^2 + |h * u - y|^2`.
pub fn dense_guidance_solve(k: &Kernel<f64>, y: &Image<f64>, u_e: &Image<f64>, lambda: f64) -> Image<f64> {
    let (dx, dy) = difference_matrices(y.width(), y.height());
    let r = dx.transpose() * &dx + dy.transpose() * &dy;
    dense_regularized_solve(k, y, u_e, lambda, &r)
}

/// Normal equations of `lambda |u - u_E|^2 + |h * u - y|^2`.
pub fn dense_input_solve(k: &Kernel<f64>, y: &Image<f64>, u_e: &Image<f64>, lambda: f64) -> Image<f64> {
    let n = y.len();
    dense_regularized_solve(k, y, u_e, lambda, &DMatrix::identity(n, n))
}

/// Clipped `w x w` window around `(x, y)` as inclusive coordinate ranges.
fn window(x: usize, y: usize, r: usize, width: usize, height: usize) -> (std::ops::RangeInclusive<usize>, std::ops::RangeInclusive<usize>) {
    (x.saturating_sub(r)..=(x + r).min(width - 1), y.saturating_sub(r)..=(y + r).min(height - 1))
}

/// Guided filter evaluated literally: per-window linear coefficients from
/// explicit window covariances, then each pixel averages the coefficients
/// of every window that contains it.
pub fn brute_force_guided_filter(guide: &Image<f64>, input: &Image<f64>, w: usize, eps: f64) -> Image<f64> {
    let (width, height) = guide.dims();
    let r = w / 2;
    let mut a = vec![0.0; width * height];
    let mut b = vec![0.0; width * height];
    for ky in 0..height {
        for kx in 0..width {
            let (xs, ys) = window(kx, ky, r, width, height);
            let mut pixels = Vec::new();
            for y in ys.clone() {
                for x in xs.clone() {
                    pixels.push((guide.get(x, y), input.get(x, y)));
                }
            }
            let n = pixels.len() as f64;
            let mu = pixels.iter().map(|p| p.0).sum::<f64>() / n;
            let pbar = pixels.iter().map(|p| p.1).sum::<f64>() / n;
            let var = pixels.iter().map(|p| (p.0 - mu).powi(2)).sum::<f64>() / n;
            let cross = pixels.iter().map(|p| p.0 * p.1).sum::<f64>() / n;
            let ak = (cross - mu * pbar) / (var + eps);
            a[ky * width + kx] = ak;
            b[ky * width + kx] = pbar - ak * mu;
        }
    }
    Image::from_fn(width, height, |x, y| {
        let mut covering = Vec::new();
        for ky in 0..height {
            for kx in 0..width {
                let (xs, ys) = window(kx, ky, r, width, height);
                if xs.contains(&x) && ys.contains(&y) {
                    covering.push(ky * width + kx);
                }
            }
        }
        let n = covering.len() as f64;
        let abar = covering.iter().map(|&k| a[k]).sum::<f64>() / n;
        let bbar = covering.iter().map(|&k| b[k]).sum::<f64>() / n;
        abar * guide.get(x, y) + bbar
    })
    .unwrap()
}
