mod common;

use common::*;
use gdeconv::{
    box_mean, circular_convolve, deblur_guidance, deblur_input, fft2, gradient_spectrum, guided_filter,
    psf_to_otf, GuidedFilterParams, Image, Lambda,
};
use rand::Rng;

#[test]
fn spectral_convolution_matches_direct_summation() {
    let mut rng = rng(1);
    for _ in 0..10 {
        let u = random_image(8, 8, &mut rng);
        let k = random_kernel(3, &mut rng);
        let fast = circular_convolve(&u, &k).unwrap();
        assert!(max_abs_diff(&fast, &wrapped_convolution(&u, &k)) < 1e-10);
    }
    // Non-square grid and a wider kernel.
    let u = random_image(12, 9, &mut rng);
    let k = random_kernel(5, &mut rng);
    assert!(max_abs_diff(&circular_convolve(&u, &k).unwrap(), &wrapped_convolution(&u, &k)) < 1e-10);
}

#[test]
fn otf_product_matches_direct_summation() {
    let mut rng = rng(2);
    let u = random_image(8, 8, &mut rng);
    let k = random_kernel(3, &mut rng);
    let otf = psf_to_otf(&k, 8, 8).unwrap();
    let out = gdeconv::ifft2_real(&fft2(&u).unwrap().mul(&otf).unwrap()).unwrap();
    assert!(max_abs_diff(&out, &wrapped_convolution(&u, &k)) < 1e-10);
}

#[test]
fn fourier_solvers_match_dense_normal_equations() {
    let mut rng = rng(3);
    let grad = gradient_spectrum(8, 8).unwrap();
    for _ in 0..10 {
        let k = random_kernel(3, &mut rng);
        let y = random_image(8, 8, &mut rng);
        let u_e = random_image(8, 8, &mut rng);
        let lambda = 10f64.powf(rng.random_range(-3.0..2.0));
        let (fy, fe) = (fft2(&y).unwrap(), fft2(&u_e).unwrap());
        let otf = psf_to_otf(&k, 8, 8).unwrap();

        let u_i = deblur_guidance(&fy, &otf, &grad, &fe, Lambda::Finite(lambda)).unwrap();
        let oracle_i = dense_guidance_solve(&k, &y, &u_e, lambda);
        assert!(max_abs_diff(&u_i, &oracle_i) < 1e-8, "guidance, lambda {lambda}");

        let u_p = deblur_input(&fy, &otf, &fe, Lambda::Finite(lambda)).unwrap();
        let oracle_p = dense_input_solve(&k, &y, &u_e, lambda);
        assert!(max_abs_diff(&u_p, &oracle_p) < 1e-8, "input, lambda {lambda}");
    }
}

#[test]
fn box_mean_matches_brute_force_windows() {
    let mut rng = rng(4);
    let x = random_image(16, 16, &mut rng);
    let zero = Image::zeros(16, 16).unwrap();
    // With a flat guidance the guided filter reduces to two box means, which
    // the literal oracle computes window by window.
    let oracle = brute_force_guided_filter(&zero, &x, 5, 1.0);
    let fast = box_mean(&box_mean(&x, 5).unwrap(), 5).unwrap();
    assert!(max_abs_diff(&fast, &oracle) < 1e-12);
}

#[test]
fn guided_filter_matches_literal_window_oracle() {
    let mut rng = rng(5);
    for (w, eps) in [(3, 7.5e-4), (5, 1e-4), (3, 1e-4), (5, 7.5e-4)] {
        for _ in 0..3 {
            let guide = random_image(16, 16, &mut rng);
            let input = random_image(16, 16, &mut rng);
            let fast = guided_filter(&guide, &input, &GuidedFilterParams::new(w, eps).unwrap()).unwrap();
            let oracle = brute_force_guided_filter(&guide, &input, w, eps);
            assert!(max_abs_diff(&fast, &oracle) < 1e-10, "w={w} eps={eps}");
        }
    }
}
