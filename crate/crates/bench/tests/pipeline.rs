use gdeconv::spectral::high_band_energy;
use gdeconv::{deconvolve, deconvolve_observed, isnr, Image, RestorationParams};
use gdeconv_bench::{degrade, TEST_SETTINGS};

fn scene(n: usize) -> Image<f64> {
    Image::from_fn(n, n, |x, y| {
        let (fx, fy) = (x as f64 / n as f64, y as f64 / n as f64);
        let square = if (0.3..0.7).contains(&fx) && (0.2..0.5).contains(&fy) { 0.4 } else { 0.0 };
        0.2 + 0.3 * fy + square + 0.1 * (14.0 * fx).sin() * (5.0 * fy).cos()
    })
    .unwrap()
}

#[test]
fn input_estimate_keeps_more_high_band_energy_than_guidance() {
    let orig = scene(64);
    for s in TEST_SETTINGS {
        let y = degrade(&orig, &s, 11, 25).unwrap();
        let params = RestorationParams::new(s.noise::<f64>().sigma());
        let mut checked = 0;
        deconvolve_observed(&y, &s.default_kernel(), &params, None, |v| {
            let (hp, hi) = (high_band_energy(v.input_spectrum), high_band_energy(v.guidance_spectrum));
            assert!(hp >= hi, "test {} iteration {}: {hp} < {hi}", s.id, v.k);
            checked += 1;
        })
        .unwrap();
        assert_eq!(checked, params.max_iter);
    }
}

#[test]
fn restoration_improves_over_first_iteration() {
    let orig = scene(64);
    for s in TEST_SETTINGS {
        let y = degrade(&orig, &s, 5, 25).unwrap();
        let params = RestorationParams::new(s.noise::<f64>().sigma());
        let out = deconvolve(&y, &s.default_kernel(), &params, Some(&orig)).unwrap();
        assert_eq!(out.trace.len(), 30);
        let first = out.trace.records[0].isnr.unwrap();
        let last = isnr(&orig, &y, &out.image).unwrap();
        assert!(last >= first, "test {}: final {last} < first {first}", s.id);
        assert!(last > 0.0, "test {}: final ISNR {last}", s.id);
    }
}

#[test]
fn restoration_is_bit_deterministic() {
    let orig = scene(48);
    let s = TEST_SETTINGS[2];
    let y = degrade(&orig, &s, 3, 25).unwrap();
    let params = RestorationParams::new(s.noise::<f64>().sigma());
    let a = deconvolve(&y, &s.default_kernel(), &params, None).unwrap();
    let b = deconvolve(&y, &s.default_kernel(), &params, None).unwrap();
    let bits = |img: &Image<f64>| img.data().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.image), bits(&b.image));
    assert_eq!(a.trace.to_csv(), b.trace.to_csv());
}

#[test]
fn degradation_is_seed_stable() {
    let orig = scene(32);
    let s = TEST_SETTINGS[0];
    let a = degrade(&orig, &s, 9, 25).unwrap();
    let b = degrade(&orig, &s, 9, 25).unwrap();
    let c = degrade(&orig, &s, 10, 25).unwrap();
    assert_eq!(a.data(), b.data());
    assert_ne!(a.data(), c.data());
}

#[test]
fn single_precision_tracks_double() {
    let orig = scene(32);
    let s = TEST_SETTINGS[1];
    let y = degrade(&orig, &s, 1, 25).unwrap();
    let out64 = deconvolve(&y, &s.default_kernel(), &RestorationParams::new(s.noise::<f64>().sigma()), None).unwrap();
    let y32 = Image::new(y.width(), y.height(), y.data().iter().map(|&v| v as f32).collect()).unwrap();
    let out32 = deconvolve(&y32, &s.default_kernel::<f32>(), &RestorationParams::new(s.noise::<f32>().sigma()), None).unwrap();
    let worst = out64
        .image
        .data()
        .iter()
        .zip(out32.image.data())
        .map(|(a, b)| (a - *b as f64).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-2, "f32 deviates by {worst}");
}
