//! The five benchmark degradations and the published ISNR figures they are
//! compared against.

use std::fmt;
use std::str::FromStr;

use gdeconv::psf::{DEFAULT_GAUSSIAN_SIGMA, DEFAULT_GAUSSIAN_SIZE};
use gdeconv::{psf_binomial, psf_boxcar, psf_gaussian, psf_radial, Kernel, NoiseModel, Scalar};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Radial,
    Boxcar,
    Binomial,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestSetting {
    pub id: u8,
    pub kernel_kind: KernelKind,
    /// Noise variance on the `[0, 255]` scale.
    pub sigma255_sq: f64,
}

pub const TEST_SETTINGS: [TestSetting; 5] = [
    TestSetting { id: 1, kernel_kind: KernelKind::Radial, sigma255_sq: 2.0 },
    TestSetting { id: 2, kernel_kind: KernelKind::Radial, sigma255_sq: 8.0 },
    TestSetting { id: 3, kernel_kind: KernelKind::Boxcar, sigma255_sq: 0.308 },
    TestSetting { id: 4, kernel_kind: KernelKind::Binomial, sigma255_sq: 49.0 },
    TestSetting { id: 5, kernel_kind: KernelKind::Gaussian, sigma255_sq: 4.0 },
];

impl TestSetting {
    pub fn by_id(id: u8) -> Result<TestSetting> {
        TEST_SETTINGS
            .iter()
            .copied()
            .find(|s| s.id == id)
            .ok_or_else(|| BenchError::Usage(format!("test setting must be 1..=5, got {id}")))
    }

    pub fn noise<T: Scalar>(&self) -> NoiseModel<T> {
        NoiseModel::from_variance255(T::lit(self.sigma255_sq)).expect("tabulated variances are nonnegative")
    }

    /// The setting's blur kernel; `gaussian_size` sets the support of the
    /// Gaussian PSF and is ignored by the other kernels.
    pub fn kernel<T: Scalar>(&self, gaussian_size: usize) -> Result<Kernel<T>> {
        Ok(match self.kernel_kind {
            KernelKind::Radial => psf_radial(),
            KernelKind::Boxcar => psf_boxcar(),
            KernelKind::Binomial => psf_binomial(),
            KernelKind::Gaussian => psf_gaussian(T::lit(DEFAULT_GAUSSIAN_SIGMA), gaussian_size)?,
        })
    }

    pub fn default_kernel<T: Scalar>(&self) -> Kernel<T> {
        self.kernel(DEFAULT_GAUSSIAN_SIZE).expect("default support is odd")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestImage {
    Cameraman,
    House,
}

impl TestImage {
    pub const ALL: [TestImage; 2] = [TestImage::Cameraman, TestImage::House];

    pub fn name(&self) -> &'static str {
        match self {
            TestImage::Cameraman => "cameraman",
            TestImage::House => "house",
        }
    }

    /// Recognizes a benchmark image from a file name such as `cameraman256.png`.
    pub fn from_path(path: &std::path::Path) -> Option<TestImage> {
        let stem = path.file_stem()?.to_str()?.to_ascii_lowercase();
        TestImage::ALL.into_iter().find(|t| stem.contains(t.name()))
    }
}

impl fmt::Display for TestImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestImage {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        TestImage::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| BenchError::Usage(format!("unknown test image {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ForWaRD,
    Tvs,
    SvGsm,
    L0AbS,
    Ours,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::ForWaRD, Method::Tvs, Method::SvGsm, Method::L0AbS, Method::Ours];

    pub fn name(&self) -> &'static str {
        match self {
            Method::ForWaRD => "ForWaRD",
            Method::Tvs => "TVS",
            Method::SvGsm => "SV-GSM",
            Method::L0AbS => "L0-AbS",
            Method::Ours => "ours",
        }
    }

    fn row(&self) -> usize {
        Method::ALL.iter().position(|m| m == self).unwrap()
    }
}

/// Published ISNR in dB, rows in [`Method::ALL`] order, columns settings 1..=5.
const CAMERAMAN_ISNR: [[f64; 5]; 5] = [
    [6.76, 5.08, 7.40, 2.40, 3.14],
    [7.41, 5.24, 8.56, 2.57, 3.36],
    [7.45, 5.55, 7.33, 2.73, 3.25],
    [7.70, 5.55, 9.10, 2.93, 3.49],
    [8.16, 6.09, 9.53, 3.36, 3.95],
];

const HOUSE_ISNR: [[f64; 5]; 5] = [
    [7.35, 6.03, 9.56, 3.19, 3.85],
    [7.98, 6.57, 10.39, 4.49, 4.57],
    [8.64, 7.03, 9.04, 4.30, 4.11],
    [8.40, 7.12, 10.74, 4.55, 4.80],
    [8.83, 7.46, 11.11, 4.84, 5.34],
];

/// Reference ISNR for `method` on `image` under setting `test` (1..=5).
pub fn reference_isnr(image: TestImage, test: u8, method: Method) -> Option<f64> {
    let col = (test as usize).checked_sub(1).filter(|&c| c < 5)?;
    let table = match image {
        TestImage::Cameraman => &CAMERAMAN_ISNR,
        TestImage::House => &HOUSE_ISNR,
    };
    Some(table[method.row()][col])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn settings_follow_the_table() {
        let ids: Vec<u8> = TEST_SETTINGS.iter().map(|s| s.id).collect();
        assert_eq!(ids, [1, 2, 3, 4, 5]);
        let t4 = TestSetting::by_id(4).unwrap();
        assert_eq!(t4.kernel_kind, KernelKind::Binomial);
        assert!((t4.noise::<f64>().sigma() - 7.0 / 255.0).abs() < 1e-15);
        assert!(TestSetting::by_id(0).is_err());
        assert!(TestSetting::by_id(6).is_err());
        let g = TestSetting::by_id(5).unwrap().kernel::<f64>(15).unwrap();
        assert_eq!(g.size_x(), 15);
        assert!(TestSetting::by_id(5).unwrap().kernel::<f64>(14).is_err());
    }

    #[test]
    fn reference_scores() {
        let ours: Vec<f64> = (1..=5).map(|t| reference_isnr(TestImage::Cameraman, t, Method::Ours).unwrap()).collect();
        assert_eq!(ours, [8.16, 6.09, 9.53, 3.36, 3.95]);
        let ours: Vec<f64> = (1..=5).map(|t| reference_isnr(TestImage::House, t, Method::Ours).unwrap()).collect();
        assert_eq!(ours, [8.83, 7.46, 11.11, 4.84, 5.34]);
        assert_eq!(reference_isnr(TestImage::House, 3, Method::Tvs), Some(10.39));
        assert_eq!(reference_isnr(TestImage::Cameraman, 0, Method::Ours), None);
        // The published method leads every column.
        for image in TestImage::ALL {
            for t in 1..=5 {
                let best = reference_isnr(image, t, Method::Ours).unwrap();
                for m in &Method::ALL[..4] {
                    assert!(reference_isnr(image, t, *m).unwrap() < best);
                }
            }
        }
    }

    #[test]
    fn image_names() {
        assert_eq!(TestImage::from_path("data/Cameraman256.png".as_ref()), Some(TestImage::Cameraman));
        assert_eq!(TestImage::from_path("house.pgm".as_ref()), Some(TestImage::House));
        assert_eq!(TestImage::from_path("lena.png".as_ref()), None);
        assert_eq!("HOUSE".parse::<TestImage>().unwrap(), TestImage::House);
    }
}
