//! 8-bit grayscale PGM (P5) and PNG reading and writing.

use std::path::Path;

use image::{DynamicImage, GrayImage, ImageFormat, ImageReader};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Scalar;

/// Loads an 8-bit grayscale PGM or PNG, mapping each byte `v` to `v / 255`.
pub fn load_image<T: Scalar>(path: impl AsRef<Path>) -> Result<Image<T>> {
    let path = path.as_ref();
    let format_err = |reason: String| Error::Format {
        path: path.to_path_buf(),
        reason,
    };
    let reader = ImageReader::open(path)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?
        .with_guessed_format()
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Pnm) => {}
        other => return Err(format_err(format!("expected PGM or PNG, detected {other:?}"))),
    }
    let decoded = reader.decode().map_err(|e| format_err(e.to_string()))?;
    let gray = match decoded {
        DynamicImage::ImageLuma8(g) => g,
        other => {
            return Err(format_err(format!(
                "expected 8-bit grayscale, found {:?}",
                other.color()
            )))
        }
    };
    let (w, h) = gray.dimensions();
    let scale = T::lit(255.0);
    let data = gray
        .into_raw()
        .into_iter()
        .map(|v| T::from_u8(v).unwrap() / scale)
        .collect();
    Image::new(w as usize, h as usize, data)
}

/// Quantizes `img` to 8 bits (clamp to `[0, 1]`, then `round(255 v)`).
pub fn quantize<T: Scalar>(img: &Image<T>) -> Vec<u8> {
    let scale = T::lit(255.0);
    img.data()
        .iter()
        .map(|&v| {
            let q = (v.max(T::zero()).min(T::one()) * scale).round();
            q.to_u8().unwrap_or(255)
        })
        .collect()
}

/// Writes an 8-bit grayscale file. The format follows the extension:
/// `.pgm` writes binary P5, anything else PNG.
pub fn save_image<T: Scalar>(img: &Image<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let buf = GrayImage::from_raw(img.width() as u32, img.height() as u32, quantize(img))
        .expect("buffer length matches image dimensions");
    let is_pgm = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    let result = if is_pgm {
        write_pgm(&buf, path)
    } else {
        buf.save_with_format(path, ImageFormat::Png).map_err(|e| match e {
            image::ImageError::IoError(source) => Error::Io {
                path: path.to_path_buf(),
                source,
            },
            other => Error::Format {
                path: path.to_path_buf(),
                reason: other.to_string(),
            },
        })
    };
    result
}

fn write_pgm(buf: &GrayImage, path: &Path) -> Result<()> {
    let mut bytes = format!("P5\n{} {}\n255\n", buf.width(), buf.height()).into_bytes();
    bytes.extend_from_slice(buf.as_raw());
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
