//! 8-bit grayscale file I/O (PNG and binary PGM).

use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder};

use crate::error::{Error, Result};
use crate::raster::{Image, LabelMask, LabelSet, Size};

pub(crate) fn is_supported(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref(),
        Some("png" | "pgm")
    )
}

/// Reads an 8-bit single-channel file.
pub fn read_gray(path: &Path) -> Result<(Size, Vec<u8>)> {
    let reader = image::ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    let decoded = reader.decode().map_err(|e| match e {
        image::ImageError::IoError(e) => Error::io(path, e),
        other => Error::Format {
            path: path.into(),
            message: other.to_string(),
        },
    })?;
    let DynamicImage::ImageLuma8(buf) = decoded else {
        return Err(Error::Format {
            path: path.into(),
            message: format!("expected 8-bit grayscale, found {:?}", decoded.color()),
        });
    };
    let size = Size::new(buf.width() as usize, buf.height() as usize)?;
    Ok((size, buf.into_raw()))
}

pub fn read_image(path: &Path) -> Result<Image> {
    let (size, data) = read_gray(path)?;
    Image::new(size, data.into_iter().map(f64::from).collect())
}

/// Reads a mask and checks every pixel against `label_set`; the error names
/// the file and the first offending pixel.
pub fn read_mask(path: &Path, label_set: &LabelSet) -> Result<LabelMask> {
    let (size, data) = read_gray(path)?;
    LabelMask::new(size, data, label_set.clone()).map_err(|e| Error::Format {
        path: path.into(),
        message: e.to_string(),
    })
}

/// Writes an 8-bit grayscale PNG or binary (P5) PGM, chosen by extension.
pub fn write_gray(path: &Path, size: Size, data: &[u8]) -> Result<()> {
    if !is_supported(path) {
        return Err(Error::invalid(format!(
            "{}: output must end in .png or .pgm",
            path.display()
        )));
    }
    let (w, h) = (size.width as u32, size.height as u32);
    let is_pgm = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    if is_pgm {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        PnmEncoder::new(std::io::BufWriter::new(file))
            .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
            .write_image(data, w, h, ExtendedColorType::L8)
            .map_err(|e| Error::io(path, e))
    } else {
        image::save_buffer(path, data, w, h, ExtendedColorType::L8).map_err(|e| Error::io(path, e))
    }
}

pub fn write_image(path: &Path, img: &Image) -> Result<()> {
    write_gray(path, img.size(), &img.to_u8())
}

pub fn write_mask(path: &Path, mask: &LabelMask) -> Result<()> {
    write_gray(path, mask.size(), mask.labels())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_and_pgm_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let size = Size::new(3, 2).unwrap();
        let data = vec![0, 128, 255, 255, 0, 128];
        for name in ["m.png", "m.pgm"] {
            let path = dir.path().join(name);
            write_gray(&path, size, &data).unwrap();
            assert_eq!(read_gray(&path).unwrap(), (size, data.clone()));
        }
        let raw = std::fs::read(dir.path().join("m.pgm")).unwrap();
        assert!(raw.starts_with(b"P5"));
    }

    #[test]
    fn rejects_unknown_extension() {
        let dir = tempfile::tempdir().unwrap();
        let err = write_gray(&dir.path().join("m.bmp"), Size::square(1), &[0]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_gray(Path::new("/nonexistent/mask.png")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn color_input_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rgb.png");
        image::save_buffer(&path, &[0u8; 12], 2, 2, ExtendedColorType::Rgb8).unwrap();
        assert!(matches!(read_gray(&path), Err(Error::Format { .. })));
    }
}
