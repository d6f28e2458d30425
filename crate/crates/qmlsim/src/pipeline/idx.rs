//! IDX container parsing and writing (big-endian, magic 2051 for image
//! files and 2049 for label files).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pipeline::RawImage;

const IMAGE_MAGIC: u32 = 2051;
const LABEL_MAGIC: u32 = 2049;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn u32_be(&mut self) -> Result<u32> {
        if self.pos + 4 > self.bytes.len() {
            return Err(Error::format("truncated file: expected 4 more bytes", self.pos));
        }
        let v = u32::from_be_bytes(self.bytes[self.pos..self.pos + 4].try_into().unwrap());
        self.pos += 4;
        Ok(v)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::format(
                format!("truncated file: expected {n} more bytes"),
                self.pos,
            ));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
}

/// Parse an IDX image file into images with intensities in [0, 1].
pub fn read_idx_images(path: &Path) -> Result<Vec<RawImage>> {
    let bytes = fs::read(path)?;
    let mut cur = Cursor {
        bytes: &bytes,
        pos: 0,
    };
    let magic = cur.u32_be()?;
    if magic != IMAGE_MAGIC {
        return Err(Error::format(
            format!("bad image magic {magic}, expected {IMAGE_MAGIC}"),
            0,
        ));
    }
    let count = cur.u32_be()? as usize;
    let rows = cur.u32_be()? as usize;
    let cols = cur.u32_be()? as usize;
    if rows == 0 || cols == 0 {
        return Err(Error::format("zero image dimensions", 8));
    }
    let mut images = Vec::with_capacity(count);
    for _ in 0..count {
        let raw = cur.take(rows * cols)?;
        let intensities = raw.iter().map(|&b| b as f64 / 255.0).collect();
        images.push(RawImage {
            width: cols,
            height: rows,
            intensities,
        });
    }
    Ok(images)
}

/// Parse an IDX label file.
pub fn read_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let bytes = fs::read(path)?;
    let mut cur = Cursor {
        bytes: &bytes,
        pos: 0,
    };
    let magic = cur.u32_be()?;
    if magic != LABEL_MAGIC {
        return Err(Error::format(
            format!("bad label magic {magic}, expected {LABEL_MAGIC}"),
            0,
        ));
    }
    let count = cur.u32_be()? as usize;
    Ok(cur.take(count)?.to_vec())
}

/// Load paired image and label files; the two counts must agree.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<Vec<(RawImage, u8)>> {
    let images = read_idx_images(images_path)?;
    let labels = read_idx_labels(labels_path)?;
    if images.len() != labels.len() {
        return Err(Error::format(
            format!("{} images but {} labels", images.len(), labels.len()),
            0,
        ));
    }
    Ok(images.into_iter().zip(labels).collect())
}

/// Write images as an IDX file (intensities quantized back to bytes).
pub fn write_idx_images(path: &Path, images: &[RawImage]) -> Result<()> {
    if images.is_empty() {
        return Err(Error::invalid("cannot write an empty image file"));
    }
    let rows = images[0].height;
    let cols = images[0].width;
    if images.iter().any(|im| im.height != rows || im.width != cols) {
        return Err(Error::invalid("all images must share one size"));
    }
    let mut out = Vec::with_capacity(16 + images.len() * rows * cols);
    out.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
    out.extend_from_slice(&(images.len() as u32).to_be_bytes());
    out.extend_from_slice(&(rows as u32).to_be_bytes());
    out.extend_from_slice(&(cols as u32).to_be_bytes());
    for im in images {
        out.extend(
            im.intensities
                .iter()
                .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
        );
    }
    fs::write(path, out)?;
    Ok(())
}

/// Write labels as an IDX file.
pub fn write_idx_labels(path: &Path, labels: &[u8]) -> Result<()> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    fs::write(path, out)?;
    Ok(())
}
