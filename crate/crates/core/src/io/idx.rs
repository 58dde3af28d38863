//! IDX binary format (the standard MNIST container).
//!
//! Images: magic `0x00000803`, then big-endian u32 count, rows, cols, then
//! one unsigned byte per pixel. Labels: magic `0x00000801`, then count and
//! one byte per item. Pixels are scaled to `[0, 1]` and flattened row-major.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use byteorder::{BigEndian, ReadBytesExt};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub const IDX_IMAGE_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABEL_MAGIC: u32 = 0x0000_0801;

struct IdxReader<'p> {
    path: &'p Path,
    reader: BufReader<File>,
}

impl<'p> IdxReader<'p> {
    fn open(path: &'p Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(IdxReader {
            path,
            reader: BufReader::new(file),
        })
    }

    fn read_u32(&mut self, what: &str) -> Result<u32> {
        self.reader.read_u32::<BigEndian>().map_err(|e| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                Error::IdxTruncated {
                    path: self.path.to_path_buf(),
                    msg: format!("file ends inside the {what} field"),
                }
            } else {
                Error::io(self.path, e)
            }
        })
    }

    fn read_magic(&mut self, expected: u32) -> Result<()> {
        let found = self.read_u32("magic number")?;
        if found != expected {
            return Err(Error::IdxMagic {
                path: self.path.to_path_buf(),
                expected,
                found,
            });
        }
        Ok(())
    }

    fn read_exact(&mut self, buf: &mut [u8], what: &str) -> Result<()> {
        self.reader.read_exact(buf).map_err(|e| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                Error::IdxTruncated {
                    path: self.path.to_path_buf(),
                    msg: format!("file ends inside the {what}"),
                }
            } else {
                Error::io(self.path, e)
            }
        })
    }
}

/// Loads at most `limit` image/label pairs from a pair of IDX files.
///
/// The declared item counts of the two files must match before the limit is
/// applied. Each distinct failure mode (wrong magic, truncation, count
/// mismatch) maps to its own error variant.
pub fn load_idx(
    images_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
    limit: usize,
) -> Result<Dataset> {
    if limit == 0 {
        return Err(Error::invalid("limit must be at least 1"));
    }
    let images_path = images_path.as_ref();
    let labels_path = labels_path.as_ref();

    let mut images = IdxReader::open(images_path)?;
    images.read_magic(IDX_IMAGE_MAGIC)?;
    let image_count = images.read_u32("item count")? as usize;
    let rows = images.read_u32("row count")? as usize;
    let cols = images.read_u32("column count")? as usize;
    if image_count == 0 || rows == 0 || cols == 0 {
        return Err(Error::invalid(format!(
            "{}: empty image dimensions {image_count}x{rows}x{cols}",
            images_path.display()
        )));
    }

    let mut labels = IdxReader::open(labels_path)?;
    labels.read_magic(IDX_LABEL_MAGIC)?;
    let label_count = labels.read_u32("item count")? as usize;
    if label_count != image_count {
        return Err(Error::IdxCountMismatch {
            images: image_count,
            labels: label_count,
        });
    }

    let take = limit.min(image_count);
    let d = rows * cols;
    let mut pixel_buf = vec![0u8; d];
    let mut features = Vec::with_capacity(take * d);
    for _ in 0..take {
        images.read_exact(&mut pixel_buf, "pixel data")?;
        features.extend(pixel_buf.iter().map(|&b| b as f64 / 255.0));
    }
    let mut label_buf = vec![0u8; take];
    labels.read_exact(&mut label_buf, "label data")?;
    let label_values: Vec<u32> = label_buf.into_iter().map(u32::from).collect();

    Dataset::new(features, d, Some(label_values))
}
