//! Reader for the big-endian IDX image/label container format, so real
//! benchmark sets can stand in for the synthetic clusters.
//!
//! Pixel bytes scale to `[0, 1]` (divide by 255); labels stay as class
//! ids. Files are validated structurally — magic numbers, declared
//! counts versus payload length, and label range — with typed errors
//! instead of panics, since the inputs come from disk.

use crate::data::Dataset;
use std::path::Path;

/// Expected magic of an IDX image file (u8 payload, 3 dimensions).
const IMAGE_MAGIC: u32 = 0x0000_0803;
/// Expected magic of an IDX label file (u8 payload, 1 dimension).
const LABEL_MAGIC: u32 = 0x0000_0801;

/// Failure modes of the IDX loaders.
#[derive(Debug, thiserror::Error)]
pub enum IdxError {
    /// The file could not be read at all.
    #[error("i/o failure reading idx data: {0}")]
    Io(#[from] std::io::Error),
    /// The first header word does not identify the expected payload kind.
    #[error("bad magic number {found:#010x}, expected {expected:#010x}")]
    BadMagic {
        /// Magic word found in the file.
        found: u32,
        /// Magic word the loader was looking for.
        expected: u32,
    },
    /// The file is shorter than its own header claims.
    #[error("file holds {found} payload bytes but the header declares {expected}")]
    Truncated {
        /// Bytes the header implies.
        expected: usize,
        /// Bytes actually present after the header.
        found: usize,
    },
    /// An image file and its label file disagree on the record count.
    #[error("{images} images but {labels} labels")]
    CountMismatch {
        /// Records in the image file.
        images: usize,
        /// Records in the label file.
        labels: usize,
    },
    /// Train and test images have different per-record dimensions.
    #[error("train images are {train}-dimensional but test images are {test}-dimensional")]
    DimMismatch {
        /// Feature dimension of the training images.
        train: usize,
        /// Feature dimension of the test images.
        test: usize,
    },
    /// A label lies outside the configured class range.
    #[error("label {label} is outside the {classes}-class range")]
    LabelRange {
        /// Offending label value.
        label: u32,
        /// Number of classes the caller configured.
        classes: u32,
    },
}

fn header_word(bytes: &[u8], index: usize) -> Result<u32, IdxError> {
    let start = index * 4;
    let word: [u8; 4] = bytes
        .get(start..start + 4)
        .ok_or(IdxError::Truncated {
            expected: start + 4,
            found: bytes.len(),
        })?
        .try_into()
        .expect("a 4-byte slice converts to [u8; 4]");
    Ok(u32::from_be_bytes(word))
}

/// Reads an IDX image file into flat `[0, 1]` features.
///
/// Returns `(features, count, feature_dim)` where `features.len() ==
/// count * feature_dim` and `feature_dim` is rows x columns.
pub fn read_idx_images(path: &Path) -> Result<(Vec<f64>, usize, usize), IdxError> {
    let bytes = std::fs::read(path)?;
    let magic = header_word(&bytes, 0)?;
    if magic != IMAGE_MAGIC {
        return Err(IdxError::BadMagic {
            found: magic,
            expected: IMAGE_MAGIC,
        });
    }
    let count = header_word(&bytes, 1)? as usize;
    let rows = header_word(&bytes, 2)? as usize;
    let cols = header_word(&bytes, 3)? as usize;
    let feature_dim = rows * cols;
    let expected = count * feature_dim;
    let payload = &bytes[16..];
    if payload.len() < expected {
        return Err(IdxError::Truncated {
            expected,
            found: payload.len(),
        });
    }
    let features = payload[..expected]
        .iter()
        .map(|&b| f64::from(b) / 255.0)
        .collect();
    Ok((features, count, feature_dim))
}

/// Reads an IDX label file into class ids.
pub fn read_idx_labels(path: &Path) -> Result<Vec<u32>, IdxError> {
    let bytes = std::fs::read(path)?;
    let magic = header_word(&bytes, 0)?;
    if magic != LABEL_MAGIC {
        return Err(IdxError::BadMagic {
            found: magic,
            expected: LABEL_MAGIC,
        });
    }
    let count = header_word(&bytes, 1)? as usize;
    let payload = &bytes[8..];
    if payload.len() < count {
        return Err(IdxError::Truncated {
            expected: count,
            found: payload.len(),
        });
    }
    Ok(payload[..count].iter().map(|&b| u32::from(b)).collect())
}

/// Loads a full train/test [`Dataset`] from four IDX files.
///
/// Counts must match within each split, the two image files must agree
/// on the per-record dimension, and every label must lie below
/// `class_count`.
pub fn dataset_from_idx(
    train_images: &Path,
    train_labels: &Path,
    test_images: &Path,
    test_labels: &Path,
    class_count: u32,
) -> Result<Dataset, IdxError> {
    let (train_x, train_n, train_dim) = read_idx_images(train_images)?;
    let train_y = read_idx_labels(train_labels)?;
    let (test_x, test_n, test_dim) = read_idx_images(test_images)?;
    let test_y = read_idx_labels(test_labels)?;

    if train_n != train_y.len() {
        return Err(IdxError::CountMismatch {
            images: train_n,
            labels: train_y.len(),
        });
    }
    if test_n != test_y.len() {
        return Err(IdxError::CountMismatch {
            images: test_n,
            labels: test_y.len(),
        });
    }
    if train_dim != test_dim {
        return Err(IdxError::DimMismatch {
            train: train_dim,
            test: test_dim,
        });
    }
    for &label in train_y.iter().chain(&test_y) {
        if label >= class_count {
            return Err(IdxError::LabelRange {
                label,
                classes: class_count,
            });
        }
    }
    Ok(Dataset::from_parts(
        train_dim,
        class_count as usize,
        train_x,
        train_y,
        test_x,
        test_y,
    ))
}

// ------------------------------------------------------------------ tests

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_images(dir: &Path, name: &str, rows: u32, cols: u32, pixels: &[u8]) -> std::path::PathBuf {
        let dim = (rows * cols) as usize;
        assert_eq!(pixels.len() % dim, 0);
        let count = (pixels.len() / dim) as u32;
        let path = dir.join(name);
        let mut file = std::fs::File::create(&path).unwrap();
        file.write_all(&IMAGE_MAGIC.to_be_bytes()).unwrap();
        file.write_all(&count.to_be_bytes()).unwrap();
        file.write_all(&rows.to_be_bytes()).unwrap();
        file.write_all(&cols.to_be_bytes()).unwrap();
        file.write_all(pixels).unwrap();
        path
    }

    fn write_labels(dir: &Path, name: &str, labels: &[u8]) -> std::path::PathBuf {
        let path = dir.join(name);
        let mut file = std::fs::File::create(&path).unwrap();
        file.write_all(&LABEL_MAGIC.to_be_bytes()).unwrap();
        file.write_all(&(labels.len() as u32).to_be_bytes()).unwrap();
        file.write_all(labels).unwrap();
        path
    }

    #[test]
    fn images_scale_bytes_into_the_unit_interval() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_images(dir.path(), "img", 2, 2, &[0, 51, 102, 255, 255, 204, 153, 0]);
        let (features, count, dim) = read_idx_images(&path).unwrap();
        assert_eq!((count, dim), (2, 4));
        assert_eq!(features[0], 0.0);
        assert_eq!(features[1], 51.0 / 255.0);
        assert_eq!(features[3], 1.0);
        assert_eq!(features[4], 1.0);
        assert_eq!(features.len(), 8);
    }

    #[test]
    fn labels_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_labels(dir.path(), "lbl", &[0, 1, 2, 1]);
        assert_eq!(read_idx_labels(&path).unwrap(), vec![0, 1, 2, 1]);
    }

    #[test]
    fn wrong_magic_is_rejected_with_both_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_labels(dir.path(), "lbl", &[0]);
        let err = read_idx_images(&path).unwrap_err();
        match err {
            IdxError::BadMagic { found, expected } => {
                assert_eq!(found, LABEL_MAGIC);
                assert_eq!(expected, IMAGE_MAGIC);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(err.to_string().contains("0x00000801"));
        assert!(err.to_string().contains("0x00000803"));
    }

    #[test]
    fn short_payloads_are_reported_as_truncated() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("short");
        let mut file = std::fs::File::create(&path).unwrap();
        file.write_all(&IMAGE_MAGIC.to_be_bytes()).unwrap();
        file.write_all(&3u32.to_be_bytes()).unwrap();
        file.write_all(&2u32.to_be_bytes()).unwrap();
        file.write_all(&2u32.to_be_bytes()).unwrap();
        file.write_all(&[7; 5]).unwrap(); // header promises 12
        match read_idx_images(&path).unwrap_err() {
            IdxError::Truncated { expected, found } => {
                assert_eq!((expected, found), (12, 5));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn full_dataset_assembles_and_validates() {
        let dir = tempfile::tempdir().unwrap();
        let train_x = write_images(dir.path(), "trx", 1, 3, &[10, 20, 30, 40, 50, 60]);
        let train_y = write_labels(dir.path(), "try", &[0, 1]);
        let test_x = write_images(dir.path(), "tex", 1, 3, &[70, 80, 90]);
        let test_y = write_labels(dir.path(), "tey", &[1]);
        let data = dataset_from_idx(&train_x, &train_y, &test_x, &test_y, 2).unwrap();
        assert_eq!(data.feature_dim(), 3);
        assert_eq!(data.class_count(), 2);
        assert_eq!(data.train_len(), 2);
        assert_eq!(data.test_len(), 1);
        assert_eq!(data.train_features()[0], 10.0 / 255.0);
    }

    #[test]
    fn mismatched_counts_and_labels_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let train_x = write_images(dir.path(), "trx", 1, 2, &[1, 2, 3, 4]);
        let short_y = write_labels(dir.path(), "try", &[0]);
        let test_x = write_images(dir.path(), "tex", 1, 2, &[5, 6]);
        let test_y = write_labels(dir.path(), "tey", &[1]);
        match dataset_from_idx(&train_x, &short_y, &test_x, &test_y, 2).unwrap_err() {
            IdxError::CountMismatch { images, labels } => assert_eq!((images, labels), (2, 1)),
            other => panic!("unexpected error {other:?}"),
        }

        let good_y = write_labels(dir.path(), "try2", &[0, 5]);
        match dataset_from_idx(&train_x, &good_y, &test_x, &test_y, 2).unwrap_err() {
            IdxError::LabelRange { label, classes } => assert_eq!((label, classes), (5, 2)),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
