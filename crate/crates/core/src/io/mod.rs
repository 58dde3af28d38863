//! Dataset ingestion and export: CSV feature/label files and the MNIST IDX
//! binary format.

mod csv;
mod idx;

pub use csv::{load_csv, save_csv};
pub use idx::{load_idx, IDX_IMAGE_MAGIC, IDX_LABEL_MAGIC};
