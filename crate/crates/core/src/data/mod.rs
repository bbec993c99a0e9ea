//! Core data types and on-disk formats.

mod csv_import;
mod dataset;
mod error;
mod format;
mod groups;
mod hyper;
mod model;

pub use csv_import::{read_descriptor_csv, read_label_csv};
pub use dataset::{one_hot, validate_dataset, DatasetIssue, DatasetParts, DescriptorDataset, ValidationReport};
pub use error::DataError;
pub use format::{
    decode_dataset, decode_model, encode_dataset, encode_model, read_descriptor_file, read_model_file,
    write_descriptor_file, write_model_file,
    DATASET_FORMAT_VERSION, DATASET_MAGIC, MODEL_FORMAT_VERSION, MODEL_MAGIC,
};
pub use groups::{build_group_weights, GroupWeights};
pub use hyper::Hyperparameters;
pub use model::{
    load_model, save_model, ModelMeta, ProjectionMatrix, PrototypeModel, Selection,
    SelectionMatrix, BOOK_TOLERANCE,
};
