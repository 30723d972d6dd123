//! Index files, benchmarks and command-line plumbing.

pub mod bench;
pub mod cli;
mod persist;

pub use persist::{load_index, load_index_with, save_index, PersistError, INDEX_MAGIC, INDEX_VERSION};
