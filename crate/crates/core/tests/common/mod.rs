#![allow(dead_code)]

pub mod exprgen;

use std::path::PathBuf;

/// Sample spec files shipped with the repository.
pub fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}
