//! Built-in models.

use crate::error::{Error, Result};
use crate::model::ModelFile;

pub const NAMES: [&str; 4] = ["c3", "conifold", "spp", "c3z3"];

fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "c3" => include_str!("../catalog/c3.json"),
        "conifold" => include_str!("../catalog/conifold.json"),
        "spp" => include_str!("../catalog/spp.json"),
        "c3z3" => include_str!("../catalog/c3z3.json"),
        _ => return None,
    })
}

pub fn catalog(name: &str) -> Result<ModelFile> {
    let text = source(name).ok_or_else(|| Error::UnknownModel(name.to_string()))?;
    ModelFile::parse(text)
}
