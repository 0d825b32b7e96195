//! The built-in model library shipped with the binary.

use crate::model::{Model, ModelError};

pub const BUILTIN: &str = include_str!("../library/builtin.model");

/// The model named by a command-line argument: `builtin` or a file path.
pub fn load(spec: &str) -> Result<Model, LoadError> {
    if spec == "builtin" {
        return Ok(builtin());
    }
    let text = std::fs::read_to_string(spec).map_err(|e| LoadError::Io(spec.to_string(), e))?;
    Ok(Model::parse(&text)?)
}

/// The parsed built-in library.
pub fn builtin() -> Model {
    Model::parse(BUILTIN).expect("the built-in library is valid")
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}
