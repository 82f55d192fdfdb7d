//! The bundled example groups.

use crate::error::CliError;
use crate::format::GroupJson;

/// Commutator subgroup of `PSL_2(Z)` with membership read as "non-elliptic".
pub const PUNCTURED_TORUS: &str = include_str!("../fixtures/punctured_torus.json");
/// The same group, with membership decided by word search.
pub const PUNCTURED_TORUS_WORDS: &str = include_str!("../fixtures/punctured_torus_words.json");
/// Fundamental group of the Whitehead link complement inside `PSL_2(Z[i])`.
pub const WHITEHEAD: &str = include_str!("../fixtures/whitehead.json");

pub fn load(text: &str) -> Result<GroupJson, CliError> {
    Ok(serde_json::from_str(text)?)
}
