use std::path::Path;

use wordpron::lexicon::{generate_toy_lexicon, write_lexicon, ToyParams};

use crate::{write_text, CliResult};

/// Writes a toy lexicon to `output`, or returns it when no path is given.
pub fn cmd_generate(params: &ToyParams, output: Option<&Path>) -> CliResult<Option<String>> {
    let text = write_lexicon(&generate_toy_lexicon(params));
    match output {
        Some(path) => write_text(path, &text).map(|_| None),
        None => Ok(Some(text)),
    }
}
