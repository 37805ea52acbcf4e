use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::Context;
use wordpron::pipeline::{predict_word, TrainedSystem};
use wordpron::Symbol;

use crate::{read_text, CliResult, ResultExt};

/// `word TAB phoneme:stress ...`, nulls included.
pub fn format_prediction(word: &str, transcription: &[(Symbol, u8)]) -> String {
    let pairs: Vec<String> = transcription
        .iter()
        .map(|(p, s)| format!("{}:{s}", p.as_str()))
        .collect();
    format!("{word}\t{}", pairs.join(" "))
}

/// Transcribes one word per input line. Empty lines are skipped with a
/// warning on `warnings`. Returns the number of words transcribed.
pub fn cmd_predict(
    artifact: &Path,
    input: impl BufRead,
    mut output: impl Write,
    mut warnings: impl Write,
) -> CliResult<usize> {
    let system = TrainedSystem::from_json(&read_text(artifact)?)
        .with_context(|| format!("unreadable system artifact {}", artifact.display()))
        .invalid()?;
    let mut count = 0;
    for (k, line) in input.lines().enumerate() {
        let line = line.context("cannot read standard input").failed()?;
        let word = line.trim();
        if word.is_empty() {
            writeln!(warnings, "warning: skipping empty line {}", k + 1).failed()?;
            continue;
        }
        let letters: Vec<Symbol> = word
            .chars()
            .map(|c| Symbol::new(c.encode_utf8(&mut [0; 4])))
            .collect();
        let transcription = predict_word(&system, &letters)
            .with_context(|| format!("word {word:?}"))
            .failed()?;
        writeln!(output, "{}", format_prediction(word, &transcription)).failed()?;
        count += 1;
    }
    Ok(count)
}
