use std::collections::HashSet;
use std::path::Path;

use anyhow::anyhow;
use wordpron::lexicon::{align, split_phonemes, write_lexicon, AlignTable, AlignedEntry};
use wordpron::Symbol;

use crate::{read_text, write_text, CliResult, ResultExt};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrepareSummary {
    pub accepted: usize,
    pub rejected: usize,
}

fn flags(column: &str, n: usize, what: &str) -> Result<Vec<bool>, String> {
    if column.chars().count() != n {
        return Err(format!(
            "{what} column has {} flags for {n} letters",
            column.chars().count()
        ));
    }
    column
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(format!("{what} column holds {c:?}")),
        })
        .collect()
}

fn stress_marks(column: &str, n: usize) -> Result<Vec<u8>, String> {
    if column.chars().count() != n {
        return Err(format!(
            "stress column has {} marks for {n} letters",
            column.chars().count()
        ));
    }
    column
        .chars()
        .map(|c| match c {
            '0' | '1' | '2' => Ok(c as u8 - b'0'),
            _ => Err(format!("stress column holds {c:?}")),
        })
        .collect()
}

/// One raw line: `word TAB phonemes [TAB morph TAB syllable TAB stress]`.
/// Without the three annotation columns the word gets a single morpheme,
/// a single syllable and no stress.
fn prepare_line(table: &AlignTable, line: &str) -> Result<AlignedEntry, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 2 && cols.len() != 5 {
        return Err(format!(
            "expected 2 or 5 tab-separated columns, found {}",
            cols.len()
        ));
    }
    let letters: Vec<Symbol> = cols[0]
        .chars()
        .map(|c| Symbol::new(c.encode_utf8(&mut [0; 4])))
        .collect();
    let n = letters.len();
    if n == 0 {
        return Err("empty word".into());
    }
    let phonemes = split_phonemes(cols[1]);
    let aligned = align(table, &letters, &phonemes).map_err(|e| e.to_string())?;
    let grapheme = aligned.iter().map(|p| !p.is_null()).collect();
    let (morph, syllable, stress) = if cols.len() == 5 {
        (
            flags(cols[2], n, "morph")?,
            flags(cols[3], n, "syllable")?,
            stress_marks(cols[4], n)?,
        )
    } else {
        let first: Vec<bool> = (0..n).map(|i| i == 0).collect();
        (first.clone(), first, vec![0; n])
    };
    AlignedEntry::new(letters, aligned, morph, grapheme, syllable, stress)
        .map_err(|e| e.to_string())
}

/// Aligns a raw lexicon. Lines that cannot be used go to `rejects` as
/// `line TAB reason TAB input`.
pub fn cmd_prepare(
    input: &Path,
    output: &Path,
    rejects: &Path,
    table: Option<&Path>,
) -> CliResult<PrepareSummary> {
    let table = match table {
        Some(path) => AlignTable::from_tsv(&read_text(path)?).invalid()?,
        None => AlignTable::default(),
    };
    let text = read_text(input)?;
    let mut entries = Vec::new();
    let mut reject_rows = String::from("line\treason\tinput\n");
    let mut rejected = 0;
    let mut seen = HashSet::new();
    let mut data_lines = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        data_lines += 1;
        let result = prepare_line(&table, line).and_then(|e| {
            if seen.insert(e.word()) {
                Ok(e)
            } else {
                Err(format!("duplicate word {}", e.word()))
            }
        });
        match result {
            Ok(e) => entries.push(e),
            Err(reason) => {
                rejected += 1;
                reject_rows.push_str(&format!("{}\t{reason}\t{line}\n", k + 1));
            }
        }
    }
    if data_lines == 0 {
        return Err(anyhow!("{} holds no entries", input.display())).invalid();
    }
    write_text(output, &write_lexicon(&entries))?;
    write_text(rejects, &reject_rows)?;
    Ok(PrepareSummary {
        accepted: entries.len(),
        rejected,
    })
}
