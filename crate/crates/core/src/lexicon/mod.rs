//! Aligned pronunciation lexica and their task labelings.

mod align;
mod toy;
mod window;

use std::collections::HashSet;

pub use align::{align, split_phonemes, AlignTable};
pub use toy::{generate_toy_lexicon, ToyParams, ToyRules};
pub use window::{
    decode_composite, derive_class, gs_class, split_gs_class, window_features, window_instances,
    window_instances_over, AnnotatedWord, Annotation, BaseStream, StreamSpec, TaskKind, WindowSpec,
    WINDOW,
};

use crate::error::{Error, Result};
use crate::symbol::{Symbol, PADDING};

pub const LEXICON_FORMAT_VERSION: u32 = 1;

/// One word with letter-aligned phonemes and per-position annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedEntry {
    letters: Vec<Symbol>,
    phonemes: Vec<Symbol>,
    morph_initial: Vec<bool>,
    grapheme_initial: Vec<bool>,
    syllable_initial: Vec<bool>,
    stress: Vec<u8>,
}

impl AlignedEntry {
    pub fn new(
        letters: Vec<Symbol>,
        phonemes: Vec<Symbol>,
        morph_initial: Vec<bool>,
        grapheme_initial: Vec<bool>,
        syllable_initial: Vec<bool>,
        stress: Vec<u8>,
    ) -> Result<Self> {
        let entry = AlignedEntry {
            letters,
            phonemes,
            morph_initial,
            grapheme_initial,
            syllable_initial,
            stress,
        };
        entry.validate()?;
        Ok(entry)
    }

    fn validate(&self) -> Result<()> {
        let n = self.letters.len();
        let invalid = |msg: String| Err(Error::InvalidEntry(msg));
        if n == 0 {
            return invalid("word is empty".into());
        }
        for (name, len) in [
            ("phonemes", self.phonemes.len()),
            ("morph flags", self.morph_initial.len()),
            ("grapheme flags", self.grapheme_initial.len()),
            ("syllable flags", self.syllable_initial.len()),
            ("stress", self.stress.len()),
        ] {
            if len != n {
                return invalid(format!("{name} has length {len}, word has {n} letters"));
            }
        }
        if let Some(s) = self
            .letters
            .iter()
            .chain(&self.phonemes)
            .find(|s| s.as_str() == PADDING)
        {
            return invalid(format!(
                "reserved padding token {s} used as a letter or phoneme"
            ));
        }
        if let Some(i) = self.stress.iter().position(|&s| s > 2) {
            return invalid(format!(
                "stress {} at position {i} is not 0, 1 or 2",
                self.stress[i]
            ));
        }
        if let Some(i) = (0..n).find(|&i| self.stress[i] != 0 && !self.syllable_initial[i]) {
            return invalid(format!(
                "stress at position {i} which is not syllable-initial"
            ));
        }
        if !self.morph_initial[0] || !self.grapheme_initial[0] {
            return invalid("first letter must be morpheme- and grapheme-initial".into());
        }
        if let Some(i) = (0..n).find(|&i| self.grapheme_initial[i] && self.phonemes[i].is_null()) {
            return invalid(format!(
                "degenerate entry: grapheme-initial position {i} maps to a null phoneme"
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn word(&self) -> String {
        self.letters.iter().map(|s| s.as_str()).collect()
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn phonemes(&self) -> &[Symbol] {
        &self.phonemes
    }

    pub fn morph_initial(&self) -> &[bool] {
        &self.morph_initial
    }

    pub fn grapheme_initial(&self) -> &[bool] {
        &self.grapheme_initial
    }

    pub fn syllable_initial(&self) -> &[bool] {
        &self.syllable_initial
    }

    pub fn stress(&self) -> &[u8] {
        &self.stress
    }
}

fn flags_to_string(flags: &[bool]) -> String {
    flags.iter().map(|&f| if f { '1' } else { '0' }).collect()
}

fn parse_flags(field: &str, what: &str) -> std::result::Result<Vec<bool>, String> {
    field
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("{what} flag {other:?} is not 0 or 1")),
        })
        .collect()
}

/// Renders one entry as a six-column TSV line (no trailing newline).
pub fn format_entry(entry: &AlignedEntry) -> String {
    let phonemes: Vec<&str> = entry.phonemes.iter().map(|s| s.as_str()).collect();
    let stress: String = entry.stress.iter().map(|s| char::from(b'0' + s)).collect();
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}",
        entry.word(),
        phonemes.join(" "),
        flags_to_string(&entry.morph_initial),
        flags_to_string(&entry.grapheme_initial),
        flags_to_string(&entry.syllable_initial),
        stress
    )
}

pub fn write_lexicon(entries: &[AlignedEntry]) -> String {
    let mut out = format!(
        "# wordpron-lexicon {LEXICON_FORMAT_VERSION}\n# word\tphonemes\tmorph\tgrapheme\tsyllable\tstress\n"
    );
    for e in entries {
        out.push_str(&format_entry(e));
        out.push('\n');
    }
    out
}

/// Parses a single TSV line into an entry.
pub fn parse_entry_line(line: &str) -> std::result::Result<AlignedEntry, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 6 {
        return Err(format!(
            "expected 6 tab-separated columns, found {}",
            cols.len()
        ));
    }
    let letters: Vec<Symbol> = cols[0]
        .chars()
        .map(|c| Symbol::new(c.encode_utf8(&mut [0; 4])))
        .collect();
    let phonemes: Vec<Symbol> = cols[1].split_whitespace().map(Symbol::new).collect();
    let morph = parse_flags(cols[2], "morph")?;
    let grapheme = parse_flags(cols[3], "grapheme")?;
    let syllable = parse_flags(cols[4], "syllable")?;
    let stress = cols[5]
        .chars()
        .map(|c| match c {
            '0'..='2' => Ok(c as u8 - b'0'),
            other => Err(format!("stress value {other:?} is not 0, 1 or 2")),
        })
        .collect::<std::result::Result<Vec<u8>, String>>()?;
    AlignedEntry::new(letters, phonemes, morph, grapheme, syllable, stress).map_err(|e| match e {
        Error::InvalidEntry(msg) => msg,
        other => other.to_string(),
    })
}

/// Parses a six-column lexicon. The first bad line aborts with its number.
pub fn parse_lexicon(text: &str) -> Result<Vec<AlignedEntry>> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let entry = parse_entry_line(line).map_err(|msg| Error::Lexicon { line: line_no, msg })?;
        if !seen.insert(entry.word()) {
            return Err(Error::Lexicon {
                line: line_no,
                msg: format!("duplicate word {:?}", entry.word()),
            });
        }
        entries.push(entry);
    }
    if entries.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    Ok(entries)
}
