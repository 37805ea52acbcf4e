//! Letter/phoneme alignment with phonemic nulls.
//!
//! A simple monotone dynamic program: every phoneme is matched to exactly
//! one letter in order, unmatched letters receive the null phoneme `-`.
//! Pair scores come from an editable seed table, falling back to a
//! vowel/consonant class match. Among equally scoring alignments the one
//! that matches phonemes to the earliest letters wins, so nulls trail the
//! grapheme they belong to (`oo` → `u -`).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::symbol::Symbol;

const DEFAULT_TABLE: &str = include_str!("../../data/align_seed.tsv");

const VOWEL_LETTERS: &str = "aeiouyàáâäèéêëìíîïòóôöùúûü";
const VOWEL_PHONES: &str = "aeiouyæɑɒɔəɛɜɪʊʌøœɐɘɵɤɯɨʉ";
const MODIFIERS: &str = "ːˑʰʲʷˠˤ";

#[derive(Debug, Clone)]
pub struct AlignTable {
    seeds: HashMap<(String, String), i32>,
}

impl Default for AlignTable {
    fn default() -> Self {
        AlignTable::from_tsv(DEFAULT_TABLE).expect("bundled alignment table is valid")
    }
}

impl AlignTable {
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut seeds = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let bad = |msg: &str| Error::AlignTable {
                line: i + 1,
                msg: msg.to_owned(),
            };
            if cols.len() != 3 {
                return Err(bad("expected letter, phoneme and score"));
            }
            let score: i32 = cols[2]
                .trim()
                .parse()
                .map_err(|_| bad("score is not an integer"))?;
            seeds.insert((cols[0].to_lowercase(), cols[1].to_owned()), score);
        }
        Ok(AlignTable { seeds })
    }

    pub fn score(&self, letter: &str, phoneme: &str) -> i32 {
        if let Some(&s) = self.seeds.get(&(letter.to_lowercase(), phoneme.to_owned())) {
            return s;
        }
        if is_vowel_letter(letter) == is_vowel_phone(phoneme) {
            1
        } else {
            -1
        }
    }
}

fn is_vowel_letter(letter: &str) -> bool {
    letter
        .chars()
        .next()
        .is_some_and(|c| VOWEL_LETTERS.contains(c.to_ascii_lowercase()))
}

fn is_vowel_phone(phoneme: &str) -> bool {
    phoneme
        .chars()
        .next()
        .is_some_and(|c| VOWEL_PHONES.contains(c))
}

fn is_modifier(c: char) -> bool {
    MODIFIERS.contains(c) || ('\u{0300}'..='\u{036f}').contains(&c) || c == '\u{0361}'
}

/// Tokenizes a raw transcription. Whitespace-separated input is taken as
/// is; otherwise each character is a phoneme, with length marks and
/// combining diacritics attached to the preceding one. Enclosing slashes
/// are dropped.
pub fn split_phonemes(raw: &str) -> Vec<Symbol> {
    let raw = raw.trim().trim_start_matches('/').trim_end_matches('/');
    if raw.contains(char::is_whitespace) {
        return raw.split_whitespace().map(Symbol::new).collect();
    }
    let mut out: Vec<String> = Vec::new();
    for c in raw.chars() {
        match out.last_mut() {
            Some(prev) if is_modifier(c) => prev.push(c),
            _ => out.push(c.to_string()),
        }
    }
    out.iter().map(|s| Symbol::new(s)).collect()
}

pub fn align(table: &AlignTable, letters: &[Symbol], phonemes: &[Symbol]) -> Result<Vec<Symbol>> {
    let (n, m) = (letters.len(), phonemes.len());
    if n == 0 || m > n {
        return Err(Error::CannotAlign {
            word: letters.iter().map(|s| s.as_str()).collect(),
            letters: n,
            phonemes: m,
        });
    }
    // best[i][j]: best score aligning the first i letters with the first j phonemes
    let mut best = vec![vec![None::<i64>; m + 1]; n + 1];
    best[0][0] = Some(0);
    for i in 1..=n {
        for j in 0..=m.min(i) {
            let skip = best[i - 1][j];
            let matched = if j > 0 {
                best[i - 1][j - 1].map(|s| {
                    s + i64::from(table.score(letters[i - 1].as_str(), phonemes[j - 1].as_str()))
                })
            } else {
                None
            };
            best[i][j] = match (skip, matched) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            };
        }
    }
    let null = Symbol::null();
    let mut out = vec![null; n];
    let (mut i, mut j) = (n, m);
    while i > 0 {
        let here = best[i][j].expect("reachable cell");
        // Prefer the null on ties while walking backwards: nulls end up as
        // far right as possible, phonemes as far left.
        if best[i - 1][j] == Some(here) {
            i -= 1;
            continue;
        }
        out[i - 1] = phonemes[j - 1];
        i -= 1;
        j -= 1;
    }
    Ok(out)
}
