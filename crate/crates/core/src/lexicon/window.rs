//! Task labelings and fixed-width windowing.
//!
//! Every (sub)task is phrased as classification of a 3-1-3 window over a
//! letter or phoneme stream. Auxiliary streams (morpheme, grapheme and
//! syllable boundaries) are folded into the per-position tokens so the
//! window keeps seven features: `k` becomes `k|M0Y1` when the stream spec
//! asks for morph and syllable flags.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AlignedEntry;
use crate::error::{Error, Result};
use crate::instance::LabeledInstance;
use crate::symbol::Symbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub left: usize,
    pub right: usize,
}

impl WindowSpec {
    pub const fn arity(&self) -> usize {
        self.left + 1 + self.right
    }
}

pub const WINDOW: WindowSpec = WindowSpec { left: 3, right: 3 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TaskKind {
    /// Morpheme-initial letter.
    M,
    /// Grapheme-initial letter.
    A,
    /// Letter to phoneme (or null).
    G,
    /// Syllable-initial phoneme.
    Y,
    #[serde(rename = "S_on_letters")]
    SOnLetters,
    #[serde(rename = "S_on_phonemes")]
    SOnPhonemes,
    /// Phoneme and stress marker as one composite class.
    GS,
}

impl TaskKind {
    pub const ALL: [TaskKind; 7] = [
        TaskKind::M,
        TaskKind::A,
        TaskKind::G,
        TaskKind::Y,
        TaskKind::SOnLetters,
        TaskKind::SOnPhonemes,
        TaskKind::GS,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TaskKind::M => "M",
            TaskKind::A => "A",
            TaskKind::G => "G",
            TaskKind::Y => "Y",
            TaskKind::SOnLetters => "S_on_letters",
            TaskKind::SOnPhonemes => "S_on_phonemes",
            TaskKind::GS => "GS",
        }
    }

    /// Short label used in reports (both stress tasks print as `S`).
    pub fn label(&self) -> &'static str {
        match self {
            TaskKind::SOnLetters | TaskKind::SOnPhonemes => "S",
            other => other.name(),
        }
    }

    /// Stream the task reads when learned in isolation.
    pub fn isolated_base(&self) -> BaseStream {
        match self {
            TaskKind::Y | TaskKind::SOnPhonemes => BaseStream::Phonemes,
            _ => BaseStream::Letters,
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, TaskKind::M | TaskKind::A | TaskKind::Y)
    }

    pub fn is_stress(&self) -> bool {
        matches!(self, TaskKind::SOnLetters | TaskKind::SOnPhonemes)
    }

    /// The annotation a boundary task produces, if any.
    pub fn produces_annotation(&self) -> Option<Annotation> {
        match self {
            TaskKind::M => Some(Annotation::Morph),
            TaskKind::A => Some(Annotation::Grapheme),
            TaskKind::Y => Some(Annotation::Syllable),
            _ => None,
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TaskKind::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidSystem(format!("unknown task {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseStream {
    Letters,
    Phonemes,
}

/// Boundary annotations, declared in canonical composite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Annotation {
    Morph,
    Grapheme,
    Syllable,
}

impl Annotation {
    pub fn tag(&self) -> char {
        match self {
            Annotation::Morph => 'M',
            Annotation::Grapheme => 'A',
            Annotation::Syllable => 'Y',
        }
    }

    fn from_tag(c: char) -> Option<Annotation> {
        match c {
            'M' => Some(Annotation::Morph),
            'A' => Some(Annotation::Grapheme),
            'Y' => Some(Annotation::Syllable),
            _ => None,
        }
    }

    /// Task whose output supplies this annotation.
    pub fn source_task(&self) -> TaskKind {
        match self {
            Annotation::Morph => TaskKind::M,
            Annotation::Grapheme => TaskKind::A,
            Annotation::Syllable => TaskKind::Y,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamSpec {
    pub base: BaseStream,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
}

impl StreamSpec {
    pub fn new(base: BaseStream, annotations: impl IntoIterator<Item = Annotation>) -> Self {
        let mut annotations: Vec<Annotation> = annotations.into_iter().collect();
        annotations.sort();
        annotations.dedup();
        StreamSpec { base, annotations }
    }

    pub fn plain(base: BaseStream) -> Self {
        StreamSpec::new(base, [])
    }

    pub fn letters() -> Self {
        StreamSpec::plain(BaseStream::Letters)
    }

    pub fn phonemes() -> Self {
        StreamSpec::plain(BaseStream::Phonemes)
    }
}

impl fmt::Display for StreamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.base {
            BaseStream::Letters => "letters",
            BaseStream::Phonemes => "phonemes",
        })?;
        for a in &self.annotations {
            write!(f, "+{}", a.tag())?;
        }
        Ok(())
    }
}

/// The streams available for one word: always letters, plus whatever gold
/// or predicted layers have been attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedWord {
    pub letters: Vec<Symbol>,
    pub phonemes: Option<Vec<Symbol>>,
    pub morph: Option<Vec<bool>>,
    pub grapheme: Option<Vec<bool>>,
    pub syllable: Option<Vec<bool>>,
    pub stress: Option<Vec<u8>>,
}

impl AnnotatedWord {
    pub fn from_letters(letters: Vec<Symbol>) -> Self {
        AnnotatedWord {
            letters,
            phonemes: None,
            morph: None,
            grapheme: None,
            syllable: None,
            stress: None,
        }
    }

    pub fn gold(entry: &AlignedEntry) -> Self {
        AnnotatedWord {
            letters: entry.letters().to_vec(),
            phonemes: Some(entry.phonemes().to_vec()),
            morph: Some(entry.morph_initial().to_vec()),
            grapheme: Some(entry.grapheme_initial().to_vec()),
            syllable: Some(entry.syllable_initial().to_vec()),
            stress: Some(entry.stress().to_vec()),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn annotation(&self, a: Annotation) -> Option<&[bool]> {
        match a {
            Annotation::Morph => self.morph.as_deref(),
            Annotation::Grapheme => self.grapheme.as_deref(),
            Annotation::Syllable => self.syllable.as_deref(),
        }
    }

    pub fn annotation_mut(&mut self, a: Annotation) -> &mut Option<Vec<bool>> {
        match a {
            Annotation::Morph => &mut self.morph,
            Annotation::Grapheme => &mut self.grapheme,
            Annotation::Syllable => &mut self.syllable,
        }
    }
}

fn missing(what: &str) -> Error {
    Error::InvalidSystem(format!("{what} stream is not available"))
}

/// Per-position tokens of the stream described by `spec`.
fn stream_tokens(word: &AnnotatedWord, spec: &StreamSpec) -> Result<Vec<Symbol>> {
    let base: &[Symbol] = match spec.base {
        BaseStream::Letters => &word.letters,
        BaseStream::Phonemes => word.phonemes.as_deref().ok_or_else(|| missing("phoneme"))?,
    };
    if spec.annotations.is_empty() {
        return Ok(base.to_vec());
    }
    let layers = spec
        .annotations
        .iter()
        .map(|&a| {
            word.annotation(a)
                .map(|flags| (a, flags))
                .ok_or_else(|| missing(&format!("{a:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tokens = Vec::with_capacity(base.len());
    for (i, b) in base.iter().enumerate() {
        let mut token = String::with_capacity(b.as_str().len() + 1 + 2 * layers.len());
        token.push_str(b.as_str());
        token.push('|');
        for (a, flags) in &layers {
            token.push(a.tag());
            token.push(if flags[i] { '1' } else { '0' });
        }
        tokens.push(Symbol::new(&token));
    }
    Ok(tokens)
}

/// Splits a composite stream token back into its base token and flags.
pub fn decode_composite(token: &str) -> Option<(String, Vec<(Annotation, bool)>)> {
    let Some((base, flags)) = token.rsplit_once('|') else {
        return Some((token.to_owned(), Vec::new()));
    };
    let chars: Vec<char> = flags.chars().collect();
    if !chars.len().is_multiple_of(2) {
        return None;
    }
    let mut out = Vec::with_capacity(chars.len() / 2);
    for pair in chars.chunks(2) {
        let a = Annotation::from_tag(pair[0])?;
        let v = match pair[1] {
            '0' => false,
            '1' => true,
            _ => return None,
        };
        out.push((a, v));
    }
    Some((base.to_owned(), out))
}

/// One 7-symbol window per position, padded with `_` beyond the edges.
pub fn window_features(word: &AnnotatedWord, spec: &StreamSpec) -> Result<Vec<Vec<Symbol>>> {
    let tokens = stream_tokens(word, spec)?;
    let pad = Symbol::padding();
    let n = tokens.len() as isize;
    Ok((0..n)
        .map(|focus| {
            (focus - WINDOW.left as isize..=focus + WINDOW.right as isize)
                .map(|j| {
                    if j < 0 || j >= n {
                        pad
                    } else {
                        tokens[j as usize]
                    }
                })
                .collect()
        })
        .collect())
}

fn binary(flag: bool) -> Symbol {
    Symbol::new(if flag { "1" } else { "0" })
}

fn stress_symbol(s: u8) -> Symbol {
    Symbol::new(match s {
        0 => "0",
        1 => "1",
        _ => "2",
    })
}

/// Composite phoneme-with-stress class, rendered `/b/1`.
pub fn gs_class(phoneme: Symbol, stress: u8) -> Symbol {
    Symbol::new(&format!("/{phoneme}/{stress}"))
}

pub fn split_gs_class(class: Symbol) -> Option<(Symbol, u8)> {
    let (ph, s) = class.as_str().rsplit_once('/')?;
    let ph = ph.strip_prefix('/')?;
    let stress = match s {
        "0" => 0,
        "1" => 1,
        "2" => 2,
        _ => return None,
    };
    Some((Symbol::new(ph), stress))
}

pub fn derive_class(entry: &AlignedEntry, position: usize, task: TaskKind) -> Symbol {
    match task {
        TaskKind::M => binary(entry.morph_initial()[position]),
        TaskKind::A => binary(entry.grapheme_initial()[position]),
        TaskKind::G => entry.phonemes()[position],
        TaskKind::Y => binary(entry.syllable_initial()[position]),
        TaskKind::SOnLetters | TaskKind::SOnPhonemes => stress_symbol(entry.stress()[position]),
        TaskKind::GS => gs_class(entry.phonemes()[position], entry.stress()[position]),
    }
}

/// Windows over gold streams, labeled for `task`.
pub fn window_instances(
    entry: &AlignedEntry,
    task: TaskKind,
    streams: &StreamSpec,
) -> Vec<LabeledInstance> {
    window_instances_over(&AnnotatedWord::gold(entry), entry, task, streams)
        .expect("gold words carry every stream")
}

/// Windows over `word` (gold or predicted streams) labeled with the gold
/// classes of `entry`.
pub fn window_instances_over(
    word: &AnnotatedWord,
    entry: &AlignedEntry,
    task: TaskKind,
    streams: &StreamSpec,
) -> Result<Vec<LabeledInstance>> {
    if word.len() != entry.len() {
        return Err(Error::LengthMismatch {
            expected: entry.len(),
            actual: word.len(),
        });
    }
    Ok(window_features(word, streams)?
        .into_iter()
        .enumerate()
        .map(|(i, features)| LabeledInstance {
            features,
            class: derive_class(entry, i, task),
            count: 1,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::tests::booking;

    fn toks(v: &[Symbol]) -> Vec<&str> {
        v.iter().map(|s| s.as_str()).collect()
    }

    #[test]
    fn booking_letter_windows() {
        let e = booking();
        let inst = window_instances(&e, TaskKind::M, &StreamSpec::letters());
        assert_eq!(inst.len(), 7);
        assert_eq!(
            toks(&inst[0].features),
            vec!["_", "_", "_", "b", "o", "o", "k"]
        );
        assert_eq!(inst[0].class.as_str(), "1");
        let g = window_instances(&e, TaskKind::G, &StreamSpec::letters());
        assert_eq!(
            toks(&g[2].features),
            vec!["_", "b", "o", "o", "k", "i", "n"]
        );
        assert_eq!(g[2].class.as_str(), "-");
        let gs = window_instances(&e, TaskKind::GS, &StreamSpec::letters());
        assert_eq!(gs[0].class.as_str(), "/b/1");
    }

    #[test]
    fn booking_classes() {
        let e = booking();
        assert_eq!(derive_class(&e, 4, TaskKind::M).as_str(), "1");
        assert_eq!(derive_class(&e, 0, TaskKind::SOnPhonemes).as_str(), "1");
        assert_eq!(derive_class(&e, 1, TaskKind::Y).as_str(), "0");
    }

    #[test]
    fn composite_tokens_are_lossless() {
        let e = booking();
        let spec = StreamSpec::new(
            BaseStream::Phonemes,
            [Annotation::Syllable, Annotation::Morph],
        );
        assert_eq!(
            spec.annotations,
            vec![Annotation::Morph, Annotation::Syllable]
        );
        let windows = window_features(&AnnotatedWord::gold(&e), &spec).unwrap();
        assert_eq!(windows[3][3].as_str(), "k|M0Y1");
        assert_eq!(windows[0][0].as_str(), "_");
        let (base, flags) = decode_composite("k|M0Y1").unwrap();
        assert_eq!(base, "k");
        assert_eq!(
            flags,
            vec![(Annotation::Morph, false), (Annotation::Syllable, true)]
        );
        assert_eq!(decode_composite("a|b|A1").unwrap().0, "a|b");
        assert_eq!(
            decode_composite("plain").unwrap(),
            ("plain".to_owned(), vec![])
        );
    }

    #[test]
    fn gs_split_inverts_render() {
        for (ph, s) in [("b", 1u8), ("-", 0), ("ŋ", 2), ("a/b", 0)] {
            let c = gs_class(Symbol::new(ph), s);
            assert_eq!(split_gs_class(c), Some((Symbol::new(ph), s)));
        }
        assert_eq!(split_gs_class(Symbol::new("b1")), None);
    }

    #[test]
    fn missing_streams_are_reported() {
        let word = AnnotatedWord::from_letters(booking().letters().to_vec());
        assert!(window_features(&word, &StreamSpec::phonemes()).is_err());
        let spec = StreamSpec::new(BaseStream::Letters, [Annotation::Morph]);
        assert!(window_features(&word, &spec).is_err());
    }

    #[test]
    fn task_names_round_trip() {
        for t in TaskKind::ALL {
            assert_eq!(t.name().parse::<TaskKind>().unwrap(), t);
        }
        assert!("Q".parse::<TaskKind>().is_err());
    }
}
