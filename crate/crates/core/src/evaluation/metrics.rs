use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::Symbol;

pub type PhonemeStress = (Symbol, u8);

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch {
            expected: b,
            actual: a,
        });
    }
    Ok(())
}

fn percent(wrong: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * wrong as f64 / total as f64
    }
}

/// Percentage of positions where the phoneme, the stress marker, or both
/// are wrong.
pub fn joint_ps_error(predicted: &[PhonemeStress], gold: &[PhonemeStress]) -> Result<f64> {
    check_lengths(predicted.len(), gold.len())?;
    let wrong = predicted.iter().zip(gold).filter(|(p, g)| p != g).count();
    Ok(percent(wrong, gold.len()))
}

/// Percentage of words whose whole transcription is correct.
pub fn word_flawless(predicted: &[Vec<PhonemeStress>], gold: &[Vec<PhonemeStress>]) -> Result<f64> {
    check_lengths(predicted.len(), gold.len())?;
    let mut flawless = 0;
    for (p, g) in predicted.iter().zip(gold) {
        check_lengths(p.len(), g.len())?;
        if p == g {
            flawless += 1;
        }
    }
    Ok(percent(flawless, gold.len()))
}

/// Running error counts for one fold.
#[derive(Debug, Clone, Default)]
pub(crate) struct ErrorCounts {
    pub positions: usize,
    pub phoneme_wrong: usize,
    pub stress_wrong: usize,
    pub joint_wrong: usize,
    pub words: usize,
    pub flawless_words: usize,
}

impl ErrorCounts {
    pub fn add_word(&mut self, predicted: &[PhonemeStress], gold: &[PhonemeStress]) {
        let mut clean = true;
        for (p, g) in predicted.iter().zip(gold) {
            self.positions += 1;
            let ph = p.0 != g.0;
            let st = p.1 != g.1;
            self.phoneme_wrong += usize::from(ph);
            self.stress_wrong += usize::from(st);
            if ph || st {
                self.joint_wrong += 1;
                clean = false;
            }
        }
        self.words += 1;
        self.flawless_words += usize::from(clean);
    }

    pub fn phoneme_error(&self) -> f64 {
        percent(self.phoneme_wrong, self.positions)
    }

    pub fn stress_error(&self) -> f64 {
        percent(self.stress_wrong, self.positions)
    }

    pub fn joint_error(&self) -> f64 {
        percent(self.joint_wrong, self.positions)
    }

    pub fn word_flawless(&self) -> f64 {
        percent(self.flawless_words, self.words)
    }
}

/// A metric's per-fold values with their mean and sample standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub per_fold: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
}

impl MetricSummary {
    pub fn from_folds(per_fold: Vec<f64>) -> Self {
        let (mean, sd) = mean_sd(&per_fold);
        MetricSummary { per_fold, mean, sd }
    }
}

/// Mean and n-1 standard deviation (0 for fewer than two values).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
