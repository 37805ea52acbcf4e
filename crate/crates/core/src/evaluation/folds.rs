use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Word-level n-fold partition. Whole words go to one test set so no word
/// contributes windows to both sides of a split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub n: usize,
    pub seed: u64,
    pub words: usize,
    /// Sorted word indices held out in each fold.
    pub test_sets: Vec<Vec<usize>>,
}

impl FoldPlan {
    pub fn test(&self, fold: usize) -> &[usize] {
        &self.test_sets[fold]
    }

    /// Complement of the fold's test set, ascending.
    pub fn train(&self, fold: usize) -> Vec<usize> {
        let mut held_out = vec![false; self.words];
        for &i in &self.test_sets[fold] {
            held_out[i] = true;
        }
        (0..self.words).filter(|&i| !held_out[i]).collect()
    }
}

pub fn make_folds(words: usize, n: usize, seed: u64) -> Result<FoldPlan> {
    if n < 2 {
        return Err(Error::InvalidFolds(format!(
            "need at least 2 folds, got {n}"
        )));
    }
    if n > words {
        return Err(Error::InvalidFolds(format!(
            "{n} folds for only {words} words"
        )));
    }
    let mut order: Vec<usize> = (0..words).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut test_sets = vec![Vec::with_capacity(words / n + 1); n];
    for (k, &w) in order.iter().enumerate() {
        test_sets[k % n].push(w);
    }
    for t in &mut test_sets {
        t.sort_unstable();
    }
    Ok(FoldPlan {
        n,
        seed,
        words,
        test_sets,
    })
}
