//! One-tailed Student t-tests over per-fold scores.

use serde::{Deserialize, Serialize, Serializer};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::metrics::mean_sd;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TTestVariant {
    /// Paired on fold index, df = n - 1.
    Paired,
    /// Two-sample with pooled variance, df = n_a + n_b - 2.
    Pooled,
}

fn serialize_extended<S: Serializer>(t: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if t.is_finite() {
        s.serialize_f64(*t)
    } else if *t > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TTestResult {
    /// Statistic for mean(a) - mean(b).
    #[serde(serialize_with = "serialize_extended")]
    pub t: f64,
    pub df: f64,
    /// One-tailed p in the direction of the observed difference.
    pub p: f64,
    pub variant: TTestVariant,
    /// Set when the spread is zero but the means differ (t is infinite, p 0).
    pub zero_variance: bool,
}

fn finish(diff: f64, se: f64, df: f64, variant: TTestVariant) -> TTestResult {
    if se == 0.0 || !se.is_finite() {
        if diff == 0.0 {
            return TTestResult {
                t: 0.0,
                df,
                p: 0.5,
                variant,
                zero_variance: false,
            };
        }
        let t = if diff > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        return TTestResult {
            t,
            df,
            p: 0.0,
            variant,
            zero_variance: true,
        };
    }
    let t = diff / se;
    let dist = StudentsT::new(0.0, 1.0, df).expect("df is positive");
    TTestResult {
        t,
        df,
        p: dist.sf(t.abs()),
        variant,
        zero_variance: false,
    }
}

pub fn t_test_one_tailed(a: &[f64], b: &[f64], variant: TTestVariant) -> Result<TTestResult> {
    let smallest = a.len().min(b.len());
    if smallest < 2 {
        return Err(Error::TooFewSamples(smallest));
    }
    match variant {
        TTestVariant::Paired => {
            if a.len() != b.len() {
                return Err(Error::LengthMismatch {
                    expected: a.len(),
                    actual: b.len(),
                });
            }
            let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let n = diffs.len() as f64;
            let (mean, sd) = mean_sd(&diffs);
            Ok(finish(mean, sd / n.sqrt(), n - 1.0, variant))
        }
        TTestVariant::Pooled => {
            let (na, nb) = (a.len() as f64, b.len() as f64);
            let (ma, sa) = mean_sd(a);
            let (mb, sb) = mean_sd(b);
            let df = na + nb - 2.0;
            let pooled = ((na - 1.0) * sa * sa + (nb - 1.0) * sb * sb) / df;
            let se = (pooled * (1.0 / na + 1.0 / nb)).sqrt();
            Ok(finish(ma - mb, se, df, variant))
        }
    }
}
