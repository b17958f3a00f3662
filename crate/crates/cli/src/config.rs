//! Run configuration: defaults, then a flat `key=value` file, then flags.

use std::path::PathBuf;

use jia_core::align::AlignConfig;
use jia_core::crf::TrainConfig;
use jia_core::eval::SecondRound;

use crate::Failure;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub lexicons: Option<PathBuf>,
    pub model_dir: PathBuf,
    pub out: PathBuf,
    pub mentions: Option<PathBuf>,
    pub seed: u64,
    pub epochs: usize,
    pub batch: usize,
    pub lr: f64,
    pub l2: f64,
    pub fc_threshold: f64,
    pub wealth_threshold: f64,
    /// Unset means: CRF when a round-two model exists, rules otherwise.
    pub second_round: Option<SecondRound>,
    pub folds: Option<usize>,
    pub cases: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let train = TrainConfig::default();
        let align = AlignConfig::default();
        Self {
            corpus: None,
            lexicons: None,
            model_dir: PathBuf::from("models"),
            out: PathBuf::from("."),
            mentions: None,
            seed: train.seed,
            epochs: train.epochs,
            batch: train.batch_size,
            lr: train.learning_rate,
            l2: train.l2_lambda,
            fc_threshold: align.fc_threshold,
            wealth_threshold: align.wealth_threshold,
            second_round: None,
            folds: None,
            cases: 500,
        }
    }
}

fn parsed<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Failure>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Failure::invalid(format!("{key}: cannot parse `{value}`: {e}")))
}

pub fn parse_second_round(value: &str) -> Result<SecondRound, String> {
    match value {
        "crf" => Ok(SecondRound::Crf),
        "rules" => Ok(SecondRound::Rules),
        _ => Err(format!("expected `crf` or `rules`, got `{value}`")),
    }
}

impl RunConfig {
    /// Sets one key; keys use the flag names with `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Failure> {
        match key.replace('_', "-").as_str() {
            "corpus" => self.corpus = Some(value.into()),
            "lexicons" => self.lexicons = Some(value.into()),
            "model-dir" => self.model_dir = value.into(),
            "out" => self.out = value.into(),
            "mentions" => self.mentions = Some(value.into()),
            "seed" => self.seed = parsed(key, value)?,
            "epochs" => self.epochs = parsed(key, value)?,
            "batch" => self.batch = parsed(key, value)?,
            "lr" => self.lr = parsed(key, value)?,
            "l2" => self.l2 = parsed(key, value)?,
            "fc-threshold" => self.fc_threshold = parsed(key, value)?,
            "wealth-threshold" => self.wealth_threshold = parsed(key, value)?,
            "second-round" => {
                self.second_round =
                    Some(parse_second_round(value).map_err(|e| Failure::invalid(format!("{key}: {e}")))?)
            }
            "folds" => self.folds = Some(parsed(key, value)?),
            "cases" => self.cases = parsed(key, value)?,
            _ => return Err(Failure::invalid(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Applies a `key=value` file; blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, text: &str, file: &str) -> Result<(), Failure> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Failure::invalid(format!("{file}:{}: expected key=value", i + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|f| Failure::invalid(format!("{file}:{}: {}", i + 1, f.message)))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Failure> {
        for (name, t) in [
            ("fc-threshold", self.fc_threshold),
            ("wealth-threshold", self.wealth_threshold),
        ] {
            if !(0.0..=1.0).contains(&t) {
                return Err(Failure::invalid(format!("{name} must lie in [0, 1], got {t}")));
            }
        }
        if self.batch == 0 {
            return Err(Failure::invalid("batch must be at least 1"));
        }
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(Failure::invalid(format!("lr must be positive, got {}", self.lr)));
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return Err(Failure::invalid(format!("l2 must be non-negative, got {}", self.l2)));
        }
        if let Some(k) = self.folds {
            if k < 2 {
                return Err(Failure::invalid(format!("folds must be at least 2, got {k}")));
            }
        }
        Ok(())
    }

    pub fn train(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            batch_size: self.batch,
            learning_rate: self.lr,
            l2_lambda: self.l2,
            seed: self.seed,
        }
    }

    pub fn align(&self) -> AlignConfig {
        AlignConfig {
            fc_threshold: self.fc_threshold,
            wealth_threshold: self.wealth_threshold,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_keys() {
        let mut c = RunConfig::default();
        c.apply_file("# run\nseed = 3\nfc_threshold=0.6\n\nsecond-round=rules\n", "run.cfg")
            .unwrap();
        assert_eq!(
            (c.seed, c.fc_threshold, c.second_round),
            (3, 0.6, Some(SecondRound::Rules))
        );
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = RunConfig::default();
        assert!(c
            .apply_file("colour=red", "x")
            .unwrap_err()
            .message
            .contains("unknown config key"));
        assert!(c.apply_file("seed", "x").unwrap_err().message.contains("x:1"));
        assert!(c.set("epochs", "-1").is_err());
        c.set("wealth-threshold", "1.5").unwrap();
        assert!(c.validate().is_err());
    }
}
