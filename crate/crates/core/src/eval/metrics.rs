//! Precision/recall families: token-level per label, chunk-level, and the
//! aligned-pair confusion matrix.

use std::collections::BTreeMap;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::schema::{Label, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize, what: &str) -> f64 {
    if den == 0 {
        warn!("{what}: zero denominator, reporting 0");
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

impl Prf {
    /// Precision over `predicted`, recall over `gold`.
    pub fn from_counts(correct: usize, predicted: usize, gold: usize) -> Prf {
        let precision = ratio(correct, predicted, "precision");
        let recall = ratio(correct, gold, "recall");
        Prf {
            precision,
            recall,
            f1: f1(precision, recall),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelScore {
    pub label: String,
    pub correct: usize,
    pub predicted: usize,
    pub gold: usize,
    pub prf: Prf,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LabelPrf {
    pub labels: Vec<LabelScore>,
    pub micro: Prf,
    /// Unweighted means of the per-label precision, recall and F1.
    pub macro_avg: Prf,
}

/// Token-level scores per label class (B_ and I_ of a label count as the
/// same class; O is not scored). Labels appearing in neither sequence set
/// are left out of the macro average.
pub fn label_prf(gold: &[Vec<Tag>], predicted: &[Vec<Tag>]) -> LabelPrf {
    assert_eq!(gold.len(), predicted.len(), "one prediction per gold sequence");
    let mut counts: BTreeMap<Label, (usize, usize, usize)> = BTreeMap::new();
    for (g, p) in gold.iter().zip(predicted) {
        assert_eq!(g.len(), p.len(), "sequence lengths differ");
        for (gt, pt) in g.iter().zip(p) {
            if let Some(l) = gt.label() {
                counts.entry(l).or_default().2 += 1;
            }
            if let Some(l) = pt.label() {
                let e = counts.entry(l).or_default();
                e.1 += 1;
                if gt.label() == Some(l) {
                    e.0 += 1;
                }
            }
        }
    }
    let labels: Vec<LabelScore> = counts
        .iter()
        .map(|(l, &(c, p, g))| LabelScore {
            label: l.to_string(),
            correct: c,
            predicted: p,
            gold: g,
            prf: Prf::from_counts(c, p, g),
        })
        .collect();
    let (c, p, g) = counts
        .values()
        .fold((0, 0, 0), |acc, v| (acc.0 + v.0, acc.1 + v.1, acc.2 + v.2));
    let n = labels.len().max(1) as f64;
    let mean = |f: fn(&Prf) -> f64| labels.iter().map(|s| f(&s.prf)).sum::<f64>() / n;
    let macro_avg = Prf {
        precision: mean(|p| p.precision),
        recall: mean(|p| p.recall),
        f1: mean(|p| p.f1),
    };
    LabelPrf {
        micro: Prf::from_counts(c, p, g),
        macro_avg,
        labels,
    }
}

/// Exact-match chunk scores over multisets of chunk identities.
pub fn chunk_prf<T: Ord + Clone>(gold: &[T], predicted: &[T]) -> Prf {
    let mut bag: BTreeMap<&T, usize> = BTreeMap::new();
    for g in gold {
        *bag.entry(g).or_default() += 1;
    }
    let mut correct = 0;
    for p in predicted {
        if let Some(n) = bag.get_mut(p) {
            if *n > 0 {
                *n -= 1;
                correct += 1;
            }
        }
    }
    Prf::from_counts(correct, predicted.len(), gold.len())
}

/// Outcome of a cross-party mention pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairClass {
    Contradictory,
    Entailment,
    Non,
}

impl PairClass {
    pub const ALL: [PairClass; 3] = [PairClass::Contradictory, PairClass::Entailment, PairClass::Non];

    fn index(self) -> usize {
        self as usize
    }
}

/// Counts indexed `[gold][predicted]` in the order Contradictory,
/// Entailment, Non.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PairConfusion {
    pub counts: [[u64; 3]; 3],
}

impl PairConfusion {
    pub fn from_rows(rows: [[u64; 3]; 3]) -> Self {
        Self { counts: rows }
    }

    pub fn add(&mut self, gold: PairClass, predicted: PairClass) {
        self.counts[gold.index()][predicted.index()] += 1;
    }

    pub fn get(&self, gold: PairClass, predicted: PairClass) -> u64 {
        self.counts[gold.index()][predicted.index()]
    }

    /// Pairs aligned in both gold and prediction, whatever their label.
    pub fn correctly_aligned(&self) -> u64 {
        self.counts[..2].iter().map(|r| r[0] + r[1]).sum()
    }

    pub fn predicted_aligned(&self) -> u64 {
        self.counts.iter().map(|r| r[0] + r[1]).sum()
    }

    pub fn should_align(&self) -> u64 {
        self.counts[..2].iter().map(|r| r.iter().sum::<u64>()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PairMetrics {
    pub p_align: f64,
    pub r_align: f64,
    pub p_contradictory: f64,
    pub r_contradictory: f64,
}

impl PairMetrics {
    /// F1 of contradiction detection.
    pub fn conflict_f1(&self) -> f64 {
        f1(self.p_contradictory, self.r_contradictory)
    }
}

pub fn pair_metrics(conf: &PairConfusion) -> PairMetrics {
    use PairClass::*;
    let r = |num: u64, den: u64, what: &str| ratio(num as usize, den as usize, what);
    let contra = conf.get(Contradictory, Contradictory);
    let predicted_contra: u64 = PairClass::ALL.iter().map(|&g| conf.get(g, Contradictory)).sum();
    let gold_contra: u64 = PairClass::ALL.iter().map(|&p| conf.get(Contradictory, p)).sum();
    PairMetrics {
        p_align: r(conf.correctly_aligned(), conf.predicted_aligned(), "P_align"),
        r_align: r(conf.correctly_aligned(), conf.should_align(), "R_align"),
        p_contradictory: r(contra, predicted_contra, "P_contradictory"),
        r_contradictory: r(contra, gold_contra, "R_contradictory"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(s: &[&str]) -> Vec<Tag> {
        s.iter().map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn chunk_examples() {
        let g = [1, 2, 3, 4];
        assert_eq!(
            chunk_prf(&g, &g),
            Prf {
                precision: 1.0,
                recall: 1.0,
                f1: 1.0
            }
        );
        let p = chunk_prf(&g, &[1, 2, 3, 9, 8]);
        assert_eq!((p.precision, p.recall), (0.6, 0.75));
        assert!((p.f1 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(chunk_prf(&g, &[7]), Prf::default());
        // Multiset: a duplicate prediction only matches once.
        assert_eq!(chunk_prf(&[1], &[1, 1]).precision, 0.5);
    }

    #[test]
    fn label_scores() {
        let g = vec![tags(&["B_Time", "I_Time", "O", "B_Know"])];
        let p = vec![tags(&["B_Time", "O", "B_Person", "B_Know"])];
        let s = label_prf(&g, &p);
        let time = s.labels.iter().find(|l| l.label == "Time").unwrap();
        assert_eq!((time.correct, time.predicted, time.gold), (1, 1, 2));
        assert_eq!(s.micro.precision, 2.0 / 3.0);
        assert_eq!(s.micro.recall, 2.0 / 3.0);
        // Time F1 2/3, Know 1, Person 0.
        assert!((s.macro_avg.f1 - (2.0 / 3.0 + 1.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn table_five() {
        let conf = PairConfusion::from_rows([[159, 26, 13], [22, 216, 39], [15, 992, 71932]]);
        let m = pair_metrics(&conf);
        assert_eq!(m.p_align, 423.0 / 1430.0);
        assert_eq!(m.r_align, 423.0 / 475.0);
        assert_eq!(m.p_contradictory, 159.0 / 196.0);
        assert_eq!(m.r_contradictory, 159.0 / 198.0);
    }

    #[test]
    fn degenerate_matrices() {
        let diag = PairConfusion::from_rows([[3, 0, 0], [0, 4, 0], [0, 0, 9]]);
        let m = pair_metrics(&diag);
        assert_eq!(
            (m.p_align, m.r_align, m.p_contradictory, m.r_contradictory),
            (1.0, 1.0, 1.0, 1.0)
        );
        assert_eq!(pair_metrics(&PairConfusion::default()), PairMetrics::default());
    }
}
