//! Size-stratified k-fold splits over cases.
//!
//! Cases fall into three intervals by the byte size of their documents.
//! Each interval is shuffled and cut into k pieces; fold j tests on piece j
//! of every interval and trains on the rest.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::EvalError;

pub const SMALL_CASE_BYTES: usize = 3 * 1024;
pub const LARGE_CASE_BYTES: usize = 6 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SizeInterval {
    Small,
    Medium,
    Large,
}

pub fn size_interval(case_bytes: usize) -> SizeInterval {
    if case_bytes < SMALL_CASE_BYTES {
        SizeInterval::Small
    } else if case_bytes < LARGE_CASE_BYTES {
        SizeInterval::Medium
    } else {
        SizeInterval::Large
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub index: usize,
    /// Case ids, sorted.
    pub train: Vec<String>,
    pub test: Vec<String>,
    /// Test cases per interval.
    pub test_by_interval: BTreeMap<SizeInterval, usize>,
}

impl Fold {
    /// Documents of the training and test cases, in corpus order.
    pub fn split(&self, docs: &[Document]) -> (Vec<Document>, Vec<Document>) {
        docs.iter()
            .cloned()
            .partition(|d| self.test.binary_search(&d.case_id).is_err())
    }
}

/// Case sizes in bytes, by case id.
pub fn case_sizes(docs: &[Document]) -> BTreeMap<String, usize> {
    let mut sizes: BTreeMap<String, usize> = BTreeMap::new();
    for d in docs {
        *sizes.entry(d.case_id.clone()).or_default() += d.byte_len();
    }
    sizes
}

pub fn stratified_folds(docs: &[Document], k: usize, seed: u64) -> Result<Vec<Fold>, EvalError> {
    if k < 2 {
        return Err(EvalError::TooFewFolds(k));
    }
    let mut intervals: BTreeMap<SizeInterval, Vec<String>> = BTreeMap::new();
    for (case, bytes) in case_sizes(docs) {
        intervals.entry(size_interval(bytes)).or_default().push(case);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces: Vec<BTreeMap<SizeInterval, Vec<String>>> = vec![BTreeMap::new(); k];
    for (interval, mut cases) in intervals {
        cases.shuffle(&mut rng);
        let (q, r) = (cases.len() / k, cases.len() % k);
        let mut rest = cases.as_slice();
        for (j, piece) in pieces.iter_mut().enumerate() {
            let (head, tail) = rest.split_at(q + usize::from(j < r));
            piece.insert(interval, head.to_vec());
            rest = tail;
        }
    }
    let all: Vec<String> = case_sizes(docs).into_keys().collect();
    pieces
        .into_iter()
        .enumerate()
        .map(|(index, piece)| {
            let mut test: Vec<String> = piece.values().flatten().cloned().collect();
            if test.is_empty() {
                return Err(EvalError::EmptyFold(index));
            }
            test.sort();
            let train = all.iter().filter(|c| test.binary_search(c).is_err()).cloned().collect();
            Ok(Fold {
                index,
                train,
                test,
                test_by_interval: piece.iter().map(|(i, c)| (*i, c.len())).collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Party, Sentence, Token};

    fn doc(case: usize, words: usize) -> Document {
        Document {
            doc_id: format!("c{case}-P"),
            case_id: format!("c{case:03}"),
            party: Party::Plaintiff,
            sentences: vec![Sentence::from_tokens(vec![Token::new("abcdefghi", "NN"); words])],
        }
    }

    #[test]
    fn intervals() {
        assert_eq!(size_interval(0), SizeInterval::Small);
        assert_eq!(size_interval(3071), SizeInterval::Small);
        assert_eq!(size_interval(3072), SizeInterval::Medium);
        assert_eq!(size_interval(6144), SizeInterval::Large);
    }

    #[test]
    fn one_piece_per_interval() {
        // 10-byte tokens: 100 words is 1000 bytes, 400 is 4000, 700 is 7000.
        let docs: Vec<Document> = (0..60).map(|i| doc(i, [100, 400, 700][i % 3])).collect();
        let folds = stratified_folds(&docs, 10, 3).unwrap();
        assert_eq!(folds.len(), 10);
        let mut seen = Vec::new();
        for f in &folds {
            assert_eq!(f.test_by_interval.values().copied().collect::<Vec<_>>(), vec![2, 2, 2]);
            assert_eq!(f.train.len() + f.test.len(), 60);
            seen.extend(f.test.clone());
            let (train, test) = f.split(&docs);
            assert_eq!((train.len(), test.len()), (54, 6));
        }
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 60);
        assert_eq!(folds, stratified_folds(&docs, 10, 3).unwrap());
    }

    #[test]
    fn errors() {
        let docs: Vec<Document> = (0..3).map(|i| doc(i, 10)).collect();
        assert!(matches!(stratified_folds(&docs, 1, 0), Err(EvalError::TooFewFolds(1))));
        assert!(matches!(stratified_folds(&docs, 4, 0), Err(EvalError::EmptyFold(3))));
    }
}
