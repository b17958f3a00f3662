#![allow(dead_code)]

use jia_core::crf::{CrfModel, FeatureTable, Observation};
use jia_core::schema::{Label, Tag, TransitionLabel, Vocabulary};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Vocabulary with exactly `l` tags (O first).
pub fn vocab_of_size(l: usize) -> Vocabulary {
    let labels = [TransitionLabel::Time, TransitionLabel::Person, TransitionLabel::Money];
    let mut tags = vec![Tag::O];
    for lab in labels {
        tags.push(Tag::B(Label::Transition(lab)));
        tags.push(Tag::I(Label::Transition(lab)));
    }
    tags.truncate(l);
    Vocabulary::from_tags(tags).unwrap()
}

pub fn random_model(rng: &mut ChaCha8Rng, l: usize, num_features: usize, bio: bool, scale: f64) -> CrfModel {
    let table = FeatureTable::from_names((0..num_features).map(|i| format!("f{i}")).collect()).unwrap();
    let mut m = CrfModel::new(vocab_of_size(l), Vec::new(), table, 0.0, bio);
    for w in m.weights_mut() {
        *w = rng.gen_range(-scale..scale);
    }
    m
}

pub fn random_obs(rng: &mut ChaCha8Rng, n: usize, num_features: usize) -> Observation {
    Observation {
        features: (0..n)
            .map(|_| {
                let k = rng.gen_range(0..=3.min(num_features));
                let mut f: Vec<u32> = (0..k).map(|_| rng.gen_range(0..num_features as u32)).collect();
                f.sort();
                f.dedup();
                f
            })
            .collect(),
        allowed: None,
    }
}

/// Score computed straight from the weight layout, independent of the
/// lattice code.
pub fn brute_score(m: &CrfModel, obs: &Observation, y: &[usize]) -> Option<f64> {
    let mut s = 0.0;
    for t in 0..y.len() {
        if let Some(a) = &obs.allowed {
            if !a[t].contains(&(y[t] as u16)) {
                return None;
            }
        }
        if t == 0 {
            if m.is_forbidden_start(y[0]) {
                return None;
            }
            s += m.weights()[m.start_index(y[0])];
        } else {
            if m.is_forbidden(y[t - 1], y[t]) {
                return None;
            }
            s += m.weights()[m.transition_index(y[t - 1], y[t])];
        }
        for &f in &obs.features[t] {
            s += m.weights()[m.emission_index(f, y[t])];
        }
    }
    Some(s)
}

pub fn all_sequences(n: usize, l: usize) -> Vec<Vec<usize>> {
    let total = l.pow(n as u32);
    (0..total)
        .map(|mut k| {
            let mut y = vec![0; n];
            for t in (0..n).rev() {
                y[t] = k % l;
                k /= l;
            }
            y
        })
        .collect()
}

/// Returns (log-sum-exp of legal scores, argmax with lowest-index tie-break
/// in lexicographic order).
pub fn brute_force(m: &CrfModel, obs: &Observation) -> (f64, Option<Vec<usize>>) {
    let scored: Vec<(f64, Vec<usize>)> = all_sequences(obs.len(), m.num_tags())
        .into_iter()
        .filter_map(|y| brute_score(m, obs, &y).map(|s| (s, y)))
        .collect();
    let max = scored.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return (max, None);
    }
    let lse = max + scored.iter().map(|p| (p.0 - max).exp()).sum::<f64>().ln();
    // Enumeration is lexicographic, so the first near-maximal sequence is
    // the tie-break winner.
    let tol = 1e-12 * max.abs().max(1.0);
    let best = scored.into_iter().find(|p| p.0 >= max - tol).map(|p| p.1);
    (lse, best)
}

/// Central finite differences of the batch objective, one coordinate at a
/// time, evaluated through the brute-force partition function.
pub fn finite_difference(m: &CrfModel, batch: &[(Observation, Vec<usize>)], h: f64) -> Vec<f64> {
    let objective = |m: &CrfModel| -> f64 {
        let mut loss = 0.0;
        for (obs, gold) in batch {
            let (lse, _) = brute_force(m, obs);
            loss += lse - brute_score(m, obs, gold).unwrap();
        }
        loss + 0.5 * m.l2_lambda * m.weights().iter().map(|w| w * w).sum::<f64>()
    };
    let mut out = Vec::with_capacity(m.weights().len());
    let mut probe = m.clone();
    for k in 0..m.weights().len() {
        let orig = probe.weights()[k];
        probe.weights_mut()[k] = orig + h;
        let up = objective(&probe);
        probe.weights_mut()[k] = orig - h;
        let down = objective(&probe);
        probe.weights_mut()[k] = orig;
        out.push((up - down) / (2.0 * h));
    }
    out
}

/// Draws a legal gold sequence from the brute-force enumeration.
pub fn random_legal_sequence(rng: &mut ChaCha8Rng, m: &CrfModel, obs: &Observation) -> Vec<usize> {
    let legal: Vec<_> = all_sequences(obs.len(), m.num_tags())
        .into_iter()
        .filter(|y| brute_score(m, obs, y).is_some())
        .collect();
    legal[rng.gen_range(0..legal.len())].clone()
}

/// Relative closeness; the denominator is floored at 1e-2 so coordinates
/// that are numerically zero compare on an absolute 1e-2·rel scale.
pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-2)
}
