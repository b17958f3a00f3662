use crate::crf::features::{extract_strings, FeatureTable, ObservationInput, Template};
use crate::error::CrfError;
use crate::schema::{Tag, Vocabulary};

/// Feature ids per position plus an optional per-position whitelist of tag
/// indices (sorted ascending). Positions without a whitelist allow every tag.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Observation {
    pub features: Vec<Vec<u32>>,
    pub allowed: Option<Vec<Vec<u16>>>,
}

impl Observation {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Linear-chain CRF over a fixed tag set.
///
/// Weights live in one flat vector: emissions `(feature, tag)` first, then
/// transitions `(prev, next)`, then start weights per tag.
#[derive(Debug, Clone, PartialEq)]
pub struct CrfModel {
    vocab: Vocabulary,
    templates: Vec<Template>,
    features: FeatureTable,
    weights: Vec<f64>,
    forbidden: Vec<bool>,
    forbidden_start: Vec<bool>,
    pub l2_lambda: f64,
}

/// Relative slack under which two path scores count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

pub(crate) fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let vals: Vec<f64> = values.collect();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + vals.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Forward-backward tables for one sequence.
pub struct Lattice {
    pub n: usize,
    pub num_tags: usize,
    pub log_z: f64,
    /// Posterior `p(y_t = j)`, row-major `n × L`.
    pub marginals: Vec<f64>,
    /// Expected transition counts summed over positions, `L × L`.
    pub pair_expectations: Vec<f64>,
}

impl CrfModel {
    /// All-zero model. `forbidden` and `forbidden_start` default to the BIO
    /// legality of `vocab` when `bio_constraints` is set.
    pub fn new(
        vocab: Vocabulary,
        templates: Vec<Template>,
        features: FeatureTable,
        l2_lambda: f64,
        bio_constraints: bool,
    ) -> Self {
        let l = vocab.len();
        let mut forbidden = vec![false; l * l];
        let mut forbidden_start = vec![false; l];
        if bio_constraints {
            for (j, tj) in vocab.tags().iter().enumerate() {
                forbidden_start[j] = !tj.may_follow(None);
                for (i, ti) in vocab.tags().iter().enumerate() {
                    forbidden[i * l + j] = !tj.may_follow(Some(*ti));
                }
            }
        }
        let weights = vec![0.0; features.len() * l + l * l + l];
        Self {
            vocab,
            templates,
            features,
            weights,
            forbidden,
            forbidden_start,
            l2_lambda,
        }
    }

    pub(crate) fn from_parts(
        vocab: Vocabulary,
        templates: Vec<Template>,
        features: FeatureTable,
        weights: Vec<f64>,
        forbidden: Vec<bool>,
        forbidden_start: Vec<bool>,
        l2_lambda: f64,
    ) -> Result<Self, CrfError> {
        let l = vocab.len();
        if weights.len() != features.len() * l + l * l + l {
            return Err(CrfError::Format(format!(
                "expected {} weights, found {}",
                features.len() * l + l * l + l,
                weights.len()
            )));
        }
        if forbidden.len() != l * l || forbidden_start.len() != l {
            return Err(CrfError::Format("constraint table has the wrong size".into()));
        }
        Ok(Self {
            vocab,
            templates,
            features,
            weights,
            forbidden,
            forbidden_start,
            l2_lambda,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn num_tags(&self) -> usize {
        self.vocab.len()
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn feature_table(&self) -> &FeatureTable {
        &self.features
    }

    pub fn num_features(&self) -> usize {
        self.features.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn emission_index(&self, feature: u32, tag: usize) -> usize {
        feature as usize * self.num_tags() + tag
    }

    pub fn transition_index(&self, prev: usize, next: usize) -> usize {
        let l = self.num_tags();
        self.features.len() * l + prev * l + next
    }

    pub fn start_index(&self, tag: usize) -> usize {
        let l = self.num_tags();
        self.features.len() * l + l * l + tag
    }

    pub fn is_forbidden(&self, prev: usize, next: usize) -> bool {
        self.forbidden[prev * self.num_tags() + next]
    }

    pub fn is_forbidden_start(&self, tag: usize) -> bool {
        self.forbidden_start[tag]
    }

    pub fn set_forbidden(&mut self, prev: usize, next: usize, value: bool) {
        let l = self.num_tags();
        self.forbidden[prev * l + next] = value;
    }

    pub fn set_forbidden_start(&mut self, tag: usize, value: bool) {
        self.forbidden_start[tag] = value;
    }

    pub(crate) fn forbidden_table(&self) -> (&[bool], &[bool]) {
        (&self.forbidden, &self.forbidden_start)
    }

    /// Maps template strings to feature ids, dropping features the model has
    /// never seen.
    pub fn observe(&self, input: &ObservationInput) -> Observation {
        let features = extract_strings(&self.templates, input)
            .into_iter()
            .map(|fs| fs.iter().filter_map(|f| self.features.get(f)).collect())
            .collect();
        Observation {
            features,
            allowed: None,
        }
    }

    fn allowed_at(&self, obs: &Observation, t: usize) -> Vec<usize> {
        let all: Vec<usize> = match &obs.allowed {
            Some(a) => a[t]
                .iter()
                .map(|&j| j as usize)
                .filter(|&j| j < self.num_tags())
                .collect(),
            None => (0..self.num_tags()).collect(),
        };
        if t == 0 {
            all.into_iter().filter(|&j| !self.forbidden_start[j]).collect()
        } else {
            all
        }
    }

    fn emissions(&self, obs: &Observation, allowed: &[Vec<usize>]) -> Vec<f64> {
        let l = self.num_tags();
        let mut emit = vec![f64::NEG_INFINITY; obs.len() * l];
        for (t, feats) in obs.features.iter().enumerate() {
            for &j in &allowed[t] {
                let mut s = 0.0;
                for &f in feats {
                    s += self.weights[f as usize * l + j];
                }
                emit[t * l + j] = s;
            }
        }
        emit
    }

    fn transition(&self, i: usize, j: usize) -> f64 {
        self.weights[self.transition_index(i, j)]
    }

    /// Unnormalized log score of a tag sequence; `-inf` when illegal.
    pub fn score(&self, obs: &Observation, tags: &[usize]) -> f64 {
        if tags.len() != obs.len() || tags.is_empty() {
            return f64::NEG_INFINITY;
        }
        let l = self.num_tags();
        let mut s = 0.0;
        for (t, &y) in tags.iter().enumerate() {
            if y >= l || !self.allowed_at(obs, t).contains(&y) {
                return f64::NEG_INFINITY;
            }
            if t == 0 {
                s += self.weights[self.start_index(y)];
            } else {
                let p = tags[t - 1];
                if self.is_forbidden(p, y) {
                    return f64::NEG_INFINITY;
                }
                s += self.transition(p, y);
            }
            for &f in &obs.features[t] {
                s += self.weights[f as usize * l + y];
            }
        }
        s
    }

    fn forward(&self, emit: &[f64], allowed: &[Vec<usize>]) -> Vec<f64> {
        let l = self.num_tags();
        let n = allowed.len();
        let mut alpha = vec![f64::NEG_INFINITY; n * l];
        for &j in &allowed[0] {
            alpha[j] = self.weights[self.start_index(j)] + emit[j];
        }
        let mut buf = Vec::with_capacity(l);
        for t in 1..n {
            for &j in &allowed[t] {
                buf.clear();
                for &i in &allowed[t - 1] {
                    let a = alpha[(t - 1) * l + i];
                    if a > f64::NEG_INFINITY && !self.forbidden[i * l + j] {
                        buf.push(a + self.transition(i, j));
                    }
                }
                alpha[t * l + j] = log_sum_exp(buf.iter().copied()) + emit[t * l + j];
            }
        }
        alpha
    }

    fn backward(&self, emit: &[f64], allowed: &[Vec<usize>]) -> Vec<f64> {
        let l = self.num_tags();
        let n = allowed.len();
        let mut beta = vec![f64::NEG_INFINITY; n * l];
        for &j in &allowed[n - 1] {
            beta[(n - 1) * l + j] = 0.0;
        }
        let mut buf = Vec::with_capacity(l);
        for t in (0..n - 1).rev() {
            for &i in &allowed[t] {
                buf.clear();
                for &j in &allowed[t + 1] {
                    let b = beta[(t + 1) * l + j];
                    if b > f64::NEG_INFINITY && !self.forbidden[i * l + j] {
                        buf.push(self.transition(i, j) + emit[(t + 1) * l + j] + b);
                    }
                }
                beta[t * l + i] = log_sum_exp(buf.iter().copied());
            }
        }
        beta
    }

    fn prepare(&self, obs: &Observation) -> Result<(Vec<Vec<usize>>, Vec<f64>), CrfError> {
        if obs.is_empty() {
            return Err(CrfError::EmptySequence);
        }
        if let Some(a) = &obs.allowed {
            if a.len() != obs.len() {
                return Err(CrfError::LengthMismatch {
                    gold: a.len(),
                    obs: obs.len(),
                });
            }
        }
        let allowed: Vec<Vec<usize>> = (0..obs.len()).map(|t| self.allowed_at(obs, t)).collect();
        let emit = self.emissions(obs, &allowed);
        Ok((allowed, emit))
    }

    /// `log Σ exp(score)` over every legal tag sequence.
    pub fn log_partition(&self, obs: &Observation) -> Result<f64, CrfError> {
        let (allowed, emit) = self.prepare(obs)?;
        let alpha = self.forward(&emit, &allowed);
        let l = self.num_tags();
        let n = obs.len();
        let z = log_sum_exp(alpha[(n - 1) * l..n * l].iter().copied());
        if z == f64::NEG_INFINITY {
            return Err(CrfError::Degenerate);
        }
        Ok(z)
    }

    /// Posterior marginals and expected transition counts.
    pub fn lattice(&self, obs: &Observation) -> Result<Lattice, CrfError> {
        let (allowed, emit) = self.prepare(obs)?;
        let l = self.num_tags();
        let n = obs.len();
        let alpha = self.forward(&emit, &allowed);
        let beta = self.backward(&emit, &allowed);
        let log_z = log_sum_exp(alpha[(n - 1) * l..n * l].iter().copied());
        if log_z == f64::NEG_INFINITY {
            return Err(CrfError::Degenerate);
        }
        let mut marginals = vec![0.0; n * l];
        for t in 0..n {
            for &j in &allowed[t] {
                let v = alpha[t * l + j] + beta[t * l + j] - log_z;
                if v > f64::NEG_INFINITY {
                    marginals[t * l + j] = v.exp();
                }
            }
        }
        let mut pair_expectations = vec![0.0; l * l];
        for t in 0..n.saturating_sub(1) {
            for &i in &allowed[t] {
                let a = alpha[t * l + i];
                if a == f64::NEG_INFINITY {
                    continue;
                }
                for &j in &allowed[t + 1] {
                    if self.forbidden[i * l + j] {
                        continue;
                    }
                    let v = a + self.transition(i, j) + emit[(t + 1) * l + j] + beta[(t + 1) * l + j] - log_z;
                    if v > f64::NEG_INFINITY {
                        pair_expectations[i * l + j] += v.exp();
                    }
                }
            }
        }
        Ok(Lattice {
            n,
            num_tags: l,
            log_z,
            marginals,
            pair_expectations,
        })
    }

    /// Best legal tag sequence. Among paths tied within [`TIE_TOLERANCE`]
    /// the lexicographically smallest wins: lowest tag index, earliest
    /// position first.
    pub fn viterbi(&self, obs: &Observation) -> Result<Vec<usize>, CrfError> {
        let (allowed, emit) = self.prepare(obs)?;
        let l = self.num_tags();
        let n = obs.len();
        // suffix[t*l+j]: best score of positions t.. given tag j at t.
        let mut suffix = vec![f64::NEG_INFINITY; n * l];
        for &j in &allowed[n - 1] {
            suffix[(n - 1) * l + j] = emit[(n - 1) * l + j];
        }
        for t in (0..n - 1).rev() {
            for &i in &allowed[t] {
                let mut best = f64::NEG_INFINITY;
                for &j in &allowed[t + 1] {
                    let s = suffix[(t + 1) * l + j];
                    if s == f64::NEG_INFINITY || self.forbidden[i * l + j] {
                        continue;
                    }
                    best = best.max(self.transition(i, j) + s);
                }
                if best > f64::NEG_INFINITY {
                    suffix[t * l + i] = best + emit[t * l + i];
                }
            }
        }
        let pick = |cands: &mut dyn Iterator<Item = (usize, f64)>| -> Option<usize> {
            let cands: Vec<(usize, f64)> = cands.filter(|(_, v)| *v > f64::NEG_INFINITY).collect();
            let max = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
            let tol = TIE_TOLERANCE * max.abs().max(1.0);
            cands.iter().filter(|c| c.1 >= max - tol).map(|c| c.0).min()
        };
        let first = pick(&mut allowed[0].iter().map(|&j| {
            let v = if self.forbidden_start[j] {
                f64::NEG_INFINITY
            } else {
                self.weights[self.start_index(j)] + suffix[j]
            };
            (j, v)
        }))
        .ok_or(CrfError::Degenerate)?;
        let mut path = Vec::with_capacity(n);
        path.push(first);
        for t in 1..n {
            let i = path[t - 1];
            let next = pick(&mut allowed[t].iter().map(|&j| {
                let v = if self.forbidden[i * l + j] {
                    f64::NEG_INFINITY
                } else {
                    self.transition(i, j) + suffix[t * l + j]
                };
                (j, v)
            }))
            .ok_or(CrfError::Degenerate)?;
            path.push(next);
        }
        Ok(path)
    }

    pub fn decode_tags(&self, obs: &Observation) -> Result<Vec<Tag>, CrfError> {
        Ok(self.viterbi(obs)?.into_iter().map(|i| self.vocab.tag(i)).collect())
    }

    pub(crate) fn check_gold(&self, obs: &Observation, gold: &[usize]) -> Result<(), CrfError> {
        if gold.len() != obs.len() {
            return Err(CrfError::LengthMismatch {
                gold: gold.len(),
                obs: obs.len(),
            });
        }
        for (t, &y) in gold.iter().enumerate() {
            if y >= self.num_tags() {
                return Err(CrfError::GoldOutOfRange(y));
            }
            let legal_start = t > 0 || !self.forbidden_start[y];
            let legal_step = t == 0 || !self.is_forbidden(gold[t - 1], y);
            let whitelisted = obs.allowed.as_ref().is_none_or(|a| a[t].contains(&(y as u16)));
            if !(legal_start && legal_step && whitelisted) {
                return Err(CrfError::GoldForbidden(t));
            }
        }
        Ok(())
    }

    /// Adds `∂(-log p(gold|obs))/∂w` into `grad` and returns the loss term.
    pub(crate) fn accumulate(&self, obs: &Observation, gold: &[usize], grad: &mut [f64]) -> Result<f64, CrfError> {
        self.check_gold(obs, gold)?;
        let lat = self.lattice(obs)?;
        self.accumulate_lattice(obs, gold, &lat, grad);
        Ok(lat.log_z - self.score(obs, gold))
    }

    pub(crate) fn accumulate_lattice(&self, obs: &Observation, gold: &[usize], lat: &Lattice, grad: &mut [f64]) {
        let l = self.num_tags();
        for (t, feats) in obs.features.iter().enumerate() {
            let row = &lat.marginals[t * l..(t + 1) * l];
            for &f in feats {
                let base = f as usize * l;
                for (j, &p) in row.iter().enumerate() {
                    if p != 0.0 {
                        grad[base + j] += p;
                    }
                }
                grad[base + gold[t]] -= 1.0;
            }
        }
        let tbase = self.transition_index(0, 0);
        for (k, &e) in lat.pair_expectations.iter().enumerate() {
            if e != 0.0 {
                grad[tbase + k] += e;
            }
        }
        for t in 1..gold.len() {
            grad[tbase + gold[t - 1] * l + gold[t]] -= 1.0;
        }
        let sbase = self.start_index(0);
        for j in 0..l {
            grad[sbase + j] += lat.marginals[j];
        }
        grad[sbase + gold[0]] -= 1.0;
    }

    /// Negative log-likelihood of the batch plus `l2_lambda·‖w‖²/2`, and its
    /// gradient.
    pub fn nll_and_gradient(&self, batch: &[(Observation, Vec<usize>)]) -> Result<(f64, Vec<f64>), CrfError> {
        let mut grad = vec![0.0; self.weights.len()];
        let mut loss = 0.0;
        for (obs, gold) in batch {
            loss += self.accumulate(obs, gold, &mut grad)?;
        }
        if self.l2_lambda > 0.0 {
            let mut sq = 0.0;
            for (g, w) in grad.iter_mut().zip(&self.weights) {
                *g += self.l2_lambda * w;
                sq += w * w;
            }
            loss += 0.5 * self.l2_lambda * sq;
        }
        Ok((loss, grad))
    }
}
