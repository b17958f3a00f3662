use log::{debug, info};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crf::model::{CrfModel, Lattice};
use crate::crf::Observation;
use crate::error::CrfError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub l2_lambda: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 15,
            batch_size: 64,
            learning_rate: 0.1,
            l2_lambda: 1e-4,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: CrfModel,
    /// Per epoch: summed batch losses at pre-update weights plus the L2 term
    /// at the start of the epoch.
    pub epoch_losses: Vec<f64>,
}

/// Mini-batch SGD on the mean negative log-likelihood with L2 penalty.
///
/// Forward-backward runs in parallel per sentence; gradients are reduced in
/// batch order so the result does not depend on the thread count.
pub fn train(
    mut model: CrfModel,
    data: &[(Observation, Vec<usize>)],
    config: &TrainConfig,
) -> Result<TrainOutcome, CrfError> {
    if data.is_empty() {
        return Err(CrfError::EmptyTrainingSet);
    }
    for (obs, gold) in data {
        model.check_gold(obs, gold)?;
    }
    model.l2_lambda = config.l2_lambda;
    let n = data.len() as f64;
    let batch_size = config.batch_size.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut grad = vec![0.0; model.weights().len()];
    let mut epoch_losses = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let l2_term = 0.5 * config.l2_lambda * model.weights().iter().map(|w| w * w).sum::<f64>();
        let mut epoch_loss = 0.0;
        for (bi, batch) in order.chunks(batch_size).enumerate() {
            let lattices: Vec<Result<Lattice, CrfError>> =
                batch.par_iter().map(|&i| model.lattice(&data[i].0)).collect();
            grad.iter_mut().for_each(|g| *g = 0.0);
            let mut batch_loss = 0.0;
            for (&i, lat) in batch.iter().zip(lattices) {
                let (obs, gold) = &data[i];
                let lat = lat?;
                batch_loss += lat.log_z - model.score(obs, gold);
                model.accumulate_lattice(obs, gold, &lat, &mut grad);
            }
            if !batch_loss.is_finite() {
                return Err(CrfError::NonFiniteLoss { epoch, batch: bi });
            }
            epoch_loss += batch_loss;
            let scale = config.learning_rate / batch.len() as f64;
            let decay = config.learning_rate * config.l2_lambda / n;
            for (w, g) in model.weights_mut().iter_mut().zip(&grad) {
                *w -= scale * g + decay * *w;
            }
            if model.weights().iter().any(|w| !w.is_finite()) {
                return Err(CrfError::NonFiniteLoss { epoch, batch: bi });
            }
        }
        let total = epoch_loss + l2_term;
        if !total.is_finite() {
            return Err(CrfError::NonFiniteLoss { epoch, batch: 0 });
        }
        debug!("epoch {epoch}: loss {total:.6}");
        epoch_losses.push(total);
    }
    if let Some(last) = epoch_losses.last() {
        info!(
            "trained {} epochs over {} sequences, final loss {last:.4}",
            config.epochs,
            data.len()
        );
    }
    Ok(TrainOutcome { model, epoch_losses })
}
