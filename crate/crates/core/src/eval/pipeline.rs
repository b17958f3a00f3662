//! Training both rounds and scoring extraction, alignment and conflict
//! detection against gold annotations.

use std::collections::{BTreeMap, BTreeSet};

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::align::{coreference, AlignConfig};
use crate::conflict::mismatches;
use crate::corpus::{Document, Party};
use crate::crf::{CrfModel, TrainConfig};
use crate::error::EvalError;
use crate::eval::folds::stratified_folds;
use crate::eval::metrics::{chunk_prf, label_prf, pair_metrics, LabelPrf, PairClass, PairConfusion, PairMetrics, Prf};
use crate::extract::{
    gold_mentions, gold_round_one, gold_round_two, labelable, train_round_one, train_round_two, EventMention,
    EventSkeleton, Extractor, FeatureConfig, MentionKey, RoundOne, RoundTwo,
};
use crate::lexicon::Lexicons;
use crate::schema::{chunks, paint, EventType, Label, Span, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SecondRound {
    Crf,
    Rules,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub train: TrainConfig,
    pub features: FeatureConfig,
    pub second_round: SecondRound,
    pub align: AlignConfig,
    pub folds: usize,
    pub fold_seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            train: TrainConfig::default(),
            features: FeatureConfig::default(),
            second_round: SecondRound::Crf,
            align: AlignConfig::default(),
            folds: 10,
            fold_seed: 7,
        }
    }
}

pub struct Models {
    pub round_one: CrfModel,
    /// Absent when the second round uses the assignment rules.
    pub round_two: Option<CrfModel>,
}

impl Models {
    pub fn extractor<'a>(&'a self, lexicons: &'a Lexicons) -> Result<Extractor<'a>, EvalError> {
        let r2 = match &self.round_two {
            Some(m) => RoundTwo::Crf(m),
            None => RoundTwo::Rules,
        };
        Ok(Extractor::new(lexicons, RoundOne::Crf(&self.round_one), r2)?)
    }
}

pub fn train_models(docs: &[Document], lexicons: &Lexicons, cfg: &EvalConfig) -> Result<Models, EvalError> {
    info!("training round one on {} documents", docs.len());
    let round_one = train_round_one(docs, lexicons, &cfg.features, &cfg.train)?.model;
    let round_two = match cfg.second_round {
        SecondRound::Crf => {
            info!("training round two");
            Some(train_round_two(docs, lexicons, &cfg.features, &cfg.train)?.model)
        }
        SecondRound::Rules => None,
    };
    Ok(Models { round_one, round_two })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub documents: usize,
    pub sentences: usize,
    /// Token-level first-round labels of the raw model decode.
    pub round_one: LabelPrf,
    /// Token-level final labels of the second round, given gold first-round
    /// chunks.
    pub round_two: LabelPrf,
    /// Trigger and argument chunks of the extracted mentions.
    pub events: Prf,
    pub triggers: Prf,
    pub arguments: Prf,
    pub confusion: PairConfusion,
    pub pairs: PairMetrics,
    pub conflict_f1: f64,
    pub failed_sentences: usize,
}

/// A chunk identity: document, sentence, span and label.
type ChunkId = (String, usize, Span, String);

fn mention_chunks(mentions: &[EventMention]) -> (Vec<ChunkId>, Vec<ChunkId>) {
    let mut triggers = Vec::new();
    let mut args = Vec::new();
    for m in mentions {
        let id = |span: Span, label: Label| (m.doc_id.clone(), m.sentence, span, label.to_string());
        triggers.push(id(m.trigger.span, Label::Trigger(m.event_type)));
        for (r, list) in &m.roles {
            args.extend(list.iter().map(|a| id(a.span, Label::Role(*r))));
        }
    }
    (triggers, args)
}

/// Mentions sharing a trigger are told apart by their rank among
/// mentions with the same key, ordered by their arguments.
fn indexed(mentions: &[EventMention]) -> BTreeMap<(MentionKey, usize), &EventMention> {
    let mut sorted: Vec<&EventMention> = mentions.iter().collect();
    sorted.sort_by(|a, b| (a.key(), &a.roles).cmp(&(b.key(), &b.roles)));
    let mut out = BTreeMap::new();
    let mut rank = 0;
    for (i, m) in sorted.iter().enumerate() {
        rank = if i > 0 && sorted[i - 1].key() == m.key() {
            rank + 1
        } else {
            0
        };
        out.insert((m.key(), rank), *m);
    }
    out
}

type MentionId = (MentionKey, usize);
type PartyMentions<'a> = Vec<(&'a MentionId, &'a EventMention)>;

fn pair_classes(
    mentions: &[EventMention],
    lexicons: &Lexicons,
    cfg: &AlignConfig,
) -> BTreeMap<(MentionId, MentionId), PairClass> {
    let ids = indexed(mentions);
    let mut groups: BTreeMap<(&str, EventType), (PartyMentions, PartyMentions)> = BTreeMap::new();
    for (id, m) in &ids {
        let g = groups.entry((m.case_id.as_str(), m.event_type)).or_default();
        match m.party {
            Party::Plaintiff => g.0.push((id, m)),
            Party::Defendant => g.1.push((id, m)),
        }
    }
    let mut out = BTreeMap::new();
    for (plaintiff, defendant) in groups.values() {
        for (pid, p) in plaintiff {
            for (did, d) in defendant {
                let class = match coreference(p, d, &lexicons.aux, cfg) {
                    None => PairClass::Non,
                    Some(_) if mismatches(p, d, lexicons, cfg).is_empty() => PairClass::Entailment,
                    Some(_) => PairClass::Contradictory,
                };
                out.insert(((*pid).clone(), (*did).clone()), class);
            }
        }
    }
    out
}

/// Confusion over every same-case, same-type cross-party pair of gold or
/// predicted mentions; a pair missing on one side counts as Non there.
pub fn pair_confusion(
    gold: &[EventMention],
    predicted: &[EventMention],
    lexicons: &Lexicons,
    cfg: &AlignConfig,
) -> PairConfusion {
    let g = pair_classes(gold, lexicons, cfg);
    let p = pair_classes(predicted, lexicons, cfg);
    let keys: BTreeSet<_> = g.keys().chain(p.keys()).collect();
    let mut conf = PairConfusion::default();
    for k in keys {
        conf.add(
            g.get(k).copied().unwrap_or(PairClass::Non),
            p.get(k).copied().unwrap_or(PairClass::Non),
        );
    }
    conf
}

fn frame_tags(len: usize, frame: &EventSkeleton) -> Vec<Tag> {
    let mut tags = vec![Tag::O; len];
    for (r, spans) in &frame.roles {
        for s in spans {
            paint(&mut tags, *s, Label::Role(*r));
        }
    }
    paint(&mut tags, frame.trigger, Label::Trigger(frame.event_type));
    tags
}

/// Scores an extractor on annotated documents.
pub fn evaluate_pipeline(
    docs: &[Document],
    extractor: &Extractor,
    lexicons: &Lexicons,
    cfg: &AlignConfig,
) -> Result<EvaluationReport, EvalError> {
    let sentences: Vec<_> = labelable(docs, lexicons).collect();
    // Round one on raw decodes; round two on gold first-round chunks.
    let per_sentence = sentences
        .par_iter()
        .map(|s| {
            let r1 = extractor.first_round(s)?;
            let gold_r1 = gold_round_one(s);
            let adjusted = extractor.adjust(
                &crate::extract::RoundOneResult {
                    tags: gold_r1.clone(),
                    candidates: r1.candidates.clone(),
                },
                s,
            );
            let frames = extractor.second_round(s, &adjusted.tags)?;
            let mut r2_gold = Vec::new();
            let mut r2_pred = Vec::new();
            for c in chunks(&adjusted.tags) {
                let Label::Trigger(event) = c.label else { continue };
                r2_gold.push(gold_round_two(s, &adjusted.tags, c.span, event));
                r2_pred.push(
                    frames
                        .iter()
                        .find(|f| f.trigger == c.span && f.event_type == event)
                        .map_or_else(|| vec![Tag::O; s.len()], |f| frame_tags(s.len(), f)),
                );
            }
            Ok((gold_r1, r1.tags, r2_gold, r2_pred))
        })
        .collect::<Result<Vec<_>, crate::error::CrfError>>()?;
    let mut r1_gold = Vec::new();
    let mut r1_pred = Vec::new();
    let mut r2_gold = Vec::new();
    let mut r2_pred = Vec::new();
    for (g1, p1, g2, p2) in per_sentence {
        r1_gold.push(g1);
        r1_pred.push(p1);
        r2_gold.extend(g2);
        r2_pred.extend(p2);
    }

    let extracted = extractor.extract_corpus(docs);
    let failed_sentences = extracted.iter().map(|e| e.failures.len()).sum();
    let predicted: Vec<EventMention> = extracted.into_iter().flat_map(|e| e.mentions).collect();
    let gold: Vec<EventMention> = docs.iter().flat_map(gold_mentions).collect();

    let (gt, ga) = mention_chunks(&gold);
    let (pt, pa) = mention_chunks(&predicted);
    let all_gold: Vec<ChunkId> = gt.iter().chain(&ga).cloned().collect();
    let all_pred: Vec<ChunkId> = pt.iter().chain(&pa).cloned().collect();
    let confusion = pair_confusion(&gold, &predicted, lexicons, cfg);
    let pairs = pair_metrics(&confusion);
    Ok(EvaluationReport {
        documents: docs.len(),
        sentences: sentences.len(),
        round_one: label_prf(&r1_gold, &r1_pred),
        round_two: label_prf(&r2_gold, &r2_pred),
        events: chunk_prf(&all_gold, &all_pred),
        triggers: chunk_prf(&gt, &pt),
        arguments: chunk_prf(&ga, &pa),
        confusion,
        conflict_f1: pairs.conflict_f1(),
        pairs,
        failed_sentences,
    })
}

/// Trains on `train` and scores on `test`.
pub fn train_and_evaluate(
    train: &[Document],
    test: &[Document],
    lexicons: &Lexicons,
    cfg: &EvalConfig,
) -> Result<EvaluationReport, EvalError> {
    let models = train_models(train, lexicons, cfg)?;
    evaluate_pipeline(test, &models.extractor(lexicons)?, lexicons, &cfg.align)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub folds: Vec<EvaluationReport>,
    /// Confusion summed over folds, and the pair metrics derived from it.
    pub confusion: PairConfusion,
    pub pairs: PairMetrics,
    /// Unweighted fold means.
    pub mean_events_f1: f64,
    pub mean_round_one_macro_f1: f64,
    pub mean_conflict_f1: f64,
}

/// Stratified k-fold cross-validation; `only` restricts the run to the
/// listed fold indices.
pub fn cross_validate(
    docs: &[Document],
    lexicons: &Lexicons,
    cfg: &EvalConfig,
    only: Option<&[usize]>,
) -> Result<CrossValidation, EvalError> {
    let folds = stratified_folds(docs, cfg.folds, cfg.fold_seed)?;
    let mut reports = Vec::new();
    for fold in folds.iter().filter(|f| only.is_none_or(|o| o.contains(&f.index))) {
        info!(
            "fold {}: {} train cases, {} test cases",
            fold.index,
            fold.train.len(),
            fold.test.len()
        );
        let (train, test) = fold.split(docs);
        reports.push(train_and_evaluate(&train, &test, lexicons, cfg)?);
    }
    let mut confusion = PairConfusion::default();
    for r in &reports {
        for (i, row) in r.confusion.counts.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                confusion.counts[i][j] += v;
            }
        }
    }
    let n = reports.len().max(1) as f64;
    let mean = |f: fn(&EvaluationReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    Ok(CrossValidation {
        mean_events_f1: mean(|r| r.events.f1),
        mean_round_one_macro_f1: mean(|r| r.round_one.macro_avg.f1),
        mean_conflict_f1: mean(|r| r.conflict_f1),
        pairs: pair_metrics(&confusion),
        confusion,
        folds: reports,
    })
}
