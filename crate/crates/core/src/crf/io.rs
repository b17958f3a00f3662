//! `JIA-CRF v1` model files: a magic line followed by one JSON object.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::crf::features::{FeatureTable, Template};
use crate::crf::model::CrfModel;
use crate::error::CrfError;
use crate::schema::{Tag, Vocabulary};

pub const MODEL_MAGIC: &str = "JIA-CRF v1";

#[derive(Serialize, Deserialize)]
struct ModelFile {
    tags: Vec<Tag>,
    templates: Vec<String>,
    features: Vec<String>,
    l2_lambda: f64,
    forbidden: Vec<[usize; 2]>,
    forbidden_start: Vec<usize>,
    weights: Vec<f64>,
}

pub fn write_model<W: Write>(model: &CrfModel, mut w: W) -> Result<(), CrfError> {
    let l = model.num_tags();
    let (forbidden, forbidden_start) = model.forbidden_table();
    let file = ModelFile {
        tags: model.vocab().tags().to_vec(),
        templates: model.templates().iter().map(|t| t.to_string()).collect(),
        features: model.feature_table().names().to_vec(),
        l2_lambda: model.l2_lambda,
        forbidden: forbidden
            .iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(k, _)| [k / l, k % l])
            .collect(),
        forbidden_start: forbidden_start
            .iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(j, _)| j)
            .collect(),
        weights: model.weights().to_vec(),
    };
    writeln!(w, "{MODEL_MAGIC}")?;
    serde_json::to_writer(&mut w, &file).map_err(|e| CrfError::Format(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

pub fn read_model<R: BufRead>(mut r: R) -> Result<CrfModel, CrfError> {
    let mut magic = String::new();
    r.read_line(&mut magic)?;
    if magic.trim_end() != MODEL_MAGIC {
        return Err(CrfError::Format(format!("bad magic line {:?}", magic.trim_end())));
    }
    let file: ModelFile = serde_json::from_reader(r).map_err(|e| CrfError::Format(e.to_string()))?;
    let vocab = Vocabulary::from_tags(file.tags)?;
    let l = vocab.len();
    let templates = file
        .templates
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<Template>, _>>()?;
    let features = FeatureTable::from_names(file.features)?;
    let mut forbidden = vec![false; l * l];
    for [i, j] in file.forbidden {
        if i >= l || j >= l {
            return Err(CrfError::Format(format!("forbidden pair ({i},{j}) out of range")));
        }
        forbidden[i * l + j] = true;
    }
    let mut forbidden_start = vec![false; l];
    for j in file.forbidden_start {
        if j >= l {
            return Err(CrfError::Format(format!("forbidden start {j} out of range")));
        }
        forbidden_start[j] = true;
    }
    CrfModel::from_parts(
        vocab,
        templates,
        features,
        file.weights,
        forbidden,
        forbidden_start,
        file.l2_lambda,
    )
}

pub fn model_to_bytes(model: &CrfModel) -> Vec<u8> {
    let mut buf = Vec::new();
    write_model(model, &mut buf).expect("writing to memory cannot fail");
    buf
}
