//! Declarative feature templates and the string-keyed feature table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::CrfError;

/// Relative positions are clipped to this range before bucketing.
pub const POSITION_CLIP: i32 = 16;

/// Everything a template may look at for one sentence. Templates never see
/// labels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservationInput {
    pub words: Vec<String>,
    pub pos: Vec<String>,
    /// Per-token categorical channels, e.g. the candidate-trigger flag.
    pub channels: BTreeMap<String, Vec<String>>,
    /// Offset of each token from a concerned span (negative before it).
    pub relative_position: Option<Vec<i32>>,
}

impl ObservationInput {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn with_channel(mut self, name: &str, values: Vec<String>) -> Self {
        debug_assert_eq!(values.len(), self.words.len());
        self.channels.insert(name.to_string(), values);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Template {
    Bias,
    Word(i32),
    Pos(i32),
    Shape(i32),
    /// `w[o] | w[o+1]`
    WordBigram(i32),
    Channel(String, i32),
    RelativePosition,
    Conj(Vec<Template>),
}

fn shape(word: &str) -> String {
    word.chars()
        .take(12)
        .map(|c| {
            if c.is_ascii_digit() {
                'd'
            } else if c.is_alphabetic() {
                if c.is_uppercase() {
                    'X'
                } else {
                    'x'
                }
            } else {
                c
            }
        })
        .collect()
}

fn at(values: &[String], i: usize, off: i32) -> &str {
    let j = i as i64 + off as i64;
    if j < 0 {
        "<s>"
    } else if j as usize >= values.len() {
        "</s>"
    } else {
        &values[j as usize]
    }
}

impl Template {
    fn value(&self, input: &ObservationInput, i: usize) -> Option<String> {
        Some(match self {
            Template::Bias => String::new(),
            Template::Word(o) => at(&input.words, i, *o).to_string(),
            Template::Pos(o) => at(&input.pos, i, *o).to_string(),
            Template::Shape(o) => shape(at(&input.words, i, *o)),
            Template::WordBigram(o) => format!("{}|{}", at(&input.words, i, *o), at(&input.words, i, o + 1)),
            Template::Channel(name, o) => at(input.channels.get(name)?, i, *o).to_string(),
            Template::RelativePosition => {
                let rel = input.relative_position.as_ref()?[i];
                rel.clamp(-POSITION_CLIP, POSITION_CLIP).to_string()
            }
            Template::Conj(parts) => {
                let mut vals = Vec::with_capacity(parts.len());
                for p in parts {
                    vals.push(p.value(input, i)?);
                }
                vals.join("|")
            }
        })
    }

    /// Feature string for position `i`, or `None` when an input channel the
    /// template needs is absent.
    pub fn feature(&self, input: &ObservationInput, i: usize) -> Option<String> {
        let v = self.value(input, i)?;
        Some(match self {
            Template::Bias => "bias".to_string(),
            _ => format!("{self}={v}"),
        })
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Template::Bias => f.write_str("bias"),
            Template::Word(o) => write!(f, "w[{o}]"),
            Template::Pos(o) => write!(f, "pos[{o}]"),
            Template::Shape(o) => write!(f, "shape[{o}]"),
            Template::WordBigram(o) => write!(f, "bigram[{o}]"),
            Template::Channel(n, o) => write!(f, "ch:{n}[{o}]"),
            Template::RelativePosition => f.write_str("relpos"),
            Template::Conj(parts) => {
                let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                f.write_str(&names.join("&"))
            }
        }
    }
}

impl FromStr for Template {
    type Err = CrfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CrfError::Format(format!("unknown template `{s}`"));
        if s.contains('&') {
            return s
                .split('&')
                .map(str::parse)
                .collect::<Result<Vec<_>, _>>()
                .map(Template::Conj);
        }
        match s {
            "bias" => return Ok(Template::Bias),
            "relpos" => return Ok(Template::RelativePosition),
            _ => {}
        }
        let (head, rest) = s.split_once('[').ok_or_else(bad)?;
        let off: i32 = rest.strip_suffix(']').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        match head {
            "w" => Ok(Template::Word(off)),
            "pos" => Ok(Template::Pos(off)),
            "shape" => Ok(Template::Shape(off)),
            "bigram" => Ok(Template::WordBigram(off)),
            h => h
                .strip_prefix("ch:")
                .map(|n| Template::Channel(n.to_string(), off))
                .ok_or_else(bad),
        }
    }
}

/// Applies every template at every position.
pub fn extract_strings(templates: &[Template], input: &ObservationInput) -> Vec<Vec<String>> {
    (0..input.len())
        .map(|i| templates.iter().filter_map(|t| t.feature(input, i)).collect())
        .collect()
}

/// Stable interning table: ids follow first-insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureTable {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl FeatureTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names(names: Vec<String>) -> Result<Self, CrfError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i as u32).is_some() {
                return Err(CrfError::Format(format!("duplicate feature `{n}`")));
            }
        }
        Ok(Self { names, index })
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
