//! Documents, sentences and tokens, the line-delimited corpus format, and a
//! rule-based sentence splitter/tokenizer.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::schema::{bio_violations, EventType, Role, Span, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    #[serde(alias = "Plaintiff")]
    Plaintiff,
    #[serde(alias = "Defendant")]
    Defendant,
}

impl Party {
    pub fn opposite(self) -> Party {
        match self {
            Party::Plaintiff => Party::Defendant,
            Party::Defendant => Party::Plaintiff,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Party::Plaintiff => "plaintiff",
            Party::Defendant => "defendant",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    #[serde(rename = "t")]
    pub text: String,
    #[serde(default = "unk")]
    pub pos: String,
}

fn unk() -> String {
    "UNK".to_string()
}

impl Token {
    pub fn new(text: impl Into<String>, pos: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            pos: pos.into(),
        }
    }
}

/// A gold event annotation inside one sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldEvent {
    pub event_type: EventType,
    pub trigger: Span,
    pub roles: BTreeMap<Role, Vec<Span>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub labels: Option<Vec<Tag>>,
    /// Full event structure, needed when chunks are shared between events.
    pub events: Vec<GoldEvent>,
}

impl Sentence {
    pub fn from_tokens(tokens: Vec<Token>) -> Self {
        Self {
            tokens,
            labels: None,
            events: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    pub fn span_text(&self, span: Span) -> String {
        let end = span.end.min(self.tokens.len());
        let start = span.start.min(end);
        self.tokens[start..end]
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Copy cut to at most `max` tokens; annotations past the cut are dropped.
    pub fn truncated(&self, max: usize) -> Sentence {
        if self.tokens.len() <= max {
            return self.clone();
        }
        let labels = self.labels.as_ref().map(|l| l[..max].to_vec());
        let events = self
            .events
            .iter()
            .filter(|e| e.trigger.end <= max)
            .map(|e| GoldEvent {
                event_type: e.event_type,
                trigger: e.trigger,
                roles: e
                    .roles
                    .iter()
                    .map(|(r, spans)| (*r, spans.iter().copied().filter(|s| s.end <= max).collect::<Vec<_>>()))
                    .filter(|(_, s)| !s.is_empty())
                    .collect(),
            })
            .collect();
        Sentence {
            tokens: self.tokens[..max].to_vec(),
            labels,
            events,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub case_id: String,
    pub party: Party,
    pub sentences: Vec<Sentence>,
}

impl Document {
    /// Size of the document's running text in bytes (tokens joined by spaces).
    pub fn byte_len(&self) -> usize {
        self.sentences
            .iter()
            .flat_map(|s| s.tokens.iter())
            .map(|t| t.text.len() + 1)
            .sum()
    }
}

#[derive(Serialize, Deserialize)]
struct WireEvent {
    #[serde(rename = "type")]
    event_type: EventType,
    trigger: [usize; 2],
    #[serde(default)]
    roles: BTreeMap<String, Vec<[usize; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct WireSentence {
    tokens: Vec<Token>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Tag>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    events: Vec<WireEvent>,
}

#[derive(Serialize, Deserialize)]
struct WireDocument {
    doc_id: String,
    case_id: String,
    party: Party,
    sentences: Vec<WireSentence>,
}

fn malformed(line: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Malformed {
        line,
        message: message.into(),
    }
}

fn document_from_wire(wire: WireDocument, line: usize) -> Result<Document, CorpusError> {
    let mut sentences = Vec::with_capacity(wire.sentences.len());
    for (si, ws) in wire.sentences.into_iter().enumerate() {
        if let Some(t) = ws
            .tokens
            .iter()
            .find(|t| t.text.is_empty() || t.text.chars().any(char::is_whitespace))
        {
            return Err(malformed(line, format!("sentence {si}: bad token {:?}", t.text)));
        }
        if let Some(labels) = &ws.labels {
            if labels.len() != ws.tokens.len() {
                return Err(CorpusError::LengthMismatch {
                    line,
                    sentence: si,
                    tokens: ws.tokens.len(),
                    labels: labels.len(),
                });
            }
            let bad = bio_violations(labels);
            if !bad.is_empty() {
                return Err(CorpusError::InvalidBio {
                    line,
                    sentence: si,
                    positions: bad,
                });
            }
        }
        let n = ws.tokens.len();
        let to_span = |[s, e]: [usize; 2]| -> Result<Span, CorpusError> {
            if s >= e || e > n {
                return Err(malformed(line, format!("sentence {si}: span [{s},{e}) out of bounds")));
            }
            Ok(Span::new(s, e))
        };
        let mut events = Vec::with_capacity(ws.events.len());
        for we in ws.events {
            let mut roles = BTreeMap::new();
            for (name, spans) in we.roles {
                let role = we
                    .event_type
                    .role(&name)
                    .ok_or_else(|| malformed(line, format!("sentence {si}: {} has no role `{name}`", we.event_type)))?;
                let spans = spans.into_iter().map(to_span).collect::<Result<Vec<_>, _>>()?;
                roles.insert(role, spans);
            }
            events.push(GoldEvent {
                event_type: we.event_type,
                trigger: to_span(we.trigger)?,
                roles,
            });
        }
        sentences.push(Sentence {
            tokens: ws.tokens,
            labels: ws.labels,
            events,
        });
    }
    Ok(Document {
        doc_id: wire.doc_id,
        case_id: wire.case_id,
        party: wire.party,
        sentences,
    })
}

fn document_to_wire(doc: &Document) -> WireDocument {
    WireDocument {
        doc_id: doc.doc_id.clone(),
        case_id: doc.case_id.clone(),
        party: doc.party,
        sentences: doc
            .sentences
            .iter()
            .map(|s| WireSentence {
                tokens: s.tokens.clone(),
                labels: s.labels.clone(),
                events: s
                    .events
                    .iter()
                    .map(|e| WireEvent {
                        event_type: e.event_type,
                        trigger: [e.trigger.start, e.trigger.end],
                        roles: e
                            .roles
                            .iter()
                            .map(|(r, spans)| (r.name().to_string(), spans.iter().map(|s| [s.start, s.end]).collect()))
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn parse_document(line: &str, line_no: usize) -> Result<Document, CorpusError> {
    let wire: WireDocument = serde_json::from_str(line).map_err(|e| malformed(line_no, e.to_string()))?;
    document_from_wire(wire, line_no)
}

pub fn document_to_json(doc: &Document) -> String {
    serde_json::to_string(&document_to_wire(doc)).expect("corpus documents always serialize")
}

/// Reads one JSON document per line. Blank lines are skipped; line numbers
/// in errors are 1-based.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc = parse_document(&line, i + 1)?;
        if !seen.insert(doc.doc_id.clone()) {
            return Err(CorpusError::DuplicateDocId {
                line: i + 1,
                doc_id: doc.doc_id,
            });
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn serialize_corpus<W: Write>(docs: &[Document], mut w: W) -> std::io::Result<()> {
    for d in docs {
        writeln!(w, "{}", document_to_json(d))?;
    }
    Ok(())
}

pub const SENTENCE_TERMINALS: &[char] = &['。', '！', '？', '!', '?', '.', ';'];

const DETACHED: &[char] = &[
    ',', '.', ';', ':', '!', '?', '(', ')', '"', '\'', '[', ']', '。', '！', '？', '，', '；', '：', '、', '（', '）',
    '“', '”', '‘', '’',
];

/// Whitespace tokenizer that detaches punctuation and splits sentences on
/// terminal punctuation. A `.` or `,` between two digits stays inside the
/// number.
#[derive(Debug, Clone, Default)]
pub struct Tokenizer {
    pos_lexicon: HashMap<String, String>,
}

impl Tokenizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_pos_lexicon(pos_lexicon: HashMap<String, String>) -> Self {
        Self { pos_lexicon }
    }

    fn pos_of(&self, word: &str) -> String {
        self.pos_lexicon.get(word).cloned().unwrap_or_else(unk)
    }

    pub fn tokenize_words(&self, text: &str) -> Vec<String> {
        let mut out = Vec::new();
        for piece in text.split_whitespace() {
            let chars: Vec<char> = piece.chars().collect();
            let mut cur = String::new();
            for (i, &c) in chars.iter().enumerate() {
                let numeric_sep = (c == '.' || c == ',')
                    && i > 0
                    && chars[i - 1].is_ascii_digit()
                    && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit());
                if DETACHED.contains(&c) && !numeric_sep {
                    if !cur.is_empty() {
                        out.push(std::mem::take(&mut cur));
                    }
                    out.push(c.to_string());
                } else {
                    cur.push(c);
                }
            }
            if !cur.is_empty() {
                out.push(cur);
            }
        }
        out
    }

    pub fn split_and_tokenize(&self, raw: &str) -> Vec<Sentence> {
        let mut sentences = Vec::new();
        let mut current = Vec::new();
        for word in self.tokenize_words(raw) {
            let terminal = word.chars().count() == 1 && word.chars().all(|c| SENTENCE_TERMINALS.contains(&c));
            let pos = self.pos_of(&word);
            current.push(Token::new(word, pos));
            if terminal {
                sentences.push(Sentence::from_tokens(std::mem::take(&mut current)));
            }
        }
        if !current.is_empty() {
            sentences.push(Sentence::from_tokens(current));
        }
        sentences
    }
}

pub fn split_and_tokenize(raw: &str) -> Vec<Sentence> {
    Tokenizer::new().split_and_tokenize(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    const TWO_SENTENCES: &str = r#"{"doc_id":"c1-p","case_id":"c1","party":"plaintiff","sentences":[{"tokens":[{"t":"we","pos":"PN"},{"t":"married","pos":"VV"},{"t":"in","pos":"P"},{"t":"2005","pos":"NUM"}],"labels":["O","B_Marry","O","B_M.Time"]},{"tokens":[{"t":"fine","pos":"UNK"}]}]}"#;

    #[test]
    fn parses_two_sentence_document() {
        let docs = parse_corpus(Cursor::new(TWO_SENTENCES)).unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].sentences.len(), 2);
        assert_eq!(docs[0].party, Party::Plaintiff);
        assert_eq!(docs[0].sentences[0].labels.as_ref().unwrap()[3].to_string(), "B_M.Time");
        assert!(docs[0].sentences[1].labels.is_none());
    }

    #[test]
    fn length_mismatch_names_line() {
        let bad = TWO_SENTENCES.replace(r#","B_M.Time"]"#, "]");
        let input = format!("{TWO_SENTENCES}\n\n{}", bad.replace("c1-p", "c1-x"));
        match parse_corpus(Cursor::new(input)) {
            Err(CorpusError::LengthMismatch {
                line, tokens, labels, ..
            }) => {
                assert_eq!((line, tokens, labels), (3, 4, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_names_line() {
        let input = format!("{TWO_SENTENCES}\n{{not json");
        let err = parse_corpus(Cursor::new(input)).unwrap_err();
        assert!(matches!(err, CorpusError::Malformed { line: 2, .. }), "{err}");
    }

    #[test]
    fn invalid_bio_rejected() {
        let bad = TWO_SENTENCES.replace(r#""O","B_Marry""#, r#""O","I_Marry""#);
        assert!(matches!(
            parse_corpus(Cursor::new(bad)),
            Err(CorpusError::InvalidBio { .. })
        ));
    }

    #[test]
    fn duplicate_doc_id_rejected() {
        let input = format!("{TWO_SENTENCES}\n{TWO_SENTENCES}");
        assert!(matches!(
            parse_corpus(Cursor::new(input)),
            Err(CorpusError::DuplicateDocId { line: 2, .. })
        ));
    }

    #[test]
    fn splitter_examples() {
        let s = split_and_tokenize("They married in 2005. They separated.");
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].words(), ["They", "married", "in", "2005", "."]);
        assert!(split_and_tokenize("").is_empty());
        let s = split_and_tokenize("a b c");
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].len(), 3);
        assert!(s[0].tokens.iter().all(|t| t.pos == "UNK"));
    }

    #[test]
    fn splitter_keeps_numbers_and_dates() {
        let s = split_and_tokenize("He owes 5000.50 yuan, since 2007-03; then (maybe) not");
        assert_eq!(s.len(), 2);
        assert_eq!(
            s[0].words(),
            ["He", "owes", "5000.50", "yuan", ",", "since", "2007-03", ";"]
        );
        assert_eq!(s[1].words(), ["then", "(", "maybe", ")", "not"]);
    }

    #[test]
    fn pos_lexicon_supplies_tags() {
        let tk = Tokenizer::with_pos_lexicon(HashMap::from([("married".to_string(), "VV".to_string())]));
        let s = tk.split_and_tokenize("we married");
        assert_eq!(s[0].tokens[1].pos, "VV");
        assert_eq!(s[0].tokens[0].pos, "UNK");
    }
}
