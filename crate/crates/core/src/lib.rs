//! Event extraction and dispute detection for two-party civil-case
//! statements.
//!
//! The pipeline scans sentences for candidate triggers, labels coarse
//! transition labels with a CRF, fixes polarity and money chunks by pattern,
//! then re-labels once per trigger to hand shared arguments to each event.
//! Extracted events of the two parties are aligned on key attributes and
//! every aligned pair is classified as contradictory or entailed.

pub mod align;
pub mod conflict;
pub mod corpus;
pub mod crf;
pub mod error;
pub mod eval;
pub mod extract;
pub mod lexicon;
pub mod schema;
