//! Query expansion over Wikipedia and WordNet, with a small retrieval and
//! TREC-style evaluation harness.

mod digest;
pub mod eval;
pub mod expansion;
pub mod query;
pub mod retrieval;
pub mod sweep;
pub mod text;
pub mod wiki;
pub mod wordnet;
