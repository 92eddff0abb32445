//! Std companion to `bql-core`: the signature, sentence, model and proof
//! file formats, a seeded sentence generator, the invariant suites, and the
//! `bql` command-line front end.

pub mod cli;
pub mod generate;
pub mod modelfile;
pub mod prooffile;
pub mod sentences;
pub mod sigfile;
pub mod suite;
