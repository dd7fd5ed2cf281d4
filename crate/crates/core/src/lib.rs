pub mod ata;
pub mod candidate;
pub mod chunker;
pub mod cli;
pub mod corpus;
pub mod diffindex;
pub mod llm;
pub mod metrics;
pub mod orchestrator;
pub mod verifier;
pub mod error;

pub use candidate::{Candidate, CandidateSource};
pub use error::{Error, Result};
