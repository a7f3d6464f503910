//! Inequational reasoning about variable-free higher-order applicative terms
//! over polarized signatures.
//!
//! The crate bundles the syntax ([`types`], [`term`], [`signature`],
//! [`theory`]), a text format ([`parser`]), proof checking and bounded proof
//! search ([`proof`]), finite full type hierarchies and countermodel search
//! ([`semantics`]), the preorder completion ([`completion`]), the extension
//! construction for polarity-respecting interpretations ([`extension`]), and
//! property suites tying these together ([`harness`]).

pub mod completion;
pub mod error;
pub mod extension;
pub mod harness;
pub mod parser;
pub mod preorder;
pub mod proof;
pub mod semantics;
pub mod signature;
pub mod term;
pub mod theory;
pub mod types;

pub use error::{Error, Result};
pub use preorder::{closure_rt, FinPreorder, PolarizedFinPreorder};
pub use proof::{
    check_proof, prove, saturate, CalculusConfig, ProofTree, ProveOutcome, Rule, SearchBudget, Step, TermUniverse,
    UniversePolicy, Verdict,
};
pub use semantics::{find_countermodel, Countermodel, FullStructure, Model, ModelFilter, SizeBounds};
pub use signature::{validate_signature, Finding, FindingKind, Signature, SignatureBuilder};
pub use term::{type_of, Term, TermKind};
pub use theory::{extend_with_fresh, extend_with_ordered_pair, Assertion, Polarity, Theory};
pub use types::SimpleType;
