//! Linear-time first-order unification over maximally shared term DAGs,
//! in the de Champeaux formulation of the Paterson-Wegman algorithm.
//!
//! Two variants of the main phase are provided: the published one, whose
//! misplaced completion flag lets a self-referential binding slip past the
//! occurs check and into the substitution builder, and the fixed one,
//! which rejects it as a cycle. The substitution builder carries a guard
//! that turns the resulting infinite loop into a reported error, and a
//! brute-force Robinson unifier serves as the differential-testing oracle.

pub mod engine;
pub mod families;
pub mod oracle;
pub mod parse;
pub mod sigma;
pub mod term;

pub use engine::{
    default_budget, render_trace_line, solve, Outcome, Phase, SolveConfig, SolveReport,
    TraceEvent, Variant,
};
pub use parse::{parse_term, ParseError, TermAst};
pub use sigma::{build_sigma, SigmaCall, SigmaFailure, Substitution};
pub use term::{ArityError, NodeId, Rendered, Symbol, SymbolKind, TermDag, TermNode};
