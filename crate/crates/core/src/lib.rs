//! Exact arithmetic and positive-existential divisibility formulas over
//! rings of S-integers of imaginary quadratic fields.
//!
//! The crate is organized around five layers:
//!
//! * [`qfield`] — exact field arithmetic in K = Q(√d), d < 0 squarefree;
//! * [`ideals`] — prime splitting, valuations, ideal factorization and
//!   class numbers of O_K;
//! * [`sring`] — the ring O_{K,S}: membership, divisibility, S-units,
//!   residue-field reduction and the a/b decomposition;
//! * [`lform`] — the language L_div = {=, 0, 1, +, |}: terms, formulas,
//!   an S-expression parser/printer, certificate evaluation and bounded
//!   witness search;
//! * [`construct`] — the formula builders (ψ≠, Prod_u, φ∞, φ_sq), the
//!   constants they need, and the witnesses that certify them.
//!
//! The [`verify`] module bundles the property suites behind the `verify`
//! CLI subcommand, and [`report`] holds the JSON report schema.

pub mod construct;
pub mod exec;
pub mod ideals;
pub mod lform;
pub mod qfield;
pub mod report;
pub mod sring;
pub mod util;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("d must be negative, got {0}")]
    NonNegativeD(i64),
    #[error("d must be squarefree, got {0}")]
    NonSquarefreeD(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("valuation of zero is undefined")]
    ValuationOfZero,
    #[error("element is outside the ring O_K,S: {0}")]
    NotAnSInteger(String),
    #[error("element is not an S-unit: {0}")]
    NotAnSUnit(String),
    #[error("S-unit lies outside the generator lattice: {0}")]
    OutsideGeneratorLattice(String),
    #[error("S must be nonempty")]
    EmptyS,
    #[error("cannot resolve S-spec entry: {0}")]
    BadSSpec(String),
    #[error("reduction precondition violated: {0}")]
    BadReduction(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("missing value for variable {0}")]
    MissingVariable(String),
    #[error("scan bound {0} exhausted without finding a Lenstra pair")]
    ScanExhausted(u64),
    #[error("witness exponent {0} exceeds the configured budget {1}")]
    WitnessTooLarge(String, u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
