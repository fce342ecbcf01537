//! Crate-wide error type.
//!
//! Every fallible operation in the library returns `Result<_, Error>`. A failed
//! *verification* is not an error: verifiers return a certificate with a fail
//! verdict. Errors mean the question itself was malformed (bad parameters,
//! unusable field size, a precondition that makes the computation meaningless).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // ---- field construction and arithmetic ----
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("polynomial is reducible over Z_{p}: {detail}")]
    ReducibleModulus { p: u64, detail: String },
    #[error("0 cannot be raised to a negative power")]
    ZeroToNegativePower,
    #[error("k = {k} does not divide the multiplicative group order {group_order}")]
    ModulusDoesNotDivideGroupOrder { k: u64, group_order: u64 },
    #[error("field with q = {q} exceeds the supported/configured bound {bound}: {context}")]
    FieldTooLarge { q: u64, bound: u64, context: String },

    // ---- cyclotomic integers ----
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("exponent {exponent} is not coprime to {modulus}")]
    NotCoprime { exponent: i64, modulus: u64 },
    #[error("conductor {n} does not split as k = {k} times the p-part of n for p = {p}")]
    BadConductorSplit { n: u64, k: u64, p: u64 },
    #[error("p-adic valuation of zero is undefined")]
    ZeroElement,

    // ---- character sums and spectra ----
    #[error("order {ell} is not usable here: {detail}")]
    BadOrder { ell: u64, detail: String },
    #[error("exact spectrum refused: q = {q} with |D| = {set_size} exceeds the exact ceiling {ceiling}")]
    FieldTooLargeForExactPath { q: u64, set_size: u64, ceiling: u64 },
    #[error("two value clusters are closer than the separation threshold {threshold:.3e} (distance {distance:.3e})")]
    ClusteringAmbiguous { threshold: f64, distance: f64 },
    #[error("float error bound {bound:.3e} too large for {context}")]
    PrecisionExceeded { bound: f64, context: String },

    // ---- verification preconditions ----
    #[error("q = {0} is even; the construction needs odd q")]
    EvenOrder(u64),
    #[error("characteristic 2 is out of scope for this operation")]
    EvenCharacteristic,

    // ---- classification / partition ----
    #[error("ord_k(p) = {m} does not divide f = {f} (k = {k}, p = {p})")]
    OrderDoesNotDivideDegree { k: u64, p: u64, m: u64, f: u64 },
    #[error("Cay(F_q, C_0) is not strongly regular: {0}")]
    NotStronglyRegular(String),
    #[error("partition identity failed: {0}")]
    IdentityFailed(String),

    // ---- constructions ----
    #[error("modulus k = {0} must be odd")]
    EvenModulus(u64),
    #[error("partition part contains the zero residue; hypothesis L ∩ C_0 = ∅ fails")]
    ZeroInL,
    #[error("no partition part satisfies the hypothesis")]
    NoEligiblePart,
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("index set does not cover all residues mod p1: missing {missing:?}")]
    CoverageViolated { missing: Vec<u64> },
    #[error("lifted set has the wrong size: {detail}")]
    SizeViolated { detail: String },
    #[error("quotient group (Z/{k})^*/<{p}> is not usable: {detail}")]
    NotCyclicQuotient { k: u64, p: u64, detail: String },
    #[error("g = {g} does not generate the quotient (Z/{k})^*/<{p}>")]
    BadGenerator { g: i64, k: u64, p: u64 },
    #[error("premise graph is not strongly regular: {0}")]
    PremiseNotSRG(String),

    #[error("invalid set element: {0}")]
    InvalidElement(String),

    // ---- CLI / manifests (kept here so certificates can embed them) ----
    #[error("manifest parse error: {0}")]
    ManifestParseError(String),
    #[error("unknown operation {0:?}")]
    UnknownOp(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
