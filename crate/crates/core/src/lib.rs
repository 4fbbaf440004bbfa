//! Constructive witnesses for the failure of the weak Banach–Saks property.
//!
//! The crate is organised bottom-up:
//!
//! * [`schreier`] enumerates maximal Schreier sets `{A ⊂ ℕ : |A| = min A}` with
//!   an explicit, invertible ranking.
//! * [`weaknull`] realises the 0/1 sequence `u_k(i) = [k ∈ T(i)]` in `ℓ∞`, the
//!   challenge/response witness for its weak nullity, and exact Cesàro-mean
//!   certificates showing no subsequence is Cesàro null.
//! * [`metric`] holds validated finite metric spaces and separated pair families.
//! * [`holder`] computes sup norms, Hölder seminorms and the bump functions.
//! * [`embed`] builds the operators `ℓ∞ → C^α(M)`, `ℓ∞ → C_b(M)`, `ℓ∞ → L∞` and
//!   measures their distortion.
//! * [`classify`] returns weak Banach–Saks verdicts, including Cantor–Bendixson
//!   ranks of countable compact spaces written in Cantor normal form.
//! * [`experiment`] bundles seeded suites used by the command-line tool.

pub mod classify;
pub mod embed;
pub mod error;
pub mod experiment;
pub mod holder;
pub mod metric;
pub mod samples;
pub mod schreier;
pub mod tolerance;
pub mod weaknull;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
