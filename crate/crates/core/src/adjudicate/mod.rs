//! Cross-checks between the published closed forms, expectation values of
//! the engine-derived pieces, and finite-difference slopes of exact spectra.

pub mod claims;
pub mod hf;
pub mod oracle;
pub mod report;

pub use claims::{compare_claims, numeric_verdict, parse_claims, symbolic_verdict, ClaimComparison, Verdict};
pub use hf::{hf_slope, SlopeResult, SlopeSettings, SlopeSolver, SlopeStatus};
pub use oracle::{first_order_oracle, predict, vanishing_check, Oracle, OraclePrediction, OracleValues};
pub use report::{build_report, Report, ReportConfig, ReportRecord, CSV_HEADER};
