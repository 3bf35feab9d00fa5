//! Command-line front end for `brauer-core`.
//!
//! Requests are parsed from flags and the textual grammar in [`grammar`], run
//! by [`execute()`] and rendered as [`Report`]s. The acceptance criteria live in
//! [`suite`].

pub mod execute;
pub mod grammar;
pub mod report;
pub mod request;
pub mod suite;

pub use execute::execute;
pub use report::{Report, Status};
pub use request::{parse_request, CliError, Request};
