//! Library surface of the command-line front end: JSON formats, the run
//! ledger, and the canonical experiment suites.

pub mod formats;
pub mod ledger;
pub mod suites;
