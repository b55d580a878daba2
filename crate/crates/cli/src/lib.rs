//! Command-line front end: matrix documents, reports, fixture replay and
//! the random near-miss search.

pub mod commands;
pub mod document;
pub mod replay;
pub mod report;
pub mod search;
