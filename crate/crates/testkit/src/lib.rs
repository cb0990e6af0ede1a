//! Shared fixtures, random generators and a reference validator for tests.

pub mod fixtures;
pub mod brute;
pub mod generate;
pub mod mutations;
pub mod numeric;
