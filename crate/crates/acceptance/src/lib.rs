//! Independent oracles, seeded instance generators and the acceptance suite.

pub mod criteria;
pub mod oracles;
pub mod random;
