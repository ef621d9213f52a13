pub mod asym;
pub mod cli;
pub mod dioph;
pub mod expr;
pub mod gram;
pub mod metaplectic;
pub mod router;
pub mod signal;
