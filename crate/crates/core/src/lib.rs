//! Exact mode-algebra engine for chiral differential operators on small algebraic groups.

pub mod bimodule;
pub mod brst;
pub mod cdo;
pub mod character;
pub mod doc;
pub mod fock;
pub mod group;
pub mod jet;
pub mod lie;
pub mod lin;
pub mod linalg;
pub mod poly;
pub mod rat;
pub mod report;
pub mod suites;

pub use lin::Lin;
pub use rat::Rat;
