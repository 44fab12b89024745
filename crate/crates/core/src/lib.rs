//! Finite fibrations, equality objects and the 2-category of fibration
//! homotopies, with decision procedures for every law involved.

pub mod choice;
pub mod conformance;
pub mod exec;
pub mod fibcore;
pub mod fincat;
pub mod gpd;
pub mod htpy;
pub mod instances;
pub mod oracle;
pub mod wedgeq;
