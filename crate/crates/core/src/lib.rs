pub mod chow;
pub mod cylinder;
pub mod expr;
pub mod kstab;
pub mod ledger;
pub mod report;
pub mod scalar;
