pub mod dist;
pub mod estimators;
pub mod oracle;
pub mod analysis;
pub mod bench;
