pub mod diagnose;
pub mod extract_features;
pub mod extract_patches;
pub mod run_all;
pub mod sample;
