//! Library side of the satbandit CLI: config parsing, embedded presets,
//! result emission, and run orchestration. The binary in `main.rs` is a
//! thin argument layer over these.

pub mod config;
pub mod emit;
pub mod presets;
pub mod runner;

pub use config::{parse_config, parse_config_text, ConfigError, PlanEntry, RunPlan};
pub use presets::{preset_plan, preset_text, PRESET_NAMES};
