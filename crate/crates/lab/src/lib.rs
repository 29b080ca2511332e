//! Experiment layer over the simulation core: config-driven runs, scenario
//! presets, CSV/JSON export, and native SVG plots.

pub mod config;
pub mod error;
pub mod presets;
pub mod runner;
pub mod svg;
