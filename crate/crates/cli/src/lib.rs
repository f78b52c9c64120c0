//! Command-line layer: job configuration, worked-example fixtures and report rendering.

pub mod commands;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod output;
