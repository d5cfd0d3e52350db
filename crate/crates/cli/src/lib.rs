//! Experiment harness for `sparseloc`: built-in scenes, file formats,
//! Monte-Carlo trials and SVG output.

pub mod config;
pub mod experiment;
pub mod scene_io;
pub mod scenes;
pub mod svg;
