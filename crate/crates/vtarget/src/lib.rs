//! File formats, rendering and the command-line front end for
//! [`vtarget_core`].

pub mod assignment_file;
pub mod commands;
pub mod scenario_file;
pub mod svg;
pub mod tables;

pub use scenario_file::{load_scenario, parse_scenario, save_scenario, scenario_to_json, LoadError};
