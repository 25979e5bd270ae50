//! Command-line front end and JSON service for the effects composition engine.

pub mod api;
pub mod cli;
pub mod service;

pub use cli::run_cli;
pub use service::Service;
