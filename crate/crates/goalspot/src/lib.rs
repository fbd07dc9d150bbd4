//! Command-line tool and HTTP service over `goalspot-core`.

pub mod api;
pub mod cli;
pub mod server;
