#![allow(clippy::needless_range_loop)]
pub mod casimir_weights;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod numerics;
pub mod report;
pub mod representations;
pub mod rng;
pub mod selectors;
pub mod so_algebra;
pub mod spin;
pub mod suites;
pub mod weitzenbock;

pub use error::{Error, Result};
