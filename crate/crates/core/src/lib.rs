#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod algebra;
pub mod cospectral;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod group;
pub mod iso;
pub mod represent;
pub mod scalar;
pub mod search;
pub mod spectrum;
pub mod switching;
