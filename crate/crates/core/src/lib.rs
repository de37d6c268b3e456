//! Link budgets, achievable rates and max-min resource allocation for a single
//! LEO satellite acting as an integrated access and backhaul (IAB) node.
//!
//! The satellite serves two ground terminals over its forward service link:
//! a handheld UE (access link) and a terrestrial base station with a VSAT dish
//! (backhaul link). The crate splits transmit power and bandwidth between the
//! two links so as to maximize the weighted minimum rate, under TDD or FDD and
//! with orthogonal or partially overlapping spectrum.
//!
//! Layout:
//!
//! * [`linkbudget`] converts geometry and antenna data into channel power gains.
//! * [`ratemodel`] evaluates access/backhaul rates and checks feasibility.
//! * [`allocator`] holds the exact orthogonal solver, the particle swarm
//!   optimizer and a brute-force grid oracle.
//! * [`expcli`] is the experiment harness behind the `satiab` binary: JSON
//!   configs, power/overlap sweeps, CSV tables and SVG plots.

pub mod allocator;
pub mod error;
pub mod expcli;
pub mod linkbudget;
pub mod ratemodel;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
