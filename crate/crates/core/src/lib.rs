//! Sidon sets in the integer grid `[n]^d`.
//!
//! A set `S` of grid points is a Sidon set when all sums `a + b` with
//! `a, b ∈ S` (repetition allowed) are distinct. This crate provides
//!
//! * grid arithmetic, canonical rank encoding and Sidon verification
//!   ([`grid`], [`sidon`]),
//! * constructive lower bounds from perfect difference sets and the base-`n`
//!   digit map ([`constructions`]),
//! * exact maximum search and exact counting of Sidon subsets ([`exact`]),
//! * collision graphs, the auxiliary sum graph, density and container checks
//!   and closed-form counting bounds ([`containers`]),
//! * a seeded Monte Carlo harness for random grid subsets ([`random_lab`]),
//! * text/JSON formats for point sets and graphs ([`io`]).

pub mod bitset;
pub mod constructions;
pub mod containers;
pub mod error;
pub mod exact;
pub mod exec;
pub mod grid;
pub mod io;
pub mod random_lab;
pub mod sidon;

pub use error::{Error, Result};
pub use exec::Executor;
pub use grid::{GridParams, GridPoint, PointSet, SumPoint};
pub use sidon::{is_sidon, sum_multiset, SidonWitness, SumMultiset, Violation};
