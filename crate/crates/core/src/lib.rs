//! Fault-tolerant cluster states from crystal lattices: GF(2) homology,
//! Delaney symbols, periodic unit cells and a matching decoder with a
//! Monte Carlo driver.

pub mod complex;
pub mod decode;
pub mod delaney;
pub mod gf2;
pub mod lattice;
