//! Thermodynamic-formalism computations on hyperbolic-group automatic
//! structures.
//!
//! The crate bundles two worked groups: the genus-2 surface group with the
//! translation generators (regular octagon presentation) and the free
//! product (Z/4)*(Z/6). For either one it can
//!
//! - solve the word problem and measure exact geodesic lengths ([`words`]),
//! - load, validate, or build geodesic normal-form automata ([`automaton`]),
//! - decompose the automaton graph into recurrent components and extract
//!   Perron eigendata, growth rates, and Parry chains ([`spectral`]),
//! - evaluate pressure of locally constant potentials, Manhattan/pressure
//!   curves, equilibrium chains, and Legendre rate functions ([`thermo`]),
//! - work with SL(2,R) representations: singular values, domination fits,
//!   multicone certificates, and the hyperbolic-plane action ([`replin`]),
//! - run seeded Monte-Carlo experiments: Parry-chain sampling, simple random
//!   walks, intersection-number estimators, angle histograms
//!   ([`montecarlo`]).
//!
//! The `hypflow` binary exposes all of it as subcommands; see the README.

pub mod automaton;
pub mod cli;
pub mod data;
pub mod error;
pub mod montecarlo;
pub mod replin;
pub mod rng;
pub mod spectral;
pub mod thermo;
pub mod tol;
pub mod words;

pub use error::{Error, Result};
