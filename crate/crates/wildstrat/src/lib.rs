//! Exact computations for wild orbits over truncated current Lie algebras.
//!
//! The crate covers root data and Chevalley bases ([`liecore`]), Levi stratifications
//! ([`strat`]), Birkhoff normal forms and centralisers ([`orbit`]), parabolic filtrations and
//! nonsingular characters ([`parab`]), generalised singularity modules with their Shapovalov
//! forms ([`singmod`]) and the inverse-Shapovalov star product ([`quant`]). All arithmetic is
//! exact over the rationals.

pub mod cli;
pub mod error;
pub mod liecore;
pub mod linalg;
pub mod orbit;
pub mod parab;
pub mod poly;
pub mod quant;
pub mod rational;
pub mod singmod;
pub mod strat;

pub use error::{Error, Result};
pub use liecore::{GElement, LieType, RootDatum, TcElement};
pub use rational::Q;
