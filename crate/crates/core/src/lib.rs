//! Construction and verification of symmetric equilibria in competitive
//! Bayesian persuasion with two senders and many receivers.

pub mod model;
pub mod payoff;
pub mod lp;
pub mod equilibria;
pub mod analysis;
