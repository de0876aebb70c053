pub mod error;
pub mod specialfns;
pub mod quad;
pub mod kernels;
pub mod meanfield;
pub mod ode;
pub mod propagators;
pub mod loops;
pub mod rgflow;
pub mod simulator;
pub mod trace;
pub mod verify;
pub mod harness;
