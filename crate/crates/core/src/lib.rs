//! Higher-order harmonic surfaces in Bianchi–Cartan–Vranceanu spaces.
//!
//! Closed-form tension fields of Hopf cylinders and CMC surfaces, checked
//! against finite-difference oracles, plus the existence classification of
//! CMC r-harmonic Hopf cylinders.

pub mod classify;
pub mod cli;
pub mod config;
pub mod error;
pub mod fd;
pub mod helicoid;
pub mod hopf;
pub mod jet;
pub mod oracle;
pub mod report;
pub mod space;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
pub use jet::Jet;
pub use space::{Ambient, BcvParams, BcvSpace, CoordVec, FrameVec, Point3};
