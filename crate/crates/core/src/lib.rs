//! Quasi-static design and simulation models for an antagonistic
//! variable-stiffness tendon drive and the underactuated compliant hand
//! it actuates.
//!
//! The crate is organized around the physical signal chain:
//!
//! * [`cam`] — expanding-contour cam synthesis turning linear springs
//!   into the quadratic force-deflection elements the actuator needs.
//! * [`vsa`] — closed-form forward/inverse maps of the antagonistic
//!   actuator plus an independent torque-balance oracle.
//! * [`transmission`] — pulley-tree and Bowden-cable stage coupling one
//!   actuator to four finger tendons.
//! * [`finger`] — kinetostatics of a three-joint compliant finger:
//!   sequential closing, fingertip stiffness, work balance.
//! * [`hand`] — whole-hand planar grasp simulation and grasp metrics.
//! * [`control`] — discrete-time two-motor position-control simulation
//!   with trace recording and an electrical energy estimator.
//! * [`scenarios`] — scripted experiments (tracking, characterization,
//!   grasp batches, energy table) used by the command-line harness.

pub mod cam;
pub mod control;
pub mod defaults;
pub mod finger;
pub mod hand;
pub mod numeric;
pub mod scenarios;
pub mod trace;
pub mod transmission;
pub mod verify;
pub mod vsa;

pub use cam::{CamProfile, QuadraticCoefficients, StiffnessTargets};
pub use vsa::{ActuatorState, VsaParameters};
