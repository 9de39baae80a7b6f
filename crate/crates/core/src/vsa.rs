//! Quasi-static model of the antagonistic variable-stiffness actuator.
//!
//! Two motors (angles `alpha`, `beta`) wind tendons against a pair of
//! quadratic spring elements coupled to an output pulley. Under
//! quasi-static conditions the equilibrium angle and output stiffness
//! have closed forms:
//!
//! ```text
//! theta = r_m/(2 r_j) (alpha - beta) - tau / (2 r_j^2 (a r_m (alpha+beta) + b))
//! S     = 2 a r_m r_j^2 (alpha + beta) + 2 b r_j^2
//! ```
//!
//! Both are exact for quadratic springs; [`equilibrium_oracle`] verifies
//! them independently by root finding on the torque balance and finite
//! differencing the restoring torque.
//!
//! Sign convention: positive `theta` stretches the beta-side spring and
//! relaxes the alpha-side spring; `alpha` and `beta` are positive when
//! their motors wind their tendons.

use crate::cam::QuadraticCoefficients;
use crate::numeric::bisect;

/// Geometry and spring law of the antagonistic actuator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VsaParameters {
    pub coefficients: QuadraticCoefficients,
    /// Output (joint) pulley radius, mm.
    pub r_j: f64,
    /// Motor pulley radius, mm.
    pub r_m: f64,
    /// Linear spring constant behind the cams, N/mm.
    pub spring_k: f64,
    /// Per-side deflection ceiling, mm.
    pub delta_x_max: f64,
    /// Motor angle limits, rad.
    pub alpha_limits: (f64, f64),
    pub beta_limits: (f64, f64),
    /// Uniform tendon pretension added to both sides, N. The antagonistic
    /// difference cancels it, so equilibrium and stiffness are unaffected;
    /// it only fixes the tension datum so reported tensions are
    /// nonnegative over the working range.
    pub pretension: f64,
}

impl VsaParameters {
    /// Parameters with the tension datum chosen so the slackest working
    /// state (zero deflection) carries zero tension.
    pub fn new(
        coefficients: QuadraticCoefficients,
        r_j: f64,
        r_m: f64,
        spring_k: f64,
        delta_x_max: f64,
    ) -> Self {
        Self {
            coefficients,
            r_j,
            r_m,
            spring_k,
            delta_x_max,
            alpha_limits: (-2.0, 4.0),
            beta_limits: (-2.0, 4.0),
            pretension: (-coefficients.c).max(0.0),
        }
    }

    /// Side tension at deflection `x` (N): the quadratic spring law plus
    /// the pretension datum.
    pub fn side_tension(&self, x: f64) -> f64 {
        self.coefficients.force(x) + self.pretension
    }

    /// Side spring rate at deflection `x` (N/mm).
    pub fn side_rate(&self, x: f64) -> f64 {
        self.coefficients.slope(x)
    }

    /// Largest co-contraction `alpha + beta` keeping both deflections at
    /// `delta_x_max` with the output centered.
    pub fn max_cocontraction(&self) -> f64 {
        2.0 * self.delta_x_max / self.r_m
    }
}

/// Full quasi-static state of the actuator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorState {
    pub alpha: f64,
    pub beta: f64,
    /// External torque on the output, N·mm.
    pub tau_load: f64,
    /// Equilibrium output angle, rad.
    pub theta: f64,
    /// Output stiffness, N·mm/rad.
    pub stiffness: f64,
    /// Side tendon tensions `(alpha side, beta side)`, N.
    pub tensions: (f64, f64),
    /// Side spring deflections `(x1, x2)`, mm.
    pub deflections: (f64, f64),
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum VsaError {
    #[error("tendon slack: side {side} deflection {deflection:.4} mm < 0")]
    TendonSlack { side: u8, deflection: f64 },
    #[error("over-travel: side {side} deflection {deflection:.4} mm exceeds {max:.4} mm")]
    OverTravel { side: u8, deflection: f64, max: f64 },
    #[error("stiffness {requested:.3} N·mm/rad outside achievable range [{min:.3}, {max:.3}]")]
    UnreachableStiffness { requested: f64, min: f64, max: f64 },
    #[error("motor angle {angle:.4} rad outside limits [{lo:.4}, {hi:.4}]")]
    MotorLimit { angle: f64, lo: f64, hi: f64 },
    #[error("torque balance has no root inside the deflection limits")]
    NoRoot,
}

fn check_deflection(params: &VsaParameters, side: u8, x: f64) -> Result<(), VsaError> {
    if x < -1e-12 {
        return Err(VsaError::TendonSlack { side, deflection: x });
    }
    if x > params.delta_x_max + 1e-12 {
        return Err(VsaError::OverTravel {
            side,
            deflection: x,
            max: params.delta_x_max,
        });
    }
    Ok(())
}

/// Closed-form forward map: motor angles and load to equilibrium state.
pub fn forward(
    params: &VsaParameters,
    alpha: f64,
    beta: f64,
    tau_load: f64,
) -> Result<ActuatorState, VsaError> {
    let QuadraticCoefficients { a, b, .. } = params.coefficients;
    let (r_j, r_m) = (params.r_j, params.r_m);
    let denom = 2.0 * r_j * r_j * (a * r_m * (alpha + beta) + b);
    let theta = r_m / (2.0 * r_j) * (alpha - beta) - tau_load / denom;
    let stiffness = 2.0 * a * r_m * r_j * r_j * (alpha + beta) + 2.0 * b * r_j * r_j;
    let x1 = r_m * alpha - r_j * theta;
    let x2 = r_m * beta + r_j * theta;
    check_deflection(params, 1, x1)?;
    check_deflection(params, 2, x2)?;
    Ok(ActuatorState {
        alpha,
        beta,
        tau_load,
        theta,
        stiffness,
        tensions: (params.side_tension(x1), params.side_tension(x2)),
        deflections: (x1, x2),
    })
}

/// Exact inverse map: angle and stiffness references to motor angles.
pub fn inverse(
    params: &VsaParameters,
    theta_ref: f64,
    s_ref: f64,
    tau_load: f64,
) -> Result<(f64, f64), VsaError> {
    let QuadraticCoefficients { a, b, .. } = params.coefficients;
    let (r_j, r_m) = (params.r_j, params.r_m);
    let (s_lo, s_hi) = stiffness_range(params);
    if s_ref < s_lo - 1e-9 || s_ref > s_hi + 1e-9 {
        return Err(VsaError::UnreachableStiffness {
            requested: s_ref,
            min: s_lo,
            max: s_hi,
        });
    }
    let sum = if a == 0.0 {
        0.0
    } else {
        (s_ref - 2.0 * b * r_j * r_j) / (2.0 * a * r_m * r_j * r_j)
    };
    let diff = 2.0 * r_j / r_m * (theta_ref + tau_load / s_ref);
    let alpha = 0.5 * (sum + diff);
    let beta = 0.5 * (sum - diff);
    for (angle, (lo, hi)) in [
        (alpha, params.alpha_limits),
        (beta, params.beta_limits),
    ] {
        if angle < lo - 1e-12 || angle > hi + 1e-12 {
            return Err(VsaError::MotorLimit { angle, lo, hi });
        }
    }
    // Reject solutions whose deflections leave the working box.
    let state = forward(params, alpha, beta, tau_load)?;
    debug_assert!((state.theta - theta_ref).abs() < 1e-9);
    Ok((alpha, beta))
}

/// Independent verification of the closed forms: finds the equilibrium
/// angle by bisection on the spring-pair torque balance and the stiffness
/// by centered finite differences of the restoring torque.
pub fn equilibrium_oracle(
    params: &VsaParameters,
    alpha: f64,
    beta: f64,
    tau_load: f64,
) -> Result<(f64, f64), VsaError> {
    let (r_j, r_m) = (params.r_j, params.r_m);
    // Residual of the torque balance at output angle theta.
    let torque = |theta: f64| {
        let x1 = r_m * alpha - r_j * theta;
        let x2 = r_m * beta + r_j * theta;
        r_j * (params.side_tension(x1) - params.side_tension(x2))
    };
    // Both deflections must stay in [0, delta_x_max].
    let lo = (-r_m * beta / r_j).max((r_m * alpha - params.delta_x_max) / r_j);
    let hi = (r_m * alpha / r_j).min((params.delta_x_max - r_m * beta) / r_j);
    if lo > hi {
        return Err(VsaError::NoRoot);
    }
    let g = |theta: f64| torque(theta) - tau_load;
    if g(lo).signum() == g(hi).signum() && g(lo) != 0.0 && g(hi) != 0.0 {
        return Err(VsaError::NoRoot);
    }
    let theta = bisect(g, lo, hi, 1e-14, 1e-12).map_err(|_| VsaError::NoRoot)?;
    let h = 1e-6;
    let stiffness = -(torque(theta + h) - torque(theta - h)) / (2.0 * h);
    Ok((theta, stiffness))
}

/// Achievable stiffness interval: the closed form evaluated at zero
/// co-contraction and at the largest co-contraction keeping both
/// deflections within the working range with the output centered.
pub fn stiffness_range(params: &VsaParameters) -> (f64, f64) {
    let QuadraticCoefficients { a, b, .. } = params.coefficients;
    let (r_j, r_m) = (params.r_j, params.r_m);
    let s_min = 2.0 * b * r_j * r_j;
    let s_max = 2.0 * a * r_m * r_j * r_j * params.max_cocontraction() + s_min;
    (s_min, s_max)
}

/// Admissible-state sample: deflections inside the working box plus an
/// output angle, mapped back to motor angles and the balancing load.
/// Useful for randomized campaigns that must stay in the valid region.
pub fn state_from_deflections(
    params: &VsaParameters,
    x1: f64,
    x2: f64,
    theta: f64,
) -> (f64, f64, f64) {
    let alpha = (x1 + params.r_j * theta) / params.r_m;
    let beta = (x2 - params.r_j * theta) / params.r_m;
    let tau = params.r_j * (params.side_tension(x1) - params.side_tension(x2));
    (alpha, beta, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cam::{derive_coefficients, StiffnessTargets};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn default_params() -> VsaParameters {
        let targets = StiffnessTargets {
            s_min: 135.0,
            s_max: 545.0,
            r_j: 10.0,
            delta_x_max: 20.0,
            spring_k: 2.0,
        };
        VsaParameters::new(derive_coefficients(&targets).unwrap(), 10.0, 10.0, 2.0, 20.0)
    }

    #[test]
    fn zero_command_rests_at_minimum_stiffness() {
        let p = default_params();
        let s = forward(&p, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(s.theta, 0.0);
        assert_relative_eq!(s.stiffness, 135.0, epsilon = 1e-12);
        assert_relative_eq!(s.tensions.0, 0.0, epsilon = 1e-12);
        assert_relative_eq!(s.tensions.1, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_winding_keeps_output_centered() {
        let p = default_params();
        for a in [0.3, 0.9, 1.7] {
            let s = forward(&p, a, a, 0.0).unwrap();
            assert_eq!(s.theta, 0.0);
            assert!(s.tensions.0 > 0.0);
            assert_relative_eq!(s.tensions.0, s.tensions.1, epsilon = 1e-12);
        }
    }

    #[test]
    fn loaded_state_matches_the_torque_balance_oracle() {
        let p = default_params();
        let s = forward(&p, 0.8, 0.4, 50.0).unwrap();
        let (theta_o, stiff_o) = equilibrium_oracle(&p, 0.8, 0.4, 50.0).unwrap();
        assert!((s.theta - theta_o).abs() < 1e-9, "theta {} vs {}", s.theta, theta_o);
        assert!(
            ((s.stiffness - stiff_o) / s.stiffness).abs() < 1e-3,
            "stiffness {} vs {}",
            s.stiffness,
            stiff_o
        );
    }

    #[test]
    fn slack_and_overtravel_are_rejected() {
        let p = default_params();
        // Winding only one motor hard swings the output until the other
        // side would go slack when loaded the other way.
        let err = forward(&p, 3.0, 0.0, 800.0).unwrap_err();
        assert!(matches!(err, VsaError::TendonSlack { .. } | VsaError::OverTravel { .. }));
        let err = forward(&p, 4.0, 4.0, 0.0).unwrap_err();
        assert!(matches!(err, VsaError::OverTravel { .. }));
    }

    #[test]
    fn inverse_reproduces_references_exactly() {
        let p = default_params();
        let (alpha, beta) = inverse(&p, 0.3, 340.0, 30.0).unwrap();
        let s = forward(&p, alpha, beta, 30.0).unwrap();
        assert!((s.theta - 0.3).abs() < 1e-9);
        assert!((s.stiffness - 340.0).abs() < 1e-9);
    }

    #[test]
    fn inverse_of_rest_state_is_zero() {
        let p = default_params();
        let (alpha, beta) = inverse(&p, 0.0, 135.0, 0.0).unwrap();
        assert_relative_eq!(alpha, 0.0, epsilon = 1e-12);
        assert_relative_eq!(beta, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn intermediate_stiffness_needs_one_radian_each() {
        // Hand evaluation: alpha + beta = (340 - 135) / 102.5 = 2.
        let p = default_params();
        let (alpha, beta) = inverse(&p, 0.0, 340.0, 0.0).unwrap();
        assert_relative_eq!(alpha, 1.0, epsilon = 1e-12);
        assert_relative_eq!(beta, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unreachable_stiffness_is_reported() {
        let p = default_params();
        assert!(matches!(
            inverse(&p, 0.0, 1000.0, 0.0),
            Err(VsaError::UnreachableStiffness { .. })
        ));
        assert!(matches!(
            inverse(&p, 0.0, 50.0, 0.0),
            Err(VsaError::UnreachableStiffness { .. })
        ));
    }

    #[test]
    fn stiffness_range_hits_design_endpoints() {
        let p = default_params();
        let (lo, hi) = stiffness_range(&p);
        assert_relative_eq!(lo, 135.0, epsilon = 1e-9);
        assert_relative_eq!(hi, 545.0, epsilon = 1e-9);
    }

    #[test]
    fn constant_coefficient_collapses_the_range() {
        let mut p = default_params();
        p.coefficients.a = 0.0;
        let (lo, hi) = stiffness_range(&p);
        assert_relative_eq!(lo, hi, epsilon = 1e-12);
        assert_relative_eq!(lo, 135.0, epsilon = 1e-12);
    }

    #[test]
    fn halving_travel_halves_the_reachable_span() {
        let p = default_params();
        let (lo, hi) = stiffness_range(&p);
        let mut half = p;
        half.delta_x_max *= 0.5;
        let (lo2, hi2) = stiffness_range(&half);
        assert_relative_eq!(lo2, lo, epsilon = 1e-12);
        assert_relative_eq!(hi2 - lo2, (hi - lo) / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn cocontraction_raises_stiffness_monotonically() {
        let p = default_params();
        let mut last = 0.0;
        for i in 0..20 {
            let a = 0.1 * i as f64;
            let s = forward(&p, a, a, 0.0).unwrap().stiffness;
            assert!(s > last);
            last = s;
        }
    }

    #[test]
    fn load_sags_the_equilibrium() {
        let p = default_params();
        let free = forward(&p, 1.0, 1.0, 0.0).unwrap().theta;
        let loaded = forward(&p, 1.0, 1.0, 40.0).unwrap().theta;
        assert!(loaded < free);
    }

    #[test]
    fn tensions_are_nonnegative_across_the_working_box() {
        let p = default_params();
        for i in 0..=20 {
            for j in 0..=20 {
                let x1 = i as f64;
                let x2 = j as f64;
                let (alpha, beta, tau) = state_from_deflections(&p, x1, x2, 0.1);
                let s = forward(&p, alpha, beta, tau).unwrap();
                assert!(s.tensions.0 >= -1e-12 && s.tensions.1 >= -1e-12);
            }
        }
    }

    #[test]
    fn coefficient_round_trip_recovers_targets() {
        let targets = StiffnessTargets {
            s_min: 200.0,
            s_max: 400.0,
            r_j: 8.0,
            delta_x_max: 15.0,
            spring_k: 3.0,
        };
        let p = VsaParameters::new(
            derive_coefficients(&targets).unwrap(),
            targets.r_j,
            10.0,
            targets.spring_k,
            targets.delta_x_max,
        );
        let (lo, hi) = stiffness_range(&p);
        assert_relative_eq!(lo, targets.s_min, max_relative = 1e-9);
        assert_relative_eq!(hi, targets.s_max, max_relative = 1e-9);
    }

    proptest! {
        // Closed form vs torque-balance oracle over the admissible box.
        #[test]
        fn closed_form_matches_oracle(
            x1 in 0.0..20.0f64,
            x2 in 0.0..20.0f64,
            theta in -1.5..1.5f64,
        ) {
            let p = default_params();
            let (alpha, beta, tau) = state_from_deflections(&p, x1, x2, theta);
            let s = forward(&p, alpha, beta, tau).unwrap();
            let (theta_o, stiff_o) = equilibrium_oracle(&p, alpha, beta, tau).unwrap();
            prop_assert!((s.theta - theta_o).abs() < 1e-9);
            prop_assert!(((s.stiffness - stiff_o) / s.stiffness).abs() < 1e-3);
        }

        #[test]
        fn round_trip_is_identity(
            theta in -1.2..1.2f64,
            s_ref in 140.0..540.0f64,
            tau in -30.0..30.0f64,
        ) {
            let p = default_params();
            if let Ok((alpha, beta)) = inverse(&p, theta, s_ref, tau) {
                let s = forward(&p, alpha, beta, tau).unwrap();
                prop_assert!((s.theta - theta).abs() < 1e-9);
                prop_assert!((s.stiffness - s_ref).abs() < 1e-9);
            }
        }
    }
}
