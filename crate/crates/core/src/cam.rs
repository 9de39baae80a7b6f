//! Expanding-contour cam synthesis.
//!
//! A linear spring riding on the cam contour behaves as a quadratic
//! force-deflection element: pulling the roller along the cam by `x`
//! requires `F(x) = a x^2 + b x + c`. The contour ordinate satisfies
//!
//! ```text
//! y^2 = (2a/3k) x^3 + (b/k) x^2 + (2c/k) x + m,   m = 0
//! ```
//!
//! so that the virtual-work identity `k y y' = a x^2 + b x + c` holds
//! pointwise. For stiffness targets where `c < 0` the radicand is
//! negative near the origin; the contour is then defined on the feasible
//! domain `[x_lo, x_hi]` with `x_lo` the largest nonnegative root of the
//! radicand, and `[0, x_lo)` is a zero-preload dead zone reported in the
//! profile metadata.

use crate::numeric::{bisect, centered_diff};

/// Stiffness targets and geometry the cam is synthesized from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessTargets {
    /// Minimum joint stiffness (N·mm/rad).
    pub s_min: f64,
    /// Maximum joint stiffness (N·mm/rad).
    pub s_max: f64,
    /// Joint pulley radius (mm).
    pub r_j: f64,
    /// Maximum linear-spring deflection along the cam (mm).
    pub delta_x_max: f64,
    /// Linear spring constant (N/mm).
    pub spring_k: f64,
}

impl StiffnessTargets {
    pub fn validate(&self) -> Result<(), CamError> {
        if !(self.s_min > 0.0 && self.s_max > self.s_min) {
            return Err(CamError::InvalidTargets {
                reason: format!(
                    "need s_max > s_min > 0, got s_min={} s_max={}",
                    self.s_min, self.s_max
                ),
            });
        }
        if self.r_j <= 0.0 || self.delta_x_max <= 0.0 || self.spring_k <= 0.0 {
            return Err(CamError::InvalidTargets {
                reason: format!(
                    "need positive geometry, got r_j={} delta_x_max={} spring_k={}",
                    self.r_j, self.delta_x_max, self.spring_k
                ),
            });
        }
        Ok(())
    }
}

/// Coefficients of the quadratic force-deflection law `F(x) = a x^2 + b x + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCoefficients {
    /// N/mm^2
    pub a: f64,
    /// N/mm
    pub b: f64,
    /// N; negative whenever `s_max^2 > 2 s_min^2`.
    pub c: f64,
}

impl QuadraticCoefficients {
    /// Force at deflection `x` (mm).
    pub fn force(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }

    /// Local slope dF/dx at deflection `x`.
    pub fn slope(&self, x: f64) -> f64 {
        2.0 * self.a * x + self.b
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CamError {
    #[error("invalid stiffness targets: {reason}")]
    InvalidTargets { reason: String },
    #[error("profile synthesis failed: {reason}")]
    SynthesisFailed { reason: String },
    #[error("need at least 16 samples, got {n}")]
    TooFewSamples { n: usize },
}

/// Map stiffness targets onto the quadratic coefficients.
pub fn derive_coefficients(targets: &StiffnessTargets) -> Result<QuadraticCoefficients, CamError> {
    targets.validate()?;
    let rj2 = targets.r_j * targets.r_j;
    let span = targets.s_max - targets.s_min;
    Ok(QuadraticCoefficients {
        a: span / (4.0 * rj2 * targets.delta_x_max),
        b: targets.s_min / (2.0 * rj2),
        c: -targets.delta_x_max * (targets.s_max * targets.s_max - 2.0 * targets.s_min * targets.s_min)
            / (8.0 * rj2 * span),
    })
}

/// Radicand of the contour relation, `y^2` as a function of `x` (mm^2).
pub fn radicand(coeffs: &QuadraticCoefficients, spring_k: f64, x: f64) -> f64 {
    ((2.0 * coeffs.a / 3.0 * x + coeffs.b) * x + 2.0 * coeffs.c) * x / spring_k
}

/// Contour ordinate at `x`, or `None` where the radicand is negative.
pub fn contour_y(coeffs: &QuadraticCoefficients, spring_k: f64, x: f64) -> Option<f64> {
    let r = radicand(coeffs, spring_k, x);
    if r < 0.0 {
        None
    } else {
        Some(r.sqrt())
    }
}

/// Largest nonnegative root of the radicand; left edge of the feasible domain.
///
/// The radicand factors as `x * q(x)` with `q` quadratic. For `c >= 0` every
/// term is nonnegative on `x >= 0` and the edge is the origin. For `c < 0`
/// the edge is the positive root of `q`, found by bracketed bisection.
pub fn feasible_domain_start(coeffs: &QuadraticCoefficients, spring_k: f64) -> Result<f64, CamError> {
    if coeffs.c >= 0.0 {
        return Ok(0.0);
    }
    if coeffs.a <= 0.0 {
        return Err(CamError::SynthesisFailed {
            reason: format!("nonpositive quadratic coefficient a={}", coeffs.a),
        });
    }
    // q(x) = (2a/3k) x^2 + (b/k) x + 2c/k is negative at x=0 and grows
    // without bound; double the upper bracket until the sign flips.
    let q = |x: f64| (2.0 * coeffs.a / (3.0 * spring_k) * x + coeffs.b / spring_k) * x
        + 2.0 * coeffs.c / spring_k;
    let mut hi = 1.0;
    while q(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(CamError::SynthesisFailed {
                reason: "no feasible contour start below 1e9 mm".to_string(),
            });
        }
    }
    let root = bisect(q, 0.0, hi, 1e-13, 1e-12).map_err(|e| CamError::SynthesisFailed {
        reason: format!("root finding on radicand failed: {e}"),
    })?;
    Ok(root)
}

/// Sampled cam contour over its feasible domain.
#[derive(Debug, Clone, PartialEq)]
pub struct CamProfile {
    pub coefficients: QuadraticCoefficients,
    /// Linear spring constant (N/mm).
    pub spring_k: f64,
    /// Feasible domain `[x_lo, x_hi]` (mm); `x_hi = x_lo + delta_x_max`.
    pub domain: (f64, f64),
    /// Ordered contour samples `(x, y)` in mm.
    pub samples: Vec<(f64, f64)>,
    /// Integration constant of the contour relation, fixed at zero.
    pub m: f64,
}

impl CamProfile {
    /// CSV rows with header `x_mm,y_mm,radicand,F_app_N`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_mm,y_mm,radicand,F_app_N\n");
        for &(x, y) in &self.samples {
            let r = radicand(&self.coefficients, self.spring_k, x);
            let f = self.coefficients.force(x);
            out.push_str(&format!("{x},{y},{r},{f}\n"));
        }
        out
    }

    /// Plain key=value metadata block describing the profile.
    pub fn metadata(&self) -> String {
        format!(
            "a_n_mm2={}\nb_n_mm={}\nc_n={}\nspring_k_n_mm={}\nx_lo_mm={}\nx_hi_mm={}\nm_mm2={}\nsamples={}\n",
            self.coefficients.a,
            self.coefficients.b,
            self.coefficients.c,
            self.spring_k,
            self.domain.0,
            self.domain.1,
            self.m,
            self.samples.len()
        )
    }
}

/// Synthesize a contour profile for the given targets.
pub fn synthesize_profile(targets: &StiffnessTargets, n_samples: usize) -> Result<CamProfile, CamError> {
    if n_samples < 16 {
        return Err(CamError::TooFewSamples { n: n_samples });
    }
    let coeffs = derive_coefficients(targets)?;
    let x_lo = feasible_domain_start(&coeffs, targets.spring_k)?;
    let x_hi = x_lo + targets.delta_x_max;
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let x = x_lo + (x_hi - x_lo) * i as f64 / (n_samples - 1) as f64;
        let r = radicand(&coeffs, targets.spring_k, x);
        // Bisection residual can leave the left edge a hair negative.
        samples.push((x, r.max(0.0).sqrt()));
    }
    Ok(CamProfile {
        coefficients: coeffs,
        spring_k: targets.spring_k,
        domain: (x_lo, x_hi),
        samples,
        m: 0.0,
    })
}

/// One named validation check with its worst residual.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCheck {
    pub name: &'static str,
    pub passed: bool,
    pub max_residual: f64,
}

/// Per-check validation report for a cam profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<ProfileCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{}: {} (max residual {:.3e})",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    c.max_residual
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Check contour monotonicity, radicand sign, the contour relation
/// residual and the virtual-work identity over the profile samples.
pub fn validate_profile(profile: &CamProfile) -> ValidationReport {
    let coeffs = &profile.coefficients;
    let k = profile.spring_k;
    let (x_lo, x_hi) = profile.domain;
    let span = x_hi - x_lo;

    let mut monotone_residual: f64 = 0.0;
    for w in profile.samples.windows(2) {
        monotone_residual = monotone_residual.max(w[0].1 - w[1].1);
    }
    let monotone = ProfileCheck {
        name: "contour_monotone",
        passed: monotone_residual <= 1e-12,
        max_residual: monotone_residual,
    };

    let mut radicand_residual: f64 = 0.0;
    for &(x, _) in &profile.samples {
        radicand_residual = radicand_residual.max(-radicand(coeffs, k, x));
    }
    let radicand_check = ProfileCheck {
        name: "radicand_nonnegative",
        passed: radicand_residual <= 1e-9,
        max_residual: radicand_residual,
    };

    let mut relation_residual: f64 = 0.0;
    for &(x, y) in &profile.samples {
        let r = radicand(coeffs, k, x) + profile.m;
        relation_residual = relation_residual.max((y * y - r).abs());
    }
    let relation = ProfileCheck {
        name: "contour_relation",
        passed: relation_residual <= 1e-9 * span.max(1.0),
        max_residual: relation_residual,
    };

    // Virtual work: k y y' = F(x), y' by centered differences. Skip a
    // band of 1% of the domain next to y = 0 where y' blows up.
    let h = 1e-4 * span;
    let band = x_lo + 0.01 * span;
    let mut vw_residual: f64 = 0.0;
    for &(x, y) in &profile.samples {
        if x < band + h || x > x_hi - h || y == 0.0 {
            continue;
        }
        let dy = centered_diff(
            |xx| radicand(coeffs, k, xx).max(0.0).sqrt(),
            x,
            h,
        );
        let lhs = k * y * dy;
        let rhs = coeffs.force(x);
        vw_residual = vw_residual.max(((lhs - rhs) / rhs.abs().max(1e-9)).abs());
    }
    let virtual_work = ProfileCheck {
        name: "virtual_work",
        passed: vw_residual <= 0.005,
        max_residual: vw_residual,
    };

    ValidationReport {
        checks: vec![monotone, radicand_check, relation, virtual_work],
    }
}
