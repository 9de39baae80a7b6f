//! Pulley-tree and Bowden-cable transmission between the actuator and
//! the four finger tendons.
//!
//! The tree is a cascade of movable pulleys: each level halves the
//! transmitted tension and the input displacement equals the mean of the
//! output displacements. An ideal tree therefore splits tension exactly
//! equally among the outputs. Bowden friction is modeled as a
//! direction-dependent constant efficiency per stage; the cable adds a
//! slack dead band and linear stretch.

use crate::numeric::solve_dense;

/// Movable-pulley cascade fanning one input tendon out to `outputs` ends.
#[derive(Debug, Clone, PartialEq)]
pub struct PulleyTree {
    /// Cascade depth; 2 levels serve four fingers.
    pub levels: usize,
    /// Pulley radius per level (mm). Ideal cable kinematics do not
    /// depend on them; kept for geometry reporting.
    pub radii_mm: Vec<f64>,
    /// Tension efficiency per pulley pass; 1.0 = ideal.
    pub efficiency: f64,
}

impl PulleyTree {
    pub fn ideal_four_finger() -> Self {
        Self {
            levels: 2,
            radii_mm: vec![10.0, 10.0],
            efficiency: 1.0,
        }
    }

    pub fn outputs(&self) -> usize {
        1 << self.levels
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TransmissionError {
    #[error("tension must be nonnegative, got {0}")]
    NegativeTension(f64),
    #[error("output resistances must be nonnegative, got {0} at index {1}")]
    NegativeResistance(f64, usize),
    #[error("displacement distribution system is singular")]
    SingularDistribution,
}

/// Static tension split over the tree. Each level multiplies the
/// transmitted tension by `efficiency` and divides it between two
/// branches; blocked outputs still receive their static share since
/// blocking constrains displacement, not the ideal tension split.
pub fn distribute_tension(
    tree: &PulleyTree,
    input_tension: f64,
    blocked: &[bool],
) -> Result<Vec<f64>, TransmissionError> {
    if input_tension < 0.0 {
        return Err(TransmissionError::NegativeTension(input_tension));
    }
    debug_assert!(blocked.is_empty() || blocked.len() == tree.outputs());
    let per_output =
        input_tension * (tree.efficiency / 2.0).powi(tree.levels as i32);
    Ok(vec![per_output; tree.outputs()])
}

/// Distribute an input displacement over outputs resisted by linear
/// rates (N/mm). The movable-pulley constraint fixes the mean of the
/// output displacements to the input displacement, and the ideal tree
/// equalizes output tensions: `r_i * d_i = t` for every loaded output.
///
/// Outputs with zero resistance carry zero tension; if any exist they
/// absorb the whole displacement budget and loaded outputs stay put.
/// All-zero resistances degenerate to the symmetric equal split.
pub fn distribute_displacement(
    tree: &PulleyTree,
    input_disp: f64,
    output_resistances: &[f64],
) -> Result<Vec<f64>, TransmissionError> {
    let n = tree.outputs();
    assert_eq!(output_resistances.len(), n);
    for (i, &r) in output_resistances.iter().enumerate() {
        if r < 0.0 {
            return Err(TransmissionError::NegativeResistance(r, i));
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| output_resistances[i] == 0.0).collect();
    if !free.is_empty() {
        let mut out = vec![0.0; n];
        let share = input_disp * n as f64 / free.len() as f64;
        for i in free {
            out[i] = share;
        }
        return Ok(out);
    }
    // Unknowns: d_0..d_{n-1}, t. Equations: r_i d_i - t = 0, mean(d) = input.
    let dim = n + 1;
    let mut a = vec![vec![0.0; dim]; dim];
    let mut b = vec![0.0; dim];
    for i in 0..n {
        a[i][i] = output_resistances[i];
        a[i][n] = -1.0;
    }
    for i in 0..n {
        a[n][i] = 1.0 / n as f64;
    }
    b[n] = input_disp;
    let sol = solve_dense(&mut a, &mut b)
        .map_err(|_| TransmissionError::SingularDistribution)?;
    Ok(sol[..n].to_vec())
}

/// One Bowden cable stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BowdenStage {
    pub efficiency_forward: f64,
    pub efficiency_return: f64,
    /// Dead-band before motion transmits, mm.
    pub slack: f64,
    /// Cable stretch per unit tension, mm/N.
    pub compliance: f64,
}

impl BowdenStage {
    pub fn ideal() -> Self {
        Self {
            efficiency_forward: 1.0,
            efficiency_return: 1.0,
            slack: 0.0,
            compliance: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BowdenDirection {
    Forward,
    Return,
}

/// Transfer across a Bowden stage with the trip direction's efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BowdenTransfer {
    pub output_disp: f64,
    pub output_tension: f64,
    /// True when the input displacement never left the slack dead band.
    pub in_slack_band: bool,
}

pub fn bowden_transfer(
    stage: &BowdenStage,
    input_disp: f64,
    input_tension: f64,
    direction: BowdenDirection,
) -> Result<BowdenTransfer, TransmissionError> {
    if input_tension < 0.0 {
        return Err(TransmissionError::NegativeTension(input_tension));
    }
    let eta = match direction {
        BowdenDirection::Forward => stage.efficiency_forward,
        BowdenDirection::Return => stage.efficiency_return,
    };
    let effective = (input_disp - stage.slack).max(0.0);
    Ok(BowdenTransfer {
        output_disp: effective - input_tension * stage.compliance,
        output_tension: input_tension * eta,
        in_slack_band: input_disp > 0.0 && effective == 0.0,
    })
}

/// Hand-side state of the antagonistic tendon pair after routing the
/// actuator's two sides onto the flexion and extension channels of a
/// movable-pulley pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoutedTendons {
    /// Net finger-drive excursion, mm; positive flexes.
    pub net_excursion: f64,
    /// Co-contraction stretch absorbed symmetrically, mm.
    pub co_contraction: f64,
    pub flexion_tension: f64,
    pub extension_tension: f64,
    /// Cable-length bookkeeping residual, mm; zero for a rigid pair.
    pub conservation_residual: f64,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RoutingError {
    #[error("co-contraction {0:.3} mm exceeds the tendon travel limit {1:.3} mm")]
    CoContractionOverTravel(f64, f64),
    #[error("channel tension must be nonnegative, got {0}")]
    NegativeTension(f64),
}

/// Couple the two actuator sides across the movable-pulley pair. The
/// winding displacements split into a differential part (net finger
/// motion) and a common part (co-contraction); cable length is conserved
/// because the extension channel pays out exactly what the flexion
/// channel takes up.
pub fn antagonistic_routing(
    flexion_disp: f64,
    extension_disp: f64,
    tensions: (f64, f64),
    travel_limit: f64,
) -> Result<RoutedTendons, RoutingError> {
    if tensions.0 < 0.0 {
        return Err(RoutingError::NegativeTension(tensions.0));
    }
    if tensions.1 < 0.0 {
        return Err(RoutingError::NegativeTension(tensions.1));
    }
    let net_excursion = 0.5 * (flexion_disp - extension_disp);
    let co_contraction = 0.5 * (flexion_disp + extension_disp);
    if co_contraction > travel_limit {
        return Err(RoutingError::CoContractionOverTravel(
            co_contraction,
            travel_limit,
        ));
    }
    // Flexion channel take-up and extension channel pay-out are both
    // net_excursion; their difference is the residual.
    let take_up = flexion_disp - co_contraction;
    let pay_out = co_contraction - extension_disp;
    Ok(RoutedTendons {
        net_excursion,
        co_contraction,
        flexion_tension: tensions.0,
        extension_tension: tensions.1,
        conservation_residual: take_up - pay_out,
    })
}
