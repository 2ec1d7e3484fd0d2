//! Local stability of the steady states.
//!
//! At every steady state the Jacobian has the same shape,
//!
//! ```text
//! | c + gamma   omega h   -gamma |
//! | omega d E   1 - E      0     |
//! | 1           0          0     |
//! ```
//!
//! with `E = mu sigma (1 - 2 b^2 beta)` at the unbiased state and
//! `E = mu sigma (1 + 2 beta (W^2 - b^2))` at the biased ones. Stability is
//! decided by the Farebrother conditions on the characteristic cubic and
//! cross-checked against its roots.

use num_complex::Complex;
use rayon::prelude::*;

use crate::cubic::cubic_roots;
use crate::equilibria::{biased_steady_states, unbiased_steady_state, SteadyLabel, SteadyState};
use crate::error::{Error, Result};
use crate::model::{Axis, ModelParams};
use crate::roots::brent;
use crate::scalar::Scalar;

/// Largest accepted fixed-point residual for a state passed in as steady.
pub const STEADY_RESIDUAL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianEval<T> {
    pub matrix: [[T; 3]; 3],
    pub e_eff: T,
    pub w: T,
    pub at: SteadyLabel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport<T> {
    /// `(C1, C2, C3)` of `lambda^3 + C1 lambda^2 + C2 lambda + C3`.
    pub coeffs: [T; 3],
    pub conditions: [bool; 4],
    /// `1 + C1 + C2 + C3`, `1 - C1 + C2 - C3`, `1 - C2 + C1 C3 - C3^2`, `3 - C2`.
    pub margins: [T; 4],
    pub stable: bool,
    pub eigenvalues: [Complex<T>; 3],
    pub spectral_radius: T,
    pub e_eff: T,
    pub at: SteadyLabel,
}

impl<T: Scalar> StabilityReport<T> {
    pub fn margin_min(&self) -> T {
        self.margins.iter().fold(T::infinity(), |m, &x| m.min(x))
    }
}

/// `(E_eff, W)` at a steady state; fails if `state` is not a fixed point.
pub fn effective_slope<T: Scalar>(params: &ModelParams<T>, state: &SteadyState<T>) -> Result<(T, T)> {
    let residual = state.residual(params);
    if !(residual <= T::lit(STEADY_RESIDUAL)) {
        return Err(Error::NotASteadyState { residual: residual.as_f64() });
    }
    let gain = params.demand_reactivity * params.price_reactivity;
    let two = T::lit(2.0);
    let b2 = params.bias * params.bias;
    match state.label {
        SteadyLabel::Unbiased => Ok((gain * (T::one() - two * b2 * params.intensity), T::zero())),
        SteadyLabel::Low | SteadyLabel::High => {
            let star = unbiased_steady_state(params)?;
            let k = params.interaction_denominator() / (T::one() - params.mpc);
            let w = k * (state.p - star.p);
            Ok((gain * (T::one() + two * params.intensity * (w * w - b2)), w))
        }
    }
}

/// Jacobian with a given effective slope.
pub fn jacobian_matrix<T: Scalar>(params: &ModelParams<T>, e_eff: T) -> [[T; 3]; 3] {
    let (c, g, w) = (params.mpc, params.accelerator, params.interaction);
    let (z, one) = (T::zero(), T::one());
    [
        [c + g, w * params.wealth_invest, -g],
        [w * params.income_link * e_eff, one - e_eff, z],
        [one, z, z],
    ]
}

pub fn jacobian_at<T: Scalar>(params: &ModelParams<T>, state: &SteadyState<T>) -> Result<JacobianEval<T>> {
    let (e_eff, w) = effective_slope(params, state)?;
    Ok(JacobianEval { matrix: jacobian_matrix(params, e_eff), e_eff, w, at: state.label })
}

/// Characteristic coefficients for a given effective slope.
pub fn characteristic<T: Scalar>(params: &ModelParams<T>, e: T) -> [T; 3] {
    let (c, g) = (params.mpc, params.accelerator);
    let q = params.interaction * params.interaction * params.income_link * params.wealth_invest;
    let two = T::lit(2.0);
    [-c - g - T::one() + e, two * g + c - c * e - g * e - q * e, g * (e - T::one())]
}

/// Stability verdict from the effective slope alone.
pub fn report_for_slope<T: Scalar>(params: &ModelParams<T>, e_eff: T, at: SteadyLabel) -> StabilityReport<T> {
    let coeffs = characteristic(params, e_eff);
    let [c1, c2, c3] = coeffs;
    let one = T::one();
    let margins = [
        one + c1 + c2 + c3,
        one - c1 + c2 - c3,
        one - c2 + c1 * c3 - c3 * c3,
        T::lit(3.0) - c2,
    ];
    let conditions = [e_eff > T::zero(), margins[1] > T::zero(), margins[2] > T::zero(), margins[3] > T::zero()];
    let eigenvalues = cubic_roots(c1, c2, c3);
    let spectral_radius = eigenvalues.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    StabilityReport {
        coeffs,
        conditions,
        margins,
        stable: conditions.iter().all(|&x| x),
        eigenvalues,
        spectral_radius,
        e_eff,
        at,
    }
}

pub fn farebrother_report<T: Scalar>(params: &ModelParams<T>, state: &SteadyState<T>) -> Result<StabilityReport<T>> {
    let (e_eff, _) = effective_slope(params, state)?;
    Ok(report_for_slope(params, e_eff, state.label))
}

/// Shape of the stability verdict along a parameter axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioLabel {
    UnconditionallyStable,
    UnconditionallyUnstable,
    /// Unstable, then stable.
    Stabilizing,
    /// Stable, then unstable.
    Destabilizing,
    /// Stable only on an intermediate interval.
    Mixed,
    /// Unstable only on an intermediate interval, or more than two switches.
    Irregular,
}

impl ScenarioLabel {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioLabel::UnconditionallyStable => "UNCONDITIONALLY_STABLE",
            ScenarioLabel::UnconditionallyUnstable => "UNCONDITIONALLY_UNSTABLE",
            ScenarioLabel::Stabilizing => "STABILIZING",
            ScenarioLabel::Destabilizing => "DESTABILIZING",
            ScenarioLabel::Mixed => "MIXED",
            ScenarioLabel::Irregular => "IRREGULAR",
        }
    }

    /// The verdict does not depend on the scanned parameter.
    pub fn is_neutral(self) -> bool {
        matches!(self, ScenarioLabel::UnconditionallyStable | ScenarioLabel::UnconditionallyUnstable)
    }
}

impl std::fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub label: ScenarioLabel,
    /// Parameter values where the verdict switches, ascending.
    pub thresholds: Vec<T>,
    /// Verdict on the first and last scanned point where the target exists.
    pub first_stable: bool,
    pub last_stable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub points: usize,
    pub tolerance: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { points: 401, tolerance: 1e-6 }
    }
}

/// Stability of `target` at the given parameters; `None` when it does not exist.
pub fn target_verdict<T: Scalar>(params: &ModelParams<T>, target: SteadyLabel) -> Result<Option<bool>> {
    let set = biased_steady_states(params)?;
    match set.get(target) {
        Some(s) => Ok(Some(farebrother_report(params, s)?.stable)),
        None => Ok(None),
    }
}

/// Scans stability of `target` along `axis` over `[lo, hi]`, refines every
/// verdict switch by bisection and labels the profile.
pub fn classify_scenario<T: Scalar>(
    params: &ModelParams<T>,
    axis: Axis,
    lo: T,
    hi: T,
    target: SteadyLabel,
    opts: ScanOptions,
) -> Result<Scenario<T>> {
    if !(lo < hi) {
        return Err(Error::InvalidParameter { name: "range", reason: format!("empty range [{lo}, {hi}]") });
    }
    let n = opts.points.max(2);
    let verdict = |v: T| target_verdict(&axis.with(params, v), target);
    let grid = crate::scalar::linspace(lo, hi, n);
    let mut profile = Vec::with_capacity(n);
    for &v in &grid {
        if let Some(s) = verdict(v)? {
            profile.push((v, s));
        }
    }
    if profile.is_empty() {
        return Err(Error::TargetAbsent);
    }
    let tol = T::lit(opts.tolerance);
    let mut thresholds = Vec::new();
    for pair in profile.windows(2) {
        let ((mut a, sa), (mut b, sb)) = (pair[0], pair[1]);
        if sa == sb {
            continue;
        }
        while b - a > tol {
            let m = (a + b) * T::lit(0.5);
            match verdict(m)? {
                Some(s) if s == sa => a = m,
                Some(_) => b = m,
                None => break,
            }
        }
        thresholds.push((a + b) * T::lit(0.5));
    }
    let first_stable = profile[0].1;
    let last_stable = profile[profile.len() - 1].1;
    let label = match (thresholds.len(), first_stable) {
        (0, true) => ScenarioLabel::UnconditionallyStable,
        (0, false) => ScenarioLabel::UnconditionallyUnstable,
        (1, false) => ScenarioLabel::Stabilizing,
        (1, true) => ScenarioLabel::Destabilizing,
        (2, false) => ScenarioLabel::Mixed,
        _ => ScenarioLabel::Irregular,
    };
    Ok(Scenario { label, thresholds, first_stable, last_stable })
}

/// Stability summary of one `(beta, omega)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCell<T> {
    pub beta: T,
    pub omega: T,
    pub star: Option<StabilityReport<T>>,
    pub high: Option<StabilityReport<T>>,
    pub failed: bool,
}

impl<T: Scalar> RegionCell<T> {
    pub fn star_stable(&self) -> bool {
        self.star.map(|r| r.stable).unwrap_or(false)
    }

    pub fn biased_exists(&self) -> bool {
        self.high.is_some()
    }

    pub fn high_stable(&self) -> bool {
        self.high.map(|r| r.stable).unwrap_or(false)
    }

    /// Smallest Farebrother margin at the unbiased state.
    pub fn margin_min(&self) -> Option<T> {
        self.star.map(|r| r.margin_min())
    }
}

/// Row-major grid (omega outer, beta inner) of stability verdicts for the
/// unbiased state and, where it exists, the high biased state.
pub fn stability_region_grid<T: Scalar>(params: &ModelParams<T>, betas: &[T], omegas: &[T]) -> Vec<RegionCell<T>> {
    let cells: Vec<(T, T)> = omegas.iter().flat_map(|&w| betas.iter().map(move |&b| (b, w))).collect();
    cells
        .par_iter()
        .map(|&(beta, omega)| {
            let mut q = *params;
            q.intensity = beta;
            q.interaction = omega;
            let mut cell = RegionCell { beta, omega, star: None, high: None, failed: false };
            match biased_steady_states(&q) {
                Ok(set) => {
                    cell.star = farebrother_report(&q, &set.star).ok();
                    cell.high = set.high.and_then(|h| farebrother_report(&q, &h).ok());
                    cell.failed = cell.star.is_none() || (set.high.is_some() && cell.high.is_none());
                }
                Err(_) => cell.failed = true,
            }
            cell
        })
        .collect()
}

/// `atanh(z) (1 - z^2) / (2 z)`, decreasing from 1/2 at `z = 0` to 0 at `z = 1`.
pub fn mirror_profile<T: Scalar>(z: T) -> T {
    let z2 = z * z;
    if z2 < T::epsilon() {
        return T::lit(0.5) * (T::one() - T::lit(2.0 / 3.0) * z2);
    }
    z.atanh() * (T::one() - z2) / (T::lit(2.0) * z)
}

/// Intensity of choice on the biased side whose biased Jacobian shares the
/// eigenvalues of the unbiased Jacobian at `beta`.
pub fn beta_mirror<T: Scalar>(params: &ModelParams<T>, beta: T) -> Result<T> {
    let b2 = params.bias * params.bias;
    let upper = (T::lit(2.0) * b2).recip();
    if !(beta > T::zero() && beta < upper) {
        return Err(Error::OutOfDomain { value: beta.as_f64(), lo: 0.0, hi: upper.as_f64() });
    }
    let target = beta * b2;
    let z_lo = T::lit(1e-4);
    let z_hi = T::one() - T::epsilon();
    let f = |z: T| mirror_profile(z) - target;
    let z = if f(z_lo) <= T::zero() {
        // close to the pitchfork: h(z) ~ 1/2 - z^2/3
        (T::lit(1.5) - T::lit(3.0) * target).max(T::zero()).sqrt()
    } else {
        brent(f, z_lo, z_hi, T::epsilon())?.x
    };
    if z == T::zero() {
        return Ok(upper);
    }
    Ok(z.atanh() / (T::lit(2.0) * b2 * z))
}
