//! Steady states of the map.
//!
//! The unbiased state is available in closed form. When `2 b^2 beta > 1` the
//! price equation gains two more roots, symmetric about the unbiased price and
//! confined to `(P_lo, P_hi)`. Writing `W = k (P - P*)` with
//! `k = (1 - c - omega^2 d h) / (1 - c)`, they solve `W = b tanh(2 b beta W)`,
//! which is bracketed on each side of `P*` and solved with [`brent`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{step, Axis, ModelParams, SigmoidSpec, State};
use crate::roots::brent;
use crate::scalar::Scalar;

/// Below this value of `2 b^2 beta - 1` the biased roots are not resolved.
pub const NEAR_BIFURCATION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SteadyLabel {
    Unbiased,
    Low,
    High,
}

impl SteadyLabel {
    pub fn name(self) -> &'static str {
        match self {
            SteadyLabel::Unbiased => "UNBIASED",
            SteadyLabel::Low => "LOW",
            SteadyLabel::High => "HIGH",
        }
    }
}

impl std::str::FromStr for SteadyLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "unbiased" | "star" => Ok(SteadyLabel::Unbiased),
            "low" => Ok(SteadyLabel::Low),
            "high" => Ok(SteadyLabel::High),
            other => Err(format!("unknown steady state `{other}` (expected unbiased, low or high)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState<T> {
    pub y: T,
    pub p: T,
    pub z: T,
    pub label: SteadyLabel,
}

impl<T: Scalar> SteadyState<T> {
    pub fn state(&self) -> State<T> {
        State::new(self.y, self.p, self.z)
    }

    /// `|| G(S) - S ||_inf`.
    pub fn residual(&self, params: &ModelParams<T>) -> T {
        match step(params, &self.state()) {
            Ok(next) => next.dist(&self.state()),
            Err(_) => T::infinity(),
        }
    }
}

/// Outer bounds for the biased steady states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasedBounds<T> {
    pub p_lo: T,
    pub p_hi: T,
    pub y_lo: T,
    pub y_hi: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateSet<T> {
    pub star: SteadyState<T>,
    pub low: Option<SteadyState<T>>,
    pub high: Option<SteadyState<T>>,
    pub bounds: BiasedBounds<T>,
    /// Biased states are present in this set.
    pub pitchfork_active: bool,
    /// The pitchfork condition holds but the pair is too close to `S*` to resolve.
    pub near_bifurcation: bool,
    /// `b < min(dA / (1 - c), F*)`, sufficient for positive biased states.
    pub positivity_condition: bool,
    /// All components of the returned biased states are positive.
    pub biased_positive: Option<bool>,
}

impl<T: Scalar> SteadyStateSet<T> {
    pub fn get(&self, label: SteadyLabel) -> Option<&SteadyState<T>> {
        match label {
            SteadyLabel::Unbiased => Some(&self.star),
            SteadyLabel::Low => self.low.as_ref(),
            SteadyLabel::High => self.high.as_ref(),
        }
    }

    /// States ordered by price: low, unbiased, high.
    pub fn states(&self) -> Vec<SteadyState<T>> {
        self.low.iter().chain(std::iter::once(&self.star)).chain(self.high.iter()).copied().collect()
    }
}

fn check_denominator<T: Scalar>(params: &ModelParams<T>) -> Result<T> {
    let den = params.interaction_denominator();
    if den > T::zero() {
        Ok(den)
    } else {
        Err(Error::IllPosed { denominator: den.as_f64() })
    }
}

/// Closed-form unbiased steady state.
pub fn unbiased_steady_state<T: Scalar>(params: &ModelParams<T>) -> Result<SteadyState<T>> {
    let den = check_denominator(params)?;
    let w = params.interaction;
    let one = T::one();
    let y = (params.autonomous + w * (one - w) * params.wealth_invest * params.fundamental) / den;
    let p = ((one - w) * (one - params.mpc) * params.fundamental + w * params.income_link * params.autonomous) / den;
    Ok(SteadyState { y, p, z: y, label: SteadyLabel::Unbiased })
}

/// `b > 1 / sqrt(2 beta)`: three steady states exist.
pub fn pitchfork_condition<T: Scalar>(params: &ModelParams<T>) -> bool {
    let b = params.bias;
    T::lit(2.0) * b * b * params.intensity > T::one()
}

pub fn biased_bounds<T: Scalar>(params: &ModelParams<T>) -> Result<BiasedBounds<T>> {
    let den = check_denominator(params)?;
    let star = unbiased_steady_state(params)?;
    let dp = (T::one() - params.mpc) / den * params.bias;
    let dy = params.wealth_invest * params.interaction / den * params.bias;
    Ok(BiasedBounds { p_lo: star.p - dp, p_hi: star.p + dp, y_lo: star.y - dy, y_hi: star.y + dy })
}

/// Income consistent with a steady price: `Y = (A + omega h P) / (1 - c)`.
#[inline]
pub fn income_from_price<T: Scalar>(params: &ModelParams<T>, price: T) -> T {
    (params.autonomous + params.interaction * params.wealth_invest * price) / (T::one() - params.mpc)
}

/// Unbiased state plus, when the pitchfork condition holds, the biased pair.
pub fn biased_steady_states<T: Scalar>(params: &ModelParams<T>) -> Result<SteadyStateSet<T>> {
    let star = unbiased_steady_state(params)?;
    let bounds = biased_bounds(params)?;
    let den = params.interaction_denominator();
    let one = T::one();
    let b = params.bias;
    let positivity_condition = b < (params.income_link * params.autonomous / (one - params.mpc)).min(params.fundamental);

    let mut set = SteadyStateSet {
        star,
        low: None,
        high: None,
        bounds,
        pitchfork_active: false,
        near_bifurcation: false,
        positivity_condition,
        biased_positive: None,
    };
    if !pitchfork_condition(params) {
        return Ok(set);
    }
    let excess = T::lit(2.0) * b * b * params.intensity - one;
    if excess < T::lit(NEAR_BIFURCATION) {
        set.near_bifurcation = true;
        return Ok(set);
    }

    let k = den / (one - params.mpc);
    let gain = T::lit(2.0) * b * params.intensity;
    let pstar = star.p;
    let f = |p: T| {
        let w = k * (p - pstar);
        w - b * (gain * w).tanh()
    };
    let eps = T::lit(1e-9).max(T::lit(64.0) * T::epsilon()) * pstar.abs().max(one);
    let xtol = T::lit(1e-14) * pstar.abs().max(one);
    // the outer root approaches the bound as beta grows; pad against roundoff
    let pad = T::lit(64.0) * T::epsilon() * bounds.p_hi.abs().max(bounds.p_lo.abs()).max(one);
    let hi = brent(f, pstar + eps, bounds.p_hi + pad, xtol)?.x.min(bounds.p_hi);
    let lo = brent(f, bounds.p_lo - pad, pstar - eps, xtol)?.x.max(bounds.p_lo);

    let make = |p: T, label| {
        let y = income_from_price(params, p);
        SteadyState { y, p, z: y, label }
    };
    let low = make(lo, SteadyLabel::Low);
    let high = make(hi, SteadyLabel::High);
    let positive = [low.y, low.p, high.y, high.p].iter().all(|v| *v > T::zero());
    set.low = Some(low);
    set.high = Some(high);
    set.pitchfork_active = true;
    set.biased_positive = Some(positive);
    Ok(set)
}

impl<T: Scalar> ModelParams<T> {
    /// Adjustment bounds scaled to the unbiased steady state:
    /// `g_P` in `(-4 P*/F*, 2 P*/F*)`, `g_I` in `(-6 Y*(1-c)/A, 3 Y*(1-c)/A)`.
    pub fn with_scaled_bounds(&self) -> Result<Self> {
        let star = unbiased_steady_state(self)?;
        let pr = star.p / self.fundamental;
        let yr = star.y * (T::one() - self.mpc) / self.autonomous;
        let mut q = *self;
        q.price_bounds = SigmoidSpec::new(T::lit(2.0) * pr, T::lit(4.0) * pr);
        q.invest_bounds = SigmoidSpec::new(T::lit(3.0) * yr, T::lit(6.0) * yr);
        Ok(q)
    }
}

/// One row of a comparative-statics sweep. Missing biased states are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub value: T,
    pub y_low: Option<T>,
    pub y_star: Option<T>,
    pub y_high: Option<T>,
    pub p_low: Option<T>,
    pub p_star: Option<T>,
    pub p_high: Option<T>,
    pub flags: Vec<&'static str>,
}

/// Steady states along `axis` at every grid value. Per-point failures are
/// recorded in `flags` and never abort the sweep.
pub fn sweep_steady_states<T: Scalar>(params: &ModelParams<T>, axis: Axis, grid: &[T]) -> Vec<SweepRow<T>> {
    grid.par_iter()
        .map(|&v| {
            let q = axis.with(params, v);
            let mut row = SweepRow {
                value: v,
                y_low: None,
                y_star: None,
                y_high: None,
                p_low: None,
                p_star: None,
                p_high: None,
                flags: Vec::new(),
            };
            match biased_steady_states(&q) {
                Ok(set) => {
                    row.y_star = Some(set.star.y);
                    row.p_star = Some(set.star.p);
                    row.y_low = set.low.map(|s| s.y);
                    row.p_low = set.low.map(|s| s.p);
                    row.y_high = set.high.map(|s| s.y);
                    row.p_high = set.high.map(|s| s.p);
                    if set.near_bifurcation {
                        row.flags.push("near-bifurcation");
                    }
                    if !set.positivity_condition {
                        row.flags.push("positivity-not-guaranteed");
                    }
                    if set.biased_positive == Some(false) {
                        row.flags.push("negative-biased-state");
                    }
                }
                Err(Error::IllPosed { .. }) => row.flags.push("ill-posed"),
                Err(Error::RootNotBracketed { .. }) => row.flags.push("root-not-bracketed"),
                Err(_) => row.flags.push("numerical-failure"),
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn unbiased_at_zero_interaction() {
        let p = presets::set1(0.0, 1.0);
        let s = unbiased_steady_state(&p).unwrap();
        assert!((s.y - 15.0 / 0.62).abs() < 1e-12);
        assert!((s.p - 15.0).abs() < 1e-12);
        assert_eq!(s.z, s.y);
    }

    #[test]
    fn unbiased_full_interaction() {
        let p = presets::set1(1.0, 1.0);
        let s = unbiased_steady_state(&p).unwrap();
        let den = 0.62 - 0.1444;
        assert!((s.y - 15.0 / den).abs() < 1e-11);
        assert!((s.p - 5.7 / den).abs() < 1e-11);
        assert!(s.residual(&p) < 1e-10);
    }

    #[test]
    fn unbiased_independent_of_belief_parameters() {
        let p = presets::set1(0.6, 1.0);
        let s0 = unbiased_steady_state(&p).unwrap();
        for (b, beta) in [(0.1, 0.3), (2.0, 50.0), (0.5, 0.0)] {
            let mut q = p;
            q.bias = b;
            q.intensity = beta;
            assert_eq!(unbiased_steady_state(&q).unwrap(), s0);
        }
    }

    #[test]
    fn ill_posed_is_reported() {
        let mut p = presets::set1(1.0, 1.0);
        p.mpc = 0.9;
        p.wealth_invest = 1.0;
        p.income_link = 1.0;
        assert!(matches!(unbiased_steady_state(&p), Err(Error::IllPosed { .. })));
        assert!(matches!(biased_bounds(&p), Err(Error::IllPosed { .. })));
    }

    #[test]
    fn pitchfork_threshold() {
        let p = presets::set1(1.0, 2.0);
        assert!(!pitchfork_condition(&p));
        assert!(pitchfork_condition(&Axis::Beta.with(&p, 2.01)));
        assert!(!pitchfork_condition(&Axis::Beta.with(&p, 1.99)));
        assert!(!pitchfork_condition(&Axis::Beta.with(&p, 0.0)));
    }

    #[test]
    fn bounds_closed_form() {
        let b0 = biased_bounds(&presets::set1(0.0, 3.0)).unwrap();
        assert_eq!(b0.y_lo, b0.y_hi);
        let p = presets::set1(1.0, 3.0);
        let b1 = biased_bounds(&p).unwrap();
        let s = unbiased_steady_state(&p).unwrap();
        assert!((b1.p_hi - s.p - 0.62 * 0.5 / 0.4756).abs() < 1e-12);
        assert!(((s.p - b1.p_lo) - (b1.p_hi - s.p)).abs() < 1e-12);
    }

    #[test]
    fn single_state_below_threshold() {
        let set = biased_steady_states(&presets::set1(1.0, 2.0)).unwrap();
        assert!(set.low.is_none() && set.high.is_none() && !set.pitchfork_active);
    }

    #[test]
    fn near_threshold_is_annotated() {
        let set = biased_steady_states(&presets::set1(1.0, 2.0 + 1e-9)).unwrap();
        assert!(set.near_bifurcation && !set.pitchfork_active);
    }

    #[test]
    fn biased_pair_symmetric_ordered_and_fixed() {
        let p = presets::set1(1.0, 3.0);
        let set = biased_steady_states(&p).unwrap();
        let (lo, hi, st, bd) = (set.low.unwrap(), set.high.unwrap(), set.star, set.bounds);
        assert!((lo.p + hi.p - 2.0 * st.p).abs() < 1e-8);
        assert!((lo.y + hi.y - 2.0 * st.y).abs() < 1e-8);
        assert!(bd.p_lo < lo.p && lo.p < st.p && st.p < hi.p && hi.p < bd.p_hi);
        for s in [lo, hi] {
            assert!(s.residual(&p) < 1e-9);
            assert!((s.y - income_from_price(&p, s.p)).abs() < 1e-12);
        }
        assert!(set.positivity_condition);
        assert_eq!(set.biased_positive, Some(true));
    }

    #[test]
    fn large_intensity_limit() {
        let p = presets::set1(1.0, 1e6);
        let set = biased_steady_states(&p).unwrap();
        assert!((set.high.unwrap().p - set.bounds.p_hi).abs() < 1e-3);
        assert!((set.low.unwrap().p - set.bounds.p_lo).abs() < 1e-3);
    }

    #[test]
    fn scaled_bounds_at_zero_interaction() {
        let p = presets::set1(0.0, 1.0);
        assert!((p.price_bounds.upper - 2.0).abs() < 1e-12);
        assert!((p.price_bounds.lower - 4.0).abs() < 1e-12);
        assert!((p.invest_bounds.upper - 3.0).abs() < 1e-12);
        assert!((p.invest_bounds.lower - 6.0).abs() < 1e-12);
    }

    #[test]
    fn beta_sweep_shapes() {
        let p = presets::fig1a();
        let grid: Vec<f64> = (0..60).map(|i| 2.05 + 0.25 * i as f64).collect();
        let rows = sweep_steady_states(&p, Axis::Beta, &grid);
        for w in rows.windows(2) {
            assert!(w[1].y_high.unwrap() > w[0].y_high.unwrap());
            assert!(w[1].y_low.unwrap() < w[0].y_low.unwrap());
            assert_eq!(w[1].y_star, w[0].y_star);
        }
    }

    #[test]
    fn bias_sweep_switches_at_threshold() {
        let p = presets::set1(1.0, 2.0);
        // threshold b = 1/sqrt(4) = 0.5
        let grid = [0.3, 0.45, 0.499, 0.5, 0.501, 0.6, 0.9];
        let rows = sweep_steady_states(&p, Axis::Bias, &grid);
        let present: Vec<bool> = rows.iter().map(|r| r.p_high.is_some()).collect();
        assert_eq!(present, vec![false, false, false, false, true, true, true]);
        for r in rows.iter().filter(|r| r.p_high.is_some()) {
            assert!(r.p_low.is_some());
        }
    }

    #[test]
    fn omega_sweep_increasing_price_when_income_link_dominates() {
        // dA - F(1 - c) = 0.5*10 - 8*0.5 > 0
        let p = presets::fig2(8.0);
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        let rows = sweep_steady_states(&p, Axis::Omega, &grid);
        for w in rows.windows(2) {
            assert!(w[1].p_star.unwrap() >= w[0].p_star.unwrap());
        }
    }
}
