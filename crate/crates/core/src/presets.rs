//! Parameter tables used throughout the analyses.
//!
//! The simulation families share `F* = A = 15`, `c = d = h = 0.38`,
//! `b = 0.5`, `mu = 1` and differ in `sigma` and `gamma`. Every preset has its
//! adjustment bounds scaled to the local unbiased steady state.

use crate::model::{ModelParams, SigmoidSpec};

/// Fundamental values of the three interaction sweeps: increasing,
/// U-shaped and decreasing unbiased price along omega.
pub const SWEEP_FUNDAMENTALS: [f64; 3] = [8.0, 20.0, 35.0];

#[allow(clippy::too_many_arguments)]
fn build(
    autonomous: f64,
    fundamental: f64,
    mpc: f64,
    link: f64,
    sigma: f64,
    gamma: f64,
    omega: f64,
    beta: f64,
) -> ModelParams<f64> {
    ModelParams {
        autonomous,
        mpc,
        accelerator: gamma,
        interaction: omega,
        wealth_invest: link,
        price_reactivity: sigma,
        demand_reactivity: 1.0,
        fundamental,
        income_link: link,
        bias: 0.5,
        intensity: beta,
        invest_bounds: SigmoidSpec::new(3.0, 6.0),
        price_bounds: SigmoidSpec::new(2.0, 4.0),
    }
    .with_scaled_bounds()
    .expect("preset is well posed")
}

/// Shared economy with the given market-maker reactivity and accelerator.
pub fn family(sigma: f64, gamma: f64, omega: f64, beta: f64) -> ModelParams<f64> {
    build(15.0, 15.0, 0.38, 0.38, sigma, gamma, omega, beta)
}

/// `sigma = 3`, `gamma = 0.8`: pitchfork, flip cascade, stylized facts.
pub fn set1(omega: f64, beta: f64) -> ModelParams<f64> {
    family(3.0, 0.8, omega, beta)
}

/// `sigma = 1.3`, `gamma = 1.05`: stabilizing interaction, Neimark-Sacker.
pub fn set2(omega: f64, beta: f64) -> ModelParams<f64> {
    family(1.3, 1.05, omega, beta)
}

/// `sigma = 4`, `gamma = 1.05`: mixed scenarios along both axes.
pub fn set3(omega: f64, beta: f64) -> ModelParams<f64> {
    family(4.0, 1.05, omega, beta)
}

/// Steady incomes along beta: `c = d = h = 0.5`, `A = F* = 10`, `omega = 1`, `b = 0.5`.
pub fn fig1a() -> ModelParams<f64> {
    build(10.0, 10.0, 0.5, 0.5, 1.0, 1.0, 1.0, 1.0)
}

/// Steady incomes along the bias at `beta = 1`.
pub fn fig1b() -> ModelParams<f64> {
    fig1a()
}

/// Steady prices along omega: `A = 10`, `c = d = h = 0.5`, `b = beta = 1`.
pub fn fig2(fundamental: f64) -> ModelParams<f64> {
    let mut p = build(10.0, fundamental, 0.5, 0.5, 1.0, 1.0, 0.0, 1.0);
    p.bias = 1.0;
    p
}

/// Mixed interaction window: `c = 0.5`, `gamma = 1.1`, `d h = 0.2` and
/// effective slope `mu sigma (1 - 2 b^2 beta) = 1.9`.
pub fn mixed_window(omega: f64) -> ModelParams<f64> {
    let link = 0.2f64.sqrt();
    build(15.0, 15.0, 0.5, link, 3.8, 1.1, omega, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_validate() {
        for p in [set1(1.0, 3.0), set2(0.575, 0.4), set3(0.8, 1.03), fig1a(), fig2(20.0), mixed_window(0.95)] {
            p.validate().unwrap();
            assert!(p.well_posed());
        }
    }

    #[test]
    fn mixed_window_slope() {
        let p = mixed_window(0.5);
        let e = p.demand_reactivity * p.price_reactivity * (1.0 - 2.0 * p.bias * p.bias * p.intensity);
        assert!((e - 1.9).abs() < 1e-12);
        assert!((p.income_link * p.wealth_invest - 0.2).abs() < 1e-15);
    }
}
