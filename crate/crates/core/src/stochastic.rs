//! Noisy demand and the statistics of the resulting returns.
//!
//! Each group's demand carries its own i.i.d. shock; since both enter the
//! price adjustment linearly they collapse into one normal shock of standard
//! deviation `s` inside `g_P`. Shocks come from ChaCha8 seeded with
//! `seed` on stream `stream`, mapped to normals by the ziggurat sampler of
//! `rand_distr`, so paths replay exactly on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::dynamics::InitialDatum;
use crate::equilibria::unbiased_steady_state;
use crate::error::{Error, Result};
use crate::model::{advance, Axis, ModelParams, State};
use crate::scalar::Scalar;

/// Shock scale relative to `P* / F*` used for the stylized facts.
pub const SHOCK_SCALE: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig<T> {
    /// Standard deviation of the aggregate shock.
    pub s: T,
    pub seed: u64,
    /// Total number of steps, burn-in included.
    pub length: usize,
    pub burn_in: usize,
    /// Generator stream, so that parallel runs sharing a seed stay independent.
    pub stream: u64,
}

impl<T: Scalar> Default for NoiseConfig<T> {
    fn default() -> Self {
        Self { s: T::zero(), seed: 0, length: 200_000, burn_in: 10_000, stream: 0 }
    }
}

impl<T: Scalar> NoiseConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.s >= T::zero()) || !self.s.is_finite() {
            return Err(Error::InvalidParameter { name: "stochastic.s", reason: format!("must be finite and non-negative, got {}", self.s) });
        }
        if self.length <= self.burn_in {
            return Err(Error::InvalidParameter {
                name: "stochastic.length",
                reason: format!("must exceed burn-in {}, got {}", self.burn_in, self.length),
            });
        }
        Ok(())
    }
}

/// One step with an aggregate demand shock.
#[inline]
pub fn noisy_step<T: Scalar>(params: &ModelParams<T>, s: &State<T>, shock: T) -> Result<State<T>> {
    let next = advance(params, s, shock);
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::NonFinite)
    }
}

/// Shock on the aggregate demand produced by group-specific shocks.
pub fn aggregate_shock<T: Scalar>(alpha: T, optimist_shock: T, pessimist_shock: T) -> T {
    alpha * optimist_shock + (T::one() - alpha) * pessimist_shock
}

#[derive(Debug, Clone, PartialEq)]
pub struct StochasticPath<T> {
    /// States after the burn-in, `states[i]` at time `burn_in + i`.
    pub states: Vec<State<T>>,
    /// The path left the finite range and was cut short.
    pub truncated: bool,
}

impl<T: Scalar> StochasticPath<T> {
    pub fn prices(&self) -> Vec<T> {
        self.states.iter().map(|s| s.p).collect()
    }
}

/// Seeded noisy path; time 0 is `initial`, times `burn_in..length` are kept.
pub fn simulate_stochastic<T: Scalar>(params: &ModelParams<T>, initial: State<T>, noise: &NoiseConfig<T>) -> StochasticPath<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    rng.set_stream(noise.stream);
    let mut states = Vec::with_capacity(noise.length.saturating_sub(noise.burn_in));
    let mut cur = initial;
    if noise.burn_in == 0 {
        states.push(cur);
    }
    let quiet = noise.s == T::zero();
    for t in 1..noise.length {
        let shock = if quiet {
            T::zero()
        } else {
            let z: f64 = StandardNormal.sample(&mut rng);
            noise.s * T::lit(z)
        };
        let next = advance(params, &cur, shock);
        if !next.is_finite() {
            return StochasticPath { states, truncated: true };
        }
        cur = next;
        if t >= noise.burn_in {
            states.push(cur);
        }
    }
    StochasticPath { states, truncated: false }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnsSeries<T> {
    /// `returns[t - 1] = ln P_t - ln P_{t-1}`; `NaN` where a price is not positive.
    pub returns: Vec<T>,
    pub skipped: usize,
}

impl<T: Scalar> ReturnsSeries<T> {
    pub fn valid(&self) -> Vec<T> {
        self.returns.iter().copied().filter(|r| !r.is_nan()).collect()
    }

    pub fn absolute(&self) -> Vec<T> {
        self.returns.iter().filter(|r| !r.is_nan()).map(|r| r.abs()).collect()
    }
}

pub fn log_returns<T: Scalar>(prices: &[T]) -> Result<ReturnsSeries<T>> {
    if prices.len() < 2 {
        return Err(Error::TooShort { len: prices.len(), min: 2 });
    }
    let mut skipped = 0;
    let returns = prices
        .windows(2)
        .map(|w| {
            if w[0] > T::zero() && w[1] > T::zero() {
                w[1].ln() - w[0].ln()
            } else {
                skipped += 1;
                T::nan()
            }
        })
        .collect();
    Ok(ReturnsSeries { returns, skipped })
}

fn mean<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |a, &x| a + x) / T::lit(xs.len() as f64)
}

/// Fourth standardized moment (3 for a normal sample).
pub fn kurtosis<T: Scalar>(series: &[T]) -> Result<T> {
    if series.len() < 4 {
        return Err(Error::TooShort { len: series.len(), min: 4 });
    }
    let m = mean(series);
    let (m2, m4) = series.iter().fold((T::zero(), T::zero()), |(a2, a4), &x| {
        let d2 = (x - m) * (x - m);
        (a2 + d2, a4 + d2 * d2)
    });
    if !(m2 > T::zero()) {
        return Err(Error::DegenerateSeries);
    }
    let n = T::lit(series.len() as f64);
    let var = m2 / n;
    Ok(m4 / n / (var * var))
}

/// Sample autocorrelations at lags `0..=max_lag`.
pub fn autocorrelation<T: Scalar>(series: &[T], max_lag: usize) -> Result<Vec<T>> {
    if series.len() <= max_lag + 1 {
        return Err(Error::TooShort { len: series.len(), min: max_lag + 2 });
    }
    let m = mean(series);
    let dev: Vec<T> = series.iter().map(|&x| x - m).collect();
    let denom = dev.iter().fold(T::zero(), |a, &d| a + d * d);
    if !(denom > T::zero()) {
        return Err(Error::DegenerateSeries);
    }
    Ok((0..=max_lag)
        .map(|k| dev.iter().zip(&dev[k..]).fold(T::zero(), |a, (&x, &y)| a + x * y) / denom)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KurtosisCell<T> {
    pub beta: T,
    pub omega: T,
    pub kurtosis: Option<T>,
    pub n_valid: usize,
    pub truncated: bool,
}

/// Shock standard deviation `coef * P* / F*` at the given parameters.
pub fn scaled_shock<T: Scalar>(params: &ModelParams<T>, coef: T) -> Result<T> {
    Ok(coef * unbiased_steady_state(params)?.p / params.fundamental)
}

/// Kurtosis of log returns over a `(beta, omega)` grid, omega outer.
///
/// Every cell starts from `S* + 1e-3`, draws its shocks from stream `index`
/// of `noise.seed` and scales the shock to `coef * P* / F*`.
pub fn kurtosis_grid<T: Scalar>(
    params: &ModelParams<T>,
    betas: &[T],
    omegas: &[T],
    coef: T,
    noise: &NoiseConfig<T>,
    rescale_bounds: bool,
) -> Vec<KurtosisCell<T>> {
    let cells: Vec<(T, T)> = omegas.iter().flat_map(|&w| betas.iter().map(move |&b| (b, w))).collect();
    cells
        .par_iter()
        .enumerate()
        .map(|(index, &(beta, omega))| {
            let mut cell = KurtosisCell { beta, omega, kurtosis: None, n_valid: 0, truncated: false };
            let raw = Axis::Omega.with(&Axis::Beta.with(params, beta), omega);
            let q = if rescale_bounds { raw.with_scaled_bounds() } else { Ok(raw) };
            let Ok(q) = q else { return cell };
            let (Ok(s), Ok(init)) = (scaled_shock(&q, coef), InitialDatum::Plus.resolve(&q)) else { return cell };
            let cfg = NoiseConfig { s, stream: index as u64, ..*noise };
            let path = simulate_stochastic(&q, init, &cfg);
            cell.truncated = path.truncated;
            if let Ok(r) = log_returns(&path.prices()) {
                let valid = r.valid();
                cell.n_valid = valid.len();
                cell.kurtosis = kurtosis(&valid).ok();
            }
            cell
        })
        .collect()
}
