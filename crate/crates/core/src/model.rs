//! The three-dimensional map coupling the real and financial sectors.
//!
//! State `(Y, P, Z)` holds national income, asset price and lagged income.
//! One application of [`step`] is
//!
//! ```text
//! Y' = A + c Y + gamma g_I(Y - Z) + omega h P
//! P' = P + sigma g_P( mu ((1 - omega) F + omega d Y - P + b (2 alpha - 1)) )
//! Z' = Y
//! ```
//!
//! with `alpha = 1 / (1 + exp(-4 b beta (P - (1 - omega) F - omega d Y)))`
//! the share of optimists and `g_I`, `g_P` the bounded piecewise-tanh
//! adjustment functions of [`SigmoidSpec`].

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bounds of the piecewise-tanh adjustment function.
///
/// `upper` is approached as the argument tends to `+inf`, `-lower` as it
/// tends to `-inf`. Slope at zero is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmoidSpec<T> {
    pub upper: T,
    pub lower: T,
}

impl<T: Scalar> SigmoidSpec<T> {
    pub fn new(upper: T, lower: T) -> Self {
        Self { upper, lower }
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        if !(self.upper > T::zero() && self.upper.is_finite()) || !(self.lower > T::zero() && self.lower.is_finite()) {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("sigmoid bounds must be positive, got ({}, {})", self.upper, self.lower),
            });
        }
        Ok(())
    }

    /// `upper * tanh(z / upper)` for `z >= 0`, `lower * tanh(z / lower)` otherwise.
    #[inline]
    pub fn eval(&self, z: T) -> T {
        let a = self.branch(z);
        a * (z / a).tanh()
    }

    /// Derivative of [`eval`](Self::eval): `sech^2(z / a)` on the active branch.
    #[inline]
    pub fn deriv(&self, z: T) -> T {
        let a = self.branch(z);
        let c = (z / a).cosh();
        if c.is_finite() {
            (c * c).recip()
        } else {
            T::zero()
        }
    }

    #[inline]
    fn branch(&self, z: T) -> T {
        if z >= T::zero() {
            self.upper
        } else {
            self.lower
        }
    }
}

/// Structural, behavioural and interaction parameters of the economy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Sum of autonomous consumption, investment and government expenditure (`A`).
    pub autonomous: T,
    /// Marginal propensity to consume (`c`), in (0, 1).
    pub mpc: T,
    /// Accelerator (`gamma`).
    pub accelerator: T,
    /// Degree of interaction between the two markets (`omega`), in [0, 1].
    pub interaction: T,
    /// Propensity to invest out of stock wealth (`h`).
    pub wealth_invest: T,
    /// Market-maker price reactivity (`sigma`).
    pub price_reactivity: T,
    /// Reactivity of the agents' demand (`mu`).
    pub demand_reactivity: T,
    /// Exogenous fundamental value (`F*`).
    pub fundamental: T,
    /// Income-to-fundamental linkage (`d`).
    pub income_link: T,
    /// Optimism/pessimism bias (`b`).
    pub bias: T,
    /// Intensity of choice (`beta`), zero allowed.
    pub intensity: T,
    /// Investment adjustment bounds (`g_I`).
    pub invest_bounds: SigmoidSpec<T>,
    /// Price adjustment bounds (`g_P`).
    pub price_bounds: SigmoidSpec<T>,
}

/// Parameter that a sweep, diagram or scenario scan varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Beta,
    Bias,
    Omega,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Beta => "beta",
            Axis::Bias => "b",
            Axis::Omega => "omega",
        }
    }

    pub fn get<T: Scalar>(self, p: &ModelParams<T>) -> T {
        match self {
            Axis::Beta => p.intensity,
            Axis::Bias => p.bias,
            Axis::Omega => p.interaction,
        }
    }

    /// Copy of `p` with this parameter replaced by `value`.
    pub fn with<T: Scalar>(self, p: &ModelParams<T>, value: T) -> ModelParams<T> {
        let mut q = *p;
        match self {
            Axis::Beta => q.intensity = value,
            Axis::Bias => q.bias = value,
            Axis::Omega => q.interaction = value,
        }
        q
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "beta" => Ok(Axis::Beta),
            "b" | "bias" => Ok(Axis::Bias),
            "omega" => Ok(Axis::Omega),
            other => Err(format!("unknown axis `{other}` (expected beta, b or omega)")),
        }
    }
}

impl<T: Scalar> ModelParams<T> {
    /// Checks the sign and range restrictions on every parameter.
    pub fn validate(&self) -> Result<()> {
        fn bad<T: Scalar>(name: &'static str, v: T, why: &str) -> Result<()> {
            Err(Error::InvalidParameter { name, reason: format!("{why}, got {v}") })
        }
        let all = [
            ("A", self.autonomous),
            ("c", self.mpc),
            ("gamma", self.accelerator),
            ("omega", self.interaction),
            ("h", self.wealth_invest),
            ("sigma", self.price_reactivity),
            ("mu", self.demand_reactivity),
            ("F_star", self.fundamental),
            ("d", self.income_link),
            ("b", self.bias),
            ("beta", self.intensity),
        ];
        for (name, v) in all {
            if !v.is_finite() {
                return bad(name, v, "must be finite");
            }
        }
        if !(self.mpc > T::zero() && self.mpc < T::one()) {
            return bad("c", self.mpc, "must lie in (0, 1)");
        }
        if !(self.interaction >= T::zero() && self.interaction <= T::one()) {
            return bad("omega", self.interaction, "must lie in [0, 1]");
        }
        for (name, v) in [
            ("gamma", self.accelerator),
            ("h", self.wealth_invest),
            ("sigma", self.price_reactivity),
            ("mu", self.demand_reactivity),
            ("F_star", self.fundamental),
            ("d", self.income_link),
            ("b", self.bias),
        ] {
            if v <= T::zero() {
                return bad(name, v, "must be positive");
            }
        }
        if self.intensity < T::zero() {
            return bad("beta", self.intensity, "must be non-negative");
        }
        self.invest_bounds.validate("sig_I")?;
        self.price_bounds.validate("sig_P")
    }

    /// Converts every field to another scalar type.
    pub fn cast<U: Scalar>(&self) -> ModelParams<U> {
        let c = |v: T| U::lit(v.as_f64());
        ModelParams {
            autonomous: c(self.autonomous),
            mpc: c(self.mpc),
            accelerator: c(self.accelerator),
            interaction: c(self.interaction),
            wealth_invest: c(self.wealth_invest),
            price_reactivity: c(self.price_reactivity),
            demand_reactivity: c(self.demand_reactivity),
            fundamental: c(self.fundamental),
            income_link: c(self.income_link),
            bias: c(self.bias),
            intensity: c(self.intensity),
            invest_bounds: SigmoidSpec::new(c(self.invest_bounds.upper), c(self.invest_bounds.lower)),
            price_bounds: SigmoidSpec::new(c(self.price_bounds.upper), c(self.price_bounds.lower)),
        }
    }

    /// `1 - c - h d > 0`: the unbiased steady state is defined for every omega in [0, 1].
    pub fn well_posed(&self) -> bool {
        T::one() - self.mpc - self.wealth_invest * self.income_link > T::zero()
    }

    /// `1 - c - omega^2 d h`, the denominator of every steady-state formula.
    pub fn interaction_denominator(&self) -> T {
        let w = self.interaction;
        T::one() - self.mpc - w * w * self.income_link * self.wealth_invest
    }

    /// True fundamental `(1 - omega) F* + omega d Y` given current income.
    #[inline]
    pub fn true_fundamental(&self, income: T) -> T {
        let w = self.interaction;
        (T::one() - w) * self.fundamental + w * self.income_link * income
    }

    /// Share of optimists for the next period, a logistic in the price gap.
    ///
    /// Evaluated on the sign-split branch so it saturates to 0 or 1 instead
    /// of overflowing.
    #[inline]
    pub fn optimist_fraction(&self, price: T, income: T) -> T {
        let x = T::lit(4.0) * self.bias * self.intensity * (price - self.true_fundamental(income));
        logistic(x)
    }

    /// Squared forecasting errors `(SE_O, SE_P)` of optimists and pessimists.
    pub fn squared_errors(&self, prev_price: T, prev_fundamental: T) -> (T, T) {
        let opt = prev_fundamental + self.bias - prev_price;
        let pes = prev_fundamental - self.bias - prev_price;
        (opt * opt, pes * pes)
    }

    /// Aggregate demand `mu ((1 - omega) F* + omega d Y - P + b (2 alpha - 1))`.
    #[inline]
    pub fn excess_demand(&self, price: T, income: T, alpha: T) -> T {
        let two = T::lit(2.0);
        self.demand_reactivity * (self.true_fundamental(income) - price + self.bias * (two * alpha - T::one()))
    }

    /// Demand of a single group whose fundamental belief is `belief`.
    pub fn group_demand(&self, belief: T, price: T) -> T {
        self.demand_reactivity * (belief - price)
    }
}

/// Numerically stable `1 / (1 + exp(-x))`.
#[inline]
pub fn logistic<T: Scalar>(x: T) -> T {
    if x >= T::zero() {
        (T::one() + (-x).exp()).recip()
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

/// Point `(Y, P, Z)` of the phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State<T> {
    pub y: T,
    pub p: T,
    pub z: T,
}

impl<T: Scalar> State<T> {
    pub fn new(y: T, p: T, z: T) -> Self {
        Self { y, p, z }
    }

    pub fn is_finite(&self) -> bool {
        self.y.is_finite() && self.p.is_finite() && self.z.is_finite()
    }

    /// Component-wise shift by the same amount.
    pub fn shifted(&self, delta: T) -> Self {
        Self::new(self.y + delta, self.p + delta, self.z + delta)
    }

    pub fn max_abs(&self) -> T {
        self.y.abs().max(self.p.abs()).max(self.z.abs())
    }

    /// Infinity-norm distance.
    pub fn dist(&self, other: &Self) -> T {
        (self.y - other.y).abs().max((self.p - other.p).abs()).max((self.z - other.z).abs())
    }

    pub fn to_array(self) -> [T; 3] {
        [self.y, self.p, self.z]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

/// One application of the map with an additive shock inside the price
/// adjustment. [`step`] is this with a zero shock.
#[inline]
pub fn advance<T: Scalar>(params: &ModelParams<T>, s: &State<T>, shock: T) -> State<T> {
    let w = params.interaction;
    let y = params.autonomous
        + params.mpc * s.y
        + params.accelerator * params.invest_bounds.eval(s.y - s.z)
        + w * params.wealth_invest * s.p;
    let alpha = params.optimist_fraction(s.p, s.y);
    let demand = params.excess_demand(s.p, s.y, alpha);
    let p = s.p + params.price_reactivity * params.price_bounds.eval(demand + shock);
    State { y, p, z: s.y }
}

/// One application of the map `G`.
pub fn step<T: Scalar>(params: &ModelParams<T>, s: &State<T>) -> Result<State<T>> {
    let next = advance(params, s, T::zero());
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::NonFinite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn spec(a1: f64, a2: f64) -> SigmoidSpec<f64> {
        SigmoidSpec::new(a1, a2)
    }

    #[test]
    fn sigmoid_vanishes_and_saturates() {
        let g = spec(3.0, 6.0);
        assert_eq!(g.eval(0.0), 0.0);
        let big = g.eval(1e6);
        assert!(big <= 3.0 && big > 3.0 - 1e-12);
        assert!(g.eval(-1e6) >= -6.0);
        assert!(g.eval(50.0) < 3.0);
    }

    /// tanh by its continued fraction `x / (1 + x^2 / (3 + x^2 / (5 + ...)))`.
    fn tanh_cf(x: f64) -> f64 {
        let mut tail = 0.0;
        for k in (1..40).rev() {
            tail = x * x / ((2 * k + 1) as f64 + tail);
        }
        x / (1.0 + tail)
    }

    #[test]
    fn sigmoid_value_matches_continued_fraction() {
        let expected = 2.0 * tanh_cf(0.25);
        // 40-digit reference: 0.48983732480741825855...
        assert!((expected - 0.489_837_324_807_418_26).abs() < 1e-16);
        assert!((spec(2.0, 4.0).eval(0.5) - expected).abs() < 1e-15);
    }

    #[test]
    fn sigmoid_derivative_unit_at_zero_and_continuous() {
        let g = spec(3.0, 6.0);
        assert_eq!(g.deriv(0.0), 1.0);
        assert!((g.deriv(1e-8) - g.deriv(-1e-8)).abs() < 1e-6);
        // sech^2(0.5) = 0.78644773296592741015...
        assert!((spec(2.0, 4.0).deriv(1.0) - 0.786_447_732_965_927_4).abs() < 1e-15);
        assert!(g.deriv(1e4) >= 0.0 && g.deriv(-1e4) >= 0.0);
    }

    #[test]
    fn optimist_fraction_cases() {
        let mut p = presets::set1(0.0, 6.0);
        assert_eq!(p.optimist_fraction(15.0, 20.0), 0.5);
        let expected = 1.0 / (1.0 + (-12.0f64).exp());
        assert!((p.optimist_fraction(16.0, 0.0) - expected).abs() < 1e-15);
        p.intensity = 0.0;
        assert_eq!(p.optimist_fraction(1e9, -3.0), 0.5);
        p.intensity = 1e300;
        assert_eq!(p.optimist_fraction(16.0, 0.0), 1.0);
        assert_eq!(p.optimist_fraction(14.0, 0.0), 0.0);
    }

    #[test]
    fn squared_errors_cases() {
        let p = presets::set1(0.0, 1.0);
        assert_eq!(p.squared_errors(15.0, 15.0), (0.25, 0.25));
        assert_eq!(p.squared_errors(15.5, 15.0), (0.0, 1.0));
        assert_eq!(p.squared_errors(14.0, 15.0), (2.25, 0.25));
    }

    #[test]
    fn excess_demand_cases() {
        let p = presets::set1(0.0, 6.0);
        assert_eq!(p.excess_demand(15.0, 3.0, 0.5), 0.0);
        assert_eq!(p.excess_demand(15.0, 3.0, 1.0), 0.5);
        let price = 15.2;
        let alpha = p.optimist_fraction(price, 0.0);
        let f = p.true_fundamental(0.0);
        let weighted =
            alpha * p.group_demand(f + p.bias, price) + (1.0 - alpha) * p.group_demand(f - p.bias, price);
        assert!((p.excess_demand(price, 0.0, alpha) - weighted).abs() < 1e-14);
    }

    #[test]
    fn decoupled_at_zero_interaction() {
        let p = presets::set1(0.0, 1.0);
        let s = State::new(25.0, 15.3, 24.0);
        let a = step(&p, &s).unwrap();
        let b = step(&p, &State::new(25.0, 99.0, 24.0)).unwrap();
        let c = step(&p, &State::new(-40.0, 15.3, -41.0)).unwrap();
        assert_eq!(a.y, b.y);
        assert_eq!(a.p, c.p);
    }

    #[test]
    fn z_shift_is_exact() {
        let p = presets::set1(1.0, 3.0);
        let s = State::new(31.234_567_8, 12.0, 29.0);
        assert_eq!(step(&p, &s).unwrap().z.to_bits(), s.y.to_bits());
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut p = presets::set1(1.0, 3.0);
        assert!(p.validate().is_ok());
        p.mpc = 1.0;
        assert!(p.validate().is_err());
        let mut p = presets::set1(1.0, 3.0);
        p.interaction = 1.1;
        assert!(p.validate().is_err());
        let mut p = presets::set1(1.0, 3.0);
        p.intensity = 0.0;
        assert!(p.validate().is_ok());
        p.price_bounds.lower = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn non_finite_is_reported() {
        let p = presets::set1(1.0, 3.0);
        assert_eq!(step(&p, &State::new(f64::NAN, 1.0, 1.0)), Err(Error::NonFinite));
    }
}
