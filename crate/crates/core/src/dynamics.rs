//! Long-run behaviour of deterministic orbits.
//!
//! Orbits are iterated for a transient, then sampled. The sample is
//! classified by the smallest period `k <= 32` under which every sampled state
//! matches its `k`-th successor; longer or aperiodic attractors are lumped
//! together as high cardinality.
//!
//! Iteration stops early once the orbit repeats itself bit for bit, since
//! the remainder is then known exactly.

use rayon::prelude::*;

use crate::equilibria::unbiased_steady_state;
use crate::error::{Error, Result};
use crate::model::{step, Axis, ModelParams, State};
use crate::scalar::Scalar;

pub const MAX_PERIOD: usize = 32;
/// Representatives kept for high-cardinality attractors.
pub const HC_REPRESENTATIVES: usize = 33;
/// Offset of the `plus` and `minus` initial data from the unbiased state.
pub const SEED_OFFSET: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitConfig<T> {
    pub transient: usize,
    pub sample: usize,
    pub divergence_cutoff: T,
    /// Period-matching tolerance; `None` means `1e-6 (1 + |P*|)`.
    pub match_tol: Option<T>,
    /// Sweeps rescale the adjustment bounds to the local unbiased state.
    pub rescale_bounds: bool,
}

impl<T: Scalar> Default for OrbitConfig<T> {
    fn default() -> Self {
        Self {
            transient: 10_000,
            sample: 512,
            divergence_cutoff: T::lit(1e9),
            match_tol: None,
            rescale_bounds: true,
        }
    }
}

impl<T: Scalar> OrbitConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.sample < 2 * MAX_PERIOD {
            return Err(Error::InvalidParameter {
                name: "orbit.sample",
                reason: format!("must be at least {}, got {}", 2 * MAX_PERIOD, self.sample),
            });
        }
        if !(self.divergence_cutoff > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "orbit.divergence_cutoff",
                reason: format!("must be positive, got {}", self.divergence_cutoff),
            });
        }
        if let Some(t) = self.match_tol {
            if !(t > T::zero()) {
                return Err(Error::InvalidParameter { name: "orbit.match_tol", reason: format!("must be positive, got {t}") });
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, p_star: T) -> T {
        self.match_tol.unwrap_or_else(|| T::lit(1e-6) * (T::one() + p_star.abs()))
    }
}

/// Result of [`simulate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<T> {
    /// Post-transient states; shorter than requested when the orbit diverged.
    pub states: Vec<State<T>>,
    pub diverged: bool,
    /// Number of map evaluations actually performed.
    pub evaluations: usize,
}

impl<T: Scalar> Orbit<T> {
    pub fn last(&self) -> Option<&State<T>> {
        self.states.last()
    }
}

fn escaped<T: Scalar>(s: &State<T>, cutoff: T) -> bool {
    !s.is_finite() || s.max_abs() > cutoff
}

/// Iterates the map, discards `config.transient` states and returns the next
/// `config.sample` ones.
pub fn simulate<T: Scalar>(params: &ModelParams<T>, initial: State<T>, config: &OrbitConfig<T>) -> Orbit<T> {
    let total = config.transient + config.sample;
    let mut states = Vec::with_capacity(config.sample);
    let mut cur = initial;
    if escaped(&cur, config.divergence_cutoff) {
        return Orbit { states, diverged: true, evaluations: 0 };
    }
    if config.transient == 0 {
        states.push(cur);
    }
    // cur is the state at time t (t = 0 is the initial datum); the sample is t in transient..total
    let mut anchor = cur;
    let mut anchor_t = 0usize;
    let mut t = 0usize;
    let mut evaluations = 0usize;
    while t + 1 < total {
        let next = crate::model::advance(params, &cur, T::zero());
        evaluations += 1;
        t += 1;
        if escaped(&next, config.divergence_cutoff) {
            return Orbit { states, diverged: true, evaluations };
        }
        cur = next;
        if t >= config.transient {
            states.push(cur);
        }
        let lag = t - anchor_t;
        if cur == anchor && lag <= 2 * MAX_PERIOD {
            // exactly periodic from anchor_t on: the cycle is anchor_t..t
            let cycle: Vec<State<T>> = {
                let mut c = Vec::with_capacity(lag);
                let mut s = anchor;
                for _ in 0..lag {
                    c.push(s);
                    s = crate::model::advance(params, &s, T::zero());
                }
                c
            };
            let mut u = t + 1;
            while u < total {
                if u >= config.transient {
                    states.push(cycle[(u - anchor_t) % lag]);
                }
                u += 1;
            }
            return Orbit { states, diverged: false, evaluations: evaluations + lag };
        }
        if lag >= 2 * MAX_PERIOD {
            anchor = cur;
            anchor_t = t;
        }
    }
    Orbit { states, diverged: false, evaluations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttractorKind {
    FixedPoint,
    Period(usize),
    HighCardinality,
    Divergent,
}

impl AttractorKind {
    pub fn period(self) -> Option<usize> {
        match self {
            AttractorKind::FixedPoint => Some(1),
            AttractorKind::Period(k) => Some(k),
            _ => None,
        }
    }

    /// `FP`, `P2`..`P32`, `HC` or `DIV`.
    pub fn code(self) -> String {
        match self {
            AttractorKind::FixedPoint => "FP".into(),
            AttractorKind::Period(k) => format!("P{k}"),
            AttractorKind::HighCardinality => "HC".into(),
            AttractorKind::Divergent => "DIV".into(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AttractorKind::FixedPoint => "FIXED_POINT",
            AttractorKind::Period(_) => "PERIOD_K",
            AttractorKind::HighCardinality => "HIGH_CARDINALITY",
            AttractorKind::Divergent => "DIVERGENT",
        }
    }
}

impl std::fmt::Display for AttractorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.code())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractorClass<T> {
    pub kind: AttractorKind,
    /// Cycle points starting from the lowest price, or up to 33 samples.
    pub points: Vec<State<T>>,
    pub mean: State<T>,
    /// Component-wise extent of the sample.
    pub lower: State<T>,
    pub upper: State<T>,
    /// Final sampled state, used to continue sweeps.
    pub last: State<T>,
}

fn mean_of<T: Scalar>(states: &[State<T>]) -> State<T> {
    let n = T::lit(states.len() as f64);
    let sum = states.iter().fold(State::default(), |a: State<T>, s| State::new(a.y + s.y, a.p + s.p, a.z + s.z));
    State::new(sum.y / n, sum.p / n, sum.z / n)
}

fn extent<T: Scalar>(states: &[State<T>]) -> (State<T>, State<T>) {
    let first = states[0];
    states.iter().fold((first, first), |(lo, hi), s| {
        (
            State::new(lo.y.min(s.y), lo.p.min(s.p), lo.z.min(s.z)),
            State::new(hi.y.max(s.y), hi.p.max(s.p), hi.z.max(s.z)),
        )
    })
}

/// Smallest `k <= 32` with every sampled state within `tol` of its `k`-th successor.
pub fn detect_period<T: Scalar>(states: &[State<T>], tol: T) -> Option<usize> {
    (1..=MAX_PERIOD.min(states.len().saturating_sub(1)))
        .find(|&k| states.iter().zip(&states[k..]).all(|(a, b)| a.dist(b) <= tol))
}

/// Classifies an already simulated orbit.
pub fn classify_orbit<T: Scalar>(orbit: &Orbit<T>, tol: T) -> AttractorClass<T> {
    let states = &orbit.states;
    if orbit.diverged || states.is_empty() {
        let z = State::new(T::nan(), T::nan(), T::nan());
        let last = states.last().copied().unwrap_or(z);
        return AttractorClass { kind: AttractorKind::Divergent, points: Vec::new(), mean: z, lower: z, upper: z, last };
    }
    let last = *states.last().unwrap();
    let (lower, upper) = extent(states);
    match detect_period(states, tol) {
        Some(k) => {
            let mut cycle: Vec<State<T>> = states[states.len() - k..].to_vec();
            let start = (0..k).fold(0, |m, i| if cycle[i].p < cycle[m].p { i } else { m });
            cycle.rotate_left(start);
            let mean = mean_of(&cycle);
            let kind = if k == 1 { AttractorKind::FixedPoint } else { AttractorKind::Period(k) };
            AttractorClass { kind, points: cycle, mean, lower, upper, last }
        }
        None => {
            let n = states.len();
            let m = HC_REPRESENTATIVES.min(n);
            let points = (0..m).map(|i| states[i * (n - 1) / (m - 1).max(1)]).collect();
            AttractorClass { kind: AttractorKind::HighCardinality, points, mean: mean_of(states), lower, upper, last }
        }
    }
}

fn default_tolerance<T: Scalar>(params: &ModelParams<T>, config: &OrbitConfig<T>, fallback: T) -> T {
    let p_star = unbiased_steady_state(params).map(|s| s.p).unwrap_or(fallback);
    config.tolerance(p_star)
}

pub fn classify_attractor<T: Scalar>(params: &ModelParams<T>, initial: State<T>, config: &OrbitConfig<T>) -> AttractorClass<T> {
    let orbit = simulate(params, initial, config);
    classify_orbit(&orbit, default_tolerance(params, config, initial.p))
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff<T: Scalar>(a: &[State<T>], b: &[State<T>]) -> T {
    let one_way = |x: &[State<T>], y: &[State<T>]| {
        x.iter().fold(T::zero(), |m, p| m.max(y.iter().fold(T::infinity(), |d, q| d.min(p.dist(q)))))
    };
    one_way(a, b).max(one_way(b, a))
}

impl<T: Scalar> AttractorClass<T> {
    /// Whether two classifications describe the same attractor. Cycles are
    /// compared as point sets, high-cardinality attractors by the overlap of
    /// their extents.
    pub fn same_attractor(&self, other: &Self, tol: T) -> bool {
        if self.kind != other.kind {
            return false;
        }
        match self.kind {
            AttractorKind::Divergent => true,
            AttractorKind::FixedPoint | AttractorKind::Period(_) => {
                hausdorff(&self.points, &other.points) < T::lit(100.0) * tol
            }
            AttractorKind::HighCardinality => {
                // extents of the income and price projections must mostly overlap
                let overlap = |lo_a: T, hi_a: T, lo_b: T, hi_b: T| {
                    let common = hi_a.min(hi_b) - lo_a.max(lo_b);
                    let shorter = (hi_a - lo_a).min(hi_b - lo_b).max(tol);
                    common / shorter
                };
                let half = T::lit(0.5);
                overlap(self.lower.y, self.upper.y, other.lower.y, other.upper.y) >= half
                    && overlap(self.lower.p, self.upper.p, other.lower.p, other.upper.p) >= half
            }
        }
    }
}

/// Initial datum of a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialDatum<T> {
    /// `S* + (1e-3, 1e-3, 1e-3)`.
    Plus,
    /// `S* - (1e-3, 1e-3, 1e-3)`.
    Minus,
    Explicit(State<T>),
}

impl<T: Scalar> InitialDatum<T> {
    pub fn resolve(&self, params: &ModelParams<T>) -> Result<State<T>> {
        match self {
            InitialDatum::Plus => Ok(unbiased_steady_state(params)?.state().shifted(T::lit(SEED_OFFSET))),
            InitialDatum::Minus => Ok(unbiased_steady_state(params)?.state().shifted(-T::lit(SEED_OFFSET))),
            InitialDatum::Explicit(s) => Ok(*s),
        }
    }
}

impl<T> std::str::FromStr for InitialDatum<T> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "plus" => Ok(InitialDatum::Plus),
            "minus" => Ok(InitialDatum::Minus),
            other => Err(format!("unknown initial datum `{other}` (expected plus or minus)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seeding {
    /// Each point starts from the final state of the previous one.
    Follow,
    /// Every point starts from the same datum.
    Fixed,
}

fn local_params<T: Scalar>(params: &ModelParams<T>, config: &OrbitConfig<T>) -> Result<ModelParams<T>> {
    if config.rescale_bounds {
        params.with_scaled_bounds()
    } else {
        Ok(*params)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationPoint<T> {
    pub value: T,
    pub class: AttractorClass<T>,
    /// Distinct sampled prices: the cycle for periodic attractors, the whole sample otherwise.
    pub prices: Vec<T>,
    pub failed: bool,
}

/// One-dimensional bifurcation diagram along `axis`.
pub fn bifurcation_1d<T: Scalar>(
    params: &ModelParams<T>,
    axis: Axis,
    grid: &[T],
    initial: InitialDatum<T>,
    seeding: Seeding,
    config: &OrbitConfig<T>,
) -> Result<Vec<BifurcationPoint<T>>> {
    if grid.windows(2).any(|w| w[0] == w[1]) || !(grid.windows(2).all(|w| w[0] < w[1]) || grid.windows(2).all(|w| w[0] > w[1])) {
        return Err(Error::InvalidParameter { name: "grid", reason: "must be strictly monotone".into() });
    }
    let run = |value: T, start: Option<State<T>>| -> BifurcationPoint<T> {
        let q = match local_params(&axis.with(params, value), config) {
            Ok(q) => q,
            Err(_) => return failed_point(value),
        };
        let init = match start.map(Ok).unwrap_or_else(|| initial.resolve(&q)) {
            Ok(s) => s,
            Err(_) => return failed_point(value),
        };
        let orbit = simulate(&q, init, config);
        let class = classify_orbit(&orbit, default_tolerance(&q, config, init.p));
        let prices = match class.kind {
            AttractorKind::FixedPoint | AttractorKind::Period(_) => class.points.iter().map(|s| s.p).collect(),
            AttractorKind::HighCardinality => orbit.states.iter().map(|s| s.p).collect(),
            AttractorKind::Divergent => Vec::new(),
        };
        BifurcationPoint { value, class, prices, failed: false }
    };
    match seeding {
        Seeding::Fixed => Ok(grid.par_iter().map(|&v| run(v, None)).collect()),
        Seeding::Follow => {
            let mut out = Vec::with_capacity(grid.len());
            let mut carry: Option<State<T>> = None;
            for &v in grid {
                let point = run(v, carry);
                if point.class.kind != AttractorKind::Divergent && !point.failed {
                    carry = Some(point.class.last);
                }
                out.push(point);
            }
            Ok(out)
        }
    }
}

fn failed_point<T: Scalar>(value: T) -> BifurcationPoint<T> {
    let z = State::new(T::nan(), T::nan(), T::nan());
    BifurcationPoint {
        value,
        class: AttractorClass { kind: AttractorKind::Divergent, points: Vec::new(), mean: z, lower: z, upper: z, last: z },
        prices: Vec::new(),
        failed: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramCell<T> {
    pub beta: T,
    pub omega: T,
    pub kind: AttractorKind,
    pub failed: bool,
}

/// Two-dimensional bifurcation diagram over `(beta, omega)`, row-major with
/// omega outer. Every cell starts from the same datum, resolved locally.
pub fn bifurcation_2d<T: Scalar>(
    params: &ModelParams<T>,
    betas: &[T],
    omegas: &[T],
    initial: InitialDatum<T>,
    config: &OrbitConfig<T>,
) -> Vec<DiagramCell<T>> {
    let cells: Vec<(T, T)> = omegas.iter().flat_map(|&w| betas.iter().map(move |&b| (b, w))).collect();
    cells
        .par_iter()
        .map(|&(beta, omega)| {
            let raw = Axis::Omega.with(&Axis::Beta.with(params, beta), omega);
            let outcome = local_params(&raw, config).and_then(|q| {
                let init = initial.resolve(&q)?;
                Ok(classify_attractor(&q, init, config).kind)
            });
            match outcome {
                Ok(kind) => DiagramCell { beta, omega, kind, failed: false },
                Err(_) => DiagramCell { beta, omega, kind: AttractorKind::Divergent, failed: true },
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinSlice<T> {
    pub y_range: (T, T),
    pub p_range: (T, T),
    /// Grid points per axis.
    pub resolution: usize,
    /// Row-major (price outer, income inner); `None` marks divergence.
    pub labels: Vec<Option<usize>>,
    /// Distinct attractors, ordered by mean price.
    pub catalog: Vec<AttractorClass<T>>,
}

impl<T: Scalar> BasinSlice<T> {
    pub fn y_values(&self) -> Vec<T> {
        crate::scalar::linspace(self.y_range.0, self.y_range.1, self.resolution)
    }

    pub fn p_values(&self) -> Vec<T> {
        crate::scalar::linspace(self.p_range.0, self.p_range.1, self.resolution)
    }

    /// Number of cells attracted by catalog entry `label`.
    pub fn basin_size(&self, label: usize) -> usize {
        self.labels.iter().filter(|l| **l == Some(label)).count()
    }
}

/// Basins of attraction on the plane `Z = Y`.
pub fn basin_slice<T: Scalar>(
    params: &ModelParams<T>,
    y_range: (T, T),
    p_range: (T, T),
    resolution: usize,
    config: &OrbitConfig<T>,
) -> Result<BasinSlice<T>> {
    if resolution < 2 {
        return Err(Error::InvalidParameter { name: "basin.resolution", reason: format!("must be at least 2, got {resolution}") });
    }
    if !(y_range.0 < y_range.1 && p_range.0 < p_range.1) {
        return Err(Error::InvalidParameter { name: "basin.range", reason: "ranges must be finite and ascending".into() });
    }
    let tol = default_tolerance(params, config, (p_range.0 + p_range.1) * T::lit(0.5));
    let ys = crate::scalar::linspace(y_range.0, y_range.1, resolution);
    let ps = crate::scalar::linspace(p_range.0, p_range.1, resolution);
    let classes: Vec<AttractorClass<T>> = (0..resolution * resolution)
        .into_par_iter()
        .map(|i| {
            let (y, p) = (ys[i % resolution], ps[i / resolution]);
            classify_orbit(&simulate(params, State::new(y, p, y), config), tol)
        })
        .collect();

    let mut catalog: Vec<AttractorClass<T>> = Vec::new();
    let mut raw = Vec::with_capacity(classes.len());
    for class in classes {
        if class.kind == AttractorKind::Divergent {
            raw.push(None);
            continue;
        }
        let idx = match catalog.iter().position(|c| c.same_attractor(&class, tol)) {
            Some(i) => i,
            None => {
                catalog.push(class);
                catalog.len() - 1
            }
        };
        raw.push(Some(idx));
    }
    let mut order: Vec<usize> = (0..catalog.len()).collect();
    order.sort_by(|&a, &b| catalog[a].mean.p.partial_cmp(&catalog[b].mean.p).unwrap_or(std::cmp::Ordering::Equal));
    let mut rank = vec![0; catalog.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let labels = raw.into_iter().map(|l| l.map(|i| rank[i])).collect();
    let mut slots: Vec<Option<AttractorClass<T>>> = catalog.into_iter().map(Some).collect();
    let catalog = order.iter().map(|&i| slots[i].take().unwrap()).collect();
    Ok(BasinSlice { y_range, p_range, resolution, labels, catalog })
}

/// Largest Lyapunov exponent in nats per iteration.
///
/// The first quarter of `steps` is discarded; a tangent vector is then pushed
/// through central-difference Jacobian-vector products and renormalized every
/// `renorm_interval` steps.
pub fn lyapunov_largest<T: Scalar>(params: &ModelParams<T>, initial: State<T>, steps: usize, renorm_interval: usize) -> Result<T> {
    if steps < 1000 {
        return Err(Error::TooShort { len: steps, min: 1000 });
    }
    let renorm = renorm_interval.max(1);
    let cutoff = T::lit(1e9);
    let mut x = initial;
    for _ in 0..steps / 4 {
        x = step(params, &x)?;
        if escaped(&x, cutoff) {
            return Err(Error::DivergentOrbit);
        }
    }
    let norm = |v: &[T; 3]| v.iter().fold(T::zero(), |m, c| m.max(c.abs()));
    let mut v = [T::one(), T::one(), T::one()];
    let mut sum = T::zero();
    for i in 1..=steps {
        let xa = x.to_array();
        let scale = T::one() + norm(&xa);
        let eps = T::lit(1e-7) * scale / norm(&v);
        let plus = State::from_array([xa[0] + eps * v[0], xa[1] + eps * v[1], xa[2] + eps * v[2]]);
        let minus = State::from_array([xa[0] - eps * v[0], xa[1] - eps * v[1], xa[2] - eps * v[2]]);
        let (fp, fm) = (step(params, &plus)?.to_array(), step(params, &minus)?.to_array());
        for k in 0..3 {
            v[k] = (fp[k] - fm[k]) / (T::lit(2.0) * eps);
        }
        x = step(params, &x)?;
        if escaped(&x, cutoff) {
            return Err(Error::DivergentOrbit);
        }
        if i % renorm == 0 || i == steps {
            let n = norm(&v);
            if !(n > T::zero()) || !n.is_finite() {
                return Ok(T::neg_infinity());
            }
            sum = sum + n.ln();
            v = [v[0] / n, v[1] / n, v[2] / n];
        }
    }
    Ok(sum / T::lit(steps as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::biased_steady_states;
    use crate::presets;

    fn naive(params: &ModelParams<f64>, initial: State<f64>, config: &OrbitConfig<f64>) -> Vec<State<f64>> {
        let mut s = initial;
        let mut out = Vec::new();
        for t in 0..config.transient + config.sample {
            if t > 0 {
                s = step(params, &s).unwrap();
            }
            if t >= config.transient {
                out.push(s);
            }
        }
        out
    }

    #[test]
    fn early_exit_is_exact() {
        let cfg = OrbitConfig { transient: 3000, sample: 128, ..Default::default() };
        for (omega, beta) in [(1.0, 1.5), (1.0, 0.7), (1.0, 3.0), (1.0, 4.2), (0.575, 1.0)] {
            let p = presets::set1(omega, beta);
            let init = InitialDatum::Plus.resolve(&p).unwrap();
            let orbit = simulate(&p, init, &cfg);
            assert_eq!(orbit.states, naive(&p, init, &cfg), "{omega} {beta}");
        }
    }

    #[test]
    fn zero_transient_keeps_initial() {
        let p = presets::set1(1.0, 1.5);
        let init = InitialDatum::Plus.resolve(&p).unwrap();
        let cfg = OrbitConfig { transient: 0, sample: 64, ..Default::default() };
        let orbit = simulate(&p, init, &cfg);
        assert_eq!(orbit.states[0], init);
        assert_eq!(orbit.states.len(), 64);
    }

    #[test]
    fn stable_fixed_point() {
        let p = presets::set1(1.0, 1.5);
        let star = unbiased_steady_state(&p).unwrap();
        let class = classify_attractor(&p, star.state().shifted(1e-3), &OrbitConfig::default());
        assert_eq!(class.kind, AttractorKind::FixedPoint);
        assert!(class.points[0].dist(&star.state()) < 1e-8);
    }

    #[test]
    fn period_two_below_flip() {
        let p = presets::set1(1.0, 0.7);
        let class = classify_attractor(&p, InitialDatum::Plus.resolve(&p).unwrap(), &OrbitConfig::default());
        assert_eq!(class.kind, AttractorKind::Period(2));
        let tol = OrbitConfig::default().tolerance(unbiased_steady_state(&p).unwrap().p);
        for (i, s) in class.points.iter().enumerate() {
            let next = step(&p, s).unwrap();
            assert!(next.dist(&class.points[(i + 1) % 2]) < 10.0 * tol);
        }
        assert!(class.points[0].p < class.points[1].p);
    }

    #[test]
    fn biased_convergence() {
        let p = presets::set1(1.0, 3.0);
        let class = classify_attractor(&p, InitialDatum::Plus.resolve(&p).unwrap(), &OrbitConfig::default());
        assert_eq!(class.kind, AttractorKind::FixedPoint);
        let high = biased_steady_states(&p).unwrap().high.unwrap();
        assert!(class.points[0].dist(&high.state()) < 1e-6);
    }

    #[test]
    fn chaos_after_cascade() {
        let p = presets::set1(1.0, 6.0);
        let init = InitialDatum::Plus.resolve(&p).unwrap();
        let class = classify_attractor(&p, init, &OrbitConfig::default());
        assert_eq!(class.kind, AttractorKind::HighCardinality);
        assert!(lyapunov_largest(&p, init, 20_000, 1).unwrap() > 0.0);
    }

    #[test]
    fn divergence_is_data() {
        let p = presets::set1(1.0, 1.0);
        let class = classify_attractor(&p, State::new(1e10, 1.0, 1.0), &OrbitConfig::default());
        assert_eq!(class.kind, AttractorKind::Divergent);
    }

    #[test]
    fn negative_exponents_at_stable_attractors() {
        for beta in [1.5, 0.7] {
            let p = presets::set1(1.0, beta);
            let init = InitialDatum::Plus.resolve(&p).unwrap();
            assert!(lyapunov_largest(&p, init, 4000, 10).unwrap() < 0.0);
        }
        let p = presets::set1(1.0, 1.5);
        assert!(matches!(lyapunov_largest(&p, State::new(0.0, 0.0, 0.0), 10, 1), Err(Error::TooShort { .. })));
    }

    #[test]
    fn period_detection_minimal() {
        let a = State::new(0.0, 1.0, 0.0);
        let b = State::new(0.0, 2.0, 0.0);
        let c = State::new(0.0, 3.0, 0.0);
        let seq: Vec<State<f64>> = (0..96).map(|i| [a, b, c][i % 3]).collect();
        assert_eq!(detect_period(&seq, 1e-9), Some(3));
        let seq: Vec<State<f64>> = (0..96).map(|i| State::new(0.0, i as f64, 0.0)).collect();
        assert_eq!(detect_period(&seq, 1e-9), None);
    }

    #[test]
    fn single_point_sweep_matches_classification() {
        let p = presets::set1(1.0, 0.0);
        let cfg = OrbitConfig::default();
        let d = bifurcation_1d(&p, Axis::Beta, &[0.7], InitialDatum::Plus, Seeding::Follow, &cfg).unwrap();
        let q = Axis::Beta.with(&p, 0.7).with_scaled_bounds().unwrap();
        let direct = classify_attractor(&q, InitialDatum::Plus.resolve(&q).unwrap(), &cfg);
        assert_eq!(d[0].class, direct);
        assert!(bifurcation_1d(&p, Axis::Beta, &[0.1, 0.1], InitialDatum::Plus, Seeding::Fixed, &cfg).is_err());
    }

    #[test]
    fn descending_sweep_follows_pessimistic_branch() {
        let p = presets::set1(1.0, 0.0);
        let cfg = OrbitConfig { transient: 2000, ..Default::default() };
        let grid: Vec<f64> = (0..=20).map(|i| 3.5 - 0.07 * i as f64).collect();
        let d = bifurcation_1d(&p, Axis::Beta, &grid, InitialDatum::Minus, Seeding::Follow, &cfg).unwrap();
        for point in d.iter().filter(|pt| pt.value > 2.2) {
            let q = Axis::Beta.with(&p, point.value).with_scaled_bounds().unwrap();
            let star = unbiased_steady_state(&q).unwrap();
            assert!(point.prices.iter().all(|&x| x < star.p), "{}", point.value);
        }
    }

    #[test]
    fn basin_catalog_two_biased_states() {
        let p = presets::set1(1.0, 2.5);
        let star = unbiased_steady_state(&p).unwrap();
        let cfg = OrbitConfig::default();
        let slice = basin_slice(&p, (star.y - 3.0, star.y + 3.0), (star.p - 3.0, star.p + 3.0), 12, &cfg).unwrap();
        assert_eq!(slice.catalog.len(), 2);
        let set = biased_steady_states(&p).unwrap();
        assert!(slice.catalog[0].points[0].dist(&set.low.unwrap().state()) < 1e-6);
        assert!(slice.catalog[1].points[0].dist(&set.high.unwrap().state()) < 1e-6);
        assert!((slice.catalog[0].mean.p + slice.catalog[1].mean.p - 2.0 * star.p).abs() < 1e-6);
        let again = basin_slice(&p, (star.y - 3.0, star.y + 3.0), (star.p - 3.0, star.p + 3.0), 12, &cfg).unwrap();
        assert_eq!(slice.labels, again.labels);
    }

    #[test]
    fn basin_single_entry_in_stable_regime() {
        let p = presets::set1(1.0, 1.5);
        let star = unbiased_steady_state(&p).unwrap();
        let slice = basin_slice(&p, (star.y - 1.0, star.y + 1.0), (star.p - 1.0, star.p + 1.0), 6, &OrbitConfig::default()).unwrap();
        assert_eq!(slice.catalog.len(), 1);
        assert_eq!(slice.catalog[0].kind, AttractorKind::FixedPoint);
    }

    #[test]
    fn diagram_cells() {
        let p = presets::set1(1.0, 0.0);
        let cells = bifurcation_2d(&p, &[1.5, 0.7, 3.0], &[1.0], InitialDatum::Plus, &OrbitConfig::default());
        let kinds: Vec<_> = cells.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![AttractorKind::FixedPoint, AttractorKind::Period(2), AttractorKind::FixedPoint]);
    }

    #[test]
    fn config_validation() {
        let mut cfg = OrbitConfig::<f64>::default();
        cfg.sample = 10;
        assert!(cfg.validate().is_err());
        assert!(OrbitConfig::<f64>::default().validate().is_ok());
    }
}
