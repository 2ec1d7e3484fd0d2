//! The subcommands. Each one turns a resolved [`Config`] into CSV text.

use std::fmt::Write;

use regimes::dynamics::{self, AttractorKind, InitialDatum, OrbitConfig, Seeding};
use regimes::equilibria::{self, SteadyLabel};
use regimes::stability::{self, ScanOptions};
use regimes::stochastic::{self, NoiseConfig};
use regimes::{linspace, Axis, ModelParams, Params, SigmoidSpec, State};

use crate::config::Config;
use crate::error::CliError;

/// CSV body plus an optional sidecar table.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    /// Comment lines (without `# `) placed before the table.
    pub notes: Vec<String>,
    pub body: String,
    pub sidecar: Option<String>,
}

impl Output {
    fn table(body: String) -> Self {
        Self { notes: Vec::new(), body, sidecar: None }
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Model parameters and whether the adjustment bounds follow the unbiased state.
pub fn model(cfg: &Config) -> Result<(Params, bool), CliError> {
    let bounds = ["model.sig_I.a1", "model.sig_I.a2", "model.sig_P.a1", "model.sig_P.a2"].map(|k| cfg.opt_f64(k));
    let given = bounds.iter().filter(|b| b.is_some()).count();
    if given != 0 && given != 4 {
        return Err(CliError::Config("give all four adjustment bounds or none".into()));
    }
    let explicit = given == 4;
    let b = bounds.map(|x| x.unwrap_or(1.0));
    let params = ModelParams {
        autonomous: cfg.f64("model.A"),
        mpc: cfg.f64("model.c"),
        accelerator: cfg.f64("model.gamma"),
        interaction: cfg.f64("model.omega"),
        wealth_invest: cfg.f64("model.h"),
        price_reactivity: cfg.f64("model.sigma"),
        demand_reactivity: cfg.f64("model.mu"),
        fundamental: cfg.f64("model.F_star"),
        income_link: cfg.f64("model.d"),
        bias: cfg.f64("model.b"),
        intensity: cfg.f64("model.beta"),
        invest_bounds: SigmoidSpec::new(b[0], b[1]),
        price_bounds: SigmoidSpec::new(b[2], b[3]),
    };
    params.validate()?;
    if explicit {
        Ok((params, false))
    } else {
        Ok((params.with_scaled_bounds()?, true))
    }
}

fn axis(name: &str) -> Axis {
    name.parse().expect("validated axis")
}

fn orbit_config(cfg: &Config, rescale: bool) -> Result<OrbitConfig<f64>, CliError> {
    let c = OrbitConfig {
        transient: cfg.count("orbit.transient"),
        sample: cfg.count("orbit.sample"),
        divergence_cutoff: cfg.f64("orbit.divergence_cutoff"),
        match_tol: cfg.opt_f64("orbit.match_tol"),
        rescale_bounds: rescale,
    };
    c.validate()?;
    Ok(c)
}

fn grid_axes(cfg: &Config) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let (bp, wp) = (cfg.count("grid.beta_points"), cfg.count("grid.omega_points"));
    if bp < 1 || wp < 1 {
        return Err(CliError::Config("grid needs at least one point per axis".into()));
    }
    Ok((
        linspace(cfg.f64("grid.beta_min"), cfg.f64("grid.beta_max"), bp),
        linspace(cfg.f64("grid.omega_min"), cfg.f64("grid.omega_max"), wp),
    ))
}

pub fn steady(cfg: &Config) -> Result<Output, CliError> {
    let (params, _) = model(cfg)?;
    let mut out = String::new();
    if cfg.text("sweep.axis") == "none" {
        let set = equilibria::biased_steady_states(&params)?;
        let b = set.bounds;
        let mut notes = vec![format!("bounds: P_lo={},P_hi={},Y_lo={},Y_hi={}", b.p_lo, b.p_hi, b.y_lo, b.y_hi)];
        if !params.well_posed() {
            notes.push("warning: 1 - c - h d <= 0".into());
        }
        out.push_str("label,Y,P,Z,flags\n");
        for s in set.states() {
            let mut flags = Vec::new();
            if s.label == SteadyLabel::Unbiased && set.near_bifurcation {
                flags.push("near-bifurcation");
            }
            if s.label != SteadyLabel::Unbiased {
                if !set.positivity_condition {
                    flags.push("positivity-not-guaranteed");
                }
                if !(s.y > 0.0 && s.p > 0.0) {
                    flags.push("negative-state");
                }
            }
            writeln!(out, "{},{},{},{},{}", s.label.name(), s.y, s.p, s.z, flags.join(";")).unwrap();
        }
        return Ok(Output { notes, body: out, sidecar: None });
    }
    let ax = axis(cfg.text("sweep.axis"));
    let points = cfg.count("sweep.points");
    if points < 1 {
        return Err(CliError::Config("sweep.points must be positive".into()));
    }
    let grid = linspace(cfg.f64("sweep.from"), cfg.f64("sweep.to"), points);
    let rows = equilibria::sweep_steady_states(&params, ax, &grid);
    out.push_str("axis,Y_L,Y_star,Y_H,P_L,P_star,P_H,flags\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.value,
            opt(r.y_low),
            opt(r.y_star),
            opt(r.y_high),
            opt(r.p_low),
            opt(r.p_star),
            opt(r.p_high),
            r.flags.join(";")
        )
        .unwrap();
    }
    Ok(Output { notes: vec![format!("axis: {}", ax.name())], body: out, sidecar: None })
}

pub fn stability(cfg: &Config) -> Result<Output, CliError> {
    let (params, _) = model(cfg)?;
    let target = cfg.text("stability.target");
    let mut out = String::new();
    if cfg.text("stability.axis") != "none" {
        let label: SteadyLabel = if target == "all" { SteadyLabel::Unbiased } else { target.parse().map_err(CliError::Config)? };
        let ax = axis(cfg.text("stability.axis"));
        let opts = ScanOptions { points: cfg.count("stability.points"), tolerance: cfg.f64("stability.tol") };
        let (from, to) = (cfg.f64("stability.from"), cfg.f64("stability.to"));
        let sc = stability::classify_scenario(&params, ax, from, to, label, opts)?;
        out.push_str("target,axis,from,to,scenario,thresholds\n");
        let th: Vec<String> = sc.thresholds.iter().map(|t| num(*t)).collect();
        writeln!(out, "{},{},{},{},{},{}", label.name(), ax.name(), from, to, sc.label.name(), th.join(";")).unwrap();
        return Ok(Output::table(out));
    }
    let set = equilibria::biased_steady_states(&params)?;
    out.push_str("label,E_eff,W,C1,C2,C3,sc1,sc2,sc3,sc4,margin1,margin2,margin3,margin4,stable,");
    out.push_str("eig1_re,eig1_im,eig2_re,eig2_im,eig3_re,eig3_im,spectral_radius\n");
    for s in set.states() {
        if target != "all" && s.label.name().to_ascii_lowercase() != target {
            continue;
        }
        let j = stability::jacobian_at(&params, &s)?;
        let r = stability::farebrother_report(&params, &s)?;
        write!(out, "{},{},{},", s.label.name(), j.e_eff, j.w).unwrap();
        for c in r.coeffs {
            write!(out, "{c},").unwrap();
        }
        for c in r.conditions {
            write!(out, "{},", bit(c)).unwrap();
        }
        for m in r.margins {
            write!(out, "{m},").unwrap();
        }
        write!(out, "{},", bit(r.stable)).unwrap();
        for z in r.eigenvalues {
            write!(out, "{},{},", z.re, z.im).unwrap();
        }
        writeln!(out, "{}", r.spectral_radius).unwrap();
    }
    Ok(Output::table(out))
}

pub fn region(cfg: &Config) -> Result<Output, CliError> {
    let (params, _) = model(cfg)?;
    let (betas, omegas) = grid_axes(cfg)?;
    let cells = stability::stability_region_grid(&params, &betas, &omegas);
    let mut out = String::from("beta,omega,star_stable,biased_exists,high_stable,margin_min\n");
    for c in cells {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            c.beta,
            c.omega,
            bit(c.star_stable()),
            bit(c.biased_exists()),
            bit(c.high_stable()),
            opt(c.margin_min())
        )
        .unwrap();
    }
    Ok(Output::table(out))
}

fn datum(name: &str) -> InitialDatum<f64> {
    name.parse().expect("validated datum")
}

pub fn bifurcate(cfg: &Config) -> Result<Output, CliError> {
    let (params, rescale) = model(cfg)?;
    let oc = orbit_config(cfg, rescale)?;
    let initial = datum(cfg.text("bifurcate.initial"));
    let mut out = String::new();
    if cfg.text("bifurcate.mode") == "2d" {
        let (betas, omegas) = grid_axes(cfg)?;
        out.push_str("beta,omega,class,period\n");
        for c in dynamics::bifurcation_2d(&params, &betas, &omegas, initial, &oc) {
            let period = c.kind.period().map(|k| k.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{}", c.beta, c.omega, c.kind.code(), period).unwrap();
        }
        return Ok(Output::table(out));
    }
    let ax = axis(cfg.text("bifurcate.axis"));
    let points = cfg.count("bifurcate.points");
    let grid = linspace(cfg.f64("bifurcate.from"), cfg.f64("bifurcate.to"), points);
    let seeding = if cfg.text("bifurcate.seeding") == "follow" { Seeding::Follow } else { Seeding::Fixed };
    let diagram = dynamics::bifurcation_1d(&params, ax, &grid, initial, seeding, &oc)?;
    out.push_str("axis,P,class\n");
    for point in diagram {
        let code = point.class.kind.code();
        if point.prices.is_empty() {
            writeln!(out, "{},,{}", point.value, code).unwrap();
        }
        for p in point.prices {
            writeln!(out, "{},{},{}", point.value, p, code).unwrap();
        }
    }
    Ok(Output { notes: vec![format!("axis: {}", ax.name())], body: out, sidecar: None })
}

pub fn basin(cfg: &Config) -> Result<Output, CliError> {
    let (params, rescale) = model(cfg)?;
    let oc = orbit_config(cfg, rescale)?;
    let star = equilibria::unbiased_steady_state(&params)?;
    let pick = |key: &str, default: f64| cfg.opt_f64(key).unwrap_or(default);
    let y_range = (pick("basin.y_min", star.y - 10.0), pick("basin.y_max", star.y + 10.0));
    let p_range = (pick("basin.p_min", star.p - 10.0), pick("basin.p_max", star.p + 10.0));
    let slice = dynamics::basin_slice(&params, y_range, p_range, cfg.count("basin.resolution"), &oc)?;
    let (ys, ps) = (slice.y_values(), slice.p_values());
    let mut out = String::from("Y,P,label\n");
    for (i, label) in slice.labels.iter().enumerate() {
        let (y, p) = (ys[i % slice.resolution], ps[i / slice.resolution]);
        writeln!(out, "{},{},{}", y, p, label.map(|l| l.to_string()).unwrap_or_default()).unwrap();
    }
    let mut catalog = String::from("label,kind,period,mean_Y,mean_P\n");
    for (i, c) in slice.catalog.iter().enumerate() {
        let period = c.kind.period().map(|k| k.to_string()).unwrap_or_default();
        writeln!(catalog, "{},{},{},{},{}", i, c.kind.name(), period, c.mean.y, c.mean.p).unwrap();
    }
    let divergent = slice.labels.iter().filter(|l| l.is_none()).count();
    Ok(Output { notes: vec![format!("divergent cells: {divergent}")], body: out, sidecar: Some(catalog) })
}

pub fn orbit(cfg: &Config) -> Result<Output, CliError> {
    let (params, _) = model(cfg)?;
    let oc = orbit_config(cfg, false)?;
    let initial = match cfg.text("trajectory.initial") {
        "explicit" => {
            let get = |k: &str| cfg.opt_f64(k).ok_or_else(|| CliError::Config(format!("`{k}` is required for an explicit datum")));
            State::new(get("trajectory.y0")?, get("trajectory.p0")?, get("trajectory.z0")?)
        }
        name => datum(name).resolve(&params)?,
    };
    let orbit = dynamics::simulate(&params, initial, &oc);
    let star = equilibria::unbiased_steady_state(&params)?;
    let class = dynamics::classify_orbit(&orbit, oc.tolerance(star.p));
    let mut notes = vec![format!("class: {}", class.kind.code())];
    let steps = cfg.count("trajectory.lyapunov_steps");
    if steps > 0 {
        let l = dynamics::lyapunov_largest(&params, initial, steps, cfg.count("trajectory.renorm"))?;
        notes.push(format!("lyapunov: {l}"));
    }
    let mut out = String::from("t,Y,P,Z\n");
    for (i, s) in orbit.states.iter().enumerate() {
        writeln!(out, "{},{},{},{}", oc.transient + i, s.y, s.p, s.z).unwrap();
    }
    if class.kind == AttractorKind::Divergent {
        notes.push("orbit diverged".into());
    }
    Ok(Output { notes, body: out, sidecar: None })
}

pub fn stochastic(cfg: &Config) -> Result<Output, CliError> {
    let (params, rescale) = model(cfg)?;
    let s_rel = cfg.f64("stochastic.s_rel");
    let noise = NoiseConfig {
        s: match cfg.opt_f64("stochastic.s") {
            Some(s) => s,
            None => stochastic::scaled_shock(&params, s_rel)?,
        },
        seed: cfg.seed("stochastic.seed"),
        length: cfg.count("stochastic.length"),
        burn_in: cfg.count("stochastic.burn_in"),
        stream: 0,
    };
    noise.validate()?;
    let mut out = String::new();
    let mut notes = Vec::new();
    match cfg.text("stochastic.mode") {
        "kurtosis" => {
            let (betas, omegas) = grid_axes(cfg)?;
            notes.push("kurtosis is non-excess (3 for a normal sample)".to_string());
            out.push_str("beta,omega,kurtosis,n_valid\n");
            for c in stochastic::kurtosis_grid(&params, &betas, &omegas, s_rel, &noise, rescale) {
                writeln!(out, "{},{},{},{}", c.beta, c.omega, opt(c.kurtosis), c.n_valid).unwrap();
            }
        }
        mode => {
            let init = InitialDatum::Plus.resolve(&params)?;
            let path = stochastic::simulate_stochastic(&params, init, &noise);
            let returns = stochastic::log_returns(&path.prices())?;
            if mode == "path" {
                out.push_str("t,Y,P,R\n");
                for (i, s) in path.states.iter().enumerate() {
                    let r = if i == 0 { String::new() } else { opt(Some(returns.returns[i - 1]).filter(|r| !r.is_nan())) };
                    writeln!(out, "{},{},{},{}", noise.burn_in + i, s.y, s.p, r).unwrap();
                }
            } else {
                let series = if cfg.flag("stochastic.absolute") { returns.absolute() } else { returns.valid() };
                let acf = stochastic::autocorrelation(&series, cfg.count("stochastic.max_lag"))?;
                out.push_str("lag,acf\n");
                for (lag, r) in acf.iter().enumerate().skip(1) {
                    writeln!(out, "{lag},{r}").unwrap();
                }
            }
            if path.truncated {
                return Err(CliError::Numerical("path left the finite range".into()));
            }
        }
    }
    Ok(Output { notes, body: out, sidecar: None })
}

pub fn execute(cfg: &Config) -> Result<Output, CliError> {
    match cfg.command.as_str() {
        "steady" => steady(cfg),
        "stability" => stability(cfg),
        "region" => region(cfg),
        "bifurcate" => bifurcate(cfg),
        "basin" => basin(cfg),
        "orbit" => orbit(cfg),
        "stochastic" => stochastic(cfg),
        other => Err(CliError::Config(format!("unknown command `{other}`"))),
    }
}
