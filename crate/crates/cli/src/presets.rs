//! Named parameter tables, one per reproduced chart or parameter family.

use serde_json::Value;

type Entries = Vec<(&'static str, Value)>;

fn family(sigma: f64, gamma: f64) -> Entries {
    vec![
        ("model.A", 15.0.into()),
        ("model.F_star", 15.0.into()),
        ("model.c", 0.38.into()),
        ("model.d", 0.38.into()),
        ("model.h", 0.38.into()),
        ("model.b", 0.5.into()),
        ("model.mu", 1.0.into()),
        ("model.sigma", sigma.into()),
        ("model.gamma", gamma.into()),
    ]
}

fn grid(beta_max: f64, beta_points: u64, omega_points: u64) -> Entries {
    vec![
        ("grid.beta_min", 0.0.into()),
        ("grid.beta_max", beta_max.into()),
        ("grid.beta_points", beta_points.into()),
        ("grid.omega_min", 0.0.into()),
        ("grid.omega_max", 1.0.into()),
        ("grid.omega_points", omega_points.into()),
    ]
}

fn statics(fundamental: f64, bias: f64) -> Entries {
    vec![
        ("model.A", 10.0.into()),
        ("model.F_star", fundamental.into()),
        ("model.c", 0.5.into()),
        ("model.d", 0.5.into()),
        ("model.h", 0.5.into()),
        ("model.b", bias.into()),
        ("model.beta", 1.0.into()),
    ]
}

fn sweep(axis: &str, from: f64, to: f64) -> Entries {
    vec![
        ("sweep.axis", axis.into()),
        ("sweep.from", from.into()),
        ("sweep.to", to.into()),
        ("sweep.points", 201u64.into()),
    ]
}

fn diagram_1d(omega: f64, from: f64, to: f64, initial: &str) -> Entries {
    vec![
        ("model.omega", omega.into()),
        ("bifurcate.mode", "1d".into()),
        ("bifurcate.axis", "beta".into()),
        ("bifurcate.from", from.into()),
        ("bifurcate.to", to.into()),
        ("bifurcate.points", 400u64.into()),
        ("bifurcate.seeding", "follow".into()),
        ("bifurcate.initial", initial.into()),
    ]
}

fn diagram_2d() -> Entries {
    let mut e = grid(5.0, 201, 101);
    e.extend([("bifurcate.mode", "2d".into()), ("bifurcate.initial", "plus".into())]);
    e
}

fn basin(beta: f64) -> Entries {
    let mut e = family(3.0, 0.8);
    e.extend([("model.omega", 1.0.into()), ("model.beta", beta.into()), ("basin.resolution", 512u64.into())]);
    e
}

fn join(parts: Vec<Entries>) -> Entries {
    parts.into_iter().flatten().collect()
}

/// Names accepted by `--preset`.
pub const NAMES: &[&str] = &[
    "set1", "set2", "set3", "mixed", "fig1", "fig1a", "fig1b", "fig2", "fig2a", "fig2b", "fig2c", "fig3", "fig3a",
    "fig3b", "fig3c", "fig4", "fig4a", "fig4b", "fig4b-blue", "fig4b-red", "fig4b-black", "fig5", "fig5a", "fig5b",
    "fig5c", "fig5d", "fig5e", "fig5f", "fig6", "fig6a", "fig6b", "fig6b-blue", "fig6b-red", "fig6b-black", "fig7",
    "fig7a", "fig7b", "fig7b-blue", "fig7b-red", "fig7b-black", "fig7b-magenta", "fig8", "fig9",
];

pub fn preset(name: &str) -> Option<Entries> {
    let set1 = || family(3.0, 0.8);
    let set2 = || family(1.3, 1.05);
    let set3 = || family(4.0, 1.05);
    let e = match name {
        "set1" => set1(),
        "set2" => set2(),
        "set3" => set3(),
        "mixed" => join(vec![
            vec![
                ("model.A", 15.0.into()),
                ("model.F_star", 15.0.into()),
                ("model.c", 0.5.into()),
                ("model.gamma", 1.1.into()),
                ("model.d", 0.2f64.sqrt().into()),
                ("model.h", 0.2f64.sqrt().into()),
                ("model.sigma", 3.8.into()),
                ("model.mu", 1.0.into()),
                ("model.b", 0.5.into()),
                ("model.beta", 1.0.into()),
                ("stability.target", "unbiased".into()),
                ("stability.axis", "omega".into()),
                ("stability.from", 0.0.into()),
                ("stability.to", 1.0.into()),
            ],
        ]),
        "fig1" | "fig1a" => join(vec![statics(10.0, 0.5), vec![("model.omega", 1.0.into())], sweep("beta", 0.0, 10.0)]),
        "fig1b" => join(vec![statics(10.0, 0.5), vec![("model.omega", 1.0.into())], sweep("b", 0.05, 3.0)]),
        "fig2" | "fig2a" => join(vec![statics(8.0, 1.0), sweep("omega", 0.0, 1.0)]),
        "fig2b" => join(vec![statics(20.0, 1.0), sweep("omega", 0.0, 1.0)]),
        "fig2c" => join(vec![statics(35.0, 1.0), sweep("omega", 0.0, 1.0)]),
        "fig3" | "fig3a" => join(vec![set1(), grid(5.0, 251, 101)]),
        "fig3b" => join(vec![set2(), grid(5.0, 251, 101)]),
        "fig3c" => join(vec![set3(), grid(5.0, 251, 101)]),
        "fig4" | "fig4a" => join(vec![set1(), diagram_2d()]),
        "fig4b" | "fig4b-blue" => join(vec![set1(), diagram_1d(1.0, 0.0, 1.17, "plus")]),
        "fig4b-red" => join(vec![set1(), diagram_1d(1.0, 5.0, 0.73, "plus")]),
        "fig4b-black" => join(vec![set1(), diagram_1d(1.0, 5.0, 0.73, "minus")]),
        "fig5a" => basin(0.8),
        "fig5b" => basin(1.0),
        "fig5" | "fig5c" => basin(2.5),
        "fig5d" => basin(3.3),
        "fig5e" => basin(4.0),
        "fig5f" => basin(6.0),
        "fig6" | "fig6a" => join(vec![set2(), diagram_2d()]),
        "fig6b" | "fig6b-blue" => join(vec![set2(), diagram_1d(0.575, 0.0, 6.0, "plus")]),
        "fig6b-red" => join(vec![set2(), diagram_1d(0.575, 6.0, 0.0, "plus")]),
        "fig6b-black" => join(vec![set2(), diagram_1d(0.575, 6.0, 0.0, "minus")]),
        "fig7" | "fig7a" => join(vec![set3(), diagram_2d()]),
        "fig7b" | "fig7b-blue" => join(vec![set3(), diagram_1d(0.8, 1.5, 2.65, "plus")]),
        "fig7b-red" => join(vec![set3(), diagram_1d(0.8, 3.3, 0.855, "plus")]),
        "fig7b-black" => join(vec![set3(), diagram_1d(0.8, 3.3, 0.855, "minus")]),
        "fig7b-magenta" => join(vec![set3(), diagram_1d(0.8, 0.0, 3.3, "plus")]),
        "fig8" => join(vec![
            set1(),
            grid(6.0, 20, 5),
            vec![("stochastic.mode", "kurtosis".into()), ("stochastic.s_rel", 0.15.into())],
        ]),
        "fig9" => join(vec![
            set1(),
            vec![
                ("model.beta", 6.0.into()),
                ("model.omega", 0.0.into()),
                ("stochastic.mode", "acf".into()),
                ("stochastic.s_rel", 0.15.into()),
                ("stochastic.max_lag", 50u64.into()),
                ("stochastic.absolute", true.into()),
            ],
        ]),
        _ => return None,
    };
    Some(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::spec_for;

    #[test]
    fn every_name_resolves_to_known_keys() {
        for name in NAMES {
            let entries = preset(name).unwrap_or_else(|| panic!("{name}"));
            for (key, _) in entries {
                assert!(spec_for(key).is_some(), "{name}: {key}");
            }
        }
        assert!(preset("fig10").is_none());
    }
}
