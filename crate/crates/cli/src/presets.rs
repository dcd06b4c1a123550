//! Bundled scenario sets, one per published figure plus the reference table.

use crate::scenario::Scenario;

/// Reference deployment in config units.
pub const TABLE1: &str = "\
network.lambda_b = 20     # BSs per km²
network.p_t = 46          # dBm
network.h_bs = 30         # m
network.g_m = 10          # dB
network.g_s = -3.01       # dB
network.alpha_l = 2.09
network.alpha_n = 3.75
network.a_l = -41.1       # dB
network.a_n = -32.9       # dB
network.m_l = 3
network.m_n = 1
env.a = 0.3
env.eta = 300             # buildings per km²
env.c = 20                # m
cluster.r_h = 190         # m
uav.h_d = 120             # m
uav.theta = 0             # dB
";

#[derive(Debug, Clone)]
pub struct Preset {
    pub id: &'static str,
    pub description: &'static str,
    /// Declared single-core budget for the whole set at default sizes (s).
    pub budget_s: f64,
    /// `(run name, scenario text)` pairs.
    pub runs: Vec<(String, String)>,
}

impl Preset {
    pub fn scenarios(&self) -> Result<Vec<Scenario>, String> {
        self.runs
            .iter()
            .map(|(name, text)| Scenario::parse(text).map_err(|d| format!("preset {} run {name}:\n{d}", self.id)))
            .collect()
    }
}

fn run(id: &str, suffix: &str, body: String) -> (String, String) {
    run_with(id, suffix, &[], body)
}

/// Like [`run`], with some reference values replaced.
fn run_with(id: &str, suffix: &str, overrides: &[(&str, String)], body: String) -> (String, String) {
    let name = if suffix.is_empty() {
        id.to_string()
    } else {
        format!("{id}_{suffix}")
    };
    let base: String = TABLE1
        .lines()
        .map(|l| {
            let key = l.split('=').next().unwrap_or("").trim();
            match overrides.iter().find(|(k, _)| *k == key) {
                Some((k, v)) => format!("{k} = {v}\n"),
                None => format!("{l}\n"),
            }
        })
        .collect();
    (name.clone(), format!("name = {name}\n{base}{body}"))
}

fn mobility(h1: f64, h2: f64, vbar: f64, mu: f64, beta: f64) -> String {
    format!("mobility.h1 = {h1}\nmobility.h2 = {h2}\nmobility.vbar = {vbar}\nmobility.mu = {mu}\nmobility.beta = {beta}\n")
}

const SPREADS: [f64; 3] = [0.0, 30.0, 50.0];

fn per_spread(id: &str, f: impl Fn(f64, f64) -> String) -> Vec<(String, String)> {
    SPREADS
        .iter()
        .map(|&hb| run(id, &format!("hbar{hb}"), f(150.0 - 0.5 * hb, 150.0 + 0.5 * hb)))
        .collect()
}

fn static_set(id: &str, sweep: &str, samples: usize, with_gue: bool) -> Vec<(String, String)> {
    let tail = format!("{sweep}mc.samples = {samples}\nmc.seed = 1\n");
    let mut v = vec![
        run(id, "comp", format!("mode = static-comp\n{tail}")),
        run(id, "nearest", format!("mode = static-nearest\n{tail}")),
    ];
    if with_gue {
        v.push(run(id, "gue_comp", format!("mode = gue\nassociation = comp\n{tail}")));
        v.push(run(id, "gue_nearest", format!("mode = gue\nassociation = nearest\n{tail}")));
    }
    v
}

pub fn presets() -> Vec<Preset> {
    let theta = "sweep.param = theta\nsweep.values = -10:2.5:10\n";
    let density = "sweep.param = lambda_b\nsweep.values = 5, 10, 20, 30, 40, 50\n";
    vec![
        Preset {
            id: "table1",
            description: "reference deployment, one CoMP coverage point at 0 dB",
            budget_s: 60.0,
            runs: vec![run(
                "table1",
                "",
                "mode = static-comp\nsweep.param = theta\nsweep.values = 0\nmc.samples = 20000\nmc.seed = 1\n".into(),
            )],
        },
        Preset {
            id: "fig2a",
            description: "coverage vs SIR threshold: CoMP bounds, nearest association, ground users",
            budget_s: 300.0,
            runs: static_set("fig2a", theta, 50_000, true),
        },
        Preset {
            id: "fig2b",
            description: "coverage vs collaboration radius at 0 dB: CoMP bounds and ground CoMP",
            budget_s: 450.0,
            runs: {
                let sweep = "sweep.param = r_c\nsweep.values = 100, 150, 200, 250, 300, 350, 400\nmc.samples = 10000\nmc.seed = 1\n";
                vec![
                    run("fig2b", "comp", format!("mode = static-comp\n{sweep}")),
                    run("fig2b", "gue_comp", format!("mode = gue\nassociation = comp\n{sweep}")),
                ]
            },
        },
        Preset {
            id: "fig3a",
            description: "nearest-association handover probability vs BS density for altitude spreads 0, 30, 50 m",
            budget_s: 60.0,
            runs: SPREADS
                .iter()
                .map(|&hb| {
                    run(
                        "fig3a",
                        &format!("hbar{hb}"),
                        format!(
                            "mode = mobile-nearest\nmetric = handover-probability\n{}{density}mc.samples = 100000\nmc.seed = 1\n",
                            mobility(100.0, 100.0 + hb, 30.0, 300.0, 0.5)
                        ),
                    )
                })
                .collect(),
        },
        Preset {
            id: "fig3b",
            description: "CoMP handover probability vs cluster half-distance for altitude spreads 0, 30, 50 m",
            budget_s: 60.0,
            runs: SPREADS
                .iter()
                .map(|&hb| {
                    run(
                        "fig3b",
                        &format!("hbar{hb}"),
                        format!(
                            "mode = mobile-comp\nmetric = handover-probability\n{}sweep.param = r_h\nsweep.values = 100, 150, 190, 250, 300, 400\nmc.samples = 100000\nmc.seed = 1\n",
                            mobility(100.0, 100.0 + hb, 30.0, 300.0, 0.5)
                        ),
                    )
                })
                .collect(),
        },
        Preset {
            id: "fig4a",
            description: "coverage vs UAV altitude at 0 dB: CoMP bounds and nearest association",
            budget_s: 300.0,
            runs: static_set("fig4a", "sweep.param = h_d\nsweep.values = 60, 90, 120, 150, 180, 210, 240\n", 10_000, false),
        },
        Preset {
            id: "fig4b",
            description: "coverage vs BS density at 0 dB: CoMP bounds, nearest association, ground users",
            budget_s: 450.0,
            runs: static_set("fig4b", density, 10_000, true),
        },
        Preset {
            id: "fig5a",
            description: "nearest-association handover rate vs BS density for altitude spreads 0, 30, 50 m at 50 km/h",
            budget_s: 60.0,
            runs: per_spread("fig5a", |h1, h2| {
                format!(
                    "mode = mobile-nearest\nmetric = handover-rate\n{}{density}mc.samples = 100000\nmc.seed = 1\n",
                    mobility(h1, h2, 50.0, 300.0, 0.5)
                )
            }),
        },
        Preset {
            id: "fig5b",
            description: "nearest-association handover rate vs BS density for speeds 10, 30, 50 km/h",
            budget_s: 60.0,
            runs: [10.0, 30.0, 50.0]
                .iter()
                .map(|&v| {
                    run(
                        "fig5b",
                        &format!("v{v}"),
                        format!(
                            "mode = mobile-nearest\nmetric = handover-rate\n{}{density}mc.samples = 100000\nmc.seed = 1\n",
                            mobility(135.0, 165.0, v, 300.0, 0.5)
                        ),
                    )
                })
                .collect(),
        },
        Preset {
            id: "fig5c",
            description: "mobile nearest-association coverage at -10 dB vs BS density for speeds 30, 90 km/h",
            budget_s: 300.0,
            runs: [30.0, 90.0]
                .iter()
                .map(|&v| {
                    run_with(
                        "fig5c",
                        &format!("v{v}"),
                        &[("uav.theta", "-10".into())],
                        format!(
                            "mode = mobile-nearest\n{}{density}mc.samples = 5000\nmc.seed = 1\n",
                            mobility(135.0, 165.0, v, 100.0, 0.5)
                        ),
                    )
                })
                .collect(),
        },
        Preset {
            id: "fig6a",
            description: "CoMP handover rate vs collaboration radius for altitude spreads 0, 30, 50 m",
            budget_s: 60.0,
            runs: per_spread("fig6a", |h1, h2| {
                format!(
                    "mode = mobile-comp\nmetric = handover-rate\n{}sweep.param = r_c\nsweep.values = 100, 150, 200, 250, 300, 350, 400\nmc.samples = 100000\nmc.seed = 1\n",
                    mobility(h1, h2, 30.0, 300.0, 0.5)
                )
            }),
        },
        Preset {
            id: "fig6b",
            description: "CoMP handover rate vs speed for cluster half-distances 100, 190, 400 m",
            budget_s: 60.0,
            runs: [100.0, 190.0, 400.0]
                .iter()
                .map(|&rh| {
                    run_with(
                        "fig6b",
                        &format!("rh{rh}"),
                        &[("cluster.r_h", rh.to_string())],
                        format!(
                            "mode = mobile-comp\nmetric = handover-rate\n{}sweep.param = vbar\nsweep.values = 10, 30, 50, 70, 90, 110\nmc.samples = 100000\nmc.seed = 1\n",
                            mobility(125.0, 175.0, 30.0, 100.0, 1.0)
                        ),
                    )
                })
                .collect(),
        },
        Preset {
            id: "fig6c",
            description: "mobile CoMP coverage vs cluster half-distance for speeds 30, 90 km/h with a full handover penalty",
            budget_s: 300.0,
            runs: [30.0, 90.0]
                .iter()
                .map(|&v| {
                    run(
                        "fig6c",
                        &format!("v{v}"),
                        format!(
                            "mode = mobile-comp\n{}sweep.param = r_h\nsweep.values = 100, 190, 300, 400\nmc.samples = 5000\nmc.seed = 1\nanalytic.inner_samples = 2000\n",
                            mobility(135.0, 165.0, v, 100.0, 1.0)
                        ),
                    )
                })
                .collect(),
        },
    ]
}

pub fn preset(id: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.id == id)
}
