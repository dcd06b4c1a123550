use std::fmt;
use std::str::FromStr;

use skycov::analytic::{Association, StaticScenario};
use skycov::geometry::{db_to_linear, linear_to_db, ClusterGeometry, NetworkConfig};
use skycov::mobility::{kmh_to_mps, MobilityModel};

use crate::config::{ConfigError, Diagnostics, RawConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    StaticComp,
    StaticNearest,
    Gue,
    MobileComp,
    MobileNearest,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::StaticComp, Mode::StaticNearest, Mode::Gue, Mode::MobileComp, Mode::MobileNearest];

    pub fn name(self) -> &'static str {
        match self {
            Mode::StaticComp => "static-comp",
            Mode::StaticNearest => "static-nearest",
            Mode::Gue => "gue",
            Mode::MobileComp => "mobile-comp",
            Mode::MobileNearest => "mobile-nearest",
        }
    }

    pub fn is_mobile(self) -> bool {
        matches!(self, Mode::MobileComp | Mode::MobileNearest)
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}`; expected one of {}", names(Mode::ALL.iter().map(|m| m.name()))))
    }
}

/// What a mobile run reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Coverage,
    HandoverRate,
    HandoverProbability,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Coverage, Metric::HandoverRate, Metric::HandoverProbability];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Coverage => "coverage",
            Metric::HandoverRate => "handover-rate",
            Metric::HandoverProbability => "handover-probability",
        }
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`; expected one of {}", names(Metric::ALL.iter().map(|m| m.name()))))
    }
}

/// Swept quantity, in config units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// SIR threshold (dB).
    Theta,
    /// UAV altitude (m).
    Altitude,
    /// BS density (per km²).
    Density,
    /// Half inter-cluster distance (m).
    HalfDistance,
    /// Collaboration radius (m).
    CollaborationRadius,
    /// Speed (km/h).
    Speed,
    /// Altitude band width (m), centred on the band's midpoint.
    AltitudeSpread,
    /// Waypoint density (per km²).
    WaypointDensity,
    /// Handover penalty.
    Penalty,
}

impl SweepParam {
    pub const ALL: [SweepParam; 9] = [
        SweepParam::Theta,
        SweepParam::Altitude,
        SweepParam::Density,
        SweepParam::HalfDistance,
        SweepParam::CollaborationRadius,
        SweepParam::Speed,
        SweepParam::AltitudeSpread,
        SweepParam::WaypointDensity,
        SweepParam::Penalty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Theta => "theta",
            SweepParam::Altitude => "h_d",
            SweepParam::Density => "lambda_b",
            SweepParam::HalfDistance => "r_h",
            SweepParam::CollaborationRadius => "r_c",
            SweepParam::Speed => "vbar",
            SweepParam::AltitudeSpread => "hbar",
            SweepParam::WaypointDensity => "mu",
            SweepParam::Penalty => "beta",
        }
    }

    /// CSV column name, with its unit.
    pub fn column(self) -> &'static str {
        match self {
            SweepParam::Theta => "theta_db",
            SweepParam::Altitude => "h_d_m",
            SweepParam::Density => "lambda_b_per_km2",
            SweepParam::HalfDistance => "r_h_m",
            SweepParam::CollaborationRadius => "r_c_m",
            SweepParam::Speed => "vbar_kmh",
            SweepParam::AltitudeSpread => "hbar_m",
            SweepParam::WaypointDensity => "mu_per_km2",
            SweepParam::Penalty => "beta",
        }
    }

    fn mobile_only(self) -> bool {
        matches!(
            self,
            SweepParam::Speed | SweepParam::AltitudeSpread | SweepParam::WaypointDensity | SweepParam::Penalty
        )
    }
}

impl FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown sweep parameter `{s}`; expected one of {}", names(SweepParam::ALL.iter().map(|p| p.name()))))
    }
}

fn names<'a>(it: impl Iterator<Item = &'a str>) -> String {
    it.collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub samples: usize,
    pub seed: u64,
}

/// A fully typed run description, in SI units and linear scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub network: NetworkConfig,
    pub clusters: ClusterGeometry,
    pub h_d: f64,
    pub theta_db: f64,
    pub mode: Mode,
    pub metric: Metric,
    pub association: Association,
    pub mobility: Option<MobilityModel>,
    pub sweep: Sweep,
    pub mc: McSettings,
    pub inner_samples: usize,
}

pub const KNOWN_KEYS: &[&str] = &[
    "name",
    "mode",
    "metric",
    "association",
    "network.lambda_b",
    "network.p_t",
    "network.h_bs",
    "network.g_m",
    "network.g_s",
    "network.alpha_l",
    "network.alpha_n",
    "network.a_l",
    "network.a_n",
    "network.m_l",
    "network.m_n",
    "env.a",
    "env.eta",
    "env.c",
    "cluster.r_h",
    "cluster.r_c",
    "uav.h_d",
    "uav.theta",
    "mobility.mu",
    "mobility.h1",
    "mobility.h2",
    "mobility.vbar",
    "mobility.beta",
    "mobility.unit_time",
    "sweep.param",
    "sweep.values",
    "mc.samples",
    "mc.seed",
    "analytic.inner_samples",
];

fn parse_enum<T: FromStr<Err = String>>(raw: &RawConfig, key: &str, diags: &mut Diagnostics) -> Option<T> {
    let e = raw.get(key)?;
    match e.value.parse::<T>() {
        Ok(v) => Some(v),
        Err(message) => {
            diags.push(ConfigError::Value {
                line: e.line,
                key: key.to_string(),
                message,
            });
            None
        }
    }
}

impl Scenario {
    /// Parses and validates a scenario file, collecting every diagnostic.
    pub fn parse(text: &str) -> Result<Self, Diagnostics> {
        let mut d = Diagnostics::default();
        let raw = RawConfig::parse(text, &mut d);
        raw.check_known(KNOWN_KEYS, &mut d);
        let s = Self::from_raw(&raw, &mut d);
        if let Some(s) = &s {
            for msg in s.validate() {
                d.invariant(msg);
            }
        }
        match s {
            Some(s) if d.is_empty() => Ok(s),
            _ => Err(d),
        }
    }

    fn from_raw(raw: &RawConfig, d: &mut Diagnostics) -> Option<Self> {
        let mut net = NetworkConfig::baseline();
        let num = |k: &str, d: &mut Diagnostics| raw.number(k, d);
        if let Some(v) = num("network.lambda_b", d) {
            net.lambda_b = v * 1e-6;
        }
        if let Some(v) = num("network.p_t", d) {
            net.p_t = db_to_linear(v - 30.0);
        }
        if let Some(v) = num("network.h_bs", d) {
            net.h_bs = v;
        }
        if let Some(v) = num("network.g_m", d) {
            net.g_m = db_to_linear(v);
        }
        if let Some(v) = num("network.g_s", d) {
            net.g_s = db_to_linear(v);
        }
        if let Some(v) = num("network.alpha_l", d) {
            net.alpha_l = v;
        }
        if let Some(v) = num("network.alpha_n", d) {
            net.alpha_n = v;
        }
        if let Some(v) = num("network.a_l", d) {
            net.a_l = db_to_linear(v);
        }
        if let Some(v) = num("network.a_n", d) {
            net.a_n = db_to_linear(v);
        }
        if let Some(v) = raw.integer("network.m_l", d) {
            net.m_l = v.min(u32::MAX as u64) as u32;
        }
        if let Some(v) = raw.integer("network.m_n", d) {
            net.m_n = v.min(u32::MAX as u64) as u32;
        }
        if let Some(v) = num("env.a", d) {
            net.env.a = v;
        }
        if let Some(v) = num("env.eta", d) {
            net.env.eta = v;
        }
        if let Some(v) = num("env.c", d) {
            net.env.c = v;
        }

        let mut clusters = ClusterGeometry::new(190.0).ok();
        let r_h = num("cluster.r_h", d);
        let r_c = num("cluster.r_c", d);
        match (r_h, r_c) {
            (Some(_), Some(_)) => d.invariant("set either cluster.r_h or cluster.r_c, not both"),
            (Some(v), None) => clusters = cluster_or(ClusterGeometry::new(v), "cluster.r_h", d),
            (None, Some(v)) => clusters = cluster_or(ClusterGeometry::from_collaboration_radius(v), "cluster.r_c", d),
            (None, None) => {}
        }

        let h_d = num("uav.h_d", d).unwrap_or(120.0);
        let theta_db = num("uav.theta", d).unwrap_or(0.0);

        let mode = match raw.get("mode") {
            Some(_) => parse_enum::<Mode>(raw, "mode", d),
            None => {
                d.invariant("missing required key `mode`");
                None
            }
        };
        let metric = match raw.get("metric") {
            Some(_) => parse_enum::<Metric>(raw, "metric", d),
            None => Some(Metric::Coverage),
        };
        let association = match raw.get("association").map(|e| (e.line, e.value.as_str())) {
            None | Some((_, "comp")) => Some(Association::Comp),
            Some((_, "nearest")) => Some(Association::Nearest),
            Some((line, other)) => {
                d.push(ConfigError::Value {
                    line,
                    key: "association".into(),
                    message: format!("expected `comp` or `nearest`, found `{other}`"),
                });
                None
            }
        };

        let mobility = raw.has_section("mobility").then(|| {
            let mut m = MobilityModel::baseline();
            if let Some(v) = num("mobility.mu", d) {
                m.mu = v * 1e-6;
            }
            if let Some(v) = num("mobility.h1", d) {
                m.h1 = v;
            }
            if let Some(v) = num("mobility.h2", d) {
                m.h2 = v;
            }
            if let Some(v) = num("mobility.vbar", d) {
                m.vbar = kmh_to_mps(v);
            }
            if let Some(v) = num("mobility.beta", d) {
                m.beta = v;
            }
            if let Some(v) = num("mobility.unit_time", d) {
                m.unit_time = v;
            }
            m
        });

        let param = match raw.get("sweep.param") {
            Some(_) => parse_enum::<SweepParam>(raw, "sweep.param", d),
            None => {
                d.invariant("missing required key `sweep.param`");
                None
            }
        };
        let values = match raw.get("sweep.values") {
            Some(_) => raw.grid("sweep.values", d),
            None => {
                d.invariant("missing required key `sweep.values`");
                None
            }
        };
        let samples = raw.integer("mc.samples", d).unwrap_or(10_000) as usize;
        let seed = raw.integer("mc.seed", d).unwrap_or(1);
        let inner_samples = raw.integer("analytic.inner_samples", d).unwrap_or(10_000) as usize;
        let name = raw.get("name").map(|e| e.value.clone()).unwrap_or_else(|| "run".into());
        if let Some(e) = raw.get("name") {
            if !e.value.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c)) {
                d.push(ConfigError::Value {
                    line: e.line,
                    key: "name".into(),
                    message: "use letters, digits, `_`, `-` or `.` only".into(),
                });
            }
        }

        Some(Self {
            name,
            network: net,
            clusters: clusters?,
            h_d,
            theta_db,
            mode: mode?,
            metric: metric?,
            association: association?,
            mobility,
            sweep: Sweep {
                param: param?,
                values: values?,
            },
            mc: McSettings { samples, seed },
            inner_samples,
        })
    }

    /// Every violated invariant, as human-readable messages.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.network.validate() {
            out.push(e.to_string());
        }
        if self.uses_uav_altitude() && !(self.h_d > self.network.h_bs) {
            out.push(format!(
                "uav.h_d = {} m must exceed network.h_bs = {} m (the UAV must fly above the BS antennas, h_d > h_BS)",
                self.h_d, self.network.h_bs
            ));
        }
        match (self.mode.is_mobile(), &self.mobility) {
            (true, None) => out.push(format!("mode {} requires mobility.* keys", self.mode.name())),
            (false, Some(_)) => out.push(format!("mode {} takes no mobility.* keys", self.mode.name())),
            (true, Some(m)) => {
                if let Err(e) = m.validate(self.network.h_bs) {
                    out.push(format!("mobility: {e}"));
                }
            }
            (false, None) => {}
        }
        if !self.mode.is_mobile() && self.metric != Metric::Coverage {
            out.push(format!("metric {} needs a mobile mode", self.metric.name()));
        }
        if self.mode != Mode::Gue && self.association != Association::Comp {
            out.push("association applies to mode gue only".into());
        }
        let v = &self.sweep.values;
        if v.is_empty() {
            out.push("sweep.values must not be empty".into());
        }
        if v.windows(2).any(|w| !(w[1] > w[0])) {
            out.push("sweep.values must be strictly increasing".into());
        }
        if self.mc.samples == 0 {
            out.push("mc.samples must be at least 1".into());
        }
        if self.inner_samples == 0 {
            out.push("analytic.inner_samples must be at least 1".into());
        }
        if let Some(msg) = self.sweep_conflict() {
            out.push(msg);
        } else if out.is_empty() {
            for &x in v {
                let p = self.at(x);
                for msg in p.point_checks() {
                    out.push(format!("at {} = {}: {}", self.sweep.param.name(), x, msg));
                }
            }
        }
        out
    }

    fn uses_uav_altitude(&self) -> bool {
        matches!(self.mode, Mode::StaticComp | Mode::StaticNearest)
    }

    fn uses_clusters(&self) -> bool {
        match self.mode {
            Mode::StaticComp | Mode::MobileComp => true,
            Mode::Gue => self.association == Association::Comp,
            Mode::StaticNearest | Mode::MobileNearest => false,
        }
    }

    fn sweep_conflict(&self) -> Option<String> {
        let p = self.sweep.param;
        let handover = self.mode.is_mobile() && self.metric != Metric::Coverage;
        let bad = match p {
            SweepParam::Theta => handover,
            SweepParam::Altitude => !self.uses_uav_altitude(),
            SweepParam::HalfDistance | SweepParam::CollaborationRadius => !self.uses_clusters(),
            SweepParam::Penalty => !self.mode.is_mobile() || handover,
            SweepParam::Density => self.mode == Mode::MobileComp && handover,
            _ => p.mobile_only() && !self.mode.is_mobile(),
        };
        bad.then(|| {
            let what = if self.mode.is_mobile() {
                format!("mode {} with metric {}", self.mode.name(), self.metric.name())
            } else {
                format!("mode {}", self.mode.name())
            };
            format!("sweep.param {} has no effect under {what}", p.name())
        })
    }

    fn point_checks(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.network.validate() {
            out.push(e.to_string());
        }
        if self.uses_uav_altitude() && !(self.h_d > self.network.h_bs) {
            out.push(format!(
                "h_d = {} m must exceed h_BS = {} m (h_d > h_BS)",
                self.h_d, self.network.h_bs
            ));
        }
        if !(self.clusters.r_h > 0.0) {
            out.push("cluster half-distance must be positive".into());
        }
        if let Some(m) = &self.mobility {
            if let Err(e) = m.validate(self.network.h_bs) {
                out.push(e.to_string());
            }
        }
        out
    }

    /// The scenario with the swept parameter set to `x` (config units).
    pub fn at(&self, x: f64) -> Scenario {
        let mut s = self.clone();
        match self.sweep.param {
            SweepParam::Theta => s.theta_db = x,
            SweepParam::Altitude => s.h_d = x,
            SweepParam::Density => s.network.lambda_b = x * 1e-6,
            SweepParam::HalfDistance => {
                s.clusters = ClusterGeometry::new(x).unwrap_or(ClusterGeometry { r_h: x, ..s.clusters });
            }
            SweepParam::CollaborationRadius => {
                s.clusters = ClusterGeometry::from_collaboration_radius(x).unwrap_or(ClusterGeometry { r_h: x, ..s.clusters });
            }
            SweepParam::Speed => {
                if let Some(m) = s.mobility.as_mut() {
                    m.vbar = kmh_to_mps(x);
                }
            }
            SweepParam::AltitudeSpread => {
                if let Some(m) = s.mobility.as_mut() {
                    *m = m.centred(0.5 * (m.h1 + m.h2), x);
                }
            }
            SweepParam::WaypointDensity => {
                if let Some(m) = s.mobility.as_mut() {
                    m.mu = x * 1e-6;
                }
            }
            SweepParam::Penalty => {
                if let Some(m) = s.mobility.as_mut() {
                    m.beta = x;
                }
            }
        }
        s
    }

    pub fn static_scenario(&self) -> StaticScenario {
        StaticScenario {
            config: self.network,
            clusters: self.clusters,
            h_d: self.h_d,
            theta_db: self.theta_db,
        }
    }

    /// Resolved configuration in config units, one sorted `key = value` per line.
    pub fn canonical(&self) -> String {
        let n = &self.network;
        let mut lines = vec![
            format!("name = {}", self.name),
            format!("mode = {}", self.mode.name()),
            format!("metric = {}", self.metric.name()),
            format!("association = {}", if self.association == Association::Comp { "comp" } else { "nearest" }),
            format!("network.lambda_b = {:e}", n.lambda_b * 1e6),
            format!("network.p_t = {:e}", linear_to_db(n.p_t) + 30.0),
            format!("network.h_bs = {:e}", n.h_bs),
            format!("network.g_m = {:e}", linear_to_db(n.g_m)),
            format!("network.g_s = {:e}", linear_to_db(n.g_s)),
            format!("network.alpha_l = {:e}", n.alpha_l),
            format!("network.alpha_n = {:e}", n.alpha_n),
            format!("network.a_l = {:e}", linear_to_db(n.a_l)),
            format!("network.a_n = {:e}", linear_to_db(n.a_n)),
            format!("network.m_l = {}", n.m_l),
            format!("network.m_n = {}", n.m_n),
            format!("env.a = {:e}", n.env.a),
            format!("env.eta = {:e}", n.env.eta),
            format!("env.c = {:e}", n.env.c),
            format!("cluster.r_h = {:e}", self.clusters.r_h),
            format!("uav.h_d = {:e}", self.h_d),
            format!("uav.theta = {:e}", self.theta_db),
            format!("sweep.param = {}", self.sweep.param.name()),
            format!(
                "sweep.values = {}",
                self.sweep.values.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",")
            ),
            format!("mc.samples = {}", self.mc.samples),
            format!("mc.seed = {}", self.mc.seed),
            format!("analytic.inner_samples = {}", self.inner_samples),
        ];
        if let Some(m) = &self.mobility {
            lines.push(format!("mobility.mu = {:e}", m.mu * 1e6));
            lines.push(format!("mobility.h1 = {:e}", m.h1));
            lines.push(format!("mobility.h2 = {:e}", m.h2));
            lines.push(format!("mobility.vbar = {:e}", m.vbar * 3.6));
            lines.push(format!("mobility.beta = {:e}", m.beta));
            lines.push(format!("mobility.unit_time = {:e}", m.unit_time));
        }
        lines.sort();
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}

fn cluster_or(r: skycov::Result<ClusterGeometry>, key: &str, d: &mut Diagnostics) -> Option<ClusterGeometry> {
    match r {
        Ok(c) => Some(c),
        Err(e) => {
            d.invariant(format!("{key}: {e}"));
            None
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}, sweep {} over {} points)",
            self.name,
            self.mode.name(),
            self.sweep.param.name(),
            self.sweep.values.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIN: &str = "mode = static-comp\nsweep.param = theta\nsweep.values = -10:5:10\n";

    #[test]
    fn minimal_file_uses_reference_values() {
        let s = Scenario::parse(MIN).unwrap();
        assert_eq!(s.network, NetworkConfig::baseline());
        assert_eq!(s.sweep.values.len(), 5);
        assert_eq!(s.mode, Mode::StaticComp);
        assert!(s.mobility.is_none());
    }

    #[test]
    fn units_are_converted() {
        let s = Scenario::parse(&format!(
            "{MIN}network.lambda_b = 50\nnetwork.p_t = 40\nnetwork.g_m = 0\n"
        ))
        .unwrap();
        assert!((s.network.lambda_b - 50e-6).abs() < 1e-18);
        assert!((s.network.p_t - 10.0).abs() < 1e-12);
        assert!((s.network.g_m - 1.0).abs() < 1e-15);
        let m = Scenario::parse(
            "mode = mobile-nearest\nmobility.vbar = 36\nmobility.mu = 100\nsweep.param = theta\nsweep.values = 0\n",
        )
        .unwrap()
        .mobility
        .unwrap();
        assert!((m.vbar - 10.0).abs() < 1e-12);
        assert!((m.mu - 100e-6).abs() < 1e-18);
    }

    #[test]
    fn low_altitude_rejected_with_requirement() {
        let e = Scenario::parse(&format!("{MIN}uav.h_d = 30\n")).unwrap_err().to_string();
        assert!(e.contains("h_d > h_BS"), "{e}");
    }

    #[test]
    fn penalty_out_of_range_rejected() {
        let e = Scenario::parse("mode = mobile-comp\nmobility.beta = 1.5\nsweep.param = theta\nsweep.values = 0\n")
            .unwrap_err()
            .to_string();
        assert!(e.contains("beta"), "{e}");
    }

    #[test]
    fn mobility_iff_mobile() {
        let e = Scenario::parse("mode = mobile-comp\nsweep.param = theta\nsweep.values = 0\n").unwrap_err().to_string();
        assert!(e.contains("requires mobility"), "{e}");
        let e = Scenario::parse(&format!("{MIN}mobility.vbar = 30\n")).unwrap_err().to_string();
        assert!(e.contains("takes no mobility"), "{e}");
    }

    #[test]
    fn grids_must_be_strictly_increasing() {
        let e = Scenario::parse("mode = gue\nsweep.param = theta\nsweep.values = 0, 0\n").unwrap_err().to_string();
        assert!(e.contains("strictly increasing"), "{e}");
    }

    #[test]
    fn diagnostics_are_aggregated() {
        let d = Scenario::parse("mode = flying\nnetwork.h_bs = tall\nfoo = 1\nsweep.param = theta\n").unwrap_err();
        let s = d.to_string();
        assert!(s.contains("line 1") && s.contains("line 2") && s.contains("line 3"), "{s}");
        assert!(s.contains("sweep.values"), "{s}");
    }

    #[test]
    fn sweep_points_are_checked() {
        let e = Scenario::parse("mode = static-nearest\nsweep.param = h_d\nsweep.values = 20, 60, 120\n")
            .unwrap_err()
            .to_string();
        assert!(e.contains("at h_d = 20") && !e.contains("at h_d = 60"), "{e}");
    }

    #[test]
    fn inapplicable_sweep_rejected() {
        let e = Scenario::parse("mode = static-nearest\nsweep.param = r_h\nsweep.values = 100\n").unwrap_err().to_string();
        assert!(e.contains("no effect"), "{e}");
    }

    #[test]
    fn spread_sweep_keeps_the_midpoint() {
        let s = Scenario::parse(
            "mode = mobile-nearest\nmetric = handover-rate\nmobility.h1 = 100\nmobility.h2 = 200\nsweep.param = hbar\nsweep.values = 0, 50\n",
        )
        .unwrap();
        let m = s.at(50.0).mobility.unwrap();
        assert_eq!((m.h1, m.h2), (125.0, 175.0));
    }

    #[test]
    fn canonical_form_ignores_layout() {
        let a = Scenario::parse(MIN).unwrap();
        let b = Scenario::parse("# same\nsweep.values = -10, -5, 0, 5, 10\n\nsweep.param = theta\nmode = static-comp\n").unwrap();
        assert_eq!(a.canonical(), b.canonical());
    }
}
