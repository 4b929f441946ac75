//! Recipes for the named configurations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::builder::{PointSpec, RecipeFile, RecipeStep, SEED_CLASS, SEED_VERTEX};
use crate::error::{Error, Result};
use crate::kstab::FlagPointSpec;
use crate::lattice::SurfaceModel;
use crate::rational::qi;

/// Small step-list builder.
#[derive(Clone, Debug, Default)]
pub struct Recipe {
    steps: Vec<RecipeStep>,
}

impl Recipe {
    pub fn wps(n: u64) -> Self {
        let seed = if n == 1 {
            RecipeStep::SeedP2
        } else {
            RecipeStep::SeedWps { n }
        };
        Recipe { steps: vec![seed] }
    }

    pub fn curve(mut self, label: &str, degree: i64, branches_at_vertex: u64) -> Self {
        let mut through = BTreeMap::new();
        if branches_at_vertex > 0 {
            through.insert(SEED_VERTEX.to_string(), branches_at_vertex);
        }
        self.steps.push(RecipeStep::DeclareCurve {
            label: label.into(),
            class: BTreeMap::from([(SEED_CLASS.to_string(), qi(degree))]),
            through,
        });
        self
    }

    pub fn blow_up(mut self, label: &str, incidences: &[(&str, u64)]) -> Self {
        let point = if incidences.is_empty() {
            PointSpec::general(label)
        } else {
            PointSpec::on(label, incidences)
        };
        self.steps.push(RecipeStep::BlowUp { point });
        self
    }

    pub fn rename(mut self, from: &str, to: &str) -> Self {
        self.steps.push(RecipeStep::Rename {
            from: from.into(),
            to: to.into(),
        });
        self
    }

    pub fn weighted_blow_up(mut self, exceptional: &str) -> Self {
        self.steps.push(RecipeStep::WeightedBlowUp11 {
            singularity: SEED_VERTEX.into(),
            exceptional: exceptional.into(),
        });
        self
    }

    pub fn contract(mut self, curves: &[&str]) -> Self {
        self.steps.push(RecipeStep::Contract {
            curves: curves.iter().map(|c| c.to_string()).collect(),
        });
        self
    }

    pub fn flag_point(mut self, point: FlagPointSpec) -> Self {
        self.steps.push(RecipeStep::DeclareFlagPoint { point });
        self
    }

    pub fn steps(&self) -> &[RecipeStep] {
        &self.steps
    }

    pub fn file(self, name: &str) -> RecipeFile {
        RecipeFile::new(name, self.steps)
    }
}

/// Named configurations with their parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfigName {
    S326,
    S427,
    /// `S_{n,2}^{n+2}` with the weighted blow-up flag.
    Sn2FlagE(u64),
    /// `S_{n,3}^{n+2}` with the weighted blow-up flag.
    Sn3FlagE(u64),
    /// `S_{n,m}^{n+2}` with the long exceptional curve as flag.
    SnmN2(u64, u64),
    S335SmoothTower,
    S436SmoothTower,
    /// `P^2` blown up on two lines, before and after contracting them.
    P2TwoLines(u64, u64),
    /// `S_{n,m}^k` from `P(1,1,n)` with `k` general points.
    Snm(u64, u64, u64),
}

impl ConfigName {
    /// Every configuration used by the classification and the reports.
    pub fn standard() -> Vec<ConfigName> {
        vec![
            ConfigName::S326,
            ConfigName::S427,
            ConfigName::Sn2FlagE(3),
            ConfigName::Sn2FlagE(4),
            ConfigName::Sn2FlagE(5),
            ConfigName::Sn3FlagE(3),
            ConfigName::Sn3FlagE(4),
            ConfigName::S335SmoothTower,
            ConfigName::S436SmoothTower,
        ]
    }
}

impl fmt::Display for ConfigName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigName::S326 => write!(f, "S326"),
            ConfigName::S427 => write!(f, "S427"),
            ConfigName::Sn2FlagE(n) => write!(f, "Sn2_flagE({n})"),
            ConfigName::Sn3FlagE(n) => write!(f, "Sn3_flagE({n})"),
            ConfigName::SnmN2(n, m) => write!(f, "Snm_n2({n},{m})"),
            ConfigName::S335SmoothTower => write!(f, "S335_smoothtower"),
            ConfigName::S436SmoothTower => write!(f, "S436_smoothtower"),
            ConfigName::P2TwoLines(n, m) => write!(f, "P2_two_lines({n},{m})"),
            ConfigName::Snm(n, m, k) => write!(f, "Snm({n},{m},{k})"),
        }
    }
}

fn parse_args(text: &str, prefix: &str) -> Option<Vec<u64>> {
    let inner = text
        .strip_prefix(prefix)?
        .strip_prefix('(')?
        .strip_suffix(')')?;
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

impl FromStr for ConfigName {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let unknown = || Error::UnknownConfig(text.to_string());
        let fixed = match t {
            "S326" => Some(ConfigName::S326),
            "S427" => Some(ConfigName::S427),
            "S325" => Some(ConfigName::Sn2FlagE(3)),
            "S426" => Some(ConfigName::Sn2FlagE(4)),
            "S527" => Some(ConfigName::Sn2FlagE(5)),
            "S335" => Some(ConfigName::Sn3FlagE(3)),
            "S436" => Some(ConfigName::Sn3FlagE(4)),
            "S335_smoothtower" => Some(ConfigName::S335SmoothTower),
            "S436_smoothtower" => Some(ConfigName::S436SmoothTower),
            _ => None,
        };
        if let Some(c) = fixed {
            return Ok(c);
        }
        let with = |prefix: &str, arity: usize| parse_args(t, prefix).filter(|a| a.len() == arity);
        let name = if let Some(a) = with("Sn2_flagE", 1) {
            ConfigName::Sn2FlagE(a[0])
        } else if let Some(a) = with("Sn3_flagE", 1) {
            ConfigName::Sn3FlagE(a[0])
        } else if let Some(a) = with("Snm_n2", 2) {
            ConfigName::SnmN2(a[0], a[1])
        } else if let Some(a) = with("P2_two_lines", 2) {
            ConfigName::P2TwoLines(a[0], a[1])
        } else if let Some(a) = with("Snm", 3) {
            ConfigName::Snm(a[0], a[1], a[2])
        } else {
            return Err(unknown());
        };
        let ok = match name {
            ConfigName::Sn2FlagE(n) | ConfigName::Sn3FlagE(n) => n >= 2,
            ConfigName::SnmN2(n, m) | ConfigName::P2TwoLines(n, m) | ConfigName::Snm(n, m, _) => {
                n >= 2 && m >= 2
            }
            _ => true,
        };
        if ok {
            Ok(name)
        } else {
            Err(unknown())
        }
    }
}

/// A built configuration: one or more models and the flags evaluated on them.
#[derive(Clone, Debug)]
pub struct Config {
    pub name: ConfigName,
    /// Labelled models, in construction order.
    pub models: Vec<(String, SurfaceModel)>,
    /// `(model index, flag curve)`.
    pub flags: Vec<(usize, String)>,
}

impl Config {
    pub fn model(&self, label: &str) -> Option<&SurfaceModel> {
        self.models.iter().find(|(l, _)| l == label).map(|(_, m)| m)
    }

    /// Model carrying the flag and the points declared on it.
    pub fn flag(&self, flag: &str) -> Result<(&SurfaceModel, Vec<FlagPointSpec>)> {
        let (idx, _) = self
            .flags
            .iter()
            .find(|(_, f)| f == flag)
            .ok_or_else(|| Error::UnknownFlag(flag.to_string()))?;
        let model = &self.models[*idx].1;
        let points = model
            .flag_points()
            .iter()
            .filter(|p| p.flag_curve == flag)
            .cloned()
            .collect();
        Ok((model, points))
    }

    pub fn flag_labels(&self) -> Vec<&str> {
        self.flags.iter().map(|(_, f)| f.as_str()).collect()
    }
}

/// Recipe files for a configuration, one per model.
pub fn recipes(name: ConfigName) -> Vec<(String, RecipeFile, Option<String>)> {
    match name {
        ConfigName::S326 => single_sing_pair(name, 3),
        ConfigName::S427 => single_sing_pair(name, 4),
        ConfigName::Sn2FlagE(n) => vec![(
            "E".into(),
            flag_e(n, 2).file(&name.to_string()),
            Some("E".into()),
        )],
        ConfigName::Sn3FlagE(n) => vec![(
            "E".into(),
            flag_e(n, 3).file(&name.to_string()),
            Some("E".into()),
        )],
        ConfigName::SnmN2(n, m) => vec![(
            "L".into(),
            long_flag(n, m).file(&name.to_string()),
            Some("L".into()),
        )],
        ConfigName::S335SmoothTower => smooth_tower(name, 3),
        ConfigName::S436SmoothTower => smooth_tower(name, 4),
        ConfigName::P2TwoLines(n, m) => {
            let base = two_lines(n, m);
            vec![
                ("S1".into(), base.clone().file(&format!("{name}/S1")), None),
                (
                    "S2".into(),
                    base.contract(&["Ln", "Lm"]).file(&format!("{name}/S2")),
                    None,
                ),
            ]
        }
        ConfigName::Snm(n, m, k) => vec![(
            "S".into(),
            general_snm(n, m, k).file(&name.to_string()),
            None,
        )],
    }
}

pub fn build_config(name: ConfigName) -> Result<Config> {
    let mut models = Vec::new();
    let mut flags = Vec::new();
    for (i, (label, file, flag)) in recipes(name).into_iter().enumerate() {
        models.push((label, file.build()?));
        if let Some(f) = flag {
            flags.push((i, f));
        }
    }
    Ok(Config {
        name,
        models,
        flags,
    })
}

pub fn build_config_named(text: &str) -> Result<Config> {
    build_config(text.parse()?)
}

/// `S_{n,2}^{n+3}`: the curve `C` of degree `n+1` through the `n+3` points
/// and the line `L` through the vertex, with flags `L1` and `E`.
fn single_sing_pair(name: ConfigName, n: u64) -> Vec<(String, RecipeFile, Option<String>)> {
    let n_i = n as i64;
    let mut base = Recipe::wps(n)
        .curve("L", 1, 1)
        .curve("C", n_i + 1, 1)
        .blow_up("e1", &[("L", 1)]);
    for i in 2..=n + 4 {
        base = base.blow_up(&format!("e{i}"), &[("C", 1)]);
    }
    base = base.blow_up("ep", &[("L", 1)]);

    let l1 = base
        .clone()
        .rename("L", "L1")
        .rename("C", "C1")
        .contract(&["L1"])
        .flag_point(FlagPointSpec::generic("L1"))
        .flag_point(FlagPointSpec::exact("L1∩C1", "L1", &[("C1", 1)]));
    let e = base
        .weighted_blow_up("E")
        .rename("L", "L2")
        .rename("C", "C2")
        .contract(&["L2", "E"])
        .flag_point(FlagPointSpec::generic("E"))
        .flag_point(FlagPointSpec::exact("E∩C2", "E", &[("C2", 1)]))
        .flag_point(FlagPointSpec::exact("E∩L2", "E", &[("L2", 1)]));
    vec![
        (
            "L1".into(),
            l1.file(&format!("{name}/L1")),
            Some("L1".into()),
        ),
        ("E".into(), e.file(&format!("{name}/E")), Some("E".into())),
    ]
}

/// `S_{n,m}^{n+2}`, `m` in {2, 3}, with the auxiliary curve `C` of degree
/// `(m+1)n + m + 2` having multiplicity `m+1` at the general points.
fn flag_e(n: u64, m: u64) -> Recipe {
    let n_i = n as i64;
    let m_i = m as i64;
    let branches = n + m + 2;
    let mut r = Recipe::wps(n)
        .curve("L", 1, 1)
        .curve("C", (m_i + 1) * n_i + m_i + 2, branches);
    for j in 1..=m {
        r = r.blow_up(&format!("p{j}"), &[("L", 1), ("C", 1)]);
    }
    for j in 1..=n + 2 {
        r = r.blow_up(&format!("q{j}"), &[("C", m + 1)]);
    }
    r.weighted_blow_up("E")
        .contract(&["L", "E"])
        .flag_point(FlagPointSpec::generic("E"))
        .flag_point(FlagPointSpec::exact("E∩L", "E", &[("L", 1)]))
        .flag_point(FlagPointSpec::bounded(
            "E∩C",
            "E",
            &[("C", branches as i64)],
        ))
}

/// `S_{n,m}^{n+2}` with the curves `C_i` of degree `n` through all general
/// points but `q_i`; the flag is the contracted line `L`.
fn long_flag(n: u64, m: u64) -> Recipe {
    let n_i = n as i64;
    let mut r = Recipe::wps(n).curve("L", 1, 1);
    for i in 1..=n + 2 {
        r = r.curve(&format!("C{i}"), n_i, 0);
    }
    for j in 1..=n + 2 {
        let on: Vec<String> = (1..=n + 2)
            .filter(|&i| i != j)
            .map(|i| format!("C{i}"))
            .collect();
        let inc: Vec<(&str, u64)> = on.iter().map(|c| (c.as_str(), 1)).collect();
        r = r.blow_up(&format!("q{j}"), &inc);
    }
    for j in 1..=m {
        r = r.blow_up(&format!("p{j}"), &[("L", 1)]);
    }
    r.contract(&["L"])
        .flag_point(FlagPointSpec::generic("L"))
        .flag_point(FlagPointSpec::exact("L∩C1", "L", &[("C1", 1)]))
        .flag_point(FlagPointSpec::exact("L∩p1", "L", &[("p1", 1)]))
}

/// `S_{n,3}^{n+2}` from `n+3` general points, one of them on `L`, and two
/// more points on `L`: the blow-up, its weighted blow-up at the vertex, and
/// the contraction of `L`. No flags; smooth points are handled by assumption.
fn smooth_tower(name: ConfigName, n: u64) -> Vec<(String, RecipeFile, Option<String>)> {
    let mut r = Recipe::wps(n).curve("L", 1, 1).blow_up("e1", &[("L", 1)]);
    for i in 2..=n + 3 {
        r = r.blow_up(&format!("e{i}"), &[]);
    }
    let r = r.blow_up("f1", &[("L", 1)]).blow_up("f2", &[("L", 1)]);
    vec![
        ("S1".into(), r.clone().file(&format!("{name}/S1")), None),
        (
            "S2".into(),
            r.clone().weighted_blow_up("E").file(&format!("{name}/S2")),
            None,
        ),
        (
            "S".into(),
            r.contract(&["L"]).file(&format!("{name}/S")),
            None,
        ),
    ]
}

/// `P^2` blown up at `n+1` points of `Ln` and `m+1` points of `Lm`.
fn two_lines(n: u64, m: u64) -> Recipe {
    let mut r = Recipe::wps(1).curve("Ln", 1, 0).curve("Lm", 1, 0);
    for i in 1..=n + 1 {
        r = r.blow_up(&format!("p{i}"), &[("Ln", 1)]);
    }
    for j in 1..=m + 1 {
        r = r.blow_up(&format!("q{j}"), &[("Lm", 1)]);
    }
    r
}

/// `S_{n,m}^k`: `m` points on `L`, `k` general points, `L` contracted.
fn general_snm(n: u64, m: u64, k: u64) -> Recipe {
    let mut r = Recipe::wps(n).curve("L", 1, 1);
    for j in 1..=m {
        r = r.blow_up(&format!("p{j}"), &[("L", 1)]);
    }
    for j in 1..=k {
        r = r.blow_up(&format!("g{j}"), &[]);
    }
    r.contract(&["L"])
}
