//! Experiment configuration, read from JSON; every field has a default.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Core,
    Claims,
    Spectral,
    Region,
    Reduction,
    Graphon,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::Core,
        SuiteName::Claims,
        SuiteName::Spectral,
        SuiteName::Region,
        SuiteName::Reduction,
        SuiteName::Graphon,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Core => "core",
            SuiteName::Claims => "claims",
            SuiteName::Spectral => "spectral",
            SuiteName::Region => "region",
            SuiteName::Reduction => "reduction",
            SuiteName::Graphon => "graphon",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub gadget: GadgetConfig,
    pub host: HostConfig,
    pub suites: Vec<SuiteName>,
    pub budgets: Budgets,
    pub tolerances: Tolerances,
    pub samples: Samples,
    pub convergence: ConvergenceConfig,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            gadget: GadgetConfig::default(),
            host: HostConfig::default(),
            suites: SuiteName::ALL.to_vec(),
            budgets: Budgets::default(),
            tolerances: Tolerances::default(),
            samples: Samples::default(),
            convergence: ConvergenceConfig::default(),
            output_dir: None,
        }
    }
}

/// Parameters of the base tournament `F₀` and the gadget family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GadgetConfig {
    /// Number of vertices of `F₀`.
    pub m: usize,
    /// Biclique side; `None` means `⌈√m⌉`.
    pub a: Option<usize>,
    /// Transitive-subtournament bound; `None` means the first-moment default.
    pub t3: Option<usize>,
    pub s: usize,
    /// Explicit `k` sequence; `None` means the largest admissible one.
    pub k: Option<Vec<usize>>,
    pub max_tries: usize,
    /// Load `F₀` from a file instead of sampling it.
    pub f0: Option<PathBuf>,
}

impl Default for GadgetConfig {
    fn default() -> Self {
        GadgetConfig { m: 36, a: None, t3: None, s: 2, k: None, max_tries: 200, f0: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSource {
    Edge,
    Cycle { n: usize },
    File { path: PathBuf },
    RandomRegular { n: usize, d: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HostConfig {
    pub graph: GraphSource,
    /// Block counts checked by the graphon suite.
    pub r: Vec<usize>,
    /// Block count of the cycle variant of the graphon suite.
    pub cycle_r: usize,
    pub cycle_n: usize,
    /// Directory of extra tournament files for the region suite.
    pub hosts: Option<PathBuf>,
}

impl Default for HostConfig {
    fn default() -> Self {
        HostConfig { graph: GraphSource::Edge, r: vec![1, 2], cycle_r: 2, cycle_n: 5, hosts: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Search-node cap per homomorphism count; `None` is unlimited.
    pub node_budget: Option<u64>,
    /// Wall-clock cap per suite, in seconds.
    pub wall_clock_secs: Option<u64>,
    /// Map cap of the brute-force oracle.
    pub brute_force_maps: u64,
    /// Cap on streamed homomorphisms in enumeration mode.
    pub enumerate_cap: usize,
    /// Largest host tournament any suite builds.
    pub max_host_vertices: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            node_budget: None,
            wall_clock_secs: None,
            brute_force_maps: tourhom_core::hom::BRUTE_FORCE_BUDGET,
            enumerate_cap: 1_000_000,
            max_host_vertices: 2000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance of spectral against exact trace values.
    pub spectral: f64,
    pub region: f64,
    pub newton: f64,
    /// Tournament pipeline against spectrum closed forms.
    pub cross_check: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { spectral: 1e-9, region: 1e-9, newton: 1e-12, cross_check: 1e-9 }
    }
}

/// Sample sizes of the randomized checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Samples {
    pub oracle_pairs: usize,
    pub conditional_pairs: usize,
    pub multiplicativity: usize,
    pub trace_hosts: usize,
    pub region_hosts: usize,
    pub region_larger_hosts: usize,
    pub reduction_hosts: usize,
    pub injective_homs: usize,
    pub cycle_pairs: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Samples {
            oracle_pairs: 50,
            conditional_pairs: 30,
            multiplicativity: 20,
            trace_hosts: 20,
            region_hosts: 200,
            region_larger_hosts: 100,
            reduction_hosts: 20,
            injective_homs: 1000,
            cycle_pairs: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub sizes: Vec<usize>,
    /// Fixed degree; `None` means `⌈n^{2/3}⌉`.
    pub degree: Option<usize>,
    pub r: Vec<usize>,
    /// Compare against the tournament pipeline at the smallest size.
    pub cross_check: bool,
    /// Also compare on `K₄` with the full gadget family.
    pub small_cross_check: bool,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig { sizes: vec![64, 128, 256], degree: None, r: vec![2, 3], cross_check: true, small_cross_check: true }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).context("invalid config JSON")?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.budgets;
        if b.node_budget == Some(0) || b.wall_clock_secs == Some(0) {
            bail!("budgets must be positive");
        }
        if b.brute_force_maps == 0 || b.enumerate_cap == 0 || b.max_host_vertices == 0 {
            bail!("budgets must be positive");
        }
        let t = &self.tolerances;
        for (name, v) in [("spectral", t.spectral), ("region", t.region), ("newton", t.newton), ("cross_check", t.cross_check)] {
            if !(v >= 0.0) {
                bail!("tolerance `{name}` must be a nonnegative number");
            }
        }
        if self.gadget.m < 3 || self.gadget.s == 0 || self.gadget.max_tries == 0 {
            bail!("gadget needs m >= 3, s >= 1 and max_tries >= 1");
        }
        if let Some(k) = &self.gadget.k {
            if k.len() != self.gadget.s {
                bail!("k has {} entries but s = {}", k.len(), self.gadget.s);
            }
        }
        if self.host.r.is_empty() || self.host.r.contains(&0) || self.host.cycle_r == 0 {
            bail!("block counts r must be positive");
        }
        if self.host.cycle_n < 3 {
            bail!("cycle_n must be at least 3");
        }
        if self.convergence.sizes.is_empty() || self.convergence.r.is_empty() || self.convergence.r.contains(&0) {
            bail!("convergence needs sizes and positive r values");
        }
        let mut paths: Vec<&Path> = Vec::new();
        if let Some(p) = &self.gadget.f0 {
            paths.push(p);
        }
        if let GraphSource::File { path } = &self.host.graph {
            paths.push(path);
        }
        if let Some(p) = &self.host.hosts {
            paths.push(p);
        }
        for p in paths {
            if !p.exists() {
                bail!("referenced path {} does not exist", p.display());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        let back = ExperimentConfig::from_json_str(&c.to_json_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_config_fills_defaults() {
        let c = ExperimentConfig::from_json_str(
            r#"{"seed": 9, "host": {"graph": {"kind": "random-regular", "n": 10, "d": 3}}}"#,
        )
        .unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.host.graph, GraphSource::RandomRegular { n: 10, d: 3 });
        assert_eq!(c.host.r, vec![1, 2]);
        assert_eq!(c.gadget.m, 36);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_json_str(r#"{"sede": 1}"#).is_err());
        let mut c = ExperimentConfig::default();
        c.budgets.node_budget = Some(0);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.gadget.k = Some(vec![20]);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.host.graph = GraphSource::File { path: "/nonexistent/graph.txt".into() };
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.tolerances.region = f64::NAN;
        assert!(c.validate().is_err());
    }
}
