use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::json;
use tourhom_core::format::{parse_digraph, parse_simple_graph, parse_tournament, write_digraph, write_rooted};
use tourhom_core::gadget::{
    build_f_dagger, build_f_i, build_necklace, default_a, default_t3, make_k_sequence, sample_f0,
    BaseTournamentF0, GadgetFamily,
};
use tourhom_core::hom::{count_hom_pinned, enumerate_homs};
use tourhom_core::host::{build_t_star, HostAtlas};
use tourhom_core::quantum::QuantumDigraph;
use tourhom_core::reduction::{build_f_of_p, ClearingMode, IntPolynomial, NecklaceSet};
use tourhom_core::region::in_region;
use tourhom_core::spectral::{density_matrix, graphon_pattern_check, xy_point, DensityMatrix};
use tourhom_core::{eval_quantum, RootedDigraph};
use tourhom_cli::{run_convergence, run_suite, ExperimentConfig, RunReport, SuiteName};

#[derive(Parser)]
#[command(name = "tourhom", version, about = "Exact digraph homomorphism workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a base tournament satisfying the degree, biclique and cycle conditions.
    SampleF0 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        t3: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        max_tries: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a tournament against the three base conditions.
    CheckF0 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        t3: Option<usize>,
    },
    /// Build F_i and its symmetrisation from a base tournament.
    BuildGadget {
        #[arg(long)]
        f0: PathBuf,
        /// One value, or a comma-separated sequence with --out-dir.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long)]
        out_f: Option<PathBuf>,
        #[arg(long)]
        out_fdagger: Option<PathBuf>,
        /// Write f_<i>.txt and fdagger_<i>.txt for every k.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Glue copies of a rooted gadget into a necklace.
    Necklace {
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count (or enumerate) homomorphisms.
    Hom {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long, requires = "root_y")]
        root_x: Option<usize>,
        #[arg(long, requires = "root_x")]
        root_y: Option<usize>,
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 1000)]
        cap: usize,
        /// Search-node cap.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Assemble the host tournament from a graph and a base tournament.
    BuildHost {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        f0: PathBuf,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        atlas: PathBuf,
    },
    /// Conditional-count matrix of a symmetrised gadget on a host.
    DensityMatrix {
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        host: PathBuf,
        /// Check the support pattern against this atlas.
        #[arg(long)]
        atlas: Option<PathBuf>,
        /// Gadget index (1-based) for the pattern check.
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        out_density: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// `(x, y)` of a density matrix.
    Xy {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Membership of a point in the region R.
    RegionCheck {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Turn an integer polynomial into a quantum digraph.
    Reduce {
        /// Text (`3 x1^2 x2 - 7`) or JSON polynomial.
        #[arg(long)]
        poly: PathBuf,
        /// Directory with fdagger_1.txt, fdagger_2.txt, ...
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Minimal)]
        mode: Mode,
        /// Clearing exponents for --mode explicit.
        #[arg(long, value_delimiter = ',')]
        e: Option<Vec<u32>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact density of a quantum digraph in a tournament.
    EvalQuantum {
        #[arg(long)]
        quantum: PathBuf,
        #[arg(long)]
        host: PathBuf,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteName,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<usize>>,
        /// Graph for the graphon suite.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Directory of extra tournaments for the region suite.
        #[arg(long)]
        hosts: Option<PathBuf>,
    },
    /// Convergence of (x, y) on random regular graphs.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<usize>>,
    },
}

#[derive(clap::Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Report directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Minimal,
    ThreeDegree,
    Explicit,
}

/// Outcome of a command that completed without an error.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Outcome::Pass) => ExitCode::from(0),
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn read_rooted(path: &Path) -> Result<RootedDigraph> {
    parse_digraph(&read(path)?)?.into_rooted().with_context(|| format!("in {}", path.display()))
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = Some(out.clone());
    }
    Ok(cfg)
}

fn finish_report(cfg: ExperimentConfig, suites: Vec<tourhom_cli::SuiteReport>) -> Result<Outcome> {
    let report = RunReport::new(cfg, suites);
    if let Some(dir) = &report.config.output_dir {
        report.write(dir)?;
    }
    print!("{}", report.summary());
    Ok(if report.passed { Outcome::Pass } else { Outcome::Fail })
}

fn run(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::SampleF0 { n, a, t3, seed, max_tries, out } => {
            let f = sample_f0(n, a.unwrap_or_else(|| default_a(n)), t3.unwrap_or_else(|| default_t3(n)), seed, max_tries)?;
            write(&out, &write_digraph(&f.tournament, None))?;
            print_json(&f.report);
            Ok(Outcome::Pass)
        }
        Cmd::CheckF0 { input, a, t3 } => {
            let t = parse_tournament(&read(&input)?)?;
            let n = t.n();
            let (a, t3) = (a.unwrap_or_else(|| default_a(n)), t3.unwrap_or_else(|| default_t3(n)));
            match BaseTournamentF0::from_tournament(t, a, t3) {
                Ok(f) => {
                    print_json(&f.report);
                    Ok(Outcome::Pass)
                }
                Err(tourhom_core::Error::Invalid(msg)) => {
                    println!("violated: {msg}");
                    Ok(Outcome::Fail)
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::BuildGadget { f0, k, out_f, out_fdagger, out_dir } => {
            let t = parse_tournament(&read(&f0)?)?;
            if let Some(dir) = out_dir {
                let fam = GadgetFamily::new(t, k)?;
                std::fs::create_dir_all(&dir)?;
                for i in 0..fam.s() {
                    write(&dir.join(format!("f_{}.txt", i + 1)), &write_rooted(&fam.f[i]))?;
                    write(&dir.join(format!("fdagger_{}.txt", i + 1)), &write_rooted(&fam.fdagger[i].rooted))?;
                }
                println!("wrote {} gadgets to {}", fam.s(), dir.display());
            } else {
                if k.len() != 1 {
                    bail!("several k values need --out-dir");
                }
                let f = build_f_i(&t, k[0])?;
                let fd = build_f_dagger(&f);
                if out_f.is_none() && out_fdagger.is_none() {
                    bail!("nothing to write: pass --out-f, --out-fdagger or --out-dir");
                }
                if let Some(p) = out_f {
                    write(&p, &write_rooted(&f))?;
                }
                if let Some(p) = out_fdagger {
                    write(&p, &write_rooted(&fd.rooted))?;
                }
                println!("F has {} vertices, F-dagger has {}", f.graph().n(), fd.rooted.graph().n());
            }
            Ok(Outcome::Pass)
        }
        Cmd::Necklace { gadget, len, out } => {
            let d = build_necklace(&read_rooted(&gadget)?, len)?;
            write(&out, &write_digraph(&d, None))?;
            println!("necklace with {} vertices and {} arcs", d.n(), d.arc_count());
            Ok(Outcome::Pass)
        }
        Cmd::Hom { pattern, host, root_x, root_y, enumerate, cap, budget } => {
            let pf = parse_digraph(&read(&pattern)?)?;
            let t = parse_digraph(&read(&host)?)?.graph;
            let pins = match (root_x, root_y) {
                (Some(x), Some(y)) => {
                    let (z, w) = pf.roots.context("--root-x needs a `roots` line in the pattern")?;
                    vec![(z, x), (w, y)]
                }
                _ => Vec::new(),
            };
            if enumerate {
                let found = enumerate_homs(&pf.graph, &t, &pins, cap, |m| {
                    let line: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                    println!("{}", line.join(" "));
                })?;
                println!("count {found}");
            } else {
                println!("{}", count_hom_pinned(&pf.graph, &t, &pins, budget)?);
            }
            Ok(Outcome::Pass)
        }
        Cmd::BuildHost { graph, f0, m, s, k, r, out, atlas } => {
            let g = parse_simple_graph(&read(&graph)?)?;
            let t0 = parse_tournament(&read(&f0)?)?;
            if let Some(m) = m {
                if m != t0.n() {
                    bail!("--m {m} but {} has {} vertices", f0.display(), t0.n());
                }
            }
            let s = s.unwrap_or(r.len());
            let k = match k {
                Some(k) => k,
                None => make_k_sequence(t0.n(), s)?,
            };
            if k.len() != s || r.len() != s {
                bail!("need s = {s} values for both --k and --r");
            }
            let fam = GadgetFamily::new(t0, k)?;
            let (t, at) = build_t_star(&g, &fam, &r)?;
            write(&out, &write_digraph(&t, None))?;
            write(&atlas, &at.to_json_string())?;
            println!("host with {} vertices, k = {:?}", t.n(), fam.k);
            Ok(Outcome::Pass)
        }
        Cmd::DensityMatrix { gadget, host, atlas, i, out, out_density, budget } => {
            let f = read_rooted(&gadget)?;
            let t = parse_digraph(&read(&host)?)?.graph;
            let m = density_matrix(&f, &t, budget)?;
            write(&out, &m.to_csv_counts())?;
            if let Some(p) = out_density {
                write(&p, &m.to_csv_densities())?;
            }
            match atlas {
                Some(p) => {
                    let at = HostAtlas::from_json_str(&read(&p)?)?;
                    let rep = graphon_pattern_check(&m, &at, i);
                    print_json(&rep);
                    Ok(if rep.holds() { Outcome::Pass } else { Outcome::Fail })
                }
                None => Ok(Outcome::Pass),
            }
        }
        Cmd::Xy { matrix } => {
            let m = DensityMatrix::from_csv(&read(&matrix)?)?;
            let p = xy_point(&m)?;
            print_json(&p);
            Ok(Outcome::Pass)
        }
        Cmd::RegionCheck { x, y, tol } => {
            let inside = in_region(x, y, tol)?;
            print_json(&json!({"x": x, "y": y, "tol": tol, "in_region": inside}));
            Ok(if inside { Outcome::Pass } else { Outcome::Fail })
        }
        Cmd::Reduce { poly, family, mode, e, out } => {
            let text = read(&poly)?;
            let p = if text.trim_start().starts_with('{') {
                IntPolynomial::from_json_str(&text)?
            } else {
                IntPolynomial::parse(text.trim(), None)?
            };
            let gadgets = (1..=p.s())
                .map(|i| read_rooted(&family.join(format!("fdagger_{i}.txt"))))
                .collect::<Result<Vec<_>>>()?;
            let necklaces = NecklaceSet::new(gadgets)?;
            let mode = match (mode, e) {
                (Mode::Minimal, _) => ClearingMode::Minimal,
                (Mode::ThreeDegree, _) => ClearingMode::ThreeDegree,
                (Mode::Explicit, Some(e)) => ClearingMode::Explicit(e),
                (Mode::Explicit, None) => bail!("--mode explicit needs --e"),
            };
            let (q, e) = build_f_of_p(&p, &necklaces, &mode)?;
            write(&out, &q.to_json_string())?;
            print_json(&json!({"terms": q.len(), "clearing_exponents": e}));
            Ok(Outcome::Pass)
        }
        Cmd::EvalQuantum { quantum, host } => {
            let base = quantum.parent().map(Path::to_path_buf);
            let q = QuantumDigraph::from_json_str(&read(&quantum)?, base.as_deref())?;
            let t = parse_tournament(&read(&host)?)?;
            let v = eval_quantum(&q, &t)?;
            print_json(&json!({
                "value": format!("{}/{}", v.0.numer(), v.0.denom()),
                "approx": v.0.to_f64(),
            }));
            Ok(Outcome::Pass)
        }
        Cmd::Verify { suite, common, m, s, r, graph, hosts } => {
            let mut cfg = load_config(&common)?;
            if let Some(m) = m {
                cfg.gadget.m = m;
            }
            if let Some(s) = s {
                cfg.gadget.s = s;
            }
            if let Some(r) = r {
                cfg.host.r = r;
            }
            if let Some(path) = graph {
                cfg.host.graph = tourhom_cli::config::GraphSource::File { path };
            }
            if hosts.is_some() {
                cfg.host.hosts = hosts;
            }
            let rep = run_suite(suite, &cfg)?;
            finish_report(cfg, vec![rep])
        }
        Cmd::Converge { common, sizes, r } => {
            let mut cfg = load_config(&common)?;
            if let Some(sizes) = sizes {
                cfg.convergence.sizes = sizes;
            }
            if let Some(r) = r {
                cfg.convergence.r = r;
            }
            let rep = run_convergence(&cfg)?;
            finish_report(cfg, vec![rep])
        }
    }
}
