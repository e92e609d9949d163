//! Acceptance run: each criterion at its stated sample sizes, tolerances and
//! runtime limit, with the default configuration. Prints one line per criterion.

use std::process::ExitCode;

use tourhom_cli::{run_convergence, run_suite, ExperimentConfig, SuiteName, SuiteReport};

struct Criterion {
    id: u32,
    title: &'static str,
    limit_secs: f64,
}

fn line(c: &Criterion, passed: bool, secs: f64, note: &str) -> bool {
    let within = secs < c.limit_secs;
    let ok = passed && within;
    println!(
        "criterion {} {}: {} ({:.1} s, limit {:.0} s){}",
        c.id,
        c.title,
        if ok { "PASS" } else { "FAIL" },
        secs,
        c.limit_secs,
        if note.is_empty() { String::new() } else { format!("; {note}") }
    );
    ok
}

fn failures(rep: &SuiteReport, names: &[&str]) -> String {
    rep.checks
        .iter()
        .filter(|c| !c.passed && (names.is_empty() || names.contains(&c.name.as_str())))
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect::<Vec<_>>()
        .join("; ")
}

fn passed(rep: &SuiteReport, names: &[&str]) -> bool {
    let selected: Vec<_> =
        rep.checks.iter().filter(|c| names.is_empty() || names.contains(&c.name.as_str())).collect();
    !selected.is_empty() && selected.iter().all(|c| c.passed)
}

fn measured_secs(rep: &SuiteReport, key: &str) -> f64 {
    rep.measured.get(key).and_then(|v| v.as_f64()).unwrap_or(f64::INFINITY)
}

fn suite(name: SuiteName, cfg: &ExperimentConfig) -> Option<SuiteReport> {
    match run_suite(name, cfg) {
        Ok(rep) => Some(rep),
        Err(e) => {
            println!("suite {} errored: {e:#}", name.as_str());
            None
        }
    }
}

fn main() -> ExitCode {
    let cfg = ExperimentConfig::default();
    let mut all = true;

    let core = suite(SuiteName::Core, &cfg);
    let c1 = Criterion { id: 1, title: "hom-count oracle equivalence", limit_secs: 60.0 };
    let c2 = Criterion { id: 2, title: "multiplicativity", limit_secs: 10.0 };
    match &core {
        Some(rep) => {
            let oracle = ["oracle equivalence", "conditional oracle equivalence", "conditional counts sum to hom"];
            all &= line(&c1, passed(rep, &oracle), measured_secs(rep, "oracle_seconds"), &failures(rep, &oracle));
            let mult = ["multiplicativity"];
            all &= line(&c2, passed(rep, &mult), measured_secs(rep, "multiplicativity_seconds"), &failures(rep, &mult));
        }
        None => {
            all &= line(&c1, false, 0.0, "suite error");
            all &= line(&c2, false, 0.0, "suite error");
        }
    }

    let rest = [
        (SuiteName::Spectral, Criterion { id: 3, title: "trace and necklace identity", limit_secs: 300.0 }),
        (SuiteName::Claims, Criterion { id: 4, title: "claim suite at m = 36", limit_secs: 1800.0 }),
        (SuiteName::Graphon, Criterion { id: 5, title: "graphon structure", limit_secs: 3600.0 }),
        (SuiteName::Region, Criterion { id: 6, title: "region containment", limit_secs: 600.0 }),
        (SuiteName::Reduction, Criterion { id: 7, title: "reduction identity", limit_secs: 600.0 }),
    ];
    for (name, c) in &rest {
        all &= match suite(*name, &cfg) {
            Some(rep) => line(c, passed(&rep, &[]), rep.seconds, &failures(&rep, &[])),
            None => line(c, false, 0.0, "suite error"),
        };
    }

    let c8 = Criterion { id: 8, title: "convergence trend", limit_secs: 900.0 };
    all &= match run_convergence(&cfg) {
        Ok(rep) => line(&c8, passed(&rep, &[]), rep.seconds, &failures(&rep, &[])),
        Err(e) => line(&c8, false, 0.0, &format!("error: {e:#}")),
    };

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
