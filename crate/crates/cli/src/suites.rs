//! Verification suites; each returns a report of named checks with witnesses.

use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use tourhom_core::digraph::{random_tournament_with, transitive_tournament};
use tourhom_core::format::{parse_simple_graph, parse_tournament, write_digraph};
use tourhom_core::gadget::{
    build_f_dagger, build_f_i, build_necklace, default_a, default_t3, make_k_sequence, sample_f0,
    BaseTournamentF0, GadgetFamily, Symmetrized,
};
use tourhom_core::hom::{
    count_hom, count_hom_bruteforce, count_hom_par, count_hom_pinned, count_hom_pinned_bruteforce,
    count_hom_rooted, density, enumerate_homs,
};
use tourhom_core::host::{build_t_star, HostAtlas, SimpleGraph};
use tourhom_core::reduction::{
    build_f_of_p, build_pbar, minimal_clearing_exponents, necklace_densities, reduction_rhs,
    reduction_rhs_via_xy, ClearingMode, IntPolynomial, NecklaceSet,
};
use tourhom_core::region::{
    chord, elementary_from_power, equal_mass_minimum, in_region, in_region_exact,
    power_from_elementary, verify_points_in_region, NonnegVector,
};
use tourhom_core::spectral::{
    density_matrix, graphon_pattern_check, graphon_pattern_check_pairs, necklace_density_direct, necklace_density_spectral,
    DensityMatrix,
};
use tourhom_core::{eval_quantum, make_tournament, Digraph, RootedDigraph, Tournament};

use crate::config::{ExperimentConfig, GraphSource, SuiteName};
use crate::regular::random_regular;
use crate::report::{Check, SuiteReport};

/// Runs one suite; budget and configuration problems are errors, failed assertions are not.
pub fn run_suite(name: SuiteName, cfg: &ExperimentConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let clock = Clock::new(cfg);
    let rep = match name {
        SuiteName::Core => core_suite(cfg, &clock),
        SuiteName::Claims => claims_suite(cfg, &clock),
        SuiteName::Spectral => spectral_suite(cfg, &clock),
        SuiteName::Region => region_suite(cfg, &clock),
        SuiteName::Reduction => reduction_suite(cfg, &clock),
        SuiteName::Graphon => graphon_suite(cfg, &clock),
    }?;
    Ok(rep.finish(start.elapsed()))
}

/// Wall-clock budget of one suite.
pub(crate) struct Clock {
    start: Instant,
    cap: Option<Duration>,
}

impl Clock {
    pub(crate) fn new(cfg: &ExperimentConfig) -> Self {
        Clock { start: Instant::now(), cap: cfg.budgets.wall_clock_secs.map(Duration::from_secs) }
    }

    pub(crate) fn tick(&self) -> Result<()> {
        if let Some(cap) = self.cap {
            if self.start.elapsed() > cap {
                bail!("wall-clock budget of {} s exceeded", cap.as_secs());
            }
        }
        Ok(())
    }
}

fn suite_rng(cfg: &ExperimentConfig, name: SuiteName) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ (name as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Each ordered pair becomes an arc independently with probability `p`.
pub fn random_digraph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut g = Digraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                g.add_arc(u, v).expect("in range");
            }
        }
    }
    g
}

pub fn cyclic_triangle() -> Tournament {
    make_tournament(3, [(0, 1), (1, 2), (2, 0)]).expect("valid tournament")
}

/// Symmetrised gadget over the cyclic triangle with `k` vertices on the `z -> v -> w` side.
pub fn toy_fdagger(k: usize) -> Symmetrized {
    build_f_dagger(&build_f_i(&cyclic_triangle(), k).expect("k <= 3"))
}

/// Necklaces of the toy gadgets: the cyclic triangle with `k = 2`, then the
/// transitive triangle with `k = 1`. Over the cyclic triangle `k = 1` and `k = 2`
/// are mirror images with equal densities, so the second gadget uses another base.
pub fn toy_necklaces(s: usize) -> Result<NecklaceSet> {
    if s > 2 {
        bail!("the toy family has only two gadgets");
    }
    let second = build_f_dagger(&build_f_i(&transitive_tournament(3), 1)?).rooted;
    Ok(NecklaceSet::new([toy_fdagger(2).rooted, second].into_iter().take(s).collect())?)
}

/// `F₀` from the configured file, or sampled from the configured parameters.
pub fn base_tournament(cfg: &ExperimentConfig) -> Result<BaseTournamentF0> {
    let g = &cfg.gadget;
    let a = g.a.unwrap_or_else(|| default_a(g.m));
    let t3 = g.t3.unwrap_or_else(|| default_t3(g.m));
    match &g.f0 {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let t = parse_tournament(&text)?;
            if t.n() != g.m {
                bail!("{} has {} vertices, config says m = {}", path.display(), t.n(), g.m);
            }
            Ok(BaseTournamentF0::from_tournament(t, a, t3)?)
        }
        None => Ok(sample_f0(g.m, a, t3, cfg.seed, g.max_tries)?),
    }
}

/// The configured family, truncated to its first `s` gadgets.
pub fn gadget_family(cfg: &ExperimentConfig, f0: &BaseTournamentF0, s: usize) -> Result<GadgetFamily> {
    let k = match &cfg.gadget.k {
        Some(k) => k[..s.min(k.len())].to_vec(),
        None => make_k_sequence(f0.n(), s)?,
    };
    Ok(GadgetFamily::new(f0.tournament.clone(), k)?)
}

pub fn host_graph(src: &GraphSource, seed: u64) -> Result<SimpleGraph> {
    Ok(match src {
        GraphSource::Edge => SimpleGraph::single_edge(),
        GraphSource::Cycle { n } => SimpleGraph::cycle(*n)?,
        GraphSource::File { path } => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            parse_simple_graph(&text)?
        }
        GraphSource::RandomRegular { n, d } => random_regular(*n, *d, seed, 1000)?,
    })
}

/// Builds `T_G★`, refusing hosts above the configured size.
pub fn bounded_host(
    cfg: &ExperimentConfig,
    g: &SimpleGraph,
    fam: &GadgetFamily,
    r: &[usize],
) -> Result<(Tournament, HostAtlas)> {
    let size = host_size(g, fam, r);
    if size > cfg.budgets.max_host_vertices {
        bail!("host would have {size} vertices, above the budget of {}", cfg.budgets.max_host_vertices);
    }
    Ok(build_t_star(g, fam, r)?)
}

/// Vertex count of `T_G★` without building it.
pub fn host_size(g: &SimpleGraph, fam: &GadgetFamily, r: &[usize]) -> usize {
    r.iter()
        .zip(&fam.fdagger)
        .map(|(&ri, fd)| ri * (g.n() + g.edges().len() * 2 * fd.q()))
        .sum()
}

fn digraph_witness(g: &Digraph) -> String {
    write_digraph(g, None)
}

fn core_suite(cfg: &ExperimentConfig, clock: &Clock) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("core");
    let mut rng = suite_rng(cfg, SuiteName::Core);
    let budget = cfg.budgets.brute_force_maps;

    let t0 = Instant::now();
    let mut bad = Vec::new();
    for i in 0..cfg.samples.oracle_pairs {
        let f = random_digraph(rng.gen_range(1..=4), 0.4, &mut rng);
        let tn = rng.gen_range(1..=6);
        let t = if i % 2 == 0 {
            random_tournament_with(tn, &mut rng).into_digraph()
        } else {
            random_digraph(tn, 0.5, &mut rng)
        };
        let fast = count_hom(&f, &t);
        let slow = count_hom_bruteforce(&f, &t, budget)?;
        let par = count_hom_par(&f, &t);
        if fast != slow || par != slow {
            bad.push(json!({"pattern": digraph_witness(&f), "host": digraph_witness(&t),
                "pruned": fast.to_string(), "parallel": par.to_string(), "brute_force": slow.to_string()}));
        }
        clock.tick()?;
    }
    rep.check(Check::new(
        "oracle equivalence",
        bad.is_empty(),
        format!("{} random pairs, {} mismatches", cfg.samples.oracle_pairs, bad.len()),
        bad.first().cloned(),
    ));

    let mut bad = Vec::new();
    let mut sum_bad = Vec::new();
    for _ in 0..cfg.samples.conditional_pairs {
        let mut f = random_digraph(rng.gen_range(2..=4), 0.4, &mut rng);
        if rng.gen_bool(0.5) {
            // Keep the roots apart, as in the gadgets.
            let mut g = Digraph::empty(f.n());
            for (u, v) in f.arcs().filter(|&(u, v)| !(u < 2 && v < 2)) {
                g.add_arc(u, v)?;
            }
            f = g;
        }
        let rooted = RootedDigraph::new(f.clone(), 0, 1)?;
        let t = random_tournament_with(rng.gen_range(1..=6), &mut rng).into_digraph();
        let mut total = BigUint::zero();
        for x in 0..t.n() {
            for y in 0..t.n() {
                let fast = count_hom_rooted(&rooted, &t, x, y)?;
                let slow = count_hom_pinned_bruteforce(&f, &t, &[(0, x), (1, y)], budget)?;
                if fast != slow && bad.len() < 8 {
                    bad.push(json!({"pattern": digraph_witness(&f), "host": digraph_witness(&t), "x": x, "y": y,
                        "pruned": fast.to_string(), "brute_force": slow.to_string()}));
                }
                total += fast.0;
            }
        }
        let whole = count_hom(&f, &t);
        if whole.0 != total {
            sum_bad.push(json!({"pattern": digraph_witness(&f), "host": digraph_witness(&t),
                "sum": total.to_string(), "hom": whole.to_string()}));
        }
        clock.tick()?;
    }
    rep.check(Check::new(
        "conditional oracle equivalence",
        bad.is_empty(),
        format!("{} rooted patterns over all root images, {} mismatches", cfg.samples.conditional_pairs, bad.len()),
        bad.first().cloned(),
    ));
    rep.check(Check::new(
        "conditional counts sum to hom",
        sum_bad.is_empty(),
        format!("{} patterns", cfg.samples.conditional_pairs),
        sum_bad.first().cloned(),
    ));
    rep.measure("oracle_seconds", t0.elapsed().as_secs_f64());

    let t0 = Instant::now();
    let mut bad = Vec::new();
    for _ in 0..cfg.samples.multiplicativity {
        let f1 = random_digraph(rng.gen_range(1..=4), 0.4, &mut rng);
        let f2 = random_digraph(rng.gen_range(1..=4), 0.4, &mut rng);
        let t = random_tournament_with(rng.gen_range(1..=7), &mut rng).into_digraph();
        let joint = density(&f1.disjoint_union(&f2), &t)?;
        let prod = density(&f1, &t)?.0 * density(&f2, &t)?.0;
        if joint.0 != prod {
            bad.push(json!({"f1": digraph_witness(&f1), "f2": digraph_witness(&f2), "host": digraph_witness(&t),
                "union": joint.to_string(), "product": prod.to_string()}));
        }
        clock.tick()?;
    }
    rep.check(Check::new(
        "multiplicativity",
        bad.is_empty(),
        format!("{} random cases, exact rationals", cfg.samples.multiplicativity),
        bad.first().cloned(),
    ));
    rep.measure("multiplicativity_seconds", t0.elapsed().as_secs_f64());
    Ok(rep)
}

/// Random tournament on `extra` fresh vertices plus a copy of `f` on randomly
/// placed vertices, plus `twins` vertices that copy the arcs of copied vertices.
pub fn planted_host<R: Rng>(f: &Digraph, extra: usize, twins: usize, rng: &mut R) -> Tournament {
    let base = f.n() + extra;
    let n = base + twins;
    let mut adj = vec![vec![false; n]; n];
    for u in 0..base {
        for v in u + 1..base {
            if rng.gen_bool(0.5) {
                adj[u][v] = true;
            } else {
                adj[v][u] = true;
            }
        }
    }
    let mut slots: Vec<usize> = (0..base).collect();
    slots.shuffle(rng);
    let place = &slots[..f.n()];
    for u in 0..f.n() {
        for v in u + 1..f.n() {
            let (a, b) = (place[u], place[v]);
            let forward = if f.has_arc(u, v) {
                true
            } else if f.has_arc(v, u) {
                false
            } else {
                rng.gen_bool(0.5)
            };
            adj[a][b] = forward;
            adj[b][a] = !forward;
        }
    }
    for t in base..n {
        let orig = place[rng.gen_range(0..f.n())];
        for v in 0..t {
            if v == orig {
                continue;
            }
            adj[t][v] = adj[orig][v];
            adj[v][t] = adj[v][orig];
        }
        let forward = rng.gen_bool(0.5);
        adj[t][orig] = forward;
        adj[orig][t] = !forward;
    }
    let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| adj[u][v]);
    make_tournament(n, arcs.collect::<Vec<_>>()).expect("complete orientation")
}

fn claims_suite(cfg: &ExperimentConfig, clock: &Clock) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("claims");
    let f0 = base_tournament(cfg)?;
    let fam = gadget_family(cfg, &f0, cfg.gadget.s)?;
    rep.measure("f0", &f0.report);
    rep.measure("k", &fam.k);
    let cap = cfg.budgets.enumerate_cap;
    let budget = cfg.budgets.node_budget;

    for (i, f) in fam.f.iter().enumerate() {
        let g = f.graph();
        let (z, w) = f.roots();
        let mut bad: Option<Vec<usize>> = None;
        let found = enumerate_homs(g, g, &[], cap, |map| {
            let mut seen = vec![false; map.len()];
            let bijective = map.iter().all(|&x| !std::mem::replace(&mut seen[x], true));
            if (!bijective || map[z] != z || map[w] != w) && bad.is_none() {
                bad = Some(map.to_vec());
            }
        })?;
        rep.check(Check::new(
            format!("endomorphisms of F{} are root-preserving bijections", i + 1),
            bad.is_none() && found > 0,
            format!("{found} homomorphisms F{0} -> F{0} enumerated exhaustively", i + 1),
            bad.map(|m| json!({"map": m})),
        ));
        rep.measure(&format!("endomorphisms_f{}", i + 1), found);
        clock.tick()?;
    }

    for i in 0..fam.s() {
        for j in 0..fam.s() {
            if i == j {
                continue;
            }
            let c = count_hom_pinned(fam.f[i].graph(), fam.f[j].graph(), &[], budget)?;
            rep.check(Check::new(
                format!("Hom(F{}, F{}) is empty", i + 1, j + 1),
                c.is_zero(),
                format!("exhaustive search found {c}"),
                Some(json!({"count": c.to_string()})),
            ));
            clock.tick()?;
        }
    }

    let mut rng = suite_rng(cfg, SuiteName::Claims);
    let mut sampled = 0usize;
    let mut enumerated = 0usize;
    let mut bad = None;
    for idx in 0..cfg.samples.injective_homs {
        let f = &fam.f[idx % fam.s()];
        let host = planted_host(f.graph(), 8, 4, &mut rng);
        let mut maps: Vec<Vec<usize>> = Vec::new();
        enumerate_homs(f.graph(), &host, &[], cap, |m| maps.push(m.to_vec()))?;
        if maps.is_empty() {
            bail!("planted host {idx} has no homomorphism from F{}", idx % fam.s() + 1);
        }
        enumerated += maps.len();
        let pick = &maps[rng.gen_range(0..maps.len())];
        sampled += 1;
        for m in std::iter::once(pick).chain(maps.iter()) {
            let mut seen = vec![false; host.n()];
            if m.iter().any(|&x| std::mem::replace(&mut seen[x], true)) && bad.is_none() {
                bad = Some(json!({"gadget": idx % fam.s() + 1, "host": write_digraph(&host, None), "map": m}));
            }
        }
        clock.tick()?;
    }
    rep.check(Check::new(
        "homomorphisms into tournaments are injective",
        bad.is_none(),
        format!("{sampled} sampled homomorphisms, {enumerated} enumerated in total"),
        bad,
    ));
    rep.measure("injective_sampled", sampled);
    rep.measure("injective_enumerated", enumerated);
    Ok(rep)
}

/// `|a − b| ≤ tol · scale` with `scale` the natural magnitude of the quantity.
fn close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale.abs().max(f64::MIN_POSITIVE)
}

fn spectral_suite(cfg: &ExperimentConfig, clock: &Clock) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("spectral");
    let mut rng = suite_rng(cfg, SuiteName::Spectral);
    let fd = toy_fdagger(2).rooted;
    let necklaces = [build_necklace(&fd, 3)?, build_necklace(&fd, 4)?];
    let tol = cfg.tolerances.spectral;
    let mut trace_bad = Vec::new();
    let mut spec_bad = Vec::new();
    let mut sym_bad = Vec::new();
    let mut bound_bad = Vec::new();
    let mut worst = 0.0f64;
    let mut nonzero = 0;
    for h in 0..cfg.samples.trace_hosts {
        // Tournaments this small give the zero matrix; digraphs with 2-cycles do not.
        let t = random_digraph(4 + h % 2, 0.9, &mut rng);
        let m = density_matrix(&fd, &t, cfg.budgets.node_budget)?;
        if !m.is_zero() {
            nonzero += 1;
        }
        let n = m.order();
        if (0..n).any(|x| (0..n).any(|y| m.count(x, y) != m.count(y, x))) {
            sym_bad.push(json!({"host": digraph_witness(&t)}));
        }
        for (ell, d) in [3usize, 4].into_iter().zip(&necklaces) {
            let direct = count_hom(d, &t).0;
            let trace = m.trace_power_counts(ell);
            let density = necklace_density_direct(&fd, &t, ell, cfg.budgets.node_budget)?.0;
            if direct != trace || density != m.cycle_density(ell) {
                trace_bad.push(json!({"host": digraph_witness(&t), "ell": ell,
                    "necklace": direct.to_string(), "trace": trace.to_string()}));
            }
        }
        let (ev, factor) = m.spectrum();
        let factor = factor.to_f64().unwrap_or(f64::NAN);
        for ell in 3..=12usize {
            let exact = m.cycle_density(ell).to_f64().unwrap_or(f64::NAN);
            let spectral = necklace_density_spectral(&m, ell);
            let magnitude = ev.iter().map(|l| l.abs().powi(ell as i32)).sum::<f64>() * factor.powi(ell as i32);
            if magnitude > 0.0 {
                worst = worst.max((spectral - exact).abs() / magnitude);
            }
            if !close(spectral, exact, magnitude, tol) {
                spec_bad.push(json!({"host": digraph_witness(&t), "ell": ell, "spectral": spectral, "exact": exact}));
            }
        }
        let [p4, p8, p12] = m.trace_powers_4_8_12();
        if p8 > &p4 * &p4 || p12 > &p4 * &p4 * &p4 {
            bound_bad.push(json!({"host": digraph_witness(&t)}));
        }
        clock.tick()?;
    }
    let hosts = cfg.samples.trace_hosts;
    rep.check(Check::new(
        "hosts give nonzero matrices",
        2 * nonzero >= hosts,
        format!("{nonzero} of {hosts} random digraphs"),
        None,
    ));
    rep.measure("nonzero_hosts", nonzero);
    rep.check(Check::new("matrix symmetry", sym_bad.is_empty(), format!("{hosts} hosts, exact counts"), sym_bad.first().cloned()));
    rep.check(Check::new(
        "necklace count equals trace",
        trace_bad.is_empty(),
        format!("hom(D_l, T) == trace(H^l) and t(D_l, T) == t(C_l, M) for l in {{3, 4}} on {hosts} hosts of order 4 and 5"),
        trace_bad.first().cloned(),
    ));
    rep.check(Check::new(
        "spectral power sums match traces",
        spec_bad.is_empty(),
        format!("l = 3..12, worst relative deviation {worst:.3e} against tolerance {tol:e}"),
        spec_bad.first().cloned(),
    ));
    rep.check(Check::new(
        "power-sum bounds",
        bound_bad.is_empty(),
        "p8 <= p4^2 and p12 <= p4^3 on exact traces",
        bound_bad.first().cloned(),
    ));
    rep.measure("worst_relative_deviation", worst);

    let a = 3u32;
    let m = DensityMatrix::from_counts(
        vec![vec![BigUint::zero(), BigUint::from(a)], vec![BigUint::from(a), BigUint::zero()]],
        BigRational::from_integer(1.into()),
    )?;
    // M / N has eigenvalues ±3/2, so t(C_4, M) = 2 * (3/2)^4.
    let s4 = necklace_density_spectral(&m, 4);
    let want = 2.0 * 1.5f64.powi(4);
    rep.check(Check::new(
        "two-by-two closed form",
        close(s4, want, want, tol) && m.cycle_density(4).to_f64() == Some(want),
        format!("sum of l^4 over the spectrum of [[0,3],[3,0]] / 2 = {s4}"),
        None,
    ));
    Ok(rep)
}

fn region_suite(cfg: &ExperimentConfig, clock: &Clock) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("region");
    let mut rng = suite_rng(cfg, SuiteName::Region);
    let fd = toy_fdagger(2).rooted;
    let mut hosts: Vec<Digraph> = (0..cfg.samples.region_hosts)
        .map(|_| random_tournament_with(rng.gen_range(3..=7), &mut rng).into_digraph())
        .collect();
    if let Some(dir) = &cfg.host.hosts {
        hosts.extend(load_tournaments(dir)?.into_iter().map(Tournament::into_digraph));
    }
    let r = verify_points_in_region(&fd, &hosts, cfg.tolerances.region)?;
    clock.tick()?;
    rep.check(Check::new(
        "points lie in R",
        r.holds() && r.checked > 0,
        format!("{} hosts checked, {} skipped with t(D_4) = 0", r.checked, r.skipped_degenerate),
        r.failures.first().map(|&(i, x, y)| json!({"host": digraph_witness(&hosts[i]), "x": x, "y": y}))
            .or_else(|| r.exact_failures.first().map(|&i| json!({"host": digraph_witness(&hosts[i])}))),
    ));
    rep.measure("region_checked", r.checked);
    rep.measure("region_skipped", r.skipped_degenerate);

    let larger: Vec<Digraph> = (0..cfg.samples.region_larger_hosts)
        .map(|_| random_tournament_with(rng.gen_range(8..=10), &mut rng).into_digraph())
        .collect();
    let r = verify_points_in_region(&fd, &larger, cfg.tolerances.region)?;
    clock.tick()?;
    rep.check(Check::new(
        "points lie in R on larger tournaments",
        r.holds() && 2 * r.checked >= larger.len(),
        format!("{} hosts of order 8 to 10 checked, {} skipped", r.checked, r.skipped_degenerate),
        r.failures.first().map(|&(i, x, y)| json!({"host": digraph_witness(&larger[i]), "x": x, "y": y}))
            .or_else(|| r.exact_failures.first().map(|&i| json!({"host": digraph_witness(&larger[i])}))),
    ));
    rep.measure("larger_checked", r.checked);

    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let mut bad = None;
    for r in 1..=1000i64 {
        let x = q(1, r);
        let (s, c) = chord(&r.into());
        let next = q(1, r + 1);
        let mid = (&x + &next) / q(2, 1);
        let on = &s * &mid + &c;
        let below = &on - q(1, 1_000_000_000_000);
        let ok = in_region_exact(&x, &(&x * &x))
            && &s * &x + &c == &x * &x
            && &s * &next + &c == &next * &next
            && in_region_exact(&mid, &on)
            && !in_region_exact(&mid, &below)
            && in_region(1.0 / r as f64, 1.0 / (r * r) as f64, cfg.tolerances.region)?;
        if !ok && bad.is_none() {
            bad = Some(json!({"r": r}));
        }
    }
    rep.check(Check::new("hull vertices and chords", bad.is_none(), "r = 1..1000, exact rationals", bad));

    let tol = cfg.tolerances.newton;
    let mut bad = None;
    for _ in 0..1000 {
        let len = rng.gen_range(1..=10);
        let v = NonnegVector::new((0..len).map(|_| rng.gen::<f64>()).collect())?;
        let (p1, p2, p3) = (v.power_sum(1), v.power_sum(2), v.power_sum(3));
        let direct = v.elementary();
        let newton = elementary_from_power(p1, p2, p3);
        let back = power_from_elementary(direct.0, direct.1, direct.2);
        let scale = p1.powi(3).max(1.0);
        let ok = close(direct.0, newton.0, scale, tol)
            && close(direct.1, newton.1, scale, tol)
            && close(direct.2, newton.2, scale, tol)
            && close(back.0, p1, scale, tol)
            && close(back.1, p2, scale, tol)
            && close(back.2, p3, scale, tol);
        if !ok && bad.is_none() {
            bad = Some(json!({"vector": v.entries()}));
        }
    }
    rep.check(Check::new("Newton round trips", bad.is_none(), format!("1000 random vectors, tolerance {tol:e}"), bad));

    let mut bad = None;
    for _ in 0..50 {
        let (c2, c3) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let len = 8;
        let (best, _) = equal_mass_minimum(c2, c3, 1.0, len);
        let mut sampled = f64::INFINITY;
        for _ in 0..2000 {
            let raw: Vec<f64> = (0..len).map(|_| rng.gen::<f64>().powi(3)).collect();
            let sum: f64 = raw.iter().sum();
            let v = NonnegVector::new(raw.iter().map(|x| x / sum).collect())?;
            let (_, e2, e3) = v.elementary();
            sampled = sampled.min(c2 * e2 + c3 * e3);
        }
        if sampled < best - 1e-12 && bad.is_none() {
            bad = Some(json!({"c2": c2, "c3": c3, "sampled": sampled, "equal_mass": best}));
        }
    }
    rep.check(Check::new(
        "equal-mass configurations are extremal",
        bad.is_none(),
        "50 random (c2, c3), 2000 sampled vectors each with e1 = 1",
        bad,
    ));
    Ok(rep)
}

/// Every `*.txt` file in `dir`, parsed as a tournament, in name order.
pub fn load_tournaments(dir: &std::path::Path) -> Result<Vec<Tournament>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p)?;
            parse_tournament(&text).with_context(|| format!("bad tournament {}", p.display()))
        })
        .collect()
}

/// Polynomials exercised by the reduction suite.
pub const REDUCTION_POLYS: [&str; 3] = ["x1", "x1 - x2", "x1^2 - 3"];

fn reduction_suite(cfg: &ExperimentConfig, clock: &Clock) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("reduction");
    let mut rng = suite_rng(cfg, SuiteName::Reduction);
    // Three quarters of the hosts are drawn among tournaments where every toy
    // gadget has t(D_4) > 0, so the identity is not just 0 = 0.
    let all = toy_necklaces(2)?;
    let wanted = cfg.samples.reduction_hosts * 3 / 4;
    let mut hosts: Vec<Digraph> = Vec::new();
    let mut draws = 0;
    while hosts.len() < wanted {
        draws += 1;
        if draws > 100_000 {
            bail!("could not find {wanted} nondegenerate hosts");
        }
        let t = random_tournament_with(rng.gen_range(6..=8), &mut rng).into_digraph();
        if necklace_densities(&all, &t)?.iter().all(|d| !d[0].is_zero()) {
            hosts.push(t);
        }
    }
    while hosts.len() < cfg.samples.reduction_hosts {
        hosts.push(random_tournament_with(rng.gen_range(3..=8), &mut rng).into_digraph());
    }
    hosts.extend((3..=5).map(|n| transitive_tournament(n).into_digraph()));
    rep.measure("host_draws", draws);
    for text in REDUCTION_POLYS {
        let p = IntPolynomial::parse(text, None)?;
        let necklaces = toy_necklaces(p.s())?;
        let pbar = build_pbar(&p);
        let (f, e) = build_f_of_p(&p, &necklaces, &ClearingMode::Minimal)?;
        let mut bad = None;
        let mut zero_bad = None;
        let mut degenerate = 0;
        for t in &hosts {
            let lhs = eval_quantum(&f, t)?.0;
            let dens = necklace_densities(&necklaces, t)?;
            let rhs = reduction_rhs(&pbar, &e, &dens)?;
            let via_xy = reduction_rhs_via_xy(&pbar, &e, &dens)?;
            let is_degenerate = dens.iter().any(|d| d[0].is_zero());
            if is_degenerate {
                degenerate += 1;
                if !lhs.is_zero() && zero_bad.is_none() {
                    zero_bad = Some(json!({"host": digraph_witness(t), "value": lhs.to_string()}));
                }
            }
            let agrees = lhs == rhs && via_xy.as_ref().map_or(true, |v| *v == lhs);
            if !agrees && bad.is_none() {
                bad = Some(json!({"host": digraph_witness(t), "quantum": lhs.to_string(), "pbar": rhs.to_string()}));
            }
            clock.tick()?;
        }
        rep.check(Check::new(
            format!("t(f(p), T) = pbar(x, y) * prod p4^E for p = {text}"),
            bad.is_none() && e == minimal_clearing_exponents(&pbar) && hosts.len() > degenerate,
            format!("{} hosts ({} with p4 > 0), E = {e:?}, {} terms", hosts.len(), hosts.len() - degenerate, f.len()),
            bad,
        ));
        rep.check(Check::new(
            format!("t(f(p), T) = 0 when p4 = 0 for p = {text}"),
            zero_bad.is_none() && degenerate > 0,
            format!("{degenerate} hosts with p4 = 0"),
            zero_bad,
        ));
    }
    Ok(rep)
}

fn graphon_suite(cfg: &ExperimentConfig, clock: &Clock) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("graphon");
    let f0 = base_tournament(cfg)?;
    let fam = gadget_family(cfg, &f0, 1)?;
    rep.measure("k", &fam.k);
    let fd = &fam.fdagger[0].rooted;
    let budget = cfg.budgets.node_budget;
    let g = host_graph(&cfg.host.graph, cfg.seed)?;

    for &r in &cfg.host.r {
        let (t, atlas) = bounded_host(cfg, &g, &fam, &[r])?;
        let m = density_matrix(fd, &t, budget)?;
        let res = graphon_pattern_check(&m, &atlas, 1);
        let expected = r * g.edges().len();
        rep.check(Check::new(
            format!("full matrix pattern, r = {r}"),
            res.holds() && res.support.len() == expected,
            format!(
                "{} vertices, {} pairs, support {} (expected {expected}), a = {}",
                t.n(),
                res.pairs_checked,
                res.support.len(),
                res.a.as_deref().unwrap_or("none")
            ),
            res.violations.first().map(|v| json!(v)),
        ));
        rep.measure(&format!("r{r}"), &res);
        clock.tick()?;
    }

    let cycle = SimpleGraph::cycle(cfg.host.cycle_n)?;
    let (t, atlas) = bounded_host(cfg, &cycle, &fam, &[1])?;
    let m = density_matrix(fd, &t, budget)?;
    let res = graphon_pattern_check(&m, &atlas, 1);
    rep.check(Check::new(
        format!("cycle C{} full matrix, r = 1", cfg.host.cycle_n),
        res.holds() && res.support.len() == cycle.edges().len(),
        format!("{} vertices, {} pairs, a = {}", t.n(), res.pairs_checked, res.a.as_deref().unwrap_or("none")),
        res.violations.first().map(|v| json!(v)),
    ));
    rep.measure("cycle_r1", &res);
    clock.tick()?;

    let r = cfg.host.cycle_r;
    let (t, atlas) = bounded_host(cfg, &cycle, &fam, &[r])?;
    let roles = atlas.roles()?;
    let base: Vec<usize> = (0..t.n())
        .filter(|&v| matches!(roles[v], tourhom_core::host::VertexRole::Base { .. }))
        .collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, &x) in base.iter().enumerate() {
        for &y in &base[i..] {
            pairs.push((x, y));
        }
    }
    let base_pairs = pairs.len();
    let mut rng = suite_rng(cfg, SuiteName::Graphon);
    for _ in 0..cfg.samples.cycle_pairs {
        pairs.push((rng.gen_range(0..t.n()), rng.gen_range(0..t.n())));
    }
    let res = graphon_pattern_check_pairs(fd, &t, &atlas, 1, &pairs, budget)?;
    rep.check(Check::new(
        format!("cycle C{} sampled pairs, r = {r}", cfg.host.cycle_n),
        res.holds(),
        format!(
            "{} vertices, {base_pairs} base pairs and {} random pairs, a = {}",
            t.n(),
            cfg.samples.cycle_pairs,
            res.a.as_deref().unwrap_or("none")
        ),
        res.violations.first().map(|v| json!(v)),
    ));
    rep.measure(&format!("cycle_r{r}_sampled"), &res);
    Ok(rep)
}
