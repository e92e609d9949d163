//! Convergence of `(x, y)` towards `(1/r, 1/r²)` on regular graphs with a growing spectral gap.

use std::time::Instant;

use anyhow::{bail, Result};
use serde_json::json;
use tourhom_core::gadget::GadgetFamily;
use tourhom_core::host::SimpleGraph;
use tourhom_core::spectral::{adjacency_spectrum, closed_form_xy, density_matrix, xy_point};

use crate::config::ExperimentConfig;
use crate::regular::{default_degree, random_regular};
use crate::report::{Check, SuiteReport, Table};
use crate::suites::{base_tournament, bounded_host, cyclic_triangle, gadget_family, host_size, Clock};

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TrendPoint {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub x: f64,
    pub y: f64,
    pub err_x: f64,
    pub err_y: f64,
    /// `|λ₂| / λ₁`.
    pub gap_ratio: f64,
    /// `3 (n ρ⁸ + n ρ¹²)` with `ρ = |λ₂| / λ₁`.
    pub bound: f64,
}

pub fn trend_point(g: &SimpleGraph, ev: &[f64], r: usize) -> Result<TrendPoint> {
    let Some((x, y)) = closed_form_xy(ev, r) else {
        bail!("graph has no edges");
    };
    let rf = r as f64;
    let rho = if ev.len() > 1 { ev[1].abs() / ev[0].abs() } else { 0.0 };
    let n = g.n() as f64;
    Ok(TrendPoint {
        n: g.n(),
        d: g.degree(0),
        r,
        x,
        y,
        err_x: (x - 1.0 / rf).abs(),
        err_y: (y - 1.0 / (rf * rf)).abs(),
        gap_ratio: rho,
        bound: 3.0 * (n * rho.powi(8) + n * rho.powi(12)),
    })
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|e| format!("{e:.4e}")).collect::<Vec<_>>().join(", ")
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Tournament-side `(x, y)` against the spectrum closed form, for one gadget family and block count.
fn cross_check(
    cfg: &ExperimentConfig,
    name: String,
    g: &SimpleGraph,
    ev: &[f64],
    fam: &GadgetFamily,
    r: usize,
) -> Result<Check> {
    let size = host_size(g, fam, &[r]);
    if size > cfg.budgets.max_host_vertices {
        return Ok(Check::fail(
            name,
            format!(
                "not run: the host would have {size} vertices, above the budget of {}",
                cfg.budgets.max_host_vertices
            ),
            Some(json!({"host_vertices": size})),
        ));
    }
    let (t, _) = bounded_host(cfg, g, fam, &[r])?;
    let m = density_matrix(&fam.fdagger[0].rooted, &t, cfg.budgets.node_budget)?;
    let p = xy_point(&m)?;
    let (cx, cy) = closed_form_xy(ev, r).expect("graph has edges");
    let tol = cfg.tolerances.cross_check;
    let ok = (p.x - cx).abs() <= tol && (p.y - cy).abs() <= tol;
    Ok(Check::new(
        name,
        ok,
        format!("{} host vertices: tournament ({:.12}, {:.12}), spectrum ({cx:.12}, {cy:.12})", t.n(), p.x, p.y),
        Some(json!({"tournament": [p.x, p.y], "spectrum": [cx, cy]})),
    ))
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let clock = Clock::new(cfg);
    let conv = &cfg.convergence;
    let mut rep = SuiteReport::new("convergence");
    let mut table = Table::new(&["n", "d", "r", "x", "y", "err_x", "err_y", "gap_ratio", "bound"]);
    let mut sizes = conv.sizes.clone();
    sizes.sort_unstable();
    let mut graphs = Vec::new();
    for &n in &sizes {
        let d = conv.degree.unwrap_or_else(|| default_degree(n));
        let g = random_regular(n, d, cfg.seed ^ (n as u64), 1000)?;
        let ev = adjacency_spectrum(&g);
        graphs.push((g, ev));
        clock.tick()?;
    }
    let mut points = Vec::new();
    for &r in &conv.r {
        let pts: Vec<TrendPoint> = graphs.iter().map(|(g, ev)| trend_point(g, ev, r)).collect::<Result<_>>()?;
        for p in &pts {
            table.push(vec![
                p.n.to_string(),
                p.d.to_string(),
                p.r.to_string(),
                format!("{:.15e}", p.x),
                format!("{:.15e}", p.y),
                format!("{:.6e}", p.err_x),
                format!("{:.6e}", p.err_y),
                format!("{:.6e}", p.gap_ratio),
                format!("{:.6e}", p.bound),
            ]);
        }
        let ex: Vec<f64> = pts.iter().map(|p| p.err_x).collect();
        let ey: Vec<f64> = pts.iter().map(|p| p.err_y).collect();
        rep.check(Check::new(
            format!("errors decrease across sizes, r = {r}"),
            strictly_decreasing(&ex) && strictly_decreasing(&ey),
            format!("|x - 1/r| = [{}], |y - 1/r^2| = [{}]", sci(&ex), sci(&ey)),
            Some(json!({"err_x": ex, "err_y": ey})),
        ));
        let last = pts.last().expect("at least one size");
        rep.check(Check::new(
            format!("final error within the gap bound, r = {r}"),
            last.err_x <= last.bound && last.err_y <= last.bound,
            format!(
                "n = {}: errors ({:.4e}, {:.4e}), bound {:.4e} from |l2|/l1 = {:.4}",
                last.n, last.err_x, last.err_y, last.bound, last.gap_ratio
            ),
            Some(json!(last)),
        ));
        points.extend(pts);
    }
    rep.measure("trajectory", &points);
    rep.tables.insert("trend".into(), table);

    if conv.cross_check {
        let (g, ev) = &graphs[0];
        let toy = GadgetFamily::new(cyclic_triangle(), vec![2])?;
        for &r in &conv.r {
            let name = format!("pipeline agrees with spectrum at n = {}, toy gadget, r = {r}", g.n());
            rep.check(cross_check(cfg, name, g, ev, &toy, r)?);
            clock.tick()?;
        }
    }
    if conv.small_cross_check {
        let f0 = base_tournament(cfg)?;
        let fam = gadget_family(cfg, &f0, 1)?;
        let k4 = SimpleGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])?;
        let ev = adjacency_spectrum(&k4);
        for r in [1usize, 2] {
            let name = format!("pipeline agrees with spectrum on K4, m = {}, r = {r}", fam.m());
            rep.check(cross_check(cfg, name, &k4, &ev, &fam, r)?);
            clock.tick()?;
        }
    }
    Ok(rep.finish(start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_trend_point() {
        let k4 = SimpleGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let ev = adjacency_spectrum(&k4);
        let p = trend_point(&k4, &ev, 1).unwrap();
        let s4 = 81.0 + 3.0;
        assert!((p.x - (6561.0 + 3.0) / (s4 * s4)).abs() < 1e-12);
        assert!((p.gap_ratio - 1.0 / 3.0).abs() < 1e-12);
        let p2 = trend_point(&k4, &ev, 2).unwrap();
        assert!((p2.x - p.x / 2.0).abs() < 1e-15);
    }

    #[test]
    fn decreasing_helper() {
        assert!(strictly_decreasing(&[3.0, 2.0, 1.0]));
        assert!(!strictly_decreasing(&[3.0, 3.0]));
        assert!(strictly_decreasing(&[1.0]));
    }
}
