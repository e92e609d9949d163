//! Conditional-count matrices, necklace densities and the (x, y) statistics.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::digraph::{Digraph, RootedDigraph};
use crate::error::{Error, Result};
use crate::gadget::build_necklace;
use crate::hom::{count_hom_pinned, count_hom_rooted_pairs, Density};
use crate::host::{HostAtlas, SimpleGraph};

/// A symmetric nonnegative matrix stored as integer counts times a common rational scale.
///
/// Built from a host, `counts[x][y] = hom_{x,y}(F, T)` and `scale = 1 / N^q`
/// where `q` is the number of non-root vertices of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityMatrix {
    counts: Vec<Vec<BigUint>>,
    scale: BigRational,
}

impl DensityMatrix {
    pub fn from_counts(counts: Vec<Vec<BigUint>>, scale: BigRational) -> Result<Self> {
        let n = counts.len();
        for (x, row) in counts.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid(format!("row {x} has {} entries, expected {n}", row.len())));
            }
            for y in 0..x {
                if counts[x][y] != counts[y][x] {
                    return Err(Error::Invalid(format!("matrix is not symmetric at ({y}, {x})")));
                }
            }
        }
        if scale <= BigRational::zero() {
            return Err(Error::Invalid("scale must be positive".into()));
        }
        Ok(DensityMatrix { counts, scale })
    }

    /// Clears denominators of a symmetric nonnegative rational matrix.
    pub fn from_densities(entries: &[Vec<BigRational>]) -> Result<Self> {
        let mut l = BigInt::one();
        for row in entries {
            for e in row {
                if e < &BigRational::zero() {
                    return Err(Error::Invalid("negative matrix entry".into()));
                }
                l = l.lcm(e.denom());
            }
        }
        let counts = entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| (e.numer() * (&l / e.denom())).to_biguint().expect("nonnegative"))
                    .collect()
            })
            .collect();
        DensityMatrix::from_counts(counts, BigRational::new(BigInt::one(), l))
    }

    pub fn order(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[Vec<BigUint>] {
        &self.counts
    }

    pub fn count(&self, x: usize, y: usize) -> &BigUint {
        &self.counts[x][y]
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn density(&self, x: usize, y: usize) -> BigRational {
        BigRational::from_integer(BigInt::from(self.counts[x][y].clone())) * &self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|r| r.iter().all(|c| c.is_zero()))
    }

    /// `trace(H^ℓ)` over the integer counts.
    pub fn trace_power_counts(&self, ell: usize) -> BigUint {
        if ell == 0 {
            return BigUint::from(self.order());
        }
        let mut p = self.counts.clone();
        for _ in 1..ell {
            p = matmul(&p, &self.counts);
        }
        (0..self.order()).map(|i| p[i][i].clone()).sum()
    }

    /// `trace(M^ℓ)` of the density matrix, exact.
    pub fn trace_power(&self, ell: usize) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(self.trace_power_counts(ell)));
        t * num_traits::pow(self.scale.clone(), ell)
    }

    /// `t(C_ℓ, M) = trace(M^ℓ) / N^ℓ`, which is `t(D_ℓ, T)` when `M` comes from a host on `N` vertices.
    pub fn cycle_density(&self, ell: usize) -> BigRational {
        self.trace_power(ell) / num_traits::pow(BigRational::from_integer(BigInt::from(self.order())), ell)
    }

    /// `t(C_4, M)`, `t(C_8, M)`, `t(C_12, M)` from one pass of [`trace_powers_4_8_12`](Self::trace_powers_4_8_12).
    pub fn cycle_densities_4_8_12(&self) -> [BigRational; 3] {
        let unit = &self.scale / BigRational::from_integer(BigInt::from(self.order()));
        let [t4, t8, t12] = self.trace_powers_4_8_12();
        let r = |t: BigUint, k: usize| BigRational::from_integer(BigInt::from(t)) * num_traits::pow(unit.clone(), k);
        [r(t4, 4), r(t8, 8), r(t12, 12)]
    }

    /// Exact `trace(H^4)`, `trace(H^8)`, `trace(H^12)`.
    pub fn trace_powers_4_8_12(&self) -> [BigUint; 3] {
        let h2 = matmul(&self.counts, &self.counts);
        let h4 = matmul(&h2, &h2);
        let h8 = matmul(&h4, &h4);
        let n = self.order();
        let t4: BigUint = (0..n).map(|i| h4[i][i].clone()).sum();
        let t8: BigUint = (0..n).map(|i| h8[i][i].clone()).sum();
        // trace(H^12) = Σ_ij (H^4)_ij (H^8)_ji, and both are symmetric
        let mut t12 = BigUint::zero();
        for i in 0..n {
            for j in 0..n {
                if !h4[i][j].is_zero() && !h8[i][j].is_zero() {
                    t12 += &h4[i][j] * &h8[i][j];
                }
            }
        }
        [t4, t8, t12]
    }

    /// Float image divided by its largest entry, with that divisor.
    pub fn normalized_f64(&self) -> (DMatrix<f64>, BigRational) {
        let n = self.order();
        let max = self.counts.iter().flatten().max().cloned().unwrap_or_default();
        if max.is_zero() {
            return (DMatrix::zeros(n, n), BigRational::one());
        }
        let maxr = BigRational::from_integer(BigInt::from(max.clone()));
        let m = DMatrix::from_fn(n, n, |i, j| {
            BigRational::new(BigInt::from(self.counts[i][j].clone()), BigInt::from(max.clone()))
                .to_f64()
                .unwrap_or(0.0)
        });
        (m, maxr * &self.scale)
    }

    /// Eigenvalues of the normalised float image, sorted by decreasing modulus,
    /// together with the factor that converts them to eigenvalues of the
    /// operator `M / N`, whose power sums are the cycle densities.
    pub fn spectrum(&self) -> (Vec<f64>, BigRational) {
        let (m, factor) = self.normalized_f64();
        (eigenvalues_sorted(m), factor / BigRational::from_integer(BigInt::from(self.order())))
    }

    pub fn to_csv_counts(&self) -> String {
        self.to_csv(|x, y| self.counts[x][y].to_string())
    }

    pub fn to_csv_densities(&self) -> String {
        self.to_csv(|x, y| {
            let d = self.density(x, y);
            if d.is_integer() {
                d.numer().to_string()
            } else {
                format!("{}/{}", d.numer(), d.denom())
            }
        })
    }

    fn to_csv(&self, cell: impl Fn(usize, usize) -> String) -> String {
        let n = self.order();
        let mut s = String::new();
        let header: Vec<String> = (0..n).map(|v| v.to_string()).collect();
        writeln!(s, "{}", header.join(",")).unwrap();
        for x in 0..n {
            let row: Vec<String> = (0..n).map(|y| cell(x, y)).collect();
            writeln!(s, "{}", row.join(",")).unwrap();
        }
        s
    }

    /// Reads a matrix written by [`to_csv_densities`](Self::to_csv_densities) or
    /// [`to_csv_counts`](Self::to_csv_counts) (counts are read with scale 1).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse { line: 1, msg: "empty matrix file".into() })?;
        let n = header.split(',').count();
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|c| crate::quantum::parse_rational(c).map_err(|e| Error::Parse { line: i + 2, msg: e.to_string() }))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Parse { line: rows.len() + 1, msg: format!("expected {n} rows") });
        }
        DensityMatrix::from_densities(&rows)
    }
}

fn matmul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = a.len();
    let nz: Vec<Vec<usize>> = b
        .iter()
        .map(|row| (0..n).filter(|&j| !row[j].is_zero()).collect())
        .collect();
    a.par_iter()
        .map(|row| {
            let mut out = vec![BigUint::zero(); n];
            for (k, aik) in row.iter().enumerate() {
                if aik.is_zero() {
                    continue;
                }
                for &j in &nz[k] {
                    out[j] += aik * &b[k][j];
                }
            }
            out
        })
        .collect()
}

/// Eigenvalues of a symmetric matrix, ordered by decreasing `|λ|` (ties by value).
pub fn eigenvalues_sorted(m: DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
    ev
}

/// `H[x, y] = hom_{x,y}(F, T)` for all ordered pairs, assuming `hom_{x,y} = hom_{y,x}`
/// (true for symmetrised gadgets); each unordered pair is counted once.
pub fn density_matrix(f: &RootedDigraph, host: &Digraph, budget: Option<u64>) -> Result<DensityMatrix> {
    let n = host.n();
    if n == 0 {
        return Err(Error::EmptyHost);
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let counts = pair_counts(f, host, &pairs, budget)?;
    let mut h = vec![vec![BigUint::zero(); n]; n];
    for (&(x, y), c) in pairs.iter().zip(counts) {
        h[y][x] = c.clone();
        h[x][y] = c;
    }
    let q = f.graph().n() - 2;
    let scale = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(n), q));
    DensityMatrix::from_counts(h, scale)
}

/// `hom_{x,y}(F, T)` for each listed pair, in order; evaluated in parallel.
pub fn pair_counts(
    f: &RootedDigraph,
    host: &Digraph,
    pairs: &[(usize, usize)],
    budget: Option<u64>,
) -> Result<Vec<BigUint>> {
    count_hom_rooted_pairs(f, host, pairs, budget)
}

/// `t(D_ℓ, T)` by counting homomorphisms of the necklace itself.
pub fn necklace_density_direct(f: &RootedDigraph, host: &Digraph, ell: usize, budget: Option<u64>) -> Result<Density> {
    if host.n() == 0 {
        return Err(Error::EmptyHost);
    }
    let d = build_necklace(f, ell)?;
    let c = count_hom_pinned(&d, host, &[], budget)?;
    let denom = num_traits::pow(BigInt::from(host.n()), d.n());
    Ok(Density(BigRational::new(BigInt::from(c.0), denom)))
}

/// `Σ_j λ_j^ℓ` over the eigenvalues of `M / N`, in floating point; equals `t(C_ℓ, M)`.
pub fn necklace_density_spectral(m: &DensityMatrix, ell: usize) -> f64 {
    let (ev, factor) = m.spectrum();
    let s: f64 = ev.iter().map(|l| l.powi(ell as i32)).sum();
    s * factor.to_f64().unwrap_or(0.0).powi(ell as i32)
}

/// `Σ λ^8 / (Σ λ^4)^2` and `Σ λ^12 / (Σ λ^4)^3`; `None` when every eigenvalue vanishes.
pub fn xy_from_spectrum(ev: &[f64]) -> Option<(f64, f64)> {
    let p = |k: i32| ev.iter().map(|l| l.powi(k)).sum::<f64>();
    let p4 = p(4);
    if p4 <= 0.0 {
        return None;
    }
    Some((p(8) / (p4 * p4), p(12) / (p4 * p4 * p4)))
}

/// Adjacency eigenvalues of `g`, ordered by decreasing `|λ|`.
pub fn adjacency_spectrum(g: &SimpleGraph) -> Vec<f64> {
    let a = g.adjacency();
    eigenvalues_sorted(DMatrix::from_fn(g.n(), g.n(), |i, j| a[i][j] as f64))
}

/// `(x, y)` of `r` disjoint copies of a matrix with spectrum `ev`:
/// `Σλ⁸ / (r (Σλ⁴)²)` and `Σλ¹² / (r² (Σλ⁴)³)`.
pub fn closed_form_xy(ev: &[f64], r: usize) -> Option<(f64, f64)> {
    let (x, y) = xy_from_spectrum(ev)?;
    let r = r as f64;
    Some((x / r, y / (r * r)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XYPoint {
    /// From the floating-point spectrum.
    pub x: f64,
    pub y: f64,
    /// Exact values from integer traces.
    #[serde(serialize_with = "ser_rational")]
    pub x_exact: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub y_exact: BigRational,
    /// `t(D_4)`, `t(D_8)`, `t(D_12)`, i.e. `trace(M^4)`, `trace(M^8)`, `trace(M^12)`.
    #[serde(serialize_with = "ser_rational")]
    pub p4: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub p8: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub p12: BigRational,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Error of [`xy_point`] on a host where `t(D_4) = 0`.
pub fn is_degenerate(e: &Error) -> bool {
    matches!(e, Error::Invalid(msg) if msg.starts_with("degenerate host"))
}

pub fn xy_point(m: &DensityMatrix) -> Result<XYPoint> {
    if m.is_zero() {
        return Err(Error::Invalid("degenerate host: t(D_4) = 0".into()));
    }
    let [p4, p8, p12] = m.cycle_densities_4_8_12();
    let x_exact = &p8 / (&p4 * &p4);
    let y_exact = &p12 / (&p4 * &p4 * &p4);
    let (ev, _) = m.spectrum();
    let (x, y) = xy_from_spectrum(&ev).ok_or_else(|| Error::Invalid("degenerate host: t(D_4) = 0".into()))?;
    Ok(XYPoint { x, y, x_exact, y_exact, p4, p8, p12 })
}

/// Offending entry of an expected support pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternViolation {
    pub x: usize,
    pub y: usize,
    pub expected_nonzero: bool,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphonReport {
    /// Gadget index, 1-based.
    pub i: usize,
    pub pairs_checked: usize,
    pub support: Vec<(usize, usize)>,
    /// Common value of `hom_{x,y}(F†, T)` on the support.
    pub h_value: Option<String>,
    /// Its square root when it is a perfect square, i.e. `hom_{x,y}(F, T)`.
    pub b: Option<String>,
    /// `h_value / N^q`.
    pub a: Option<String>,
    pub a_f64: Option<f64>,
    pub violations: Vec<PatternViolation>,
}

impl GraphonReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.h_value.is_some()
    }
}

fn graphon_report(
    i: usize,
    support: Vec<(usize, usize)>,
    entries: impl Iterator<Item = ((usize, usize), BigUint)>,
    scale: &BigRational,
) -> GraphonReport {
    let mut value: Option<BigUint> = None;
    let mut violations = Vec::new();
    let mut checked = 0;
    for ((x, y), c) in entries {
        checked += 1;
        let key = (x.min(y), x.max(y));
        let expected = support.binary_search(&key).is_ok();
        let bad = if expected {
            match &value {
                _ if c.is_zero() => true,
                None => {
                    value = Some(c.clone());
                    false
                }
                Some(v) => *v != c,
            }
        } else {
            !c.is_zero()
        };
        if bad && violations.len() < 32 {
            violations.push(PatternViolation { x, y, expected_nonzero: expected, count: c.to_string() });
        }
    }
    let b = value.as_ref().and_then(|v| {
        let r = v.sqrt();
        (&r * &r == *v).then(|| r.to_string())
    });
    let a = value
        .as_ref()
        .map(|v| BigRational::from_integer(BigInt::from(v.clone())) * scale);
    GraphonReport {
        i,
        pairs_checked: checked,
        support,
        h_value: value.as_ref().map(|v| v.to_string()),
        b,
        a_f64: a.as_ref().and_then(|a| a.to_f64()),
        a: a.map(|a| format!("{}/{}", a.numer(), a.denom())),
        violations,
    }
}

/// Checks that `M` is a constant multiple of the adjacency matrix of the glued
/// copies of `G` for gadget `i` (1-based), and zero elsewhere.
pub fn graphon_pattern_check(m: &DensityMatrix, atlas: &HostAtlas, i: usize) -> GraphonReport {
    let n = m.order();
    let entries = (0..n).flat_map(move |x| (x..n).map(move |y| (x, y))).map(|(x, y)| ((x, y), m.count(x, y).clone()));
    graphon_report(i, atlas.base_edges(i), entries, m.scale())
}

/// Same check restricted to the listed pairs, counting each directly.
pub fn graphon_pattern_check_pairs(
    f: &RootedDigraph,
    host: &Digraph,
    atlas: &HostAtlas,
    i: usize,
    pairs: &[(usize, usize)],
    budget: Option<u64>,
) -> Result<GraphonReport> {
    let counts = pair_counts(f, host, pairs, budget)?;
    let q = f.graph().n() - 2;
    let scale = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(host.n()), q));
    Ok(graphon_report(i, atlas.base_edges(i), pairs.iter().copied().zip(counts), &scale))
}
