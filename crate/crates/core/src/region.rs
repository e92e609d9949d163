//! The region R = conv{(1/r, 1/r²)} and the power-sum machinery around it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::digraph::{Digraph, RootedDigraph};
use crate::error::{Error, Result};
use crate::spectral::{density_matrix, is_degenerate, xy_point};

/// `r` with `x ∈ [1/(r+1), 1/r]`, for `0 < x ≤ 1`.
pub fn bracket(x: f64) -> usize {
    let r = (1.0 / x).floor();
    if r < 1.0 {
        1
    } else if r > 1e15 {
        1e15 as usize
    } else {
        r as usize
    }
}

/// Lower boundary of R on `[1/(r+1), 1/r]`.
pub fn chord_value(r: usize, x: f64) -> f64 {
    let r = r as f64;
    ((2.0 * r + 1.0) * x - 1.0) / (r * (r + 1.0))
}

pub fn in_region(x: f64, y: f64, tol: f64) -> Result<bool> {
    if x.is_nan() || y.is_nan() || tol.is_nan() {
        return Err(Error::Invalid("NaN coordinate".into()));
    }
    if x < -tol || y < -tol || x > 1.0 + tol || y > 1.0 + tol || y > x + tol {
        return Ok(false);
    }
    if x <= 0.0 {
        return Ok(y <= tol);
    }
    let r = bracket(x.min(1.0));
    Ok(y >= chord_value(r, x) - tol)
}

/// Exact membership test.
pub fn in_region_exact(x: &BigRational, y: &BigRational) -> bool {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if x < &zero || y < &zero || x > &one || y > x {
        return false;
    }
    if x.is_zero() {
        return y.is_zero();
    }
    // r = floor(1/x)
    let inv = x.recip();
    let r = inv.floor().to_integer();
    let (slope, intercept) = chord(&r);
    y >= &(slope * x + intercept)
}

/// Slope and intercept of the chord through `(1/(r+1), 1/(r+1)²)` and `(1/r, 1/r²)`.
pub fn chord(r: &BigInt) -> (BigRational, BigRational) {
    let rr = BigRational::from_integer(r.clone());
    let d = &rr * (&rr + BigRational::one());
    let slope = (BigRational::from_integer(BigInt::from(2)) * &rr + BigRational::one()) / &d;
    let intercept = -(BigRational::one() / d);
    (slope, intercept)
}

/// Newton's identities, power sums to elementary symmetric values.
pub fn elementary_from_power(p1: f64, p2: f64, p3: f64) -> (f64, f64, f64) {
    let e1 = p1;
    let e2 = (p1 * p1 - p2) / 2.0;
    let e3 = (p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0;
    (e1, e2, e3)
}

pub fn power_from_elementary(e1: f64, e2: f64, e3: f64) -> (f64, f64, f64) {
    (e1, e1 * e1 - 2.0 * e2, e1 * e1 * e1 - 3.0 * e1 * e2 + 3.0 * e3)
}

/// `(e₂, e₃)` of `m` equal masses `α/m`.
pub fn hull_point(m: usize, alpha: f64) -> (f64, f64) {
    let mf = m as f64;
    (
        alpha * alpha * (mf - 1.0) / (2.0 * mf),
        alpha.powi(3) * (mf - 1.0) * (mf - 2.0) / (6.0 * mf * mf),
    )
}

/// `(e₂, e₃) ↦ (p₂/α², p₃/α³)` for vectors with `e₁ = α`.
pub fn hull_to_xy(e2: f64, e3: f64, alpha: f64) -> (f64, f64) {
    let a2 = alpha * alpha;
    (1.0 - 2.0 * e2 / a2, 1.0 - 3.0 * e2 / a2 + 3.0 * e3 / (a2 * alpha))
}

/// A finitely supported nonincreasing nonnegative vector.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegVector(Vec<f64>);

impl NonnegVector {
    pub fn new(mut v: Vec<f64>) -> Result<Self> {
        if v.iter().any(|x| x.is_nan() || *x < 0.0) {
            return Err(Error::Invalid("entries must be nonnegative numbers".into()));
        }
        v.sort_by(|a, b| b.total_cmp(a));
        Ok(NonnegVector(v))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn power_sum(&self, j: i32) -> f64 {
        self.0.iter().map(|x| x.powi(j)).sum()
    }

    /// `(e₁, e₂, e₃)` by direct expansion.
    pub fn elementary(&self) -> (f64, f64, f64) {
        let (mut e1, mut e2, mut e3) = (0.0, 0.0, 0.0);
        for &x in &self.0 {
            e3 += e2 * x;
            e2 += e1 * x;
            e1 += x;
        }
        (e1, e2, e3)
    }
}

/// `min_m c₂e₂ + c₃e₃` over equal-mass configurations with `m ≤ max_m`, and the
/// limit `m → ∞`; returns the minimum value and the minimising `m` (`None` for the limit).
pub fn equal_mass_minimum(c2: f64, c3: f64, alpha: f64, max_m: usize) -> (f64, Option<usize>) {
    let limit = c2 * alpha * alpha / 2.0 + c3 * alpha.powi(3) / 6.0;
    let mut best = (limit, None);
    for m in 1..=max_m {
        let (e2, e3) = hull_point(m, alpha);
        let v = c2 * e2 + c3 * e3;
        if v < best.0 {
            best = (v, Some(m));
        }
    }
    best
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RegionReport {
    pub checked: usize,
    pub skipped_degenerate: usize,
    /// `(host index, x, y)` of points outside R.
    pub failures: Vec<(usize, f64, f64)>,
    /// Hosts whose exact point lies outside R.
    pub exact_failures: Vec<usize>,
}

impl RegionReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.exact_failures.is_empty()
    }
}

/// Checks that `(x_F(T), y_F(T)) ∈ R` for each host, skipping hosts with `t(D_4) = 0`.
pub fn verify_points_in_region<'a>(
    f: &RootedDigraph,
    hosts: impl IntoIterator<Item = &'a Digraph>,
    tol: f64,
) -> Result<RegionReport> {
    let mut rep = RegionReport::default();
    for (idx, t) in hosts.into_iter().enumerate() {
        let m = density_matrix(f, t, None)?;
        match xy_point(&m) {
            Ok(p) => {
                rep.checked += 1;
                if !in_region(p.x, p.y, tol)? {
                    rep.failures.push((idx, p.x, p.y));
                }
                if !in_region_exact(&p.x_exact, &p.y_exact) {
                    rep.exact_failures.push(idx);
                }
            }
            Err(e) if is_degenerate(&e) => rep.skipped_degenerate += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

/// Distance from `(x, y)` to `(1/r, 1/r²)` along each coordinate.
pub fn distance_to_vertex(x: f64, y: f64, r: usize) -> (f64, f64) {
    let rf = r as f64;
    ((x - 1.0 / rf).abs(), (y - 1.0 / (rf * rf)).abs())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `|a - b| ≤ tol · max(1, |b|)`.
pub fn rel_close(a: &BigRational, b: &BigRational, tol: f64) -> bool {
    let diff = rational_to_f64(&(a - b).abs());
    diff <= tol * rational_to_f64(b).abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn membership_examples() {
        assert!(in_region(0.5, 0.25, 0.0).unwrap());
        assert!(!in_region(0.3, 0.35, 0.0).unwrap());
        assert!(!in_region(0.4, 0.14, 0.0).unwrap());
        assert!(in_region(0.0, 0.0, 0.0).unwrap());
        assert!(in_region(1.0, 1.0, 0.0).unwrap());
        assert!(in_region(f64::NAN, 0.0, 0.0).is_err());
        assert!(!in_region_exact(&q(2, 5), &q(7, 50)));
        assert!(in_region_exact(&q(1, 2), &q(1, 4)));
    }

    #[test]
    fn hull_vertices_are_in_region() {
        for r in (1..=1000).chain([10_000, 123_457, 1_000_000]) {
            let rf = r as f64;
            assert!(in_region(1.0 / rf, 1.0 / (rf * rf), 0.0).unwrap() || in_region(1.0 / rf, 1.0 / (rf * rf), 1e-15).unwrap());
            let x = q(1, r);
            assert!(in_region_exact(&x, &(&x * &x)), "r = {r}");
        }
    }

    #[test]
    fn chords_pass_through_neighbouring_vertices() {
        for r in 1..200i64 {
            let (s, c) = chord(&BigInt::from(r));
            for v in [r, r + 1] {
                let x = q(1, v);
                assert_eq!(&s * &x + &c, &x * &x);
            }
            assert_eq!(s, q(2 * r + 1, r * (r + 1)));
            assert_eq!(c, q(-1, r * (r + 1)));
        }
    }

    #[test]
    fn newton_examples() {
        assert_eq!(elementary_from_power(1.0, 0.5, 0.25), (1.0, 0.25, 0.0));
        assert_eq!(elementary_from_power(1.0, 1.0, 1.0), (1.0, 0.0, 0.0));
        let a = 0.37;
        let (e1, e2, e3) = elementary_from_power(a, a * a, a * a * a);
        let (p1, p2, p3) = power_from_elementary(e1, e2, e3);
        assert!((p1 - a).abs() < 1e-15 && (p2 - a * a).abs() < 1e-15 && (p3 - a.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn hull_points_map_to_vertices() {
        assert_eq!(hull_point(1, 1.0), (0.0, 0.0));
        assert_eq!(hull_to_xy(0.0, 0.0, 1.0), (1.0, 1.0));
        assert_eq!(hull_point(2, 1.0), (0.25, 0.0));
        assert_eq!(hull_to_xy(0.25, 0.0, 1.0), (0.5, 0.25));
        let (e2, e3) = hull_point(3, 1.0);
        assert!((e2 - 1.0 / 3.0).abs() < 1e-15 && (e3 - 1.0 / 27.0).abs() < 1e-15);
        let (x, y) = hull_to_xy(e2, e3, 1.0);
        assert!((x - 1.0 / 3.0).abs() < 1e-15 && (y - 1.0 / 9.0).abs() < 1e-15);
        for m in 1..50 {
            let alpha = 0.3 + m as f64 / 17.0;
            let (e2, e3) = hull_point(m, alpha);
            let (x, y) = hull_to_xy(e2, e3, alpha);
            let mf = m as f64;
            assert!((x - 1.0 / mf).abs() < 1e-12 && (y - 1.0 / (mf * mf)).abs() < 1e-12);
        }
    }

    #[test]
    fn vector_elementary_matches_newton() {
        let v = NonnegVector::new(vec![0.2, 0.5, 0.3]).unwrap();
        assert_eq!(v.entries(), &[0.5, 0.3, 0.2]);
        let (e1, e2, e3) = v.elementary();
        let (f1, f2, f3) = elementary_from_power(v.power_sum(1), v.power_sum(2), v.power_sum(3));
        assert!((e1 - f1).abs() < 1e-12 && (e2 - f2).abs() < 1e-12 && (e3 - f3).abs() < 1e-12);
        assert!(NonnegVector::new(vec![-1.0]).is_err());
    }
}
