//! From integer polynomials to quantum digraphs: `p ↦ p̄ ↦ f(p)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, RootedDigraph};
use crate::error::{Error, Result};
use crate::gadget::build_necklace;
use crate::quantum::{eval_quantum, QuantumDigraph};
use crate::spectral::density_matrix;

/// A polynomial with integer coefficients in `s` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    s: usize,
    /// Exponent vector to nonzero coefficient.
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPolynomial {
    pub fn zero(s: usize) -> Self {
        IntPolynomial { s, terms: BTreeMap::new() }
    }

    pub fn new(s: usize, terms: impl IntoIterator<Item = (BigInt, Vec<u32>)>) -> Result<Self> {
        let mut p = IntPolynomial::zero(s);
        for (c, e) in terms {
            p.add_term(c, e)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, coef: BigInt, exps: Vec<u32>) -> Result<()> {
        if exps.len() != self.s {
            return Err(Error::Invalid(format!("exponent vector {exps:?} has length != {}", self.s)));
        }
        let slot = self.terms.entry(exps.clone()).or_insert_with(BigInt::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
        Ok(())
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn abs_coef_sum(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn mul(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        if self.s != other.s {
            return Err(Error::Invalid("variable counts differ".into()));
        }
        let mut out = IntPolynomial::zero(self.s);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(ca * cb, e)?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        if self.s != other.s {
            return Err(Error::Invalid("variable counts differ".into()));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(c.clone(), e.clone())?;
        }
        Ok(out)
    }

    /// Same polynomial viewed in `s + extra` variables.
    pub fn pad(&self, extra: usize) -> IntPolynomial {
        IntPolynomial {
            s: self.s + extra,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(self.s + extra, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.s {
            return Err(Error::Invalid(format!("point has {} coordinates, expected {}", point.len(), self.s)));
        }
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (x, &k) in point.iter().zip(e) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            total += t;
        }
        Ok(total)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c.to_f64().unwrap_or(f64::NAN)
                    * point.iter().zip(e).map(|(x, &k)| x.powi(k as i32)).product::<f64>()
            })
            .sum()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let f: PolyFile = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("polynomial JSON: {e}")))?;
        IntPolynomial::new(f.s, f.terms.into_iter().map(|t| (BigInt::from(t.coef), t.exps)))
    }

    pub fn to_json_string(&self) -> Result<String> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                Ok(PolyTerm {
                    coef: c.to_i64().ok_or_else(|| Error::Invalid(format!("coefficient {c} exceeds i64")))?,
                    exps: e.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(serde_json::to_string_pretty(&PolyFile { s: self.s, terms }).expect("serializable"))
    }

    /// Parses `3 x1^2 x2 - 2 x2 + 7`; `s` is the largest index used unless given.
    pub fn parse(text: &str, s: Option<usize>) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 1, msg };
        let compact: String = text.chars().filter(|c| !c.is_whitespace() || *c == ' ').collect();
        let mut raw_terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.trim().is_empty() && !cur.trim_end().ends_with('^') {
                raw_terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && cur.trim().is_empty() {
                if ch == '-' {
                    neg = !neg;
                }
            } else {
                cur.push(ch);
            }
        }
        if !cur.trim().is_empty() {
            raw_terms.push((neg, cur));
        } else if raw_terms.is_empty() {
            return Err(bad("empty polynomial".into()));
        }
        let mut parsed: Vec<(BigInt, Vec<(usize, u32)>)> = Vec::new();
        let mut max_var = 0;
        for (neg, body) in raw_terms {
            let mut coef = BigInt::one();
            let mut factors = Vec::new();
            for tok in body.split(|c: char| c == ' ' || c == '*').filter(|t| !t.is_empty()) {
                if let Some(rest) = tok.strip_prefix('x') {
                    let (idx, exp) = match rest.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad(format!("bad exponent in `{tok}`")))?),
                        None => (rest, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| bad(format!("bad variable `{tok}`")))?;
                    if i == 0 {
                        return Err(bad("variables are numbered from x1".into()));
                    }
                    max_var = max_var.max(i);
                    factors.push((i - 1, exp));
                } else {
                    let c: BigInt = tok.parse().map_err(|_| bad(format!("unexpected token `{tok}`")))?;
                    coef *= c;
                }
            }
            if neg {
                coef = -coef;
            }
            parsed.push((coef, factors));
        }
        let s = match s {
            Some(s) if s < max_var => return Err(bad(format!("x{max_var} exceeds s = {s}"))),
            Some(s) => s,
            None => max_var,
        };
        let mut p = IntPolynomial::zero(s);
        for (c, factors) in parsed {
            let mut e = vec![0u32; s];
            for (i, k) in factors {
                e[i] += k;
            }
            p.add_term(c, e)?;
        }
        Ok(p)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                .collect();
            if vars.is_empty() || !a.is_one() {
                write!(f, "{a}")?;
                if !vars.is_empty() {
                    write!(f, " ")?;
                }
            }
            write!(f, "{}", vars.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyFile {
    s: usize,
    terms: Vec<PolyTerm>,
}

#[derive(Serialize, Deserialize)]
struct PolyTerm {
    coef: i64,
    exps: Vec<u32>,
}

/// `p̄` in variables `x₁..x_s, y₁..y_s` (indices `0..s` and `s..2s`) and its penalty constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PBar {
    pub poly: IntPolynomial,
    pub m: BigInt,
    /// The penalty vanishes because `p` is constant.
    pub degenerate: bool,
}

/// `p̄ = p · Π x_i^6 + M · Σ (y_i − x_i²)` with `M = (Σ|c|) · 100 · deg p`.
pub fn build_pbar(p: &IntPolynomial) -> PBar {
    let s = p.s();
    let deg = p.degree();
    let m = p.abs_coef_sum() * BigInt::from(100u32) * BigInt::from(deg);
    let mut out = IntPolynomial::zero(2 * s);
    for (e, c) in p.terms() {
        let mut ex = e.clone();
        for k in ex.iter_mut() {
            *k += 6;
        }
        ex.resize(2 * s, 0);
        out.add_term(c.clone(), ex).expect("length 2s");
    }
    if !m.is_zero() {
        for i in 0..s {
            let mut ey = vec![0u32; 2 * s];
            ey[s + i] = 1;
            out.add_term(m.clone(), ey).expect("length 2s");
            let mut ex = vec![0u32; 2 * s];
            ex[i] = 2;
            out.add_term(-m.clone(), ex).expect("length 2s");
        }
    }
    PBar { poly: out, m, degenerate: deg == 0 }
}

/// The necklaces `D_4`, `D_8`, `D_12` of each symmetrised gadget.
#[derive(Clone, Debug)]
pub struct NecklaceSet {
    pub gadgets: Vec<RootedDigraph>,
    pub d4: Vec<Digraph>,
    pub d8: Vec<Digraph>,
    pub d12: Vec<Digraph>,
}

impl NecklaceSet {
    pub fn new(gadgets: Vec<RootedDigraph>) -> Result<Self> {
        let make = |ell| gadgets.iter().map(|g| build_necklace(g, ell)).collect::<Result<Vec<_>>>();
        Ok(NecklaceSet { d4: make(4)?, d8: make(8)?, d12: make(12)?, gadgets })
    }

    pub fn s(&self) -> usize {
        self.gadgets.len()
    }
}

/// Disjoint union of `a_i` copies of `D_8`, `b_i` of `D_12` and `E_i − 2a_i − 3b_i` of `D_4`, over `i`.
pub fn monomial_to_quantum(exps_x: &[u32], exps_y: &[u32], necklaces: &NecklaceSet, e: &[u32]) -> Result<Digraph> {
    let s = necklaces.s();
    if exps_x.len() != s || exps_y.len() != s || e.len() != s {
        return Err(Error::Invalid(format!("expected {s} exponents per list")));
    }
    let mut out = Digraph::empty(0);
    for i in 0..s {
        let used = 2 * exps_x[i] + 3 * exps_y[i];
        let fill = e[i].checked_sub(used).ok_or_else(|| {
            Error::Invalid(format!(
                "clearing exponent too small for gadget {}: {} < {used}",
                i + 1,
                e[i]
            ))
        })?;
        for _ in 0..exps_x[i] {
            out = out.disjoint_union(&necklaces.d8[i]);
        }
        for _ in 0..exps_y[i] {
            out = out.disjoint_union(&necklaces.d12[i]);
        }
        for _ in 0..fill {
            out = out.disjoint_union(&necklaces.d4[i]);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClearingMode {
    /// Smallest exponents that clear every denominator.
    Minimal,
    /// `3 · deg p` for every gadget.
    ThreeDegree,
    Explicit(Vec<u32>),
}

/// Per-gadget `max over monomials of 2·a_i + 3·b_i`.
pub fn minimal_clearing_exponents(pbar: &PBar) -> Vec<u32> {
    let s = pbar.poly.s() / 2;
    let mut e = vec![0u32; s];
    for (ex, _) in pbar.poly.terms() {
        for i in 0..s {
            e[i] = e[i].max(2 * ex[i] + 3 * ex[s + i]);
        }
    }
    e
}

/// `f(p)` with the clearing exponents used.
pub fn build_f_of_p(p: &IntPolynomial, necklaces: &NecklaceSet, mode: &ClearingMode) -> Result<(QuantumDigraph, Vec<u32>)> {
    let s = p.s();
    if necklaces.s() != s {
        return Err(Error::Invalid(format!("{} gadgets for {s} variables", necklaces.s())));
    }
    let pbar = build_pbar(p);
    let minimal = minimal_clearing_exponents(&pbar);
    let e = match mode {
        ClearingMode::Minimal => minimal.clone(),
        ClearingMode::ThreeDegree => vec![3 * p.degree(); s],
        ClearingMode::Explicit(e) => e.clone(),
    };
    if e.len() != s {
        return Err(Error::Invalid(format!("{} clearing exponents for {s} gadgets", e.len())));
    }
    if e.iter().zip(&minimal).any(|(a, b)| a < b) {
        return Err(Error::Invalid(format!(
            "clearing exponents {e:?} do not clear denominators; minimal exponents are {minimal:?}"
        )));
    }
    let mut q = QuantumDigraph::new();
    for (ex, c) in pbar.poly.terms() {
        let g = monomial_to_quantum(&ex[..s], &ex[s..], necklaces, &e)?;
        q.push(BigRational::from_integer(c.clone()), g);
    }
    q.merge_identical();
    Ok((q, e))
}

/// Exact `t(D_4)`, `t(D_8)`, `t(D_12)` of every gadget on a host, via cycle densities of `M`.
pub fn necklace_densities(necklaces: &NecklaceSet, host: &Digraph) -> Result<Vec<[BigRational; 3]>> {
    necklaces
        .gadgets
        .iter()
        .map(|g| {
            Ok(density_matrix(g, host, None)?.cycle_densities_4_8_12())
        })
        .collect()
}

/// `p̄(x, y) · Π t(D_4,i)^{E_i}` expanded as a polynomial in necklace densities; valid even when some `t(D_4) = 0`.
pub fn reduction_rhs(pbar: &PBar, e: &[u32], dens: &[[BigRational; 3]]) -> Result<BigRational> {
    let s = dens.len();
    let mut total = BigRational::zero();
    for (ex, c) in pbar.poly.terms() {
        let mut t = BigRational::from_integer(c.clone());
        for i in 0..s {
            let (a, b) = (ex[i], ex[s + i]);
            let fill = e[i]
                .checked_sub(2 * a + 3 * b)
                .ok_or_else(|| Error::Invalid("clearing exponent too small".into()))?;
            t *= num_traits::pow(dens[i][1].clone(), a as usize);
            t *= num_traits::pow(dens[i][2].clone(), b as usize);
            t *= num_traits::pow(dens[i][0].clone(), fill as usize);
        }
        total += t;
    }
    Ok(total)
}

/// The same right side computed as `p̄(x, y) · Π p₄^E` from the ratios `x = p₈/p₄²`, `y = p₁₂/p₄³`.
/// `None` when some `p₄ = 0`.
pub fn reduction_rhs_via_xy(pbar: &PBar, e: &[u32], dens: &[[BigRational; 3]]) -> Result<Option<BigRational>> {
    if dens.iter().any(|d| d[0].is_zero()) {
        return Ok(None);
    }
    let s = dens.len();
    let mut point = Vec::with_capacity(2 * s);
    for d in dens {
        point.push(&d[1] / (&d[0] * &d[0]));
    }
    for d in dens {
        point.push(&d[2] / (&d[0] * &d[0] * &d[0]));
    }
    let mut v = pbar.poly.eval(&point)?;
    for (d, &k) in dens.iter().zip(e) {
        v *= num_traits::pow(d[0].clone(), k as usize);
    }
    Ok(Some(v))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DirectionReport {
    pub hosts: usize,
    /// `p ≥ 0` on every sampled point `(1/n_1, …, 1/n_s)`.
    pub p_nonneg_on_samples: bool,
    /// Hosts where `t(f(p), T) < −tol` although `p` looked nonnegative.
    pub sign_violations: Vec<usize>,
    /// Hosts with some `t(D_4) = 0` but `t(f(p), T) ≠ 0`.
    pub zero_violations: Vec<usize>,
    pub negative_hosts: Vec<usize>,
    pub values: Vec<f64>,
}

impl DirectionReport {
    pub fn holds(&self) -> bool {
        self.sign_violations.is_empty() && self.zero_violations.is_empty()
    }
}

fn nonneg_on_grid(p: &IntPolynomial, max_n: usize) -> bool {
    let s = p.s();
    let mut idx = vec![1usize; s];
    loop {
        let point: Vec<BigRational> = idx.iter().map(|&n| BigRational::new(BigInt::one(), BigInt::from(n))).collect();
        if p.eval(&point).map(|v| v.is_negative()).unwrap_or(true) {
            return false;
        }
        let mut k = 0;
        loop {
            if k == s {
                return true;
            }
            idx[k] += 1;
            if idx[k] <= max_n {
                break;
            }
            idx[k] = 1;
            k += 1;
        }
    }
}

/// Sign and divisibility checks of `t(f(p), T)` over a list of hosts.
pub fn check_nonnegative_direction(
    p: &IntPolynomial,
    necklaces: &NecklaceSet,
    hosts: &[Digraph],
    tol: f64,
) -> Result<DirectionReport> {
    let (f, _) = build_f_of_p(p, necklaces, &ClearingMode::Minimal)?;
    let nonneg = nonneg_on_grid(p, if p.s() <= 2 { 40 } else { 8 });
    let mut rep = DirectionReport { hosts: hosts.len(), p_nonneg_on_samples: nonneg, ..Default::default() };
    for (idx, t) in hosts.iter().enumerate() {
        let v = eval_quantum(&f, t)?.0;
        let dens = necklace_densities(necklaces, t)?;
        let vf = v.to_f64().unwrap_or(f64::NAN);
        rep.values.push(vf);
        if dens.iter().any(|d| d[0].is_zero()) && !v.is_zero() {
            rep.zero_violations.push(idx);
        }
        if v.is_negative() {
            rep.negative_hosts.push(idx);
            if nonneg && vf < -tol {
                rep.sign_violations.push(idx);
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{make_tournament, random_tournament, transitive_tournament};
    use crate::gadget::{build_f_dagger, build_f_i};

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn toy_necklaces(s: usize) -> NecklaceSet {
        let bases = [make_tournament(3, [(0, 1), (1, 2), (2, 0)]).unwrap(), transitive_tournament(3)];
        let ks = [2, 1];
        NecklaceSet::new((0..s).map(|i| build_f_dagger(&build_f_i(&bases[i], ks[i]).unwrap()).rooted).collect()).unwrap()
    }

    #[test]
    fn pbar_examples() {
        let p = IntPolynomial::parse("x1", None).unwrap();
        let pb = build_pbar(&p);
        assert_eq!(pb.m, bi(100));
        let want = IntPolynomial::new(2, [(bi(1), vec![7, 0]), (bi(100), vec![0, 1]), (bi(-100), vec![2, 0])]).unwrap();
        assert_eq!(pb.poly, want);
        let p2 = IntPolynomial::parse("x1 - x2", None).unwrap();
        assert_eq!(build_pbar(&p2).m, bi(200));
        let z = build_pbar(&IntPolynomial::zero(1));
        assert!(z.poly.is_zero() && z.m.is_zero() && z.degenerate);
    }

    #[test]
    fn parser_and_display() {
        let p = IntPolynomial::parse("3 x1^2 x2 - 2 x2 + 7", None).unwrap();
        assert_eq!(p.s(), 2);
        assert_eq!(p.degree(), 3);
        let want = IntPolynomial::new(2, [(bi(3), vec![2, 1]), (bi(-2), vec![0, 1]), (bi(7), vec![0, 0])]).unwrap();
        assert_eq!(p, want);
        assert_eq!(IntPolynomial::parse(&p.to_string(), Some(2)).unwrap(), p);
        assert_eq!(IntPolynomial::from_json_str(&p.to_json_string().unwrap()).unwrap(), p);
        assert_eq!(IntPolynomial::parse("x1^2 - 3", None).unwrap().degree(), 2);
        assert_eq!(IntPolynomial::parse("-1", Some(1)).unwrap().s(), 1);
        assert!(IntPolynomial::parse("x0", None).is_err());
        assert!(IntPolynomial::parse("2 y1", None).is_err());
    }

    #[test]
    fn monomials() {
        let nk = toy_necklaces(1);
        assert_eq!(monomial_to_quantum(&[1], &[0], &nk, &[2]).unwrap(), nk.d8[0]);
        assert_eq!(monomial_to_quantum(&[0], &[1], &nk, &[3]).unwrap(), nk.d12[0]);
        assert!(monomial_to_quantum(&[2], &[0], &nk, &[3]).is_err());
    }

    #[test]
    fn f_of_x1_structure() {
        let nk = toy_necklaces(1);
        let p = IntPolynomial::parse("x1", None).unwrap();
        let (f, e) = build_f_of_p(&p, &nk, &ClearingMode::Minimal).unwrap();
        assert_eq!(e, vec![14]);
        assert_eq!(f.len(), 3);
        let d8n = nk.d8[0].n();
        let d4n = nk.d4[0].n();
        let d12n = nk.d12[0].n();
        let mut sizes: Vec<(usize, String)> = f.terms().iter().map(|t| (t.graph.n(), t.coef.to_string())).collect();
        sizes.sort();
        let mut want = vec![
            (7 * d8n, "1".to_string()),
            (d12n + 11 * d4n, "100".to_string()),
            (2 * d8n + 10 * d4n, "-100".to_string()),
        ];
        want.sort();
        assert_eq!(sizes, want);
        assert!(build_f_of_p(&p, &nk, &ClearingMode::ThreeDegree).is_err());
    }

    #[test]
    fn identity_on_small_hosts() {
        let nk = toy_necklaces(1);
        let p = IntPolynomial::parse("x1", None).unwrap();
        let (f, e) = build_f_of_p(&p, &nk, &ClearingMode::Minimal).unwrap();
        let pbar = build_pbar(&p);
        let complete = Digraph::from_arcs(4, (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v)))).unwrap();
        let tournament = (0..200)
            .map(|seed| random_tournament(7, seed).into_digraph())
            .find(|t| necklace_densities(&nk, t).unwrap()[0][0] > BigRational::zero())
            .expect("some seed is nondegenerate");
        for t in [complete, tournament] {
            let lhs = eval_quantum(&f, &t).unwrap().0;
            assert!(!lhs.is_zero());
            let dens = necklace_densities(&nk, &t).unwrap();
            assert_eq!(lhs, reduction_rhs(&pbar, &e, &dens).unwrap());
            assert_eq!(Some(lhs), reduction_rhs_via_xy(&pbar, &e, &dens).unwrap());
        }
        // acyclic host: every gadget count vanishes
        let t = transitive_tournament(4);
        assert!(eval_quantum(&f, &t).unwrap().0.is_zero());
    }

    #[test]
    fn negative_constant_is_detected() {
        let nk = toy_necklaces(1);
        let p = IntPolynomial::parse("-1", Some(1)).unwrap();
        let hosts: Vec<Digraph> = (0..4).map(|s| random_tournament(4, s).into_digraph()).collect();
        let rep = check_nonnegative_direction(&p, &nk, &hosts, 1e-9).unwrap();
        assert!(!rep.p_nonneg_on_samples);
        assert!(rep.holds());
    }
}
