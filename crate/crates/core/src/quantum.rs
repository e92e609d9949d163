//! Quantum digraphs: finite rational combinations of digraphs.

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::format;
use crate::hom::{count_hom, weak_components, Density};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumTerm {
    pub coef: BigRational,
    pub graph: Digraph,
}

/// `Σ c_i D_i` with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuantumDigraph {
    terms: Vec<QuantumTerm>,
}

impl QuantumDigraph {
    pub fn new() -> Self {
        QuantumDigraph { terms: Vec::new() }
    }

    pub fn single(coef: BigRational, graph: Digraph) -> Self {
        let mut q = QuantumDigraph::new();
        q.push(coef, graph);
        q
    }

    pub fn push(&mut self, coef: BigRational, graph: Digraph) {
        self.terms.push(QuantumTerm { coef, graph });
    }

    pub fn terms(&self) -> &[QuantumTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of two combinations (terms concatenated, then merged).
    pub fn add(&self, other: &QuantumDigraph) -> QuantumDigraph {
        let mut q = self.clone();
        q.terms.extend(other.terms.iter().cloned());
        q.merge_identical();
        q
    }

    pub fn scale(&self, c: &BigRational) -> QuantumDigraph {
        QuantumDigraph {
            terms: self
                .terms
                .iter()
                .map(|t| QuantumTerm { coef: &t.coef * c, graph: t.graph.clone() })
                .collect(),
        }
    }

    /// Merges label-identical digraphs and drops zero coefficients; keeps first-seen order.
    pub fn merge_identical(&mut self) {
        let mut index: HashMap<Digraph, usize> = HashMap::new();
        let mut merged: Vec<QuantumTerm> = Vec::new();
        for t in self.terms.drain(..) {
            match index.get(&t.graph) {
                Some(&i) => merged[i].coef += t.coef,
                None => {
                    index.insert(t.graph.clone(), merged.len());
                    merged.push(t);
                }
            }
        }
        merged.retain(|t| !t.coef.is_zero());
        self.terms = merged;
    }

    /// Merges isomorphic digraphs (exhaustive isomorphism test) and drops zero terms.
    pub fn normalize(&mut self) {
        self.merge_identical();
        let mut merged: Vec<QuantumTerm> = Vec::new();
        'outer: for t in self.terms.drain(..) {
            for m in merged.iter_mut() {
                if are_isomorphic(&m.graph, &t.graph) {
                    m.coef += t.coef;
                    continue 'outer;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| !t.coef.is_zero());
        self.terms = merged;
    }

    pub fn from_json_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let file: QuantumFile =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("quantum JSON: {e}")))?;
        let mut q = QuantumDigraph::new();
        for t in file.terms {
            let coef = parse_rational(&t.coef)?;
            let body = if t.graph.trim_start().starts_with("digraph") {
                t.graph
            } else {
                let path = match base_dir {
                    Some(d) => d.join(&t.graph),
                    None => t.graph.clone().into(),
                };
                std::fs::read_to_string(&path)
                    .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?
            };
            q.push(coef, format::parse_digraph(&body)?.graph);
        }
        Ok(q)
    }

    /// JSON with inline digraph bodies.
    pub fn to_json_string(&self) -> String {
        let file = QuantumFile {
            terms: self
                .terms
                .iter()
                .map(|t| QuantumFileTerm {
                    coef: format!("{}/{}", t.coef.numer(), t.coef.denom()),
                    graph: format::write_digraph(&t.graph, None),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct QuantumFile {
    terms: Vec<QuantumFileTerm>,
}

#[derive(Serialize, Deserialize)]
struct QuantumFileTerm {
    coef: String,
    graph: String,
}

/// Parses `a/b` or an integer `a`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Invalid(format!("bad rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `Σ c_i t(D_i, T)`, exact.
///
/// Each term is factored into weakly connected components; homomorphism
/// counts of repeated components are shared across terms.
pub fn eval_quantum(g: &QuantumDigraph, host: &Digraph) -> Result<Density> {
    if host.n() == 0 {
        return Err(Error::EmptyHost);
    }
    let mut cache: HashMap<Digraph, BigUint> = HashMap::new();
    let mut total = BigRational::zero();
    let n = BigUint::from(host.n());
    for t in &g.terms {
        if t.coef.is_zero() {
            continue;
        }
        let mut hom = BigUint::one();
        for comp in weak_components(&t.graph) {
            let sub = t.graph.induced_subdigraph(&comp)?;
            let c = cache
                .entry(sub)
                .or_insert_with_key(|k| count_hom(k, host).0)
                .clone();
            hom *= c;
            if hom.is_zero() {
                break;
            }
        }
        let denom = num_traits::pow(n.clone(), t.graph.n());
        total += &t.coef * BigRational::new(hom.into(), denom.into());
    }
    Ok(Density(total))
}

fn degree_signature(g: &Digraph) -> Vec<(usize, usize)> {
    let mut s: Vec<(usize, usize)> = (0..g.n()).map(|v| (g.out_degree(v), g.in_degree(v))).collect();
    s.sort_unstable();
    s
}

/// Exhaustive isomorphism test; components are matched class by class.
pub fn are_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    if a == b {
        return true;
    }
    if a.n() != b.n() || a.arc_count() != b.arc_count() || degree_signature(a) != degree_signature(b)
    {
        return false;
    }
    let ca: Vec<Digraph> = weak_components(a)
        .iter()
        .map(|c| a.induced_subdigraph(c).expect("in range"))
        .collect();
    let mut cb: Vec<Option<Digraph>> = weak_components(b)
        .iter()
        .map(|c| Some(b.induced_subdigraph(c).expect("in range")))
        .collect();
    if ca.len() != cb.len() {
        return false;
    }
    if ca.len() == 1 {
        return connected_isomorphic(&ca[0], cb[0].as_ref().unwrap());
    }
    'next: for x in &ca {
        for slot in cb.iter_mut() {
            if let Some(y) = slot {
                if are_isomorphic(x, y) {
                    *slot = None;
                    continue 'next;
                }
            }
        }
        return false;
    }
    true
}

fn connected_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    if a == b {
        return true;
    }
    let n = a.n();
    if n != b.n() || a.arc_count() != b.arc_count() || degree_signature(a) != degree_signature(b) {
        return false;
    }
    // BFS order from a maximum-degree vertex keeps every later vertex adjacent to a placed one.
    let start = (0..n)
        .max_by_key(|&v| (a.out_degree(v) + a.in_degree(v), std::cmp::Reverse(v)))
        .unwrap_or(0);
    let mut order = Vec::with_capacity(n);
    let mut seen = BitSet::new(n);
    if n > 0 {
        order.push(start);
        seen.insert(start);
    }
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for v in a.neighbors(u).iter() {
            if !seen.contains(v) {
                seen.insert(v);
                order.push(v);
            }
        }
        i += 1;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = BitSet::new(n);
    fn extend(
        a: &Digraph,
        b: &Digraph,
        order: &[usize],
        i: usize,
        map: &mut [usize],
        used: &mut BitSet,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for x in 0..b.n() {
            if used.contains(x)
                || b.out_degree(x) != a.out_degree(v)
                || b.in_degree(x) != a.in_degree(v)
            {
                continue;
            }
            let ok = order[..i].iter().all(|&u| {
                let y = map[u];
                a.has_arc(u, v) == b.has_arc(y, x) && a.has_arc(v, u) == b.has_arc(x, y)
            });
            if !ok {
                continue;
            }
            map[v] = x;
            used.insert(x);
            if extend(a, b, order, i + 1, map, used) {
                return true;
            }
            used.remove(x);
            map[v] = usize::MAX;
        }
        false
    }
    extend(a, b, &order, 0, &mut map, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::random_tournament;
    use crate::hom::density;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn arc() -> Digraph {
        Digraph::from_arcs(2, [(0, 1)]).unwrap()
    }

    #[test]
    fn single_vertex_evaluates_to_one() {
        let g = QuantumDigraph::single(q(1, 1), Digraph::empty(1));
        for seed in 0..3 {
            let t = random_tournament(5, seed);
            assert_eq!(eval_quantum(&g, &t).unwrap().0, q(1, 1));
        }
    }

    #[test]
    fn cancellation() {
        let mut g = QuantumDigraph::new();
        g.push(q(1, 1), arc());
        g.push(q(-1, 1), arc());
        let t = random_tournament(6, 1);
        assert!(eval_quantum(&g, &t).unwrap().0.is_zero());
        g.merge_identical();
        assert!(g.is_empty());
    }

    #[test]
    fn product_via_disjoint_union() {
        let mut g = QuantumDigraph::new();
        g.push(q(1, 1), arc().disjoint_union(&arc()));
        g.push(q(-1, 1), arc());
        let t = random_tournament(7, 3);
        let ta = density(&arc(), &t).unwrap().0;
        assert_eq!(eval_quantum(&g, &t).unwrap().0, &ta * &ta - &ta);
    }

    #[test]
    fn isomorphism_merging() {
        let a = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        let b = Digraph::from_arcs(3, [(2, 0), (0, 1)]).unwrap();
        let c = Digraph::from_arcs(3, [(0, 1), (0, 2)]).unwrap();
        assert!(are_isomorphic(&a, &b));
        assert!(!are_isomorphic(&a, &c));
        let mut g = QuantumDigraph::new();
        g.push(q(2, 1), a);
        g.push(q(3, 1), b);
        g.push(q(1, 2), c);
        g.normalize();
        assert_eq!(g.len(), 2);
        assert_eq!(g.terms()[0].coef, q(5, 1));
    }

    #[test]
    fn isomorphism_of_unions_is_order_free() {
        let c3 = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let x = arc().disjoint_union(&c3);
        let y = c3.disjoint_union(&arc());
        assert!(are_isomorphic(&x, &y));
        assert!(!are_isomorphic(&x, &arc().disjoint_union(&arc()).disjoint_union(&Digraph::empty(1))));
    }

    #[test]
    fn json_roundtrip() {
        let mut g = QuantumDigraph::new();
        g.push(q(-3, 2), arc());
        g.push(q(5, 1), Digraph::empty(1));
        let text = g.to_json_string();
        let back = QuantumDigraph::from_json_str(&text, None).unwrap();
        assert_eq!(back, g);
        assert!(parse_rational("1/0").is_err());
        assert_eq!(parse_rational("-4").unwrap(), q(-4, 1));
    }
}
