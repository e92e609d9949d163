//! Exact homomorphism counting between digraphs.
//!
//! The counter backtracks over pattern vertices in a static order (pinned
//! vertices first, then decreasing total degree), drawing candidates from the
//! intersection of out/in-neighbourhoods of already placed neighbours. After
//! each placement the unplaced part of the pattern is split into connected
//! components; their counts multiply. A component whose placed boundary is
//! small is memoised by the boundary's images, which turns necklaces and other
//! thin patterns into a transfer-matrix computation.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::digraph::{Digraph, RootedDigraph};
use crate::error::{Error, Result};

/// Exact number of homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HomCount(pub BigUint);

impl HomCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for HomCount {
    fn from(v: u64) -> Self {
        HomCount(BigUint::from(v))
    }
}

impl fmt::Display for HomCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact homomorphism density.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Density(pub BigRational);

impl Density {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Boundary sizes up to this are memoised.
const MEMO_MAX_BOUNDARY: usize = 4;

/// Default budget of `|V(T)|^|V(F)|` maps for [`count_hom_bruteforce`].
pub const BRUTE_FORCE_BUDGET: u64 = 100_000_000;

trait Count: Clone {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn from_usize(x: usize) -> Self;
    fn c_is_zero(&self) -> bool;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    fn into_big(self) -> BigUint;
}

impl Count for u128 {
    fn c_zero() -> Self {
        0
    }
    fn c_one() -> Self {
        1
    }
    fn from_usize(x: usize) -> Self {
        x as u128
    }
    fn c_is_zero(&self) -> bool {
        *self == 0
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        u128::checked_add(*self, *o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        u128::checked_mul(*self, *o)
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Count for BigUint {
    fn c_zero() -> Self {
        Zero::zero()
    }
    fn c_one() -> Self {
        One::one()
    }
    fn from_usize(x: usize) -> Self {
        BigUint::from(x)
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn into_big(self) -> BigUint {
        self
    }
}

enum Abort {
    Overflow,
    Budget,
}

/// Pattern relabelled so that vertex `i` is the `i`-th vertex of the search order.
struct OrderedPattern {
    n: usize,
    /// `order[i]` = original label of internal vertex `i`.
    order: Vec<usize>,
    out: Vec<BitSet>,
    inn: Vec<BitSet>,
    nbrs: Vec<BitSet>,
}

impl OrderedPattern {
    fn new(p: &Digraph, pinned: &[usize]) -> Self {
        let n = p.n();
        let mut is_pinned = vec![false; n];
        for &v in pinned {
            is_pinned[v] = true;
        }
        let mut rest: Vec<usize> = (0..n).filter(|&v| !is_pinned[v]).collect();
        rest.sort_by_key(|&v| (std::cmp::Reverse(p.out_degree(v) + p.in_degree(v)), v));
        let mut order: Vec<usize> = pinned.to_vec();
        order.extend(rest);
        let mut rank = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut out = vec![BitSet::new(n); n];
        let mut inn = vec![BitSet::new(n); n];
        for (u, v) in p.arcs() {
            out[rank[u]].insert(rank[v]);
            inn[rank[v]].insert(rank[u]);
        }
        let nbrs = (0..n)
            .map(|i| {
                let mut s = out[i].clone();
                s.union_with(&inn[i]);
                s
            })
            .collect();
        OrderedPattern { n, order, out, inn, nbrs }
    }

    /// Connected components of the subgraph induced on `set`, ordered by first vertex.
    fn components(&self, set: &BitSet) -> Vec<BitSet> {
        let mut remaining = set.clone();
        let mut comps = Vec::new();
        while let Some(start) = remaining.first() {
            let mut comp = BitSet::new(self.n);
            let mut frontier = vec![start];
            comp.insert(start);
            remaining.remove(start);
            while let Some(u) = frontier.pop() {
                for v in self.nbrs[u].iter() {
                    if remaining.contains(v) {
                        remaining.remove(v);
                        comp.insert(v);
                        frontier.push(v);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }
}

/// Static data of a component of unplaced vertices.
struct CompInfo {
    /// First vertex in the order; placed next.
    v: usize,
    size: usize,
    /// Components left after placing `v`.
    subs: Vec<BitSet>,
    /// Placed vertices adjacent to the component, if few enough to memoise.
    boundary: Option<Vec<usize>>,
}

struct Counter<'a, C: Count> {
    p: &'a OrderedPattern,
    host: &'a Digraph,
    img: Vec<usize>,
    assigned: BitSet,
    /// For each unplaced vertex, the host vertices compatible with its placed neighbours.
    dom: Vec<BitSet>,
    undo: Vec<(usize, BitSet)>,
    spare: Vec<BitSet>,
    info: HashMap<Vec<u64>, Rc<CompInfo>>,
    memo: HashMap<(Vec<u64>, Vec<u32>), C>,
    cand_pool: Vec<BitSet>,
    nodes: u64,
    budget: Option<u64>,
}

impl<'a, C: Count> Counter<'a, C> {
    fn new(p: &'a OrderedPattern, host: &'a Digraph, budget: Option<u64>) -> Self {
        Counter {
            p,
            host,
            img: vec![usize::MAX; p.n],
            assigned: BitSet::new(p.n),
            dom: vec![BitSet::full(host.n()); p.n],
            undo: Vec::new(),
            spare: Vec::new(),
            info: HashMap::new(),
            memo: HashMap::new(),
            cand_pool: (0..=p.n).map(|_| BitSet::new(host.n())).collect(),
            nodes: 0,
            budget,
        }
    }

    fn pin(&mut self, v: usize, x: usize) {
        self.place(v, x);
    }

    /// Forgets every placement and memo entry, keeping the component cache and buffers.
    fn reset(&mut self, full: &BitSet) {
        self.undo.clear();
        for v in 0..self.p.n {
            self.img[v] = usize::MAX;
            self.dom[v].copy_from(full);
        }
        self.assigned.clear();
        self.memo.clear();
        self.nodes = 0;
    }

    /// Maps `v` to `x` and narrows the domains of its unplaced neighbours.
    /// Returns false if some domain becomes empty; the caller must still [`Self::unplace`].
    fn place(&mut self, v: usize, x: usize) -> bool {
        self.img[v] = x;
        self.assigned.insert(v);
        let mut ok = true;
        for u in self.p.nbrs[v].iter() {
            if self.assigned.contains(u) {
                continue;
            }
            let mut saved = self.spare.pop().unwrap_or_else(|| BitSet::new(self.host.n()));
            saved.copy_from(&self.dom[u]);
            self.undo.push((u, saved));
            if self.p.out[v].contains(u) {
                self.dom[u].intersect_with(self.host.out_neighbors(x));
            }
            if self.p.inn[v].contains(u) {
                self.dom[u].intersect_with(self.host.in_neighbors(x));
            }
            if self.dom[u].is_empty() {
                ok = false;
            }
        }
        ok
    }

    fn unplace(&mut self, v: usize, mark: usize) {
        while self.undo.len() > mark {
            let (u, mut saved) = self.undo.pop().expect("undo entry");
            std::mem::swap(&mut self.dom[u], &mut saved);
            self.spare.push(saved);
        }
        self.assigned.remove(v);
        self.img[v] = usize::MAX;
    }

    fn comp_info(&mut self, comp: &BitSet) -> Rc<CompInfo> {
        if let Some(i) = self.info.get(comp.words()) {
            return i.clone();
        }
        let v = comp.first().expect("nonempty component");
        let mut rest = comp.clone();
        rest.remove(v);
        let subs = self.p.components(&rest);
        let mut around = BitSet::new(self.p.n);
        for u in comp.iter() {
            around.union_with(&self.p.nbrs[u]);
        }
        around.difference_with(comp);
        let boundary = if around.len() <= MEMO_MAX_BOUNDARY {
            Some(around.iter().collect())
        } else {
            None
        };
        let info = Rc::new(CompInfo { v, size: comp.len(), subs, boundary });
        self.info.insert(comp.words().to_vec(), info.clone());
        info
    }

    /// Candidates for `v` given the current partial map, written into `out`.
    fn candidates(&self, v: usize, out: &mut BitSet) {
        let mut first = true;
        for u in self.p.nbrs[v].iter() {
            if !self.assigned.contains(u) {
                continue;
            }
            let x = self.img[u];
            if self.p.out[u].contains(v) {
                if first {
                    out.copy_from(self.host.out_neighbors(x));
                    first = false;
                } else {
                    out.intersect_with(self.host.out_neighbors(x));
                }
            }
            if self.p.inn[u].contains(v) {
                if first {
                    out.copy_from(self.host.in_neighbors(x));
                    first = false;
                } else {
                    out.intersect_with(self.host.in_neighbors(x));
                }
            }
        }
        if first {
            out.copy_from(&BitSet::full(self.host.n()));
        }
    }

    fn count_component(&mut self, comp: &BitSet) -> std::result::Result<C, Abort> {
        let info = self.comp_info(comp);
        let v = info.v;
        if info.size == 1 {
            return Ok(C::from_usize(self.dom[v].len()));
        }
        let key = info.boundary.as_ref().map(|b| {
            let imgs: Vec<u32> = b.iter().map(|&u| self.img[u] as u32).collect();
            (comp.words().to_vec(), imgs)
        });
        if let Some(k) = &key {
            if let Some(c) = self.memo.get(k) {
                return Ok(c.clone());
            }
        }
        let depth = self.assigned.len();
        let mut cand = std::mem::replace(&mut self.cand_pool[depth], BitSet::new(0));
        cand.copy_from(&self.dom[v]);
        let mut total = C::c_zero();
        let mut result = Ok(());
        for x in cand.iter() {
            self.nodes += 1;
            if let Some(b) = self.budget {
                if self.nodes > b {
                    result = Err(Abort::Budget);
                    break;
                }
            }
            let mark = self.undo.len();
            let mut prod = C::c_zero();
            if self.place(v, x) {
                prod = C::c_one();
                for sub in &info.subs {
                    match self.count_component(sub) {
                        Ok(c) => {
                            if c.c_is_zero() {
                                prod = C::c_zero();
                                break;
                            }
                            match prod.checked_mul(&c) {
                                Some(p) => prod = p,
                                None => {
                                    result = Err(Abort::Overflow);
                                    break;
                                }
                            }
                        }
                        Err(e) => {
                            result = Err(e);
                            break;
                        }
                    }
                }
            }
            self.unplace(v, mark);
            if result.is_err() {
                break;
            }
            match total.checked_add(&prod) {
                Some(t) => total = t,
                None => {
                    result = Err(Abort::Overflow);
                    break;
                }
            }
        }
        self.cand_pool[depth] = cand;
        result?;
        if let Some(k) = key {
            self.memo.insert(k, total.clone());
        }
        Ok(total)
    }

    fn count_all(&mut self) -> std::result::Result<C, Abort> {
        let mut rest = BitSet::full(self.p.n);
        rest.difference_with(&self.assigned);
        let mut prod = C::c_one();
        for comp in self.p.components(&rest) {
            let c = self.count_component(&comp)?;
            if c.c_is_zero() {
                return Ok(C::c_zero());
            }
            prod = prod.checked_mul(&c).ok_or(Abort::Overflow)?;
        }
        Ok(prod)
    }
}

fn check_pins(pattern: &Digraph, host: &Digraph, pins: &[(usize, usize)]) -> Result<bool> {
    for &(v, x) in pins {
        if v >= pattern.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: pattern.n() });
        }
        if x >= host.n() {
            return Err(Error::VertexOutOfRange { vertex: x, n: host.n() });
        }
    }
    for (i, &(u, x)) in pins.iter().enumerate() {
        for &(v, y) in &pins[i + 1..] {
            if u == v {
                if x != y {
                    return Ok(false);
                }
                continue;
            }
            if pattern.has_arc(u, v) && !host.has_arc(x, y) {
                return Ok(false);
            }
            if pattern.has_arc(v, u) && !host.has_arc(y, x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn dedup_pins(pins: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut seen = Vec::new();
    for &(v, x) in pins {
        if !seen.iter().any(|&(u, _)| u == v) {
            seen.push((v, x));
        }
    }
    seen
}

fn run_count<C: Count>(
    p: &OrderedPattern,
    host: &Digraph,
    pins: &[(usize, usize)],
    budget: Option<u64>,
) -> std::result::Result<C, Abort> {
    let mut counter = Counter::<C>::new(p, host, budget);
    for (i, &(_, x)) in pins.iter().enumerate() {
        counter.pin(i, x);
    }
    counter.count_all()
}

/// Number of homomorphisms `pattern -> host` that send each pinned vertex `v` to `x`.
///
/// `budget` caps the number of search nodes.
pub fn count_hom_pinned(
    pattern: &Digraph,
    host: &Digraph,
    pins: &[(usize, usize)],
    budget: Option<u64>,
) -> Result<HomCount> {
    if !check_pins(pattern, host, pins)? {
        return Ok(HomCount(BigUint::zero()));
    }
    let pins = dedup_pins(pins);
    let pinned: Vec<usize> = pins.iter().map(|&(v, _)| v).collect();
    let p = OrderedPattern::new(pattern, &pinned);
    let exhausted = |_| Error::BudgetExceeded { budget: budget.unwrap_or(u64::MAX) };
    match run_count::<u128>(&p, host, &pins, budget) {
        Ok(c) => Ok(HomCount(c.into_big())),
        Err(Abort::Budget) => Err(exhausted(())),
        Err(Abort::Overflow) => run_count::<BigUint>(&p, host, &pins, budget)
            .map(HomCount)
            .map_err(|_| exhausted(())),
    }
}

/// `hom_{x,y}(F, T)` for each listed pair, in order.
///
/// One search state is reused per worker, which matters when the pairs run into millions.
pub fn count_hom_rooted_pairs(
    f: &RootedDigraph,
    host: &Digraph,
    pairs: &[(usize, usize)],
    budget: Option<u64>,
) -> Result<Vec<BigUint>> {
    let (z, w) = f.roots();
    let pattern = f.graph();
    for &(x, y) in pairs {
        for v in [x, y] {
            if v >= host.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: host.n() });
            }
        }
    }
    let p = OrderedPattern::new(pattern, &[z, w]);
    let full = BitSet::full(host.n());
    let chunk = (pairs.len() / (4 * rayon::current_num_threads())).clamp(1, 4096);
    let exhausted = || Error::BudgetExceeded { budget: budget.unwrap_or(u64::MAX) };
    let per_chunk: Vec<Result<Vec<BigUint>>> = pairs
        .par_chunks(chunk)
        .map(|ps| {
            let mut counter = Counter::<u128>::new(&p, host, budget);
            let mut out = Vec::with_capacity(ps.len());
            for &(x, y) in ps {
                if !check_pins(pattern, host, &[(z, x), (w, y)])? {
                    out.push(BigUint::zero());
                    continue;
                }
                counter.reset(&full);
                counter.pin(0, x);
                counter.pin(1, y);
                match counter.count_all() {
                    Ok(c) => out.push(BigUint::from(c)),
                    Err(Abort::Budget) => return Err(exhausted()),
                    Err(Abort::Overflow) => {
                        let c = run_count::<BigUint>(&p, host, &[(z, x), (w, y)], budget)
                            .map_err(|_| exhausted())?;
                        out.push(c);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::with_capacity(pairs.len());
    for r in per_chunk {
        all.extend(r?);
    }
    Ok(all)
}

/// Exact `hom(F, T)`; the empty pattern has one homomorphism.
pub fn count_hom(pattern: &Digraph, host: &Digraph) -> HomCount {
    count_hom_pinned(pattern, host, &[], None).expect("unbudgeted count")
}

/// As [`count_hom`], with the search forest split by the images of the first
/// two pattern vertices and the subtrees counted on the rayon pool.
pub fn count_hom_par(pattern: &Digraph, host: &Digraph) -> HomCount {
    if pattern.n() < 2 || host.n() == 0 {
        return count_hom(pattern, host);
    }
    let p = OrderedPattern::new(pattern, &[]);
    let first = p.order[0];
    let second = p.order[1];
    let tasks: Vec<(usize, usize)> = (0..host.n())
        .flat_map(|x| (0..host.n()).map(move |y| (x, y)))
        .collect();
    let total: BigUint = tasks
        .par_iter()
        .map(|&(x, y)| {
            count_hom_pinned(pattern, host, &[(first, x), (second, y)], None)
                .expect("unbudgeted count")
                .0
        })
        .sum();
    HomCount(total)
}

/// Exhaustive enumeration of all `|V(T)|^|V(F)|` maps; the oracle for [`count_hom`].
pub fn count_hom_bruteforce(pattern: &Digraph, host: &Digraph, budget: u64) -> Result<HomCount> {
    count_hom_pinned_bruteforce(pattern, host, &[], budget)
}

/// As [`count_hom_bruteforce`], keeping only maps that send each pinned `v` to `x`.
pub fn count_hom_pinned_bruteforce(
    pattern: &Digraph,
    host: &Digraph,
    pins: &[(usize, usize)],
    budget: u64,
) -> Result<HomCount> {
    let k = pattern.n();
    let n = host.n();
    let total = (n as u128).checked_pow(k as u32);
    match total {
        Some(t) if t <= budget as u128 => {}
        _ => return Err(Error::BudgetExceeded { budget }),
    }
    for &(v, x) in pins {
        if v >= k {
            return Err(Error::VertexOutOfRange { vertex: v, n: k });
        }
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if k == 0 {
        return Ok(HomCount::from(1));
    }
    if n == 0 {
        return Ok(HomCount::from(0));
    }
    let arcs: Vec<(usize, usize)> = pattern.arcs().collect();
    let mut map = vec![0usize; k];
    let mut count: u64 = 0;
    loop {
        if pins.iter().all(|&(v, x)| map[v] == x) && arcs.iter().all(|&(u, v)| host.has_arc(map[u], map[v])) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == k {
                return Ok(HomCount::from(count));
            }
            map[i] += 1;
            if map[i] < n {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

/// `hom_{x,y}(F, T)`: homomorphisms with `z -> x` and `w -> y`.
pub fn count_hom_rooted(f: &RootedDigraph, host: &Digraph, x: usize, y: usize) -> Result<HomCount> {
    count_hom_pinned(f.graph(), host, &[(f.z(), x), (f.w(), y)], None)
}

fn pow_big(base: usize, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

/// `t(F, T) = hom(F, T) / |V(T)|^|V(F)|`.
pub fn density(pattern: &Digraph, host: &Digraph) -> Result<Density> {
    if host.n() == 0 {
        return Err(Error::EmptyHost);
    }
    let hom = count_hom(pattern, host);
    Ok(Density(BigRational::new(
        hom.0.into(),
        pow_big(host.n(), pattern.n()).into(),
    )))
}

/// `t_{x,y}(F, T) = hom_{x,y}(F, T) / |V(T)|^(|V(F)|-2)`.
pub fn conditional_density(
    f: &RootedDigraph,
    host: &Digraph,
    x: usize,
    y: usize,
) -> Result<Density> {
    if host.n() == 0 {
        return Err(Error::EmptyHost);
    }
    let hom = count_hom_rooted(f, host, x, y)?;
    Ok(Density(BigRational::new(
        hom.0.into(),
        pow_big(host.n(), f.graph().n() - 2).into(),
    )))
}

/// Streams every homomorphism (as a map indexed by pattern vertex) to `visit`.
///
/// Returns the number found; more than `cap` is an error.
pub fn enumerate_homs<V>(
    pattern: &Digraph,
    host: &Digraph,
    pins: &[(usize, usize)],
    cap: usize,
    mut visit: V,
) -> Result<usize>
where
    V: FnMut(&[usize]),
{
    if !check_pins(pattern, host, pins)? {
        return Ok(0);
    }
    let pins = dedup_pins(pins);
    let pinned: Vec<usize> = pins.iter().map(|&(v, _)| v).collect();
    let p = OrderedPattern::new(pattern, &pinned);
    let mut counter = Counter::<u128>::new(&p, host, None);
    for (i, &(_, x)) in pins.iter().enumerate() {
        counter.pin(i, x);
    }
    let mut found = 0usize;
    let mut map = vec![0usize; pattern.n()];
    let start = pins.len();
    let mut cands: Vec<BitSet> = (0..=p.n).map(|_| BitSet::new(host.n())).collect();
    fn dfs<V: FnMut(&[usize])>(
        c: &mut Counter<'_, u128>,
        i: usize,
        cands: &mut [BitSet],
        map: &mut [usize],
        found: &mut usize,
        cap: usize,
        visit: &mut V,
    ) -> Result<()> {
        if i == c.p.n {
            *found += 1;
            if *found > cap {
                return Err(Error::CapHit { cap });
            }
            for (internal, &orig) in c.p.order.iter().enumerate() {
                map[orig] = c.img[internal];
            }
            visit(map);
            return Ok(());
        }
        let mut cand = std::mem::replace(&mut cands[i], BitSet::new(0));
        c.candidates(i, &mut cand);
        let mut res = Ok(());
        for x in cand.iter() {
            c.img[i] = x;
            c.assigned.insert(i);
            res = dfs(c, i + 1, cands, map, found, cap, visit);
            c.assigned.remove(i);
            c.img[i] = usize::MAX;
            if res.is_err() {
                break;
            }
        }
        cands[i] = cand;
        res
    }
    dfs(&mut counter, start, &mut cands, &mut map, &mut found, cap, &mut visit)?;
    Ok(found)
}

/// Weakly connected components of `g` as vertex lists (ascending).
pub fn weak_components(g: &Digraph) -> Vec<Vec<usize>> {
    let p = OrderedPattern::new(g, &[]);
    let mut comps: Vec<Vec<usize>> = p
        .components(&BitSet::full(g.n()))
        .into_iter()
        .map(|c| {
            let mut vs: Vec<usize> = c.iter().map(|i| p.order[i]).collect();
            vs.sort_unstable();
            vs
        })
        .collect();
    comps.sort();
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{make_tournament, random_tournament, transitive_tournament};

    fn c3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn arc() -> Digraph {
        Digraph::from_arcs(2, [(0, 1)]).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn count_examples() {
        let t = random_tournament(6, 1);
        assert_eq!(count_hom(&Digraph::empty(1), &t), HomCount::from(6));
        assert_eq!(count_hom(&arc(), &t), HomCount::from(15));
        assert_eq!(count_hom(&c3(), &transitive_tournament(4)), HomCount::from(0));
        assert_eq!(count_hom(&c3(), &c3()), HomCount::from(3));
        assert_eq!(count_hom(&Digraph::empty(0), &t), HomCount::from(1));
    }

    #[test]
    fn bruteforce_examples() {
        let t = random_tournament(5, 2);
        let b = BRUTE_FORCE_BUDGET;
        assert_eq!(count_hom_bruteforce(&Digraph::empty(2), &t, b).unwrap(), HomCount::from(25));
        let arc_plus = Digraph::from_arcs(3, [(0, 1)]).unwrap();
        assert_eq!(
            count_hom_bruteforce(&arc_plus, &t, b).unwrap(),
            HomCount::from(25 * 4 / 2)
        );
        assert_eq!(count_hom_bruteforce(&c3(), &c3(), b).unwrap(), HomCount::from(3));
        assert!(count_hom_bruteforce(&Digraph::empty(30), &t, b).is_err());
    }

    #[test]
    fn rooted_examples() {
        // roots z=0, w=1, path z -> v -> w with v = 2
        let f = RootedDigraph::new(Digraph::from_arcs(3, [(0, 2), (2, 1)]).unwrap(), 0, 1).unwrap();
        let t = c3();
        // in 0 -> 1 -> 2 -> 0 only the pair (1, 0) has a middle vertex (v = 2)
        for x in 0..3 {
            for y in 0..3 {
                let want = (0..3).filter(|&v| t.has_arc(x, v) && t.has_arc(v, y)).count() as u64;
                assert_eq!(count_hom_rooted(&f, &t, x, y).unwrap(), HomCount::from(want));
            }
        }
        assert_eq!(count_hom_rooted(&f, &t, 1, 0).unwrap(), HomCount::from(1));
        assert_eq!(count_hom_rooted(&f, &t, 0, 1).unwrap(), HomCount::from(0));
        assert_eq!(count_hom_rooted(&f, &t, 0, 0).unwrap(), HomCount::from(0));
        let bare = RootedDigraph::new(Digraph::empty(2), 0, 1).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(count_hom_rooted(&bare, &t, x, y).unwrap(), HomCount::from(1));
            }
        }
        assert_eq!(conditional_density(&f, &t, 1, 0).unwrap().0, q(1, 3));
    }

    #[test]
    fn density_examples() {
        let t = random_tournament(7, 4);
        assert_eq!(density(&arc(), &t).unwrap().0, q(6, 14));
        assert!(density(&c3(), &transitive_tournament(5)).unwrap().0.is_zero());
        assert_eq!(density(&c3(), &c3()).unwrap().0, q(1, 9));
        assert_eq!(density(&arc(), &Digraph::empty(0)).unwrap_err(), Error::EmptyHost);
    }

    #[test]
    fn pinned_arc_between_roots_is_checked() {
        let f = RootedDigraph::new(arc(), 0, 1).unwrap();
        let t = make_tournament(2, [(1, 0)]).unwrap();
        assert!(count_hom_rooted(&f, &t, 0, 1).unwrap().is_zero());
        assert_eq!(count_hom_rooted(&f, &t, 1, 0).unwrap(), HomCount::from(1));
        assert!(count_hom_rooted(&f, &t, 0, 0).unwrap().is_zero());
    }

    #[test]
    fn overflow_falls_back_to_bignum() {
        // 10^40 exceeds u128
        let t = random_tournament(10, 5);
        let hom = count_hom(&Digraph::empty(40), &t);
        assert_eq!(hom.0, pow_big(10, 40));
    }

    #[test]
    fn enumeration_visits_every_map() {
        let t = c3();
        let mut maps = Vec::new();
        let n = enumerate_homs(&c3(), &t, &[], 10, |m| maps.push(m.to_vec())).unwrap();
        assert_eq!(n, 3);
        maps.sort();
        assert_eq!(maps, vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
        assert_eq!(
            enumerate_homs(&c3(), &t, &[], 2, |_| {}).unwrap_err(),
            Error::CapHit { cap: 2 }
        );
    }

    #[test]
    fn parallel_split_matches() {
        let t = random_tournament(7, 9);
        let p = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert_eq!(count_hom_par(&p, &t), count_hom(&p, &t));
    }

    #[test]
    fn budget_is_enforced() {
        let t = random_tournament(8, 1);
        let p = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            count_hom_pinned(&p, &t, &[], Some(3)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn components_of_union() {
        let g = arc().disjoint_union(&c3());
        assert_eq!(weak_components(&g), vec![vec![0, 1], vec![2, 3, 4]]);
    }
}
