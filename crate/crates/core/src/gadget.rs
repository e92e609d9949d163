//! Gadget digraphs: the base tournament F₀, the rooted gadgets F_i, their
//! symmetrisations F†_i and necklaces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::digraph::{random_tournament_with, Digraph, RootedDigraph, Tournament};
use crate::error::{Error, Result};

/// Outcome of a structural check: either it holds, or a witness of failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check<W> {
    Holds,
    Violated(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Holds => None,
            Check::Violated(w) => Some(w),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWitness {
    pub vertex: usize,
    pub out_degree: usize,
    pub in_degree: usize,
}

/// Two disjoint vertex sets with every arc pointing from `from` to `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biclique {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
}

/// Degree bound: every in- and out-degree is at most `bound`.
pub fn check_condition_i(t: &Tournament, bound: usize) -> Check<DegreeWitness> {
    for v in 0..t.n() {
        let (o, i) = (t.out_degree(v), t.in_degree(v));
        if o > bound || i > bound {
            return Check::Violated(DegreeWitness { vertex: v, out_degree: o, in_degree: i });
        }
    }
    Check::Holds
}

/// No one-way `a × a` biclique.
pub fn check_condition_ii(t: &Tournament, a: usize, budget: Option<u64>) -> Result<Check<Biclique>> {
    Ok(match find_one_way_biclique(t, a, budget)? {
        Some(b) => Check::Violated(b),
        None => Check::Holds,
    })
}

/// Every set of at least `t3` vertices spans a directed cycle.
///
/// The witness of a violation is a transitive set of size `t3`, listed from source to sink.
pub fn check_condition_iii(t: &Tournament, t3: usize, budget: Option<u64>) -> Result<Check<Vec<usize>>> {
    let mut s = TransitiveSearch::new(t, Some(t3), budget);
    s.run()?;
    Ok(if s.best.len() >= t3 {
        Check::Violated(s.best[..t3].to_vec())
    } else {
        Check::Holds
    })
}

/// Exact search for disjoint `A₁, A₂` of size `a` with every arc `A₁ → A₂`.
pub fn find_one_way_biclique(t: &Tournament, a: usize, budget: Option<u64>) -> Result<Option<Biclique>> {
    if a == 0 {
        return Ok(Some(Biclique { from: vec![], to: vec![] }));
    }
    let n = t.n();
    if 2 * a > n {
        return Ok(None);
    }
    // A₁ grows in ascending order; `common` is the common out-neighbourhood so far.
    struct St<'a> {
        t: &'a Tournament,
        a: usize,
        chosen: Vec<usize>,
        nodes: u64,
        budget: Option<u64>,
    }
    fn rec(st: &mut St, start: usize, common: &BitSet) -> Result<Option<Biclique>> {
        st.nodes += 1;
        if let Some(b) = st.budget {
            if st.nodes > b {
                return Err(Error::BudgetExceeded { budget: b });
            }
        }
        if st.chosen.len() == st.a {
            let to: Vec<usize> = common.iter().take(st.a).collect();
            return Ok(Some(Biclique { from: st.chosen.clone(), to }));
        }
        let need = st.a - st.chosen.len();
        let n = st.t.n();
        for v in start..n {
            if n - v < need {
                break;
            }
            let mut next = common.clone();
            next.intersect_with(st.t.out_neighbors(v));
            if next.len() < st.a {
                continue;
            }
            st.chosen.push(v);
            let found = rec(st, v + 1, &next)?;
            st.chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
    let mut st = St { t, a, chosen: Vec::with_capacity(a), nodes: 0, budget };
    rec(&mut st, 0, &BitSet::full(n))
}

/// Largest one-way biclique side length.
pub fn largest_one_way_biclique(t: &Tournament, budget: Option<u64>) -> Result<usize> {
    let mut a = 0;
    while find_one_way_biclique(t, a + 1, budget)?.is_some() {
        a += 1;
    }
    Ok(a)
}

/// A maximum transitive subtournament, listed from source to sink.
pub fn max_transitive_subtournament(t: &Tournament, budget: Option<u64>) -> Result<Vec<usize>> {
    let mut s = TransitiveSearch::new(t, None, budget);
    s.run()?;
    Ok(s.best)
}

// A transitive set is a source v followed by a transitive set inside out(v).
struct TransitiveSearch<'a> {
    t: &'a Tournament,
    stop_at: Option<usize>,
    budget: Option<u64>,
    nodes: u64,
    chain: Vec<usize>,
    best: Vec<usize>,
}

impl<'a> TransitiveSearch<'a> {
    fn new(t: &'a Tournament, stop_at: Option<usize>, budget: Option<u64>) -> Self {
        TransitiveSearch { t, stop_at, budget, nodes: 0, chain: Vec::new(), best: Vec::new() }
    }

    fn done(&self) -> bool {
        self.stop_at.is_some_and(|k| self.best.len() >= k)
    }

    fn run(&mut self) -> Result<()> {
        let all = BitSet::full(self.t.n());
        self.rec(&all)
    }

    fn rec(&mut self, cand: &BitSet) -> Result<()> {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(Error::BudgetExceeded { budget: b });
            }
        }
        if self.chain.len() > self.best.len() {
            self.best = self.chain.clone();
        }
        if self.done() || self.chain.len() + cand.len() <= self.best.len() {
            return Ok(());
        }
        let mut order: Vec<(usize, usize)> = cand
            .iter()
            .map(|v| (cand.intersection_len(self.t.out_neighbors(v)), v))
            .collect();
        order.sort_unstable_by(|a, b| b.cmp(a));
        for (size, v) in order {
            if self.chain.len() + 1 + size <= self.best.len() {
                continue;
            }
            let mut next = cand.clone();
            next.intersect_with(self.t.out_neighbors(v));
            self.chain.push(v);
            self.rec(&next)?;
            self.chain.pop();
            if self.done() {
                break;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct F0Report {
    pub n: usize,
    pub a: usize,
    pub t3: usize,
    pub max_out_degree: usize,
    pub max_in_degree: usize,
    pub largest_one_way_biclique: usize,
    pub largest_transitive: usize,
    pub tries: usize,
}

/// A tournament satisfying the degree, biclique and cycle conditions.
#[derive(Clone, Debug)]
pub struct BaseTournamentF0 {
    pub tournament: Tournament,
    pub report: F0Report,
}

impl BaseTournamentF0 {
    pub fn n(&self) -> usize {
        self.tournament.n()
    }

    /// Validates an existing tournament against all three conditions.
    pub fn from_tournament(t: Tournament, a: usize, t3: usize) -> Result<Self> {
        let report = measure_f0(&t, a, t3, 1)?;
        let f = BaseTournamentF0 { tournament: t, report };
        let v = f.violations();
        if v.is_empty() {
            Ok(f)
        } else {
            Err(Error::Invalid(v.join("; ")))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        violations(&self.report)
    }
}

pub fn condition_i_bound(n: usize) -> usize {
    2 * n / 3
}

/// `⌈√n⌉`, the default biclique side.
pub fn default_a(n: usize) -> usize {
    let mut a = 0;
    while a * a < n {
        a += 1;
    }
    a
}

/// Smallest `k ≥ 3` for which a uniform random tournament on `n` vertices has
/// fewer than one transitive `k`-set in expectation: `C(n,k)·k!/2^C(k,2) < 1`.
pub fn default_t3(n: usize) -> usize {
    let mut k = 3usize;
    loop {
        if k > n {
            return n + 1;
        }
        // log2 of the expectation
        let mut l = 0.0f64;
        for j in 0..k {
            l += ((n - j) as f64).log2();
        }
        l -= (k * (k - 1) / 2) as f64;
        if l < 0.0 {
            return k;
        }
        k += 1;
    }
}

fn measure_f0(t: &Tournament, a: usize, t3: usize, tries: usize) -> Result<F0Report> {
    Ok(F0Report {
        n: t.n(),
        a,
        t3,
        max_out_degree: t.max_out_degree(),
        max_in_degree: t.max_in_degree(),
        largest_one_way_biclique: largest_one_way_biclique(t, None)?,
        largest_transitive: max_transitive_subtournament(t, None)?.len(),
        tries,
    })
}

fn violations(r: &F0Report) -> Vec<String> {
    let mut v = Vec::new();
    let bound = condition_i_bound(r.n);
    if r.max_out_degree.max(r.max_in_degree) > bound {
        v.push(format!(
            "degree {} exceeds {bound}",
            r.max_out_degree.max(r.max_in_degree)
        ));
    }
    if r.largest_one_way_biclique >= r.a {
        v.push(format!("one-way {0}x{0} biclique present", r.a));
    }
    if r.largest_transitive >= r.t3 {
        v.push(format!("transitive set of size {} present", r.largest_transitive));
    }
    v
}

/// Draws random tournaments until one satisfies all three conditions.
pub fn sample_f0(n: usize, a: usize, t3: usize, seed: u64, max_tries: usize) -> Result<BaseTournamentF0> {
    if n < 3 || a < 1 || t3 < 3 {
        return Err(Error::Invalid(format!("need n >= 3, a >= 1, t3 >= 3 (got {n}, {a}, {t3})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = condition_i_bound(n);
    let mut fails = [0usize; 3];
    for tries in 1..=max_tries {
        let t = random_tournament_with(n, &mut rng);
        // cheapest check first
        if !check_condition_i(&t, bound).holds() {
            fails[0] += 1;
            continue;
        }
        if !check_condition_ii(&t, a, None)?.holds() {
            fails[1] += 1;
            continue;
        }
        if !check_condition_iii(&t, t3, None)?.holds() {
            fails[2] += 1;
            continue;
        }
        let report = measure_f0(&t, a, t3, tries)?;
        return Ok(BaseTournamentF0 { tournament: t, report });
    }
    Err(Error::SamplingFailed {
        tries: max_tries,
        detail: format!(
            "degree failures {}, biclique failures {}, transitive-set failures {}",
            fails[0], fails[1], fails[2]
        ),
    })
}

/// The `s` largest integers in `(2m/3 + 2, 5m/6)` with consecutive gaps of at least 2, descending.
pub fn make_k_sequence(m: usize, s: usize) -> Result<Vec<usize>> {
    match k_sequence(m, s) {
        Some(k) => Ok(k),
        None => {
            let mut min_m = m + 1;
            while k_sequence(min_m, s).is_none() {
                min_m += 1;
            }
            Err(Error::Invalid(format!(
                "k-interval for m={m} cannot hold {s} values with gaps >= 2; smallest feasible m is {min_m}"
            )))
        }
    }
}

fn k_sequence(m: usize, s: usize) -> Option<Vec<usize>> {
    // strictly inside (2m/3 + 2, 5m/6)
    let lo = (2 * m + 6) / 3 + 1;
    let hi = (5 * m).checked_sub(1)? / 6;
    let mut out = Vec::with_capacity(s);
    let mut k = hi;
    for _ in 0..s {
        if k < lo || k == 0 {
            return None;
        }
        out.push(k);
        k = k.checked_sub(2)?;
    }
    Some(out)
}

/// `F_k`: `F₀` on `0..m`, roots `z = m`, `w = m + 1`; `z → v → w` for `v < k`, `w → v → z` otherwise.
pub fn build_f_i(f0: &Tournament, k: usize) -> Result<RootedDigraph> {
    let m = f0.n();
    if k == 0 || k >= m {
        return Err(Error::Invalid(format!("k = {k} must lie in 1..{m}")));
    }
    let (z, w) = (m, m + 1);
    let mut g = Digraph::empty(m + 2);
    for (u, v) in f0.arcs() {
        g.add_arc(u, v)?;
    }
    for v in 0..m {
        if v < k {
            g.add_arc(z, v)?;
            g.add_arc(v, w)?;
        } else {
            g.add_arc(v, z)?;
            g.add_arc(w, v)?;
        }
    }
    RootedDigraph::new(g, z, w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    RootZ,
    RootW,
    /// Copy of the given non-root vertex in the copy keeping the root order.
    Left(usize),
    /// Copy of the given non-root vertex in the copy with the roots swapped.
    Right(usize),
}

/// Two copies of a rooted digraph glued root-to-swapped-root, with vertex roles.
///
/// Layout for `q` non-root vertices: left copy `0..q`, right copy `q..2q`, `z = 2q`, `w = 2q + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetrized {
    pub rooted: RootedDigraph,
    pub roles: Vec<Role>,
}

impl Symmetrized {
    pub fn q(&self) -> usize {
        (self.rooted.graph().n() - 2) / 2
    }

    pub fn left(&self) -> std::ops::Range<usize> {
        0..self.q()
    }

    pub fn right(&self) -> std::ops::Range<usize> {
        self.q()..2 * self.q()
    }
}

pub fn build_f_dagger(f: &RootedDigraph) -> Symmetrized {
    let g = f.graph();
    let (fz, fw) = f.roots();
    let inner: Vec<usize> = (0..g.n()).filter(|&v| v != fz && v != fw).collect();
    let q = inner.len();
    let (z, w) = (2 * q, 2 * q + 1);
    let mut pos = vec![0usize; g.n()];
    for (j, &v) in inner.iter().enumerate() {
        pos[v] = j;
    }
    let map_left = |v: usize| if v == fz { z } else if v == fw { w } else { pos[v] };
    let map_right = |v: usize| if v == fz { w } else if v == fw { z } else { q + pos[v] };
    let mut out = Digraph::empty(2 * q + 2);
    for (u, v) in g.arcs() {
        out.add_arc(map_left(u), map_left(v)).expect("valid");
        out.add_arc(map_right(u), map_right(v)).expect("valid");
    }
    let mut roles = Vec::with_capacity(2 * q + 2);
    roles.extend(inner.iter().map(|&v| Role::Left(v)));
    roles.extend(inner.iter().map(|&v| Role::Right(v)));
    roles.push(Role::RootZ);
    roles.push(Role::RootW);
    Symmetrized { rooted: RootedDigraph::new(out, z, w).expect("distinct roots"), roles }
}

/// `ℓ` copies of `f` glued in a cycle: copy `i` has `z ↦ x_i`, `w ↦ x_{i+1 mod ℓ}`.
///
/// Beads are vertices `0..ℓ`; copy `i`'s non-root vertices follow in order.
pub fn build_necklace(f: &RootedDigraph, ell: usize) -> Result<Digraph> {
    if ell < 3 {
        return Err(Error::Invalid(format!("necklace length must be at least 3, got {ell}")));
    }
    let g = f.graph();
    let (fz, fw) = f.roots();
    let inner: Vec<usize> = (0..g.n()).filter(|&v| v != fz && v != fw).collect();
    let q = inner.len();
    let mut pos = vec![0usize; g.n()];
    for (j, &v) in inner.iter().enumerate() {
        pos[v] = j;
    }
    let mut out = Digraph::empty(ell * (q + 1));
    for i in 0..ell {
        let map = |v: usize| {
            if v == fz {
                i
            } else if v == fw {
                (i + 1) % ell
            } else {
                ell + i * q + pos[v]
            }
        };
        for (u, v) in g.arcs() {
            out.add_arc(map(u), map(v))?;
        }
    }
    Ok(out)
}

/// F₀ together with the gadgets `F_i`, `F†_i` for a descending `k` sequence.
#[derive(Clone, Debug)]
pub struct GadgetFamily {
    pub f0: Tournament,
    pub k: Vec<usize>,
    pub f: Vec<RootedDigraph>,
    pub fdagger: Vec<Symmetrized>,
}

impl GadgetFamily {
    pub fn new(f0: Tournament, k: Vec<usize>) -> Result<Self> {
        for w in k.windows(2) {
            if w[0] <= w[1] + 1 {
                return Err(Error::Invalid(format!("k sequence {k:?} needs k_i > k_(i+1) + 1")));
            }
        }
        let f = k.iter().map(|&ki| build_f_i(&f0, ki)).collect::<Result<Vec<_>>>()?;
        let fdagger = f.iter().map(build_f_dagger).collect();
        Ok(GadgetFamily { f0, k, f, fdagger })
    }

    /// Family with the largest admissible `k` values.
    pub fn standard(f0: Tournament, s: usize) -> Result<Self> {
        let k = make_k_sequence(f0.n(), s)?;
        GadgetFamily::new(f0, k)
    }

    pub fn m(&self) -> usize {
        self.f0.n()
    }

    pub fn s(&self) -> usize {
        self.k.len()
    }

    pub fn necklace(&self, i: usize, ell: usize) -> Result<Digraph> {
        build_necklace(&self.fdagger[i].rooted, ell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{make_tournament, quadratic_residue_tournament, transitive_tournament};
    use crate::hom::count_hom_rooted;

    fn cyclic_triangle() -> Tournament {
        make_tournament(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn condition_i_examples() {
        let c = check_condition_i(&transitive_tournament(6), 4);
        assert_eq!(c.witness().unwrap().vertex, 0);
        assert_eq!(c.witness().unwrap().out_degree, 5);
        assert!(check_condition_i(&cyclic_triangle(), 1).holds());
        let t = crate::digraph::random_tournament(9, 4);
        assert!(check_condition_i(&t, 8).holds());
    }

    #[test]
    fn condition_ii_examples() {
        let c = check_condition_ii(&transitive_tournament(4), 2, None).unwrap();
        assert_eq!(c.witness().unwrap(), &Biclique { from: vec![0, 1], to: vec![2, 3] });
        assert!(!check_condition_ii(&cyclic_triangle(), 1, None).unwrap().holds());
        assert!(check_condition_ii(&cyclic_triangle(), 2, None).unwrap().holds());
    }

    #[test]
    fn condition_iii_examples() {
        let c = check_condition_iii(&transitive_tournament(8), 5, None).unwrap();
        let w = c.witness().unwrap();
        assert_eq!(w.len(), 5);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        assert!(check_condition_iii(&cyclic_triangle(), 3, None).unwrap().holds());
        // Paley tournament on 7 vertices: largest transitive set has 3 vertices.
        let qr7 = quadratic_residue_tournament(7).unwrap();
        assert_eq!(max_transitive_subtournament(&qr7, None).unwrap().len(), 3);
        assert!(check_condition_iii(&qr7, 4, None).unwrap().holds());
    }

    #[test]
    fn transitive_search_matches_subset_enumeration() {
        for seed in 0..20 {
            let t = crate::digraph::random_tournament(8, seed);
            let mut best = 0;
            for mask in 0u32..(1 << 8) {
                let s: Vec<usize> = (0..8).filter(|&v| mask >> v & 1 == 1).collect();
                if t.induced_subdigraph(&s).unwrap().is_acyclic() {
                    best = best.max(s.len());
                }
            }
            let found = max_transitive_subtournament(&t, None).unwrap();
            assert_eq!(found.len(), best);
            assert!(t.induced_subdigraph(&{
                let mut f = found.clone();
                f.sort();
                f
            })
            .unwrap()
            .is_acyclic());
        }
    }

    #[test]
    fn sampler_small_cases() {
        assert!(matches!(sample_f0(3, 1, 3, 0, 20), Err(Error::SamplingFailed { .. })));
        let f = sample_f0(5, 3, 4, 1, 500).unwrap();
        assert!(f.violations().is_empty());
        // rotational tournament on Z_5: every 4-set spans a cycle
        let rot = crate::digraph::circulant_tournament(5, &[1, 2]).unwrap();
        assert!(check_condition_iii(&rot, 4, None).unwrap().holds());
    }

    #[test]
    fn k_sequences() {
        assert_eq!(make_k_sequence(36, 2).unwrap(), vec![29, 27]);
        let err = make_k_sequence(36, 3).unwrap_err().to_string();
        assert!(err.contains("smallest feasible m is"), "{err}");
        assert_eq!(make_k_sequence(30, 1).unwrap(), vec![24]);
        assert!(make_k_sequence(3, 1).is_err());
    }

    #[test]
    fn toy_f_i() {
        let f = build_f_i(&cyclic_triangle(), 2).unwrap();
        let g = f.graph();
        assert_eq!(g.n(), 5);
        for (u, v) in [(3, 0), (3, 1), (0, 4), (1, 4), (2, 3), (4, 2)] {
            assert!(g.has_arc(u, v), "{u}->{v}");
        }
        assert_eq!(g.out_degree(3), 2);
        assert_eq!(g.in_degree(4), 2);
        for u in 0..5 {
            for v in (u + 1)..5 {
                assert_eq!(g.adjacent(u, v), (u, v) != (3, 4));
            }
        }
    }

    #[test]
    fn dagger_structure_and_symmetry() {
        let f = build_f_i(&cyclic_triangle(), 2).unwrap();
        let d = build_f_dagger(&f);
        assert_eq!(d.rooted.graph().n(), 8);
        assert_eq!(d.roles[6], Role::RootZ);
        assert_eq!(d.roles[3], Role::Right(0));
        for seed in 0..6 {
            let t = crate::digraph::random_tournament(4, seed);
            for x in 0..4 {
                for y in 0..4 {
                    let a = count_hom_rooted(&d.rooted, &t, x, y).unwrap();
                    let b = count_hom_rooted(&d.rooted, &t, y, x).unwrap();
                    assert_eq!(a, b);
                    let p = count_hom_rooted(&f, &t, x, y).unwrap().0
                        * count_hom_rooted(&f, &t, y, x).unwrap().0;
                    assert_eq!(a.0, p);
                }
            }
        }
    }

    #[test]
    fn necklaces() {
        let bare = RootedDigraph::new(Digraph::from_arcs(2, [(0, 1)]).unwrap(), 0, 1).unwrap();
        let c3 = build_necklace(&bare, 3).unwrap();
        assert_eq!(c3, Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap());
        let d = build_f_dagger(&build_f_i(&cyclic_triangle(), 2).unwrap());
        assert_eq!(build_necklace(&d.rooted, 4).unwrap().n(), 28);
        assert!(build_necklace(&bare, 2).is_err());
    }

    #[test]
    fn default_parameters() {
        assert_eq!(default_a(36), 6);
        assert_eq!(default_t3(36), 11);
    }
}
