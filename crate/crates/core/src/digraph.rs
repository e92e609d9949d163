//! Digraphs, tournaments and rooted digraphs on dense vertex indices.

use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A loopless digraph on vertices `0..n` with at most one arc per ordered pair.
///
/// Both orientations of a pair may be present (a 2-cycle); tournaments forbid that.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<BitSet>,
    inn: Vec<BitSet>,
}

impl Digraph {
    /// The empty digraph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            out: vec![BitSet::new(n); n],
            inn: vec![BitSet::new(n); n],
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Digraph::empty(n);
        for (u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.out[u].insert(v);
        self.inn[v].insert(u);
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    /// True when at least one of `(u, v)`, `(v, u)` is an arc.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    #[inline]
    pub fn out_neighbors(&self, v: usize) -> &BitSet {
        &self.out[v]
    }

    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &BitSet {
        &self.inn[v]
    }

    /// Out- and in-neighbours together.
    pub fn neighbors(&self, v: usize) -> BitSet {
        let mut s = self.out[v].clone();
        s.union_with(&self.inn[v]);
        s
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_degree(v)).max().unwrap_or(0)
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(BitSet::len).sum()
    }

    /// Arcs in ascending `(u, v)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |v| (u, v)))
    }

    /// Vertex map `v -> v + n_a` on `b`, arcs of both kept.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let n = self.n + other.n;
        let mut g = Digraph::empty(n);
        for (u, v) in self.arcs() {
            g.add_arc(u, v).expect("arc in range");
        }
        for (u, v) in other.arcs() {
            g.add_arc(u + self.n, v + self.n).expect("arc in range");
        }
        g
    }

    /// Sub-digraph induced by `vertices`, relabelled `0..|S|` in ascending original order.
    pub fn induced_subdigraph(&self, vertices: &[usize]) -> Result<Digraph> {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n: self.n });
        }
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Digraph::empty(keep.len());
        for &u in &keep {
            for v in self.out[u].iter() {
                if index[v] != usize::MAX {
                    g.add_arc(index[u], index[v])?;
                }
            }
        }
        Ok(g)
    }

    /// Topological-order test (Kahn).
    pub fn is_acyclic(&self) -> bool {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.in_degree(v)).collect();
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = stack.pop() {
            seen += 1;
            for v in self.out[u].iter() {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        seen == self.n
    }

    /// Checks the tournament invariant, reporting the first offending pair in `(u, v)` order.
    pub fn check_tournament(&self) -> Result<()> {
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                match (self.has_arc(u, v), self.has_arc(v, u)) {
                    (true, true) => return Err(Error::DoubleOrientation(u, v)),
                    (false, false) => return Err(Error::MissingPair(u, v)),
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph({}; ", self.n)?;
        f.debug_list().entries(self.arcs()).finish()?;
        write!(f, ")")
    }
}

/// A complete orientation: exactly one arc per unordered pair.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tournament(Digraph);

impl Tournament {
    pub fn new(g: Digraph) -> Result<Self> {
        g.check_tournament()?;
        Ok(Tournament(g))
    }

    pub fn into_digraph(self) -> Digraph {
        self.0
    }

    pub fn as_digraph(&self) -> &Digraph {
        &self.0
    }
}

impl Deref for Tournament {
    type Target = Digraph;

    fn deref(&self) -> &Digraph {
        &self.0
    }
}

impl TryFrom<Digraph> for Tournament {
    type Error = Error;

    fn try_from(g: Digraph) -> Result<Self> {
        Tournament::new(g)
    }
}

/// Validates an arc list as a tournament on `n` vertices.
pub fn make_tournament<I>(n: usize, arcs: I) -> Result<Tournament>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let mut g = Digraph::empty(n);
    for (u, v) in arcs {
        g.add_arc(u, v)?;
        if g.has_arc(v, u) {
            return Err(Error::DoubleOrientation(u.min(v), u.max(v)));
        }
    }
    Tournament::new(g)
}

/// Arcs `i -> j` for all `i < j`.
pub fn transitive_tournament(n: usize) -> Tournament {
    let mut g = Digraph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            g.add_arc(u, v).expect("in range");
        }
    }
    Tournament(g)
}

/// Uniform random tournament; each pair `u < v` gets `u -> v` with probability 1/2.
pub fn random_tournament(n: usize, seed: u64) -> Tournament {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tournament_with(n, &mut rng)
}

pub fn random_tournament_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tournament {
    let mut g = Digraph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<bool>() {
                g.add_arc(u, v).expect("in range");
            } else {
                g.add_arc(v, u).expect("in range");
            }
        }
    }
    Tournament(g)
}

/// The rotational tournament on `Z_n` with connection set `shifts`: `i -> i + s (mod n)`.
///
/// `shifts` must contain exactly one of `s`, `n - s` for every nonzero residue.
pub fn circulant_tournament(n: usize, shifts: &[usize]) -> Result<Tournament> {
    let mut arcs = Vec::new();
    for i in 0..n {
        for &s in shifts {
            arcs.push((i, (i + s) % n));
        }
    }
    make_tournament(n, arcs)
}

/// The quadratic-residue (Paley) tournament on a prime `p ≡ 3 (mod 4)`.
pub fn quadratic_residue_tournament(p: usize) -> Result<Tournament> {
    let residues: Vec<usize> = {
        let mut r: Vec<usize> = (1..p).map(|x| x * x % p).collect();
        r.sort_unstable();
        r.dedup();
        r
    };
    circulant_tournament(p, &residues)
}

/// A digraph with an ordered pair of distinct roots `(z, w)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RootedDigraph {
    graph: Digraph,
    roots: (usize, usize),
}

impl RootedDigraph {
    pub fn new(graph: Digraph, z: usize, w: usize) -> Result<Self> {
        for r in [z, w] {
            if r >= graph.n() {
                return Err(Error::VertexOutOfRange { vertex: r, n: graph.n() });
            }
        }
        if z == w {
            return Err(Error::EqualRoots(z, w));
        }
        Ok(RootedDigraph { graph, roots: (z, w) })
    }

    #[inline]
    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    #[inline]
    pub fn roots(&self) -> (usize, usize) {
        self.roots
    }

    pub fn z(&self) -> usize {
        self.roots.0
    }

    pub fn w(&self) -> usize {
        self.roots.1
    }

    /// Same digraph with the roles of the two roots exchanged.
    pub fn swapped(&self) -> RootedDigraph {
        RootedDigraph {
            graph: self.graph.clone(),
            roots: (self.roots.1, self.roots.0),
        }
    }

    pub fn into_parts(self) -> (Digraph, (usize, usize)) {
        (self.graph, self.roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_triangle() -> Tournament {
        make_tournament(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn make_tournament_examples() {
        assert!(make_tournament(2, [(0, 1)]).is_ok());
        assert!(make_tournament(3, [(0, 1), (1, 2), (2, 0)]).is_ok());
        assert_eq!(
            make_tournament(3, [(0, 1), (1, 0), (1, 2), (2, 0)]).unwrap_err(),
            Error::DoubleOrientation(0, 1)
        );
        assert_eq!(
            make_tournament(3, [(0, 1), (1, 2)]).unwrap_err(),
            Error::MissingPair(0, 2)
        );
        assert_eq!(make_tournament(2, [(1, 1)]).unwrap_err(), Error::SelfLoop(1));
        assert!(matches!(
            make_tournament(2, [(0, 2)]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 2, n: 2 }
        ));
    }

    #[test]
    fn transitive_examples() {
        assert_eq!(transitive_tournament(1).arc_count(), 0);
        let t3: Vec<_> = transitive_tournament(3).arcs().collect();
        assert_eq!(t3, vec![(0, 1), (0, 2), (1, 2)]);
        assert!(transitive_tournament(4).is_acyclic());
        assert!(transitive_tournament(5).is_acyclic());
    }

    #[test]
    fn acyclicity() {
        assert!(!cyclic_triangle().is_acyclic());
        assert!(Digraph::empty(3).is_acyclic());
    }

    #[test]
    fn random_tournament_is_deterministic_and_valid() {
        let a = random_tournament(5, 7);
        let b = random_tournament(5, 7);
        assert_eq!(a, b);
        let c = random_tournament(5, 8);
        assert!(c.check_tournament().is_ok());
        let big = random_tournament(1000, 3);
        let total: usize = (0..1000).map(|v| big.out_degree(v)).sum();
        assert_eq!(total, 1000 * 999 / 2);
    }

    #[test]
    fn disjoint_union_examples() {
        let arc = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let u = arc.disjoint_union(&arc);
        assert_eq!(u.n(), 4);
        assert_eq!(u.arcs().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
        let t = cyclic_triangle();
        assert_eq!(t.disjoint_union(&Digraph::empty(0)), *t.as_digraph());
    }

    #[test]
    fn induced_examples() {
        let t = cyclic_triangle();
        let s = t.induced_subdigraph(&[0, 1]).unwrap();
        assert_eq!(s.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(t.induced_subdigraph(&[0, 1, 2]).unwrap(), *t.as_digraph());
        let tt = transitive_tournament(4);
        let s = tt.induced_subdigraph(&[1, 3]).unwrap();
        assert_eq!(s.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(t.induced_subdigraph(&[0, 5]).is_err());
    }

    #[test]
    fn paley_seven_is_a_tournament() {
        let p = quadratic_residue_tournament(7).unwrap();
        assert!((0..7).all(|v| p.out_degree(v) == 3));
    }

    #[test]
    fn rooted_validation() {
        let g = Digraph::empty(3);
        assert!(RootedDigraph::new(g.clone(), 0, 0).is_err());
        assert!(RootedDigraph::new(g.clone(), 0, 3).is_err());
        let r = RootedDigraph::new(g, 0, 2).unwrap();
        assert_eq!(r.swapped().roots(), (2, 0));
    }
}
