//! Host tournaments built from a simple graph and a gadget family.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Tournament};
use crate::error::{Error, Result};
use crate::gadget::{GadgetFamily, Symmetrized};

/// A simple undirected graph with edges stored as sorted pairs `(u, v)`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("duplicate edge {{{}, {}}}", w[0].0, w[0].1)));
        }
        Ok(SimpleGraph { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        SimpleGraph { n, edges: Vec::new() }
    }

    pub fn single_edge() -> Self {
        SimpleGraph { n: 2, edges: vec![(0, 1)] }
    }

    pub fn path(n: usize) -> Self {
        SimpleGraph { n, edges: (1..n).map(|v| (v - 1, v)).collect() }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Invalid(format!("cycle needs at least 3 vertices, got {n}")));
        }
        SimpleGraph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Dense 0/1 adjacency matrix, row-major.
    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        let mut a = vec![vec![0u8; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] = 1;
            a[v][u] = 1;
        }
        a
    }
}

/// `(x, y) ≻ (a, b)`: larger endpoint sum, ties broken by the larger tail.
pub fn edge_order_succ(e1: (usize, usize), e2: (usize, usize)) -> bool {
    let ((x, y), (a, b)) = (e1, e2);
    x + y > a + b || (x + y == a + b && x > a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    /// The edge of `G` this cell is glued to, in `G`'s labels.
    pub edge: [usize; 2],
    /// Host vertices of the copy whose roots keep their order.
    pub left: Vec<usize>,
    /// Host vertices of the mirrored copy.
    pub right: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// Gadget index, 1-based.
    pub i: usize,
    /// Copy index within gadget `i`, 1-based.
    pub k: usize,
    /// Host vertex of each vertex of `G`.
    pub base: Vec<usize>,
    pub cells: Vec<Cell>,
}

/// Provenance of every host vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostAtlas {
    pub blocks: Vec<Block>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexRole {
    Base { block: usize, vertex: usize },
    Cell { block: usize, cell: usize, side: Side, index: usize },
}

impl HostAtlas {
    pub fn vertex_count(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.base.len() + b.cells.iter().map(|c| c.left.len() + c.right.len()).sum::<usize>())
            .sum()
    }

    /// Role of each host vertex; errors if a vertex has zero or several roles.
    pub fn roles(&self) -> Result<Vec<VertexRole>> {
        let n = self.vertex_count();
        let mut roles: Vec<Option<VertexRole>> = vec![None; n];
        let mut set = |v: usize, r: VertexRole| -> Result<()> {
            match roles.get_mut(v) {
                Some(slot @ None) => {
                    *slot = Some(r);
                    Ok(())
                }
                Some(Some(_)) => Err(Error::Invalid(format!("host vertex {v} has two roles"))),
                None => Err(Error::VertexOutOfRange { vertex: v, n }),
            }
        };
        for (bi, b) in self.blocks.iter().enumerate() {
            for (g, &v) in b.base.iter().enumerate() {
                set(v, VertexRole::Base { block: bi, vertex: g })?;
            }
            for (ci, c) in b.cells.iter().enumerate() {
                for (j, &v) in c.left.iter().enumerate() {
                    set(v, VertexRole::Cell { block: bi, cell: ci, side: Side::Left, index: j })?;
                }
                for (j, &v) in c.right.iter().enumerate() {
                    set(v, VertexRole::Cell { block: bi, cell: ci, side: Side::Right, index: j })?;
                }
            }
        }
        roles
            .into_iter()
            .enumerate()
            .map(|(v, r)| r.ok_or_else(|| Error::Invalid(format!("host vertex {v} has no role"))))
            .collect()
    }

    pub fn block_of(&self, roles: &[VertexRole], v: usize) -> usize {
        match roles[v] {
            VertexRole::Base { block, .. } | VertexRole::Cell { block, .. } => block,
        }
    }

    /// Host-vertex pairs `{x, y}` (with `x < y`) that are glued edges of `G` in blocks of gadget `i` (1-based).
    pub fn base_edges(&self, i: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in self.blocks.iter().filter(|b| b.i == i) {
            for c in &b.cells {
                let (x, y) = (b.base[c.edge[0]], b.base[c.edge[1]]);
                out.push((x.min(y), x.max(y)));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("atlas JSON: {e}")))
    }
}

/// One block: base vertices at `offset..offset+n`, then `2q` vertices per edge in edge order.
fn build_block(g: &SimpleGraph, fd: &Symmetrized, offset: usize, host: &mut Digraph) -> Result<(Vec<usize>, Vec<Cell>)> {
    let n = g.n();
    let q = fd.q();
    let (fz, fw) = fd.rooted.roots();
    let base: Vec<usize> = (offset..offset + n).collect();

    // Step 1: transitive base.
    for a in 0..n {
        for b in (a + 1)..n {
            host.add_arc(base[a], base[b])?;
        }
    }

    let mut cells = Vec::with_capacity(g.edges().len());
    let mut cell_sets: Vec<Vec<usize>> = Vec::with_capacity(g.edges().len());
    for (idx, &(a, b)) in g.edges().iter().enumerate() {
        let start = offset + n + idx * 2 * q;
        let map = |v: usize| {
            if v == fz {
                base[a]
            } else if v == fw {
                base[b]
            } else {
                start + v
            }
        };
        // Step 2: glue the symmetrised gadget with z on the tail and w on the head.
        for (u, v) in fd.rooted.graph().arcs() {
            host.add_arc(map(u), map(v))?;
        }
        let left: Vec<usize> = fd.left().map(|v| start + v).collect();
        let right: Vec<usize> = fd.right().map(|v| start + v).collect();
        // Step 3: left copy beats right copy.
        for &u in &left {
            for &v in &right {
                host.add_arc(u, v)?;
            }
        }
        // Step 4: every other base vertex beats the cell.
        for x in (0..n).filter(|&x| x != a && x != b) {
            for &v in left.iter().chain(&right) {
                host.add_arc(base[x], v)?;
            }
        }
        cell_sets.push(left.iter().chain(&right).copied().collect());
        cells.push(Cell { edge: [a, b], left, right });
    }

    // Step 5: cells ordered by ≻.
    let edges = g.edges();
    for i in 0..edges.len() {
        for j in 0..edges.len() {
            if edge_order_succ(edges[i], edges[j]) {
                for &u in &cell_sets[i] {
                    for &v in &cell_sets[j] {
                        host.add_arc(u, v)?;
                    }
                }
            }
        }
    }
    Ok((base, cells))
}

fn block_size(g: &SimpleGraph, fd: &Symmetrized) -> usize {
    g.n() + g.edges().len() * 2 * fd.q()
}

/// The five-step host `T_i` for one symmetrised gadget.
pub fn build_t_i(g: &SimpleGraph, fd: &Symmetrized) -> Result<(Tournament, HostAtlas)> {
    let mut host = Digraph::empty(block_size(g, fd));
    let (base, cells) = build_block(g, fd, 0, &mut host)?;
    let atlas = HostAtlas { blocks: vec![Block { i: 1, k: 1, base, cells }] };
    Ok((Tournament::new(host)?, atlas))
}

/// `r_i` copies of `T_i` for each gadget, earlier blocks (by `i`, then copy) beating later ones.
pub fn build_t_star(g: &SimpleGraph, family: &GadgetFamily, r: &[usize]) -> Result<(Tournament, HostAtlas)> {
    if r.len() != family.s() {
        return Err(Error::Invalid(format!(
            "{} multiplicities for {} gadgets",
            r.len(),
            family.s()
        )));
    }
    if r.iter().any(|&x| x == 0) {
        return Err(Error::Invalid("multiplicities must be positive".into()));
    }
    let total: usize = r
        .iter()
        .zip(&family.fdagger)
        .map(|(&ri, fd)| ri * block_size(g, fd))
        .sum();
    let mut host = Digraph::empty(total);
    let mut blocks = Vec::new();
    let mut ranges = Vec::new();
    let mut offset = 0;
    for (i, (&ri, fd)) in r.iter().zip(&family.fdagger).enumerate() {
        for k in 0..ri {
            let size = block_size(g, fd);
            let (base, cells) = build_block(g, fd, offset, &mut host)?;
            blocks.push(Block { i: i + 1, k: k + 1, base, cells });
            ranges.push(offset..offset + size);
            offset += size;
        }
    }
    for a in 0..ranges.len() {
        for b in (a + 1)..ranges.len() {
            for u in ranges[a].clone() {
                for v in ranges[b].clone() {
                    host.add_arc(u, v)?;
                }
            }
        }
    }
    Ok((Tournament::new(host)?, HostAtlas { blocks }))
}
