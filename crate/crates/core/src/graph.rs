//! Simple connected graphs with 1-based vertices `v_1..v_n`, cuts,
//! spanning trees and Hamiltonian cycles.

use std::collections::VecDeque;
use std::fmt;

use itertools::Itertools;

use crate::codes::Word;
use crate::error::{ensure_budget, Error, Result};

pub type Vertex = usize;

/// Undirected edge, stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn touches(&self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}-v{}", self.0, self.1)
    }
}

/// Largest supported vertex count (vertex sets are 64-bit masks).
pub const MAX_VERTICES: usize = 63;

/// A set of vertices as a bit mask; bit `i` stands for `v_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(0)
    }

    pub fn full(n: usize) -> Self {
        VertexSet(((1u64 << n) - 1) << 1)
    }

    pub fn from_vertices(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        VertexSet(vertices.into_iter().fold(0, |acc, v| acc | (1 << v)))
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet(mask)
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < 64 && (self.0 >> v) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn complement(&self, n: usize) -> Self {
        VertexSet(Self::full(n).0 & !self.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..64).filter(move |&v| self.contains(v))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().map(|v| format!("v{v}")).join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Vertex>>,
    neighbor_masks: Vec<u64>,
}

impl Topology {
    /// Validates simplicity and connectivity.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        if !(2..=MAX_VERTICES).contains(&n) {
            return Err(Error::param(format!(
                "graph needs 2 <= n <= {MAX_VERTICES} vertices, got {n}"
            )));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::param(format!("edge ({u},{v}) outside v_1..v_{n}")));
            }
            if u == v {
                return Err(Error::param(format!("self-loop at v{u}")));
            }
            list.push(Edge::new(u, v));
        }
        list.sort();
        if let Some((a, _)) = list.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(Error::param(format!("duplicate edge {a}")));
        }
        let mut adjacency = vec![Vec::new(); n + 1];
        let mut neighbor_masks = vec![0u64; n + 1];
        for e in &list {
            adjacency[e.0].push(e.1);
            adjacency[e.1].push(e.0);
            neighbor_masks[e.0] |= 1 << e.1;
            neighbor_masks[e.1] |= 1 << e.0;
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let graph = Topology {
            n,
            edges: list,
            adjacency,
            neighbor_masks,
        };
        let reached = graph.bfs_order(1).len();
        if reached != n {
            return Err(Error::param(format!(
                "graph is disconnected: v1 reaches {reached} of {n} vertices"
            )));
        }
        Ok(graph)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::param("a cycle needs n >= 3"));
        }
        Topology::new(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Topology::new(n, (1..=n).tuple_combinations())
    }

    pub fn path(n: usize) -> Result<Self> {
        Topology::new(n, (1..n).map(|i| (i, i + 1)))
    }

    /// `K_{1,n-1}` centred at `v_1`.
    pub fn star(n: usize) -> Result<Self> {
        Topology::new(n, (2..=n).map(|i| (1, i)))
    }

    /// `"cycle:n"`, `"complete:n"`, `"path:n"` or `"star:n"`.
    pub fn builtin(name: &str) -> Result<Self> {
        let (kind, size) = name
            .split_once(':')
            .ok_or_else(|| Error::param(format!("unknown graph {name:?}")))?;
        let n: usize = size
            .trim()
            .parse()
            .map_err(|_| Error::param(format!("bad vertex count in {name:?}")))?;
        match kind.trim() {
            "cycle" => Topology::cycle(n),
            "complete" => Topology::complete(n),
            "path" => Topology::path(n),
            "star" => Topology::star(n),
            other => Err(Error::param(format!("unknown graph family {other:?}"))),
        }
    }

    /// File format: a line with `n`, then one `u v` pair per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing vertex count"))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::parse(line, "vertex count is not an integer"))?;
        let mut edges = Vec::new();
        for (line, text) in lines {
            let parts: Vec<&str> = text.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                [u, v] => u.parse::<usize>().ok().zip(v.parse::<usize>().ok()),
                _ => None,
            };
            edges.push(parsed.ok_or_else(|| Error::parse(line, "expected \"u v\""))?);
        }
        Topology::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", e.0, e.1));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges sorted by `(min endpoint, max endpoint)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u <= self.n && v <= self.n && (self.neighbor_masks[u] >> v) & 1 == 1
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    fn bfs_order(&self, root: Vertex) -> Vec<Vertex> {
        let mut seen = vec![false; self.n + 1];
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        order
    }

    fn check_side(&self, side: VertexSet) -> Result<()> {
        if side.is_empty() || side.mask() & !VertexSet::full(self.n).mask() != 0 {
            return Err(Error::param(format!("{side} is not a subset of v1..v{}", self.n)));
        }
        if side == VertexSet::full(self.n) {
            return Err(Error::param("a cut side must be a proper subset of V"));
        }
        Ok(())
    }

    /// Edges with exactly one endpoint in `side`, in edge order.
    pub fn cut_set(&self, side: VertexSet) -> Result<Vec<Edge>> {
        self.check_side(side)?;
        Ok(self.crossing(side))
    }

    fn crossing(&self, side: VertexSet) -> Vec<Edge> {
        self.edges
            .iter()
            .filter(|e| side.contains(e.0) != side.contains(e.1))
            .copied()
            .collect()
    }

    /// All cuts whose side `S` has exactly `size` vertices, with `S` in
    /// lexicographic order of its sorted vertex list.
    pub fn cuts_of_size(&self, size: usize, budget: u64) -> Result<Vec<Cut>> {
        if size == 0 || size >= self.n {
            return Err(Error::param(format!(
                "cut side size must be in 1..{}, got {size}",
                self.n
            )));
        }
        ensure_budget("cuts of given size", binomial(self.n, size), budget as u128)?;
        Ok((1..=self.n)
            .combinations(size)
            .map(|vs| {
                let side = VertexSet::from_vertices(vs);
                Cut {
                    side,
                    cut_set: self.crossing(side),
                }
            })
            .collect())
    }

    /// Every nonempty proper side `S`, ordered by bit mask.
    pub fn all_cuts(&self, budget: u64) -> Result<Vec<Cut>> {
        let count = (1u128 << self.n) - 2;
        ensure_budget("cuts", count, budget as u128)?;
        Ok((1..(1u64 << self.n) - 1)
            .map(|mask| {
                let side = VertexSet::from_mask(mask << 1);
                Cut {
                    side,
                    cut_set: self.crossing(side),
                }
            })
            .collect())
    }

    /// Deterministic BFS tree: neighbours are visited in index order.
    pub fn spanning_tree(&self, root: Vertex) -> Result<SpanningTree> {
        if root == 0 || root > self.n {
            return Err(Error::param(format!("root v{root} is not a vertex")));
        }
        let mut parent = vec![None; self.n + 1];
        let mut depth = vec![0usize; self.n + 1];
        let mut seen = vec![false; self.n + 1];
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(SpanningTree {
            root,
            parent,
            depth,
            bfs_order: order,
        })
    }

    /// Lexicographically least Hamiltonian cycle starting at `v_1`, by
    /// backtracking over neighbours in index order.
    pub fn hamiltonian_cycle(&self, max_vertices: usize) -> Result<Option<Vec<Vertex>>> {
        ensure_budget(
            "Hamiltonian search vertices",
            self.n as u128,
            max_vertices as u128,
        )?;
        if self.n < 3 {
            return Ok(None);
        }
        let mut path = vec![1];
        let mut used = 1u64 << 1;
        Ok(self.extend_path(&mut path, &mut used).then_some(path))
    }

    fn extend_path(&self, path: &mut Vec<Vertex>, used: &mut u64) -> bool {
        let last = *path.last().expect("path starts at v1");
        if path.len() == self.n {
            return self.has_edge(last, 1);
        }
        for &v in &self.adjacency[last] {
            if *used & (1 << v) != 0 {
                continue;
            }
            path.push(v);
            *used |= 1 << v;
            if self.extend_path(path, used) {
                return true;
            }
            *used &= !(1 << v);
            path.pop();
        }
        false
    }
}

/// A cut `(S, S̄)` with its cut-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub side: VertexSet,
    pub cut_set: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: Vertex,
    /// `parent[v]`, `None` for the root (index 0 unused).
    pub parent: Vec<Option<Vertex>>,
    pub depth: Vec<usize>,
    pub bfs_order: Vec<Vertex>,
}

impl SpanningTree {
    pub fn n(&self) -> usize {
        self.bfs_order.len()
    }

    /// Children of `v` in index order.
    pub fn children(&self, v: Vertex) -> Vec<Vertex> {
        (1..self.parent.len())
            .filter(|&c| self.parent[c] == Some(v))
            .collect()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = (1..self.parent.len())
            .filter_map(|v| self.parent[v].map(|p| Edge::new(v, p)))
            .collect();
        edges.sort();
        edges
    }

    /// Path from `v` up to the root, both ends included.
    pub fn path_to_root(&self, v: Vertex) -> Vec<Vertex> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path
    }

    pub fn depth_sum(&self) -> usize {
        self.depth.iter().sum()
    }
}

/// `x_S ∨ y_{S̄}`: `x` on `side`, `y` elsewhere. An empty side is rejected
/// unless `allow_empty`, in which case the result is `y`.
pub fn mix(x: &Word, y: &Word, side: VertexSet, allow_empty: bool) -> Result<Word> {
    if x.len() != y.len() || x.width() != y.width() {
        return Err(Error::param("mix needs words of equal shape"));
    }
    if side.is_empty() && !allow_empty {
        return Err(Error::param("mix with an empty side"));
    }
    if side.iter().any(|v| v > x.len()) {
        return Err(Error::param(format!("{side} has vertices beyond n = {}", x.len())));
    }
    Ok(mix_unchecked(x, y, side))
}

pub(crate) fn mix_unchecked(x: &Word, y: &Word, side: VertexSet) -> Word {
    let symbols = (1..=x.len())
        .map(|v| if side.contains(v) { x.values()[v - 1] } else { y.values()[v - 1] })
        .collect();
    Word::new(x.width(), symbols).expect("shape inherited from inputs")
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
