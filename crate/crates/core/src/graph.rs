//! Vertex-weighted multigraphs with loops and parallel edges.
//!
//! Edge `i` owns the half-edges `2i` (tail side) and `2i + 1` (head side). A loop
//! has `tail == head`; its two half-edges are still distinct objects.
//!
//! Graphs are immutable values. Every sub- or quotient-graph operation returns a
//! fresh graph whose vertex and edge indices follow a documented rule, so that
//! divisors and orientations can be carried across without ambiguity:
//!
//! * [`Graph::delete_edges`] keeps every vertex and the remaining edges in their
//!   original relative order.
//! * [`Graph::induced_subgraph`] keeps the vertices of `Z` and the edges of `G[Z]`
//!   in increasing index order.
//! * [`Graph::subdivide`] keeps the vertices of `G` first, then appends one
//!   exceptional vertex per subdivided edge, in edge order.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bitset::{EdgeSet, VertexSet, MAX_BITS};
use crate::error::{domain, Error, Result};

/// A finite vertex-weighted multigraph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Graph {
    weights: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

/// On-disk form: `{"weights": [..], "edges": [[tail, head], ..]}`.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    weights: Vec<u32>,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            weights: self.weights.clone(),
            edges: self.edges.iter().map(|&(t, h)| [t, h]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        Graph::new(raw.weights, raw.edges.into_iter().map(|[t, h]| (t, h)).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl Graph {
    pub fn new(weights: Vec<u32>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if weights.is_empty() {
            return domain("a graph needs at least one vertex");
        }
        if weights.len() > MAX_BITS || edges.len() > MAX_BITS {
            return domain(format!("graphs are limited to {MAX_BITS} vertices and edges"));
        }
        let n = weights.len();
        if let Some((i, _)) = edges.iter().enumerate().find(|(_, &(t, h))| t >= n || h >= n) {
            return domain(format!("edge {i} has an endpoint outside 0..{n}"));
        }
        Ok(Self { weights, edges })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(tail, head)` of edge `e`.
    #[inline]
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    #[inline]
    pub fn is_loop(&self, e: usize) -> bool {
        let (t, h) = self.edges[e];
        t == h
    }

    /// End vertex of half-edge `h` (`2e` is the tail side of `e`, `2e + 1` the head side).
    #[inline]
    pub fn half_edge_end(&self, h: usize) -> usize {
        let (t, hd) = self.edges[h / 2];
        if h.is_multiple_of(2) {
            t
        } else {
            hd
        }
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.edge_count())
    }

    pub fn no_edges(&self) -> EdgeSet {
        EdgeSet::empty(self.edge_count())
    }

    /// Number of half-edges at `v`; a loop contributes two.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(t, h)| usize::from(t == v) + usize::from(h == v))
            .sum()
    }

    pub fn total_weight(&self) -> i64 {
        self.weights.iter().map(|&w| i64::from(w)).sum()
    }

    /// `Σ w(v) − |V| + |E| + c(G)`.
    pub fn genus(&self) -> i64 {
        self.total_weight() - self.vertex_count() as i64 + self.edge_count() as i64
            + self.component_count() as i64
    }

    /// Component label per vertex; labels are numbered by smallest member vertex.
    pub fn component_labels(&self) -> Vec<usize> {
        self.component_labels_within(&self.all_edges())
    }

    /// Component labels of the spanning subgraph with edge set `kept`.
    pub(crate) fn component_labels_within(&self, kept: &EdgeSet) -> Vec<usize> {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for e in kept.iter() {
            let (t, h) = self.edges[e];
            if t != h {
                adj[t].push(h);
                adj[h].push(t);
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Maximal connected vertex sets, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut parts = vec![VertexSet::empty(self.vertex_count()); count];
        for (v, &l) in labels.iter().enumerate() {
            parts[l].insert(v);
        }
        parts
    }

    pub fn component_count(&self) -> usize {
        self.component_count_within(&self.all_edges())
    }

    pub(crate) fn component_count_within(&self, kept: &EdgeSet) -> usize {
        self.component_labels_within(kept)
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Edges of `G[Z]`: both ends in `z`.
    pub fn induced_edges(&self, z: &VertexSet) -> EdgeSet {
        EdgeSet::from_indices(
            self.edge_count(),
            self.edges
                .iter()
                .enumerate()
                .filter(|(_, &(t, h))| z.contains(t) && z.contains(h))
                .map(|(i, _)| i),
        )
    }

    /// Whether `G[Z]` is connected (and `Z` nonempty).
    pub fn is_connected_subset(&self, z: &VertexSet) -> bool {
        let Some(start) = z.iter().next() else {
            return false;
        };
        let mut seen = VertexSet::singleton(self.vertex_count(), start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(t, h) in &self.edges {
                let other = if t == u {
                    h
                } else if h == u {
                    t
                } else {
                    continue;
                };
                if z.contains(other) && !seen.contains(other) {
                    seen.insert(other);
                    stack.push(other);
                }
            }
        }
        seen == *z
    }

    /// `g(Z) = g(G[Z])` for nonempty `Z`.
    pub fn subset_genus(&self, z: &VertexSet) -> i64 {
        let inner = self.induced_edges(z);
        let w: i64 = z.iter().map(|v| i64::from(self.weights[v])).sum();
        w - z.count() as i64 + inner.count() as i64 + self.subset_component_count(z) as i64
    }

    fn subset_component_count(&self, z: &VertexSet) -> usize {
        let inner = self.induced_edges(z);
        let labels = self.component_labels_within(&inner);
        let mut seen = std::collections::BTreeSet::new();
        for v in z.iter() {
            seen.insert(labels[v]);
        }
        seen.len()
    }

    /// `G[Z]`, with vertices and edges renumbered in increasing original order.
    pub fn induced_subgraph(&self, z: &VertexSet) -> Result<Graph> {
        if z.is_empty() {
            return domain("induced subgraph of the empty vertex set");
        }
        let mut new_index = vec![usize::MAX; self.vertex_count()];
        let mut weights = Vec::with_capacity(z.count());
        for v in z.iter() {
            new_index[v] = weights.len();
            weights.push(self.weights[v]);
        }
        let edges = self
            .induced_edges(z)
            .iter()
            .map(|e| {
                let (t, h) = self.edges[e];
                (new_index[t], new_index[h])
            })
            .collect();
        Graph::new(weights, edges)
    }

    /// Spanning subgraph `G − S`.
    pub fn delete_edges(&self, s: &EdgeSet) -> Graph {
        Graph {
            weights: self.weights.clone(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| !s.contains(*i))
                .map(|(_, &e)| e)
                .collect(),
        }
    }

    /// Indices (in `G`) of the edges kept by [`Graph::delete_edges`], in order.
    pub fn kept_edges(&self, s: &EdgeSet) -> Vec<usize> {
        (0..self.edge_count()).filter(|i| !s.contains(*i)).collect()
    }

    /// Vertices adjacent to some edge of `S`.
    pub fn spanned_vertices(&self, s: &EdgeSet) -> VertexSet {
        let mut vs = VertexSet::empty(self.vertex_count());
        for e in s.iter() {
            let (t, h) = self.edges[e];
            vs.insert(t);
            vs.insert(h);
        }
        vs
    }

    /// `⟨S⟩`: edge set `S`, vertices adjacent to `S`. `None` when `S` is empty,
    /// since the empty graph is not a [`Graph`].
    pub fn spanned_subgraph(&self, s: &EdgeSet) -> Option<Graph> {
        let vs = self.spanned_vertices(s);
        if vs.is_empty() {
            return None;
        }
        let mut new_index = vec![usize::MAX; self.vertex_count()];
        let mut weights = Vec::new();
        for v in vs.iter() {
            new_index[v] = weights.len();
            weights.push(self.weights[v]);
        }
        let edges = s
            .iter()
            .map(|e| {
                let (t, h) = self.edges[e];
                (new_index[t], new_index[h])
            })
            .collect();
        Some(Graph { weights, edges })
    }

    /// `E(Z, Zᶜ)` for `∅ ⊊ Z ⊊ V`. Loops never appear.
    pub fn cut_between(&self, z: &VertexSet) -> Result<EdgeSet> {
        if z.is_empty() || z.is_full() {
            return domain("cut needs a proper nonempty vertex subset");
        }
        Ok(self.cut_unchecked(z))
    }

    pub(crate) fn cut_unchecked(&self, z: &VertexSet) -> EdgeSet {
        EdgeSet::from_indices(
            self.edge_count(),
            self.edges
                .iter()
                .enumerate()
                .filter(|(_, &(t, h))| z.contains(t) != z.contains(h))
                .map(|(i, _)| i),
        )
    }

    /// Bridges of `G`, by a lowlink depth-first search that tracks edge ids so
    /// parallel edges are handled correctly.
    pub fn bridges(&self) -> EdgeSet {
        self.bridges_within(&self.all_edges())
    }

    /// Bridges of the spanning subgraph whose edge set is `kept`, as indices of `G`.
    pub fn bridges_within(&self, kept: &EdgeSet) -> EdgeSet {
        let n = self.vertex_count();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for e in kept.iter() {
            let (t, h) = self.edges[e];
            if t != h {
                adj[t].push((h, e));
                adj[h].push((t, e));
            }
        }
        let mut order = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut out = EdgeSet::empty(self.edge_count());
        let mut clock = 0;
        for root in 0..n {
            if order[root] != usize::MAX {
                continue;
            }
            // (vertex, edge used to enter, next adjacency position)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            order[root] = clock;
            low[root] = clock;
            clock += 1;
            while let Some(&mut (u, via, ref mut pos)) = stack.last_mut() {
                if *pos < adj[u].len() {
                    let (w, e) = adj[u][*pos];
                    *pos += 1;
                    if e == via {
                        continue;
                    }
                    if order[w] == usize::MAX {
                        order[w] = clock;
                        low[w] = clock;
                        clock += 1;
                        stack.push((w, e, 0));
                    } else {
                        low[u] = low[u].min(order[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[u]);
                        if low[u] > order[p] {
                            out.insert(via);
                        }
                    }
                }
            }
        }
        out
    }

    /// Connected, genus at least two, no weight-0 vertex of degree below 2.
    pub fn is_semistable(&self) -> bool {
        self.is_connected() && self.genus() >= 2 && self.min_unweighted_degree_at_least(2)
    }

    /// Connected, genus at least two, no weight-0 vertex of degree below 3.
    pub fn is_stable(&self) -> bool {
        self.is_connected() && self.genus() >= 2 && self.min_unweighted_degree_at_least(3)
    }

    fn min_unweighted_degree_at_least(&self, k: usize) -> bool {
        (0..self.vertex_count()).all(|v| self.weights[v] > 0 || self.degree(v) >= k)
    }

    /// `Ĝ_S`: insert a weight-0 vertex `v_e` into every edge `e ∈ S`.
    ///
    /// Edges of the result are listed by walking the edges of `G` in order:
    /// an edge outside `S` is copied, an edge `e ∈ S` is replaced by
    /// `h_e = (tail(e), v_e)` followed by `j_e = (v_e, head(e))`.
    pub fn subdivide(&self, s: &EdgeSet) -> (Graph, Subdivision) {
        let n = self.vertex_count();
        let mut weights = self.weights.clone();
        let mut edges = Vec::with_capacity(self.edge_count() + s.count());
        let mut exceptional = Vec::with_capacity(s.count());
        let mut edge_inclusion = Vec::with_capacity(self.edge_count() - s.count());
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            if s.contains(e) {
                let v = n + exceptional.len();
                weights.push(0);
                let he = edges.len();
                edges.push((t, v));
                edges.push((v, h));
                exceptional.push(Exceptional { edge: e, vertex: v, h: he, j: he + 1 });
            } else {
                edge_inclusion.push(edges.len());
                edges.push((t, h));
            }
        }
        let hat = Graph::new(weights, edges).expect("subdivision stays within limits");
        let data = Subdivision {
            original_vertices: n,
            original_edges: self.edge_count(),
            subdivided: *s,
            exceptional,
            edge_inclusion,
        };
        (hat, data)
    }
}

/// One exceptional vertex of a subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Exceptional {
    /// Edge of `G` that was subdivided.
    pub edge: usize,
    /// `v_e` in `Ĝ_S`.
    pub vertex: usize,
    /// `h_e`, adjacent to the tail of `e`.
    pub h: usize,
    /// `j_e`, adjacent to the head of `e`.
    pub j: usize,
}

/// Index bookkeeping returned by [`Graph::subdivide`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subdivision {
    pub original_vertices: usize,
    pub original_edges: usize,
    pub subdivided: EdgeSet,
    pub exceptional: Vec<Exceptional>,
    /// Position in `Ĝ_S` of each edge of `G − S`, in the order of [`Graph::kept_edges`].
    pub edge_inclusion: Vec<usize>,
}

impl Subdivision {
    /// `Ŝ = {h_e, j_e : e ∈ S}` as an edge set of `Ĝ_S`.
    pub fn hat_edges(&self) -> EdgeSet {
        let len = self.original_edges + self.exceptional.len();
        EdgeSet::from_indices(len, self.exceptional.iter().flat_map(|x| [x.h, x.j]))
    }
}

/// Small named graphs used throughout the tests and on the command line.
pub mod fixtures {
    use super::Graph;

    /// Two weight-0 vertices joined by three edges.
    pub fn theta() -> Graph {
        Graph::new(vec![0, 0], vec![(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    /// Loop at each of two weight-0 vertices, joined by a bridge (edge 2).
    pub fn dumbbell() -> Graph {
        Graph::new(vec![0, 0], vec![(0, 0), (1, 1), (0, 1)]).unwrap()
    }

    pub fn single(w: u32) -> Graph {
        Graph::new(vec![w], vec![]).unwrap()
    }

    /// Three weight-1 vertices; edges 0..3 join u1u2 (edge 2 is `e`), edges 3..6 join u2u3.
    pub fn theta_chain() -> Graph {
        Graph::new(
            vec![1, 1, 1],
            vec![(0, 1), (0, 1), (0, 1), (1, 2), (1, 2), (1, 2)],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn vs(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, xs.iter().copied())
    }

    fn es(n: usize, xs: &[usize]) -> EdgeSet {
        EdgeSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn genus_examples() {
        assert_eq!(single(2).genus(), 2);
        assert_eq!(theta().genus(), 2);
        assert_eq!(dumbbell().genus(), 2);
        assert_eq!(theta_chain().genus(), 7);
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(Graph::new(vec![], vec![]).is_err());
        assert!(Graph::new(vec![0], vec![(0, 1)]).is_err());
    }

    #[test]
    fn components() {
        let g = Graph::new(vec![0, 0, 0], vec![]).unwrap();
        assert_eq!(g.connected_components().len(), 3);
        assert_eq!(theta().connected_components().len(), 1);
        let bare = theta().delete_edges(&theta().all_edges());
        assert_eq!(bare.connected_components(), vec![vs(2, &[0]), vs(2, &[1])]);
    }

    #[test]
    fn induced_subgraphs() {
        let t = theta().induced_subgraph(&vs(2, &[0])).unwrap();
        assert_eq!(t, single(0));
        assert_eq!(theta().subset_genus(&vs(2, &[0])), 0);
        let d = dumbbell().induced_subgraph(&vs(2, &[0])).unwrap();
        assert_eq!(d.edge_count(), 1);
        assert_eq!(d.genus(), 1);
        assert_eq!(dumbbell().subset_genus(&vs(2, &[0])), 1);
        assert_eq!(theta().induced_subgraph(&theta().all_vertices()).unwrap(), theta());
        assert!(theta().induced_subgraph(&VertexSet::empty(2)).is_err());
    }

    #[test]
    fn deleting_edges() {
        let g = theta();
        assert_eq!(g.delete_edges(&g.no_edges()), g);
        let double = g.delete_edges(&es(3, &[2]));
        assert_eq!(double.edge_count(), 2);
        assert_eq!(double.genus(), 1);
        assert_eq!(g.delete_edges(&g.all_edges()).genus(), 0);
    }

    #[test]
    fn spanned() {
        let d = dumbbell().spanned_subgraph(&es(3, &[2])).unwrap();
        assert_eq!((d.vertex_count(), d.edge_count()), (2, 1));
        let t = theta().spanned_subgraph(&es(3, &[0, 1])).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (2, 2));
        assert!(theta().spanned_subgraph(&es(3, &[])).is_none());
    }

    #[test]
    fn cuts() {
        assert_eq!(theta().cut_between(&vs(2, &[0])).unwrap(), theta().all_edges());
        assert_eq!(dumbbell().cut_between(&vs(2, &[0])).unwrap(), es(3, &[2]));
        let bare = Graph::new(vec![0, 0], vec![]).unwrap();
        assert!(bare.cut_between(&vs(2, &[0])).unwrap().is_empty());
        assert!(theta().cut_between(&vs(2, &[0, 1])).is_err());
    }

    #[test]
    fn bridge_examples() {
        assert!(theta().bridges().is_empty());
        assert_eq!(dumbbell().bridges(), es(3, &[2]));
        let tree = Graph::new(vec![1, 1], vec![(0, 1)]).unwrap();
        assert_eq!(tree.bridges(), es(1, &[0]));
    }

    #[test]
    fn stability() {
        assert!(theta().is_stable());
        let double = Graph::new(vec![0, 0], vec![(0, 1), (0, 1)]).unwrap();
        assert!(!double.is_stable());
        assert_eq!(double.genus(), 1);
        assert!(single(2).is_stable());
        assert!(dumbbell().is_stable());
        let chain = Graph::new(vec![1, 0, 1], vec![(0, 1), (1, 2)]).unwrap();
        assert!(!chain.is_stable());
        assert!(chain.is_semistable());
    }

    #[test]
    fn subdivision() {
        let g = theta();
        let (h, data) = g.subdivide(&g.no_edges());
        assert_eq!(h, g);
        assert!(data.exceptional.is_empty());

        let (h, data) = g.subdivide(&es(3, &[0]));
        assert_eq!((h.vertex_count(), h.edge_count(), h.genus()), (3, 4, 2));
        assert_eq!(data.exceptional[0], Exceptional { edge: 0, vertex: 2, h: 0, j: 1 });
        assert_eq!(data.edge_inclusion, vec![2, 3]);

        let d = dumbbell();
        let (h, _) = d.subdivide(&es(3, &[2]));
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.genus(), 2);
        assert_eq!(h.bridges().count(), 2);
    }

    #[test]
    fn json_round_trip() {
        let g = dumbbell();
        let text = g.to_json();
        assert_eq!(text, r#"{"weights":[0,0],"edges":[[0,0],[1,1],[0,1]]}"#);
        assert_eq!(Graph::from_json(&text).unwrap(), g);
        assert!(Graph::from_json(r#"{"weights":[],"edges":[]}"#).is_err());
    }
}
