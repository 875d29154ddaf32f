//! Weighted edge contractions `γ: G → G/S₀` and the maps they induce on
//! edge sets and divisors.

use serde::Serialize;

use crate::bitset::EdgeSet;
use crate::divisor::Divisor;
use crate::error::{domain, Result};
use crate::graph::Graph;

/// Image of a source edge under `γ_E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeImage {
    /// The edge survives as target edge `index`. `flipped` records that the tail
    /// half-edge of the source edge maps to the head half-edge of the target edge.
    Edge { index: usize, flipped: bool },
    /// The edge was contracted into this target vertex.
    Vertex(usize),
}

/// A morphism of graphs that contracts `contracted` and is a bijection on the
/// remaining edges. Isomorphisms are the contractions with nothing contracted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contraction {
    source: Graph,
    #[serde(skip)]
    target: Graph,
    contracted: EdgeSet,
    vertex_map: Vec<usize>,
    edge_map: Vec<EdgeImage>,
}

impl Contraction {
    /// `G → G/S₀`. Each connected piece of `⟨S₀⟩` collapses to one vertex whose
    /// weight is the genus of the piece (its vertices plus only the `S₀`-edges
    /// inside it). Target vertices are numbered by their smallest preimage;
    /// target edges are `E ∖ S₀` in source order, with endpoints re-routed and
    /// tail/head preserved.
    pub fn contract(g: &Graph, s0: &EdgeSet) -> Contraction {
        let n = g.vertex_count();
        let labels = g.component_labels_within(s0);
        let parts = labels.iter().copied().max().map_or(0, |m| m + 1);
        // labels are assigned in order of the smallest vertex, so they already
        // give the target numbering
        let mut weight = vec![0i64; parts];
        let mut size = vec![0i64; parts];
        for v in 0..n {
            weight[labels[v]] += i64::from(g.weight(v));
            size[labels[v]] += 1;
        }
        let mut inner = vec![0i64; parts];
        for e in s0.iter() {
            inner[labels[g.ends(e).0]] += 1;
        }
        let weights = (0..parts)
            .map(|p| {
                let w = weight[p] - size[p] + inner[p] + 1;
                u32::try_from(w).expect("contracted weight is nonnegative")
            })
            .collect();
        let mut edges = Vec::with_capacity(g.edge_count() - s0.count());
        let mut edge_map = Vec::with_capacity(g.edge_count());
        for (e, &(t, h)) in g.edges().iter().enumerate() {
            if s0.contains(e) {
                edge_map.push(EdgeImage::Vertex(labels[t]));
            } else {
                edge_map.push(EdgeImage::Edge { index: edges.len(), flipped: false });
                edges.push((labels[t], labels[h]));
            }
        }
        let target = Graph::new(weights, edges).expect("contraction stays within limits");
        Contraction { source: g.clone(), target, contracted: *s0, vertex_map: labels, edge_map }
    }

    /// The trivial contraction of `G`.
    pub fn identity(g: &Graph) -> Contraction {
        Contraction::contract(g, &g.no_edges())
    }

    /// `G(S) = G/(E ∖ S)`.
    pub fn quotient_to(g: &Graph, s: &EdgeSet) -> Contraction {
        Contraction::contract(g, &s.complement())
    }

    /// An isomorphism `G → H` given by vertex and edge bijections plus a flip flag
    /// per edge. Validated against weights and endpoints.
    pub fn isomorphism(
        source: &Graph,
        target: &Graph,
        vertex_map: Vec<usize>,
        edge_map: Vec<usize>,
        flips: Vec<bool>,
    ) -> Result<Contraction> {
        if source.vertex_count() != target.vertex_count()
            || source.edge_count() != target.edge_count()
            || vertex_map.len() != source.vertex_count()
            || edge_map.len() != source.edge_count()
            || flips.len() != source.edge_count()
        {
            return domain("isomorphism data has the wrong shape");
        }
        let mut hit = vec![false; target.vertex_count()];
        for (v, &w) in vertex_map.iter().enumerate() {
            if w >= hit.len() || hit[w] || source.weight(v) != target.weight(w) {
                return domain("vertex map is not a weight-preserving bijection");
            }
            hit[w] = true;
        }
        let mut hit = vec![false; target.edge_count()];
        for (e, &f) in edge_map.iter().enumerate() {
            if f >= hit.len() || hit[f] {
                return domain("edge map is not a bijection");
            }
            hit[f] = true;
            let (t, h) = source.ends(e);
            let (mut tt, mut th) = (vertex_map[t], vertex_map[h]);
            if flips[e] {
                std::mem::swap(&mut tt, &mut th);
            }
            if target.ends(f) != (tt, th) {
                return domain(format!("edge {e} endpoints do not commute with the vertex map"));
            }
        }
        Ok(Contraction {
            source: source.clone(),
            target: target.clone(),
            contracted: source.no_edges(),
            edge_map: edge_map
                .into_iter()
                .zip(flips)
                .map(|(index, flipped)| EdgeImage::Edge { index, flipped })
                .collect(),
            vertex_map,
        })
    }

    /// `δ ∘ γ` for `γ = self: G → H` and `δ = next: H → J`.
    pub fn then(&self, next: &Contraction) -> Result<Contraction> {
        if self.target != next.source {
            return domain("contractions are not composable");
        }
        let vertex_map = self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect();
        let edge_map: Vec<EdgeImage> = self
            .edge_map
            .iter()
            .map(|img| match *img {
                EdgeImage::Vertex(v) => EdgeImage::Vertex(next.vertex_map[v]),
                EdgeImage::Edge { index, flipped } => match next.edge_map[index] {
                    EdgeImage::Vertex(v) => EdgeImage::Vertex(v),
                    EdgeImage::Edge { index: j, flipped: f2 } => {
                        EdgeImage::Edge { index: j, flipped: flipped ^ f2 }
                    }
                },
            })
            .collect();
        let contracted = EdgeSet::from_indices(
            self.source.edge_count(),
            edge_map
                .iter()
                .enumerate()
                .filter(|(_, img)| matches!(img, EdgeImage::Vertex(_)))
                .map(|(i, _)| i),
        );
        Ok(Contraction {
            source: self.source.clone(),
            target: next.target.clone(),
            contracted,
            vertex_map,
            edge_map,
        })
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    /// `S₀`.
    pub fn contracted(&self) -> &EdgeSet {
        &self.contracted
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[EdgeImage] {
        &self.edge_map
    }

    pub fn is_trivial(&self) -> bool {
        self.contracted.is_empty()
    }

    /// Target edge of a surviving source edge.
    pub fn edge_image(&self, e: usize) -> Option<(usize, bool)> {
        match self.edge_map[e] {
            EdgeImage::Edge { index, flipped } => Some((index, flipped)),
            EdgeImage::Vertex(_) => None,
        }
    }

    /// Source edge mapping onto target edge `f`.
    pub fn edge_preimage(&self, f: usize) -> usize {
        self.edge_map
            .iter()
            .position(|img| matches!(img, EdgeImage::Edge { index, .. } if *index == f))
            .expect("surviving edges map bijectively")
    }

    /// `γ_* S = S ∖ S₀`, transported to target indices.
    pub fn push_edges(&self, s: &EdgeSet) -> EdgeSet {
        EdgeSet::from_indices(
            self.target.edge_count(),
            s.iter().filter_map(|e| self.edge_image(e).map(|(f, _)| f)),
        )
    }

    /// Target edge set transported back to source indices (no bridge correction).
    pub fn preimage_edges(&self, t: &EdgeSet) -> EdgeSet {
        EdgeSet::from_indices(self.source.edge_count(), t.iter().map(|f| self.edge_preimage(f)))
    }

    /// `γ^* T`: `T ∪ (G − T)_br` for `b = 0`, `T` for `b = 1`.
    pub fn pull_edges(&self, t: &EdgeSet, b: u8) -> EdgeSet {
        let pre = self.preimage_edges(t);
        if b == 0 {
            pre.union(&self.source.bridges_within(&pre.complement()))
        } else {
            pre
        }
    }

    /// `(γ_* d)_v = Σ_{z ∈ γ_V⁻¹(v)} d_z`.
    pub fn push_divisor(&self, d: &Divisor) -> Result<Divisor> {
        if d.len() != self.source.vertex_count() {
            return domain("divisor does not live on the contraction source");
        }
        let mut out = vec![0i64; self.target.vertex_count()];
        for (z, &v) in self.vertex_map.iter().enumerate() {
            out[v] += d[z];
        }
        Ok(Divisor::new(out))
    }

    /// `c^{γ,S}_v = |{e ∈ S₀ ∩ S : γ(e) = v}|`.
    pub fn c_divisor(&self, s: &EdgeSet) -> Divisor {
        let mut out = vec![0i64; self.target.vertex_count()];
        for e in s.intersection(&self.contracted).iter() {
            if let EdgeImage::Vertex(v) = self.edge_map[e] {
                out[v] += 1;
            }
        }
        Divisor::new(out)
    }

    /// Checks the structural invariants: endpoints commute, surviving edges map
    /// bijectively, genus is preserved.
    pub fn validate(&self) -> Result<()> {
        let mut hit = vec![false; self.target.edge_count()];
        for (e, img) in self.edge_map.iter().enumerate() {
            let (t, h) = self.source.ends(e);
            let (vt, vh) = (self.vertex_map[t], self.vertex_map[h]);
            match *img {
                EdgeImage::Vertex(v) => {
                    if vt != v || vh != v {
                        return domain(format!("contracted edge {e} does not land on its ends"));
                    }
                }
                EdgeImage::Edge { index, flipped } => {
                    if hit[index] {
                        return domain("edge map is not injective");
                    }
                    hit[index] = true;
                    let expect = if flipped { (vh, vt) } else { (vt, vh) };
                    if self.target.ends(index) != expect {
                        return domain(format!("edge {e} endpoints do not commute"));
                    }
                }
            }
        }
        if hit.iter().any(|x| !x) {
            return domain("edge map is not surjective");
        }
        if self.source.genus() != self.target.genus() {
            return domain("contraction changed the genus");
        }
        Ok(())
    }

    /// JSON form `{"source", "contracted", "vertex_map", "edge_map"}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("contraction serialization is infallible")
    }
}

impl Graph {
    /// `G/S₀` together with its contraction map.
    pub fn contract(&self, s0: &EdgeSet) -> (Graph, Contraction) {
        let c = Contraction::contract(self, s0);
        (c.target().clone(), c)
    }

    /// `G(S) = G/(E ∖ S)`.
    pub fn quotient_to(&self, s: &EdgeSet) -> Graph {
        Contraction::quotient_to(self, s).target().clone()
    }
}
