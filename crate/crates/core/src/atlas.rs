//! Stable graphs of a fixed genus up to isomorphism, their automorphisms, and
//! the genus-level posets `S_g`, `A^b_g`, `OP^b_g` and `[OP^b_g]`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bitset::EdgeSet;
use crate::contraction::Contraction;
use crate::error::{domain, Result};
use crate::functor::push_class_key;
use crate::graph::Graph;
use crate::poset::{quotient_by_equivalence, quotient_map_violation, FinitePoset, Relation};
use crate::spaces::{admissible_sets, build_a, build_opbar, rank_of, ClassKey};

/// An isomorphism `G → H`: vertex and edge bijections plus, per edge, whether
/// the tail half-edge goes to the head half-edge of the image.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GraphIso {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub flips: Vec<bool>,
}

impl GraphIso {
    pub fn identity(g: &Graph) -> GraphIso {
        GraphIso {
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).collect(),
            flips: vec![false; g.edge_count()],
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphIso) -> GraphIso {
        GraphIso {
            vertex_map: self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect(),
            edge_map: self.edge_map.iter().map(|&e| next.edge_map[e]).collect(),
            flips: self.edge_map.iter().zip(&self.flips).map(|(&e, &f)| f ^ next.flips[e]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphIso {
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vertex_map[w] = v;
        }
        let mut edge_map = vec![0; self.edge_map.len()];
        let mut flips = vec![false; self.flips.len()];
        for (e, &f) in self.edge_map.iter().enumerate() {
            edge_map[f] = e;
            flips[f] = self.flips[e];
        }
        GraphIso { vertex_map, edge_map, flips }
    }

    /// Checks weights, endpoints and half-edge incidence.
    pub fn is_iso(&self, g: &Graph, h: &Graph) -> bool {
        self.as_contraction(g, h).is_ok()
    }

    pub fn as_contraction(&self, g: &Graph, h: &Graph) -> Result<Contraction> {
        Contraction::isomorphism(g, h, self.vertex_map.clone(), self.edge_map.clone(), self.flips.clone())
    }

    /// Image of an edge set.
    pub fn map_edges(&self, s: &EdgeSet) -> EdgeSet {
        EdgeSet::from_indices(s.len(), s.iter().map(|e| self.edge_map[e]))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn invariant(g: &Graph) -> (usize, usize, Vec<(u32, usize, usize)>) {
    let mut v: Vec<(u32, usize, usize)> = (0..g.vertex_count())
        .map(|x| {
            let loops = g.edges().iter().filter(|&&(t, h)| t == x && h == x).count();
            (g.weight(x), g.degree(x), loops)
        })
        .collect();
    v.sort_unstable();
    (g.vertex_count(), g.edge_count(), v)
}

/// Every isomorphism `G → H` (or just the first one), by brute force over
/// weight-compatible vertex bijections, then edge matchings within each
/// endpoint class, then loop flips.
fn isomorphisms_impl(g: &Graph, h: &Graph, first_only: bool) -> Vec<GraphIso> {
    if invariant(g) != invariant(h) {
        return Vec::new();
    }
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut h_groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (f, &(t, hh)) in h.edges().iter().enumerate() {
        h_groups.entry(norm(t, hh)).or_default().push(f);
    }
    for sigma in permutations(n) {
        if (0..n).any(|v| g.weight(v) != h.weight(sigma[v]) || g.degree(v) != h.degree(sigma[v])) {
            continue;
        }
        let mut g_groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (e, &(t, hh)) in g.edges().iter().enumerate() {
            g_groups.entry(norm(sigma[t], sigma[hh])).or_default().push(e);
        }
        let compatible = g_groups.len() == h_groups.len()
            && g_groups.iter().all(|(k, es)| h_groups.get(k).is_some_and(|fs| fs.len() == es.len()));
        if !compatible {
            continue;
        }
        let groups: Vec<(&Vec<usize>, &Vec<usize>)> =
            g_groups.iter().map(|(k, es)| (es, &h_groups[k])).collect();
        let mut edge_map = vec![usize::MAX; g.edge_count()];
        let mut flips = vec![false; g.edge_count()];
        match_groups(g, h, &sigma, &groups, 0, &mut edge_map, &mut flips, &mut out, first_only);
        if first_only && !out.is_empty() {
            break;
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn match_groups(
    g: &Graph,
    h: &Graph,
    sigma: &[usize],
    groups: &[(&Vec<usize>, &Vec<usize>)],
    k: usize,
    edge_map: &mut Vec<usize>,
    flips: &mut Vec<bool>,
    out: &mut Vec<GraphIso>,
    first_only: bool,
) {
    if first_only && !out.is_empty() {
        return;
    }
    if k == groups.len() {
        // free flips on loops
        let loops: Vec<usize> = (0..g.edge_count()).filter(|&e| g.is_loop(e)).collect();
        for mask in 0u64..1 << loops.len() {
            let mut fl = flips.clone();
            for (i, &e) in loops.iter().enumerate() {
                fl[e] = mask >> i & 1 == 1;
            }
            out.push(GraphIso { vertex_map: sigma.to_vec(), edge_map: edge_map.clone(), flips: fl });
            if first_only {
                return;
            }
        }
        return;
    }
    let (es, fs) = groups[k];
    for p in permutations(es.len()) {
        for (i, &e) in es.iter().enumerate() {
            let f = fs[p[i]];
            edge_map[e] = f;
            flips[e] = !g.is_loop(e) && sigma[g.ends(e).0] != h.ends(f).0;
        }
        match_groups(g, h, sigma, groups, k + 1, edge_map, flips, out, first_only);
        if first_only && !out.is_empty() {
            return;
        }
    }
}

pub fn isomorphisms(g: &Graph, h: &Graph) -> Vec<GraphIso> {
    isomorphisms_impl(g, h, false)
}

pub fn find_iso(g: &Graph, h: &Graph) -> Option<GraphIso> {
    isomorphisms_impl(g, h, true).pop()
}

/// `Aut(G)`, including reversals of loops.
pub fn automorphisms(g: &Graph) -> Vec<GraphIso> {
    isomorphisms(g, g)
}

/// Canonical key: the least `(weights, sorted edges)` over vertex relabelings
/// that list weights in nonincreasing order.
pub type CanonicalKey = (Vec<u32>, Vec<(usize, usize)>);

pub fn canonical_key(g: &Graph) -> CanonicalKey {
    let n = g.vertex_count();
    let mut best: Option<CanonicalKey> = None;
    for sigma in permutations(n) {
        let mut w = vec![0u32; n];
        for v in 0..n {
            w[sigma[v]] = g.weight(v);
        }
        if w.windows(2).any(|p| p[0] < p[1]) {
            continue;
        }
        let mut edges: Vec<(usize, usize)> =
            g.edges().iter().map(|&(t, h)| norm(sigma[t], sigma[h])).collect();
        edges.sort_unstable();
        let key = (w, edges);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.expect("some relabeling sorts the weights")
}

pub fn canonical_form(g: &Graph) -> Graph {
    let (w, e) = canonical_key(g);
    Graph::new(w, e).expect("relabeling keeps the graph valid")
}

/// Multisets of size `m` over `0..k`, as nondecreasing sequences.
fn multisets(k: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(k: usize, m: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in from..k {
            cur.push(i);
            rec(k, m, i, cur, out);
            cur.pop();
        }
    }
    rec(k, m, 0, &mut cur, &mut out);
    out
}

/// Weight vectors of length `n` with entries summing to at most `g`.
fn weight_vectors(n: usize, g: u32, nonincreasing: bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, left: u32, cap: u32, mono: bool, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for w in 0..=left.min(cap) {
            cur.push(w);
            rec(n, left - w, if mono { w } else { u32::MAX }, mono, cur, out);
            cur.pop();
        }
    }
    rec(n, g, u32::MAX, nonincreasing, &mut cur, &mut out);
    out
}

/// All stable graphs on weight vector `w` and the given number of edges.
fn cell_graphs(w: &[u32], m: usize) -> Vec<Graph> {
    let n = w.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    multisets(pairs.len(), m)
        .into_iter()
        .filter_map(|ms| {
            let g = Graph::new(w.to_vec(), ms.iter().map(|&i| pairs[i]).collect()).ok()?;
            g.is_stable().then_some(g)
        })
        .collect()
}

fn cells(genus: u32, nonincreasing: bool) -> Vec<(Vec<u32>, usize)> {
    let mut out = Vec::new();
    for n in 1..=(2 * genus as usize - 2) {
        for w in weight_vectors(n, genus, nonincreasing) {
            let total: u32 = w.iter().sum();
            // connected: g = Σw − n + m + 1
            let m = genus as i64 - total as i64 + n as i64 - 1;
            if m >= 0 && m as usize <= 3 * genus as usize - 3 {
                out.push((w, m as usize));
            }
        }
    }
    out
}

fn check_genus(genus: u32) -> Result<()> {
    if genus < 2 {
        return domain(format!("stable graphs need genus at least 2, got {genus}"));
    }
    if genus > 4 {
        return domain(format!("genus {genus} is beyond the supported range 2..=4"));
    }
    Ok(())
}

/// Stable graphs of genus `g` up to isomorphism, in canonical form, ordered
/// by edge count and then canonical key.
pub fn enumerate_stable_graphs(genus: u32) -> Result<Vec<Graph>> {
    check_genus(genus)?;
    let keys: BTreeSet<CanonicalKey> = cells(genus, true)
        .par_iter()
        .flat_map_iter(|(w, m)| cell_graphs(w, *m).into_iter().map(|g| canonical_key(&g)))
        .collect();
    let mut graphs: Vec<Graph> =
        keys.into_iter().map(|(w, e)| Graph::new(w, e).expect("valid")).collect();
    graphs.sort_by_key(|g| (g.edge_count(), canonical_key(g)));
    Ok(graphs)
}

/// Independent enumeration: every weight vector, no canonical pruning,
/// deduplicated by pairwise isomorphism search.
pub fn enumerate_stable_graphs_slow(genus: u32) -> Result<Vec<Graph>> {
    check_genus(genus)?;
    let mut reps: Vec<Graph> = Vec::new();
    for (w, m) in cells(genus, false) {
        for g in cell_graphs(&w, m) {
            if !reps.iter().any(|r| find_iso(r, &g).is_some()) {
                reps.push(g);
            }
        }
    }
    Ok(reps)
}

/// An element of `OP^b_g`: atlas index and a class of that graph.
pub type GraphClass = (usize, ClassKey);

/// One single-edge contraction of an atlas member.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeContraction {
    pub source: usize,
    pub edge: usize,
    pub target: usize,
    /// Isomorphism from `G/e` onto the atlas member.
    pub iso: GraphIso,
}

/// The stable graphs of one genus with automorphisms and contraction data.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub genus: u32,
    pub graphs: Vec<Graph>,
    pub automorphisms: Vec<Vec<GraphIso>>,
    pub edge_contractions: Vec<EdgeContraction>,
    /// `witnesses[i][j]`: one contraction `G_i → G_j` per contracted set `S₀`
    /// (composed with a fixed isomorphism onto `G_j`); empty for `i = j`.
    witnesses: Vec<Vec<Vec<Contraction>>>,
}

impl Atlas {
    pub fn new(genus: u32) -> Result<Atlas> {
        let graphs = enumerate_stable_graphs(genus)?;
        let index: BTreeMap<CanonicalKey, usize> =
            graphs.iter().enumerate().map(|(i, g)| (canonical_key(g), i)).collect();
        let automorphisms: Vec<Vec<GraphIso>> = graphs.par_iter().map(automorphisms).collect();
        let n = graphs.len();
        let rows: Vec<(Vec<Vec<Contraction>>, Vec<EdgeContraction>)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let g = &graphs[i];
                let mut row = vec![Vec::new(); n];
                let mut singles = Vec::new();
                for s0 in EdgeSet::all_subsets(g.edge_count()).skip(1) {
                    let gamma = Contraction::contract(g, &s0);
                    let j = index[&canonical_key(gamma.target())];
                    let iso = find_iso(gamma.target(), &graphs[j]).expect("canonical keys agree");
                    if s0.count() == 1 {
                        singles.push(EdgeContraction {
                            source: i,
                            edge: s0.iter().next().unwrap(),
                            target: j,
                            iso: iso.clone(),
                        });
                    }
                    let alpha = iso.as_contraction(gamma.target(), &graphs[j]).expect("verified iso");
                    row[j].push(gamma.then(&alpha).expect("composable"));
                }
                (row, singles)
            })
            .collect();
        let mut witnesses = Vec::with_capacity(n);
        let mut edge_contractions = Vec::new();
        for (row, singles) in rows {
            witnesses.push(row);
            edge_contractions.extend(singles);
        }
        Ok(Atlas { genus, graphs, automorphisms, edge_contractions, witnesses })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn index_of(&self, g: &Graph) -> Option<usize> {
        let key = canonical_key(g);
        self.graphs.iter().position(|h| canonical_key(h) == key)
    }

    /// One contraction per contracted set, before automorphism twists.
    pub fn contraction_witnesses(&self, i: usize, j: usize) -> &[Contraction] {
        &self.witnesses[i][j]
    }

    /// All contractions `G_i → G_j`: every `S₀` with `G_i/S₀ ≅ G_j`, composed
    /// with every isomorphism. For `i = j` only the identity.
    pub fn contractions_between(&self, i: usize, j: usize) -> Vec<Contraction> {
        if i == j {
            return vec![Contraction::identity(&self.graphs[i])];
        }
        let h = &self.graphs[j];
        self.witnesses[i][j]
            .iter()
            .flat_map(|gamma| {
                self.automorphisms[j].iter().map(move |alpha| {
                    gamma.then(&alpha.as_contraction(h, h).expect("automorphism")).expect("composable")
                })
            })
            .collect()
    }

    /// `3g − 3 − |E(G)|`.
    pub fn graph_rank(&self, i: usize) -> i64 {
        3 * i64::from(self.genus) - 3 - self.graphs[i].edge_count() as i64
    }

    fn leq_graph(&self, i: usize, j: usize) -> bool {
        i == j || !self.witnesses[i][j].is_empty()
    }

    /// `S_g`: `G ≤ H` iff `H` is a contraction of `G`.
    pub fn build_sg(&self) -> Result<FinitePoset<usize>> {
        let p = FinitePoset::new((0..self.len()).collect(), |&i, &j| self.leq_graph(i, j))?;
        Ok(p.with_rank(|&i| self.graph_rank(i)))
    }

    /// `A^b_g`: `(G, S) ≤ (H, T)` iff `γ^*T ⊆ S` for some contraction `γ: G → H`.
    pub fn build_ag(&self, b: u8) -> Result<FinitePoset<(usize, EdgeSet)>> {
        let fibers: Vec<Vec<EdgeSet>> = self.graphs.iter().map(|g| admissible_sets(g, b)).collect();
        let mut elements = Vec::new();
        let mut offset = Vec::with_capacity(self.len());
        for (i, f) in fibers.iter().enumerate() {
            offset.push(elements.len());
            elements.extend(f.iter().map(|s| (i, *s)));
        }
        let lookup: Vec<BTreeMap<EdgeSet, usize>> = fibers
            .iter()
            .map(|f| f.iter().enumerate().map(|(k, s)| (*s, k)).collect())
            .collect();
        let mut rel = Relation::new(elements.len());
        for i in 0..self.len() {
            for (x, s) in fibers[i].iter().enumerate() {
                for (y, t) in fibers[i].iter().enumerate() {
                    if t.is_subset(s) {
                        rel.set(offset[i] + x, offset[i] + y);
                    }
                }
            }
            for j in 0..self.len() {
                if i == j {
                    continue;
                }
                let h = &self.graphs[j];
                for gamma in &self.witnesses[i][j] {
                    for t in &fibers[j] {
                        let pulled = gamma.pull_edges(t, b);
                        for (x, s) in fibers[i].iter().enumerate() {
                            if pulled.is_subset(s) {
                                for alpha in &self.automorphisms[j] {
                                    let y = lookup[j][&alpha.map_edges(t)];
                                    debug_assert!(alpha.is_iso(h, h));
                                    rel.set(offset[i] + x, offset[j] + y);
                                }
                            }
                        }
                    }
                }
            }
        }
        let p = FinitePoset::from_relation(elements, rel)?;
        Ok(p.with_rank(|(i, s)| self.graph_rank(*i) + rank_of(&self.graphs[*i], s)))
    }

    /// `ŌP^b_G` for every member, with the action of `Aut(G)` on its classes.
    pub fn class_posets(&self, b: u8) -> Result<Vec<ClassPoset>> {
        (0..self.len())
            .into_par_iter()
            .map(|i| ClassPoset::new(&self.graphs[i], &self.automorphisms[i], b))
            .collect()
    }

    /// `OP^b_g` (classes): `(G, Ō_S) ≤ (H, Ō_T)` iff `γ̄_* Ō_S ≤ Ō_T` in
    /// `ŌP^b_H` for some contraction `γ: G → H` (the identity when `G = H`).
    pub fn build_opg(&self, b: u8) -> Result<FinitePoset<GraphClass>> {
        let fibers = self.class_posets(b)?;
        self.build_opg_from(&fibers)
    }

    pub fn build_opg_from(&self, fibers: &[ClassPoset]) -> Result<FinitePoset<GraphClass>> {
        let mut elements = Vec::new();
        let mut offset = Vec::with_capacity(self.len());
        for (i, f) in fibers.iter().enumerate() {
            offset.push(elements.len());
            elements.extend(f.bar.elements().iter().map(|k| (i, k.clone())));
        }
        let total = elements.len();
        // rows of the relation, computed per source graph in parallel
        let rows: Vec<Vec<(usize, usize)>> = (0..self.len())
            .into_par_iter()
            .map(|i| -> Result<Vec<(usize, usize)>> {
                let mut pairs = Vec::new();
                let fi = &fibers[i];
                for x in 0..fi.bar.len() {
                    for y in 0..fi.bar.len() {
                        if fi.bar.leq(x, y) {
                            pairs.push((offset[i] + x, offset[i] + y));
                        }
                    }
                }
                for j in 0..self.len() {
                    if i == j || self.witnesses[i][j].is_empty() {
                        continue;
                    }
                    let fj = &fibers[j];
                    let mut up = vec![vec![false; fj.bar.len()]; fi.bar.len()];
                    for gamma in &self.witnesses[i][j] {
                        for x in 0..fi.bar.len() {
                            let key = push_class_key(gamma, &fi.representatives[x])?;
                            let z = fj.bar.index_of(&key).ok_or_else(|| {
                                crate::error::Error::Precondition(format!(
                                    "class {} of graph {i} pushes outside ŌP of graph {j}",
                                    fi.bar.key(x).label()
                                ))
                            })?;
                            for perm in &fj.aut_action {
                                let zz = perm[z];
                                for y in fj.bar.relation().successors(zz) {
                                    up[x][y] = true;
                                }
                            }
                        }
                    }
                    for (x, row) in up.iter().enumerate() {
                        for (y, &hit) in row.iter().enumerate() {
                            if hit {
                                pairs.push((offset[i] + x, offset[j] + y));
                            }
                        }
                    }
                }
                Ok(pairs)
            })
            .collect::<Result<_>>()?;
        let mut rel = Relation::new(total);
        for row in rows {
            for (x, y) in row {
                rel.set(x, y);
            }
        }
        let p = FinitePoset::from_relation(elements, rel)?;
        Ok(p.with_rank(|(i, k)| self.graph_rank(*i) + rank_of(&self.graphs[*i], &k.removed)))
    }

    /// `[OP^b_g]`: the quotient of `OP^b_g` by conjugacy under automorphisms.
    /// Antisymmetry of the quotient relation is checked, not assumed.
    pub fn conjugacy_quotient(
        &self,
        opg: &FinitePoset<GraphClass>,
        fibers: &[ClassPoset],
    ) -> Result<(FinitePoset<GraphClass>, Vec<usize>)> {
        quotient_by_equivalence(opg, |(i, k)| {
            let f = &fibers[*i];
            let x = f.bar.index_of(k).expect("element of the fiber");
            let orbit_min = f.aut_action.iter().map(|perm| perm[x]).min().expect("identity is an automorphism");
            (*i, f.bar.key(orbit_min).clone())
        })
    }
}

/// `ŌP^b_G` of one atlas member with class representatives and, for every
/// automorphism, the induced permutation of classes.
#[derive(Clone, Debug)]
pub struct ClassPoset {
    pub bar: FinitePoset<ClassKey>,
    pub representatives: Vec<crate::orientation::Orientation>,
    pub aut_action: Vec<Vec<usize>>,
}

impl ClassPoset {
    pub fn new(g: &Graph, auts: &[GraphIso], b: u8) -> Result<ClassPoset> {
        let (bar, op, proj) = build_opbar(g, b)?;
        let mut representatives = vec![None; bar.len()];
        for (x, &c) in proj.iter().enumerate() {
            if representatives[c].is_none() {
                representatives[c] = Some(op.key(x).clone());
            }
        }
        let representatives: Vec<_> = representatives.into_iter().map(|r| r.expect("nonempty class")).collect();
        let mut aut_action = Vec::with_capacity(auts.len());
        for alpha in auts {
            let a = alpha.as_contraction(g, g)?;
            let perm = representatives
                .iter()
                .map(|o| {
                    let key = push_class_key(&a, o)?;
                    bar.index_of(&key)
                        .ok_or_else(|| crate::error::Error::Precondition("automorphism leaves ŌP".into()))
                })
                .collect::<Result<Vec<usize>>>()?;
            aut_action.push(perm);
        }
        Ok(ClassPoset { bar, representatives, aut_action })
    }
}

/// Strata of the compactified Jacobians' combinatorial skeleton: per graph, the
/// classes of `ŌP^b_G` with curve-level dimension `g(G − S)` and universal
/// dimension `3g − 3 − |E(G)| + g(G − S)`, plus the Hasse diagram of `[OP^b_g]`.
pub fn stratification_report(atlas: &Atlas, b: u8) -> Result<(serde_json::Value, String)> {
    let fibers = atlas.class_posets(b)?;
    let opg = atlas.build_opg_from(&fibers)?;
    let (conj, _) = atlas.conjugacy_quotient(&opg, &fibers)?;
    let mut graphs = Vec::new();
    for (i, f) in fibers.iter().enumerate() {
        let g = &atlas.graphs[i];
        let strata: Vec<serde_json::Value> = f
            .bar
            .elements()
            .iter()
            .map(|k| {
                let dim = rank_of(g, &k.removed);
                json!({
                    "removed": k.removed,
                    "divisor": k.divisor,
                    "dimension": dim,
                    "universal_dimension": atlas.graph_rank(i) + dim,
                })
            })
            .collect();
        let top = f.bar.elements().iter().map(|k| rank_of(g, &k.removed)).max().unwrap_or(0);
        let top_count = f.bar.elements().iter().filter(|k| rank_of(g, &k.removed) == top).count();
        graphs.push(json!({
            "graph": g,
            "automorphisms": atlas.automorphisms[i].len(),
            "strata": strata,
            "top_dimension": top,
            "top_strata": top_count,
            "closure": f.bar.covers().iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>(),
        }));
    }
    let max_rank = conj.ranks().and_then(|r| r.iter().max().copied()).unwrap_or(0);
    let report = json!({
        "genus": atlas.genus,
        "b": b,
        "graphs": graphs,
        "conjugacy_classes": conj.len(),
        "top_rank": max_rank,
        "top_rank_strata": conj.ranks().map_or(0, |r| r.iter().filter(|&&x| x == max_rank).count()),
        "poset": conj.to_json(|(i, k)| json!({"graph": i, "removed": k.removed, "divisor": k.divisor})),
    });
    let dot = conj.to_dot(|(i, k)| format!("G{i} {}", k.label()));
    Ok((report, dot))
}

/// Everything about one genus in one document: graphs, automorphism group
/// orders, the single-edge contraction table and the genus-level posets, plus
/// DOT for `S_g` and `[OP^b_g]`.
pub fn atlas_bundle(atlas: &Atlas, b: u8) -> Result<(serde_json::Value, String, String)> {
    let sg = atlas.build_sg()?;
    let ag = atlas.build_ag(b)?;
    let fibers = atlas.class_posets(b)?;
    let opg = atlas.build_opg_from(&fibers)?;
    let (conj, _) = atlas.conjugacy_quotient(&opg, &fibers)?;
    let pair = |(i, k): &GraphClass| json!({"graph": i, "removed": k.removed, "divisor": k.divisor});
    let bundle = json!({
        "genus": atlas.genus,
        "b": b,
        "graphs": atlas.graphs,
        "automorphism_orders": atlas.automorphisms.iter().map(Vec::len).collect::<Vec<_>>(),
        "edge_contractions": atlas.edge_contractions.iter().map(|c| json!({
            "source": c.source,
            "edge": c.edge,
            "target": c.target,
            "vertex_map": c.iso.vertex_map,
            "edge_map": c.iso.edge_map,
        })).collect::<Vec<_>>(),
        "S_g": sg.to_json(|i| json!(i)),
        "A_g": ag.to_json(|(i, s)| json!({"graph": i, "removed": s})),
        "OP_g": opg.to_json(pair),
        "conjugacy_classes": conj.to_json(pair),
    });
    let sg_dot = sg.to_dot(|&i| format!("G{i} {}", atlas.graphs[i].to_json()));
    let conj_dot = conj.to_dot(|(i, k)| format!("G{i} {}", k.label()));
    Ok((bundle, sg_dot, conj_dot))
}

/// Forgetful checks shared by the genus-level suites: each map given on
/// indices must be a quotient of posets.
pub fn forgetful_violation<K, L>(f: &[usize], p: &FinitePoset<K>, q: &FinitePoset<L>) -> Option<String>
where
    K: Clone + Ord + std::fmt::Debug,
    L: Clone + Ord + std::fmt::Debug,
{
    quotient_map_violation(f, p, q)
}

/// `A^b_G` of every atlas member, graded check included, keyed by graph index.
pub fn fiber_a_posets(atlas: &Atlas, b: u8) -> Result<Vec<FinitePoset<EdgeSet>>> {
    atlas.graphs.iter().map(|g| build_a(g, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn genus_two_atlas() {
        let gs = enumerate_stable_graphs(2).unwrap();
        assert_eq!(gs.len(), 7);
        assert!(gs.iter().all(|g| g.edge_count() <= 3 && g.genus() == 2 && g.is_stable()));
        let mut by_edges: Vec<usize> = gs.iter().map(|g| g.edge_count()).collect();
        by_edges.dedup();
        assert_eq!(by_edges, vec![0, 1, 2, 3]);
        let slow = enumerate_stable_graphs_slow(2).unwrap();
        assert_eq!(slow.len(), 7);
        for g in &slow {
            assert_eq!(gs.iter().filter(|h| find_iso(g, h).is_some()).count(), 1);
        }
        assert!(enumerate_stable_graphs(1).is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&theta()).len(), 12);
        assert_eq!(automorphisms(&single(2)).len(), 1);
        // two loops at one vertex: swap and flip each
        let two_loops = Graph::new(vec![0], vec![(0, 0), (0, 0)]).unwrap();
        assert_eq!(automorphisms(&two_loops).len(), 8);
        assert_eq!(automorphisms(&dumbbell()).len(), 8);
        let auts = automorphisms(&theta());
        for a in &auts {
            assert!(a.is_iso(&theta(), &theta()));
            for b in &auts {
                assert!(auts.contains(&a.then(b)));
            }
            assert!(auts.contains(&a.inverse()));
        }
    }

    #[test]
    fn relabeled_dumbbell() {
        let d = dumbbell();
        let other = Graph::new(vec![0, 0], vec![(1, 0), (1, 1), (0, 0)]).unwrap();
        let iso = find_iso(&d, &other).unwrap();
        assert!(iso.is_iso(&d, &other));
        assert_eq!(canonical_key(&d), canonical_key(&other));
        assert!(find_iso(&d, &theta()).is_none());
    }

    #[test]
    fn contractions_in_genus_two() {
        let atlas = Atlas::new(2).unwrap();
        let t = atlas.index_of(&theta()).unwrap();
        let top = atlas.index_of(&single(2)).unwrap();
        let all = atlas.contractions_between(t, top);
        assert!(!all.is_empty());
        assert!(all.iter().all(|c| c.contracted().is_full() && c.validate().is_ok()));
        assert_eq!(atlas.contractions_between(t, t).len(), 1);
        let d = atlas.index_of(&dumbbell()).unwrap();
        let loop1 = atlas.index_of(&Graph::new(vec![1], vec![(0, 0)]).unwrap()).unwrap();
        // a loop plus the bridge, either loop
        assert_eq!(atlas.contraction_witnesses(d, loop1).len(), 2);
        for c in atlas.contractions_between(d, loop1) {
            assert!(c.validate().is_ok());
            assert_eq!(c.target(), &atlas.graphs[loop1]);
        }
    }

    #[test]
    fn sg_genus_two() {
        let atlas = Atlas::new(2).unwrap();
        let sg = atlas.build_sg().unwrap();
        assert!(sg.is_graded());
        let top = atlas.index_of(&single(2)).unwrap();
        assert_eq!(sg.maximal(), vec![top]);
        assert_eq!(sg.rank(top), Some(3));
        let mut minimal: Vec<usize> = sg.minimal();
        minimal.sort();
        let mut expect = vec![atlas.index_of(&theta()).unwrap(), atlas.index_of(&dumbbell()).unwrap()];
        expect.sort();
        assert_eq!(minimal, expect);
    }

    #[test]
    fn genus_level_posets_small() {
        let atlas = Atlas::new(2).unwrap();
        let ag = atlas.build_ag(1).unwrap();
        let expected: usize = atlas.graphs.iter().map(|g| admissible_sets(g, 1).len()).sum();
        assert_eq!(ag.len(), expected);
        assert!(ag.is_graded());
        let top = atlas.index_of(&single(2)).unwrap();
        let top_idx = ag.index_of(&(top, atlas.graphs[top].no_edges())).unwrap();
        assert_eq!(ag.rank(top_idx), Some(5));

        let fibers = atlas.class_posets(0).unwrap();
        let t = atlas.index_of(&theta()).unwrap();
        assert_eq!(fibers[t].bar.len(), 6);
        let opg = atlas.build_opg_from(&fibers).unwrap();
        assert!(opg.is_graded());
        let (conj, _) = atlas.conjugacy_quotient(&opg, &fibers).unwrap();
        let theta_top = conj
            .elements()
            .iter()
            .filter(|(i, k)| *i == t && k.removed.is_empty())
            .count();
        assert_eq!(theta_top, 1);
        assert!(conj.is_graded());
    }
}
