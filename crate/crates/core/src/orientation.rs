//! Generalized `b`-orientations on spanning subgraphs `G − S`.
//!
//! An [`Orientation`] does not own its graph: it stores the removed edge set `S`
//! and one state per remaining edge, and every query takes the ambient graph.
//! Because [`Graph::delete_edges`] keeps edge order, an orientation of `G − S`
//! given on the ambient graph and one given on the carrier itself have the same
//! state vector.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bitset::{EdgeSet, VertexSet};
use crate::divisor::Divisor;
use crate::error::{domain, precondition, Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum EdgeState {
    /// tail → head
    #[serde(rename = "+")]
    Forward,
    /// head → tail
    #[serde(rename = "-")]
    Backward,
    #[serde(rename = "*")]
    Bioriented,
}

impl EdgeState {
    pub fn reversed(self) -> EdgeState {
        match self {
            EdgeState::Forward => EdgeState::Backward,
            EdgeState::Backward => EdgeState::Forward,
            EdgeState::Bioriented => EdgeState::Bioriented,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            EdgeState::Forward => '+',
            EdgeState::Backward => '-',
            EdgeState::Bioriented => '*',
        }
    }
}

/// Equivalent characterizations of total cyclicity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CyclicMode {
    /// No directed cut.
    NoDirectedCut,
    /// `t(Z) > 0` for every nonempty proper `Z` of each component.
    PositiveInflow,
    /// As above, restricted to connected `G[Z]`.
    PositiveInflowConnected,
    /// `|d_Z| > g(Z) − 1` for every connected nonempty proper `Z` of each component.
    DivisorBound,
    /// Every edge lies on a directed cycle.
    CycleCover,
}

impl CyclicMode {
    pub const ALL: [CyclicMode; 5] = [
        CyclicMode::NoDirectedCut,
        CyclicMode::PositiveInflow,
        CyclicMode::PositiveInflowConnected,
        CyclicMode::DivisorBound,
        CyclicMode::CycleCover,
    ];
}

/// Equivalent characterizations of rootedness.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RootedMode {
    /// Every proper `Z` containing the bioriented edge has a cut edge pointing out.
    Definition,
    /// `t(Z) > 0` for every nonempty `Z` not containing the bioriented edge.
    PositiveInflow,
    /// As above, restricted to connected `G[Z]`.
    PositiveInflowConnected,
    /// `|d_Z| > g(Z) − 1` for every connected nonempty proper `Z`.
    DivisorBound,
    /// Every vertex is reached by a directed path starting at the bioriented edge.
    Reachability,
}

impl RootedMode {
    pub const ALL: [RootedMode; 5] = [
        RootedMode::Definition,
        RootedMode::PositiveInflow,
        RootedMode::PositiveInflowConnected,
        RootedMode::DivisorBound,
        RootedMode::Reachability,
    ];
}

/// A `b`-orientation (`b ∈ {0, 1}`) of `G − removed`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Orientation {
    removed: EdgeSet,
    states: Vec<EdgeState>,
    b: u8,
}

#[derive(Serialize, Deserialize)]
struct OrientationJson {
    graph: Graph,
    removed: Vec<usize>,
    states: Vec<EdgeState>,
    b: u8,
}

impl Orientation {
    /// States are listed for the edges of `G − removed` in index order. `b` must
    /// equal the number of bioriented states unless the carrier is edgeless, in
    /// which case it is the flag of the empty orientation.
    pub fn new(g: &Graph, removed: EdgeSet, states: Vec<EdgeState>, b: u8) -> Result<Orientation> {
        if removed.len() != g.edge_count() {
            return domain("removed set does not match the graph");
        }
        if states.len() != g.edge_count() - removed.count() {
            return domain(format!(
                "{} states for {} carrier edges",
                states.len(),
                g.edge_count() - removed.count()
            ));
        }
        if b > 1 {
            return domain(format!("b must be 0 or 1, got {b}"));
        }
        if !states.is_empty() {
            let stars = states.iter().filter(|s| **s == EdgeState::Bioriented).count();
            if stars != usize::from(b) {
                return domain(format!("{stars} bioriented edges in a {b}-orientation"));
            }
        }
        Ok(Orientation { removed, states, b })
    }

    /// An orientation of the whole of `G`.
    pub fn whole(g: &Graph, states: Vec<EdgeState>, b: u8) -> Result<Orientation> {
        Orientation::new(g, g.no_edges(), states, b)
    }

    /// The empty orientation of the edgeless spanning subgraph.
    pub fn empty(g: &Graph, b: u8) -> Orientation {
        Orientation { removed: g.all_edges(), states: Vec::new(), b }
    }

    /// Parses `states` written as a string of `+`, `-`, `*`.
    pub fn parse(g: &Graph, removed: EdgeSet, states: &str, b: u8) -> Result<Orientation> {
        let states = states
            .chars()
            .map(|c| match c {
                '+' => Ok(EdgeState::Forward),
                '-' => Ok(EdgeState::Backward),
                '*' => Ok(EdgeState::Bioriented),
                other => Err(Error::Parse(format!("unknown edge state {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Orientation::new(g, removed, states, b)
    }

    pub fn removed(&self) -> &EdgeSet {
        &self.removed
    }

    pub fn states(&self) -> &[EdgeState] {
        &self.states
    }

    pub fn b(&self) -> u8 {
        self.b
    }

    /// States as a `+-*` string.
    pub fn code(&self) -> String {
        self.states.iter().map(|s| s.symbol()).collect()
    }

    /// The carrier `G − S` as a graph of its own.
    pub fn carrier(&self, g: &Graph) -> Graph {
        g.delete_edges(&self.removed)
    }

    /// `(edge, state)` for every carrier edge, in index order.
    pub fn edge_states(&self) -> impl Iterator<Item = (usize, EdgeState)> + '_ {
        self.removed.complement().iter().zip(self.states.iter().copied())
    }

    pub fn state_of(&self, e: usize) -> Option<EdgeState> {
        if self.removed.contains(e) {
            return None;
        }
        let pos = (0..e).filter(|&f| !self.removed.contains(f)).count();
        Some(self.states[pos])
    }

    pub fn bioriented_edge(&self) -> Option<usize> {
        self.edge_states().find(|(_, s)| *s == EdgeState::Bioriented).map(|(e, _)| e)
    }

    /// Copy with carrier edge `e` set to `state`; `b` follows the new state count.
    pub fn with_state(&self, e: usize, state: EdgeState) -> Orientation {
        let mut out = self.clone();
        let pos = (0..e).filter(|&f| !self.removed.contains(f)).count();
        assert!(!self.removed.contains(e), "edge {e} is not in the carrier");
        out.states[pos] = state;
        out.b = out.states.iter().filter(|s| **s == EdgeState::Bioriented).count() as u8;
        out
    }

    /// Source vertex of an oriented carrier edge.
    pub fn source_of(&self, g: &Graph, e: usize) -> Option<usize> {
        let (t, h) = g.ends(e);
        match self.state_of(e)? {
            EdgeState::Forward => Some(t),
            EdgeState::Backward => Some(h),
            EdgeState::Bioriented => None,
        }
    }

    /// Target vertex of an oriented carrier edge.
    pub fn target_of(&self, g: &Graph, e: usize) -> Option<usize> {
        let (t, h) = g.ends(e);
        match self.state_of(e)? {
            EdgeState::Forward => Some(h),
            EdgeState::Backward => Some(t),
            EdgeState::Bioriented => None,
        }
    }

    /// `t^O`: number of half-edges targeting each vertex.
    pub fn target_vector(&self, g: &Graph) -> Divisor {
        let mut t = vec![0i64; g.vertex_count()];
        for (e, s) in self.edge_states() {
            let (a, h) = g.ends(e);
            match s {
                EdgeState::Forward => t[h] += 1,
                EdgeState::Backward => t[a] += 1,
                EdgeState::Bioriented => {
                    t[a] += 1;
                    t[h] += 1;
                }
            }
        }
        Divisor::new(t)
    }

    /// `d^O_v = w(v) − 1 + t^O_v`; on an edgeless carrier `w(v) − 1 + b`.
    pub fn divisor_of(&self, g: &Graph) -> Divisor {
        if self.states.is_empty() {
            return Divisor::new(
                (0..g.vertex_count()).map(|v| i64::from(g.weight(v)) - 1 + i64::from(self.b)).collect(),
            );
        }
        let t = self.target_vector(g);
        Divisor::new((0..g.vertex_count()).map(|v| i64::from(g.weight(v)) - 1 + t[v]).collect())
    }

    /// `t^O(Z)`: carrier edges not inside `G[Z]` with a target end in `Z`.
    pub fn t_into(&self, g: &Graph, z: &VertexSet) -> i64 {
        self.edge_states()
            .filter(|&(e, s)| {
                let (t, h) = g.ends(e);
                if z.contains(t) && z.contains(h) {
                    return false;
                }
                match s {
                    EdgeState::Forward => z.contains(h),
                    EdgeState::Backward => z.contains(t),
                    EdgeState::Bioriented => z.contains(t) || z.contains(h),
                }
            })
            .count() as i64
    }

    /// `b(Z)`: bioriented carrier edges inside `G[Z]`.
    pub fn b_within(&self, g: &Graph, z: &VertexSet) -> i64 {
        self.edge_states()
            .filter(|&(e, s)| {
                let (t, h) = g.ends(e);
                s == EdgeState::Bioriented && z.contains(t) && z.contains(h)
            })
            .count() as i64
    }

    fn kept(&self) -> EdgeSet {
        self.removed.complement()
    }

    /// Components of the carrier.
    fn carrier_components(&self, g: &Graph) -> Vec<VertexSet> {
        let labels = g.component_labels_within(&self.kept());
        let parts = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![VertexSet::empty(g.vertex_count()); parts];
        for (v, &l) in labels.iter().enumerate() {
            out[l].insert(v);
        }
        out
    }

    fn carrier_connected_subset(&self, g: &Graph, z: &VertexSet) -> bool {
        let kept = self.kept();
        let mut seen = VertexSet::empty(g.vertex_count());
        let Some(start) = z.iter().next() else { return false };
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for e in kept.iter() {
                let (t, h) = g.ends(e);
                for (a, c) in [(t, h), (h, t)] {
                    if a == v && z.contains(c) && !seen.contains(c) {
                        seen.insert(c);
                        stack.push(c);
                    }
                }
            }
        }
        seen == *z
    }

    /// `g(Z)` computed in the carrier.
    fn carrier_genus(&self, g: &Graph, z: &VertexSet) -> i64 {
        let kept = self.kept();
        let inside = kept
            .iter()
            .filter(|&e| {
                let (t, h) = g.ends(e);
                z.contains(t) && z.contains(h)
            })
            .count() as i64;
        let w: i64 = z.iter().map(|v| i64::from(g.weight(v))).sum();
        let labels = g.component_labels_within(&kept.intersection(&g.induced_edges(z)));
        let mut comps: Vec<usize> = z.iter().map(|v| labels[v]).collect();
        comps.sort_unstable();
        comps.dedup();
        w - z.count() as i64 + inside + comps.len() as i64
    }

    /// Total cyclicity under the chosen characterization. Requires `b = 0`.
    pub fn is_totally_cyclic(&self, g: &Graph, mode: CyclicMode) -> Result<bool> {
        if self.b != 0 {
            return precondition("total cyclicity is defined for 0-orientations");
        }
        let n = g.vertex_count();
        Ok(match mode {
            CyclicMode::NoDirectedCut => VertexSet::all_subsets(n).all(|z| {
                let mut into_z = false;
                let mut into_zc = false;
                let mut any = false;
                for (e, s) in self.edge_states() {
                    let (t, h) = g.ends(e);
                    if z.contains(t) == z.contains(h) {
                        continue;
                    }
                    any = true;
                    let target = if s == EdgeState::Forward { h } else { t };
                    if z.contains(target) {
                        into_z = true;
                    } else {
                        into_zc = true;
                    }
                }
                !any || (into_z && into_zc)
            }),
            CyclicMode::PositiveInflow | CyclicMode::PositiveInflowConnected => {
                let connected = mode == CyclicMode::PositiveInflowConnected;
                self.carrier_components(g).iter().all(|c| {
                    c.subsets()
                        .filter(|z| !z.is_empty() && z != c)
                        .filter(|z| !connected || self.carrier_connected_subset(g, z))
                        .all(|z| self.t_into(g, &z) > 0)
                })
            }
            CyclicMode::DivisorBound => {
                let d = self.divisor_of(g);
                self.carrier_components(g).iter().all(|c| {
                    c.subsets()
                        .filter(|z| !z.is_empty() && z != c)
                        .filter(|z| self.carrier_connected_subset(g, z))
                        .all(|z| d.degree_on(&z) > self.carrier_genus(g, &z) - 1)
                })
            }
            CyclicMode::CycleCover => {
                let reach = self.directed_reach_matrix(g);
                self.edge_states().all(|(e, s)| {
                    let (t, h) = g.ends(e);
                    let (src, dst) = if s == EdgeState::Forward { (t, h) } else { (h, t) };
                    src == dst || reach[dst].contains(src)
                })
            }
        })
    }

    /// `reach[v]` = vertices reachable from `v` along oriented carrier edges.
    fn directed_reach_matrix(&self, g: &Graph) -> Vec<VertexSet> {
        (0..g.vertex_count()).map(|v| self.directed_reach(g, &[v])).collect()
    }

    fn directed_reach(&self, g: &Graph, starts: &[usize]) -> VertexSet {
        let mut seen = VertexSet::from_indices(g.vertex_count(), starts.iter().copied());
        let mut stack = starts.to_vec();
        while let Some(v) = stack.pop() {
            for (e, _) in self.edge_states() {
                if let (Some(s), Some(t)) = (self.source_of(g, e), self.target_of(g, e)) {
                    if s == v && !seen.contains(t) {
                        seen.insert(t);
                        stack.push(t);
                    }
                }
            }
        }
        seen
    }

    /// Rootedness under the chosen characterization. Requires `b = 1`; the empty
    /// 1-orientation is rooted exactly when the carrier is a single vertex.
    pub fn is_rooted(&self, g: &Graph, mode: RootedMode) -> Result<bool> {
        if self.b != 1 {
            return precondition("rootedness is defined for 1-orientations");
        }
        let n = g.vertex_count();
        let Some(e) = self.bioriented_edge() else {
            return Ok(n == 1);
        };
        let (x, y) = g.ends(e);
        let holds_e = |z: &VertexSet| z.contains(x) && z.contains(y);
        Ok(match mode {
            RootedMode::Definition => VertexSet::all_subsets(n)
                .filter(|z| !z.is_full() && holds_e(z))
                .all(|z| {
                    self.edge_states().any(|(f, s)| {
                        let (t, h) = g.ends(f);
                        if z.contains(t) == z.contains(h) {
                            return false;
                        }
                        let target = match s {
                            EdgeState::Forward => h,
                            EdgeState::Backward => t,
                            EdgeState::Bioriented => return false,
                        };
                        !z.contains(target)
                    })
                }),
            RootedMode::PositiveInflow | RootedMode::PositiveInflowConnected => {
                let connected = mode == RootedMode::PositiveInflowConnected;
                VertexSet::all_subsets(n)
                    .skip(1)
                    .filter(|z| !holds_e(z))
                    .filter(|z| !connected || self.carrier_connected_subset(g, z))
                    .all(|z| self.t_into(g, &z) > 0)
            }
            RootedMode::DivisorBound => {
                let d = self.divisor_of(g);
                VertexSet::all_subsets(n)
                    .skip(1)
                    .filter(|z| !z.is_full() && self.carrier_connected_subset(g, z))
                    .all(|z| d.degree_on(&z) > self.carrier_genus(g, &z) - 1)
                    && self.carrier_connected_subset(g, &VertexSet::full(n))
            }
            RootedMode::Reachability => self.directed_reach(g, &[x, y]).is_full(),
        })
    }

    /// Totally cyclic for `b = 0`, rooted for `b = 1`.
    pub fn is_admissible(&self, g: &Graph) -> bool {
        if self.b == 0 {
            self.is_totally_cyclic(g, CyclicMode::CycleCover).expect("b = 0")
        } else {
            self.is_rooted(g, RootedMode::Reachability).expect("b = 1")
        }
    }

    /// `(O_T)_{|G−S}` for `T ⊆ S`.
    pub fn restrict(&self, s: &EdgeSet) -> Result<Orientation> {
        if s.len() != self.removed.len() || !self.removed.is_subset(s) {
            return domain("restriction needs a superset of the removed edges");
        }
        let states: Vec<EdgeState> =
            self.edge_states().filter(|(e, _)| !s.contains(*e)).map(|(_, st)| st).collect();
        let b = if states.is_empty() {
            self.b
        } else {
            states.iter().filter(|x| **x == EdgeState::Bioriented).count() as u8
        };
        Ok(Orientation { removed: *s, states, b })
    }

    /// Reverses an `O`-directed path that starts with the bioriented edge: the
    /// last edge becomes bioriented, inner edges flip, and the first edge points
    /// back toward its end not used by the path.
    pub fn reverse_directed_path(&self, g: &Graph, path: &[usize]) -> Result<Orientation> {
        if self.b != 1 {
            return precondition("path reversal needs a 1-orientation");
        }
        let Some(e) = self.bioriented_edge() else {
            return precondition("the empty orientation has no bioriented edge");
        };
        if path.first() != Some(&e) {
            return domain("path must start with the bioriented edge");
        }
        if path.len() == 1 {
            return Ok(self.clone());
        }
        let mut used = EdgeSet::empty(g.edge_count());
        for &f in path {
            if f >= g.edge_count() || self.removed.contains(f) || used.contains(f) {
                return domain(format!("edge {f} repeats or is not a carrier edge"));
            }
            used.insert(f);
        }
        let (x, y) = g.ends(e);
        let start = self.source_of(g, path[1]).expect("only one bioriented edge");
        if start != x && start != y {
            return domain("path does not continue from the bioriented edge");
        }
        let mut cur = self.target_of(g, path[1]).unwrap();
        for &f in &path[2..] {
            if self.source_of(g, f) != Some(cur) {
                return domain(format!("edge {f} does not continue the directed path"));
            }
            cur = self.target_of(g, f).unwrap();
        }
        let mut out = self.clone();
        let last = *path.last().unwrap();
        out = out.with_state(last, EdgeState::Bioriented);
        for &f in &path[1..path.len() - 1] {
            let s = self.state_of(f).unwrap();
            out = out.with_state(f, s.reversed());
        }
        // e now points from the continuing end to the other one
        let first = if x == y || x == start { EdgeState::Forward } else { EdgeState::Backward };
        out = out.with_state(e, first);
        Ok(out)
    }

    /// An equivalent rooted orientation whose bioriented edge is `target`.
    pub fn move_biorientation(&self, g: &Graph, target: usize) -> Result<Orientation> {
        let Some(e) = self.bioriented_edge() else {
            return precondition("the empty orientation has no bioriented edge");
        };
        if target == e {
            return Ok(self.clone());
        }
        let goal = self
            .source_of(g, target)
            .ok_or_else(|| Error::Domain(format!("edge {target} is not in the carrier")))?;
        let (x, y) = g.ends(e);
        let n = g.vertex_count();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = VertexSet::from_indices(n, [x, y]);
        let mut queue = VecDeque::from([x, y]);
        while let Some(v) = queue.pop_front() {
            if v == goal {
                break;
            }
            for (f, _) in self.edge_states() {
                if f == e {
                    continue;
                }
                if self.source_of(g, f) == Some(v) {
                    let w = self.target_of(g, f).unwrap();
                    if !seen.contains(w) {
                        seen.insert(w);
                        prev[w] = Some((v, f));
                        queue.push_back(w);
                    }
                }
            }
        }
        if !seen.contains(goal) {
            return precondition("no directed path reaches the new edge; orientation is not rooted");
        }
        let mut rev = vec![target];
        let mut v = goal;
        while let Some((u, f)) = prev[v] {
            rev.push(f);
            v = u;
        }
        rev.push(e);
        rev.reverse();
        self.reverse_directed_path(g, &rev)
    }

    pub fn to_json(&self, g: &Graph) -> String {
        serde_json::to_string(&OrientationJson {
            graph: g.clone(),
            removed: self.removed.to_vec(),
            states: self.states.clone(),
            b: self.b,
        })
        .expect("orientation serialization is infallible")
    }

    /// Inverse of [`Orientation::to_json`], returning the graph as well.
    pub fn from_json(text: &str) -> Result<(Graph, Orientation)> {
        let raw: OrientationJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let removed = EdgeSet::from_indices(raw.graph.edge_count(), raw.removed);
        let o = Orientation::new(&raw.graph, removed, raw.states, raw.b)?;
        Ok((raw.graph, o))
    }
}

/// All `b`-orientations of `G − removed` in lexicographic order of states
/// (`+ < - < *`).
pub fn enumerate_orientations(g: &Graph, removed: &EdgeSet, b: u8) -> Vec<Orientation> {
    let m = g.edge_count() - removed.count();
    if m == 0 {
        return vec![Orientation { removed: *removed, states: Vec::new(), b }];
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fill(m, usize::from(b), &mut cur, &mut |s| {
        out.push(Orientation { removed: *removed, states: s.to_vec(), b })
    });
    out
}

fn fill(m: usize, stars: usize, cur: &mut Vec<EdgeState>, visit: &mut impl FnMut(&[EdgeState])) {
    if cur.len() == m {
        if stars == 0 {
            visit(cur);
        }
        return;
    }
    if m - cur.len() < stars {
        return;
    }
    for s in [EdgeState::Forward, EdgeState::Backward] {
        cur.push(s);
        fill(m, stars, cur, visit);
        cur.pop();
    }
    if stars > 0 {
        cur.push(EdgeState::Bioriented);
        fill(m, stars - 1, cur, visit);
        cur.pop();
    }
}

/// `O^b(G − removed)`: the admissible orientations, in lexicographic order.
pub fn enumerate_admissible(g: &Graph, removed: &EdgeSet, b: u8) -> Vec<Orientation> {
    enumerate_orientations(g, removed, b).into_iter().filter(|o| o.is_admissible(g)).collect()
}

/// One class of `∼`: orientations sharing a divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationClass {
    pub divisor: Divisor,
    /// Sorted; the first member is the representative.
    pub members: Vec<Orientation>,
}

impl OrientationClass {
    pub fn representative(&self) -> &Orientation {
        &self.members[0]
    }
}

/// Partition by divisor, classes ordered by representative.
pub fn equivalence_classes(g: &Graph, orients: &[Orientation]) -> Result<Vec<OrientationClass>> {
    let mut groups: BTreeMap<Divisor, Vec<Orientation>> = BTreeMap::new();
    if let Some(first) = orients.first() {
        if orients.iter().any(|o| o.removed != first.removed) {
            return domain("orientations live on different carriers");
        }
    }
    for o in orients {
        groups.entry(o.divisor_of(g)).or_default().push(o.clone());
    }
    let mut classes: Vec<OrientationClass> = groups
        .into_iter()
        .map(|(divisor, mut members)| {
            members.sort();
            members.dedup();
            OrientationClass { divisor, members }
        })
        .collect();
    classes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    Ok(classes)
}

/// A totally cyclic 0-orientation of a bridgeless graph: depth-first search per
/// component, tree edges away from the root, other edges back toward the
/// earlier-discovered end, loops `Forward`.
pub fn strong_orient(g: &Graph) -> Result<Orientation> {
    if !g.bridges().is_empty() {
        return precondition("a graph with bridges has no totally cyclic orientation");
    }
    Ok(Orientation { removed: g.no_edges(), states: dfs_orient(g, &g.all_edges()), b: 0 })
}

/// DFS orientation of the edges in `kept`, returned for those edges in order.
fn dfs_orient(g: &Graph, kept: &EdgeSet) -> Vec<EdgeState> {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e in kept.iter() {
        let (t, h) = g.ends(e);
        if t != h {
            adj[t].push((h, e));
            adj[h].push((t, e));
        }
    }
    let mut order = vec![usize::MAX; n];
    let mut state: Vec<Option<EdgeState>> = vec![None; g.edge_count()];
    let mut clock = 0;
    for root in 0..n {
        if order[root] != usize::MAX {
            continue;
        }
        order[root] = clock;
        clock += 1;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next == adj[v].len() {
                stack.pop();
                continue;
            }
            let (w, e) = adj[v][*next];
            *next += 1;
            if state[e].is_some() {
                continue;
            }
            let forward = g.ends(e).0 == v;
            if order[w] == usize::MAX {
                // tree edge v → w
                state[e] = Some(if forward { EdgeState::Forward } else { EdgeState::Backward });
                order[w] = clock;
                clock += 1;
                stack.push((w, 0));
            } else {
                // back edge from the later end v to the ancestor w
                debug_assert!(order[w] < order[v]);
                state[e] = Some(if forward { EdgeState::Forward } else { EdgeState::Backward });
            }
        }
    }
    kept.iter().map(|e| state[e].unwrap_or(EdgeState::Forward)).collect()
}

/// A rooted 1-orientation of a connected graph: strong-orient the bridgeless
/// pieces of `G − G_br`, biorient the first edge of the first piece with edges
/// (the first bridge if `G` is a tree), then orient bridges away from the
/// pieces already reached, one layer at a time.
pub fn rooted_orient(g: &Graph) -> Result<Orientation> {
    if !g.is_connected() {
        return precondition("rooted orientations exist only on connected graphs");
    }
    if g.edge_count() == 0 {
        return Ok(Orientation::empty(g, 1));
    }
    let bridges = g.bridges();
    let inner = bridges.complement();
    let mut state: Vec<Option<EdgeState>> = vec![None; g.edge_count()];
    for (e, s) in inner.iter().zip(dfs_orient(g, &inner)) {
        state[e] = Some(s);
    }
    let labels = g.component_labels_within(&inner);
    let mut reached = vec![false; labels.iter().max().map_or(0, |m| m + 1)];
    let first = inner.iter().min_by_key(|&e| (labels[g.ends(e).0], e));
    match first {
        Some(e) => {
            state[e] = Some(EdgeState::Bioriented);
            reached[labels[g.ends(e).0]] = true;
        }
        None => {
            let e = bridges.iter().next().expect("connected graph with edges");
            state[e] = Some(EdgeState::Bioriented);
            let (t, h) = g.ends(e);
            reached[labels[t]] = true;
            reached[labels[h]] = true;
        }
    }
    loop {
        let layer: Vec<(usize, bool)> = bridges
            .iter()
            .filter(|&e| state[e].is_none())
            .filter_map(|e| {
                let (t, h) = g.ends(e);
                match (reached[labels[t]], reached[labels[h]]) {
                    (true, false) => Some((e, true)),
                    (false, true) => Some((e, false)),
                    _ => None,
                }
            })
            .collect();
        if layer.is_empty() {
            break;
        }
        for (e, forward) in layer {
            state[e] = Some(if forward { EdgeState::Forward } else { EdgeState::Backward });
            let (t, h) = g.ends(e);
            reached[labels[if forward { h } else { t }]] = true;
        }
    }
    let states = state.into_iter().map(|s| s.expect("every bridge reached")).collect();
    Ok(Orientation { removed: g.no_edges(), states, b: 1 })
}

/// Extends an admissible orientation of `G − S` to one of `G − T` (`T ⊆ S`) that
/// restricts back to it: strong-orient the quotient `(G − T)(S ∖ T)` and copy
/// the induced states onto the edges of `S ∖ T`.
pub fn extend_orientation(g: &Graph, o_s: &Orientation, t: &EdgeSet) -> Result<Orientation> {
    let s = o_s.removed;
    if !t.is_subset(&s) {
        return domain("extension needs T ⊆ S");
    }
    if !o_s.is_admissible(g) {
        return precondition("orientation to extend is not admissible");
    }
    let fresh = s.difference(t);
    let carrier = g.delete_edges(t);
    let kept = g.kept_edges(t);
    let fresh_local =
        EdgeSet::from_indices(carrier.edge_count(), (0..kept.len()).filter(|&i| fresh.contains(kept[i])));
    let quotient = carrier.quotient_to(&fresh_local);
    let tilde = strong_orient(&quotient)
        .map_err(|_| Error::Precondition("S ∖ T leaves bridges in the quotient; T is not admissible".into()))?;
    let induced = crate::functor::induced_on_spanned(&carrier, &fresh_local, &tilde)?;
    let mut states = Vec::with_capacity(kept.len());
    for (i, &e) in kept.iter().enumerate() {
        states.push(if fresh.contains(e) {
            induced.state_of(i).expect("fresh edge is oriented")
        } else {
            o_s.state_of(e).expect("carrier edge")
        });
    }
    let mut out = Orientation { removed: *t, states, b: o_s.b };
    if o_s.b == 1 && o_s.states.is_empty() {
        if let Some(first) = fresh.iter().next() {
            // the empty rooted orientation has no bioriented edge to inherit
            out = out.with_state(first, EdgeState::Bioriented);
        }
    }
    if !out.is_admissible(g) {
        return precondition("extension is not admissible; S or T is not admissible");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn o(g: &Graph, code: &str, b: u8) -> Orientation {
        Orientation::parse(g, g.no_edges(), code, b).unwrap()
    }

    fn dv(xs: &[i64]) -> Divisor {
        Divisor::new(xs.to_vec())
    }

    fn all_cyclic(g: &Graph, x: &Orientation) -> Vec<bool> {
        CyclicMode::ALL.iter().map(|&m| x.is_totally_cyclic(g, m).unwrap()).collect()
    }

    fn all_rooted(g: &Graph, x: &Orientation) -> Vec<bool> {
        RootedMode::ALL.iter().map(|&m| x.is_rooted(g, m).unwrap()).collect()
    }

    #[test]
    fn target_and_divisor() {
        let g = theta_chain();
        let s = EdgeSet::singleton(6, 2);
        // u1 → u2 twice... one each way on the double edge, then u2 ⇄ u3 cyclic with one
        // extra edge into u3: t = (1, 2, 2)
        let os = Orientation::parse(&g, s, "+-+-+", 0).unwrap();
        assert_eq!(os.target_vector(&g), dv(&[1, 2, 2]));
        assert_eq!(os.divisor_of(&g), dv(&[1, 2, 2]));
        assert!(os.is_admissible(&g));

        let one = Graph::new(vec![0], vec![(0, 0)]).unwrap();
        assert_eq!(o(&one, "*", 1).target_vector(&one), dv(&[2]));
        let e = Orientation::empty(&single(2), 1);
        assert_eq!(e.target_vector(&single(2)), dv(&[0]));
        assert_eq!(e.divisor_of(&single(2)), dv(&[2]));
        let t = theta();
        assert_eq!(o(&t, "+-+", 0).divisor_of(&t), dv(&[0, 1]));
    }

    #[test]
    fn t_into_identity() {
        let t = theta();
        let x = o(&t, "+-+", 0);
        let z = VertexSet::singleton(2, 0);
        assert_eq!(x.t_into(&t, &z), 1);
        assert_eq!(x.t_into(&t, &VertexSet::full(2)), 0);
        let y = o(&t, "*-+", 1);
        assert_eq!(y.t_into(&t, &z), 2);
        for x in enumerate_orientations(&t, &t.no_edges(), 1) {
            for z in VertexSet::all_subsets(2) {
                let tz = x.target_vector(&t).degree_on(&z);
                let inside = t.induced_edges(&z).count() as i64;
                assert_eq!(x.t_into(&t, &z), tz - inside - x.b_within(&t, &z));
            }
        }
    }

    #[test]
    fn totally_cyclic_examples() {
        let t = theta();
        assert_eq!(all_cyclic(&t, &o(&t, "+-+", 0)), vec![true; 5]);
        assert_eq!(all_cyclic(&t, &o(&t, "+++", 0)), vec![false; 5]);
        let bare = Orientation::empty(&t, 0);
        assert_eq!(all_cyclic(&t, &bare), vec![true; 5]);
        assert!(o(&t, "*-+", 1).is_totally_cyclic(&t, CyclicMode::NoDirectedCut).is_err());
    }

    #[test]
    fn rooted_examples() {
        let d = dumbbell();
        let rooted: Vec<_> = ["++*", "+-*", "-+*", "--*"].iter().map(|c| o(&d, c, 1)).collect();
        for x in &rooted {
            assert_eq!(all_rooted(&d, x), vec![true; 5]);
        }
        // bridge is edge 2, oriented 1 → 0, loop at 0 bioriented
        let bad = o(&d, "*+-", 1);
        assert_eq!(all_rooted(&d, &bad), vec![false; 5]);
        let e = Orientation::empty(&single(2), 1);
        assert_eq!(all_rooted(&single(2), &e), vec![true; 5]);
        let bare = Orientation::empty(&d, 1);
        assert_eq!(all_rooted(&d, &bare), vec![false; 5]);
    }

    #[test]
    fn enumeration_counts() {
        let t = theta();
        let d = dumbbell();
        assert_eq!(enumerate_orientations(&t, &t.no_edges(), 0).len(), 8);
        assert_eq!(enumerate_orientations(&t, &t.no_edges(), 1).len(), 12);
        assert_eq!(enumerate_admissible(&t, &t.no_edges(), 0).len(), 6);
        assert_eq!(enumerate_admissible(&t, &t.no_edges(), 1).len(), 12);
        assert_eq!(enumerate_admissible(&d, &d.no_edges(), 1).len(), 8);
        assert!(enumerate_admissible(&d, &d.no_edges(), 0).is_empty());
        let all = enumerate_orientations(&t, &t.no_edges(), 1);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn classes() {
        let t = theta();
        let cls = equivalence_classes(&t, &enumerate_admissible(&t, &t.no_edges(), 0)).unwrap();
        assert_eq!(cls.len(), 2);
        assert!(cls.iter().all(|c| c.members.len() == 3));
        let d = dumbbell();
        let cls = equivalence_classes(&d, &enumerate_admissible(&d, &d.no_edges(), 1)).unwrap();
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].members.len(), 8);
        assert_eq!(cls[0].divisor, dv(&[1, 1]));
        let s = EdgeSet::singleton(3, 0);
        let cls = equivalence_classes(&t, &enumerate_admissible(&t, &s, 0)).unwrap();
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].members.len(), 2);
    }

    #[test]
    fn path_reversal() {
        let d = dumbbell();
        let x = o(&d, "*++", 1);
        let y = x.reverse_directed_path(&d, &[0, 2]).unwrap();
        assert_eq!(y.bioriented_edge(), Some(2));
        assert_eq!(y.divisor_of(&d), x.divisor_of(&d));
        assert_eq!(x.reverse_directed_path(&d, &[0]).unwrap(), x);

        let t = theta();
        let x = o(&t, "*-+", 1);
        let y = x.reverse_directed_path(&t, &[0, 1]).unwrap();
        assert_eq!(y.code(), "-*+");
        assert_eq!(y.divisor_of(&t), x.divisor_of(&t));
    }

    #[test]
    fn move_biorientation_everywhere() {
        for g in [theta(), dumbbell(), theta_chain()] {
            for x in enumerate_admissible(&g, &g.no_edges(), 1) {
                for e in 0..g.edge_count() {
                    let y = x.move_biorientation(&g, e).unwrap();
                    assert_eq!(y.bioriented_edge(), Some(e));
                    assert!(y.is_admissible(&g));
                    assert_eq!(y.divisor_of(&g), x.divisor_of(&g));
                }
            }
        }
        let d = dumbbell();
        let x = o(&d, "++*", 1);
        assert_eq!(x.move_biorientation(&d, 2).unwrap(), x);
    }

    #[test]
    fn constructions() {
        let t = theta();
        assert!(strong_orient(&t).unwrap().is_admissible(&t));
        let cycle = Graph::new(vec![0, 0, 0], vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let c = strong_orient(&cycle).unwrap();
        assert!(["+++", "---"].contains(&c.code().as_str()));
        let bare = Graph::new(vec![1, 1], vec![]).unwrap();
        assert!(strong_orient(&bare).unwrap().states().is_empty());
        assert!(strong_orient(&dumbbell()).is_err());

        for g in [theta(), dumbbell(), theta_chain(), single(2)] {
            let r = rooted_orient(&g).unwrap();
            assert_eq!(r.b(), 1);
            assert_eq!(all_rooted(&g, &r), vec![true; 5]);
        }
        let tree = Graph::new(vec![1, 1, 1], vec![(0, 1), (2, 1)]).unwrap();
        assert!(rooted_orient(&tree).unwrap().is_admissible(&tree));
    }

    #[test]
    fn restriction() {
        let g = theta_chain();
        let x = o(&g, "+-*-++", 1);
        let s = EdgeSet::singleton(6, 2);
        let r = x.restrict(&s).unwrap();
        assert_eq!(r.code(), "+--++");
        assert_eq!(r.b(), 0);
        assert_eq!(x.restrict(&g.no_edges()).unwrap(), x);
        let u = EdgeSet::from_indices(6, [2, 3]);
        assert_eq!(r.restrict(&u).unwrap(), x.restrict(&u).unwrap());
        assert!(r.restrict(&g.no_edges()).is_err());
    }

    #[test]
    fn extension() {
        let t = theta();
        let s = EdgeSet::singleton(3, 0);
        let os = Orientation::parse(&t, s, "+-", 0).unwrap();
        let ext = extend_orientation(&t, &os, &t.no_edges()).unwrap();
        assert!(ext.is_admissible(&t));
        assert_eq!(ext.restrict(&s).unwrap(), os);
        assert_eq!(extend_orientation(&t, &os, &s).unwrap(), os);

        let loops = Graph::new(vec![0], vec![(0, 0), (0, 0), (0, 0)]).unwrap();
        let top = Orientation::empty(&loops, 1);
        let ext = extend_orientation(&loops, &top, &loops.no_edges()).unwrap();
        assert_eq!(ext.b(), 1);
        assert!(ext.is_admissible(&loops));
    }

    #[test]
    fn json_round_trip() {
        let t = theta();
        let x = Orientation::parse(&t, EdgeSet::singleton(3, 1), "*-", 1).unwrap();
        let text = x.to_json(&t);
        assert!(text.contains("\"states\":[\"*\",\"-\"]"));
        let (g, y) = Orientation::from_json(&text).unwrap();
        assert_eq!(g, t);
        assert_eq!(y, x);
    }
}
