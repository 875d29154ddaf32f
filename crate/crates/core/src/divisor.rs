//! Divisors on graphs, stable divisors `Σ^b(G)` and orientability of divisors.

use std::ops::{Add, Index, Sub};

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{domain, precondition, Error, Result};
use crate::graph::{Graph, Subdivision};
use crate::orientation::{EdgeState, Orientation};

/// An integer vector indexed by the vertices of a carrier graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn new(values: Vec<i64>) -> Self {
        Divisor(values)
    }

    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    /// The divisor `1·v` on `n` vertices.
    pub fn unit(n: usize, v: usize) -> Self {
        let mut d = Self::zero(n);
        d.0[v] = 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    /// `|d|`.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `d_Z`, zero-extended outside `Z`.
    pub fn restrict(&self, z: &VertexSet) -> Result<Divisor> {
        self.check_len(z.len())?;
        Ok(Divisor(
            self.0.iter().enumerate().map(|(v, &x)| if z.contains(v) { x } else { 0 }).collect(),
        ))
    }

    /// `|d_Z|`.
    pub fn degree_on(&self, z: &VertexSet) -> i64 {
        z.iter().map(|v| self.0[v]).sum()
    }

    /// Coordinatewise `d ≤ d'`.
    pub fn partial_leq(&self, other: &Divisor) -> Result<bool> {
        self.check_len(other.len())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return domain(format!("divisor of length {} on a carrier with {n} vertices", self.len()));
        }
        Ok(())
    }
}

impl Index<usize> for Divisor {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.0[v]
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.len(), rhs.len(), "carrier mismatch");
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.len(), rhs.len(), "carrier mismatch");
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl std::fmt::Display for Divisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn check_b(b: u8) -> Result<()> {
    if b > 1 {
        return domain(format!("b must be 0 or 1, got {b}"));
    }
    Ok(())
}

/// Whether `d` is a stable divisor of the kind indexed by `b`.
///
/// `b = 1`: `G` connected, `|d| = g` and `|d_Z| > g(Z) − 1` for all nonempty `Z`.
/// `b = 0`: on each connected component `G_i`, `|d_{G_i}| = g(G_i) − 1` and
/// `|d_Z| > g(Z) − 1` for every nonempty proper subset `Z` of the component.
pub fn is_stable_divisor(g: &Graph, d: &Divisor, b: u8) -> Result<bool> {
    check_b(b)?;
    d.check_len(g.vertex_count())?;
    if b == 1 {
        if !g.is_connected() || d.degree() != g.genus() {
            return Ok(false);
        }
        return Ok(VertexSet::all_subsets(g.vertex_count())
            .skip(1)
            .all(|z| d.degree_on(&z) > g.subset_genus(&z) - 1));
    }
    for comp in g.connected_components() {
        if d.degree_on(&comp) != g.subset_genus(&comp) - 1 {
            return Ok(false);
        }
        let proper_ok = comp
            .subsets()
            .filter(|z| !z.is_empty() && z != &comp)
            .all(|z| d.degree_on(&z) > g.subset_genus(&z) - 1);
        if !proper_ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ^b(G)` in lexicographic order.
///
/// Coordinate `v` ranges over `w(v) − 1 + t` with `0 ≤ t ≤ deg(v) + b`: every
/// divisor of a `b`-orientation lies in this box.
pub fn sigma(g: &Graph, b: u8) -> Result<Vec<Divisor>> {
    sigma_in_window(g, b, 0)
}

/// `Σ^b(G)` searched in the orientation box widened by `slack` on both sides.
pub fn sigma_in_window(g: &Graph, b: u8, slack: i64) -> Result<Vec<Divisor>> {
    check_b(b)?;
    if b == 1 && !g.is_connected() {
        return Ok(Vec::new());
    }
    let target = g.genus() - g.component_count() as i64 + i64::from(b);
    let lo: Vec<i64> = (0..g.vertex_count()).map(|v| i64::from(g.weight(v)) - 1 - slack).collect();
    let hi: Vec<i64> = (0..g.vertex_count())
        .map(|v| i64::from(g.weight(v)) - 1 + (g.degree(v) as i64) + i64::from(b) + slack)
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(g.vertex_count());
    box_search(&lo, &hi, target, &mut cur, &mut |d| {
        let d = Divisor::new(d.to_vec());
        if is_stable_divisor(g, &d, b).expect("lengths agree") {
            out.push(d);
        }
    });
    Ok(out)
}

/// Visits every integer vector in the box `lo..=hi` with coordinate sum `target`,
/// in lexicographic order.
fn box_search(lo: &[i64], hi: &[i64], target: i64, cur: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
    let i = cur.len();
    if i == lo.len() {
        if target == 0 {
            visit(cur);
        }
        return;
    }
    let rest_lo: i64 = lo[i + 1..].iter().sum();
    let rest_hi: i64 = hi[i + 1..].iter().sum();
    let from = lo[i].max(target - rest_hi);
    let to = hi[i].min(target - rest_lo);
    for x in from..=to {
        cur.push(x);
        box_search(lo, hi, target - x, cur, visit);
        cur.pop();
    }
}

/// The orientability inequalities: `|d_Z| ≥ g(Z) − 1` for every nonempty `Z`
/// with `G[Z]` connected.
pub fn hakimi_condition(g: &Graph, d: &Divisor) -> bool {
    VertexSet::all_subsets(g.vertex_count())
        .skip(1)
        .filter(|z| g.is_connected_subset(z))
        .all(|z| d.degree_on(&z) >= g.subset_genus(&z) - 1)
}

/// Depth-first search for a 0-orientation of `G` with divisor `d`, trying edges
/// in index order and `Forward` before `Backward`. Loops are always `Forward`.
pub fn hakimi_search(g: &Graph, d: &Divisor) -> Option<Orientation> {
    if d.len() != g.vertex_count() {
        return None;
    }
    let mut need: Vec<i64> =
        (0..g.vertex_count()).map(|v| d[v] - i64::from(g.weight(v)) + 1).collect();
    // remaining incident edge slots per vertex; a loop fills exactly one slot
    let mut capacity = vec![0i64; g.vertex_count()];
    for &(t, h) in g.edges() {
        capacity[t] += 1;
        if t != h {
            capacity[h] += 1;
        }
    }
    if need.iter().zip(&capacity).any(|(n, c)| *n < 0 || n > c) {
        return None;
    }
    let mut states = Vec::with_capacity(g.edge_count());
    if hakimi_dfs(g, 0, &mut need, &mut capacity, &mut states) {
        Some(Orientation::whole(g, states, 0).expect("states cover every edge"))
    } else {
        None
    }
}

fn hakimi_dfs(
    g: &Graph,
    e: usize,
    need: &mut [i64],
    cap: &mut [i64],
    states: &mut Vec<EdgeState>,
) -> bool {
    if e == g.edge_count() {
        return need.iter().all(|&n| n == 0);
    }
    let (t, h) = g.ends(e);
    if t == h {
        need[t] -= 1;
        cap[t] -= 1;
        let ok = need[t] >= 0 && hakimi_dfs(g, e + 1, need, cap, states_push(states, EdgeState::Forward));
        need[t] += 1;
        cap[t] += 1;
        if !ok {
            states.pop();
        }
        return ok;
    }
    cap[t] -= 1;
    cap[h] -= 1;
    for (state, into, other) in [(EdgeState::Forward, h, t), (EdgeState::Backward, t, h)] {
        need[into] -= 1;
        if need[into] >= 0 && need[other] <= cap[other] && need[into] <= cap[into] {
            states.push(state);
            if hakimi_dfs(g, e + 1, need, cap, states) {
                return true;
            }
            states.pop();
        }
        need[into] += 1;
    }
    cap[t] += 1;
    cap[h] += 1;
    false
}

fn states_push(states: &mut Vec<EdgeState>, s: EdgeState) -> &mut Vec<EdgeState> {
    states.push(s);
    states
}

/// A 0-orientation `O` of the connected graph `G` with `d^O = d`, if one exists.
/// `d` must have degree `g − 1`.
pub fn hakimi_witness(g: &Graph, d: &Divisor) -> Result<Option<Orientation>> {
    d.check_len(g.vertex_count())?;
    if !g.is_connected() {
        return precondition("orientability is decided on connected graphs");
    }
    if d.degree() != g.genus() - 1 {
        return domain(format!("divisor has degree {}, expected g - 1 = {}", d.degree(), g.genus() - 1));
    }
    if !hakimi_condition(g, d) {
        return Ok(None);
    }
    match hakimi_search(g, d) {
        Some(o) => Ok(Some(o)),
        None => Err(Error::Precondition(format!(
            "inequalities hold for {d} but no orientation was found"
        ))),
    }
}

/// A 1-orientation realizing a stable divisor of degree `g`: realize `d − v₀` by a
/// 0-orientation, then biorient an edge leaving `v₀` (vertex 0).
pub fn stable_to_orientation(g: &Graph, d: &Divisor) -> Result<Orientation> {
    if !is_stable_divisor(g, d, 1)? {
        return domain(format!("{d} is not a stable divisor of degree g"));
    }
    if g.edge_count() == 0 {
        return Orientation::whole(g, Vec::new(), 1);
    }
    let v = 0;
    let shifted = d - &Divisor::unit(g.vertex_count(), v);
    let base = hakimi_witness(g, &shifted)?
        .ok_or_else(|| Error::Precondition(format!("{shifted} is not orientable")))?;
    let e = (0..g.edge_count())
        .find(|&e| base.source_of(g, e) == Some(v))
        .ok_or_else(|| Error::Precondition("no edge leaves the chosen vertex".into()))?;
    Ok(base.with_state(e, EdgeState::Bioriented))
}

/// `d̂`: `d` on the original vertices, `1` on every exceptional vertex.
pub fn hat_divisor(d: &Divisor, sub: &Subdivision) -> Result<Divisor> {
    d.check_len(sub.original_vertices)?;
    let mut values = d.values().to_vec();
    values.extend(std::iter::repeat_n(1, sub.exceptional.len()));
    Ok(Divisor::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::EdgeSet;
    use crate::graph::fixtures::*;

    fn dv(xs: &[i64]) -> Divisor {
        Divisor::new(xs.to_vec())
    }

    #[test]
    fn degree_restrict_order() {
        let d = dv(&[1, 2, 2]);
        assert_eq!(d.degree(), 5);
        let z = VertexSet::from_indices(3, [0]);
        assert_eq!(d.restrict(&z).unwrap(), dv(&[1, 0, 0]));
        assert_eq!(d.degree_on(&z), 1);
        assert!(dv(&[0, 1]).partial_leq(&dv(&[1, 1])).unwrap());
        assert!(!dv(&[1, 0]).partial_leq(&dv(&[0, 1])).unwrap());
        assert!(dv(&[1, 0]).partial_leq(&dv(&[0, 1, 0])).is_err());
    }

    #[test]
    fn stable_divisor_examples() {
        let t = theta();
        assert!(is_stable_divisor(&t, &dv(&[0, 1]), 0).unwrap());
        assert!(!is_stable_divisor(&t, &dv(&[-1, 2]), 0).unwrap());
        assert!(is_stable_divisor(&dumbbell(), &dv(&[1, 1]), 1).unwrap());
        let bare = t.delete_edges(&t.all_edges());
        assert!(is_stable_divisor(&bare, &dv(&[-1, -1]), 0).unwrap());
        assert!(!is_stable_divisor(&bare, &dv(&[0, 0]), 1).unwrap());
        assert!(is_stable_divisor(&t, &dv(&[0, 1]), 2).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&theta(), 0).unwrap(), vec![dv(&[0, 1]), dv(&[1, 0])]);
        assert_eq!(sigma(&dumbbell(), 1).unwrap(), vec![dv(&[1, 1])]);
        assert_eq!(sigma(&single(2), 1).unwrap(), vec![dv(&[2])]);
        let bare = theta().delete_edges(&theta().all_edges());
        assert_eq!(sigma(&bare, 1).unwrap(), Vec::<Divisor>::new());
    }

    #[test]
    fn hakimi_examples() {
        let t = theta();
        let o = hakimi_witness(&t, &dv(&[1, 0])).unwrap().unwrap();
        assert_eq!(o.target_vector(&t), dv(&[2, 1]));
        let o = hakimi_witness(&t, &dv(&[-1, 2])).unwrap().unwrap();
        assert_eq!(o.target_vector(&t), dv(&[0, 3]));
        assert!(hakimi_witness(&t, &dv(&[3, -2])).unwrap().is_none());
        assert!(hakimi_witness(&t, &dv(&[1, 1])).is_err());
    }

    #[test]
    fn hakimi_condition_uses_connected_subsets() {
        // path u - v - w: both outer vertices receive nothing
        let p = Graph::new(vec![0, 0, 0], vec![(0, 1), (2, 1)]).unwrap();
        let d = dv(&[-1, 1, -1]);
        assert!(hakimi_search(&p, &d).is_some());
        assert!(hakimi_condition(&p, &d));
    }

    #[test]
    fn stable_to_orientation_examples() {
        for g in [theta(), dumbbell()] {
            let o = stable_to_orientation(&g, &dv(&[1, 1])).unwrap();
            assert_eq!(o.b(), 1);
            assert_eq!(o.target_vector(&g), dv(&[2, 2]));
            assert_eq!(o.divisor_of(&g), dv(&[1, 1]));
        }
        let s = single(2);
        let o = stable_to_orientation(&s, &dv(&[2])).unwrap();
        assert!(o.states().is_empty());
        assert_eq!(o.divisor_of(&s), dv(&[2]));
        assert!(stable_to_orientation(&theta(), &dv(&[3, -1])).is_err());
    }

    #[test]
    fn hat_divisor_extends_by_one() {
        let t = theta();
        let (_, sub) = t.subdivide(&EdgeSet::from_indices(3, [0]));
        assert_eq!(hat_divisor(&dv(&[0, 1]), &sub).unwrap(), dv(&[0, 1, 1]));
        let (_, none) = t.subdivide(&t.no_edges());
        assert_eq!(hat_divisor(&dv(&[0, 1]), &none).unwrap(), dv(&[0, 1]));
        let (_, all) = t.subdivide(&t.all_edges());
        assert_eq!(hat_divisor(&dv(&[0, 1]), &all).unwrap().degree(), 1 + 3);
    }
}
