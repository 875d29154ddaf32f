//! The posets `A^b_G`, `OP^b_G` and `ŌP^b_G` of a graph.

use serde::Serialize;

use crate::bitset::EdgeSet;
use crate::divisor::Divisor;
use crate::error::{domain, Result};
use crate::graph::Graph;
use crate::orientation::{enumerate_admissible, Orientation};
use crate::poset::{quotient_by_equivalence, FinitePoset};

/// An element of `ŌP^b_G`: the carrier `G − S` and the common divisor of the class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct ClassKey {
    pub removed: EdgeSet,
    pub divisor: Divisor,
}

impl ClassKey {
    pub fn of(g: &Graph, o: &Orientation) -> ClassKey {
        ClassKey { removed: *o.removed(), divisor: o.divisor_of(g) }
    }

    /// Lexicographically least admissible member of the class.
    pub fn representative(&self, g: &Graph, b: u8) -> Option<Orientation> {
        enumerate_admissible(g, &self.removed, b)
            .into_iter()
            .find(|o| o.divisor_of(g) == self.divisor)
    }

    pub fn label(&self) -> String {
        format!("{:?} {}", self.removed, self.divisor)
    }
}

fn check_b(b: u8) -> Result<()> {
    if b > 1 {
        return domain(format!("b must be 0 or 1, got {b}"));
    }
    Ok(())
}

/// Whether `S ∈ A^b_G`: `G − S` bridgeless for `b = 0`, connected for `b = 1`.
pub fn is_admissible_set(g: &Graph, s: &EdgeSet, b: u8) -> bool {
    let kept = s.complement();
    if b == 0 {
        g.bridges_within(&kept).is_empty()
    } else {
        g.component_count_within(&kept) == 1
    }
}

/// Elements of `A^b_G` in increasing bit order.
pub fn admissible_sets(g: &Graph, b: u8) -> Vec<EdgeSet> {
    EdgeSet::all_subsets(g.edge_count()).filter(|s| is_admissible_set(g, s, b)).collect()
}

/// `g(G − S)`.
pub fn rank_of(g: &Graph, s: &EdgeSet) -> i64 {
    g.genus() - s.count() as i64 + g.component_count_within(&s.complement()) as i64
        - g.component_count() as i64
}

/// `A^b_G` ordered by reverse inclusion, ranked by `g(G − S)`.
pub fn build_a(g: &Graph, b: u8) -> Result<FinitePoset<EdgeSet>> {
    check_b(b)?;
    let p = FinitePoset::new(admissible_sets(g, b), |s, t| t.is_subset(s))?;
    Ok(p.with_rank(|s| rank_of(g, s)))
}

/// `OP^b_G`: admissible orientations of every `G − S`, `S ∈ A^b_G`, with
/// `O_S ≤ O_T` iff `T ⊆ S` and `O_T` restricts to `O_S`.
pub fn build_op(g: &Graph, b: u8) -> Result<FinitePoset<Orientation>> {
    check_b(b)?;
    let elements: Vec<Orientation> = admissible_sets(g, b)
        .iter()
        .flat_map(|s| enumerate_admissible(g, s, b))
        .collect();
    let p = FinitePoset::new(elements, op_leq)?;
    Ok(p.with_rank(|o| rank_of(g, o.removed())))
}

/// The order of `OP^b_G`.
pub fn op_leq(x: &Orientation, y: &Orientation) -> bool {
    y.removed().is_subset(x.removed()) && y.restrict(x.removed()).is_ok_and(|r| &r == x)
}

/// `ŌP^b_G` together with the projection from `OP^b_G` (on indices).
pub fn build_opbar(g: &Graph, b: u8) -> Result<(FinitePoset<ClassKey>, FinitePoset<Orientation>, Vec<usize>)> {
    let op = build_op(g, b)?;
    let (bar, proj) = quotient_by_equivalence(&op, |o| ClassKey::of(g, o))?;
    Ok((bar, op, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::poset::is_quotient_map;

    fn es(n: usize, xs: &[usize]) -> EdgeSet {
        EdgeSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn a_theta() {
        let t = theta();
        let a0 = build_a(&t, 0).unwrap();
        assert_eq!(a0.len(), 5);
        assert!(a0.is_graded());
        let mut ranks = a0.ranks().unwrap().to_vec();
        ranks.sort();
        assert_eq!(ranks, vec![0, 1, 1, 1, 2]);
        assert_eq!(a0.maximal(), vec![a0.index_of(&t.no_edges()).unwrap()]);
        assert_eq!(a0.minimal(), vec![a0.index_of(&t.all_edges()).unwrap()]);
        assert_eq!(a0.covers().len(), 6);

        let a1 = build_a(&t, 1).unwrap();
        assert_eq!(a1.len(), 7);
        assert!(a1.is_graded());
        assert_eq!(a1.minimal().len(), 3);
        assert!(a1.minimal().iter().all(|&i| a1.key(i).count() == 2));
    }

    #[test]
    fn a_dumbbell() {
        let d = dumbbell();
        let a0 = build_a(&d, 0).unwrap();
        let got: Vec<EdgeSet> = a0.elements().to_vec();
        assert_eq!(got, vec![es(3, &[2]), es(3, &[0, 2]), es(3, &[1, 2]), es(3, &[0, 1, 2])]);
        assert!(a0.is_graded());
        let disconnected = Graph::new(vec![1, 1], vec![]).unwrap();
        assert!(build_a(&disconnected, 1).unwrap().is_empty());
    }

    #[test]
    fn op_theta() {
        let t = theta();
        let (bar, op, proj) = build_opbar(&t, 0).unwrap();
        assert_eq!(op.len(), 13);
        assert_eq!(bar.len(), 6);
        assert!(op.is_graded());
        assert!(bar.is_graded());
        assert!(is_quotient_map(&proj, &op, &bar));
        let a = build_a(&t, 0).unwrap();
        let forget: Vec<usize> = op.elements().iter().map(|o| a.index_of(o.removed()).unwrap()).collect();
        assert!(is_quotient_map(&forget, &op, &a));
    }

    #[test]
    fn op_single_vertex() {
        let s = single(2);
        let (bar, op, _) = build_opbar(&s, 1).unwrap();
        assert_eq!((op.len(), bar.len()), (1, 1));
    }
}
