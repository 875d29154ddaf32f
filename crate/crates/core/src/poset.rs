//! Finite posets with an explicit relation matrix, optional rank, Hasse
//! diagrams and quotients by equivalence relations.

use std::collections::BTreeMap;
use std::fmt::{Debug, Write as _};

use serde_json::json;

use crate::error::{Error, Result};

/// Square boolean matrix with `u64` rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Relation { n, words, bits: vec![0; n * words] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Columns set in row `i`.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut x = word;
            std::iter::from_fn(move || {
                if x == 0 {
                    return None;
                }
                let b = x.trailing_zeros() as usize;
                x &= x - 1;
                Some(w * 64 + b)
            })
        })
    }

    fn row_is_subset(&self, i: usize, j: usize) -> bool {
        self.row(i).iter().zip(self.row(j)).all(|(a, b)| a & !b == 0)
    }
}

/// A validated finite partial order on keys of type `K`.
#[derive(Clone, Debug)]
pub struct FinitePoset<K> {
    elements: Vec<K>,
    index: BTreeMap<K, usize>,
    leq: Relation,
    rank: Option<Vec<i64>>,
}

impl<K: Clone + Ord + Debug> FinitePoset<K> {
    /// Materializes `leq` on every pair and checks the partial order axioms.
    pub fn new(elements: Vec<K>, leq: impl Fn(&K, &K) -> bool) -> Result<Self> {
        let n = elements.len();
        let mut rel = Relation::new(n);
        for i in 0..n {
            for j in 0..n {
                if leq(&elements[i], &elements[j]) {
                    rel.set(i, j);
                }
            }
        }
        Self::from_relation(elements, rel)
    }

    /// Wraps an explicit relation matrix (`rel.get(i, j)` ⇔ `elements[i] ≤ elements[j]`).
    pub fn from_relation(elements: Vec<K>, rel: Relation) -> Result<Self> {
        if rel.len() != elements.len() {
            return Err(Error::PosetAxiom("relation size does not match element count".into()));
        }
        let mut index = BTreeMap::new();
        for (i, k) in elements.iter().enumerate() {
            if index.insert(k.clone(), i).is_some() {
                return Err(Error::PosetAxiom(format!("duplicate element {k:?}")));
            }
        }
        let p = FinitePoset { elements, index, leq: rel, rank: None };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        let e = &self.elements;
        for i in 0..n {
            if !self.leq.get(i, i) {
                return Err(Error::PosetAxiom(format!("not reflexive at {:?}", e[i])));
            }
        }
        for i in 0..n {
            for j in self.leq.successors(i) {
                if i != j && self.leq.get(j, i) {
                    return Err(Error::PosetAxiom(format!(
                        "not antisymmetric: {:?} and {:?}",
                        e[i], e[j]
                    )));
                }
                // i ≤ j forces every successor of j to be one of i
                if !self.leq.row_is_subset(j, i) {
                    let k = self.leq.successors(j).find(|&k| !self.leq.get(i, k)).unwrap();
                    return Err(Error::PosetAxiom(format!(
                        "not transitive: {:?} ≤ {:?} ≤ {:?}",
                        e[i], e[j], e[k]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Attaches a rank function.
    pub fn with_rank(mut self, rank: impl Fn(&K) -> i64) -> Self {
        self.rank = Some(self.elements.iter().map(rank).collect());
        self
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[K] {
        &self.elements
    }

    pub fn key(&self, i: usize) -> &K {
        &self.elements[i]
    }

    pub fn index_of(&self, k: &K) -> Option<usize> {
        self.index.get(k).copied()
    }

    pub fn relation(&self) -> &Relation {
        &self.leq
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq.get(i, j)
    }

    pub fn rank(&self, i: usize) -> Option<i64> {
        self.rank.as_ref().map(|r| r[i])
    }

    pub fn ranks(&self) -> Option<&[i64]> {
        self.rank.as_deref()
    }

    /// Hasse relation: `(i, j)` with `i < j` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let ups: Vec<usize> = self.leq.successors(i).filter(|&j| j != i).collect();
            for &j in &ups {
                if !ups.iter().any(|&k| k != j && self.leq.get(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Every cover raises the attached rank by exactly one. False without a rank.
    pub fn is_graded(&self) -> bool {
        match &self.rank {
            Some(r) => self.is_graded_by(r),
            None => false,
        }
    }

    pub fn is_graded_by(&self, rank: &[i64]) -> bool {
        self.covers().iter().all(|&(i, j)| rank[j] == rank[i] + 1)
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| !(0..self.len()).any(|i| self.lt(i, j))).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !(0..self.len()).any(|j| self.lt(i, j))).collect()
    }

    /// Whether `self` and `other` have the same order under the element bijection `f`.
    pub fn is_isomorphic_via(&self, other: &FinitePoset<impl Clone + Ord + Debug>, f: &[usize]) -> bool {
        if self.len() != other.len() || f.len() != self.len() {
            return false;
        }
        let mut hit = vec![false; other.len()];
        for &y in f {
            if y >= other.len() || hit[y] {
                return false;
            }
            hit[y] = true;
        }
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.leq(i, j) == other.leq(f[i], f[j])))
    }

    /// Graphviz Hasse diagram; nodes are labeled by `label` and rank.
    pub fn to_dot(&self, label: impl Fn(&K) -> String) -> String {
        let mut s = String::from("digraph poset {\n  rankdir=BT;\n");
        for (i, k) in self.elements.iter().enumerate() {
            let text = match self.rank(i) {
                Some(r) => format!("{} [{}]", label(k), r),
                None => label(k),
            };
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", text.replace('"', "\\\""));
        }
        for (i, j) in self.covers() {
            let _ = writeln!(s, "  n{i} -> n{j};");
        }
        s.push_str("}\n");
        s
    }

    /// `{"elements": [...], "covers": [[i, j], ...], "ranks": [...]}`.
    pub fn to_json(&self, label: impl Fn(&K) -> serde_json::Value) -> serde_json::Value {
        json!({
            "elements": self.elements.iter().map(label).collect::<Vec<_>>(),
            "covers": self.covers().iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            "ranks": self.rank,
        })
    }
}

/// Whether `f: P → Q` (given on indices) is surjective, order preserving and
/// lifts every relation `q₁ ≤ q₂` to some `p₁ ≤ p₂` in the fibers.
pub fn is_quotient_map<K, L>(f: &[usize], p: &FinitePoset<K>, q: &FinitePoset<L>) -> bool
where
    K: Clone + Ord + Debug,
    L: Clone + Ord + Debug,
{
    quotient_map_violation(f, p, q).is_none()
}

/// The first failure of [`is_quotient_map`], described.
pub fn quotient_map_violation<K, L>(f: &[usize], p: &FinitePoset<K>, q: &FinitePoset<L>) -> Option<String>
where
    K: Clone + Ord + Debug,
    L: Clone + Ord + Debug,
{
    if f.len() != p.len() || f.iter().any(|&y| y >= q.len()) {
        return Some("map is not total".into());
    }
    let mut fibers = vec![Vec::new(); q.len()];
    for (x, &y) in f.iter().enumerate() {
        fibers[y].push(x);
    }
    if let Some(y) = fibers.iter().position(|fib| fib.is_empty()) {
        return Some(format!("{:?} is not hit", q.key(y)));
    }
    for i in 0..p.len() {
        for j in p.leq.successors(i) {
            if !q.leq(f[i], f[j]) {
                return Some(format!("{:?} ≤ {:?} is not preserved", p.key(i), p.key(j)));
            }
        }
    }
    for a in 0..q.len() {
        for b in q.leq.successors(a) {
            let lifts = fibers[a].iter().any(|&x| fibers[b].iter().any(|&y| p.leq(x, y)));
            if !lifts {
                return Some(format!("{:?} ≤ {:?} does not lift", q.key(a), q.key(b)));
            }
        }
    }
    None
}

/// Quotient of `P` by the equivalence `x ∼ y ⇔ class(x) = class(y)`, ordered
/// by `x̄ ≤ ȳ` iff some representatives compare.
///
/// The lifting hypothesis is checked in both of its forms: for every `x ≤ y`,
/// either every `y' ∼ y` has some `x' ∼ x` below it, or every `x' ∼ x` has
/// some `y' ∼ y` above it. Either one makes the quotient relation transitive.
/// Returns the quotient and the projection on indices.
pub fn quotient_by_equivalence<K, Q>(
    p: &FinitePoset<K>,
    class: impl Fn(&K) -> Q,
) -> Result<(FinitePoset<Q>, Vec<usize>)>
where
    K: Clone + Ord + Debug,
    Q: Clone + Ord + Debug,
{
    let keys: Vec<Q> = p.elements.iter().map(&class).collect();
    let mut classes: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        classes.entry(k.clone()).or_default().push(i);
    }
    let order: BTreeMap<Q, usize> = classes.keys().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let projection: Vec<usize> = keys.iter().map(|k| order[k]).collect();
    let members: Vec<&Vec<usize>> = classes.values().collect();

    let lifts_down = |x: usize, y: usize| {
        members[projection[y]]
            .iter()
            .all(|&y2| members[projection[x]].iter().any(|&x2| p.leq(x2, y2)))
    };
    let lifts_up = |x: usize, y: usize| {
        members[projection[x]]
            .iter()
            .all(|&x2| members[projection[y]].iter().any(|&y2| p.leq(x2, y2)))
    };
    let down_everywhere = (0..p.len()).all(|x| p.leq.successors(x).all(|y| lifts_down(x, y)));
    if !down_everywhere {
        let up_everywhere = (0..p.len()).all(|x| p.leq.successors(x).all(|y| lifts_up(x, y)));
        if !up_everywhere {
            let (x, y) = (0..p.len())
                .flat_map(|x| p.leq.successors(x).map(move |y| (x, y)))
                .find(|&(x, y)| !lifts_up(x, y))
                .unwrap();
            return Err(Error::Lifting(format!(
                "{:?} ≤ {:?} does not lift to the class of {:?}",
                p.key(x),
                p.key(y),
                p.key(x)
            )));
        }
    }

    let m = members.len();
    let mut rel = Relation::new(m);
    for x in 0..p.len() {
        for y in p.leq.successors(x) {
            rel.set(projection[x], projection[y]);
        }
    }
    let q = FinitePoset::from_relation(classes.into_keys().collect(), rel)?;
    let q = match &p.rank {
        Some(r) => {
            let mut qr = vec![0; m];
            for (x, &c) in projection.iter().enumerate() {
                qr[c] = r[x];
            }
            FinitePoset { rank: Some(qr), ..q }
        }
        None => q,
    };
    Ok((q, projection))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FinitePoset<usize> {
        FinitePoset::new((0..n).collect(), |a, b| a <= b).unwrap()
    }

    #[test]
    fn chain_and_antichain() {
        let c = chain(3).with_rank(|&k| k as i64);
        assert_eq!(c.covers(), vec![(0, 1), (1, 2)]);
        assert!(c.is_graded());
        assert_eq!(c.minimal(), vec![0]);
        assert_eq!(c.maximal(), vec![2]);
        let a = FinitePoset::new(vec![0, 1, 2], |a, b| a == b).unwrap();
        assert!(a.covers().is_empty());
        let jump = chain(3).with_rank(|&k| 2 * k as i64);
        assert!(!jump.is_graded());
    }

    #[test]
    fn axiom_errors() {
        let err = FinitePoset::new(vec![0, 1], |_, _| true).unwrap_err();
        assert!(matches!(err, Error::PosetAxiom(_)));
        let err = FinitePoset::new(vec![0, 1], |a, b| a < b).unwrap_err();
        assert!(matches!(err, Error::PosetAxiom(m) if m.contains("reflexive")));
        // 0 ≤ 1 ≤ 2 without 0 ≤ 2
        let err = FinitePoset::new(vec![0, 1, 2], |a, b| a == b || (*a, *b) == (0, 1) || (*a, *b) == (1, 2))
            .unwrap_err();
        assert!(matches!(err, Error::PosetAxiom(m) if m.contains("transitive")));
    }

    #[test]
    fn large_relation_rows() {
        let c = chain(130);
        assert_eq!(c.covers().len(), 129);
        assert!(c.leq(3, 129));
        assert!(!c.leq(129, 3));
    }

    #[test]
    fn quotient_maps() {
        let c = chain(3);
        assert!(is_quotient_map(&[0, 1, 2], &c, &c));
        let one = chain(1);
        assert!(is_quotient_map(&[0, 0, 0], &c, &one));
        assert!(!is_quotient_map(&[0, 0, 1], &c, &c));
        let (q, proj) = quotient_by_equivalence(&c, |&k| k).unwrap();
        assert_eq!(q.len(), 3);
        assert!(c.is_isomorphic_via(&q, &proj));
    }

    #[test]
    fn lifting_hypothesis_violation() {
        // a < b, c < d with a ∼ d and b ∼ c
        let p = FinitePoset::new(vec!['a', 'b', 'c', 'd'], |x, y| {
            x == y || (*x, *y) == ('a', 'b') || (*x, *y) == ('c', 'd')
        })
        .unwrap();
        let err = quotient_by_equivalence(&p, |&k| if k == 'a' || k == 'd' { 0 } else { 1 }).unwrap_err();
        assert!(matches!(err, Error::Lifting(_)));
    }

    #[test]
    fn switched_lifting_is_accepted() {
        // x < y, x' incomparable to y' = y: every x-class member has something above
        // in y's class, but not every y-class member has something below.
        let p = FinitePoset::new(vec![0, 1, 2, 3], |a, b| a == b || (*a, *b) == (0, 2) || (*a, *b) == (1, 2))
            .unwrap();
        // classes {0, 1} and {2, 3}: 3 has nothing below it
        let (q, proj) = quotient_by_equivalence(&p, |&k| k / 2).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q.leq(0, 1));
        assert!(is_quotient_map(&proj, &p, &q));
    }

    #[test]
    fn exports() {
        let c = chain(2).with_rank(|&k| k as i64);
        let dot = c.to_dot(|k| format!("x{k}"));
        assert!(dot.contains("n0 -> n1"));
        assert!(dot.contains("x1 [1]"));
        let js = c.to_json(|k| json!(k));
        assert_eq!(js["covers"], json!([[0, 1]]));
        assert_eq!(js["ranks"], json!([0, 1]));
    }
}
