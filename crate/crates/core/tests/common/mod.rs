//! Brute-force oracles on raw `(weights, edges)` data. Nothing here calls the
//! library's orientation, divisor or poset code.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub type Edges = Vec<(usize, usize)>;

pub fn labels(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra.max(rb)] = ra.min(rb);
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

pub fn ncomp(n: usize, edges: &[(usize, usize)]) -> usize {
    labels(n, edges).into_iter().collect::<BTreeSet<_>>().len()
}

pub fn genus(w: &[u32], edges: &[(usize, usize)]) -> i64 {
    w.iter().map(|&x| i64::from(x)).sum::<i64>() - w.len() as i64 + edges.len() as i64 + ncomp(w.len(), edges) as i64
}

pub fn bridgeless(n: usize, edges: &[(usize, usize)]) -> bool {
    let c = ncomp(n, edges);
    (0..edges.len()).all(|i| {
        let rest: Edges = edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
        ncomp(n, &rest) == c
    })
}

/// Kept edges of `edges` outside the bitmask `s`.
pub fn minus(edges: &[(usize, usize)], s: u64) -> Edges {
    edges.iter().enumerate().filter(|&(i, _)| s >> i & 1 == 0).map(|(_, &e)| e).collect()
}

/// States per edge: 0 forward, 1 backward, 2 both ways. For `b = 1` exactly
/// one edge is 2; an edgeless graph has the single empty state vector.
pub fn states(m: usize, b: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for code in 0..(1u64 << m) {
        let base: Vec<u8> = (0..m).map(|i| (code >> i & 1) as u8).collect();
        if b == 0 {
            out.push(base);
        } else {
            for i in 0..m {
                if base[i] == 0 {
                    let mut st = base.clone();
                    st[i] = 2;
                    out.push(st);
                }
            }
        }
    }
    if m == 0 && b == 1 {
        out = vec![vec![]];
    }
    out
}

fn arcs(edges: &[(usize, usize)], st: &[u8]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (&(a, h), &s) in edges.iter().zip(st) {
        match s {
            0 => out.push((a, h)),
            1 => out.push((h, a)),
            _ => {
                out.push((a, h));
                out.push((h, a));
            }
        }
    }
    out
}

fn reach(n: usize, arcs: &[(usize, usize)], from: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = from.to_vec();
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        stack.extend(arcs.iter().filter(|&&(a, _)| a == v).map(|&(_, h)| h));
    }
    seen
}

/// Totally cyclic: each arc `u → v` returns from `v` to `u`.
/// Rooted: everything reachable from the ends of the doubled edge.
pub fn admissible(n: usize, edges: &[(usize, usize)], st: &[u8], b: u8) -> bool {
    let a = arcs(edges, st);
    if b == 0 {
        return a.iter().all(|&(u, v)| reach(n, &a, &[v])[u]);
    }
    match st.iter().position(|&s| s == 2) {
        None => n == 1,
        Some(i) => reach(n, &a, &[edges[i].0, edges[i].1]).iter().all(|&x| x),
    }
}

pub fn divisor(w: &[u32], edges: &[(usize, usize)], st: &[u8], b: u8) -> Vec<i64> {
    let mut d: Vec<i64> = w.iter().map(|&x| i64::from(x) - 1).collect();
    if edges.is_empty() {
        return d.iter().map(|x| x + i64::from(b)).collect();
    }
    for (&(a, h), &s) in edges.iter().zip(st) {
        match s {
            0 => d[h] += 1,
            1 => d[a] += 1,
            _ => {
                d[a] += 1;
                d[h] += 1;
            }
        }
    }
    d
}

fn sub_genus(w: &[u32], edges: &[(usize, usize)], z: u64) -> i64 {
    let idx: Vec<usize> = (0..w.len()).filter(|&v| z >> v & 1 == 1).collect();
    let pos = |v: usize| idx.iter().position(|&x| x == v).unwrap();
    let inner: Edges = edges
        .iter()
        .filter(|&&(a, h)| z >> a & 1 == 1 && z >> h & 1 == 1)
        .map(|&(a, h)| (pos(a), pos(h)))
        .collect();
    let ws: Vec<u32> = idx.iter().map(|&v| w[v]).collect();
    genus(&ws, &inner)
}

fn deg_on(d: &[i64], z: u64) -> i64 {
    (0..d.len()).filter(|&v| z >> v & 1 == 1).map(|v| d[v]).sum()
}

/// Stability straight from the definition.
pub fn stable(w: &[u32], edges: &[(usize, usize)], d: &[i64], b: u8) -> bool {
    let n = w.len();
    let lab = labels(n, edges);
    let comps: BTreeSet<usize> = lab.iter().copied().collect();
    let strict = |z: u64| deg_on(d, z) > sub_genus(w, edges, z) - 1;
    if b == 1 {
        return comps.len() == 1
            && deg_on(d, (1 << n) - 1) == genus(w, edges)
            && (1..1u64 << n).all(strict);
    }
    comps.iter().all(|&c| {
        let comp: u64 = (0..n).filter(|&v| lab[v] == c).map(|v| 1u64 << v).sum();
        deg_on(d, comp) == sub_genus(w, edges, comp) - 1
            && (1..1u64 << n).filter(|&z| z & !comp == 0 && z != comp).all(strict)
    })
}

/// Every stable divisor in a generous box around the orientation range.
pub fn stable_divisors(w: &[u32], edges: &[(usize, usize)], b: u8) -> BTreeSet<Vec<i64>> {
    let n = w.len();
    let deg = |v: usize| edges.iter().map(|&(a, h)| (a == v) as i64 + (h == v) as i64).sum::<i64>();
    let lo: Vec<i64> = (0..n).map(|v| i64::from(w[v]) - 3).collect();
    let hi: Vec<i64> = (0..n).map(|v| i64::from(w[v]) + deg(v) + 2).collect();
    let mut out = BTreeSet::new();
    let mut cur = lo.clone();
    loop {
        if stable(w, edges, &cur, b) {
            out.insert(cur.clone());
        }
        let mut i = 0;
        while i < n && cur[i] == hi[i] {
            cur[i] = lo[i];
            i += 1;
        }
        if i == n {
            break;
        }
        cur[i] += 1;
    }
    out
}

/// Divisors of admissible `b`-orientations, i.e. the admissible classes.
pub fn admissible_classes(w: &[u32], edges: &[(usize, usize)], b: u8) -> BTreeSet<Vec<i64>> {
    states(edges.len(), b)
        .into_iter()
        .filter(|st| admissible(w.len(), edges, st, b))
        .map(|st| divisor(w, edges, &st, b))
        .collect()
}

/// Graph automorphisms as (vertex permutation, edge permutation) pairs,
/// ignoring edge direction.
pub fn automorphisms(w: &[u32], edges: &[(usize, usize)]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = w.len();
    let m = edges.len();
    let norm = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    let mut out = Vec::new();
    for vp in permutations(n) {
        if (0..n).any(|v| w[vp[v]] != w[v]) {
            continue;
        }
        for ep in permutations(m) {
            let ok = (0..m).all(|e| {
                let (a, b) = edges[e];
                norm((vp[a], vp[b])) == norm(edges[ep[e]])
            });
            if ok {
                out.push((vp.clone(), ep));
            }
        }
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// `ŌP^b_G` as `(S, divisor)` pairs.
pub fn class_set(w: &[u32], edges: &[(usize, usize)], b: u8) -> BTreeSet<(u64, Vec<i64>)> {
    let mut out = BTreeSet::new();
    for s in 0..1u64 << edges.len() {
        for d in admissible_classes(w, &minus(edges, s), b) {
            out.insert((s, d));
        }
    }
    out
}

/// Number of `Aut(G)`-orbits on `ŌP^b_G`.
pub fn class_orbits(w: &[u32], edges: &[(usize, usize)], b: u8) -> usize {
    let classes = class_set(w, edges, b);
    let auts = automorphisms(w, edges);
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for c in &classes {
        if seen.contains(c) {
            continue;
        }
        orbits += 1;
        for (vp, ep) in &auts {
            let s: u64 = (0..edges.len()).filter(|&e| c.0 >> e & 1 == 1).map(|e| 1u64 << ep[e]).sum();
            let mut d = vec![0; w.len()];
            for v in 0..w.len() {
                d[vp[v]] = c.1[v];
            }
            seen.insert((s, d));
        }
    }
    orbits
}

/// The seven stable graphs of genus two, written out by hand.
pub fn genus_two_by_hand() -> Vec<(Vec<u32>, Edges)> {
    vec![
        (vec![2], vec![]),
        (vec![1], vec![(0, 0)]),
        (vec![0], vec![(0, 0), (0, 0)]),
        (vec![1, 1], vec![(0, 1)]),
        (vec![1, 0], vec![(0, 1), (1, 1)]),
        (vec![0, 0], vec![(0, 0), (0, 1), (1, 1)]),
        (vec![0, 0], vec![(0, 1), (0, 1), (0, 1)]),
    ]
}
