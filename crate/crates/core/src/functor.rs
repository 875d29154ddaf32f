//! Pushforward of orientations and orientation classes along contractions,
//! hat graphs, and the functoriality checks.

use crate::bitset::{EdgeSet, VertexSet};
use crate::contraction::{Contraction, EdgeImage};
use crate::divisor::{hat_divisor, Divisor};
use crate::error::{domain, precondition, Result};
use crate::graph::{Graph, Subdivision};
use crate::orientation::{EdgeState, Orientation};
use crate::poset::quotient_map_violation;
use crate::spaces::{admissible_sets, build_opbar, ClassKey};

/// `γ_* O_S = (O_S)_{|H − γ_* S}`. No contracted edge may be bioriented.
pub fn push_orientation(gamma: &Contraction, o: &Orientation) -> Result<Orientation> {
    let g = gamma.source();
    let h = gamma.target();
    if o.removed().len() != g.edge_count() {
        return domain("orientation does not live on the contraction source");
    }
    if let Some(e) = o.bioriented_edge() {
        if gamma.contracted().contains(e) {
            return precondition(format!("bioriented edge {e} is contracted"));
        }
    }
    let removed = gamma.push_edges(o.removed());
    let mut states = Vec::with_capacity(h.edge_count() - removed.count());
    for f in 0..h.edge_count() {
        if removed.contains(f) {
            continue;
        }
        let e = gamma.edge_preimage(f);
        let (_, flipped) = gamma.edge_image(e).expect("preimage survives");
        let s = o.state_of(e).expect("edge outside S is in the carrier");
        states.push(if flipped { s.reversed() } else { s });
    }
    Orientation::new(h, removed, states, o.b())
}

/// `γ̄_*` on a class given by any representative `O_S`.
///
/// For `b = 1` the representative is first moved so that its bioriented edge is
/// not contracted. When every carrier edge is contracted the target carrier is
/// a single vertex and the image is its empty rooted orientation.
pub fn push_class(gamma: &Contraction, o: &Orientation) -> Result<Orientation> {
    let g = gamma.source();
    let Some(e) = o.bioriented_edge() else {
        return push_orientation(gamma, o);
    };
    if !gamma.contracted().contains(e) {
        return push_orientation(gamma, o);
    }
    let free = o
        .removed()
        .union(gamma.contracted())
        .complement()
        .iter()
        .next();
    match free {
        Some(f) => push_orientation(gamma, &o.move_biorientation(g, f)?),
        None => {
            let h = gamma.target();
            Orientation::new(h, h.all_edges(), Vec::new(), 1)
        }
    }
}

/// Class of `γ̄_* [O]` as a key of `ŌP^b_H`.
pub fn push_class_key(gamma: &Contraction, o: &Orientation) -> Result<ClassKey> {
    Ok(ClassKey::of(gamma.target(), &push_class(gamma, o)?))
}

/// Orientation of `⟨S⟩` induced by `Õ` on `G(S)`: edges of `S` copy their
/// image's state, except images that are loops, which become `Forward` unless
/// bioriented. Returned as an orientation of `G` with `E ∖ S` removed.
pub fn induced_on_spanned(g: &Graph, s: &EdgeSet, tilde: &Orientation) -> Result<Orientation> {
    let q = Contraction::quotient_to(g, s);
    if tilde.removed().len() != q.target().edge_count() || !tilde.removed().is_empty() {
        return domain("Õ must orient all of G(S)");
    }
    let mut states = Vec::with_capacity(s.count());
    for e in s.iter() {
        let (f, flipped) = q.edge_image(e).expect("edges of S survive in G(S)");
        let st = tilde.states()[f];
        states.push(if st == EdgeState::Bioriented {
            st
        } else if q.target().is_loop(f) {
            EdgeState::Forward
        } else if flipped {
            st.reversed()
        } else {
            st
        });
    }
    Orientation::new(g, s.complement(), states, tilde.b())
}

/// `γ̂: Ĝ_S → Ĥ_{γ_*S}` contracting `(S₀ ∖ S) ∪ {h_e, j_e : e ∈ S ∩ S₀}`,
/// with both subdivisions.
pub fn hat_contraction(gamma: &Contraction, s: &EdgeSet) -> (Contraction, Subdivision, Subdivision) {
    let g = gamma.source();
    let (g_hat, sub_g) = g.subdivide(s);
    let (_, sub_h) = gamma.target().subdivide(&gamma.push_edges(s));
    let s0 = gamma.contracted();
    let mut hat_s0 = EdgeSet::empty(g_hat.edge_count());
    let mut kept = sub_g.edge_inclusion.iter();
    for e in 0..g.edge_count() {
        if s.contains(e) {
            continue;
        }
        let pos = *kept.next().expect("one inclusion per kept edge");
        if s0.contains(e) {
            hat_s0.insert(pos);
        }
    }
    for x in &sub_g.exceptional {
        if s0.contains(x.edge) {
            hat_s0.insert(x.h);
            hat_s0.insert(x.j);
        }
    }
    (Contraction::contract(&g_hat, &hat_s0), sub_g, sub_h)
}

/// The contraction `δ: Ĝ_S → G` contracting `h_e` where `pick_h` is set and
/// `j_e` otherwise, one flag per exceptional vertex.
pub fn choice_contraction(g_hat: &Graph, sub: &Subdivision, pick_h: &[bool]) -> Contraction {
    let set = EdgeSet::from_indices(
        g_hat.edge_count(),
        sub.exceptional.iter().zip(pick_h).map(|(x, &h)| if h { x.h } else { x.j }),
    );
    Contraction::contract(g_hat, &set)
}

/// For every choice function `δ: Ĝ_S → G`: `δ(Ĝ_S) = G` and
/// `δ_* d̂_S = d_S + c^δ`. Returns the violations found.
pub fn verify_exclm(g: &Graph, s: &EdgeSet, d: &Divisor) -> Result<Vec<String>> {
    if !crate::divisor::is_stable_divisor(&g.delete_edges(s), d, 0)?
        && !crate::divisor::is_stable_divisor(&g.delete_edges(s), d, 1)?
    {
        return precondition(format!("{d} is not stable on G − S"));
    }
    let (g_hat, sub) = g.subdivide(s);
    let d_hat = hat_divisor(d, &sub)?;
    let k = sub.exceptional.len();
    let mut failures = Vec::new();
    for mask in 0u64..1 << k {
        let pick: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        let delta = choice_contraction(&g_hat, &sub, &pick);
        if delta.target() != g {
            failures.push(format!("choice {mask:b}: δ(Ĝ_S) differs from G"));
            continue;
        }
        let lhs = delta.push_divisor(&d_hat)?;
        let c = delta.c_divisor(&g_hat.all_edges());
        if lhs != d + &c {
            failures.push(format!("choice {mask:b}: δ_* d̂ = {lhs}, d + c^δ = {}", d + &c));
        }
    }
    Ok(failures)
}

/// For `γ` with no contracted bioriented edge: `γ̂(Ĝ_S)` equals `Ĥ_{γ_*S}` and
/// `hat(d^{γ_* O_S}) = γ̂_* hat(d^{O_S})`.
pub fn verify_hat_identity(gamma: &Contraction, o: &Orientation) -> Result<Vec<String>> {
    let g = gamma.source();
    let s = o.removed();
    let (gh, sub_g, sub_h) = hat_contraction(gamma, s);
    let mut failures = Vec::new();
    let expected = gamma.target().subdivide(&gamma.push_edges(s)).0;
    if gh.target() != &expected {
        failures.push("γ̂(Ĝ_S) differs from the subdivision of H".to_string());
        return Ok(failures);
    }
    let pushed = push_orientation(gamma, o)?;
    let lhs = hat_divisor(&pushed.divisor_of(gamma.target()), &sub_h)?;
    let rhs = gh.push_divisor(&hat_divisor(&o.divisor_of(g), &sub_g)?)?;
    if lhs != rhs {
        failures.push(format!("hat identity: {lhs} vs {rhs}"));
    }
    Ok(failures)
}

/// Fiber of the projection of classes of `ŌP^b_G` lying over `G − S`.
fn classes_over(bar: &crate::poset::FinitePoset<ClassKey>, s: &EdgeSet) -> Vec<usize> {
    (0..bar.len()).filter(|&i| &bar.key(i).removed == s).collect()
}

/// Checks that `γ̄_*: ŌP^b_G → ŌP^b_H` is a quotient of posets and that for
/// every `T ∈ A^b_H` it maps the classes on `G − γ^*T` onto those on `H − T`.
pub fn verify_fthm(gamma: &Contraction, b: u8) -> Result<Vec<String>> {
    let g = gamma.source();
    let h = gamma.target();
    let (bar_g, op_g, proj_g) = build_opbar(g, b)?;
    let (bar_h, _, _) = build_opbar(h, b)?;
    let mut rep = vec![None; bar_g.len()];
    for (x, &c) in proj_g.iter().enumerate() {
        rep[c].get_or_insert(x);
    }
    let mut failures = Vec::new();
    let mut f = Vec::with_capacity(bar_g.len());
    for c in 0..bar_g.len() {
        let o = op_g.key(rep[c].expect("classes are nonempty"));
        let key = push_class_key(gamma, o)?;
        match bar_h.index_of(&key) {
            Some(i) => f.push(i),
            None => {
                failures.push(format!("{} pushes to {} outside ŌP_H", bar_g.key(c).label(), key.label()));
                return Ok(failures);
            }
        }
    }
    if let Some(v) = quotient_map_violation(&f, &bar_g, &bar_h) {
        failures.push(format!("not a quotient of posets: {v}"));
    }
    for t in admissible_sets(h, b) {
        let pulled = gamma.pull_edges(&t, b);
        let mut hit: Vec<usize> = classes_over(&bar_g, &pulled).iter().map(|&c| f[c]).collect();
        hit.sort_unstable();
        hit.dedup();
        if hit != classes_over(&bar_h, &t) {
            failures.push(format!("classes over G − γ^*T do not cover H − T for T = {t:?}"));
        }
    }
    Ok(failures)
}

/// `(δ∘γ)_* = δ_* ∘ γ_*` on orientations, when both sides are defined.
pub fn composition_agrees(gamma: &Contraction, delta: &Contraction, o: &Orientation) -> Result<bool> {
    let comp = gamma.then(delta)?;
    let direct = push_orientation(&comp, o)?;
    let staged = push_orientation(delta, &push_orientation(gamma, o)?)?;
    Ok(direct == staged)
}

/// Vertices of the target receiving a contracted edge.
pub fn contracted_vertices(gamma: &Contraction) -> VertexSet {
    VertexSet::from_indices(
        gamma.target().vertex_count(),
        gamma.edge_map().iter().filter_map(|img| match img {
            EdgeImage::Vertex(v) => Some(*v),
            EdgeImage::Edge { .. } => None,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::orientation::enumerate_admissible;

    fn dv(xs: &[i64]) -> Divisor {
        Divisor::new(xs.to_vec())
    }

    #[test]
    fn theta_chain_pushforward() {
        let g = theta_chain();
        let e = EdgeSet::singleton(6, 2);
        let gamma = Contraction::contract(&g, &e);
        let os = Orientation::parse(&g, e, "+-+-+", 0).unwrap();
        assert_eq!(os.target_vector(&g), dv(&[1, 2, 2]));
        let pushed = push_orientation(&gamma, &os).unwrap();
        assert!(pushed.removed().is_empty());
        assert_eq!(pushed.target_vector(gamma.target()), dv(&[3, 2]));
        assert_eq!(pushed.divisor_of(gamma.target()), dv(&[4, 2]));
        let lhs = gamma.push_divisor(&os.divisor_of(&g)).unwrap();
        assert_eq!(lhs, dv(&[3, 2]));
        let c = gamma.c_divisor(&e);
        assert_eq!(c, dv(&[1, 0]));
        assert_eq!(lhs, &pushed.divisor_of(gamma.target()) - &c);
        assert!(pushed.is_admissible(gamma.target()));
    }

    #[test]
    fn identity_push() {
        let t = theta();
        let id = Contraction::identity(&t);
        for o in enumerate_admissible(&t, &EdgeSet::singleton(3, 1), 0) {
            assert_eq!(push_orientation(&id, &o).unwrap(), o);
        }
    }

    #[test]
    fn contracted_bioriented_edge_is_rejected() {
        let d = dumbbell();
        let gamma = Contraction::contract(&d, &EdgeSet::singleton(3, 2));
        let o = Orientation::parse(&d, d.no_edges(), "++*", 1).unwrap();
        assert!(push_orientation(&gamma, &o).is_err());
        let moved = push_class(&gamma, &o).unwrap();
        assert_eq!(moved.b(), 1);
        assert!(moved.is_admissible(gamma.target()));
    }

    #[test]
    fn total_contraction_b1() {
        let t = theta();
        let gamma = Contraction::contract(&t, &t.all_edges());
        let o = Orientation::parse(&t, t.no_edges(), "*-+", 1).unwrap();
        let img = push_class(&gamma, &o).unwrap();
        assert!(img.states().is_empty());
        assert_eq!(img.divisor_of(gamma.target()), dv(&[2]));
    }

    #[test]
    fn induced_loops_forward() {
        let t = theta();
        let s = EdgeSet::from_indices(3, [0, 1]);
        let q = t.quotient_to(&s);
        assert_eq!(q.vertex_count(), 1);
        let tilde = Orientation::parse(&q, q.no_edges(), "--", 0).unwrap();
        let ind = induced_on_spanned(&t, &s, &tilde).unwrap();
        assert_eq!(ind.code(), "++");
        let s = t.all_edges();
        let tilde = Orientation::parse(&t, t.no_edges(), "+-+", 0).unwrap();
        assert_eq!(induced_on_spanned(&t, &s, &tilde).unwrap(), tilde);
    }

    #[test]
    fn exclm_theta() {
        let t = theta();
        let s = EdgeSet::singleton(3, 0);
        assert!(verify_exclm(&t, &s, &dv(&[0, 0])).unwrap().is_empty());
        assert!(verify_exclm(&t, &t.no_edges(), &dv(&[0, 1])).unwrap().is_empty());
    }

    #[test]
    fn hat_identity_theta_chain() {
        let g = theta_chain();
        let e = EdgeSet::singleton(6, 2);
        let gamma = Contraction::contract(&g, &e);
        let os = Orientation::parse(&g, e, "+-+-+", 0).unwrap();
        assert!(verify_hat_identity(&gamma, &os).unwrap().is_empty());
        let s = EdgeSet::from_indices(6, [2, 3]);
        let gamma = Contraction::contract(&g, &EdgeSet::from_indices(6, [2, 4]));
        for o in enumerate_admissible(&g, &s, 0).into_iter().take(4) {
            assert!(verify_hat_identity(&gamma, &o).unwrap().is_empty());
        }
    }

    #[test]
    fn fthm_small() {
        let t = theta();
        for b in [0, 1] {
            assert!(verify_fthm(&Contraction::identity(&t), b).unwrap().is_empty());
            let gamma = Contraction::contract(&t, &EdgeSet::singleton(3, 0));
            assert_eq!(verify_fthm(&gamma, b).unwrap(), Vec::<String>::new());
        }
        let d = dumbbell();
        let gamma = Contraction::contract(&d, &EdgeSet::singleton(3, 2));
        for b in [0, 1] {
            assert_eq!(verify_fthm(&gamma, b).unwrap(), Vec::<String>::new());
        }
    }
}
