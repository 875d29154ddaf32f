//! Verification suites: each suite sweeps the atlas of one genus and checks one
//! family of statements, collecting failures and expected findings.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::atlas::{stratification_report, Atlas};
use crate::bitset::{EdgeSet, VertexSet};
use crate::contraction::Contraction;
use crate::divisor::{
    hakimi_condition, hakimi_search, is_stable_divisor, sigma, sigma_in_window, stable_to_orientation, Divisor,
};
use crate::error::{domain, Result};
use crate::functor::{push_class, push_class_key, push_orientation, verify_exclm, verify_fthm, verify_hat_identity};
use crate::graph::{fixtures, Graph};
use crate::orientation::{
    enumerate_admissible, enumerate_orientations, extend_orientation, rooted_orient, strong_orient, CyclicMode,
    EdgeState, Orientation, RootedMode,
};
use crate::poset::{is_quotient_map, quotient_map_violation};
use crate::spaces::{admissible_sets, build_a, build_opbar, op_leq, rank_of, ClassKey};

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord, Hash)]
pub enum Suite {
    Lm0,
    LmO1,
    Lmfree,
    F1LmO,
    Degor,
    QuotoPoo,
    RkBP,
    Ftriv,
    Fupr,
    Fprop,
    Fthm,
    FdiagBricor,
    RkSg,
    Bgq,
    PropOg,
    COP,
    Exclm,
    Remark0e1,
    Noinjdeg,
}

impl Suite {
    pub const ALL: [Suite; 19] = [
        Suite::Lm0,
        Suite::LmO1,
        Suite::Lmfree,
        Suite::F1LmO,
        Suite::Degor,
        Suite::QuotoPoo,
        Suite::RkBP,
        Suite::Ftriv,
        Suite::Fupr,
        Suite::Fprop,
        Suite::Fthm,
        Suite::FdiagBricor,
        Suite::RkSg,
        Suite::Bgq,
        Suite::PropOg,
        Suite::COP,
        Suite::Exclm,
        Suite::Remark0e1,
        Suite::Noinjdeg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lm0 => "lm0",
            Suite::LmO1 => "lmO1",
            Suite::Lmfree => "lmfree",
            Suite::F1LmO => "F1-LmO",
            Suite::Degor => "degor",
            Suite::QuotoPoo => "quoto-poo",
            Suite::RkBP => "rkBP",
            Suite::Ftriv => "ftriv",
            Suite::Fupr => "fupr",
            Suite::Fprop => "fprop",
            Suite::Fthm => "fthm",
            Suite::FdiagBricor => "fdiag-bricor",
            Suite::RkSg => "rkSg",
            Suite::Bgq => "Bgq",
            Suite::PropOg => "propOg",
            Suite::COP => "cOP",
            Suite::Exclm => "exclm",
            Suite::Remark0e1 => "remark-0e1",
            Suite::Noinjdeg => "noinjdeg",
        }
    }

    /// Suite names as accepted on the command line; `all` expands to every suite.
    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|s| s.name() == name).map(|s| vec![*s])
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    pub statement: String,
    pub instance: String,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub genus: u32,
    pub b: Vec<u8>,
    pub instances: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    pub findings: Vec<Value>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Report without wall time, for byte-stable output.
    pub fn payload(&self) -> Value {
        json!({
            "suite": self.suite,
            "genus": self.genus,
            "b": self.b,
            "instances": self.instances,
            "passes": self.passes,
            "failures": self.failures,
            "findings": self.findings,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.payload();
        v["elapsed_ms"] = json!(self.elapsed_ms);
        v
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub genus: u32,
    pub bs: Vec<u8>,
    /// Wall-clock budget for one suite; sweeps stop early and say so.
    pub budget: Option<Duration>,
    /// Seed for sampled sweeps.
    pub seed: u64,
    /// Above genus 2, contraction-indexed sweeps look at this many contractions,
    /// drawn with `seed`; the default takes all of them.
    pub sample: usize,
}

impl VerifyConfig {
    pub fn new(genus: u32) -> Self {
        VerifyConfig { genus, bs: vec![0, 1], budget: None, seed: 0x5eed, sample: usize::MAX }
    }
}

#[derive(Default)]
struct Recorder {
    instances: usize,
    failures: Vec<Failure>,
    findings: Vec<Value>,
    deadline: Option<Instant>,
    truncated: bool,
}

impl Recorder {
    fn new(deadline: Option<Instant>) -> Self {
        Recorder { deadline, ..Default::default() }
    }

    fn check(&mut self, ok: bool, statement: &str, instance: impl FnOnce() -> String, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(Failure { statement: statement.into(), instance: instance(), witness: witness() });
        }
    }

    fn result<T>(&mut self, r: Result<T>, statement: &str, instance: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.check(false, statement, instance, || e.to_string());
                None
            }
        }
    }

    fn expired(&mut self) -> bool {
        let out = self.deadline.is_some_and(|d| Instant::now() > d);
        self.truncated |= out;
        out
    }

    fn merge(&mut self, other: Recorder) {
        self.instances += other.instances;
        self.failures.extend(other.failures);
        self.findings.extend(other.findings);
        self.truncated |= other.truncated;
    }
}

/// Shared state for one genus: the atlas and its nontrivial contractions.
pub struct Corpus {
    pub atlas: Atlas,
    /// `(source, target, γ)` for every nontrivial contraction considered.
    pub contractions: Vec<(usize, usize, Contraction)>,
    pub sampled: bool,
}

impl Corpus {
    /// At genus 2 every contraction (with every isomorphism onto the target);
    /// above, one contraction per contracted set, sampled with a fixed seed.
    pub fn new(cfg: &VerifyConfig) -> Result<Corpus> {
        let atlas = Atlas::new(cfg.genus)?;
        let mut contractions = Vec::new();
        for i in 0..atlas.len() {
            for j in 0..atlas.len() {
                if i == j {
                    continue;
                }
                if cfg.genus == 2 {
                    contractions.extend(atlas.contractions_between(i, j).into_iter().map(|c| (i, j, c)));
                } else {
                    contractions.extend(atlas.contraction_witnesses(i, j).iter().cloned().map(|c| (i, j, c)));
                }
            }
        }
        let mut sampled = false;
        if cfg.genus > 2 && contractions.len() > cfg.sample {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            contractions.shuffle(&mut rng);
            contractions.truncate(cfg.sample);
            contractions.sort_by_key(|(i, j, c)| (*i, *j, c.contracted().bits()));
            sampled = true;
        }
        Ok(Corpus { atlas, contractions, sampled })
    }
}

fn gname(g: &Graph) -> String {
    g.to_json()
}

fn okey(o: &Orientation) -> String {
    format!("S={:?} O={} b={}", o.removed(), o.code(), o.b())
}

fn cname(c: &Contraction) -> String {
    format!("{} / {:?}", gname(c.source()), c.contracted())
}

/// Runs one suite over the corpus.
pub fn run_suite(suite: Suite, corpus: &Corpus, cfg: &VerifyConfig) -> Result<SuiteReport> {
    if cfg.bs.iter().any(|&b| b > 1) {
        return domain("b must be 0 or 1");
    }
    let start = Instant::now();
    let deadline = cfg.budget.map(|d| start + d);
    let mut rec = Recorder::new(deadline);
    if corpus.sampled && uses_contractions(suite) {
        rec.findings.push(json!({
            "note": "contraction sweep sampled",
            "seed": cfg.seed,
            "contractions": corpus.contractions.len(),
        }));
    }
    match suite {
        Suite::Lm0 => per_graph(corpus, &mut rec, lm0),
        Suite::LmO1 => per_graph(corpus, &mut rec, lmo1),
        Suite::Lmfree => per_graph(corpus, &mut rec, lmfree),
        Suite::F1LmO => per_graph(corpus, &mut rec, f1_lmo),
        Suite::Degor => {
            per_graph(corpus, &mut rec, |g, r| degor(g, &cfg.bs, r));
            degor_pinned(corpus, cfg, &mut rec);
        }
        Suite::QuotoPoo => per_graph(corpus, &mut rec, |g, r| quoto_poo(g, &cfg.bs, r)),
        Suite::RkBP => per_graph(corpus, &mut rec, |g, r| rkbp(g, &cfg.bs, r)),
        Suite::Ftriv => per_graph(corpus, &mut rec, ftriv),
        Suite::Fupr => {
            per_contraction(corpus, &mut rec, |c, r| fupr(c, &cfg.bs, r));
            compositions(corpus, &cfg.bs, &mut rec);
        }
        Suite::Fprop => {
            fprop_pinned(&mut rec);
            per_contraction(corpus, &mut rec, |c, r| fprop(c, &cfg.bs, r));
        }
        Suite::Fthm => per_contraction(corpus, &mut rec, |c, r| fthm(c, &cfg.bs, r)),
        Suite::FdiagBricor => {
            per_contraction(corpus, &mut rec, |c, r| fdiag(c, &cfg.bs, r));
            per_graph(corpus, &mut rec, bricor);
        }
        Suite::RkSg => rksg(corpus, &mut rec),
        Suite::Bgq => {
            for &b in &cfg.bs {
                bgq(corpus, b, &mut rec);
            }
        }
        Suite::PropOg => {
            for &b in &cfg.bs {
                prop_og(corpus, b, &mut rec);
            }
        }
        Suite::COP => {
            for &b in &cfg.bs {
                cop(corpus, b, &mut rec);
            }
        }
        Suite::Exclm => {
            per_graph(corpus, &mut rec, exclm);
            per_contraction_single_edges(corpus, &cfg.bs, &mut rec);
        }
        Suite::Remark0e1 => remark_0e1(corpus, &mut rec),
        Suite::Noinjdeg => noinjdeg(corpus, &mut rec),
    }
    if rec.truncated {
        rec.findings.push(json!({"note": "time budget exhausted; sweep incomplete"}));
    }
    let failures = rec.failures;
    Ok(SuiteReport {
        suite: suite.name().into(),
        genus: cfg.genus,
        b: cfg.bs.clone(),
        instances: rec.instances,
        passes: rec.instances - failures.len(),
        failures,
        findings: rec.findings,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn uses_contractions(s: Suite) -> bool {
    matches!(s, Suite::Fupr | Suite::Fprop | Suite::Fthm | Suite::FdiagBricor)
}

fn per_graph(corpus: &Corpus, rec: &mut Recorder, f: impl Fn(&Graph, &mut Recorder) + Sync) {
    let deadline = rec.deadline;
    let parts: Vec<Recorder> = corpus
        .atlas
        .graphs
        .par_iter()
        .map(|g| {
            let mut r = Recorder::new(deadline);
            if !r.expired() {
                f(g, &mut r);
            }
            r
        })
        .collect();
    for p in parts {
        rec.merge(p);
    }
}

fn per_contraction(corpus: &Corpus, rec: &mut Recorder, f: impl Fn(&Contraction, &mut Recorder) + Sync) {
    let deadline = rec.deadline;
    let parts: Vec<Recorder> = corpus
        .contractions
        .par_iter()
        .map(|(_, _, c)| {
            let mut r = Recorder::new(deadline);
            if !r.expired() {
                f(c, &mut r);
            }
            r
        })
        .collect();
    for p in parts {
        rec.merge(p);
    }
}

/// Carrier `G − S` for every `S ⊆ E`.
fn carriers(g: &Graph) -> impl Iterator<Item = (EdgeSet, Graph)> + '_ {
    EdgeSet::all_subsets(g.edge_count()).map(move |s| (s, g.delete_edges(&s)))
}

fn lm0(g: &Graph, r: &mut Recorder) {
    for (s, c) in carriers(g) {
        for o in enumerate_orientations(&c, &c.no_edges(), 0) {
            let modes: Vec<bool> =
                CyclicMode::ALL.iter().map(|&m| o.is_totally_cyclic(&c, m).unwrap_or(false)).collect();
            r.check(
                modes.iter().all(|&x| x == modes[0]),
                "totally cyclic characterizations agree",
                || format!("{} S={s:?} O={}", gname(g), o.code()),
                || format!("{modes:?}"),
            );
        }
    }
}

const ROOTED_FORMS: [RootedMode; 4] =
    [RootedMode::Definition, RootedMode::PositiveInflow, RootedMode::PositiveInflowConnected, RootedMode::DivisorBound];

fn lmo1(g: &Graph, r: &mut Recorder) {
    for (s, c) in carriers(g) {
        if !c.is_connected() {
            continue;
        }
        for o in enumerate_orientations(&c, &c.no_edges(), 1) {
            let modes: Vec<bool> = ROOTED_FORMS.iter().map(|&m| o.is_rooted(&c, m).unwrap_or(false)).collect();
            r.check(
                modes.iter().all(|&x| x == modes[0]),
                "rooted characterizations agree",
                || format!("{} S={s:?} O={}", gname(g), o.code()),
                || format!("{modes:?}"),
            );
        }
    }
}

fn lmfree(g: &Graph, r: &mut Recorder) {
    for (s, c) in carriers(g) {
        if !c.is_connected() {
            continue;
        }
        for o in enumerate_orientations(&c, &c.no_edges(), 1) {
            let def = o.is_rooted(&c, RootedMode::Definition).unwrap_or(false);
            let reach = o.is_rooted(&c, RootedMode::Reachability).unwrap_or(false);
            r.check(def == reach, "rooted iff every vertex is reached from the bioriented edge", || {
                format!("{} S={s:?} O={}", gname(g), o.code())
            }, || format!("definition {def}, reachability {reach}"));
            if !def {
                continue;
            }
            for e in 0..c.edge_count() {
                let moved = o.move_biorientation(&c, e);
                let ok = moved.as_ref().is_ok_and(|m| {
                    m.bioriented_edge() == Some(e)
                        && m.is_rooted(&c, RootedMode::Definition).unwrap_or(false)
                        && m.divisor_of(&c) == o.divisor_of(&c)
                });
                r.check(ok, "biorientation moves to any edge within the class", || {
                    format!("{} S={s:?} O={} e'={e}", gname(g), o.code())
                }, || format!("{moved:?}"));
            }
        }
    }
}

fn f1_lmo(g: &Graph, r: &mut Recorder) {
    for (s, c) in carriers(g) {
        let inst = || format!("{} S={s:?}", gname(g));
        let bridgeless = c.bridges().is_empty();
        let tc = !enumerate_admissible(&c, &c.no_edges(), 0).is_empty();
        r.check(tc == bridgeless, "totally cyclic orientations exist iff bridgeless", inst, || {
            format!("bridgeless {bridgeless}, O^0 nonempty {tc}")
        });
        if bridgeless {
            let ok = strong_orient(&c).is_ok_and(|o| o.is_admissible(&c));
            r.check(ok, "strong orientation of a bridgeless graph is totally cyclic", inst, String::new);
        }
        let connected = c.is_connected();
        let rooted = !enumerate_admissible(&c, &c.no_edges(), 1).is_empty();
        r.check(rooted == connected, "rooted orientations exist iff connected", inst, || {
            format!("connected {connected}, O^1 nonempty {rooted}")
        });
        if connected {
            let ok = rooted_orient(&c).is_ok_and(|o| o.is_admissible(&c));
            r.check(ok, "constructed 1-orientation is rooted", inst, String::new);
        }
    }
}

fn degor(g: &Graph, bs: &[u8], r: &mut Recorder) {
    for (s, c) in carriers(g) {
        for &b in bs {
            let inst = || format!("{} S={s:?} b={b}", gname(g));
            let raw = enumerate_orientations(&c, &c.no_edges(), b);
            let mut by_div: BTreeMap<Divisor, Vec<bool>> = BTreeMap::new();
            for o in &raw {
                by_div.entry(o.divisor_of(&c)).or_default().push(o.is_admissible(&c));
            }
            let admissible: Vec<Divisor> =
                by_div.iter().filter(|(_, v)| v.iter().any(|&x| x)).map(|(d, _)| d.clone()).collect();
            let Some(stable) = r.result(sigma(&c, b), "stable divisors enumerate", inst) else { continue };
            r.check(admissible == stable, "admissible classes correspond to stable divisors", inst, || {
                format!("classes {admissible:?} vs stable {stable:?}")
            });
            let wide = sigma_in_window(&c, b, 2).unwrap_or_default();
            r.check(wide == stable, "no stable divisor outside the orientation box", inst, || format!("{wide:?}"));
            for (d, adm) in &by_div {
                let uniform = adm.iter().all(|&x| x == adm[0]);
                r.check(uniform, "a class is entirely admissible or not at all", || format!("{} d={d}", inst()), || {
                    format!("{adm:?}")
                });
                if is_stable_divisor(&c, d, b).unwrap_or(false) {
                    r.check(adm.iter().all(|&x| x), "orientations with stable divisor are admissible", || {
                        format!("{} d={d}", inst())
                    }, String::new);
                }
            }
            for o in raw.iter().filter(|o| o.is_admissible(&c)) {
                if b == 1 && c.edge_count() == 0 {
                    continue;
                }
                let d = o.divisor_of(&c);
                for z in VertexSet::all_subsets(c.vertex_count()).skip(1) {
                    if !c.is_connected_subset(&z) {
                        continue;
                    }
                    let rhs = c.subset_genus(&z) - 1 + o.b_within(&c, &z) + o.t_into(&c, &z);
                    r.check(d.degree_on(&z) == rhs, "degree of d on connected Z", || {
                        format!("{} O={} Z={z:?}", inst(), o.code())
                    }, || format!("{} vs {rhs}", d.degree_on(&z)));
                }
            }
            if b == 1 && c.is_connected() {
                for d in &stable {
                    let o = stable_to_orientation(&c, d);
                    let ok = o.as_ref().is_ok_and(|o| o.divisor_of(&c) == *d && o.is_admissible(&c));
                    r.check(ok, "stable divisors are realized by rooted orientations", || {
                        format!("{} d={d}", inst())
                    }, || format!("{o:?}"));
                }
            }
        }
        if c.is_connected() && s.count() <= 1 {
            hakimi_agreement(&c, r, &s);
        }
    }
}

/// The subset inequalities decide orientability exactly.
fn hakimi_agreement(c: &Graph, r: &mut Recorder, s: &EdgeSet) {
    let n = c.vertex_count();
    let target = c.genus() - 1;
    let lo: Vec<i64> = (0..n).map(|v| i64::from(c.weight(v)) - 2).collect();
    let hi: Vec<i64> = (0..n).map(|v| i64::from(c.weight(v)) + c.degree(v) as i64).collect();
    let mut cur = vec![0i64; n];
    fn rec_box(
        i: usize,
        lo: &[i64],
        hi: &[i64],
        left: i64,
        cur: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        if i == lo.len() {
            if left == 0 {
                visit(cur);
            }
            return;
        }
        for x in lo[i]..=hi[i] {
            cur[i] = x;
            rec_box(i + 1, lo, hi, left - x, cur, visit);
        }
    }
    rec_box(0, &lo, &hi, target, &mut cur, &mut |v| {
        let d = Divisor::new(v.to_vec());
        let cond = hakimi_condition(c, &d);
        let found = hakimi_search(c, &d);
        let realized = found.as_ref().is_some_and(|o| o.divisor_of(c) == d);
        r.check(cond == found.is_some() && (found.is_none() || realized), "orientable iff the subset inequalities hold", || {
            format!("{} S={s:?} d={d}", gname(c))
        }, || format!("condition {cond}, orientation {found:?}"));
    });
}

fn degor_pinned(corpus: &Corpus, cfg: &VerifyConfig, r: &mut Recorder) {
    if cfg.genus != 2 {
        return;
    }
    for (g, b, want) in [(&fixtures::theta(), 0u8, 2usize), (&fixtures::dumbbell(), 1, 1)] {
        let present = corpus.atlas.index_of(g).is_some();
        let classes = sigma(g, b).map(|s| s.len()).unwrap_or(0);
        r.check(present && classes == want, "pinned class counts", || format!("{} b={b}", gname(g)), || {
            format!("{classes} classes, expected {want}")
        });
    }
}

fn quoto_poo(g: &Graph, bs: &[u8], r: &mut Recorder) {
    for &b in bs {
        let inst = || format!("{} b={b}", gname(g));
        let sets = admissible_sets(g, b);
        for s in &sets {
            for o in enumerate_admissible(g, s, b) {
                for t in sets.iter().filter(|t| t.is_subset(s)) {
                    let ext = extend_orientation(g, &o, t);
                    let ok = ext.as_ref().is_ok_and(|x| x.is_admissible(g) && x.restrict(s).ok() == Some(o.clone()));
                    r.check(ok, "admissible orientations extend to smaller removed sets", || {
                        format!("{} {} T={t:?}", inst(), okey(&o))
                    }, || format!("{ext:?}"));
                }
            }
        }
        let Some((bar, op, proj)) = r.result(build_opbar(g, b), "orientation class poset exists", inst) else {
            continue;
        };
        let a = build_a(g, b).expect("A^b_G is a poset");
        r.check(op.is_graded(), "OP graded by g(G − S)", inst, String::new);
        r.check(bar.is_graded(), "class poset graded by g(G − S)", inst, String::new);
        r.check(is_quotient_map(&proj, &op, &bar), "projection onto classes is a quotient", inst, String::new);
        let forget: Vec<usize> = bar.elements().iter().map(|k| a.index_of(&k.removed).unwrap_or(usize::MAX)).collect();
        let v = quotient_map_violation(&forget, &bar, &a);
        r.check(v.is_none(), "forgetful map to A^b_G is a quotient", inst, || v.unwrap_or_default());
        let mut members = vec![Vec::new(); bar.len()];
        for (x, &c) in proj.iter().enumerate() {
            members[c].push(x);
        }
        for x in 0..bar.len() {
            for y in 0..bar.len() {
                if !bar.key(y).removed.is_subset(&bar.key(x).removed) {
                    continue;
                }
                let exists = members[x].iter().any(|&p| members[y].iter().any(|&q| op.leq(p, q)));
                let forall = members[x].iter().all(|&p| members[y].iter().any(|&q| op.leq(p, q)));
                r.check(exists == forall && bar.leq(x, y) == exists, "existential and universal comparison agree", || {
                    format!("{} {} ≤ {}", inst(), bar.key(x).label(), bar.key(y).label())
                }, || format!("exists {exists}, forall {forall}, poset {}", bar.leq(x, y)));
            }
        }
    }
}

fn rkbp(g: &Graph, bs: &[u8], r: &mut Recorder) {
    for &b in bs {
        let inst = || format!("{} b={b}", gname(g));
        let Some(a) = r.result(build_a(g, b), "A^b_G is a poset", inst) else { continue };
        r.check(a.is_graded(), "A^b_G graded by g(G − S)", inst, String::new);
        let max: Vec<EdgeSet> = a.maximal().iter().map(|&i| *a.key(i)).collect();
        let min: Vec<EdgeSet> = a.minimal().iter().map(|&i| *a.key(i)).collect();
        if b == 0 {
            r.check(max == vec![g.bridges()], "unique maximal element G_br", inst, || format!("{max:?}"));
            r.check(min == vec![g.all_edges()], "unique minimal element E", inst, || format!("{min:?}"));
        } else {
            r.check(max == vec![g.no_edges()], "unique maximal element ∅", inst, || format!("{max:?}"));
            let trees = min.iter().all(|s| {
                let c = g.delete_edges(s);
                c.is_connected() && c.edge_count() + 1 == c.vertex_count() && rank_of(g, s) == c.total_weight()
            });
            r.check(trees, "minimal elements leave spanning trees", inst, || format!("{min:?}"));
        }
    }
    // A^0_G = A^0_{G − G_br}
    let br = g.bridges();
    let h = g.delete_edges(&br);
    let kept = g.kept_edges(&br);
    let a_g = admissible_sets(g, 0);
    let a_h = admissible_sets(&h, 0);
    let mapped: Vec<EdgeSet> = a_g
        .iter()
        .map(|s| EdgeSet::from_indices(h.edge_count(), (0..kept.len()).filter(|&i| s.contains(kept[i]))))
        .collect();
    let mut sorted = mapped.clone();
    sorted.sort();
    let mut expect = a_h.clone();
    expect.sort();
    r.check(sorted == expect, "A^0_G identifies with A^0 of G minus its bridges", || gname(g), || {
        format!("{mapped:?} vs {a_h:?}")
    });
}

fn is_cut(g: &Graph, t: &EdgeSet) -> bool {
    VertexSet::all_subsets(g.vertex_count()).any(|z| g.cut_unchecked(&z) == *t)
}

fn ftriv(g: &Graph, r: &mut Recorder) {
    for s0 in EdgeSet::all_subsets(g.edge_count()) {
        let gamma = Contraction::contract(g, &s0);
        let h = gamma.target();
        let inst = || format!("{} S0={s0:?}", gname(g));
        let bridges_ok = h.bridges().is_empty() == g.bridges().is_subset(&s0);
        r.check(bridges_ok, "H bridgeless iff G_br ⊆ S0", inst, String::new);
        for t in EdgeSet::all_subsets(h.edge_count()) {
            let tg = gamma.preimage_edges(&t);
            let minus = g.delete_edges(&tg);
            let kept = g.kept_edges(&tg);
            let s0_local = EdgeSet::from_indices(minus.edge_count(), (0..kept.len()).filter(|&i| s0.contains(kept[i])));
            let lhs = h.delete_edges(&t);
            let (rhs, _) = minus.contract(&s0_local);
            r.check(lhs == rhs, "H − T = (G − T)/S0", || format!("{} T={t:?}", inst()), String::new);
            let q_h = h.quotient_to(&t);
            let q_g = g.quotient_to(&tg);
            r.check(q_h == q_g, "H(T) = G(T)", || format!("{} T={t:?}", inst()), String::new);
            r.check(is_cut(h, &t) == is_cut(g, &tg), "cuts of H are the cuts of G avoiding S0", || {
                format!("{} T={t:?}", inst())
            }, String::new);
        }
        if s0.is_empty() {
            for s in EdgeSet::all_subsets(g.edge_count()) {
                let same = gamma.push_edges(&s) == s && gamma.pull_edges(&s, 1) == s;
                r.check(same, "the trivial contraction acts as the identity", || format!("{} S={s:?}", gname(g)), String::new);
            }
        }
    }
}

fn fupr(gamma: &Contraction, bs: &[u8], r: &mut Recorder) {
    let g = gamma.source();
    let h = gamma.target();
    for &b in bs {
        let inst = || format!("{} b={b}", cname(gamma));
        let a_g = build_a(g, b).expect("poset");
        let a_h = build_a(h, b).expect("poset");
        for t in a_h.elements() {
            let p = gamma.pull_edges(t, b);
            r.check(a_g.index_of(&p).is_some(), "pullback lands in A^b_G", || format!("{} T={t:?}", inst()), || {
                format!("{p:?}")
            });
            r.check(gamma.push_edges(&p) == *t, "γ_* γ^* T = T", || format!("{} T={t:?}", inst()), || format!("{p:?}"));
            r.check(rank_of(h, t) == rank_of(g, &p), "g(H − T) = g(G − γ^*T)", || format!("{} T={t:?}", inst()), String::new);
            for s in a_g.elements() {
                let pushed = gamma.push_edges(s);
                r.check(
                    t.is_subset(&pushed) == p.is_subset(s),
                    "T ⊆ γ_*S iff γ^*T ⊆ S",
                    || format!("{} T={t:?} S={s:?}", inst()),
                    String::new,
                );
                if pushed == *t {
                    r.check(p.is_subset(s), "γ^*T is the least set over T", || format!("{} T={t:?} S={s:?}", inst()), String::new);
                }
            }
            for u in a_h.elements().iter().filter(|u| t.is_subset(u)) {
                // u ≤ t in reverse inclusion
                r.check(
                    p.is_subset(&gamma.pull_edges(u, b)),
                    "pullback is monotone",
                    || format!("{} R={u:?} T={t:?}", inst()),
                    String::new,
                );
            }
        }
        let f: Vec<usize> =
            a_g.elements().iter().map(|s| a_h.index_of(&gamma.push_edges(s)).unwrap_or(usize::MAX)).collect();
        let v = quotient_map_violation(&f, &a_g, &a_h);
        r.check(v.is_none(), "pushforward of edge sets is a quotient of posets", inst, || v.unwrap_or_default());
        if gamma.contracted().is_subset(&g.bridges()) {
            r.check(a_g.is_isomorphic_via(&a_h, &f), "contracting bridges gives an isomorphism", inst, String::new);
        }
    }
}

/// Functor laws for composable pairs of contractions.
fn compositions(corpus: &Corpus, bs: &[u8], rec: &mut Recorder) {
    let atlas = &corpus.atlas;
    let deadline = rec.deadline;
    let parts: Vec<Recorder> = corpus
        .contractions
        .par_iter()
        .map(|(_, j, gamma)| {
            let mut r = Recorder::new(deadline);
            for k in 0..atlas.len() {
                if r.expired() {
                    break;
                }
                for delta in atlas.contraction_witnesses(*j, k).iter().take(3) {
                    composition_laws(gamma, delta, bs, &mut r);
                }
            }
            r
        })
        .collect();
    for p in parts {
        rec.merge(p);
    }
}

fn composition_laws(gamma: &Contraction, delta: &Contraction, bs: &[u8], r: &mut Recorder) {
    let Ok(comp) = gamma.then(delta) else {
        r.check(false, "contractions compose", || cname(gamma), String::new);
        return;
    };
    let g = gamma.source();
    let inst = || format!("{} then {:?}", cname(gamma), delta.contracted());
    r.check(comp.validate().is_ok(), "composite is a contraction", inst, String::new);
    for s in EdgeSet::all_subsets(g.edge_count()) {
        r.check(
            comp.push_edges(&s) == delta.push_edges(&gamma.push_edges(&s)),
            "(δγ)_* = δ_* γ_* on edge sets",
            || format!("{} S={s:?}", inst()),
            String::new,
        );
    }
    let n = g.vertex_count();
    let probes = [Divisor::new((0..n as i64).map(|v| v * v - 1).collect()), Divisor::unit(n, n - 1)];
    for d in &probes {
        let lhs = comp.push_divisor(d).ok();
        let rhs = gamma.push_divisor(d).and_then(|x| delta.push_divisor(&x)).ok();
        r.check(lhs == rhs, "(δγ)_* = δ_* γ_* on divisors", || format!("{} d={d}", inst()), String::new);
    }
    for &b in bs {
        for t in admissible_sets(delta.target(), b) {
            r.check(
                comp.pull_edges(&t, b) == gamma.pull_edges(&delta.pull_edges(&t, b), b),
                "(δγ)^* = γ^* δ^*",
                || format!("{} b={b} T={t:?}", inst()),
                String::new,
            );
        }
        for s in admissible_sets(g, b) {
            for o in enumerate_admissible(g, &s, b) {
                if o.bioriented_edge().is_none_or(|e| !comp.contracted().contains(e)) {
                    let lhs = push_orientation(&comp, &o).ok();
                    let rhs = push_orientation(gamma, &o).and_then(|x| push_orientation(delta, &x)).ok();
                    r.check(lhs.is_some() && lhs == rhs, "(δγ)_* = δ_* γ_* on orientations", || {
                        format!("{} {}", inst(), okey(&o))
                    }, || format!("{lhs:?} vs {rhs:?}"));
                }
                let lhs = push_class_key(&comp, &o).ok();
                let rhs = push_class(gamma, &o).and_then(|x| push_class_key(delta, &x)).ok();
                r.check(lhs.is_some() && lhs == rhs, "(δγ)_* = δ_* γ_* on classes", || format!("{} {}", inst(), okey(&o)), || {
                    format!("{lhs:?} vs {rhs:?}")
                });
            }
        }
    }
}

/// The worked example with three weight-one vertices.
pub fn theta_chain() -> (Graph, Contraction, Orientation) {
    let g = fixtures::theta_chain();
    let e = EdgeSet::singleton(6, 2);
    let gamma = Contraction::contract(&g, &e);
    let o = Orientation::parse(&g, e, "+-+-+", 0).unwrap();
    (g, gamma, o)
}

fn fprop_pinned(r: &mut Recorder) {
    let (g, gamma, o) = theta_chain();
    let h = gamma.target();
    let pushed = push_orientation(&gamma, &o).expect("no bioriented edge");
    let values = (
        o.target_vector(&g),
        pushed.target_vector(h),
        pushed.divisor_of(h),
        gamma.push_divisor(&o.divisor_of(&g)).unwrap(),
        gamma.c_divisor(o.removed()),
    );
    let expect = (
        Divisor::new(vec![1, 2, 2]),
        Divisor::new(vec![3, 2]),
        Divisor::new(vec![4, 2]),
        Divisor::new(vec![3, 2]),
        Divisor::new(vec![1, 0]),
    );
    r.check(values == expect, "worked example: t, pushed t and d, γ_*d, c", || gname(&g), || format!("{values:?}"));
    r.check(&values.2 - &values.4 == values.3, "worked example: (3,2) = (4,2) − (1,0)", || gname(&g), String::new);
}

fn fprop(gamma: &Contraction, bs: &[u8], r: &mut Recorder) {
    let g = gamma.source();
    let h = gamma.target();
    let s0 = gamma.contracted();
    for &b in bs {
        let inst = || format!("{} b={b}", cname(gamma));
        let mut elements = Vec::new();
        for s in admissible_sets(g, b) {
            elements.extend(enumerate_admissible(g, &s, b));
        }
        let pushable: Vec<&Orientation> =
            elements.iter().filter(|o| o.bioriented_edge().is_none_or(|e| !s0.contains(e))).collect();
        let mut images: BTreeMap<(EdgeSet, Divisor), Divisor> = BTreeMap::new();
        for o in &pushable {
            let Some(p) = r.result(push_orientation(gamma, o), "pushforward is defined", || format!("{} {}", inst(), okey(o)))
            else {
                continue;
            };
            r.check(p.is_admissible(h), "pushforward of an admissible orientation is admissible", || {
                format!("{} {}", inst(), okey(o))
            }, || okey(&p));
            let lhs = gamma.push_divisor(&o.divisor_of(g)).unwrap();
            let rhs = &p.divisor_of(h) - &gamma.c_divisor(o.removed());
            r.check(lhs == rhs, "γ_* d^O = d^{γ_*O} − c^{γ,S}", || format!("{} {}", inst(), okey(o)), || {
                format!("{lhs} vs {rhs}")
            });
            let key = (*o.removed(), o.divisor_of(g));
            let img = p.divisor_of(h);
            match images.get(&key) {
                Some(prev) => r.check(*prev == img, "equivalent orientations push to equivalent ones", || {
                    format!("{} {}", inst(), okey(o))
                }, || format!("{prev} vs {img}")),
                None => {
                    images.insert(key, img);
                }
            }
        }
        for x in &pushable {
            for y in &pushable {
                if x != y && op_leq(x, y) {
                    let ok = match (push_orientation(gamma, x), push_orientation(gamma, y)) {
                        (Ok(px), Ok(py)) => op_leq(&px, &py),
                        _ => false,
                    };
                    r.check(ok, "pushforward preserves the order", || format!("{} {} ≤ {}", inst(), okey(x), okey(y)), String::new);
                }
            }
        }
    }
}

fn fthm(gamma: &Contraction, bs: &[u8], r: &mut Recorder) {
    for &b in bs {
        let total = gamma.contracted().is_full();
        let res = verify_fthm(gamma, b);
        if b == 1 && total {
            // needs S0 ≠ E; reported, not asserted
            let holds = res.as_ref().is_ok_and(|v| v.is_empty());
            r.findings.push(json!({
                "note": "total contraction with b = 1 (empty rooted class convention)",
                "contraction": cname(gamma),
                "quotient_and_fiber_surjectivity_hold": holds,
            }));
            continue;
        }
        match res {
            Ok(v) => r.check(v.is_empty(), "γ̄_* is a quotient, surjective on each fiber", || {
                format!("{} b={b}", cname(gamma))
            }, || v.join("; ")),
            Err(e) => r.check(false, "γ̄_* is a quotient, surjective on each fiber", || {
                format!("{} b={b}", cname(gamma))
            }, || e.to_string()),
        }
    }
}

fn fdiag(gamma: &Contraction, bs: &[u8], r: &mut Recorder) {
    let g = gamma.source();
    let h = gamma.target();
    let s0 = gamma.contracted();
    for &b in bs {
        let inst = || format!("{} b={b}", cname(gamma));
        let Ok((bar_g, op_g, proj_g)) = build_opbar(g, b) else { continue };
        let Ok((bar_h, op_h, _)) = build_opbar(h, b) else { continue };
        let mut rep = vec![None; bar_g.len()];
        for (x, &c) in proj_g.iter().enumerate() {
            rep[c].get_or_insert(x);
        }
        let class_image: Vec<Option<ClassKey>> =
            rep.iter().map(|x| push_class_key(gamma, op_g.key(x.unwrap())).ok()).collect();
        for (x, o) in op_g.elements().iter().enumerate() {
            if o.bioriented_edge().is_some_and(|e| s0.contains(e)) {
                continue;
            }
            let down = push_orientation(gamma, o).map(|p| ClassKey::of(h, &p)).ok();
            r.check(down.is_some() && down == class_image[proj_g[x]], "class of pushforward = pushforward of class", || {
                format!("{} {}", inst(), okey(o))
            }, || format!("{down:?} vs {:?}", class_image[proj_g[x]]));
        }
        if s0.is_subset(&g.bridges()) {
            let f: Vec<usize> = class_image
                .iter()
                .map(|k| k.as_ref().and_then(|k| bar_h.index_of(k)).unwrap_or(usize::MAX))
                .collect();
            let bij = bar_g.is_isomorphic_via(&bar_h, &f);
            if b == 0 {
                let pushed: Vec<usize> = op_g
                    .elements()
                    .iter()
                    .map(|o| push_orientation(gamma, o).ok().and_then(|p| op_h.index_of(&p)).unwrap_or(usize::MAX))
                    .collect();
                r.check(op_g.is_isomorphic_via(&op_h, &pushed), "bridge contraction is a bijection on orientations", inst, String::new);
                r.check(bij, "bridge contraction is a bijection on classes", inst, String::new);
            } else {
                r.findings.push(json!({
                    "note": "bridge contraction with b = 1: bijectivity on classes",
                    "contraction": cname(gamma),
                    "bijective": bij,
                }));
            }
        }
    }
}

fn bricor(g: &Graph, r: &mut Recorder) {
    let br = g.bridges();
    if br.is_empty() {
        return;
    }
    let inst = || gname(g);
    let h = g.delete_edges(&br);
    let kept = g.kept_edges(&br);
    let (Ok((bar_g, op_g, _)), Ok((bar_h, op_h, _))) = (build_opbar(g, 0), build_opbar(&h, 0)) else {
        r.check(false, "orientation posets exist", inst, String::new);
        return;
    };
    // inclusion G − G_br → G
    let include = |o: &Orientation| -> Option<Orientation> {
        let removed = EdgeSet::from_indices(g.edge_count(), o.removed().iter().map(|i| kept[i])).union(&br);
        Orientation::new(g, removed, o.states().to_vec(), o.b()).ok()
    };
    let f: Vec<usize> =
        op_h.elements().iter().map(|o| include(o).and_then(|x| op_g.index_of(&x)).unwrap_or(usize::MAX)).collect();
    r.check(op_h.is_isomorphic_via(&op_g, &f), "OP^0 of G minus bridges identifies with OP^0_G", inst, String::new);
    let fb: Vec<usize> = bar_h
        .elements()
        .iter()
        .map(|k| {
            let removed = EdgeSet::from_indices(g.edge_count(), k.removed.iter().map(|i| kept[i])).union(&br);
            bar_g.index_of(&ClassKey { removed, divisor: k.divisor.clone() }).unwrap_or(usize::MAX)
        })
        .collect();
    r.check(bar_h.is_isomorphic_via(&bar_g, &fb), "class posets identify under the inclusion", inst, String::new);
    // contraction G → G/G_br
    let gamma = Contraction::contract(g, &br);
    let Ok((bar_q, op_q, _)) = build_opbar(gamma.target(), 0) else { return };
    let f: Vec<usize> = op_g
        .elements()
        .iter()
        .map(|o| push_orientation(&gamma, o).ok().and_then(|p| op_q.index_of(&p)).unwrap_or(usize::MAX))
        .collect();
    r.check(op_g.is_isomorphic_via(&op_q, &f), "OP^0_G identifies with OP^0 of G/G_br", inst, String::new);
    let fb: Vec<usize> = bar_g
        .elements()
        .iter()
        .map(|k| {
            k.representative(g, 0)
                .and_then(|o| push_class_key(&gamma, &o).ok())
                .and_then(|key| bar_q.index_of(&key))
                .unwrap_or(usize::MAX)
        })
        .collect();
    r.check(bar_g.is_isomorphic_via(&bar_q, &fb), "class posets identify under the bridge contraction", inst, String::new);
}

fn rksg(corpus: &Corpus, r: &mut Recorder) {
    let atlas = &corpus.atlas;
    let inst = || format!("genus {}", atlas.genus);
    let Some(sg) = r.result(atlas.build_sg(), "S_g is a poset", inst) else { return };
    r.check(sg.is_graded(), "S_g graded by 3g − 3 − |E|", inst, String::new);
    let top = Graph::new(vec![atlas.genus], vec![]).unwrap();
    let max: Vec<usize> = sg.maximal();
    r.check(max.len() == 1 && atlas.graphs[max[0]] == top, "unique maximal element is one vertex of weight g", inst, || {
        format!("{max:?}")
    });
    for (i, j) in sg.covers() {
        let one_edge = atlas.contraction_witnesses(i, j).iter().any(|c| c.contracted().count() == 1);
        r.check(one_edge, "covers contract one edge", || format!("{} → {}", gname(&atlas.graphs[i]), gname(&atlas.graphs[j])), String::new);
    }
    for (i, g) in atlas.graphs.iter().enumerate() {
        r.check(g.edge_count() as i64 <= 3 * i64::from(atlas.genus) - 3 && g.is_stable(), "stable with |E| ≤ 3g − 3", || gname(g), String::new);
        for e in 0..g.edge_count() {
            let entry = atlas.edge_contractions.iter().find(|c| c.source == i && c.edge == e);
            let ok = entry.is_some_and(|c| {
                let q = g.contract(&EdgeSet::singleton(g.edge_count(), e)).0;
                c.iso.is_iso(&q, &atlas.graphs[c.target])
            });
            r.check(ok, "every single-edge contraction lands in the atlas", || format!("{} e={e}", gname(g)), String::new);
        }
    }
    let mut ranks: Vec<i64> = (0..atlas.len()).map(|i| atlas.graph_rank(i)).collect();
    ranks.sort();
    ranks.dedup();
    r.findings.push(json!({"graphs": atlas.len(), "ranks": ranks}));
}

fn bgq(corpus: &Corpus, b: u8, r: &mut Recorder) {
    let atlas = &corpus.atlas;
    let inst = || format!("genus {} b={b}", atlas.genus);
    let (Some(ag), Some(sg)) = (r.result(atlas.build_ag(b), "A^b_g is a poset", inst), atlas.build_sg().ok()) else {
        return;
    };
    r.check(ag.is_graded(), "A^b_g graded by 3g − 3 − |E| + g(G − S)", inst, String::new);
    let f: Vec<usize> = ag.elements().iter().map(|(i, _)| *i).collect();
    let v = quotient_map_violation(&f, &ag, &sg);
    r.check(v.is_none(), "A^b_g → S_g is a quotient", inst, || v.unwrap_or_default());
    let expected: usize = atlas.graphs.iter().map(|g| admissible_sets(g, b).len()).sum();
    r.check(ag.len() == expected, "A^b_g is the union of the A^b_G", inst, || format!("{} vs {expected}", ag.len()));
    for (i, g) in atlas.graphs.iter().enumerate() {
        let a = build_a(g, b).expect("poset");
        let idx: Vec<usize> = a.elements().iter().map(|s| ag.index_of(&(i, *s)).unwrap()).collect();
        let induced = (0..a.len()).all(|x| (0..a.len()).all(|y| a.leq(x, y) == ag.leq(idx[x], idx[y])));
        r.check(induced, "A^b_g induces the order of A^b_G", || format!("{} b={b}", gname(g)), String::new);
    }
    r.findings.push(json!({"b": b, "elements": ag.len()}));
}

fn prop_og(corpus: &Corpus, b: u8, r: &mut Recorder) {
    let atlas = &corpus.atlas;
    let inst = || format!("genus {} b={b}", atlas.genus);
    let Some(fibers) = r.result(atlas.class_posets(b), "class posets exist", inst) else { return };
    let Some(opg) = r.result(atlas.build_opg_from(&fibers), "OP^b_g is a poset", inst) else { return };
    let (Ok(sg), Ok(ag)) = (atlas.build_sg(), atlas.build_ag(b)) else { return };
    r.check(opg.is_graded(), "OP^b_g graded by 3g − 3 − |E| + g(G − S)", inst, String::new);
    let chi: Vec<usize> = opg.elements().iter().map(|(i, _)| *i).collect();
    let v = quotient_map_violation(&chi, &opg, &sg);
    r.check(v.is_none(), "χ: OP^b_g → S_g is a quotient", inst, || v.unwrap_or_default());
    let tau: Vec<usize> =
        opg.elements().iter().map(|(i, k)| ag.index_of(&(*i, k.removed)).unwrap_or(usize::MAX)).collect();
    let v = quotient_map_violation(&tau, &opg, &ag);
    r.check(v.is_none(), "τ: OP^b_g → A^b_g is a quotient", inst, || v.unwrap_or_default());
    for (i, f) in fibers.iter().enumerate() {
        let idx: Vec<usize> = f.bar.elements().iter().map(|k| opg.index_of(&(i, k.clone())).unwrap()).collect();
        let induced = (0..f.bar.len()).all(|x| (0..f.bar.len()).all(|y| f.bar.leq(x, y) == opg.leq(idx[x], idx[y])));
        r.check(induced, "ŌP^b_G sits in OP^b_g as a subposet", || format!("{} b={b}", gname(&atlas.graphs[i])), String::new);
    }
    let top_graph = Graph::new(vec![atlas.genus], vec![]).unwrap();
    if let Some(t) = atlas.index_of(&top_graph) {
        let tops: Vec<usize> = (0..opg.len()).filter(|&x| opg.key(x).0 == t).collect();
        for x in 0..opg.len() {
            r.check(tops.iter().any(|&y| opg.leq(x, y)), "every element lies below the maximal stratum", || {
                format!("graph {} {}", opg.key(x).0, opg.key(x).1.label())
            }, String::new);
        }
    }
    r.findings.push(json!({"b": b, "elements": opg.len()}));
}

fn cop(corpus: &Corpus, b: u8, r: &mut Recorder) {
    let atlas = &corpus.atlas;
    let inst = || format!("genus {} b={b}", atlas.genus);
    let Some(fibers) = r.result(atlas.class_posets(b), "class posets exist", inst) else { return };
    let Some(opg) = r.result(atlas.build_opg_from(&fibers), "OP^b_g is a poset", inst) else { return };
    let Some((conj, proj)) = r.result(atlas.conjugacy_quotient(&opg, &fibers), "conjugacy quotient is a poset", inst)
    else {
        return;
    };
    r.check(is_quotient_map(&proj, &opg, &conj), "OP^b_g → [OP^b_g] is a quotient", inst, String::new);
    r.check(conj.is_graded(), "[OP^b_g] graded by 3g − 3 − |E| + g(G − S)", inst, String::new);
    let formula_ok = conj.elements().iter().enumerate().all(|(x, (i, k))| {
        conj.rank(x) == Some(atlas.graph_rank(*i) + rank_of(&atlas.graphs[*i], &k.removed))
    });
    r.check(formula_ok, "[OP^b_g] rank matches the dimension formula", inst, String::new);
    if let Ok(sg) = atlas.build_sg() {
        let f: Vec<usize> = conj.elements().iter().map(|(i, _)| *i).collect();
        let v = quotient_map_violation(&f, &conj, &sg);
        r.check(v.is_none(), "[OP^b_g] → S_g is a quotient", inst, || v.unwrap_or_default());
    }
    // automorphisms act on classes compatibly with divisors
    for (i, f) in fibers.iter().enumerate() {
        let g = &atlas.graphs[i];
        for alpha in &atlas.automorphisms[i] {
            let a = alpha.as_contraction(g, g).expect("automorphism");
            for key in f.bar.elements() {
                let members: Vec<Orientation> = enumerate_admissible(g, &key.removed, b)
                    .into_iter()
                    .filter(|o| o.divisor_of(g) == key.divisor)
                    .collect();
                let mut images: Vec<ClassKey> = members.iter().filter_map(|o| push_class_key(&a, o).ok()).collect();
                let permuted = {
                    let mut d = vec![0; g.vertex_count()];
                    for v in 0..g.vertex_count() {
                        d[alpha.vertex_map[v]] = key.divisor[v];
                    }
                    Divisor::new(d)
                };
                images.dedup();
                let ok = images.len() == 1 && images[0].divisor == permuted && images[0].removed == alpha.map_edges(&key.removed);
                r.check(ok, "automorphisms act on classes through the vertex permutation", || {
                    format!("{} {}", gname(g), key.label())
                }, || format!("{images:?}"));
            }
        }
    }
    if let Ok((report, _)) = stratification_report(atlas, b) {
        let mut ok = true;
        for (i, entry) in report["graphs"].as_array().into_iter().flatten().enumerate() {
            let g = &atlas.graphs[i];
            for s in entry["strata"].as_array().into_iter().flatten() {
                let removed = EdgeSet::from_indices(
                    g.edge_count(),
                    s["removed"].as_array().into_iter().flatten().map(|x| x.as_u64().unwrap() as usize),
                );
                let dim = rank_of(g, &removed);
                ok &= s["dimension"] == json!(dim) && s["universal_dimension"] == json!(atlas.graph_rank(i) + dim);
            }
        }
        r.check(ok, "stratification dimensions follow the formulas", inst, String::new);
    } else {
        r.check(false, "stratification report builds", inst, String::new);
    }
    let mut per_rank: BTreeMap<i64, usize> = BTreeMap::new();
    for x in 0..conj.len() {
        *per_rank.entry(conj.rank(x).unwrap_or(-1)).or_default() += 1;
    }
    r.findings.push(json!({"b": b, "elements": conj.len(), "per_rank": per_rank}));
}

fn exclm(g: &Graph, r: &mut Recorder) {
    let mut sets = admissible_sets(g, 0);
    sets.extend(admissible_sets(g, 1));
    sets.sort();
    sets.dedup();
    for s in sets {
        let c = g.delete_edges(&s);
        for b in [0u8, 1] {
            for d in sigma(&c, b).unwrap_or_default() {
                let res = verify_exclm(g, &s, &d);
                let ok = res.as_ref().is_ok_and(|v| v.is_empty());
                r.check(ok, "δ_* d̂_S = d_S + c^δ for every choice", || format!("{} S={s:?} d={d}", gname(g)), || {
                    format!("{res:?}")
                });
            }
        }
    }
}

fn per_contraction_single_edges(corpus: &Corpus, bs: &[u8], rec: &mut Recorder) {
    let deadline = rec.deadline;
    let parts: Vec<Recorder> = corpus
        .atlas
        .graphs
        .par_iter()
        .map(|g| {
            let mut r = Recorder::new(deadline);
            for e in 0..g.edge_count() {
                if r.expired() {
                    break;
                }
                let gamma = Contraction::contract(g, &EdgeSet::singleton(g.edge_count(), e));
                for &b in bs {
                    for s in admissible_sets(g, b) {
                        for o in enumerate_admissible(g, &s, b) {
                            if o.bioriented_edge() == Some(e) {
                                continue;
                            }
                            let res = verify_hat_identity(&gamma, &o);
                            let ok = res.as_ref().is_ok_and(|v| v.is_empty());
                            r.check(ok, "hat divisors commute with contraction", || {
                                format!("{} e={e} {}", gname(g), okey(&o))
                            }, || format!("{res:?}"));
                        }
                    }
                }
            }
            r
        })
        .collect();
    for p in parts {
        rec.merge(p);
    }
}

fn remark_0e1(corpus: &Corpus, r: &mut Recorder) {
    let theta = fixtures::theta();
    for g in &corpus.atlas.graphs {
        let zero = enumerate_admissible(g, &g.no_edges(), 0);
        let rooted = enumerate_admissible(g, &g.no_edges(), 1);
        let mut images: BTreeMap<Orientation, Vec<(Orientation, usize)>> = BTreeMap::new();
        for o in &zero {
            for e in 0..g.edge_count() {
                let oe = o.with_state(e, EdgeState::Bioriented);
                r.check(oe.is_admissible(g), "biorienting one edge of a totally cyclic orientation gives a rooted one", || {
                    format!("{} O={} e={e}", gname(g), o.code())
                }, || oe.code());
                images.entry(oe).or_default().push((o.clone(), e));
            }
        }
        let pairs = zero.len() * g.edge_count();
        if let Some((img, pre)) = images.iter().find(|(_, v)| v.len() > 1) {
            r.findings.push(json!({
                "note": "the map (O, e) ↦ O_e is not injective",
                "graph": g,
                "pairs": pairs,
                "rooted_orientations": rooted.len(),
                "image": img.code(),
                "collision": pre.iter().map(|(o, e)| json!({"O": o.code(), "e": e})).collect::<Vec<_>>(),
            }));
            if *g == theta {
                r.check(pairs == 18 && rooted.len() == 12, "THETA collision counts", || gname(g), || {
                    format!("{pairs} pairs, {} rooted", rooted.len())
                });
            }
        }
    }
    if corpus.atlas.genus == 2 {
        let recorded = r.findings.iter().any(|f| f["graph"] == json!(theta));
        r.check(recorded, "THETA counterexample is reported", || gname(&theta), String::new);
    }
}

fn noinjdeg(corpus: &Corpus, r: &mut Recorder) {
    let mut found = 0usize;
    for g in &corpus.atlas.graphs {
        let mut by_div: BTreeMap<Divisor, Vec<Orientation>> = BTreeMap::new();
        for s in admissible_sets(g, 0) {
            for o in enumerate_admissible(g, &s, 0) {
                by_div.entry(o.divisor_of(g)).or_default().push(o);
            }
        }
        for (d, os) in &by_div {
            let first = &os[0];
            if let Some(other) = os.iter().find(|o| o.removed() != first.removed()) {
                found += 1;
                if found <= 5 {
                    r.findings.push(json!({
                        "note": "equal divisors on different removed sets",
                        "graph": g,
                        "divisor": d,
                        "O_S": okey(first),
                        "O_T": okey(other),
                    }));
                }
            }
        }
    }
    r.check(found > 0, "some d^{O_S} = d^{O_T} with S ≠ T", || format!("genus {}", corpus.atlas.genus), || {
        "no instance".into()
    });
    r.findings.push(json!({"instances": found}));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(vec![s]));
        }
        assert_eq!(Suite::parse("all").unwrap().len(), 19);
        assert!(Suite::parse("nope").is_none());
    }

    #[test]
    fn pinned_worked_example() {
        let mut r = Recorder::new(None);
        fprop_pinned(&mut r);
        assert_eq!(r.instances, 2);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn quick_suites_pass_in_genus_two() {
        let cfg = VerifyConfig::new(2);
        let corpus = Corpus::new(&cfg).unwrap();
        for s in [Suite::RkSg, Suite::Remark0e1, Suite::Noinjdeg, Suite::F1LmO] {
            let rep = run_suite(s, &corpus, &cfg).unwrap();
            assert!(rep.passed(), "{}: {:?}", s.name(), rep.failures);
            assert_eq!(rep.passes + rep.failures.len(), rep.instances);
        }
    }
}
