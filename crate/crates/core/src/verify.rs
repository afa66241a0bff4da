//! Cross-checks of a built index against the brute-force oracles and the
//! structural properties the construction relies on.
//!
//! Every check is tallied per text; a failing check keeps the first offending
//! case so that a counterexample can be printed.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::ids::{EdgeId, NodeId};
use crate::index::{BuildTrace, Index};
use crate::lcdawg::NodeKind;
use crate::measures::IndexStats;
use crate::oracles::{self, naive_find};
use crate::persist;
use crate::text::Text;

pub const BUILD: &str = "build";
pub const CDAWG_INVARIANTS: &str = "cdawg_invariants";
pub const CDAWG_VS_AUTOMATON: &str = "cdawg_vs_automaton";
pub const EDGES_VS_EXTENSIONS: &str = "edges_vs_extensions";
pub const MEASURES_VS_REPEATS: &str = "measures_vs_repeats";
pub const LCDAWG_INVARIANTS: &str = "lcdawg_invariants";
pub const NODE_BOUND: &str = "node_bound";
pub const EDGE_BOUND: &str = "edge_bound";
pub const TYPE2_BOUND: &str = "type2_bound";
pub const ESUF_TYPING: &str = "esuf_typing";
pub const JUMP_SPLITS: &str = "jump_splits";
pub const SLP_EDGE_LABELS: &str = "slp_edge_labels";
pub const SLP_ROOT: &str = "slp_root";
pub const SLP_SIZE: &str = "slp_size";
pub const FIND_VS_NAIVE: &str = "find_vs_naive";
pub const COUNT_VS_NAIVE: &str = "count_vs_naive";
pub const ROUND_TRIP: &str = "round_trip";
pub const LOADED_FIND: &str = "loaded_find";
pub const EXTRACT: &str = "extract";
pub const FULL_EXTRACT: &str = "full_extract";
pub const E_TILDE_BOUND: &str = "e_tilde_bound";
pub const MU_BOUND: &str = "mu_bound";
pub const Z_BOUND: &str = "z_bound";
pub const R_BOUND: &str = "r_bound";

/// Largest observed production count divided by `e_tilde`.
pub const METRIC_SLP_RATIO: &str = "productions/e_tilde";
/// Largest observed file size divided by `e_tilde * 4`.
pub const METRIC_FILE_RATIO: &str = "file_bytes/(e_tilde*4)";
pub const METRIC_HEIGHT: &str = "grammar_height";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    checks: Vec<(&'static str, Tally)>,
    metrics: Vec<(&'static str, f64)>,
}

impl Report {
    fn tally(&mut self, name: &'static str) -> &mut Tally {
        let i = match self.checks.iter().position(|c| c.0 == name) {
            Some(i) => i,
            None => {
                self.checks.push((name, Tally::default()));
                self.checks.len() - 1
            }
        };
        &mut self.checks[i].1
    }

    /// Counts one case of `name`; `detail` is only evaluated on failure.
    pub fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let t = self.tally(name);
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            if t.first_failure.is_none() {
                t.first_failure = Some(detail());
            }
        }
    }

    /// Keeps the maximum of all values observed for `name`.
    pub fn observe(&mut self, name: &'static str, value: f64) {
        match self.metrics.iter_mut().find(|m| m.0 == name) {
            Some(m) => m.1 = m.1.max(value),
            None => self.metrics.push((name, value)),
        }
    }

    pub fn merge(&mut self, other: Report) {
        for (name, t) in other.checks {
            let mine = self.tally(name);
            mine.passed += t.passed;
            mine.failed += t.failed;
            if mine.first_failure.is_none() {
                mine.first_failure = t.first_failure;
            }
        }
        for (name, v) in other.metrics {
            self.observe(name, v);
        }
    }

    pub fn check(&self, name: &str) -> Option<&Tally> {
        self.checks.iter().find(|c| c.0 == name).map(|c| &c.1)
    }

    pub fn checks(&self) -> &[(&'static str, Tally)] {
        &self.checks
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.0 == name).map(|m| m.1)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.1.failed == 0)
    }
}

/// Per-check table: name, PASS/FAIL, passed and failed case counts.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, t) in &self.checks {
            let status = if t.failed == 0 { "PASS" } else { "FAIL" };
            writeln!(f, "{status}  {name:<22} passed={:<9} failed={}", t.passed, t.failed)?;
            if let Some(d) = &t.first_failure {
                writeln!(f, "      first failure: {d}")?;
            }
        }
        for (name, v) in &self.metrics {
            writeln!(f, "max {name} = {v:.3}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Texts longer than this skip the brute-force automaton and repeat oracles.
    pub oracle_bound: usize,
    pub find_probes: usize,
    pub extract_probes: usize,
    /// Compute LZ77 and BWT-run measures (quadratic-ish oracles).
    pub lz_and_bwt: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            oracle_bound: oracles::DEFAULT_BOUND,
            find_probes: 1000,
            extract_probes: 10_000,
            lz_and_bwt: true,
        }
    }
}

fn show(bytes: &[u8]) -> String {
    if bytes.len() > 80 {
        format!("{:?}... ({} bytes)", String::from_utf8_lossy(&bytes[..80]), bytes.len())
    } else {
        format!("{:?}", String::from_utf8_lossy(bytes))
    }
}

/// Runs every check on one text. Randomized probes are drawn from `seed`.
pub fn verify_text(text: &Text, cfg: &VerifyConfig, seed: u64) -> Report {
    let mut report = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (index, trace) = match Index::build_traced(text) {
        Ok(built) => built,
        Err(e) => {
            report.record(BUILD, false, || format!("{e} on text {}", show(text.as_bytes())));
            return report;
        }
    };
    report.record(BUILD, true, String::new);
    let mut stats = IndexStats::collect(text, &index);
    if cfg.lz_and_bwt {
        stats = stats.with_lz77(text).with_bwt_runs(text);
    }

    check_cdawg(text, &trace, cfg, &mut report);
    check_structure(text, &index, &trace, &stats, &mut report);
    check_slp(text, &index, &trace, &stats, &mut report);
    check_measures(text, &stats, &mut report);
    let probes = probe_set(text, &index, &trace, cfg.find_probes, &mut rng);
    check_queries(text, &index, &probes, &mut report);
    check_extract(text, &index, cfg.extract_probes, &mut rng, &mut report);
    report
}

fn check_cdawg(text: &Text, trace: &BuildTrace, cfg: &VerifyConfig, report: &mut Report) {
    let g = &trace.cdawg;
    let inv = g.check_invariants();
    report.record(CDAWG_INVARIANTS, inv.is_ok(), || {
        format!("{} on text {}", inv.clone().unwrap_err(), show(text.as_bytes()))
    });
    if text.len() > cfg.oracle_bound {
        return;
    }
    let auto = oracles::brute_minimal_automaton(text, cfg.oracle_bound).expect("within bound");
    let mut values: Vec<Vec<u8>> = g.nodes().map(|(v, _)| g.value(v, text).to_vec()).collect();
    values.sort();
    let mut edges: Vec<(Vec<u8>, Vec<u8>, Vec<u8>)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            (
                g.value(e.hi, text).to_vec(),
                g.label(EdgeId::from_index(i), text).to_vec(),
                g.value(e.lo, text).to_vec(),
            )
        })
        .collect();
    edges.sort();
    let same = values == auto.values && edges == auto.edges;
    report.record(CDAWG_VS_AUTOMATON, same, || {
        format!(
            "nodes {} vs {}, edges {} vs {} on text {}",
            values.len(),
            auto.node_count(),
            edges.len(),
            auto.edge_count(),
            show(text.as_bytes())
        )
    });
    let reps = oracles::brute_maximal_repeats(text.with_sentinel(), cfg.oracle_bound + 1)
        .expect("within bound");
    report.record(EDGES_VS_EXTENSIONS, reps.right_extensions() == g.edge_count(), || {
        format!(
            "{} edges vs {} right extensions on text {}",
            g.edge_count(),
            reps.right_extensions(),
            show(text.as_bytes())
        )
    });
}

fn check_structure(text: &Text, index: &Index, trace: &BuildTrace, stats: &IndexStats, report: &mut Report) {
    let g = index.graph();
    let inv = g.check_invariants().and_then(|_| {
        let mut a: Vec<_> = trace.cdawg.edges().iter().map(|e| (e.hi, e.first, e.len, e.lo)).collect();
        let mut b = g.collapsed_edges();
        a.sort();
        b.sort();
        if a == b {
            Ok(())
        } else {
            Err("contracting type-2 chains does not give back the CDAWG".into())
        }
    });
    report.record(LCDAWG_INVARIANTS, inv.is_ok(), || {
        format!("{} on text {}", inv.clone().unwrap_err(), show(text.as_bytes()))
    });

    let nodes = g.node_count() as u64;
    let edges = g.edge_count() as u64;
    let t2 = g.type2_count() as u64;
    if stats.n >= 2 {
        report.record(NODE_BOUND, nodes <= 2 * (stats.mu + stats.e_l), || {
            format!("|V|={nodes} mu={} e_l={} on text {}", stats.mu, stats.e_l, show(text.as_bytes()))
        });
    }
    report.record(EDGE_BOUND, edges <= 2 * stats.e_tilde, || {
        format!("|E|={edges} e_tilde={} on text {}", stats.e_tilde, show(text.as_bytes()))
    });
    report.record(TYPE2_BOUND, t2 <= stats.e_l, || {
        format!("type-2={t2} e_l={} on text {}", stats.e_l, show(text.as_bytes()))
    });

    let labels = &trace.labels;
    for i in 0..g.edge_count() {
        let e = EdgeId::from_index(i);
        let edge = *g.edge(e);
        if edge.slen < 2 {
            continue;
        }
        // walk lab(e) from slink(e.hi) symbol by symbol, recording nodes passed
        let label = labels.label(g, e, text);
        let result = (|| -> Result<Vec<NodeId>, String> {
            let mut at = g.node(edge.hi).slink.ok_or("edge leaves a node without suffix link")?;
            let mut on_path = vec![at];
            let mut j = 0usize;
            while j < label.len() {
                let f = g.child(at, label[j]).ok_or_else(|| format!("no child for symbol {}", label[j]))?;
                let fl = labels.label(g, f, text);
                if fl.len() > label.len() - j || fl != &label[j..j + fl.len()] {
                    return Err("path from the suffix link does not spell the label".into());
                }
                j += fl.len();
                at = g.edge(f).lo;
                on_path.push(at);
            }
            let path = g.edge_suffix_link(e).map_err(|err| err.to_string())?;
            let mut via_api = vec![path.hi(g)];
            via_api.extend(path.edges.iter().map(|&f| g.edge(f).lo));
            if via_api != on_path {
                return Err("edge_suffix_link disagrees with the walk".into());
            }
            Ok(on_path)
        })();
        let ok = match &result {
            Ok(p) => {
                g.kind(p[0]) == NodeKind::Type1
                    && g.kind(p[p.len() - 1]) == NodeKind::Type1
                    && p[1..p.len() - 1].iter().all(|&v| g.kind(v) == NodeKind::Type2)
            }
            Err(_) => false,
        };
        report.record(ESUF_TYPING, ok, || {
            format!("edge {e} ({:?}): {:?} on text {}", show(label), result, show(text.as_bytes()))
        });

        let jump = g.jump(index.jumps(), e);
        let ok = jump.as_ref().is_some_and(|p| {
            let spelled: Vec<u8> = p.edges.iter().flat_map(|&f| labels.label(g, f, text).iter().copied()).collect();
            p.len() >= 2 && p.edges.iter().all(|&f| g.edge(f).slen < edge.slen) && spelled == label
        });
        report.record(JUMP_SPLITS, ok, || {
            format!("edge {e} jump {:?} on text {}", jump.map(|p| p.edges), show(text.as_bytes()))
        });
    }
}

fn check_slp(text: &Text, index: &Index, trace: &BuildTrace, stats: &IndexStats, report: &mut Report) {
    let g = index.graph();
    let slp = index.slp();
    let mut bad = None;
    for i in 0..g.edge_count() {
        let e = EdgeId::from_index(i);
        let got = slp.expand(slp.var_of_edge(e));
        if got.as_deref().ok() != Some(trace.labels.label(g, e, text)) {
            bad = Some(e);
            break;
        }
    }
    report.record(SLP_EDGE_LABELS, bad.is_none(), || {
        format!("edge {} on text {}", bad.unwrap(), show(text.as_bytes()))
    });
    let root = slp.expand(slp.root());
    report.record(SLP_ROOT, root.as_deref().ok() == Some(text.with_sentinel()), || {
        format!("root expansion differs on text {}", show(text.as_bytes()))
    });
    let p = slp.production_count() as u64;
    if stats.n >= 1 {
        report.record(SLP_SIZE, p <= 8 * stats.e_tilde, || {
            format!("{p} productions, e_tilde={} on text {}", stats.e_tilde, show(text.as_bytes()))
        });
        report.observe(METRIC_SLP_RATIO, p as f64 / stats.e_tilde as f64);
        let bytes = persist::to_bytes(index).len() as f64;
        report.observe(METRIC_FILE_RATIO, bytes / (stats.e_tilde as f64 * 4.0));
    }
    report.observe(METRIC_HEIGHT, slp.height() as f64);
}

fn check_measures(text: &Text, stats: &IndexStats, report: &mut Report) {
    let n = stats.n;
    let t = || show(text.as_bytes());
    if n >= 2 {
        report.record(E_TILDE_BOUND, stats.e_tilde <= 4 * n - 4, || {
            format!("e_tilde={} n={n} on text {}", stats.e_tilde, t())
        });
    }
    if n >= 1 {
        report.record(MU_BOUND, stats.mu < n, || format!("mu={} n={n} on text {}", stats.mu, t()));
    }
    if let Some(z) = stats.z {
        report.record(Z_BOUND, z <= stats.e_tilde, || {
            format!("z={z} e_tilde={} on text {}", stats.e_tilde, t())
        });
    }
    if let Some(r) = stats.r {
        report.record(R_BOUND, r <= stats.e_tilde, || {
            format!("r={r} e_tilde={} on text {}", stats.e_tilde, t())
        });
    }
    if text.len() <= oracles::DEFAULT_BOUND {
        let reps = oracles::brute_maximal_repeats(text.as_bytes(), oracles::DEFAULT_BOUND).expect("within bound");
        let ok = reps.count() as u64 == stats.mu
            && reps.right_extensions() as u64 == stats.e_r
            && reps.left_extensions() as u64 == stats.e_l;
        report.record(MEASURES_VS_REPEATS, ok, || {
            format!(
                "oracle mu/e_r/e_l = {}/{}/{}, index {}/{}/{} on text {}",
                reps.count(),
                reps.right_extensions(),
                reps.left_extensions(),
                stats.mu,
                stats.e_r,
                stats.e_l,
                t()
            )
        });
    }
}

/// Probe patterns: random present, absent and mutated ones, plus patterns that
/// end at or cross an inserted type-2 node.
pub fn probe_set(text: &Text, index: &Index, trace: &BuildTrace, count: usize, rng: &mut impl Rng) -> Vec<Vec<u8>> {
    let g = index.graph();
    let s = text.with_sentinel();
    let n = text.len();
    let type2: Vec<NodeId> = g.nodes().filter(|(_, node)| node.kind == NodeKind::Type2).map(|(v, _)| v).collect();
    let mut out = Vec::with_capacity(count);
    if !type2.is_empty() && n > 0 {
        for _ in 0..count / 4 {
            let v = type2[rng.gen_range(0..type2.len())];
            let depth = trace.labels.node_depth[v.index()] as usize;
            let e = g.edge_ids(v).next().expect("type-2 nodes have one out-edge");
            let ls = trace.labels.edge_start[e.index()] as usize;
            // value(v) ends right before the out-edge label; extend into the label
            // without reaching the end marker, then maybe drop a prefix
            let room = n.saturating_sub(ls).min(g.edge(e).slen as usize);
            let end = ls + rng.gen_range(0..=room);
            let start = rng.gen_range(ls - depth..ls);
            if start < end {
                out.push(s[start..end].to_vec());
            }
        }
    }
    let rest = count - out.len();
    out.extend(corpus::probe_patterns(rng, text.as_bytes(), rest, text.sigma().max(2) as usize));
    out
}

fn check_queries(text: &Text, index: &Index, probes: &[Vec<u8>], report: &mut Report) {
    let t = text.as_bytes();
    let expected: Vec<Vec<u64>> = probes.iter().map(|p| naive_find(t, p)).collect();
    let answer_all = |idx: &Index, name: &'static str, report: &mut Report| {
        for (p, want) in probes.iter().zip(&expected) {
            let got = idx.find(p);
            report.record(name, got.as_ref() == Ok(want), || {
                format!("pattern {} gave {:?}, expected {:?} on text {}", show(p), got, want, show(t))
            });
        }
    };
    answer_all(index, FIND_VS_NAIVE, report);
    for (p, want) in probes.iter().zip(&expected) {
        let c = index.count(p);
        let x = index.exists(p);
        report.record(COUNT_VS_NAIVE, c == Ok(want.len() as u64) && x == Ok(!want.is_empty()), || {
            format!("pattern {} count {:?}, expected {} on text {}", show(p), c, want.len(), show(t))
        });
    }
    let bytes = persist::to_bytes(index);
    match persist::from_bytes(&bytes) {
        Ok(loaded) => {
            report.record(ROUND_TRIP, &loaded == index, || format!("structure differs on text {}", show(t)));
            answer_all(&loaded, LOADED_FIND, report);
        }
        Err(e) => report.record(ROUND_TRIP, false, || format!("{e} on text {}", show(t))),
    }
}

fn check_extract(text: &Text, index: &Index, probes: usize, rng: &mut impl Rng, report: &mut Report) {
    let t = text.as_bytes();
    let n = t.len();
    report.record(FULL_EXTRACT, index.text() == t, || format!("full extraction differs on text {}", show(t)));
    if n == 0 {
        return;
    }
    for _ in 0..probes {
        let i = rng.gen_range(1..=n);
        let m = rng.gen_range(1..=n.min(64));
        let want = &t[i - 1..(i - 1 + m).min(n)];
        let got = index.extract(i as u64, m as u64);
        report.record(EXTRACT, got.as_deref() == Ok(want), || {
            format!("extract({i}, {m}) gave {:?} on text {}", got, show(t))
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_texts_pass_everything() {
        let cfg = VerifyConfig {
            find_probes: 100,
            extract_probes: 100,
            ..VerifyConfig::default()
        };
        let mut report = Report::default();
        for s in [&b"a"[..], b"ab", b"abcdbcda", b"ababaac", b"aaaaaaa", b"abaababaabaab"] {
            report.merge(verify_text(&Text::new(s).unwrap(), &cfg, 1));
        }
        assert!(report.all_passed(), "{report}");
        assert!(report.check(ESUF_TYPING).unwrap().passed > 0);
        assert!(report.check(CDAWG_VS_AUTOMATON).unwrap().passed == 6);
    }

    #[test]
    fn failures_keep_first_detail() {
        let mut r = Report::default();
        r.record("x", true, || unreachable!());
        r.record("x", false, || "first".into());
        r.record("x", false, || "second".into());
        let t = r.check("x").unwrap();
        assert_eq!((t.passed, t.failed), (1, 2));
        assert_eq!(t.first_failure.as_deref(), Some("first"));
        assert!(!r.all_passed());
    }
}
