//! Acceptance run over the full corpus. Prints one line per criterion and
//! exits nonzero if any criterion fails.
//!
//! Runs without the libtest harness so that the summary is always visible.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lcdawg::corpus;
use lcdawg::verify::{self, verify_text, Report, VerifyConfig};
use lcdawg::{Index, IndexStats, Text};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANDOM_TEXTS: usize = 500;
const SIGMAS: [usize; 4] = [2, 4, 26, 255];
const TIME_BUDGET: Duration = Duration::from_secs(300);

struct Named {
    name: String,
    text: Text,
}

fn corpus_texts() -> Vec<Named> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for i in 0..RANDOM_TEXTS {
        let sigma = SIGMAS[i % SIGMAS.len()];
        // half the texts stay within reach of the cubic oracles
        let n = if i % 2 == 0 { rng.gen_range(1..=300) } else { rng.gen_range(301..=2000) };
        out.push(Named {
            name: format!("random[{i}] n={n} sigma={sigma}"),
            text: corpus::random_text(&mut rng, n, sigma),
        });
    }
    let mut push = |name: String, bytes: Vec<u8>| {
        out.push(Named {
            name,
            text: Text::new(bytes).unwrap(),
        })
    };
    for n in [1, 2, 13, 89, 300, 1000, 4181, 10_000] {
        push(format!("fibonacci n={n}"), corpus::fibonacci(n));
        push(format!("thue-morse n={n}"), corpus::thue_morse(n));
    }
    for (unit, n) in [(&b"a"[..], 300), (b"a", 10_000), (b"ab", 299), (b"abc", 10_000), (b"abaab", 3000), (b"aab", 250)] {
        push(format!("periodic {:?} n={n}", String::from_utf8_lossy(unit)), corpus::periodic(unit, n));
    }
    for (n, period, noise) in [(300, 7, 3), (5000, 13, 20), (10_000, 50, 5)] {
        push(
            format!("noisy periodic n={n} period={period}"),
            corpus::noisy_periodic(&mut rng, n, period, 4, noise),
        );
    }
    out
}

fn line(k: u32, what: &str, ok: bool, detail: &str) -> bool {
    println!("criterion {k} ({what}): {}  {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

/// Summarizes the named checks and prints the first counterexample of any failure.
fn group(report: &Report, names: &[&str]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &name in names {
        match report.check(name) {
            Some(t) => {
                ok &= t.failed == 0 && t.passed > 0;
                parts.push(format!("{name}={}/{}", t.passed, t.passed + t.failed));
                if let Some(d) = &t.first_failure {
                    println!("    {name} counterexample: {d}");
                }
            }
            None => {
                ok = false;
                parts.push(format!("{name}=never checked"));
            }
        }
    }
    (ok, parts.join(" "))
}

/// Fastest build time per text over interleaved rounds, after one warm-up round,
/// so that a transient slowdown hits all sizes alike.
fn best_build_times(texts: &[Text], rounds: usize) -> (Vec<Duration>, Vec<Index>) {
    let indexes: Vec<Index> = texts.iter().map(|t| Index::build(t).unwrap()).collect();
    let mut best = vec![Duration::MAX; texts.len()];
    for _ in 0..rounds {
        for (b, text) in best.iter_mut().zip(texts) {
            let t0 = Instant::now();
            let idx = Index::build(text).unwrap();
            *b = (*b).min(t0.elapsed());
            drop(idx);
        }
    }
    (best, indexes)
}

fn main() -> ExitCode {
    let texts = corpus_texts();
    let cfg = VerifyConfig::default();
    let t0 = Instant::now();
    let mut report = Report::default();
    let mut fib_ratios = Vec::new();
    for (i, named) in texts.iter().enumerate() {
        let r = verify_text(&named.text, &cfg, 1000 + i as u64);
        if !r.all_passed() {
            println!("  failures on {}", named.name);
        }
        report.merge(r);
        if named.name.starts_with("fibonacci") && named.text.len() >= 13 {
            let stats = IndexStats::collect(&named.text, &Index::build(&named.text).unwrap());
            fib_ratios.push((stats.n, stats.e_tilde, stats.n as f64 / stats.e_tilde as f64));
        }
    }
    let elapsed = t0.elapsed();
    println!(
        "corpus: {} texts, {} find probes per text, verified in {:.1}s",
        texts.len(),
        cfg.find_probes,
        elapsed.as_secs_f64()
    );

    let mut all = true;

    let (ok, detail) = group(&report, &[verify::FIND_VS_NAIVE, verify::COUNT_VS_NAIVE]);
    let in_budget = elapsed < TIME_BUDGET;
    all &= line(
        1,
        "pattern matching vs naive scan",
        ok && in_budget,
        &format!("{detail} time={:.1}s budget={}s", elapsed.as_secs_f64(), TIME_BUDGET.as_secs()),
    );

    let (ok, detail) = group(
        &report,
        &[verify::CDAWG_INVARIANTS, verify::CDAWG_VS_AUTOMATON, verify::EDGES_VS_EXTENSIONS, verify::MEASURES_VS_REPEATS],
    );
    all &= line(2, "CDAWG minimality vs brute-force automaton", ok, &detail);

    let (ok, detail) = group(
        &report,
        &[
            verify::LCDAWG_INVARIANTS,
            verify::NODE_BOUND,
            verify::EDGE_BOUND,
            verify::TYPE2_BOUND,
            verify::ESUF_TYPING,
            verify::JUMP_SPLITS,
        ],
    );
    all &= line(3, "structural bounds, e-suf typing, jump splits", ok, &detail);

    let (ok, detail) = group(&report, &[verify::SLP_EDGE_LABELS, verify::SLP_ROOT, verify::SLP_SIZE]);
    let ratio = report.metric(verify::METRIC_SLP_RATIO).unwrap_or(f64::NAN);
    all &= line(4, "SLP derives labels and text", ok, &format!("{detail} max productions/e_tilde={ratio:.3}"));

    let (ok, detail) = group(&report, &[verify::ROUND_TRIP, verify::LOADED_FIND]);
    let c = report.metric(verify::METRIC_FILE_RATIO).unwrap_or(f64::NAN);
    all &= line(5, "queries after reload without text", ok, &format!("{detail} max file_bytes/(e_tilde*4)={c:.3}"));

    let (ok, detail) = group(&report, &[verify::EXTRACT, verify::FULL_EXTRACT]);
    all &= line(6, "extraction", ok, &detail);

    let (ok, detail) = group(
        &report,
        &[verify::E_TILDE_BOUND, verify::MU_BOUND, verify::Z_BOUND, verify::R_BOUND],
    );
    let trend = fib_ratios.windows(2).all(|w| w[1].1 > w[0].1 && w[1].2 > w[0].2);
    let trend_text: Vec<String> = fib_ratios.iter().map(|(n, e, r)| format!("{n}:{e}:{r:.1}")).collect();
    all &= line(
        7,
        "measure inequalities",
        ok && trend,
        &format!("{detail} fibonacci n:e_tilde:n/e_tilde {}", trend_text.join(" ")),
    );

    // construction cost on Fibonacci prefixes, doubling n
    let sizes = [12_500, 25_000, 50_000, 100_000];
    let family: Vec<Text> = sizes.iter().map(|&n| Text::new(corpus::fibonacci(n)).unwrap()).collect();
    let (best, indexes) = best_build_times(&family, 15);
    let times: Vec<f64> = best.iter().map(Duration::as_secs_f64).collect();
    let heights: Vec<u32> = indexes.iter().map(|idx| idx.slp().height()).collect();
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1] / w[0]).collect();
    let ok = ratios.iter().all(|&r| r <= 2.5);
    let cells: Vec<String> = sizes
        .iter()
        .zip(&times)
        .zip(&heights)
        .map(|((n, t), h)| format!("n={n} t={:.2}ms h={h}", t * 1e3))
        .collect();
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    all &= line(
        8,
        "near-linear build time",
        ok,
        &format!("{} doubling ratios {}", cells.join(", "), ratio_text.join(" ")),
    );
    let max_h = report.metric(verify::METRIC_HEIGHT).unwrap_or(0.0);
    println!("    grammar height over corpus: max {max_h}");

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
