//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.
//!
//! Run with `cargo test -p tasquant --test acceptance`. Thresholds are fixed
//! here and never tuned to the measured values.

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use tasquant::harness::{replay, run_benchmark, BenchConfig, ReportRow, Source};
use tasquant::metrics::{abs_linf, rel_l1, ErrorAccumulator, TraceRow, DEFAULT_CENTER_BAND};
use tasquant::rng::SeededRng;
use tasquant::stream::{stationary_preset, Distribution, Preset, SegmentSpec, StreamSpec};
use tasquant::{
    rank_step_check, EqHistState, Estimator, EstimatorKind, OracleMultiset, P2State, QuantileEstimator,
    QuantileSpec, ReservoirState, TasState,
};

const BURST_SEED: u64 = 42;
const STATIONARY_SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn distinct_stream(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = SeededRng::new(seed);
    (0..len).map(|_| rng.uniform()).collect()
}

// 1. Rank step of the exact quantile is 0 or 1 per datum.
fn rank_step() -> Outcome {
    let started = Instant::now();
    let mut violations = 0;
    let mut checks = 0;
    for stream in 0..100u64 {
        let xs = distinct_stream(5000, 1000 + stream);
        for q in [0.5, 0.9, 0.95, 0.99, 0.999] {
            checks += 1;
            match rank_step_check(xs.iter().copied(), q) {
                Ok(true) => {}
                Ok(false) | Err(_) => violations += 1,
            }
        }
    }
    let elapsed = started.elapsed();
    outcome(
        violations == 0 && elapsed < Duration::from_secs(10),
        format!("{checks} streams, {violations} violations, {:.2} s (limit 10 s)", elapsed.as_secs_f64()),
    )
}

// 2. TAS equals the exact quantile while the stream's uniques fit the buffer.
fn exactness() -> Outcome {
    let m = 1000;
    let mut mismatches = 0u64;
    let mut steps = 0u64;
    for stream in 0..50u64 {
        let mut rng = SeededRng::new(2000 + stream);
        // Alternate distinct values with small alphabets for heavy duplication.
        let alphabet = [0, 2, 5, 30, 1000][stream as usize % 5];
        let xs: Vec<f64> = (0..1000)
            .map(|_| match alphabet {
                0 => rng.uniform() * 100.0,
                k => rng.below(k) as f64 - (k / 2) as f64,
            })
            .collect();
        for q in [0.05, 0.5, 0.95, 0.99] {
            let mut tas = TasState::new(QuantileSpec::new(q, m).unwrap());
            let mut oracle = OracleMultiset::new();
            for &x in &xs {
                tas.observe(x).unwrap();
                oracle.insert(x).unwrap();
                steps += 1;
                if tas.estimate().ok() != oracle.quantile(q).ok() {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(mismatches == 0, format!("{steps} steps, {mismatches} mismatches"))
}

// 3. Structural invariants under randomized mixed-regime input.
fn structural_fuzz() -> Outcome {
    let mut rng = SeededRng::new(3);
    let mut observed = 0u64;
    let mut failure = None;
    let mut run = 0u64;
    while observed < 1_000_000 && failure.is_none() {
        run += 1;
        let m = [3, 4, 5, 12, 37, 100][rng.below(6) as usize];
        let q = [0.01, 0.25, 0.5, 0.9, 0.95, 0.999][rng.below(6) as usize];
        let mut tas = TasState::new(QuantileSpec::new(q, m).unwrap());
        let len = 1000 + rng.below(9000);
        let mut level = 0.0;
        for i in 0..len {
            let x = match (run + i / 500) % 6 {
                0 => rng.uniform(),
                1 => (rng.standard_normal() * 2.0).exp(),
                2 => rng.below(8) as f64,
                3 => {
                    level += rng.uniform();
                    level
                }
                4 => -(i as f64),
                _ => rng.uniform() * if rng.below(50) == 0 { 1e6 } else { 1.0 },
            };
            tas.observe(x).unwrap();
            observed += 1;
            if let Err(e) = tas.validate() {
                failure = Some(format!("run {run} step {i}: {e}"));
                break;
            }
        }
    }
    match failure {
        None => outcome(true, format!("{observed} observations over {run} runs, no violations")),
        Some(f) => outcome(false, f),
    }
}

struct StationaryRun {
    m: usize,
    center_frac: f64,
    spread_first: f64,
    spread_last: f64,
}

fn stationary_runs() -> Vec<StationaryRun> {
    let source = Source::Generated(stationary_preset(100_000, STATIONARY_SEED).unwrap());
    [12, 100]
        .par_iter()
        .map(|&m| {
            let mut rows: Vec<TraceRow> = Vec::new();
            let spec = QuantileSpec::new(0.95, m).unwrap();
            let result = replay(&source, EstimatorKind::Tas, spec, 0, 1, DEFAULT_CENTER_BAND, |r| {
                rows.push(*r);
                Ok(())
            })
            .unwrap();
            let spreads: Vec<f64> = rows
                .iter()
                .filter_map(|r| r.tas.filter(|d| d.buffer_len == m).map(|d| d.spread))
                .collect();
            let tenth = spreads.len() / 10;
            let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
            StationaryRun {
                m,
                center_frac: result.summary.center_within_band_frac.unwrap(),
                spread_first: mean(&spreads[..tenth]),
                spread_last: mean(&spreads[spreads.len() - tenth..]),
            }
        })
        .collect()
}

// 4. The quantile index stays near the buffer centre.
fn centering(runs: &[StationaryRun]) -> Outcome {
    let pass = runs.iter().all(|r| r.center_frac >= 0.9);
    let detail = runs
        .iter()
        .map(|r| format!("m={} in-band {:.4}", r.m, r.center_frac))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, format!("{detail} (need >= 0.9)"))
}

// 5. Buffer spread contracts over the run.
fn spread_contraction(runs: &[StationaryRun]) -> Outcome {
    let pass = runs.iter().all(|r| r.spread_last <= r.spread_first);
    let detail = runs
        .iter()
        .map(|r| format!("m={} first {:.4} last {:.4}", r.m, r.spread_first, r.spread_last))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, detail)
}

fn burst_grid(quantiles: &[f64], capacities: &[usize], estimators: &[EstimatorKind]) -> Vec<ReportRow> {
    let spec = Preset::Burst.spec(Preset::DEFAULT_LEN, BURST_SEED).unwrap();
    let mut config = BenchConfig::new(Source::Generated(spec));
    config.quantiles = quantiles.to_vec();
    config.capacities = capacities.to_vec();
    config.estimators = estimators.to_vec();
    config.seed = BURST_SEED;
    run_benchmark(&config).unwrap()
}

fn rel(rows: &[ReportRow], kind: EstimatorKind, q: f64, m: usize) -> f64 {
    rows.iter()
        .find(|r| r.estimator == kind && r.q == q && r.m == m)
        .and_then(|r| r.result.summary.rel_l1_pct)
        .unwrap()
}

// 6. TAS has the lowest relative error at high quantiles on the burst stream.
fn high_quantile_ordering() -> Outcome {
    let rows = burst_grid(&[0.99, 0.999], &[100], &EstimatorKind::ALL);
    let mut pass = true;
    let mut parts = Vec::new();
    for q in [0.99, 0.999] {
        let tas = rel(&rows, EstimatorKind::Tas, q, 100);
        let mut cell = format!("q={q}: tas {tas:.3}%");
        for kind in [EstimatorKind::Reservoir, EstimatorKind::EqHist, EstimatorKind::P2] {
            let other = rel(&rows, kind, q, 100);
            pass &= tas <= other;
            cell.push_str(&format!(" {kind} {other:.3}%"));
        }
        parts.push(cell);
    }
    outcome(pass, parts.join("; "))
}

// 7. Shrinking the buffer from 500 to 12 costs at most 5x in relative error.
fn graceful_degradation() -> Outcome {
    let rows = burst_grid(&[0.95], &[12, 500], &[EstimatorKind::Tas]);
    let small = rel(&rows, EstimatorKind::Tas, 0.95, 12);
    let large = rel(&rows, EstimatorKind::Tas, 0.95, 500);
    let pass = small <= 5.0 * large && small < 25.0 && large < 25.0;
    outcome(
        pass,
        format!("m=12 {small:.3}%, m=500 {large:.3}%, ratio {:.3} (need <= 5, both < 25%)", small / large),
    )
}

// 8. Baselines are sane on uniform data.
fn baseline_sanity() -> Outcome {
    let spec = StreamSpec::new(vec![SegmentSpec::new(100_000, Distribution::Uniform { lo: 0.0, hi: 1.0 })], 8)
        .unwrap();
    let q = 0.95;
    let qs = QuantileSpec::new(q, 500).unwrap();
    let mut oracle = OracleMultiset::new();
    let mut p2 = P2State::new(q).unwrap();
    let mut reservoir = ReservoirState::new(qs, 8);
    let mut eqhist = EqHistState::new(qs);
    for x in spec.iter() {
        oracle.insert(x).unwrap();
        p2.observe(x).unwrap();
        reservoir.observe(x).unwrap();
        eqhist.observe(x).unwrap();
    }
    let truth = oracle.quantile(q).unwrap();
    let errs = [
        ("p2", (p2.estimate().unwrap() - truth).abs()),
        ("reservoir", (reservoir.estimate().unwrap() - truth).abs()),
        ("eqhist", (eqhist.estimate().unwrap() - truth).abs()),
    ];
    let pass = errs.iter().all(|&(_, e)| e <= 0.05);
    let detail = errs.iter().map(|(k, e)| format!("{k} {e:.5}")).collect::<Vec<_>>().join(", ");
    outcome(pass, format!("{detail} (limit 0.05)"))
}

// 9. Metrics agree with a direct recomputation and respect scaling.
fn metrics_oracle() -> Outcome {
    let mut rng = SeededRng::new(9);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for pair in 0..1000 {
        let len = 1 + rng.below(300) as usize;
        let truths: Vec<f64> = (0..len)
            .map(|_| if rng.below(10) == 0 { 0.0 } else { (rng.uniform() - 0.3) * 100.0 })
            .collect();
        let estimates: Vec<f64> = truths.iter().map(|v| v + rng.standard_normal()).collect();

        let mut sum = 0.0;
        let mut evaluable = 0usize;
        let mut max = 0.0f64;
        for i in 0..len {
            let d = (estimates[i] - truths[i]).abs();
            max = if d > max { d } else { max };
            if truths[i] != 0.0 {
                sum += d / truths[i].abs();
                evaluable += 1;
            }
        }
        match rel_l1(&estimates, &truths) {
            Ok(r) if evaluable > 0 => {
                let want = 100.0 * sum / evaluable as f64;
                let relerr = (r - want).abs() / want.abs().max(f64::MIN_POSITIVE);
                worst = worst.max(relerr);
                if relerr > 1e-12 {
                    failures.push(format!("pair {pair}: rel_l1 {r} vs {want}"));
                }
            }
            Err(_) if evaluable == 0 => {}
            other => failures.push(format!("pair {pair}: rel_l1 {other:?} with {evaluable} evaluable")),
        }
        if abs_linf(&estimates, &truths) != Ok(max) {
            failures.push(format!("pair {pair}: abs_linf"));
        }

        // Power-of-two scaling is exact in binary floating point.
        let c = 2f64.powi(rng.below(21) as i32 - 10);
        let se: Vec<f64> = estimates.iter().map(|x| x * c).collect();
        let st: Vec<f64> = truths.iter().map(|x| x * c).collect();
        if rel_l1(&se, &st).ok() != rel_l1(&estimates, &truths).ok() {
            failures.push(format!("pair {pair}: rel_l1 not scale invariant"));
        }
        if abs_linf(&se, &st).ok() != abs_linf(&estimates, &truths).ok().map(|v| v * c) {
            failures.push(format!("pair {pair}: abs_linf not scale equivariant"));
        }

        // Chunked accumulation combines to the whole.
        let cut = rng.below(len as u64 + 1) as usize;
        let (mut a, mut b, mut whole) = (ErrorAccumulator::default(), ErrorAccumulator::default(), ErrorAccumulator::default());
        for i in 0..len {
            whole.push(estimates[i], truths[i]);
            if i < cut { a.push(estimates[i], truths[i]) } else { b.push(estimates[i], truths[i]) }
        }
        a.merge(&b);
        if a.abs_linf() != whole.abs_linf() || a.evaluable() != whole.evaluable() {
            failures.push(format!("pair {pair}: merge"));
        }
        if let (Some(x), Some(y)) = (a.rel_l1_pct(), whole.rel_l1_pct()) {
            if (x - y).abs() > 1e-12 * y.abs().max(f64::MIN_POSITIVE) {
                failures.push(format!("pair {pair}: merged rel_l1 {x} vs {y}"));
            }
        }
    }
    match failures.first() {
        None => outcome(true, format!("1000 pairs, worst rel_l1 deviation {worst:.2e}")),
        Some(f) => outcome(false, format!("{} failures, first: {f}", failures.len())),
    }
}

// 10. Throughput budgets.
fn performance() -> Outcome {
    let source = Source::Generated(stationary_preset(10_000_000, 10).unwrap());
    let started = Instant::now();
    let spec = QuantileSpec::new(0.95, 500).unwrap();
    let result = replay(&source, EstimatorKind::Tas, spec, 0, 1_000_000, DEFAULT_CENTER_BAND, |_| Ok(())).unwrap();
    let replay_secs = started.elapsed().as_secs_f64();

    let xs = distinct_stream(10_000_000, 11);
    let mut tas = Estimator::new(EstimatorKind::Tas, QuantileSpec::new(0.95, 100).unwrap(), 0);
    let started = Instant::now();
    for &x in &xs {
        tas.observe(x).unwrap();
    }
    std::hint::black_box(tas.estimate().unwrap());
    let rate = xs.len() as f64 / started.elapsed().as_secs_f64();

    outcome(
        result.values_read == 10_000_000 && replay_secs < 60.0 && rate >= 5e6,
        format!(
            "10M replay with oracle {replay_secs:.2} s (limit 60 s), TAS m=100 {:.1}M obs/s (need >= 5M)",
            rate / 1e6
        ),
    )
}

// 11. Identical configs give identical reports and traces.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let traces = dir.path().join(tag);
        fs::create_dir_all(&traces).unwrap();
        let mut config = BenchConfig::new(Source::Generated(Preset::Burst.spec(50_000, 11).unwrap()));
        config.quantiles = vec![0.5, 0.99];
        config.capacities = vec![12, 100];
        config.estimators = EstimatorKind::ALL.to_vec();
        config.trace_every = 100;
        config.seed = 11;
        config.report = Some(dir.path().join(format!("{tag}.csv")));
        config.trace_dir = Some(traces.clone());
        run_benchmark(&config).unwrap();
        let report: Vec<String> = fs::read_to_string(config.report.unwrap())
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect();
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&traces)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        (report, files)
    };
    let (ra, ta) = run("a");
    let (rb, tb) = run("b");
    outcome(
        ra == rb && ta == tb && ta.len() == 16,
        format!("{} report rows, {} trace files compared", ra.len() - 1, ta.len()),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |id, name, o: Outcome| {
        println!("criterion {id:>2} {name:<24} {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };
    record(1, "rank step", rank_step());
    record(2, "tas exactness", exactness());
    record(3, "structural invariants", structural_fuzz());
    let runs = stationary_runs();
    record(4, "centering", centering(&runs));
    record(5, "spread contraction", spread_contraction(&runs));
    record(6, "high-quantile ordering", high_quantile_ordering());
    record(7, "graceful degradation", graceful_degradation());
    record(8, "baseline sanity", baseline_sanity());
    record(9, "metrics oracle", metrics_oracle());
    record(10, "performance", performance());
    record(11, "determinism", determinism());

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of {} criteria fail: {failed:?}", failed.len(), results.len());
        ExitCode::FAILURE
    }
}
