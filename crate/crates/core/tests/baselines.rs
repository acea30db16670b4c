use tasquant::rng::SeededRng;
use tasquant::stream::{Distribution, SegmentSpec, StreamSpec};
use tasquant::{OracleMultiset, P2State, QuantileSpec, ReservoirState};

fn uniform_stream(n: u64, seed: u64) -> Vec<f64> {
    StreamSpec::new(vec![SegmentSpec::new(n, Distribution::Uniform { lo: 0.0, hi: 1.0 })], seed)
        .unwrap()
        .iter()
        .collect()
}

#[test]
fn p2_tracks_uniform_quantiles() {
    let xs = uniform_stream(10_000, 1);
    for q in [0.5, 0.95] {
        let mut p2 = P2State::new(q).unwrap();
        let mut oracle = OracleMultiset::new();
        for &x in &xs {
            p2.observe(x).unwrap();
            oracle.insert(x).unwrap();
        }
        let err = (p2.estimate().unwrap() - oracle.quantile(q).unwrap()).abs();
        assert!(err <= 0.02, "q={q} err={err}");
    }
}

#[test]
fn reservoir_keeps_third_datum_with_probability_one_third() {
    let trials = 100_000;
    let mut seeds = SeededRng::new(2024);
    let mut kept = 0u32;
    for _ in 0..trials {
        let mut r = ReservoirState::with_capacity(0.5, 1, seeds.next_u64()).unwrap();
        for x in [1.0, 2.0, 3.0] {
            r.observe(x).unwrap();
        }
        kept += (r.sample() == [3.0]) as u32;
    }
    let freq = kept as f64 / trials as f64;
    assert!((freq - 1.0 / 3.0).abs() <= 0.01, "{freq}");
}

#[test]
fn reservoir_inclusion_is_uniform_over_positions() {
    // m = 3 over 9 data: every datum survives with probability 1/3.
    let spec = QuantileSpec::new(0.5, 3).unwrap();
    let trials = 100_000u64;
    let mut kept = [0u64; 9];
    let mut seeds = SeededRng::new(7);
    for _ in 0..trials {
        let mut r = ReservoirState::new(spec, seeds.next_u64());
        for x in 1..=9 {
            r.observe(x as f64).unwrap();
        }
        for &v in r.sample() {
            kept[v as usize - 1] += 1;
        }
    }
    for (i, &k) in kept.iter().enumerate() {
        let freq = k as f64 / trials as f64;
        assert!((freq - 1.0 / 3.0).abs() <= 0.01, "datum {} kept {freq}", i + 1);
    }
}
