//! Built-in invariant checks, runnable in the field via `qwhash selftest`.
//! The matrix-exponential check uses a local Taylor-series oracle that is
//! independent of the spectral implementation it verifies.

use num_complex::Complex64;

use qwhash::analysis::{analyze_battery, TrialPlan};
use qwhash::{
    build_coin, build_lqw, build_p_embed, build_shift, eig_hermitian, encode_segment,
    expm_hermitian, hybrid_step, path_adjacency, Boundary, CoinKind, ComplexMat, Message, Qhf,
    QhfParams, WalkOperators,
};

struct Check {
    name: &'static str,
    run: fn() -> Result<(), String>,
}

/// Partial Taylor sum of `exp(-i M t)`.
fn taylor_expm(m: &ComplexMat, t: f64, terms: usize) -> ComplexMat {
    let a = m.scaled(Complex64::new(0.0, -t));
    let mut sum = ComplexMat::identity(m.rows()).unwrap();
    let mut term = ComplexMat::identity(m.rows()).unwrap();
    for k in 1..=terms {
        term = term.matmul(&a).unwrap().scaled(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term).unwrap();
    }
    sum
}

fn ensure(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn check_operator_unitarity() -> Result<(), String> {
    for n in [2usize, 8, 15] {
        for t in [0.3, 1.0, 4.0] {
            let u = expm_hermitian(&path_adjacency(n).unwrap(), t)
                .map_err(|e| e.to_string())?;
            let err = u.unitarity_error();
            ensure(err < 1e-10, format!("u_ctqw n={n} t={t}: unitarity error {err:.3e}"))?;
        }
        for boundary in [Boundary::Reflect, Boundary::Cycle] {
            let shift = build_shift(n, boundary).map_err(|e| e.to_string())?;
            ensure(shift.unitarity_error() == 0.0, format!("shift n={n} {boundary:?}"))?;
            for (kind, l) in [
                (CoinKind::LackadaisicalGrover, 0.0),
                (CoinKind::LackadaisicalGrover, 4.0),
                (CoinKind::Fourier3, 0.0),
            ] {
                let coin = build_coin(kind, l).map_err(|e| e.to_string())?;
                let lqw = build_lqw(&coin, n, boundary).map_err(|e| e.to_string())?;
                let err = lqw.unitarity_error();
                ensure(
                    err < 1e-10,
                    format!("u_lqw n={n} {boundary:?} {kind:?} l={l}: error {err:.3e}"),
                )?;
            }
        }
    }
    Ok(())
}

fn check_expm_against_taylor_oracle() -> Result<(), String> {
    for n in 2..=6usize {
        let a = path_adjacency(n).unwrap();
        for t in [0.3, 1.0, 2.7] {
            let spectral = expm_hermitian(&a, t).map_err(|e| e.to_string())?;
            let oracle = taylor_expm(&a, t, 40);
            let err = spectral.max_abs_diff(&oracle).unwrap();
            ensure(err < 1e-8, format!("expm n={n} t={t}: oracle gap {err:.3e}"))?;
        }
    }
    Ok(())
}

fn check_eigendecomposition() -> Result<(), String> {
    let a = path_adjacency(15).unwrap();
    let d = eig_hermitian(&a).map_err(|e| e.to_string())?;
    let rec = d.reconstruct().max_abs_diff(&a).unwrap();
    ensure(rec < 1e-10, format!("reconstruction error {rec:.3e}"))?;
    let ortho = d.orthonormality_error();
    ensure(ortho < 1e-10, format!("orthonormality error {ortho:.3e}"))
}

fn check_projection_embedding() -> Result<(), String> {
    let p = build_p_embed(15).map_err(|e| e.to_string())?;
    let gram = p.adjoint().matmul(&p).unwrap();
    let err = gram.max_abs_diff(&ComplexMat::identity(15).unwrap()).unwrap();
    ensure(err == 0.0, format!("P\u{2020}P deviates from identity by {err:.3e}"))
}

fn check_segment_encoding() -> Result<(), String> {
    let zero = encode_segment(0.0, 11, 20_000).map_err(|e| e.to_string())?;
    ensure(zero.to_string() == "00000000000", format!("p=0 encoded as {zero}"))?;
    let one = encode_segment(1.0, 11, 20_000).map_err(|e| e.to_string())?;
    ensure(one.to_string() == "11111111111", format!("p=1 encoded as {one}"))?;
    let twentieth = encode_segment(0.05, 11, 20_000).map_err(|e| e.to_string())?;
    ensure(
        twentieth.to_string() == "01111101000",
        format!("p=0.05 encoded as {twentieth}, want 1000"),
    )?;
    let mut last = 0u64;
    for i in 0..=400 {
        let p = i as f64 / 400.0;
        let seg = encode_segment(p, 11, 20_000).map_err(|e| e.to_string())?;
        let v = seg.bits().iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        ensure(v >= last, format!("encoding not monotone at p={p}"))?;
        last = v;
    }
    Ok(())
}

fn check_hash_determinism_and_shape() -> Result<(), String> {
    let params = QhfParams::default();
    let engine = Qhf::new(params.clone()).map_err(|e| e.to_string())?;
    for text in ["1", "1011001", "0000000000000000", "1111001010110100101101001011"] {
        let msg = Message::parse(text).unwrap();
        let h1 = engine.hash(&msg).map_err(|e| e.to_string())?;
        let h2 = engine.hash(&msg).map_err(|e| e.to_string())?;
        ensure(h1 == h2, format!("rehash of {text} differs"))?;
        ensure(h1.len() == 165, format!("hash of {text} has {} bits", h1.len()))?;
        ensure(h1.hex().len() == 42, "hex length".into())?;
        ensure(h1.ascii_bytes().len() == 21, "byte length".into())?;
    }
    Ok(())
}

fn check_battery_thread_independence() -> Result<(), String> {
    let params = QhfParams::default();
    let base = TrialPlan { trials: 200, msg_len: 24, seed: 3, threads: 1 };
    let seq = analyze_battery(&base, &params).map_err(|e| e.to_string())?;
    let par = analyze_battery(&TrialPlan { threads: 2, ..base }, &params)
        .map_err(|e| e.to_string())?;
    ensure(seq.0 == par.0 && seq.1 == par.1 && seq.2 == par.2, "reports differ across thread counts".into())
}

fn check_norm_bookkeeping() -> Result<(), String> {
    let params = QhfParams::default();
    let ops = WalkOperators::build(&params).map_err(|e| e.to_string())?;
    let engine = Qhf::new(params).map_err(|e| e.to_string())?;
    let msg = Message::parse("110100111000101101001101010011100101").unwrap();
    let mut raw = engine.initial_state();
    let mut normed = engine.initial_state();
    for &bit in msg.bits() {
        let before = raw.norm_sqr();
        raw = hybrid_step(&raw, bit, &ops, false).map_err(|e| e.to_string())?;
        ensure(raw.norm_sqr() <= before + 1e-12, "raw norm increased".into())?;
        normed = hybrid_step(&normed, bit, &ops, true).map_err(|e| e.to_string())?;
        ensure(
            (normed.norm_sqr() - 1.0).abs() <= 1e-12,
            format!("renormalized norm drifted to {}", normed.norm_sqr()),
        )?;
    }
    Ok(())
}

const CHECKS: &[Check] = &[
    Check { name: "operator unitarity", run: check_operator_unitarity },
    Check { name: "matrix exponential vs Taylor oracle", run: check_expm_against_taylor_oracle },
    Check { name: "eigendecomposition round trip", run: check_eigendecomposition },
    Check { name: "projection embedding identities", run: check_projection_embedding },
    Check { name: "segment encoding", run: check_segment_encoding },
    Check { name: "hash determinism and shape", run: check_hash_determinism_and_shape },
    Check { name: "battery thread independence", run: check_battery_thread_independence },
    Check { name: "norm bookkeeping", run: check_norm_bookkeeping },
];

/// Run every check, printing one line each; returns the failure count.
pub fn run() -> usize {
    let mut failures = 0;
    for check in CHECKS {
        match (check.run)() {
            Ok(()) => println!("[ok]   {}", check.name),
            Err(msg) => {
                failures += 1;
                println!("[FAIL] {}: {msg}", check.name);
            }
        }
    }
    if failures == 0 {
        println!("selftest passed ({} checks)", CHECKS.len());
    } else {
        println!("selftest failed ({failures} of {} checks)", CHECKS.len());
    }
    failures
}
