//! The three walk operators and the per-bit hybrid step.
//!
//! State space: coin ⊗ position, dimension 3n, with coin-major indexing
//! `index = coin * n + vertex` and coin order Left = 0, Right = 1,
//! SelfLoop = 2. The projection embedding selects the self-loop block
//! (rows 2n..3n), which under this layout is exactly the block matrix
//! `[0_{2n x n}; I_n]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hash::QhfParams;
use crate::linalg::{apply, expm_hermitian, path_adjacency, ComplexMat, ComplexVec};
use crate::tol;

/// Which 3x3 coin drives the coined walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinKind {
    /// Grover diffusion coin with a weighted self-loop direction:
    /// `C = 2|s⟩⟨s| - I`, `|s⟩ = (1, 1, √l) / √(2 + l)`.
    LackadaisicalGrover,
    /// Plain 3-dimensional discrete Fourier coin; the laziness weight is
    /// ignored.
    Fourier3,
}

impl CoinKind {
    pub fn name(&self) -> &'static str {
        match self {
            CoinKind::LackadaisicalGrover => "grover",
            CoinKind::Fourier3 => "fourier",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "grover" => Ok(CoinKind::LackadaisicalGrover),
            "fourier" => Ok(CoinKind::Fourier3),
            other => Err(Error::InvalidParameter(format!("unknown coin kind {other:?}"))),
        }
    }
}

/// Endpoint behaviour of the conditional shift on the path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Walking off an endpoint exchanges the coin direction in place:
    /// `|L,0⟩ -> |R,0⟩` and `|R,n-1⟩ -> |L,n-1⟩`.
    Reflect,
    /// Positions wrap around as on a cycle.
    Cycle,
}

impl Boundary {
    pub fn name(&self) -> &'static str {
        match self {
            Boundary::Reflect => "reflect",
            Boundary::Cycle => "cycle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "reflect" => Ok(Boundary::Reflect),
            "cycle" => Ok(Boundary::Cycle),
            other => Err(Error::InvalidParameter(format!("unknown boundary rule {other:?}"))),
        }
    }
}

/// Coin basis directions, in the fixed index order the whole crate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinDirection {
    Left,
    Right,
    SelfLoop,
}

impl CoinDirection {
    pub fn index(&self) -> usize {
        match self {
            CoinDirection::Left => 0,
            CoinDirection::Right => 1,
            CoinDirection::SelfLoop => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoinDirection::Left => "left",
            CoinDirection::Right => "right",
            CoinDirection::SelfLoop => "loop",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "left" | "l" => Ok(CoinDirection::Left),
            "right" | "r" => Ok(CoinDirection::Right),
            "loop" | "selfloop" => Ok(CoinDirection::SelfLoop),
            other => Err(Error::InvalidParameter(format!("unknown coin direction {other:?}"))),
        }
    }
}

/// Build the 3x3 coin. For the lackadaisical Grover coin `l` is the
/// self-loop weight (>= 0); the Fourier coin ignores it.
pub fn build_coin(kind: CoinKind, l: f64) -> Result<ComplexMat> {
    match kind {
        CoinKind::LackadaisicalGrover => {
            if l < 0.0 || !l.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "laziness weight must be finite and >= 0, got {l}"
                )));
            }
            let norm = (2.0 + l).sqrt();
            let s = [1.0 / norm, 1.0 / norm, l.sqrt() / norm];
            let mut coin = ComplexMat::zeros(3, 3)?;
            for r in 0..3 {
                for c in 0..3 {
                    let mut v = 2.0 * s[r] * s[c];
                    if r == c {
                        v -= 1.0;
                    }
                    coin[(r, c)] = Complex64::new(v, 0.0);
                }
            }
            Ok(coin)
        }
        CoinKind::Fourier3 => {
            let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
            let scale = 1.0 / 3.0_f64.sqrt();
            let mut coin = ComplexMat::zeros(3, 3)?;
            for r in 0..3 {
                for c in 0..3 {
                    coin[(r, c)] = omega.powu((r * c) as u32) * scale;
                }
            }
            Ok(coin)
        }
    }
}

/// Conditional shift on the coin ⊗ position space: Left moves down,
/// Right moves up, SelfLoop stays put, with the endpoint rule chosen by
/// `boundary`. Always a permutation matrix.
pub fn build_shift(n: usize, boundary: Boundary) -> Result<ComplexMat> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "shift needs at least 2 vertices, got {n}"
        )));
    }
    let idx = |coin: usize, v: usize| coin * n + v;
    let mut s = ComplexMat::zeros(3 * n, 3 * n)?;
    for v in 0..n {
        let (left_to, right_to) = match boundary {
            Boundary::Reflect => {
                let left_to = if v > 0 { idx(0, v - 1) } else { idx(1, 0) };
                let right_to = if v < n - 1 { idx(1, v + 1) } else { idx(0, n - 1) };
                (left_to, right_to)
            }
            Boundary::Cycle => (idx(0, (v + n - 1) % n), idx(1, (v + 1) % n)),
        };
        s[(left_to, idx(0, v))] = Complex64::ONE;
        s[(right_to, idx(1, v))] = Complex64::ONE;
        s[(idx(2, v), idx(2, v))] = Complex64::ONE;
    }
    Ok(s)
}

/// The coined-walk step `S · (coin ⊗ I_n)`.
pub fn build_lqw(coin: &ComplexMat, n: usize, boundary: Boundary) -> Result<ComplexMat> {
    if coin.rows() != 3 || coin.cols() != 3 {
        return Err(Error::InvalidDimension(format!(
            "coin must be 3x3, got {}x{}",
            coin.rows(),
            coin.cols()
        )));
    }
    let coin_err = coin.unitarity_error();
    if coin_err > tol::COIN_UNITARITY {
        return Err(Error::ContractViolation(format!(
            "coin is not unitary: |C\u{2020}C - I| reaches {coin_err:.3e}"
        )));
    }
    let shift = build_shift(n, boundary)?;
    let eye = ComplexMat::identity(n)?;
    shift.matmul(&coin.kron(&eye))
}

/// The 3n x n embedding that selects the self-loop coin block: a 0/1
/// column-selection matrix with `P†P = I_n` exactly.
pub fn build_p_embed(n: usize) -> Result<ComplexMat> {
    if n == 0 {
        return Err(Error::InvalidDimension("embedding needs at least one vertex".into()));
    }
    let mut p = ComplexMat::zeros(3 * n, n)?;
    for v in 0..n {
        p[(2 * n + v, v)] = Complex64::ONE;
    }
    Ok(p)
}

/// The operators a fixed parameter set needs, built once and shared
/// immutably across hash evaluations.
#[derive(Debug, Clone)]
pub struct WalkOperators {
    u_ctqw: ComplexMat,
    u_lqw: ComplexMat,
    p_embed: ComplexMat,
    n: usize,
    l: f64,
    t: f64,
}

impl WalkOperators {
    pub fn build(params: &QhfParams) -> Result<Self> {
        params.validate()?;
        let adjacency = path_adjacency(params.n)?;
        let u_ctqw = expm_hermitian(&adjacency, params.t)?;
        let coin = build_coin(params.coin, params.l)?;
        let u_lqw = build_lqw(&coin, params.n, params.boundary)?;
        let p_embed = build_p_embed(params.n)?;
        for (name, op) in [("continuous walk", &u_ctqw), ("coined walk", &u_lqw)] {
            let err = op.unitarity_error();
            if err > tol::UNITARITY {
                return Err(Error::ContractViolation(format!(
                    "{name} operator is not unitary: |U\u{2020}U - I| reaches {err:.3e}"
                )));
            }
        }
        Ok(Self {
            u_ctqw,
            u_lqw,
            p_embed,
            n: params.n,
            l: params.l,
            t: params.t,
        })
    }

    pub fn u_ctqw(&self) -> &ComplexMat {
        &self.u_ctqw
    }

    pub fn u_lqw(&self) -> &ComplexMat {
        &self.u_lqw
    }

    pub fn p_embed(&self) -> &ComplexMat {
        &self.p_embed
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn laziness(&self) -> f64 {
        self.l
    }

    pub fn evolution_time(&self) -> f64 {
        self.t
    }
}

/// One step of the hybrid evolution.
///
/// `bit = 1` applies the coined walk (norm preserving). `bit = 0` extracts
/// the self-loop block, evolves it with the continuous-time unitary, and
/// re-embeds — annihilating the Left/Right components, so the step is not
/// norm preserving in general. With `renormalize` set the result is
/// rescaled to unit norm; a (numerically) zero projection is then a
/// degenerate-state error.
pub fn hybrid_step(
    state: &ComplexVec,
    bit: u8,
    ops: &WalkOperators,
    renormalize: bool,
) -> Result<ComplexVec> {
    if bit > 1 {
        return Err(Error::InvalidInput(format!("message bit must be 0 or 1, got {bit}")));
    }
    let n = ops.n;
    if state.dim() != 3 * n {
        return Err(Error::InvalidDimension(format!(
            "state dimension {} does not match operator space {}",
            state.dim(),
            3 * n
        )));
    }
    if bit == 1 {
        return apply(&ops.u_lqw, state);
    }
    // Extract / evolve / re-embed, equivalent to P · U_ctqw · P† · state
    // under the self-loop block layout.
    let loop_block = ComplexVec::from_entries(state.entries()[2 * n..3 * n].to_vec())?;
    let evolved = apply(&ops.u_ctqw, &loop_block)?;
    let mut out = ComplexVec::zeros(3 * n)?;
    for v in 0..n {
        out[2 * n + v] = evolved[v];
    }
    if renormalize {
        let ns = out.norm_sqr();
        if ns <= tol::DEGENERATE_NORM_SQ {
            return Err(Error::DegenerateState(
                "projected self-loop component is the zero vector".into(),
            ));
        }
        out = out.scaled(Complex64::new(1.0 / ns.sqrt(), 0.0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(m: &ComplexMat, want: &ComplexMat, tol: f64) {
        assert!(m.max_abs_diff(want).unwrap() < tol, "\ngot\n{m}\nwant\n{want}");
    }

    #[test]
    fn grover_coin_without_laziness_decouples_the_loop() {
        let coin = build_coin(CoinKind::LackadaisicalGrover, 0.0).unwrap();
        let want = ComplexMat::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        assert_close(&coin, &want, 1e-15);
    }

    #[test]
    fn grover_coin_unit_laziness_closed_form() {
        let coin = build_coin(CoinKind::LackadaisicalGrover, 1.0).unwrap();
        let third = 1.0 / 3.0;
        let want = ComplexMat::from_rows(&[
            vec![c(-third, 0.0), c(2.0 * third, 0.0), c(2.0 * third, 0.0)],
            vec![c(2.0 * third, 0.0), c(-third, 0.0), c(2.0 * third, 0.0)],
            vec![c(2.0 * third, 0.0), c(2.0 * third, 0.0), c(-third, 0.0)],
        ])
        .unwrap();
        assert_close(&coin, &want, 1e-15);
    }

    #[test]
    fn coin_rejects_negative_laziness() {
        assert!(matches!(
            build_coin(CoinKind::LackadaisicalGrover, -0.5),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn coins_are_unitary() {
        for l in [0.0, 0.5, 1.0, 4.0] {
            let coin = build_coin(CoinKind::LackadaisicalGrover, l).unwrap();
            assert!(coin.unitarity_error() < tol::COIN_UNITARITY, "grover l={l}");
        }
        let fourier = build_coin(CoinKind::Fourier3, 0.0).unwrap();
        assert!(fourier.unitarity_error() < tol::COIN_UNITARITY);
    }

    #[test]
    fn fourier_coin_entries() {
        let coin = build_coin(CoinKind::Fourier3, 0.0).unwrap();
        let s = 1.0 / 3.0_f64.sqrt();
        assert!((coin[(0, 0)] - c(s, 0.0)).norm() < 1e-15);
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((coin[(1, 2)] - omega.powu(2) * s).norm() < 1e-15);
        assert!((coin[(2, 2)] - omega.powu(4) * s).norm() < 1e-15);
    }

    #[test]
    fn shift_moves_and_reflects() {
        let n = 5;
        let s = build_shift(n, Boundary::Reflect).unwrap();
        let idx = |coin: usize, v: usize| coin * n + v;
        // |L,3> -> |L,2>
        assert_eq!(s[(idx(0, 2), idx(0, 3))], Complex64::ONE);
        // |L,0> -> |R,0>
        assert_eq!(s[(idx(1, 0), idx(0, 0))], Complex64::ONE);
        // |R,4> -> |L,4>
        assert_eq!(s[(idx(0, 4), idx(1, 4))], Complex64::ONE);
        // |loop,2> fixed
        assert_eq!(s[(idx(2, 2), idx(2, 2))], Complex64::ONE);
    }

    #[test]
    fn cycle_shift_wraps() {
        let n = 4;
        let s = build_shift(n, Boundary::Cycle).unwrap();
        let idx = |coin: usize, v: usize| coin * n + v;
        assert_eq!(s[(idx(0, 3), idx(0, 0))], Complex64::ONE);
        assert_eq!(s[(idx(1, 0), idx(1, 3))], Complex64::ONE);
    }

    #[test]
    fn shift_is_a_permutation() {
        for boundary in [Boundary::Reflect, Boundary::Cycle] {
            let n = 6;
            let s = build_shift(n, boundary).unwrap();
            for r in 0..3 * n {
                let row_ones = (0..3 * n)
                    .filter(|&c| s[(r, c)] == Complex64::ONE)
                    .count();
                let row_zeros = (0..3 * n)
                    .filter(|&c| s[(r, c)] == Complex64::ZERO)
                    .count();
                assert_eq!(row_ones, 1);
                assert_eq!(row_zeros, 3 * n - 1);
                let col_ones = (0..3 * n)
                    .filter(|&c2| s[(c2, r)] == Complex64::ONE)
                    .count();
                assert_eq!(col_ones, 1);
            }
            assert_eq!(s.unitarity_error(), 0.0);
        }
    }

    #[test]
    fn shift_rejects_single_vertex() {
        assert!(matches!(
            build_shift(1, Boundary::Reflect),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn lqw_with_identity_coin_is_the_shift() {
        let n = 4;
        let id = ComplexMat::identity(3).unwrap();
        let lqw = build_lqw(&id, n, Boundary::Reflect).unwrap();
        let shift = build_shift(n, Boundary::Reflect).unwrap();
        assert_eq!(lqw.max_abs_diff(&shift).unwrap(), 0.0);
        // |L,1> -> |L,0> under the composed operator, n=2 case
        let lqw2 = build_lqw(&id, 2, Boundary::Reflect).unwrap();
        let state = ComplexVec::basis(6, 1).unwrap(); // |L,1>
        let out = apply(&lqw2, &state).unwrap();
        assert_eq!(out[0], Complex64::ONE); // |L,0>
    }

    #[test]
    fn lqw_rejects_non_unitary_coin() {
        let mut bad = ComplexMat::identity(3).unwrap();
        bad[(0, 0)] = c(2.0, 0.0);
        assert!(matches!(
            build_lqw(&bad, 4, Boundary::Reflect),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn lqw_is_unitary_across_configurations() {
        for n in [2, 5, 8] {
            for l in [0.0, 0.5, 1.0, 4.0] {
                for boundary in [Boundary::Reflect, Boundary::Cycle] {
                    let coin = build_coin(CoinKind::LackadaisicalGrover, l).unwrap();
                    let lqw = build_lqw(&coin, n, boundary).unwrap();
                    assert!(
                        lqw.unitarity_error() < tol::UNITARITY,
                        "n={n} l={l} {boundary:?}"
                    );
                }
            }
            let fourier = build_coin(CoinKind::Fourier3, 0.0).unwrap();
            let lqw = build_lqw(&fourier, n, Boundary::Reflect).unwrap();
            assert!(lqw.unitarity_error() < tol::UNITARITY);
        }
    }

    #[test]
    fn p_embed_selects_the_loop_block() {
        let n = 4;
        let p = build_p_embed(n).unwrap();
        // P†P = I exactly
        let gram = p.adjoint().matmul(&p).unwrap();
        assert_eq!(gram.max_abs_diff(&ComplexMat::identity(n).unwrap()).unwrap(), 0.0);
        // P P† is an orthogonal projector
        let proj = p.matmul(&p.adjoint()).unwrap();
        assert_eq!(proj.matmul(&proj).unwrap().max_abs_diff(&proj).unwrap(), 0.0);
        assert_eq!(proj.hermiticity_error(), 0.0);
        // extraction behaviour on basis states
        let loop_state = ComplexVec::basis(3 * n, 2 * n + 1).unwrap();
        let extracted = apply(&p.adjoint(), &loop_state).unwrap();
        assert_eq!(extracted[1], Complex64::ONE);
        let left_state = ComplexVec::basis(3 * n, 1).unwrap();
        let annihilated = apply(&p.adjoint(), &left_state).unwrap();
        assert_eq!(annihilated.norm_sqr(), 0.0);
    }

    fn test_params(n: usize, t: f64, l: f64) -> QhfParams {
        QhfParams {
            n,
            t,
            l,
            initial_vertex: n / 2,
            ..QhfParams::default()
        }
    }

    #[test]
    fn hybrid_step_coined_branch_preserves_norm() {
        let ops = WalkOperators::build(&test_params(5, 1.0, 1.0)).unwrap();
        let mut entries = vec![Complex64::ZERO; 15];
        for (i, e) in entries.iter_mut().enumerate() {
            *e = c(0.1 * i as f64, -0.05 * i as f64);
        }
        let state = ComplexVec::from_entries(entries).unwrap().normalized().unwrap();
        let out = hybrid_step(&state, 1, &ops, true).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < tol::NORM_PRESERVATION);
    }

    #[test]
    fn hybrid_step_loop_state_is_fixed_under_identity_coin() {
        // With the identity coin the self-loop direction is untouched by
        // both the coin and the shift.
        let n = 4;
        let id = ComplexMat::identity(3).unwrap();
        let lqw = build_lqw(&id, n, Boundary::Reflect).unwrap();
        let state = ComplexVec::basis(3 * n, 2 * n + 2).unwrap();
        let out = apply(&lqw, &state).unwrap();
        assert_eq!(out.entries(), state.entries());
    }

    #[test]
    fn hybrid_step_projection_annihilates_moving_components() {
        let ops = WalkOperators::build(&test_params(4, 1.0, 1.0)).unwrap();
        let state = ComplexVec::basis(12, 1).unwrap(); // |L,1>, no loop part
        let out = hybrid_step(&state, 0, &ops, false).unwrap();
        assert_eq!(out.norm_sqr(), 0.0);
        // with renormalization requested this is a degenerate state
        assert!(matches!(
            hybrid_step(&state, 0, &ops, true),
            Err(Error::DegenerateState(_))
        ));
    }

    #[test]
    fn hybrid_step_continuous_branch_on_p2_closed_form() {
        // On two vertices the continuous step acts as exp(-iXt) inside the
        // loop block: |loop,0> -> cos t |loop,0> - i sin t |loop,1>.
        let t = 0.9;
        let ops = WalkOperators::build(&test_params(2, t, 1.0)).unwrap();
        let state = ComplexVec::basis(6, 4).unwrap(); // |loop,0>
        let out = hybrid_step(&state, 0, &ops, true).unwrap();
        assert!((out[4] - c(t.cos(), 0.0)).norm() < 1e-12);
        assert!((out[5] - c(0.0, -t.sin())).norm() < 1e-12);
        assert!((out.norm_sqr() - 1.0).abs() < tol::NORM_PRESERVATION);
    }

    #[test]
    fn hybrid_step_never_increases_norm_before_renormalization() {
        let ops = WalkOperators::build(&test_params(5, 1.3, 1.0)).unwrap();
        let mut state = ComplexVec::basis(15, 12).unwrap();
        for bit in [1, 0, 1, 1, 0, 0, 1, 0] {
            let before = state.norm_sqr();
            state = hybrid_step(&state, bit, &ops, false).unwrap();
            assert!(state.norm_sqr() <= before + tol::NORM_PRESERVATION);
        }
    }

    #[test]
    fn hybrid_step_rejects_bad_bits_and_dimensions() {
        let ops = WalkOperators::build(&test_params(4, 1.0, 1.0)).unwrap();
        let state = ComplexVec::basis(12, 0).unwrap();
        assert!(matches!(
            hybrid_step(&state, 2, &ops, true),
            Err(Error::InvalidInput(_))
        ));
        let short = ComplexVec::basis(9, 0).unwrap();
        assert!(matches!(
            hybrid_step(&short, 1, &ops, true),
            Err(Error::InvalidDimension(_))
        ));
    }
}
