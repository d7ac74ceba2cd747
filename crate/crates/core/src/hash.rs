//! The end-to-end hash: message bits drive an alternation of the
//! continuous-time and coined walks, the final state is measured in the
//! position basis, and each position probability is scaled into a k-bit
//! segment. The output is the concatenation of the n segments.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::linalg::ComplexVec;
use crate::tol;
use crate::walk::{hybrid_step, Boundary, CoinDirection, CoinKind, WalkOperators};

/// Decimal digits the scaled probability is rounded to before flooring;
/// keeps encodings stable when a probability lands a hair below an
/// integer multiple of 1/scale.
const ENCODE_ROUND_DECIMALS: u32 = 12;

const POW10_12: u128 = 1_000_000_000_000;

/// All tunable constants of the hash.
#[derive(Debug, Clone, PartialEq)]
pub struct QhfParams {
    /// Path-graph vertex count.
    pub n: usize,
    /// Bits per output segment; total output is `n * k` bits.
    pub k: usize,
    /// Continuous-walk evolution time (> 0).
    pub t: f64,
    /// Self-loop (laziness) weight of the Grover coin (>= 0).
    pub l: f64,
    pub coin: CoinKind,
    pub boundary: Boundary,
    /// Start vertex, in `[0, n)`.
    pub initial_vertex: usize,
    pub initial_coin: CoinDirection,
    /// Probability scale factor applied before flooring to a segment value.
    pub scale: u64,
    /// Rescale to unit norm after each continuous (projecting) step.
    pub renormalize: bool,
}

impl Default for QhfParams {
    fn default() -> Self {
        Self {
            n: 15,
            k: 11,
            t: 4.0,
            l: 4.0,
            coin: CoinKind::LackadaisicalGrover,
            boundary: Boundary::Reflect,
            initial_vertex: 7,
            initial_coin: CoinDirection::SelfLoop,
            scale: 20_000,
            renormalize: true,
        }
    }
}

impl QhfParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "vertex count must be at least 2, got {}",
                self.n
            )));
        }
        if self.k == 0 || self.k > 64 {
            return Err(Error::InvalidParameter(format!(
                "segment bitlength must be in 1..=64, got {}",
                self.k
            )));
        }
        if self.t <= 0.0 || !self.t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "evolution time must be positive and finite, got {}",
                self.t
            )));
        }
        if self.l < 0.0 || !self.l.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "laziness weight must be finite and >= 0, got {}",
                self.l
            )));
        }
        if self.initial_vertex >= self.n {
            return Err(Error::InvalidParameter(format!(
                "initial vertex {} out of range for {} vertices",
                self.initial_vertex, self.n
            )));
        }
        if self.scale == 0 {
            return Err(Error::InvalidParameter("scale must be positive".into()));
        }
        Ok(())
    }

    /// Total output length in bits.
    pub fn output_bits(&self) -> usize {
        self.n * self.k
    }

    /// Canonical parameter fingerprint: semicolon-separated `key=value`
    /// pairs in fixed order, locale-independent formatting. Every report
    /// embeds this string; numbers are comparable only at equal
    /// fingerprints.
    pub fn fingerprint(&self) -> String {
        format!(
            "n={};k={};t={};l={};coin={};boundary={};iv={};ic={};scale={};renorm={}",
            self.n,
            self.k,
            self.t,
            self.l,
            self.coin.name(),
            self.boundary.name(),
            self.initial_vertex,
            self.initial_coin.name(),
            self.scale,
            u8::from(self.renormalize),
        )
    }
}

/// A binary input message; never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    bits: BitString,
}

impl Message {
    pub fn from_bitstring(bits: BitString) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidInput("message must contain at least one bit".into()));
        }
        Ok(Self { bits })
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        Self::from_bitstring(BitString::from_bits(bits)?)
    }

    /// Parse '0'/'1' text (whitespace ignored).
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_bitstring(BitString::parse(text)?)
    }

    /// Expand bytes most-significant-bit first.
    pub fn from_bytes_msb(bytes: &[u8]) -> Result<Self> {
        Self::from_bitstring(BitString::from_bytes_msb(bytes))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty messages
    }

    pub fn bits(&self) -> &[u8] {
        self.bits.bits()
    }

    pub fn bitstring(&self) -> &BitString {
        &self.bits
    }

    pub fn with_bit_inserted(&self, position: usize, bit: u8) -> Result<Message> {
        if position > self.len() {
            return Err(Error::InvalidInput(format!(
                "insert position {position} beyond message length {}",
                self.len()
            )));
        }
        if bit > 1 {
            return Err(Error::InvalidInput(format!("bit must be 0 or 1, got {bit}")));
        }
        let mut bits = self.bits().to_vec();
        bits.insert(position, bit);
        Message::from_bits(bits)
    }

    pub fn with_bit_flipped(&self, position: usize) -> Result<Message> {
        if position >= self.len() {
            return Err(Error::InvalidInput(format!(
                "flip position {position} beyond message length {}",
                self.len()
            )));
        }
        let mut bits = self.bits().to_vec();
        bits[position] ^= 1;
        Message::from_bits(bits)
    }

    pub fn with_bit_deleted(&self, position: usize) -> Result<Message> {
        if position >= self.len() {
            return Err(Error::InvalidInput(format!(
                "delete position {position} beyond message length {}",
                self.len()
            )));
        }
        if self.len() == 1 {
            return Err(Error::InvalidInput("cannot delete the only bit of a message".into()));
        }
        let mut bits = self.bits().to_vec();
        bits.remove(position);
        Message::from_bits(bits)
    }
}

impl std::fmt::Display for Message {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.bits.fmt(f)
    }
}

/// The hash output: exactly `n * k` bits with hex and byte renderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashValue {
    bits: BitString,
}

impl HashValue {
    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Uppercase hex rendering, `ceil(len/4)` characters.
    pub fn hex(&self) -> String {
        self.bits.hex()
    }

    /// Hex in 4-character display groups.
    pub fn hex_grouped(&self) -> Vec<String> {
        self.bits.hex_grouped()
    }

    /// Byte rendering, `ceil(len/8)` bytes.
    pub fn ascii_bytes(&self) -> Vec<u8> {
        self.bits.ascii_bytes()
    }

    pub fn hamming(&self, other: &HashValue) -> Result<usize> {
        self.bits.hamming(&other.bits)
    }
}

impl std::fmt::Display for HashValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.bits.fmt(f)
    }
}

/// Position-basis measurement probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    probs: Vec<f64>,
}

impl PositionDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for &p in &probs {
            if !(-tol::PROB_RANGE_SLACK..=1.0 + tol::PROB_RANGE_SLACK).contains(&p) {
                return Err(Error::ContractViolation(format!(
                    "probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            probs: probs.into_iter().map(|p| p.clamp(0.0, 1.0)).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Unit basis state at `(initial_coin, initial_vertex)` under the
/// coin-major layout.
pub fn initial_state(params: &QhfParams) -> Result<ComplexVec> {
    params.validate()?;
    ComplexVec::basis(3 * params.n, params.initial_coin.index() * params.n + params.initial_vertex)
}

/// Run the full evolution for `message`, building the operators from
/// scratch. For hashing many messages at fixed parameters use [`Qhf`],
/// which caches the operators.
pub fn evolve(message: &Message, params: &QhfParams) -> Result<ComplexVec> {
    Qhf::new(params.clone())?.evolve(message)
}

/// Position-basis probabilities `P(v) = Σ_c |⟨c,v|ψ⟩|²`, divided by the
/// total squared norm when `renormalize` is set.
pub fn measure_positions(state: &ComplexVec, renormalize: bool) -> Result<PositionDistribution> {
    if !state.dim().is_multiple_of(3) {
        return Err(Error::InvalidDimension(format!(
            "state dimension {} is not a multiple of the coin dimension 3",
            state.dim()
        )));
    }
    let n = state.dim() / 3;
    let mut sums = vec![0.0f64; n];
    for coin in 0..3 {
        for (v, sum) in sums.iter_mut().enumerate() {
            *sum += state[coin * n + v].norm_sqr();
        }
    }
    if renormalize {
        let total: f64 = sums.iter().sum();
        if total <= tol::DEGENERATE_NORM_SQ {
            return Err(Error::DegenerateState(
                "cannot normalize the position distribution of a zero state".into(),
            ));
        }
        for sum in &mut sums {
            *sum /= total;
        }
    }
    PositionDistribution::new(sums)
}

/// Scale a probability and floor it into a `k`-bit big-endian segment:
/// `min(floor(p * scale), 2^k - 1)`.
///
/// The floor is taken after rounding `p` to 12 decimal digits (computed in
/// exact integer arithmetic from the float's bits), so a probability that
/// is an integer multiple of `1/scale` up to binary representation error
/// lands on the intended segment value on every platform.
pub fn encode_segment(p: f64, k: usize, scale: u64) -> Result<BitString> {
    if k == 0 || k > 64 {
        return Err(Error::InvalidParameter(format!(
            "segment bitlength must be in 1..=64, got {k}"
        )));
    }
    if scale == 0 {
        return Err(Error::InvalidParameter("scale must be positive".into()));
    }
    if !(-tol::PROB_RANGE_SLACK..=1.0 + tol::PROB_RANGE_SLACK).contains(&p) {
        return Err(Error::ContractViolation(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    let p = p.clamp(0.0, 1.0);
    let rounded = round_unit_to_pow10(p, ENCODE_ROUND_DECIMALS);
    let value = (u128::from(rounded) * u128::from(scale)) / POW10_12;
    let cap = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let value = u64::try_from(value.min(u128::from(cap))).expect("capped to u64");
    let mut bits = BitString::new();
    bits.push_value(value, k);
    Ok(bits)
}

/// Round `p` in [0, 1] to `decimals` decimal digits, returning the integer
/// numerator over 10^decimals. Exact: works on the float's dyadic
/// decomposition with 128-bit integers, rounding halves up.
fn round_unit_to_pow10(p: f64, decimals: u32) -> u64 {
    debug_assert!((0.0..=1.0).contains(&p));
    debug_assert!(decimals == ENCODE_ROUND_DECIMALS);
    if p == 0.0 {
        return 0;
    }
    let raw = p.to_bits();
    let exponent_bits = ((raw >> 52) & 0x7ff) as i64;
    let fraction = raw & ((1u64 << 52) - 1);
    // p = mantissa * 2^exponent with an integer mantissa
    let (mantissa, exponent) = if exponent_bits == 0 {
        (fraction, -1074i64)
    } else {
        ((1u64 << 52) | fraction, exponent_bits - 1075)
    };
    let shift = (-exponent) as u32; // p <= 1 forces exponent <= -52
    let numerator = u128::from(mantissa) * POW10_12; // < 2^93
    if shift >= 94 {
        return 0; // numerator * 2 < 2^94 <= 2^shift: rounds to zero
    }
    let quotient = numerator >> shift;
    let remainder = numerator & ((1u128 << shift) - 1);
    let half = 1u128 << (shift - 1);
    u64::try_from(quotient + u128::from(remainder >= half)).expect("bounded by 10^12")
}

/// Encode every position probability and concatenate the segments in
/// vertex order. Each segment depends only on its own `P(v)`.
pub fn encode_distribution(
    dist: &PositionDistribution,
    k: usize,
    scale: u64,
) -> Result<BitString> {
    let mut out = BitString::new();
    for &p in dist.probs() {
        let segment = encode_segment(p, k, scale)?;
        for &b in segment.bits() {
            out.push_value(u64::from(b), 1);
        }
    }
    Ok(out)
}

/// The hash function with its operators built once; immutable and safe to
/// share across threads.
#[derive(Debug, Clone)]
pub struct Qhf {
    params: QhfParams,
    ops: WalkOperators,
}

impl Qhf {
    pub fn new(params: QhfParams) -> Result<Self> {
        let ops = WalkOperators::build(&params)?;
        Ok(Self { params, ops })
    }

    pub fn params(&self) -> &QhfParams {
        &self.params
    }

    pub fn operators(&self) -> &WalkOperators {
        &self.ops
    }

    pub fn initial_state(&self) -> ComplexVec {
        ComplexVec::basis(
            3 * self.params.n,
            self.params.initial_coin.index() * self.params.n + self.params.initial_vertex,
        )
        .expect("validated parameters")
    }

    /// Apply one hybrid step per message bit, in message order.
    pub fn evolve(&self, message: &Message) -> Result<ComplexVec> {
        let mut state = self.initial_state();
        for &bit in message.bits() {
            state = hybrid_step(&state, bit, &self.ops, self.params.renormalize)?;
        }
        Ok(state)
    }

    pub fn measure(&self, message: &Message) -> Result<PositionDistribution> {
        let state = self.evolve(message)?;
        measure_positions(&state, self.params.renormalize)
    }

    /// The full pipeline: evolve, measure, encode.
    pub fn hash(&self, message: &Message) -> Result<HashValue> {
        let dist = self.measure(message)?;
        let bits = encode_distribution(&dist, self.params.k, self.params.scale)?;
        debug_assert_eq!(bits.len(), self.params.output_bits());
        Ok(HashValue { bits })
    }
}

/// One-shot hash of `message` under `params`.
pub fn qhf(message: &Message, params: &QhfParams) -> Result<HashValue> {
    Qhf::new(params.clone())?.hash(message)
}
