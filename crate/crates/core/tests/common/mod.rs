//! Independent oracles shared by the integration suites. These never call
//! into the implementation paths they check: the matrix exponential is a
//! plain Taylor sum, and the segment encoder is exact big-integer
//! arithmetic on the float's dyadic decomposition.

// Not every test target uses every oracle.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_complex::Complex64;
use qwhash::ComplexMat;

/// Partial Taylor sum of `exp(-i M t)`.
pub fn taylor_expm(m: &ComplexMat, t: f64, terms: usize) -> ComplexMat {
    let n = m.rows();
    let a = m.scaled(Complex64::new(0.0, -t)); // -i M t
    let mut sum = ComplexMat::identity(n).unwrap();
    let mut term = ComplexMat::identity(n).unwrap();
    for k in 1..=terms {
        term = term.matmul(&a).unwrap().scaled(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term).unwrap();
    }
    sum
}

/// Exact-arithmetic segment value: clamp `p` to [0, 1], round it to 12
/// decimal digits (half up), scale, floor, cap at `2^k - 1`. Works on the
/// float's exact dyadic value `mantissa * 2^exponent` with big integers.
pub fn encode_value_oracle(p: f64, k: usize, scale: u64) -> u64 {
    assert!(k >= 1);
    let p = p.clamp(0.0, 1.0);
    let cap = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
    if p == 0.0 {
        return 0;
    }
    let raw = p.to_bits();
    let exponent_bits = ((raw >> 52) & 0x7ff) as i64;
    let fraction = raw & ((1u64 << 52) - 1);
    let (mantissa, exponent) = if exponent_bits == 0 {
        (fraction, -1074i64)
    } else {
        ((1u64 << 52) | fraction, exponent_bits - 1075)
    };
    let shift = (-exponent) as u64;
    let pow12 = BigUint::from(10u64.pow(12));

    // rounded = round(p * 10^12), half up
    let numerator = BigUint::from(mantissa) * &pow12;
    let quotient = &numerator >> shift;
    let remainder = numerator - (&quotient << shift);
    let rounded = if remainder << 1 >= BigUint::from(1u8) << shift {
        quotient + 1u8
    } else {
        quotient
    };

    // value = floor(rounded * scale / 10^12)
    let value = (rounded * scale) / pow12;
    let value: u64 = value.min(BigUint::from(cap)).try_into().unwrap();
    value
}

/// Interpret a big-endian bitstring as an integer.
pub fn bits_to_value(bits: &[u8]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
}
