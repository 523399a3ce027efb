//! Scalar arithmetic in two modes: exact Gaussian rationals and complex floats.
//!
//! Exact mode keeps every quantity in `Q[i]` so certificates are hard; float
//! mode produces soft certificates. Norms require square roots, which are
//! irrational: exact mode routes every norm through the one-sided envelopes
//! [`sqrt_upper`] / [`sqrt_lower`] so that each certified inequality is
//! evaluated on the sound side.

use num::bigint::{BigInt, Sign};
use num::complex::Complex64;
use num::integer::Roots;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Gaussian rationals, hard certificates.
    Exact,
    /// `f64` complex arithmetic, soft certificates.
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

/// Default precision (in bits) of the square-root envelopes.
pub const SQRT_ENVELOPE_BITS: u32 = 64;

/// Default dyadic rounding precision for exact Newton iterates.
pub const DYADIC_BITS: u32 = 212;

/// An element of `Q[i]`: `re + im * i` with arbitrary-precision rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        GaussRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        GaussRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRational {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `|z|^2 = re^2 + im^2`, exact.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussRational {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn neg(&self) -> Self {
        GaussRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Exact division; `None` when `other` is zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let d = other.abs_sq();
        if d.is_zero() {
            return None;
        }
        let num = self.mul(&other.conj());
        Some(GaussRational {
            re: num.re / &d,
            im: num.im / &d,
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// A scalar in the active arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(GaussRational),
    Float(Complex64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(GaussRational::zero()),
            Mode::Float => Scalar::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(GaussRational::one()),
            Mode::Float => Scalar::Float(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn from_int(n: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(GaussRational::from_int(n)),
            Mode::Float => Scalar::Float(Complex64::new(n as f64, 0.0)),
        }
    }

    /// Exact rational scalar `num/den` in the requested mode.
    pub fn from_ratio(num: i64, den: i64, mode: Mode) -> Self {
        assert!(den != 0, "zero denominator");
        match mode {
            Mode::Exact => Scalar::Exact(GaussRational::new(
                BigRational::new(BigInt::from(num), BigInt::from(den)),
                BigRational::zero(),
            )),
            Mode::Float => Scalar::Float(Complex64::new(num as f64 / den as f64, 0.0)),
        }
    }

    pub fn from_rational(re: BigRational, im: BigRational, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(GaussRational::new(re, im)),
            Mode::Float => Scalar::Float(Complex64::new(
                rational_to_f64(&re),
                rational_to_f64(&im),
            )),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(z) => z.re.is_finite() && z.im.is_finite(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.add(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            _ => panic!("scalar mode mismatch"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.sub(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a - b),
            _ => panic!("scalar mode mismatch"),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            _ => panic!("scalar mode mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.neg()),
            Scalar::Float(a) => Scalar::Float(-a),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                a.div(b).map(Scalar::Exact).ok_or(Error::SingularJacobian)
            }
            (Scalar::Float(a), Scalar::Float(b)) => {
                let q = a / b;
                if q.re.is_finite() && q.im.is_finite() {
                    Ok(Scalar::Float(q))
                } else {
                    Err(Error::NonFiniteResult)
                }
            }
            _ => Err(Error::ModeMismatch),
        }
    }

    /// Multiply by an integer.
    pub fn mul_int(&self, n: i64) -> Scalar {
        self.mul(&Scalar::from_int(n, self.mode()))
    }

    /// `|z|^2` as a [`Real`] in the same mode (exact in exact mode).
    pub fn abs_sq(&self) -> Real {
        match self {
            Scalar::Exact(q) => Real::Exact(q.abs_sq()),
            Scalar::Float(z) => Real::Float(z.norm_sqr()),
        }
    }

    /// Rational upper envelope of `|z|`: `|re| + |im| >= |z|` in exact mode,
    /// the true modulus in float mode.
    pub fn abs_upper(&self) -> Real {
        match self {
            Scalar::Exact(q) => Real::Exact(q.re.abs() + q.im.abs()),
            Scalar::Float(z) => Real::Float(z.norm()),
        }
    }

    /// Rational lower envelope of `|z|`: `max(|re|, |im|) <= |z|` in exact
    /// mode, the true modulus in float mode.
    pub fn abs_lower(&self) -> Real {
        match self {
            Scalar::Exact(q) => Real::Exact(q.re.abs().max(q.im.abs())),
            Scalar::Float(z) => Real::Float(z.norm()),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(q) => q.to_complex(),
            Scalar::Float(z) => *z,
        }
    }

    /// Lossy conversion to float mode.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_complex())
    }

    /// Exact conversion of a float scalar to the dyadic rational it denotes.
    /// Exact scalars pass through unchanged.
    pub fn to_exact(&self) -> Scalar {
        match self {
            Scalar::Exact(_) => self.clone(),
            Scalar::Float(z) => Scalar::Exact(GaussRational::new(
                f64_to_rational(z.re),
                f64_to_rational(z.im),
            )),
        }
    }

    /// Round exact coordinates to dyadic rationals with denominator `2^bits`.
    pub fn dyadic_round(&self, bits: u32) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(GaussRational::new(
                dyadic_round_rational(&q.re, bits),
                dyadic_round_rational(&q.im, bits),
            )),
            Scalar::Float(_) => self.clone(),
        }
    }
}

/// A nonnegative-or-signed real quantity in the active mode (norms, radii,
/// residuals, envelope values).
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Exact(BigRational),
    Float(f64),
}

impl Real {
    pub fn mode(&self) -> Mode {
        match self {
            Real::Exact(_) => Mode::Exact,
            Real::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Real::Exact(BigRational::zero()),
            Mode::Float => Real::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Real::Exact(BigRational::one()),
            Mode::Float => Real::Float(1.0),
        }
    }

    pub fn from_int(n: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Real::Exact(BigRational::from_integer(BigInt::from(n))),
            Mode::Float => Real::Float(n as f64),
        }
    }

    pub fn from_ratio(num: i64, den: i64, mode: Mode) -> Self {
        assert!(den != 0);
        match mode {
            Mode::Exact => Real::Exact(BigRational::new(BigInt::from(num), BigInt::from(den))),
            Mode::Float => Real::Float(num as f64 / den as f64),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_zero(),
            Real::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_positive(),
            Real::Float(x) => *x > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_negative(),
            Real::Float(x) => *x < 0.0,
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            (Real::Float(a), Real::Float(b)) => Real::Float(a + b),
            _ => panic!("real mode mismatch"),
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a - b),
            (Real::Float(a), Real::Float(b)) => Real::Float(a - b),
            _ => panic!("real mode mismatch"),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            (Real::Float(a), Real::Float(b)) => Real::Float(a * b),
            _ => panic!("real mode mismatch"),
        }
    }

    pub fn div(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a / b),
            (Real::Float(a), Real::Float(b)) => Real::Float(a / b),
            _ => panic!("real mode mismatch"),
        }
    }

    pub fn max(&self, other: &Real) -> Real {
        if self.cmp_real(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, other: &Real) -> Real {
        if self.cmp_real(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn cmp_real(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            (Real::Float(a), Real::Float(b)) => a.partial_cmp(b).expect("NaN comparison"),
            _ => panic!("real mode mismatch"),
        }
    }

    pub fn lt(&self, other: &Real) -> bool {
        self.cmp_real(other) == Ordering::Less
    }

    pub fn gt(&self, other: &Real) -> bool {
        self.cmp_real(other) == Ordering::Greater
    }

    pub fn le(&self, other: &Real) -> bool {
        self.cmp_real(other) != Ordering::Greater
    }

    pub fn pow(&self, k: u32) -> Real {
        match self {
            Real::Exact(q) => {
                let mut acc = BigRational::one();
                for _ in 0..k {
                    acc *= q;
                }
                Real::Exact(acc)
            }
            Real::Float(x) => Real::Float(x.powi(k as i32)),
        }
    }

    /// Upper envelope of the square root.
    pub fn sqrt_upper(&self, bits: u32) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(sqrt_upper(q, bits)),
            Real::Float(x) => Real::Float(x.sqrt()),
        }
    }

    /// Lower envelope of the square root.
    pub fn sqrt_lower(&self, bits: u32) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(sqrt_lower(q, bits)),
            Real::Float(x) => Real::Float(x.sqrt()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => rational_to_f64(q),
            Real::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Float(_) => None,
        }
    }
}

/// Floor of the integer square root, extended to `BigInt >= 0`.
fn int_sqrt_floor(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

/// Rational `u` with `u >= sqrt(q)` and `u <= (1 + 2^-bits) * sqrt(q)`.
///
/// Requires `q >= 0`. The input is rescaled by an even power of two so the
/// relative guarantee holds for tiny and huge inputs alike.
pub fn sqrt_upper(q: &BigRational, bits: u32) -> BigRational {
    debug_assert!(!q.is_negative(), "sqrt of negative rational");
    if q.is_zero() {
        return BigRational::zero();
    }
    let (scaled, half_shift) = normalize_for_sqrt(q, bits);
    let s = int_sqrt_floor(&scaled);
    // (s+1)^2 > scaled, so (s+1) / 2^half_shift >= sqrt(q).
    let upper = BigRational::new(s + BigInt::one(), BigInt::one() << half_shift);
    debug_assert!(&upper * &upper >= *q);
    upper
}

/// Rational `l` with `l <= sqrt(q)` and `l >= (1 - 2^-bits) * sqrt(q)`.
pub fn sqrt_lower(q: &BigRational, bits: u32) -> BigRational {
    debug_assert!(!q.is_negative(), "sqrt of negative rational");
    if q.is_zero() {
        return BigRational::zero();
    }
    let (scaled, half_shift) = normalize_for_sqrt(q, bits);
    let s = int_sqrt_floor(&scaled);
    let lower = BigRational::new(s, BigInt::one() << half_shift);
    debug_assert!(&lower * &lower <= *q);
    lower
}

/// Rewrite `q = scaled / 4^half_shift` with `scaled` an integer of at least
/// `2*bits + 2` bits, so `isqrt(scaled)` carries `bits + 1` significant bits.
fn normalize_for_sqrt(q: &BigRational, bits: u32) -> (BigInt, u64) {
    let num = q.numer();
    let den = q.denom();
    let target = 2 * bits as i64 + 4;
    // q * 4^k = num * 4^k / den; choose k so the integer part has enough bits.
    let cur_bits = num.bits() as i64 - den.bits() as i64;
    let mut k = (target - cur_bits).max(0);
    if k % 2 == 1 {
        k += 1;
    }
    let k = k as u64;
    let scaled = (num << k) / den;
    (scaled, k / 2)
}

/// Round a rational to the nearest `p / 2^bits`.
pub fn dyadic_round_rational(q: &BigRational, bits: u32) -> BigRational {
    let den = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(den.clone());
    let num = round_to_int(&scaled);
    BigRational::new(num, den)
}

/// Nearest integer to a rational (ties toward +infinity).
fn round_to_int(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let num2 = q.numer() * &two + q.denom();
    num2.div_euclid(&(q.denom() * &two))
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> BigRational {
    assert!(x.is_finite(), "cannot convert non-finite float to rational");
    if x == 0.0 {
        return BigRational::zero();
    }
    let (mantissa, exponent, sign) = integer_decode(x);
    let mut num = BigInt::from(mantissa);
    if sign < 0 {
        num = -num;
    }
    if exponent >= 0 {
        BigRational::from_integer(num << (exponent as u64))
    } else {
        BigRational::new(num, BigInt::one() << ((-exponent) as u64))
    }
}

fn integer_decode(x: f64) -> (u64, i16, i8) {
    let bits = x.to_bits();
    let sign: i8 = if bits >> 63 == 0 { 1 } else { -1 };
    let mut exponent: i16 = ((bits >> 52) & 0x7ff) as i16;
    let mantissa = if exponent == 0 {
        (bits & 0xfffffffffffff) << 1
    } else {
        (bits & 0xfffffffffffff) | 0x10000000000000
    };
    exponent -= 1075;
    (mantissa, exponent, sign)
}

/// Correctly scaled conversion of a rational to `f64`; avoids overflow for
/// operands whose numerator or denominator exceeds the `f64` range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let num = q.numer();
    let den = q.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Bring the quotient's bit size near 64 before dividing.
    let shift = nb - db - 64;
    let (n, d) = if shift > 0 {
        (num.clone(), den << (shift as u64))
    } else {
        (num << ((-shift) as u64), den.clone())
    };
    let quot = &n / &d;
    let base = quot.to_f64().unwrap_or(if num.sign() == Sign::Minus {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    base * 2f64.powi(shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn gauss_rational_field_ops() {
        let a = GaussRational::new(rat(1, 2), rat(1, 3));
        let b = GaussRational::new(rat(-2, 1), rat(5, 7));
        let prod = a.mul(&b);
        let back = prod.div(&b).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.mul(&a.conj()).re, a.abs_sq());
    }

    #[test]
    fn sqrt_envelopes_bracket_the_root() {
        for (n, d) in [(2i64, 1i64), (1, 3), (17, 1), (99991, 7), (1, 1_000_000)] {
            let q = rat(n, d);
            let u = sqrt_upper(&q, 64);
            let l = sqrt_lower(&q, 64);
            assert!(&u * &u >= q);
            assert!(&l * &l <= q);
            // Relative gap below 2^-60.
            let gap = (&u - &l) / &u;
            assert!(gap < rat(1, 1 << 60));
        }
    }

    #[test]
    fn sqrt_envelope_of_zero() {
        assert!(sqrt_upper(&BigRational::zero(), 64).is_zero());
        assert!(sqrt_lower(&BigRational::zero(), 64).is_zero());
    }

    #[test]
    fn dyadic_round_stays_close() {
        let q = rat(1, 3);
        let r = dyadic_round_rational(&q, 16);
        assert!((&r - &q).abs() <= rat(1, 1 << 17));
        assert_eq!(r.denom().bits(), 17); // 2^16 + 1 bit
    }

    #[test]
    fn f64_rational_roundtrip() {
        for x in [0.5, -1.25, 3.141592653589793, 1e-300, -2.2e300, 0.0] {
            let q = f64_to_rational(x);
            assert_eq!(rational_to_f64(&q), x);
        }
    }

    #[test]
    fn rational_to_f64_handles_huge_operands() {
        let big = BigInt::from(1) << 2000u32;
        let q = BigRational::new(big.clone() * 3, big);
        assert_eq!(rational_to_f64(&q), 3.0);
    }

    proptest! {
        #[test]
        fn sqrt_upper_dominates(n in 0i64..1_000_000, d in 1i64..1_000_000) {
            let q = rat(n, d);
            let u = sqrt_upper(&q, 32);
            prop_assert!(&u * &u >= q);
        }

        #[test]
        fn f64_conversion_exact(x in -1e12f64..1e12) {
            let q = f64_to_rational(x);
            prop_assert_eq!(rational_to_f64(&q), x);
        }

        #[test]
        fn dyadic_rounding_error_bounded(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let q = rat(n, d);
            let r = dyadic_round_rational(&q, DYADIC_BITS);
            let err = (&r - &q).abs();
            let bound = BigRational::new(BigInt::one(), BigInt::one() << (DYADIC_BITS + 1));
            prop_assert!(err <= bound);
        }

        #[test]
        fn abs_envelopes_bracket(re in -1000i64..1000, im in -1000i64..1000) {
            let s = Scalar::Exact(GaussRational::new(rat(re, 7), rat(im, 11)));
            let lower = s.abs_lower();
            let upper = s.abs_upper();
            let true_abs_sq = BigRational::from_f64(
                (re as f64 / 7.0).powi(2) + (im as f64 / 11.0).powi(2)).unwrap();
            let l = lower.as_rational().unwrap();
            let u = upper.as_rational().unwrap();
            // lower^2 <= |z|^2 <= upper^2 up to float slack in the oracle
            prop_assert!(l * l <= &true_abs_sq + rat(1, 1000));
            prop_assert!(u * u >= &true_abs_sq - rat(1, 1000));
        }
    }
}
