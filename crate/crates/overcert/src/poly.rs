//! Sparse multivariate polynomials over the two scalar modes, with the
//! evaluation, differentiation, and norm-bound operations the certification
//! tests are built from.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Mode, Real, Scalar};

/// Exponent vector of a monomial; length equals the ambient variable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The monomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise `self >= other`.
    pub fn divides_into(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

/// A sparse polynomial; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    mode: Mode,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize, mode: Mode) -> Self {
        Polynomial {
            nvars,
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Polynomial::zero(nvars, c.mode());
        p.add_term(Monomial::constant(nvars), c);
        p
    }

    /// Build from `(exponents, coefficient)` pairs; repeated monomials sum.
    pub fn from_terms(
        nvars: usize,
        mode: Mode,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Self {
        let mut p = Polynomial::zero(nvars, mode);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(nvars: usize, mode: Mode, terms: &[(&[u32], i64)]) -> Self {
        Polynomial::from_terms(
            nvars,
            mode,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Scalar::from_int(*c, mode))),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    /// Max total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.total_degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        assert_eq!(m.0.len(), self.nvars);
        assert_eq!(c.mode(), self.mode, "coefficient mode mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let sum = old.add(&c);
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&Scalar::from_int(-1, other.mode)))
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars, self.mode);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Polynomial::zero(self.nvars, self.mode);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    /// Evaluate at a point; exact mode is bit-exact.
    pub fn eval(&self, z: &[Scalar]) -> Result<Scalar> {
        if z.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: z.len(),
            });
        }
        let mut powers = PowerTable::new(z, self.mode);
        let mut acc = Scalar::zero(self.mode);
        for (m, c) in &self.terms {
            acc = acc.add(&c.mul(&powers.monomial(m)));
        }
        if !acc.is_finite() {
            return Err(Error::NonFiniteResult);
        }
        Ok(acc)
    }

    /// Partial derivative `d^a p` with exact falling-factorial coefficients.
    pub fn partial(&self, a: &[u32]) -> Result<Polynomial> {
        if a.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: a.len(),
            });
        }
        let mut out = Polynomial::zero(self.nvars, self.mode);
        'term: for (m, c) in &self.terms {
            let mut ff = BigInt::one();
            let mut e = Vec::with_capacity(self.nvars);
            for (ei, ai) in m.0.iter().zip(a) {
                if ei < ai {
                    continue 'term;
                }
                for j in 0..*ai {
                    ff *= BigInt::from(ei - j);
                }
                e.push(ei - ai);
            }
            let factor = match self.mode {
                Mode::Exact => Scalar::from_rational(
                    BigRational::from_integer(ff),
                    BigRational::zero(),
                    Mode::Exact,
                ),
                Mode::Float => Scalar::Float(num::complex::Complex64::new(
                    bigint_to_f64(&ff),
                    0.0,
                )),
            };
            out.add_term(Monomial(e), c.mul(&factor));
        }
        Ok(out)
    }

    /// `B_k(p, z) = sum_{|a| = k} |d^a p(z)| / a!`, a certified upper bound
    /// for `||D^k p(z)|| / k!` against the entrywise l1 strategy. Exact mode
    /// replaces moduli by the rational envelope `|re| + |im|`.
    pub fn deriv_ell1_bound(&self, z: &[Scalar], k: u32) -> Result<Real> {
        assert!(k >= 1, "derivative order must be at least 1");
        if z.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: z.len(),
            });
        }
        let mut total = Real::zero(self.mode);
        for a in compositions(k, self.nvars) {
            let da = self.partial(&a)?;
            if da.is_zero() {
                continue;
            }
            let val = da.eval(z)?;
            let fact = multi_factorial(&a);
            let contrib = val.abs_upper().div(&real_from_bigint(&fact, self.mode));
            total = total.add(&contrib);
        }
        Ok(total)
    }

    /// Squared Bombieri-Weyl norm of the degree-`d` homogenization:
    /// `sum_a |c_a|^2 * a! * (d - |a|)! / d!` over the affine exponents.
    pub fn bw_norm_sq(&self) -> Real {
        let d = self.degree().max(0) as u32;
        let d_fact = factorial(d);
        let mut total = Real::zero(self.mode);
        for (m, c) in &self.terms {
            let a_fact = multi_factorial(&m.0);
            let rest = factorial(d - m.total_degree());
            let weight_num = a_fact * rest;
            let weight = match self.mode {
                Mode::Exact => Real::Exact(BigRational::new(weight_num, d_fact.clone())),
                Mode::Float => Real::Float(bigint_to_f64(&weight_num) / bigint_to_f64(&d_fact)),
            };
            total = total.add(&c.abs_sq().mul(&weight));
        }
        total
    }

    /// Lossy conversion to float mode.
    pub fn to_float(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars, Mode::Float);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.to_float());
        }
        out
    }

    /// Exact conversion (float coefficients become the dyadic rationals they
    /// denote).
    pub fn to_exact(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars, Mode::Exact);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.to_exact());
        }
        out
    }

    /// Sum of `|c_a|` over all terms (used by the float evaluation-error
    /// allowance).
    pub fn coeff_abs_sum(&self) -> Real {
        let mut total = Real::zero(self.mode);
        for (_, c) in &self.terms {
            total = total.add(&c.abs_upper());
        }
        total
    }
}

/// An ordered system of polynomials sharing an ambient variable count.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    nvars: usize,
    mode: Mode,
    polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(nvars: usize, mode: Mode, polys: Vec<Polynomial>) -> Self {
        assert!(!polys.is_empty(), "a system holds at least one polynomial");
        for p in &polys {
            assert_eq!(p.nvars(), nvars);
            assert_eq!(p.mode(), mode);
        }
        PolySystem { nvars, mode, polys }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn is_square(&self) -> bool {
        self.polys.len() == self.nvars
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                npolys: self.polys.len(),
                nvars: self.nvars,
            })
        }
    }

    pub fn eval(&self, z: &[Scalar]) -> Result<Vec<Scalar>> {
        self.polys.iter().map(|p| p.eval(z)).collect()
    }

    /// Jacobian matrix: entry `(i, j)` is `d p_i / d x_j` evaluated at `z`.
    pub fn jacobian(&self, z: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
        let jp = self.jacobian_polys();
        jacobian_eval(&jp, z)
    }

    /// The symbolic partial derivatives, row per polynomial.
    pub fn jacobian_polys(&self) -> Vec<Vec<Polynomial>> {
        self.polys
            .iter()
            .map(|p| {
                (0..self.nvars)
                    .map(|j| {
                        let mut a = vec![0u32; self.nvars];
                        a[j] = 1;
                        p.partial(&a).expect("index length is nvars")
                    })
                    .collect()
            })
            .collect()
    }

    /// Squared Bombieri-Weyl norm of the homogenized system.
    pub fn bw_norm_sq(&self) -> Real {
        let mut total = Real::zero(self.mode);
        for p in &self.polys {
            total = total.add(&p.bw_norm_sq());
        }
        total
    }

    /// Product of the polynomial degrees of a square system.
    pub fn bezout_bound(&self) -> Result<u64> {
        self.require_square()?;
        let mut acc: u64 = 1;
        for p in &self.polys {
            let d = p.degree();
            if d < 0 {
                return Err(Error::ZeroPolynomial);
            }
            acc = acc
                .checked_mul(d as u64)
                .ok_or(Error::Overflow("bezout_bound"))?;
        }
        Ok(acc)
    }

    pub fn to_float(&self) -> PolySystem {
        PolySystem::new(
            self.nvars,
            Mode::Float,
            self.polys.iter().map(|p| p.to_float()).collect(),
        )
    }

    pub fn to_exact(&self) -> PolySystem {
        PolySystem::new(
            self.nvars,
            Mode::Exact,
            self.polys.iter().map(|p| p.to_exact()).collect(),
        )
    }

    /// Concatenate the polynomials of two systems over the same variables.
    pub fn concat(&self, other: &PolySystem) -> PolySystem {
        assert_eq!(self.nvars, other.nvars);
        assert_eq!(self.mode, other.mode);
        let mut polys = self.polys.clone();
        polys.extend(other.polys.iter().cloned());
        PolySystem::new(self.nvars, self.mode, polys)
    }

    pub fn max_degree(&self) -> i64 {
        self.polys.iter().map(|p| p.degree()).max().unwrap_or(-1)
    }
}

/// Evaluate a prepared Jacobian at a point.
pub fn jacobian_eval(jp: &[Vec<Polynomial>], z: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    jp.iter()
        .map(|row| row.iter().map(|p| p.eval(z)).collect())
        .collect()
}

/// All exponent vectors of length `n` summing to `k`, lexicographic order.
pub fn compositions(k: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = remaining;
            out.push(cur.clone());
            return;
        }
        for v in 0..=remaining {
            cur[i] = v;
            rec(i + 1, remaining - v, cur, out);
        }
    }
    if n == 0 {
        return out;
    }
    rec(0, k, &mut cur, &mut out);
    out
}

pub(crate) fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

pub(crate) fn multi_factorial(a: &[u32]) -> BigInt {
    let mut acc = BigInt::one();
    for &ai in a {
        acc *= factorial(ai);
    }
    acc
}

fn real_from_bigint(n: &BigInt, mode: Mode) -> Real {
    match mode {
        Mode::Exact => Real::Exact(BigRational::from_integer(n.clone())),
        Mode::Float => Real::Float(bigint_to_f64(n)),
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    crate::scalar::rational_to_f64(&BigRational::from_integer(n.clone()))
}

/// Power table caching `z_i^k` for repeated monomial evaluation.
struct PowerTable<'a> {
    z: &'a [Scalar],
    mode: Mode,
    cache: Vec<Vec<Scalar>>,
}

impl<'a> PowerTable<'a> {
    fn new(z: &'a [Scalar], mode: Mode) -> Self {
        PowerTable {
            z,
            mode,
            cache: vec![Vec::new(); z.len()],
        }
    }

    fn power(&mut self, i: usize, e: u32) -> Scalar {
        if e == 0 {
            return Scalar::one(self.mode);
        }
        let col = &mut self.cache[i];
        if col.is_empty() {
            col.push(self.z[i].clone());
        }
        while col.len() < e as usize {
            let next = col.last().unwrap().mul(&self.z[i]);
            col.push(next);
        }
        col[e as usize - 1].clone()
    }

    fn monomial(&mut self, m: &Monomial) -> Scalar {
        let mut acc = Scalar::one(self.mode);
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.power(i, e));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use num::complex::Complex64;
    use proptest::prelude::*;

    fn exact_point(coords: &[(i64, i64)]) -> Vec<Scalar> {
        coords
            .iter()
            .map(|&(n, d)| Scalar::from_ratio(n, d, Mode::Exact))
            .collect()
    }

    /// First quartic-basis polynomial: z1*z2 - z2^2 + z1 - z2.
    fn quartics_f1(mode: Mode) -> Polynomial {
        Polynomial::from_int_terms(
            2,
            mode,
            &[(&[1, 1], 1), (&[0, 2], -1), (&[1, 0], 1), (&[0, 1], -1)],
        )
    }

    #[test]
    fn eval_quartic_generator_at_known_point() {
        let p = quartics_f1(Mode::Exact);
        let v = p.eval(&exact_point(&[(4, 1), (4, 1)])).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn eval_unit_circle_point() {
        let p = Polynomial::from_int_terms(
            2,
            Mode::Exact,
            &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)],
        );
        let v = p.eval(&exact_point(&[(1, 1), (0, 1)])).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn eval_matches_term_by_term_expansion_oracle() {
        // Independent oracle: expand f1(1,2) term by term by hand:
        // 1*2 - 2^2 + 1 - 2 = 2 - 4 + 1 - 2 = -3.
        let p = quartics_f1(Mode::Exact);
        let v = p.eval(&exact_point(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(v, Scalar::from_int(-3, Mode::Exact));
    }

    #[test]
    fn eval_dimension_mismatch() {
        let p = quartics_f1(Mode::Exact);
        assert!(matches!(
            p.eval(&exact_point(&[(1, 1)])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_second_derivative_of_square() {
        let p = Polynomial::from_int_terms(2, Mode::Exact, &[(&[2, 0], 1)]);
        let d = p.partial(&[2, 0]).unwrap();
        assert_eq!(d, Polynomial::from_int_terms(2, Mode::Exact, &[(&[0, 0], 2)]));
    }

    #[test]
    fn partial_mixed_with_falling_factorial() {
        // Hand differentiation oracle: d^2/dz2^2 (z1 z2^3) = 6 z1 z2.
        let p = Polynomial::from_int_terms(2, Mode::Exact, &[(&[1, 3], 1)]);
        let d = p.partial(&[0, 2]).unwrap();
        assert_eq!(d, Polynomial::from_int_terms(2, Mode::Exact, &[(&[1, 1], 6)]));
    }

    #[test]
    fn partial_of_constant_vanishes() {
        let p = Polynomial::from_int_terms(1, Mode::Exact, &[(&[0], 5)]);
        assert!(p.partial(&[1]).unwrap().is_zero());
    }

    #[test]
    fn jacobian_against_symbolic_oracle() {
        // (z1^2 + z2^2 - 1, z1 - z2) at (1,1): [[2,2],[1,-1]].
        let sys = PolySystem::new(
            2,
            Mode::Exact,
            vec![
                Polynomial::from_int_terms(
                    2,
                    Mode::Exact,
                    &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)],
                ),
                Polynomial::from_int_terms(2, Mode::Exact, &[(&[1, 0], 1), (&[0, 1], -1)]),
            ],
        );
        let j = sys.jacobian(&exact_point(&[(1, 1), (1, 1)])).unwrap();
        let want = [[2i64, 2], [1, -1]];
        for (i, row) in j.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(*v, Scalar::from_int(want[i][k], Mode::Exact));
            }
        }
    }

    #[test]
    fn jacobian_of_affine_map_is_constant() {
        // 3x + 2y - 7 and -x + 5y + 1.
        let sys = PolySystem::new(
            2,
            Mode::Exact,
            vec![
                Polynomial::from_int_terms(
                    2,
                    Mode::Exact,
                    &[(&[1, 0], 3), (&[0, 1], 2), (&[0, 0], -7)],
                ),
                Polynomial::from_int_terms(
                    2,
                    Mode::Exact,
                    &[(&[1, 0], -1), (&[0, 1], 5), (&[0, 0], 1)],
                ),
            ],
        );
        for pt in [&[(0i64, 1i64), (0, 1)][..], &[(17, 3), (-5, 9)][..]] {
            let j = sys.jacobian(&exact_point(pt)).unwrap();
            assert_eq!(j[0][0], Scalar::from_int(3, Mode::Exact));
            assert_eq!(j[0][1], Scalar::from_int(2, Mode::Exact));
            assert_eq!(j[1][0], Scalar::from_int(-1, Mode::Exact));
            assert_eq!(j[1][1], Scalar::from_int(5, Mode::Exact));
        }
    }

    #[test]
    fn jacobian_of_zero_system() {
        let sys = PolySystem::new(
            2,
            Mode::Exact,
            vec![Polynomial::zero(2, Mode::Exact), Polynomial::zero(2, Mode::Exact)],
        );
        let j = sys.jacobian(&exact_point(&[(1, 1), (2, 1)])).unwrap();
        assert!(j.iter().flatten().all(|v| v.is_zero()));
    }

    #[test]
    fn ell1_bound_of_square_at_origin() {
        // Direct enumeration of |a| = 2: only a = (2,0) survives, giving
        // |2| / 2! = 1.
        let p = Polynomial::from_int_terms(2, Mode::Exact, &[(&[2, 0], 1)]);
        let b = p
            .deriv_ell1_bound(&exact_point(&[(0, 1), (0, 1)]), 2)
            .unwrap();
        assert_eq!(b, Real::from_int(1, Mode::Exact));
    }

    #[test]
    fn ell1_bound_of_linear_poly_vanishes_at_order_two() {
        let p = Polynomial::from_int_terms(2, Mode::Exact, &[(&[1, 0], 3), (&[0, 1], -4)]);
        let b = p
            .deriv_ell1_bound(&exact_point(&[(5, 1), (7, 1)]), 2)
            .unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn ell1_bound_first_order_at_origin() {
        // Symbolic gradient oracle for f1 at the origin:
        // |d1 f1(0,0)| + |d2 f1(0,0)| = 1 + 1 = 2.
        let p = quartics_f1(Mode::Exact);
        let b = p
            .deriv_ell1_bound(&exact_point(&[(0, 1), (0, 1)]), 1)
            .unwrap();
        assert_eq!(b, Real::from_int(2, Mode::Exact));
    }

    #[test]
    fn bw_norm_of_unit_monomial() {
        let sys = PolySystem::new(
            1,
            Mode::Exact,
            vec![Polynomial::from_int_terms(1, Mode::Exact, &[(&[1], 1)])],
        );
        assert_eq!(sys.bw_norm_sq(), Real::from_int(1, Mode::Exact));
    }

    #[test]
    fn bw_norm_by_direct_formula() {
        // x^2 - 1 homogenizes to x^2 - x0^2:
        // |1|^2 * 2!0!/2! + |-1|^2 * 0!2!/2! = 1 + 1 = 2.
        let sys = PolySystem::new(
            1,
            Mode::Exact,
            vec![Polynomial::from_int_terms(1, Mode::Exact, &[(&[2], 1), (&[0], -1)])],
        );
        assert_eq!(sys.bw_norm_sq(), Real::from_int(2, Mode::Exact));
    }

    #[test]
    fn bw_norm_scales_quadratically() {
        let p = Polynomial::from_int_terms(2, Mode::Exact, &[(&[2, 1], 3), (&[0, 0], -5)]);
        let sys = PolySystem::new(2, Mode::Exact, vec![p.clone()]);
        let scaled = PolySystem::new(2, Mode::Exact, vec![p.scale(&Scalar::from_int(2, Mode::Exact))]);
        assert_eq!(
            scaled.bw_norm_sq(),
            sys.bw_norm_sq().mul(&Real::from_int(4, Mode::Exact))
        );
    }

    #[test]
    fn bezout_of_two_quartics() {
        let q = Polynomial::from_int_terms(2, Mode::Exact, &[(&[4, 0], 1), (&[0, 0], 1)]);
        let sys = PolySystem::new(2, Mode::Exact, vec![q.clone(), q]);
        assert_eq!(sys.bezout_bound().unwrap(), 16);
    }

    #[test]
    fn bezout_of_linear_system_is_one() {
        let l = Polynomial::from_int_terms(2, Mode::Exact, &[(&[1, 0], 1), (&[0, 1], 2)]);
        let l2 = Polynomial::from_int_terms(2, Mode::Exact, &[(&[0, 1], 1)]);
        let sys = PolySystem::new(2, Mode::Exact, vec![l, l2]);
        assert_eq!(sys.bezout_bound().unwrap(), 1);
    }

    #[test]
    fn bezout_requires_square() {
        let l = Polynomial::from_int_terms(2, Mode::Exact, &[(&[1, 0], 1)]);
        let sys = PolySystem::new(2, Mode::Exact, vec![l]);
        assert!(matches!(sys.bezout_bound(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn degree_of_zero_is_sentinel() {
        assert_eq!(Polynomial::zero(3, Mode::Exact).degree(), -1);
    }

    // -- property tests ----------------------------------------------------

    fn arb_exact_poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..=max_deg, nvars),
                -20i64..=20,
                -5i64..=5,
            ),
            0..6,
        )
        .prop_map(move |terms| {
            let mut p = Polynomial::zero(nvars, Mode::Exact);
            for (mut e, cr, ci) in terms {
                let total: u32 = e.iter().sum();
                if total > max_deg {
                    // trim overly large exponents
                    for v in e.iter_mut() {
                        *v = (*v).min(1);
                    }
                }
                p.add_term(
                    Monomial(e),
                    Scalar::Exact(GaussRational::new(
                        BigRational::from_integer(BigInt::from(cr)),
                        BigRational::from_integer(BigInt::from(ci)),
                    )),
                );
            }
            p
        })
    }

    proptest! {
        #[test]
        fn eval_is_ring_homomorphism(
            p in arb_exact_poly(2, 3),
            q in arb_exact_poly(2, 3),
            zn in proptest::collection::vec((-9i64..=9, 1i64..=9), 2),
        ) {
            let z: Vec<Scalar> = zn.iter().map(|&(n, d)| Scalar::from_ratio(n, d, Mode::Exact)).collect();
            let sum = p.add(&q).eval(&z).unwrap();
            prop_assert_eq!(sum, p.eval(&z).unwrap().add(&q.eval(&z).unwrap()));
            let prod = p.mul(&q).eval(&z).unwrap();
            prop_assert_eq!(prod, p.eval(&z).unwrap().mul(&q.eval(&z).unwrap()));
        }

        #[test]
        fn partials_commute(p in arb_exact_poly(3, 4)) {
            let dx = p.partial(&[1, 0, 0]).unwrap().partial(&[0, 1, 0]).unwrap();
            let dy = p.partial(&[0, 1, 0]).unwrap().partial(&[1, 0, 0]).unwrap();
            prop_assert_eq!(dx, dy);
        }
    }

    #[test]
    fn jacobian_matches_central_finite_differences() {
        // 100 seeded random float systems, degree <= 4, step 1e-5, relative
        // error <= 1e-6 against the symbolic Jacobian.
        let mut rng = crate::solver::CounterRng::new(0xfd1f);
        for _ in 0..100 {
            let n = 1 + (rng.next_u64() % 3) as usize;
            let polys: Vec<Polynomial> = (0..n)
                .map(|_| {
                    let mut p = Polynomial::zero(n, Mode::Float);
                    for _ in 0..4 {
                        let e: Vec<u32> = (0..n).map(|_| (rng.next_u64() % 3) as u32).collect();
                        let c = Complex64::new(rng.next_unit() * 4.0 - 2.0, rng.next_unit() * 4.0 - 2.0);
                        p.add_term(Monomial(e), Scalar::Float(c));
                    }
                    p
                })
                .collect();
            let sys = PolySystem::new(n, Mode::Float, polys);
            let z: Vec<Scalar> = (0..n)
                .map(|_| {
                    Scalar::Float(Complex64::new(
                        rng.next_unit() * 2.0 - 1.0,
                        rng.next_unit() * 2.0 - 1.0,
                    ))
                })
                .collect();
            let jac = sys.jacobian(&z).unwrap();
            let h = 1e-5;
            for j in 0..n {
                let mut zp = z.clone();
                let mut zm = z.clone();
                if let (Scalar::Float(a), Scalar::Float(b)) = (&mut zp[j], &mut zm[j]) {
                    a.re += h;
                    b.re -= h;
                }
                let fp = sys.eval(&zp).unwrap();
                let fm = sys.eval(&zm).unwrap();
                for i in 0..n {
                    let fd = (fp[i].to_complex() - fm[i].to_complex()) / Complex64::new(2.0 * h, 0.0);
                    let sym = jac[i][j].to_complex();
                    let denom = sym.norm().max(1.0);
                    assert!(
                        (fd - sym).norm() / denom < 1e-6,
                        "finite difference mismatch: {fd} vs {sym}"
                    );
                }
            }
        }
    }

    #[test]
    fn ell1_bound_dominates_sampled_operator_norm() {
        // Brute-force estimate of ||D^k p(z)|| / k! from below via random unit
        // vectors; the l1 bound must dominate in every trial.
        let mut rng = crate::solver::CounterRng::new(0xabc1);
        for _ in 0..60 {
            let n = 1 + (rng.next_u64() % 3) as usize;
            let mut p = Polynomial::zero(n, Mode::Float);
            for _ in 0..5 {
                let e: Vec<u32> = (0..n).map(|_| (rng.next_u64() % 4) as u32).collect();
                p.add_term(
                    Monomial(e),
                    Scalar::Float(Complex64::new(
                        rng.next_unit() * 6.0 - 3.0,
                        rng.next_unit() * 6.0 - 3.0,
                    )),
                );
            }
            let z: Vec<Scalar> = (0..n)
                .map(|_| Scalar::Float(Complex64::new(rng.next_unit() - 0.5, rng.next_unit() - 0.5)))
                .collect();
            for k in 1..=3u32 {
                let bound = p.deriv_ell1_bound(&z, k).unwrap().to_f64();
                for _ in 0..20 {
                    // random unit direction
                    let mut w: Vec<Complex64> = (0..n)
                        .map(|_| Complex64::new(rng.next_unit() - 0.5, rng.next_unit() - 0.5))
                        .collect();
                    let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                    if norm == 0.0 {
                        continue;
                    }
                    for c in &mut w {
                        *c /= norm;
                    }
                    // |sum_{|a|=k} d^a p(z) w^a / a!| <= ||D^k p(z)|| / k!
                    let mut val = Complex64::new(0.0, 0.0);
                    for a in compositions(k, n) {
                        let da = p.partial(&a).unwrap();
                        if da.is_zero() {
                            continue;
                        }
                        let dv = da.eval(&z).unwrap().to_complex();
                        let mut wa = Complex64::new(1.0, 0.0);
                        for (i, &ai) in a.iter().enumerate() {
                            for _ in 0..ai {
                                wa *= w[i];
                            }
                        }
                        let af = bigint_to_f64(&multi_factorial(&a));
                        val += dv * wa / af;
                    }
                    assert!(
                        val.norm() <= bound * (1.0 + 1e-9),
                        "sampled {} exceeds bound {}",
                        val.norm(),
                        bound
                    );
                }
            }
        }
    }
}
