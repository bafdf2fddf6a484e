//! Dense univariate polynomials over a [`Field`].

use rug::Complex;

use crate::scalar::{BigFloat, Field, FieldTag};

/// Coefficients indexed by power; trailing zeros are trimmed so the leading
/// coefficient is nonzero except for the zero polynomial.
#[derive(Clone, Debug)]
pub struct Polynomial<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> Polynomial<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `∏ (x − r)` over the given roots.
    pub fn from_roots(field: F, roots: &[F::Elem]) -> Self {
        let mut p = Self::constant(field.clone(), field.one());
        for r in roots {
            p = p.mul_linear(&field.neg(r));
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn tag(&self) -> FieldTag {
        self.field.tag()
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> F::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `(p(x), p'(x))` by a single Horner pass.
    pub fn eval_with_derivative(&self, x: &F::Elem) -> (F::Elem, F::Elem) {
        let f = &self.field;
        let mut p = f.zero();
        let mut dp = f.zero();
        for c in self.coeffs.iter().rev() {
            dp = f.add(&f.mul(&dp, x), &p);
            p = f.add(&f.mul(&p, x), c);
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| f.mul_int(c, k as i64))
            .collect();
        Self::new(f.clone(), coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f.clone(), (0..n).map(|k| f.add(&self.coeff(k), &other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f.clone(), (0..n).map(|k| f.sub(&self.coeff(k), &other.coeff(k))).collect())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f.clone());
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f.clone(), out)
    }

    /// `p(x) · (x + a)`.
    pub fn mul_linear(&self, a: &F::Elem) -> Self {
        let f = &self.field;
        if self.is_zero() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n + 1);
        out.push(f.mul(&self.coeffs[0], a));
        for k in 1..n {
            out.push(f.add(&self.coeffs[k - 1], &f.mul(&self.coeffs[k], a)));
        }
        out.push(self.coeffs[n - 1].clone());
        Self::new(f.clone(), out)
    }

    /// Synthetic division by `x − r`: returns `(quotient, remainder)`.
    pub fn div_linear(&self, r: &F::Elem) -> (Self, F::Elem) {
        let f = &self.field;
        if self.is_zero() {
            return (self.clone(), f.zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![f.zero(); n - 1];
        let mut acc = f.zero();
        for k in (0..n).rev() {
            acc = f.add(&f.mul(&acc, r), &self.coeffs[k]);
            if k > 0 {
                q[k - 1] = acc.clone();
            }
        }
        (Self::new(f.clone(), q), acc)
    }

    /// Rounds every coefficient to a big-float of the given precision.
    pub fn to_bigfloat(&self, prec: u32) -> Polynomial<BigFloat> {
        let coeffs: Vec<Complex> = self.coeffs.iter().map(|c| self.field.to_complex(c, prec)).collect();
        Polynomial::new(BigFloat::new(prec), coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, GaussRational};

    fn p(cs: &[i64]) -> Polynomial<Exact> {
        Polynomial::new(Exact, cs.iter().map(|&c| GaussRational::from_int(c)).collect())
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn horner_and_derivative() {
        let poly = p(&[1, -3, 0, 2]);
        let x = GaussRational::from_int(2);
        let (v, dv) = poly.eval_with_derivative(&x);
        assert_eq!(v, GaussRational::from_int(11));
        assert_eq!(dv, GaussRational::from_int(21));
        assert_eq!(poly.derivative().eval(&x), dv);
    }

    #[test]
    fn synthetic_division_roundtrip() {
        let roots: Vec<_> = [1, -2, 5].iter().map(|&r| GaussRational::from_int(r)).collect();
        let poly = Polynomial::from_roots(Exact, &roots);
        let (q, rem) = poly.div_linear(&roots[1]);
        assert!(rem.is_zero());
        assert_eq!(q.mul_linear(&GaussRational::from_int(2)), poly);
        let (_, rem) = poly.div_linear(&GaussRational::from_int(3));
        assert_eq!(rem, poly.eval(&GaussRational::from_int(3)));
    }

    #[test]
    fn product_matches_mul_linear() {
        let a = p(&[3, 1, 4]);
        assert_eq!(a.mul(&p(&[-7, 1])), a.mul_linear(&GaussRational::from_int(-7)));
        assert_eq!(a.add(&a).sub(&a), a);
    }
}
