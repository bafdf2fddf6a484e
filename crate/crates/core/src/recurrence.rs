//! Construction of the coefficient polynomials `c_k(B)` by the three-term
//! recurrence, pointwise evaluation at fixed `B`, and the exact expansion of
//! `c_k(B(s))` as a polynomial in `s`.

use crate::error::{HeunError, Result};
use crate::families::RecurrenceSpec;
use crate::poly::Polynomial;
use crate::scalar::{BigFloat, Exact, Field, GaussRational};

/// `c_0, …, c_{m_max}` for one spec.
#[derive(Clone, Debug)]
pub struct PolynomialFamily<F: Field> {
    spec: RecurrenceSpec,
    polys: Vec<Polynomial<F>>,
}

impl<F: Field> PolynomialFamily<F> {
    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    pub fn m_max(&self) -> usize {
        self.polys.len() - 1
    }

    /// `c_k`; panics if `k > m_max`.
    pub fn get(&self, k: usize) -> &Polynomial<F> {
        &self.polys[k]
    }

    pub fn polys(&self) -> &[Polynomial<F>] {
        &self.polys
    }

    pub fn field(&self) -> &F {
        self.polys[0].field()
    }

    pub fn to_bigfloat(&self, prec: u32) -> PolynomialFamily<BigFloat> {
        PolynomialFamily {
            spec: self.spec.clone(),
            polys: self.polys.iter().map(|p| p.to_bigfloat(prec)).collect(),
        }
    }

    pub fn from_parts(spec: RecurrenceSpec, polys: Vec<Polynomial<F>>) -> Self {
        PolynomialFamily { spec, polys }
    }
}

/// Builds `c_0 … c_{m_max}` with `c_{−1} = 0`, `c_0 = 1`.
pub fn build_family<F: Field>(spec: &RecurrenceSpec, m_max: usize, field: F) -> Result<PolynomialFamily<F>> {
    let l = spec.lift(&field)?;
    let mut polys = Vec::with_capacity(m_max + 1);
    let mut prev = Polynomial::zero(field.clone());
    let mut cur = Polynomial::constant(field.clone(), field.one());
    polys.push(cur.clone());
    for m in 0..m_max as i64 {
        let next = step(&l, m, &cur, &prev);
        prev = std::mem::replace(&mut cur, next);
        polys.push(cur.clone());
    }
    Ok(PolynomialFamily { spec: spec.clone(), polys })
}

/// Builds only `c_index`, keeping two polynomials in memory.
pub fn build_polynomial<F: Field>(spec: &RecurrenceSpec, index: usize, field: F) -> Result<Polynomial<F>> {
    let l = spec.lift(&field)?;
    let mut prev = Polynomial::zero(field.clone());
    let mut cur = Polynomial::constant(field.clone(), field.one());
    for m in 0..index as i64 {
        let next = step(&l, m, &cur, &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

fn step<F: Field>(
    l: &crate::families::LiftedSpec<F>,
    m: i64,
    cur: &Polynomial<F>,
    prev: &Polynomial<F>,
) -> Polynomial<F> {
    let f = &l.field;
    let shift = f.add(&l.d(m), &f.mul(&l.s, &l.e(m)));
    let sf = f.mul(&l.s, &l.f(m));
    let inv = f.div(&f.one(), &l.g(m + 1));
    let mut out = cur.mul_linear(&shift).sub(&prev.scale(&sf));
    out = out.scale(&inv);
    out
}

/// `c_0(B), …, c_{m_max}(B)` at a fixed `B`.
pub fn eval_sequence<F: Field>(spec: &RecurrenceSpec, b: &F::Elem, m_max: usize, field: F) -> Result<Vec<F::Elem>> {
    let l = spec.lift(&field)?;
    let f = &field;
    let mut out = Vec::with_capacity(m_max + 1);
    let mut prev = f.zero();
    let mut cur = f.one();
    out.push(cur.clone());
    for m in 0..m_max as i64 {
        let lin = f.add(&f.add(b, &l.d(m)), &f.mul(&l.s, &l.e(m)));
        let num = f.sub(&f.mul(&lin, &cur), &f.mul(&f.mul(&l.s, &l.f(m)), &prev));
        let next = f.div(&num, &l.g(m + 1));
        prev = std::mem::replace(&mut cur, next);
        out.push(cur.clone());
    }
    Ok(out)
}

/// `c_index(B(s))` as an exact polynomial in `s`, treating the spec's `s` as
/// an indeterminate. `b_of_s[j]` is the coefficient of `s^j` in `B(s)`, so a
/// constant `B` is a one-element slice.
pub fn s_polynomial(spec: &RecurrenceSpec, b_of_s: &[GaussRational], index: usize) -> Result<Polynomial<Exact>> {
    let l = spec.lift(&Exact)?;
    let s_var = Polynomial::new(Exact, vec![GaussRational::zero(), GaussRational::one()]);
    let b = Polynomial::new(Exact, b_of_s.to_vec());
    let mut prev = Polynomial::zero(Exact);
    let mut cur = Polynomial::constant(Exact, GaussRational::one());
    for m in 0..index as i64 {
        let lin = b
            .add(&Polynomial::constant(Exact, l.d(m)))
            .add(&s_var.scale(&l.e(m)));
        let num = lin.mul(&cur).sub(&s_var.scale(&l.f(m)).mul(&prev));
        let g = l.g(m + 1);
        let inv = GaussRational::one()
            .checked_div(&g)
            .ok_or_else(|| HeunError::InvalidParameter("vanishing recurrence denominator".into()))?;
        let next = num.scale(&inv);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `R_k = 1 / (k! (γ)_k)`, the leading coefficient of `c_k`.
pub fn leading_coefficient<F: Field>(spec: &RecurrenceSpec, k: usize, field: &F) -> Result<F::Elem> {
    let l = spec.lift(field)?;
    let mut denom = field.one();
    for j in 1..=k as i64 {
        denom = field.mul(&denom, &l.g(j));
    }
    Ok(field.div(&field.one(), &denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{from_lame, from_mathieu, LameParams, MathieuParams};
    use crate::scalar::Scalar;
    use rug::Rational;

    fn lame(n: i64, s: Scalar) -> RecurrenceSpec {
        from_lame(&LameParams { n: Scalar::int(n), s, eta: None }).unwrap().spec
    }

    fn r(n: i64, d: i64) -> GaussRational {
        GaussRational::ratio(n, d)
    }

    #[test]
    fn lame_c4_exact() {
        let spec = lame(2, Scalar::ratio(1, 100));
        let fam = build_family(&spec, 4, Exact).unwrap();
        let c4 = fam.get(4);
        let expected = [
            r(121537, 70000000),
            r(6154031, 26250000),
            r(497299, 1575000),
            r(101, 1125),
            r(2, 315),
        ];
        assert_eq!(c4.coeffs(), &expected);
    }

    #[test]
    fn c1_is_b_over_gamma() {
        let spec = RecurrenceSpec::heun(
            Scalar::ratio(2, 3),
            Scalar::ratio(1, 7),
            Scalar::ratio(5, 4),
            Scalar::int(-3),
            Scalar::ratio(3, 11),
        )
        .unwrap();
        let fam = build_family(&spec, 1, Exact).unwrap();
        assert_eq!(fam.get(1).coeffs(), &[GaussRational::zero(), r(3, 2)]);
    }

    #[test]
    fn s_zero_product_form() {
        let spec = RecurrenceSpec::confluent(Scalar::ratio(1, 3), Scalar::ratio(3, 4), Scalar::int(2), Scalar::int(0))
            .unwrap();
        let fam = build_family(&spec, 6, Exact).unwrap();
        let l = spec.lift(&Exact).unwrap();
        for k in 0..=6usize {
            let roots: Vec<_> = (0..k as i64).map(|j| -&l.d(j)).collect();
            let expected = Polynomial::from_roots(Exact, &roots).scale(&leading_coefficient(&spec, k, &Exact).unwrap());
            assert_eq!(fam.get(k), &expected, "k = {k}");
        }
    }

    #[test]
    fn eval_sequence_matches_polynomials() {
        let spec = lame(2, Scalar::ratio(1, 100));
        let fam = build_family(&spec, 4, Exact).unwrap();
        let b = r(-3, 7);
        let seq = eval_sequence(&spec, &b, 4, Exact).unwrap();
        for (k, v) in seq.iter().enumerate() {
            assert_eq!(v, &fam.get(k).eval(&b));
        }
        let at_zero = eval_sequence(&spec, &GaussRational::zero(), 4, Exact).unwrap();
        assert_eq!(at_zero[4], r(121537, 70000000));
        assert_eq!(at_zero[0], GaussRational::one());
    }

    #[test]
    fn mathieu_s0_vanishes_at_minus_one() {
        let (spec, _) = from_mathieu(&MathieuParams { a: Scalar::int(4), q: Scalar::int(0) }).unwrap();
        let seq = eval_sequence(&spec, &GaussRational::from_int(-1), 10, Exact).unwrap();
        assert!(seq[1].is_real() && !seq[1].is_zero());
        assert!(seq[2..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn float_field_agrees_with_exact() {
        let spec = lame(2, Scalar::ratio(1, 2));
        let exact = build_family(&spec, 30, Exact).unwrap();
        let float = build_family(&spec, 30, BigFloat::new(256)).unwrap();
        for k in 0..=30 {
            let e = exact.get(k).to_bigfloat(256);
            for (a, b) in e.coeffs().iter().zip(float.get(k).coeffs()) {
                let diff = rug::Float::with_val(256, rug::Complex::with_val(256, a - b).abs_ref());
                let scale = rug::Float::with_val(256, a.abs_ref());
                assert!(diff <= scale * rug::Float::with_val(256, rug::Float::i_exp(1, -240)));
            }
        }
    }

    #[test]
    fn exact_field_rejects_float_spec() {
        let spec = RecurrenceSpec::reduced_confluent(
            Scalar::ratio(1, 2),
            Scalar::ratio(1, 2),
            Scalar::Float(rug::Complex::with_val(64, 0.3)),
        )
        .unwrap();
        assert!(matches!(build_family(&spec, 3, Exact), Err(HeunError::NotExact(_))));
        assert!(build_family(&spec, 3, BigFloat::new(64)).is_ok());
    }

    #[test]
    fn s_polynomial_constant_term_vanishes_on_grid() {
        let spec = lame(2, Scalar::int(0));
        let p = s_polynomial(&spec, &[GaussRational::from_int(-1)], 4).unwrap();
        assert!(p.coeff(0).is_zero());
        // B = −D_5 is not a root of c_4 at s = 0: constant term is R_4 ∏ (D_j − 25).
        let p = s_polynomial(&spec, &[GaussRational::from_int(-25)], 4).unwrap();
        let expected = leading_coefficient(&spec, 4, &Exact).unwrap()
            * GaussRational::from_int(-25 * -24 * -21 * -16);
        assert_eq!(p.coeff(0), expected);
    }

    #[test]
    fn first_order_substitution_at_k1_m1() {
        // B = −1 + (1/2 − 3/4) s makes c_2 vanish through O(s) for Lamé n = 2.
        let spec = lame(2, Scalar::int(0));
        let b = [GaussRational::from_int(-1), GaussRational::real(Rational::from((-1, 4)))];
        let p = s_polynomial(&spec, &b, 2).unwrap();
        assert!(p.coeff(0).is_zero());
        assert!(p.coeff(1).is_zero());
    }
}
