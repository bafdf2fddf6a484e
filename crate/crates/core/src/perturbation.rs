//! Closed-form first- and second-order coefficients of the zeros of
//! `c_{m+1}(B)` around `s = 0`.
//!
//! The zero labelled `k` (the one equal to `−D_k` at `s = 0`) expands as
//!
//! ```text
//! B = −D_k − D_k^[1] s − D_k^[2] s² + O(s³)
//! ```
//!
//! where `D_k^[j]` no longer depends on `m` once `m ≥ k + j`. Both
//! coefficients are rational functions of `D, E, F` evaluated near `k`; the
//! `k = 0`, `k = 1` and `k = m` boundary cases are the general formula with
//! the out-of-range neighbour terms dropped.

use crate::error::{HeunError, Result};
use crate::families::{LiftedSpec, RecurrenceSpec};
use crate::scalar::{Field, Scalar};

/// Expansion of one zero of `c_{m+1}`, truncated at `order`.
///
/// Coefficients are stored with the sign of the zero itself:
/// `c0 = −D_k`, `c1 = −D_k^[1]`, `c2 = −D_k^[2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbativeExpansion<F: Field> {
    pub k: usize,
    /// Zero of `c_{m+1}`; `None` for the `m`-independent interior expansions.
    pub m: Option<usize>,
    pub c0: F::Elem,
    pub c1: Option<F::Elem>,
    pub c2: Option<F::Elem>,
    pub order: u8,
    field: F,
}

impl<F: Field> PerturbativeExpansion<F> {
    pub fn evaluate(&self, s: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = self.c0.clone();
        let mut power = f.one();
        for c in [&self.c1, &self.c2].into_iter().flatten() {
            power = f.mul(&power, s);
            acc = f.add(&acc, &f.mul(c, &power));
        }
        acc
    }

    /// `(c0, c1, c2)` with absent orders reported as zero.
    pub fn coefficients(&self) -> [F::Elem; 3] {
        let z = self.field.zero();
        [self.c0.clone(), self.c1.clone().unwrap_or_else(|| z.clone()), self.c2.clone().unwrap_or(z)]
    }
}

fn check_order(order: u8) -> Result<()> {
    if order > 2 {
        return Err(HeunError::OutOfRange(format!("expansion order {order} (closed forms exist for 0, 1, 2)")));
    }
    Ok(())
}

fn checked_div<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> Result<F::Elem> {
    if field.is_zero(b) {
        return Err(HeunError::Degenerate("D_j coincide for the requested label".into()));
    }
    Ok(field.div(a, b))
}

struct Terms<'a, F: Field> {
    l: &'a LiftedSpec<F>,
    k: i64,
    dk: F::Elem,
}

impl<'a, F: Field> Terms<'a, F> {
    fn new(l: &'a LiftedSpec<F>, k: usize) -> Self {
        let k = k as i64;
        Terms { l, k, dk: l.d(k) }
    }

    /// `j(j−1+γ) F_j / (D_k − D_{j'})^power`, the building block of every
    /// formula below (with `j` the coupling index and `j'` the neighbour).
    fn coupling(&self, j: i64, neighbour: i64, power: u32) -> Result<F::Elem> {
        let f = &self.l.field;
        let gap = f.sub(&self.dk, &self.l.d(neighbour));
        let mut denom = f.one();
        for _ in 0..power {
            denom = f.mul(&denom, &gap);
        }
        checked_div(f, &f.mul(&self.l.g(j), &self.l.f(j)), &denom)
    }

    /// `D_k^[1]` including the upper neighbour only when `upper` holds.
    fn first(&self, upper: bool) -> Result<F::Elem> {
        let f = &self.l.field;
        let k = self.k;
        let mut acc = self.l.e(k);
        if k >= 1 {
            acc = f.add(&acc, &self.coupling(k, k - 1, 1)?);
        }
        if upper {
            acc = f.add(&acc, &self.coupling(k + 1, k + 1, 1)?);
        }
        Ok(acc)
    }

    fn second(&self) -> Result<F::Elem> {
        let f = &self.l.field;
        let k = self.k;
        let lower_sq = if k >= 1 { self.coupling(k, k - 1, 2)? } else { f.zero() };
        let upper_sq = self.coupling(k + 1, k + 1, 2)?;
        let first = self.first(true)?;
        let mut acc = f.neg(&f.mul(&f.add(&lower_sq, &upper_sq), &first));
        if k >= 1 {
            let mut inner = self.l.e(k - 1);
            if k >= 2 {
                inner = f.add(&inner, &self.coupling(k - 1, k - 2, 1)?);
            }
            acc = f.add(&acc, &f.mul(&lower_sq, &inner));
        }
        let inner = f.add(&self.l.e(k + 1), &self.coupling(k + 2, k + 2, 1)?);
        Ok(f.add(&acc, &f.mul(&upper_sq, &inner)))
    }
}

/// `D_k^[1],(m+1)` for `0 ≤ k ≤ m`.
pub fn first_order_coeff<F: Field>(spec: &RecurrenceSpec, k: usize, m: usize, field: &F) -> Result<F::Elem> {
    spec.require_nondegenerate()?;
    if k > m {
        return Err(HeunError::OutOfRange(format!("label k = {k} exceeds m = {m}")));
    }
    let l = spec.lift(field)?;
    Terms::new(&l, k).first(k < m)
}

/// `D_k^[2],(m+1)` for `0 ≤ k ≤ m − 2`; no closed form is available for the
/// two largest labels.
pub fn second_order_coeff<F: Field>(spec: &RecurrenceSpec, k: usize, m: usize, field: &F) -> Result<F::Elem> {
    spec.require_nondegenerate()?;
    if k + 2 > m {
        return Err(HeunError::OutOfRange(format!(
            "second-order coefficient needs k ≤ m − 2 (k = {k}, m = {m})"
        )));
    }
    let l = spec.lift(field)?;
    Terms::new(&l, k).second()
}

/// Expansion of the zero labelled `k` of `c_{m+1}` up to `order`.
pub fn expansion<F: Field>(
    spec: &RecurrenceSpec,
    k: usize,
    m: usize,
    order: u8,
    field: &F,
) -> Result<PerturbativeExpansion<F>> {
    check_order(order)?;
    spec.require_nondegenerate()?;
    if k > m {
        return Err(HeunError::OutOfRange(format!("label k = {k} exceeds m = {m}")));
    }
    let l = spec.lift(field)?;
    let c0 = field.neg(&l.d(k as i64));
    let c1 = if order >= 1 { Some(field.neg(&first_order_coeff(spec, k, m, field)?)) } else { None };
    let c2 = if order >= 2 { Some(field.neg(&second_order_coeff(spec, k, m, field)?)) } else { None };
    Ok(PerturbativeExpansion { k, m: Some(m), c0, c1, c2, order, field: field.clone() })
}

/// `−D_k − D_k^[1] s − D_k^[2] s²` truncated at `order`.
pub fn zero_estimate<F: Field>(
    spec: &RecurrenceSpec,
    k: usize,
    m: usize,
    order: u8,
    s: &F::Elem,
    field: &F,
) -> Result<F::Elem> {
    Ok(expansion(spec, k, m, order, field)?.evaluate(s))
}

/// Highest-order estimate available for label `k` of `c_{m+1}` (order 2 when
/// `k ≤ m − 2`, else order 1), capped at `max_order`.
pub fn best_estimate<F: Field>(
    spec: &RecurrenceSpec,
    k: usize,
    m: usize,
    max_order: u8,
    s: &F::Elem,
    field: &F,
) -> Result<F::Elem> {
    let order = if k + 2 <= m { max_order.min(2) } else { max_order.min(1) };
    zero_estimate(spec, k, m, order, s, field)
}

/// The Lamé-specific closed form (`γ = δ = ε = ½`, `{α, β} = {(n+1)/2, −n/2}`),
/// with separate expressions for `k = 0` and `k = 1`.
pub fn lame_expansion<F: Field>(n: &Scalar, k: usize, order: u8, field: &F) -> Result<PerturbativeExpansion<F>> {
    check_order(order)?;
    let f = field;
    let n = f.lift(n)?;
    let q = |a: i64, b: i64| f.div(&f.int(a), &f.int(b));
    let nn1 = f.mul(&n, &f.add(&n, &f.one()));
    let nn1_sq = f.mul(&nn1, &nn1);
    let kk = f.int((k * k) as i64);
    let (c1, c2) = match k {
        0 => (
            f.neg(&f.mul(&nn1, &q(1, 8))),
            f.add(&f.neg(&f.mul(&nn1, &q(1, 64))), &f.mul(&nn1_sq, &q(1, 128))),
        ),
        1 => (
            f.sub(&q(1, 2), &f.mul(&nn1, &q(1, 8))),
            f.sub(&f.sub(&q(3, 32), &f.mul(&nn1, &q(1, 128))), &f.mul(&nn1_sq, &q(5, 768))),
        ),
        _ => {
            let four_k2_m1 = f.int(4 * (k * k) as i64 - 1);
            (
                f.sub(&f.mul(&kk, &q(1, 2)), &f.mul(&nn1, &q(1, 8))),
                f.sub(
                    &f.sub(&f.mul(&kk, &q(3, 32)), &f.mul(&nn1, &q(1, 64))),
                    &f.div(&nn1_sq, &f.mul_int(&four_k2_m1, 128)),
                ),
            )
        }
    };
    Ok(PerturbativeExpansion {
        k,
        m: None,
        c0: f.neg(&kk),
        c1: (order >= 1).then_some(c1),
        c2: (order >= 2).then_some(c2),
        order,
        field: field.clone(),
    })
}

/// Closed form for the reduced confluent family with general `γ, δ`, valid
/// for `k ≥ 2`.
pub fn reduced_confluent_expansion<F: Field>(
    gamma: &Scalar,
    delta: &Scalar,
    k: usize,
    order: u8,
    field: &F,
) -> Result<PerturbativeExpansion<F>> {
    check_order(order)?;
    if k < 2 {
        return Err(HeunError::OutOfRange(format!("closed form needs k ≥ 2, got {k}")));
    }
    if gamma.add(delta).is_nonpositive_integer() {
        return Err(HeunError::Degenerate(gamma.add(delta).to_string()));
    }
    let f = field;
    let g = f.lift(gamma)?;
    let d = f.lift(delta)?;
    let q = |a: i64, b: i64| f.div(&f.int(a), &f.int(b));
    let sum = f.add(&g, &d);
    let ki = k as i64;
    let lin = |c: i64| f.add(&f.int(c), &sum);
    let u = lin(2 * ki - 2);
    let v = lin(2 * ki);
    let uv = f.mul(&u, &v);
    let diff = f.sub(&g, &d);
    let sum_m2 = f.sub(&sum, &f.int(2));
    let c0 = f.neg(&f.mul_int(&lin(ki - 1), ki));
    let cross = f.mul(&diff, &sum_m2);
    let c1 = f.add(&q(1, 2), &checked_div(f, &cross, &f.mul_int(&uv, 2))?);
    let gm1 = f.sub(&g, &f.one());
    let dm1 = f.sub(&d, &f.one());
    let sq = f.add(&f.mul(&gm1, &gm1), &f.mul(&dm1, &dm1));
    let cross_sq = f.mul(&cross, &cross);
    let uv2 = f.mul(&uv, &uv);
    let uv3 = f.mul(&uv2, &uv);
    let bracket = f.sub(
        &f.sub(
            &f.add(&q(-1, 8), &f.mul(&q(3, 4), &checked_div(f, &sq, &uv)?)),
            &f.mul(&q(5, 8), &checked_div(f, &cross_sq, &uv2)?),
        ),
        &f.mul(&q(3, 2), &checked_div(f, &cross_sq, &uv3)?),
    );
    let c2 = checked_div(f, &bracket, &f.mul(&lin(2 * ki - 3), &lin(2 * ki + 1)))?;
    Ok(PerturbativeExpansion {
        k,
        m: None,
        c0,
        c1: (order >= 1).then_some(c1),
        c2: (order >= 2).then_some(c2),
        order,
        field: field.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{from_lame, from_mathieu, LameParams, MathieuParams};
    use crate::scalar::{BigFloat, Exact, GaussRational};
    use rug::Complex;

    fn lame2() -> RecurrenceSpec {
        from_lame(&LameParams { n: Scalar::int(2), s: Scalar::int(0), eta: None }).unwrap().spec
    }

    fn mathieu() -> RecurrenceSpec {
        from_mathieu(&MathieuParams { a: Scalar::int(0), q: Scalar::int(0) }).unwrap().0
    }

    fn r(n: i64, d: i64) -> GaussRational {
        GaussRational::ratio(n, d)
    }

    fn close(z: &Complex, re: f64, im: f64, tol: f64) -> bool {
        (z.real().to_f64() - re).abs() < tol && (z.imag().to_f64() - im).abs() < tol
    }

    #[test]
    fn lame_first_order_interior() {
        assert_eq!(first_order_coeff(&lame2(), 2, 10, &Exact).unwrap(), r(-5, 4));
        let est = zero_estimate(&lame2(), 2, 10, 1, &r(1, 100), &Exact).unwrap();
        assert_eq!(est, r(-39875, 10000));
    }

    #[test]
    fn mathieu_first_order_is_minus_half() {
        for k in 1..8 {
            assert_eq!(first_order_coeff(&mathieu(), k, 12, &Exact).unwrap(), r(-1, 2), "k = {k}");
        }
    }

    #[test]
    fn mathieu_second_order() {
        assert_eq!(second_order_coeff(&mathieu(), 2, 10, &Exact).unwrap(), r(1, 120));
        assert_eq!(second_order_coeff(&mathieu(), 0, 10, &Exact).unwrap(), r(-1, 8));
        let est = zero_estimate(&mathieu(), 2, 10, 2, &GaussRational::from_int(2), &Exact).unwrap();
        assert_eq!(est, r(-91, 30));
    }

    #[test]
    fn lame_second_order() {
        assert_eq!(second_order_coeff(&lame2(), 3, 10, &Exact).unwrap(), r(-831, 1120));
        let est = zero_estimate(&lame2(), 0, 10, 2, &r(1, 100), &Exact).unwrap();
        assert_eq!(est, r(-748125, 100000000));
    }

    #[test]
    fn whittaker_hill_first_order() {
        let spec = RecurrenceSpec::confluent(
            Scalar::ratio(1, 2),
            Scalar::ratio(1, 2),
            Scalar::int(5),
            Scalar::ratio(-1, 100),
        )
        .unwrap();
        assert_eq!(first_order_coeff(&spec, 3, 10, &Exact).unwrap(), r(-5, 2));
        let est = zero_estimate(&spec, 2, 10, 1, &r(-1, 100), &Exact).unwrap();
        assert_eq!(est, r(-4025, 1000));
    }

    #[test]
    fn complex_s_estimate_in_float_field() {
        let field = BigFloat::new(128);
        let s = Complex::with_val(128, (0, 2));
        let z = zero_estimate(&mathieu(), 4, 10, 2, &s, &field).unwrap();
        assert!(close(&z, -15.99206349, 1.0, 5e-9));
    }

    #[test]
    fn order_zero_is_grid_point() {
        let est = zero_estimate(&lame2(), 5, 10, 0, &r(7, 3), &Exact).unwrap();
        assert_eq!(est, GaussRational::from_int(-25));
    }

    #[test]
    fn boundary_labels_rejected_at_second_order() {
        for k in [9, 10] {
            assert!(matches!(second_order_coeff(&lame2(), k, 10, &Exact), Err(HeunError::OutOfRange(_))));
        }
        assert!(first_order_coeff(&lame2(), 10, 10, &Exact).is_ok());
        assert!(first_order_coeff(&lame2(), 11, 10, &Exact).is_err());
        assert!(expansion(&lame2(), 1, 10, 3, &Exact).is_err());
    }

    #[test]
    fn degenerate_specs_rejected() {
        let spec = RecurrenceSpec::reduced_confluent(Scalar::ratio(1, 2), Scalar::ratio(-3, 2), Scalar::int(1))
            .unwrap();
        assert!(matches!(first_order_coeff(&spec, 1, 4, &Exact), Err(HeunError::Degenerate(_))));
        assert!(matches!(second_order_coeff(&spec, 1, 4, &Exact), Err(HeunError::Degenerate(_))));
    }

    #[test]
    fn lame_closed_form_values() {
        let e = lame_expansion(&Scalar::int(2), 0, 2, &Exact).unwrap();
        assert_eq!(e.coefficients(), [GaussRational::zero(), r(-3, 4), r(3, 16)]);
        let e = lame_expansion(&Scalar::int(2), 2, 2, &Exact).unwrap();
        assert_eq!(e.evaluate(&r(1, 2)), r(-3309375, 1000000));
        let e = lame_expansion(&Scalar::int(0), 6, 1, &Exact).unwrap();
        assert_eq!(e.c1, Some(r(18, 1)));
    }

    #[test]
    fn reduced_confluent_closed_form_values() {
        let half = Scalar::ratio(1, 2);
        let e = reduced_confluent_expansion(&half, &half, 3, 2, &Exact).unwrap();
        assert_eq!(e.coefficients(), [GaussRational::from_int(-9), r(1, 2), r(-1, 280)]);
        for k in 2..10 {
            let e = reduced_confluent_expansion(&Scalar::ratio(2, 3), &Scalar::ratio(2, 3), k, 1, &Exact).unwrap();
            assert_eq!(e.c1, Some(r(1, 2)));
        }
        assert!(reduced_confluent_expansion(&half, &half, 1, 2, &Exact).is_err());
    }

    #[test]
    fn reduced_confluent_closed_form_matches_generic() {
        let (g, d) = (Scalar::ratio(3, 2), Scalar::ratio(1, 2));
        let spec = RecurrenceSpec::reduced_confluent(g.clone(), d.clone(), Scalar::int(0)).unwrap();
        let closed = reduced_confluent_expansion(&g, &d, 2, 2, &Exact).unwrap();
        let generic = expansion(&spec, 2, 4, 2, &Exact).unwrap();
        assert_eq!(closed.coefficients(), generic.coefficients());
    }
}
