//! The three Heun-class families and their named specializations, expressed as
//! parameter sets for the common three-term recurrence
//!
//! ```text
//! (m+1)(m+γ) c_{m+1} = (B + D_m + s E_m) c_m − s F_m c_{m−1}
//! ```
//!
//! with `D_m = m(m−1+γ+δ)` for every family and `(E_m, F_m)` depending on the
//! family.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HeunError, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Heun's equation with `q = B t`, `t = 1/s`.
    Heun,
    /// Singly confluent Heun equation with `4p = −s`, `σ = −B`.
    ConfluentHeun,
    /// Reduced singly confluent Heun equation with `t = s`, `λ = B`.
    ReducedConfluentHeun,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Heun => "heun",
            FamilyKind::ConfluentHeun => "cheun",
            FamilyKind::ReducedConfluentHeun => "rcheun",
        })
    }
}

/// An equation family together with its parameters.
///
/// `epsilon` is always derived from `α + β + 1 − γ − δ` for the Heun family;
/// `alpha`/`beta` are zero where the family does not use them.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceSpec {
    kind: FamilyKind,
    gamma: Scalar,
    delta: Scalar,
    epsilon: Scalar,
    alpha: Scalar,
    beta: Scalar,
    s: Scalar,
}

impl RecurrenceSpec {
    pub fn heun(gamma: Scalar, delta: Scalar, alpha: Scalar, beta: Scalar, s: Scalar) -> Result<Self> {
        let epsilon = alpha.add(&beta).add(&Scalar::int(1)).sub(&gamma).sub(&delta);
        Self::validated(FamilyKind::Heun, gamma, delta, epsilon, alpha, beta, s)
    }

    pub fn confluent(gamma: Scalar, delta: Scalar, alpha: Scalar, s: Scalar) -> Result<Self> {
        Self::validated(FamilyKind::ConfluentHeun, gamma, delta, Scalar::int(0), alpha, Scalar::int(0), s)
    }

    pub fn reduced_confluent(gamma: Scalar, delta: Scalar, s: Scalar) -> Result<Self> {
        Self::validated(
            FamilyKind::ReducedConfluentHeun,
            gamma,
            delta,
            Scalar::int(0),
            Scalar::int(0),
            Scalar::int(0),
            s,
        )
    }

    fn validated(
        kind: FamilyKind,
        gamma: Scalar,
        delta: Scalar,
        epsilon: Scalar,
        alpha: Scalar,
        beta: Scalar,
        s: Scalar,
    ) -> Result<Self> {
        if gamma.is_nonpositive_integer() {
            return Err(HeunError::InvalidParameter(format!(
                "gamma = {gamma} is a nonpositive integer; the recurrence denominator vanishes"
            )));
        }
        Ok(RecurrenceSpec { kind, gamma, delta, epsilon, alpha, beta, s })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn gamma(&self) -> &Scalar {
        &self.gamma
    }

    pub fn delta(&self) -> &Scalar {
        &self.delta
    }

    pub fn epsilon(&self) -> &Scalar {
        &self.epsilon
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn s(&self) -> &Scalar {
        &self.s
    }

    /// Same equation at another value of the deformation parameter.
    pub fn with_s(&self, s: Scalar) -> Self {
        RecurrenceSpec { s, ..self.clone() }
    }

    /// True when every parameter is a Gaussian rational.
    pub fn is_exact(&self) -> bool {
        [&self.gamma, &self.delta, &self.epsilon, &self.alpha, &self.beta, &self.s]
            .iter()
            .all(|p| p.is_exact())
    }

    /// `γ + δ ∈ {0, −1, −2, …}`, in which case some `D_j` coincide.
    pub fn is_d_degenerate(&self) -> bool {
        self.gamma.add(&self.delta).is_nonpositive_integer()
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<()> {
        if self.is_d_degenerate() {
            Err(HeunError::Degenerate(self.gamma.add(&self.delta).to_string()))
        } else {
            Ok(())
        }
    }

    /// `ε − (α + β + 1 − γ − δ)`; identically zero for specs built here.
    pub fn heun_constraint_residual(&self) -> Scalar {
        if self.kind != FamilyKind::Heun {
            return Scalar::int(0);
        }
        self.epsilon
            .sub(&self.alpha.add(&self.beta).add(&Scalar::int(1)).sub(&self.gamma).sub(&self.delta))
    }

    pub(crate) fn lift<F: Field>(&self, field: &F) -> Result<LiftedSpec<F>> {
        Ok(LiftedSpec {
            kind: self.kind,
            gamma: field.lift(&self.gamma)?,
            delta: field.lift(&self.delta)?,
            epsilon: field.lift(&self.epsilon)?,
            alpha: field.lift(&self.alpha)?,
            beta: field.lift(&self.beta)?,
            s: field.lift(&self.s)?,
            field: field.clone(),
        })
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} gamma={} delta={}", self.kind, self.gamma, self.delta)?;
        match self.kind {
            FamilyKind::Heun => write!(f, " alpha={} beta={} epsilon={}", self.alpha, self.beta, self.epsilon)?,
            FamilyKind::ConfluentHeun => write!(f, " alpha={}", self.alpha)?,
            FamilyKind::ReducedConfluentHeun => {}
        }
        write!(f, " s={}", self.s)
    }
}

/// Spec parameters lifted into a field, with the recurrence sequences.
#[derive(Clone, Debug)]
pub(crate) struct LiftedSpec<F: Field> {
    pub kind: FamilyKind,
    pub gamma: F::Elem,
    pub delta: F::Elem,
    pub epsilon: F::Elem,
    pub alpha: F::Elem,
    pub beta: F::Elem,
    pub s: F::Elem,
    pub field: F,
}

impl<F: Field> LiftedSpec<F> {
    /// `m(m − 1 + x)` for integer `m` (may be negative).
    fn quadratic(&self, m: i64, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        f.mul_int(&f.add(&f.int(m - 1), x), m)
    }

    pub fn d(&self, m: i64) -> F::Elem {
        let f = &self.field;
        self.quadratic(m, &f.add(&self.gamma, &self.delta))
    }

    pub fn e(&self, m: i64) -> F::Elem {
        let f = &self.field;
        match self.kind {
            FamilyKind::Heun => self.quadratic(m, &f.add(&self.gamma, &self.epsilon)),
            FamilyKind::ConfluentHeun => f.int(m),
            FamilyKind::ReducedConfluentHeun => f.zero(),
        }
    }

    pub fn f(&self, m: i64) -> F::Elem {
        let f = &self.field;
        match self.kind {
            FamilyKind::Heun => {
                let a = f.add(&f.int(m - 1), &self.alpha);
                let b = f.add(&f.int(m - 1), &self.beta);
                f.mul(&a, &b)
            }
            FamilyKind::ConfluentHeun => f.add(&f.int(m - 1), &self.alpha),
            FamilyKind::ReducedConfluentHeun => f.one(),
        }
    }

    /// `m(m − 1 + γ)`; the recurrence divides by `g(m + 1) = (m+1)(m+γ)`.
    pub fn g(&self, m: i64) -> F::Elem {
        self.quadratic(m, &self.gamma)
    }
}

/// `(D_m, E_m, F_m)` for the given spec in the requested field.
pub fn recurrence_coeffs<F: Field>(spec: &RecurrenceSpec, m: u32, field: &F) -> Result<(F::Elem, F::Elem, F::Elem)> {
    let l = spec.lift(field)?;
    let m = i64::from(m);
    Ok((l.d(m), l.e(m), l.f(m)))
}

/// Lamé equation in algebraic form:
/// `w'' + ½(1/z + 1/(z−1) + 1/(z−t)) w' + (η − n(n+1)z) / (4z(z−1)(z−t)) w = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LameParams {
    pub n: Scalar,
    pub s: Scalar,
    /// Classical accessory parameter; converted to `B = −η s / 4` when given.
    pub eta: Option<Scalar>,
}

/// The affine correspondence `B = −η s / 4` between the Lamé accessory
/// parameter and `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct LameAccessoryMap {
    s: Scalar,
}

impl LameAccessoryMap {
    pub fn b_of_eta(&self, eta: &Scalar) -> Scalar {
        eta.mul(&self.s).div(&Scalar::int(-4)).expect("nonzero constant")
    }

    pub fn eta_of_b(&self, b: &Scalar) -> Result<Scalar> {
        if self.s.is_zero() {
            return Err(HeunError::InvalidParameter("eta is undefined at s = 0".into()));
        }
        b.mul(&Scalar::int(-4)).div(&self.s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LameSetup {
    pub spec: RecurrenceSpec,
    pub map: LameAccessoryMap,
    /// `B` corresponding to the supplied `η`, if any.
    pub b: Option<Scalar>,
}

pub fn from_lame(p: &LameParams) -> Result<LameSetup> {
    let half = Scalar::ratio(1, 2);
    let alpha = p.n.add(&Scalar::int(1)).mul(&half);
    let beta = p.n.mul(&Scalar::ratio(-1, 2));
    let spec = RecurrenceSpec::heun(half.clone(), half, alpha, beta, p.s.clone())?;
    let map = LameAccessoryMap { s: p.s.clone() };
    let b = match &p.eta {
        Some(eta) => {
            if p.s.is_zero() {
                return Err(HeunError::InvalidParameter("s = 0 cannot be combined with eta".into()));
            }
            Some(map.b_of_eta(eta))
        }
        None => None,
    };
    Ok(LameSetup { spec, map, b })
}

/// Mathieu equation `y'' + (a − 2q cos 2x) y = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MathieuParams {
    pub a: Scalar,
    pub q: Scalar,
}

/// Reduced confluent spec with `γ = δ = ½`, `s = q`, and `B = q/2 − a/4`.
pub fn from_mathieu(p: &MathieuParams) -> Result<(RecurrenceSpec, Scalar)> {
    let half = Scalar::ratio(1, 2);
    let spec = RecurrenceSpec::reduced_confluent(half.clone(), half.clone(), p.q.clone())?;
    let b = p.q.mul(&half).sub(&p.a.mul(&Scalar::ratio(1, 4)));
    Ok((spec, b))
}

/// Inverse of the Mathieu map: `a = 2q − 4B`.
pub fn mathieu_a_of_b(q: &Scalar, b: &Scalar) -> Scalar {
    q.mul(&Scalar::int(2)).sub(&b.mul(&Scalar::int(4)))
}

/// Whittaker–Hill equation `y'' + (A₀ + A₁ cos 2x + A₂ cos 4x) y = 0` with the
/// gauge `w = y e^{hz}`, `A₂ = h²/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhittakerHillParams {
    pub a0: Scalar,
    pub a1: Scalar,
    pub h: Scalar,
}

impl WhittakerHillParams {
    pub fn a2(&self) -> Scalar {
        self.h.mul(&self.h).mul(&Scalar::ratio(1, 2))
    }

    /// Gauge parameters producing the confluent spec with the given `α` and `s`
    /// (`h = −s/2`, `A₁ = 4h(α − ½)`); `A₀` is left to the caller.
    pub fn from_alpha_s(alpha: &Scalar, s: &Scalar, a0: Scalar) -> Result<Self> {
        if s.is_zero() {
            return Err(HeunError::InvalidParameter("s = 0 gives h = 0".into()));
        }
        let h = s.mul(&Scalar::ratio(-1, 2));
        let a1 = h.mul(&Scalar::int(4)).mul(&alpha.sub(&Scalar::ratio(1, 2)));
        Ok(WhittakerHillParams { a0, a1, h })
    }
}

/// Confluent spec with `γ = δ = ½`, `s = −2h`, `α = ½ + A₁/(4h)` and
/// `B = −(2A₀ + 2A₁ + 4h + h²)/8`.
pub fn from_whittaker_hill(p: &WhittakerHillParams) -> Result<(RecurrenceSpec, Scalar)> {
    if p.h.is_zero() {
        return Err(HeunError::InvalidParameter("gauge parameter h must be nonzero".into()));
    }
    let half = Scalar::ratio(1, 2);
    let s = p.h.mul(&Scalar::int(-2));
    let alpha = half.add(&p.a1.div(&p.h.mul(&Scalar::int(4)))?);
    let spec = RecurrenceSpec::confluent(half.clone(), half, alpha, s)?;
    let two = Scalar::int(2);
    let b = p
        .a0
        .mul(&two)
        .add(&p.a1.mul(&two))
        .add(&p.h.mul(&Scalar::int(4)))
        .add(&p.h.mul(&p.h))
        .div(&Scalar::int(-8))?;
    Ok((spec, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, GaussRational};

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn ex(x: &GaussRational) -> Scalar {
        Scalar::Exact(x.clone())
    }

    #[test]
    fn lame_n2_coefficients() {
        let setup = from_lame(&LameParams { n: Scalar::int(2), s: q(1, 100), eta: None }).unwrap();
        let (d, e, f) = recurrence_coeffs(&setup.spec, 1, &Exact).unwrap();
        assert_eq!(ex(&d), Scalar::int(1));
        assert_eq!(ex(&e), Scalar::int(1));
        assert_eq!(ex(&f), q(-3, 2));
        assert_eq!(setup.spec.heun_constraint_residual(), Scalar::int(0));
        assert_eq!(setup.spec.epsilon(), &q(1, 2));
    }

    #[test]
    fn lame_closed_forms_up_to_50() {
        for n in [0i64, 1, 2, 5] {
            let setup = from_lame(&LameParams { n: Scalar::int(n), s: q(1, 100), eta: None }).unwrap();
            for m in 0..=50u32 {
                let (d, e, f) = recurrence_coeffs(&setup.spec, m, &Exact).unwrap();
                let mi = i64::from(m);
                assert_eq!(d, GaussRational::from_int(mi * mi));
                assert_eq!(e, GaussRational::from_int(mi * mi));
                assert_eq!(f, GaussRational::ratio((2 * mi + n - 1) * (2 * mi - n - 2), 4));
            }
        }
    }

    #[test]
    fn lame_n0_has_vanishing_f1() {
        let setup = from_lame(&LameParams { n: Scalar::int(0), s: q(1, 3), eta: None }).unwrap();
        let (_, _, f) = recurrence_coeffs(&setup.spec, 1, &Exact).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn reduced_confluent_coefficients() {
        let spec = RecurrenceSpec::reduced_confluent(q(1, 3), q(2, 5), Scalar::int(7)).unwrap();
        let (d, e, f) = recurrence_coeffs(&spec, 7, &Exact).unwrap();
        // 7(6 + 1/3 + 2/5)
        assert_eq!(d, GaussRational::ratio(7 * (90 + 5 + 6), 15));
        assert!(e.is_zero());
        assert_eq!(f, GaussRational::one());
    }

    #[test]
    fn index_zero_is_zero() {
        let specs = [
            RecurrenceSpec::heun(q(1, 3), q(1, 5), q(2, 7), q(-1, 2), q(1, 9)).unwrap(),
            RecurrenceSpec::confluent(q(1, 3), q(1, 5), q(2, 7), q(1, 9)).unwrap(),
            RecurrenceSpec::reduced_confluent(q(1, 3), q(1, 5), q(1, 9)).unwrap(),
        ];
        for spec in &specs {
            let (d, e, _) = recurrence_coeffs(spec, 0, &Exact).unwrap();
            assert!(d.is_zero() && e.is_zero(), "{spec}");
        }
    }

    #[test]
    fn confluent_coefficients() {
        let spec = RecurrenceSpec::confluent(q(1, 2), q(1, 2), Scalar::int(5), q(-1, 100)).unwrap();
        let (d, e, f) = recurrence_coeffs(&spec, 3, &Exact).unwrap();
        assert_eq!(d, GaussRational::from_int(9));
        assert_eq!(e, GaussRational::from_int(3));
        assert_eq!(f, GaussRational::from_int(7));
    }

    #[test]
    fn rejects_nonpositive_integer_gamma() {
        for g in [0, -1, -4] {
            let err = RecurrenceSpec::reduced_confluent(Scalar::int(g), q(1, 2), Scalar::int(1)).unwrap_err();
            assert!(matches!(err, HeunError::InvalidParameter(_)));
        }
        assert!(RecurrenceSpec::reduced_confluent(Scalar::int(1), q(1, 2), Scalar::int(1)).is_ok());
    }

    #[test]
    fn degeneracy_flag_matches_coinciding_d() {
        for (g, d) in [(q(1, 2), q(-5, 2)), (q(1, 2), q(1, 2)), (q(3, 2), q(-3, 2)), (q(1, 3), q(1, 3))] {
            let spec = RecurrenceSpec::reduced_confluent(g, d, Scalar::int(0)).unwrap();
            let l = spec.lift(&Exact).unwrap();
            let ds: Vec<_> = (0..12).map(|m| l.d(m)).collect();
            let coincide = (0..ds.len()).any(|i| (i + 1..ds.len()).any(|j| ds[i] == ds[j]));
            assert_eq!(spec.is_d_degenerate(), coincide, "{spec}");
        }
    }

    #[test]
    fn lame_eta_map() {
        let setup = from_lame(&LameParams { n: Scalar::int(2), s: q(1, 2), eta: Some(Scalar::int(8)) }).unwrap();
        assert_eq!(setup.b, Some(Scalar::int(-1)));
        assert_eq!(setup.map.eta_of_b(&Scalar::int(-1)).unwrap(), Scalar::int(8));
        let err = from_lame(&LameParams { n: Scalar::int(2), s: Scalar::int(0), eta: Some(Scalar::int(1)) });
        assert!(err.is_err());
    }

    #[test]
    fn mathieu_map() {
        let (_, b) = from_mathieu(&MathieuParams { a: Scalar::int(0), q: Scalar::int(2) }).unwrap();
        assert_eq!(b, Scalar::int(1));
        let two_i = Scalar::Exact(GaussRational::new(0, 2));
        let (spec, b) = from_mathieu(&MathieuParams { a: Scalar::int(0), q: two_i.clone() }).unwrap();
        assert_eq!(spec.s(), &two_i);
        assert_eq!(b, Scalar::Exact(GaussRational::i()));
        let (_, b) = from_mathieu(&MathieuParams { a: Scalar::int(4), q: Scalar::int(0) }).unwrap();
        assert_eq!(b, Scalar::int(-1));
        assert_eq!(mathieu_a_of_b(&Scalar::int(0), &b), Scalar::int(4));
    }

    #[test]
    fn whittaker_hill_inversion() {
        let p = WhittakerHillParams::from_alpha_s(&Scalar::int(5), &q(-1, 100), Scalar::int(0)).unwrap();
        assert_eq!(p.h, q(1, 200));
        assert_eq!(p.a1, q(9, 100));
        let (spec, _) = from_whittaker_hill(&p).unwrap();
        assert_eq!(spec.alpha(), &Scalar::int(5));
        assert_eq!(spec.s(), &q(-1, 100));

        let p = WhittakerHillParams::from_alpha_s(&Scalar::int(5), &Scalar::int(-20), Scalar::int(0)).unwrap();
        assert_eq!(p.h, Scalar::int(10));
        assert_eq!(p.a1, Scalar::int(180));
        assert_eq!(p.a2(), Scalar::int(50));
    }

    #[test]
    fn whittaker_hill_forward_map() {
        let p = WhittakerHillParams { a0: Scalar::int(3), a1: Scalar::int(0), h: q(1, 4) };
        let (spec, b) = from_whittaker_hill(&p).unwrap();
        assert_eq!(spec.alpha(), &q(1, 2));
        assert_eq!(spec.s(), &q(-1, 2));
        // −(6 + 0 + 1 + 1/16)/8
        assert_eq!(b, q(-113, 128));
        let zero_h = WhittakerHillParams { a0: Scalar::int(1), a1: Scalar::int(1), h: Scalar::int(0) };
        assert!(from_whittaker_hill(&zero_h).is_err());
    }
}
