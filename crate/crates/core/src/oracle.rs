//! Independent checks built directly on the differential equations.
//!
//! Nothing here steps the `D, E, F` recurrence. Each family is written in
//! polynomial form `P(z) y'' + Q(z) y' + R(z) y = 0`:
//!
//! ```text
//! Heun             P = z(z−1)(1−sz)
//!                  Q = γ(z−1)(1−sz) + δz(1−sz) − sεz(z−1)
//!                  R = B − sαβz
//! confluent        P = z(z−1),  Q = −sz(z−1) + γ(z−1) + δz,  R = B − sαz
//! reduced          P = z(z−1),  Q = γ(z−1) + δz,              R = B − sz
//! ```
//!
//! and Frobenius series are generated from these coefficients at `z = 0`
//! and, with `x = 1 − z` (so `P̃(x) = P(1−x)`, `Q̃ = −Q(1−x)`,
//! `R̃ = R(1−x)`), at `z = 1`. Coefficients are truncated power series in
//! `s`, so the same code either evaluates at a fixed `s` (length-1 series)
//! or treats `s` as an indeterminate.

use rug::{Complex, Float};

use crate::error::{HeunError, Result};
use crate::families::{FamilyKind, RecurrenceSpec};
use crate::scalar::{abs_f64, BigFloat, Exact, Field, GaussRational, Scalar};

/// Where a local solution is anchored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    /// Holomorphic at `z = 0`.
    Origin,
    /// Holomorphic at `z = 1`.
    One,
    /// `(1−z)^{1−δ}` times a series at `z = 1`.
    OneSingular,
}

/// `x^ρ Σ a_n x^n` with `x = z` or `x = 1 − z`.
#[derive(Clone, Debug)]
pub struct SeriesSolution<F: Field> {
    pub anchor: Anchor,
    pub exponent: F::Elem,
    pub coefficients: Vec<F::Elem>,
    pub truncation: usize,
}

/// Truncated series arithmetic in `s`.
struct Ring<'a, F: Field> {
    f: &'a F,
    len: usize,
}

type Ser<F> = Vec<<F as Field>::Elem>;

impl<'a, F: Field> Ring<'a, F> {
    fn constant(&self, c: F::Elem) -> Ser<F> {
        let mut v = vec![self.f.zero(); self.len];
        v[0] = c;
        v
    }

    fn zero(&self) -> Ser<F> {
        vec![self.f.zero(); self.len]
    }

    fn add(&self, a: &Ser<F>, b: &Ser<F>) -> Ser<F> {
        a.iter().zip(b).map(|(x, y)| self.f.add(x, y)).collect()
    }

    fn sub(&self, a: &Ser<F>, b: &Ser<F>) -> Ser<F> {
        a.iter().zip(b).map(|(x, y)| self.f.sub(x, y)).collect()
    }

    fn scale(&self, a: &Ser<F>, c: &F::Elem) -> Ser<F> {
        a.iter().map(|x| self.f.mul(x, c)).collect()
    }

    fn mul(&self, a: &Ser<F>, b: &Ser<F>) -> Ser<F> {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if self.f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(self.len - i) {
                out[i + j] = self.f.add(&out[i + j], &self.f.mul(x, y));
            }
        }
        out
    }

    fn div(&self, a: &Ser<F>, b: &Ser<F>) -> Result<Ser<F>> {
        if self.f.is_zero(&b[0]) {
            return Err(HeunError::Degenerate("vanishing indicial factor".into()));
        }
        let mut q = self.zero();
        for n in 0..self.len {
            let mut acc = a[n].clone();
            for j in 1..=n {
                acc = self.f.sub(&acc, &self.f.mul(&b[j], &q[n - j]));
            }
            q[n] = self.f.div(&acc, &b[0]);
        }
        Ok(q)
    }
}

/// Coefficient lists (lowest power first) of `P, Q, R` in the local variable.
struct Ode<F: Field> {
    p: Vec<Ser<F>>,
    q: Vec<Ser<F>>,
    r: Vec<Ser<F>>,
}

struct Params<F: Field> {
    kind: FamilyKind,
    gamma: F::Elem,
    delta: F::Elem,
    epsilon: F::Elem,
    alpha: F::Elem,
    beta: F::Elem,
}

fn params<F: Field>(spec: &RecurrenceSpec, f: &F) -> Result<Params<F>> {
    Ok(Params {
        kind: spec.kind(),
        gamma: f.lift(spec.gamma())?,
        delta: f.lift(spec.delta())?,
        epsilon: f.lift(spec.epsilon())?,
        alpha: f.lift(spec.alpha())?,
        beta: f.lift(spec.beta())?,
    })
}

fn ode_at_origin<F: Field>(ring: &Ring<F>, p: &Params<F>, s: &Ser<F>, b: &Ser<F>) -> Ode<F> {
    let f = ring.f;
    let one = ring.constant(f.one());
    let c = |x: &F::Elem| ring.constant(x.clone());
    let neg = |x: &Ser<F>| ring.sub(&ring.zero(), x);
    let (g, d) = (c(&p.gamma), c(&p.delta));
    match p.kind {
        FamilyKind::Heun => {
            let e = c(&p.epsilon);
            let gs = ring.mul(&g, s);
            let ds = ring.mul(&d, s);
            let es = ring.mul(&e, s);
            Ode {
                p: vec![ring.zero(), neg(&one), ring.add(&one, s), neg(s)],
                q: vec![
                    neg(&g),
                    ring.add(&ring.add(&ring.add(&g, &gs), &d), &es),
                    neg(&ring.add(&ring.add(&gs, &ds), &es)),
                ],
                r: vec![b.clone(), neg(&ring.scale(s, &f.mul(&p.alpha, &p.beta)))],
            }
        }
        FamilyKind::ConfluentHeun => Ode {
            p: vec![ring.zero(), neg(&one), one.clone()],
            q: vec![neg(&g), ring.add(&ring.add(s, &g), &d), neg(s)],
            r: vec![b.clone(), neg(&ring.scale(s, &p.alpha))],
        },
        FamilyKind::ReducedConfluentHeun => Ode {
            p: vec![ring.zero(), neg(&one), one.clone()],
            q: vec![neg(&g), ring.add(&g, &d)],
            r: vec![b.clone(), neg(s)],
        },
    }
}

/// `c(1 − x)` for a polynomial `c` with series coefficients.
fn reflect<F: Field>(ring: &Ring<F>, c: &[Ser<F>], sign: i64) -> Vec<Ser<F>> {
    let f = ring.f;
    let mut out = vec![ring.zero(); c.len()];
    for (i, ci) in c.iter().enumerate() {
        let mut binom: i64 = 1;
        for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
            let coeff = if j % 2 == 0 { binom } else { -binom } * sign;
            *slot = ring.add(slot, &ring.scale(ci, &f.int(coeff)));
            binom = binom * (i - j) as i64 / (j + 1) as i64;
        }
    }
    out
}

fn ode_at_one<F: Field>(ring: &Ring<F>, ode: &Ode<F>) -> Ode<F> {
    Ode { p: reflect(ring, &ode.p, 1), q: reflect(ring, &ode.q, -1), r: reflect(ring, &ode.r, 1) }
}

fn at<F: Field>(ring: &Ring<F>, v: &[Ser<F>], i: i64) -> Ser<F> {
    if i < 0 {
        return ring.zero();
    }
    v.get(i as usize).cloned().unwrap_or_else(|| ring.zero())
}

/// `a_0 = 1` and, for `N ≥ 1`,
/// `a_N [p_1 (N+ρ)(N+ρ−1) + q_0 (N+ρ)] = −Σ_{n<N} a_n [p_{N−n+1}(n+ρ)(n+ρ−1) + q_{N−n}(n+ρ) + r_{N−n−1}]`.
fn frobenius<F: Field>(ring: &Ring<F>, ode: &Ode<F>, rho: &F::Elem, n_terms: usize) -> Result<Vec<Ser<F>>> {
    let f = ring.f;
    let span = ode.p.len().max(ode.q.len()).max(ode.r.len()) as i64;
    let mut a: Vec<Ser<F>> = vec![ring.constant(f.one())];
    for n in 1..n_terms as i64 {
        let nr = f.add(&f.int(n), rho);
        let nr1 = f.sub(&nr, &f.one());
        let denom = ring.add(&ring.scale(&at(ring, &ode.p, 1), &f.mul(&nr, &nr1)), &ring.scale(&at(ring, &ode.q, 0), &nr));
        let mut acc = ring.zero();
        for j in (n - span).max(0)..n {
            let jr = f.add(&f.int(j), rho);
            let jr1 = f.sub(&jr, &f.one());
            let w = ring.add(
                &ring.add(&ring.scale(&at(ring, &ode.p, n - j + 1), &f.mul(&jr, &jr1)), &ring.scale(&at(ring, &ode.q, n - j), &jr)),
                &at(ring, &ode.r, n - j - 1),
            );
            acc = ring.add(&acc, &ring.mul(&a[j as usize], &w));
        }
        let next = ring.div(&ring.sub(&ring.zero(), &acc), &denom)?;
        a.push(next);
    }
    Ok(a)
}

fn numeric_setup<'a, F: Field>(spec: &RecurrenceSpec, b: &F::Elem, f: &'a F) -> Result<(Ring<'a, F>, Ode<F>)> {
    let ring = Ring { f, len: 1 };
    let p = params(spec, f)?;
    let s = ring.constant(f.lift(spec.s())?);
    let ode = ode_at_origin(&ring, &p, &s, &ring.constant(b.clone()));
    Ok((ring, ode))
}

fn unwrap_numeric<F: Field>(a: Vec<Ser<F>>) -> Vec<F::Elem> {
    a.into_iter().map(|mut s| s.swap_remove(0)).collect()
}

/// The series of the solution holomorphic at `z = 0`, `c_0 = 1`.
pub fn holomorphic_at_origin<F: Field>(spec: &RecurrenceSpec, b: &F::Elem, n: usize, f: &F) -> Result<SeriesSolution<F>> {
    let (ring, ode) = numeric_setup(spec, b, f)?;
    let coefficients = unwrap_numeric::<F>(frobenius(&ring, &ode, &f.zero(), n + 1)?);
    Ok(SeriesSolution { anchor: Anchor::Origin, exponent: f.zero(), coefficients, truncation: n })
}

/// The two local solutions at `z = 1`: holomorphic (`c″`) and with exponent
/// `1 − δ` (`c‴`), both normalized to leading coefficient 1.
pub fn local_solutions_at_1<F: Field>(
    spec: &RecurrenceSpec,
    b: &F::Elem,
    n: usize,
    f: &F,
) -> Result<(SeriesSolution<F>, SeriesSolution<F>)> {
    if spec.delta().is_integer() {
        return Err(HeunError::InvalidParameter(format!("delta = {} is an integer", spec.delta())));
    }
    let (ring, ode0) = numeric_setup(spec, b, f)?;
    let ode = ode_at_one(&ring, &ode0);
    let rho = f.sub(&f.one(), &f.lift(spec.delta())?);
    let y1 = unwrap_numeric::<F>(frobenius(&ring, &ode, &f.zero(), n + 1)?);
    let y2 = unwrap_numeric::<F>(frobenius(&ring, &ode, &rho, n + 1)?);
    Ok((
        SeriesSolution { anchor: Anchor::One, exponent: f.zero(), coefficients: y1, truncation: n },
        SeriesSolution { anchor: Anchor::OneSingular, exponent: rho, coefficients: y2, truncation: n },
    ))
}

/// `(Σ a_n x^n, Σ n a_n x^{n−1}, Σ n(n−1) a_n x^{n−2})` by Horner.
fn sum_with_derivatives(coeffs: &[Complex], x: &Complex, prec: u32) -> [Complex; 3] {
    let mut v = Complex::new(prec);
    let mut d1 = Complex::new(prec);
    let mut d2 = Complex::new(prec);
    for c in coeffs.iter().rev() {
        d2 = Complex::with_val(prec, &d2 * x) + Complex::with_val(prec, &d1 * 2u32);
        d1 = Complex::with_val(prec, &d1 * x) + &v;
        v = Complex::with_val(prec, &v * x) + c;
    }
    [v, d1, d2]
}

/// `(y, y', y'')` of a series solution at `z`, derivatives taken in `z`.
fn evaluate_solution(sol: &SeriesSolution<BigFloat>, z: &Complex, prec: u32) -> [Complex; 3] {
    let x = match sol.anchor {
        Anchor::Origin => Complex::with_val(prec, z),
        Anchor::One | Anchor::OneSingular => Complex::with_val(prec, 1 - z),
    };
    let [u, du, ddu] = sum_with_derivatives(&sol.coefficients, &x, prec);
    let (v, dv, ddv) = if sol.exponent.is_zero() {
        (u, du, ddu)
    } else {
        // x^ρ u: (x^ρ u)' = x^ρ (u' + ρ u / x), (x^ρ u)'' = x^ρ (u'' + 2ρ u'/x + ρ(ρ−1) u / x²)
        let rho = &sol.exponent;
        let xr = Complex::with_val(prec, x.ln_ref()) * rho;
        let xr = xr.exp();
        let inv = Complex::with_val(prec, x.recip_ref());
        let rho_u_x = Complex::with_val(prec, rho * &u) * &inv;
        let d1 = Complex::with_val(prec, &du + &rho_u_x);
        let rr1 = Complex::with_val(prec, rho * Complex::with_val(prec, rho - 1u32));
        let t2 = Complex::with_val(prec, &du * rho) * &inv * 2u32;
        let t3 = Complex::with_val(prec, &rr1 * &u) * Complex::with_val(prec, inv.square_ref());
        let d2 = Complex::with_val(prec, &ddu + &t2) + t3;
        (
            Complex::with_val(prec, &xr * &u),
            Complex::with_val(prec, &xr * &d1),
            Complex::with_val(prec, &xr * &d2),
        )
    };
    match sol.anchor {
        Anchor::Origin => [v, dv, ddv],
        _ => [v, Complex::with_val(prec, -dv), ddv],
    }
}

/// `P y'' + Q y' + R y` at `z` in the original variable.
fn ode_lhs(spec: &RecurrenceSpec, b: &Complex, y: &[Complex; 3], z: &Complex, prec: u32) -> Result<Complex> {
    let f = BigFloat::new(prec);
    let (_, ode) = numeric_setup(spec, b, &f)?;
    let poly = |c: &[Ser<BigFloat>]| {
        c.iter().rev().fold(Complex::new(prec), |acc, k| Complex::with_val(prec, &acc * z) + &k[0])
    };
    let p = poly(&ode.p);
    let q = poly(&ode.q);
    let r = poly(&ode.r);
    Ok(Complex::with_val(prec, &p * &y[2]) + Complex::with_val(prec, &q * &y[1]) + Complex::with_val(prec, &r * &y[0]))
}

fn convergence_radius(spec: &RecurrenceSpec) -> f64 {
    match spec.kind() {
        FamilyKind::Heun => {
            let s = abs_f64(&spec.s().to_complex(64));
            if s > 1.0 {
                1.0 / s
            } else {
                1.0
            }
        }
        _ => 1.0,
    }
}

/// Largest `|P y'' + Q y' + R y|` over the samples, for the truncated series
/// `Σ coeffs[k] z^k`.
pub fn ode_residual(
    spec: &RecurrenceSpec,
    b: &Complex,
    coeffs: &[Complex],
    z_samples: &[Complex],
    prec: u32,
) -> Result<f64> {
    let radius = convergence_radius(spec);
    let sol = SeriesSolution::<BigFloat> {
        anchor: Anchor::Origin,
        exponent: Complex::new(prec),
        coefficients: coeffs.iter().map(|c| Complex::with_val(prec, c)).collect(),
        truncation: coeffs.len().saturating_sub(1),
    };
    let mut worst: f64 = 0.0;
    for z in z_samples {
        let r = abs_f64(z);
        if r == 0.0 || r >= radius {
            return Err(HeunError::OutOfRange(format!("sample {z} outside 0 < |z| < {radius}")));
        }
        let y = evaluate_solution(&sol, z, prec);
        worst = worst.max(abs_f64(&ode_lhs(spec, b, &y, z, prec)?));
    }
    Ok(worst)
}

/// Residual of any local series solution at one point.
pub fn series_residual(spec: &RecurrenceSpec, b: &Complex, sol: &SeriesSolution<BigFloat>, z: &Complex, prec: u32) -> Result<f64> {
    let y = evaluate_solution(sol, z, prec);
    Ok(abs_f64(&ode_lhs(spec, b, &y, z, prec)?))
}

/// `d₁, d₂` from matching `y = d₁ y₁⁽¹⁾ + d₂ y₂⁽¹⁾` and its derivative.
#[derive(Clone, Debug)]
pub struct MidpointMatch {
    pub d1: Complex,
    pub d2: Complex,
    /// 1-norm condition number of the 2×2 system.
    pub condition: f64,
    pub truncation: usize,
    /// Largest last-term magnitude among the three series at the match point.
    pub tail: f64,
}

/// Evaluates all three series at `z = ½` and solves for `d₁, d₂`.
///
/// With `n = None` the truncation doubles from 64 until every series' last
/// term is below `2^{−p/2}/100`. Runs in exact arithmetic when the spec and
/// `b` are Gaussian rational.
pub fn d2_by_midpoint_matching(spec: &RecurrenceSpec, b: &Scalar, n: Option<usize>, prec: u32) -> Result<MidpointMatch> {
    if spec.delta().is_integer() {
        return Err(HeunError::InvalidParameter(format!("delta = {} is an integer", spec.delta())));
    }
    let target = 2f64.powi(-(prec as i32) / 2) / 100.0;
    let mut trunc = n.unwrap_or(64);
    loop {
        let (series, tail) = if spec.is_exact() && b.is_exact() {
            three_series(spec, b, trunc, &Exact, prec)?
        } else {
            three_series(spec, b, trunc, &BigFloat::new(prec + 32), prec)?
        };
        if n.is_some() || tail < target || trunc >= 4096 {
            if n.is_none() && tail >= target {
                return Err(HeunError::NoConvergence(format!("series tail {tail:.1e} at N = {trunc}")));
            }
            return solve_match(series, trunc, tail, prec);
        }
        trunc *= 2;
    }
}

fn three_series<F: Field>(
    spec: &RecurrenceSpec,
    b: &Scalar,
    n: usize,
    f: &F,
    prec: u32,
) -> Result<([SeriesSolution<BigFloat>; 3], f64)> {
    let bb = f.lift(b)?;
    let y0 = holomorphic_at_origin(spec, &bb, n, f)?;
    let (y1, y2) = local_solutions_at_1(spec, &bb, n, f)?;
    
    let mut tail: f64 = 0.0;
    let conv = |sol: SeriesSolution<F>| {
        let coefficients: Vec<Complex> = sol.coefficients.iter().map(|c| f.to_complex(c, prec)).collect();
        SeriesSolution::<BigFloat> {
            anchor: sol.anchor,
            exponent: f.to_complex(&sol.exponent, prec),
            coefficients,
            truncation: sol.truncation,
        }
    };
    let out = [conv(y0), conv(y1), conv(y2)];
    for s in &out {
        let last = s.coefficients.last().unwrap();
        let term = Complex::with_val(prec, last * Float::with_val(prec, Float::i_exp(1, -(n as i32))));
        tail = tail.max(abs_f64(&term));
    }
    Ok((out, tail))
}

fn solve_match(series: [SeriesSolution<BigFloat>; 3], n: usize, tail: f64, prec: u32) -> Result<MidpointMatch> {
    let z = Complex::with_val(prec, 0.5);
    let [y, yp, _] = evaluate_solution(&series[0], &z, prec);
    let [u, up, _] = evaluate_solution(&series[1], &z, prec);
    let [v, vp, _] = evaluate_solution(&series[2], &z, prec);
    let det = Complex::with_val(prec, &u * &vp) - Complex::with_val(prec, &up * &v);
    if det.is_zero() {
        return Err(HeunError::Degenerate("local solutions at 1 are dependent".into()));
    }
    let d1 = (Complex::with_val(prec, &y * &vp) - Complex::with_val(prec, &yp * &v)) / &det;
    let d2 = (Complex::with_val(prec, &u * &yp) - Complex::with_val(prec, &up * &y)) / &det;
    let d1 = Complex::with_val(prec, d1);
    let d2 = Complex::with_val(prec, d2);
    let norm = (abs_f64(&u) + abs_f64(&up)).max(abs_f64(&v) + abs_f64(&vp));
    let inv_norm = (abs_f64(&vp) + abs_f64(&up)).max(abs_f64(&v) + abs_f64(&u)) / abs_f64(&det);
    let condition = norm * inv_norm;
    if condition > 1e40 {
        return Err(HeunError::Degenerate(format!("ill-conditioned match (condition {condition:.1e})")));
    }
    Ok(MidpointMatch { d1, d2, condition, truncation: n, tail })
}

/// Taylor coefficients `b_0 … b_order` in `s` of the zero of `c_{m+1}` that
/// equals `−D_k` at `s = 0`, from the implicit function theorem applied to
/// the Frobenius coefficient with `s` as an indeterminate.
///
/// The first-order coefficient is `−D_k^[1]`, the second `−D_k^[2]`.
pub fn zero_series(spec: &RecurrenceSpec, k: usize, m: usize, order: usize) -> Result<Vec<GaussRational>> {
    if !spec.is_exact() {
        return Err(HeunError::NotExact("zero series needs Gaussian-rational parameters".into()));
    }
    if k > m {
        return Err(HeunError::OutOfRange(format!("label k = {k} exceeds m = {m}")));
    }
    let f = Exact;
    let ring = Ring { f: &f, len: order + 1 };
    let p = params(spec, &f)?;
    let mut s = ring.zero();
    if order >= 1 {
        s[1] = GaussRational::one();
    }
    let gd = &p.gamma + &p.delta;
    let grid = |i: usize| GaussRational::from_int(i as i64) * (&gd + &GaussRational::from_int(i as i64 - 1));
    // ∂c_{m+1}/∂B at s = 0, B = −D_k: R_{m+1} ∏_{i≠k} (D_i − D_k).
    let mut slope = GaussRational::one();
    for i in 1..=m + 1 {
        slope = slope / (GaussRational::from_int(i as i64) * (&p.gamma + &GaussRational::from_int(i as i64 - 1)));
    }
    for i in (0..=m).filter(|&i| i != k) {
        slope = slope * (&grid(i) - &grid(k));
    }
    if slope.is_zero() {
        return Err(HeunError::Degenerate("repeated zero at s = 0".into()));
    }
    let mut b = ring.zero();
    b[0] = -grid(k);
    for j in 0..=order {
        let ode = ode_at_origin(&ring, &p, &s, &b);
        let a = frobenius(&ring, &ode, &GaussRational::zero(), m + 2)?;
        let value = &a[m + 1][j];
        if j == 0 {
            if !value.is_zero() {
                return Err(HeunError::Degenerate("−D_k is not a zero at s = 0".into()));
            }
            continue;
        }
        b[j] = -(value / &slope);
    }
    Ok(b)
}

/// Float convenience wrapper used by reports.
pub fn to_complex_vec(v: &[GaussRational], prec: u32) -> Vec<Complex> {
    v.iter().map(|g| g.to_complex(prec)).collect()
}
