//! All zeros of a polynomial in big-float complex arithmetic.
//!
//! The solver is Aberth–Ehrlich simultaneous iteration in Gauss–Seidel form,
//! started either from caller-provided seeds (typically perturbative
//! estimates) or from Bini's Newton-polygon circles, followed by a guarded
//! Newton polish of every root.

use rug::float::Constant;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{HeunError, Result};
use crate::families::RecurrenceSpec;
use crate::perturbation;
use crate::poly::Polynomial;
use crate::recurrence::build_polynomial;
use crate::scalar::{abs_f64, BigFloat, Exact, Field, DEFAULT_PRECISION};

/// Default relative imaginary-part threshold for counting real zeros.
pub const DEFAULT_IMAG_TOL: f64 = 1e-6;

const MAX_ITER: usize = 2000;

/// Zeros of one polynomial with per-root diagnostics.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub degree: usize,
    pub zeros: Vec<Complex>,
    /// `|p(z)| / |p'(z)|`, the size of the next Newton correction.
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
    pub iterations: usize,
    pub precision_bits: u32,
}

impl ZeroSet {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    pub fn require_converged(&self) -> Result<()> {
        let bad = self.converged.iter().filter(|c| !**c).count();
        if bad > 0 {
            return Err(HeunError::NoConvergence(format!(
                "{bad} of {} zeros did not converge in {} iterations",
                self.degree, self.iterations
            )));
        }
        Ok(())
    }

    /// Zeros rounded to `f64` pairs.
    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.zeros.iter().map(|z| (z.real().to_f64(), z.imag().to_f64())).collect()
    }
}

/// How starting points are chosen by [`zeros_of`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedPolicy {
    /// Perturbative seeds when `|s| ≤ 0.1`, Newton-polygon circles otherwise.
    #[default]
    Auto,
    Perturbative,
    Circle,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    pub precision_bits: u32,
    /// Relative Newton-correction tolerance; `None` means `2^{−p/2}`.
    pub tol: Option<f64>,
    pub seed_policy: SeedPolicy,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { precision_bits: DEFAULT_PRECISION, tol: None, seed_policy: SeedPolicy::Auto, max_iter: MAX_ITER }
    }
}

impl RootOptions {
    pub fn with_precision(precision_bits: u32) -> Self {
        RootOptions { precision_bits, ..Self::default() }
    }

    pub fn effective_tol(&self) -> f64 {
        self.tol.unwrap_or_else(|| default_tol(self.precision_bits))
    }
}

pub fn default_tol(precision_bits: u32) -> f64 {
    2f64.powi(-(precision_bits as i32) / 2)
}

fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0.max(64), z.abs_ref())
}

/// `Σ |a_j| |z|^j`, the scale against which a rounding-level residual is judged.
fn magnitude_bound(abs_coeffs: &[Float], z: &Complex) -> Float {
    let r = cabs(z);
    let mut acc = Float::with_val(r.prec(), 0);
    for a in abs_coeffs.iter().rev() {
        acc *= &r;
        acc += a;
    }
    acc
}

struct Solver {
    prec: u32,
    coeffs: Vec<Complex>,
    abs_coeffs: Vec<Float>,
    tol: Float,
    /// Relative rounding level at which the residual cannot be improved.
    noise: Float,
}

impl Solver {
    fn new(poly: &Polynomial<BigFloat>, prec: u32, tol: f64) -> Self {
        let coeffs: Vec<Complex> = poly.coeffs().to_vec();
        let abs_coeffs = coeffs.iter().map(cabs).collect();
        let degree = coeffs.len() - 1;
        let noise = Float::with_val(64, Float::i_exp(1, -(prec as i32) + 4)) * (4 * degree as u32 + 4);
        Solver { prec, coeffs, abs_coeffs, tol: Float::with_val(64, tol), noise }
    }

    fn eval(&self, z: &Complex) -> (Complex, Complex) {
        let mut p = Complex::new(self.prec);
        let mut dp = Complex::new(self.prec);
        for c in self.coeffs.iter().rev() {
            dp *= z;
            dp += &p;
            p *= z;
            p += c;
        }
        (p, dp)
    }

    fn at_noise_floor(&self, p: &Complex, z: &Complex) -> bool {
        cabs(p) <= Float::with_val(64, &self.noise * magnitude_bound(&self.abs_coeffs, z))
    }

    fn small_step(&self, w: &Complex, z: &Complex) -> bool {
        let scale = cabs(z).max(&Float::with_val(64, 1));
        cabs(w) < Float::with_val(64, &self.tol * scale)
    }

    fn aberth(&self, zs: &mut [Complex], max_iter: usize) -> (Vec<bool>, usize) {
        let n = zs.len();
        let mut done = vec![false; n];
        let mut iterations = 0;
        while iterations < max_iter && done.iter().any(|d| !d) {
            iterations += 1;
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let (p, dp) = self.eval(&zs[i]);
                if self.is_zero(&p) || self.at_noise_floor(&p, &zs[i]) {
                    done[i] = true;
                    continue;
                }
                let newton = Complex::with_val(self.prec, &p / &dp);
                let mut sum = Complex::new(self.prec);
                for (j, zj) in zs.iter().enumerate() {
                    if j != i {
                        let diff = Complex::with_val(self.prec, &zs[i] - zj);
                        sum += diff.recip();
                    }
                }
                let denom = Complex::with_val(self.prec, 1 - Complex::with_val(self.prec, &newton * &sum));
                let w = Complex::with_val(self.prec, &newton / &denom);
                if !w.real().is_finite() || !w.imag().is_finite() {
                    // Coincident iterates: nudge apart deterministically.
                    let nudge = Float::with_val(self.prec, Float::i_exp(1, -(self.prec as i32) / 4));
                    zs[i] += Complex::with_val(self.prec, (&nudge, &nudge)) * (i as u32 + 1);
                    continue;
                }
                zs[i] -= &w;
                if self.small_step(&w, &zs[i]) {
                    done[i] = true;
                }
            }
        }
        (done, iterations)
    }

    fn is_zero(&self, p: &Complex) -> bool {
        p.real().is_zero() && p.imag().is_zero()
    }

    /// Up to three Newton steps, each rejected if it would move the root more
    /// than half-way towards its nearest neighbour.
    fn polish(&self, zs: &mut [Complex]) {
        let n = zs.len();
        for i in 0..n {
            let nearest = (0..n)
                .filter(|&j| j != i)
                .map(|j| cabs(&Complex::with_val(self.prec, &zs[i] - &zs[j])))
                .min_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            for _ in 0..3 {
                let (p, dp) = self.eval(&zs[i]);
                if self.is_zero(&p) || self.is_zero(&dp) {
                    break;
                }
                let w = Complex::with_val(self.prec, &p / &dp);
                if let Some(d) = &nearest {
                    if cabs(&w) * 2u32 > *d {
                        break;
                    }
                }
                zs[i] -= &w;
            }
        }
    }

    fn residual(&self, z: &Complex) -> f64 {
        let (p, dp) = self.eval(z);
        if self.is_zero(&p) {
            return 0.0;
        }
        abs_f64(&Complex::with_val(self.prec, &p / &dp))
    }
}

/// Bini's starting points: for every edge of the upper convex hull of
/// `(j, log|a_j|)`, points on a circle whose radius is the edge's geometric
/// mean root size.
pub fn circle_seeds(poly: &Polynomial<BigFloat>) -> Vec<Complex> {
    let prec = poly.field().prec;
    let n = poly.degree().unwrap_or(0);
    let logs: Vec<f64> = poly
        .coeffs()
        .iter()
        .map(|c| {
            let a = cabs(c);
            if a.is_zero() {
                f64::NEG_INFINITY
            } else {
                Float::with_val(64, a.ln_ref()).to_f64()
            }
        })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for j in 0..=n {
        if logs[j] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b - a) as f64 * (logs[j] - logs[a]) - (j - a) as f64 * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(j);
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let count = b - a;
        let log_r = (logs[a] - logs[b]) / count as f64;
        let r = Float::with_val(prec, log_r).exp();
        for t in 0..count {
            let angle: Float = Float::with_val(prec, &two_pi * (t as f64 / count as f64 + a as f64 / n as f64)) + 0.4;
            let (sin, cos) = angle.sin_cos(Float::new(prec));
            out.push(Complex::with_val(prec, (Float::with_val(prec, &r * &cos), Float::with_val(prec, &r * &sin))));
        }
    }
    out
}

/// Zeros of `poly` by Aberth–Ehrlich iteration at `precision_bits`.
///
/// `seeds` may supply up to `deg` starting points; the rest are taken from
/// [`circle_seeds`], largest radii first. Unconverged roots are reported in
/// [`ZeroSet::converged`] rather than as an error.
pub fn find_all_roots<F: Field>(
    poly: &Polynomial<F>,
    seeds: Option<&[Complex]>,
    precision_bits: u32,
    tol: Option<f64>,
) -> Result<ZeroSet> {
    find_all_roots_with(poly, seeds, precision_bits, tol, MAX_ITER)
}

pub fn find_all_roots_with<F: Field>(
    poly: &Polynomial<F>,
    seeds: Option<&[Complex]>,
    precision_bits: u32,
    tol: Option<f64>,
    max_iter: usize,
) -> Result<ZeroSet> {
    let degree = match poly.degree() {
        None | Some(0) => return Err(HeunError::InvalidParameter("root finding needs degree ≥ 1".into())),
        Some(d) => d,
    };
    let prec = precision_bits;
    let fpoly = poly.to_bigfloat(prec);
    let tol = tol.unwrap_or_else(|| default_tol(prec));
    let solver = Solver::new(&fpoly, prec, tol);

    // A small common imaginary offset lets real seeds of a real polynomial
    // leave the real axis when the true zeros form conjugate pairs.
    let mut zs: Vec<Complex> = seeds
        .unwrap_or(&[])
        .iter()
        .take(degree)
        .map(|z| {
            let lift = 1e-10 * (1.0 + abs_f64(z));
            Complex::with_val(prec, z) + Complex::with_val(prec, (0, lift))
        })
        .collect();
    if zs.len() < degree {
        let mut circle = circle_seeds(&fpoly);
        circle.sort_by(|a, b| cabs(b).partial_cmp(&cabs(a)).unwrap_or(std::cmp::Ordering::Equal));
        zs.extend(circle.into_iter().take(degree - zs.len()));
    }
    separate_duplicates(&mut zs, prec);

    let (converged, iterations) = solver.aberth(&mut zs, max_iter);
    solver.polish(&mut zs);
    let residuals = zs.iter().map(|z| solver.residual(z)).collect();
    Ok(ZeroSet { degree, zeros: zs, residuals, converged, iterations, precision_bits: prec })
}

fn separate_duplicates(zs: &mut [Complex], prec: u32) {
    for i in 1..zs.len() {
        let mut bump = 0u32;
        while zs[..i].iter().any(|z| z == &zs[i]) {
            bump += 1;
            let eps = Float::with_val(prec, Float::i_exp(1, -20)) * (1.0 + cabs(&zs[i]).to_f64().abs()) * bump;
            zs[i] += Complex::with_val(prec, (0, eps));
        }
    }
}

/// Newton iteration from `z0` until the correction drops below
/// `tol · max(1, |z|)`.
pub fn refine_root<F: Field>(poly: &Polynomial<F>, z0: &Complex, tol: f64, precision_bits: u32) -> Result<(Complex, f64)> {
    if poly.degree().unwrap_or(0) == 0 {
        return Err(HeunError::InvalidParameter("root finding needs degree ≥ 1".into()));
    }
    let fpoly = poly.to_bigfloat(precision_bits);
    let solver = Solver::new(&fpoly, precision_bits, tol);
    let mut z = Complex::with_val(precision_bits, z0);
    for _ in 0..200 {
        let (p, dp) = solver.eval(&z);
        if solver.is_zero(&p) || solver.at_noise_floor(&p, &z) {
            return Ok((z.clone(), solver.residual(&z)));
        }
        if solver.is_zero(&dp) {
            return Err(HeunError::NoConvergence("Newton step hit a critical point".into()));
        }
        let w = Complex::with_val(precision_bits, &p / &dp);
        z -= &w;
        if solver.small_step(&w, &z) {
            return Ok((z.clone(), solver.residual(&z)));
        }
    }
    Err(HeunError::NoConvergence(format!("Newton iteration from {z0} did not settle")))
}

/// Number of zeros with `|Im z| < imag_tol · (1 + |Re z|)`.
pub fn real_zero_count(zset: &ZeroSet, imag_tol: f64) -> Result<usize> {
    zset.require_converged()?;
    Ok(zset.zeros.iter().filter(|z| is_real_zero(z, imag_tol)).count())
}

pub fn is_real_zero(z: &Complex, imag_tol: f64) -> bool {
    let im = z.imag().to_f64().abs();
    let re = z.real().to_f64().abs();
    im < imag_tol * (1.0 + re)
}

/// Perturbative starting points for the zeros of `c_index`, labels `0..index`.
pub fn perturbative_seeds(spec: &RecurrenceSpec, index: usize, prec: u32) -> Result<Vec<Complex>> {
    if index == 0 {
        return Ok(Vec::new());
    }
    let m = index - 1;
    let field = BigFloat::new(prec);
    let s = field.lift(spec.s())?;
    (0..index).map(|k| perturbation::best_estimate(spec, k, m, 2, &s, &field)).collect()
}

/// Builds `c_index` (exactly when the spec allows) and finds its zeros.
pub fn zeros_of(spec: &RecurrenceSpec, index: usize, opts: &RootOptions) -> Result<ZeroSet> {
    let prec = opts.precision_bits;
    let poly = if spec.is_exact() {
        build_polynomial(spec, index, Exact)?.to_bigfloat(prec)
    } else {
        build_polynomial(spec, index, BigFloat::new(prec + 64))?.to_bigfloat(prec)
    };
    let use_seeds = match opts.seed_policy {
        SeedPolicy::Circle => false,
        SeedPolicy::Perturbative => true,
        SeedPolicy::Auto => abs_f64(&spec.s().to_complex(64)) <= 0.1,
    };
    let seeds = if use_seeds && !spec.is_d_degenerate() { Some(perturbative_seeds(spec, index, prec)?) } else { None };
    find_all_roots_with(&poly, seeds.as_deref(), prec, Some(opts.effective_tol()), opts.max_iter)
}
