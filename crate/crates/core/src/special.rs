//! Complex gamma function at arbitrary precision.
//!
//! MPC has no complex gamma, so `1/Γ(z)` is computed from the Stirling
//! series after shifting `z` far enough to the right, with the reflection
//! formula for `Re z < ½`.

use std::sync::OnceLock;

use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};

/// `B_2, B_4, …, B_{2·len}`.
fn bernoulli_even() -> &'static [Rational] {
    static CACHE: OnceLock<Vec<Rational>> = OnceLock::new();
    CACHE.get_or_init(|| {
        // Akiyama–Tanigawa over the first 2·len + 1 numbers.
        let n = 2 * 160 + 1;
        let mut a: Vec<Rational> = Vec::with_capacity(n);
        let mut all = Vec::with_capacity(n);
        for m in 0..n {
            a.push(Rational::from((1, m as u32 + 1)));
            for j in (1..=m).rev() {
                let diff = Rational::from(&a[j - 1] - &a[j]);
                a[j - 1] = diff * Integer::from(j);
            }
            all.push(a[0].clone());
        }
        all.into_iter().skip(2).step_by(2).collect()
    })
}

fn is_nonpositive_integer(z: &Complex) -> bool {
    z.imag().is_zero() && z.real().is_integer() && *z.real() <= 0
}

/// `ln Γ(w)` up to a multiple of `2πi`, assuming `|w|` is large enough for
/// the asymptotic series to reach `prec` bits.
fn stirling(w: &Complex, prec: u32) -> Complex {
    let half_ln_2pi = {
        let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
        Float::with_val(prec, two_pi.ln()) / 2u32
    };
    let ln_w = Complex::with_val(prec, w.ln_ref());
    let w_minus_half = Complex::with_val(prec, w - Float::with_val(prec, 0.5));
    let mut acc = Complex::with_val(prec, &w_minus_half * &ln_w);
    acc -= w;
    acc += &half_ln_2pi;
    let w_inv = Complex::with_val(prec, w.recip_ref());
    let w_inv2 = Complex::with_val(prec, w_inv.square_ref());
    let mut power = w_inv;
    let eps = Float::with_val(64, Float::i_exp(1, -(prec as i32)));
    for (k, b) in bernoulli_even().iter().enumerate() {
        let k = k as u32 + 1;
        let coeff = Float::with_val(prec, b) / Float::with_val(prec, 2 * k * (2 * k - 1));
        let term = Complex::with_val(prec, &power * &coeff);
        let small = Float::with_val(64, term.abs_ref()) < eps;
        acc += term;
        if small {
            break;
        }
        power *= &w_inv2;
    }
    acc
}

/// `1/Γ(z)`, exactly zero at the poles `0, −1, −2, …`.
pub fn rgamma(z: &Complex, prec: u32) -> Complex {
    if is_nonpositive_integer(z) {
        return Complex::new(prec);
    }
    let work = prec + 32;
    let z = Complex::with_val(work, z);
    if *z.real() < 0.5 {
        // 1/Γ(z) = Γ(1 − z) sin(πz) / π
        let pi = Float::with_val(work, Constant::Pi);
        let one_minus = Complex::with_val(work, 1 - &z);
        let sin = Complex::with_val(work, &z * &pi).sin();
        let g = Complex::with_val(work, rgamma(&one_minus, work).recip());
        return Complex::with_val(prec, g * sin / pi);
    }
    let threshold = 0.12 * work as f64 + 10.0;
    let mut w = z.clone();
    let mut shift_product = Complex::with_val(work, 1);
    while Float::with_val(64, w.abs_ref()).to_f64() < threshold {
        shift_product *= &w;
        w += 1;
    }
    // Γ(z) = Γ(w) / (z (z+1) ⋯ (w−1)), so 1/Γ(z) = product · exp(−lnΓ(w)).
    let ln_gamma_w = stirling(&w, work);
    Complex::with_val(prec, shift_product * (-ln_gamma_w).exp())
}

/// `Γ(z)`; infinite at the poles.
pub fn gamma(z: &Complex, prec: u32) -> Complex {
    Complex::with_val(prec, rgamma(z, prec + 16).recip())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: &Complex, b: &Complex) -> f64 {
        let d = Float::with_val(64, Complex::with_val(256, a - b).abs_ref()).to_f64();
        d / Float::with_val(64, b.abs_ref()).to_f64()
    }

    #[test]
    fn real_values_match_mpfr() {
        for x in [0.5, 1.0, 2.5, 7.25, 31.0, -0.5, -3.75] {
            let ours = gamma(&Complex::with_val(256, x), 256);
            let mpfr = Complex::with_val(256, Float::with_val(256, x).gamma());
            assert!(rel_err(&ours, &mpfr) < 1e-70, "x = {x}");
        }
    }

    #[test]
    fn reciprocal_vanishes_at_poles() {
        for n in [0, -1, -7] {
            assert!(rgamma(&Complex::with_val(128, n), 128).is_zero());
        }
    }

    #[test]
    fn functional_equation_off_axis() {
        let z = Complex::with_val(256, (0.3, 2.7));
        let zp1 = Complex::with_val(256, &z + 1);
        let lhs = gamma(&zp1, 256);
        let rhs = Complex::with_val(256, &z * gamma(&z, 256));
        assert!(rel_err(&lhs, &rhs) < 1e-70);
        // |Γ(iy)|² = π / (y sinh πy)
        let y = Float::with_val(256, 1.5);
        let g = gamma(&Complex::with_val(256, (0, &y)), 256);
        let pi = Float::with_val(256, Constant::Pi);
        let expected = Float::with_val(256, &pi / (Float::with_val(256, &pi * &y).sinh() * &y));
        let norm = Float::with_val(256, g.norm_ref());
        assert!(((norm / expected) - 1u32).abs() < 1e-70);
    }
}
