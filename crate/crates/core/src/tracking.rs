//! Following zeros across degrees, labelling them, and the connection
//! coefficient `d₂(B)`.
//!
//! Zeros of `c_index` are labelled `k = 0 … index−1` by proximity to their
//! perturbative estimate. Consecutive zero sets are matched greedily by
//! distance, and a track "stabilizes to d digits" between two degrees when
//! the relative difference is below `½·10^{−d}`.
//!
//! `d₂(B)` is estimated from the limit
//! `a_k = k! / (δ−1)_k · c_k(B) → d₂(B)`, accelerated by polynomial
//! extrapolation in `1/k`.

use std::collections::BTreeMap;

use pathfinding::matrix::Matrix;
use pathfinding::prelude::kuhn_munkres_min;
use rug::{Complex, Float};

use crate::error::{HeunError, Result};
use crate::families::{FamilyKind, RecurrenceSpec};
use crate::perturbation;
use crate::poly::Polynomial;
use crate::recurrence::{build_polynomial, eval_sequence};
use crate::rootfind::{find_all_roots_with, zeros_of, RootOptions, ZeroSet};
use crate::scalar::{abs_f64, BigFloat, Exact, Field, GaussRational, Scalar};
use crate::special::rgamma;

/// Cap on reported stabilized digits when two values agree exactly.
pub const MAX_DIGITS: u32 = 99;

const TIE_REL: f64 = 1e-9;

fn dist(a: &Complex, b: &Complex) -> f64 {
    abs_f64(&Complex::with_val(a.prec().0.max(b.prec().0), a - b))
}

/// The point each label `k` is matched against: the best available
/// perturbative estimate, or `−D_k` for degenerate specs.
pub fn label_targets(spec: &RecurrenceSpec, index: usize, prec: u32) -> Result<Vec<Complex>> {
    if index == 0 {
        return Ok(Vec::new());
    }
    let field = BigFloat::new(prec);
    let s = field.lift(spec.s())?;
    let m = index - 1;
    (0..index)
        .map(|k| {
            if spec.is_d_degenerate() {
                let d = recurrence_d(spec, k, prec)?;
                Ok(Complex::with_val(prec, -d))
            } else {
                perturbation::best_estimate(spec, k, m, 2, &s, &field)
            }
        })
        .collect()
}

fn recurrence_d(spec: &RecurrenceSpec, k: usize, prec: u32) -> Result<Complex> {
    let (d, _, _) = crate::families::recurrence_coeffs(spec, k as u32, &BigFloat::new(prec))?;
    Ok(d)
}

/// Labels for every zero of `c_index`: `labels[i]` is the `k` of `zeros[i]`.
///
/// Labels are handed out in increasing `k`, each to the nearest zero not yet
/// taken. Distances equal to within `10⁻⁹` relative go to the zero with the
/// smaller imaginary part, then the smaller real part.
pub fn assign_labels(spec: &RecurrenceSpec, zset: &ZeroSet) -> Result<Vec<usize>> {
    let targets = label_targets(spec, zset.degree, zset.precision_bits)?;
    Ok(label_by_targets(&zset.zeros, &targets))
}

fn label_by_targets(zeros: &[Complex], targets: &[Complex]) -> Vec<usize> {
    let mut labels = vec![usize::MAX; zeros.len()];
    for (k, t) in targets.iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        for (i, z) in zeros.iter().enumerate() {
            if labels[i] != usize::MAX {
                continue;
            }
            let d = dist(z, t);
            best = match best {
                None => Some((i, d)),
                Some((j, bd)) => {
                    let tie = (d - bd).abs() <= TIE_REL * d.max(bd);
                    if (tie && prefer(z, &zeros[j])) || (!tie && d < bd) {
                        Some((i, d))
                    } else {
                        Some((j, bd))
                    }
                }
            };
        }
        if let Some((i, _)) = best {
            labels[i] = k;
        }
    }
    labels
}

fn prefer(a: &Complex, b: &Complex) -> bool {
    match a.imag().partial_cmp(b.imag()) {
        Some(std::cmp::Ordering::Less) => true,
        Some(std::cmp::Ordering::Greater) => false,
        _ => a.real() < b.real(),
    }
}

/// Labels obtained by continuing every zero from `s = 0`, where zero `k` sits
/// exactly at `−D_k`, along the straight path to the spec's `s`.
pub fn homotopy_labels(spec: &RecurrenceSpec, index: usize, steps: usize, opts: &RootOptions) -> Result<(ZeroSet, Vec<usize>)> {
    let prec = opts.precision_bits;
    let steps = steps.max(1);
    let mut current: Vec<Complex> =
        (0..index).map(|k| Ok(Complex::with_val(prec, -recurrence_d(spec, k, prec)?))).collect::<Result<_>>()?;
    let mut labels: Vec<usize> = (0..index).collect();
    let mut last = None;
    for j in 1..=steps {
        let t = Scalar::ratio(j as i64, steps as i64);
        let sj = spec.with_s(spec.s().mul(&t));
        let poly = polynomial_for(&sj, index, prec)?;
        let zs = find_all_roots_with(&poly, Some(&current), prec, Some(opts.effective_tol()), opts.max_iter)?;
        zs.require_converged()?;
        let matching = match_zeros(&current, &zs.zeros, None);
        let mut next_labels = vec![usize::MAX; index];
        for &(a, b) in &matching.pairs {
            next_labels[b] = labels[a];
        }
        labels = next_labels;
        current = zs.zeros.clone();
        last = Some(zs);
    }
    Ok((last.expect("at least one step"), labels))
}

fn polynomial_for(spec: &RecurrenceSpec, index: usize, prec: u32) -> Result<Polynomial<BigFloat>> {
    if spec.is_exact() {
        Ok(build_polynomial(spec, index, Exact)?.to_bigfloat(prec))
    } else {
        Ok(build_polynomial(spec, index, BigFloat::new(prec + 64))?.to_bigfloat(prec))
    }
}

/// Injective pairing of `za` into `zb`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroMatching {
    /// `(index in za, index in zb)`, sorted by the `za` index.
    pub pairs: Vec<(usize, usize)>,
    pub distances: Vec<f64>,
    /// Indices of `zb` left unmatched.
    pub new: Vec<usize>,
    /// True when the greedy pass was replaced by an optimal assignment.
    pub optimal: bool,
}

/// Greedy minimal-distance matching; falls back to an optimal assignment if
/// any matched distance exceeds `gap / 2`.
pub fn match_zeros(za: &[Complex], zb: &[Complex], gap: Option<f64>) -> ZeroMatching {
    let mut cand: Vec<(f64, usize, usize)> = Vec::with_capacity(za.len() * zb.len());
    for (i, a) in za.iter().enumerate() {
        for (j, b) in zb.iter().enumerate() {
            cand.push((dist(a, b), i, j));
        }
    }
    cand.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used_a = vec![false; za.len()];
    let mut used_b = vec![false; zb.len()];
    let mut pairs = Vec::new();
    for &(d, i, j) in &cand {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push((i, j, d));
        }
    }
    let mut optimal = false;
    if let Some(g) = gap {
        if za.len() <= zb.len() && pairs.iter().any(|p| p.2 > g / 2.0) {
            pairs = optimal_pairs(za, zb);
            optimal = true;
        }
    }
    pairs.sort_by_key(|p| p.0);
    let matched: Vec<bool> = (0..zb.len()).map(|j| pairs.iter().any(|p| p.1 == j)).collect();
    ZeroMatching {
        distances: pairs.iter().map(|p| p.2).collect(),
        pairs: pairs.iter().map(|p| (p.0, p.1)).collect(),
        new: (0..zb.len()).filter(|&j| !matched[j]).collect(),
        optimal,
    }
}

fn optimal_pairs(za: &[Complex], zb: &[Complex]) -> Vec<(usize, usize, f64)> {
    let d: Vec<Vec<f64>> = za.iter().map(|a| zb.iter().map(|b| dist(a, b)).collect()).collect();
    let max = d.iter().flatten().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    // Integer weights keep the assignment exact; 2^40 levels resolve any
    // distance ratio that matters for labelling.
    let scale = 2f64.powi(40) / max;
    let weights = Matrix::from_fn(za.len(), zb.len(), |(i, j)| (d[i][j] * scale).round() as i64);
    let (_, cols) = kuhn_munkres_min(&weights);
    cols.into_iter().enumerate().map(|(i, j)| (i, j, d[i][j])).collect()
}

/// Smallest spacing `|D_{j+1} − D_j| = |2j + γ + δ|` for `j < n`.
pub fn grid_gap(spec: &RecurrenceSpec, n: usize) -> f64 {
    let (gr, gi) = spec.gamma().add(spec.delta()).to_f64_pair();
    (0..n.max(1))
        .map(|j| (2.0 * j as f64 + gr).hypot(gi))
        .fold(f64::INFINITY, f64::min)
}

/// `⌊−log₁₀(2·rel)⌋`, so that `d` digits means a relative difference of at
/// most `½·10^{−d}`.
pub fn stabilized_digits(a: &Complex, b: &Complex) -> u32 {
    let scale = abs_f64(a).max(abs_f64(b));
    let diff = dist(a, b);
    if diff == 0.0 {
        return MAX_DIGITS;
    }
    if scale == 0.0 {
        return 0;
    }
    let digits = (-(2.0 * diff / scale).log10()).floor();
    digits.clamp(0.0, MAX_DIGITS as f64) as u32
}

/// One labelled zero followed across degrees.
#[derive(Clone, Debug)]
pub struct ZeroTrack {
    pub label_k: usize,
    /// Polynomial index → zero.
    pub entries: BTreeMap<usize, Complex>,
    pub stabilized_digits: BTreeMap<(usize, usize), u32>,
}

impl ZeroTrack {
    pub fn at(&self, index: usize) -> Option<&Complex> {
        self.entries.get(&index)
    }
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub spec: RecurrenceSpec,
    pub m_list: Vec<usize>,
    /// Sorted by label.
    pub tracks: Vec<ZeroTrack>,
    pub zero_sets: Vec<ZeroSet>,
}

impl ConvergenceReport {
    /// Tracks whose values at the last two degrees agree to `digits`.
    pub fn n_stable(&self, digits: u32) -> usize {
        let [.., a, b] = self.m_list[..] else { return 0 };
        self.tracks
            .iter()
            .filter(|t| t.stabilized_digits.get(&(a, b)).is_some_and(|&d| d >= digits))
            .count()
    }

    pub fn track(&self, k: usize) -> Option<&ZeroTrack> {
        self.tracks.iter().find(|t| t.label_k == k)
    }
}

/// Zeros of `c_m` for every `m` in `m_list`, chained into labelled tracks.
pub fn convergence_report(spec: &RecurrenceSpec, m_list: &[usize], opts: &RootOptions) -> Result<ConvergenceReport> {
    if m_list.is_empty() || m_list.windows(2).any(|w| w[0] >= w[1]) || m_list[0] == 0 {
        return Err(HeunError::InvalidParameter("m list must be positive and strictly ascending".into()));
    }
    let sets: Vec<Result<ZeroSet>> = std::thread::scope(|scope| {
        let handles: Vec<_> = m_list.iter().map(|&m| scope.spawn(move || zeros_of(spec, m, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("root finder panicked")).collect()
    });
    let sets: Vec<ZeroSet> = sets.into_iter().collect::<Result<_>>()?;
    for set in &sets {
        set.require_converged()?;
    }

    let prec = opts.precision_bits;
    let first = &sets[0];
    let labels = assign_labels(spec, first)?;
    let mut tracks: Vec<ZeroTrack> = labels
        .iter()
        .zip(&first.zeros)
        .map(|(&k, z)| ZeroTrack {
            label_k: k,
            entries: BTreeMap::from([(m_list[0], z.clone())]),
            stabilized_digits: BTreeMap::new(),
        })
        .collect();
    // Track index for each zero of the previous set.
    let mut owner: Vec<usize> = (0..tracks.len()).collect();
    let gap = grid_gap(spec, *m_list.last().unwrap());

    for w in 1..sets.len() {
        let (prev_m, m) = (m_list[w - 1], m_list[w]);
        let matching = match_zeros(&sets[w - 1].zeros, &sets[w].zeros, Some(gap));
        let mut next_owner = vec![usize::MAX; sets[w].degree];
        for &(a, b) in &matching.pairs {
            let t = owner[a];
            let z = sets[w].zeros[b].clone();
            let digits = stabilized_digits(&tracks[t].entries[&prev_m], &z);
            tracks[t].entries.insert(m, z);
            tracks[t].stabilized_digits.insert((prev_m, m), digits);
            next_owner[b] = t;
        }
        // Fresh zeros take the labels not yet in use, by estimate proximity.
        if !matching.new.is_empty() {
            let targets = label_targets(spec, m, prec)?;
            let taken: Vec<usize> = tracks.iter().map(|t| t.label_k).collect();
            let free: Vec<(usize, Complex)> =
                targets.into_iter().enumerate().filter(|(k, _)| !taken.contains(k)).collect();
            let fresh: Vec<Complex> = matching.new.iter().map(|&j| sets[w].zeros[j].clone()).collect();
            let free_targets: Vec<Complex> = free.iter().map(|(_, t)| t.clone()).collect();
            let local = label_by_targets(&fresh, &free_targets);
            for (pos, &j) in matching.new.iter().enumerate() {
                let k = free.get(local[pos]).map(|f| f.0).unwrap_or(usize::MAX);
                tracks.push(ZeroTrack {
                    label_k: k,
                    entries: BTreeMap::from([(m, sets[w].zeros[j].clone())]),
                    stabilized_digits: BTreeMap::new(),
                });
                next_owner[j] = tracks.len() - 1;
            }
        }
        owner = next_owner;
    }
    tracks.sort_by_key(|t| t.label_k);
    Ok(ConvergenceReport { spec: spec.clone(), m_list: m_list.to_vec(), tracks, zero_sets: sets })
}

/// The rescaled coefficient sequence and its limit.
#[derive(Clone, Debug)]
pub struct D2Estimate {
    pub b: Complex,
    /// `a_0 … a_K`.
    pub sequence: Vec<Complex>,
    pub k_max: usize,
    /// Extrapolated limit of the sequence.
    pub estimate: Complex,
    /// `a_K` itself.
    pub raw_estimate: Complex,
    /// `|a_K − a_{K−1}|`.
    pub error_indicator: f64,
    /// Difference between extrapolations of two orders; the uncertainty of
    /// `estimate`.
    pub extrapolation_error: f64,
    pub warnings: Vec<String>,
}

const EXTRAPOLATION_NODES: usize = 20;

/// Polynomial extrapolation in `h = 1/k` to `h = 0` from `n` nodes evenly
/// spread over `[K/2, K]`.
fn extrapolate(seq: &[Complex], n: usize, prec: u32) -> Complex {
    let kmax = seq.len() - 1;
    let half = kmax / 2;
    let mut nodes: Vec<usize> = (0..n).map(|i| kmax - half * i / (n - 1)).collect();
    nodes.dedup();
    let xs: Vec<Float> = nodes.iter().map(|&k| Float::with_val(prec, 1) / k as u32).collect();
    let mut p: Vec<Complex> = nodes.iter().map(|&k| seq[k].clone()).collect();
    // Neville's scheme evaluated at 0.
    for j in 1..p.len() {
        for i in 0..p.len() - j {
            let num = Complex::with_val(prec, &p[i] * &xs[i + j]) - Complex::with_val(prec, &p[i + 1] * &xs[i]);
            let den = Float::with_val(prec, &xs[i + j] - &xs[i]);
            p[i] = Complex::with_val(prec, num / den);
        }
    }
    p.swap_remove(0)
}

fn require_nonintegral(spec: &RecurrenceSpec) -> Result<()> {
    for (name, v) in [("gamma", spec.gamma()), ("delta", spec.delta())] {
        if v.is_integer() {
            return Err(HeunError::InvalidParameter(format!("{name} = {v} is an integer")));
        }
    }
    Ok(())
}

/// `a_k = k!/((δ−1)δ⋯(δ+k−2)) · c_k(B)` for `k ≤ k_max`, with its limit.
pub fn d2_sequence(spec: &RecurrenceSpec, b: &Complex, k_max: usize, prec: u32) -> Result<D2Estimate> {
    require_nonintegral(spec)?;
    if k_max < 2 {
        return Err(HeunError::InvalidParameter("need K ≥ 2".into()));
    }
    let mut warnings = Vec::new();
    if spec.kind() == FamilyKind::Heun && abs_f64(&spec.s().to_complex(64)) >= 1.0 {
        warnings.push("the limit is only established for |s| < 1 in the Heun family".to_string());
    }
    let field = BigFloat::new(prec);
    let c = eval_sequence(spec, &Complex::with_val(prec, b), k_max, field)?;
    let delta = field.lift(spec.delta())?;
    let mut factor = Complex::with_val(prec, 1);
    let mut seq = Vec::with_capacity(k_max + 1);
    for (k, ck) in c.iter().enumerate() {
        if k > 0 {
            let den = Complex::with_val(prec, &delta + (k as i64 - 2));
            factor = Complex::with_val(prec, &factor * k as u32) / den;
        }
        seq.push(Complex::with_val(prec, ck * &factor));
    }
    let raw = seq[k_max].clone();
    let error_indicator = dist(&seq[k_max], &seq[k_max - 1]);
    let (estimate, extrapolation_error) = if k_max >= 2 * EXTRAPOLATION_NODES {
        let hi = extrapolate(&seq, EXTRAPOLATION_NODES, prec);
        let lo = extrapolate(&seq, EXTRAPOLATION_NODES - 4, prec);
        let err = dist(&hi, &lo);
        (hi, err)
    } else {
        (raw.clone(), error_indicator)
    };
    Ok(D2Estimate {
        b: Complex::with_val(prec, b),
        sequence: seq,
        k_max,
        estimate,
        raw_estimate: raw,
        error_indicator,
        extrapolation_error,
        warnings,
    })
}

/// `Γ(γ)Γ(δ−1) / (Γ(λ₁)Γ(λ₂))` with `λ² − (γ+δ−1)λ + B = 0`, valid at `s = 0`.
pub fn d2_closed_form_s0(spec: &RecurrenceSpec, b: &Complex, prec: u32) -> Result<Complex> {
    if !spec.s().is_zero() {
        return Err(HeunError::InvalidParameter("closed form needs s = 0".into()));
    }
    require_nonintegral(spec)?;
    let work = prec + 32;
    let field = BigFloat::new(work);
    let g = field.lift(spec.gamma())?;
    let d = field.lift(spec.delta())?;
    let sum = Complex::with_val(work, &g + &d) - 1u32;
    let disc = Complex::with_val(work, sum.square_ref()) - Complex::with_val(work, b * 4u32);
    let root = disc.sqrt();
    let l1 = Complex::with_val(work, &sum + &root) / 2u32;
    let l2 = Complex::with_val(work, &sum - &root) / 2u32;
    let num = Complex::with_val(work, rgamma(&l1, work) * rgamma(&l2, work));
    let den = Complex::with_val(work, rgamma(&g, work) * rgamma(&(d - 1u32), work));
    Ok(Complex::with_val(prec, num / den))
}

/// Result of a secant search for a zero of `d₂`.
#[derive(Clone, Debug)]
pub struct D2Zero {
    pub b: Complex,
    pub d2: D2Estimate,
    pub iterations: usize,
    /// Uncertainty in `b` implied by the extrapolation error.
    pub b_uncertainty: f64,
}

/// Secant iteration on `B ↦ d₂(B)` from `b0`; `K` doubles (up to 8·k_max)
/// while the extrapolation error leaves `B` uncertain beyond `tol`.
pub fn d2_zero_search(
    spec: &RecurrenceSpec,
    b0: &Complex,
    max_iter: usize,
    tol: f64,
    k_max: usize,
    prec: u32,
) -> Result<D2Zero> {
    let mut k = k_max;
    loop {
        let z = secant(spec, b0, max_iter, tol, k, prec)?;
        if z.b_uncertainty <= tol || k >= 8 * k_max {
            if z.b_uncertainty > tol {
                return Err(HeunError::NoConvergence(format!(
                    "sequence not settled at K = {k}: B uncertain to {:.1e}",
                    z.b_uncertainty
                )));
            }
            return Ok(z);
        }
        k *= 2;
    }
}

fn secant(spec: &RecurrenceSpec, b0: &Complex, max_iter: usize, tol: f64, k: usize, prec: u32) -> Result<D2Zero> {
    let f = |b: &Complex| d2_sequence(spec, b, k, prec);
    let mut x0 = Complex::with_val(prec, b0);
    let h = 1e-6 * abs_f64(b0).max(1.0);
    let mut x1 = Complex::with_val(prec, &x0 + h);
    let mut f0 = f(&x0)?;
    let mut f1 = f(&x1)?;
    for it in 1..=max_iter {
        let df = Complex::with_val(prec, &f1.estimate - &f0.estimate);
        if df.is_zero() {
            if f1.estimate.is_zero() {
                return Ok(D2Zero { b: x1, d2: f1, iterations: it, b_uncertainty: 0.0 });
            }
            return Err(HeunError::NoConvergence("flat secant step".into()));
        }
        let dx = Complex::with_val(prec, &x1 - &x0);
        let slope = Complex::with_val(prec, &df / &dx);
        let step = Complex::with_val(prec, &f1.estimate / &slope);
        let x2 = Complex::with_val(prec, &x1 - &step);
        let f2 = f(&x2)?;
        let done = abs_f64(&step) < tol * abs_f64(&x2).max(1.0) || f2.estimate.is_zero();
        (x0, f0) = (x1, f1);
        (x1, f1) = (x2, f2);
        if done {
            let slope_abs = abs_f64(&slope);
            let unc = if slope_abs > 0.0 { f1.extrapolation_error / slope_abs } else { f64::INFINITY };
            return Ok(D2Zero { b: x1, d2: f1, iterations: it, b_uncertainty: unc });
        }
    }
    Err(HeunError::NoConvergence(format!("secant search from {b0} exceeded {max_iter} iterations")))
}

/// Exact `(δ−1)_k = (δ−1)δ⋯(δ+k−2)`.
pub fn pochhammer_delta_minus_one(delta: &GaussRational, k: usize) -> GaussRational {
    (0..k).fold(GaussRational::one(), |acc, j| acc * (delta + &GaussRational::from_int(j as i64 - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{from_lame, from_mathieu, LameParams, MathieuParams};

    fn lame(s: Scalar) -> RecurrenceSpec {
        from_lame(&LameParams { n: Scalar::int(2), s, eta: None }).unwrap().spec
    }

    fn mathieu(q: Scalar) -> RecurrenceSpec {
        from_mathieu(&MathieuParams { a: Scalar::int(0), q }).unwrap().0
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(256, (re, im))
    }

    #[test]
    fn identical_sets_match_identically() {
        let zs = vec![c(0.0, 0.0), c(-1.0, 0.5), c(-4.0, 0.0)];
        let m = match_zeros(&zs, &zs, None);
        assert_eq!(m.pairs, vec![(0, 0), (1, 1), (2, 2)]);
        assert!(m.distances.iter().all(|&d| d == 0.0));
        assert!(m.new.is_empty());
    }

    #[test]
    fn s_zero_sets_gain_one_new_zero() {
        let spec = lame(Scalar::int(0));
        let a = zeros_of(&spec, 5, &RootOptions::default()).unwrap();
        let b = zeros_of(&spec, 6, &RootOptions::default()).unwrap();
        let m = match_zeros(&a.zeros, &b.zeros, Some(grid_gap(&spec, 6)));
        assert_eq!(m.pairs.len(), 5);
        assert!(m.distances.iter().all(|&d| d < 1e-60));
        assert_eq!(m.new.len(), 1);
        assert!((b.zeros[m.new[0]].real().to_f64() + 25.0).abs() < 1e-60);
    }

    #[test]
    fn optimal_fallback_beats_greedy() {
        // Greedy takes (1,0) first and is left with a long second edge; the
        // optimal assignment is cheaper overall.
        let za = vec![c(0.0, 0.0), c(1.5, 0.0)];
        let zb = vec![c(0.9, 0.0), c(3.0, 0.0)];
        let greedy = match_zeros(&za, &zb, None);
        assert_eq!(greedy.pairs, vec![(0, 1), (1, 0)]);
        let fixed = match_zeros(&za, &zb, Some(1.0));
        assert!(fixed.optimal);
        assert_eq!(fixed.pairs, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn digits_rule() {
        assert_eq!(stabilized_digits(&c(1.0, 0.0), &c(1.0 + 4e-11, 0.0)), 10);
        assert_eq!(stabilized_digits(&c(1.0, 0.0), &c(1.0 + 6e-11, 0.0)), 9);
        assert_eq!(stabilized_digits(&c(0.0, 0.0), &c(0.0, 0.0)), MAX_DIGITS);
    }

    #[test]
    fn lame_tracks_stabilize() {
        let spec = lame(Scalar::ratio(1, 100));
        let report = convergence_report(&spec, &[30, 40], &RootOptions::default()).unwrap();
        assert!(report.n_stable(10) >= 20, "{}", report.n_stable(10));
        let k0 = report.track(0).unwrap();
        assert!((k0.at(30).unwrap().real().to_f64() + 0.007481156136).abs() < 1e-12);
        for d in 1..20 {
            assert!(report.n_stable(d) <= report.n_stable(d - 1));
        }
    }

    #[test]
    fn mathieu_2i_label_tie() {
        let spec = mathieu(Scalar::Exact(GaussRational::new(0, 2)));
        let zs = zeros_of(&spec, 30, &RootOptions::default()).unwrap();
        let labels = assign_labels(&spec, &zs).unwrap();
        let k0 = labels.iter().position(|&k| k == 0).unwrap();
        let k1 = labels.iter().position(|&k| k == 1).unwrap();
        assert!((zs.zeros[k0].imag().to_f64() - 0.5331266960).abs() < 1e-9);
        assert!((zs.zeros[k1].imag().to_f64() - 1.466873304).abs() < 1e-8);
    }

    #[test]
    fn homotopy_agrees_with_proximity() {
        for s in [Scalar::ratio(1, 10), Scalar::ratio(-1, 10), Scalar::ratio(1, 20)] {
            let spec = lame(s);
            let opts = RootOptions::default();
            let (zs, hom) = homotopy_labels(&spec, 24, 10, &opts).unwrap();
            let prox = assign_labels(&spec, &zs).unwrap();
            for k in 0..=10 {
                let a = hom.iter().position(|&l| l == k).unwrap();
                let b = prox.iter().position(|&l| l == k).unwrap();
                assert_eq!(a, b, "k = {k}");
            }
        }
    }

    #[test]
    fn d2_sequence_is_one_at_quarter() {
        let spec = RecurrenceSpec::reduced_confluent(Scalar::ratio(1, 2), Scalar::ratio(1, 2), Scalar::int(0)).unwrap();
        let est = d2_sequence(&spec, &c(-0.25, 0.0), 60, 256).unwrap();
        for a in &est.sequence {
            assert!(dist(a, &c(1.0, 0.0)) < 1e-70);
        }
        let zero = d2_sequence(&spec, &c(0.0, 0.0), 60, 256).unwrap();
        assert!(zero.sequence[1..].iter().all(|a| a.is_zero()));
        assert!(zero.estimate.is_zero());
    }

    #[test]
    fn sequence_limit_matches_closed_form() {
        let spec = RecurrenceSpec::reduced_confluent(Scalar::ratio(1, 2), Scalar::ratio(1, 2), Scalar::int(0)).unwrap();
        for b in [c(1.0 / 3.0, 0.0), c(-2.0 / 3.0, 0.0), c(5.0, 0.0), c(-2.5, 1.0)] {
            let est = d2_sequence(&spec, &b, 500, 256).unwrap();
            let cf = d2_closed_form_s0(&spec, &b, 256).unwrap();
            assert!(dist(&est.estimate, &cf) < 1e-20, "{b}: {}", dist(&est.estimate, &cf));
            assert!(est.extrapolation_error < 1e-15);
        }
        let at_grid = d2_closed_form_s0(&spec, &c(-4.0, 0.0), 256).unwrap();
        assert!(abs_f64(&at_grid) < 1e-60);
    }

    #[test]
    fn integral_parameters_rejected() {
        let spec = RecurrenceSpec::reduced_confluent(Scalar::ratio(1, 2), Scalar::int(2), Scalar::int(0)).unwrap();
        assert!(d2_sequence(&spec, &c(0.0, 0.0), 10, 128).is_err());
        assert!(d2_closed_form_s0(&lame(Scalar::ratio(1, 100)), &c(0.0, 0.0), 128).is_err());
    }

    #[test]
    fn pochhammer_factor_telescopes() {
        let delta = GaussRational::ratio(1, 3);
        let mut iterative = GaussRational::one();
        for k in 1..=30usize {
            iterative = iterative * GaussRational::from_int(k as i64)
                / (&delta + &GaussRational::from_int(k as i64 - 2));
            let closed = (1..=k as i64).fold(GaussRational::one(), |a, j| a * GaussRational::from_int(j))
                / pochhammer_delta_minus_one(&delta, k);
            assert_eq!(iterative, closed);
        }
    }

    #[test]
    fn zero_search_at_s0() {
        let spec = RecurrenceSpec::reduced_confluent(Scalar::ratio(1, 2), Scalar::ratio(1, 2), Scalar::int(0)).unwrap();
        let z = d2_zero_search(&spec, &c(-3.9, 0.0), 50, 1e-12, 500, 256).unwrap();
        assert!(dist(&z.b, &c(-4.0, 0.0)) < 1e-12);
    }

    #[test]
    fn zero_search_mathieu_s2() {
        let z = d2_zero_search(&mathieu(Scalar::int(2)), &c(1.4, 0.0), 50, 1e-10, 500, 256).unwrap();
        assert!(dist(&z.b, &c(1.378489221, 0.0)) < 1e-8, "{}", z.b);
    }
}
