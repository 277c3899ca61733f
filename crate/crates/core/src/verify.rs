//! Brute-force checks that a constructed system is a tight frame.
//!
//! Coefficients `c_{n,h} = p^{n/2} ∫ f(x) conj(ψ(A^n x ∸ h)) dμ` are computed
//! in bulk: with `g` the inverse transform of `f̂(χ) conj(ψ̂(χA^{-n}))`, one has
//! `c_{n,h} = p^{-n/2} g(A^{-n}h)`, and `h ↦ A^{-n}h` reads the cells of `g`
//! directly. The Parseval sum is taken over a finite window of scales and an
//! exact geometric tail below it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::frame::{check_theorem31, FrameSystem, WaveletSpec};
use crate::group::{
    enumerate_h0, pair, pow_usize, CharacterWord, DualCoset, GroupElement, TimeCoset,
};
use crate::step::{StepFunctionFreq, StepFunctionTime};

/// Environment variable that overrides the verification seed.
pub const SEED_ENV: &str = "PADIC_FRAMES_SEED";

/// Relative size below which a truncated term counts as zero.
pub const TRUNCATION_TOL: f64 = 1e-12;

/// `ψ̂ = φ̂(χA^{-1}) m_j(χ)`, trimmed to the window of the support `E`.
pub fn effective_psi_hat(frame: &FrameSystem, w: &WaveletSpec) -> Result<StepFunctionFreq> {
    let product = frame.phi_hat.dilate(-1).pointwise_product(&w.mask)?;
    let top = w.e.annulus().unwrap_or(w.e.level()).max(w.e.level());
    product.rewindow(product.refinement_level(), top)
}

/// Sum of `|c_{n,h}|²` over `h ∈ H₀` for one scale, with its truncation check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScaleSum {
    pub n: i32,
    pub sum_sq: f64,
    /// Number of `h` digits that can give a nonzero coefficient.
    pub digits: u32,
    /// Largest `|c|` on the layer of `h` one digit beyond `digits`.
    pub extra_layer_max: f64,
}

/// `f̂(χ) conj(ψ̂(χA^{-n}))` on the smallest window holding it.
pub fn coefficient_density(
    fhat: &StepFunctionFreq,
    psi_hat: &StepFunctionFreq,
    n: i32,
) -> Result<StepFunctionFreq> {
    let dil = psi_hat.dilate(-n).conj();
    let level = fhat.refinement_level().min(dil.refinement_level());
    let top = fhat.support_level().min(dil.support_level());
    let a = fhat.rewindow(level, top)?;
    let b = dil.rewindow(level, top)?;
    a.pointwise_product(&b)
}

/// One coefficient from the density by a direct sum over its cells.
pub fn direct_coefficient(density: &StepFunctionFreq, n: i32, h: &GroupElement) -> Complex64 {
    let y = h.dilate(-n);
    let level = density.refinement_level();
    if !y.in_subgroup(level) {
        return Complex64::new(0.0, 0.0);
    }
    let p = density.p();
    let width = (density.support_level() - level) as u32;
    let measure = (p as f64).powi(level);
    let sum: Complex64 = density
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(c, v)| {
            let w = CharacterWord::from_index(p, level, width, c as u128);
            v * pair(&w, &y)
        })
        .sum();
    sum * measure * (p as f64).powf(-n as f64 / 2.0)
}

/// One coefficient from the frequency side, `p^{-n/2} ∫ f̂ conj(ψ̂(χA^{-n})) (χ, A^{-n}h) dν`.
pub fn coefficient(
    fhat: &StepFunctionFreq,
    psi_hat: &StepFunctionFreq,
    n: i32,
    h: &GroupElement,
) -> Result<Complex64> {
    Ok(direct_coefficient(
        &coefficient_density(fhat, psi_hat, n)?,
        n,
        h,
    ))
}

/// The same coefficient from the time side, `p^{n/2} ⟨f, ψ(A^n · ∸ h)⟩`.
pub fn coefficient_time(
    f: &StepFunctionTime,
    psi: &StepFunctionTime,
    n: i32,
    h: &GroupElement,
) -> Result<Complex64> {
    let shifted = psi.dilate(n).translate(&h.dilate(-n))?;
    let p = f.p() as f64;
    Ok(f.inner_product(&shifted)? * p.powf(n as f64 / 2.0))
}

/// `Σ_{h ∈ H₀} |c_{n,h}|²` computed from the coefficient values.
pub fn scale_sum(fhat: &StepFunctionFreq, psi_hat: &StepFunctionFreq, n: i32) -> Result<ScaleSum> {
    let density = coefficient_density(fhat, psi_hat, n)?;
    let p = density.p();
    let low = density.refinement_level();
    let top = density.support_level();
    let g = density.inverse_fourier();
    // h has digits at -1, -2, …; A^{-n}h has them at n-1, n-2, … and must lie in G_low.
    let digits = (n - low).max(0) as u32;
    // Digits of A^{-n}h at or above `top` do not change g; each value repeats.
    let repeats = (n - top).max(0) as u32;
    let reached = (n.min(top) - low).max(0) as u32;
    let cells = pow_usize(p, reached);
    let pf = p as f64;
    let sum_sq = g.values()[..cells]
        .iter()
        .map(|v| v.norm_sqr())
        .sum::<f64>()
        * pf.powi(-n)
        * pf.powi(repeats as i32);

    let mut extra_layer_max: f64 = 0.0;
    let extra = low - n - 1;
    if extra <= -1 {
        for d in 1..p {
            let h = GroupElement::from_digits(p, [(extra, d)])?;
            extra_layer_max = extra_layer_max.max(direct_coefficient(&density, n, &h).norm());
        }
    }
    Ok(ScaleSum {
        n,
        sum_sq,
        digits,
        extra_layer_max,
    })
}

/// Outcome of one coefficient-sum comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSum {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Compares `Σ_h |c_{n,h}|²` with `∫_{E A^n} |f̂|² dν`.
pub fn lemma31_check(
    f: &StepFunctionTime,
    psi_hat: &StepFunctionFreq,
    e: &DualCoset,
    n: i32,
) -> Result<CoefficientSum> {
    let fhat = f.fourier();
    let lhs = scale_sum(&fhat, psi_hat, n)?.sum_sq;
    let rhs = fhat.integrate_abs2_over(&e.dilate(n))?;
    let residual = (lhs - rhs).abs() / rhs.max(f.norm_sq() * 1e-6);
    Ok(CoefficientSum { lhs, rhs, residual })
}

/// Parseval residual of one test function, with the truncation evidence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParsevalResult {
    pub norm_sq: f64,
    pub total: f64,
    pub residual: f64,
    /// Geometric tail below the scale window.
    pub tail: f64,
    /// Largest term at the top scale, relative to `‖f‖²`; should be zero.
    pub end_term: f64,
    /// Largest mismatch between the first window term and its closed form, relative to `‖f‖²`.
    pub low_end: f64,
    pub extra_layer: f64,
    pub scales: usize,
}

/// `|Σ_j Σ_n Σ_h |c|² - ‖f‖²| / ‖f‖²`.
pub fn parseval_residual(
    f: &StepFunctionTime,
    wavelets: &[(DualCoset, StepFunctionFreq)],
) -> Result<ParsevalResult> {
    let p = f.p() as f64;
    let fhat = f.fourier();
    let norm_sq = f.norm_sq();
    let at_one = fhat.values()[0].norm_sqr();
    let lf = fhat.refinement_level();
    let tf = fhat.support_level();
    let mut out = ParsevalResult {
        norm_sq,
        ..Default::default()
    };
    for (e, psi_hat) in wavelets {
        let u = e
            .rep()
            .highest_index()
            .expect("wavelet supports avoid the trivial character");
        let psi_norm = psi_hat.norm_sq();
        let n_start = lf - u - 2;
        let n_end = tf - u;
        let tail = at_one * psi_norm * p.powi(n_start - 1) * p / (p - 1.0);
        out.tail += tail;
        let sums: Vec<ScaleSum> = (n_start..=n_end)
            .map(|n| scale_sum(&fhat, psi_hat, n))
            .collect::<Result<_>>()?;
        let first = at_one * psi_norm * p.powi(n_start);
        out.low_end = out.low_end.max((sums[0].sum_sq - first).abs() / norm_sq);
        out.end_term = out
            .end_term
            .max(sums.last().map_or(0.0, |s| s.sum_sq) / norm_sq);
        for s in &sums {
            out.extra_layer = out.extra_layer.max(s.extra_layer_max.powi(2) / norm_sq);
        }
        out.scales += sums.len();
        out.total += tail + sums.iter().map(|s| s.sum_sq).sum::<f64>();
    }
    out.residual = (out.total - norm_sq).abs() / norm_sq;
    Ok(out)
}

/// Random step function on `G_{-N-1}`, constant on cosets of `G_{M+2}`,
/// with complex Gaussian values.
pub fn random_test_function<R: Rng>(
    p: u32,
    support_level: i32,
    constancy_level: i32,
    mean_zero: bool,
    rng: &mut R,
) -> Result<StepFunctionTime> {
    let mut f = StepFunctionTime::zeros(p, support_level, constancy_level)?;
    for v in f.values_mut() {
        *v = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    if mean_zero {
        let len = f.values().len() as f64;
        let mean = f.values().iter().sum::<Complex64>() / len;
        f.values_mut().iter_mut().for_each(|v| *v -= mean);
    }
    Ok(f)
}

/// `1_{G_0 ∔ g_{-1}} - 1_{G_0}`.
pub fn mean_zero_control(p: u32) -> Result<StepFunctionTime> {
    let one = Complex64::new(1.0, 0.0);
    let a = StepFunctionTime::indicator(&TimeCoset::new(0, GroupElement::basis(p, -1)), one)?;
    let b = StepFunctionTime::indicator(&TimeCoset::subgroup(p, 0), -one)?;
    a.add(&b)
}

/// Gram matrix `[⟨f(· ∸ h_a), f(· ∸ h_b)⟩]` over `h ∈ H₀^{(s)}`.
pub fn shift_gram(f: &StepFunctionTime, s: u32) -> Result<Vec<Vec<Complex64>>> {
    let shifts = enumerate_h0(f.p(), s)
        .iter()
        .map(|h| f.translate(h))
        .collect::<Result<Vec<_>>>()?;
    shifts
        .iter()
        .map(|a| shifts.iter().map(|b| a.inner_product(b)).collect())
        .collect()
}

/// Largest entry of `G - I`.
pub fn identity_deviation(gram: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - want).norm());
        }
    }
    worst
}

/// Largest `|G_ab - conj(G_ba)|`.
pub fn hermitian_deviation(gram: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - gram[j][i].conj()).norm());
        }
    }
    worst
}

/// `χ ↦ scale · (χ, y) 1_coset(χ)` as a step function.
fn character_on_coset(coset: &DualCoset, y: &GroupElement, scale: f64) -> Result<StepFunctionFreq> {
    let p = coset.p();
    let level = y
        .lowest_index()
        .map_or(coset.level(), |i| i.min(coset.level()));
    let ind = StepFunctionFreq::indicator(coset, Complex64::new(scale, 0.0))?.refine(level)?;
    let mut out = ind.clone();
    let width = (ind.support_level() - level) as u32;
    for (c, v) in out.values_mut().iter_mut().enumerate() {
        if v.norm() > 0.0 {
            *v *= pair(&CharacterWord::from_index(p, level, width, c as u128), y);
        }
    }
    Ok(out)
}

/// Gram matrix of `{p^{s/2} (χ, A^s h)}` over `h ∈ H₀^{(shifts)}` in `L₂(coset)`.
/// With `s = 0` and a coset of `G_0^⊥` this is the family `H₀` itself.
pub fn character_gram(coset: &DualCoset, s: i32, shifts: u32) -> Result<Vec<Vec<Complex64>>> {
    let p = coset.p();
    let scale = (p as f64).powf(s as f64 / 2.0);
    let funcs = enumerate_h0(p, shifts)
        .iter()
        .map(|h| character_on_coset(coset, &h.dilate(s), scale))
        .collect::<Result<Vec<_>>>()?;
    funcs
        .iter()
        .map(|a| funcs.iter().map(|b| a.inner_product(b)).collect())
        .collect()
}

/// Summary of a verification run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub tests: usize,
    pub tol: f64,
    pub branch: String,
    pub wavelets: usize,
    pub parseval: Vec<f64>,
    pub parseval_max: f64,
    /// Mean-zero controls: `f̂(1) = 0`, so no tail is involved.
    pub controls: Vec<f64>,
    pub lemma31_max: f64,
    pub lemma31_samples: usize,
    pub dual_route_max: f64,
    pub truncation: Truncation,
    pub system_residual: f64,
    pub consistency_residual: f64,
    pub min_nonzero_ratio: f64,
    pub refinement_error: f64,
    /// `max |φ|`; the refinement check is judged relative to `max(1, max |φ|)`.
    pub phi_max: f64,
    pub theorem31: bool,
    pub theorem31_violations: Vec<String>,
    pub support_propagation: bool,
    /// Shift Gram deviation of the rescaled `φ` on the orthogonal branch.
    pub orthogonal_gram: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub extra_layer_max: f64,
    pub end_term_max: f64,
    pub low_end_max: f64,
}

/// Options for [`verify_frame`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub tests: usize,
    pub tol: f64,
    pub seed: u64,
    /// Random `(f, j, n)` triples for the coefficient-sum and dual-route checks.
    pub lemma_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tests: 50,
            tol: 1e-9,
            seed: 0,
            lemma_samples: 20,
        }
    }
}

/// Runs every check on a frame.
pub fn verify_frame(frame: &FrameSystem, opts: &VerifyOptions) -> Result<VerificationReport> {
    let params = frame.params;
    let p = params.p();
    let support = -(params.n() as i32) - 1;
    let constancy = params.m() as i32 + 2;
    let tiling = check_theorem31(frame);
    let mut report = VerificationReport {
        seed: opts.seed,
        tests: opts.tests,
        tol: opts.tol,
        branch: frame.branch.to_string(),
        wavelets: frame.wavelets.len(),
        theorem31: tiling.passed(),
        theorem31_violations: tiling.violations,
        system_residual: frame.mask.system_residual(),
        consistency_residual: frame.mask.consistency_residual()?,
        min_nonzero_ratio: frame.mask.min_nonzero_ratio(),
        refinement_error: frame.mask.refinement_error(),
        phi_max: frame.phi.max_abs(),
        support_propagation: frame.mask.support_propagation().passed(),
        ..Default::default()
    };

    let mask_ok = report.consistency_residual <= opts.tol
        && report.refinement_error <= opts.tol * report.phi_max.max(1.0)
        && report.support_propagation
        && report.theorem31;

    if frame.is_orthogonal() {
        let gram = shift_gram(&frame.renormalized_phi(), 2)?;
        let dev = identity_deviation(&gram);
        report.orthogonal_gram = Some(dev);
        report.passed = mask_ok && dev <= opts.tol;
        return Ok(report);
    }

    let wavelets: Vec<(DualCoset, StepFunctionFreq)> = frame
        .wavelets
        .iter()
        .map(|w| Ok((w.e.clone(), effective_psi_hat(frame, w)?)))
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let functions = (0..opts.tests)
        .map(|_| random_test_function(p, support, constancy, false, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let results = functions
        .par_iter()
        .map(|f| parseval_residual(f, &wavelets))
        .collect::<Result<Vec<_>>>()?;
    for r in &results {
        report.truncation.extra_layer_max = report.truncation.extra_layer_max.max(r.extra_layer);
        report.truncation.end_term_max = report.truncation.end_term_max.max(r.end_term);
        report.truncation.low_end_max = report.truncation.low_end_max.max(r.low_end);
    }
    report.parseval = results.iter().map(|r| r.residual).collect();
    report.parseval_max = report.parseval.iter().copied().fold(0.0, f64::max);

    let controls = [
        mean_zero_control(p)?,
        random_test_function(p, support, constancy, true, &mut rng)?,
    ];
    report.controls = controls
        .iter()
        .map(|f| parseval_residual(f, &wavelets).map(|r| r.residual))
        .collect::<Result<_>>()?;

    let samples: Vec<(usize, usize, i32, GroupElement)> = (0..opts.lemma_samples)
        .map(|_| {
            let fi = rng.random_range(0..functions.len().max(1));
            let j = rng.random_range(0..wavelets.len());
            let u = wavelets[j].0.rep().highest_index().unwrap_or(0);
            let n = rng.random_range(support - u - 1..=constancy - u - 1);
            let s = (n - support).clamp(0, 4) as u32;
            let h = enumerate_h0(p, s.max(1));
            let h = h[rng.random_range(0..h.len())].clone();
            (fi, j, n, h)
        })
        .collect();
    if !functions.is_empty() {
        let checks = samples
            .par_iter()
            .map(|(fi, j, n, h)| -> Result<(f64, f64)> {
                let f = &functions[*fi];
                let (e, psi_hat) = &wavelets[*j];
                let lemma = lemma31_check(f, psi_hat, e, *n)?;
                let freq = coefficient(&f.fourier(), psi_hat, *n, h)?;
                let time = coefficient_time(f, &psi_hat.inverse_fourier(), *n, h)?;
                let scale = f.norm_sq().sqrt();
                Ok((lemma.residual, (freq - time).norm() / scale))
            })
            .collect::<Result<Vec<_>>>()?;
        report.lemma31_samples = checks.len();
        report.lemma31_max = checks.iter().map(|c| c.0).fold(0.0, f64::max);
        report.dual_route_max = checks.iter().map(|c| c.1).fold(0.0, f64::max);
    }

    let truncation_ok = report.truncation.extra_layer_max < TRUNCATION_TOL
        && report.truncation.end_term_max < TRUNCATION_TOL
        && report.truncation.low_end_max <= opts.tol;
    let worst_control = report.controls.iter().copied().fold(0.0, f64::max);
    report.passed = mask_ok
        && truncation_ok
        && report.parseval_max <= opts.tol
        && worst_control <= opts.tol
        && report.lemma31_max <= opts.tol
        && report.dual_route_max <= opts.tol;
    Ok(report)
}

/// Seed from the environment when set, otherwise the given one.
pub fn resolve_seed(flag: u64) -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(flag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{build_frame, BuildOptions};
    use crate::group::GroupParams;

    #[test]
    fn parseval_on_small_frame() {
        let g = GroupParams::symmetric(2, 1).unwrap();
        let frame = build_frame(g, None, &BuildOptions::default()).unwrap();
        let opts = VerifyOptions {
            tests: 5,
            lemma_samples: 5,
            ..Default::default()
        };
        let r = verify_frame(&frame, &opts).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn coefficient_of_wavelet_with_itself() {
        let g = GroupParams::symmetric(3, 1).unwrap();
        let frame = build_frame(g, None, &BuildOptions::default()).unwrap();
        let w = &frame.wavelets[0];
        let c = coefficient(&w.psi.fourier(), &w.psi_hat, 0, &GroupElement::zero(3)).unwrap();
        assert!((c - Complex64::new(w.e.measure(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn unit_indicator_shifts_are_orthonormal() {
        let f = StepFunctionTime::indicator(&TimeCoset::subgroup(3, 0), Complex64::new(1.0, 0.0))
            .unwrap();
        let gram = shift_gram(&f, 2).unwrap();
        assert_eq!(gram.len(), 9);
        assert!(identity_deviation(&gram) < 1e-14);
    }
}
