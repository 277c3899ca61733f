//! Mask coefficients from a tree of zeros, and the refinable function they define.
//!
//! The mask is `m₀(χ) = Σ_h β_h conj((χ, A^{-1}h))` over `h ∈ H₀^{(N+1)}`,
//! where `h` is indexed by `n = a_{-N-1} + a_{-N}p + … + a_{-1}p^N`. On the
//! coset of node `m` the character factor equals `q_m^n` with
//! `q_m = exp(-2πi·rev(m)/p^H)`, `rev` reversing the `H` base-`p` digits of
//! `m`. Prescribing `λ_0 = 1` and `λ_ν = 0` on the zero set gives a square
//! Vandermonde system for `β`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{
    pair, pow_u128, pow_usize, root_of_unity, CharacterWord, GroupElement, GroupParams,
};
use crate::step::{digit_reverse, StepFunctionFreq, StepFunctionTime};
use crate::tree::{level_range, Classification, MaskTree};
use crate::vandermonde;

/// Relative threshold below which a solved value at a free node is a contradiction.
pub const NONZERO_TOL: f64 = 1e-9;

/// `rev(m)`, the exponent with `q_m = exp(-2πi·rev(m)/p^H)`.
pub fn q_exponent(params: GroupParams, m: usize) -> usize {
    digit_reverse(params.p() as usize, params.height(), m)
}

/// The Vandermonde node of tree node `m`.
pub fn q_node(params: GroupParams, m: usize) -> Result<Complex64> {
    let size = pow_usize(params.p(), params.height());
    if m >= size {
        return Err(Error::NodeOutOfRange { node: m, size });
    }
    let modulus = pow_u128(params.p(), params.height());
    let k = q_exponent(params, m) as u128;
    Ok(root_of_unity(
        params.p(),
        params.height(),
        (modulus - k) % modulus,
    ))
}

/// `h_n ∈ H₀^{(N+1)}` for coefficient index `n`.
pub fn coefficient_shift(params: GroupParams, n: usize) -> GroupElement {
    let low = -(params.n() as i32) - 1;
    GroupElement::from_index(params.p(), low, params.n() + 1, n as u128)
}

/// Table of `exp(-2πi k / p^H)`.
fn unit_table(params: GroupParams) -> Vec<Complex64> {
    let size = pow_usize(params.p(), params.height());
    let modulus = size as u128;
    (0..size)
        .map(|k| root_of_unity(params.p(), params.height(), (modulus - k as u128) % modulus))
        .collect()
}

/// A solved mask.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskSpec {
    params: GroupParams,
    tree: MaskTree,
    zeros: Vec<usize>,
    beta: Vec<Complex64>,
    lambda: Vec<Complex64>,
    system_residual: f64,
}

/// Solves the system with rows `{0} ∪ Λ₀` and fills in every node value.
pub fn solve_mask(tree: &MaskTree) -> Result<MaskSpec> {
    match tree.classify()? {
        Classification::Determines => {}
        Classification::DeterminesAfterPadding(deficit) => {
            return Err(Error::NeedsPadding { deficit })
        }
        Classification::Infeasible { zeros } => {
            return Err(Error::Infeasible {
                zeros,
                limit: tree.required_zeros(),
            })
        }
    }
    let params = tree.params();
    let zeros = tree.zero_set();
    let rows: Vec<usize> = std::iter::once(0).chain(zeros.iter().copied()).collect();
    let nodes = rows
        .iter()
        .map(|&m| q_node(params, m))
        .collect::<Result<Vec<_>>>()?;
    let mut rhs = vec![Complex64::new(0.0, 0.0); rows.len()];
    rhs[0] = Complex64::new(1.0, 0.0);
    let beta = vandermonde::solve(&nodes, &rhs);
    let system_residual = vandermonde::residual(&nodes, &beta, &rhs);

    let table = unit_table(params);
    let size = table.len();
    let mut lambda: Vec<Complex64> = (0..size)
        .into_par_iter()
        .map(|m| {
            let r = q_exponent(params, m);
            beta.iter()
                .enumerate()
                .map(|(n, b)| b * table[(r * n) % size])
                .sum()
        })
        .collect();
    for &z in &zeros {
        lambda[z] = Complex64::new(0.0, 0.0);
    }
    lambda[0] = Complex64::new(1.0, 0.0);

    let max = lambda.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (m, v) in lambda.iter().enumerate() {
        if !tree.nodes()[m].is_zero() && v.norm() <= NONZERO_TOL * max {
            return Err(Error::Contradiction {
                node: m,
                magnitude: v.norm(),
            });
        }
    }
    let solved = tree.with_values(&lambda)?;
    Ok(MaskSpec {
        params,
        tree: solved,
        zeros,
        beta,
        lambda,
        system_residual,
    })
}

impl MaskSpec {
    /// Rebuilds a spec from stored coefficients, recomputing nothing but the residual.
    pub fn from_parts(
        tree: &MaskTree,
        beta: Vec<Complex64>,
        lambda: Vec<Complex64>,
    ) -> Result<Self> {
        let params = tree.params();
        if beta.len() != params.coefficient_count() {
            return Err(Error::Parse(format!(
                "expected {} mask coefficients, got {}",
                params.coefficient_count(),
                beta.len()
            )));
        }
        let zeros = tree.zero_set();
        let solved = tree.with_values(&lambda)?;
        let mut spec = Self {
            params,
            tree: solved,
            zeros,
            beta,
            lambda,
            system_residual: 0.0,
        };
        spec.system_residual = spec.row_residual()?;
        Ok(spec)
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    /// The tree with solved values on every free node.
    pub fn tree(&self) -> &MaskTree {
        &self.tree
    }

    pub fn zeros(&self) -> &[usize] {
        &self.zeros
    }

    pub fn beta(&self) -> &[Complex64] {
        &self.beta
    }

    pub fn lambda(&self) -> &[Complex64] {
        &self.lambda
    }

    /// Largest row residual of the Vandermonde system at solve time.
    pub fn system_residual(&self) -> f64 {
        self.system_residual
    }

    fn row_residual(&self) -> Result<f64> {
        let rows: Vec<usize> = std::iter::once(0)
            .chain(self.zeros.iter().copied())
            .collect();
        let mut worst: f64 = 0.0;
        for (i, &m) in rows.iter().enumerate() {
            let v = vandermonde::horner(&self.beta, q_node(self.params, m)?);
            let want = if i == 0 { 1.0 } else { 0.0 };
            worst = worst.max((v - want).norm());
        }
        Ok(worst)
    }

    /// Largest `|Σ_n β_n q_m^n - λ_m|` over every node.
    pub fn consistency_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (m, &l) in self.lambda.iter().enumerate() {
            let v = vandermonde::horner(&self.beta, q_node(self.params, m)?);
            worst = worst.max((v - l).norm());
        }
        Ok(worst)
    }

    /// `min |λ_m|` over free nodes divided by `max |λ|`.
    pub fn min_nonzero_ratio(&self) -> f64 {
        let max = self.lambda.iter().map(|v| v.norm()).fold(0.0, f64::max);
        self.lambda
            .iter()
            .zip(self.tree.nodes())
            .filter(|(_, n)| !n.is_zero())
            .map(|(v, _)| v.norm() / max)
            .fold(f64::INFINITY, f64::min)
    }

    /// Mask evaluated at a character directly from the coefficients.
    pub fn mask_at(&self, chi: &CharacterWord) -> Complex64 {
        self.beta
            .iter()
            .enumerate()
            .map(|(n, b)| b * pair(chi, &coefficient_shift(self.params, n).dilate(-1)).conj())
            .sum()
    }

    /// `m₀` on `G_{M+1}^⊥` as a step function at level `-N`.
    pub fn mask_function(&self) -> Result<StepFunctionFreq> {
        StepFunctionFreq::from_values(
            self.params.p(),
            -(self.params.n() as i32),
            self.params.m() as i32 + 1,
            self.lambda.clone(),
        )
    }

    /// Values of `φ̂` on every tree node.
    pub fn phi_hat_tree(&self) -> Vec<Complex64> {
        self.tree
            .phi_hat_tree()
            .expect("a solved tree has a value on every node")
    }

    /// `φ̂` on `G_M^⊥ / G_{-N}^⊥`; it vanishes on the leaf annulus.
    pub fn phi_hat(&self) -> StepFunctionFreq {
        let inner = pow_usize(self.params.p(), self.params.height() - 1);
        let mut values = self.phi_hat_tree();
        values.truncate(inner);
        StepFunctionFreq::from_values(
            self.params.p(),
            -(self.params.n() as i32),
            self.params.m() as i32,
            values,
        )
        .expect("tree size matches the window")
    }

    /// `φ`, supported on `G_{-N}` and constant on cosets of `G_M`.
    pub fn phi(&self) -> StepFunctionTime {
        self.phi_hat().inverse_fourier()
    }

    /// Largest `|φ(x) - p Σ_h β_h φ(Ax ∸ h)|` over the `G_M`-cosets of `G_{-N-1}`.
    pub fn refinement_error(&self) -> f64 {
        let phi = self.phi();
        let p = self.params.p();
        let low = -(self.params.n() as i32) - 1;
        let top = self.params.m() as i32;
        let width = (top - low) as u32;
        let shifts: Vec<GroupElement> = (0..self.beta.len())
            .map(|n| coefficient_shift(self.params, n))
            .collect();
        (0..pow_usize(p, width))
            .into_par_iter()
            .map(|k| {
                let x = GroupElement::from_index(p, low, width, k as u128);
                let ax = x.dilate(1);
                let rhs: Complex64 = shifts
                    .iter()
                    .zip(&self.beta)
                    .map(|(h, b)| b * phi.evaluate(&ax.subtract(h, top)))
                    .sum::<Complex64>()
                    * p as f64;
                (phi.evaluate(&x) - rhs).norm()
            })
            .reduce(|| 0.0, f64::max)
    }

    /// [`refinement_error`](Self::refinement_error) divided by `max(1, max |φ|)`.
    pub fn relative_refinement_error(&self) -> f64 {
        self.refinement_error() / self.phi().max_abs().max(1.0)
    }

    /// Largest `|φ̂(χ) - m₀(χ) φ̂(χA^{-1})|` over `G_{M+1}^⊥`, computed with step functions.
    pub fn frequency_refinement_error(&self) -> Result<f64> {
        let phi_hat = self.phi_hat();
        let rhs = self
            .mask_function()?
            .pointwise_product(&phi_hat.dilate(-1))?;
        phi_hat.max_abs_diff(&rhs)
    }

    /// Checks that `m₀(χ) φ̂(χA^{-1})` vanishes on `G_{M+2}^⊥ \ G_{M+1}^⊥`.
    pub fn support_propagation(&self) -> SupportReport {
        let p = self.params.p();
        let h = self.params.height();
        let phi_tree = self.phi_hat_tree();
        let covered = self.tree.covered();
        let mut report = SupportReport::default();
        for c in level_range(p, h + 1) {
            let parent = c / p as usize;
            report.cosets += 1;
            if covered[parent] {
                report.structural_zeros += 1;
            }
            let chi = CharacterWord::from_index(p, -(self.params.n() as i32), h + 1, c as u128);
            let value = self.mask_at(&chi) * phi_tree[parent];
            report.max_abs_product = report.max_abs_product.max(value.norm());
        }
        report
    }
}

/// Outcome of [`MaskSpec::support_propagation`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SupportReport {
    /// Cosets of `G_{-N}^⊥` in the annulus checked.
    pub cosets: usize,
    /// Of those, how many sit below a structurally zero node of `T(φ̂)`.
    pub structural_zeros: usize,
    pub max_abs_product: f64,
}

impl SupportReport {
    pub fn passed(&self) -> bool {
        self.cosets > 0 && self.structural_zeros == self.cosets && self.max_abs_product == 0.0
    }
}
