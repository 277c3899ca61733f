//! Step functions on the group and on its character group.
//!
//! A time-domain step function lives on a window `G_low / G_top`: it vanishes
//! outside `G_low` and is constant on cosets of `G_top`. Its `p^{top-low}`
//! values are stored densely, indexed by `k = Σ a_i p^{i-low}` over the digits
//! `low ≤ i < top` of the coset representative.
//!
//! A frequency-domain step function lives on `G_top^⊥ / G_level^⊥`, indexed
//! by `c = Σ α_j p^{j-level}` over the exponents `level ≤ j < top`. This index
//! is the Monna order `λ'(rep) = p^{level}·c`, and it coincides with the
//! mask-tree node number when `level = -N`.
//!
//! With these windows the Fourier transform is a cyclic DFT of length
//! `p^{top-low}` up to a base-`p` digit reversal of the frequency index, so
//! transforms are computed with an FFT. The results are the same finite sums
//! over cosets that the closed forms for coset integrals give.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::group::{pow_usize, CharacterWord, DualCoset, GroupElement, TimeCoset};

/// Largest window handled, in base-`p` cells.
pub const MAX_CELLS: usize = 1 << 22;

/// Relative magnitude below which transform outputs are treated as rounding dust.
pub const DUST: f64 = 1e-14;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn window_cells(p: u32, width: i32) -> Result<usize> {
    if width < 0 {
        return Err(Error::WindowTooLarge { p, digits: 0 });
    }
    let width = width as u32;
    let cells = (p as usize)
        .checked_pow(width)
        .filter(|&c| c <= MAX_CELLS)
        .ok_or(Error::WindowTooLarge { p, digits: width })?;
    Ok(cells)
}

/// Reverses the `width` base-`p` digits of `index`.
pub(crate) fn digit_reverse(p: usize, width: u32, mut index: usize) -> usize {
    let mut out = 0;
    for _ in 0..width {
        out = out * p + index % p;
        index /= p;
    }
    out
}

fn reversal_table(p: u32, width: u32) -> Vec<usize> {
    let cells = pow_usize(p, width);
    (0..cells)
        .map(|c| digit_reverse(p as usize, width, c))
        .collect()
}

fn scrub(values: &mut [Complex64]) {
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let floor = max * DUST;
    for v in values.iter_mut() {
        if v.norm() < floor {
            *v = Complex64::new(0.0, 0.0);
        }
    }
}

fn max_abs_diff_slices(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Step function on the group: zero outside `G_low`, constant on cosets of `G_top`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunctionTime {
    p: u32,
    support_level: i32,
    constancy_level: i32,
    values: Vec<Complex64>,
}

impl StepFunctionTime {
    pub fn zeros(p: u32, support_level: i32, constancy_level: i32) -> Result<Self> {
        let cells = window_cells(p, constancy_level - support_level)?;
        Ok(Self {
            p,
            support_level,
            constancy_level,
            values: vec![Complex64::new(0.0, 0.0); cells],
        })
    }

    pub fn from_values(
        p: u32,
        support_level: i32,
        constancy_level: i32,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        let cells = window_cells(p, constancy_level - support_level)?;
        if values.len() != cells {
            return Err(Error::Parse(format!(
                "expected {cells} values for the window, got {}",
                values.len()
            )));
        }
        Ok(Self {
            p,
            support_level,
            constancy_level,
            values,
        })
    }

    /// `value · 1_coset`.
    pub fn indicator(coset: &TimeCoset, value: Complex64) -> Result<Self> {
        let p = coset.p();
        let low = coset
            .rep()
            .lowest_index()
            .map_or(coset.level(), |i| i.min(coset.level()));
        let mut f = Self::zeros(p, low, coset.level())?;
        let k = f
            .index_of(coset.rep())
            .expect("representative lies in window");
        f.values[k] = value;
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `f` vanishes outside `G_{support_level}`.
    pub fn support_level(&self) -> i32 {
        self.support_level
    }

    /// `f` is constant on cosets of `G_{constancy_level}`.
    pub fn constancy_level(&self) -> i32 {
        self.constancy_level
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    fn width(&self) -> u32 {
        (self.constancy_level - self.support_level) as u32
    }

    /// Dense index of the cell containing `x`, or `None` outside the support.
    pub fn index_of(&self, x: &GroupElement) -> Option<usize> {
        let p = self.p as usize;
        let mut k = 0usize;
        for &(i, d) in x.digits() {
            if i < self.support_level {
                return None;
            }
            if i >= self.constancy_level {
                break;
            }
            k += d as usize * p.pow((i - self.support_level) as u32);
        }
        Some(k)
    }

    pub fn coset_at(&self, k: usize) -> TimeCoset {
        TimeCoset::new(
            self.constancy_level,
            GroupElement::from_index(self.p, self.support_level, self.width(), k as u128),
        )
    }

    pub fn evaluate(&self, x: &GroupElement) -> Complex64 {
        self.index_of(x)
            .map_or(Complex64::new(0.0, 0.0), |k| self.values[k])
    }

    /// Nonzero cells with their values, in Monna order.
    pub fn cosets(&self) -> Vec<(TimeCoset, Complex64)> {
        let mut out: Vec<_> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(k, &v)| (self.coset_at(k), v))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Haar measure of one cell.
    pub fn cell_measure(&self) -> f64 {
        (self.p as f64).powi(-self.constancy_level)
    }

    /// The same function on the larger window `G_support / G_constancy`.
    pub fn reshape(&self, support_level: i32, constancy_level: i32) -> Result<Self> {
        if support_level > self.support_level || constancy_level < self.constancy_level {
            return Err(Error::CoarserLevel {
                requested: constancy_level,
                current: self.constancy_level,
            });
        }
        if support_level == self.support_level && constancy_level == self.constancy_level {
            return Ok(self.clone());
        }
        let mut out = Self::zeros(self.p, support_level, constancy_level)?;
        let below = pow_usize(self.p, (self.support_level - support_level) as u32);
        let old_cells = self.values.len();
        let copies = pow_usize(self.p, (constancy_level - self.constancy_level) as u32);
        for (k, &v) in self.values.iter().enumerate() {
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for t in 0..copies {
                out.values[(k + t * old_cells) * below] = v;
            }
        }
        Ok(out)
    }

    /// Refines to constant on cosets of `G_level`, `level ≥ constancy_level`.
    pub fn refine(&self, level: i32) -> Result<Self> {
        self.reshape(self.support_level, level)
    }

    /// `x ↦ f(x ∸ h)`.
    pub fn translate(&self, h: &GroupElement) -> Result<Self> {
        let low = h
            .lowest_index()
            .map_or(self.support_level, |i| i.min(self.support_level));
        let mut out = Self::zeros(self.p, low, self.constancy_level)?;
        let width = out.width();
        for k in 0..out.values.len() {
            let x = GroupElement::from_index(self.p, low, width, k as u128);
            out.values[k] = self.evaluate(&x.subtract(h, self.constancy_level));
        }
        Ok(out)
    }

    /// `x ↦ f(A^k x)`.
    pub fn dilate(&self, k: i32) -> Self {
        Self {
            p: self.p,
            support_level: self.support_level + k,
            constancy_level: self.constancy_level + k,
            values: self.values.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    fn common_window(&self, other: &Self) -> Result<(Self, Self)> {
        assert_eq!(self.p, other.p, "step functions on different groups");
        let low = self.support_level.min(other.support_level);
        let top = self.constancy_level.max(other.constancy_level);
        Ok((self.reshape(low, top)?, other.reshape(low, top)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.common_window(other)?;
        a.values
            .iter_mut()
            .zip(&b.values)
            .for_each(|(x, y)| *x += y);
        Ok(a)
    }

    /// `f · 1_{G_level}` on the window starting at `level ≥ support_level`.
    pub fn clip_support(&self, level: i32) -> Self {
        if level <= self.support_level {
            return self.clone();
        }
        if level >= self.constancy_level {
            return Self {
                p: self.p,
                support_level: level,
                constancy_level: level,
                values: vec![self.values[0]],
            };
        }
        let stride = pow_usize(self.p, (level - self.support_level) as u32);
        Self {
            p: self.p,
            support_level: level,
            constancy_level: self.constancy_level,
            values: self.values.iter().step_by(stride).copied().collect(),
        }
    }

    /// `∫ f · conj(g) dμ`, taken over the intersection of the two supports.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        assert_eq!(self.p, other.p, "step functions on different groups");
        let low = self.support_level.max(other.support_level);
        let top = self.constancy_level.max(other.constancy_level);
        let a = self.clip_support(low).reshape(low, top)?;
        let b = other.clip_support(low).reshape(low, top)?;
        let sum: Complex64 = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| x * y.conj())
            .sum();
        Ok(sum * a.cell_measure())
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_measure()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest pointwise difference after moving both onto a common window.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        let (a, b) = self.common_window(other)?;
        Ok(max_abs_diff_slices(&a.values, &b.values))
    }

    /// Fourier transform `f̂(χ) = ∫ f(x) conj((χ, x)) dμ(x)`.
    ///
    /// The result lives on `G_top^⊥ / G_low^⊥`.
    pub fn fourier(&self) -> StepFunctionFreq {
        let width = self.width();
        let mut buf = self.values.clone();
        if buf.len() > 1 {
            let fft = PLANNER.with(|pl| pl.borrow_mut().plan_fft_forward(buf.len()));
            fft.process(&mut buf);
        }
        let scale = (self.p as f64).powi(-self.constancy_level);
        let rev = reversal_table(self.p, width);
        let mut values: Vec<Complex64> = rev.iter().map(|&c| buf[c] * scale).collect();
        scrub(&mut values);
        StepFunctionFreq {
            p: self.p,
            refinement_level: self.support_level,
            support_level: self.constancy_level,
            values,
        }
    }
}

/// Step function on the character group: zero outside `G_top^⊥`, constant on
/// cosets of `G_level^⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunctionFreq {
    p: u32,
    refinement_level: i32,
    support_level: i32,
    values: Vec<Complex64>,
}

impl StepFunctionFreq {
    pub fn zeros(p: u32, refinement_level: i32, support_level: i32) -> Result<Self> {
        let cells = window_cells(p, support_level - refinement_level)?;
        Ok(Self {
            p,
            refinement_level,
            support_level,
            values: vec![Complex64::new(0.0, 0.0); cells],
        })
    }

    pub fn from_values(
        p: u32,
        refinement_level: i32,
        support_level: i32,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        let cells = window_cells(p, support_level - refinement_level)?;
        if values.len() != cells {
            return Err(Error::Parse(format!(
                "expected {cells} values for the window, got {}",
                values.len()
            )));
        }
        Ok(Self {
            p,
            refinement_level,
            support_level,
            values,
        })
    }

    /// `value · 1_coset`, on the smallest window holding the coset.
    pub fn indicator(coset: &DualCoset, value: Complex64) -> Result<Self> {
        let level = coset.level();
        let top = coset.annulus().unwrap_or(level).max(level);
        let mut out = Self::zeros(coset.p(), level, top)?;
        let c = out
            .index_of(coset.rep())
            .expect("representative lies in window");
        out.values[c] = value;
        Ok(out)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `F` is constant on cosets of `G_{refinement_level}^⊥`.
    pub fn refinement_level(&self) -> i32 {
        self.refinement_level
    }

    /// `F` vanishes outside `G_{support_level}^⊥`.
    pub fn support_level(&self) -> i32 {
        self.support_level
    }

    /// Values indexed in Monna order of the cell representatives.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    fn width(&self) -> u32 {
        (self.support_level - self.refinement_level) as u32
    }

    /// Dense index of the cell containing `chi`, or `None` outside the support.
    pub fn index_of(&self, chi: &CharacterWord) -> Option<usize> {
        let p = self.p as usize;
        let mut c = 0usize;
        for &(j, e) in chi.exponents() {
            if j < self.refinement_level {
                continue;
            }
            if j >= self.support_level {
                return None;
            }
            c += e as usize * p.pow((j - self.refinement_level) as u32);
        }
        Some(c)
    }

    pub fn coset_at(&self, c: usize) -> DualCoset {
        DualCoset::new(
            self.refinement_level,
            CharacterWord::from_index(self.p, self.refinement_level, self.width(), c as u128),
        )
    }

    pub fn evaluate(&self, chi: &CharacterWord) -> Complex64 {
        self.index_of(chi)
            .map_or(Complex64::new(0.0, 0.0), |c| self.values[c])
    }

    /// Nonzero cells with their values, in Monna order.
    pub fn cosets(&self) -> Vec<(DualCoset, Complex64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(c, &v)| (self.coset_at(c), v))
            .collect()
    }

    /// Measure `ν` of one cell.
    pub fn cell_measure(&self) -> f64 {
        (self.p as f64).powi(self.refinement_level)
    }

    /// The same function on the larger window `G_support^⊥ / G_level^⊥`.
    pub fn reshape(&self, refinement_level: i32, support_level: i32) -> Result<Self> {
        if refinement_level > self.refinement_level {
            return Err(Error::CoarserLevel {
                requested: refinement_level,
                current: self.refinement_level,
            });
        }
        if support_level < self.support_level {
            return Err(Error::CoarserLevel {
                requested: support_level,
                current: self.support_level,
            });
        }
        if refinement_level == self.refinement_level && support_level == self.support_level {
            return Ok(self.clone());
        }
        let mut out = Self::zeros(self.p, refinement_level, support_level)?;
        let split = pow_usize(self.p, (self.refinement_level - refinement_level) as u32);
        for (c, &v) in self.values.iter().enumerate() {
            out.values[c * split..(c + 1) * split].fill(v);
        }
        Ok(out)
    }

    /// Splits every cell into `p^{level - new_level}` children of equal value.
    pub fn refine(&self, level: i32) -> Result<Self> {
        self.reshape(level, self.support_level)
    }

    /// `χ ↦ F(χ A^k)`.
    pub fn dilate(&self, k: i32) -> Self {
        Self {
            p: self.p,
            refinement_level: self.refinement_level - k,
            support_level: self.support_level - k,
            values: self.values.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    fn common_window(&self, other: &Self) -> Result<(Self, Self)> {
        assert_eq!(self.p, other.p, "step functions on different groups");
        let level = self.refinement_level.min(other.refinement_level);
        let top = self.support_level.max(other.support_level);
        Ok((self.reshape(level, top)?, other.reshape(level, top)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.common_window(other)?;
        a.values
            .iter_mut()
            .zip(&b.values)
            .for_each(|(x, y)| *x += y);
        Ok(a)
    }

    /// Pointwise product on the common refinement; absent cells count as zero.
    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.common_window(other)?;
        a.values
            .iter_mut()
            .zip(&b.values)
            .for_each(|(x, y)| *x *= y);
        Ok(a)
    }

    /// `∫ F · conj(G) dν`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        let (a, b) = self.common_window(other)?;
        let sum: Complex64 = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| x * y.conj())
            .sum();
        Ok(sum * a.cell_measure())
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_measure()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        let (a, b) = self.common_window(other)?;
        Ok(max_abs_diff_slices(&a.values, &b.values))
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = v.conj());
        out
    }

    /// The same function on `G_top^⊥ / G_level^⊥`, dropping whatever lies
    /// outside `G_top^⊥`. The level may only get finer.
    pub fn rewindow(&self, level: i32, top: i32) -> Result<Self> {
        if level > self.refinement_level {
            return Err(Error::CoarserLevel {
                requested: level,
                current: self.refinement_level,
            });
        }
        let top = top.max(level);
        let mut out = Self::zeros(self.p, level, top)?;
        let split = pow_usize(self.p, (self.refinement_level - level) as u32);
        let cells = self.values.len();
        for (c, v) in out.values.iter_mut().enumerate() {
            let k = c / split;
            if k < cells {
                *v = self.values[k];
            }
        }
        Ok(out)
    }

    /// `F · 1_coset`, on the smallest window holding the product.
    pub fn restrict(&self, coset: &DualCoset) -> Result<Self> {
        let level = self.refinement_level.min(coset.level());
        let top = match coset.annulus() {
            Some(a) if a > self.support_level => {
                return Self::zeros(self.p, level, level);
            }
            Some(a) => a.max(coset.level()),
            None => self.support_level.min(coset.level()),
        }
        .max(level);
        let mut out = Self::zeros(self.p, level, top)?;
        let pp = self.p as usize;
        let split_at = coset.level().min(top);
        let free = pow_usize(self.p, (split_at - level) as u32);
        let mut fixed = 0usize;
        for &(j, e) in coset.rep().exponents() {
            if j >= split_at && j < top {
                fixed += e as usize * pp.pow((j - split_at) as u32);
            }
        }
        let split = pow_usize(self.p, (self.refinement_level - level) as u32);
        for low in 0..free {
            let c = fixed * free + low;
            out.values[c] = self.values[c / split];
        }
        Ok(out)
    }

    /// `∫_coset |F|² dν`.
    pub fn integrate_abs2_over(&self, coset: &DualCoset) -> Result<f64> {
        Ok(self.restrict(coset)?.norm_sq())
    }

    /// Inverse transform `f(x) = ∫ F(χ) (χ, x) dν(χ)`.
    ///
    /// The result vanishes outside `G_level` and is constant on cosets of `G_top`.
    pub fn inverse_fourier(&self) -> StepFunctionTime {
        let width = self.width();
        let rev = reversal_table(self.p, width);
        let mut buf: Vec<Complex64> = rev.iter().map(|&c| self.values[c]).collect();
        if buf.len() > 1 {
            let fft = PLANNER.with(|pl| pl.borrow_mut().plan_fft_inverse(buf.len()));
            fft.process(&mut buf);
        }
        let scale = (self.p as f64).powi(self.refinement_level);
        buf.iter_mut().for_each(|v| *v *= scale);
        scrub(&mut buf);
        StepFunctionTime {
            p: self.p,
            support_level: self.refinement_level,
            constancy_level: self.support_level,
            values: buf,
        }
    }
}

/// Free-function form of [`StepFunctionTime::fourier`].
pub fn fourier(f: &StepFunctionTime) -> StepFunctionFreq {
    f.fourier()
}

/// Free-function form of [`StepFunctionFreq::inverse_fourier`].
pub fn inverse_fourier(f: &StepFunctionFreq) -> StepFunctionTime {
    f.inverse_fourier()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn subgroup_indicators_transform_to_scaled_indicators() {
        for p in [2u32, 3, 5] {
            for n in -2..=2 {
                let f = StepFunctionTime::indicator(&TimeCoset::subgroup(p, n), c(1.0)).unwrap();
                let ft = f.fourier();
                let expected = (p as f64).powi(-n);
                assert_eq!(ft.values().len(), 1);
                assert!((ft.values()[0] - c(expected)).norm() < 1e-15);
                assert_eq!(ft.refinement_level(), n);
                assert_eq!(ft.support_level(), n);

                let g = StepFunctionFreq::indicator(&DualCoset::subgroup(p, n), c(1.0)).unwrap();
                let back = g.inverse_fourier();
                assert!((back.values()[0] - c((p as f64).powi(n))).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn refine_splits_cells() {
        let f = StepFunctionFreq::indicator(&DualCoset::subgroup(2, 0), c(1.0)).unwrap();
        assert_eq!(f.refine(0).unwrap(), f);
        let r = f.refine(-1).unwrap();
        assert_eq!(r.values(), &[c(1.0), c(1.0)]);
        assert_eq!(
            r.coset_at(1),
            DualCoset::new(-1, CharacterWord::rademacher(2, -1))
        );
        assert!((r.norm_sq() - f.norm_sq()).abs() < 1e-15);
        assert!(matches!(r.refine(0), Err(Error::CoarserLevel { .. })));
    }

    #[test]
    fn disjoint_time_cosets_are_orthogonal() {
        let a = StepFunctionTime::indicator(&TimeCoset::subgroup(2, 0), c(1.0)).unwrap();
        let b = StepFunctionTime::indicator(&TimeCoset::new(0, GroupElement::basis(2, -1)), c(1.0))
            .unwrap();
        assert!(a.inner_product(&b).unwrap().norm() < 1e-15);
        let big = StepFunctionTime::indicator(&TimeCoset::subgroup(2, -1), c(1.0)).unwrap();
        assert!((big.inner_product(&big).unwrap() - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn restrict_and_integrate() {
        // F = 1 on G_1^⊥ at level -1 for p = 3
        let f = StepFunctionFreq::indicator(&DualCoset::subgroup(3, 1), c(2.0))
            .unwrap()
            .refine(-1)
            .unwrap();
        let e = DualCoset::new(0, CharacterWord::rademacher(3, 0));
        assert!((f.integrate_abs2_over(&e).unwrap() - 4.0).abs() < 1e-14);
        let small = DualCoset::new(-2, CharacterWord::rademacher(3, -2));
        assert!((f.integrate_abs2_over(&small).unwrap() - 4.0 / 9.0).abs() < 1e-14);
        let outside = DualCoset::new(0, CharacterWord::rademacher(3, 1));
        assert_eq!(f.integrate_abs2_over(&outside).unwrap(), 0.0);
        let whole = DualCoset::subgroup(3, 3);
        assert!((f.integrate_abs2_over(&whole).unwrap() - 12.0).abs() < 1e-13);
    }

    #[test]
    fn translation_moves_support() {
        let f = StepFunctionTime::indicator(&TimeCoset::subgroup(3, 0), c(1.0)).unwrap();
        let h = GroupElement::basis(3, -1);
        let g = f.translate(&h).unwrap();
        assert_eq!(g.evaluate(&h), c(1.0));
        assert_eq!(g.evaluate(&GroupElement::zero(3)), c(0.0));
        assert!(f.inner_product(&g).unwrap().norm() < 1e-15);
    }

    #[test]
    fn window_limit() {
        assert!(matches!(
            StepFunctionTime::zeros(5, -20, 20),
            Err(Error::WindowTooLarge { .. })
        ));
    }
}
