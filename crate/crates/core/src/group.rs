//! Exact arithmetic on the additive group of p-adic numbers and on its
//! character group.
//!
//! An element is stored by its finitely many nonzero digits `a_n` in
//! `x = Σ a_n g_n`, where `g_n` is the basic element of `G_n \ G_{n+1}` and
//! `p·g_n = g_{n+1}`. A character is stored by the exponents of its
//! Rademacher factors `χ = Π r_j^{α_j}`, with `(r_j, g_n) = e^{2πi / p^{j-n+1}}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Prime `p` together with the support level `N` and constancy level `M`
/// of the refinable functions being built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupParams {
    p: u32,
    n: u32,
    m: u32,
}

impl GroupParams {
    pub fn new(p: u32, n: u32, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 || m == 0 {
            return Err(Error::NonPositiveLevel { n, m });
        }
        Ok(Self { p, n, m })
    }

    /// The `M = N` parameters used by the frame algorithm.
    pub fn symmetric(p: u32, n: u32) -> Result<Self> {
        Self::new(p, n, n)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Support level: `supp φ ⊆ G_{-N}`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Constancy level: `φ` is constant on cosets of `G_M`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of mask-tree levels above the root, `M + N + 1`.
    pub fn height(&self) -> u32 {
        self.m + self.n + 1
    }

    /// Number of mask coefficients, `p^{N+1}`.
    pub fn coefficient_count(&self) -> usize {
        pow_usize(self.p, self.n + 1)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn pow_usize(p: u32, e: u32) -> usize {
    (p as usize).pow(e)
}

pub(crate) fn pow_u128(p: u32, e: u32) -> u128 {
    (p as u128)
        .checked_pow(e)
        .unwrap_or_else(|| panic!("{p}^{e} overflows the exact phase representation"))
}

/// Exact phase `num / p^den_exp` modulo 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    pub num: u128,
    pub den_exp: u32,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den_exp: 0 };

    /// Reduces the fraction so that `p` does not divide `num` unless it is 0.
    pub fn reduced(mut self, p: u32) -> Self {
        let p = p as u128;
        if self.num == 0 {
            return Phase::ZERO;
        }
        while self.den_exp > 0 && self.num.is_multiple_of(p) {
            self.num /= p;
            self.den_exp -= 1;
        }
        if self.den_exp == 0 {
            Phase::ZERO
        } else {
            self
        }
    }

    pub fn to_complex(self, p: u32) -> Complex64 {
        root_of_unity(p, self.den_exp, self.num)
    }
}

/// `exp(2πi k / p^e)` with `k` reduced exactly before the conversion to float.
pub fn root_of_unity(p: u32, e: u32, k: u128) -> Complex64 {
    if e == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let modulus = pow_u128(p, e);
    let k = k % modulus;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let angle = std::f64::consts::TAU * (k as f64 / modulus as f64);
    Complex64::from_polar(1.0, angle)
}

fn check_digit(p: u32, index: i32, digit: u32) -> Result<()> {
    if digit >= p {
        Err(Error::DigitOutOfRange { index, digit, p })
    } else {
        Ok(())
    }
}

/// Element `Σ a_n g_n` with finitely many nonzero digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    p: u32,
    // sorted by index, no zero digits
    digits: Vec<(i32, u32)>,
}

impl GroupElement {
    pub fn zero(p: u32) -> Self {
        Self {
            p,
            digits: Vec::new(),
        }
    }

    /// The basic element `g_n`.
    pub fn basis(p: u32, n: i32) -> Self {
        Self {
            p,
            digits: vec![(n, 1)],
        }
    }

    /// Builds `Σ a_n g_n`. Repeated indices are added with carries.
    pub fn from_digits<I>(p: u32, digits: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, u32)>,
    {
        let mut out = Self::zero(p);
        for (index, digit) in digits {
            check_digit(p, index, digit)?;
            if digit != 0 {
                out = out.add(&Self {
                    p,
                    digits: vec![(index, digit)],
                });
            }
        }
        Ok(out)
    }

    /// Element `Σ_{i} d_i g_{low + i}` read from the base-`p` digits of `k`.
    pub fn from_index(p: u32, low: i32, width: u32, mut k: u128) -> Self {
        let mut digits = Vec::new();
        for i in 0..width {
            let d = (k % p as u128) as u32;
            k /= p as u128;
            if d != 0 {
                digits.push((low + i as i32, d));
            }
        }
        Self { p, digits }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn digits(&self) -> &[(i32, u32)] {
        &self.digits
    }

    pub fn digit(&self, index: i32) -> u32 {
        match self.digits.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(pos) => self.digits[pos].1,
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn lowest_index(&self) -> Option<i32> {
        self.digits.first().map(|&(i, _)| i)
    }

    pub fn highest_index(&self) -> Option<i32> {
        self.digits.last().map(|&(i, _)| i)
    }

    /// `true` when the element lies in `G_level`.
    pub fn in_subgroup(&self, level: i32) -> bool {
        self.lowest_index().is_none_or(|i| i >= level)
    }

    /// Sum with carries propagating toward increasing index.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "adding elements of different groups");
        let p = self.p;
        let mut out = Vec::with_capacity(self.digits.len() + other.digits.len() + 1);
        let (mut i, mut j) = (0, 0);
        let mut carry = 0u32;
        let mut pos: Option<i32> = None;
        loop {
            let next_a = self.digits.get(i).map(|d| d.0);
            let next_b = other.digits.get(j).map(|d| d.0);
            let index = match (next_a, next_b, pos) {
                (None, None, _) if carry == 0 => break,
                _ => {
                    let mut candidates = [next_a, next_b, pos.filter(|_| carry > 0)];
                    candidates.sort();
                    candidates.into_iter().flatten().next().unwrap()
                }
            };
            let mut sum = carry;
            if next_a == Some(index) {
                sum += self.digits[i].1;
                i += 1;
            }
            if next_b == Some(index) {
                sum += other.digits[j].1;
                j += 1;
            }
            if !sum.is_multiple_of(p) {
                out.push((index, sum % p));
            }
            carry = sum / p;
            pos = Some(index + 1);
        }
        Self { p, digits: out }
    }

    /// Digits of `self ∸ other` at all indices below `floor`.
    ///
    /// Borrows travel toward increasing index, so the digits below `floor`
    /// are exact even though the full difference may have an infinite tail.
    pub fn subtract(&self, other: &Self, floor: i32) -> Self {
        assert_eq!(self.p, other.p, "subtracting elements of different groups");
        let p = self.p as i64;
        let start = match (self.lowest_index(), other.lowest_index()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return Self::zero(self.p),
        };
        let mut out = Vec::new();
        let mut borrow = 0i64;
        for index in start..floor {
            let mut d = self.digit(index) as i64 - other.digit(index) as i64 - borrow;
            if d < 0 {
                d += p;
                borrow = 1;
            } else {
                borrow = 0;
            }
            if d != 0 {
                out.push((index, d as u32));
            }
        }
        Self {
            p: self.p,
            digits: out,
        }
    }

    /// Additive inverse, truncated to the digits below `floor`.
    pub fn negate(&self, floor: i32) -> Self {
        Self::zero(self.p).subtract(self, floor)
    }

    /// `A^k x`: every digit index moves down by `k`.
    pub fn dilate(&self, k: i32) -> Self {
        Self {
            p: self.p,
            digits: self.digits.iter().map(|&(i, d)| (i - k, d)).collect(),
        }
    }

    /// Keeps only the digits below `floor` (the representative modulo `G_floor`).
    pub fn truncate(&self, floor: i32) -> Self {
        Self {
            p: self.p,
            digits: self
                .digits
                .iter()
                .copied()
                .filter(|&(i, _)| i < floor)
                .collect(),
        }
    }

    /// Monna image `λ(x) = Σ a_n p^{-n-1}`.
    pub fn monna(&self) -> BigRational {
        let p = BigInt::from(self.p);
        self.digits
            .iter()
            .fold(BigRational::zero(), |acc, &(i, d)| {
                acc + BigRational::from_integer(BigInt::from(d)) * rational_pow(&p, -i - 1)
            })
    }
}

fn rational_pow(p: &BigInt, e: i32) -> BigRational {
    let base = num_traits::pow(p.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

impl Ord for GroupElement {
    /// Monna order: the smallest index carries the largest weight.
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.digits.get(i), other.digits.get(j)) {
                (None, None) => return self.p.cmp(&other.p),
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(ia, da)), Some(&(ib, db))) => match ia.cmp(&ib) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match da.cmp(&db) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .digits
            .iter()
            .map(|&(i, d)| {
                if d == 1 {
                    format!("g[{i}]")
                } else {
                    format!("{d}g[{i}]")
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Character `Π r_j^{α_j}` with finitely many nonzero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterWord {
    p: u32,
    // sorted by index, no zero exponents
    exponents: Vec<(i32, u32)>,
}

impl CharacterWord {
    pub fn identity(p: u32) -> Self {
        Self {
            p,
            exponents: Vec::new(),
        }
    }

    /// The Rademacher character `r_n`.
    pub fn rademacher(p: u32, n: i32) -> Self {
        Self {
            p,
            exponents: vec![(n, 1)],
        }
    }

    /// Builds `Π r_j^{α_j}`. Repeated indices are multiplied.
    pub fn from_exponents<I>(p: u32, exponents: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, u32)>,
    {
        let mut out = Self::identity(p);
        for (index, e) in exponents {
            check_digit(p, index, e)?;
            if e != 0 {
                out = out.mul(&Self {
                    p,
                    exponents: vec![(index, e)],
                });
            }
        }
        Ok(out)
    }

    /// Word `Π_i r_{low+i}^{d_i}` read from the base-`p` digits of `c`.
    pub fn from_index(p: u32, low: i32, width: u32, mut c: u128) -> Self {
        let mut exponents = Vec::new();
        for i in 0..width {
            let d = (c % p as u128) as u32;
            c /= p as u128;
            if d != 0 {
                exponents.push((low + i as i32, d));
            }
        }
        Self { p, exponents }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn exponents(&self) -> &[(i32, u32)] {
        &self.exponents
    }

    pub fn exponent(&self, index: i32) -> u32 {
        match self.exponents.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(pos) => self.exponents[pos].1,
            Err(_) => 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn lowest_index(&self) -> Option<i32> {
        self.exponents.first().map(|&(i, _)| i)
    }

    pub fn highest_index(&self) -> Option<i32> {
        self.exponents.last().map(|&(i, _)| i)
    }

    /// `true` when the character lies in `G_level^⊥`, i.e. uses only `r_k`, `k < level`.
    pub fn in_annihilator(&self, level: i32) -> bool {
        self.highest_index().is_none_or(|i| i < level)
    }

    /// Product of characters. Since `r_j^p = r_{j-1}`, carries travel toward
    /// decreasing index.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.p, other.p,
            "multiplying characters of different groups"
        );
        let p = self.p;
        let mut acc: BTreeMap<i32, u32> = BTreeMap::new();
        for &(i, e) in self.exponents.iter().chain(other.exponents.iter()) {
            *acc.entry(i).or_default() += e;
        }
        let mut out = Vec::new();
        let mut carry = 0u32;
        let mut index = match acc.keys().next_back() {
            Some(&i) => i,
            None => return Self::identity(p),
        };
        let lowest = *acc.keys().next().unwrap();
        loop {
            let sum = acc.get(&index).copied().unwrap_or(0) + carry;
            if !sum.is_multiple_of(p) {
                out.push((index, sum % p));
            }
            carry = sum / p;
            if index <= lowest && carry == 0 {
                break;
            }
            index -= 1;
        }
        out.reverse();
        Self { p, exponents: out }
    }

    /// `χA^k`: every exponent index moves up by `k`.
    pub fn dilate(&self, k: i32) -> Self {
        Self {
            p: self.p,
            exponents: self.exponents.iter().map(|&(i, e)| (i + k, e)).collect(),
        }
    }

    /// Drops the factors `r_k`, `k < level`, which lie in `G_level^⊥`.
    pub fn reduce(&self, level: i32) -> Self {
        Self {
            p: self.p,
            exponents: self
                .exponents
                .iter()
                .copied()
                .filter(|&(i, _)| i >= level)
                .collect(),
        }
    }

    /// Monna image `λ'(χ) = Σ α_j p^j`.
    pub fn monna(&self) -> BigRational {
        let p = BigInt::from(self.p);
        self.exponents
            .iter()
            .fold(BigRational::zero(), |acc, &(j, e)| {
                acc + BigRational::from_integer(BigInt::from(e)) * rational_pow(&p, j)
            })
    }
}

impl Ord for CharacterWord {
    /// Monna order: the largest index carries the largest weight.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.exponents.iter().rev();
        let mut b = other.exponents.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return self.p.cmp(&other.p),
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(ia, da)), Some(&(ib, db))) => match ia.cmp(&ib) {
                    Ordering::Equal => match da.cmp(&db) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    },
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for CharacterWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CharacterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        let terms: Vec<String> = self
            .exponents
            .iter()
            .map(|&(j, e)| {
                if e == 1 {
                    format!("r[{j}]")
                } else {
                    format!("r[{j}]^{e}")
                }
            })
            .collect();
        f.write_str(&terms.join(" "))
    }
}

/// Exact phase of `(χ, x)`.
pub fn pair_phase(w: &CharacterWord, a: &GroupElement) -> Phase {
    assert_eq!(w.p, a.p, "pairing objects of different groups");
    let p = w.p;
    let mut den_exp = 0i64;
    for &(j, _) in &w.exponents {
        if let Some(low) = a.lowest_index() {
            den_exp = den_exp.max(j as i64 - low as i64 + 1);
        }
    }
    if den_exp <= 0 {
        return Phase::ZERO;
    }
    let den_exp = den_exp as u32;
    let modulus = pow_u128(p, den_exp);
    // guard the multiplication by α·a below
    pow_u128(p, den_exp + 2);
    let mut num = 0u128;
    for &(j, alpha) in &w.exponents {
        for &(n, digit) in &a.digits {
            let d = j as i64 - n as i64 + 1;
            if d <= 0 {
                continue;
            }
            let weight = pow_u128(p, den_exp - d as u32);
            num = (num + (alpha as u128 * digit as u128 % modulus) * weight) % modulus;
        }
    }
    Phase { num, den_exp }.reduced(p)
}

/// Value of the character `w` at `a`, a complex number of modulus one.
pub fn pair(w: &CharacterWord, a: &GroupElement) -> Complex64 {
    pair_phase(w, a).to_complex(w.p)
}

/// Coset `G_level ∔ rep` with `rep` reduced modulo `G_level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TimeCoset {
    level: i32,
    rep: GroupElement,
}

impl TimeCoset {
    pub fn new(level: i32, rep: GroupElement) -> Self {
        let rep = rep.truncate(level);
        Self { level, rep }
    }

    pub fn subgroup(p: u32, level: i32) -> Self {
        Self {
            level,
            rep: GroupElement::zero(p),
        }
    }

    pub fn level(&self) -> i32 {
        self.level
    }

    pub fn rep(&self) -> &GroupElement {
        &self.rep
    }

    pub fn p(&self) -> u32 {
        self.rep.p
    }

    /// Haar measure `p^{-level}`.
    pub fn measure(&self) -> f64 {
        (self.rep.p as f64).powi(-self.level)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.truncate(self.level) == self.rep
    }
}

impl Ord for TimeCoset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| self.rep.cmp(&other.rep))
    }
}

impl PartialOrd for TimeCoset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coset `G_level^⊥ · rep` with `rep` reduced modulo `G_level^⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualCoset {
    level: i32,
    rep: CharacterWord,
}

impl DualCoset {
    pub fn new(level: i32, rep: CharacterWord) -> Self {
        let rep = rep.reduce(level);
        Self { level, rep }
    }

    pub fn subgroup(p: u32, level: i32) -> Self {
        Self {
            level,
            rep: CharacterWord::identity(p),
        }
    }

    pub fn level(&self) -> i32 {
        self.level
    }

    pub fn rep(&self) -> &CharacterWord {
        &self.rep
    }

    pub fn p(&self) -> u32 {
        self.rep.p
    }

    /// Measure `ν = p^{level}`.
    pub fn measure(&self) -> f64 {
        (self.rep.p as f64).powi(self.level)
    }

    pub fn contains(&self, chi: &CharacterWord) -> bool {
        chi.reduce(self.level) == self.rep
    }

    /// `true` when `other ⊆ self`.
    pub fn contains_coset(&self, other: &DualCoset) -> bool {
        other.level <= self.level && self.contains(&other.rep)
    }

    /// Two cosets of a chain of subgroups are either nested or disjoint.
    pub fn is_disjoint(&self, other: &DualCoset) -> bool {
        !self.contains_coset(other) && !other.contains_coset(self)
    }

    /// The image `E A^k`.
    pub fn dilate(&self, k: i32) -> Self {
        Self {
            level: self.level + k,
            rep: self.rep.dilate(k),
        }
    }

    /// The `k` with `self ⊆ G_k^⊥ \ G_{k-1}^⊥`, or `None` for the subgroup itself.
    pub fn annulus(&self) -> Option<i32> {
        self.rep.highest_index().map(|u| u + 1)
    }

    /// All cosets of `G_level^⊥` contained in `self`, in Monna order.
    pub fn split(&self, level: i32) -> Vec<DualCoset> {
        assert!(level <= self.level, "split target must be finer");
        let width = (self.level - level) as u32;
        let count = pow_u128(self.rep.p, width);
        (0..count)
            .map(|c| DualCoset {
                level,
                rep: self
                    .rep
                    .mul(&CharacterWord::from_index(self.rep.p, level, width, c)),
            })
            .collect()
    }
}

impl Ord for DualCoset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| self.rep.cmp(&other.rep))
    }
}

impl PartialOrd for DualCoset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DualCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.is_identity() {
            write!(f, "G[{}]^perp", self.level)
        } else {
            write!(f, "G[{}]^perp {}", self.level, self.rep)
        }
    }
}

/// The `p^s` elements `a_{-1}g_{-1} ∔ … ∔ a_{-s}g_{-s}` in Monna order,
/// so that the `k`-th entry has `λ = k`.
pub fn enumerate_h0(p: u32, s: u32) -> Vec<GroupElement> {
    let count = pow_u128(p, s);
    (0..count)
        .map(|k| {
            let mut digits = Vec::new();
            let mut rest = k;
            for i in 1..=s as i32 {
                let d = (rest % p as u128) as u32;
                rest /= p as u128;
                if d != 0 {
                    digits.push((-i, d));
                }
            }
            digits.reverse();
            GroupElement { p, digits }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn el(p: u32, digits: &[(i32, u32)]) -> GroupElement {
        GroupElement::from_digits(p, digits.iter().copied()).unwrap()
    }

    fn ch(p: u32, exps: &[(i32, u32)]) -> CharacterWord {
        CharacterWord::from_exponents(p, exps.iter().copied()).unwrap()
    }

    #[test]
    fn params_reject_composites_and_zero_levels() {
        assert_eq!(GroupParams::new(4, 1, 1), Err(Error::NotPrime(4)));
        assert_eq!(GroupParams::new(1, 1, 1), Err(Error::NotPrime(1)));
        assert!(matches!(
            GroupParams::new(3, 0, 1),
            Err(Error::NonPositiveLevel { .. })
        ));
        let params = GroupParams::new(5, 2, 3).unwrap();
        assert_eq!(params.height(), 6);
        assert_eq!(params.coefficient_count(), 125);
    }

    #[test]
    fn add_identity_and_carries() {
        let g0 = GroupElement::basis(3, 0);
        assert_eq!(g0.add(&GroupElement::zero(3)), g0);
        // 2 + 2 = 1 + 1·3
        let two = el(3, &[(0, 2)]);
        assert_eq!(two.add(&two), el(3, &[(0, 1), (1, 1)]));
        // 1/2 + 1 + 1 = 1/2 + 2
        let a = el(2, &[(-1, 1), (0, 1)]);
        assert_eq!(a.add(&GroupElement::basis(2, 0)), el(2, &[(-1, 1), (1, 1)]));
    }

    #[test]
    fn digit_validation() {
        assert!(matches!(
            GroupElement::from_digits(3, [(0, 3)]),
            Err(Error::DigitOutOfRange { .. })
        ));
        // repeated indices are summed
        assert_eq!(el(2, &[(0, 1), (0, 1)]), GroupElement::basis(2, 1));
    }

    #[test]
    fn subtraction_with_borrows() {
        // 1 - 1/3 = 2/3
        let r = GroupElement::basis(3, 0).subtract(&GroupElement::basis(3, -1), 2);
        assert_eq!(r, el(3, &[(-1, 2)]));
        // 0 - 1 = ...111 in base 2
        let r = GroupElement::zero(2).subtract(&GroupElement::basis(2, 0), 3);
        assert_eq!(r, el(2, &[(0, 1), (1, 1), (2, 1)]));
        let a = el(5, &[(-2, 3), (0, 4), (1, 2)]);
        let back = a.add(&a.negate(6)).truncate(6);
        assert!(back.is_zero());
    }

    #[test]
    fn dilation_shifts_digits() {
        assert_eq!(
            GroupElement::basis(3, 0).dilate(1),
            GroupElement::basis(3, -1)
        );
        let x = el(3, &[(-1, 2), (2, 1)]);
        assert_eq!(x.dilate(0), x);
        assert_eq!(
            CharacterWord::rademacher(3, 0).dilate(1),
            CharacterWord::rademacher(3, 1)
        );
    }

    #[test]
    fn pairing_values() {
        let r0 = CharacterWord::rademacher(5, 0);
        let v = pair(&r0, &GroupElement::basis(5, 0));
        let expected = Complex64::from_polar(1.0, std::f64::consts::TAU / 5.0);
        assert!((v - expected).norm() < 1e-15);
        assert_eq!(pair_phase(&r0, &GroupElement::basis(5, 1)), Phase::ZERO);
    }

    #[test]
    fn character_multiplication_carries_downward() {
        // r_0^2 · r_0 = r_0^3 = r_{-1} for p = 3
        let a = ch(3, &[(0, 2)]);
        let b = ch(3, &[(0, 1)]);
        assert_eq!(a.mul(&b), CharacterWord::rademacher(3, -1));
        let x = el(3, &[(-3, 1), (-1, 2), (0, 1)]);
        let lhs = pair(&a.mul(&b), &x);
        let rhs = pair(&a, &x) * pair(&b, &x);
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn monna_maps() {
        assert!(GroupElement::zero(3).monna().is_zero());
        assert_eq!(GroupElement::basis(3, -1).monna().to_f64(), Some(1.0));
        let h = el(3, &[(-1, 2), (-2, 1)]);
        assert_eq!(h.monna().to_f64(), Some(2.0 + 3.0));
        assert!(CharacterWord::identity(2).monna().is_zero());
        assert_eq!(CharacterWord::rademacher(7, 0).monna().to_f64(), Some(1.0));
        let w = ch(3, &[(-1, 1), (1, 2)]);
        assert!((w.monna().to_f64().unwrap() - (1.0 / 3.0 + 6.0)).abs() < 1e-15);
    }

    #[test]
    fn h0_enumeration_is_monna_sorted() {
        let two = enumerate_h0(2, 2);
        assert_eq!(
            two,
            vec![
                GroupElement::zero(2),
                GroupElement::basis(2, -1),
                GroupElement::basis(2, -2),
                el(2, &[(-1, 1), (-2, 1)]),
            ]
        );
        assert_eq!(
            enumerate_h0(3, 1),
            vec![GroupElement::zero(3), el(3, &[(-1, 1)]), el(3, &[(-1, 2)])]
        );
        for (k, h) in enumerate_h0(3, 3).iter().enumerate() {
            assert_eq!(h.monna().to_usize(), Some(k));
        }
        let mut sorted = enumerate_h0(5, 2);
        sorted.sort();
        assert_eq!(sorted, enumerate_h0(5, 2));
    }

    #[test]
    fn rademacher_membership_matches_reduction() {
        for level in -3..3 {
            for k in -4..4 {
                let r = CharacterWord::rademacher(2, k);
                let member = DualCoset::subgroup(2, level).contains(&r);
                assert_eq!(member, k < level);
                assert_eq!(r.in_annihilator(level), k < level);
            }
        }
    }

    #[test]
    fn coset_reduction_is_idempotent() {
        let x = el(3, &[(-2, 1), (0, 2), (3, 1)]);
        let c = TimeCoset::new(1, x.clone());
        assert_eq!(TimeCoset::new(1, c.rep().clone()), c);
        assert!(c.contains(&x));
        let w = ch(3, &[(-2, 1), (0, 2), (3, 1)]);
        let d = DualCoset::new(0, w.clone());
        assert_eq!(DualCoset::new(0, d.rep().clone()), d);
        assert!(d.contains(&w));
        assert_eq!(d.measure(), 1.0);
        assert!((c.measure() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dual_coset_nesting() {
        let big = DualCoset::new(0, ch(3, &[(1, 2)]));
        let small = DualCoset::new(-1, ch(3, &[(-1, 1), (1, 2)]));
        let other = DualCoset::new(-1, ch(3, &[(0, 1)]));
        assert!(big.contains_coset(&small));
        assert!(!small.contains_coset(&big));
        assert!(big.is_disjoint(&other));
        assert_eq!(big.split(-1).len(), 3);
        assert!(big.split(-2).iter().all(|c| big.contains_coset(c)));
        assert_eq!(big.annulus(), Some(2));
        assert_eq!(DualCoset::subgroup(3, 4).annulus(), None);
    }
}
