//! The p-ary mask tree.
//!
//! Node `m ∈ [0, p^H)`, `H = M + N + 1`, stands for the dual coset
//! `G_{-N}^⊥ r_{-N}^{d_0} r_{-N+1}^{d_1} …` where `d_i` are the base-`p` digits
//! of `m`. Its parent is `m div p` and it sits on level `s` = number of digits.
//! The mask value on the node is `λ_m`; nodes carry structure (zero or free)
//! before any value is solved.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{pow_usize, CharacterWord, DualCoset, GroupParams};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NodeState {
    /// Structural zero, a member of `Λ₀`.
    Zero,
    /// Nonzero, value not yet known.
    Free,
    Value(Complex64),
}

impl NodeState {
    pub fn is_zero(&self) -> bool {
        matches!(self, NodeState::Zero)
    }
}

/// Structural edits of a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "arg")]
pub enum Transform {
    /// Lift the zeros of the children of node `p^{N-1} + j` to the node.
    #[serde(rename = "i")]
    I(usize),
    /// Push the zero at node `p^N + l` down to its children.
    #[serde(rename = "ii")]
    II(usize),
    /// Lift at an arbitrary node.
    #[serde(rename = "lift")]
    Lift(usize),
    /// Push at an arbitrary node.
    #[serde(rename = "push")]
    Push(usize),
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::I(j) => write!(f, "i:{j}"),
            Transform::II(l) => write!(f, "ii:{l}"),
            Transform::Lift(k) => write!(f, "lift:{k}"),
            Transform::Push(k) => write!(f, "push:{k}"),
        }
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Parse(format!(
                "bad transform `{s}`; expected i:J, ii:L, lift:K or push:K"
            ))
        };
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let arg: usize = arg.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "i" => Ok(Transform::I(arg)),
            "ii" => Ok(Transform::II(arg)),
            "lift" => Ok(Transform::Lift(arg)),
            "push" => Ok(Transform::Push(arg)),
            _ => Err(bad()),
        }
    }
}

/// Outcome of the feasibility count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Exactly `p^{N+1} - 1` zeros: the zeros determine the mask.
    Determines,
    /// Short of zeros by the given deficit; padding fixes it.
    DeterminesAfterPadding(usize),
    /// Too many zeros: no mask has them all.
    Infeasible { zeros: usize },
}

/// Where padding zeros go.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum PaddingRule {
    /// Free leaves, smallest index first, then the level above, and so on.
    /// Leaf zeros do not change the zero pattern of `φ̂`.
    #[default]
    LeavesFirst,
    /// Free non-root nodes in increasing index.
    SmallestIndex,
    /// Exactly these nodes.
    Explicit(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaskTree {
    params: GroupParams,
    nodes: Vec<NodeState>,
}

impl MaskTree {
    /// Tree with every non-root node free.
    pub fn free(params: GroupParams) -> Result<Self> {
        let size = params
            .p()
            .checked_pow(params.height())
            .map(|s| s as usize)
            .filter(|&s| s <= crate::step::MAX_CELLS)
            .ok_or(Error::WindowTooLarge {
                p: params.p(),
                digits: params.height(),
            })?;
        let mut nodes = vec![NodeState::Free; size];
        nodes[0] = NodeState::Value(Complex64::new(1.0, 0.0));
        Ok(Self { params, nodes })
    }

    /// Tree with the given structural zeros.
    pub fn with_zeros(params: GroupParams, zeros: &[usize]) -> Result<Self> {
        let mut tree = Self::free(params)?;
        for &z in zeros {
            tree.set_zero(z)?;
        }
        Ok(tree)
    }

    /// Zeros at `p^N ..= p^{N+1} - 2` and `p^{2N+1} - p^N .. p^{2N+1}`.
    pub fn initial(params: GroupParams) -> Result<Self> {
        if params.m() != params.n() {
            return Err(Error::UnequalLevels {
                m: params.m(),
                n: params.n(),
            });
        }
        let p = params.p();
        let n = params.n();
        let pn = pow_usize(p, n);
        let top = pow_usize(p, 2 * n + 1);
        let zeros: Vec<usize> = (pn..=pow_usize(p, n + 1) - 2)
            .chain(top - pn..top)
            .collect();
        Self::with_zeros(params, &zeros)
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn node(&self, m: usize) -> Result<NodeState> {
        self.check(m)?;
        Ok(self.nodes[m])
    }

    fn check(&self, m: usize) -> Result<()> {
        if m >= self.nodes.len() {
            Err(Error::NodeOutOfRange {
                node: m,
                size: self.nodes.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn set_zero(&mut self, m: usize) -> Result<()> {
        self.check(m)?;
        if m == 0 {
            return Err(Error::TransformRejected {
                node: 0,
                reason: "the root value is fixed to 1",
            });
        }
        self.nodes[m] = NodeState::Zero;
        Ok(())
    }

    pub fn set_free(&mut self, m: usize) -> Result<()> {
        self.check(m)?;
        if m != 0 {
            self.nodes[m] = NodeState::Free;
        }
        Ok(())
    }

    /// Number of tree levels above the root.
    pub fn height(&self) -> u32 {
        self.params.height()
    }

    /// Level of node `m`: the number of its base-`p` digits.
    pub fn level_of(&self, m: usize) -> u32 {
        node_level(self.params.p(), m)
    }

    /// Nodes of level `s`, `s ≥ 1`.
    pub fn level_range(&self, s: u32) -> std::ops::Range<usize> {
        level_range(self.params.p(), s)
    }

    /// Children of a non-leaf, non-root node.
    pub fn children(&self, m: usize) -> Option<std::ops::Range<usize>> {
        let p = self.params.p() as usize;
        if m == 0 {
            return None;
        }
        let first = m * p;
        (first + p <= self.nodes.len()).then(|| first..first + p)
    }

    /// `Λ₀`, ascending.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&m| self.nodes[m].is_zero())
            .collect()
    }

    pub fn zero_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_zero()).count()
    }

    /// The coset of `G_{-N}^⊥` denoted by node `m`.
    pub fn node_coset(&self, m: usize) -> Result<DualCoset> {
        self.check(m)?;
        Ok(node_coset(self.params, m))
    }

    /// Inverse of [`node_coset`](Self::node_coset).
    pub fn coset_node(&self, coset: &DualCoset) -> Option<usize> {
        let n = -(self.params.n() as i32);
        if coset.level() != n {
            return None;
        }
        let p = self.params.p() as usize;
        let mut m = 0usize;
        for &(j, e) in coset.rep().exponents() {
            let i = (j - n) as u32;
            if i >= self.height() {
                return None;
            }
            m += e as usize * p.pow(i);
        }
        Some(m)
    }

    /// `true` for nodes with a zero on the path to the root, inclusive.
    pub fn covered(&self) -> Vec<bool> {
        let p = self.params.p() as usize;
        let mut covered = vec![false; self.nodes.len()];
        for m in 1..self.nodes.len() {
            covered[m] = self.nodes[m].is_zero() || covered[m / p];
        }
        covered
    }

    /// Every root-to-leaf path must contain a zero.
    pub fn validate(&self) -> Result<()> {
        let covered = self.covered();
        let leaves = self.level_range(self.height());
        match leaves.clone().find(|&m| !covered[m]) {
            Some(leaf) => Err(Error::ZeroFreePath { leaf }),
            None => Ok(()),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Number of zeros that determine a mask, `p^{N+1} - 1`.
    pub fn required_zeros(&self) -> usize {
        self.params.coefficient_count() - 1
    }

    pub fn classify(&self) -> Result<Classification> {
        self.validate()?;
        let zeros = self.zero_count();
        let need = self.required_zeros();
        Ok(match zeros.cmp(&need) {
            std::cmp::Ordering::Equal => Classification::Determines,
            std::cmp::Ordering::Less => Classification::DeterminesAfterPadding(need - zeros),
            std::cmp::Ordering::Greater => Classification::Infeasible { zeros },
        })
    }

    /// Adds zeros until the tree determines a mask. Returns the padded nodes.
    pub fn pad(&mut self, rule: &PaddingRule) -> Result<Vec<usize>> {
        let deficit = match self.classify()? {
            Classification::Determines => return Ok(Vec::new()),
            Classification::Infeasible { zeros } => {
                return Err(Error::Infeasible {
                    zeros,
                    limit: self.required_zeros(),
                })
            }
            Classification::DeterminesAfterPadding(d) => d,
        };
        let free: Vec<usize> = match rule {
            PaddingRule::LeavesFirst => (1..=self.height())
                .rev()
                .flat_map(|s| self.level_range(s))
                .filter(|&m| !self.nodes[m].is_zero())
                .collect(),
            PaddingRule::SmallestIndex => (1..self.nodes.len())
                .filter(|&m| !self.nodes[m].is_zero())
                .collect(),
            PaddingRule::Explicit(list) => {
                if list.len() != deficit {
                    return Err(Error::PaddingExhausted {
                        needed: deficit,
                        available: list.len(),
                    });
                }
                for &m in list {
                    self.check(m)?;
                    if m == 0 || self.nodes[m].is_zero() {
                        return Err(Error::TransformRejected {
                            node: m,
                            reason: "padding node must be a free non-root node",
                        });
                    }
                }
                list.clone()
            }
        };
        if free.len() < deficit {
            return Err(Error::PaddingExhausted {
                needed: deficit,
                available: free.len(),
            });
        }
        let chosen: Vec<usize> = free.into_iter().take(deficit).collect();
        for &m in &chosen {
            self.nodes[m] = NodeState::Zero;
        }
        Ok(chosen)
    }

    /// Node becomes zero, its children become free. The children must all be zero.
    pub fn lift_zero(&self, m: usize) -> Result<Self> {
        self.check(m)?;
        let children = self.children(m).ok_or(Error::TransformRejected {
            node: m,
            reason: "node has no children",
        })?;
        if self.nodes[m].is_zero() {
            return Err(Error::TransformRejected {
                node: m,
                reason: "node is already zero",
            });
        }
        if !children.clone().all(|c| self.nodes[c].is_zero()) {
            return Err(Error::TransformRejected {
                node: m,
                reason: "not all children are zero",
            });
        }
        let mut out = self.clone();
        out.nodes[m] = NodeState::Zero;
        for c in children {
            out.nodes[c] = NodeState::Free;
        }
        Ok(out)
    }

    /// Node becomes free, its children become zero. The children must all be nonzero.
    pub fn push_zero(&self, m: usize) -> Result<Self> {
        self.check(m)?;
        let children = self.children(m).ok_or(Error::TransformRejected {
            node: m,
            reason: "node has no children",
        })?;
        if !self.nodes[m].is_zero() {
            return Err(Error::TransformRejected {
                node: m,
                reason: "node is not zero",
            });
        }
        if children.clone().any(|c| self.nodes[c].is_zero()) {
            return Err(Error::TransformRejected {
                node: m,
                reason: "a child is already zero",
            });
        }
        let mut out = self.clone();
        out.nodes[m] = NodeState::Free;
        for c in children {
            out.nodes[c] = NodeState::Zero;
        }
        Ok(out)
    }

    /// Lift at node `p^{N-1} + j`, `0 ≤ j < p^N - p^{N-1}`.
    pub fn transform_i(&self, j: usize) -> Result<Self> {
        let p = self.params.p();
        let n = self.params.n();
        let first = pow_usize(p, n - 1);
        let count = pow_usize(p, n) - first;
        if j >= count {
            return Err(Error::NodeOutOfRange {
                node: first + j,
                size: pow_usize(p, n),
            });
        }
        self.lift_zero(first + j)
    }

    /// Push at node `p^N + l`, `0 ≤ l < p^{N+1} - p^N`.
    pub fn transform_ii(&self, l: usize) -> Result<Self> {
        let p = self.params.p();
        let n = self.params.n();
        let first = pow_usize(p, n);
        let count = pow_usize(p, n + 1) - first;
        if l >= count {
            return Err(Error::NodeOutOfRange {
                node: first + l,
                size: pow_usize(p, n + 1),
            });
        }
        self.push_zero(first + l)
    }

    pub fn apply(&self, t: Transform) -> Result<Self> {
        match t {
            Transform::I(j) => self.transform_i(j),
            Transform::II(l) => self.transform_ii(l),
            Transform::Lift(m) => self.lift_zero(m),
            Transform::Push(m) => self.push_zero(m),
        }
    }

    /// The same structure with concrete values on the free nodes.
    pub fn with_values(&self, lambda: &[Complex64]) -> Result<Self> {
        if lambda.len() != self.nodes.len() {
            return Err(Error::Parse(format!(
                "expected {} node values, got {}",
                self.nodes.len(),
                lambda.len()
            )));
        }
        let mut out = self.clone();
        for (node, &v) in out.nodes.iter_mut().zip(lambda).skip(1) {
            if !node.is_zero() {
                *node = NodeState::Value(v);
            }
        }
        Ok(out)
    }

    /// Values of the tree `T(φ̂)`: products of node values along the path to the root.
    pub fn phi_hat_tree(&self) -> Result<Vec<Complex64>> {
        let p = self.params.p() as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); self.nodes.len()];
        for m in 0..self.nodes.len() {
            let v = match self.nodes[m] {
                NodeState::Zero => Complex64::new(0.0, 0.0),
                NodeState::Value(v) => v,
                NodeState::Free => return Err(Error::Unsolved { node: m }),
            };
            out[m] = if m == 0 { v } else { v * out[m / p] };
        }
        Ok(out)
    }
}

pub(crate) fn node_level(p: u32, mut m: usize) -> u32 {
    let mut s = 0;
    while m > 0 {
        m /= p as usize;
        s += 1;
    }
    s
}

pub(crate) fn level_range(p: u32, s: u32) -> std::ops::Range<usize> {
    if s == 0 {
        0..1
    } else {
        pow_usize(p, s - 1)..pow_usize(p, s)
    }
}

pub(crate) fn node_coset(params: GroupParams, m: usize) -> DualCoset {
    let n = -(params.n() as i32);
    DualCoset::new(
        n,
        CharacterWord::from_index(params.p(), n, params.height(), m as u128),
    )
}

/// The tree of `φ̂(χA^{-1})`: every node takes its parent's value, the root keeps its own.
pub fn shift_tree<T: Clone>(phi_hat: &[T], p: u32) -> Vec<T> {
    let p = p as usize;
    (0..phi_hat.len()).map(|m| phi_hat[m / p].clone()).collect()
}
