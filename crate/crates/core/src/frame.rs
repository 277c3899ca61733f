//! Wavelet supports from the tree of `φ̂(χA^{-1})`, and the tiling check that
//! makes the resulting system a tight frame.
//!
//! Every wavelet has `ψ̂ = 1_E` for a dual coset `E` on which `φ̂(χA^{-1})`
//! does not vanish, with mask `m_j = 1/φ̂(χA^{-1})` on `E`. The system is a
//! tight frame when the `E_j` are disjoint and the dilates `E_j A^{t(j)}` tile
//! `G_{M+1}^⊥ \ G_M^⊥`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{pow_usize, CharacterWord, DualCoset, GroupParams};
use crate::mask::{solve_mask, MaskSpec};
use crate::step::{StepFunctionFreq, StepFunctionTime};
use crate::tree::{level_range, node_coset, shift_tree, MaskTree, PaddingRule, Transform};

/// Tolerance for `m_j φ̂(χA^{-1}) = 1` on `E_j`.
pub const MASK_TOL: f64 = 1e-12;

/// Which `j ∈ J₁` get the finer split at level `-N` in the `n = 1` branch.
/// The rest of `J₁` stays at level `-N + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JPartition {
    pub fine: Vec<u32>,
}

impl FromStr for JPartition {
    type Err = Error;

    /// Comma-separated `j` values, e.g. `1,2`; empty for the default.
    fn from_str(s: &str) -> Result<Self> {
        let mut fine = Vec::new();
        for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let j: u32 = part
                .parse()
                .map_err(|_| Error::InvalidPartition(format!("`{part}` is not an integer")))?;
            fine.push(j);
        }
        fine.sort_unstable();
        fine.dedup();
        Ok(Self { fine })
    }
}

/// How the wavelet supports were chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Branch {
    /// First zero of the shifted tree on level `n + 1`, `n > 1`.
    General { n: u32 },
    /// `n = 1`: `j1_fine` split at level `-N`, `j1_coarse` at `-N + 1`, `j0` at `-N`.
    N1 {
        j1_coarse: Vec<u32>,
        j1_fine: Vec<u32>,
        j0: Vec<u32>,
    },
    /// Every level-1 mask value vanishes: `φ̂ = 1_{G_{-N}^⊥}`, no wavelets.
    Orthogonal,
    /// Supports given by the caller.
    Custom,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::General { n } => write!(f, "general (n = {n})"),
            Branch::N1 { j1_fine, .. } if j1_fine.is_empty() => write!(f, "n1-default"),
            Branch::N1 { .. } => write!(f, "n1-custom"),
            Branch::Orthogonal => write!(f, "orthogonal"),
            Branch::Custom => write!(f, "custom"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveletSpec {
    pub label: String,
    /// Support of `ψ̂`.
    pub e: DualCoset,
    /// Dilation exponent `t(j)`.
    pub t: i32,
    pub psi_hat: StepFunctionFreq,
    pub psi: StepFunctionTime,
    /// `m_j` on `G_{M+1}^⊥`, at level `-N`.
    pub mask: StepFunctionFreq,
}

/// Options for [`build_frame`].
#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    pub transforms: Vec<Transform>,
    pub padding: PaddingRule,
    pub partition: Option<JPartition>,
    pub custom: Option<Vec<DualCoset>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameSystem {
    pub params: GroupParams,
    /// Tree before the transforms.
    pub base_tree: MaskTree,
    pub transforms: Vec<Transform>,
    /// Zeros added by padding.
    pub padded: Vec<usize>,
    pub mask: MaskSpec,
    pub phi_hat: StepFunctionFreq,
    pub phi: StepFunctionTime,
    /// `φ̂(χA^{-1})` on every tree node.
    pub shifted: Vec<Complex64>,
    /// Structural zeros of `φ̂(χA^{-1})`.
    pub shifted_zero: Vec<bool>,
    /// Level `n` with the first zero of the shifted tree on level `n + 1`.
    pub n: Option<u32>,
    pub branch: Branch,
    pub wavelets: Vec<WaveletSpec>,
}

impl FrameSystem {
    pub fn is_orthogonal(&self) -> bool {
        self.branch == Branch::Orthogonal
    }

    /// `ϕ(x) = p^N φ(A^N x)`, the refinable function rescaled to `G_0`.
    pub fn renormalized_phi(&self) -> StepFunctionTime {
        let n = self.params.n() as i32;
        self.phi
            .dilate(n)
            .scale(Complex64::new((self.params.p() as f64).powi(n), 0.0))
    }
}

/// First `n` such that level `n + 1` of the shifted tree has a structural zero.
pub fn smallest_zero_level(shifted_zero: &[bool], p: u32) -> Result<u32> {
    let height = crate::tree::node_level(p, shifted_zero.len() - 1);
    for s in 1..=height {
        if level_range(p, s).any(|m| shifted_zero[m]) {
            if s == 1 {
                return Err(Error::ZeroOnLevel { level: 1 });
            }
            return Ok(s - 1);
        }
    }
    Err(Error::NoZeroLevel)
}

/// Runs the whole pipeline: transforms, padding, solve, branch choice.
pub fn build_frame(
    params: GroupParams,
    base: Option<MaskTree>,
    options: &BuildOptions,
) -> Result<FrameSystem> {
    if params.m() != params.n() {
        return Err(Error::UnequalLevels {
            m: params.m(),
            n: params.n(),
        });
    }
    let base_tree = match base {
        Some(t) => t,
        None => MaskTree::initial(params)?,
    };
    let mut tree = base_tree.clone();
    for &t in &options.transforms {
        tree = tree.apply(t)?;
    }
    let padded = tree.pad(&options.padding)?;
    let mask = solve_mask(&tree)?;
    from_mask(params, base_tree, options, padded, mask)
}

/// Builds the wavelets for an already solved mask.
pub fn from_mask(
    params: GroupParams,
    base_tree: MaskTree,
    options: &BuildOptions,
    padded: Vec<usize>,
    mask: MaskSpec,
) -> Result<FrameSystem> {
    let p = params.p();
    let phi_tree = mask.phi_hat_tree();
    let shifted = shift_tree(&phi_tree, p);
    let shifted_zero = shift_tree(&mask.tree().covered(), p);
    let phi_hat = mask.phi_hat();
    let phi = phi_hat.inverse_fourier();
    let level1_zero: Vec<bool> = level_range(p, 1)
        .map(|j| mask.tree().nodes()[j].is_zero())
        .collect();

    let mut frame = FrameSystem {
        params,
        base_tree,
        transforms: options.transforms.clone(),
        padded,
        mask,
        phi_hat,
        phi,
        shifted,
        shifted_zero,
        n: None,
        branch: Branch::Custom,
        wavelets: Vec::new(),
    };

    if let Some(list) = &options.custom {
        if options.partition.is_some() {
            return Err(Error::BranchMismatch(
                "a J-partition cannot be combined with explicit supports".into(),
            ));
        }
        let supports = list
            .iter()
            .enumerate()
            .map(|(i, e)| (format!("{}", i + 1), e.clone()))
            .collect();
        frame.wavelets = make_wavelets(&frame, supports)?;
        return Ok(frame);
    }

    if level1_zero.iter().all(|&z| z) {
        if options
            .partition
            .as_ref()
            .is_some_and(|j| !j.fine.is_empty())
        {
            return Err(Error::BranchMismatch(
                "every level-1 mask value is zero; there is no J1 to partition".into(),
            ));
        }
        frame.branch = Branch::Orthogonal;
        frame.n = Some(1);
        return Ok(frame);
    }

    let n = smallest_zero_level(&frame.shifted_zero, p)?;
    frame.n = Some(n);
    let (branch, supports) = if n > 1 {
        if options
            .partition
            .as_ref()
            .is_some_and(|j| !j.fine.is_empty())
        {
            return Err(Error::BranchMismatch(format!(
                "a J-partition applies only when n = 1 (here n = {n})"
            )));
        }
        general_supports(params, n)
    } else {
        n1_supports(params, &level1_zero, options.partition.as_ref())?
    };
    frame.branch = branch;
    frame.wavelets = make_wavelets(&frame, supports)?;
    Ok(frame)
}

/// `E_α = G_{-N+n-1}^⊥ r_{-N+n-1}^α`, `α = 1 … p-1`.
fn general_supports(params: GroupParams, n: u32) -> (Branch, Vec<(String, DualCoset)>) {
    let p = params.p();
    let u = -(params.n() as i32) + n as i32 - 1;
    let supports = (1..p)
        .map(|a| {
            let word = CharacterWord::from_exponents(p, [(u, a)]).expect("exponent below p");
            (a.to_string(), DualCoset::new(u, word))
        })
        .collect();
    (Branch::General { n }, supports)
}

fn n1_supports(
    params: GroupParams,
    level1_zero: &[bool],
    partition: Option<&JPartition>,
) -> Result<(Branch, Vec<(String, DualCoset)>)> {
    let p = params.p();
    let low = -(params.n() as i32);
    let j1: Vec<u32> = (1..p).filter(|&j| !level1_zero[(j - 1) as usize]).collect();
    let j0: Vec<u32> = (1..p).filter(|&j| level1_zero[(j - 1) as usize]).collect();
    let fine = partition.map(|j| j.fine.clone()).unwrap_or_default();
    if let Some(bad) = fine.iter().find(|j| !j1.contains(j)) {
        return Err(Error::InvalidPartition(format!(
            "{bad} is not in J1 = {j1:?}"
        )));
    }
    let coarse: Vec<u32> = j1.iter().copied().filter(|j| !fine.contains(j)).collect();
    let word =
        |exps: Vec<(i32, u32)>| CharacterWord::from_exponents(p, exps).expect("exponents below p");

    let mut supports = Vec::new();
    for j in 1..p {
        if coarse.contains(&j) {
            supports.push((
                j.to_string(),
                DualCoset::new(low + 1, word(vec![(low + 1, j)])),
            ));
        } else if fine.contains(&j) {
            for k in 0..p {
                supports.push((
                    format!("({j},{k})"),
                    DualCoset::new(low, word(vec![(low, k), (low + 1, j)])),
                ));
            }
        } else {
            supports.push((j.to_string(), DualCoset::new(low, word(vec![(low, j)]))));
        }
    }
    Ok((
        Branch::N1 {
            j1_coarse: coarse,
            j1_fine: fine,
            j0,
        },
        supports,
    ))
}

fn make_wavelets(
    frame: &FrameSystem,
    supports: Vec<(String, DualCoset)>,
) -> Result<Vec<WaveletSpec>> {
    let params = frame.params;
    let p = params.p();
    let low = -(params.n() as i32);
    let top = params.m() as i32 + 1;
    supports
        .into_iter()
        .map(|(label, e)| {
            let u = e.rep().highest_index().ok_or_else(|| {
                Error::BranchMismatch(format!("support {e} contains the trivial character"))
            })?;
            let t = params.m() as i32 - u;
            let psi_hat = StepFunctionFreq::indicator(&e, Complex64::new(1.0, 0.0))?;
            let psi = psi_hat.inverse_fourier();
            let mut mask = StepFunctionFreq::zeros(p, low, top)?;
            for m in 0..frame.shifted.len() {
                let c = node_coset(params, m);
                if e.contains_coset(&c) && !frame.shifted_zero[m] {
                    mask.values_mut()[m] = frame.shifted[m].inv();
                }
            }
            Ok(WaveletSpec {
                label,
                e,
                t,
                psi_hat,
                psi,
                mask,
            })
        })
        .collect()
}

/// Result of [`check_theorem31`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TilingReport {
    pub violations: Vec<String>,
    /// `Σ_j ν(E_j) p^{t(j)}`.
    pub dilated_measure: f64,
    /// `ν(G_{M+1}^⊥ \ G_M^⊥)`.
    pub annulus_measure: f64,
}

impl TilingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Cells of `G_level^⊥` in `coset`, numbered within `G_{top}^⊥ / G_level^⊥`,
/// or `None` when the coset is finer than `level` or leaves `G_top^⊥`.
fn cells(coset: &DualCoset, level: i32, top: i32) -> Option<Vec<usize>> {
    if coset.level() < level || coset.annulus().is_some_and(|a| a > top) || coset.level() > top {
        return None;
    }
    let p = coset.p() as usize;
    let width = (coset.level() - level) as u32;
    let mut base = 0usize;
    for &(j, e) in coset.rep().exponents() {
        base += e as usize * p.pow((j - level) as u32);
    }
    Some((0..p.pow(width)).map(|k| base + k).collect())
}

/// Checks that `cosets` tile the annulus `G_a^⊥ \ G_{a-1}^⊥` at cell level `level`.
fn tile_annulus(cosets: &[(String, DualCoset)], a: i32, level: i32, out: &mut Vec<String>) {
    let Some(first) = cosets.first() else {
        out.push(format!("no cosets to cover annulus {a}"));
        return;
    };
    let p = first.1.p();
    let mut count = vec![0u32; pow_usize(p, (a - level) as u32)];
    for (label, d) in cosets {
        if d.annulus() != Some(a) {
            out.push(format!(
                "dilated support {d} of wavelet {label} is not in annulus {a}"
            ));
            continue;
        }
        match cells(d, level, a) {
            Some(list) => list.into_iter().for_each(|c| count[c] += 1),
            None => out.push(format!(
                "dilated support {d} of wavelet {label} is finer than level {level}"
            )),
        }
    }
    let inner = pow_usize(p, (a - 1 - level) as u32);
    for (c, &k) in count.iter().enumerate() {
        let cell = DualCoset::new(
            level,
            CharacterWord::from_index(p, level, (a - level) as u32, c as u128),
        );
        if c < inner && k > 0 {
            out.push(format!("cell {cell} below the annulus is covered"));
        } else if c >= inner && k == 0 {
            out.push(format!("cell {cell} is not covered"));
        } else if k > 1 {
            out.push(format!("cell {cell} is covered {k} times"));
        }
    }
}

/// Disjointness and tiling of the supports, and the mask identities on each `E_j`.
pub fn check_theorem31(frame: &FrameSystem) -> TilingReport {
    let params = frame.params;
    let p = params.p();
    let low = -(params.n() as i32);
    let m = params.m() as i32;
    let mut report = TilingReport {
        annulus_measure: (p as f64).powi(m + 1) - (p as f64).powi(m),
        ..Default::default()
    };
    let out = &mut report.violations;

    if frame.is_orthogonal() {
        let expected =
            StepFunctionFreq::indicator(&DualCoset::subgroup(p, low), Complex64::new(1.0, 0.0))
                .expect("small window");
        if frame.phi_hat.max_abs_diff(&expected) != Ok(0.0) {
            out.push("orthogonal branch but phi-hat is not the indicator of G_{-N}^perp".into());
        }
        return report;
    }
    if frame.wavelets.is_empty() {
        out.push("no wavelets".into());
        return report;
    }

    let w = &frame.wavelets;
    for i in 0..w.len() {
        for k in i + 1..w.len() {
            if !w[i].e.is_disjoint(&w[k].e) {
                out.push(format!(
                    "supports of wavelets {} and {} overlap: {} and {}",
                    w[i].label, w[k].label, w[i].e, w[k].e
                ));
            }
        }
    }
    let dilated: Vec<(String, DualCoset)> = w
        .iter()
        .map(|x| (x.label.clone(), x.e.dilate(x.t)))
        .collect();
    report.dilated_measure = w.iter().map(|x| x.e.measure() * (p as f64).powi(x.t)).sum();
    tile_annulus(&dilated, m + 1, low, out);

    for x in w {
        let Some(list) = cells(&x.e, low, m + 1) else {
            out.push(format!(
                "support {} of wavelet {} does not lie in the tree window",
                x.e, x.label
            ));
            continue;
        };
        if let Some(&c) = list.iter().find(|&&c| frame.shifted_zero[c]) {
            out.push(format!(
                "phi-hat(chi A^-1) vanishes on {} inside the support of wavelet {}",
                node_coset(params, c),
                x.label
            ));
        }
        let mut inside = vec![false; frame.shifted.len()];
        list.iter().for_each(|&c| inside[c] = true);
        for (c, (&mv, &sv)) in x.mask.values().iter().zip(&frame.shifted).enumerate() {
            let want = if inside[c] { 1.0 } else { 0.0 };
            if (mv * sv - want).norm() > MASK_TOL {
                out.push(format!(
                    "m_j phi-hat(chi A^-1) = {} on {} for wavelet {}, expected {want}",
                    mv * sv,
                    node_coset(params, c),
                    x.label
                ));
                break;
            }
        }
    }
    report
}

/// Checks that the full dilation family tiles `G_K^⊥ \ G_{-K}^⊥`, one annulus at a time.
pub fn check_dilation_family(frame: &FrameSystem, k: i32) -> Vec<String> {
    let params = frame.params;
    let m = params.m() as i32;
    let width = params.height() as i32;
    let mut out = Vec::new();
    for a in -k + 1..=k {
        let shift = a - (m + 1);
        let family: Vec<(String, DualCoset)> = frame
            .wavelets
            .iter()
            .map(|x| (x.label.clone(), x.e.dilate(x.t + shift)))
            .collect();
        tile_annulus(&family, a, a - width, &mut out);
    }
    out
}

/// One named frame configuration.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub params: GroupParams,
    pub tree: MaskTree,
    pub options: BuildOptions,
}

impl Preset {
    pub fn build(&self) -> Result<FrameSystem> {
        build_frame(self.params, Some(self.tree.clone()), &self.options)
    }
}

/// The first single transform of the initial tree that still yields a valid frame.
///
/// Candidates are tried in the order `i:j`, `ii:l`, then lifts and pushes at any node.
pub fn preset_transform(params: GroupParams) -> Result<Transform> {
    let tree = MaskTree::initial(params)?;
    let p = params.p();
    let n = params.n();
    let count_i = pow_usize(p, n) - pow_usize(p, n - 1);
    let count_ii = pow_usize(p, n + 1) - pow_usize(p, n);
    let candidates = (0..count_i)
        .map(Transform::I)
        .chain((0..count_ii).map(Transform::II))
        .chain((1..tree.len()).map(Transform::Lift))
        .chain((1..tree.len()).map(Transform::Push));
    for t in candidates {
        let options = BuildOptions {
            transforms: vec![t],
            ..Default::default()
        };
        if let Ok(frame) = build_frame(params, Some(tree.clone()), &options) {
            if !frame.is_orthogonal() && check_theorem31(&frame).passed() {
                return Ok(t);
            }
        }
    }
    Err(Error::BranchMismatch(format!(
        "no single transform of the initial tree works for p = {p}, N = {n}"
    )))
}

/// Tree whose level-1 nodes are all zero.
pub fn degenerate_tree(params: GroupParams) -> Result<MaskTree> {
    let zeros: Vec<usize> = level_range(params.p(), 1).collect();
    MaskTree::with_zeros(params, &zeros)
}

/// Initial and transformed presets for `p ∈ {2, 3, 5}`, `N ∈ {1, 2}`.
pub fn presets() -> Result<Vec<Preset>> {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        for n in [1, 2] {
            let params = GroupParams::symmetric(p, n)?;
            let tree = MaskTree::initial(params)?;
            out.push(Preset {
                name: format!("p{p}-n{n}-initial"),
                params,
                tree: tree.clone(),
                options: BuildOptions::default(),
            });
            let t = preset_transform(params)?;
            out.push(Preset {
                name: format!("p{p}-n{n}-{}", t.to_string().replace(':', "")),
                params,
                tree,
                options: BuildOptions {
                    transforms: vec![t],
                    ..Default::default()
                },
            });
        }
    }
    Ok(out)
}
