//! JSON form of a built frame.
//!
//! Complex numbers are `[re, im]`, characters are sorted `[index, exponent]`
//! pairs. Loading and saving again reproduces the input byte for byte.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{check_theorem31, from_mask, Branch, BuildOptions, FrameSystem, JPartition};
use crate::group::{CharacterWord, DualCoset, GroupParams};
use crate::mask::MaskSpec;
use crate::step::StepFunctionFreq;
use crate::tree::{MaskTree, NodeState, Transform};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub p: u32,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
}

/// Node entry of a tree literal: `"0"`, `"free"` or `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeDoc {
    Tag(String),
    Value([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosetDoc {
    pub level: i32,
    pub word: Vec<(i32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveletDoc {
    pub label: String,
    #[serde(rename = "E")]
    pub e: CosetDoc,
    pub t: i32,
    /// Nonzero values of `m_j` by tree node.
    pub mask: Vec<(usize, [f64; 2])>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchConfig {
    pub j_partition: Option<Vec<u32>>,
    pub custom_e: Option<Vec<CosetDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildSummary {
    pub theorem31: bool,
    pub violations: Vec<String>,
    pub system_residual: f64,
    pub min_nonzero_ratio: f64,
    pub refinement_error: f64,
    pub phi_max: f64,
    pub support_propagation: bool,
}

/// Tree literal accepted by `build --tree`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub params: ParamsDoc,
    pub tree: Vec<(usize, NodeDoc)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    pub schema_version: String,
    pub params: ParamsDoc,
    /// Base tree before the transforms; nodes not listed are free.
    pub tree: Vec<(usize, NodeDoc)>,
    pub transforms: Vec<Transform>,
    pub padding: Vec<usize>,
    pub branch: Branch,
    pub n: Option<u32>,
    pub config: BranchConfig,
    pub lambda: Vec<[f64; 2]>,
    pub beta: Vec<[f64; 2]>,
    pub wavelets: Vec<WaveletDoc>,
    pub verification: BuildSummary,
}

fn pair_of(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex_of(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl ParamsDoc {
    pub fn from_params(g: GroupParams) -> Self {
        Self {
            p: g.p(),
            n: g.n(),
            m: g.m(),
        }
    }

    pub fn to_params(&self) -> Result<GroupParams> {
        GroupParams::new(self.p, self.n, self.m)
    }
}

impl CosetDoc {
    pub fn from_coset(c: &DualCoset) -> Self {
        Self {
            level: c.level(),
            word: c.rep().exponents().to_vec(),
        }
    }

    pub fn to_coset(&self, p: u32) -> Result<DualCoset> {
        let rep = CharacterWord::from_exponents(p, self.word.iter().copied())?;
        if rep.lowest_index().is_some_and(|i| i < self.level) {
            return Err(Error::Parse(format!(
                "coset word has exponents below its level {}",
                self.level
            )));
        }
        Ok(DualCoset::new(self.level, rep))
    }
}

/// Tree literal entries for the structural content of a tree.
pub fn tree_entries(tree: &MaskTree) -> Vec<(usize, NodeDoc)> {
    tree.nodes()
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(m, n)| match n {
            NodeState::Zero => Some((m, NodeDoc::Tag("0".into()))),
            NodeState::Free => None,
            NodeState::Value(v) => Some((m, NodeDoc::Value(pair_of(*v)))),
        })
        .collect()
}

/// Builds a tree from literal entries; unlisted nodes are free.
pub fn tree_from_entries(params: GroupParams, entries: &[(usize, NodeDoc)]) -> Result<MaskTree> {
    let mut tree = MaskTree::free(params)?;
    for (m, v) in entries {
        match v {
            NodeDoc::Tag(t) if t == "0" || t == "zero" => tree.set_zero(*m)?,
            NodeDoc::Tag(t) if t == "free" => tree.set_free(*m)?,
            NodeDoc::Tag(t) => {
                return Err(Error::Parse(format!(
                    "node {m}: expected \"0\", \"free\" or [re, im], got \"{t}\""
                )))
            }
            NodeDoc::Value([re, im]) => {
                if *m == 0 {
                    if (*re, *im) != (1.0, 0.0) {
                        return Err(Error::Parse("the root value must be 1".into()));
                    }
                } else if *re == 0.0 && *im == 0.0 {
                    tree.set_zero(*m)?;
                } else {
                    tree.node(*m)?;
                    tree.set_free(*m)?;
                }
            }
        }
    }
    Ok(tree)
}

impl TreeFile {
    pub fn to_tree(&self) -> Result<MaskTree> {
        tree_from_entries(self.params.to_params()?, &self.tree)
    }
}

impl FrameDocument {
    pub fn from_frame(frame: &FrameSystem, options: &BuildOptions) -> Self {
        let report = check_theorem31(frame);
        let mask = &frame.mask;
        Self {
            schema_version: SCHEMA_VERSION.into(),
            params: ParamsDoc::from_params(frame.params),
            tree: tree_entries(&frame.base_tree),
            transforms: frame.transforms.clone(),
            padding: frame.padded.clone(),
            branch: frame.branch.clone(),
            n: frame.n,
            config: BranchConfig {
                j_partition: options.partition.as_ref().map(|j| j.fine.clone()),
                custom_e: options
                    .custom
                    .as_ref()
                    .map(|l| l.iter().map(CosetDoc::from_coset).collect()),
            },
            lambda: mask.lambda().iter().copied().map(pair_of).collect(),
            beta: mask.beta().iter().copied().map(pair_of).collect(),
            wavelets: frame
                .wavelets
                .iter()
                .map(|w| WaveletDoc {
                    label: w.label.clone(),
                    e: CosetDoc::from_coset(&w.e),
                    t: w.t,
                    mask: w
                        .mask
                        .values()
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| v.norm() > 0.0)
                        .map(|(m, v)| (m, pair_of(*v)))
                        .collect(),
                })
                .collect(),
            verification: BuildSummary {
                theorem31: report.passed(),
                violations: report.violations,
                system_residual: mask.system_residual(),
                min_nonzero_ratio: mask.min_nonzero_ratio(),
                refinement_error: mask.refinement_error(),
                phi_max: frame.phi.max_abs(),
                support_propagation: mask.support_propagation().passed(),
            },
        }
    }

    /// Rebuilds the frame from the stored values, without solving anything again.
    pub fn to_frame(&self) -> Result<FrameSystem> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        let params = self.params.to_params()?;
        let p = params.p();
        let base = tree_from_entries(params, &self.tree)?;
        let mut tree = base.clone();
        for &t in &self.transforms {
            tree = tree.apply(t)?;
        }
        for &m in &self.padding {
            tree.set_zero(m)?;
        }
        let lambda: Vec<Complex64> = self.lambda.iter().copied().map(complex_of).collect();
        let beta: Vec<Complex64> = self.beta.iter().copied().map(complex_of).collect();
        let mask = MaskSpec::from_parts(&tree, beta, lambda)?;

        let supports = self
            .wavelets
            .iter()
            .map(|w| w.e.to_coset(p))
            .collect::<Result<Vec<_>>>()?;
        let options = BuildOptions {
            transforms: self.transforms.clone(),
            custom: Some(supports),
            ..Default::default()
        };
        let mut frame = from_mask(params, base, &options, self.padding.clone(), mask)?;
        let low = -(params.n() as i32);
        let top = params.m() as i32 + 1;
        for (spec, doc) in frame.wavelets.iter_mut().zip(&self.wavelets) {
            spec.label = doc.label.clone();
            spec.t = doc.t;
            let mut m = StepFunctionFreq::zeros(p, low, top)?;
            for &(node, v) in &doc.mask {
                let slot = m.values_mut().get_mut(node).ok_or(Error::NodeOutOfRange {
                    node,
                    size: frame.shifted.len(),
                })?;
                *slot = complex_of(v);
            }
            spec.mask = m;
        }
        frame.branch = self.branch.clone();
        frame.n = self.n;
        Ok(frame)
    }

    pub fn options(&self) -> Result<BuildOptions> {
        let p = self.params.p;
        Ok(BuildOptions {
            transforms: self.transforms.clone(),
            partition: self
                .config
                .j_partition
                .as_ref()
                .map(|f| JPartition { fine: f.clone() }),
            custom: self
                .config
                .custom_e
                .as_ref()
                .map(|l| l.iter().map(|c| c.to_coset(p)).collect::<Result<Vec<_>>>())
                .transpose()?,
            ..Default::default()
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("frame document: {e}")))
    }

    pub fn load(path: &Path) -> std::io::Result<String> {
        std::fs::read_to_string(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::build_frame;

    #[test]
    fn round_trip_is_exact() {
        let g = GroupParams::symmetric(3, 1).unwrap();
        let options = BuildOptions {
            transforms: vec![Transform::I(0)],
            ..Default::default()
        };
        let frame = build_frame(g, None, &options).unwrap();
        let doc = FrameDocument::from_frame(&frame, &options);
        let text = doc.to_json();
        let back = FrameDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        let rebuilt = back.to_frame().unwrap();
        assert_eq!(rebuilt.wavelets.len(), 2);
        assert_eq!(
            FrameDocument::from_frame(&rebuilt, &options).to_json(),
            text
        );
    }

    #[test]
    fn tree_literal_parses() {
        let text = r#"{"params": {"p": 2, "N": 1, "M": 1}, "tree": [[2, "0"], [6, "0"], [7, [0.0, 0.0]], [3, "free"]]}"#;
        let file: TreeFile = serde_json::from_str(text).unwrap();
        let tree = file.to_tree().unwrap();
        assert_eq!(tree.zero_set(), vec![2, 6, 7]);
        let bad = r#"{"params": {"p": 2, "N": 1, "M": 1}, "tree": [[2, "maybe"]]}"#;
        let file: TreeFile = serde_json::from_str(bad).unwrap();
        assert!(file.to_tree().is_err());
    }
}
