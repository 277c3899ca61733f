//! Pictures of frequency-side functions on the Monna line.
//!
//! A dual coset `G_ℓ^⊥ w` is drawn as the interval `[λ'(w), λ'(w) + p^ℓ)`.
//! Adjacent cells with the same label are merged into the largest coset
//! they fill, so a picture reads as a row of labelled intervals: `1`, `0` or `≠0`.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::frame::FrameSystem;
use crate::group::{pow_usize, CharacterWord, DualCoset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum What {
    PhiHat,
    PhiHatShifted,
    Wavelets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    One,
    Zero,
    Nonzero,
}

impl Label {
    fn text(self) -> &'static str {
        match self {
            Label::One => "1",
            Label::Zero => "0",
            Label::Nonzero => "≠0",
        }
    }
}

/// A labelled piece of the picture.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub coset: DualCoset,
    pub label: String,
    /// Common value of the merged cells, if they share one.
    pub value: Option<Complex64>,
}

fn label_of(v: Complex64, structural_zero: bool) -> Label {
    if structural_zero || v == Complex64::new(0.0, 0.0) {
        Label::Zero
    } else if (v - 1.0).norm() < 1e-12 {
        Label::One
    } else {
        Label::Nonzero
    }
}

/// Merges the cells `[0, p^width)` at level `low` into maximal uniform cosets.
fn merge(p: u32, low: i32, width: u32, values: &[Complex64], zero: &[bool]) -> Vec<Segment> {
    let mut out = Vec::new();
    merge_rec(p, low, width, 0, width, values, zero, &mut out);
    out.sort_by_key(|a| a.coset.rep().monna());
    out
}

#[allow(clippy::too_many_arguments)]
fn merge_rec(
    p: u32,
    low: i32,
    width: u32,
    prefix: usize,
    free: u32,
    values: &[Complex64],
    zero: &[bool],
    out: &mut Vec<Segment>,
) {
    let span = pow_usize(p, free);
    // Cells whose digits above `free` equal `prefix`.
    let cells: Vec<usize> = (0..span).map(|k| prefix * span + k).collect();
    let first = label_of(values[cells[0]], zero[cells[0]]);
    let uniform = cells.iter().all(|&c| label_of(values[c], zero[c]) == first);
    let top_level = low + free as i32;
    if uniform || free == 0 {
        let rep = CharacterWord::from_index(p, top_level, width - free, prefix as u128);
        let same = cells.iter().all(|&c| values[c] == values[cells[0]]);
        out.push(Segment {
            coset: DualCoset::new(top_level, rep),
            label: first.text().to_string(),
            value: same.then_some(values[cells[0]]),
        });
        return;
    }
    for d in 0..p as usize {
        merge_rec(
            p,
            low,
            width,
            prefix * p as usize + d,
            free - 1,
            values,
            zero,
            out,
        );
    }
}

/// Segments of the chosen function.
pub fn segments(frame: &FrameSystem, what: What) -> Vec<Segment> {
    let params = frame.params;
    let p = params.p();
    let low = -(params.n() as i32);
    let height = params.height();
    let covered = frame.mask.tree().covered();
    match what {
        What::PhiHat => merge(p, low, height, &frame.mask.phi_hat_tree(), &covered),
        What::PhiHatShifted => merge(p, low, height, &frame.shifted, &frame.shifted_zero),
        What::Wavelets => frame
            .wavelets
            .iter()
            .flat_map(|w| {
                [
                    Segment {
                        coset: w.e.clone(),
                        label: format!("E_{}", w.label),
                        value: Some(Complex64::new(1.0, 0.0)),
                    },
                    Segment {
                        coset: w.e.dilate(w.t),
                        label: format!("E_{} A^{}", w.label, w.t),
                        value: None,
                    },
                ]
            })
            .collect(),
    }
}

fn fraction(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn interval(c: &DualCoset) -> (BigRational, BigRational) {
    let start = c.rep().monna();
    let p = BigRational::from_integer(c.p().into());
    let mut len = BigRational::one();
    if c.level() >= 0 {
        for _ in 0..c.level() {
            len *= &p;
        }
    } else {
        for _ in 0..-c.level() {
            len /= &p;
        }
    }
    let end = &start + len;
    (start, end)
}

fn value_text(v: Option<Complex64>) -> String {
    match v {
        // `+ 0.0` turns a negative zero into a positive one.
        Some(z) if z.im == 0.0 => format!("{:.6}", z.re + 0.0),
        Some(z) => format!("{:.6}{:+.6}i", z.re + 0.0, z.im + 0.0),
        None => "-".into(),
    }
}

/// One line per segment, sorted by `λ'`, followed by the annuli.
pub fn render_ascii(frame: &FrameSystem, what: What) -> String {
    let title = match what {
        What::PhiHat => "phi-hat(chi)",
        What::PhiHatShifted => "phi-hat(chi A^-1)",
        What::Wavelets => "wavelet supports E_j and E_j A^t(j)",
    };
    let params = frame.params;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {title}  p={} N={} M={}",
        params.p(),
        params.n(),
        params.m()
    );
    for s in segments(frame, what) {
        let (a, b) = interval(&s.coset);
        let _ = writeln!(
            out,
            "[{}, {})\t{}\t{}\t{}",
            fraction(&a),
            fraction(&b),
            s.coset,
            s.label,
            value_text(s.value)
        );
    }
    for k in -(params.n() as i32)..=params.m() as i32 + 1 {
        let (_, b) = interval(&DualCoset::subgroup(params.p(), k));
        let _ = writeln!(out, "annulus G[{k}]^perp = [0, {})", fraction(&b));
    }
    out
}

/// SVG drawing of the cosets laid out on the Monna line.
pub fn render_svg(frame: &FrameSystem, what: What) -> String {
    let params = frame.params;
    let p = params.p();
    let top = params.m() as i32 + 1;
    let (_, total) = interval(&DualCoset::subgroup(p, top));
    let total = total.to_f64().unwrap_or(1.0);
    let width = 900.0;
    let left = 20.0;
    let axis = 120.0;
    let scale = width / total;
    let x = |q: &BigRational| left + q.to_f64().unwrap_or(0.0) * scale;
    let segs = segments(frame, what);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"200\" viewBox=\"0 0 {} 200\" font-family=\"serif\" font-size=\"12\">",
        width + 2.0 * left,
        width + 2.0 * left
    );
    let _ = writeln!(
        out,
        "<line x1=\"{left:.2}\" y1=\"{axis:.2}\" x2=\"{:.2}\" y2=\"{axis:.2}\" stroke=\"black\"/>",
        left + width
    );
    for i in 0..=total.round() as i64 {
        let xi = left + i as f64 * scale;
        let _ = writeln!(
            out,
            "<line x1=\"{xi:.2}\" y1=\"{:.2}\" x2=\"{xi:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            axis - 4.0,
            axis + 4.0
        );
    }
    for (i, s) in segs.iter().enumerate() {
        let (a, b) = interval(&s.coset);
        let (xa, xb) = (x(&a), x(&b));
        let y = match (what, s.label.as_str()) {
            (What::Wavelets, _) => axis - 20.0 - 14.0 * (i % 4) as f64,
            (_, "0") => axis - 6.0,
            _ => axis - 30.0,
        };
        let _ = writeln!(
            out,
            "<line x1=\"{xa:.2}\" y1=\"{y:.2}\" x2=\"{xb:.2}\" y2=\"{y:.2}\" stroke=\"black\" stroke-width=\"2\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            (xa + xb) / 2.0,
            y - 4.0,
            s.label
        );
    }
    for k in -(params.n() as i32)..=top {
        let (_, b) = interval(&DualCoset::subgroup(p, k));
        let xb = x(&b);
        let depth = 10.0 + 8.0 * (k + params.n() as i32) as f64;
        let _ = writeln!(
            out,
            "<path d=\"M {left:.2} {axis:.2} Q {:.2} {:.2} {xb:.2} {axis:.2}\" fill=\"none\" stroke=\"gray\"/>",
            (left + xb) / 2.0,
            axis + 2.0 * depth
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" fill=\"gray\">G{k}</text>",
            (left + xb) / 2.0,
            axis + depth + 12.0
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn render(frame: &FrameSystem, what: What, format: Format) -> String {
    match format {
        Format::Ascii => render_ascii(frame, what),
        Format::Svg => render_svg(frame, what),
    }
}
