//! Independent reimplementations checked against the library.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_frames::mask::q_node;
use padic_frames::vandermonde;
use padic_frames::*;

/// Integer whose base-p digits are those of `x` from index `low` upward.
fn to_integer(x: &GroupElement, low: i32) -> BigInt {
    let p = BigInt::from(x.p());
    x.digits().iter().fold(BigInt::zero(), |acc, &(i, d)| {
        acc + BigInt::from(d) * num_traits::pow(p.clone(), (i - low) as usize)
    })
}

fn random_element(rng: &mut ChaCha8Rng, p: u32, low: i32, width: u32) -> GroupElement {
    let digits: Vec<(i32, u32)> = (0..width as i32)
        .map(|i| (low + i, rng.random_range(0..p)))
        .collect();
    GroupElement::from_digits(p, digits).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, p: u32, low: i32, width: u32) -> CharacterWord {
    let exps: Vec<(i32, u32)> = (0..width as i32)
        .map(|i| (low + i, rng.random_range(0..p)))
        .collect();
    CharacterWord::from_exponents(p, exps).unwrap()
}

#[test]
fn addition_matches_integer_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [2, 3, 5, 7] {
        for _ in 0..200 {
            let a = random_element(&mut rng, p, -4, 8);
            let b = random_element(&mut rng, p, -4, 8);
            let sum = a.add(&b);
            assert_eq!(
                to_integer(&sum, -4),
                to_integer(&a, -4) + to_integer(&b, -4)
            );
        }
    }
}

#[test]
fn subtraction_matches_modular_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in [2, 3, 5] {
        for _ in 0..200 {
            let a = random_element(&mut rng, p, -3, 6);
            let b = random_element(&mut rng, p, -3, 6);
            let floor = 5;
            let modulus = num_traits::pow(BigInt::from(p), (floor + 3) as usize);
            let want = ((to_integer(&a, -3) - to_integer(&b, -3)) % &modulus + &modulus) % &modulus;
            assert_eq!(to_integer(&a.subtract(&b, floor), -3), want);
        }
    }
}

#[test]
fn subtraction_worked_example() {
    // g_0 ∸ g_{-1} in Q_3 is 2g_{-1} (plus g_0 ∸ g_0 = 0 above).
    let a = GroupElement::basis(3, 0);
    let b = GroupElement::basis(3, -1);
    let d = a.subtract(&b, 3);
    assert_eq!(d.digits(), &[(-1, 2)]);
}

#[test]
fn character_products_match_phase_sums() {
    // (χψ, x) = (χ, x)(ψ, x) with phases computed from rationals.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in [2, 3, 5] {
        for _ in 0..100 {
            let w1 = random_word(&mut rng, p, -3, 6);
            let w2 = random_word(&mut rng, p, -3, 6);
            let x = random_element(&mut rng, p, -4, 8);
            let lhs = pair(&w1.mul(&w2), &x);
            let rhs = pair(&w1, &x) * pair(&w2, &x);
            assert!((lhs - rhs).norm() < 1e-12);
            assert!((pair(&w1, &x) - pair_oracle(&w1, &x)).norm() < 1e-12);
        }
    }
}

/// `(χ, x) = exp(2πi Σ α_j a_n p^{-(j-n+1)})`, summed as a rational.
fn pair_oracle(w: &CharacterWord, x: &GroupElement) -> Complex64 {
    let p = BigInt::from(w.p());
    let mut phase = BigRational::zero();
    for &(j, alpha) in w.exponents() {
        for &(n, a) in x.digits() {
            let e = j - n + 1;
            if e > 0 {
                phase += BigRational::new(
                    BigInt::from(alpha) * BigInt::from(a),
                    num_traits::pow(p.clone(), e as usize),
                );
            }
        }
    }
    let frac = &phase - phase.floor();
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * frac.to_f64().unwrap())
}

#[test]
fn monna_maps_are_order_preserving_bijections() {
    // λ' on the words with digits in [low, low+width) hits every multiple of p^low once.
    for p in [2, 3] {
        let low = -2;
        let width = 4;
        let step = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), 2));
        let mut seen: Vec<BigRational> = (0..(p as u128).pow(width))
            .map(|c| CharacterWord::from_index(p, low, width, c).monna())
            .collect();
        seen.sort();
        for (k, v) in seen.iter().enumerate() {
            assert_eq!(*v, &step * BigRational::from_integer(BigInt::from(k)));
        }
        let h0 = enumerate_h0(p, 3);
        for (k, h) in h0.iter().enumerate() {
            assert_eq!(h0.iter().filter(|g| g.monna() < h.monna()).count(), k);
        }
    }
}

fn direct_fourier(f: &StepFunctionTime) -> StepFunctionFreq {
    let p = f.p();
    let low = f.support_level();
    let top = f.constancy_level();
    let width = (top - low) as u32;
    let mut out = StepFunctionFreq::zeros(p, low, top).unwrap();
    let measure = f.cell_measure();
    for c in 0..out.values().len() {
        let chi = CharacterWord::from_index(p, low, width, c as u128);
        let mut s = Complex64::new(0.0, 0.0);
        for (k, v) in f.values().iter().enumerate() {
            let x = GroupElement::from_index(p, low, width, k as u128);
            s += v * pair(&chi, &x).conj();
        }
        out.values_mut()[c] = s * measure;
    }
    out
}

#[test]
fn fft_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (p, low, top) in [(2, -3, 2), (3, -2, 1), (5, -1, 1), (3, 0, 3)] {
        let mut f = StepFunctionTime::zeros(p, low, top).unwrap();
        for v in f.values_mut() {
            *v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let fast = f.fourier();
        let slow = direct_fourier(&f);
        assert_eq!(fast.refinement_level(), slow.refinement_level());
        assert_eq!(fast.support_level(), slow.support_level());
        assert!(fast.max_abs_diff(&slow).unwrap() < 1e-12, "p={p}");
    }
}

#[test]
fn indicator_transforms() {
    // 1_{G_k} has transform p^{-k} 1_{G_k^⊥}.
    for p in [2, 3] {
        for k in -2..=2 {
            let f =
                StepFunctionTime::indicator(&TimeCoset::subgroup(p, k), Complex64::new(1.0, 0.0))
                    .unwrap();
            let fhat = f.fourier();
            let want = (p as f64).powi(-k);
            for (coset, v) in fhat.cosets() {
                let inside = DualCoset::subgroup(p, k).contains_coset(&coset);
                let expect = if inside { want } else { 0.0 };
                assert!((v - expect).norm() < 1e-12);
            }
        }
    }
}

fn gauss_solve(a: &[Vec<Complex64>], b: &[Complex64]) -> Vec<Complex64> {
    let n = b.len();
    let mut m: Vec<Vec<Complex64>> = a
        .iter()
        .zip(b)
        .map(|(row, &r)| row.iter().copied().chain([r]).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        m.swap(col, pivot);
        for row in 0..n {
            if row != col {
                let factor = m[row][col] / m[col][col];
                let pivot_row = m[col].clone();
                for (a, b) in m[row].iter_mut().zip(&pivot_row).skip(col) {
                    *a -= factor * b;
                }
            }
        }
    }
    (0..n).map(|i| m[i][n] / m[i][i]).collect()
}

#[test]
fn vandermonde_matches_gaussian_elimination() {
    for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let g = GroupParams::symmetric(p, n).unwrap();
        let tree = MaskTree::initial(g).unwrap();
        let rows: Vec<usize> = std::iter::once(0).chain(tree.zero_set()).collect();
        let nodes: Vec<Complex64> = rows.iter().map(|&m| q_node(g, m).unwrap()).collect();
        let mut rhs = vec![Complex64::new(0.0, 0.0); nodes.len()];
        rhs[0] = Complex64::new(1.0, 0.0);
        let matrix: Vec<Vec<Complex64>> = nodes
            .iter()
            .map(|q| (0..nodes.len()).map(|k| q.powu(k as u32)).collect())
            .collect();
        let fast = vandermonde::solve(&nodes, &rhs);
        let slow = gauss_solve(&matrix, &rhs);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10, "p={p} N={n}");
        }
        let mask = solve_mask(&tree).unwrap();
        for (a, b) in mask.beta().iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}

#[test]
fn beta_fixture_p2_n1() {
    let g = GroupParams::symmetric(2, 1).unwrap();
    let mask = solve_mask(&MaskTree::initial(g).unwrap()).unwrap();
    let want = [
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, -0.5),
        Complex64::new(0.0, 0.5),
        Complex64::new(0.5, 0.0),
    ];
    for (a, b) in mask.beta().iter().zip(&want) {
        assert!((a - b).norm() < 1e-12, "{a} vs {b}");
    }
    assert_eq!(mask.zeros(), &[2, 6, 7]);
}

#[test]
fn q_nodes_are_distinct_roots_of_unity() {
    for (p, n) in [(2, 1), (3, 1), (2, 2)] {
        let g = GroupParams::symmetric(p, n).unwrap();
        let size = (p as usize).pow(g.height());
        let nodes: Vec<Complex64> = (0..size).map(|m| q_node(g, m).unwrap()).collect();
        for (i, a) in nodes.iter().enumerate() {
            assert!((a.norm() - 1.0).abs() < 1e-14);
            assert!((a.powu(size as u32) - 1.0).norm() < 1e-9);
            for b in &nodes[i + 1..] {
                assert!((a - b).norm() > 1e-6);
            }
        }
    }
}

#[test]
fn mask_values_match_direct_evaluation() {
    // λ_m equals m₀ evaluated at the character of node m.
    let g = GroupParams::symmetric(3, 1).unwrap();
    let mask = solve_mask(&MaskTree::initial(g).unwrap()).unwrap();
    for (m, lambda) in mask.lambda().iter().enumerate() {
        let coset = mask.tree().node_coset(m).unwrap();
        let direct = mask.mask_at(coset.rep());
        assert!((direct - lambda).norm() < 1e-12, "node {m}");
    }
}
