//! Shared test helpers: a dense 8×8 simulator independent of the block
//! rules, and generators for structured state families.
#![allow(dead_code)]

use qprep3::circuit::{apply_gate, Circuit, CzPair, Gate};
use qprep3::mat2::{r1, r1_multiplier, r2, u_from_pair, Mat2, UnitaryMat2, C64};
use qprep3::state::{random_state, random_state2, tensor_right, PureState2, PureState3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<C64>>;

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![C64::default(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn dense2(m: &Mat2) -> Dense {
    vec![vec![m.a, m.b], vec![m.c, m.d]]
}

/// Full `2^n × 2^n` matrix of a gate; qubit `n-1` is the leftmost factor.
pub fn gate_matrix(g: &Gate, qubits: usize) -> Dense {
    let dim = 1 << qubits;
    match g {
        Gate::Local { qubit, u } => {
            let id = dense2(&Mat2::IDENTITY);
            let mut acc: Dense = vec![vec![C64::from(1.0)]];
            for q in (0..qubits).rev() {
                let f = if q == *qubit { dense2(u.matrix()) } else { id.clone() };
                acc = kron(&acc, &f);
            }
            acc
        }
        Gate::Cz(pair) => {
            let (i, j) = pair.qubits();
            let mut m = vec![vec![C64::default(); dim]; dim];
            for (b, row) in m.iter_mut().enumerate() {
                let s = if (b >> i) & 1 == 1 && (b >> j) & 1 == 1 { -1.0 } else { 1.0 };
                row[b] = C64::from(s);
            }
            m
        }
    }
}

pub fn mat_vec(m: &Dense, v: &[C64]) -> Vec<C64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Dense simulation of a whole circuit.
pub fn dense_apply(c: &Circuit, v: &[C64]) -> Vec<C64> {
    c.gates()
        .iter()
        .fold(v.to_vec(), |acc, g| mat_vec(&gate_matrix(g, c.qubits()), &acc))
}

pub fn max_diff(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
}

pub fn overlap(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum::<C64>().norm()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_c(rng: &mut ChaCha8Rng, real: bool) -> C64 {
    let im = if real { 0.0 } else { rng.gen_range(-1.0..1.0) };
    C64::new(rng.gen_range(-1.0..1.0), im)
}

pub fn rand_mat(rng: &mut ChaCha8Rng, real: bool) -> Mat2 {
    Mat2::new(rand_c(rng, real), rand_c(rng, real), rand_c(rng, real), rand_c(rng, real))
}

pub fn rand_rank_one(rng: &mut ChaCha8Rng, real: bool) -> Mat2 {
    let (u0, u1, v0, v1) = (rand_c(rng, real), rand_c(rng, real), rand_c(rng, real), rand_c(rng, real));
    Mat2::new(u0 * v0, u0 * v1, u1 * v0, u1 * v1)
}

pub fn normalize(v: &mut [C64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
}

pub fn rand_qubit(rng: &mut ChaCha8Rng, real: bool) -> [C64; 2] {
    let mut q = [rand_c(rng, real), rand_c(rng, real)];
    normalize(&mut q);
    q
}

/// `|1⟩ ⊗ |ψ⟩` with a random 2-qubit `ψ` on qubits (1, 0).
pub fn one_tensor_pair(seed: u64, real: bool) -> PureState3 {
    let p = random_state2(seed, real);
    let mut amps = [C64::default(); 8];
    amps[4..].copy_from_slice(p.amplitudes());
    PureState3::new(amps).unwrap()
}

/// `|0⟩A + |1⟩B` with `A`, `B` both rank one (hits the `det(B₃) = 0` branch).
pub fn both_blocks_rank_one(seed: u64, real: bool) -> PureState3 {
    let mut r = rng(seed);
    let (a, b) = (rand_rank_one(&mut r, real), rand_rank_one(&mut r, real));
    let mut amps = [a.a, a.b, a.c, a.d, b.a, b.b, b.c, b.d];
    normalize(&mut amps);
    PureState3::new(amps).unwrap()
}

/// `(2-qubit on qubits 2,1) ⊗ (qubit 0)` (hits the `B₄` column-2 = 0 branch).
pub fn right_product(seed: u64, real: bool) -> PureState3 {
    let mut r = rng(seed ^ 0x5eed);
    let pair: PureState2 = random_state2(seed, real);
    let q = rand_qubit(&mut r, real);
    PureState3::new(tensor_right(&pair, &q)).unwrap()
}

pub fn all_pairs() -> [CzPair; 3] {
    [CzPair::Q01, CzPair::Q02, CzPair::Q12]
}

pub fn rand_unitary(rng: &mut ChaCha8Rng, real: bool) -> UnitaryMat2 {
    loop {
        if let Ok(u) = u_from_pair(rand_c(rng, real), rand_c(rng, real)) {
            return u;
        }
    }
}

pub fn rand_gate(rng: &mut ChaCha8Rng, qubits: usize) -> Gate {
    if rng.gen_bool(0.5) {
        Gate::local(rng.gen_range(0..qubits), rand_unitary(rng, false))
    } else if qubits == 2 {
        Gate::Cz(CzPair::Q01)
    } else {
        Gate::Cz(all_pairs()[rng.gen_range(0..3)])
    }
}

fn minor(p: [C64; 2], q: [C64; 2]) -> f64 {
    (p[0] * q[1] - p[1] * q[0]).norm()
}

/// Max pairwise 2×2 minor over a set of rows.
pub fn max_minor(rows: &[[C64; 2]]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            m = m.max(minor(rows[i], rows[j]));
        }
    }
    m
}

/// Residual of the R₁ row condition `w21 = k·w11`, `w22 = −k·w12`,
/// relative to `‖A‖`.
pub fn r1_residual(a: &Mat2) -> f64 {
    let w = *a * *r1(a).unwrap().matrix();
    let k = r1_multiplier(a);
    ((w.c - k * w.a).norm()).max((w.d + k * w.b).norm()) / a.norm()
}

/// Max pairwise row minor of `D·R₂(B)` and `B·R₂(B)·Z`, `D = diag(α, 0)`.
pub fn r2_residual(b: &Mat2, alpha: C64) -> f64 {
    let r = *r2(b).unwrap().matrix();
    let d = Mat2::new(alpha, C64::default(), C64::default(), C64::default()) * r;
    let e = *b * r * Mat2::Z;
    max_minor(&[d.row(0), d.row(1), e.row(0), e.row(1)])
}

/// Factor then rebuild a product state; max amplitude deviation.
pub fn factor_residual(pair: &PureState2, q: &[C64; 2]) -> f64 {
    let s = PureState3::new(tensor_right(pair, q)).unwrap();
    let (p2, q2) = s.factor_right().expect("product state must factor");
    max_diff(&tensor_right(&p2, &q2), s.amplitudes())
}

/// Block-rule vs dense simulation of one gate on a state.
pub fn block_rule_residual(g: &Gate, s: &PureState3) -> f64 {
    let fast = apply_gate(g, s);
    let dense = mat_vec(&gate_matrix(g, 3), s.amplitudes());
    max_diff(fast.amplitudes(), &dense)
}

pub fn lemma_proportional_rows(seed: u64, n: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < n {
        let a = rand_mat(&mut r, done % 2 == 0);
        if a.is_singular() {
            continue;
        }
        worst = worst.max(r1_residual(&a));
        done += 1;
    }
    worst
}

pub fn lemma_two_matrices(seed: u64, n: usize) -> f64 {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let real = i % 2 == 0;
            let b = rand_rank_one(&mut r, real);
            let alpha = rand_c(&mut r, real);
            r2_residual(&b, alpha)
        })
        .fold(0.0, f64::max)
}

pub fn lemma_right_factor(seed: u64, n: usize) -> f64 {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let real = i % 2 == 0;
            let pair = random_state2(seed.wrapping_add(i as u64), real);
            let q = rand_qubit(&mut r, real);
            factor_residual(&pair, &q)
        })
        .fold(0.0, f64::max)
}

pub fn lemma_block_rules(seed: u64, n: usize) -> f64 {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let s = random_state(seed.wrapping_add(i as u64), false);
            let g = rand_gate(&mut r, 3);
            block_rule_residual(&g, &s)
        })
        .fold(0.0, f64::max)
}
