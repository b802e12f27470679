//! Pure-state containers and their block-matrix views.
//!
//! Basis order is `|q2 q1 q0⟩` with qubit 0 rightmost, so amplitude index
//! `i = 4·q2 + 2·q1 + q0`. The block view writes a 3-qubit state as
//! `|0⟩T₀ + |1⟩T₁` where `T_{q2}[q1][q0]` is the amplitude.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::mat2::{c, Mat2, C64};

/// Unit-norm tolerance; states within it are stored bit-for-bit.
pub const NORM_TOL: f64 = 1e-12;
/// Inputs whose norm is within this of one are renormalized.
pub const RENORM_TOL: f64 = 1e-6;
/// Row-proportionality threshold for tensor factorization.
pub const FACTOR_TOL: f64 = 1e-10;
/// Maximum imaginary part of a "real" amplitude.
pub const REAL_TOL: f64 = 1e-12;

fn normalized<const N: usize>(mut amps: [C64; N]) -> Result<[C64; N]> {
    if !amps.iter().all(|z| z.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() <= NORM_TOL {
        Ok(amps)
    } else if (norm - 1.0).abs() <= RENORM_TOL {
        amps.iter_mut().for_each(|z| *z /= norm);
        Ok(amps)
    } else {
        Err(Error::NotNormalized { norm })
    }
}

fn max_imag(amps: &[C64]) -> f64 {
    amps.iter().fold(0.0, |m, z| m.max(z.im.abs()))
}

/// Normalized 3-qubit amplitude vector `w0..w7`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState3 {
    amps: [C64; 8],
}

/// Normalized 2-qubit amplitude vector `t00, t01, t10, t11`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState2 {
    amps: [C64; 4],
}

/// The two 2×2 blocks of a 3-qubit state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockPair {
    pub t0: Mat2,
    pub t1: Mat2,
}

/// Discriminant of a real 3-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct DeltaValue(pub f64);

impl DeltaValue {
    pub fn value(self) -> f64 {
        self.0
    }

    /// CZ bound of the real-gate synthesis: 3 when `Δ ≥ 0`, else 4.
    ///
    /// Values within `1e-12` of zero count as zero.
    pub fn cz_bound(self) -> usize {
        if self.is_nonnegative() {
            3
        } else {
            4
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self.0 >= -DELTA_ZERO
    }
}

/// |Δ| at or below this is reported as zero.
pub const DELTA_ZERO: f64 = 1e-12;

impl PureState3 {
    /// Validates normalization (renormalizing when within [`RENORM_TOL`]).
    pub fn new(amps: [C64; 8]) -> Result<Self> {
        normalized(amps).map(|amps| PureState3 { amps })
    }

    pub fn from_real(amps: [f64; 8]) -> Result<Self> {
        Self::new(amps.map(C64::from))
    }

    pub(crate) fn from_amplitudes_unchecked(amps: [C64; 8]) -> Self {
        PureState3 { amps }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(index: usize) -> Self {
        let mut amps = [C64::default(); 8];
        amps[index] = C64::from(1.0);
        PureState3 { amps }
    }

    pub fn amplitudes(&self) -> &[C64; 8] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_imag(&self) -> f64 {
        max_imag(&self.amps)
    }

    pub fn is_real(&self) -> bool {
        self.max_imag() <= REAL_TOL
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &PureState3) -> f64 {
        overlap(&self.amps, &other.amps)
    }

    pub fn max_abs_diff(&self, other: &PureState3) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
    }

    pub fn blocks(&self) -> BlockPair {
        let w = &self.amps;
        BlockPair {
            t0: Mat2::new(w[0], w[1], w[2], w[3]),
            t1: Mat2::new(w[4], w[5], w[6], w[7]),
        }
    }

    pub(crate) fn from_blocks_unchecked(p: &BlockPair) -> Self {
        let (a, b) = (p.t0, p.t1);
        PureState3 {
            amps: [a.a, a.b, a.c, a.d, b.a, b.b, b.c, b.d],
        }
    }

    /// Discriminant `(w0w7 − w1w6 − w2w5 + w3w4)² − 4(w1w2 − w0w3)(w5w6 − w4w7)`.
    ///
    /// Defined for real states only.
    pub fn delta(&self) -> Result<DeltaValue> {
        let mi = self.max_imag();
        if mi > REAL_TOL {
            return Err(Error::NotReal { max_imag: mi });
        }
        let w = self.amps.map(|z| z.re);
        let m = w[0] * w[7] - w[1] * w[6] - w[2] * w[5] + w[3] * w[4];
        Ok(DeltaValue(
            m * m - 4.0 * (w[1] * w[2] - w[0] * w[3]) * (w[5] * w[6] - w[4] * w[7]),
        ))
    }

    /// Splits the state as `(2-qubit on qubits 2,1) ⊗ (qubit 0)` when all four
    /// rows of `T₀, T₁` are proportional.
    ///
    /// The single-qubit factor is the dominant row normalized, with its first
    /// nonzero component real-positive.
    pub fn factor_right(&self) -> Option<(PureState2, [C64; 2])> {
        self.factor_right_tol(FACTOR_TOL)
    }

    /// [`factor_right`](Self::factor_right) with an explicit minor threshold.
    pub fn factor_right_tol(&self, tol: f64) -> Option<(PureState2, [C64; 2])> {
        let BlockPair { t0, t1 } = self.blocks();
        let rows = [t0.row(0), t0.row(1), t1.row(0), t1.row(1)];
        for i in 0..4 {
            for j in i + 1..4 {
                let (p, q) = (rows[i], rows[j]);
                if (p[0] * q[1] - p[1] * q[0]).norm() > tol {
                    return None;
                }
            }
        }
        let row_norm = |r: &[C64; 2]| (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
        let dominant = rows
            .iter()
            .max_by(|p, q| row_norm(p).total_cmp(&row_norm(q)))?;
        let n = row_norm(dominant);
        if n == 0.0 {
            return None;
        }
        let lead = if dominant[0].norm() > 1e-14 * n {
            dominant[0]
        } else {
            dominant[1]
        };
        let phase = lead.conj() / lead.norm();
        let a = [dominant[0] * phase / n, dominant[1] * phase / n];
        let b = rows.map(|r| r[0] * a[0].conj() + r[1] * a[1].conj());
        let pair = PureState2::new(b).ok()?;
        Some((pair, a))
    }
}

/// Tensor product `pair ⊗ qubit` with `pair` on qubits (2,1).
pub fn tensor_right(pair: &PureState2, qubit: &[C64; 2]) -> [C64; 8] {
    let mut out = [C64::default(); 8];
    for (j, b) in pair.amps.iter().enumerate() {
        out[2 * j] = b * qubit[0];
        out[2 * j + 1] = b * qubit[1];
    }
    out
}

fn overlap(x: &[C64], y: &[C64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .norm()
        .min(1.0)
}

impl PureState2 {
    pub fn new(amps: [C64; 4]) -> Result<Self> {
        normalized(amps).map(|amps| PureState2 { amps })
    }

    pub fn from_real(amps: [f64; 4]) -> Result<Self> {
        Self::new(amps.map(C64::from))
    }

    pub(crate) fn from_amplitudes_unchecked(amps: [C64; 4]) -> Self {
        PureState2 { amps }
    }

    pub fn basis(index: usize) -> Self {
        let mut amps = [C64::default(); 4];
        amps[index] = C64::from(1.0);
        PureState2 { amps }
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_imag(&self) -> f64 {
        max_imag(&self.amps)
    }

    pub fn is_real(&self) -> bool {
        self.max_imag() <= REAL_TOL
    }

    pub fn overlap(&self, other: &PureState2) -> f64 {
        overlap(&self.amps, &other.amps)
    }

    /// `T(|φ⟩) = [[t00, t01], [t10, t11]]`.
    pub fn matrix(&self) -> Mat2 {
        let t = &self.amps;
        Mat2::new(t[0], t[1], t[2], t[3])
    }

    pub(crate) fn from_matrix_unchecked(m: &Mat2) -> Self {
        PureState2 {
            amps: m.entries(),
        }
    }
}

/// `|φ⟩ = |0⟩T₀ + |1⟩T₁` as an amplitude vector.
pub fn blocks(s: &PureState3) -> BlockPair {
    s.blocks()
}

/// Inverse of [`blocks`].
pub fn unblocks(p: &BlockPair) -> Result<PureState3> {
    PureState3::new(PureState3::from_blocks_unchecked(p).amps)
}

/// Normalized Gaussian amplitudes; real Gaussians when `real_only`.
pub fn random_state(seed: u64, real_only: bool) -> PureState3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut amps = [C64::default(); 8];
        for z in amps.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = if real_only {
                0.0
            } else {
                StandardNormal.sample(&mut rng)
            };
            *z = c(re, im);
        }
        let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            amps.iter_mut().for_each(|z| *z /= n);
            return PureState3 { amps };
        }
    }
}

/// 2-qubit counterpart of [`random_state`].
pub fn random_state2(seed: u64, real_only: bool) -> PureState2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut amps = [C64::default(); 4];
        for z in amps.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = if real_only {
                0.0
            } else {
                StandardNormal.sample(&mut rng)
            };
            *z = c(re, im);
        }
        let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            amps.iter_mut().for_each(|z| *z /= n);
            return PureState2 { amps };
        }
    }
}
