//! 2×2 complex linear algebra and the special unitary constructions used by
//! the synthesis engine.
//!
//! Every construction returns a [`UnitaryMat2`] of the form
//!
//! ```text
//! U(x, y) = 1/√(|x|² + |y|²) · [[ x, y], [-ȳ, x̄]]
//! ```
//!
//! which is unitary with unit determinant. For real input matrices all
//! constructions return real matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative threshold for singularity and zero tests.
pub const EPS_ZERO: f64 = 1e-10;
/// Unitarity / unit-determinant tolerance for constructed gates.
pub const EPS_UNITARY: f64 = 1e-12;

/// Below this (relative) size a phase reference is considered absent and the
/// default phase of `+1` is used.
const PHASE_FLOOR: f64 = 1e-14;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2::new(ZERO, ZERO, ZERO, ZERO);
    pub const IDENTITY: Mat2 = Mat2::new(ONE, ZERO, ZERO, ONE);
    /// Pauli Z.
    pub const Z: Mat2 = Mat2::new(ONE, ZERO, ZERO, C64::new(-1.0, 0.0));

    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Real matrix from row-major entries.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(C64::from(a), C64::from(b), C64::from(c), C64::from(d))
    }

    pub fn from_rows(r0: [C64; 2], r1: [C64; 2]) -> Self {
        Mat2::new(r0[0], r0[1], r1[0], r1[1])
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn row(&self, i: usize) -> [C64; 2] {
        match i {
            0 => [self.a, self.b],
            1 => [self.c, self.d],
            _ => panic!("row index {i} out of range"),
        }
    }

    pub fn col(&self, j: usize) -> [C64; 2] {
        match j {
            0 => [self.a, self.c],
            1 => [self.b, self.d],
            _ => panic!("column index {j} out of range"),
        }
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn conj(&self) -> Mat2 {
        Mat2::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other)
            .entries()
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    /// `true` when the Frobenius norm is at most [`EPS_ZERO`].
    pub fn is_zero(&self) -> bool {
        self.norm() <= EPS_ZERO
    }

    /// `true` when `|det| ≤ EPS_ZERO · ‖self‖²` (the zero matrix is singular).
    pub fn is_singular(&self) -> bool {
        self.det().norm() <= EPS_ZERO * self.norm_sqr()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: C64) -> Mat2 {
        self.scale(s)
    }
}

/// A 2×2 unitary with unit determinant.
#[derive(Clone, Copy, PartialEq)]
pub struct UnitaryMat2(Mat2);

impl fmt::Debug for UnitaryMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{:?}", self.0)
    }
}

impl UnitaryMat2 {
    pub const IDENTITY: UnitaryMat2 = UnitaryMat2(Mat2::IDENTITY);

    /// Wraps `m` after checking `m†m = I` and `det m = 1` within `tol`.
    pub fn try_new(m: Mat2, tol: f64) -> Option<Self> {
        let u = UnitaryMat2(m);
        (m.is_finite() && u.unitarity_error() <= tol && (m.det() - ONE).norm() <= tol).then_some(u)
    }

    pub(crate) fn new_unchecked(m: Mat2) -> Self {
        UnitaryMat2(m)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn adjoint(&self) -> UnitaryMat2 {
        UnitaryMat2(self.0.adjoint())
    }

    pub fn transpose(&self) -> UnitaryMat2 {
        UnitaryMat2(self.0.transpose())
    }

    pub fn compose(&self, other: &UnitaryMat2) -> UnitaryMat2 {
        UnitaryMat2(self.0 * other.0)
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        (self.0.adjoint() * self.0).max_abs_diff(&Mat2::IDENTITY)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.0.max_imag() <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.0.max_abs_diff(&Mat2::IDENTITY) <= tol
    }
}

/// `U(x, y)` for a pair of any nonzero size.
pub(crate) fn u_scaled(x: C64, y: C64) -> Result<UnitaryMat2> {
    let n2 = x.norm_sqr() + y.norm_sqr();
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::ZeroPair);
    }
    let s = 1.0 / n2.sqrt();
    let (x, y) = (x * s, y * s);
    Ok(UnitaryMat2(Mat2::new(x, y, -y.conj(), x.conj())))
}

/// `U(x, y) = 1/√(|x|²+|y|²) · [[x, y], [−ȳ, x̄]]`.
pub fn u_from_pair(x: C64, y: C64) -> Result<UnitaryMat2> {
    if x.norm_sqr() + y.norm_sqr() < EPS_ZERO {
        return Err(Error::ZeroPair);
    }
    u_scaled(x, y)
}

/// Unit-modulus phase `-z̄/|z|`-style helper: returns `z/|z|`, or `1` when
/// `|z|` is negligible relative to `scale`.
fn unit_phase(z: C64, scale: f64) -> C64 {
    let n = z.norm();
    if n <= PHASE_FLOOR * scale || n == 0.0 {
        ONE
    } else {
        z / n
    }
}

/// The `k` for which `W = A·R₁(A)` satisfies `w21 = k·w11`, `w22 = −k·w12`.
///
/// `|k| = √((|c|²+|d|²)/(|a|²+|b|²))` with phase `−β̄/|β|`, `β = a c̄ + b d̄`;
/// when `β = 0` any phase works and `k` is taken real-positive.
pub fn r1_multiplier(m: &Mat2) -> C64 {
    let top = m.a.norm_sqr() + m.b.norm_sqr();
    let bottom = m.c.norm_sqr() + m.d.norm_sqr();
    let beta = m.a * m.c.conj() + m.b * m.d.conj();
    let phase = if beta.norm() <= PHASE_FLOOR * m.norm_sqr() {
        ONE
    } else {
        -beta.conj() / beta.norm()
    };
    phase * (bottom / top).sqrt()
}

/// `R₁(A)` for nonsingular `A`: the unitary making the rows of `A·R₁(A)`
/// proportional up to a sign flip of the second column.
pub fn r1(m: &Mat2) -> Result<UnitaryMat2> {
    if !m.is_finite() || m.norm() == 0.0 || m.is_singular() {
        return Err(Error::SingularInput { det: m.det().norm() });
    }
    let k = r1_multiplier(m);
    let x = m.d - m.b * k;
    let y = m.c.conj() - m.a.conj() * k.conj();
    u_scaled(x, y)
}

fn check_rank_one(m: &Mat2) -> Result<()> {
    if !m.is_finite() || m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if !m.is_singular() {
        return Err(Error::NonSingularInput { det: m.det().norm() });
    }
    Ok(())
}

/// `R₂(A)` for a nonzero singular `A`. For any `D = [[α, 0], [0, 0]]` all rows
/// of `D·R₂(A)` and `A·R₂(A)·Z` are multiples of a single row.
///
/// The row of larger norm is used as the reference row.
pub fn r2(m: &Mat2) -> Result<UnitaryMat2> {
    check_rank_one(m)?;
    let [p, q] = if m.row(0)[0].norm_sqr() + m.row(0)[1].norm_sqr()
        >= m.row(1)[0].norm_sqr() + m.row(1)[1].norm_sqr()
    {
        m.row(0)
    } else {
        m.row(1)
    };
    let len = (p.norm_sqr() + q.norm_sqr()).sqrt();
    // k = -len · p/|p|, or len when p vanishes
    let k = if p.norm() <= PHASE_FLOOR * len {
        C64::from(len)
    } else {
        -p / p.norm() * len
    };
    u_scaled(q, p.conj() - k.conj())
}

/// Unit direction shared by both columns of a rank-one matrix, with its first
/// non-negligible component made real-positive.
pub fn column_direction(m: &Mat2) -> Result<[C64; 2]> {
    check_rank_one(m)?;
    let [c0, c1] = [m.col(0), m.col(1)];
    let n0 = c0[0].norm_sqr() + c0[1].norm_sqr();
    let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
    let (v, n) = if n0 >= n1 { (c0, n0.sqrt()) } else { (c1, n1.sqrt()) };
    let lead = if v[0].norm() > PHASE_FLOOR * n { v[0] } else { v[1] };
    let phase = unit_phase(lead, n).conj();
    Ok([v[0] * phase / n, v[1] * phase / n])
}

/// `L₁(A) = U(v̄₁, v̄₂)` for a nonzero singular `A` whose columns are
/// multiples of `(v₁, v₂)`; the second row of `L₁(A)·A` vanishes.
pub fn l1(m: &Mat2) -> Result<UnitaryMat2> {
    let [v1, v2] = column_direction(m)?;
    u_scaled(v1.conj(), v2.conj())
}

/// `R₃(A) = U(ā, −b)` for `A = [[a, b], [0, 0]]`; only the top-left entry of
/// `A·R₃(A)` survives.
pub fn r3(m: &Mat2) -> Result<UnitaryMat2> {
    let n = m.norm();
    if !m.is_finite() || n == 0.0 {
        return Err(Error::BadShape);
    }
    if (m.c.norm_sqr() + m.d.norm_sqr()).sqrt() > EPS_ZERO * n {
        return Err(Error::BadShape);
    }
    u_scaled(m.a.conj(), -m.b)
}

/// Roots of `det(A + zB) = det(B)·z² + m·z + det(A)`, ordered by ascending
/// modulus and then by ascending argument in `[0, 2π)`.
pub fn solve_det_pencil(a: &Mat2, b: &Mat2) -> Result<Vec<C64>> {
    let lead = b.det();
    if b.norm() == 0.0 || b.is_singular() {
        return Err(Error::SingularPencilCoefficient { det: lead.norm() });
    }
    let mid = a.a * b.d + b.a * a.d - a.b * b.c - b.b * a.c;
    let constant = a.det();

    let mut s = (mid * mid - lead * constant * 4.0).sqrt();
    if (mid.conj() * s).re < 0.0 {
        s = -s;
    }
    let q = -(mid + s) * 0.5;
    let mut roots = if q == ZERO {
        // mid = 0 and discriminant 0 imply det(A) = 0: double root at the origin
        vec![ZERO, ZERO]
    } else {
        vec![q / lead, constant / q]
    };
    roots.sort_by(|x, y| {
        let (nx, ny) = (x.norm(), y.norm());
        if (nx - ny).abs() <= 1e-12 * nx.max(ny) {
            arg_2pi(*x).total_cmp(&arg_2pi(*y))
        } else {
            nx.total_cmp(&ny)
        }
    });
    Ok(roots)
}

fn arg_2pi(z: C64) -> f64 {
    if z == ZERO {
        return 0.0;
    }
    let t = z.im.atan2(z.re);
    if t < 0.0 {
        t + std::f64::consts::TAU
    } else {
        t
    }
}
