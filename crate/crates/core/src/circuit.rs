//! Circuit IR, block-rule simulation and the text format.
//!
//! Gates are listed in application order: the first gate acts first on the
//! ket. Qubit 0 is the rightmost tensor factor.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mat2::{c, Mat2, UnitaryMat2, C64};
use crate::state::{PureState2, PureState3};

/// Header line of the circuit text format (3-qubit form).
pub const HEADER_PREFIX: &str = "# qprep3 v1";

/// Unordered pair of qubits acted on by a controlled-Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CzPair {
    Q01,
    Q02,
    Q12,
}

impl CzPair {
    pub fn qubits(self) -> (usize, usize) {
        match self {
            CzPair::Q01 => (0, 1),
            CzPair::Q02 => (0, 2),
            CzPair::Q12 => (1, 2),
        }
    }

    pub fn from_qubits(i: usize, j: usize) -> Option<Self> {
        match (i.min(j), i.max(j)) {
            (0, 1) => Some(CzPair::Q01),
            (0, 2) => Some(CzPair::Q02),
            (1, 2) => Some(CzPair::Q12),
            _ => None,
        }
    }

    pub fn touches(self, q: usize) -> bool {
        let (i, j) = self.qubits();
        i == q || j == q
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// Single-qubit unitary on `qubit`.
    Local { qubit: usize, u: UnitaryMat2 },
    Cz(CzPair),
}

impl Gate {
    pub fn local(qubit: usize, u: UnitaryMat2) -> Gate {
        Gate::Local { qubit, u }
    }

    pub fn touches(&self, q: usize) -> bool {
        match *self {
            Gate::Local { qubit, .. } => qubit == q,
            Gate::Cz(p) => p.touches(q),
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Local { qubit, u } => Gate::Local { qubit, u: u.adjoint() },
            cz => cz,
        }
    }

    pub fn is_cz(&self) -> bool {
        matches!(self, Gate::Cz(_))
    }
}

/// A register the block rules know how to update.
pub trait Register: Sized + Copy {
    const QUBITS: usize;
    fn apply_gate(&self, g: &Gate) -> Self;
    fn zero() -> Self;
}

/// Applies `g` to a 3-qubit state using the block rules.
///
/// With `|φ⟩ = |0⟩T₀ + |1⟩T₁`: a gate on qubit 2 mixes the blocks, qubit 1
/// left-multiplies them, qubit 0 right-multiplies them by `Uᵀ`; `cz01` negates
/// both (2,2) entries, `cz02` maps `T₁ → T₁Z` and `cz12` maps `T₁ → ZT₁`.
pub fn apply_gate(g: &Gate, s: &PureState3) -> PureState3 {
    let p = s.blocks();
    let (t0, t1) = (p.t0, p.t1);
    let (t0, t1) = match *g {
        Gate::Local { qubit: 2, u } => {
            let m = u.matrix();
            (t0 * m.a + t1 * m.b, t0 * m.c + t1 * m.d)
        }
        Gate::Local { qubit: 1, u } => (*u.matrix() * t0, *u.matrix() * t1),
        Gate::Local { qubit: 0, u } => {
            let ut = u.matrix().transpose();
            (t0 * ut, t1 * ut)
        }
        Gate::Local { qubit, .. } => panic!("qubit {qubit} out of range for a 3-qubit register"),
        Gate::Cz(CzPair::Q01) => (Mat2 { d: -t0.d, ..t0 }, Mat2 { d: -t1.d, ..t1 }),
        Gate::Cz(CzPair::Q02) => (t0, t1 * Mat2::Z),
        Gate::Cz(CzPair::Q12) => (t0, Mat2::Z * t1),
    };
    PureState3::from_blocks_unchecked(&crate::state::BlockPair { t0, t1 })
}

/// 2-qubit counterpart of [`apply_gate`]: qubit 1 left-multiplies `T`, qubit
/// 0 right-multiplies by `Uᵀ`, `cz01` negates `t11`.
pub fn apply_gate2(g: &Gate, s: &PureState2) -> PureState2 {
    let t = s.matrix();
    let t = match *g {
        Gate::Local { qubit: 1, u } => *u.matrix() * t,
        Gate::Local { qubit: 0, u } => t * u.matrix().transpose(),
        Gate::Cz(CzPair::Q01) => Mat2 { d: -t.d, ..t },
        ref g => panic!("{g:?} out of range for a 2-qubit register"),
    };
    PureState2::from_matrix_unchecked(&t)
}

impl Register for PureState3 {
    const QUBITS: usize = 3;
    fn apply_gate(&self, g: &Gate) -> Self {
        apply_gate(g, self)
    }
    fn zero() -> Self {
        PureState3::basis(0)
    }
}

impl Register for PureState2 {
    const QUBITS: usize = 2;
    fn apply_gate(&self, g: &Gate) -> Self {
        apply_gate2(g, self)
    }
    fn zero() -> Self {
        PureState2::basis(0)
    }
}

/// Ordered gate list on a 2- or 3-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        assert!(qubits == 2 || qubits == 3, "only 2- and 3-qubit circuits are supported");
        Circuit { qubits, gates: Vec::new() }
    }

    pub fn from_gates(qubits: usize, gates: Vec<Gate>) -> Self {
        let mut c = Circuit::new(qubits);
        for g in gates {
            c.push(g);
        }
        c
    }

    pub fn push(&mut self, g: Gate) {
        match g {
            Gate::Local { qubit, .. } => assert!(qubit < self.qubits, "qubit {qubit} out of range"),
            Gate::Cz(p) => assert!(p.qubits().1 < self.qubits, "{p:?} out of range"),
        }
        self.gates.push(g);
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn cz_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cz()).count()
    }

    /// Largest imaginary part over all local gate entries.
    pub fn max_gate_imag(&self) -> f64 {
        self.gates.iter().fold(0.0, |m, g| match g {
            Gate::Local { u, .. } => m.max(u.matrix().max_imag()),
            Gate::Cz(_) => m,
        })
    }

    /// Reversed order with every local gate replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            qubits: self.qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn apply<R: Register>(&self, s: &R) -> R {
        assert_eq!(R::QUBITS, self.qubits, "register size mismatch");
        self.gates.iter().fold(*s, |acc, g| acc.apply_gate(g))
    }

    /// Merges consecutive local gates on the same qubit and drops local gates
    /// within `1e-14` of `±I` (a global phase).
    pub fn simplify(&self) -> Circuit {
        let mut out: Vec<Gate> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            if let Gate::Local { qubit, u } = *g {
                // nearest earlier gate touching the same qubit
                if let Some(pos) = out.iter().rposition(|h| h.touches(qubit)) {
                    if let Gate::Local { u: prev, .. } = out[pos] {
                        out[pos] = Gate::local(qubit, u.compose(&prev));
                        continue;
                    }
                }
            }
            out.push(*g);
        }
        out.retain(|g| match g {
            Gate::Local { u, .. } => {
                !(u.is_identity(1e-14) || u.matrix().max_abs_diff(&-Mat2::IDENTITY) <= 1e-14)
            }
            Gate::Cz(_) => true,
        });
        Circuit { qubits: self.qubits, gates: out }
    }

    /// Serializes to the line-oriented text format.
    ///
    /// With `ry`, every real local gate is written as an `RY` rotation
    /// (only when all local gates are real; otherwise `ry` is ignored).
    pub fn to_text(&self, ry: bool) -> String {
        let angles: Option<Vec<Option<f64>>> = if ry {
            self.gates
                .iter()
                .map(|g| match g {
                    Gate::Local { u, .. } => ry_angle(u).map(Some),
                    Gate::Cz(_) => Some(None),
                })
                .collect()
        } else {
            None
        };
        let mut out = format!("{HEADER_PREFIX} qubits={} order=left-first\n", self.qubits);
        for (i, g) in self.gates.iter().enumerate() {
            match g {
                Gate::Cz(p) => {
                    let (a, b) = p.qubits();
                    let _ = writeln!(out, "CZ {a} {b}");
                }
                Gate::Local { qubit, u } => match angles.as_ref().and_then(|a| a[i]) {
                    Some(theta) => {
                        let _ = writeln!(out, "RY {qubit} {theta:.16e}");
                    }
                    None => {
                        let _ = write!(out, "L {qubit}");
                        for z in u.matrix().entries() {
                            let _ = write!(out, " {:.16e} {:.16e}", z.re, z.im);
                        }
                        out.push('\n');
                    }
                },
            }
        }
        out
    }

    /// Parses the text format produced by [`Circuit::to_text`].
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix(HEADER_PREFIX) {
                if circuit.is_some() {
                    return Err(err("duplicate header".into()));
                }
                let qubits = rest
                    .split_whitespace()
                    .find_map(|kv| kv.strip_prefix("qubits="))
                    .ok_or_else(|| err("header lacks qubits=".into()))?;
                let n = match qubits {
                    "2" => 2,
                    "3" => 3,
                    other => return Err(err(format!("unsupported qubit count {other}"))),
                };
                if !rest.split_whitespace().any(|kv| kv == "order=left-first") {
                    return Err(err("header lacks order=left-first".into()));
                }
                circuit = Some(Circuit::new(n));
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let circ = circuit
                .as_mut()
                .ok_or_else(|| err("gate before header".into()))?;
            let mut tok = line.split_whitespace();
            let kind = tok.next().unwrap_or_default();
            let nums: Vec<&str> = tok.collect();
            let qubit = |s: &str| -> Result<usize> {
                s.parse::<usize>()
                    .ok()
                    .filter(|&q| q < circ.qubits)
                    .ok_or_else(|| err(format!("bad qubit index {s:?}")))
            };
            let float = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("bad number {s:?}")))
            };
            let gate = match (kind, nums.len()) {
                ("CZ", 2) => {
                    let (i, j) = (qubit(nums[0])?, qubit(nums[1])?);
                    if i >= j {
                        return Err(err("CZ qubits must satisfy i < j".into()));
                    }
                    Gate::Cz(CzPair::from_qubits(i, j).ok_or_else(|| err("bad CZ pair".into()))?)
                }
                ("L", 9) => {
                    let q = qubit(nums[0])?;
                    let mut z = [C64::default(); 4];
                    for (k, zk) in z.iter_mut().enumerate() {
                        *zk = c(float(nums[1 + 2 * k])?, float(nums[2 + 2 * k])?);
                    }
                    let u = UnitaryMat2::try_new(Mat2::new(z[0], z[1], z[2], z[3]), 1e-10)
                        .ok_or_else(|| err("local gate is not a unit-determinant unitary".into()))?;
                    Gate::local(q, u)
                }
                ("RY", 2) => Gate::local(qubit(nums[0])?, ry(float(nums[1])?)),
                _ => return Err(err(format!("unrecognized gate line {line:?}"))),
            };
            circ.push(gate);
        }
        circuit.ok_or(Error::Parse { line: 0, msg: "missing header".into() })
    }
}

/// `Ry(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
pub fn ry(theta: f64) -> UnitaryMat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    UnitaryMat2::new_unchecked(Mat2::real(co, -s, s, co))
}

/// The `θ` with `Ry(θ) = U`, when `U` is real (within `1e-10`).
pub fn ry_angle(u: &UnitaryMat2) -> Option<f64> {
    let m = u.matrix();
    if m.max_imag() > 1e-10 || (m.det() - C64::from(1.0)).norm() > 1e-10 {
        return None;
    }
    let theta = 2.0 * m.c.re.atan2(m.a.re);
    (ry(theta).matrix().max_abs_diff(m) <= 1e-10).then_some(theta)
}

/// `|⟨basis_index|s⟩|`, clamped to `[0, 1]`.
pub fn fidelity_to_basis(s: &PureState3, basis_index: usize) -> f64 {
    s.amplitudes()[basis_index].norm().min(1.0)
}
