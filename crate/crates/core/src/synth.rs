//! Disentangling-circuit synthesis for 2- and 3-qubit states.
//!
//! Every routine returns a circuit taking the input state to `|0…0⟩` (up to
//! global phase). [`prepare`] inverts that circuit.
//!
//! 3-qubit reduction, on blocks `|φ⟩ = |0⟩A + |1⟩B`:
//!
//! 1. a gate on qubit 2 makes `det A₁ = 0` (pencil root of `det(A₀ + zB₀)`);
//! 2. `L₁(A₁)` on qubit 1 clears the second row of `A`;
//! 3. `R₃(A₂)ᵀ` on qubit 0 clears the second column of `A`;
//! 4. a `cz01` conjugated by `R₁(B₃)ᵀ` on qubit 0 makes `det B₄ = 0`;
//! 5. `R₂(B₄)ᵀ` on qubit 0 then `cz02` makes every row proportional;
//!
//! after which the state factors as `(2-qubit) ⊗ (qubit 0)` and the 2-qubit
//! factor is finished with at most one `cz12`.

use std::fmt;

use crate::circuit::{fidelity_to_basis, Circuit, CzPair, Gate, Register};
use crate::error::{Error, Result};
use crate::mat2::{l1, r1, r2, r3, solve_det_pencil, u_scaled, Mat2, C64, EPS_ZERO};
use crate::state::{BlockPair, PureState2, PureState3, REAL_TOL};

/// Residual bound for the per-step assertions.
pub const STEP_TOL: f64 = 1e-9;
/// Minimum accepted `|⟨0…0|C|φ⟩|`.
pub const FIDELITY_TOL: f64 = 1e-9;
/// Maximum imaginary entry of a "real" gate.
pub const REAL_GATE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    General,
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `|φ⟩ → |0…0⟩`
    Disentangle,
    /// `|0…0⟩ → |φ⟩`
    Prepare,
}

/// Branch decisions recorded during synthesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    DeltaNonNegative,
    DeltaNegative,
    DetB0Zero,
    PencilRoot,
    A1Zero,
    DetB3Zero,
    Cz01Sandwich,
    B4Column2Zero,
    Cz02Step,
    B3Zero,
    B3NonZero,
    DetTZero,
    DetTNonZero,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::DeltaNonNegative => "delta>=0",
            Branch::DeltaNegative => "delta<0",
            Branch::DetB0Zero => "detB0=0",
            Branch::PencilRoot => "pencil-root",
            Branch::A1Zero => "A1=0",
            Branch::DetB3Zero => "detB3=0",
            Branch::Cz01Sandwich => "cz01-sandwich",
            Branch::B4Column2Zero => "B4col2=0",
            Branch::Cz02Step => "cz02-step",
            Branch::B3Zero => "b3=0",
            Branch::B3NonZero => "b3!=0",
            Branch::DetTZero => "detT=0",
            Branch::DetTNonZero => "detT!=0",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Space-separated branch labels.
pub fn format_trace(trace: &[Branch]) -> String {
    trace.iter().map(|b| b.label()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisReport {
    pub circuit: Circuit,
    pub direction: Direction,
    pub cz_count: usize,
    pub all_real: bool,
    pub branch_trace: Vec<Branch>,
    /// `|⟨0…0|C|φ⟩|` for disentangling circuits, `|⟨φ|C|0…0⟩|` for
    /// preparation circuits.
    pub fidelity: f64,
}

impl SynthesisReport {
    pub fn trace_string(&self) -> String {
        format_trace(&self.branch_trace)
    }
}

/// Either register size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateInput {
    Two(PureState2),
    Three(PureState3),
}

impl StateInput {
    pub fn max_imag(&self) -> f64 {
        match self {
            StateInput::Two(s) => s.max_imag(),
            StateInput::Three(s) => s.max_imag(),
        }
    }
}

/// Gate sequence for a 2-qubit amplitude matrix `t` in the frame
/// (qubit 1 = row index, qubit 0 = column index, `cz01`).
fn two_qubit_gates(mut t: Mat2, trace: &mut Vec<Branch>) -> Result<Vec<Gate>> {
    let mut gates = Vec::with_capacity(4);
    if t.is_singular() {
        trace.push(Branch::DetTZero);
    } else {
        trace.push(Branch::DetTNonZero);
        let w = r1(&t)?;
        // a gate G on qubit 0 maps t ↦ t·Gᵀ, so G = R₁ᵀ yields t·R₁
        gates.push(Gate::local(0, w.transpose()));
        t = t * *w.matrix();
        gates.push(Gate::Cz(CzPair::Q01));
        t.d = -t.d;
    }
    let k1 = l1(&t)?;
    gates.push(Gate::local(1, k1));
    t = *k1.matrix() * t;
    let k2 = u_scaled(t.a.conj(), -t.b)?.transpose();
    gates.push(Gate::local(0, k2));
    Ok(gates)
}

fn embed(g: Gate, hi: usize, lo: usize, pair: CzPair) -> Gate {
    match g {
        Gate::Local { qubit: 1, u } => Gate::local(hi, u),
        Gate::Local { qubit: 0, u } => Gate::local(lo, u),
        Gate::Cz(_) => Gate::Cz(pair),
        other => unreachable!("{other:?} outside the 2-qubit frame"),
    }
}

fn check_real_gates(circuit: &Circuit, trace: &[Branch]) -> Result<()> {
    let imag = circuit.max_gate_imag();
    if imag > REAL_GATE_TOL {
        return Err(Error::InvariantViolation {
            step: "real gates",
            residual: imag,
            trace: format_trace(trace),
        });
    }
    Ok(())
}

fn finish<R: Register>(
    input: &R,
    circuit: Circuit,
    trace: Vec<Branch>,
    mode: Mode,
    fidelity_of: impl Fn(&R) -> f64,
) -> Result<SynthesisReport> {
    let circuit = circuit.simplify();
    let fidelity = fidelity_of(&circuit.apply(input));
    if !(fidelity >= 1.0 - FIDELITY_TOL) {
        return Err(Error::InvariantViolation {
            step: "final fidelity",
            residual: 1.0 - fidelity,
            trace: format_trace(&trace),
        });
    }
    if mode == Mode::Real {
        check_real_gates(&circuit, &trace)?;
    }
    Ok(SynthesisReport {
        cz_count: circuit.cz_count(),
        all_real: circuit.max_gate_imag() <= REAL_GATE_TOL,
        circuit,
        direction: Direction::Disentangle,
        branch_trace: trace,
        fidelity,
    })
}

/// 2-qubit disentangler: at most one CZ, none when `det T(φ) = 0`.
pub fn disentangle2(s: &PureState2) -> Result<SynthesisReport> {
    let mut trace = Vec::new();
    let gates = two_qubit_gates(s.matrix(), &mut trace)?;
    let circuit = Circuit::from_gates(2, gates);
    finish(s, circuit, trace, Mode::General, |r: &PureState2| r.amplitudes()[0].norm().min(1.0))
}

fn realify2(s: &PureState2) -> Result<PureState2> {
    let mi = s.max_imag();
    if mi > REAL_TOL {
        return Err(Error::NotReal { max_imag: mi });
    }
    Ok(PureState2::from_amplitudes_unchecked(s.amplitudes().map(|z| C64::from(z.re))))
}

/// 2-qubit disentangler for real states; every gate is real.
pub fn disentangle2_real(s: &PureState2) -> Result<SynthesisReport> {
    let s = realify2(s)?;
    let mut trace = Vec::new();
    let gates = two_qubit_gates(s.matrix(), &mut trace)?;
    let circuit = Circuit::from_gates(2, gates);
    finish(&s, circuit, trace, Mode::Real, |r: &PureState2| r.amplitudes()[0].norm().min(1.0))
}

/// Running state of a 3-qubit reduction.
struct Reduction {
    state: PureState3,
    gates: Vec<Gate>,
    trace: Vec<Branch>,
    real: bool,
}

impl Reduction {
    fn new(state: PureState3, real: bool) -> Self {
        Reduction { state, gates: Vec::with_capacity(16), trace: Vec::new(), real }
    }

    fn push(&mut self, g: Gate) {
        self.state = self.state.apply_gate(&g);
        self.gates.push(g);
    }

    fn blocks(&self) -> BlockPair {
        self.state.blocks()
    }

    fn check(&self, step: &'static str, residual: f64) -> Result<()> {
        if residual <= STEP_TOL {
            Ok(())
        } else {
            Err(Error::InvariantViolation { step, residual, trace: format_trace(&self.trace) })
        }
    }

    /// Pencil root used in step 1: smallest modulus, and real in real mode.
    fn pencil_root(&self, a: &Mat2, b: &Mat2) -> Result<C64> {
        let roots = solve_det_pencil(a, b)?;
        if !self.real {
            return Ok(roots[0]);
        }
        let real_root = roots
            .iter()
            .find(|z| z.im.abs() <= 1e-8 * (1.0 + z.norm()))
            .or_else(|| roots.iter().min_by(|x, y| x.im.abs().total_cmp(&y.im.abs())))
            .copied()
            .unwrap_or_default();
        Ok(C64::from(real_root.re))
    }

    /// `cz01·(I⊗I⊗R₁(A₀)ᵀ)`: makes the top block singular with one CZ.
    fn real_prefix(&mut self) -> Result<()> {
        let a0 = self.blocks().t0;
        let u0 = r1(&a0)?;
        self.push(Gate::local(0, u0.transpose()));
        self.push(Gate::Cz(CzPair::Q01));
        let a1 = self.blocks().t0;
        self.check("delta<0 prefix: det(A1)", a1.det().norm())
    }

    fn run(&mut self) -> Result<()> {
        // step 1
        let BlockPair { t0: a0, t1: b0 } = self.blocks();
        let w1 = if b0.is_singular() {
            self.trace.push(Branch::DetB0Zero);
            u_scaled(C64::from(0.0), C64::from(1.0))?
        } else {
            self.trace.push(Branch::PencilRoot);
            let z0 = self.pencil_root(&a0, &b0)?;
            u_scaled(C64::from(1.0), z0)?
        };
        self.push(Gate::local(2, w1));
        let a1 = self.blocks().t0;
        self.check("step 1: det(A1)", a1.det().norm())?;

        if a1.is_zero() {
            // |φ₁⟩ = |1⟩ ⊗ |ψ⟩: move |1⟩ to |0⟩ and finish the pair (1,0)
            self.trace.push(Branch::A1Zero);
            self.push(Gate::local(2, u_scaled(C64::from(0.0), C64::from(-1.0))?));
            let t = self.blocks().t0;
            let gates = two_qubit_gates(t, &mut self.trace)?;
            for g in gates {
                self.push(embed(g, 1, 0, CzPair::Q01));
            }
            return Ok(());
        }

        // step 2
        self.push(Gate::local(1, l1(&a1)?));
        let a2 = self.blocks().t0;
        self.check("step 2: row 2 of A2", (a2.c.norm_sqr() + a2.d.norm_sqr()).sqrt())?;

        // step 3
        self.push(Gate::local(0, r3(&a2)?.transpose()));
        let a3 = self.blocks().t0;
        self.check("step 3: A3 off-corner entries", a3.b.norm().max(a3.c.norm()).max(a3.d.norm()))?;

        // step 4
        let b3 = self.blocks().t1;
        if b3.is_singular() {
            self.trace.push(Branch::DetB3Zero);
        } else {
            self.trace.push(Branch::Cz01Sandwich);
            let u4 = r1(&b3)?.transpose();
            self.push(Gate::local(0, u4));
            self.push(Gate::Cz(CzPair::Q01));
            self.push(Gate::local(0, u4.adjoint()));
            let BlockPair { t0: a4, t1: b4 } = self.blocks();
            self.check("step 4: det(B4)", b4.det().norm())?;
            self.check("step 4: A4 = A3", a4.max_abs_diff(&a3))?;
        }

        // step 5
        let b4 = self.blocks().t1;
        if (b4.b.norm_sqr() + b4.d.norm_sqr()).sqrt() <= EPS_ZERO {
            self.trace.push(Branch::B4Column2Zero);
        } else {
            self.trace.push(Branch::Cz02Step);
            self.push(Gate::local(0, r2(&b4)?.transpose()));
            self.push(Gate::Cz(CzPair::Q02));
            let BlockPair { t0, t1 } = self.blocks();
            let rows = [t0.row(0), t0.row(1), t1.row(0), t1.row(1)];
            let mut worst: f64 = 0.0;
            for i in 0..4 {
                for j in i + 1..4 {
                    let (p, q) = (rows[i], rows[j]);
                    worst = worst.max((p[0] * q[1] - p[1] * q[0]).norm());
                }
            }
            self.check("step 5: row minors", worst)?;
        }

        // (2-qubit on qubits 2,1) ⊗ (qubit 0)
        let (pair, a) = match self.state.factor_right_tol(STEP_TOL) {
            Some(f) => f,
            None => return self.check("tensor factorization", f64::INFINITY),
        };
        self.push(Gate::local(0, u_scaled(a[0].conj(), -a[1])?.transpose()));
        let b = pair.matrix();
        self.trace.push(if b.d.norm() <= EPS_ZERO { Branch::B3Zero } else { Branch::B3NonZero });
        let gates = two_qubit_gates(b, &mut self.trace)?;
        for g in gates {
            self.push(embed(g, 2, 1, CzPair::Q12));
        }
        Ok(())
    }
}

fn disentangle3_with(s: &PureState3, mode: Mode) -> Result<SynthesisReport> {
    let (input, mut red) = match mode {
        Mode::General => (*s, Reduction::new(*s, false)),
        Mode::Real => {
            let mi = s.max_imag();
            if mi > REAL_TOL {
                return Err(Error::NotReal { max_imag: mi });
            }
            let s = PureState3::from_amplitudes_unchecked(s.amplitudes().map(|z| C64::from(z.re)));
            (s, Reduction::new(s, true))
        }
    };
    if mode == Mode::Real {
        let delta = input.delta()?;
        if delta.is_nonnegative() {
            red.trace.push(Branch::DeltaNonNegative);
        } else {
            red.trace.push(Branch::DeltaNegative);
            red.real_prefix()?;
        }
    }
    red.run()?;
    let Reduction { gates, trace, .. } = red;
    finish(&input, Circuit::from_gates(3, gates), trace, mode, |r: &PureState3| {
        fidelity_to_basis(r, 0)
    })
}

/// General 3-qubit disentangler: at most three CZ gates.
pub fn disentangle3(s: &PureState3) -> Result<SynthesisReport> {
    disentangle3_with(s, Mode::General)
}

/// Real 3-qubit disentangler: real local gates, at most three CZ gates when
/// `Δ ≥ 0` and four otherwise.
pub fn disentangle3_real(s: &PureState3) -> Result<SynthesisReport> {
    disentangle3_with(s, Mode::Real)
}

/// Disentangler dispatch by register size and mode.
pub fn disentangle(s: &StateInput, mode: Mode) -> Result<SynthesisReport> {
    match (s, mode) {
        (StateInput::Two(s), Mode::General) => disentangle2(s),
        (StateInput::Two(s), Mode::Real) => disentangle2_real(s),
        (StateInput::Three(s), mode) => disentangle3_with(s, mode),
    }
}

/// Preparation circuit `|0…0⟩ → |φ⟩`: the inverse of the disentangler.
pub fn prepare(s: &StateInput, mode: Mode) -> Result<SynthesisReport> {
    let report = disentangle(s, mode)?;
    let circuit = report.circuit.inverse();
    let fidelity = match s {
        StateInput::Two(s) => s.overlap(&circuit.apply(&PureState2::basis(0))),
        StateInput::Three(s) => s.overlap(&circuit.apply(&PureState3::basis(0))),
    };
    if !(fidelity >= 1.0 - FIDELITY_TOL) {
        return Err(Error::InvariantViolation {
            step: "preparation fidelity",
            residual: 1.0 - fidelity,
            trace: report.trace_string(),
        });
    }
    Ok(SynthesisReport {
        circuit,
        direction: Direction::Prepare,
        fidelity,
        ..report
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{random_state, random_state2};

    const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn ghz() -> PureState3 {
        PureState3::from_real([R, 0., 0., 0., 0., 0., 0., R]).unwrap()
    }

    fn neg_delta() -> PureState3 {
        PureState3::from_real([0.5, 0., 0., -0.5, 0., 0.5, 0.5, 0.]).unwrap()
    }

    #[test]
    fn two_qubit_examples() {
        let r = disentangle2(&PureState2::basis(0)).unwrap();
        assert_eq!(r.cz_count, 0);
        assert!(r.circuit.is_empty());

        let bell = PureState2::from_real([R, 0., 0., R]).unwrap();
        let r = disentangle2(&bell).unwrap();
        assert_eq!(r.cz_count, 1);
        assert!((r.fidelity - 1.0).abs() <= 1e-12);

        let plus_one = PureState2::from_real([0., R, 0., R]).unwrap();
        let r = disentangle2(&plus_one).unwrap();
        assert_eq!(r.cz_count, 0);
        assert_eq!(r.branch_trace, vec![Branch::DetTZero]);
    }

    #[test]
    fn two_qubit_random() {
        for seed in 0..200 {
            let r = disentangle2(&random_state2(seed, false)).unwrap();
            assert_eq!(r.cz_count, 1);
            assert!(r.fidelity >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn three_qubit_examples() {
        let r = disentangle3(&PureState3::basis(0)).unwrap();
        assert_eq!(r.cz_count, 0);

        let r = disentangle3(&ghz()).unwrap();
        assert!(r.cz_count <= 3);
        assert!(r.fidelity >= 1.0 - 1e-10);

        for seed in 0..500 {
            let r = disentangle3(&random_state(seed, false)).unwrap();
            assert!(r.cz_count <= 3);
            assert!(r.fidelity >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn real_examples() {
        let r = disentangle3_real(&PureState3::basis(0)).unwrap();
        assert_eq!(r.cz_count, 0);
        assert!(r.all_real);

        let r = disentangle3_real(&neg_delta()).unwrap();
        assert!(r.cz_count <= 4);
        assert!(r.all_real);
        assert_eq!(r.branch_trace[0], Branch::DeltaNegative);

        for seed in 0..500 {
            let s = random_state(seed, true);
            let r = disentangle3_real(&s).unwrap();
            let bound = s.delta().unwrap().cz_bound();
            assert!(r.cz_count <= bound, "seed {seed}: {} > {bound}", r.cz_count);
            assert!(r.circuit.max_gate_imag() <= 1e-10);
        }
    }

    #[test]
    fn real_mode_rejects_complex() {
        let s = random_state(1, false);
        assert!(matches!(disentangle3_real(&s), Err(Error::NotReal { .. })));
    }

    #[test]
    fn prepare_roundtrip() {
        let r = prepare(&StateInput::Three(ghz()), Mode::General).unwrap();
        assert!(r.fidelity >= 1.0 - 1e-10);
        assert_eq!(r.direction, Direction::Prepare);
        let r = prepare(&StateInput::Three(neg_delta()), Mode::Real).unwrap();
        assert!(r.cz_count <= 4 && r.all_real);
        let r = prepare(&StateInput::Three(PureState3::basis(0)), Mode::General).unwrap();
        assert!(r.circuit.is_empty());
    }
}
