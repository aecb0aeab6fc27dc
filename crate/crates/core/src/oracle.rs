//! Dense-matrix reference implementation, used to cross-check the exact
//! enumerator and classifier code on small codes.
//!
//! Nothing here touches the group-echelon or Gray-code machinery: operators
//! become Kronecker products of 2×2 matrices and every quantity is a trace.

use ndarray::{linalg::kron, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{CosetLabel, LogicalFrame, RecoveryClassifier, StabilizerCode};
use crate::enumerator::SignedEnumeratorSet;
use crate::error::OracleError;
use crate::pauli::{Axis, PauliOperator};

pub const MAX_ORACLE_QUBITS: usize = 7;
pub const MATCH_TOLERANCE: f64 = 1e-9;
pub const STRUCTURE_TOLERANCE: f64 = 1e-12;

pub type DenseOperator = Array2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_size(n: usize) -> Result<(), OracleError> {
    if n > MAX_ORACLE_QUBITS {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_ORACLE_QUBITS,
        });
    }
    Ok(())
}

pub fn single_qubit(axis: Axis) -> DenseOperator {
    let m = match axis {
        Axis::I => [[ONE, ZERO], [ZERO, ONE]],
        Axis::X => [[ZERO, ONE], [ONE, ZERO]],
        Axis::Y => [[ZERO, -I], [I, ZERO]],
        Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
    };
    Array2::from_shape_fn((2, 2), |(r, c)| m[r][c])
}

pub fn identity(n: usize) -> DenseOperator {
    Array2::eye(1 << n)
}

/// `i^k ⊗_j σ_j`, qubit 0 being the most significant tensor factor.
pub fn dense_pauli(p: &PauliOperator) -> Result<DenseOperator, OracleError> {
    let n = p.num_qubits();
    check_size(n)?;
    let mut out = Array2::from_elem((1, 1), I.powu(p.phase_exp() as u32));
    for q in 0..n {
        out = kron(&out, &single_qubit(p.axis_at(q)));
    }
    Ok(out)
}

/// `(I + i(X+Y+Z))/2`, the order-3 Clifford with `M₃† X M₃ = Y`,
/// `M₃† Y M₃ = Z`, `M₃† Z M₃ = X`.
pub fn m3_matrix() -> DenseOperator {
    let sum = single_qubit(Axis::X) + single_qubit(Axis::Y) + single_qubit(Axis::Z);
    (single_qubit(Axis::I) + sum.mapv(|v| v * I)).mapv(|v| v * 0.5)
}

/// `M₃^{⊗n}`.
pub fn transversal_m3(n: usize) -> Result<DenseOperator, OracleError> {
    check_size(n)?;
    let m = m3_matrix();
    let mut out = Array2::from_elem((1, 1), ONE);
    for _ in 0..n {
        out = kron(&out, &m);
    }
    Ok(out)
}

pub fn adjoint(a: &DenseOperator) -> DenseOperator {
    a.t().mapv(|v| v.conj())
}

pub fn trace(a: &DenseOperator) -> Complex64 {
    a.diag().sum()
}

/// Largest entry modulus of `a − b`.
pub fn max_abs_diff(a: &DenseOperator, b: &DenseOperator) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `Π = ∏_g (I + g)/2`.
pub fn projector(code: &StabilizerCode) -> Result<DenseOperator, OracleError> {
    let n = code.num_qubits();
    check_size(n)?;
    code.validate().map_err(crate::error::CodeError::from)?;
    let id = identity(n);
    let mut pi = id.clone();
    for g in code.generators() {
        let factor = (&id + &dense_pauli(g)?).mapv(|v| v * 0.5);
        pi = pi.dot(&factor);
    }
    Ok(pi)
}

/// `ρ(r̄) = I/2 + (r̄/2)(X + Y + Z)`.
pub fn single_qubit_state(rbar: f64) -> DenseOperator {
    let sum = single_qubit(Axis::X) + single_qubit(Axis::Y) + single_qubit(Axis::Z);
    (single_qubit(Axis::I) + sum.mapv(|v| v * rbar)).mapv(|v| v * 0.5)
}

pub fn product_state(n: usize, rbar: f64) -> Result<DenseOperator, OracleError> {
    check_size(n)?;
    let rho = single_qubit_state(rbar);
    let mut out = Array2::from_elem((1, 1), ONE);
    for _ in 0..n {
        out = kron(&out, &rho);
    }
    Ok(out)
}

fn check_physical(rbar: f64) -> Result<(), OracleError> {
    let top = 1.0 / 3f64.sqrt();
    if !rbar.is_finite() || rbar < -STRUCTURE_TOLERANCE || rbar > top + STRUCTURE_TOLERANCE {
        return Err(OracleError::Unphysical(rbar));
    }
    Ok(())
}

/// `2^{n−1}·Tr(Q̄ Π ρ^{⊗n})` for `Q = I, X, Y, Z`.
pub fn oracle_enumerator_values(
    code: &StabilizerCode,
    frame: &LogicalFrame,
    rbar: f64,
) -> Result<[f64; 4], OracleError> {
    check_physical(rbar)?;
    let n = code.num_qubits();
    let pi = projector(code)?;
    let state = pi.dot(&product_state(n, rbar)?);
    let scale = (1u64 << (n - 1)) as f64;
    let mut out = [0.0; 4];
    for (k, axis) in Axis::ALL.into_iter().enumerate() {
        let t = trace(&dense_pauli(&frame.representative(axis))?.dot(&state));
        out[k] = t.re * scale;
    }
    Ok(out)
}

/// Largest gap between the oracle traces and `enums` over `samples`.
pub fn max_enumerator_deviation(
    code: &StabilizerCode,
    enums: &SignedEnumeratorSet,
    samples: &[f64],
) -> Result<f64, OracleError> {
    let mut worst: f64 = 0.0;
    for &x in samples {
        let dense = oracle_enumerator_values(code, &enums.frame, x)?;
        for (k, axis) in Axis::ALL.into_iter().enumerate() {
            worst = worst.max((dense[k] - enums.get(axis).eval_f64(x)).abs());
        }
    }
    Ok(worst)
}

/// Sample points used by the cross-checks: `0, 0.1, 0.2, 0.3, 0.5, 1/√3`.
pub fn standard_samples() -> [f64; 6] {
    [0.0, 0.1, 0.2, 0.3, 0.5, 1.0 / 3f64.sqrt()]
}

/// Identifies `Π P Π` as `0` or `i^k Q̄ Π` by direct comparison with all
/// sixteen candidates.
pub fn oracle_classify(
    p: &PauliOperator,
    code: &StabilizerCode,
    frame: &LogicalFrame,
) -> Result<CosetLabel, OracleError> {
    let pi = projector(code)?;
    oracle_classify_with(p, &pi, frame)
}

/// [`oracle_classify`] with a precomputed projector.
pub fn oracle_classify_with(
    p: &PauliOperator,
    pi: &DenseOperator,
    frame: &LogicalFrame,
) -> Result<CosetLabel, OracleError> {
    let sandwich = pi.dot(&dense_pauli(p)?).dot(pi);
    if sandwich.iter().all(|v| v.norm() < MATCH_TOLERANCE) {
        return Ok(CosetLabel::Zero);
    }
    for axis in Axis::ALL {
        let q_pi = dense_pauli(&frame.representative(axis))?.dot(pi);
        for phase in 0..4u8 {
            let candidate = q_pi.mapv(|v| v * I.powu(phase as u32));
            if max_abs_diff(&sandwich, &candidate) < MATCH_TOLERANCE {
                return Ok(CosetLabel::Image { phase, axis });
            }
        }
    }
    Err(OracleError::NoMatch)
}

/// Result of comparing the exact pipeline with the dense oracle.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub samples: Vec<f64>,
    pub max_enumerator_deviation: f64,
    pub operators_classified: usize,
    pub classifier_mismatches: Vec<String>,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.max_enumerator_deviation < MATCH_TOLERANCE && self.classifier_mismatches.is_empty()
    }
}

/// Operators fed to the classifier check: every phased operator for
/// `n ≤ 3`, otherwise the generators, the frame and `random` seeded
/// random phased operators.
pub fn classifier_probe_set(code: &StabilizerCode, frame: &LogicalFrame, random: usize, seed: u64) -> Vec<PauliOperator> {
    let n = code.num_qubits();
    if n <= 3 {
        let mut all = Vec::with_capacity(4usize.pow(n as u32 + 1));
        for x in 0..1u64 << n {
            for z in 0..1u64 << n {
                for phase in 0..4 {
                    all.push(PauliOperator::from_parts(n, x, z, phase));
                }
            }
        }
        return all;
    }
    let mut ops: Vec<PauliOperator> = code.generators().to_vec();
    ops.extend([frame.xbar, frame.ybar, frame.zbar]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for _ in 0..random {
        let x = rng.random::<u64>() & mask;
        let z = rng.random::<u64>() & mask;
        ops.push(PauliOperator::from_parts(n, x, z, rng.random_range(0..4)));
    }
    ops
}

/// Enumerator traces at `samples` plus classifier agreement on
/// [`classifier_probe_set`].
pub fn cross_check(
    code: &StabilizerCode,
    enums: &SignedEnumeratorSet,
    samples: &[f64],
    random_operators: usize,
    seed: u64,
) -> Result<CrossCheck, OracleError> {
    let max_enumerator_deviation = max_enumerator_deviation(code, enums, samples)?;
    let classifier = RecoveryClassifier::new(code, enums.frame)?;
    let pi = projector(code)?;
    let ops = classifier_probe_set(code, &enums.frame, random_operators, seed);
    let mut classifier_mismatches = Vec::new();
    for p in &ops {
        let exact = classifier.classify(p)?;
        let dense = oracle_classify_with(p, &pi, &enums.frame)?;
        if exact != dense {
            classifier_mismatches.push(format!("{p}: exact {exact}, dense {dense}"));
        }
    }
    Ok(CrossCheck {
        samples: samples.to_vec(),
        max_enumerator_deviation,
        operators_classified: ops.len(),
        classifier_mismatches,
    })
}

/// Numerical rank via Gram–Schmidt on the columns.
pub fn rank(a: &DenseOperator, tolerance: f64) -> usize {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for col in a.columns() {
        let mut v: Vec<Complex64> = col.to_vec();
        for b in &basis {
            let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > tolerance {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{choose_logical_frame, named, Relabeling};
    use crate::enumerator::canonical_enumerators;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_matrices() {
        let x = dense_pauli(&p("X")).unwrap();
        assert_eq!(x[[0, 1]], ONE);
        assert_eq!(x[[1, 0]], ONE);
        assert_eq!(x[[0, 0]], ZERO);
        // Y = iXZ
        let ixz = single_qubit(Axis::X).dot(&single_qubit(Axis::Z)).mapv(|v| v * I);
        assert!(max_abs_diff(&ixz, &single_qubit(Axis::Y)) < STRUCTURE_TOLERANCE);
        let minus_iy = dense_pauli(&p("-iY")).unwrap();
        assert!(max_abs_diff(&minus_iy, &single_qubit(Axis::Y).mapv(|v| -v * I)) < 1e-15);
    }

    #[test]
    fn multiplication_is_a_homomorphism() {
        let ops = ["XYZ", "-iZZI", "YIX", "iXXY", "IIZ", "-YYY"];
        for a in ops {
            for b in ops {
                let (a, b) = (p(a), p(b));
                let prod = dense_pauli(&a.multiply(&b).unwrap()).unwrap();
                let dense = dense_pauli(&a).unwrap().dot(&dense_pauli(&b).unwrap());
                assert!(max_abs_diff(&prod, &dense) < STRUCTURE_TOLERANCE, "{a} {b}");
            }
        }
    }

    #[test]
    fn m3_matches_conjugation_rule() {
        let m = m3_matrix();
        let md = adjoint(&m);
        assert!(max_abs_diff(&md.dot(&m), &identity(1)) < STRUCTURE_TOLERANCE);
        for (from, to) in [(Axis::X, Axis::Y), (Axis::Y, Axis::Z), (Axis::Z, Axis::X)] {
            let image = md.dot(&single_qubit(from)).dot(&m);
            assert!(max_abs_diff(&image, &single_qubit(to)) < STRUCTURE_TOLERANCE);
        }
        let mt = transversal_m3(3).unwrap();
        for s in ["XYZ", "-ZIY", "iXXI"] {
            let q = p(s);
            let lhs = dense_pauli(&q.m3_conjugate()).unwrap();
            let rhs = adjoint(&mt).dot(&dense_pauli(&q).unwrap()).dot(&mt);
            assert!(max_abs_diff(&lhs, &rhs) < STRUCTURE_TOLERANCE, "{s}");
        }
    }

    #[test]
    fn projector_structure() {
        for code in [named::five_qubit(), named::trivial(), named::steane()] {
            let pi = projector(&code).unwrap();
            assert!(max_abs_diff(&pi.dot(&pi), &pi) < STRUCTURE_TOLERANCE);
            assert!(max_abs_diff(&adjoint(&pi), &pi) < STRUCTURE_TOLERANCE);
            assert!((trace(&pi).re - 2.0).abs() < STRUCTURE_TOLERANCE);
            assert_eq!(rank(&pi, 1e-6), 2);
            for g in code.generators() {
                let pg = pi.dot(&dense_pauli(g).unwrap());
                assert!(max_abs_diff(&pg, &pi) < STRUCTURE_TOLERANCE);
            }
        }
    }

    #[test]
    fn five_qubit_traces() {
        let code = named::five_qubit();
        let frame = choose_logical_frame(&code, Relabeling::IDENTITY).unwrap();
        let top = oracle_enumerator_values(&code, &frame, 1.0 / 3f64.sqrt()).unwrap();
        assert!((top[0] - 8.0 / 3.0).abs() < MATCH_TOLERANCE);
        let bottom = oracle_enumerator_values(&code, &frame, 0.0).unwrap();
        assert!((bottom[0] - 1.0).abs() < MATCH_TOLERANCE);
        assert!(oracle_enumerator_values(&code, &frame, 0.7).is_err());
    }

    #[test]
    fn seven_qubit_matches_polynomials() {
        let code = named::seven_qubit_m3();
        let enums = canonical_enumerators(&code).unwrap();
        let worst = max_enumerator_deviation(&code, &enums, &[0.3]).unwrap();
        assert!(worst < MATCH_TOLERANCE, "{worst}");
    }

    #[test]
    fn classify_basics() {
        let code = named::five_qubit();
        let frame = choose_logical_frame(&code, Relabeling::IDENTITY).unwrap();
        for g in code.generators() {
            assert_eq!(
                oracle_classify(g, &code, &frame).unwrap(),
                CosetLabel::Image { phase: 0, axis: Axis::I }
            );
        }
        assert_eq!(oracle_classify(&p("XIIII"), &code, &frame).unwrap(), CosetLabel::Zero);
        let x = frame.xbar;
        assert_eq!(
            oracle_classify(&x.negate(), &code, &frame).unwrap(),
            CosetLabel::Image { phase: 2, axis: Axis::X }
        );
    }

    #[test]
    fn cross_check_named_codes() {
        for code in [named::five_qubit(), named::steane().flip_sign(1)] {
            let enums = canonical_enumerators(&code).unwrap();
            let check = cross_check(&code, &enums, &standard_samples(), 50, 7).unwrap();
            assert!(check.passed(), "{check:?}");
        }
        let code = StabilizerCode::from_strs(&["-XXI", "ZZZ"]).unwrap();
        let enums = canonical_enumerators(&code).unwrap();
        let check = cross_check(&code, &enums, &standard_samples(), 0, 0).unwrap();
        assert_eq!(check.operators_classified, 256);
        assert!(check.passed(), "{check:?}");
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            dense_pauli(&PauliOperator::identity(8)),
            Err(OracleError::TooLarge { n: 8, max: 7 })
        ));
    }
}
