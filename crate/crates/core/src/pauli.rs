//! n-qubit Pauli operators in the binary symplectic representation.
//!
//! An operator is stored as `i^phase * σ(x_0, z_0) ⊗ … ⊗ σ(x_{n-1}, z_{n-1})`
//! where `σ(0,0) = I`, `σ(1,0) = X`, `σ(0,1) = Z` and `σ(1,1) = Y = iXZ`.
//! With this normal form `phase` is exactly the exponent of the operator's
//! sign `λ(P) = i^phase`, so `-ZZZZXIZ` has phase 2 and `XZZXI` phase 0.
//!
//! Bit `j` of `x`/`z` refers to qubit `j`, which is the `j`-th character of
//! the text form (leftmost character is qubit 0).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PauliError;

/// Largest supported qubit count (one machine word per bit-vector).
pub const MAX_QUBITS: usize = 64;

#[inline]
fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Single-qubit Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::I, Axis::X, Axis::Y, Axis::Z];
    pub const LOGICAL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// `(x, z)` bits of the letter.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Axis::I => (false, false),
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Axis {
        match (x, z) {
            (false, false) => Axis::I,
            (true, false) => Axis::X,
            (true, true) => Axis::Y,
            (false, true) => Axis::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Axis::I => 'I',
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    /// Index in `X, Y, Z` order; `None` for the identity.
    pub fn logical_index(self) -> Option<usize> {
        match self {
            Axis::I => None,
            Axis::X => Some(0),
            Axis::Y => Some(1),
            Axis::Z => Some(2),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Which bilinear form to use when pairing two operators.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InnerProduct {
    /// `|a∧a'| + |b∧b'|`, the standard form on F₂²ⁿ.
    Dot,
    /// `|a∧b'| + |b∧a'|`, zero iff the operators commute.
    Symplectic,
}

/// A phased n-qubit Pauli operator, `n ≤ 64`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliOperator {
    n: u8,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliOperator {
    /// Builds an operator from raw parts. Bits above `n` are rejected.
    pub fn new(n: usize, x: u64, z: u64, phase: u8) -> Result<Self, PauliError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(PauliError::UnsupportedQubitCount(n));
        }
        if (x | z) & !mask(n) != 0 {
            return Err(PauliError::BitsOutOfRange { n });
        }
        Ok(Self::from_parts(n, x, z, phase))
    }

    /// Unchecked constructor for internal use; masks are the caller's job.
    #[inline]
    pub(crate) fn from_parts(n: usize, x: u64, z: u64, phase: u8) -> Self {
        debug_assert!(n >= 1 && n <= MAX_QUBITS);
        debug_assert_eq!((x | z) & !mask(n), 0);
        Self {
            n: n as u8,
            x,
            z,
            phase: phase & 3,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts(n, 0, 0, 0)
    }

    /// Single-qubit letter `axis` on qubit `qubit` of an `n`-qubit register.
    pub fn single(n: usize, qubit: usize, axis: Axis) -> Self {
        assert!(qubit < n, "qubit {qubit} out of range for n = {n}");
        let (x, z) = axis.bits();
        Self::from_parts(n, (x as u64) << qubit, (z as u64) << qubit, 0)
    }

    /// `X(a) = ⊗ X^{a_i}`.
    pub fn x_operator(n: usize, a: u64) -> Self {
        Self::from_parts(n, a & mask(n), 0, 0)
    }

    /// `Z(b) = ⊗ Z^{b_i}`.
    pub fn z_operator(n: usize, b: u64) -> Self {
        Self::from_parts(n, 0, b & mask(n), 0)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn x_bits(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn z_bits(&self) -> u64 {
        self.z
    }

    /// Exponent `k` with `λ(P) = i^k`.
    #[inline]
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    /// Same Pauli letters, different phase.
    #[inline]
    pub fn with_phase(&self, phase: u8) -> Self {
        Self {
            phase: phase & 3,
            ..*self
        }
    }

    #[inline]
    pub fn negate(&self) -> Self {
        self.with_phase(self.phase + 2)
    }

    /// `λ(P)` is ±1.
    #[inline]
    pub fn has_real_phase(&self) -> bool {
        self.phase & 1 == 0
    }

    #[inline]
    pub fn is_identity_pattern(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.is_identity_pattern() && self.phase == 0
    }

    /// Number of qubits acted on non-trivially.
    #[inline]
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn axis_at(&self, qubit: usize) -> Axis {
        Axis::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    /// Bit pattern packed as a single key, X-part in the high word.
    #[inline]
    pub fn pattern(&self) -> u128 {
        ((self.x as u128) << 64) | self.z as u128
    }

    fn check_same_n(&self, other: &Self) -> Result<(), PauliError> {
        if self.n != other.n {
            Err(PauliError::DimensionMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            })
        } else {
            Ok(())
        }
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_same_n(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Product without the dimension check.
    ///
    /// Rewrite each factor as `i^k i^{|x∧z|} X(x)Z(z)`, commute `Z(z₁)` past
    /// `X(x₂)` for a factor `(-1)^{|z₁∧x₂|}`, and convert back.
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = self.phase as u32
            + other.phase as u32
            + (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        Self {
            n: self.n,
            x,
            z,
            phase: (e & 3) as u8,
        }
    }

    #[inline]
    pub(crate) fn symplectic_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) & 1 == 1
    }

    #[inline]
    pub(crate) fn dot_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.x).count_ones() + (self.z & other.z).count_ones()) & 1 == 1
    }

    /// Symplectic inner product; `false` iff the operators commute.
    pub fn symplectic_product(&self, other: &Self) -> Result<bool, PauliError> {
        self.check_same_n(other)?;
        Ok(self.symplectic_unchecked(other))
    }

    /// Standard bilinear inner product `|x∧x'| + |z∧z'| mod 2`.
    pub fn dot_product(&self, other: &Self) -> Result<bool, PauliError> {
        self.check_same_n(other)?;
        Ok(self.dot_unchecked(other))
    }

    pub fn inner(&self, other: &Self, product: InnerProduct) -> Result<bool, PauliError> {
        match product {
            InnerProduct::Dot => self.dot_product(other),
            InnerProduct::Symplectic => self.symplectic_product(other),
        }
    }

    #[inline]
    pub fn commutes_with(&self, other: &Self) -> bool {
        self.n == other.n && !self.symplectic_unchecked(other)
    }

    /// Transversal M₃ conjugation: `X → Y → Z → X` on every qubit, phase kept.
    #[inline]
    pub fn m3_conjugate(&self) -> Self {
        Self {
            n: self.n,
            x: self.x ^ self.z,
            z: self.x,
            phase: self.phase,
        }
    }

    /// Text form, e.g. `-XXXXYIX`.
    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.axis_at(q).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = PauliError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_pauli(text)
    }
}

/// Parses `[+|-|−][i]` followed by letters from `IXYZ`.
pub fn parse_pauli(text: &str) -> Result<PauliOperator, PauliError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(PauliError::Empty);
    }
    let mut rest = text;
    let mut phase = 0u8;
    if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    } else if let Some(r) = rest.strip_prefix('-').or_else(|| rest.strip_prefix('−')) {
        rest = r;
        phase = 2;
    }
    if let Some(r) = rest.strip_prefix('i') {
        rest = r;
        phase += 1;
    }
    if rest.is_empty() {
        return Err(PauliError::Empty);
    }
    let n = rest.chars().count();
    if n > MAX_QUBITS {
        return Err(PauliError::UnsupportedQubitCount(n));
    }
    let (mut x, mut z) = (0u64, 0u64);
    for (q, c) in rest.chars().enumerate() {
        let axis = match c {
            'I' => Axis::I,
            'X' => Axis::X,
            'Y' => Axis::Y,
            'Z' => Axis::Z,
            other => {
                return Err(PauliError::IllegalCharacter {
                    character: other,
                    text: text.to_string(),
                })
            }
        };
        let (bx, bz) = axis.bits();
        x |= (bx as u64) << q;
        z |= (bz as u64) << q;
    }
    Ok(PauliOperator::from_parts(n, x, z, phase))
}

pub fn format_pauli(p: &PauliOperator) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let prod = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(prod, p("-iY"));
        assert_eq!(prod.phase_exp(), 3);
    }

    #[test]
    fn single_qubit_table() {
        // Y = iXZ fixes every entry of the table.
        let cases = [
            ("X", "Y", "iZ"),
            ("Y", "Z", "iX"),
            ("Z", "X", "iY"),
            ("Y", "X", "-iZ"),
            ("Z", "Y", "-iX"),
            ("X", "Z", "-iY"),
            ("Y", "Y", "I"),
            ("iX", "iX", "-I"),
        ];
        for (a, b, expect) in cases {
            assert_eq!(p(a).multiply(&p(b)).unwrap(), p(expect), "{a}·{b}");
        }
    }

    #[test]
    fn identity_is_neutral() {
        let q = p("-XZYIZ");
        let id = PauliOperator::identity(5);
        assert_eq!(q.multiply(&id).unwrap(), q);
        assert_eq!(id.multiply(&q).unwrap(), q);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            p("XX").multiply(&p("X")),
            Err(PauliError::DimensionMismatch { left: 2, right: 1 })
        ));
        assert!(p("XX").symplectic_product(&p("X")).is_err());
        assert!(p("XX").dot_product(&p("XXX")).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(p("XZZXI").weight(), 4);
        assert_eq!(PauliOperator::identity(7).weight(), 0);
        assert_eq!(p("-ZZZZXIZ").weight(), 6);
    }

    #[test]
    fn inner_products() {
        assert!(p("X").symplectic_product(&p("Z")).unwrap());
        assert!(p("X").symplectic_product(&p("Y")).unwrap());
        assert!(!p("XZZXI").symplectic_product(&p("IXZZX")).unwrap());
        assert!(p("X").dot_product(&p("X")).unwrap());
        assert!(!p("X").dot_product(&p("Z")).unwrap());
        assert!(p("ZI").dot_product(&p("ZZ")).unwrap());
    }

    #[test]
    fn m3_cycle() {
        assert_eq!(p("X").m3_conjugate(), p("Y"));
        assert_eq!(p("Y").m3_conjugate(), p("Z"));
        assert_eq!(p("Z").m3_conjugate(), p("X"));
        assert_eq!(p("-ZZZZXIZ").m3_conjugate(), p("-XXXXYIX"));
        assert_eq!(p("iX").m3_conjugate(), p("iY"));
        let id = PauliOperator::identity(3);
        assert_eq!(id.m3_conjugate(), id);
    }

    #[test]
    fn x_and_z_builders() {
        assert_eq!(PauliOperator::x_operator(4, 0b0011), p("XXII"));
        assert_eq!(PauliOperator::z_operator(4, 0b1000), p("IIIZ"));
        assert!(PauliOperator::x_operator(4, 0).is_identity());
        assert_eq!(PauliOperator::x_operator(6, 0b101101).weight(), 4);
    }

    #[test]
    fn parse_and_format() {
        let q = p("XZZXI");
        assert_eq!((q.x_bits(), q.z_bits(), q.phase_exp()), (0b01001, 0b00110, 0));
        assert_eq!(p("-ZZZZXIZ").phase_exp(), 2);
        assert_eq!(p("−ZZ").phase_exp(), 2);
        assert_eq!(p("+iZ").phase_exp(), 1);
        assert_eq!(p("-iZ").phase_exp(), 3);
        for s in ["XZZXI", "-ZZ", "iY", "-iXYZ", "IIII"] {
            assert_eq!(p(s).format(), s);
        }
        assert!(matches!(
            parse_pauli("XQ"),
            Err(PauliError::IllegalCharacter { character: 'Q', .. })
        ));
        assert!(matches!(parse_pauli(""), Err(PauliError::Empty)));
        assert!(matches!(parse_pauli("-"), Err(PauliError::Empty)));
    }

    #[test]
    fn raw_constructor_checks() {
        assert!(PauliOperator::new(2, 0b100, 0, 0).is_err());
        assert!(PauliOperator::new(0, 0, 0, 0).is_err());
        assert_eq!(PauliOperator::new(2, 0b11, 0b01, 6).unwrap(), p("-YX"));
    }
}
