//! [[n,1]] stabilizer codes and the coset classification of the recovery map.
//!
//! The recovery map sends a Pauli operator to zero unless it commutes with
//! the stabilizer group `G`; on the normalizer it is a homomorphism onto the
//! single-qubit Paulis with kernel `G`. Rather than synthesising a decoding
//! circuit we fix logical representatives `X̄, Ȳ, Z̄` and classify operators by
//! which coset of `G` they fall in, resolving the phase with an exact
//! row-echelon reduction against `G`.

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CodeError, CodeViolation};
use crate::pauli::{parse_pauli, Axis, InnerProduct, PauliOperator};
use crate::search::subspace::{disjoint, full_basis, truncate};

/// An ordered list of `n − 1` generators on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerCode {
    n: usize,
    generators: Vec<PauliOperator>,
}

impl StabilizerCode {
    /// Checks shape only (qubit counts and `n − 1` generators); use
    /// [`StabilizerCode::validate`] for the group-theoretic invariants.
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self, CodeError> {
        if n == 0 {
            return Err(crate::error::PauliError::UnsupportedQubitCount(0).into());
        }
        if let Some(bad) = generators.iter().find(|g| g.num_qubits() != n) {
            return Err(crate::error::PauliError::DimensionMismatch {
                left: n,
                right: bad.num_qubits(),
            }
            .into());
        }
        if generators.len() != n - 1 {
            return Err(CodeError::GeneratorCount {
                n,
                expected: n - 1,
                got: generators.len(),
            });
        }
        Ok(Self { n, generators })
    }

    /// Shape-checked and validated.
    pub fn new_valid(n: usize, generators: Vec<PauliOperator>) -> Result<Self, CodeError> {
        let code = Self::new(n, generators)?;
        code.validate()?;
        Ok(code)
    }

    /// Parses generators in Pauli text form; `n` is the length of the first.
    pub fn from_strs<S: AsRef<str>>(generators: &[S]) -> Result<Self, CodeError> {
        let ops = generators
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_pauli(s.as_ref()).map_err(|source| CodeError::Parse { line: i + 1, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let n = ops.first().map(|g| g.num_qubits()).ok_or(CodeError::EmptyCodeFile)?;
        Self::new(n, ops)
    }

    /// Code file: one generator per line, `#` starts a comment.
    pub fn parse_code_file(text: &str) -> Result<Self, CodeError> {
        let mut ops = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let op = parse_pauli(line).map_err(|source| CodeError::Parse { line: i + 1, source })?;
            ops.push(op);
        }
        let n = ops.first().map(|g| g.num_qubits()).ok_or(CodeError::EmptyCodeFile)?;
        Self::new(n, ops)
    }

    pub fn to_code_file(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// Same generators with phases replaced: bit `j` of `signs` makes
    /// generator `j` negative.
    pub fn with_signs(&self, signs: u64) -> Self {
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(j, g)| g.with_phase(if (signs >> j) & 1 == 1 { 2 } else { 0 }))
            .collect();
        Self {
            n: self.n,
            generators,
        }
    }

    /// Flips the sign of generator `index`.
    pub fn flip_sign(&self, index: usize) -> Self {
        let mut generators = self.generators.clone();
        generators[index] = generators[index].negate();
        Self {
            n: self.n,
            generators,
        }
    }

    /// Real phases, pairwise commutation, independence and `−I ∉ G`, checked
    /// in that order.
    pub fn validate(&self) -> Result<(), CodeViolation> {
        for (index, g) in self.generators.iter().enumerate() {
            if !g.has_real_phase() {
                return Err(CodeViolation::ComplexPhase {
                    index,
                    generator: g.to_string(),
                });
            }
        }
        for (first, a) in self.generators.iter().enumerate() {
            for (second, b) in self.generators.iter().enumerate().skip(first + 1) {
                if !a.commutes_with(b) {
                    return Err(CodeViolation::Anticommuting { first, second });
                }
            }
        }
        let mut echelon = GroupEchelon::new(self.n);
        for (index, g) in self.generators.iter().enumerate() {
            if let Some(phase) = echelon.insert(*g) {
                return Err(if phase == 2 {
                    CodeViolation::ContainsMinusIdentity { index }
                } else {
                    CodeViolation::Dependent { index }
                });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Exact phase-aware row-echelon form of `G`.
    pub fn echelon(&self) -> GroupEchelon {
        GroupEchelon::from_generators(self.n, &self.generators)
    }

    pub fn membership_with_phase(&self, p: &PauliOperator) -> Membership {
        self.echelon().membership(p)
    }

    /// Canonical description of the signed group `G`: its reduced echelon
    /// rows with their exact phases. Equal iff the signed groups are equal.
    pub fn canonical_form(&self) -> Vec<PauliOperator> {
        self.echelon().rows().to_vec()
    }

    /// Generators plus two operators completing a basis of the normalizer
    /// `G⊥(*)`, which has dimension `n + 1`.
    pub fn normalizer_basis(&self) -> Result<Vec<PauliOperator>, CodeError> {
        self.validate()?;
        Ok(self.normalizer_basis_unchecked())
    }

    fn normalizer_basis_unchecked(&self) -> Vec<PauliOperator> {
        let normalizer = truncate(&self.generators, &full_basis(self.n), InnerProduct::Symplectic);
        let extra = disjoint(&self.generators, &normalizer);
        debug_assert_eq!(extra.len(), 2);
        let mut basis = self.generators.clone();
        basis.extend(extra.into_iter().map(|e| e.with_phase(0)));
        basis
    }

    /// Every generator's M₃ conjugate is in `G` with sign `+1`.
    pub fn is_m3_code(&self) -> bool {
        let echelon = self.echelon();
        self.generators
            .iter()
            .all(|g| echelon.membership(&g.m3_conjugate()) == Membership::InGroup(Sign::Plus))
    }

    /// A generating set of `G` of the form `P, P′, Q, Q′, …` where `P′` is the
    /// M₃ conjugate of `P`, or `None` if `G` is not closed under M₃.
    pub fn m3_paired_generators(&self) -> Option<Vec<PauliOperator>> {
        if !self.is_m3_code() {
            return None;
        }
        let group = self.echelon();
        let mut span = GroupEchelon::new(self.n);
        let mut paired = Vec::new();
        for row in group.rows() {
            if span.membership(row) != Membership::NotInGroup {
                continue;
            }
            let conj = row.m3_conjugate();
            if span.insert(*row).is_some() || span.insert(conj).is_some() {
                return None;
            }
            paired.push(*row);
            paired.push(conj);
        }
        (paired.len() == self.generators.len()).then_some(paired)
    }

    /// Equivalent generating set with the X-part of the first `n − 1` qubits
    /// diagonalised: generator `i` carries X/Y only on qubits `i` and `n − 1`.
    ///
    /// When that X-part is rank-deficient, the pivot rows come first in
    /// echelon order and the remaining rows have no X/Y on the first `n − 1`
    /// qubits; nothing further is normalised.
    pub fn standard_form(&self) -> Result<StabilizerCode, CodeError> {
        self.validate()?;
        let mut rows = self.generators.clone();
        let mut rank = 0;
        for col in 0..self.n.saturating_sub(1) {
            let bit = 1u64 << col;
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].x_bits() & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank];
            for (j, row) in rows.iter_mut().enumerate() {
                if j != rank && row.x_bits() & bit != 0 {
                    *row = row.mul_unchecked(&pivot_row);
                }
            }
            rank += 1;
        }
        Ok(StabilizerCode {
            n: self.n,
            generators: rows,
        })
    }

    /// Rank of the X-part restricted to the first `n − 1` qubits.
    pub fn x_part_rank(&self) -> usize {
        let m = if self.n >= 2 { (1u64 << (self.n - 1)) - 1 } else { 0 };
        let mut rows: Vec<u64> = self.generators.iter().map(|g| g.x_bits() & m).collect();
        let mut rank = 0;
        for col in 0..self.n.saturating_sub(1) {
            let bit = 1u64 << col;
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) {
                rows.swap(rank, p);
                let pr = rows[rank];
                for (j, r) in rows.iter_mut().enumerate() {
                    if j != rank && *r & bit != 0 {
                        *r ^= pr;
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    /// All `2^{n−1}` elements of `G` with their exact phases.
    pub fn group_elements(&self) -> Vec<PauliOperator> {
        crate::search::subspace::span(self.n, &self.generators).collect()
    }
}

impl fmt::Display for StabilizerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    NotInGroup,
    InGroup(Sign),
}

/// Reduced row-echelon basis of a Pauli subgroup with exact phases.
///
/// Rows are sorted by pivot (highest set bit of the packed X|Z pattern),
/// descending, and no row contains another row's pivot bit. For a group
/// without `−I` every element is exactly the product of the rows whose
/// pivots it contains.
#[derive(Clone, Debug)]
pub struct GroupEchelon {
    n: usize,
    rows: Vec<PauliOperator>,
    pivots: Vec<u128>,
}

impl GroupEchelon {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Inserts generators, ignoring dependent ones.
    pub fn from_generators(n: usize, generators: &[PauliOperator]) -> Self {
        let mut e = Self::new(n);
        for g in generators {
            e.insert(*g);
        }
        e
    }

    pub fn rows(&self) -> &[PauliOperator] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `p` times every row whose pivot it (still) contains.
    #[inline]
    pub fn reduce(&self, p: &PauliOperator) -> PauliOperator {
        let mut r = *p;
        for (row, &pivot) in self.rows.iter().zip(&self.pivots) {
            if r.pattern() & pivot != 0 {
                r = r.mul_unchecked(row);
            }
        }
        r
    }

    /// Adds `p`; if it is already in the span returns the phase exponent of
    /// the identity it reduces to instead.
    pub fn insert(&mut self, p: PauliOperator) -> Option<u8> {
        let r = self.reduce(&p);
        if r.is_identity_pattern() {
            return Some(r.phase_exp());
        }
        let pivot = 1u128 << (127 - r.pattern().leading_zeros());
        for row in self.rows.iter_mut() {
            if row.pattern() & pivot != 0 {
                *row = row.mul_unchecked(&r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q > pivot);
        self.rows.insert(pos, r);
        self.pivots.insert(pos, pivot);
        None
    }

    /// Sign-blind membership of `p`'s bit pattern in the span.
    pub fn contains_pattern(&self, p: &PauliOperator) -> bool {
        self.reduce(p).is_identity_pattern()
    }

    pub fn membership(&self, p: &PauliOperator) -> Membership {
        let r = self.reduce(p);
        if !r.is_identity_pattern() {
            return Membership::NotInGroup;
        }
        match r.phase_exp() {
            0 => Membership::InGroup(Sign::Plus),
            2 => Membership::InGroup(Sign::Minus),
            _ => Membership::NotInGroup,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }
}

/// One of the 24 orientation-preserving signed permutations of the logical
/// axes. Entry `k` names the signed old axis that becomes new axis `k`
/// (`X, Y, Z` order).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relabeling {
    images: [(i8, Axis); 3],
}

impl Relabeling {
    pub const IDENTITY: Relabeling = Relabeling {
        images: [(1, Axis::X), (1, Axis::Y), (1, Axis::Z)],
    };

    /// All 24, identity first, in a fixed order.
    pub fn all() -> Vec<Relabeling> {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(24);
        for perm in PERMS {
            let parity = if matches!(perm, [0, 2, 1] | [1, 0, 2] | [2, 1, 0]) { -1 } else { 1 };
            for signs in 0..8u8 {
                let s = |k: u8| if (signs >> (2 - k)) & 1 == 1 { -1i8 } else { 1 };
                let det = parity * s(0) as i32 * s(1) as i32 * s(2) as i32;
                if det == 1 {
                    out.push(Relabeling {
                        images: [
                            (s(0), Axis::LOGICAL[perm[0]]),
                            (s(1), Axis::LOGICAL[perm[1]]),
                            (s(2), Axis::LOGICAL[perm[2]]),
                        ],
                    });
                }
            }
        }
        out
    }

    pub fn images(&self) -> [(i8, Axis); 3] {
        self.images
    }

    /// E.g. `["+X", "-Z", "+Y"]`.
    pub fn to_strings(&self) -> [String; 3] {
        self.images.map(|(s, a)| format!("{}{}", if s < 0 { '-' } else { '+' }, a))
    }

    pub fn parse(items: &[&str]) -> Option<Relabeling> {
        if items.len() != 3 {
            return None;
        }
        let mut images = [(1i8, Axis::X); 3];
        for (k, item) in items.iter().enumerate() {
            let (sign, rest) = match item.as_bytes().first()? {
                b'+' => (1, &item[1..]),
                b'-' => (-1, &item[1..]),
                _ => (1, &item[..]),
            };
            let axis = match rest {
                "X" => Axis::X,
                "Y" => Axis::Y,
                "Z" => Axis::Z,
                _ => return None,
            };
            images[k] = (sign, axis);
        }
        let r = Relabeling { images };
        Relabeling::all().contains(&r).then_some(r)
    }

    /// Composition: apply `self` to a frame already relabeled by `inner`.
    pub fn after(&self, inner: &Relabeling) -> Relabeling {
        let images = self.images.map(|(s, a)| {
            let (s2, a2) = inner.images[a.logical_index().unwrap()];
            (s * s2, a2)
        });
        Relabeling { images }
    }
}

impl Serialize for Relabeling {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Relabeling {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = <[String; 3]>::deserialize(deserializer)?;
        let refs = [items[0].as_str(), items[1].as_str(), items[2].as_str()];
        Relabeling::parse(&refs).ok_or_else(|| de::Error::custom(format!("not a rotation: {refs:?}")))
    }
}

impl fmt::Display for Relabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.to_strings();
        write!(f, "({a},{b},{c})")
    }
}

/// Logical representatives `X̄, Ȳ, Z̄` fixing the recovery map.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogicalFrame {
    pub xbar: PauliOperator,
    pub ybar: PauliOperator,
    pub zbar: PauliOperator,
    pub relabeling: Relabeling,
}

impl LogicalFrame {
    pub fn representative(&self, axis: Axis) -> PauliOperator {
        match axis {
            Axis::I => PauliOperator::identity(self.xbar.num_qubits()),
            Axis::X => self.xbar,
            Axis::Y => self.ybar,
            Axis::Z => self.zbar,
        }
    }

    /// Applies a further relabeling on top of this frame.
    pub fn relabeled(&self, relabeling: Relabeling) -> LogicalFrame {
        let pick = |(s, a): (i8, Axis)| {
            let rep = self.representative(a);
            if s < 0 {
                rep.negate()
            } else {
                rep
            }
        };
        let [ix, _, iz] = relabeling.images;
        let xbar = pick(ix);
        let zbar = pick(iz);
        let ybar = xbar.mul_unchecked(&zbar).with_phase(xbar.mul_unchecked(&zbar).phase_exp() + 1);
        debug_assert_eq!(ybar, pick(relabeling.images[1]));
        LogicalFrame {
            xbar,
            ybar,
            zbar,
            relabeling: relabeling.after(&self.relabeling),
        }
    }
}

/// Deterministic frame: the three non-trivial cosets of `G` in `G⊥` are
/// reduced to their minimal bit patterns modulo `G`; the smallest becomes
/// `X̄`, the next `Z̄`, both with phase `+1`, and `Ȳ = i X̄ Z̄`. The result
/// depends only on the unsigned group. `relabeling` is then applied.
pub fn choose_logical_frame(
    code: &StabilizerCode,
    relabeling: Relabeling,
) -> Result<LogicalFrame, CodeError> {
    code.validate()?;
    Ok(choose_logical_frame_unchecked(code, &code.echelon(), relabeling))
}

pub(crate) fn choose_logical_frame_unchecked(
    code: &StabilizerCode,
    echelon: &GroupEchelon,
    relabeling: Relabeling,
) -> LogicalFrame {
    let basis = code.normalizer_basis_unchecked();
    let n = code.n;
    let e1 = basis[n - 1];
    let e2 = basis[n];
    let mut cosets = [
        echelon.reduce(&e1).with_phase(0),
        echelon.reduce(&e2).with_phase(0),
        echelon.reduce(&e1.mul_unchecked(&e2)).with_phase(0),
    ];
    cosets.sort_by_key(|p| p.pattern());
    let xbar = cosets[0];
    let zbar = cosets[1];
    debug_assert!(!xbar.commutes_with(&zbar));
    let xz = xbar.mul_unchecked(&zbar);
    let ybar = xz.with_phase(xz.phase_exp() + 1);
    LogicalFrame {
        xbar,
        ybar,
        zbar,
        relabeling: Relabeling::IDENTITY,
    }
    .relabeled(relabeling)
}

/// Image of a Pauli operator under the recovery map: zero, or `i^phase · axis`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CosetLabel {
    Zero,
    Image { phase: u8, axis: Axis },
}

impl CosetLabel {
    pub fn image(sign: Sign, axis: Axis) -> Self {
        CosetLabel::Image {
            phase: if sign == Sign::Plus { 0 } else { 2 },
            axis,
        }
    }

    /// `±1` for real images, `None` for zero or imaginary ones.
    pub fn sign(&self) -> Option<Sign> {
        match self {
            CosetLabel::Image { phase: 0, .. } => Some(Sign::Plus),
            CosetLabel::Image { phase: 2, .. } => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn axis(&self) -> Option<Axis> {
        match self {
            CosetLabel::Zero => None,
            CosetLabel::Image { axis, .. } => Some(*axis),
        }
    }

    /// Product in 𝒫₁ ∪ {0}.
    pub fn compose(&self, other: &CosetLabel) -> CosetLabel {
        match (self, other) {
            (CosetLabel::Image { phase: p, axis: a }, CosetLabel::Image { phase: q, axis: b }) => {
                let pa = PauliOperator::single(1, 0, *a).with_phase(*p);
                let pb = PauliOperator::single(1, 0, *b).with_phase(*q);
                let prod = pa.mul_unchecked(&pb);
                CosetLabel::Image {
                    phase: prod.phase_exp(),
                    axis: prod.axis_at(0),
                }
            }
            _ => CosetLabel::Zero,
        }
    }
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetLabel::Zero => write!(f, "0"),
            CosetLabel::Image { phase, axis } => {
                let prefix = ["+", "+i", "-", "-i"][*phase as usize];
                write!(f, "{prefix}{axis}")
            }
        }
    }
}

/// Precomputed state for classifying many operators against one code/frame.
#[derive(Clone, Debug)]
pub struct RecoveryClassifier {
    generators: Vec<PauliOperator>,
    echelon: GroupEchelon,
    frame: LogicalFrame,
}

impl RecoveryClassifier {
    pub fn new(code: &StabilizerCode, frame: LogicalFrame) -> Result<Self, CodeError> {
        code.validate()?;
        Ok(Self {
            generators: code.generators.clone(),
            echelon: code.echelon(),
            frame,
        })
    }

    pub fn frame(&self) -> &LogicalFrame {
        &self.frame
    }

    pub fn classify(&self, p: &PauliOperator) -> Result<CosetLabel, CodeError> {
        if self.generators.iter().any(|g| !g.commutes_with(p)) {
            return Ok(CosetLabel::Zero);
        }
        let has_x = p.symplectic_unchecked(&self.frame.zbar);
        let has_z = p.symplectic_unchecked(&self.frame.xbar);
        let axis = Axis::from_bits(has_x, has_z);
        let rep = self.frame.representative(axis);
        // rep is Hermitian and commutes with G, so p·rep = i^k·g for g ∈ G.
        let residue = self.echelon.reduce(&p.mul_unchecked(&rep));
        if !residue.is_identity_pattern() {
            return Err(CodeError::CorruptFrame);
        }
        Ok(CosetLabel::Image {
            phase: residue.phase_exp(),
            axis,
        })
    }
}

pub fn classify(
    p: &PauliOperator,
    code: &StabilizerCode,
    frame: &LogicalFrame,
) -> Result<CosetLabel, CodeError> {
    RecoveryClassifier::new(code, *frame)?.classify(p)
}

/// Named codes used throughout the tests and docs.
pub mod named {
    use super::StabilizerCode;

    pub const FIVE_QUBIT: [&str; 4] = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"];
    pub const STEANE: [&str; 6] = [
        "XXXXIII", "XXIIXXI", "XIXIXIX", "ZZZZIII", "ZZIIZZI", "ZIZIZIZ",
    ];
    /// A 7-qubit M₃-code with the 5-qubit code's threshold.
    pub const SEVEN_QUBIT_M3: [&str; 6] = [
        "XXXXIII", "-XXXXYIX", "YIZXIXI", "ZZZZIII", "-ZZZZXIZ", "XIYZIZI",
    ];

    pub fn five_qubit() -> StabilizerCode {
        StabilizerCode::from_strs(&FIVE_QUBIT).expect("five-qubit code")
    }

    pub fn steane() -> StabilizerCode {
        StabilizerCode::from_strs(&STEANE).expect("Steane code")
    }

    pub fn seven_qubit_m3() -> StabilizerCode {
        StabilizerCode::from_strs(&SEVEN_QUBIT_M3).expect("7-qubit M3 code")
    }

    /// `n = 1`, no generators: `G = {I}`.
    pub fn trivial() -> StabilizerCode {
        StabilizerCode::new(1, Vec::new()).expect("trivial code")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::subspace::span;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn named_codes_are_valid() {
        for code in [named::five_qubit(), named::steane(), named::seven_qubit_m3(), named::trivial()] {
            assert_eq!(code.validate(), Ok(()), "{code}");
        }
    }

    #[test]
    fn violations_are_reported() {
        let c = StabilizerCode::from_strs(&["XXI", "-XXI"]).unwrap();
        assert_eq!(c.validate(), Err(CodeViolation::ContainsMinusIdentity { index: 1 }));
        let c = StabilizerCode::from_strs(&["XXI", "XXI"]).unwrap();
        assert_eq!(c.validate(), Err(CodeViolation::Dependent { index: 1 }));
        let c = StabilizerCode::from_strs(&["XI", "ZI"]);
        assert!(c.is_err(), "two generators on two qubits is a shape error");
        let c = StabilizerCode::from_strs(&["XII", "ZII"]).unwrap();
        assert_eq!(c.validate(), Err(CodeViolation::Anticommuting { first: 0, second: 1 }));
        let c = StabilizerCode::from_strs(&["iXX"]).unwrap();
        assert!(matches!(c.validate(), Err(CodeViolation::ComplexPhase { index: 0, .. })));
    }

    #[test]
    fn code_file_parsing() {
        let text = "# five qubit code\nXZZXI\n\nIXZZX  # second\nXIXZZ\nZXIXZ\n";
        let code = StabilizerCode::parse_code_file(text).unwrap();
        assert_eq!(code, named::five_qubit());
        assert_eq!(StabilizerCode::parse_code_file(&code.to_code_file()).unwrap(), code);
        assert!(matches!(
            StabilizerCode::parse_code_file("XZ\nQQ\n"),
            Err(CodeError::Parse { line: 2, .. })
        ));
        assert!(matches!(StabilizerCode::parse_code_file("# nothing\n"), Err(CodeError::EmptyCodeFile)));
    }

    #[test]
    fn normalizer_basis_sizes() {
        let basis = named::five_qubit().normalizer_basis().unwrap();
        assert_eq!(basis.len(), 6);
        for b in &basis {
            assert!(named::five_qubit().generators().iter().all(|g| g.commutes_with(b)));
        }
        let trivial = named::trivial().normalizer_basis().unwrap();
        assert_eq!(trivial.len(), 2);
        let pats: Vec<_> = trivial.iter().map(|q| q.pattern()).collect();
        assert!(pats.contains(&p("X").pattern()) && pats.contains(&p("Z").pattern()));
    }

    #[test]
    fn membership_examples() {
        let code = named::five_qubit();
        let g = code.generators();
        assert_eq!(code.membership_with_phase(&g[0].multiply(&g[1]).unwrap()), Membership::InGroup(Sign::Plus));
        assert_eq!(code.membership_with_phase(&g[0].negate()), Membership::InGroup(Sign::Minus));
        assert_eq!(code.membership_with_phase(&g[0].with_phase(1)), Membership::NotInGroup);
        // brute force: XIIII is none of the 16 elements
        let elements: Vec<_> = span(5, g).collect();
        assert!(elements.iter().all(|e| e.pattern() != p("XIIII").pattern()));
        assert_eq!(code.membership_with_phase(&p("XIIII")), Membership::NotInGroup);
    }

    #[test]
    fn membership_matches_enumeration() {
        for code in [named::five_qubit(), named::steane(), named::seven_qubit_m3()] {
            let echelon = code.echelon();
            for e in code.group_elements() {
                assert_eq!(echelon.membership(&e), Membership::InGroup(Sign::Plus));
                assert_eq!(echelon.membership(&e.negate()), Membership::InGroup(Sign::Minus));
            }
        }
    }

    #[test]
    fn frame_properties() {
        let code = named::five_qubit();
        let frame = choose_logical_frame(&code, Relabeling::IDENTITY).unwrap();
        assert!(frame.xbar.symplectic_product(&frame.zbar).unwrap());
        assert_eq!(frame.xbar.phase_exp(), 0);
        assert_eq!(frame.zbar.phase_exp(), 0);
        assert!(frame.ybar.has_real_phase());
        let echelon = code.echelon();
        for rep in [frame.xbar, frame.ybar, frame.zbar] {
            assert!(code.generators().iter().all(|g| g.commutes_with(&rep)));
            assert_eq!(echelon.membership(&rep), Membership::NotInGroup);
            assert_eq!(echelon.membership(&rep.negate()), Membership::NotInGroup);
        }
        let again = frame.relabeled(Relabeling::IDENTITY).relabeled(Relabeling::IDENTITY);
        assert_eq!(again, frame.relabeled(Relabeling::IDENTITY));
        assert_eq!(again, frame);
    }

    #[test]
    fn frame_depends_only_on_group() {
        let code = named::five_qubit();
        let g = code.generators();
        let other = StabilizerCode::new(
            5,
            vec![g[3], g[0].mul_unchecked(&g[1]), g[2], g[1]],
        )
        .unwrap();
        let a = choose_logical_frame(&code, Relabeling::IDENTITY).unwrap();
        let b = choose_logical_frame(&other, Relabeling::IDENTITY).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn relabelings() {
        let all = Relabeling::all();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], Relabeling::IDENTITY);
        let unique: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), 24);
        let frame = choose_logical_frame(&named::steane(), Relabeling::IDENTITY).unwrap();
        for r in &all {
            let f = frame.relabeled(*r);
            assert!(f.xbar.symplectic_product(&f.zbar).unwrap());
            assert_eq!(f.relabeling, *r);
            let strs = r.to_strings();
            let refs: Vec<&str> = strs.iter().map(|s| s.as_str()).collect();
            assert_eq!(Relabeling::parse(&refs), Some(*r));
        }
        assert_eq!(Relabeling::parse(&["+Y", "+X", "+Z"]), None);
    }

    #[test]
    fn classify_generators() {
        let code = named::five_qubit();
        let frame = choose_logical_frame(&code, Relabeling::IDENTITY).unwrap();
        let c = RecoveryClassifier::new(&code, frame).unwrap();
        for g in code.generators() {
            assert_eq!(c.classify(g).unwrap(), CosetLabel::image(Sign::Plus, Axis::I));
            assert_eq!(c.classify(&g.negate()).unwrap(), CosetLabel::image(Sign::Minus, Axis::I));
        }
        assert_eq!(c.classify(&frame.xbar).unwrap(), CosetLabel::image(Sign::Plus, Axis::X));
        assert_eq!(c.classify(&frame.ybar).unwrap(), CosetLabel::image(Sign::Plus, Axis::Y));
        assert_eq!(c.classify(&frame.zbar.negate()).unwrap(), CosetLabel::image(Sign::Minus, Axis::Z));
        assert_eq!(c.classify(&p("XIIII")).unwrap(), CosetLabel::Zero);
    }

    #[test]
    fn coset_sizes() {
        // each of the 8 real labels (±I, ±X, ±Y, ±Z) gets 2^{n-1} operators
        for code in [
            named::trivial(),
            StabilizerCode::from_strs(&["ZZ"]).unwrap(),
            StabilizerCode::from_strs(&["XXX", "-ZZI"]).unwrap(),
            StabilizerCode::from_strs(&["XZZX", "YXXY", "ZZZZ"]).unwrap(),
        ] {
            code.validate().unwrap();
            let n = code.num_qubits();
            let frame = choose_logical_frame(&code, Relabeling::IDENTITY).unwrap();
            let c = RecoveryClassifier::new(&code, frame).unwrap();
            let mut counts = std::collections::HashMap::new();
            for q in span(n, &full_basis(n)) {
                for phase in [0u8, 2] {
                    let label = c.classify(&q.with_phase(phase)).unwrap();
                    *counts.entry(label).or_insert(0usize) += 1;
                }
            }
            for axis in Axis::ALL {
                for sign in [Sign::Plus, Sign::Minus] {
                    assert_eq!(counts[&CosetLabel::image(sign, axis)], 1 << (n - 1), "{code} {axis}");
                }
            }
        }
    }

    #[test]
    fn m3_codes() {
        assert!(named::five_qubit().is_m3_code());
        assert!(named::steane().is_m3_code());
        assert!(named::seven_qubit_m3().is_m3_code());
        // Regression: a negated generator breaks the M3 sign rule.
        for i in 0..4 {
            assert!(!named::five_qubit().flip_sign(i).is_m3_code(), "flip {i}");
        }
        let paired = named::seven_qubit_m3().m3_paired_generators().unwrap();
        assert_eq!(paired.len(), 6);
        for pair in paired.chunks(2) {
            assert_eq!(pair[1], pair[0].m3_conjugate());
        }
    }

    #[test]
    fn standard_form_examples() {
        let five = named::five_qubit();
        let sf = five.standard_form().unwrap();
        assert_eq!(sf.x_part_rank(), 4);
        for (i, g) in sf.generators().iter().enumerate() {
            assert_eq!(g.x_bits() & 0b1111, 1 << i, "{g}");
        }
        let echelon = sf.echelon();
        for e in five.group_elements() {
            assert_eq!(echelon.membership(&e), Membership::InGroup(Sign::Plus));
        }
        assert_eq!(sf.canonical_form(), five.canonical_form());

        let zcode = StabilizerCode::from_strs(&["ZZI", "IZZ"]).unwrap();
        assert_eq!(zcode.standard_form().unwrap(), zcode);

        // X-part rank 3 < 6: X-type rows keep their pivots, Z-type rows untouched.
        let steane = named::steane();
        let sf = steane.standard_form().unwrap();
        assert_eq!(sf.x_part_rank(), 3);
        assert_eq!(&sf.generators()[3..], &steane.generators()[3..]);
        assert_eq!(sf.canonical_form(), steane.canonical_form());
        assert_eq!(sf.standard_form().unwrap(), sf);
    }

    #[test]
    fn label_composition() {
        let x = CosetLabel::image(Sign::Plus, Axis::X);
        let z = CosetLabel::image(Sign::Plus, Axis::Z);
        assert_eq!(x.compose(&z), CosetLabel::Image { phase: 3, axis: Axis::Y });
        assert_eq!(x.compose(&CosetLabel::Zero), CosetLabel::Zero);
        assert_eq!(x.to_string(), "+X");
    }
}
