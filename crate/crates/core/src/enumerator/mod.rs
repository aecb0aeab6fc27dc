//! Signed quantum weight enumerators and the distillation behaviour they
//! determine for |T⟩-axis input states.
//!
//! For a code with recovery frame `X̄, Ȳ, Z̄`, `W_Q(r̄) = Σ λ(P) r̄^{wt(P)}`
//! over the coset `Q̄G`. An input `ρ(r)^{⊗n}` with `r̄ = r/√3` distils to a
//! state with Bloch components `W_L(r̄)/W_I(r̄)`, and the projection succeeds
//! with probability `W_I(r̄)/2^{n−1}`.

pub mod poly;
pub mod roots;

use std::collections::HashMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::code::{
    choose_logical_frame, choose_logical_frame_unchecked, LogicalFrame, Relabeling, StabilizerCode,
};
use crate::error::{CodeError, EnumeratorError};
use crate::pauli::{Axis, PauliOperator};

pub use poly::{IntPolynomial, QSqrt3, RatPoly};
pub use roots::{threshold, ThresholdInfo};

/// `W_I, W_X, W_Y, W_Z` for one recovery frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedEnumeratorSet {
    pub w: [IntPolynomial; 4],
    pub frame: LogicalFrame,
}

impl SignedEnumeratorSet {
    pub fn get(&self, axis: Axis) -> &IntPolynomial {
        &self.w[axis as usize]
    }

    pub fn w_i(&self) -> &IntPolynomial {
        &self.w[0]
    }

    pub fn axes_equal(&self) -> bool {
        self.w[1] == self.w[2] && self.w[2] == self.w[3]
    }

    /// Enumerators seen through `relabeling` applied on top of this frame:
    /// new `W_k = s·W_a` for image `(s, a)`.
    pub fn relabeled(&self, relabeling: Relabeling) -> SignedEnumeratorSet {
        let mut w = self.w.clone();
        for (k, (s, a)) in relabeling.images().into_iter().enumerate() {
            let src = self.get(a);
            w[k + 1] = if s < 0 { src.neg() } else { src.clone() };
        }
        SignedEnumeratorSet {
            w,
            frame: self.frame.relabeled(relabeling),
        }
    }

    /// `Σ |coefficients|` over all four polynomials.
    pub fn coefficient_mass(&self) -> u64 {
        self.w
            .iter()
            .flat_map(|p| p.coefficients().iter())
            .map(|c| c.unsigned_abs())
            .sum()
    }
}

/// Accumulates `λ(P)·r̄^{wt(P)}` over `start·G` in Gray-code order.
fn coset_enumerator(start: PauliOperator, generators: &[PauliOperator]) -> IntPolynomial {
    let n = start.num_qubits();
    let mut poly = IntPolynomial::zeros(n + 1);
    let coeffs = poly.coefficients_mut();
    let mut current = start;
    let total = 1u64 << generators.len();
    for index in 0..total {
        if index > 0 {
            current = current.mul_unchecked(&generators[index.trailing_zeros() as usize]);
        }
        debug_assert!(current.has_real_phase());
        let sign = if current.phase_exp() == 0 { 1 } else { -1 };
        coeffs[current.weight() as usize] += sign;
    }
    poly
}

/// Enumerates `G` and the three logical cosets: `Θ(2^{n−1}·n)` per polynomial.
pub fn compute_enumerators(
    code: &StabilizerCode,
    frame: &LogicalFrame,
) -> Result<SignedEnumeratorSet, EnumeratorError> {
    code.validate().map_err(CodeError::from)?;
    Ok(compute_enumerators_unchecked(code, frame))
}

pub(crate) fn compute_enumerators_unchecked(
    code: &StabilizerCode,
    frame: &LogicalFrame,
) -> SignedEnumeratorSet {
    let gens = code.generators();
    let w = Axis::ALL.map(|axis| coset_enumerator(frame.representative(axis), gens));
    SignedEnumeratorSet { w, frame: *frame }
}

/// Enumerators under the canonical frame of [`choose_logical_frame`].
pub fn canonical_enumerators(code: &StabilizerCode) -> Result<SignedEnumeratorSet, EnumeratorError> {
    let frame = choose_logical_frame(code, Relabeling::IDENTITY)?;
    Ok(compute_enumerators_unchecked(code, &frame))
}

/// Shor–Laflamme-style weight distribution of `G`, signs ignored.
pub fn unsigned_enumerator(code: &StabilizerCode) -> Result<IntPolynomial, EnumeratorError> {
    code.validate().map_err(CodeError::from)?;
    let n = code.num_qubits();
    let mut poly = IntPolynomial::zeros(n + 1);
    for e in code.group_elements() {
        poly.coefficients_mut()[e.weight() as usize] += 1;
    }
    Ok(poly)
}

/// Per-code table reused across all `2^{n−1}` generator sign assignments.
///
/// Coset element `Q̄·g_A` (for generator subset `A`) has sign
/// `base(A)·(−1)^{|A ∩ s|}` under sign mask `s`, since the frame only
/// depends on the unsigned group.
#[derive(Clone, Debug)]
pub struct SignTable {
    n: usize,
    frame: LogicalFrame,
    /// `[axis][subset] = (weight, base sign is negative)`
    entries: [Vec<(u8, bool)>; 4],
}

impl SignTable {
    pub fn new(code: &StabilizerCode) -> Result<Self, CodeError> {
        code.validate()?;
        Ok(Self::new_unchecked(code))
    }

    pub(crate) fn new_unchecked(code: &StabilizerCode) -> Self {
        let unsigned = code.with_signs(0);
        let frame = choose_logical_frame_unchecked(&unsigned, &unsigned.echelon(), Relabeling::IDENTITY);
        let gens = unsigned.generators();
        let total = 1usize << gens.len();
        let entries = Axis::ALL.map(|axis| {
            let mut out = vec![(0u8, false); total];
            let mut current = frame.representative(axis);
            let mut subset = 0usize;
            for index in 0..total {
                if index > 0 {
                    let flip = index.trailing_zeros() as usize;
                    current = current.mul_unchecked(&gens[flip]);
                    subset ^= 1 << flip;
                }
                out[subset] = (current.weight() as u8, current.phase_exp() == 2);
            }
            out
        });
        Self {
            n: code.num_qubits(),
            frame,
            entries,
        }
    }

    pub fn frame(&self) -> &LogicalFrame {
        &self.frame
    }

    /// Enumerators of the code with generator `j` negated iff bit `j` of `signs`.
    pub fn enumerators(&self, signs: u64) -> SignedEnumeratorSet {
        let w = [0, 1, 2, 3].map(|axis| {
            let mut poly = IntPolynomial::zeros(self.n + 1);
            let c = poly.coefficients_mut();
            for (subset, &(weight, negative)) in self.entries[axis].iter().enumerate() {
                let flips = (subset as u64 & signs).count_ones() & 1 == 1;
                c[weight as usize] += if negative ^ flips { -1 } else { 1 };
            }
            poly
        });
        SignedEnumeratorSet {
            w,
            frame: self.frame,
        }
    }
}

/// Outcome of the 24-relabeling search for `W_X = W_Y = W_Z`.
#[derive(Clone, Debug)]
pub struct AxisVerdict {
    pub preserving: bool,
    pub relabeling: Option<Relabeling>,
    /// Enumerators under the witnessing relabeling, or the canonical frame
    /// when not preserving.
    pub enumerators: SignedEnumeratorSet,
}

/// Tries the 24 relabelings in order. Among those equalising the axes, the
/// first whose `W_L(1/√3)` is positive wins (the orientation that maps the
/// pure |T⟩ state to itself rather than to its antipode); failing that, the
/// first equalising one.
pub fn axis_verdict(base: &SignedEnumeratorSet) -> AxisVerdict {
    let t = QSqrt3::inv_sqrt3();
    let mut fallback = None;
    for r in Relabeling::all() {
        let e = base.relabeled(r);
        if !e.axes_equal() {
            continue;
        }
        if e.get(Axis::X).eval_sqrt3(&t).signum() > 0 {
            return AxisVerdict {
                preserving: true,
                relabeling: Some(r),
                enumerators: e,
            };
        }
        if fallback.is_none() {
            fallback = Some((r, e));
        }
    }
    match fallback {
        Some((r, e)) => AxisVerdict {
            preserving: true,
            relabeling: Some(r),
            enumerators: e,
        },
        None => AxisVerdict {
            preserving: false,
            relabeling: None,
            enumerators: base.clone(),
        },
    }
}

pub fn check_t_axis_preserving(code: &StabilizerCode) -> Result<AxisVerdict, EnumeratorError> {
    Ok(axis_verdict(&canonical_enumerators(code)?))
}

/// `W_dist = W_L − r̄·W_I`.
pub fn distillation_polynomial(enums: &SignedEnumeratorSet) -> Result<IntPolynomial, EnumeratorError> {
    if !enums.axes_equal() {
        return Err(EnumeratorError::NotAxisPreserving);
    }
    Ok(distillation_polynomial_unchecked(enums))
}

pub(crate) fn distillation_polynomial_unchecked(enums: &SignedEnumeratorSet) -> IntPolynomial {
    let mut wl = enums.get(Axis::X).clone();
    let len = enums.w_i().coefficients().len() + 1;
    let mut c = wl.coefficients().to_vec();
    c.resize(len, 0);
    wl = IntPolynomial::new(c);
    wl.sub(&enums.w_i().shift_up())
}

/// Output of the distillation map at one input point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistillationOutput {
    /// `a′_L = W_L/W_I` for `L = X, Y, Z`.
    pub bloch: [QSqrt3; 3],
    /// `W_I/2^{n−1}`.
    pub success_probability: QSqrt3,
}

/// Exact output Bloch vector and success probability at `r̄` (any element of
/// Q(√3), so both rational `r̄` and `r̄ = r/√3` for rational `r` are exact).
pub fn distillation_outputs(
    enums: &SignedEnumeratorSet,
    rbar: &QSqrt3,
) -> Result<DistillationOutput, EnumeratorError> {
    let t = QSqrt3::inv_sqrt3();
    if rbar.signum() < 0 || (rbar - &t).signum() > 0 {
        return Err(EnumeratorError::Unphysical(rbar.to_string()));
    }
    let wi = enums.w_i().eval_sqrt3(rbar);
    if wi.signum() <= 0 {
        return Err(EnumeratorError::ZeroSuccess {
            value: wi.to_string(),
        });
    }
    let n = enums.w_i().coefficients().len() - 1;
    let scale = QSqrt3::from_rational(BigRational::from_integer((1i64 << (n - 1)).into()));
    let bloch = [Axis::X, Axis::Y, Axis::Z].map(|a| {
        enums
            .get(a)
            .eval_sqrt3(rbar)
            .checked_div(&wi)
            .expect("W_I nonzero")
    });
    Ok(DistillationOutput {
        bloch,
        success_probability: wi.checked_div(&scale).expect("nonzero scale"),
    })
}

/// Projects a Bloch vector onto the |T⟩ axis by averaging its components.
pub fn twirl(bloch: [f64; 3]) -> [f64; 3] {
    let mean = (bloch[0] + bloch[1] + bloch[2]) / 3.0;
    [mean; 3]
}

fn check_independent(vectors: &[u64]) -> Result<(), EnumeratorError> {
    let mut basis: Vec<u64> = Vec::new();
    for (index, &v) in vectors.iter().enumerate() {
        let mut r = v;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r == 0 {
            return Err(EnumeratorError::DependentVectors { index });
        }
        basis.push(r);
        basis.sort_unstable_by(|a, b| b.cmp(a));
    }
    Ok(())
}

/// `W_I` of the group generated by `X(a)` for each vector: every element has
/// phase `+1`, so this is the weight distribution of the binary span. Any
/// number of independent vectors up to `n − 1` is accepted.
pub fn x_group_enumerator(n: usize, vectors: &[u64]) -> Result<IntPolynomial, EnumeratorError> {
    if vectors.len() >= n.max(1) {
        return Err(EnumeratorError::VectorCount {
            expected: n.saturating_sub(1),
            got: vectors.len(),
        });
    }
    check_independent(vectors)?;
    let mut poly = IntPolynomial::zeros(n + 1);
    let c = poly.coefficients_mut();
    let mut current = 0u64;
    for index in 0..1u64 << vectors.len() {
        if index > 0 {
            current ^= vectors[index.trailing_zeros() as usize];
        }
        c[current.count_ones() as usize] += 1;
    }
    Ok(poly)
}

/// All-X code with a generator `X(a)` per vector; vectors are read
/// left-to-right as qubits `0..n`.
pub fn build_x_code(n: usize, vectors: &[u64]) -> Result<StabilizerCode, EnumeratorError> {
    if vectors.len() + 1 != n {
        return Err(EnumeratorError::VectorCount {
            expected: n.saturating_sub(1),
            got: vectors.len(),
        });
    }
    check_independent(vectors)?;
    let gens = vectors.iter().map(|&a| PauliOperator::x_operator(n, a)).collect();
    Ok(StabilizerCode::new(n, gens)?)
}

/// Parses a vector file: one `0/1` string per line, `#` comments.
pub fn parse_vector_file(text: &str) -> Result<(usize, Vec<u64>), EnumeratorError> {
    let mut vectors = Vec::new();
    let mut n = None;
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let len = line.chars().count();
        let expected = *n.get_or_insert(len);
        if len != expected || len > 64 {
            return Err(EnumeratorError::VectorLength {
                index: vectors.len(),
                got: len,
                expected,
            });
        }
        let mut v = 0u64;
        for (q, c) in line.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v |= 1 << q,
                other => return Err(EnumeratorError::VectorCharacter(other)),
            }
        }
        vectors.push(v);
    }
    let n = n.ok_or(EnumeratorError::VectorCount { expected: 0, got: 0 })?;
    Ok((n, vectors))
}

/// Everything known about one code's |T⟩ distillation behaviour.
#[derive(Clone, Debug)]
pub struct DistillationReport {
    pub code: StabilizerCode,
    pub enumerators: SignedEnumeratorSet,
    pub t_axis_preserving: bool,
    pub relabeling: Option<Relabeling>,
    pub m3_code: bool,
    pub w_dist: Option<IntPolynomial>,
    pub threshold: Option<ThresholdInfo>,
    pub useful: bool,
    /// Roots of `W_I` strictly inside `(0, 1/√3)`.
    pub zero_success_rbar: Vec<f64>,
}

impl DistillationReport {
    pub fn threshold_r(&self) -> f64 {
        self.threshold.as_ref().map_or(1.0, |t| t.threshold_r)
    }

    /// `W_I(1/√3)/2^{n−1}`, exact.
    pub fn success_probability_at_pure(&self) -> QSqrt3 {
        let n = self.code.num_qubits();
        let wi = self.enumerators.w_i().eval_sqrt3(&QSqrt3::inv_sqrt3());
        let scale = QSqrt3::from_rational(BigRational::from_integer((1i64 << (n - 1)).into()));
        wi.checked_div(&scale).expect("nonzero scale")
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson::from(self)
    }
}

/// Full per-code pipeline: canonical frame, enumerators, axis verdict,
/// distillation polynomial and threshold.
pub fn analyze(code: &StabilizerCode) -> Result<DistillationReport, EnumeratorError> {
    code.validate().map_err(CodeError::from)?;
    let base = canonical_enumerators(code)?;
    Ok(report_from_enumerators(code, &base, code.is_m3_code(), &mut AnalysisCache::default()))
}

/// Memoised root work; searches meet the same polynomials over and over.
#[derive(Default, Debug)]
pub struct AnalysisCache {
    thresholds: HashMap<IntPolynomial, ThresholdInfo>,
    zero_success: HashMap<IntPolynomial, Vec<f64>>,
}

impl AnalysisCache {
    pub fn threshold(&mut self, w_dist: &IntPolynomial) -> ThresholdInfo {
        if let Some(t) = self.thresholds.get(w_dist) {
            return t.clone();
        }
        let t = threshold(w_dist);
        self.thresholds.insert(w_dist.clone(), t.clone());
        t
    }

    pub fn zero_success(&mut self, w_i: &IntPolynomial) -> Vec<f64> {
        self.zero_success
            .entry(w_i.clone())
            .or_insert_with(|| roots::interior_roots(w_i))
            .clone()
    }
}

pub(crate) fn report_from_enumerators(
    code: &StabilizerCode,
    base: &SignedEnumeratorSet,
    m3_code: bool,
    cache: &mut AnalysisCache,
) -> DistillationReport {
    let verdict = axis_verdict(base);
    let zero_success_rbar = cache.zero_success(verdict.enumerators.w_i());
    let (w_dist, thr) = if verdict.preserving {
        let w = distillation_polynomial_unchecked(&verdict.enumerators);
        let t = cache.threshold(&w);
        (Some(w), Some(t))
    } else {
        (None, None)
    };
    let useful = thr.as_ref().is_some_and(|t| t.useful);
    DistillationReport {
        code: code.clone(),
        enumerators: verdict.enumerators,
        t_axis_preserving: verdict.preserving,
        relabeling: verdict.relabeling,
        m3_code,
        w_dist,
        threshold: thr,
        useful,
        zero_success_rbar,
    }
}

/// Twelve fractional digits; negative zero prints as zero.
pub fn format_decimal(x: f64) -> String {
    let s = format!("{x:.12}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Serialised form of a [`DistillationReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub n: usize,
    pub generators: Vec<String>,
    pub w_i: IntPolynomial,
    pub w_x: IntPolynomial,
    pub w_y: IntPolynomial,
    pub w_z: IntPolynomial,
    pub frame: [String; 3],
    pub t_axis_preserving: bool,
    pub relabeling: Option<Relabeling>,
    pub m3_code: bool,
    pub w_dist: Option<IntPolynomial>,
    pub threshold: String,
    pub threshold_radical: Option<String>,
    pub useful: bool,
    pub fixed_points_rbar: Vec<String>,
    pub multiple_interior_roots: bool,
    pub zero_success_rbar: Vec<String>,
    pub success_probability_at_r1: String,
}

impl From<&DistillationReport> for ReportJson {
    fn from(r: &DistillationReport) -> Self {
        let e = &r.enumerators;
        ReportJson {
            n: r.code.num_qubits(),
            generators: r.code.generators().iter().map(|g| g.to_string()).collect(),
            w_i: e.w[0].clone(),
            w_x: e.w[1].clone(),
            w_y: e.w[2].clone(),
            w_z: e.w[3].clone(),
            frame: [e.frame.xbar, e.frame.ybar, e.frame.zbar].map(|p| p.to_string()),
            t_axis_preserving: r.t_axis_preserving,
            relabeling: r.relabeling,
            m3_code: r.m3_code,
            w_dist: r.w_dist.clone(),
            threshold: format_decimal(r.threshold_r()),
            threshold_radical: r.threshold.as_ref().and_then(|t| t.radical.clone()),
            useful: r.useful,
            fixed_points_rbar: r
                .threshold
                .as_ref()
                .map(|t| t.fixed_points_rbar.iter().map(|&x| format_decimal(x)).collect())
                .unwrap_or_default(),
            multiple_interior_roots: r.threshold.as_ref().is_some_and(|t| t.multiple_interior_roots),
            zero_success_rbar: r.zero_success_rbar.iter().map(|&x| format_decimal(x)).collect(),
            success_probability_at_r1: r.success_probability_at_pure().to_string(),
        }
    }
}
