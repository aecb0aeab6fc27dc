//! Span manipulations on lists of Pauli operators, treating each operator as
//! a vector in F₂²ⁿ (phases are carried along but carry no meaning here).

use crate::pauli::{InnerProduct, PauliOperator};

/// `{Z_1, …, Z_n, X_1, …, X_n}`.
pub fn full_basis(n: usize) -> Vec<PauliOperator> {
    let mut basis = Vec::with_capacity(2 * n);
    basis.extend((0..n).map(|q| PauliOperator::z_operator(n, 1 << q)));
    basis.extend((0..n).map(|q| PauliOperator::x_operator(n, 1 << q)));
    basis
}

/// `R_i = {Z_1, …, Z_n, X_i, X_n}` (`i` zero-based).
pub fn standard_form_row_space(n: usize, i: usize) -> Vec<PauliOperator> {
    assert!(i < n, "row {i} out of range for n = {n}");
    let mut basis: Vec<_> = (0..n).map(|q| PauliOperator::z_operator(n, 1 << q)).collect();
    basis.push(PauliOperator::x_operator(n, 1 << i));
    if i != n - 1 {
        basis.push(PauliOperator::x_operator(n, 1 << (n - 1)));
    }
    basis
}

/// Restricts `span(r)` to the part orthogonal to every element of `s`.
///
/// For each `P ∈ s`, the elements of `r` pairing to zero with `P` are kept
/// and consecutive pairs of the remaining ones are multiplied together.
/// An independent `r` yields an independent result.
pub fn truncate(
    s: &[PauliOperator],
    r: &[PauliOperator],
    product: InnerProduct,
) -> Vec<PauliOperator> {
    let mut r = r.to_vec();
    let mut good = Vec::with_capacity(r.len());
    let mut bad = Vec::with_capacity(r.len());
    for p in s {
        good.clear();
        bad.clear();
        for q in &r {
            assert_eq!(p.num_qubits(), q.num_qubits(), "mixed qubit counts");
            let pairs = match product {
                InnerProduct::Dot => p.dot_unchecked(q),
                InnerProduct::Symplectic => p.symplectic_unchecked(q),
            };
            if pairs {
                bad.push(*q);
            } else {
                good.push(*q);
            }
        }
        r.clear();
        r.extend_from_slice(&good);
        r.extend(bad.windows(2).map(|w| w[0].mul_unchecked(&w[1])));
    }
    r
}

/// Membership in `span(G)` given a dot-product parity basis of `G⊥(·)`.
pub fn inspace(p: &PauliOperator, parity_basis: &[PauliOperator]) -> bool {
    parity_basis.iter().all(|q| !p.dot_unchecked(q))
}

/// Greedy subset of `r` whose span meets `span(s)` only in the identity and
/// which is independent together with `s`.
pub fn disjoint(s: &[PauliOperator], r: &[PauliOperator]) -> Vec<PauliOperator> {
    let Some(n) = s.first().or_else(|| r.first()).map(|p| p.num_qubits()) else {
        return Vec::new();
    };
    let mut null = truncate(s, &full_basis(n), InnerProduct::Dot);
    let mut r = r.to_vec();
    let mut out = Vec::new();
    loop {
        r.retain(|q| !inspace(q, &null));
        if r.is_empty() {
            break;
        }
        let head = r.remove(0);
        null = truncate(&[head], &null, InnerProduct::Dot);
        out.push(head);
    }
    out
}

/// Every element of `span(basis)` in Gray-code order, starting at the
/// identity; one multiplication per step.
pub struct SpanIter {
    basis: Vec<PauliOperator>,
    current: PauliOperator,
    index: u64,
    len: u64,
}

impl SpanIter {
    pub fn new(n: usize, basis: &[PauliOperator]) -> Self {
        assert!(basis.len() < 64, "span too large to enumerate");
        Self {
            basis: basis.to_vec(),
            current: PauliOperator::identity(n),
            index: 0,
            len: 1u64 << basis.len(),
        }
    }
}

impl Iterator for SpanIter {
    type Item = PauliOperator;

    fn next(&mut self) -> Option<PauliOperator> {
        if self.index >= self.len {
            return None;
        }
        if self.index > 0 {
            let flip = self.index.trailing_zeros() as usize;
            self.current = self.current.mul_unchecked(&self.basis[flip]);
        }
        self.index += 1;
        Some(self.current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.len - self.index) as usize;
        (left, Some(left))
    }
}

pub fn span(n: usize, basis: &[PauliOperator]) -> SpanIter {
    SpanIter::new(n, basis)
}
