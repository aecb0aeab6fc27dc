//! Exact polynomials in r̄ and the field Q(√3) they are evaluated in.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer-coefficient polynomial, `coefficients[k]` multiplies `r̄^k`.
///
/// Trailing zeros are kept (enumerators are stored with length `n + 1`) but
/// ignored by equality and hashing.
#[derive(Clone, Debug, Default)]
pub struct IntPolynomial {
    coefficients: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(coefficients: Vec<i64>) -> Self {
        Self { coefficients }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            coefficients: vec![0; len],
        }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub(crate) fn coefficients_mut(&mut self) -> &mut [i64] {
        &mut self.coefficients
    }

    pub fn trimmed(&self) -> &[i64] {
        let end = self
            .coefficients
            .iter()
            .rposition(|&c| c != 0)
            .map_or(0, |i| i + 1);
        &self.coefficients[..end]
    }

    pub fn is_zero(&self) -> bool {
        self.trimmed().is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.trimmed().len().checked_sub(1)
    }

    pub fn coefficient(&self, k: usize) -> i64 {
        self.coefficients.get(k).copied().unwrap_or(0)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, &c| acc * x + BigRational::from_integer(c.into()))
    }

    pub fn eval_sqrt3(&self, x: &QSqrt3) -> QSqrt3 {
        self.coefficients
            .iter()
            .rev()
            .fold(QSqrt3::zero(), |acc, &c| &(&acc * x) + &QSqrt3::from_int(c))
    }

    /// `r̄ · self`, one longer.
    pub fn shift_up(&self) -> IntPolynomial {
        let mut c = Vec::with_capacity(self.coefficients.len() + 1);
        c.push(0);
        c.extend_from_slice(&self.coefficients);
        IntPolynomial::new(c)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let len = self.coefficients.len().max(other.coefficients.len());
        IntPolynomial::new((0..len).map(|k| self.coefficient(k) - other.coefficient(k)).collect())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return IntPolynomial::default();
        }
        let mut c = vec![0i64; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            for (j, &b) in other.coefficients.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::new(c)
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial::new(self.coefficients.iter().map(|c| -c).collect())
    }

    pub fn to_rational(&self) -> RatPoly {
        RatPoly::new(
            self.coefficients
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }
}

impl PartialEq for IntPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for IntPolynomial {}

impl Hash for IntPolynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state);
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coefficients.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<i64>::deserialize(deserializer).map(IntPolynomial::new)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                f.write_str(" ")?;
            }
            let mag = c.unsigned_abs();
            let body = match (k, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "r".to_string(),
                (1, m) => format!("{m}r"),
                (k, 1) => format!("r^{k}"),
                (k, m) => format!("{m}r^{k}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sign} {body}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `a + b√3` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSqrt3 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn from_int(c: i64) -> Self {
        Self::new(BigRational::from_integer(c.into()), BigRational::zero())
    }

    pub fn from_rational(a: BigRational) -> Self {
        Self::new(a, BigRational::zero())
    }

    /// `1/√3 = √3/3`, the pure |T⟩ state's r̄.
    pub fn inv_sqrt3() -> Self {
        Self::new(BigRational::zero(), BigRational::new(1.into(), 3.into()))
    }

    /// `r̄ = r/√3` for rational `r`.
    pub fn rbar_from_r(r: &BigRational) -> Self {
        Self::new(BigRational::zero(), r / BigRational::from_integer(3.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign: −1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a² with 3b²
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * BigRational::from_integer(3.into());
        match a2.cmp(&b2) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * 3f64.sqrt()
    }

    /// `None` when dividing by zero.
    pub fn checked_div(&self, other: &QSqrt3) -> Option<QSqrt3> {
        if other.is_zero() {
            return None;
        }
        // (a + b√3)/(c + d√3) = (a + b√3)(c − d√3)/(c² − 3d²)
        let three = BigRational::from_integer(3.into());
        let norm = &other.a * &other.a - &three * &other.b * &other.b;
        let conj = QSqrt3::new(other.a.clone(), -other.b.clone());
        let num = self * &conj;
        Some(QSqrt3::new(num.a / &norm, num.b / norm))
    }
}

fn sign_of(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

impl<'a> Add<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn add(self, o: &QSqrt3) -> QSqrt3 {
        QSqrt3::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, o: &QSqrt3) -> QSqrt3 {
        QSqrt3::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, o: &QSqrt3) -> QSqrt3 {
        let three = BigRational::from_integer(3.into());
        QSqrt3::new(
            &self.a * &o.a + three * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3::new(-self.a, -self.b)
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})*sqrt(3)", self.b),
            (false, false) => write!(f, "{} + ({})*sqrt(3)", self.a, self.b),
        }
    }
}

/// Rational-coefficient polynomial used for exact root isolation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    c: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.c.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.c.iter().rev().fold(BigRational::zero(), |acc, k| acc * x + k)
    }

    pub fn eval_sqrt3(&self, x: &QSqrt3) -> QSqrt3 {
        self.c
            .iter()
            .rev()
            .fold(QSqrt3::zero(), |acc, k| &(&acc * x) + &QSqrt3::from_rational(k.clone()))
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// `(quotient, remainder)`; panics on a zero divisor.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.c[dd].clone();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (RatPoly::new(Vec::new()), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let coef = &r[k] / &lead;
            if coef.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                let t = &coef * dj;
                r[k - dd + j] -= t;
            }
            q[k - dd] = coef;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let l = l.clone();
                RatPoly::new(self.c.iter().map(|a| a / &l).collect())
            }
        }
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (up to a constant).
    pub fn squarefree(&self) -> RatPoly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly::new(self.c.iter().map(|a| -a.clone()).collect())
    }

    /// Is every odd coefficient zero?
    pub fn is_even(&self) -> bool {
        self.c.iter().skip(1).step_by(2).all(|a| a.is_zero())
    }

    /// `h(y)` with `h(x²) = self(x)` for an even polynomial.
    pub fn even_part_in_square(&self) -> RatPoly {
        RatPoly::new(self.c.iter().step_by(2).cloned().collect())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn one() -> BigRational {
    BigRational::one()
}
