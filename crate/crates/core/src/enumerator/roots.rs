//! Fixed points and threshold of a distillation polynomial.
//!
//! Roots on `[0, 1/√3]` are isolated exactly: the trivial factors `r̄` and
//! `3r̄² − 1` are divided out, a Sturm sequence of the square-free remainder
//! counts roots on rational intervals, and each isolated root is bisected
//! over the rationals until its bracket is narrower than [`ROOT_TOLERANCE`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::{rat, rational_to_f64, IntPolynomial, QSqrt3, RatPoly};

/// Final bracket width for every isolated root.
pub const ROOT_TOLERANCE: f64 = 1e-15;

/// Sturm sequence of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<RatPoly>,
}

impl SturmSequence {
    pub fn new(p: &RatPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        while let Some(last) = chain.last() {
            if last.is_zero() {
                chain.pop();
                break;
            }
            let prev = &chain[chain.len() - 2];
            let (_, r) = prev.div_rem(last);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        Self { chain }
    }

    fn variations<I: Iterator<Item = i32>>(signs: I) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| signum(&p.eval(x))))
    }

    pub fn variations_at_sqrt3(&self, x: &QSqrt3) -> usize {
        Self::variations(self.chain.iter().map(|p| p.eval_sqrt3(x).signum()))
    }

    /// Distinct roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

fn signum(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// A real root known to lie in `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl IsolatedRoot {
    pub fn value(&self) -> f64 {
        rational_to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(2.into())))
    }
}

/// Roots of `p` on `[0, 1/√3]`, split into the two trivial endpoints and
/// the interior ones.
#[derive(Clone, Debug)]
pub struct RootsOnPhysicalRange {
    pub multiplicity_at_zero: usize,
    pub multiplicity_at_t: usize,
    pub interior: Vec<IsolatedRoot>,
    /// Square-free interior factor (no roots at `0` or `±1/√3`).
    pub core: RatPoly,
    /// Rational point strictly between the last interior root and `1/√3`.
    pub upper_probe: BigRational,
}

fn t_factor() -> RatPoly {
    RatPoly::from_ints(&[-1, 0, 3])
}

/// Largest rational `k/10^d` below `1/√3`.
fn rational_below_inv_sqrt3(digits: u32) -> BigRational {
    let scale = BigInt::from(10u32).pow(digits);
    // floor(10^d/√3) = floor(sqrt(10^{2d}/3))
    let target = &scale * &scale / BigInt::from(3);
    let k = target.sqrt();
    BigRational::new(k, scale)
}

/// Isolates every root of the nonzero polynomial `p` in `[0, 1/√3]`.
pub fn roots_on_physical_range(p: &IntPolynomial) -> Option<RootsOnPhysicalRange> {
    let mut q = p.to_rational();
    if q.is_zero() {
        return None;
    }
    let mut multiplicity_at_zero = 0;
    while q.coefficients().first().is_some_and(|c| c.is_zero()) {
        q = RatPoly::new(q.coefficients()[1..].to_vec());
        multiplicity_at_zero += 1;
    }
    let mut multiplicity_at_t = 0;
    loop {
        let (quot, rem) = q.div_rem(&t_factor());
        if !rem.is_zero() || q.degree().unwrap_or(0) < 2 {
            break;
        }
        q = quot;
        multiplicity_at_t += 1;
    }
    let core = q.squarefree();
    let sturm = SturmSequence::new(&core);
    let t = QSqrt3::inv_sqrt3();

    // A rational probe below 1/√3 with no root of `core` in [probe, 1/√3].
    let mut upper_probe = rational_below_inv_sqrt3(1);
    for digits in 1..60 {
        let u = rational_below_inv_sqrt3(digits);
        if core.eval(&u).is_zero() {
            continue;
        }
        let above = sturm.variations_at(&u).saturating_sub(sturm.variations_at_sqrt3(&t));
        upper_probe = u;
        if above == 0 {
            break;
        }
    }

    let mut interior = Vec::new();
    let zero = BigRational::zero();
    isolate(&core, &sturm, zero, upper_probe.clone(), &mut interior);
    interior.sort_by(|a, b| a.lo.cmp(&b.lo));
    Some(RootsOnPhysicalRange {
        multiplicity_at_zero,
        multiplicity_at_t,
        interior,
        core,
        upper_probe,
    })
}

fn isolate(
    p: &RatPoly,
    sturm: &SturmSequence,
    lo: BigRational,
    hi: BigRational,
    out: &mut Vec<IsolatedRoot>,
) {
    let count = sturm.count(&lo, &hi);
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(refine(p, lo, hi));
        return;
    }
    let two = BigRational::from_integer(2.into());
    let mut mid = (&lo + &hi) / &two;
    let mut step = (&hi - &lo) / BigRational::from_integer(1024.into());
    while p.eval(&mid).is_zero() {
        mid += &step;
        step /= &two;
    }
    isolate(p, sturm, lo, mid.clone(), out);
    isolate(p, sturm, mid, hi, out);
}

/// Bisects a bracket `(lo, hi]` holding exactly one simple root.
fn refine(p: &RatPoly, mut lo: BigRational, mut hi: BigRational) -> IsolatedRoot {
    let two = BigRational::from_integer(2.into());
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(15));
    let s_hi = signum(&p.eval(&hi));
    if s_hi == 0 {
        return IsolatedRoot { lo: hi.clone(), hi };
    }
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        let s = signum(&p.eval(&mid));
        if s == 0 {
            return IsolatedRoot { lo: mid.clone(), hi: mid };
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    IsolatedRoot { lo, hi }
}

/// Threshold analysis of a distillation polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdInfo {
    /// `r* ∈ (1/√3, 1]`; 1 when the code never improves fidelity near |T⟩.
    pub threshold_r: f64,
    /// `r̄* = r*/√3`.
    pub threshold_rbar: f64,
    pub useful: bool,
    /// Fixed points `r̄` in `[0, 1/√3]`, ascending.
    pub fixed_points_rbar: Vec<f64>,
    /// More than one interior root.
    pub multiple_interior_roots: bool,
    /// The polynomial is positive on some interior interval.
    pub positive_somewhere: bool,
    /// Exact radical form of `r*`, when found.
    pub radical: Option<String>,
    /// Zero polynomial: every point is fixed.
    pub degenerate: bool,
}

/// Threshold of `W_dist`: `r* = √3·r̄₀` for the largest root `r̄₀ < 1/√3`
/// with `W_dist > 0` on `(r̄₀, 1/√3)`; `r* = 1` if `W_dist ≤ 0` there.
pub fn threshold(poly: &IntPolynomial) -> ThresholdInfo {
    let sqrt3 = 3f64.sqrt();
    let Some(roots) = roots_on_physical_range(poly) else {
        return ThresholdInfo {
            threshold_r: 1.0,
            threshold_rbar: 1.0 / sqrt3,
            useful: false,
            fixed_points_rbar: Vec::new(),
            multiple_interior_roots: false,
            positive_somewhere: false,
            radical: None,
            degenerate: true,
        };
    };
    let full = poly.to_rational();
    let mut fixed = Vec::new();
    if roots.multiplicity_at_zero > 0 {
        fixed.push(0.0);
    }
    fixed.extend(roots.interior.iter().map(|r| r.value()));
    if roots.multiplicity_at_t > 0 {
        fixed.push(1.0 / sqrt3);
    }

    // Sign on each open interval between consecutive interior roots.
    let mut probes = Vec::new();
    let mut prev = BigRational::zero();
    for r in &roots.interior {
        probes.push(midpoint_avoiding(&full, &prev, &r.lo));
        prev = r.hi.clone();
    }
    probes.push(roots.upper_probe.clone());
    let signs: Vec<i32> = probes.iter().map(|x| signum(&full.eval(x))).collect();
    let positive_somewhere = signs.iter().any(|&s| s > 0);
    let near_t_positive = *signs.last().unwrap() > 0;

    let (threshold_rbar, radical) = if near_t_positive {
        match roots.interior.last() {
            Some(r) => {
                let rbar = r.value();
                (rbar, radical_form(&roots.core, rbar))
            }
            None => (0.0, Some("0".to_string())),
        }
    } else {
        (1.0 / sqrt3, Some("1".to_string()))
    };
    let threshold_r = if near_t_positive { threshold_rbar * sqrt3 } else { 1.0 };
    ThresholdInfo {
        threshold_r,
        threshold_rbar,
        useful: near_t_positive,
        fixed_points_rbar: fixed,
        multiple_interior_roots: roots.interior.len() > 1,
        positive_somewhere,
        radical,
        degenerate: false,
    }
}

fn midpoint_avoiding(p: &RatPoly, a: &BigRational, b: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let mut m = (a + b) / &two;
    let mut step = (b - a) / BigRational::from_integer(8.into());
    while p.eval(&m).is_zero() && !step.is_zero() {
        m += &step;
        step /= &two;
    }
    m
}

/// Roots in `(0, 1/√3)` of an arbitrary polynomial, e.g. zero-success points
/// of `W_I`.
pub fn interior_roots(poly: &IntPolynomial) -> Vec<f64> {
    roots_on_physical_range(poly)
        .map(|r| r.interior.iter().map(|x| x.value()).collect())
        .unwrap_or_default()
}

/// Exact `r* = √3·r̄₀` when `r̄₀` or `r̄₀²` is rational or `r̄₀²` is a root of
/// a quadratic factor.
fn radical_form(core: &RatPoly, rbar: f64) -> Option<String> {
    let close = |x: f64| (x - rbar).abs() < 1e-9;
    for root in rational_roots(core) {
        if close(rational_to_f64(&root)) {
            // r* = √3·p/q
            return Some(format_scaled_sqrt(&root, 3));
        }
    }
    if core.is_even() {
        let h = core.even_part_in_square();
        for y in rational_roots(&h) {
            if y.is_positive() && close(rational_to_f64(&y).sqrt()) {
                return Some(format_sqrt_of_rational(&(y * BigRational::from_integer(3.into()))));
            }
        }
        let mut rest = h.clone();
        for y in rational_roots(&h) {
            let lin = RatPoly::new(vec![-y, BigRational::one()]);
            rest = rest.div_rem(&lin).0;
        }
        if rest.degree() == Some(2) {
            let c = rest.monic();
            let (b, c0) = (&c.coefficients()[1], &c.coefficients()[0]);
            // y = (−b ± √D)/2, D = b² − 4c
            let d = b * b - BigRational::from_integer(4.into()) * c0;
            if d.is_negative() {
                return None;
            }
            let dv = rational_to_f64(&d).sqrt();
            let bv = rational_to_f64(b);
            for sign in [1.0, -1.0] {
                let y = (-bv + sign * dv) / 2.0;
                if y > 0.0 && close(y.sqrt()) {
                    let pm = if sign > 0.0 { "+" } else { "-" };
                    return Some(format!(
                        "sqrt(3*({} {} sqrt({}))/2)",
                        -b.clone(),
                        pm,
                        d
                    ));
                }
            }
        }
    }
    quadratic_factor_form(core, &close)
}

/// After dividing out rational roots, a remaining quadratic
/// `r̄² + b r̄ + c` gives `r̄ = −b/2 ± √(b²/4 − c)`.
fn quadratic_factor_form(core: &RatPoly, close: &dyn Fn(f64) -> bool) -> Option<String> {
    let mut rest = core.clone();
    for root in rational_roots(core) {
        rest = rest.div_rem(&RatPoly::new(vec![-root, BigRational::one()])).0;
    }
    if rest.degree() != Some(2) {
        return None;
    }
    let m = rest.monic();
    let half_b = &m.coefficients()[1] / BigRational::from_integer(2.into());
    let q = &half_b * &half_b - &m.coefficients()[0];
    if !q.is_positive() {
        return None;
    }
    let centre = -half_b;
    let sq = rational_to_f64(&q).sqrt();
    for (sign, pm) in [(1.0, "+"), (-1.0, "-")] {
        if close(rational_to_f64(&centre) + sign * sq) {
            let root = format_sqrt_of_rational(&q);
            return Some(if centre.is_zero() {
                format!("sqrt(3)*({pm}{root})")
            } else {
                format!("sqrt(3)*({centre} {pm} {root})")
            });
        }
    }
    None
}

/// Rational roots via the rational-root theorem on the primitive integer
/// multiple of `p`.
pub fn rational_roots(p: &RatPoly) -> Vec<BigRational> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let lcm = p
        .coefficients()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coefficients().iter().map(|c| (c * &lcm).to_integer()).collect();
    let mut out = Vec::new();
    let mut lo = 0;
    while ints[lo].is_zero() {
        lo += 1;
    }
    if lo > 0 {
        out.push(BigRational::zero());
    }
    let a0 = ints[lo].abs();
    let an = ints[deg].abs();
    let (Some(a0v), Some(anv)) = (a0.to_u64(), an.to_u64()) else {
        return out;
    };
    if a0v > 1_000_000 || anv > 1_000_000 {
        return out;
    }
    let divisors = |m: u64| (1..=m).filter(move |d| m % d == 0);
    for num in divisors(a0v) {
        for den in divisors(anv) {
            if num.gcd(&den) != 1 {
                continue;
            }
            for s in [1i64, -1] {
                let x = rat(s * num as i64, den as i64);
                if p.eval(&x).is_zero() && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
    }
    out.sort();
    out
}

fn square_split(m: &BigInt) -> (BigInt, BigInt) {
    // m = k²·s with s square-free (trial division; m is tiny here)
    let mut k = BigInt::one();
    let mut s = BigInt::one();
    let mut rest = m.clone();
    let mut f = BigInt::from(2);
    while &f * &f <= rest {
        let mut e = 0;
        while (&rest % &f).is_zero() {
            rest /= &f;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= &f;
        }
        if e % 2 == 1 {
            s *= &f;
        }
        f += 1;
    }
    s *= rest;
    (k, s)
}

/// `√(p/q)` as `k·√m/d` in lowest terms.
fn format_sqrt_of_rational(x: &BigRational) -> String {
    let p = x.numer().clone();
    let q = x.denom().clone();
    // √(p/q) = √(pq)/q
    let (k, m) = square_split(&(&p * &q));
    let g = k.gcd(&q);
    let (k, d) = (k / &g, q / &g);
    let root = if m.is_one() { String::new() } else { format!("sqrt({m})") };
    let numer = match (k.is_one(), root.is_empty()) {
        (true, true) => "1".to_string(),
        (true, false) => root,
        (false, true) => k.to_string(),
        (false, false) => format!("{k}*{root}"),
    };
    if d.is_one() {
        numer
    } else {
        format!("{numer}/{d}")
    }
}

/// `√s·x` for rational `x`.
fn format_scaled_sqrt(x: &BigRational, s: i64) -> String {
    format_sqrt_of_rational(&(x * x * BigRational::from_integer(s.into())))
}
