//! Exact checks of the root-of-unity identities behind the torsion
//! computation, including the published instance where they fail.
//!
//! The two averaged identities are identities of rational functions. They
//! are certified by evaluation: both sides are cleared of their known
//! denominators and compared at more points than the degree of the
//! difference. Sums over `ξ ∈ Z_a` are done in `Z[ζ_a]`, using
//! `1/(1 − ξc) = Σ_{j<a} (ξc)^j / (1 − c^a)` so that no field inversion is
//! needed.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_core::{
    q, qi, rationalize, second_derivative_at_1, CyclotomicField, CyclotomicNumber, IntLaurentPolynomial,
    Rational,
};
use crate::plane_curve::{is_alternating, AlexanderData};
use crate::splicing::xi_pair_sum;

/// Default limit on the number of tuples `a^{d−1}` in [`check_lemma_b`].
pub const DEFAULT_TUPLE_BOUND: u128 = 100_000;

/// Sample points are drawn from this many candidates before giving up.
const SAMPLE_POOL: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaMode {
    /// The two-variable identity in `t` and a free `A`.
    A,
    /// The `d`-fold identity with the last variable raised to `t^k`.
    B { d: u32, k: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaInstance {
    /// An ordinary polynomial (no negative exponents).
    pub delta: IntLaurentPolynomial,
    pub a: u64,
    pub mode: LemmaMode,
}

impl LemmaInstance {
    pub fn new(delta: IntLaurentPolynomial, a: u64, mode: LemmaMode) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidInput("a must be positive".into()));
        }
        if !delta.is_zero() && delta.lowest_exponent() < 0 {
            return Err(Error::InvalidInput(format!("{} has negative exponents", delta)));
        }
        if let LemmaMode::B { d, k } = mode {
            if d < 2 || k < 1 {
                return Err(Error::InvalidInput(format!("need d ≥ 2 and k ≥ 1, got d = {}, k = {}", d, k)));
            }
        }
        Ok(LemmaInstance { delta, a, mode })
    }

    pub fn degree(&self) -> u64 {
        if self.delta.is_zero() {
            0
        } else {
            self.delta.highest_exponent() as u64
        }
    }

    fn coefficients(&self) -> Vec<i64> {
        (0..=self.degree() as i64).map(|e| self.delta.coeff(e) as i64).collect()
    }

    /// Alternating coefficients, `Δ(1) = 1` and `a ≥ deg Δ`: the hypotheses
    /// under which both identities are expected to hold.
    pub fn hypotheses_hold(&self) -> bool {
        is_alternating(&self.coefficients()) && self.delta.value_at_1() == 1 && self.a >= self.degree()
    }
}

/// Element of `Z[ζ_a]` in the power basis of the field.
#[derive(Clone, Debug)]
struct ZCyc {
    coords: Vec<BigInt>,
}

struct Ring {
    field: Arc<CyclotomicField>,
    roots: Vec<Vec<BigInt>>,
}

impl Ring {
    fn new(a: u64) -> Self {
        let field = CyclotomicField::new(a);
        let roots = (0..a as i64).map(|k| field.root_coords(k).iter().map(|&c| BigInt::from(c)).collect()).collect();
        Ring { field, roots }
    }

    fn degree(&self) -> usize {
        self.field.degree()
    }

    fn root(&self, k: i64) -> &[BigInt] {
        &self.roots[k.rem_euclid(self.roots.len() as i64) as usize]
    }

    fn zero(&self) -> ZCyc {
        ZCyc { coords: vec![BigInt::zero(); self.degree()] }
    }

    fn one(&self) -> ZCyc {
        let mut z = self.zero();
        z.coords[0] = BigInt::one();
        z
    }

    /// `Σ_j c_j ζ^{kj}` for integer coefficients `c_j`.
    fn eval(&self, coeffs: &[BigInt], k: i64) -> ZCyc {
        let mut z = self.zero();
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in z.coords.iter_mut().zip(self.root(k * j as i64)) {
                if !r.is_zero() {
                    *o += c * r;
                }
            }
        }
        z
    }

    fn add_assign(&self, x: &mut ZCyc, y: &ZCyc) {
        for (a, b) in x.coords.iter_mut().zip(&y.coords) {
            *a += b;
        }
    }

    fn mul(&self, x: &ZCyc, y: &ZCyc) -> ZCyc {
        let deg = self.degree();
        let mut prod = vec![BigInt::zero(); 2 * deg - 1];
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out = prod[..deg].to_vec();
        for (k, c) in prod.iter().enumerate().skip(deg) {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(self.root(k as i64)) {
                if !r.is_zero() {
                    *o += c * r;
                }
            }
        }
        ZCyc { coords: out }
    }

    /// The integer value of a Galois invariant element.
    fn integer(&self, x: &ZCyc) -> Result<BigInt> {
        if x.coords.iter().skip(1).all(|c| c.is_zero()) {
            Ok(x.coords[0].clone())
        } else {
            Err(Error::NotRational(format!("{:?}", x.coords)))
        }
    }
}

/// Coefficients of `Δ(x·c)·Σ_{j<a} (x·c)^j` as a polynomial in `x`:
/// `Δ(ξc)/(1 − ξc)` is this at `x = ξ`, divided by `1 − c^a`.
fn geometric_numerator(delta: &IntLaurentPolynomial, a: u64, c: &BigInt) -> Vec<BigInt> {
    let deg = if delta.is_zero() { 0 } else { delta.highest_exponent() as usize };
    let mut powers = Vec::with_capacity(deg + a as usize);
    let mut cur = BigInt::one();
    for _ in 0..deg + a as usize {
        powers.push(cur.clone());
        cur *= c;
    }
    let mut out = vec![BigInt::zero(); deg + a as usize];
    for e in 0..=deg {
        let de = delta.coeff(e as i64);
        if de == 0 {
            continue;
        }
        for j in 0..a as usize {
            out[e + j] += BigInt::from(de);
        }
    }
    for (i, o) in out.iter_mut().enumerate() {
        *o *= &powers[i];
    }
    out
}

fn eval_big(delta: &IntLaurentPolynomial, x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for e in (0..=delta.highest_exponent().max(0)).rev() {
        acc = acc * x + BigInt::from(delta.coeff(e));
    }
    acc
}

/// Integer sample points `0, 2, −2, 3, −3, …` (never `±1`).
fn integer_points(count: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero()];
    let mut m = 2i64;
    while out.len() < count {
        out.push(BigInt::from(m));
        if out.len() < count {
            out.push(BigInt::from(-m));
        }
        m += 1;
    }
    out
}

fn pow_big(x: &BigInt, e: u64) -> BigInt {
    num_traits::pow(x.clone(), e as usize)
}

/// Checks `(1/a) Σ_ξ Δ(ξt)/(1−ξt) · Δ(ξ̄At)/(1−ξ̄At) = (1−A^a t^{2a})Δ(At²) / ((1−t^a)(1−A^a t^a)(1−At²))`.
///
/// With `u = A·t` both sides become `(1/a) Σ_ξ Δ(ξt)Δ(ξ̄u)/((1−ξt)(1−ξ̄u))`
/// and `(1−u^a t^a)Δ(ut)/((1−t^a)(1−u^a)(1−ut))`. After clearing these
/// denominators the difference has degree at most `deg Δ + a` in each of
/// `t` and `u`, so agreement on a square grid of `deg Δ + a + 1` integers
/// other than `±1` (where no denominator vanishes) proves the identity.
///
/// ```
/// use swsplice::exact_core::IntLaurentPolynomial;
/// use swsplice::lemma_lab::{check_lemma_a, LemmaInstance, LemmaMode};
/// let trefoil = IntLaurentPolynomial::from_coeffs(&[1, -1, 1]);
/// assert!(check_lemma_a(&LemmaInstance::new(trefoil, 2, LemmaMode::A).unwrap()).unwrap());
/// let bad = IntLaurentPolynomial::from_coeffs(&[1, -1, 1, -1, 1]);
/// assert!(!check_lemma_a(&LemmaInstance::new(bad, 3, LemmaMode::A).unwrap()).unwrap());
/// ```
pub fn check_lemma_a(inst: &LemmaInstance) -> Result<bool> {
    if inst.mode != LemmaMode::A {
        return Err(Error::InvalidInput("check_lemma_a needs an A-mode instance".into()));
    }
    let a = inst.a;
    let ring = Ring::new(a);
    let points = integer_points((inst.degree() + a + 1) as usize);
    // Δ(ζ^k x)·Σ_j (ζ^k x)^j for every point x and every k.
    let values: Vec<Vec<ZCyc>> = points
        .par_iter()
        .map(|x| {
            let num = geometric_numerator(&inst.delta, a, x);
            (0..a as i64).map(|k| ring.eval(&num, k)).collect()
        })
        .collect();
    let ai = BigInt::from(a);
    let results: Result<Vec<bool>> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let t = &points[i];
            for (j, u) in points.iter().enumerate() {
                let mut s = ring.zero();
                for k in 0..a as usize {
                    let conj = (a as usize - k) % a as usize;
                    ring.add_assign(&mut s, &ring.mul(&values[i][k], &values[j][conj]));
                }
                let s = ring.integer(&s)?;
                let ut = u * t;
                let lhs = s * (BigInt::one() - &ut);
                let rhs = &ai * (BigInt::one() - pow_big(&ut, a)) * eval_big(&inst.delta, &ut);
                if lhs != rhs {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect();
    Ok(results?.into_iter().all(|b| b))
}

/// Both sides of the A-mode identity at a rational point `(t, A)`, by direct
/// evaluation in `Q(ζ_a)`.
///
/// ```
/// use swsplice::exact_core::{q, IntLaurentPolynomial};
/// use swsplice::lemma_lab::lemma_a_sides;
/// let (l, r) = lemma_a_sides(&IntLaurentPolynomial::one(), 2, &q(1, 3), &q(1, 1)).unwrap();
/// // (1 + t²)/(1 − t²)² at t = 1/3
/// assert_eq!(l, q(45, 32));
/// assert_eq!(l, r);
/// ```
pub fn lemma_a_sides(delta: &IntLaurentPolynomial, a: u64, t: &Rational, big_a: &Rational) -> Result<(Rational, Rational)> {
    let field = CyclotomicField::new(a);
    let one = Rational::one();
    let lift = |x: Rational| CyclotomicNumber::from_rational(&field, x);
    let mut acc = CyclotomicNumber::zero(&field);
    for k in 0..a as i64 {
        let xi = CyclotomicNumber::root(&field, k);
        let xib = CyclotomicNumber::root(&field, -k);
        let x = xi.scale(t);
        let y = xib.scale(&(big_a * t));
        let den = lift(one.clone()).sub(&x).mul(&lift(one.clone()).sub(&y));
        if den.is_zero() {
            return Err(Error::PoleAtSamplePoint);
        }
        let num = eval_poly_cyc(delta, &x).mul(&eval_poly_cyc(delta, &y));
        acc = acc.add(&num.mul(&den.inv()?));
    }
    let lhs = rationalize(&acc)? / qi(a);
    let at2 = big_a * t * t;
    let ta = num_traits::pow(t.clone(), a as usize);
    let aa = num_traits::pow(big_a.clone(), a as usize);
    let den = (&one - &ta) * (&one - &aa * &ta) * (&one - &at2);
    if den.is_zero() {
        return Err(Error::PoleAtSamplePoint);
    }
    let rhs = (&one - &aa * &ta * &ta) * delta.eval_rational(&at2) / den;
    Ok((lhs, rhs))
}

fn eval_poly_cyc(p: &IntLaurentPolynomial, x: &CyclotomicNumber) -> CyclotomicNumber {
    let field = x.field().clone();
    let mut acc = CyclotomicNumber::zero(&field);
    for e in (0..=p.highest_exponent().max(0)).rev() {
        acc = acc.mul(x).add(&CyclotomicNumber::from_rational(&field, qi(p.coeff(e))));
    }
    acc
}

/// Checks the `d`-fold identity
/// `a^{1−d} Σ_{ξ₁⋯ξ_d = 1} Π_{i<d} Δ(ξ_i t)/(1−ξ_i t) · Δ(ξ_d t^k)/(1−ξ_d t^k)
///  = (1−t^{a(d+k−1)})Δ(t^{d+k−1}) / ((1−t^a)^{d−1}(1−t^{ak})(1−t^{d+k−1}))`
/// by enumerating all `a^{d−1}` tuples at `(d+k−1)(deg Δ + a) + 1` points.
pub fn check_lemma_b(inst: &LemmaInstance, tuple_bound: u128) -> Result<bool> {
    let LemmaMode::B { d, k } = inst.mode else {
        return Err(Error::InvalidInput("check_lemma_b needs a B-mode instance".into()));
    };
    let a = inst.a;
    let tuples = (a as u128).checked_pow(d - 1).unwrap_or(u128::MAX);
    if tuples > tuple_bound {
        return Err(Error::WorkBoundExceeded { work: tuples, bound: tuple_bound });
    }
    let ring = Ring::new(a);
    let e = (d + k - 1) as u64;
    let count = (e * (inst.degree() + a) + 1) as usize;
    if count > SAMPLE_POOL {
        return Err(Error::PoleAtSamplePoint);
    }
    let points = integer_points(count);
    let ai = BigInt::from(a);
    let results: Result<Vec<bool>> = points
        .par_iter()
        .map(|t| {
            let first = geometric_numerator(&inst.delta, a, t);
            let last = geometric_numerator(&inst.delta, a, &pow_big(t, k as u64));
            let f: Vec<ZCyc> = (0..a as i64).map(|j| ring.eval(&first, j)).collect();
            let g: Vec<ZCyc> = (0..a as i64).map(|j| ring.eval(&last, j)).collect();
            let s = ring.integer(&tuple_sum(&ring, &f, &g, d as usize - 1, a, 0, &ring.one()))?;
            let te = pow_big(t, e);
            let lhs = s * (BigInt::one() - &te);
            let rhs = ai.pow(d - 1) * (BigInt::one() - pow_big(&te, a)) * eval_big(&inst.delta, &te);
            Ok(lhs == rhs)
        })
        .collect();
    Ok(results?.into_iter().all(|b| b))
}

/// `Σ f[k₁]⋯f[k_m]·g[−Σk]` over all `(k₁, …, k_m) ∈ Z_a^m`.
fn tuple_sum(ring: &Ring, f: &[ZCyc], g: &[ZCyc], remaining: usize, a: u64, exp: u64, prefix: &ZCyc) -> ZCyc {
    if remaining == 0 {
        return ring.mul(prefix, &g[((a - exp % a) % a) as usize]);
    }
    let mut acc = ring.zero();
    for (j, fj) in f.iter().enumerate() {
        let next = ring.mul(prefix, fj);
        ring.add_assign(&mut acc, &tuple_sum(ring, f, g, remaining - 1, a, exp + j as u64, &next));
    }
    acc
}

/// One identity evaluated both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumIdentityReport {
    pub a: u64,
    /// Alternating, symmetric, `Δ(1) = 1` and `a ≥ deg Δ`.
    pub hypotheses: bool,
    pub checks: Vec<IdentityCheck>,
}

impl SumIdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn identity(name: &'static str, lhs: Rational, rhs: Rational) -> IdentityCheck {
    let holds = lhs == rhs;
    IdentityCheck { name, lhs, rhs, holds }
}

/// The three character-sum identities for `Δ` and `a`, each evaluated as an
/// exact cyclotomic sum and by its closed form:
///
/// * `inverse_square`: `Σ_{ξ≠1} 1/((ξ−1)(ξ̄−1)) = (a²−1)/12`;
/// * `averaged`: `(1/a)Σ_{ξ≠1} Δ(ξ)Δ(ξ̄)/((1−ξ)(1−ξ̄)) = (a²−1)/(12a) + (Δ'(1) − Δ'(1)² + Δ''(1))/a`;
/// * `natural`: `Σ_{ξ≠1} Δ(ξ)Δ(ξ̄)/((1−ξ)(1−ξ̄)) = (a²−1)/12 + (Δ^♮)''(1)`;
///
/// plus `derivatives`: `(Δ^♮)''(1) = r − r² + Δ''(1)` for `Δ(1) = 1`. The
/// last three are only expected to hold under the hypotheses.
///
/// ```
/// use swsplice::exact_core::{q, IntLaurentPolynomial};
/// use swsplice::lemma_lab::check_sum_identities;
/// use swsplice::plane_curve::AlexanderData;
/// let d = AlexanderData::from_delta(IntLaurentPolynomial::from_coeffs(&[1, -1, 1])).unwrap();
/// let r = check_sum_identities(3, &d).unwrap();
/// assert!(r.hypotheses && r.all_hold());
/// assert_eq!(r.get("natural").unwrap().lhs, q(8, 3));
/// ```
pub fn check_sum_identities(a: u64, delta: &AlexanderData) -> Result<SumIdentityReport> {
    if a == 0 {
        return Err(Error::InvalidInput("a must be positive".into()));
    }
    let one = IntLaurentPolynomial::one();
    let base = q((a * a) as i64 - 1, 12);
    let mut checks = vec![identity("inverse_square", xi_pair_sum(a, &one, &one)?, base.clone())];
    let p = &delta.delta;
    let pair = xi_pair_sum(a, p, p)?;
    let d1 = qi(p.derivative_at_1());
    let d2 = second_derivative_at_1(p);
    let averaged_rhs = q((a * a) as i64 - 1, 12 * a as i64) + (&d1 - &d1 * &d1 + &d2) / qi(a);
    checks.push(identity("averaged", &pair / qi(a), averaged_rhs));
    let natural_dd = second_derivative_at_1(&delta.natural());
    checks.push(identity("natural", pair.clone(), &base + &natural_dd));
    let r = qi(delta.half_degree as i64);
    checks.push(identity("derivatives", natural_dd, &r - &r * &r + d2));
    let coeffs: Vec<i64> = (0..=p.highest_exponent()).map(|e| p.coeff(e) as i64).collect();
    let hypotheses = is_alternating(&coeffs) && p.value_at_1() == 1 && a as usize >= 2 * delta.half_degree;
    Ok(SumIdentityReport { a, hypotheses, checks })
}

/// An ordinary polynomial from its coefficients, constant term first.
pub fn polynomial(coeffs: &[i64]) -> IntLaurentPolynomial {
    IntLaurentPolynomial::from_coeffs(&coeffs.iter().map(|&c| c as i128).collect::<Vec<_>>())
}

/// Alternating coefficient list of length `len` with nonzero entries at
/// `support` (indices) and sign `+1` at the top, as used by the randomized
/// suites. `Δ(1) = 1` exactly when the support has odd size.
pub fn alternating_polynomial(len: usize, support: &[usize]) -> IntLaurentPolynomial {
    let mut c = vec![0i64; len];
    let mut idx: Vec<usize> = support.iter().copied().filter(|&i| i < len).collect();
    idx.sort_unstable();
    idx.dedup();
    let mut sign = 1;
    for &i in idx.iter().rev() {
        c[i] = sign;
        sign = -sign;
    }
    polynomial(&c)
}
