//! Irreducible plane curve singularities given by Newton pairs.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact_core::{qi, BinomialProduct, IntLaurentPolynomial, Rational};

/// Newton pairs `(p_k, q_k)`, `k = 1..s`, with `p_k, q_k ≥ 2` and `gcd(p_k, q_k) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NewtonPairs {
    pairs: Vec<(u64, u64)>,
}

impl NewtonPairs {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidNewtonPairs("at least one pair is required".into()));
        }
        for (k, &(p, qq)) in pairs.iter().enumerate() {
            if p < 2 {
                return Err(Error::InvalidNewtonPairs(format!("p_{} = {} but p_k >= 2 is required", k + 1, p)));
            }
            if qq < 2 {
                return Err(Error::InvalidNewtonPairs(format!(
                    "q_{} = {} but q_k >= 2 is required for every k (q_k = 1 is not admitted)",
                    k + 1,
                    qq
                )));
            }
            if p.gcd(&qq) != 1 {
                return Err(Error::InvalidNewtonPairs(format!("gcd(p_{0}, q_{0}) = gcd({1}, {2}) != 1", k + 1, p, qq)));
            }
        }
        Ok(NewtonPairs { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// Number of pairs `s`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn p(&self, k: usize) -> u64 {
        self.pairs[k - 1].0
    }

    /// The first `l` pairs, i.e. the data of `f_(l)`.
    pub fn truncate(&self, l: usize) -> NewtonPairs {
        NewtonPairs { pairs: self.pairs[..l].to_vec() }
    }

    /// `a_1 = q_1`, `a_{k+1} = q_{k+1} + p_{k+1} p_k a_k`.
    pub fn a_sequence(&self) -> Vec<u64> {
        let mut a: Vec<u64> = Vec::with_capacity(self.pairs.len());
        for (k, &(p, qq)) in self.pairs.iter().enumerate() {
            if k == 0 {
                a.push(qq);
            } else {
                let prev = self.pairs[k - 1].0 * a[k - 1];
                a.push(qq.checked_add(p.checked_mul(prev).expect("a_k overflow")).expect("a_k overflow"));
            }
        }
        a
    }
}

impl FromStr for NewtonPairs {
    type Err = Error;

    /// Parses `"p1:q1,p2:q2,…"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in s.split(',') {
            let (p, qq) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::InvalidNewtonPairs(format!("expected p:q, got {:?}", item.trim())))?;
            let p: u64 = p.trim().parse().map_err(|_| Error::InvalidNewtonPairs(format!("bad integer {:?}", p)))?;
            let qq: u64 = qq.trim().parse().map_err(|_| Error::InvalidNewtonPairs(format!("bad integer {:?}", qq)))?;
            pairs.push((p, qq));
        }
        NewtonPairs::new(pairs)
    }
}

impl fmt::Display for NewtonPairs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(p, qq)| format!("{}:{}", p, qq)).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Splice weights of the vertices of `Γ(S³, K_f)` with `δ̄ ≠ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveWeights {
    /// `w_{v_k}`, `k = 1..s` (index 0 holds `v_1`).
    pub v: Vec<u64>,
    /// `w_{v̄_k}`, `k = 0..s`.
    pub vbar: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveInvariants {
    pub a_sequence: Vec<u64>,
    pub weights: CurveWeights,
    /// The `w_{v̄_k}`, generators of the semigroup of the branch.
    pub semigroup_generators: Vec<u64>,
}

/// `a_k`, weights and semigroup generators.
pub fn derive_curve_invariants(np: &NewtonPairs) -> Result<CurveInvariants> {
    let a = np.a_sequence();
    let s = np.len();
    for k in 0..s {
        if np.pairs[k].0.gcd(&a[k]) != 1 {
            return Err(Error::InvalidNewtonPairs(format!("gcd(p_{0}, a_{0}) != 1", k + 1)));
        }
    }
    // tail[k] = p_{k+1}⋯p_s (1-based k, tail[s] = 1).
    let mut tail = vec![1u64; s + 1];
    for k in (0..s).rev() {
        tail[k] = tail[k + 1].checked_mul(np.pairs[k].0).expect("weight overflow");
    }
    let v: Vec<u64> = (0..s).map(|k| a[k] * tail[k]).collect();
    let mut vbar = vec![tail[0]];
    vbar.extend((0..s).map(|k| a[k] * tail[k + 1]));
    Ok(CurveInvariants { a_sequence: a, semigroup_generators: vbar.clone(), weights: CurveWeights { v, vbar } })
}

/// `Δ(x^p + y^a) = (t^{pa}−1)(t−1)/((t^p−1)(t^a−1))` in binomial form.
pub fn brieskorn_alexander(p: u64, a: u64) -> BinomialProduct {
    BinomialProduct::factor(p * a, 1)
        .mul(&BinomialProduct::factor(1, 1))
        .mul(&BinomialProduct::factor(p, -1))
        .mul(&BinomialProduct::factor(a, -1))
}

/// `Δ(f_(l))` in binomial form via `Δ(f_(l))(t) = Δ(x^{p_l}+y^{a_l})(t)·Δ(f_(l−1))(t^{p_l})`.
pub fn alexander_binomial(np: &NewtonPairs, l: usize) -> BinomialProduct {
    let a = np.a_sequence();
    let mut d = BinomialProduct::one();
    for k in 0..l {
        let p = np.pairs[k].0;
        d = brieskorn_alexander(p, a[k]).mul(&d.substitute_power(p));
    }
    d
}

/// Degree of `Δ(f_(l))` from the recursion `deg_l = (p_l−1)(a_l−1) + p_l·deg_{l−1}`.
pub fn alexander_degree(np: &NewtonPairs, l: usize) -> u64 {
    let a = np.a_sequence();
    let mut d = 0u64;
    for k in 0..l {
        let p = np.pairs[k].0;
        d = (p - 1) * (a[k] - 1) + p * d;
    }
    d
}

/// Multiplies `buf[..len]` by `1 − t^m` in place; `buf` must have room for `len + m`.
fn mul_one_minus_in_place(buf: &mut [i64], len: usize, m: usize) -> Result<usize> {
    for i in (m..len + m).rev() {
        buf[i] = buf[i]
            .checked_sub(buf[i - m])
            .ok_or_else(|| Error::InternalInconsistency("coefficient overflow".into()))?;
    }
    Ok(len + m)
}

/// Exact division of `buf[..len]` by `1 − t^m` in place; `None` if inexact.
fn div_one_minus_in_place(buf: &mut [i64], len: usize, m: usize) -> Option<usize> {
    if len <= m {
        return buf[..len].iter().all(|&c| c == 0).then_some(0);
    }
    for i in m..len {
        buf[i] = buf[i].checked_add(buf[i - m])?;
    }
    let qlen = len - m;
    buf[qlen..len].iter().all(|&c| c == 0).then_some(qlen)
}

/// Dense coefficients `b_0..b_{2r}` of `Δ(f_(l))`, computed level by level
/// with exact divisions. Also asserts the gap inequality at each level.
///
/// Each level works in one buffer, since top-level degrees reach `10⁸` for
/// four pairs with entries up to 10.
pub fn alexander_coefficients(np: &NewtonPairs, l: usize) -> Result<Vec<i64>> {
    let a = np.a_sequence();
    let mut cur: Vec<i64> = vec![1];
    for k in 0..l {
        let p = np.pairs[k].0 as usize;
        let ak = a[k] as usize;
        let prev_deg = cur.len() - 1;
        if k > 0 && ak <= p * prev_deg {
            return Err(Error::InternalInconsistency(format!(
                "gap inequality a_{} > p_{}·deg Δ(f_({})) fails",
                k + 1,
                k + 1,
                k
            )));
        }
        let sub_len = prev_deg * p + 1;
        let mut buf = vec![0i64; sub_len + 1 + p * ak];
        for (i, &c) in cur.iter().enumerate() {
            buf[i * p] = c;
        }
        drop(cur);
        let len = mul_one_minus_in_place(&mut buf, sub_len, 1)?;
        let len = mul_one_minus_in_place(&mut buf, len, p * ak)?;
        let inexact = || Error::InternalInconsistency(format!("inexact division at level {}", k + 1));
        let len = div_one_minus_in_place(&mut buf, len, p).ok_or_else(inexact)?;
        let len = div_one_minus_in_place(&mut buf, len, ak).ok_or_else(inexact)?;
        buf.truncate(len);
        buf.shrink_to_fit();
        cur = buf;
    }
    Ok(cur)
}

/// Alexander polynomial data of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlexanderData {
    /// `Δ(f)` as an ordinary polynomial with `Δ(0) = 1`.
    pub delta: IntLaurentPolynomial,
    /// Half degree `r`.
    pub half_degree: usize,
    /// `c_1..c_r` with `Δ^♮ = 1 + Σ c_i (t^i + t^{-i} − 2)`.
    pub c_coefficients: Vec<i64>,
}

impl AlexanderData {
    /// Builds the data from any symmetric polynomial `Δ` with `Δ(1) = 1`.
    pub fn from_delta(delta: IntLaurentPolynomial) -> Result<Self> {
        let delta = delta.shift(-delta.lowest_exponent());
        let span = delta.span();
        if span % 2 != 0 || delta.value_at_1() != 1 || !delta.shift(-span / 2).is_symmetric() {
            return Err(Error::InternalInconsistency(format!("{} is not a normalized symmetric Δ", delta)));
        }
        let r = (span / 2) as usize;
        let c = (1..=r).map(|i| delta.coeff((r + i) as i64) as i64).collect();
        Ok(AlexanderData { delta, half_degree: r, c_coefficients: c })
    }

    /// `Δ^♮ = t^{-r}·Δ`.
    pub fn natural(&self) -> IntLaurentPolynomial {
        self.delta.shift(-(self.half_degree as i64))
    }

    /// `Δ^♮` rebuilt from the `c_i`.
    pub fn natural_from_c(&self) -> IntLaurentPolynomial {
        natural_from_c(&self.c_coefficients)
    }
}

/// `1 + Σ c_i (t^i + t^{-i} − 2)`.
pub fn natural_from_c(c: &[i64]) -> IntLaurentPolynomial {
    let r = c.len();
    let mut coeffs = vec![0i128; 2 * r + 1];
    coeffs[r] = 1;
    for (i, &ci) in c.iter().enumerate() {
        let i = i + 1;
        coeffs[r + i] += ci as i128;
        coeffs[r - i] += ci as i128;
        coeffs[r] -= 2 * ci as i128;
    }
    IntLaurentPolynomial::new(-(r as i64), coeffs)
}

/// `Δ(f)` with the checks `Δ(0) = Δ(1) = 1`, even degree and the gap inequality.
pub fn alexander_polynomial(np: &NewtonPairs) -> Result<AlexanderData> {
    let coeffs = alexander_coefficients(np, np.len())?;
    let delta = IntLaurentPolynomial::new(0, coeffs.iter().map(|&c| c as i128).collect());
    if delta.coeff(0) != 1 || delta.value_at_1() != 1 || delta.span() % 2 != 0 {
        return Err(Error::InternalInconsistency(format!("Δ(f) for {} fails Δ(0)=Δ(1)=1", np)));
    }
    AlexanderData::from_delta(delta)
}

/// Each nonzero entry is `(−1)^{n_i}`, `n_i = #{j > i : c_j ≠ 0}`.
pub fn is_alternating(coeffs: &[i64]) -> bool {
    let mut expect = 1;
    for &c in coeffs.iter().rev() {
        match c {
            0 => {}
            1 | -1 if c == expect => expect = -expect,
            _ => return false,
        }
    }
    true
}

/// `D(c) = Σ c_i c_j min(i,j) − Σ i c_i`, using `Σ_{i,j} c_i c_j min(i,j) = Σ_k (Σ_{i≥k} c_i)²`.
pub fn d_invariant(c: &[i64]) -> i128 {
    let mut tail: i128 = 0;
    let mut quad: i128 = 0;
    let mut lin: i128 = 0;
    for (idx, &ci) in c.iter().enumerate().rev() {
        tail += ci as i128;
        quad += tail * tail;
        lin += (idx as i128 + 1) * ci as i128;
    }
    quad - lin
}

/// Semigroup membership on `[0, bound]` by dynamic programming.
pub fn semigroup_members(generators: &[u64], bound: usize) -> Vec<bool> {
    let mut m = vec![false; bound + 1];
    m[0] = true;
    let gens: Vec<usize> = generators.iter().map(|&g| g as usize).filter(|&g| g > 0).collect();
    for i in 1..=bound {
        m[i] = gens.iter().any(|&g| g <= i && m[i - g]);
    }
    m
}

/// `Δ(f)/(1−t) = Σ_{i∈S} t^i` checked coefficientwise up to `degree_bound`.
pub fn semigroup_series_check(np: &NewtonPairs, degree_bound: usize) -> Result<bool> {
    let coeffs = alexander_coefficients(np, np.len())?;
    let r = (coeffs.len() - 1) / 2;
    if degree_bound < 2 * r {
        return Err(Error::PreconditionViolated(format!("degree bound {} < 2r = {}", degree_bound, 2 * r)));
    }
    let inv = derive_curve_invariants(np)?;
    Ok(series_matches_semigroup(&coeffs, &inv.semigroup_generators, degree_bound))
}

pub(crate) fn series_matches_semigroup(coeffs: &[i64], generators: &[u64], bound: usize) -> bool {
    let members = semigroup_members(generators, bound);
    let mut acc = 0i64;
    for (i, &m) in members.iter().enumerate() {
        acc += coeffs.get(i).copied().unwrap_or(0);
        if acc != m as i64 {
            return false;
        }
    }
    true
}

/// `(Δ(f_(l))^♮)''(1)` by the level recursion.
pub fn curve_second_derivative(np: &NewtonPairs, l: usize) -> Result<Rational> {
    if l == 0 || l > np.len() {
        return Err(Error::PreconditionViolated(format!("level {} outside 1..={}", l, np.len())));
    }
    let a = np.a_sequence();
    let mut dd = qi(0);
    for k in 0..l {
        let p = np.pairs[k].0 as i64;
        let ak = a[k] as i64;
        dd = qi((ak * ak - 1) as i128 * (p * p - 1) as i128) / qi(12) + qi(p * p) * dd;
    }
    Ok(dd)
}
