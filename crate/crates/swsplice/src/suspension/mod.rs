//! The tower `M_(1), …, M_(s)` of links of `f_(l) + z^{n/d_l}` for an
//! irreducible plane curve `f` with Newton pairs `(p_k, q_k)`.
//!
//! Every top-level number is produced by two formula paths: a level
//! recursion and a closed sum (or an independent route through another
//! invariant), and the two are compared exactly.

mod average;

pub use average::{averaged_alexander_check, AveragedAlexander, DEFAULT_AVERAGE_BOUND};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_core::{fmt_rational, qi, second_derivative_at_1, BinomialProduct, Rational};
use crate::plane_curve::{alexander_binomial, alexander_degree, curve_second_derivative, NewtonPairs};
use crate::plumbing::{canonical_class_invariant, intersection_matrix, PlumbingGraph};
use crate::seifert::{brieskorn_data, BrieskornData};

/// Largest degree for which `Δ_{M_(l)}` is also expanded densely to check
/// `(Δ^♮)''(1)` against the factor-form value.
pub const DIRECT_EXPANSION_MAX_DEGREE: i64 = 400;

/// The gcd data of a tower; all level indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSkeleton {
    pub newton_pairs: NewtonPairs,
    pub n: u64,
    a: Vec<u64>,
    d: Vec<u64>,
    h: Vec<u64>,
    h_tilde: Vec<u64>,
}

impl TowerSkeleton {
    pub fn s(&self) -> usize {
        self.newton_pairs.len()
    }

    pub fn p(&self, l: usize) -> u64 {
        self.newton_pairs.p(l)
    }

    pub fn a(&self, l: usize) -> u64 {
        self.a[l - 1]
    }

    /// `d_l = gcd(n, p_{l+1}⋯p_s)` for `l = 0..s`.
    pub fn d(&self, l: usize) -> u64 {
        self.d[l]
    }

    pub fn h(&self, l: usize) -> u64 {
        self.h[l - 1]
    }

    pub fn h_tilde(&self, l: usize) -> u64 {
        self.h_tilde[l - 1]
    }

    /// `n/d_l`, the exponent of `z` at level `l`.
    pub fn m(&self, l: usize) -> u64 {
        self.n / self.d[l]
    }

    fn pq(&self, l: usize) -> (Rational, Rational) {
        (qi(self.p(l)), qi(self.a(l)))
    }

    /// `Π_{j=k+1}^{l} p_j²/h_j`.
    fn tail_ratio(&self, k: usize, l: usize) -> Rational {
        let mut r = Rational::one();
        for j in k + 1..=l {
            r *= qi(self.p(j) * self.p(j));
            r /= qi(self.h(j));
        }
        r
    }

    /// `(1/12)(a_l²/h̃_l − 1)(p_l²/h_l − 1)`, the second derivative of the
    /// normalized `Δ(x^{p_l} + y^{a_l})^{c(n/d_l)}` at 1.
    fn brieskorn_ddot(&self, l: usize) -> Rational {
        let (p, a) = self.pq(l);
        (&a * &a / qi(self.h_tilde(l)) - Rational::one()) * (&p * &p / qi(self.h(l)) - Rational::one()) / qi(12)
    }
}

/// Computes `d`, `h`, `h̃` level by level and checks `(h_l − 1)(h̃_l − 1) = 0`.
///
/// ```
/// use swsplice::plane_curve::NewtonPairs;
/// use swsplice::suspension::tower_setup;
/// let t = tower_setup(&"2:3,2:3".parse::<NewtonPairs>().unwrap(), 2).unwrap();
/// assert_eq!((t.d(0), t.d(1), t.d(2)), (2, 2, 1));
/// assert_eq!((t.h(1), t.h(2)), (1, 2));
/// ```
pub fn tower_setup(np: &NewtonPairs, n: u64) -> Result<TowerSkeleton> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let s = np.len();
    let a = np.a_sequence();
    let mut d = vec![1u64; s + 1];
    for l in (0..s).rev() {
        // gcd(n, p·gcd(n, P)) = gcd(n, pP)
        d[l] = n.gcd(&(np.p(l + 1) * d[l + 1]));
    }
    let mut h = Vec::with_capacity(s);
    let mut ht = Vec::with_capacity(s);
    for l in 1..=s {
        let m = n / d[l];
        let hl = np.p(l).gcd(&m);
        let htl = a[l - 1].gcd(&m);
        if d[l - 1] != hl * d[l] {
            return Err(Error::InternalInconsistency(format!(
                "h_{0} = gcd(p_{0}, n/d_{0}) = {1} but d_{2}/d_{0} = {3}/{4}",
                l,
                hl,
                l - 1,
                d[l - 1],
                d[l]
            )));
        }
        if hl > 1 && htl > 1 {
            return Err(Error::NotRationalHomologySphere(format!(
                "(h_l-1)(h̃_l-1)=0 fails at level {}: h = {}, h̃ = {}",
                l, hl, htl
            )));
        }
        h.push(hl);
        ht.push(htl);
    }
    Ok(TowerSkeleton { newton_pairs: np.clone(), n, a, d, h, h_tilde: ht })
}

fn brieskorn_levels(t: &TowerSkeleton) -> Result<Vec<BrieskornData>> {
    (1..=t.s()).map(|l| brieskorn_data(t.p(l), t.a(l), t.m(l))).collect()
}

/// Prime factorization, used as an exact logarithm.
fn log_vector(x: u64, times: &BigInt, out: &mut BTreeMap<u64, BigInt>) {
    let mut x = x;
    let mut f = 2;
    while f * f <= x {
        while x % f == 0 {
            *out.entry(f).or_insert_with(BigInt::zero) += times;
            x /= f;
        }
        f += 1;
    }
    if x > 1 {
        *out.entry(x).or_insert_with(BigInt::zero) += times;
    }
}

/// `|H_1(M_(l))|` for `l = 1..s`.
///
/// The recursion is multiplicative, `|H_1(M_(l))| = |H_1(Σ_l)|·|H_1(M_(l−1))|^{h_l}`,
/// and is checked against the additive law for `log|H_1|`, kept exactly as a
/// vector of prime exponents, and against the closed product
/// `Π_{k≤l} |H_1(Σ_k)|^{d_k/d_l}`.
pub fn level_orders(t: &TowerSkeleton) -> Result<Vec<BigInt>> {
    let pieces = brieskorn_levels(t)?;
    let mut orders = Vec::with_capacity(t.s());
    let mut prev = BigInt::one();
    let mut prev_log: BTreeMap<u64, BigInt> = BTreeMap::new();
    for l in 1..=t.s() {
        let b = &pieces[l - 1];
        let cur = &b.h1_order * num_traits::pow(prev.clone(), t.h(l) as usize);
        // log|H(l)| = log|H(Σ_l)| + h_l·log|H(l−1)|
        let mut log: BTreeMap<u64, BigInt> = BTreeMap::new();
        let (base, e) = if b.d_tilde == 1 { (b.a, b.d - 1) } else { (b.p, b.d_tilde - 1) };
        log_vector(base, &BigInt::from(e), &mut log);
        for (prime, ex) in &prev_log {
            *log.entry(*prime).or_insert_with(BigInt::zero) += ex * BigInt::from(t.h(l));
        }
        log.retain(|_, v| !v.is_zero());
        let from_log = log.iter().fold(BigInt::one(), |acc, (prime, ex)| {
            acc * num_traits::pow(BigInt::from(*prime), ex.try_into().expect("exponent fits usize"))
        });
        let closed = (1..=l).fold(BigInt::one(), |acc, k| {
            acc * num_traits::pow(pieces[k - 1].h1_order.clone(), (t.d(k) / t.d(l)) as usize)
        });
        if from_log != cur || closed != cur {
            return Err(Error::InternalInconsistency(format!(
                "|H_1| at level {}: recursion {}, log form {}, closed product {}",
                l, cur, from_log, closed
            )));
        }
        prev = cur.clone();
        prev_log = log;
        orders.push(cur);
    }
    Ok(orders)
}

/// Per-level Milnor number and signature of the Milnor fiber of `g_(l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuSigma {
    pub mu: BigInt,
    pub sigma: i64,
}

/// `μ_(l)` and `σ_(l)` by their level recursions, checked against closed forms.
///
/// `σ_(l) = σ(Σ_l) + h_l σ_(l−1)` against `Σ_k (d_k/d_l) σ(Σ_k)`.
/// `μ_(l) = μ(Σ_l) + p_l μ'` where `μ'` is the Milnor number of
/// `f_(l−1) + z^{n/d_l}` (same exponent as level `l`), against
/// `μ(f_(l))·(n/d_l − 1)`.
pub fn level_mu_sigma(t: &TowerSkeleton) -> Result<Vec<MuSigma>> {
    let pieces = brieskorn_levels(t)?;
    let mut out = Vec::with_capacity(t.s());
    let mut prev_sigma = 0i64;
    for l in 1..=t.s() {
        let b = &pieces[l - 1];
        let sigma = b.sigma + t.h(l) as i64 * prev_sigma;
        let closed: i64 = (1..=l).map(|k| (t.d(k) / t.d(l)) as i64 * pieces[k - 1].sigma).sum();
        if closed != sigma {
            return Err(Error::InternalInconsistency(format!(
                "σ at level {}: recursion {} vs closed sum {}",
                l, sigma, closed
            )));
        }
        let m = BigInt::from(t.m(l)) - 1;
        let mu_piece = BigInt::from((t.p(l) - 1) * (t.a(l) - 1)) * &m;
        let mu_prev = if l == 1 { BigInt::zero() } else { BigInt::from(alexander_degree(&t.newton_pairs, l - 1)) * &m };
        let mu = mu_piece + BigInt::from(t.p(l)) * mu_prev;
        let closed_mu = BigInt::from(alexander_degree(&t.newton_pairs, l)) * &m;
        if mu != closed_mu {
            return Err(Error::InternalInconsistency(format!("μ at level {}: {} vs {}", l, mu, closed_mu)));
        }
        prev_sigma = sigma;
        out.push(MuSigma { mu, sigma });
    }
    Ok(out)
}

/// `Δ_{M_(l)} = Δ(f_(l))^{c(n/d_l)}` in factor form and `(Δ^♮_{M_(l)})''(1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelAlexander {
    pub delta: BinomialProduct,
    pub ddot: Rational,
}

impl LevelAlexander {
    /// `Δ^♮ = t^{-r}·Δ/Δ(1)` expanded densely; the integer polynomial
    /// `Δ = |H_1|·t^r·Δ^♮` is returned together with `|H_1|`.
    pub fn expanded(&self) -> Option<(crate::exact_core::IntLaurentPolynomial, Rational)> {
        let p = self.delta.expand()?;
        Some((p, self.delta.value_at_1()?))
    }
}

/// `Δ_{M_(l)}` and `(Δ^♮)''(1)` computed by the level recursion, by its closed
/// sum, from the factor list, and (for small degree) by dense expansion.
pub fn level_alexander(t: &TowerSkeleton, orders: &[BigInt]) -> Result<Vec<LevelAlexander>> {
    let mut out = Vec::with_capacity(t.s());
    let mut prev = Rational::zero();
    for l in 1..=t.s() {
        let delta = alexander_binomial(&t.newton_pairs, l).c_transform(t.m(l));
        let ddot = t.brieskorn_ddot(l) + qi(t.p(l) * t.p(l)) / qi(t.h(l)) * &prev;
        let closed: Rational = (1..=l).map(|k| t.brieskorn_ddot(k) * t.tail_ratio(k, l)).sum();
        let factor = delta.natural_second_derivative();
        let at_one = delta.value_at_1();
        let fail = |what: &str, v: String| {
            Err(Error::InternalInconsistency(format!(
                "(Δ^♮)''(1) at level {}: recursion {} vs {} {}",
                l,
                fmt_rational(&ddot),
                what,
                v
            )))
        };
        if closed != ddot {
            return fail("closed sum", fmt_rational(&closed));
        }
        match &factor {
            Some(f) if *f == ddot => {}
            Some(f) => return fail("factor form", fmt_rational(f)),
            None => return fail("factor form", "undefined".into()),
        }
        if at_one != Some(Rational::from_integer(orders[l - 1].clone())) {
            return Err(Error::InternalInconsistency(format!(
                "|Δ_M(1)| = {:?} but |H_1| = {} at level {}",
                at_one.map(|x| fmt_rational(&x)),
                orders[l - 1],
                l
            )));
        }
        if delta.degree() <= DIRECT_EXPANSION_MAX_DEGREE {
            let p = delta
                .expand()
                .ok_or_else(|| Error::InternalInconsistency(format!("Δ_M at level {} is not a polynomial", l)))?;
            let r = p.span() / 2;
            let direct = second_derivative_at_1(&p.shift(-p.lowest_exponent() - r)) / qi(orders[l - 1].clone());
            if direct != ddot {
                return fail("dense expansion", fmt_rational(&direct));
            }
        }
        prev = ddot.clone();
        out.push(LevelAlexander { delta, ddot });
    }
    Ok(out)
}

/// `A_l` and the defects `E_(l)` of the master identity
/// `(Δ^♮_{M_(l)})''(1) = (Δ(f_(l))^♮)''(1) − Σ_k (a_k²p_k²/(h̃_k²h_k²))·(Π_{j>k} p_j²/h_j)·A_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterIdentity {
    pub a_terms: Vec<Rational>,
    pub defects: Vec<Rational>,
    pub curve_ddot: Vec<Rational>,
}

fn a_terms(t: &TowerSkeleton) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let mut a_terms = Vec::with_capacity(t.s());
    let mut curve = Vec::with_capacity(t.s());
    for k in 1..=t.s() {
        let (p, a) = t.pq(k);
        let (h, ht) = (qi(t.h(k)), qi(t.h_tilde(k)));
        let prev = if k == 1 { Rational::zero() } else { curve_second_derivative(&t.newton_pairs, k - 1)? };
        let one = Rational::one();
        let term = &h * (&h - &one) / (&a * &a) * ((&a * &a - &one) / qi(12) + prev)
            + &ht * (&ht - &one) / (&p * &p) * (&p * &p - &one) / qi(12);
        a_terms.push(term);
        curve.push(curve_second_derivative(&t.newton_pairs, k)?);
    }
    Ok((a_terms, curve))
}

/// `Σ_{k≤l} (a_k²p_k²/(h̃_k²h_k²))·(Π_{j=k+1}^{l} p_j²/h_j)·A_k`.
fn weighted_a_sum(t: &TowerSkeleton, a_terms: &[Rational], l: usize) -> Rational {
    (1..=l)
        .map(|k| {
            let (p, a) = t.pq(k);
            let hh = qi(t.h(k) * t.h_tilde(k));
            &a * &a * &p * &p / (&hh * &hh) * t.tail_ratio(k, l) * &a_terms[k - 1]
        })
        .sum()
}

/// Evaluates both sides of the master identity at every level; all defects
/// must vanish.
pub fn a_terms_and_identity(t: &TowerSkeleton, alex: &[LevelAlexander]) -> Result<MasterIdentity> {
    let (a_terms, curve) = a_terms(t)?;
    let mut defects = Vec::with_capacity(t.s());
    for l in 1..=t.s() {
        let rhs = &curve[l - 1] - weighted_a_sum(t, &a_terms, l);
        defects.push(&alex[l - 1].ddot - rhs);
    }
    if let Some(l) = defects.iter().position(|e| !e.is_zero()) {
        return Err(Error::IdentityViolated { level: l + 1, detail: format!("E = {}", fmt_rational(&defects[l])) });
    }
    Ok(MasterIdentity { a_terms, defects, curve_ddot: curve })
}

/// `λ_W(M_(l))` by the splicing recursion with the correction term
/// `np_l(h_l−1)/(d_l a_l h_l)·Σ_{k<l} (1/12)(a_k²/h̃_k − 1)(p_k²/h_k − 1)·(p_{k+1}⋯p_{l−1})²/(h_{k+1}⋯h_{l−1})`.
pub fn casson_walker_tower(t: &TowerSkeleton) -> Result<Vec<Rational>> {
    let pieces = brieskorn_levels(t)?;
    let mut out: Vec<Rational> = Vec::with_capacity(t.s());
    for l in 1..=t.s() {
        let mut lw = pieces[l - 1].lambda_w.clone();
        if l > 1 {
            lw += qi(t.h(l)) * &out[l - 2];
            let sum: Rational = (1..l).map(|k| t.brieskorn_ddot(k) * t.tail_ratio(k, l - 1)).sum();
            let (p, a) = t.pq(l);
            let coeff = qi(t.n) * p * qi(t.h(l) - 1) / (qi(t.d(l)) * a * qi(t.h(l)));
            lw += coeff * sum;
        }
        out.push(lw);
    }
    Ok(out)
}

/// Torsion `𝒯_{M_(l),σcan}(1)` with the linking data behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionReport {
    /// From `−Σ_k I⁻¹_k·(d_k/d_l)·A_k/2`.
    pub closed_form: Vec<Rational>,
    /// From the splicing recursion seeded with the Brieskorn closed form.
    pub recursion: Vec<Rational>,
    /// `minus_inverse[l−1][k−1] = −I⁻¹_k(M_(l))`.
    pub minus_inverse: Vec<Vec<Rational>>,
}

/// `−I⁻¹_k(M_(l))` by the linking-number recursion.
fn minus_inverse_table(t: &TowerSkeleton) -> Vec<Vec<Rational>> {
    let n = qi(t.n);
    let mut table: Vec<Vec<Rational>> = Vec::with_capacity(t.s());
    for l in 1..=t.s() {
        let mut row = Vec::with_capacity(l);
        let (pl, al) = t.pq(l);
        let hl = qi(t.h(l));
        let drop = &n * &pl * (&hl - Rational::one()) / (qi(t.d(l)) * &al * &hl * &hl);
        for k in 1..l {
            let (pk, ak) = t.pq(k);
            let mut link = ak * pk / qi(t.h_tilde(k) * t.h(k));
            for j in k + 1..l {
                link *= qi(t.p(j));
                link /= qi(t.h(j));
            }
            row.push(&table[l - 2][k - 1] - &link * &link * &drop);
        }
        let hh = qi(t.h(l) * t.h_tilde(l));
        row.push(&n * &pl * &al / (qi(t.d(l)) * &hh * &hh));
        table.push(row);
    }
    table
}

/// `𝒯(1)` by the closed form and by the splicing recursion; they must agree.
pub fn torsion_tower(t: &TowerSkeleton, identity: &MasterIdentity) -> Result<TorsionReport> {
    let pieces = brieskorn_levels(t)?;
    let table = minus_inverse_table(t);
    let a = &identity.a_terms;
    let closed: Vec<Rational> = (1..=t.s())
        .map(|l| {
            (1..=l).map(|k| &table[l - 1][k - 1] * qi(t.d(k) / t.d(l)) * &a[k - 1]).sum::<Rational>() / qi(2)
        })
        .collect();
    let mut rec: Vec<Rational> = Vec::with_capacity(t.s());
    for l in 1..=t.s() {
        let mut v = pieces[l - 1].torsion_at_1.clone();
        if l > 1 {
            v += qi(t.h(l)) * &rec[l - 2];
            let (p, al) = t.pq(l);
            let hl = qi(t.h(l));
            let coeff = qi(t.n) * p * (&hl - Rational::one()) / (qi(2) * &hl * al * qi(t.d(l)));
            let bracket = &identity.curve_ddot[l - 2] - weighted_a_sum(t, a, l - 1);
            v += coeff * bracket;
        }
        rec.push(v);
    }
    if let Some(l) = (0..t.s()).find(|&i| closed[i] != rec[i]) {
        return Err(Error::InternalInconsistency(format!(
            "torsion at level {}: closed form {} vs recursion {}",
            l + 1,
            fmt_rational(&closed[l]),
            fmt_rational(&rec[l])
        )));
    }
    Ok(TorsionReport { closed_form: closed, recursion: rec, minus_inverse: table })
}

/// `sw⁰` by assembly and by additivity, the signature check, and `p_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sw0Report {
    /// `𝒯(1) − λ_W/2` per level.
    pub assembled: Vec<Rational>,
    /// `Σ_k (d_k/d_l)·sw⁰(Σ_k)` per level.
    pub additive: Vec<Rational>,
    /// `−8·sw⁰ = σ` at the top level.
    pub conjecture_holds: bool,
    /// `K² + #V` of the supplied graph.
    pub k2_plus_vertices: Option<Rational>,
    pub geometric_genus: Option<Rational>,
}

/// Assembles `sw⁰` both ways, checks `−8·sw⁰ = σ`, and reports
/// `p_g = sw⁰ − (K²+#V)/8` when a plumbing graph of `M` is supplied.
pub fn sw0_and_conjecture(
    t: &TowerSkeleton,
    torsion: &TorsionReport,
    lambda_w: &[Rational],
    mu_sigma: &[MuSigma],
    orders: &[BigInt],
    graph: Option<&PlumbingGraph>,
) -> Result<Sw0Report> {
    let pieces = brieskorn_levels(t)?;
    let assembled: Vec<Rational> =
        torsion.closed_form.iter().zip(lambda_w).map(|(tt, lw)| tt - lw / qi(2)).collect();
    let additive: Vec<Rational> =
        (1..=t.s()).map(|l| (1..=l).map(|k| qi(t.d(k) / t.d(l)) * &pieces[k - 1].sw0).sum()).collect();
    if let Some(l) = (0..t.s()).find(|&i| assembled[i] != additive[i]) {
        return Err(Error::InternalInconsistency(format!(
            "sw⁰ at level {}: 𝒯(1) − λ_W/2 = {} but Σ d_k sw⁰(Σ_k) = {}",
            l + 1,
            fmt_rational(&assembled[l]),
            fmt_rational(&additive[l])
        )));
    }
    let top = assembled.last().expect("towers have at least one level");
    let sigma = mu_sigma.last().expect("towers have at least one level").sigma;
    let conjecture_holds = qi(-8) * top == qi(sigma);
    if !conjecture_holds {
        return Err(Error::ConjectureViolated(format!(
            "{} with n = {}: −8·sw⁰ = {} but σ = {}",
            t.newton_pairs,
            t.n,
            fmt_rational(&(qi(-8) * top)),
            sigma
        )));
    }
    let (k2, pg) = match graph {
        Some(g) => {
            let det = intersection_matrix(g)?.det;
            let h = orders.last().expect("towers have at least one level");
            if num_traits::Signed::abs(&det) != *h {
                return Err(Error::PreconditionViolated(format!(
                    "the supplied graph has |det| = {} but |H_1(M)| = {}",
                    num_traits::Signed::abs(&det),
                    h
                )));
            }
            let k = canonical_class_invariant(g)?;
            let pg = top - &k / qi(8);
            (Some(k), Some(pg))
        }
        None => (None, None),
    };
    Ok(Sw0Report { assembled, additive, conjecture_holds, k2_plus_vertices: k2, geometric_genus: pg })
}

/// All invariants of one tower level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    pub l: usize,
    pub d: u64,
    pub h: u64,
    pub h_tilde: u64,
    pub brieskorn: BrieskornData,
    pub h1_order: BigInt,
    pub mu: BigInt,
    pub sigma: i64,
    /// `Δ_{M_(l)} = Δ(f_(l))^{c(n/d_l)}` in factor form.
    pub delta: BinomialProduct,
    pub ddot: Rational,
    pub a_term: Rational,
    pub identity_defect: Rational,
    pub lambda_w: Rational,
    pub torsion: Rational,
    pub sw0: Rational,
}

/// The analysed tower with every cross-check passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuspensionTower {
    pub skeleton: TowerSkeleton,
    pub levels: Vec<TowerLevel>,
    pub sw0: Sw0Report,
}

impl SuspensionTower {
    /// Runs every operation on `f + z^n`; any failed cross-check is an error.
    ///
    /// ```
    /// use swsplice::plane_curve::NewtonPairs;
    /// use swsplice::suspension::SuspensionTower;
    /// use swsplice::exact_core::q;
    /// let t = SuspensionTower::new(&"2:3,2:3".parse::<NewtonPairs>().unwrap(), 2, None).unwrap();
    /// let top = t.top();
    /// assert_eq!((top.sigma, top.h1_order.clone()), (-14, 15.into()));
    /// assert_eq!(top.sw0, q(7, 4));
    /// ```
    pub fn new(np: &NewtonPairs, n: u64, graph: Option<&PlumbingGraph>) -> Result<Self> {
        let t = tower_setup(np, n)?;
        let orders = level_orders(&t)?;
        let ms = level_mu_sigma(&t)?;
        let alex = level_alexander(&t, &orders)?;
        let identity = a_terms_and_identity(&t, &alex)?;
        let lw = casson_walker_tower(&t)?;
        let torsion = torsion_tower(&t, &identity)?;
        let sw0 = sw0_and_conjecture(&t, &torsion, &lw, &ms, &orders, graph)?;
        let pieces = brieskorn_levels(&t)?;
        let levels = (1..=t.s())
            .zip(pieces)
            .zip(alex)
            .map(|((l, b), al)| TowerLevel {
                l,
                d: t.d(l),
                h: t.h(l),
                h_tilde: t.h_tilde(l),
                brieskorn: b,
                h1_order: orders[l - 1].clone(),
                mu: ms[l - 1].mu.clone(),
                sigma: ms[l - 1].sigma,
                delta: al.delta,
                ddot: al.ddot,
                a_term: identity.a_terms[l - 1].clone(),
                identity_defect: identity.defects[l - 1].clone(),
                lambda_w: lw[l - 1].clone(),
                torsion: torsion.closed_form[l - 1].clone(),
                sw0: sw0.assembled[l - 1].clone(),
            })
            .collect();
        Ok(SuspensionTower { skeleton: t, levels, sw0 })
    }

    pub fn top(&self) -> &TowerLevel {
        self.levels.last().expect("towers have at least one level")
    }
}

/// Coprime pairs `(p, q)` with `2 ≤ p, q ≤ max_pq`.
fn coprime_pairs(max_pq: u64) -> Vec<(u64, u64)> {
    let mut v = Vec::new();
    for p in 2..=max_pq {
        for qq in 2..=max_pq {
            if p.gcd(&qq) == 1 {
                v.push((p, qq));
            }
        }
    }
    v
}

/// Every `(pairs, n)` with `s ≤ max_s`, `2 ≤ p_k, q_k ≤ max_pq` and
/// `n ≤ max_n` whose link is a rational homology sphere, in lexicographic order.
pub fn sweep_towers(max_s: usize, max_pq: u64, max_n: u64) -> Vec<(NewtonPairs, u64)> {
    let base = coprime_pairs(max_pq);
    let mut out = Vec::new();
    let mut layer: Vec<Vec<(u64, u64)>> = vec![vec![]];
    for _ in 0..max_s {
        layer = layer
            .iter()
            .flat_map(|prefix| {
                base.iter().map(move |&pq| {
                    let mut v = prefix.clone();
                    v.push(pq);
                    v
                })
            })
            .collect();
        for pairs in &layer {
            let np = NewtonPairs::new(pairs.clone()).expect("generated pairs are valid");
            for n in 1..=max_n {
                if tower_setup(&np, n).is_ok() {
                    out.push((np.clone(), n));
                }
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::q;
    use crate::plumbing::{parse_graph, seifert_star_graph, torsion_sigma_can};
    use proptest::prelude::*;

    fn np(s: &str) -> NewtonPairs {
        s.parse().unwrap()
    }

    fn tower(s: &str, n: u64) -> SuspensionTower {
        SuspensionTower::new(&np(s), n, None).unwrap()
    }

    #[test]
    fn setup_examples() {
        let t = tower_setup(&np("2:3"), 5).unwrap();
        assert_eq!((t.d(0), t.h(1), t.h_tilde(1)), (1, 1, 1));
        let t = tower_setup(&np("2:3,2:3"), 2).unwrap();
        assert_eq!((t.d(0), t.d(1), t.d(2)), (2, 2, 1));
        assert_eq!((t.h(1), t.h(2), t.h_tilde(1), t.h_tilde(2)), (1, 2, 1, 1));
        match tower_setup(&np("2:3"), 6) {
            Err(Error::NotRationalHomologySphere(msg)) => assert!(msg.contains("level 1"), "{}", msg),
            other => panic!("{:?}", other),
        }
        match tower_setup(&np("2:3,3:2"), 6) {
            Err(Error::NotRationalHomologySphere(msg)) => assert!(msg.contains("level 2"), "{}", msg),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn orders_examples() {
        assert_eq!(level_orders(&tower_setup(&np("2:3"), 2).unwrap()).unwrap(), vec![BigInt::from(3)]);
        assert_eq!(
            level_orders(&tower_setup(&np("2:3,2:3"), 2).unwrap()).unwrap(),
            vec![BigInt::from(1), BigInt::from(15)]
        );
        assert_eq!(level_orders(&tower_setup(&np("2:3"), 5).unwrap()).unwrap(), vec![BigInt::from(1)]);
    }

    #[test]
    fn mu_sigma_examples() {
        let t = tower("2:3", 5);
        assert_eq!((t.top().mu.clone(), t.top().sigma), (BigInt::from(8), -8));
        assert_eq!(tower("2:3,2:3", 2).top().sigma, -14);
        let t = tower("2:3,2:3,3:2", 1);
        assert_eq!((t.top().mu.clone(), t.top().sigma), (BigInt::zero(), 0));
        assert!(t.top().sw0.is_zero());
    }

    #[test]
    fn alexander_examples() {
        let t = tower("2:3", 5);
        assert_eq!(t.top().delta, alexander_binomial(&np("2:3"), 1));
        let t = tower("2:3", 2);
        let (p, h) = LevelAlexander { delta: t.top().delta.clone(), ddot: Rational::zero() }.expanded().unwrap();
        assert_eq!(p.coefficients(), &[1, 1, 1]);
        assert_eq!(h, qi(3));
        assert_eq!(tower("2:3", 1).top().ddot, qi(2));
    }

    #[test]
    fn a_term_examples() {
        let t = tower("2:3,2:3", 2);
        assert_eq!(t.levels[1].a_term, q(2, 225) * (q(224, 12) + qi(2)));
        let t = tower("2:3,2:5", 7);
        assert!(t.levels.iter().all(|l| l.a_term.is_zero() && l.identity_defect.is_zero()));
    }

    #[test]
    fn casson_walker_examples() {
        assert_eq!(tower("2:3", 5).top().lambda_w, qi(-2));
        let t = tower("2:3,2:3", 2);
        let piece = brieskorn_data(2, 15, 2).unwrap().lambda_w;
        // correction np(h−1)/(d a h)·(1/12)(9−1)(4−1) = 4/30·2
        assert_eq!(t.top().lambda_w, piece + q(4, 15));
        assert_eq!(t.top().lambda_w, q(-67, 90));
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(tower("2:3", 4).top().torsion, q(4, 9));
        assert!(tower("2:3", 5).top().torsion.is_zero());
        assert_eq!(tower("2:3", 4).top().torsion, torsion_sigma_can(&seifert_star_graph(2, 3, 4).unwrap().graph).unwrap());
        let t = tower_setup(&np("2:3,2:3"), 2).unwrap();
        let alex = level_alexander(&t, &level_orders(&t).unwrap()).unwrap();
        let rep = torsion_tower(&t, &a_terms_and_identity(&t, &alex).unwrap()).unwrap();
        assert_eq!(rep.closed_form[1], q(62, 45));
        assert_eq!(rep.minus_inverse[1], vec![q(18, 5), qi(15)]);
    }

    #[test]
    fn sw0_examples() {
        let mut e8: String = (1..=8).map(|i| format!("v {} -2\n", i)).collect();
        for (a, b) in [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)] {
            e8.push_str(&format!("e {} {}\n", a, b));
        }
        let g = parse_graph(&e8).unwrap();
        let t = SuspensionTower::new(&np("2:3"), 5, Some(&g)).unwrap();
        assert_eq!(t.top().sw0, qi(1));
        assert_eq!(t.top().sigma, -8);
        assert_eq!(t.sw0.k2_plus_vertices, Some(qi(8)));
        assert_eq!(t.sw0.geometric_genus, Some(qi(0)));
        assert_eq!(tower("2:3,2:3", 2).top().sw0, q(7, 4));
        assert!(tower("3:4", 1).top().sw0.is_zero());
    }

    #[test]
    fn graph_with_wrong_order_is_rejected() {
        let g = parse_graph("v 1 -2\n").unwrap();
        assert!(matches!(SuspensionTower::new(&np("2:3"), 5, Some(&g)), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn sweep_small() {
        let towers = sweep_towers(2, 4, 6);
        assert!(towers.iter().all(|(p, n)| tower_setup(p, *n).is_ok()));
        assert!(!towers.iter().any(|(p, n)| p == &np("2:3") && *n == 6));
        for (p, n) in &towers {
            SuspensionTower::new(p, *n, None).unwrap();
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn every_valid_tower_is_consistent(
            pairs in prop::collection::vec((2u64..8, 2u64..8), 1..4),
            n in 1u64..31,
        ) {
            prop_assume!(pairs.iter().all(|&(p, qq)| p.gcd(&qq) == 1));
            let np = NewtonPairs::new(pairs).unwrap();
            prop_assume!(tower_setup(&np, n).is_ok());
            let t = SuspensionTower::new(&np, n, None).unwrap();
            prop_assert_eq!(qi(-8) * &t.top().sw0, qi(t.top().sigma));
            prop_assert!(t.levels.iter().all(|l| l.identity_defect.is_zero()));
            let deg = t.top().delta.degree();
            prop_assert_eq!(BigInt::from(deg), BigInt::from(alexander_degree(&np, np.len())));
        }

        #[test]
        fn d_divides_and_h_is_quotient(pairs in prop::collection::vec((2u64..8, 2u64..8), 1..4), n in 1u64..61) {
            prop_assume!(pairs.iter().all(|&(p, qq)| p.gcd(&qq) == 1));
            let np = NewtonPairs::new(pairs).unwrap();
            if let Ok(t) = tower_setup(&np, n) {
                prop_assert_eq!(t.d(t.s()), 1);
                for l in 1..=t.s() {
                    prop_assert_eq!(t.d(l - 1) % t.d(l), 0);
                    prop_assert_eq!(t.h(l), t.d(l - 1) / t.d(l));
                    prop_assert!((t.h(l) - 1) * (t.h_tilde(l) - 1) == 0);
                }
            }
        }
    }
}
