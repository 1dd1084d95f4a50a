//! Splicing formulas for the Casson-Walker invariant, the torsion and `sw⁰`.
//!
//! Everything here is a calculator over piece invariants supplied by the
//! caller; no spliced manifold is ever built. Side 1 is `(M₁, K₁)` with `K₁`
//! null-homologous and parallel equal to the longitude, side 2 carries the
//! order `o₂` of `[K₂]` and the defect `k₂` of its chosen parallel.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_core::{
    dedekind_sum, eval_in_field, q, qi, rationalize, second_derivative_at_1, CyclotomicField, CyclotomicNumber,
    IntLaurentPolynomial, Rational,
};
use crate::plane_curve::{d_invariant, AlexanderData};

/// Invariants of one side of a splice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceSide {
    pub lambda_w: Rational,
    pub torsion_at_1: Rational,
    pub h1_order: u64,
    /// Order of the knot class in `H₁`.
    pub o: u64,
    /// Longitude defect of the chosen parallel.
    pub k: i64,
    /// `Δ^♮` of the knot; required on side 1.
    pub alexander_natural: Option<IntLaurentPolynomial>,
}

impl SpliceSide {
    /// A side with a null-homologous knot whose parallel is the longitude.
    pub fn trivial_knot(lambda_w: Rational, torsion_at_1: Rational, h1_order: u64, delta: IntLaurentPolynomial) -> Self {
        SpliceSide { lambda_w, torsion_at_1, h1_order, o: 1, k: 0, alexander_natural: Some(delta) }
    }

    fn wa1(&self) -> Result<&IntLaurentPolynomial> {
        if self.o != 1 || self.k != 0 {
            return Err(Error::PreconditionViolated(format!(
                "side 1 needs o = 1 and k = 0, got o = {}, k = {}",
                self.o, self.k
            )));
        }
        self.alexander_natural
            .as_ref()
            .ok_or_else(|| Error::PreconditionViolated("side 1 carries no Alexander polynomial".into()))
    }
}

/// `λ_W(M) = λ_W(M₁) + λ_W(M₂) + (k₂/o₂)·Δ^♮''(1)`.
///
/// ```
/// use swsplice::exact_core::{q, IntLaurentPolynomial};
/// use swsplice::splicing::{splice_casson_walker, SpliceSide};
/// let trefoil = IntLaurentPolynomial::new(-1, vec![1, -1, 1]);
/// let s1 = SpliceSide::trivial_knot(q(-2, 1), q(0, 1), 1, trefoil);
/// let s2 = SpliceSide { lambda_w: q(1, 3), torsion_at_1: q(0, 1), h1_order: 3, o: 3, k: 2, alexander_natural: None };
/// assert_eq!(splice_casson_walker(&s1, &s2).unwrap(), q(-2, 1) + q(1, 3) + q(2, 3) * q(2, 1));
/// ```
pub fn splice_casson_walker(side1: &SpliceSide, side2: &SpliceSide) -> Result<Rational> {
    let delta = side1.wa1()?;
    if side2.o == 0 {
        return Err(Error::PreconditionViolated("o₂ must be positive".into()));
    }
    Ok(&side1.lambda_w + &side2.lambda_w + q(side2.k, side2.o as i64) * second_derivative_at_1(delta))
}

/// The Walker-Lescop correction for `p/q` surgery:
/// `q/p·Δ^L''(1)/|H| − (p²+1+q²)/(12pq) + sign(q)(1/4 + s(p,q))`.
///
/// `s(p, q)` for negative `q` is read as `s(p, |q|)`, the only convention under
/// which the reciprocity law holds for both signs.
pub fn surgery_correction(p: i64, q_: i64, delta_l_second: &Rational, h1: u64) -> Result<Rational> {
    if q_ == 0 {
        return Err(Error::ZeroSurgeryCoefficient);
    }
    if p <= 0 || h1 == 0 {
        return Err(Error::PreconditionViolated(format!("need p > 0 and |H| > 0, got p = {}, |H| = {}", p, h1)));
    }
    let sign = qi(q_.signum());
    let first = q(q_, p) * delta_l_second / qi(h1);
    let second = qi((p as i128) * (p as i128) + 1 + (q_ as i128) * (q_ as i128)) / qi(12 * p as i128 * q_ as i128);
    let third = sign * (q(1, 4) + dedekind_sum(p, q_.abs()));
    Ok(first - second + third)
}

/// Fujita's route: `λ_W(M₂) + λ_W(M₁(K₁, o₂/k₂)) + s(k₂, o₂)`, with the
/// surgered term expanded by [`surgery_correction`]. Needs `k₂ ≠ 0` and
/// `gcd(o₂, k₂) = 1`.
pub fn fujita_splice(side1: &SpliceSide, side2: &SpliceSide) -> Result<Rational> {
    let delta = side1.wa1()?;
    let (o2, k2) = (side2.o as i64, side2.k);
    if o2.gcd(&k2) != 1 {
        return Err(Error::PreconditionViolated(format!("gcd(o₂, k₂) = gcd({}, {}) ≠ 1", o2, k2)));
    }
    let h1 = side1.h1_order;
    let delta_l = second_derivative_at_1(delta) * qi(h1);
    let surgered = &side1.lambda_w + surgery_correction(o2, k2, &delta_l, h1)?;
    Ok(&side2.lambda_w + surgered + dedekind_sum(k2, o2))
}

/// Which part of the torsion splicing theorem to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsionMode {
    /// Both knots null-homologous with longitude parallels.
    A,
    /// `M₁` an integral homology sphere.
    B,
}

/// One nontrivial character `χ₂` of `H₁(M₂)`: the angle of `χ₂(K₂)` (a
/// rational mod 1) and `T̂₂(χ̄₂)`.
#[derive(Clone, Debug)]
pub struct CharacterValue {
    pub knot_angle: Rational,
    pub t_hat: CyclotomicNumber,
}

/// `𝒯_{M,σcan}(1)` by the torsion splicing theorem.
///
/// Mode B evaluates `Δ_{M₁}(K₁) = t^r Δ^♮` at `χ₂(K₂)` in cyclotomic
/// arithmetic and sums `T̂₂(χ̄₂)/|H₂|·Δ₁(χ₂(K₂))`.
pub fn torsion_splice(side1: &SpliceSide, side2: &SpliceSide, mode: TorsionMode, characters: &[CharacterValue]) -> Result<Rational> {
    match mode {
        TorsionMode::A => {
            for (i, s) in [side1, side2].iter().enumerate() {
                if s.o != 1 || s.k != 0 {
                    return Err(Error::ModePreconditionViolated(format!(
                        "mode A needs o = 1 and k = 0 on side {}, got o = {}, k = {}",
                        i + 1,
                        s.o,
                        s.k
                    )));
                }
            }
            Ok(&side1.torsion_at_1 + &side2.torsion_at_1)
        }
        TorsionMode::B => {
            if side1.h1_order != 1 {
                return Err(Error::ModePreconditionViolated(format!("mode B needs |H₁(M₁)| = 1, got {}", side1.h1_order)));
            }
            let delta = side1
                .alexander_natural
                .as_ref()
                .ok_or_else(|| Error::ModePreconditionViolated("side 1 carries no Alexander polynomial".into()))?;
            let delta = delta.shift(-delta.lowest_exponent());
            let h2 = qi(side2.h1_order);
            let mut conductor = 1u64;
            for c in characters {
                let den = u64::try_from(c.knot_angle.denom().clone()).map_err(|_| Error::InvalidInput("angle denominator too large".into()))?;
                conductor = conductor.lcm(&den).lcm(&c.t_hat.field().conductor());
            }
            let field = CyclotomicField::new(conductor);
            let mut acc = CyclotomicNumber::zero(&field);
            for c in characters {
                let k = (&c.knot_angle * qi(conductor)).to_integer();
                let k = i64::try_from(k).map_err(|_| Error::InvalidInput("angle too large".into()))?;
                let value = eval_in_field(&delta, &field, k);
                acc = acc.add(&c.t_hat.lift(&field).mul(&value));
            }
            Ok(rationalize(&acc)? / h2)
        }
    }
}

/// `Σ_{ξ ∈ Z_a, ξ ≠ 1} F(ξ)·G(ξ̄) / ((ξ − 1)(ξ̄ − 1))`, exactly.
pub fn xi_pair_sum(a: u64, f: &IntLaurentPolynomial, g: &IntLaurentPolynomial) -> Result<Rational> {
    if a == 0 {
        return Err(Error::InvalidInput("a must be positive".into()));
    }
    let field = CyclotomicField::new(a);
    let one = CyclotomicNumber::from_rational(&field, Rational::one());
    let mut acc = CyclotomicNumber::zero(&field);
    for k in 1..a as i64 {
        let xi = CyclotomicNumber::root(&field, k);
        let xib = CyclotomicNumber::root(&field, -k);
        let den = xi.sub(&one).mul(&xib.sub(&one));
        let num = eval_in_field(f, &field, k).mul(&eval_in_field(g, &field, -k));
        acc = acc.add(&num.mul(&den.inv()?));
    }
    rationalize(&acc)
}

/// The four obstruction quantities of a `Σ(p, a, n)` splice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstructions {
    pub o_lambda: Rational,
    pub o_torsion: Rational,
    pub o_sw: Rational,
    /// `D_a` by its defining `ξ`-sum.
    pub d_a: Rational,
    /// `2a·D(Δ^♮)`, filled in when `a ≥ 2r` (and then equal to `d_a`).
    pub d_a_reduced: Option<Rational>,
}

/// Obstructions when `d` integral homology spheres `(M₁⁽ⁱ⁾, K₁⁽ⁱ⁾)` are
/// spliced into the `d` fibres `{y = 0}` of `Σ(p, a, n)`.
///
/// `O(λ_W) = np(d−1)/(ad²)·Σ_i Δ_i^♮''(1)` and
/// `O(𝒯) = np/(ad²)·Σ_{i<j} Σ_ξ (Δ_i(ξ)Δ_j(ξ̄) − 1)/((ξ−1)(ξ̄−1))`.
/// `d_a` and `d_a_reduced` refer to the first piece.
pub fn obstructions_for_pieces(n: u64, p: u64, a: u64, pieces: &[AlexanderData]) -> Result<Obstructions> {
    let d = n.gcd(&p);
    if n == 0 || p == 0 || a == 0 {
        return Err(Error::PreconditionViolated("n, p, a must be positive".into()));
    }
    if p.gcd(&a) != 1 || n.gcd(&a) != 1 {
        return Err(Error::PreconditionViolated(format!("Σ({}, {}, {}) needs gcd(p,a) = gcd(n,a) = 1", p, a, n)));
    }
    if pieces.len() as u64 != d {
        return Err(Error::PreconditionViolated(format!("{} pieces supplied for d = {}", pieces.len(), d)));
    }
    let Some(first) = pieces.first() else {
        return Err(Error::PreconditionViolated("no pieces".into()));
    };
    let (np, di, ai) = ((n * p) as i64, d as i64, a as i64);
    let naturals: Vec<IntLaurentPolynomial> = pieces.iter().map(|x| x.natural()).collect();
    let dd_sum: Rational = naturals.iter().map(second_derivative_at_1).sum();
    // The character sums take `Δ = t^r Δ^♮`, not the symmetric form.
    let deltas: Vec<&IntLaurentPolynomial> = pieces.iter().map(|x| &x.delta).collect();
    let o_lambda = q(np * (di - 1), ai * di * di) * dd_sum;
    let one = IntLaurentPolynomial::one();
    let base = xi_pair_sum(a, &one, &one)?;
    let mut pair_total = Rational::zero();
    for i in 0..naturals.len() {
        for j in i + 1..naturals.len() {
            pair_total += xi_pair_sum(a, deltas[i], deltas[j])? - &base;
        }
    }
    let o_torsion = q(np, ai * di * di) * pair_total;
    let o_sw = &o_torsion - &o_lambda / qi(2);
    let d_a = xi_pair_sum(a, deltas[0], deltas[0])? - &base - second_derivative_at_1(&naturals[0]);
    let d_a_reduced = (a as usize >= 2 * first.half_degree).then(|| qi(2 * a as i128 * d_invariant(&first.c_coefficients)));
    if let Some(r) = &d_a_reduced {
        if *r != d_a {
            return Err(Error::InternalInconsistency(format!("D_a = {} by the ξ-sum but 2a·D = {}", d_a, r)));
        }
    }
    Ok(Obstructions { o_lambda, o_torsion, o_sw, d_a, d_a_reduced })
}

/// [`obstructions_for_pieces`] with `d` copies of the same piece.
///
/// ```
/// use swsplice::exact_core::{q, IntLaurentPolynomial};
/// use swsplice::plane_curve::AlexanderData;
/// use swsplice::splicing::obstruction_and_da;
/// let sq = AlexanderData::from_delta(IntLaurentPolynomial::from_coeffs(&[1, -2, 3, -2, 1])).unwrap();
/// let o = obstruction_and_da(2, 2, 5, 2, &sq).unwrap();
/// assert_eq!(o.d_a, q(20, 1));
/// ```
pub fn obstruction_and_da(n: u64, p: u64, a: u64, d: u64, delta1: &AlexanderData) -> Result<Obstructions> {
    if d != n.gcd(&p) {
        return Err(Error::PreconditionViolated(format!("d = {} but gcd(n, p) = {}", d, n.gcd(&p))));
    }
    let pieces = vec![delta1.clone(); d as usize];
    let o = obstructions_for_pieces(n, p, a, &pieces)?;
    let expected = q((n * p * (d - 1)) as i64, (2 * a * d) as i64) * &o.d_a;
    if o.o_sw != expected {
        return Err(Error::InternalInconsistency(format!("O(sw⁰) = {} but np(d−1)/(2ad)·D_a = {}", o.o_sw, expected)));
    }
    Ok(o)
}

/// Which case of the cyclic cover corollary applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverCase {
    /// `d = 1`: plain sum.
    B,
    /// `gcd(n, a) = 1` with `M₁` an integral homology sphere.
    C,
}

/// Inputs of the cyclic cover corollary.
#[derive(Clone, Debug)]
pub struct CyclicCoverInput {
    pub n: u64,
    pub p: u64,
    pub a: u64,
    pub sw0_m1: Rational,
    pub sw0_brieskorn: Rational,
    pub h1_m1: u64,
    /// `Δ^♮_{M₁}(K₁)`; needed in case C.
    pub delta1: Option<AlexanderData>,
}

/// `sw⁰` of the `n`-fold cyclic cover branched along the `(a, p)` cable.
///
/// Fails with `CasePreconditionViolated` when `(d−1)(gcd(n,a)−1) ≠ 0`.
pub fn cyclic_cover_sw(input: &CyclicCoverInput) -> Result<(CoverCase, Rational)> {
    let d = input.n.gcd(&input.p);
    let e = input.n.gcd(&input.a);
    if (d - 1) * (e - 1) != 0 {
        return Err(Error::CasePreconditionViolated(format!(
            "(d-1)(gcd(n,a)-1)=0 fails: d = {}, gcd(n,a) = {}",
            d, e
        )));
    }
    if d == 1 {
        return Ok((CoverCase::B, &input.sw0_m1 + &input.sw0_brieskorn));
    }
    if input.h1_m1 != 1 {
        return Err(Error::CasePreconditionViolated(format!("case C needs |H₁(M₁)| = 1, got {}", input.h1_m1)));
    }
    let delta = input
        .delta1
        .as_ref()
        .ok_or_else(|| Error::CasePreconditionViolated("case C needs Δ^♮_{M₁}".into()))?;
    if (input.a as usize) < 2 * delta.half_degree {
        return Err(Error::CasePreconditionViolated(format!(
            "case C needs a ≥ deg Δ, got a = {}, deg Δ = {}",
            input.a,
            2 * delta.half_degree
        )));
    }
    let correction = q((input.n * input.p * (d - 1)) as i64, d as i64) * qi(d_invariant(&delta.c_coefficients));
    Ok((CoverCase::C, qi(d) * &input.sw0_m1 + &input.sw0_brieskorn + correction))
}
