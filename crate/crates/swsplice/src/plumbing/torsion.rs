//! The Reidemeister-Turaev torsion `T_{M,σcan}(1)` as a Fourier sum over the
//! nontrivial characters of `H`.
//!
//! For a character `χ` and a base vertex `u` the limit at `t = 1` of
//! `Π_v (t^{w_v(u)}·χ(g_v) − 1)^{δ_v − 2}` is a finite product once the
//! vanishing factors are counted: with `E₀ = Σ_{χ(g_v)=1} (δ_v − 2)` it is 0
//! for `E₀ > 0`, and for `E₀ = 0` it equals
//! `Π_{χ(g_v)≠1} (χ(g_v) − 1)^{δ_v−2} · Π_{χ(g_v)=1} w_v(u)^{δ_v−2}`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{homology, HomologyData, LinkingForm, PlumbingGraph};
use crate::error::{Error, Result};
use crate::exact_core::{qi, rationalize, CyclotomicField, CyclotomicNumber, Rational};

/// Characters enumerated by brute force when `|H|` is at most this.
pub const DEFAULT_CHARACTER_BOUND: u64 = 250_000;

/// Iterator over the characters of `H = ⊕ Z/d_i`, as tuples `(k_i mod d_i)`.
#[derive(Clone, Debug)]
pub struct Characters {
    factors: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Characters {
    pub fn new(factors: &[u64]) -> Self {
        Characters { factors: factors.to_vec(), next: Some(vec![0; factors.len()]) }
    }

    /// Skips the trivial character.
    pub fn nontrivial(factors: &[u64]) -> Self {
        let mut c = Self::new(factors);
        c.next();
        c
    }
}

impl Iterator for Characters {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.factors[i] {
                self.next = Some(succ);
                return Some(cur);
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// Evaluates the limit for characters whose values are given as angles
/// `a_v/N`. Caches the factors `(ζ^a − 1)^e` and the weight vectors.
pub(crate) struct LimitEvaluator<'g> {
    field: Arc<CyclotomicField>,
    degrees: Vec<i64>,
    adjacency: Vec<Vec<usize>>,
    linking: &'g LinkingForm,
    factors: HashMap<(u64, i64), CyclotomicNumber>,
    weights: HashMap<usize, Vec<BigInt>>,
}

impl<'g> LimitEvaluator<'g> {
    pub(crate) fn new(g: &PlumbingGraph, linking: &'g LinkingForm, conductor: u64) -> Self {
        LimitEvaluator {
            field: CyclotomicField::new(conductor),
            degrees: g.degrees(),
            adjacency: g.adjacency(),
            linking,
            factors: HashMap::new(),
            weights: HashMap::new(),
        }
    }

    pub(crate) fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Vertices usable as base: `χ(g_u) ≠ 1`, or adjacent to such a vertex.
    pub(crate) fn admissible_bases(&self, angles: &[u64]) -> Vec<usize> {
        (0..angles.len())
            .filter(|&u| angles[u] != 0 || self.adjacency[u].iter().any(|&v| angles[v] != 0))
            .collect()
    }

    fn factor(&mut self, angle: u64, e: i64) -> Result<CyclotomicNumber> {
        if let Some(f) = self.factors.get(&(angle, e)) {
            return Ok(f.clone());
        }
        let one = CyclotomicNumber::from_rational(&self.field, Rational::one());
        let f = CyclotomicNumber::root(&self.field, angle as i64).sub(&one).pow(e)?;
        self.factors.insert((angle, e), f.clone());
        Ok(f)
    }

    fn weights(&mut self, u: usize) -> &Vec<BigInt> {
        let lk = self.linking;
        self.weights.entry(u).or_insert_with(|| lk.weights(u))
    }

    /// The limit for one character; `u = None` picks the first vertex with
    /// `χ(g_u) ≠ 1`.
    pub(crate) fn limit(&mut self, angles: &[u64], u: Option<usize>) -> Result<CyclotomicNumber> {
        let e0: i64 = angles.iter().zip(&self.degrees).filter(|(a, _)| **a == 0).map(|(_, d)| d - 2).sum();
        if e0 > 0 {
            return Ok(CyclotomicNumber::zero(&self.field));
        }
        if e0 < 0 {
            return Err(Error::LimitDoesNotExist(format!("E0 = {} for character angles {:?}", e0, angles)));
        }
        let u = match u {
            Some(u) => {
                if !self.admissible_bases(angles).contains(&u) {
                    return Err(Error::PreconditionViolated(format!("vertex {} is not an admissible base", u)));
                }
                u
            }
            None => angles.iter().position(|&a| a != 0).ok_or_else(|| {
                Error::PreconditionViolated("the trivial character has no admissible base".into())
            })?,
        };
        let mut scalar = Rational::one();
        let mut acc = CyclotomicNumber::from_rational(&self.field, Rational::one());
        for v in 0..angles.len() {
            let e = self.degrees[v] - 2;
            if e == 0 {
                continue;
            }
            if angles[v] == 0 {
                let w = qi(self.weights(u)[v].clone());
                scalar *= crate::exact_core::poly::pow_signed(&w, e);
            } else {
                acc = acc.mul(&self.factor(angles[v], e)?);
            }
        }
        Ok(acc.scale(&scalar))
    }
}

/// `χ(g_v)` angles of every vertex, over the exponent `N` of `H`.
pub(crate) fn character_angles(hom: &HomologyData, k: &[u64]) -> Vec<u64> {
    (0..hom.fiber_classes.len()).map(|v| hom.character_angle(k, v)).collect()
}

/// The limit for one character of `H` (given as a tuple `k`), with an optional
/// base vertex index `u`.
pub fn character_limit(g: &PlumbingGraph, k: &[u64], u: Option<usize>) -> Result<CyclotomicNumber> {
    let hom = homology(g)?;
    let lk = LinkingForm::of(g)?;
    let mut ev = LimitEvaluator::new(g, &lk, hom.exponent());
    ev.limit(&character_angles(&hom, k), u)
}

/// `T_{M,σcan}(1)` with the default enumeration bound.
pub fn torsion_sigma_can(g: &PlumbingGraph) -> Result<Rational> {
    torsion_sigma_can_bounded(g, DEFAULT_CHARACTER_BOUND)
}

/// `T_{M,σcan}(1)`. Enumerates all characters when `|H| ≤ bound`; larger
/// star-shaped graphs go through [`star_torsion`], anything else fails with
/// `WorkBoundExceeded`.
pub fn torsion_sigma_can_bounded(g: &PlumbingGraph, bound: u64) -> Result<Rational> {
    let form = super::intersection_matrix(g)?;
    if !form.negative_definite {
        return Err(Error::NotNegativeDefinite);
    }
    let order = form.det.magnitude().clone();
    if order <= num_bigint::BigUint::from(bound) {
        return torsion_by_enumeration(g);
    }
    match StarShape::detect(g) {
        Some(shape) => star_torsion(g, &shape, bound),
        None => Err(Error::WorkBoundExceeded { work: order.to_u128().unwrap_or(u128::MAX), bound: bound as u128 }),
    }
}

pub(crate) fn torsion_by_enumeration(g: &PlumbingGraph) -> Result<Rational> {
    let hom = homology(g)?;
    if hom.invariant_factors.is_empty() {
        return Ok(Rational::zero());
    }
    let lk = LinkingForm::of(g)?;
    let mut ev = LimitEvaluator::new(g, &lk, hom.exponent());
    let mut total = CyclotomicNumber::zero(ev.field());
    for k in Characters::nontrivial(&hom.invariant_factors) {
        total = total.add(&ev.limit(&character_angles(&hom, &k), None)?);
    }
    let sum = rationalize(&total).map_err(|e| Error::InternalInconsistency(format!("character sum: {}", e)))?;
    Ok(sum / qi(hom.order))
}

/// A star-shaped graph: one node and chains hanging off it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct StarShape {
    pub center: usize,
    /// Per arm: vertices from the center outwards.
    pub arms: Vec<Vec<usize>>,
    /// Per arm: `(α, c)` with `g_O = α·x` and `g_{v1} = c·x`, `x` the end class.
    pub coefficients: Vec<(i64, i64)>,
}

impl StarShape {
    pub(crate) fn detect(g: &PlumbingGraph) -> Option<StarShape> {
        let adj = g.adjacency();
        let nodes: Vec<usize> = (0..adj.len()).filter(|&v| adj[v].len() >= 3).collect();
        if nodes.len() != 1 {
            return None;
        }
        let center = nodes[0];
        let euler: Vec<i64> = g.vertices().iter().map(|(_, e)| *e).collect();
        let mut arms = Vec::new();
        let mut coefficients = Vec::new();
        for &first in &adj[center] {
            let mut arm = vec![first];
            let (mut prev, mut cur) = (center, first);
            while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
                arm.push(next);
                prev = cur;
                cur = next;
            }
            // Walk back from the end: c_s = 1, c_{i−1} = −e_i·c_i − c_{i+1}.
            let s = arm.len();
            let mut c = vec![0i64; s + 2];
            c[s] = 1;
            for i in (1..=s).rev() {
                c[i - 1] = -euler[arm[i - 1]] * c[i] - c[i + 1];
            }
            coefficients.push((c[0], c[1]));
            arms.push(arm);
        }
        Some(StarShape { center, arms, coefficients })
    }
}

fn lcm_all(xs: impl IntoIterator<Item = u64>) -> u64 {
    xs.into_iter().fold(1, |a, b| a.lcm(&b))
}

/// `T_{M,σcan}(1)` for a star-shaped graph through the presentation
/// `H = ⟨h, x_j | α_j x_j = h, e_O h + Σ c_j x_j = 0⟩`, where `h` is the
/// central fiber and `x_j` the end of the `j`-th arm.
///
/// Characters with `χ(h) = 1` contribute only when exactly two ends are
/// nontrivial, so that part is a sum over pairs of arms. Characters with
/// `χ(h) ≠ 1` are enumerated; `bound` caps that enumeration.
pub(crate) fn star_torsion(g: &PlumbingGraph, shape: &StarShape, bound: u64) -> Result<Rational> {
    let form = super::intersection_matrix(g)?;
    let order = form.det.magnitude().clone();
    let lk = LinkingForm::of(g)?;
    let degrees = g.degrees();
    let euler_center = g.vertices()[shape.center].1;
    let k = shape.arms.len();
    let ends: Vec<usize> = shape.arms.iter().map(|a| *a.last().unwrap()).collect();
    let alphas: Vec<u64> = shape.coefficients.iter().map(|&(a, _)| a as u64).collect();
    let cs: Vec<i64> = shape.coefficients.iter().map(|&(_, c)| c).collect();
    if shape.coefficients.iter().any(|&(a, _)| a <= 0) {
        return Err(Error::NotNegativeDefinite);
    }
    let mut total = Rational::zero();

    // χ(h) = 1: no single end can be nontrivial on its own.
    for i in 0..k {
        let a = alphas[i];
        for s in 1..a {
            if (s as i64 * cs[i]).rem_euclid(a as i64) == 0 {
                return Err(Error::LimitDoesNotExist(format!("character nontrivial on one end only (arm {})", i)));
            }
        }
    }
    let mut pair_cache: HashMap<(u64, i64, u64, i64), Rational> = HashMap::new();
    for i in 0..k {
        for j in i + 1..k {
            let key = (alphas[i], cs[i].rem_euclid(alphas[i] as i64), alphas[j], cs[j].rem_euclid(alphas[j] as i64));
            let pair_sum = match pair_cache.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = pair_sum(alphas[i], cs[i], alphas[j], cs[j])?;
                    pair_cache.insert(key, v.clone());
                    v
                }
            };
            if pair_sum.is_zero() {
                continue;
            }
            // Base u = end_i; the trivial vertices with δ ≠ 2 are the center and the other ends.
            let w = lk.weights(ends[i]);
            let mut scalar = Rational::one();
            for (v, &d) in degrees.iter().enumerate() {
                let e = d - 2;
                if e == 0 || v == ends[i] || v == ends[j] {
                    continue;
                }
                scalar *= crate::exact_core::poly::pow_signed(&qi(w[v].clone()), e);
            }
            total += scalar * pair_sum;
        }
    }

    // χ(h) ≠ 1.
    let oh = lk.order(shape.center);
    if oh > 1 {
        let per_z: u128 = alphas.iter().map(|&a| a as u128).product();
        let work = per_z * (oh as u128 - 1);
        if work > bound as u128 {
            return Err(Error::WorkBoundExceeded { work, bound: bound as u128 });
        }
        // Character values lie in μ_N with N = exp(H), which divides both |H| and oh·lcm(α).
        let n = oh * lcm_all(alphas.iter().copied());
        let n = n.gcd(&(&order % num_bigint::BigUint::from(n)).to_u64().unwrap());
        let field = CyclotomicField::new(n);
        let one = CyclotomicNumber::from_rational(&field, Rational::one());
        let minus_one = |angle: u64| CyclotomicNumber::root(&field, angle as i64).sub(&one);
        let mut acc = CyclotomicNumber::zero(&field);
        for s in 1..oh {
            let z = s * (n / oh);
            let center_factor = minus_one(z).pow(degrees[shape.center] - 2)?;
            // All y with α_j·y ≡ z (mod n).
            let choices: Vec<Vec<u64>> =
                alphas.iter().map(|&a| (0..n).filter(|&y| (a as u128 * y as u128) % n as u128 == z as u128).collect()).collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let target = ((-euler_center) as i128 * z as i128).rem_euclid(n as i128) as u64;
            let mut idx = vec![0usize; k];
            loop {
                let prod = (0..k)
                    .map(|j| (cs[j] as i128 * choices[j][idx[j]] as i128).rem_euclid(n as i128))
                    .sum::<i128>()
                    .rem_euclid(n as i128) as u64;
                if prod == target {
                    let mut term = center_factor.clone();
                    for j in 0..k {
                        let y = choices[j][idx[j]];
                        let e = degrees[ends[j]] - 2;
                        term = term.mul(&minus_one(y).pow(e)?);
                    }
                    acc = acc.add(&term);
                }
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX {
                    break;
                }
            }
        }
        total += rationalize(&acc).map_err(|e| Error::InternalInconsistency(format!("star sum: {}", e)))?;
    }
    Ok(total / Rational::from_integer(BigInt::from(order)))
}

/// `Σ 1/((y_1 − 1)(y_2 − 1))` over `y_1 ∈ μ_{α_1}∖1`, `y_2 ∈ μ_{α_2}∖1` with
/// `y_1^{c_1}·y_2^{c_2} = 1`.
fn pair_sum(a1: u64, c1: i64, a2: u64, c2: i64) -> Result<Rational> {
    let n = a1.lcm(&a2);
    let field = CyclotomicField::new(n);
    let one = CyclotomicNumber::from_rational(&field, Rational::one());
    let inv: Vec<Option<CyclotomicNumber>> = (0..n)
        .map(|j| if j == 0 { Ok(None) } else { CyclotomicNumber::root(&field, j as i64).sub(&one).inv().map(Some) })
        .collect::<Result<_>>()?;
    let mut acc = CyclotomicNumber::zero(&field);
    for s1 in 1..a1 {
        for s2 in 1..a2 {
            let (y1, y2) = (s1 * (n / a1), s2 * (n / a2));
            if (c1 as i128 * y1 as i128 + c2 as i128 * y2 as i128).rem_euclid(n as i128) != 0 {
                continue;
            }
            acc = acc.add(&inv[y1 as usize].as_ref().unwrap().mul(inv[y2 as usize].as_ref().unwrap()));
        }
    }
    rationalize(&acc).map_err(|e| Error::InternalInconsistency(format!("pair sum: {}", e)))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{e8, single};
    use super::*;
    use crate::exact_core::q;

    fn chain(eulers: &[i64]) -> PlumbingGraph {
        let mut g = PlumbingGraph::new();
        for (i, e) in eulers.iter().enumerate() {
            g.add_vertex(i.to_string(), *e);
        }
        for i in 1..eulers.len() {
            g.add_edge((i - 1).to_string(), i.to_string());
        }
        g
    }

    /// Star with center −b and arms given by Euler number chains.
    pub(crate) fn star(b: i64, arms: &[&[i64]]) -> PlumbingGraph {
        let mut g = PlumbingGraph::new();
        g.add_vertex("O", -b);
        for (j, arm) in arms.iter().enumerate() {
            let mut prev = "O".to_string();
            for (i, e) in arm.iter().enumerate() {
                let id = format!("{}_{}", j, i);
                g.add_vertex(id.clone(), *e);
                g.add_edge(prev, id.clone());
                prev = id;
            }
        }
        g
    }

    #[test]
    fn characters_enumerate_the_group() {
        let all: Vec<_> = Characters::new(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(Characters::nontrivial(&[2, 3]).count(), 5);
        assert_eq!(Characters::new(&[]).count(), 1);
    }

    #[test]
    fn small_examples() {
        assert_eq!(torsion_sigma_can(&e8()).unwrap(), q(0, 1));
        assert_eq!(torsion_sigma_can(&single(-2)).unwrap(), q(1, 8));
        // Lens space L(p,1): (1/p)·Σ_{ζ≠1} (ζ − 1)^{−2}.
        for p in 2..9i64 {
            let expected = q(-(p - 1) * (p - 5), 12 * p);
            assert_eq!(torsion_sigma_can(&single(-p)).unwrap(), expected, "p = {}", p);
        }
    }

    #[test]
    fn chain_values_are_rational_and_base_independent() {
        for g in [chain(&[-2, -2]), chain(&[-3, -2, -4]), star(2, &[&[-2], &[-3], &[-3, -2]])] {
            let hom = homology(&g).unwrap();
            let lk = LinkingForm::of(&g).unwrap();
            let mut ev = LimitEvaluator::new(&g, &lk, hom.exponent());
            for k in Characters::nontrivial(&hom.invariant_factors) {
                let angles = character_angles(&hom, &k);
                let bases = ev.admissible_bases(&angles);
                let first = ev.limit(&angles, Some(bases[0])).unwrap();
                for u in bases {
                    assert_eq!(ev.limit(&angles, Some(u)).unwrap(), first);
                }
            }
            torsion_sigma_can(&g).unwrap();
        }
    }

    #[test]
    fn star_route_matches_enumeration() {
        let cases = [
            star(1, &[&[-2], &[-3], &[-7]]),
            star(2, &[&[-2], &[-2], &[-3]]),
            star(2, &[&[-3], &[-3], &[-3]]),
            star(2, &[&[-3], &[-3], &[-3], &[-3]]),
            star(3, &[&[-2, -2], &[-3], &[-5], &[-2]]),
            star(1, &[&[-2], &[-4], &[-5]]),
            star(2, &[&[-2], &[-2], &[-2], &[-3]]),
        ];
        for g in cases {
            let shape = StarShape::detect(&g).unwrap();
            let brute = torsion_by_enumeration(&g).unwrap();
            assert_eq!(star_torsion(&g, &shape, 1_000_000).unwrap(), brute, "{:?}", super::super::serialize_graph(&g));
        }
    }
}
