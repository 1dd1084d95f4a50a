//! The averaged Alexander invariant `Δ^H_M(K_z)` of the knot `{z = 0}` in the
//! link of `f + z^n`, for towers with every `h̃_l = 1`.
//!
//! The graph of `(M, K_z)` is used only through its vertices with
//! `δ̄ ≠ 2`, which sit above the nodes `v_k` and the ends `v̄_k` of the graph
//! of `(S³, K_f)`. Above `v_k` there are `h_{k+1}⋯h_s` vertices with
//! `δ̄ = h_k + 2`; above `v̄_k` and `v̄_0` the vertices have `δ̄ = 1`. A vertex
//! above `v` carries the weight `w_v/gcd(w_v, n)`.
//!
//! Characters are tuples of roots of unity `ξ_{i_k…i_s} ∈ Z_{a_k}` with
//! `Π_{i_k} ξ_{i_k…i_s} = 1`, so `H` is a product of blocks
//! `Z_{a_k}^{h_k}/diagonal`, one per level `k` with `h_k > 1` and per index
//! `(i_{k+1},…,i_s)`. Each vertex class `v` then defines an element `g_v ∈ H`.
//!
//! The sum over characters is done by orthogonality: expanding
//! `(t − 1)·Π_v (t^{w_v} g_v − 1)^{δ̄_v − 2}` as a power series in `t` with
//! coefficients in the group ring `Z[H]`, the average over `Ĥ` is the
//! coefficient of the identity. Comparing with `Δ(f)` up to a degree past the
//! common denominator proves equality of rational functions.

use std::collections::HashMap;

use num_integer::Integer;

use super::TowerSkeleton;
use crate::error::{Error, Result};
use crate::plane_curve::{alexander_coefficients, derive_curve_invariants};

/// Default limit on `(series length)·|H|·(number of factors)`.
pub const DEFAULT_AVERAGE_BOUND: u128 = 2_000_000;

/// Outcome of the comparison `Δ^H_M(K_z) = Δ(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragedAlexander {
    pub holds: bool,
    pub h1_order: u64,
    /// Length of the compared power series.
    pub series_length: usize,
    /// Coefficients of `Δ^H_M(K_z)` (trailing zeros dropped).
    pub averaged: Vec<i128>,
    pub expected: Vec<i64>,
}

/// One vertex class: `(t^weight·g − 1)^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Factor {
    pub weight: u64,
    pub exponent: i64,
    pub element: Vec<u64>,
}

/// `H` as `Π Z_{moduli[i]}` and the vertex classes with `δ̄ ≠ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Schematic {
    pub moduli: Vec<u64>,
    pub factors: Vec<Factor>,
}

impl Schematic {
    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    fn encode(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.moduli).fold(0usize, |acc, (&c, &m)| acc * m as usize + c as usize)
    }

    fn decode(&self, mut i: usize, out: &mut [u64]) {
        for (slot, &m) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = (i % m as usize) as u64;
            i /= m as usize;
        }
    }

    /// Order of an element.
    fn element_order(&self, g: &[u64]) -> u64 {
        g.iter().zip(&self.moduli).fold(1u64, |acc, (&c, &m)| acc.lcm(&(m / m.gcd(&c))))
    }
}

/// All index tuples in `Π [0, radix_i)`, last index fastest.
fn index_tuples(radices: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r).map(move |i| {
                    let mut v = prefix.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

pub(crate) fn schematic(t: &TowerSkeleton) -> Result<Schematic> {
    let s = t.s();
    if let Some(l) = (1..=s).find(|&l| t.h_tilde(l) != 1) {
        return Err(Error::UnsupportedTower(format!(
            "h̃_{} = {}; the character table is only available when every h̃_l = 1",
            l,
            t.h_tilde(l)
        )));
    }
    let inv = derive_curve_invariants(&t.newton_pairs)?;
    let hs: Vec<u64> = (1..=s).map(|l| t.h(l)).collect();
    // Blocks: for level j (1-based) with h_j > 1 and each tail (i_{j+1..s}).
    let mut moduli = Vec::new();
    let mut block_offset: HashMap<(usize, Vec<u64>), usize> = HashMap::new();
    for j in 1..=s {
        if t.h(j) == 1 {
            continue;
        }
        for tail in index_tuples(&hs[j..]) {
            block_offset.insert((j, tail), moduli.len());
            moduli.extend(std::iter::repeat(t.a(j)).take(t.h(j) as usize - 1));
        }
    }
    let dim = moduli.len();
    // Adds c·(generator ξ_{i_j…i_s}) to g; `idx` is the full tail (i_j, …, i_s).
    let add_generator = |g: &mut Vec<u64>, j: usize, idx: &[u64], c: u64| {
        let hj = t.h(j);
        if hj == 1 {
            return;
        }
        let aj = t.a(j);
        let c = c % aj;
        let off = block_offset[&(j, idx[1..].to_vec())];
        let i = idx[0];
        if i < hj - 1 {
            g[off + i as usize] = (g[off + i as usize] + c) % aj;
        } else {
            for slot in &mut g[off..off + hj as usize - 1] {
                *slot = (*slot + aj - c) % aj;
            }
        }
    };
    let pprime = |i: usize| t.p(i) / t.h(i);
    let reduce = |w: u64| w / w.gcd(&t.n);
    let mut factors = vec![Factor { weight: 1, exponent: 1, element: vec![0; dim] }];
    for k in 1..=s {
        for tail in index_tuples(&hs[k..]) {
            // tail = (i_{k+1}, …, i_s); the generator at level j uses tail[j-k-1..].
            let mut node = vec![0u64; dim];
            let mut end = vec![0u64; dim];
            for j in k + 1..=s {
                let idx = &tail[j - k - 1..];
                let mut c_end = t.a(k) as u128;
                for i in k + 1..j {
                    c_end = c_end * pprime(i) as u128 % t.a(j) as u128;
                }
                let c_node = c_end * pprime(k) as u128 % t.a(j) as u128;
                add_generator(&mut node, j, idx, c_node as u64);
                add_generator(&mut end, j, idx, c_end as u64);
            }
            factors.push(Factor { weight: reduce(inv.weights.v[k - 1]), exponent: t.h(k) as i64, element: node });
            factors.push(Factor { weight: reduce(inv.weights.vbar[k]), exponent: -1, element: end });
        }
    }
    for idx in index_tuples(&hs) {
        let mut g = vec![0u64; dim];
        for j in 1..=s {
            let mut c = 1u128;
            for i in 1..j {
                c = c * pprime(i) as u128 % t.a(j) as u128;
            }
            add_generator(&mut g, j, &idx[j - 1..], c as u64);
        }
        factors.push(Factor { weight: reduce(inv.weights.vbar[0]), exponent: -1, element: g });
    }
    Ok(Schematic { moduli, factors })
}

fn overflow() -> Error {
    Error::PreconditionViolated("series coefficient overflows i128".into())
}

/// Checks `Δ^H_M(K_z)(t) = Δ_{S³}(K_f)(t)` exactly.
///
/// Errors with `UnsupportedTower` if some `h̃_l ≠ 1` and with
/// `WorkBoundExceeded` when the series computation would exceed `bound`.
///
/// ```
/// use swsplice::plane_curve::NewtonPairs;
/// use swsplice::suspension::{averaged_alexander_check, tower_setup, DEFAULT_AVERAGE_BOUND};
/// let t = tower_setup(&"2:3".parse::<NewtonPairs>().unwrap(), 2).unwrap();
/// let r = averaged_alexander_check(&t, DEFAULT_AVERAGE_BOUND).unwrap();
/// assert!(r.holds);
/// assert_eq!(r.averaged, vec![1, -1, 1]);
/// ```
pub fn averaged_alexander_check(t: &TowerSkeleton, bound: u128) -> Result<AveragedAlexander> {
    let sch = schematic(t)?;
    let order = sch.order();
    let expected = alexander_coefficients(&t.newton_pairs, t.s())?;
    let mu = expected.len() as u128 - 1;
    let (mut den_degree, mut num_degree, mut multiplicity) = (0u128, 0u128, 0u128);
    for f in &sch.factors {
        multiplicity += f.exponent.unsigned_abs() as u128;
        if f.exponent < 0 {
            den_degree += f.weight as u128 * sch.element_order(&f.element) as u128 * f.exponent.unsigned_abs() as u128;
        } else {
            num_degree += f.weight as u128 * f.exponent as u128;
        }
    }
    let length = den_degree + num_degree.max(mu) + 1;
    let work = length.saturating_mul(order).saturating_mul(multiplicity);
    if work > bound {
        return Err(Error::WorkBoundExceeded { work, bound });
    }
    let (len, hn) = (length as usize, order as usize);
    // (x − 1)^e = (−1)^e (1 − x)^e
    let total: i64 = sch.factors.iter().map(|f| f.exponent).sum();
    let mut series = vec![0i128; len * hn];
    series[0] = if total % 2 == 0 { 1 } else { -1 };
    let mut shifts: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    let mut scratch = vec![0u64; sch.moduli.len()];
    for f in &sch.factors {
        let shift = shifts.entry(f.element.clone()).or_insert_with(|| {
            (0..hn)
                .map(|x| {
                    sch.decode(x, &mut scratch);
                    for ((c, &g), &m) in scratch.iter_mut().zip(&f.element).zip(&sch.moduli) {
                        *c = (*c + g) % m;
                    }
                    sch.encode(&scratch)
                })
                .collect()
        });
        let w = f.weight as usize;
        for _ in 0..f.exponent.unsigned_abs() {
            if f.exponent > 0 {
                // multiply by (1 − t^w g), top degree first
                for k in (w..len).rev() {
                    for x in 0..hn {
                        let v = series[(k - w) * hn + x];
                        if v != 0 {
                            let slot = &mut series[k * hn + shift[x]];
                            *slot = slot.checked_sub(v).ok_or_else(overflow)?;
                        }
                    }
                }
            } else {
                // divide by (1 − t^w g), bottom degree first
                for k in w..len {
                    for x in 0..hn {
                        let v = series[(k - w) * hn + x];
                        if v != 0 {
                            let slot = &mut series[k * hn + shift[x]];
                            *slot = slot.checked_add(v).ok_or_else(overflow)?;
                        }
                    }
                }
            }
        }
    }
    let identity = sch.encode(&vec![0; sch.moduli.len()]);
    let mut averaged: Vec<i128> = (0..len).map(|k| series[k * hn + identity]).collect();
    let holds = averaged.iter().enumerate().all(|(k, &c)| c == expected.get(k).copied().unwrap_or(0) as i128);
    while averaged.len() > 1 && averaged.last() == Some(&0) {
        averaged.pop();
    }
    let h1_order = u64::try_from(order).map_err(|_| Error::WorkBoundExceeded { work, bound })?;
    Ok(AveragedAlexander { holds, h1_order, series_length: len, averaged, expected })
}
