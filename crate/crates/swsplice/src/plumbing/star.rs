//! Star-shaped plumbing graphs of the Brieskorn spheres `Σ(p, a, m)`.
//!
//! With `d = gcd(m, p)` and `gcd(m, a) = 1` the Seifert invariants are
//! `m/d, p/d` and `d` copies of `a`, and the orbifold Euler number is
//! `−d²/(mpa)`. When instead `gcd(m, a) > 1` the roles of `p` and `a` swap.
//! Arms with `α = 1` are dropped.

use num_integer::Integer;
use num_traits::One;

use super::{LinkingForm, PlumbingGraph, TreeFactor};
use crate::error::{Error, Result};
use crate::exact_core::{q, Rational};

/// One arm: Seifert pair `(α, ω)` and its chain of Euler numbers, center outwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarArm {
    pub alpha: u64,
    pub omega: u64,
    pub eulers: Vec<i64>,
    pub ids: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarGraph {
    pub graph: PlumbingGraph,
    /// The central vertex carries `−b`.
    pub b: i64,
    pub arms: Vec<StarArm>,
    /// Vertex representing each of the repeated arms' knots `K_i`: the arm end,
    /// or the center when that arm is empty.
    pub knots: Vec<String>,
    /// `(P, A, D)`: the roles of `p`, `a` and `d` after the possible swap.
    pub roles: (u64, u64, u64),
}

/// `α/ω = [b_1, …, b_s] = b_1 − 1/(b_2 − …)` with all `b_i ≥ 2`.
pub fn negative_continued_fraction(alpha: u64, omega: u64) -> Vec<i64> {
    assert!(0 < omega && omega < alpha && alpha.gcd(&omega) == 1, "need 0 < ω < α coprime");
    let (mut x, mut y) = (alpha as i64, omega as i64);
    let mut out = Vec::new();
    while y > 0 {
        let b = Integer::div_ceil(&x, &y);
        out.push(b);
        let r = b * y - x;
        x = y;
        y = r;
    }
    out
}

fn build(b: i64, arms: &[(u64, u64)], repeated_from: usize) -> (PlumbingGraph, Vec<StarArm>, Vec<String>) {
    let mut g = PlumbingGraph::new();
    g.add_vertex("O", -b);
    let mut out = Vec::new();
    let mut knots = Vec::new();
    for (j, &(alpha, omega)) in arms.iter().enumerate() {
        let name = match j {
            0 => "Z".to_string(),
            1 => "X".to_string(),
            _ => format!("K{}_", j - 1),
        };
        if alpha == 1 {
            out.push(StarArm { alpha, omega: 0, eulers: vec![], ids: vec![] });
            if j >= repeated_from {
                knots.push("O".to_string());
            }
            continue;
        }
        let eulers: Vec<i64> = negative_continued_fraction(alpha, omega).into_iter().map(|x| -x).collect();
        let mut prev = "O".to_string();
        let mut ids = Vec::new();
        for (i, e) in eulers.iter().enumerate() {
            let id = format!("{}{}", name, i + 1);
            g.add_vertex(id.clone(), *e);
            g.add_edge(prev, id.clone());
            prev = id.clone();
            ids.push(id);
        }
        if j >= repeated_from {
            knots.push(prev);
        }
        out.push(StarArm { alpha, omega, eulers, ids });
    }
    (g, out, knots)
}

/// The plumbing graph of `Σ(p, a, m)`.
///
/// The `ω`s are searched exhaustively, with one common `ω` on the repeated
/// arms; `b` is then forced by the Euler number. Each candidate must be
/// negative definite and reproduce the linking table
/// `Lk(O,O) = mPA/D²`, `Lk(K_i,K_j) = mP/(D²A)` for `i ≠ j`, `Lk(K_i,O) = mP/D²`.
pub fn seifert_star_graph(p: u64, a: u64, m: u64) -> Result<StarGraph> {
    if p == 0 || a == 0 || m == 0 {
        return Err(Error::InvalidInput("p, a, m must be positive".into()));
    }
    if p.gcd(&a) != 1 {
        return Err(Error::InvalidInput(format!("gcd(p, a) = gcd({}, {}) != 1", p, a)));
    }
    let (d, dt) = (m.gcd(&p), m.gcd(&a));
    if d > 1 && dt > 1 {
        return Err(Error::NotRationalHomologySphere(format!("gcd(m,p) = {} and gcd(m,a) = {}", d, dt)));
    }
    let (pp, aa, dd) = if dt == 1 { (p, a, d) } else { (a, p, dt) };
    let mut arms_shape = vec![m / dd, pp / dd];
    arms_shape.extend(std::iter::repeat(aa).take(dd as usize));
    let mpa = (m * pp * aa) as i64;
    let euler = q(-((dd * dd) as i64), mpa);
    let lk_oo = q(mpa, (dd * dd) as i64);
    let lk_kk = q((m * pp) as i64, (dd * dd * aa) as i64);
    let lk_ko = q((m * pp) as i64, (dd * dd) as i64);

    let omegas = |alpha: u64| -> Vec<u64> {
        if alpha == 1 {
            vec![0]
        } else {
            (1..alpha).filter(|w| w.gcd(&alpha) == 1).collect()
        }
    };
    let mut found: Vec<StarGraph> = Vec::new();
    for &wz in &omegas(arms_shape[0]) {
        for &wx in &omegas(arms_shape[1]) {
            for &wa in &omegas(aa) {
                let mut arms = vec![(arms_shape[0], wz), (arms_shape[1], wx)];
                arms.extend(std::iter::repeat((aa, wa)).take(dd as usize));
                let sum: Rational = arms.iter().map(|&(al, w)| q(w as i64, al as i64)).sum();
                let b = sum - &euler;
                if !b.is_integer() || b < Rational::one() {
                    continue;
                }
                let b = b.to_integer().try_into().map_err(|_| Error::InvalidInput("b too large".into()))?;
                let (g, star_arms, knots) = build(b, &arms, 2);
                let Some(f) = TreeFactor::new(&g) else { continue };
                if !f.negative_definite() {
                    continue;
                }
                let lk = LinkingForm::of(&g)?;
                let o = g.index_of("O").unwrap();
                let ks: Vec<usize> = knots.iter().map(|k| g.index_of(k).unwrap()).collect();
                let mut ok = lk.entry(o, o) == lk_oo;
                for (i, &ki) in ks.iter().enumerate() {
                    if !ok {
                        break;
                    }
                    let col = lk.column(ki);
                    ok &= col[o] == lk_ko;
                    for (j, &kj) in ks.iter().enumerate() {
                        if i != j {
                            ok &= col[kj] == lk_kk;
                        }
                    }
                }
                if ok {
                    found.push(StarGraph { graph: g, b, arms: star_arms, knots, roles: (pp, aa, dd) });
                }
            }
        }
    }
    match found.len() {
        0 => Err(Error::NoConsistentSeifertForm(format!("Σ({}, {}, {})", p, a, m))),
        1 => Ok(found.pop().unwrap()),
        k => Err(Error::AmbiguousSeifertForm(format!("Σ({}, {}, {}): {} candidates", p, a, m, k))),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{homology, intersection_matrix, torsion_sigma_can};
    use super::*;
    use crate::exact_core::qi;
    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};

    /// `|det I|` of a star graph from its Seifert data: `Π α_j · |e|`.
    fn star_determinant(s: &StarGraph) -> Rational {
        let prod: Rational = s.arms.iter().map(|arm| qi(arm.alpha)).product();
        let e: Rational = s.arms.iter().map(|arm| q(arm.omega as i64, arm.alpha as i64)).sum::<Rational>() - qi(s.b);
        (prod * e).abs()
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(negative_continued_fraction(5, 4), vec![2, 2, 2, 2]);
        assert_eq!(negative_continued_fraction(3, 2), vec![2, 2]);
        assert_eq!(negative_continued_fraction(2, 1), vec![2]);
        assert_eq!(negative_continued_fraction(7, 3), vec![3, 2, 2]);
        assert_eq!(negative_continued_fraction(7, 1), vec![7]);
    }

    #[test]
    fn e8_from_235() {
        let s = seifert_star_graph(2, 3, 5).unwrap();
        assert_eq!(s.b, 2);
        let mut eulers: Vec<i64> = s.graph.vertices().iter().map(|(_, e)| *e).collect();
        eulers.sort();
        assert_eq!(eulers, vec![-2; 8]);
        let f = intersection_matrix(&s.graph).unwrap();
        assert_eq!(f.det.abs(), BigInt::from(1));
        assert!(f.negative_definite);
    }

    #[test]
    fn sigma_234() {
        let s = seifert_star_graph(2, 3, 4).unwrap();
        assert_eq!(intersection_matrix(&s.graph).unwrap().det.abs(), BigInt::from(3));
        assert_eq!(homology(&s.graph).unwrap().invariant_factors, vec![3]);
        assert_eq!(torsion_sigma_can(&s.graph).unwrap(), q(4, 9));
        assert_eq!(star_determinant(&s), qi(3));
    }

    #[test]
    fn sphere_from_231() {
        let s = seifert_star_graph(2, 3, 1).unwrap();
        assert_eq!(intersection_matrix(&s.graph).unwrap().det.abs(), BigInt::from(1));
        assert_eq!(torsion_sigma_can(&s.graph).unwrap(), Rational::zero());
    }

    #[test]
    fn symmetric_branch() {
        let s = seifert_star_graph(3, 2, 4).unwrap();
        assert_eq!(s.roles, (2, 3, 2));
        assert_eq!(torsion_sigma_can(&s.graph).unwrap(), q(4, 9));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(seifert_star_graph(6, 10, 15), Err(Error::InvalidInput(_))));
        assert!(matches!(seifert_star_graph(2, 3, 6), Err(Error::NotRationalHomologySphere(_))));
    }
}
