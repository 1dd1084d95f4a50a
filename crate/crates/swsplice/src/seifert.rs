//! Brieskorn spheres `Σ(p, a, m)`: Seifert data, signature, torsion and `sw⁰`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_core::{q, qi, Rational};

/// Invariants of `Σ(p, a, m)`, the link of `x^p + y^a + z^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrieskornData {
    pub p: u64,
    pub a: u64,
    pub m: u64,
    /// `gcd(m, p)`.
    pub d: u64,
    /// `gcd(m, a)`.
    pub d_tilde: u64,
    pub orbifold_e: Rational,
    pub h1_order: BigInt,
    pub sigma: i64,
    pub torsion_at_1: Rational,
    pub sw0: Rational,
    pub lambda_w: Rational,
}

fn check_qhs(p: u64, a: u64, m: u64) -> Result<(u64, u64)> {
    if p == 0 || a == 0 || m == 0 {
        return Err(Error::InvalidInput("p, a, m must be positive".into()));
    }
    if p.gcd(&a) != 1 {
        return Err(Error::InvalidInput(format!("gcd(p, a) = gcd({}, {}) != 1", p, a)));
    }
    let (d, dt) = (m.gcd(&p), m.gcd(&a));
    if d > 1 && dt > 1 {
        return Err(Error::NotRationalHomologySphere(format!(
            "Σ({}, {}, {}): gcd(m,p) = {} and gcd(m,a) = {}",
            p, a, m, d, dt
        )));
    }
    Ok((d, dt))
}

/// # Examples
///
/// ```
/// use swsplice::seifert::brieskorn_data;
/// use swsplice::exact_core::q;
/// let b = brieskorn_data(2, 3, 4).unwrap();
/// assert_eq!((b.d, b.h1_order.clone(), b.orbifold_e.clone()), (2, 3.into(), q(-1, 6)));
/// ```
pub fn brieskorn_data(p: u64, a: u64, m: u64) -> Result<BrieskornData> {
    let (d, dt) = check_qhs(p, a, m)?;
    let big_d = d.max(dt);
    let orbifold_e = q(-((big_d * big_d) as i64), (m * p * a) as i64);
    let h1_order = if dt == 1 { BigInt::from(a).pow(d as u32 - 1) } else { BigInt::from(p).pow(dt as u32 - 1) };
    let sigma = brieskorn_signature(p, a, m)?;
    let torsion_at_1 = torsion_closed_form(p, a, m)?;
    let mut data = BrieskornData {
        p,
        a,
        m,
        d,
        d_tilde: dt,
        orbifold_e,
        h1_order,
        sigma,
        torsion_at_1,
        sw0: Rational::zero(),
        lambda_w: Rational::zero(),
    };
    let (sw0, lw) = sw0_and_casson_walker(&data);
    data.sw0 = sw0;
    data.lambda_w = lw;
    Ok(data)
}

/// Parity of `⌊N/D⌋`, or an error when `N/D` is an integer.
fn epsilon(num: i128, den: i128) -> Result<i64> {
    if num.rem_euclid(den) == 0 {
        return Err(Error::PreconditionViolated(format!("signature sum hits the integer {}", num / den)));
    }
    Ok(if num.div_euclid(den) % 2 == 0 { 1 } else { -1 })
}

/// `σ = Σ ε(i/p + j/a + k/m)` over `0 < i < p`, `0 < j < a`, `0 < k < m`,
/// where `ε(x) = +1` if `x mod 2 ∈ (0,1)` and `−1` if it lies in `(1,2)`.
///
/// The sum is symmetric, so the largest entry plays the role of `m`; the
/// sum over `k` is counted in closed form and the cost is the product of the
/// two smaller entries.
///
/// ```
/// use swsplice::seifert::brieskorn_signature;
/// assert_eq!(brieskorn_signature(2, 3, 5).unwrap(), -8);
/// assert_eq!(brieskorn_signature(2, 15, 2).unwrap(), -14);
/// ```
pub fn brieskorn_signature(p: u64, a: u64, m: u64) -> Result<i64> {
    if p == 0 || a == 0 || m == 0 {
        return Err(Error::InvalidInput("p, a, m must be positive".into()));
    }
    let mut v = [p as i128, a as i128, m as i128];
    v.sort_unstable();
    let [p, a, m] = v;
    let mut sigma: i64 = 0;
    for i in 1..p {
        for j in 1..a {
            // i/p + j/a + k/m = (c + k)/m with c = m(ia + jp)/(pa) = c0 + f, 0 ≤ f < 1.
            let cn = m * (i * a + j * p);
            let cd = p * a;
            let c0 = cn.div_euclid(cd);
            let exact = cn.rem_euclid(cd) == 0;
            // n runs over c0+1 ..= c0+m−1; the sign is + when ⌊n/m⌋ is even.
            let (lo, hi) = (c0 + 1, c0 + m - 1);
            if lo > hi {
                continue;
            }
            if exact && (hi.div_euclid(m) != (lo - 1).div_euclid(m)) {
                return Err(Error::PreconditionViolated(format!("signature sum hits an integer at i={}, j={}", i, j)));
            }
            sigma += (count_even_floor(hi, m) - count_even_floor(lo - 1, m)) as i64 * 2 - (hi - lo + 1) as i64;
        }
    }
    Ok(sigma)
}

/// `#{0 ≤ n ≤ x : ⌊n/m⌋ even}` for `x ≥ 0`.
fn count_even_floor(x: i128, m: i128) -> i128 {
    let full = (x + 1) / (2 * m);
    let rest = (x + 1) % (2 * m);
    full * m + rest.min(m)
}

/// The defining triple sum, evaluated term by term.
pub fn brieskorn_signature_naive(p: u64, a: u64, m: u64) -> Result<i64> {
    let (p, a, m) = (p as i128, a as i128, m as i128);
    let den = p * a * m;
    let mut s = 0;
    for i in 1..p {
        for j in 1..a {
            for k in 1..m {
                s += epsilon(i * a * m + j * p * m + k * p * a, den)?;
            }
        }
    }
    Ok(s)
}

/// `T_{Σ,σcan}(1)`: `mp(d−1)(a²−1)/(24da)` when `gcd(m,a) = 1`, and the same
/// with `p`, `a` swapped when `gcd(m,p) = 1`.
///
/// ```
/// use swsplice::seifert::torsion_closed_form;
/// use swsplice::exact_core::q;
/// assert_eq!(torsion_closed_form(2, 3, 4).unwrap(), q(4, 9));
/// assert_eq!(torsion_closed_form(3, 2, 4).unwrap(), q(4, 9));
/// ```
pub fn torsion_closed_form(p: u64, a: u64, m: u64) -> Result<Rational> {
    let (d, dt) = check_qhs(p, a, m)?;
    let f = |p: u64, a: u64, d: u64| {
        let num = BigInt::from(m) * p * (d - 1) * (a * a - 1);
        Rational::new(num, BigInt::from(24 * d * a))
    };
    Ok(if dt == 1 { f(p, a, d) } else { f(a, p, dt) })
}

/// `sw⁰ = −σ/8` and `λ_W = 2(T(1) − sw⁰)`.
pub fn sw0_and_casson_walker(data: &BrieskornData) -> (Rational, Rational) {
    let sw0 = q(-data.sigma, 8);
    let lw = qi(2) * (&data.torsion_at_1 - &sw0);
    (sw0, lw)
}

/// `μ = (p−1)(a−1)(m−1)`.
pub fn milnor_number(p: u64, a: u64, m: u64) -> u64 {
    (p - 1) * (a - 1) * (m - 1)
}

/// `λ_W(Σ(p,a,m))` directly from `(p, a, m)`.
pub fn casson_walker(p: u64, a: u64, m: u64) -> Result<Rational> {
    Ok(brieskorn_data(p, a, m)?.lambda_w)
}

/// `sw⁰(Σ(p,a,m)) = −σ/8`.
pub fn sw0(p: u64, a: u64, m: u64) -> Result<Rational> {
    check_qhs(p, a, m)?;
    Ok(q(-brieskorn_signature(p, a, m)?, 8))
}

/// `|H_1|` as a rational, `1` for an integral homology sphere.
pub fn h1_order(p: u64, a: u64, m: u64) -> Result<Rational> {
    Ok(Rational::from_integer(brieskorn_data(p, a, m)?.h1_order))
}

impl BrieskornData {
    pub fn is_integral_homology_sphere(&self) -> bool {
        self.h1_order.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plumbing::{intersection_matrix, seifert_star_graph, torsion_sigma_can};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let b = brieskorn_data(2, 3, 5).unwrap();
        assert_eq!((b.d, b.d_tilde, b.h1_order.clone(), b.orbifold_e.clone()), (1, 1, BigInt::from(1), q(-1, 30)));
        assert_eq!((b.sigma, b.sw0.clone(), b.lambda_w.clone()), (-8, q(1, 1), q(-2, 1)));
        let b = brieskorn_data(2, 3, 4).unwrap();
        assert_eq!((b.d, b.h1_order.clone(), b.orbifold_e.clone()), (2, BigInt::from(3), q(-1, 6)));
        assert!(matches!(brieskorn_data(6, 10, 15), Err(Error::InvalidInput(_))));
        assert!(matches!(brieskorn_data(2, 3, 6), Err(Error::NotRationalHomologySphere(_))));
        let b = brieskorn_data(2, 3, 1).unwrap();
        assert_eq!((b.sigma, b.sw0.clone(), b.lambda_w.clone()), (0, q(0, 1), q(0, 1)));
        assert_eq!(brieskorn_data(2, 15, 2).unwrap().sw0, q(7, 4));
        assert_eq!(torsion_closed_form(2, 3, 5).unwrap(), q(0, 1));
    }

    #[test]
    fn signature_oracle_values() {
        assert_eq!(brieskorn_signature(2, 3, 5).unwrap(), -8);
        assert_eq!(brieskorn_signature(2, 3, 1).unwrap(), 0);
        assert_eq!(brieskorn_signature(2, 15, 2).unwrap(), -14);
        assert_eq!(brieskorn_signature(2, 3, 7).unwrap(), -8);
        assert_eq!(brieskorn_signature(2, 3, 11).unwrap(), -16);
    }

    #[test]
    fn fast_signature_matches_triple_sum() {
        for p in 1..9 {
            for a in 1..9 {
                for m in 1..13 {
                    let naive = brieskorn_signature_naive(p, a, m);
                    let fast = brieskorn_signature(p, a, m);
                    match (naive, fast) {
                        (Ok(x), Ok(y)) => assert_eq!(x, y, "({}, {}, {})", p, a, m),
                        (Err(_), Err(_)) => {}
                        other => panic!("({}, {}, {}): {:?}", p, a, m, other),
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_torsion_matches_plumbing_small() {
        for p in 2..7u64 {
            for a in 2..7u64 {
                for m in 1..9u64 {
                    let Ok(data) = brieskorn_data(p, a, m) else { continue };
                    let s = seifert_star_graph(p, a, m).unwrap();
                    let det = intersection_matrix(&s.graph).unwrap().det;
                    assert_eq!(det.magnitude(), data.h1_order.magnitude(), "({}, {}, {})", p, a, m);
                    assert_eq!(torsion_sigma_can(&s.graph).unwrap(), data.torsion_at_1, "({}, {}, {})", p, a, m);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn signature_is_symmetric(p in 1u64..12, a in 1u64..12, m in 1u64..12) {
            let s = brieskorn_signature(p, a, m);
            prop_assume!(s.is_ok());
            let s = s.unwrap();
            prop_assert_eq!(brieskorn_signature(a, p, m).unwrap(), s);
            prop_assert_eq!(brieskorn_signature(m, a, p).unwrap(), s);
            prop_assert_eq!(brieskorn_signature(p, m, a).unwrap(), s);
        }

        #[test]
        fn signature_vanishes_with_a_one(p in 1u64..30, a in 1u64..30) {
            prop_assert_eq!(brieskorn_signature(p, a, 1).unwrap(), 0);
            prop_assert_eq!(brieskorn_signature(1, p, a).unwrap(), 0);
        }

        #[test]
        fn sw0_assembly(p in 2u64..12, a in 2u64..12, m in 1u64..30) {
            let Ok(b) = brieskorn_data(p, a, m) else { return Ok(()) };
            prop_assert_eq!(&b.sw0, &(&b.torsion_at_1 - &b.lambda_w / qi(2)));
            prop_assert_eq!(&b.sw0 * qi(-8), qi(b.sigma));
        }
    }
}
