use num_bigint::BigInt;
use num_rational::BigRational;
use super::Rational;

/// `s(q, p) = Σ_{i=1}^{p−1} ((i/p))((q·i/p))`, by the defining sum.
///
/// ```
/// use swsplice::exact_core::{dedekind_sum, q};
/// assert_eq!(dedekind_sum(1, 3), q(1, 18));
/// assert_eq!(dedekind_sum(5, 1), q(0, 1));
/// ```
pub fn dedekind_sum(q: i64, p: i64) -> Rational {
    assert!(p >= 1, "dedekind_sum needs p >= 1");
    // Accumulate over the common denominator 4p² then reduce once.
    let mut acc: i128 = 0;
    for i in 1..p {
        let a = (i % p) as i128;
        let b = ((q as i128 * i as i128).rem_euclid(p as i128)) as i128;
        if a == 0 || b == 0 {
            continue;
        }
        acc += (2 * a - p as i128) * (2 * b - p as i128);
    }
    BigRational::new(BigInt::from(acc), BigInt::from(4 * (p as i128) * (p as i128)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::q;
    use num_integer::Integer;
    use num_traits::Zero;

    /// Sawtooth `((x))` for `x = num/den`, `den > 0`.
    fn sawtooth(num: i64, den: i64) -> Rational {
        let r = num.rem_euclid(den);
        if r == 0 {
            Rational::zero()
        } else {
            BigRational::new(BigInt::from(2 * r - den), BigInt::from(2 * den))
        }
    }

    fn dedekind_oracle(qq: i64, p: i64) -> Rational {
        let mut s = Rational::zero();
        for i in 1..p {
            s += sawtooth(i, p) * sawtooth(qq * i, p);
        }
        s
    }

    #[test]
    fn small_values() {
        assert_eq!(dedekind_sum(1, 1), q(0, 1));
        assert_eq!(dedekind_sum(1, 3), q(1, 18));
        assert_eq!(dedekind_sum(2, 3), q(-1, 18));
        assert_eq!(dedekind_sum(-1, 3), q(-1, 18));
    }

    #[test]
    fn matches_sawtooth_oracle() {
        for p in 1..40 {
            for qq in -45..45 {
                assert_eq!(dedekind_sum(qq, p), dedekind_oracle(qq, p), "s({qq},{p})");
            }
        }
    }

    #[test]
    fn reciprocity_spot_checks() {
        for p in 2..60i64 {
            for qq in 1..p {
                if qq.gcd(&p) != 1 {
                    continue;
                }
                let lhs = dedekind_sum(qq, p) + dedekind_sum(p, qq);
                let rhs = q(-1, 4) + (q(p, qq) + q(qq, p) + q(1, p * qq)) / q(12, 1);
                assert_eq!(lhs, rhs);
            }
        }
    }
}
