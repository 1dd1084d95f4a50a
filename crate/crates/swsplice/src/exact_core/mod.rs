//! Exact arithmetic: rationals, integer Laurent polynomials, rational
//! functions, Smith normal form, Dedekind sums and cyclotomic fields.

mod binomial;
mod cyclotomic;
mod dedekind;
pub(crate) mod poly;
mod ratfunc;
pub(crate) mod snf;

pub use binomial::BinomialProduct;
pub use cyclotomic::{eval_at_root_of_unity, eval_in_field, rationalize, CyclotomicField, CyclotomicNumber};
pub use dedekind::dedekind_sum;
pub use poly::{second_derivative_at_1, IntLaurentPolynomial};
pub use ratfunc::{normalize_rational_function, RationalFunction};
pub use snf::{smith_normal_form, IntMatrix, SmithDecomposition};

use num_bigint::BigInt;
use num_rational::BigRational;

/// The rational number type used throughout the crate.
pub type Rational = BigRational;

/// `num/den` as a [`Rational`]. Panics if `den == 0`.
pub fn q(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// An integer as a [`Rational`].
pub fn qi<T: Into<BigInt>>(n: T) -> Rational {
    BigRational::from_integer(n.into())
}

/// Renders a rational as `num/den` (denominator always shown).
pub fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses the `num/den` (or plain integer) form produced by [`fmt_rational`].
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(a, b))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_roundtrip() {
        for x in [q(3, 4), q(-7, 2), q(0, 5), q(12, 1)] {
            assert_eq!(parse_rational(&fmt_rational(&x)), Some(x));
        }
        assert_eq!(fmt_rational(&q(6, 3)), "2/1");
        assert_eq!(parse_rational("5"), Some(q(5, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
