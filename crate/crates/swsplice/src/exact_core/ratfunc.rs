use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::IntLaurentPolynomial;
use super::Rational;
use crate::error::{Error, Result};

/// Quotient of two integer Laurent polynomials, kept in reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: IntLaurentPolynomial,
    denominator: IntLaurentPolynomial,
}

impl RationalFunction {
    /// Builds and reduces `num / den`.
    pub fn new(num: IntLaurentPolynomial, den: IntLaurentPolynomial) -> Result<Self> {
        normalize_rational_function(RationalFunction { numerator: num, denominator: den })
    }

    pub fn from_poly(p: IntLaurentPolynomial) -> Self {
        RationalFunction { numerator: p, denominator: IntLaurentPolynomial::one() }
    }

    pub fn numerator(&self) -> &IntLaurentPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntLaurentPolynomial {
        &self.denominator
    }

    /// The polynomial, when the reduced denominator is a unit monomial.
    pub fn as_polynomial(&self) -> Option<IntLaurentPolynomial> {
        let d = &self.denominator;
        if d.coefficients().len() == 1 && d.coefficients()[0].abs() == 1 {
            let c = d.coefficients()[0];
            let n = if c < 0 { -&self.numerator } else { self.numerator.clone() };
            Some(n.shift(-d.lowest_exponent()))
        } else {
            None
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Self::new(&self.numerator * &o.numerator, &self.denominator * &o.denominator)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Self::new(&self.numerator * &o.denominator, &self.denominator * &o.numerator)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Self::new(
            &(&self.numerator * &o.denominator) + &(&o.numerator * &self.denominator),
            &self.denominator * &o.denominator,
        )
    }

    /// Equality by cross multiplication.
    pub fn same_as(&self, o: &Self) -> bool {
        &self.numerator * &o.denominator == &o.numerator * &self.denominator
    }

    /// Exact value at a rational point that is not a pole.
    pub fn eval_rational(&self, x: &Rational) -> Option<Rational> {
        let d = self.denominator.eval_rational(x);
        if d.is_zero() {
            None
        } else {
            Some(self.numerator.eval_rational(x) / d)
        }
    }
}

/// Dense rational polynomial helpers used only for gcd computations.
fn qpoly_trim(p: &mut Vec<Rational>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn qpoly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    qpoly_trim(&mut r);
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() / &lb;
        let off = r.len() - b.len();
        for (j, c) in b.iter().enumerate() {
            r[off + j] -= &f * c;
        }
        r.pop();
        qpoly_trim(&mut r);
    }
    r
}

pub(crate) fn qpoly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    qpoly_trim(&mut x);
    qpoly_trim(&mut y);
    while !y.is_empty() {
        let r = qpoly_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Clears denominators and content of a rational polynomial, giving a primitive integer one.
fn primitive_integer(p: &[Rational]) -> IntLaurentPolynomial {
    let l = p.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().map_or(false, |c| c.is_negative()) { -1 } else { 1 };
    let coeffs = ints
        .iter()
        .map(|c| {
            let v = c / &g * sign;
            i128::try_from(v).expect("polynomial coefficient overflow")
        })
        .collect();
    IntLaurentPolynomial::new(0, coeffs)
}

fn content(p: &IntLaurentPolynomial) -> i128 {
    p.coefficients().iter().fold(0i128, |acc, &c| acc.gcd(&c))
}

/// Reduces a rational function: strips common powers of `t`, cancels the gcd
/// over `Q[t]`, removes common integer content and makes the denominator's
/// leading coefficient positive.
pub fn normalize_rational_function(f: RationalFunction) -> Result<RationalFunction> {
    let RationalFunction { numerator: num, denominator: den } = f;
    if den.is_zero() {
        return Err(Error::DivisionByZeroPolynomial);
    }
    if num.is_zero() {
        return Ok(RationalFunction { numerator: num, denominator: IntLaurentPolynomial::one() });
    }
    // Move everything to ordinary polynomials with nonzero constant terms.
    let shift = num.lowest_exponent() - den.lowest_exponent();
    let n0 = num.shift(-num.lowest_exponent());
    let d0 = den.shift(-den.lowest_exponent());
    let g = qpoly_gcd(&n0.to_rational_coeffs(), &d0.to_rational_coeffs());
    let (mut n1, mut d1) = if g.len() > 1 {
        let gi = primitive_integer(&g);
        // Gauss: a primitive factor over Q divides over Z.
        (
            n0.div_exact(&gi).expect("gcd must divide numerator"),
            d0.div_exact(&gi).expect("gcd must divide denominator"),
        )
    } else {
        (n0, d0)
    };
    let c = content(&n1).gcd(&content(&d1));
    if c > 1 {
        n1 = IntLaurentPolynomial::new(
            n1.lowest_exponent(),
            n1.coefficients().iter().map(|x| x / c).collect(),
        );
        d1 = IntLaurentPolynomial::new(
            d1.lowest_exponent(),
            d1.coefficients().iter().map(|x| x / c).collect(),
        );
    }
    if *d1.coefficients().last().unwrap() < 0 {
        n1 = -&n1;
        d1 = -&d1;
    }
    Ok(RationalFunction { numerator: n1.shift(shift), denominator: d1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::q;

    fn p(c: &[i128]) -> IntLaurentPolynomial {
        IntLaurentPolynomial::from_coeffs(c)
    }

    #[test]
    fn cancels_common_factor() {
        let f = RationalFunction::new(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(f.as_polynomial().unwrap(), p(&[1, 1]));
    }

    #[test]
    fn brieskorn_quotient_is_polynomial() {
        let t = IntLaurentPolynomial::t_pow_minus_one;
        let f = RationalFunction::new(&t(6) * &t(1), &t(2) * &t(3)).unwrap();
        assert_eq!(f.as_polynomial().unwrap(), p(&[1, -1, 1]));
    }

    #[test]
    fn zero_numerator_and_zero_denominator() {
        let f = RationalFunction::new(IntLaurentPolynomial::zero(), p(&[-1, 1])).unwrap();
        assert!(f.numerator().is_zero());
        assert_eq!(f.denominator(), &IntLaurentPolynomial::one());
        assert_eq!(
            RationalFunction::new(p(&[1]), IntLaurentPolynomial::zero()),
            Err(Error::DivisionByZeroPolynomial)
        );
    }

    #[test]
    fn sign_and_content_normalized() {
        let f = RationalFunction::new(p(&[2, 2]), p(&[-4])).unwrap();
        assert_eq!(f.numerator(), &p(&[-1, -1]));
        assert_eq!(f.denominator(), &p(&[2]));
        let g = RationalFunction::new(p(&[0, 0, 3]), p(&[0, 6, 6])).unwrap();
        assert_eq!(g.eval_rational(&q(1, 1)), Some(q(1, 4)));
        assert!(g.same_as(&RationalFunction::new(p(&[0, 1]), p(&[2, 2])).unwrap()));
    }
}
