use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::IntLaurentPolynomial;
use super::{q, qi, Rational};

/// Formal product `Π_m (1 − t^m)^{e_m}` with integer exponents.
///
/// Alexander polynomials of iterated torus knots and of their cyclic covers
/// are carried in this form; `c(k)` and the substitution `t → t^k` act
/// factor by factor.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BinomialProduct {
    exps: BTreeMap<u64, i64>,
}

impl BinomialProduct {
    pub fn one() -> Self {
        BinomialProduct::default()
    }

    /// `(1 − t^m)^e`.
    pub fn factor(m: u64, e: i64) -> Self {
        let mut b = BinomialProduct::one();
        b.push(m, e);
        b
    }

    fn push(&mut self, m: u64, e: i64) {
        assert!(m >= 1, "binomial factor needs m >= 1");
        if e == 0 {
            return;
        }
        let slot = self.exps.entry(m).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(&m);
        }
    }

    /// `(m, e_m)` pairs with `e_m ≠ 0`, in increasing `m`.
    pub fn factors(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.exps.iter().map(|(&m, &e)| (m, e))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, e) in o.factors() {
            r.push(m, e);
        }
        r
    }

    pub fn inverse(&self) -> Self {
        BinomialProduct { exps: self.exps.iter().map(|(&m, &e)| (m, -e)).collect() }
    }

    /// `t → t^k`.
    pub fn substitute_power(&self, k: u64) -> Self {
        BinomialProduct { exps: self.exps.iter().map(|(&m, &e)| (m * k, e)).collect() }
    }

    /// The operation `c(k)`: `(1 − t^m)^e ↦ (1 − t^{m/gcd(m,k)})^{e·gcd(m,k)}`.
    pub fn c_transform(&self, k: u64) -> Self {
        let mut r = BinomialProduct::one();
        for (m, e) in self.factors() {
            let g = m.gcd(&k);
            r.push(m / g, e * g as i64);
        }
        r
    }

    /// Total exponent `Σ e_m`; zero iff the value at 1 is finite and nonzero.
    pub fn total_exponent(&self) -> i64 {
        self.exps.values().sum()
    }

    /// `Σ e_m·m`, the degree of the product when it is a polynomial.
    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|(&m, &e)| m as i64 * e).sum()
    }

    /// `lim_{t→1}` of the product when `Σ e_m = 0`: `Π m^{e_m}`.
    pub fn value_at_1(&self) -> Option<Rational> {
        if self.total_exponent() != 0 {
            return None;
        }
        let mut v = Rational::one();
        for (m, e) in self.factors() {
            let f = qi(m);
            v *= super::poly::pow_signed(&f, e);
        }
        Some(v)
    }

    /// Expands to an honest polynomial, or `None` if the quotient is not one.
    pub fn expand(&self) -> Option<IntLaurentPolynomial> {
        let mut num = IntLaurentPolynomial::one();
        let mut den = IntLaurentPolynomial::one();
        for (m, e) in self.factors() {
            let b = (&IntLaurentPolynomial::one() - &IntLaurentPolynomial::monomial(1, m as i64)).pow(e.unsigned_abs() as u32);
            if e > 0 {
                num = &num * &b;
            } else {
                den = &den * &b;
            }
        }
        num.div_exact(&den)
    }

    /// `(Δ^♮)''(1)` where `Δ^♮ = t^{-r}·F/F(1)`, `2r = deg`, computed from the
    /// factor list via logarithmic derivatives of `[m] = (1 − t^m)/(1 − t)`.
    pub fn natural_second_derivative(&self) -> Option<Rational> {
        if self.total_exponent() != 0 {
            return None;
        }
        let deg = self.degree();
        if deg % 2 != 0 {
            return None;
        }
        let r = qi(deg / 2);
        let mut f1 = Rational::zero();
        let mut curv = Rational::zero();
        for (m, e) in self.factors() {
            let m = m as i64;
            f1 += q(e * (m - 1), 2);
            curv += qi(e) * (q((m - 1) * (m - 2), 3) - q((m - 1) * (m - 1), 4));
        }
        let f2 = &f1 * &f1 + curv;
        Some(&r * (&r + Rational::one()) - qi(2) * &r * f1 + f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::second_derivative_at_1;

    fn trefoil() -> BinomialProduct {
        BinomialProduct::factor(6, 1)
            .mul(&BinomialProduct::factor(1, 1))
            .mul(&BinomialProduct::factor(2, -1))
            .mul(&BinomialProduct::factor(3, -1))
    }

    #[test]
    fn trefoil_expands() {
        let d = trefoil().expand().unwrap();
        assert_eq!(d.coefficients(), &[1, -1, 1]);
        assert_eq!(trefoil().value_at_1(), Some(q(1, 1)));
        assert_eq!(trefoil().natural_second_derivative(), Some(q(2, 1)));
    }

    #[test]
    fn c_transform_of_trefoil_at_2() {
        let c = trefoil().c_transform(2);
        // (1−t³)/(1−t)
        assert_eq!(c.expand().unwrap().coefficients(), &[1, 1, 1]);
        assert_eq!(c.value_at_1(), Some(q(3, 1)));
    }

    #[test]
    fn analytic_route_matches_expansion() {
        let cases = [
            trefoil(),
            trefoil().mul(&trefoil().substitute_power(2)),
            trefoil().c_transform(2),
            trefoil().substitute_power(3).c_transform(3),
            trefoil().mul(&trefoil().substitute_power(2)).c_transform(4),
        ];
        for b in cases {
            let p = b.expand().unwrap();
            let v = b.value_at_1().unwrap();
            assert_eq!(qi(p.value_at_1()), v);
            let r = p.span() / 2;
            let nat = p.shift(-r);
            let direct = second_derivative_at_1(&nat) / v;
            assert_eq!(b.natural_second_derivative().unwrap(), direct);
        }
    }
}
