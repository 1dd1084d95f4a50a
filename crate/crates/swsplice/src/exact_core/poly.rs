use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Rational;

/// Integer Laurent polynomial `Σ c_i t^(low + i)`.
///
/// Coefficients are `i128`. Every arithmetic step is overflow checked and
/// panics instead of wrapping, so a returned value is always exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntLaurentPolynomial {
    low: i64,
    coeffs: Vec<i128>,
}

fn ck_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("polynomial coefficient overflow")
}

fn ck_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("polynomial coefficient overflow")
}

impl IntLaurentPolynomial {
    /// Builds `Σ coeffs[i] t^(low+i)` and trims zero ends.
    pub fn new(low: i64, coeffs: Vec<i128>) -> Self {
        let mut p = IntLaurentPolynomial { low, coeffs };
        p.trim();
        p
    }

    /// Ordinary polynomial from coefficients of `1, t, t², …`.
    pub fn from_coeffs(coeffs: &[i128]) -> Self {
        Self::new(0, coeffs.to_vec())
    }

    pub fn zero() -> Self {
        IntLaurentPolynomial { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c · t^e`.
    pub fn monomial(c: i128, e: i64) -> Self {
        Self::new(e, vec![c])
    }

    /// `t^w − 1`.
    pub fn t_pow_minus_one(w: u64) -> Self {
        let w = w as usize;
        let mut c = vec![0; w + 1];
        c[0] = -1;
        c[w] += 1;
        Self::new(0, c)
    }

    fn trim(&mut self) {
        let start = self.coeffs.iter().position(|&c| c != 0);
        match start {
            None => {
                self.coeffs.clear();
                self.low = 0;
            }
            Some(s) => {
                let end = self.coeffs.iter().rposition(|&c| c != 0).unwrap();
                self.coeffs.truncate(end + 1);
                self.coeffs.drain(..s);
                self.low += s as i64;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn lowest_exponent(&self) -> i64 {
        self.low
    }

    /// Highest exponent carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn highest_exponent(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.low + self.coeffs.len() as i64 - 1
        }
    }

    /// Width `highest − lowest`; the degree of an ordinary polynomial with `Δ(0) ≠ 0`.
    pub fn span(&self) -> i64 {
        self.highest_exponent() - self.lowest_exponent()
    }

    pub fn coefficients(&self) -> &[i128] {
        &self.coeffs
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i64) -> i128 {
        let i = e - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Iterates over `(exponent, coefficient)` for nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i128)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.low + i as i64, c))
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        IntLaurentPolynomial { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Substitution `t → t^k`, `k ≥ 1`.
    pub fn substitute_power(&self, k: u64) -> Self {
        assert!(k >= 1, "substitution t -> t^k needs k >= 1");
        if self.is_zero() {
            return self.clone();
        }
        let k = k as usize;
        let mut c = vec![0i128; (self.coeffs.len() - 1) * k + 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            c[i * k] = x;
        }
        Self::new(self.low * k as i64, c)
    }

    /// `P(t⁻¹)`.
    pub fn reflect(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(-self.highest_exponent(), c)
    }

    /// True when `P(t⁻¹) = P(t)`.
    pub fn is_symmetric(&self) -> bool {
        *self == self.reflect()
    }

    /// Value at `t = 1`.
    pub fn value_at_1(&self) -> i128 {
        self.coeffs.iter().fold(0, |s, &c| ck_add(s, c))
    }

    /// Exact value at a nonzero rational point (or any point if no negative exponents).
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        // Horner on the coefficient list, then multiply by x^low.
        let mut acc = Rational::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(BigInt::from(c));
        }
        acc * pow_signed(x, self.low)
    }

    /// First derivative at `t = 1`, as an exact integer.
    pub fn derivative_at_1(&self) -> i128 {
        self.terms().fold(0, |s, (e, c)| ck_add(s, ck_mul(c, e as i128)))
    }

    /// `self^k`.
    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        r
    }

    /// Exact quotient `self / d` when `d` divides `self` in `Z[t, t⁻¹]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = *d.coeffs.last().unwrap();
        let dl = d.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dl {
            return None;
        }
        let qlen = rem.len() - dl + 1;
        let mut quo = vec![0i128; qlen];
        for i in (0..qlen).rev() {
            let top = rem[i + dl - 1];
            if top == 0 {
                continue;
            }
            if top % lead != 0 {
                return None;
            }
            let f = top / lead;
            quo[i] = f;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].checked_sub(ck_mul(f, dc)).expect("polynomial coefficient overflow");
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(Self::new(self.low - d.low, quo))
    }

    /// Converts to rational coefficients of the ordinary polynomial `t^(-low)·P`.
    pub(crate) fn to_rational_coeffs(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()
    }
}

pub(crate) fn pow_signed(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Exact `P''(1)`, treating negative exponents with the falling factorial `e(e−1)`.
pub fn second_derivative_at_1(p: &IntLaurentPolynomial) -> Rational {
    let mut s: i128 = 0;
    for (e, c) in p.terms() {
        let e = e as i128;
        s = ck_add(s, ck_mul(c, ck_mul(e, e - 1)));
    }
    BigRational::from_integer(BigInt::from(s))
}

impl fmt::Debug for IntLaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntLaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let sign = if c < 0 { "-" } else { "+" };
            let a = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let show_coeff = a != 1 || e == 0;
            if show_coeff {
                write!(f, "{}", a)?;
            }
            match e {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{}", e)?,
            }
        }
        Ok(())
    }
}

impl Add for &IntLaurentPolynomial {
    type Output = IntLaurentPolynomial;
    fn add(self, o: &IntLaurentPolynomial) -> IntLaurentPolynomial {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.highest_exponent().max(o.highest_exponent());
        let mut c = vec![0i128; (high - low + 1) as usize];
        for (e, x) in self.terms() {
            c[(e - low) as usize] = x;
        }
        for (e, x) in o.terms() {
            let i = (e - low) as usize;
            c[i] = ck_add(c[i], x);
        }
        IntLaurentPolynomial::new(low, c)
    }
}

impl Neg for &IntLaurentPolynomial {
    type Output = IntLaurentPolynomial;
    fn neg(self) -> IntLaurentPolynomial {
        IntLaurentPolynomial { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &IntLaurentPolynomial {
    type Output = IntLaurentPolynomial;
    fn sub(self, o: &IntLaurentPolynomial) -> IntLaurentPolynomial {
        self + &(-o)
    }
}

impl Mul for &IntLaurentPolynomial {
    type Output = IntLaurentPolynomial;
    fn mul(self, o: &IntLaurentPolynomial) -> IntLaurentPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntLaurentPolynomial::zero();
        }
        // Sparse-times-dense: most factors here are binomials.
        let (sparse, dense) = if self.coeffs.iter().filter(|&&c| c != 0).count()
            <= o.coeffs.iter().filter(|&&c| c != 0).count()
        {
            (self, o)
        } else {
            (o, self)
        };
        let mut c = vec![0i128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in sparse.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in dense.coeffs.iter().enumerate() {
                if b != 0 {
                    c[i + j] = ck_add(c[i + j], ck_mul(a, b));
                }
            }
        }
        IntLaurentPolynomial::new(self.low + o.low, c)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntLaurentPolynomial {
            type Output = IntLaurentPolynomial;
            fn $m(self, o: IntLaurentPolynomial) -> IntLaurentPolynomial {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Zero for IntLaurentPolynomial {
    fn zero() -> Self {
        IntLaurentPolynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for IntLaurentPolynomial {
    fn one() -> Self {
        IntLaurentPolynomial::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::q;
    use proptest::prelude::*;

    fn p(low: i64, c: &[i128]) -> IntLaurentPolynomial {
        IntLaurentPolynomial::new(low, c.to_vec())
    }

    #[test]
    fn trims_and_displays() {
        let x = p(-2, &[0, 0, 1, -1, 1, 0]);
        assert_eq!(x.lowest_exponent(), 0);
        assert_eq!(x.highest_exponent(), 2);
        assert_eq!(x.to_string(), "t^2 - t + 1");
        assert_eq!(p(-1, &[1, -1, 1]).to_string(), "t - 1 + t^-1");
        assert!(p(3, &[0, 0]).is_zero());
    }

    #[test]
    fn second_derivative_examples() {
        assert_eq!(second_derivative_at_1(&p(-1, &[1, -1, 1])), q(2, 1));
        assert_eq!(second_derivative_at_1(&p(0, &[7])), q(0, 1));
    }

    #[test]
    fn exact_division() {
        let a = IntLaurentPolynomial::t_pow_minus_one(6);
        let b = IntLaurentPolynomial::t_pow_minus_one(2);
        assert_eq!(a.div_exact(&b).unwrap(), p(0, &[1, 0, 1, 0, 1]));
        assert!(b.div_exact(&IntLaurentPolynomial::t_pow_minus_one(3)).is_none());
    }

    #[test]
    fn substitution_and_reflection() {
        let x = p(0, &[1, -1, 1]);
        assert_eq!(x.substitute_power(2), p(0, &[1, 0, -1, 0, 1]));
        assert!(x.shift(-1).is_symmetric());
        assert!(!x.is_symmetric());
    }

    fn arb_poly() -> impl Strategy<Value = IntLaurentPolynomial> {
        (-4i64..4, prop::collection::vec(-5i128..6, 0..8)).prop_map(|(l, c)| IntLaurentPolynomial::new(l, c))
    }

    proptest! {
        #[test]
        fn second_derivative_matches_term_formula(a in arb_poly()) {
            // Independent route: differentiate the rational-coefficient polynomial twice.
            let mut s = q(0, 1);
            for (e, c) in a.terms() {
                s += q((c as i64) * e * (e - 1), 1);
            }
            prop_assert_eq!(second_derivative_at_1(&a), s);
        }

        #[test]
        fn symmetric_second_derivative_identity(c in prop::collection::vec(-3i128..4, 1..6)) {
            // P = 1 + Σ c_i (t^i + t^{-i} − 2) is symmetric with P(1) = 1.
            prop_assume!(*c.last().unwrap() != 0);
            let r = c.len();
            let mut full = vec![0i128; 2 * r + 1];
            full[r] = 1;
            for (i, &ci) in c.iter().enumerate() {
                full[r + i + 1] += ci;
                full[r - i - 1] += ci;
                full[r] -= 2 * ci;
            }
            let pint = IntLaurentPolynomial::new(0, full);
            prop_assert_eq!(pint.value_at_1(), 1);
            let r = r as i64;
            let lhs = second_derivative_at_1(&pint.shift(-r));
            let rhs = q(r - r * r, 1) + second_derivative_at_1(&pint);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn multiplication_evaluates_pointwise(a in arb_poly(), b in arb_poly(), x in 1i64..5) {
            let x = q(x, 3);
            prop_assert_eq!((&a * &b).eval_rational(&x), a.eval_rational(&x) * b.eval_rational(&x));
            prop_assert_eq!((&a + &b).eval_rational(&x), a.eval_rational(&x) + b.eval_rational(&x));
        }

        #[test]
        fn product_divides_back(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
