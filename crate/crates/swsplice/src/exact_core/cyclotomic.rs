use std::fmt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::IntLaurentPolynomial;
use super::ratfunc::qpoly_gcd;
use super::Rational;
use crate::error::{Error, Result};

/// `Q(ζ_N) = Q[t]/Φ_N(t)` together with the reductions of `ζ^j`, `0 ≤ j < N`.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    n: u64,
    phi: Vec<i128>,
    powers: Vec<Vec<i128>>,
}

/// `Φ_N` by the recursive division formula `t^N − 1 = Π_{d|N} Φ_d`.
pub(crate) fn cyclotomic_polynomial(n: u64) -> IntLaurentPolynomial {
    let mut p = IntLaurentPolynomial::t_pow_minus_one(n);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = IntLaurentPolynomial::from_coeffs(&CyclotomicField::new(d).phi);
            p = p.div_exact(&phi_d).expect("Φ_d divides t^N − 1");
        }
    }
    p
}

impl CyclotomicField {
    /// Fields are built once per conductor and shared.
    pub fn new(n: u64) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().unwrap().get(&n) {
            return f.clone();
        }
        let f = Self::build(n);
        cache.lock().unwrap().insert(n, f.clone());
        f
    }

    fn build(n: u64) -> Arc<Self> {
        assert!(n >= 1, "conductor must be positive");
        let phi_poly = cyclotomic_polynomial(n);
        let phi: Vec<i128> = phi_poly.coefficients().to_vec();
        let deg = phi.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i128; deg];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // Multiply by t and reduce the top coefficient with the monic Φ.
            let top = cur[deg - 1];
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..deg {
                    cur[i] -= top * phi[i];
                }
            }
            // deg == 1 (N = 1, 2) still works: cur has a single slot.
        }
        Arc::new(CyclotomicField { n, phi, powers })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// `φ(N)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Integer coordinates of `ζ^k`.
    pub fn root_coords(&self, k: i64) -> &[i128] {
        &self.powers[k.rem_euclid(self.n as i64) as usize]
    }
}

/// Exact element of `Q(ζ_N)` stored as coordinates in the power basis mod `Φ_N`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coords: Vec<Rational>,
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, o: &Self) -> bool {
        if self.field.n == o.field.n {
            return self.coords == o.coords;
        }
        let m = self.field.n.lcm(&o.field.n);
        let f = CyclotomicField::new(m);
        self.lift(&f) == o.lift(&f)
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[{}](", self.field.n)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl CyclotomicNumber {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CyclotomicNumber { field: field.clone(), coords: vec![Rational::zero(); field.degree()] }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, x: Rational) -> Self {
        let mut z = Self::zero(field);
        z.coords[0] = x;
        z
    }

    /// `ζ_N^k`.
    pub fn root(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let coords = field.root_coords(k).iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        CyclotomicNumber { field: field.clone(), coords }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coordinates(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// True iff all coordinates beyond the constant one vanish.
    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    /// Re-embeds into `Q(ζ_M)` for a multiple `M` of the conductor.
    pub fn lift(&self, target: &Arc<CyclotomicField>) -> Self {
        let m = target.n;
        assert!(m % self.field.n == 0, "can only lift to a multiple of the conductor");
        if m == self.field.n {
            return CyclotomicNumber { field: target.clone(), coords: self.coords.clone() };
        }
        let step = (m / self.field.n) as i64;
        let mut out = Self::zero(target);
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.coords.iter_mut().zip(target.root_coords(step * i as i64)) {
                if r != 0 {
                    *o += c * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
        out
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        if self.field.n == o.field.n {
            (self.clone(), o.clone())
        } else {
            let f = CyclotomicField::new(self.field.n.lcm(&o.field.n));
            (self.lift(&f), o.lift(&f))
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.field.n != o.field.n {
            let (a, b) = self.aligned(o);
            return a.add(&b);
        }
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        CyclotomicNumber { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, x: &Rational) -> Self {
        CyclotomicNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| c * x).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.field.n != o.field.n {
            let (a, b) = self.aligned(o);
            return a.mul(&b);
        }
        let deg = self.field.degree();
        let mut prod = vec![Rational::zero(); 2 * deg - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out: Vec<Rational> = prod[..deg].to_vec();
        for (k, c) in prod.iter().enumerate().skip(deg) {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(self.field.root_coords(k as i64)) {
                if r != 0 {
                    *o += c * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
        CyclotomicNumber { field: self.field.clone(), coords: out }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut r = Self::from_rational(&self.field, Rational::one());
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(r)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm over `Q[t]`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let deg = self.field.degree();
        let phi: Vec<Rational> = self.field.phi.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        let mut a: Vec<Rational> = self.coords.clone();
        trim(&mut a);
        // Invariant: s·x ≡ r (mod Φ).
        let (mut r0, mut s0) = (phi, vec![]);
        let (mut r1, mut s1) = (a, vec![Rational::one()]);
        while r1.len() > 1 {
            let (quo, rem) = divmod(&r0, &r1);
            let s2 = sub_poly(&s0, &mul_poly(&quo, &s1));
            r0 = r1;
            s0 = s1;
            r1 = rem;
            s1 = s2;
        }
        // r1 is a nonzero constant since Φ is irreducible.
        debug_assert_eq!(qpoly_gcd(&r0, &r1).len(), 1);
        let c = r1[0].clone();
        let mut coords: Vec<Rational> = s1.iter().map(|x| x / &c).collect();
        coords.resize(deg.max(coords.len()), Rational::zero());
        let out = reduce(&self.field, coords);
        Ok(out)
    }
}

fn reduce(field: &Arc<CyclotomicField>, mut coords: Vec<Rational>) -> CyclotomicNumber {
    let deg = field.degree();
    let mut out: Vec<Rational> = vec![Rational::zero(); deg];
    for (k, c) in coords.drain(..).enumerate() {
        if c.is_zero() {
            continue;
        }
        if k < deg {
            out[k] += c;
        } else {
            for (o, &r) in out.iter_mut().zip(field.root_coords(k as i64)) {
                if r != 0 {
                    *o += &c * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
    }
    CyclotomicNumber { field: field.clone(), coords: out }
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn mul_poly(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    trim(&mut c);
    c
}

fn sub_poly(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut c = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        c[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        c[i] -= y;
    }
    trim(&mut c);
    c
}

fn divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let lb = b.last().unwrap().clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut quo = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() / &lb;
        let off = r.len() - b.len();
        for (j, c) in b.iter().enumerate() {
            r[off + j] -= &f * c;
        }
        quo[off] = f;
        r.pop();
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

/// `P(ζ)` for `ζ = exp(2πi·angle)`, computed in `Q(ζ_N)` with `N` the reduced denominator.
///
/// ```
/// use swsplice::exact_core::{eval_at_root_of_unity, rationalize, q, IntLaurentPolynomial};
/// let phi6 = IntLaurentPolynomial::from_coeffs(&[1, -1, 1]);
/// assert!(eval_at_root_of_unity(&phi6, &q(1, 6)).is_zero());
/// let tm1 = IntLaurentPolynomial::from_coeffs(&[-1, 1]);
/// assert_eq!(rationalize(&eval_at_root_of_unity(&tm1, &q(1, 2))).unwrap(), q(-2, 1));
/// ```
pub fn eval_at_root_of_unity(p: &IntLaurentPolynomial, angle: &Rational) -> CyclotomicNumber {
    let n = angle.denom().clone();
    let n: u64 = u64::try_from(n).expect("conductor fits in u64");
    let c: i64 = i64::try_from(angle.numer().mod_floor(&BigInt::from(n))).unwrap();
    let field = CyclotomicField::new(n);
    eval_in_field(p, &field, c)
}

/// `P(ζ_N^c)` in a caller-supplied field.
pub fn eval_in_field(p: &IntLaurentPolynomial, field: &Arc<CyclotomicField>, c: i64) -> CyclotomicNumber {
    let n = field.conductor() as i64;
    let mut acc = vec![0i128; field.degree()];
    for (e, coef) in p.terms() {
        let k = ((c as i128 * e as i128).rem_euclid(n as i128)) as i64;
        for (a, &r) in acc.iter_mut().zip(field.root_coords(k)) {
            *a += coef * r;
        }
    }
    CyclotomicNumber {
        field: field.clone(),
        coords: acc.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect(),
    }
}

/// The rational value of a Galois invariant element.
pub fn rationalize(x: &CyclotomicNumber) -> Result<Rational> {
    if x.is_rational() {
        Ok(x.coords[0].clone())
    } else {
        Err(Error::NotRational(format!("{:?}", x)))
    }
}
