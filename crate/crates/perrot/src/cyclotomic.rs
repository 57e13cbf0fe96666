//! Exact arithmetic in cyclotomic fields Q(zeta_n).
//!
//! A value is a sparse map from root-of-unity exponents to exact rational
//! coefficients, kept in the canonical power basis `zeta_n^k`,
//! `0 <= k < phi(n)`, by reduction modulo the n-th cyclotomic polynomial.
//! Equality is therefore exact. Values of different orders interoperate by
//! promotion to the least common multiple order.
//!
//! This is needed because nuclear-spin statistical weights reach ~1e16,
//! where double-precision rounding error exceeds 1/2, and because golden-
//! ratio characters of the icosahedral group live in Q(sqrt 5) = Q(zeta_5)'s
//! real subfield.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// An element of Q(zeta_n), in canonical reduced form.
#[derive(Debug, Clone)]
pub struct Cyclotomic {
    order: u32,
    /// exponent -> coefficient, all exponents < phi(order), no zero coefficients.
    coeffs: BTreeMap<u32, BigRational>,
}

fn phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Dense coefficient vector of the n-th cyclotomic polynomial (degree phi(n)),
/// computed by dividing x^n - 1 by the product of all proper-divisor
/// cyclotomic polynomials; memoized per order.
fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)] // x - 1
    } else {
        // x^n - 1
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                num = poly_div_exact(&num, &cyclotomic_poly(d));
            }
        }
        num
    };
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let idx = i - dd + j;
            rem[idx] = &rem[idx] - &c * dj;
        }
    }
    assert!(rem.iter().all(BigInt::is_zero), "non-exact polynomial division");
    quot
}

impl Cyclotomic {
    /// The zero of Q(zeta_n).
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1);
        Cyclotomic { order, coeffs: BTreeMap::new() }
    }

    /// The unit of Q(zeta_n).
    pub fn one(order: u32) -> Self {
        Cyclotomic::from_rational(order, BigRational::one())
    }

    /// A rational constant embedded in Q(zeta_n).
    pub fn from_rational(order: u32, r: BigRational) -> Self {
        let mut c = Cyclotomic::zero(order);
        if !r.is_zero() {
            c.coeffs.insert(0, r);
        }
        c
    }

    /// Integer constant.
    pub fn from_integer(order: u32, k: i64) -> Self {
        Cyclotomic::from_rational(order, BigRational::from_integer(BigInt::from(k)))
    }

    /// The root of unity `zeta_order^k`.
    pub fn root(order: u32, k: i64) -> Self {
        let kk = k.rem_euclid(order as i64) as u32;
        let mut c = Cyclotomic::zero(order);
        c.coeffs.insert(kk, BigRational::one());
        c.reduce();
        c
    }

    /// `sqrt(5)` as an element of Q(zeta_n); requires `5 | n`.
    pub fn sqrt5(order: u32) -> Self {
        assert!(order % 5 == 0, "sqrt 5 needs 5 | order");
        let s = order as i64 / 5;
        // sqrt5 = 1 + 2 zeta5 + 2 zeta5^4 (Gauss sum).
        Cyclotomic::one(order)
            + Cyclotomic::root(order, s).scale_int(2)
            + Cyclotomic::root(order, 4 * s).scale_int(2)
    }

    /// `sqrt(6)` as an element of Q(zeta_n); requires `24 | n`.
    pub fn sqrt6(order: u32) -> Self {
        assert!(order % 24 == 0, "sqrt 6 needs 24 | order");
        let z = |k: i64| Cyclotomic::root(order, k * order as i64 / 24);
        // sqrt2 = zeta8 + zeta8^-1, sqrt3 = -i (zeta3 - zeta3^-1) = zeta12 + zeta12^-1.
        let sqrt2 = z(3) + z(-3);
        let sqrt3 = z(2) + z(-2);
        sqrt2 * sqrt3
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// If the value is rational, return it.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.is_empty() {
            return Some(BigRational::zero());
        }
        if self.coeffs.len() == 1 {
            if let Some(c) = self.coeffs.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Scale by an integer.
    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Scale by a rational.
    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Cyclotomic::zero(self.order);
        }
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= r;
        }
        out
    }

    /// Complex conjugate (zeta^k -> zeta^{n-k}).
    pub fn conj(&self) -> Self {
        let mut out = Cyclotomic::zero(self.order);
        for (k, v) in &self.coeffs {
            let kk = if *k == 0 { 0 } else { self.order - *k };
            out.coeffs.entry(kk).and_modify(|c| *c += v).or_insert_with(|| v.clone());
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out.reduce();
        out
    }

    /// Numeric value.
    pub fn to_c64(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, v) in &self.coeffs {
            let c = rational_to_f64(v);
            z += Complex64::from_polar(1.0, 2.0 * PI * (*k as f64) / self.order as f64) * c;
        }
        z
    }

    /// Promote to a field of order `new_order` (must be a multiple).
    pub fn promote(&self, new_order: u32) -> Self {
        assert!(new_order % self.order == 0, "promotion target must be a multiple order");
        if new_order == self.order {
            return self.clone();
        }
        let f = new_order / self.order;
        let mut out = Cyclotomic::zero(new_order);
        for (k, v) in &self.coeffs {
            out.coeffs.insert(k * f, v.clone());
        }
        out.reduce();
        out
    }

    /// Canonical reduction modulo the cyclotomic polynomial of `self.order`.
    fn reduce(&mut self) {
        let n = self.order;
        let deg = phi(n);
        if self.coeffs.keys().all(|k| *k < deg) {
            return;
        }
        // Dense remainder modulo Phi_n (monic of degree phi(n)).
        let p = cyclotomic_poly(n);
        let mut dense: Vec<BigRational> = vec![BigRational::zero(); n as usize];
        for (k, v) in &self.coeffs {
            dense[(*k % n) as usize] += v;
        }
        for i in (deg as usize..n as usize).rev() {
            if dense[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut dense[i], BigRational::zero());
            for (j, pj) in p.iter().enumerate().take(deg as usize) {
                if !pj.is_zero() {
                    dense[i - deg as usize + j] -= &c * BigRational::from_integer(pj.clone());
                }
            }
        }
        self.coeffs = dense
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k as u32, v))
            .collect();
    }

    fn aligned(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        if a.order == b.order {
            (a.clone(), b.clone())
        } else {
            let n = a.order.lcm(&b.order);
            (a.promote(n), b.promote(n))
        }
    }
}

impl PartialEq for Cyclotomic {
    /// Exact equality, with order promotion so e.g. `zeta_3` equals its
    /// image in Q(zeta_12).
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclotomic::aligned(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().and_then(|n| r.denom().to_f64().map(|d| n / d)).unwrap_or_else(|| {
        // Fall back through a high-precision string route for huge values.
        let s = r.to_string();
        s.parse().unwrap_or(f64::NAN)
    })
}

impl std::ops::Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl std::ops::Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::aligned(self, rhs);
        for (k, v) in b.coeffs {
            a.coeffs
                .entry(k)
                .and_modify(|c| *c += &v)
                .or_insert(v);
        }
        a.coeffs.retain(|_, v| !v.is_zero());
        a
    }
}

impl std::ops::Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &(-&rhs)
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

impl std::ops::Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::ops::Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl std::ops::Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::aligned(self, rhs);
        let n = a.order;
        let mut out = Cyclotomic::zero(n);
        for (ka, va) in &a.coeffs {
            for (kb, vb) in &b.coeffs {
                let k = (ka + kb) % n;
                let prod = va * vb;
                out.coeffs
                    .entry(k)
                    .and_modify(|c| *c += &prod)
                    .or_insert(prod);
            }
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out.reduce();
        out
    }
}

impl std::ops::AddAssign for Cyclotomic {
    fn add_assign(&mut self, rhs: Cyclotomic) {
        *self = &*self + &rhs;
    }
}
