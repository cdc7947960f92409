//! Exact arithmetic in cyclotomic fields Q(zeta_M).
//!
//! Elements are stored in the power basis 1, z, ..., z^(phi(M)-1) as integer
//! numerators over one common positive denominator. The representation is
//! canonical: trailing zero numerators are dropped and the content is coprime
//! to the denominator, so structural equality is field equality.
//!
//! Square roots of primes come from quadratic Gauss sums. The sign is fixed
//! by the complex embedding z -> exp(2 pi i / M): the returned root has
//! positive real part.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported order. Reduction works on dense buffers of length M.
pub const MAX_ORDER: u32 = 2_000_000;

pub struct CycloField {
    order: u32,
    modulus: Vec<i64>,
    // nonzero (index, coefficient) pairs of the modulus below the leading term
    tail: Vec<(usize, i64)>,
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

pub fn lcm(a: u32, b: u32) -> u32 {
    (a as u64).lcm(&(b as u64)) as u32
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u32;
    while out.len() < count {
        if (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d)) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// An M with sqrt(q) in Q(zeta_M), matching what `sqrt_rational` builds.
pub fn rational_sqrt_order(q: &BigRational) -> Result<u32> {
    if q.is_zero() {
        return Ok(1);
    }
    let n = q.numer() * q.denom();
    let (_, free) = split_square(&n.abs())?;
    let free = free.to_u64().ok_or_else(|| Error::unsupported("squarefree part too large"))?;
    let mut m = if n.is_negative() { 4u32 } else { 1 };
    for p in prime_factors(free) {
        let p = u32::try_from(p).map_err(|_| Error::unsupported("prime too large"))?;
        m = lcm(m, sqrt_conductor(p));
    }
    Ok(m)
}

/// Smallest M with sqrt(p) in Q(zeta_M).
pub fn sqrt_conductor(p: u32) -> u32 {
    if p == 2 {
        8
    } else if p % 4 == 1 {
        p
    } else {
        4 * p
    }
}

fn poly_exact_div(num: &[i64], den: &[i64]) -> Result<Vec<i64>> {
    // den is monic
    let dd = den.len() - 1;
    let mut rem: Vec<i128> = num.iter().map(|&c| c as i128).collect();
    let qlen = num.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        if c == 0 {
            continue;
        }
        q[k] = i64::try_from(c).map_err(|_| Error::internal("cyclotomic coefficient overflow"))?;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d as i128;
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::internal("inexact cyclotomic division"));
    }
    Ok(q)
}

fn substitute_power(poly: &[i64], s: usize) -> Vec<i64> {
    let mut out = vec![0i64; (poly.len() - 1) * s + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i * s] = c;
    }
    out
}

/// Coefficients of Phi_m, ascending. Built by dividing out one prime at a
/// time: Phi_{rp}(x) = Phi_r(x^p) / Phi_r(x), then Phi_m(x) = Phi_rad(x^(m/rad)).
pub fn cyclotomic_poly(m: u32) -> Result<Vec<i64>> {
    if m == 0 {
        return Err(Error::invalid("cyclotomic order must be positive"));
    }
    let mut phi = vec![-1i64, 1];
    let mut rad = 1u64;
    for p in prime_factors(m as u64) {
        let lifted = substitute_power(&phi, p as usize);
        phi = poly_exact_div(&lifted, &phi)?;
        rad *= p;
    }
    Ok(substitute_power(&phi, (m as u64 / rad) as usize))
}

impl CycloField {
    /// The field Q(zeta_m); instances are cached per process.
    pub fn new(m: u32) -> Result<Arc<CycloField>> {
        if m == 0 || m > MAX_ORDER {
            return Err(Error::invalid(format!("unsupported cyclotomic order {m}")));
        }
        if let Some(f) = cache().lock().unwrap().get(&m) {
            return Ok(f.clone());
        }
        let modulus = cyclotomic_poly(m)?;
        let deg = modulus.len() - 1;
        let tail = modulus[..deg]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i, *c))
            .collect();
        let f = Arc::new(CycloField { order: m, modulus, tail });
        cache().lock().unwrap().insert(m, f.clone());
        Ok(f)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// phi(M), the dimension over Q.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> FieldElem {
        FieldElem { field: self.clone(), num: Vec::new(), den: BigInt::one() }
    }

    pub fn one(self: &Arc<Self>) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElem {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(self: &Arc<Self>, n: BigInt) -> FieldElem {
        let num = if n.is_zero() { Vec::new() } else { vec![n] };
        FieldElem { field: self.clone(), num, den: BigInt::one() }
    }

    pub fn from_ratio(self: &Arc<Self>, n: i64, d: i64) -> FieldElem {
        self.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(self: &Arc<Self>, q: &BigRational) -> FieldElem {
        if q.is_zero() {
            return self.zero();
        }
        FieldElem { field: self.clone(), num: vec![q.numer().clone()], den: q.denom().clone() }
    }

    /// Element from rational power-basis coefficients (any length; reduced).
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[BigRational]) -> FieldElem {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        self.from_int_vec(num, den)
    }

    /// Sum of c_k z^(e_k) for integer exponents (taken mod M).
    pub fn from_exponents(self: &Arc<Self>, terms: &[(i64, BigRational)]) -> FieldElem {
        let m = self.order as i64;
        let den = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let top = terms.iter().map(|(e, _)| e.rem_euclid(m) as usize).max().unwrap_or(0);
        let mut num = vec![BigInt::zero(); top + 1];
        for (e, c) in terms {
            num[e.rem_euclid(m) as usize] += c.numer() * (&den / c.denom());
        }
        self.from_int_vec(num, den)
    }

    /// zeta_M^k.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> FieldElem {
        self.from_exponents(&[(k, BigRational::one())])
    }

    /// zeta_n^k, requiring n | M.
    pub fn root_of_unity(self: &Arc<Self>, n: u32, k: i64) -> Result<FieldElem> {
        if n == 0 || !self.order.is_multiple_of(n) {
            return Err(Error::FieldTooSmall { m: self.order, need: format!("zeta_{n}") });
        }
        Ok(self.zeta_pow(k * (self.order / n) as i64))
    }

    /// sqrt(-1) = zeta_4.
    pub fn sqrt_minus_one(self: &Arc<Self>) -> Result<FieldElem> {
        self.root_of_unity(4, 1)
    }

    /// Square root of a prime p with positive real part.
    pub fn sqrt_prime(self: &Arc<Self>, p: u32) -> Result<FieldElem> {
        if p < 2 || prime_factors(p as u64) != vec![p as u64] {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let c = sqrt_conductor(p);
        if !self.order.is_multiple_of(c) {
            return Err(Error::FieldTooSmall { m: self.order, need: format!("sqrt({p}) needs conductor {c}") });
        }
        let m = self.order as i64;
        if p == 2 {
            // zeta_8 + zeta_8^{-1} = 2 cos(pi/4)
            let s = m / 8;
            return Ok(self.from_exponents(&[(s, BigRational::one()), (-s, BigRational::one())]));
        }
        // Gauss sum g = sum (a/p) zeta_p^a equals sqrt(p) or i sqrt(p)
        let step = m / p as i64;
        let shift = if p % 4 == 1 { 0 } else { m / 4 };
        let sign = if p % 4 == 1 { 1 } else { -1 };
        let terms: Vec<(i64, BigRational)> = (1..p as i64)
            .map(|a| {
                let chi = legendre(a, p as i64) * sign;
                (a * step + shift, BigRational::from_integer(BigInt::from(chi)))
            })
            .collect();
        Ok(self.from_exponents(&terms))
    }

    /// Square root of a rational number, if it lies in this field.
    pub fn sqrt_rational(self: &Arc<Self>, q: &BigRational) -> Result<FieldElem> {
        if q.is_zero() {
            return Ok(self.zero());
        }
        let n = q.numer() * q.denom();
        let (square, free) = split_square(&n.abs())?;
        let mut root = self.from_rational(&BigRational::new(square, q.denom().clone()));
        let free = free.to_u64().ok_or_else(|| Error::unsupported("squarefree part too large"))?;
        for p in prime_factors(free) {
            let p = u32::try_from(p).map_err(|_| Error::unsupported("prime too large"))?;
            root = &root * &self.sqrt_prime(p)?;
        }
        if n.is_negative() {
            root = &root * &self.sqrt_minus_one()?;
        }
        Ok(root)
    }

    fn from_int_vec(self: &Arc<Self>, mut num: Vec<BigInt>, den: BigInt) -> FieldElem {
        self.reduce(&mut num);
        let mut e = FieldElem { field: self.clone(), num, den };
        e.normalize();
        e
    }

    /// Reduce a dense integer polynomial modulo Phi_M in place.
    fn reduce(&self, v: &mut Vec<BigInt>) {
        let deg = self.degree();
        if v.len() > deg {
            if !self.reduce_small(v) {
                for k in (deg..v.len()).rev() {
                    if v[k].is_zero() {
                        continue;
                    }
                    let c = std::mem::take(&mut v[k]);
                    for &(i, m) in &self.tail {
                        v[k - deg + i] -= &c * m;
                    }
                }
            }
            v.truncate(deg);
        }
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }

    // Machine-integer reduction; returns false (leaving v untouched) on overflow.
    fn reduce_small(&self, v: &mut [BigInt]) -> bool {
        let deg = self.degree();
        let mut w: Vec<i128> = Vec::with_capacity(v.len());
        for c in v.iter() {
            match c.to_i64() {
                Some(x) => w.push(x as i128),
                None => return false,
            }
        }
        let bound: i128 = 1 << 100;
        for k in (deg..w.len()).rev() {
            let c = w[k];
            if c == 0 {
                continue;
            }
            w[k] = 0;
            for &(i, m) in &self.tail {
                let slot = &mut w[k - deg + i];
                *slot -= c * m as i128;
                if slot.abs() > bound {
                    return false;
                }
            }
        }
        for (dst, src) in v.iter_mut().zip(w) {
            *dst = BigInt::from(src);
        }
        true
    }
}

fn legendre(a: i64, p: i64) -> i64 {
    let mut r = 1i64;
    let mut b = a.rem_euclid(p);
    let mut e = (p - 1) / 2;
    let mut acc = 1i64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if acc == p - 1 {
        r = -1;
    } else if acc == 0 {
        r = 0;
    }
    r
}

fn split_square(n: &BigInt) -> Result<(BigInt, BigInt)> {
    let mut n = n.to_u64().ok_or_else(|| Error::unsupported("radicand too large"))?;
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
            square *= p;
        }
        if n % p == 0 {
            n /= p;
            free *= p;
        }
        p += 1;
    }
    free *= n;
    Ok((BigInt::from(square), BigInt::from(free)))
}

/// Element of Q(zeta_M).
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElem {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.num[0].is_one() && self.den.is_one()
    }

    /// Some(q) when the element is the rational q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.num.len() {
            0 => Some(BigRational::zero()),
            1 => Some(BigRational::new(self.num[0].clone(), self.den.clone())),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.num.len() <= 1
    }

    /// Power-basis coefficient of z^i.
    pub fn coeff(&self, i: usize) -> BigRational {
        match self.num.get(i) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        }
    }

    /// All phi(M) power-basis coefficients.
    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.field.degree()).map(|i| self.coeff(i)).collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    fn normalize(&mut self) {
        while self.num.last().is_some_and(|c| c.is_zero()) {
            self.num.pop();
        }
        if self.num.is_empty() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    fn check_same(&self, other: &FieldElem) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.order, other.field.order))
        }
    }

    fn combine(&self, other: &FieldElem, sign: i32) -> FieldElem {
        let len = self.num.len().max(other.num.len());
        let mut num = vec![BigInt::zero(); len];
        if self.den == other.den {
            for (i, c) in self.num.iter().enumerate() {
                num[i] += c;
            }
            for (i, c) in other.num.iter().enumerate() {
                if sign > 0 {
                    num[i] += c;
                } else {
                    num[i] -= c;
                }
            }
            let mut e = FieldElem { field: self.field.clone(), num, den: self.den.clone() };
            e.normalize();
            return e;
        }
        let g = self.den.gcd(&other.den);
        let fa = &other.den / &g;
        let fb = &self.den / &g;
        for (i, c) in self.num.iter().enumerate() {
            num[i] += c * &fa;
        }
        for (i, c) in other.num.iter().enumerate() {
            if sign > 0 {
                num[i] += c * &fb;
            } else {
                num[i] -= c * &fb;
            }
        }
        let mut e = FieldElem { field: self.field.clone(), num, den: &self.den * &fa };
        e.normalize();
        e
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        Ok(self.combine(other, 1))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        Ok(self.combine(other, -1))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.field.zero());
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(&q));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(&q));
        }
        let mut num = vec![BigInt::zero(); self.num.len() + other.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    num[i + j] += a * b;
                }
            }
        }
        Ok(self.field.from_int_vec(num, &self.den * &other.den))
    }

    pub fn scale(&self, q: &BigRational) -> FieldElem {
        if q.is_zero() || self.is_zero() {
            return self.field.zero();
        }
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        let mut e = FieldElem { field: self.field.clone(), num, den: &self.den * q.denom() };
        e.normalize();
        e
    }

    pub fn scale_int(&self, k: i64) -> FieldElem {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.from_rational(&q.recip()));
        }
        // extended Euclid in Q[x]: find s with s * a = 1 mod Phi_M
        let a: Vec<BigRational> =
            self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect();
        let phi: Vec<BigRational> =
            self.field.modulus.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return Err(Error::internal("element not invertible modulo the cyclotomic polynomial"));
        }
        let c = r0[0].recip();
        let coeffs: Vec<BigRational> = s0.iter().map(|x| x * &c).collect();
        Ok(self.field.from_coeffs(&coeffs))
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image in a larger cyclotomic field Q(zeta_N), M | N.
    pub fn embed(&self, target: &Arc<CycloField>) -> Result<FieldElem> {
        if target.order == self.field.order {
            return Ok(FieldElem { field: target.clone(), num: self.num.clone(), den: self.den.clone() });
        }
        if !target.order.is_multiple_of(self.field.order) {
            return Err(Error::FieldTooSmall {
                m: target.order,
                need: format!("embedding of Q(zeta_{})", self.field.order),
            });
        }
        if self.is_rational() {
            return Ok(target.from_rational(&self.as_rational().unwrap()));
        }
        let s = (target.order / self.field.order) as usize;
        let mut num = vec![BigInt::zero(); (self.num.len() - 1) * s + 1];
        for (i, c) in self.num.iter().enumerate() {
            num[i * s] = c.clone();
        }
        Ok(target.from_int_vec(num, self.den.clone()))
    }

    /// Numerical value under z -> exp(2 pi i / M). Diagnostics only.
    pub fn approx_complex(&self) -> (f64, f64) {
        let m = self.field.order as f64;
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            let x = c.to_f64().unwrap_or(f64::NAN) / d;
            let ang = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re, im)
    }
}

/// Rank over Q of the power-basis coefficient vectors.
pub fn q_linear_rank(elems: &[FieldElem]) -> Result<usize> {
    if let Some(first) = elems.first() {
        for e in elems {
            first.check_same(e)?;
        }
    }
    let mut rows: Vec<Vec<BigInt>> = elems.iter().map(|e| e.num.clone()).collect();
    let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(width, BigInt::zero());
    }
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            if r[col].is_zero() {
                continue;
            }
            let a = pivot[col].clone();
            let b = r[col].clone();
            for (x, y) in r.iter_mut().zip(&pivot) {
                *x = &*x * &a - y * &b;
            }
            let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in r.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// True when {1} together with `elems` is Q-linearly independent, which makes
/// the elements Z-independent modulo Z.
pub fn independent_mod_z(elems: &[FieldElem]) -> Result<bool> {
    let Some(first) = elems.first() else { return Ok(true) };
    let mut all = vec![first.field.one()];
    all.extend(elems.iter().cloned());
    Ok(q_linear_rank(&all)? == elems.len() + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(a: &FieldElem, b: &FieldElem, op: ArithOp) -> Result<FieldElem> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

fn qpoly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    qpoly_trim(out)
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qpoly_trim(out)
}

fn qpoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), qpoly_trim(rem));
    }
    let lead_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            rem[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    rem.truncate(db);
    (qpoly_trim(q), qpoly_trim(rem))
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.num == other.num && self.den == other.den
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = BigRational::new(c.clone(), self.den.clone());
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z{}^{k}", self.field.order)?,
                (_, false) => write!(f, "{a}*z{}^{k}", self.field.order)?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl std::ops::$tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            /// Panics when the operands live in different fields.
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$imp(rhs).expect("field arithmetic across different cyclotomic fields")
            }
        }
        impl std::ops::$tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl std::ops::Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct FieldElemJson {
    #[serde(rename = "M")]
    m: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .num
            .iter()
            .map(|c| {
                let q = BigRational::new(c.clone(), self.den.clone());
                [q.numer().to_string(), q.denom().to_string()]
            })
            .collect();
        FieldElemJson { m: self.field.order, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FieldElemJson::deserialize(d)?;
        let field = CycloField::new(raw.m).map_err(D::Error::custom)?;
        if raw.coeffs.len() > field.degree() {
            return Err(D::Error::custom("more coefficients than the field degree"));
        }
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        for [n, dd] in &raw.coeffs {
            let n: BigInt = n.parse().map_err(D::Error::custom)?;
            let dd: BigInt = dd.parse().map_err(D::Error::custom)?;
            if dd.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(BigRational::new(n, dd));
        }
        Ok(field.from_coeffs(&coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polys_match_known_values() {
        assert_eq!(cyclotomic_poly(1).unwrap(), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(8).unwrap(), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12).unwrap(), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(15).unwrap(), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
        let p105 = cyclotomic_poly(105).unwrap();
        assert_eq!(p105.len() - 1, 48);
        assert_eq!(p105.iter().filter(|c| **c == -2).count(), 2);
    }

    #[test]
    fn root_of_unity_products() {
        let f = CycloField::new(12).unwrap();
        assert!((&f.zeta_pow(1) * &f.zeta_pow(11)).is_one());
        let i = f.sqrt_minus_one().unwrap();
        assert_eq!(&(&f.one() + &i) * &(&f.one() - &i), f.from_int(2));
    }

    #[test]
    fn sqrt2_in_q_zeta8() {
        let f = CycloField::new(8).unwrap();
        let r = f.sqrt_prime(2).unwrap();
        assert_eq!(r, &f.zeta_pow(1) - &f.zeta_pow(3));
        assert_eq!(&r * &r, f.from_int(2));
        let s = &f.zeta_pow(1) + &f.zeta_pow(7);
        assert!((&(&s * &s).inv().unwrap() * &f.from_int(2)).is_one());
        assert!(CycloField::new(3).unwrap().sqrt_prime(2).is_err());
    }

    #[test]
    fn sqrt_primes_square_correctly_with_positive_real_part() {
        for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23] {
            let f = CycloField::new(8 * p).unwrap();
            let r = f.sqrt_prime(p).unwrap();
            assert_eq!(&r * &r, f.from_int(p as i64), "p = {p}");
            let (re, im) = r.approx_complex();
            assert!((re - (p as f64).sqrt()).abs() < 1e-9 && im.abs() < 1e-9, "p = {p}");
        }
    }

    #[test]
    fn rational_square_roots() {
        let f = CycloField::new(24).unwrap();
        let r = f.sqrt_rational(&q(-3, 4)).unwrap();
        assert_eq!(&r * &r, f.from_ratio(-3, 4));
        assert_eq!(f.sqrt_rational(&q(9, 4)).unwrap(), f.from_ratio(3, 2));
    }

    #[test]
    fn q_rank_examples() {
        let f = CycloField::new(24).unwrap();
        let s2 = f.sqrt_prime(2).unwrap();
        let s3 = f.sqrt_prime(3).unwrap();
        assert_eq!(q_linear_rank(&[f.one(), s2.clone(), s3]).unwrap(), 3);
        assert_eq!(q_linear_rank(&[f.one(), f.from_ratio(1, 2)]).unwrap(), 1);
        assert!(!independent_mod_z(&[f.from_ratio(1, 2)]).unwrap());
        assert_eq!(q_linear_rank(&[s2.clone(), -&s2]).unwrap(), 1);
    }

    #[test]
    fn inverse_and_mismatch_errors() {
        let f = CycloField::new(7).unwrap();
        let a = &f.from_int(3) + &f.zeta_pow(2);
        assert!((&a * &a.inv().unwrap()).is_one());
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
        let g = CycloField::new(5).unwrap();
        assert_eq!(arith(&f.one(), &g.one(), ArithOp::Add), Err(Error::FieldMismatch(7, 5)));
    }

    #[test]
    fn embedding_preserves_arithmetic() {
        let small = CycloField::new(8).unwrap();
        let big = CycloField::new(40).unwrap();
        let r = small.sqrt_prime(2).unwrap().embed(&big).unwrap();
        assert_eq!(r, big.sqrt_prime(2).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let f = CycloField::new(8).unwrap();
        let a = &f.from_ratio(-7, 3) + &f.zeta_pow(3);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"M":8,"coeffs":[["-7","3"],["0","1"],["0","1"],["1","1"]]}"#);
        let b: FieldElem = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
