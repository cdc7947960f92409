//! Polynomials and rational functions over Q(zeta_M), and the Kummer fields
//! K = F(x, y) with y^n = x that carry the global equations.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{CycloField, FieldElem};
use crate::linalg::{Matrix, Scalar};

/// Dense polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Arc<CycloField>,
    c: Vec<FieldElem>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Poly) -> bool {
        self.field.order() == o.field.order() && self.c == o.c
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Poly {
    pub fn new(field: &Arc<CycloField>, mut c: Vec<FieldElem>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { field: field.clone(), c }
    }

    pub fn zero(field: &Arc<CycloField>) -> Poly {
        Poly { field: field.clone(), c: Vec::new() }
    }

    pub fn constant(c: &FieldElem) -> Poly {
        Poly::new(c.field(), vec![c.clone()])
    }

    pub fn one(field: &Arc<CycloField>) -> Poly {
        Poly::constant(&field.one())
    }

    pub fn x(field: &Arc<CycloField>) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// x - p
    pub fn linear(p: &FieldElem) -> Poly {
        Poly::new(p.field(), vec![-p, p.field().one()])
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lead(&self) -> FieldElem {
        self.c.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(&self.field, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(&self.field, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { field: self.field.clone(), c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, s: &FieldElem) -> Poly {
        if s.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly { field: self.field.clone(), c: self.c.iter().map(|x| x * s).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(&self.field), |acc, _| acc.mul(self))
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); k];
        c.extend(self.c.iter().cloned());
        Poly::new(&self.field, c)
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        if r.len() < dl {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let inv = d.lead().inv()?;
        let mut q = vec![self.field.zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let t = &r[k + dl - 1] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                if !dc.is_zero() {
                    r[k + j] = &r[k + j] - &(&t * dc);
                }
            }
            q[k] = t;
        }
        Ok((Poly::new(&self.field, q), Poly::new(&self.field, r)))
    }

    pub fn monic(&self) -> Result<Poly> {
        if self.is_zero() || self.lead().is_one() {
            return Ok(self.clone());
        }
        Ok(self.scale(&self.lead().inv()?))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b)?.1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(|c| c.is_rational())
    }

    /// Largest factor with rational coefficients common to `self` and the
    /// rational polynomial `o`. Works one power-basis coordinate at a time,
    /// so no irrational leading coefficient is ever inverted.
    pub fn rational_gcd(&self, o: &Poly) -> Result<Poly> {
        let mut g = o.monic()?;
        for i in 0..self.field.degree() {
            if g.is_constant() {
                break;
            }
            let comp: Vec<FieldElem> = self.c.iter().map(|c| self.field.from_rational(&c.coeff(i))).collect();
            let comp = Poly::new(&self.field, comp);
            if !comp.is_zero() {
                g = g.gcd(&comp)?;
            }
        }
        Ok(g)
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.c.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(&self.field, self.c.iter().enumerate().skip(1).map(|(i, c)| c.scale_int(i as i64)).collect())
    }

    /// Coefficients of P(p + t) in t.
    pub fn taylor(&self, p: &FieldElem) -> Vec<FieldElem> {
        let mut c = self.c.clone();
        let n = c.len();
        // repeated synthetic division by (x - p)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * p;
                c[j] = &c[j] + &t;
            }
        }
        c
    }

    /// P(x^k).
    pub fn inflate(&self, k: usize) -> Poly {
        let mut c = vec![self.field.zero(); (self.c.len().max(1) - 1) * k + 1];
        for (i, x) in self.c.iter().enumerate() {
            c[i * k] = x.clone();
        }
        Poly::new(&self.field, c)
    }

    pub fn embed(&self, target: &Arc<CycloField>) -> Result<Poly> {
        Ok(Poly::new(target, self.c.iter().map(|x| x.embed(target)).collect::<Result<_>>()?))
    }
}

/// Truncated Laurent series sum_k c_k t^(start + k), exact below `prec`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laurent {
    pub start: i64,
    pub coeffs: Vec<FieldElem>,
    pub prec: i64,
}

impl Laurent {
    pub fn coeff(&self, k: i64, f: &Arc<CycloField>) -> FieldElem {
        if k < self.start {
            return f.zero();
        }
        self.coeffs.get((k - self.start) as usize).cloned().unwrap_or_else(|| f.zero())
    }

    /// Lowest exponent with a nonzero coefficient below `prec`.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.start + i as i64)
    }

    fn mul(&self, o: &Laurent, f: &Arc<CycloField>) -> Laurent {
        let start = self.start + o.start;
        let prec = (self.start + o.prec).min(o.start + self.prec);
        let len = (prec - start).max(0) as usize;
        let mut c = vec![f.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    c[i + j] = &c[i + j] + &(a * b);
                }
            }
        }
        Laurent { start, coeffs: c, prec }
    }

    fn add(&self, o: &Laurent, f: &Arc<CycloField>) -> Laurent {
        let start = self.start.min(o.start);
        let prec = self.prec.min(o.prec);
        let c = (start..prec).map(|k| &self.coeff(k, f) + &o.coeff(k, f)).collect();
        Laurent { start, coeffs: c, prec }
    }
}

/// Rational function with monic denominator. A denominator with rational
/// coefficients is only cleared of rational common factors, so equality
/// cross-multiplies.
#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &RatFunc) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Eq for RatFunc {}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "[{:?}] / [{:?}]", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero(num.field()));
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = if den.is_rational() { num.rational_gcd(&den)? } else { num.gcd(&den)? };
            if g.is_constant() {
                (num, den)
            } else {
                (num.divrem(&g)?.0, den.divrem(&g)?.0)
            }
        };
        let l = den.lead();
        if l.is_one() {
            return Ok(RatFunc { num, den });
        }
        let li = l.inv()?;
        Ok(RatFunc { num: num.scale(&li), den: den.scale(&li) })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let f = p.field().clone();
        RatFunc { num: p, den: Poly::one(&f) }
    }

    pub fn zero(f: &Arc<CycloField>) -> RatFunc {
        RatFunc { num: Poly::zero(f), den: Poly::one(f) }
    }

    pub fn one(f: &Arc<CycloField>) -> RatFunc {
        RatFunc::constant(&f.one())
    }

    pub fn constant(c: &FieldElem) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn x(f: &Arc<CycloField>) -> RatFunc {
        RatFunc::from_poly(Poly::x(f))
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).expect("nonzero denominator");
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
            .expect("nonzero denominator")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn scale(&self, s: &FieldElem) -> RatFunc {
        RatFunc { num: self.num.scale(s), den: if s.is_zero() { Poly::one(self.field()) } else { self.den.clone() } }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn derivative(&self) -> RatFunc {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFunc::new(n, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    pub fn eval(&self, x: &FieldElem) -> Result<FieldElem> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::invalid(format!("x = {x} is a pole")));
        }
        self.num.eval(x).try_div(&d)
    }

    /// Expansion in t = x - p, exact for exponents below `prec`.
    pub fn laurent(&self, p: &FieldElem, prec: i64) -> Result<Laurent> {
        let f = self.field().clone();
        if self.is_zero() {
            return Ok(Laurent { start: prec, coeffs: Vec::new(), prec });
        }
        let q = self.den.taylor(p);
        let s = q.iter().position(|c| !c.is_zero()).expect("nonzero denominator") as i64;
        let q1 = &q[s as usize..];
        let pn = self.num.taylor(p);
        // P / Q1 as a power series, needed below prec + s
        let len = (prec + s).max(0) as usize;
        let inv0 = q1[0].inv()?;
        let mut out: Vec<FieldElem> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = pn.get(k).cloned().unwrap_or_else(|| f.zero());
            for j in 1..=k.min(q1.len() - 1) {
                if !q1[j].is_zero() && !out[k - j].is_zero() {
                    acc = &acc - &(&q1[j] * &out[k - j]);
                }
            }
            out.push(&acc * &inv0);
        }
        Ok(Laurent { start: -s, coeffs: out, prec })
    }

    /// f(z^k) as a rational function of z.
    pub fn inflate(&self, k: usize) -> RatFunc {
        RatFunc::new(self.num.inflate(k), self.den.inflate(k)).expect("nonzero denominator")
    }
}

/// (1 + s)^a = sum binom(a, k) s^k for rational a.
fn binomial_coeffs(a: &BigRational, len: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(len);
    let mut c = BigRational::one();
    for k in 0..len {
        out.push(c.clone());
        c = c * (a - BigRational::from_integer(k.into())) / BigRational::from_integer((k + 1).into());
    }
    out
}

/// Some rational r with r^n = q.
pub fn rational_nth_root(q: &BigRational, n: u32) -> Option<BigRational> {
    if n == 1 {
        return Some(q.clone());
    }
    if q.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let root = |z: &BigInt| -> Option<BigInt> {
        let r = z.abs().nth_root(n);
        let r = if z.is_negative() { -r } else { r };
        (num_traits::pow(r.clone(), n as usize) == *z).then_some(r)
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

/// Element sum_j c_j y^j of F(x, y), y^n = x.
#[derive(Clone, PartialEq, Eq)]
pub struct KummerElem {
    c: Vec<RatFunc>,
}

impl fmt::Debug for KummerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, a)| if j == 0 { format!("{a:?}") } else { format!("({a:?})y^{j}") })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl KummerElem {
    pub fn new(c: Vec<RatFunc>) -> Result<KummerElem> {
        if c.is_empty() {
            return Err(Error::invalid("Kummer element needs n >= 1 components"));
        }
        let m = c[0].field().order();
        if c.iter().any(|a| a.field().order() != m) {
            return Err(Error::FieldMismatch(m, c.iter().map(|a| a.field().order()).find(|&o| o != m).unwrap()));
        }
        Ok(KummerElem { c })
    }

    pub fn zero(f: &Arc<CycloField>, n: u32) -> KummerElem {
        KummerElem { c: vec![RatFunc::zero(f); n as usize] }
    }

    pub fn from_ratfunc(a: RatFunc, n: u32) -> KummerElem {
        let f = a.field().clone();
        let mut c = vec![RatFunc::zero(&f); n as usize];
        c[0] = a;
        KummerElem { c }
    }

    pub fn constant(a: &FieldElem, n: u32) -> KummerElem {
        KummerElem::from_ratfunc(RatFunc::constant(a), n)
    }

    /// y^k for any integer k.
    pub fn y_pow(f: &Arc<CycloField>, n: u32, k: i64) -> KummerElem {
        let nn = n as i64;
        let (q, r) = (k.div_euclid(nn), k.rem_euclid(nn));
        let xq = if q >= 0 {
            RatFunc::from_poly(Poly::x(f).pow(q as u32))
        } else {
            RatFunc::new(Poly::one(f), Poly::x(f).pow((-q) as u32)).expect("nonzero")
        };
        let mut c = vec![RatFunc::zero(f); n as usize];
        c[r as usize] = xq;
        KummerElem { c }
    }

    /// sum_j a_j y^j with a_j constant.
    pub fn from_y_coeffs(cs: &[FieldElem], n: u32) -> KummerElem {
        let f = cs[0].field().clone();
        let mut out = KummerElem::zero(&f, n);
        for (j, a) in cs.iter().enumerate() {
            out = out.add(&KummerElem::y_pow(&f, n, j as i64).scale(a));
        }
        out
    }

    pub fn n(&self) -> u32 {
        self.c.len() as u32
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.c[0].field()
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    /// The element lies in F(x).
    pub fn is_rational(&self) -> bool {
        self.c.iter().skip(1).all(|a| a.is_zero())
    }

    fn check(&self, o: &KummerElem) {
        assert_eq!(self.n(), o.n(), "Kummer elements of different degree");
    }

    pub fn add(&self, o: &KummerElem) -> KummerElem {
        self.check(o);
        KummerElem { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &KummerElem) -> KummerElem {
        self.check(o);
        KummerElem { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> KummerElem {
        KummerElem { c: self.c.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, s: &FieldElem) -> KummerElem {
        KummerElem { c: self.c.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn scale_rat(&self, s: &RatFunc) -> KummerElem {
        KummerElem { c: self.c.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn mul(&self, o: &KummerElem) -> KummerElem {
        self.check(o);
        let n = self.c.len();
        let f = self.field().clone();
        let x = RatFunc::x(&f);
        let mut out = vec![RatFunc::zero(&f); n];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut p = a.mul(b);
                if i + j >= n {
                    p = p.mul(&x);
                }
                let k = (i + j) % n;
                out[k] = out[k].add(&p);
            }
        }
        KummerElem { c: out }
    }

    /// Matrix of multiplication by self on the basis 1, y, ..., y^(n-1).
    fn mult_matrix(&self) -> Matrix<RatFunc> {
        let n = self.c.len();
        let f = self.field().clone();
        let cols: Vec<KummerElem> = (0..n).map(|j| self.mul(&KummerElem::y_pow(&f, n as u32, j as i64))).collect();
        Matrix::from_fn(n, n, |i, j| cols[j].c[i].clone())
    }

    pub fn inv(&self) -> Result<KummerElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(KummerElem::from_ratfunc(self.c[0].inv()?, self.n()));
        }
        let f = self.field().clone();
        let m = self.mult_matrix();
        let mut e0 = vec![RatFunc::zero(&f); self.c.len()];
        e0[0] = RatFunc::one(&f);
        let sol = m.solve(&Matrix::column(&e0))?;
        Ok(KummerElem { c: sol.col(0) })
    }

    /// Norm down to F(x).
    pub fn norm(&self) -> Result<RatFunc> {
        if self.is_rational() {
            return Ok((0..self.n()).fold(RatFunc::one(self.field()), |acc, _| acc.mul(&self.c[0])));
        }
        self.mult_matrix().det()
    }

    /// The Galois automorphism y -> zeta_n^k y.
    pub fn galois(&self, k: i64) -> Result<KummerElem> {
        let n = self.n();
        let f = self.field();
        let mut c = Vec::with_capacity(n as usize);
        for (j, a) in self.c.iter().enumerate() {
            c.push(if j == 0 || a.is_zero() { a.clone() } else { a.scale(&f.root_of_unity(n, k * j as i64)?) });
        }
        Ok(KummerElem { c })
    }

    /// Expansion in t = x - p on the branch where y = root; `root^n = p != 0`
    /// unless the element is rational.
    pub fn laurent(&self, p: &FieldElem, root: &FieldElem, prec: i64) -> Result<Laurent> {
        let f = self.field().clone();
        let n = self.n();
        if root.pow(n as u64) != *p {
            return Err(Error::invalid(format!("{root} is not an n-th root of {p}")));
        }
        let mut total: Option<Laurent> = None;
        for (j, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut term = a.laurent(p, prec)?;
            if j > 0 {
                if p.is_zero() {
                    return Err(Error::invalid("cannot expand a fractional power of x at the ramification point x = 0"));
                }
                let shift = (prec - term.start.min(prec)).max(0) as usize + 1;
                let pinv = p.inv()?;
                let bin = binomial_coeffs(&BigRational::new(j.into(), n.into()), shift);
                let rj = root.pow(j as u64);
                let mut scale = rj;
                let mut c = Vec::with_capacity(shift);
                for b in &bin {
                    c.push(scale.scale(b));
                    scale = &scale * &pinv;
                }
                term = term.mul(&Laurent { start: 0, coeffs: c, prec: shift as i64 }, &f);
                term.prec = prec;
                let keep = (prec - term.start).max(0) as usize;
                term.coeffs.truncate(keep);
            }
            total = Some(match total {
                None => term,
                Some(t) => t.add(&term, &f),
            });
        }
        Ok(total.unwrap_or(Laurent { start: prec, coeffs: Vec::new(), prec }))
    }

    pub fn eval(&self, p: &FieldElem, root: &FieldElem) -> Result<FieldElem> {
        let l = self.laurent(p, root, 1)?;
        if l.valuation().is_some_and(|v| v < 0) {
            return Err(Error::invalid(format!("x = {p} is a pole")));
        }
        Ok(l.coeff(0, self.field()))
    }

    /// Substitute x = z^n, y = z: the result lives in F(z).
    /// d/dx, using (y^j)' = j y^j / (n x).
    pub fn derivative(&self) -> KummerElem {
        let f = self.field().clone();
        let n = self.n();
        let x = RatFunc::x(&f);
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if j == 0 || a.is_zero() {
                    return a.derivative();
                }
                let k = RatFunc::constant(&f.from_ratio(j as i64, n as i64)).div(&x).expect("x is nonzero");
                a.derivative().add(&a.mul(&k))
            })
            .collect();
        KummerElem { c }
    }

    pub fn in_z(&self) -> RatFunc {
        let n = self.n() as usize;
        let f = self.field().clone();
        self.c.iter().enumerate().fold(RatFunc::zero(&f), |acc, (j, a)| {
            acc.add(&a.inflate(n).mul(&RatFunc::from_poly(Poly::x(&f).pow(j as u32))))
        })
    }

    /// Denominators of all components, as one polynomial product (monic, squarefree up to repeats).
    pub fn denominators(&self) -> Poly {
        let f = self.field().clone();
        self.c.iter().fold(Poly::one(&f), |acc, a| if a.den().is_constant() { acc } else { acc.mul(a.den()) })
    }
}

impl Scalar for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.field())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn from_i64_like(&self, k: i64) -> Self {
        RatFunc::constant(&self.field().from_int(k))
    }
}

impl Scalar for KummerElem {
    fn zero_like(&self) -> Self {
        KummerElem::zero(self.field(), self.n())
    }
    fn one_like(&self) -> Self {
        KummerElem::constant(&self.field().one(), self.n())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn from_i64_like(&self, k: i64) -> Self {
        KummerElem::constant(&self.field().from_int(k), self.n())
    }
}

pub type KMatrix = Matrix<KummerElem>;

#[derive(Serialize, Deserialize)]
struct RatFuncJson {
    num: Vec<FieldElem>,
    den: Vec<FieldElem>,
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFuncJson { num: self.num.c.clone(), den: self.den.c.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RatFuncJson::deserialize(d)?;
        let f = raw.den.first().ok_or_else(|| D::Error::custom("empty denominator"))?.field().clone();
        if raw.num.iter().chain(&raw.den).any(|c| c.field().order() != f.order()) {
            return Err(D::Error::custom("coefficients from different fields"));
        }
        RatFunc::new(Poly::new(&f, raw.num), Poly::new(&f, raw.den)).map_err(D::Error::custom)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = Vec::<FieldElem>::deserialize(d)?;
        let f = c.first().ok_or_else(|| D::Error::custom("empty polynomial"))?.field().clone();
        if c.iter().any(|x| x.field().order() != f.order()) {
            return Err(D::Error::custom("coefficients from different fields"));
        }
        Ok(Poly::new(&f, c))
    }
}

impl Serialize for KummerElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.c.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KummerElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        KummerElem::new(Vec::<RatFunc>::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn poly_division_and_gcd() {
        let f = CycloField::new(1).unwrap();
        let a = Poly::linear(&f.from_int(2)).mul(&Poly::linear(&f.from_int(3)));
        let b = Poly::linear(&f.from_int(3)).mul(&Poly::linear(&f.from_int(5)));
        assert_eq!(a.gcd(&b).unwrap(), Poly::linear(&f.from_int(3)));
        let (qq, r) = a.divrem(&Poly::linear(&f.from_int(2))).unwrap();
        assert!(r.is_zero());
        assert_eq!(qq, Poly::linear(&f.from_int(3)));
        // (x-2)(x-3) at x = 2 + t is t^2 - t... coefficients [0, -1, 1]
        assert_eq!(a.taylor(&f.from_int(2)), vec![f.zero(), f.from_int(-1), f.one()]);
    }

    #[test]
    fn geometric_series() {
        let f = CycloField::new(1).unwrap();
        let r = RatFunc::new(Poly::one(&f), Poly::linear(&f.from_int(9))).unwrap();
        let l = r.laurent(&f.from_int(4), 3).unwrap();
        assert_eq!(l.start, 0);
        assert_eq!(l.coeffs, vec![f.from_ratio(-1, 5), f.from_ratio(-1, 25), f.from_ratio(-1, 125)]);
        let x = RatFunc::x(&f).laurent(&f.zero(), 3).unwrap();
        assert_eq!(x.valuation(), Some(1));
        let pole = RatFunc::new(Poly::x(&f), Poly::linear(&f.from_int(4)).pow(2)).unwrap();
        let l = pole.laurent(&f.from_int(4), 0).unwrap();
        assert_eq!((l.start, l.coeffs.clone()), (-2, vec![f.from_int(4), f.one()]));
    }

    #[test]
    fn sqrt_x_expansion_squares_back() {
        let f = CycloField::new(1).unwrap();
        let y = KummerElem::y_pow(&f, 2, 1);
        let l = y.laurent(&f.from_int(4), &f.from_int(2), 3).unwrap();
        assert_eq!(l.coeffs, vec![f.from_int(2), f.from_ratio(1, 4), f.from_ratio(-1, 64)]);
        // squaring the truncation gives x = 4 + t up to t^3
        let sq = l.mul(&l, &f);
        assert_eq!(sq.coeffs, vec![f.from_int(4), f.one(), f.zero()]);
        assert!(y.laurent(&f.from_int(4), &f.from_int(3), 3).is_err());
    }

    #[test]
    fn kummer_field_arithmetic() {
        let f = CycloField::new(12).unwrap();
        for n in [2u32, 3] {
            let y = KummerElem::y_pow(&f, n, 1);
            let yn = (0..n).fold(KummerElem::constant(&f.one(), n), |acc, _| acc.mul(&y));
            assert_eq!(yn, KummerElem::from_ratfunc(RatFunc::x(&f), n));
            let u = KummerElem::from_y_coeffs(&[f.from_int(-1), f.one()], n);
            let ui = u.inv().unwrap();
            assert_eq!(u.mul(&ui), KummerElem::constant(&f.one(), n));
            assert_eq!(y.galois(1).unwrap(), y.scale(&f.root_of_unity(n, 1).unwrap()));
        }
        // N(y - 1) = 1 - x for n = 2
        let u = KummerElem::from_y_coeffs(&[f.from_int(-1), f.one()], 2);
        assert_eq!(u.norm().unwrap(), RatFunc::from_poly(Poly::new(&f, vec![f.one(), f.from_int(-1)])));
    }

    #[test]
    fn nth_roots() {
        assert_eq!(rational_nth_root(&q(16, 9), 2), Some(q(4, 3)));
        assert_eq!(rational_nth_root(&q(-8, 1), 3), Some(q(-2, 1)));
        assert_eq!(rational_nth_root(&q(2, 1), 2), None);
    }

    #[test]
    fn json_round_trip() {
        let f = CycloField::new(8).unwrap();
        let e = KummerElem::from_y_coeffs(&[f.sqrt_prime(2).unwrap(), f.zeta_pow(1)], 2)
            .scale_rat(&RatFunc::new(Poly::one(&f), Poly::linear(&f.from_int(9))).unwrap());
        let s = serde_json::to_string(&e).unwrap();
        let back: KummerElem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
