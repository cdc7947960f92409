//! Matrices of truncated Laurent-Puiseux series in t^{1/m}.
//!
//! A term with key `k` stands for `t^{k/m}`. Zero coefficients are never
//! stored. `trunc`, when present, is an exclusive bound: every coefficient at
//! an exponent `>= trunc/m` is unknown.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{CycloField, FieldElem};
use crate::linalg::FMatrix;

#[derive(Clone, Debug)]
pub struct PuiseuxMatrix {
    field: Arc<CycloField>,
    dim: usize,
    ram: u32,
    terms: BTreeMap<i64, FMatrix>,
    trunc: Option<i64>,
}

impl PartialEq for PuiseuxMatrix {
    fn eq(&self, o: &Self) -> bool {
        self.field.order() == o.field.order()
            && self.dim == o.dim
            && self.ram == o.ram
            && self.trunc == o.trunc
            && self.terms == o.terms
    }
}

impl PuiseuxMatrix {
    pub fn zero(field: &Arc<CycloField>, dim: usize, ram: u32) -> Self {
        assert!(ram > 0, "ramification must be positive");
        PuiseuxMatrix { field: field.clone(), dim, ram, terms: BTreeMap::new(), trunc: None }
    }

    /// `c * t^{k/ram}`.
    pub fn monomial(c: &FMatrix, k: i64, ram: u32) -> Self {
        let f = c.get(0, 0).field().clone();
        let mut s = Self::zero(&f, c.rows(), ram);
        s.add_term(k, c);
        s
    }

    pub fn constant(c: &FMatrix) -> Self {
        Self::monomial(c, 0, 1)
    }

    pub fn identity(field: &Arc<CycloField>, dim: usize) -> Self {
        Self::constant(&FMatrix::identity_like(dim, &field.one()))
    }

    /// Laurent polynomial from `(integer exponent, coefficient)` pairs.
    pub fn laurent(field: &Arc<CycloField>, dim: usize, terms: &[(i64, FMatrix)]) -> Self {
        let mut s = Self::zero(field, dim, 1);
        for (k, c) in terms {
            s.add_term(*k, c);
        }
        s
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn trunc(&self) -> Option<BigRational> {
        self.trunc.map(|k| ratio(k, self.ram))
    }

    pub fn with_trunc(mut self, k: i64) -> Self {
        self.trunc = Some(k);
        self.terms.retain(|e, _| *e < k);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &FMatrix)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn term(&self, k: i64) -> FMatrix {
        self.terms.get(&k).cloned().unwrap_or_else(|| self.zero_matrix())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest stored exponent key (units of 1/ram).
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_key(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Every stored exponent is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|k| k % self.ram as i64 == 0)
    }

    fn zero_matrix(&self) -> FMatrix {
        FMatrix::zeros_like(self.dim, self.dim, &self.field.zero())
    }

    fn add_term(&mut self, k: i64, c: &FMatrix) {
        if self.trunc.is_some_and(|t| k >= t) {
            return;
        }
        let sum = match self.terms.remove(&k) {
            Some(old) => old.add(c).expect("shape checked by caller"),
            None => c.clone(),
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    /// Re-express over t^{1/r}; `r` must be a multiple of the current ramification.
    pub fn refine(&self, r: u32) -> Result<Self> {
        if !r.is_multiple_of(self.ram) {
            return Err(Error::invalid(format!("ramification {r} is not a multiple of {}", self.ram)));
        }
        let s = (r / self.ram) as i64;
        Ok(PuiseuxMatrix {
            field: self.field.clone(),
            dim: self.dim,
            ram: r,
            terms: self.terms.iter().map(|(k, c)| (k * s, c.clone())).collect(),
            trunc: self.trunc.map(|t| t * s),
        })
    }

    /// Smallest ramification that represents the same series.
    pub fn normalized(&self) -> Self {
        let mut g = self.ram as i64;
        for k in self.terms.keys().chain(self.trunc.iter()) {
            g = g.gcd(k);
        }
        let g = g.max(1);
        PuiseuxMatrix {
            field: self.field.clone(),
            dim: self.dim,
            ram: self.ram / g as u32,
            terms: self.terms.iter().map(|(k, c)| (k / g, c.clone())).collect(),
            trunc: self.trunc.map(|t| t / g),
        }
    }

    fn common(&self, o: &Self) -> Result<(Self, Self)> {
        if self.dim != o.dim {
            return Err(Error::invalid("series matrices of different sizes"));
        }
        if self.field.order() != o.field.order() {
            return Err(Error::FieldMismatch(self.field.order(), o.field.order()));
        }
        let r = num_integer::lcm(self.ram, o.ram);
        Ok((self.refine(r)?, o.refine(r)?))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let (mut a, b) = self.common(o)?;
        a.trunc = min_opt(a.trunc, b.trunc);
        if let Some(t) = a.trunc {
            a.terms.retain(|k, _| *k < t);
        }
        for (k, c) in b.terms {
            a.add_term(k, &c);
        }
        Ok(a)
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = c.neg();
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let (a, b) = self.common(o)?;
        let trunc = match (a.trunc, b.trunc) {
            (None, None) => None,
            (ta, tb) => {
                let va = a.valuation();
                let vb = b.valuation();
                let x = ta.map(|t| t + vb.unwrap_or(t));
                let y = tb.map(|t| t + va.unwrap_or(t));
                min_opt(x, y)
            }
        };
        let mut out = PuiseuxMatrix { trunc, ..Self::zero(&a.field, a.dim, a.ram) };
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                out.add_term(ka + kb, &ca.mul(cb)?);
            }
        }
        Ok(out)
    }

    /// Multiply every coefficient on the left by a constant matrix.
    pub fn left_mul(&self, c: &FMatrix) -> Result<Self> {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (k, m) in &self.terms {
            out.add_term(*k, &c.mul(m)?);
        }
        Ok(out)
    }

    pub fn right_mul(&self, c: &FMatrix) -> Result<Self> {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (k, m) in &self.terms {
            out.add_term(*k, &m.mul(c)?);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &FieldElem) -> Self {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (k, m) in &self.terms {
            out.add_term(*k, &m.scale(s));
        }
        out
    }

    /// d/dt.
    pub fn derivative(&self) -> Self {
        let r = self.ram as i64;
        let mut out = Self { terms: BTreeMap::new(), trunc: self.trunc.map(|t| t - r), ..self.clone() };
        for (k, c) in &self.terms {
            if *k != 0 {
                let q = ratio(*k, self.ram);
                out.add_term(k - r, &c.map(|x| x.scale(&q)));
            }
        }
        out
    }

    /// The automorphism t^{1/m} -> zeta_m t^{1/m}; requires ram | m and zeta_m in the field.
    pub fn gamma(&self, m: u32) -> Result<Self> {
        if !m.is_multiple_of(self.ram) {
            return Err(Error::invalid(format!("gamma of order {m} does not act on t^(1/{})", self.ram)));
        }
        let s = (m / self.ram) as i64;
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (k, c) in &self.terms {
            let z = self.field.root_of_unity(m, k * s)?;
            out.add_term(*k, &c.scale(&z));
        }
        Ok(out)
    }

    /// Apply an entrywise map to every coefficient (e.g. conjugation).
    pub fn map_coeffs(&self, mut f: impl FnMut(&FMatrix) -> Result<FMatrix>) -> Result<Self> {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (k, c) in &self.terms {
            out.add_term(*k, &f(c)?);
        }
        Ok(out)
    }

    /// Drop every term with exponent above `num/den`.
    pub fn truncate_above(&self, num: i64, den: u32) -> Self {
        let bound = ratio(num, den);
        let mut out = self.clone();
        out.terms.retain(|k, _| ratio(*k, self.ram) <= bound);
        out
    }

    /// Entries of the trace series, keyed like the terms.
    pub fn trace(&self) -> BTreeMap<i64, FieldElem> {
        self.terms.iter().map(|(k, c)| (*k, c.trace())).filter(|(_, t)| !t.is_zero()).collect()
    }

    /// Integral exponents only; returns `(exponent, coefficient)` pairs.
    pub fn laurent_terms(&self) -> Result<Vec<(i64, FMatrix)>> {
        if !self.is_integral() {
            return Err(Error::internal("fractional exponent in a Laurent series"));
        }
        let r = self.ram as i64;
        Ok(self.terms.iter().map(|(k, c)| (k / r, c.clone())).collect())
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn ratio(k: i64, r: u32) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(r))
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp_num: i64,
    exp_den: u32,
    matrix: Vec<Vec<FieldElem>>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    #[serde(rename = "M")]
    field: u32,
    m: u32,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    trunc: Option<[i64; 2]>,
    terms: Vec<TermRepr>,
}

impl Serialize for PuiseuxMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let g = k.gcd(&(self.ram as i64)).max(1);
                TermRepr { exp_num: k / g, exp_den: self.ram / g as u32, matrix: c.to_rows() }
            })
            .collect();
        SeriesRepr { field: self.field.order(), m: self.ram, dim: self.dim, trunc: self.trunc.map(|t| [t, self.ram as i64]), terms }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PuiseuxMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeriesRepr::deserialize(d)?;
        if r.m == 0 {
            return Err(D::Error::custom("ramification must be positive"));
        }
        let field = CycloField::new(r.field).map_err(D::Error::custom)?;
        let mut s = PuiseuxMatrix::zero(&field, r.dim, r.m);
        for t in &r.terms {
            if t.exp_den == 0 || r.m % t.exp_den != 0 {
                return Err(D::Error::custom("exponent denominator does not divide m"));
            }
            let c = FMatrix::from_rows(t.matrix.clone()).map_err(D::Error::custom)?;
            if c.rows() != r.dim || c.cols() != r.dim {
                return Err(D::Error::custom("coefficient has the wrong shape"));
            }
            if c.entries().iter().any(|x| x.field().order() != field.order()) {
                return Err(D::Error::custom("coefficients from different fields"));
            }
            s.add_term(t.exp_num * (r.m / t.exp_den) as i64, &c);
        }
        if let Some([n, d]) = r.trunc {
            if d != r.m as i64 {
                return Err(D::Error::custom("truncation must use denominator m"));
            }
            s = s.with_trunc(n);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Arc<CycloField> {
        CycloField::new(8).unwrap()
    }

    fn diag(f: &Arc<CycloField>, d: &[i64]) -> FMatrix {
        FMatrix::from_fn(d.len(), d.len(), |i, j| if i == j { f.from_int(d[i]) } else { f.zero() })
    }

    #[test]
    fn product_of_fractional_powers() {
        let f = f();
        let a = PuiseuxMatrix::monomial(&diag(&f, &[1, 2]), 1, 2);
        let b = PuiseuxMatrix::monomial(&diag(&f, &[1, 1]), -1, 4);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.ram(), 4);
        assert_eq!(p.term(1), diag(&f, &[1, 2]));
        let sq = a.mul(&a).unwrap().normalized();
        assert!(sq.is_integral());
        assert_eq!(sq.laurent_terms().unwrap(), vec![(1, diag(&f, &[1, 4]))]);
    }

    #[test]
    fn derivative_and_gamma() {
        let f = f();
        let a = PuiseuxMatrix::monomial(&diag(&f, &[4, 0]), 1, 4);
        let d = a.derivative();
        assert_eq!(d.term(-3), diag(&f, &[1, 0]));
        let g = a.gamma(4).unwrap();
        assert_eq!(g.term(1), diag(&f, &[4, 0]).scale(&f.sqrt_minus_one().unwrap()));
        assert!(a.gamma(2).is_err());
    }

    #[test]
    fn truncation_propagates() {
        let f = f();
        let a = PuiseuxMatrix::monomial(&diag(&f, &[1, 1]), -2, 1).with_trunc(3);
        let b = PuiseuxMatrix::monomial(&diag(&f, &[1, 1]), 0, 1);
        let s = a.add(&b).unwrap();
        assert_eq!(s.trunc(), Some(BigRational::from_integer(3.into())));
        let p = a.mul(&a).unwrap();
        assert_eq!(p.trunc(), Some(BigRational::from_integer(1.into())));
    }

    #[test]
    fn json_round_trip() {
        let f = f();
        let a = PuiseuxMatrix::monomial(&diag(&f, &[1, -1]), -5, 2)
            .add(&PuiseuxMatrix::monomial(&diag(&f, &[3, 0]), -1, 1))
            .unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"exp_num\":-5"));
        let b: PuiseuxMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
