//! Classical Lie algebras in their standard representations and the seed
//! matrices placed at marked points.
//!
//! Forms: `J = [[0, I], [-I, 0]]` for sp(2l) and `Q = [[0, I], [I, 0]]` for
//! so(2l), so the diagonal torus is `diag(r, -r)` in both cases.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{first_primes, q_linear_rank, sqrt_conductor, CycloField, FieldElem};
use crate::linalg::{FMatrix, Matrix, Scalar};
use crate::puiseux::PuiseuxMatrix;
use crate::roots::Kind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "algebra", content = "n", rename_all = "lowercase")]
pub enum Algebra {
    Sl(usize),
    Sp(usize),
    So(usize),
    Gl(usize),
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Sl(n) => write!(f, "sl{n}"),
            Algebra::Sp(n) => write!(f, "sp{n}"),
            Algebra::So(n) => write!(f, "so{n}"),
            Algebra::Gl(n) => write!(f, "gl{n}"),
        }
    }
}

impl Algebra {
    /// Standard representation of the simple algebra of type `kind`.
    pub fn for_kind(kind: Kind, rank: usize) -> Result<Algebra> {
        match kind {
            Kind::A if rank >= 1 => Ok(Algebra::Sl(rank + 1)),
            Kind::C if rank >= 2 => Ok(Algebra::Sp(2 * rank)),
            Kind::D if rank >= 3 => Ok(Algebra::So(2 * rank)),
            Kind::A | Kind::C | Kind::D => Err(Error::invalid(format!("rank {rank} is not valid for type {kind}"))),
            _ => Err(Error::unsupported(format!("matrix representation of type {kind}"))),
        }
    }

    pub fn kind_rank(&self) -> Option<(Kind, usize)> {
        match *self {
            Algebra::Sl(n) if n >= 2 => Some((Kind::A, n - 1)),
            Algebra::Sp(n) if n >= 4 => Some((Kind::C, n / 2)),
            Algebra::So(n) if n >= 6 => Some((Kind::D, n / 2)),
            _ => None,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Algebra::Sl(n) | Algebra::Sp(n) | Algebra::So(n) | Algebra::Gl(n) => n,
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            Algebra::Sl(n) => n - 1,
            Algebra::Sp(n) | Algebra::So(n) => n / 2,
            Algebra::Gl(n) => n,
        }
    }

    pub fn dim(&self) -> usize {
        let n = self.n();
        let l = n / 2;
        match self {
            Algebra::Sl(_) => n * n - 1,
            Algebra::Sp(_) => 2 * l * l + l,
            Algebra::So(_) => 2 * l * l - l,
            Algebra::Gl(_) => n * n,
        }
    }

    /// Integer matrix of the invariant bilinear form, if any.
    pub fn form(&self) -> Option<Vec<Vec<i64>>> {
        let n = self.n();
        let l = n / 2;
        let sign = match self {
            Algebra::Sp(_) => -1,
            Algebra::So(_) => 1,
            _ => return None,
        };
        let mut f = vec![vec![0; n]; n];
        for i in 0..l {
            f[i][l + i] = 1;
            f[l + i][i] = sign;
        }
        Some(f)
    }

    /// The defining identity of the algebra, over any scalar ring.
    pub fn contains<T: Scalar>(&self, x: &Matrix<T>) -> bool {
        let n = self.n();
        if x.rows() != n || x.cols() != n {
            return false;
        }
        match self {
            Algebra::Gl(_) => true,
            Algebra::Sl(_) => x.trace().is_zero_elem(),
            Algebra::Sp(_) | Algebra::So(_) => {
                let f = self.form().expect("form exists");
                let s = x.get(0, 0);
                let apply = |acc: T, c: i64, v: &T| -> T {
                    match c {
                        0 => acc,
                        1 => acc.plus(v),
                        -1 => acc.minus(v),
                        _ => acc.plus(&v.times(&s.from_i64_like(c))),
                    }
                };
                (0..n).all(|i| {
                    (0..n).all(|j| {
                        let mut acc = s.zero_like();
                        for k in 0..n {
                            acc = apply(acc, f[k][j], x.get(k, i));
                            acc = apply(acc, f[i][k], x.get(k, j));
                        }
                        acc.is_zero_elem()
                    })
                })
            }
        }
    }

    /// Group membership for the form-preserving groups: `X^T F X = F`.
    pub fn contains_group(&self, x: &FMatrix) -> bool {
        let Some(form) = self.form() else { return true };
        let f = x.get(0, 0).field().clone();
        let fm = FMatrix::from_fn(self.n(), self.n(), |i, j| f.from_int(form[i][j]));
        x.transpose().mul(&fm).and_then(|m| m.mul(x)).map(|m| m == fm).unwrap_or(false)
    }

    /// A basis of elementary-ish matrices, in a fixed order.
    pub fn basis(&self, field: &Arc<CycloField>) -> Vec<FMatrix> {
        let n = self.n();
        let l = n / 2;
        let mut out = Vec::new();
        let mut push = |entries: &[(usize, usize, i64)]| {
            let mut m = FMatrix::zeros_like(n, n, &field.zero());
            for &(i, j, c) in entries {
                m.set(i, j, m.get(i, j) + &field.from_int(c));
            }
            out.push(m);
        };
        match self {
            Algebra::Gl(_) => {
                for i in 0..n {
                    for j in 0..n {
                        push(&[(i, j, 1)]);
                    }
                }
            }
            Algebra::Sl(_) => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            push(&[(i, j, 1)]);
                        }
                    }
                }
                for i in 0..n - 1 {
                    push(&[(i, i, 1), (i + 1, i + 1, -1)]);
                }
            }
            Algebra::Sp(_) => {
                for i in 0..l {
                    for j in 0..l {
                        push(&[(i, j, 1), (l + j, l + i, -1)]);
                    }
                }
                for i in 0..l {
                    for j in i..l {
                        push(&[(i, l + j, 1), (j, l + i, 1)].as_slice()[..if i == j { 1 } else { 2 }]);
                        push(&[(l + i, j, 1), (l + j, i, 1)].as_slice()[..if i == j { 1 } else { 2 }]);
                    }
                }
            }
            Algebra::So(_) => {
                for i in 0..l {
                    for j in 0..l {
                        push(&[(i, j, 1), (l + j, l + i, -1)]);
                    }
                }
                for i in 0..l {
                    for j in i + 1..l {
                        push(&[(i, l + j, 1), (j, l + i, -1)]);
                        push(&[(l + i, j, 1), (l + j, i, -1)]);
                    }
                }
            }
        }
        out
    }
}

/// A matrix together with the algebra it was checked to lie in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LieMatrix {
    pub algebra: Algebra,
    pub entries: FMatrix,
}

impl LieMatrix {
    pub fn new(algebra: Algebra, entries: FMatrix) -> Result<LieMatrix> {
        if !algebra.contains(&entries) {
            return Err(Error::invalid(format!("matrix is not in {algebra}")));
        }
        Ok(LieMatrix { algebra, entries })
    }
}

/// Smallest cyclotomic order holding sqrt of the first `count` primes.
pub fn torus_field_order(count: usize) -> u32 {
    first_primes(count).into_iter().fold(1, |acc, p| acc.lcm(&sqrt_conductor(p)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceCertificate {
    /// The l chosen eigenvalues r_i.
    pub values: Vec<FieldElem>,
    /// Rank over Q of {1, r_1, ..., r_l}.
    pub rank: usize,
    pub independent: bool,
}

pub fn independence_certificate(values: &[FieldElem]) -> Result<IndependenceCertificate> {
    let f = values.first().ok_or_else(|| Error::invalid("no eigenvalues"))?.field().clone();
    let mut all = vec![f.one()];
    all.extend(values.iter().cloned());
    let rank = q_linear_rank(&all)?;
    Ok(IndependenceCertificate { values: values.to_vec(), rank, independent: rank == values.len() + 1 })
}

/// Diagonal torus element with eigenvalues sqrt of the first l primes.
pub fn generic_torus_seed(kind: Kind, rank: usize, f: &Arc<CycloField>) -> Result<(LieMatrix, IndependenceCertificate)> {
    let alg = Algebra::for_kind(kind, rank)?;
    let r: Vec<FieldElem> = first_primes(rank).into_iter().map(|p| f.sqrt_prime(p)).collect::<Result<_>>()?;
    let mut d = r.clone();
    match alg {
        Algebra::Sl(_) => d.push(-r.iter().fold(f.zero(), |a, x| &a + x)),
        _ => d.extend(r.iter().map(|x| -x)),
    }
    let n = alg.n();
    let m = FMatrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { f.zero() });
    Ok((LieMatrix::new(alg, m)?, independence_certificate(&r)?))
}

/// Sum of all positive root vectors.
pub fn principal_nilpotent(kind: Kind, rank: usize, f: &Arc<CycloField>) -> Result<LieMatrix> {
    let alg = Algebra::for_kind(kind, rank)?;
    let n = alg.n();
    let l = rank;
    let mut m = FMatrix::zeros_like(n, n, &f.zero());
    let mut add = |i: usize, j: usize, c: i64| m.set(i, j, m.get(i, j) + &f.from_int(c));
    match kind {
        Kind::A => {
            for i in 0..n {
                for j in i + 1..n {
                    add(i, j, 1);
                }
            }
        }
        Kind::C => {
            for i in 0..l {
                for j in i + 1..l {
                    add(i, j, 1);
                    add(l + j, l + i, -1);
                    add(i, l + j, 1);
                    add(j, l + i, 1);
                }
                add(i, l + i, 1);
            }
        }
        Kind::D => {
            for i in 0..l {
                for j in i + 1..l {
                    add(i, j, 1);
                    add(l + j, l + i, -1);
                    add(i, l + j, 1);
                    add(j, l + i, -1);
                }
            }
        }
        _ => unreachable!("for_kind rejects other kinds"),
    }
    LieMatrix::new(alg, m)
}

/// dim of the centraliser of `x` in `alg`.
pub fn ad_kernel_dim(alg: Algebra, x: &FMatrix) -> Result<usize> {
    if !alg.contains(x) {
        return Err(Error::invalid(format!("matrix is not in {alg}")));
    }
    let f = x.get(0, 0).field().clone();
    let basis = alg.basis(&f);
    let n = alg.n();
    let cols: Vec<FMatrix> = basis.iter().map(|b| x.commutator(b)).collect::<Result<_>>()?;
    // One row per basis element: the commutators of elementary matrices with a
    // diagonal matrix then have disjoint supports and elimination never inverts.
    let big = FMatrix::from_fn(basis.len(), n * n, |r, c| cols[r].get(c / n, c % n).clone());
    Ok(basis.len() - big.rank()?)
}

/// The pair (A01, A02) of the irregular seed A01/t^2 + A02/t.
pub fn irregular_parts(kind: Kind, rank: usize, f: &Arc<CycloField>) -> Result<(LieMatrix, LieMatrix)> {
    let alg = Algebra::for_kind(kind, rank)?;
    let n = alg.n();
    let l = rank;
    let z = || FMatrix::zeros_like(n, n, &f.zero());
    let (mut a1, mut a2) = (z(), z());
    match kind {
        Kind::A => {
            for i in 0..l {
                a1.set(i + 1, i, f.one());
            }
            a2.set(0, l, f.one());
        }
        Kind::C => {
            // Block form [[U, 0], [V, -U]] with [[0, sV], [0, 0]] in the basis
            // where the form is anti-diagonal, then moved to the J basis.
            let pos = |i: usize| if i < l { i } else { l + (2 * l - 1 - i) };
            let put = |m: &mut FMatrix, i: usize, j: usize, c: i64| m.set(pos(i), pos(j), f.from_int(c));
            for i in 0..l - 1 {
                put(&mut a1, i + 1, i, 1);
                put(&mut a1, l + i + 1, l + i, -1);
            }
            put(&mut a1, l, l - 1, 1);
            let s = if l % 2 == 1 { 1 } else { -1 };
            put(&mut a2, 0, 2 * l - 1, s);
        }
        _ => return Err(Error::unsupported(format!("irregular seed for type {kind}; use a toric point"))),
    }
    Ok((LieMatrix::new(alg, a1)?, LieMatrix::new(alg, a2)?))
}

pub fn irregular_seed(kind: Kind, rank: usize, f: &Arc<CycloField>) -> Result<PuiseuxMatrix> {
    let (a1, a2) = irregular_parts(kind, rank, f)?;
    Ok(PuiseuxMatrix::laurent(f, a1.algebra.n(), &[(-2, a1.entries), (-1, a2.entries)]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeReport {
    pub irregular: bool,
    pub pole_order: i64,
    pub slope_num: i64,
    pub slope_den: u32,
    pub coprime: bool,
    /// Order in which the leading nilpotent moves the basis vectors.
    pub chain: Vec<usize>,
    /// Shearing exponent of basis vector i is `shear[i] / n`.
    pub shear: Vec<i64>,
    pub leading: Option<FMatrix>,
    /// Ascending coefficients of det(lambda - leading).
    pub charpoly: Vec<FieldElem>,
    /// The sheared leading term equals the sum of the two top seed terms.
    pub leading_is_seed_sum: bool,
}

/// Shear a Laurent seed whose leading term is a single nilpotent chain and
/// read off its slope.
pub fn unique_slope(seed: &PuiseuxMatrix) -> Result<SlopeReport> {
    let terms = seed.laurent_terms()?;
    let n = seed.dim();
    let f = seed.field().clone();
    let p = terms.first().map(|(k, _)| -k).unwrap_or(0);
    if p <= 1 {
        return Ok(SlopeReport {
            irregular: false,
            pole_order: p.max(0),
            slope_num: 0,
            slope_den: 1,
            coprime: true,
            chain: Vec::new(),
            shear: Vec::new(),
            leading: None,
            charpoly: Vec::new(),
            leading_is_seed_sum: false,
        });
    }
    let top = seed.term(-p);
    let chain = nilpotent_chain(&top)?;
    let next = seed.term(-p + 1);
    if next.get(chain[0], chain[n - 1]).is_zero() {
        return Err(Error::unsupported("no closing entry one order below the leading pole"));
    }
    let mut shear = vec![0i64; n];
    for (k, &c) in chain.iter().enumerate() {
        shear[c] = k as i64;
    }
    let ni = n as i64;
    let ram = u32::try_from(n).map_err(|_| Error::invalid("matrix too large"))?;
    // g A g^{-1} multiplies entry (i, j) by t^{(s_i - s_j)/n}; g' g^{-1} = diag(s_i/n)/t.
    let mut sheared = PuiseuxMatrix::zero(&f, n, ram);
    for (k, c) in &terms {
        for i in 0..n {
            for j in 0..n {
                let x = c.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let mut e = FMatrix::zeros_like(n, n, &f.zero());
                e.set(i, j, x.clone());
                sheared = sheared.add(&PuiseuxMatrix::monomial(&e, k * ni + shear[i] - shear[j], ram))?;
            }
        }
    }
    let dg = FMatrix::from_fn(n, n, |i, j| if i == j { f.from_ratio(shear[i], ni) } else { f.zero() });
    sheared = sheared.add(&PuiseuxMatrix::monomial(&dg, -ni, ram))?;
    let lead_key = -p * ni + 1;
    if sheared.valuation() != Some(lead_key) {
        return Err(Error::unsupported("shearing does not expose a single leading term"));
    }
    let leading = sheared.term(lead_key);
    let charpoly = leading.charpoly()?;
    let c0 = &charpoly[0];
    let binomial = !c0.is_zero() && charpoly[1..n].iter().all(|c| c.is_zero());
    if !binomial {
        return Err(Error::unsupported("sheared leading term is not regular semisimple of the form lambda^n - c"));
    }
    let num = p * ni - 1;
    let leading_is_seed_sum = leading == top.add(&next)?;
    Ok(SlopeReport {
        irregular: true,
        pole_order: p,
        slope_num: num,
        slope_den: ram,
        coprime: num.gcd(&ni) == 1,
        chain,
        shear,
        leading: Some(leading),
        charpoly,
        leading_is_seed_sum,
    })
}

/// The ordering c_0 -> c_1 -> ... when `m` sends e_{c_k} to a multiple of e_{c_{k+1}}.
fn nilpotent_chain(m: &FMatrix) -> Result<Vec<usize>> {
    let n = m.rows();
    let mut next = vec![None; n];
    let mut has_pred = vec![false; n];
    for j in 0..n {
        let targets: Vec<usize> = (0..n).filter(|&i| !m.get(i, j).is_zero()).collect();
        match targets.as_slice() {
            [] => {}
            [i] if !has_pred[*i] => {
                next[j] = Some(*i);
                has_pred[*i] = true;
            }
            _ => return Err(Error::unsupported("leading term is not a weighted path")),
        }
    }
    let start = (0..n).find(|&i| !has_pred[i]).ok_or_else(|| Error::unsupported("leading term has a cycle"))?;
    let mut chain = vec![start];
    while let Some(k) = next[*chain.last().unwrap()] {
        chain.push(k);
        if chain.len() > n {
            return Err(Error::unsupported("leading term has a cycle"));
        }
    }
    if chain.len() != n {
        return Err(Error::unsupported("leading nilpotent is not a single chain"));
    }
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Torus,
    Nilpotent,
    Irregular,
    MaximallyToric,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Torus => "torus",
            Role::Nilpotent => "nilpotent",
            Role::Irregular => "irregular",
            Role::MaximallyToric => "maximally-toric",
        })
    }
}

/// A Laurent polynomial in t with coefficients in the algebra, to be placed
/// at a marked point.
#[derive(Debug, Clone, PartialEq)]
pub struct Seed {
    pub label: String,
    pub role: Role,
    pub series: PuiseuxMatrix,
}

impl Seed {
    pub fn pole_order(&self) -> i64 {
        self.series.valuation().map(|k| -k).unwrap_or(0).max(0)
    }

    /// `(lowest exponent, coefficients from there up to the highest exponent)`.
    pub fn coefficients(&self) -> Result<(i64, Vec<FMatrix>)> {
        let terms = self.series.laurent_terms()?;
        let (Some(lo), Some(hi)) = (terms.first().map(|t| t.0), terms.last().map(|t| t.0)) else {
            return Ok((0, Vec::new()));
        };
        Ok((lo, (lo..=hi).map(|k| self.series.term(k * self.series.ram() as i64)).collect()))
    }
}

impl Serialize for Seed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::{Error as _, SerializeStruct};
        let (lo, coeffs) = self.coefficients().map_err(S::Error::custom)?;
        let mut st = s.serialize_struct("Seed", 5)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("point_role", &self.role)?;
        st.serialize_field("pole_order", &self.pole_order())?;
        st.serialize_field("lowest_exponent", &lo)?;
        st.serialize_field("coefficients", &coeffs)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedPackage {
    pub algebra: Algebra,
    pub seeds: Vec<Seed>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_for(rank: usize) -> Arc<CycloField> {
        CycloField::new(torus_field_order(rank)).unwrap()
    }

    #[test]
    fn basis_sizes_and_membership() {
        let f = CycloField::new(1).unwrap();
        for alg in [Algebra::Sl(3), Algebra::Sp(4), Algebra::Sp(6), Algebra::So(6), Algebra::So(8), Algebra::Gl(2)] {
            let b = alg.basis(&f);
            assert_eq!(b.len(), alg.dim(), "{alg}");
            assert!(b.iter().all(|m| alg.contains(m)), "{alg}");
            let n = alg.n();
            let stacked = FMatrix::from_fn(n * n, b.len(), |r, c| b[c].get(r / n, r % n).clone());
            assert_eq!(stacked.rank().unwrap(), b.len(), "{alg}");
        }
        let id = FMatrix::identity_like(4, &f.one());
        assert!(!Algebra::Sp(4).contains(&id));
        assert!(!Algebra::Sl(4).contains(&id));
    }

    #[test]
    fn sl2_torus_and_nilpotent() {
        let f = CycloField::new(8).unwrap();
        let (a1, cert) = generic_torus_seed(Kind::A, 1, &f).unwrap();
        let s2 = f.sqrt_prime(2).unwrap();
        assert_eq!(a1.entries.get(0, 0), &s2);
        assert_eq!(a1.entries.get(1, 1), &-&s2);
        assert_eq!(cert.rank, 2);
        let e = principal_nilpotent(Kind::A, 1, &f).unwrap();
        assert_eq!(e.entries.get(0, 1), &f.one());
        assert_eq!(ad_kernel_dim(Algebra::Sl(2), &e.entries).unwrap(), 1);
        assert_eq!(ad_kernel_dim(Algebra::Sl(2), &a1.entries).unwrap(), 1);
        let zero = FMatrix::zeros_like(2, 2, &f.zero());
        assert_eq!(ad_kernel_dim(Algebra::Sl(2), &zero).unwrap(), 3);
    }

    #[test]
    fn sp4_torus_pattern() {
        let f = field_for(2);
        let (a1, cert) = generic_torus_seed(Kind::C, 2, &f).unwrap();
        let d: Vec<_> = (0..4).map(|i| a1.entries.get(i, i).clone()).collect();
        let (s2, s3) = (f.sqrt_prime(2).unwrap(), f.sqrt_prime(3).unwrap());
        assert_eq!(d, vec![s2.clone(), s3.clone(), -&s2, -&s3]);
        assert_eq!(cert.rank, 3);
        assert!(generic_torus_seed(Kind::C, 2, &CycloField::new(8).unwrap()).is_err());
    }

    #[test]
    fn principal_nilpotents_have_rank_many_centraliser_dims() {
        let f = CycloField::new(1).unwrap();
        for (k, l) in [(Kind::A, 2), (Kind::A, 3), (Kind::C, 2), (Kind::C, 3), (Kind::D, 3), (Kind::D, 4)] {
            let e = principal_nilpotent(k, l, &f).unwrap();
            let n = e.algebra.n();
            assert!(e.entries.pow(n as u64).unwrap().is_zero());
            assert_eq!(ad_kernel_dim(e.algebra, &e.entries).unwrap(), l, "{k}{l}");
        }
    }

    #[test]
    fn irregular_seed_charpolys() {
        let f = CycloField::new(1).unwrap();
        for (k, l) in [(Kind::A, 1), (Kind::A, 2), (Kind::A, 4), (Kind::C, 2), (Kind::C, 3), (Kind::C, 4)] {
            let (a1, a2) = irregular_parts(k, l, &f).unwrap();
            let cp = a1.entries.add(&a2.entries).unwrap().charpoly().unwrap();
            let n = a1.algebra.n();
            let mut want = vec![f.zero(); n + 1];
            want[0] = f.from_int(-1);
            want[n] = f.one();
            assert_eq!(cp, want, "{k}{l}");
        }
        assert!(irregular_seed(Kind::D, 4, &f).is_err());
    }

    #[test]
    fn slope_of_sl2_seed() {
        let f = CycloField::new(1).unwrap();
        let r = unique_slope(&irregular_seed(Kind::A, 1, &f).unwrap()).unwrap();
        assert!(r.irregular && r.leading_is_seed_sum && r.coprime);
        assert_eq!((r.slope_num, r.slope_den), (3, 2));
        let c = unique_slope(&irregular_seed(Kind::C, 3, &f).unwrap()).unwrap();
        assert_eq!((c.slope_num, c.slope_den), (11, 6));
        let reg = PuiseuxMatrix::laurent(&f, 2, &[(-1, FMatrix::identity_like(2, &f.one()))]);
        assert!(!unique_slope(&reg).unwrap().irregular);
    }
}
