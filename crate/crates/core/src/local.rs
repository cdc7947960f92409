//! Local models at a maximally toric point.
//!
//! A Weyl element is lifted to a signed permutation matrix `g` of finite
//! order `m'`. From it we build `eta` with `eta^{gamma'} = eta g`, a torus
//! equation `A~` with `A~^gamma = g^{-1} A~ g`, and the glued Laurent seed
//! `eta' eta^{-1} + eta A~ eta^{-1}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{rational_sqrt_order, CycloField, FieldElem};
use crate::lie::Algebra;
use crate::linalg::FMatrix;
use crate::puiseux::PuiseuxMatrix;
use crate::roots::Kind;
use crate::weyl::{CycleType, Perm};

/// `e_j -> signs[j] * e_{images[j]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPerm {
    pub images: Vec<usize>,
    pub signs: Vec<i64>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm { images: (0..n).collect(), signs: vec![1; n] }
    }

    /// self after other, as matrices `self * other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let n = self.images.len();
        let mut images = vec![0; n];
        let mut signs = vec![0; n];
        for j in 0..n {
            let k = other.images[j];
            images[j] = self.images[k];
            signs[j] = other.signs[j] * self.signs[k];
        }
        SignedPerm { images, signs }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn matrix(&self, f: &Arc<CycloField>) -> FMatrix {
        let n = self.images.len();
        let mut m = FMatrix::zeros_like(n, n, &f.zero());
        for j in 0..n {
            m.set(self.images[j], j, f.from_int(self.signs[j]));
        }
        m
    }

    /// Cycles of the underlying permutation with the product of their signs.
    pub fn signed_cycles(&self) -> Vec<(Vec<usize>, i64)> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut sign = 1;
            let mut j = s;
            while !seen[j] {
                seen[j] = true;
                cyc.push(j);
                sign *= self.signs[j];
                j = self.images[j];
            }
            out.push((cyc, sign));
        }
        out
    }

    /// Order as a matrix: a cycle of length c contributes c, or 2c when its signs multiply to -1.
    pub fn order(&self) -> u32 {
        self.signed_cycles()
            .iter()
            .fold(1u32, |acc, (c, s)| acc.lcm(&(c.len() as u32 * if *s < 0 { 2 } else { 1 })))
    }
}

/// Lift of the simple reflection `s_i` (1-based) into the group.
pub fn simple_lift(kind: Kind, rank: usize, i: usize) -> Result<SignedPerm> {
    if i == 0 || i > rank {
        return Err(Error::invalid(format!("simple reflection index {i} out of range 1..={rank}")));
    }
    let alg = Algebra::for_kind(kind, rank)?;
    let l = rank;
    let mut p = SignedPerm::identity(alg.n());
    // [[0, 1], [-1, 0]] on the pair (a, b): e_a -> -e_b, e_b -> e_a
    let mut rot = |a: usize, b: usize| {
        p.images[a] = b;
        p.signs[a] = -1;
        p.images[b] = a;
    };
    match kind {
        Kind::A => rot(i - 1, i),
        Kind::C | Kind::D if i < l => {
            rot(i - 1, i);
            rot(l + i - 1, l + i);
        }
        Kind::C => rot(l - 1, 2 * l - 1),
        Kind::D => {
            p.images.swap(l - 2, 2 * l - 1);
            p.images.swap(l - 1, 2 * l - 2);
        }
        _ => unreachable!("for_kind rejects other kinds"),
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToricWitness {
    pub algebra: Algebra,
    pub word: Vec<usize>,
    pub g: FMatrix,
    /// Order m' of g.
    pub order: u32,
    pub torus_rank: usize,
    /// Coordinate permutation: `g e_j = sign_j e_{perm(j)}`.
    pub perm: Vec<usize>,
    pub signs: Vec<i64>,
    /// Order m of the induced automorphism of the torus.
    pub dphi_order: u32,
}

impl ToricWitness {
    pub fn signed_perm(&self) -> SignedPerm {
        SignedPerm { images: self.perm.clone(), signs: self.signs.clone() }
    }

    pub fn cycle_type(&self) -> CycleType {
        Perm::new(self.perm.clone()).expect("lift images form a permutation").cycle_type()
    }

    /// g^{-1} X g.
    pub fn dphi(&self, x: &FMatrix) -> Result<FMatrix> {
        let gi = self.signed_perm_inverse().matrix(x.get(0, 0).field());
        gi.mul(x)?.mul(&self.g)
    }

    fn signed_perm_inverse(&self) -> SignedPerm {
        let n = self.perm.len();
        let mut inv = SignedPerm::identity(n);
        for j in 0..n {
            inv.images[self.perm[j]] = j;
            inv.signs[self.perm[j]] = self.signs[j];
        }
        inv
    }
}

/// Signed permutation matrix lifting the Weyl word, multiplied in word order.
pub fn weyl_lift(kind: Kind, rank: usize, word: &[usize], f: &Arc<CycloField>) -> Result<ToricWitness> {
    let alg = Algebra::for_kind(kind, rank)?;
    let mut p = SignedPerm::identity(alg.n());
    for &i in word {
        p = p.compose(&simple_lift(kind, rank, i)?);
    }
    let g = p.matrix(f);
    let order = p.order();
    if !g.pow(order as u64)?.is_identity() {
        return Err(Error::internal("lifted Weyl element does not have its computed order"));
    }
    if !matches!(alg, Algebra::Sl(_)) && !alg.contains_group(&g) {
        return Err(Error::internal("lifted Weyl element does not preserve the form"));
    }
    let perm = Perm::new(p.images.clone())?;
    Ok(ToricWitness {
        algebra: alg,
        word: word.to_vec(),
        g,
        order,
        torus_rank: alg.rank(),
        dphi_order: perm.order() as u32,
        perm: p.images,
        signs: p.signs,
    })
}

/// Cyclotomic order that holds everything the local model at `w` needs:
/// zeta_{m'} and, for so, the square roots used to split the -1 eigenspace.
pub fn model_field_order(w: &ToricWitness) -> Result<u32> {
    let mut m = w.order.lcm(&w.dphi_order);
    if let (Algebra::So(_), Some(form)) = (w.algebra, w.algebra.form()) {
        let n = w.perm.len();
        let mut norms: Vec<i64> = Vec::new();
        for (cyc, sign) in w.signed_perm().signed_cycles() {
            let c = cyc.len();
            if (sign > 0) != (c % 2 == 0) {
                continue;
            }
            // rational -1 eigenvector: a_{i+1} = -a_i s_{j_i}
            let mut v = vec![0i64; n];
            let mut a = 1;
            for &j in &cyc {
                v[j] = a;
                a = -a * w.signs[j];
            }
            let q: i64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| v[i] * form[i][j] * v[j]).sum();
            if q != 0 {
                norms.push(q);
            }
        }
        if norms.len() % 2 == 1 {
            return Err(Error::unsupported("odd anisotropic part in the -1 eigenspace"));
        }
        for pair in norms.chunks(2) {
            let d = BigRational::from_integer((-pair[0] * pair[1]).into());
            m = m.lcm(&rational_sqrt_order(&d)?);
        }
    }
    Ok(m)
}

/// How representatives of the exponents k/m' are chosen for eta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaNormalization {
    /// k in [0, m').
    Plain,
    /// Symmetric k with the -1 eigenspace split so that eta lies in the group.
    InGroup,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eta {
    pub eta: PuiseuxMatrix,
    pub eta_inv: PuiseuxMatrix,
    /// Columns are eigenvectors of g.
    pub eigenvectors: FMatrix,
    /// eta acts on column i by t^{exponents[i]/m'}.
    pub exponents: Vec<i64>,
    pub normalization: EtaNormalization,
}

/// eta = P diag(t^{k_i/m'}) P^{-1} with g = P diag(zeta^{k_i}) P^{-1}.
pub fn hilbert90_eta(w: &ToricWitness, norm: EtaNormalization) -> Result<Eta> {
    let f = w.g.get(0, 0).field().clone();
    let mp = w.order;
    if !f.order().is_multiple_of(mp) {
        return Err(Error::FieldTooSmall { m: f.order(), need: format!("zeta_{mp}") });
    }
    let n = w.perm.len();
    let mut vecs: Vec<(i64, Vec<FieldElem>)> = Vec::new();
    for (cyc, sign) in w.signed_perm().signed_cycles() {
        let c = cyc.len() as i64;
        for k in 0..c {
            // eigenvalue zeta_{m'}^e with lambda^c = sign
            let e = if sign > 0 { k * mp as i64 / c } else { (2 * k + 1) * mp as i64 / (2 * c) };
            let lambda_inv = f.root_of_unity(mp, -e)?;
            let mut v = vec![f.zero(); n];
            let mut a = f.one();
            for &j in &cyc {
                v[j] = a.clone();
                a = &(&a * &lambda_inv) * &f.from_int(w.signs[j]);
            }
            vecs.push((e, v));
        }
    }
    let m2 = mp as i64;
    let mut exps: Vec<i64> = Vec::with_capacity(n);
    let mut cols: Vec<Vec<FieldElem>> = Vec::with_capacity(n);
    match norm {
        EtaNormalization::Plain => {
            for (e, v) in vecs {
                exps.push(e);
                cols.push(v);
            }
        }
        EtaNormalization::InGroup => {
            let mut minus: Vec<Vec<FieldElem>> = Vec::new();
            for (e, v) in vecs {
                if 2 * e == m2 {
                    minus.push(v);
                } else {
                    exps.push(if 2 * e > m2 { e - m2 } else { e });
                    cols.push(v);
                }
            }
            match w.algebra.form() {
                Some(form) => {
                    let (lag, dual) = hyperbolic_split(&minus, &form, matches!(w.algebra, Algebra::So(_)))?;
                    for v in lag {
                        exps.push(m2 / 2);
                        cols.push(v);
                    }
                    for v in dual {
                        exps.push(-m2 / 2);
                        cols.push(v);
                    }
                }
                None => {
                    for v in minus {
                        exps.push(m2 / 2);
                        cols.push(v);
                    }
                    // det g = 1 makes the exponent sum a multiple of m'; bring it to 0.
                    let mut total: i64 = exps.iter().sum();
                    while total != 0 {
                        let step = if total > 0 { -m2 } else { m2 };
                        let idx = if total > 0 {
                            (0..n).max_by_key(|&i| (exps[i], std::cmp::Reverse(i))).unwrap()
                        } else {
                            (0..n).min_by_key(|&i| (exps[i], i)).unwrap()
                        };
                        exps[idx] += step;
                        total += step;
                    }
                }
            }
        }
    }
    let p = FMatrix::from_fn(n, n, |i, j| cols[j][i].clone());
    let pinv = p.inverse()?;
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &k) in exps.iter().enumerate() {
        groups.entry(k).or_default().push(i);
    }
    let mut eta = PuiseuxMatrix::zero(&f, n, mp);
    let mut eta_inv = PuiseuxMatrix::zero(&f, n, mp);
    for (k, idx) in &groups {
        let proj = FMatrix::from_fn(n, n, |r, c| {
            idx.iter().fold(f.zero(), |acc, &i| &acc + &(p.get(r, i) * pinv.get(i, c)))
        });
        eta = eta.add(&PuiseuxMatrix::monomial(&proj, *k, mp))?;
        eta_inv = eta_inv.add(&PuiseuxMatrix::monomial(&proj, -*k, mp))?;
    }
    Ok(Eta { eta, eta_inv, eigenvectors: p, exponents: exps, normalization: norm })
}

/// `eta^{gamma'} == eta * g`.
pub fn check_eta_identity(eta: &PuiseuxMatrix, g: &FMatrix, order: u32) -> Result<bool> {
    let lhs = eta.refine(order)?.gamma(order)?;
    let rhs = eta.right_mul(g)?.refine(order)?;
    Ok(lhs == rhs)
}

/// Splits a space with a nondegenerate form into two totally isotropic halves
/// in duality (B(u_i, v_j) = delta_ij).
fn hyperbolic_split(
    vecs: &[Vec<FieldElem>],
    form: &[Vec<i64>],
    symmetric: bool,
) -> Result<(Vec<Vec<FieldElem>>, Vec<Vec<FieldElem>>)> {
    let Some(first) = vecs.first() else { return Ok((Vec::new(), Vec::new())) };
    let f = first[0].field().clone();
    let b = |x: &[FieldElem], y: &[FieldElem]| -> FieldElem {
        let mut acc = f.zero();
        for (i, row) in form.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            for (j, &c) in row.iter().enumerate() {
                if c != 0 && !y[j].is_zero() {
                    acc = &acc + &(&(&x[i] * &y[j]) * &f.from_int(c));
                }
            }
        }
        acc
    };
    let axpy = |x: &[FieldElem], a: &FieldElem, y: &[FieldElem]| -> Vec<FieldElem> {
        x.iter().zip(y).map(|(xi, yi)| xi + &(a * yi)).collect()
    };
    let mut rest: Vec<Vec<FieldElem>> = vecs.to_vec();
    let (mut us, mut vs) = (Vec::new(), Vec::new());
    while !rest.is_empty() {
        let u = if !symmetric {
            rest[0].clone()
        } else if let Some(u) = rest.iter().find(|v| b(v, v).is_zero()) {
            u.clone()
        } else {
            let a = &rest[0];
            let (aa, mut found) = (b(a, a), None);
            for w in &rest[1..] {
                let (ab, bb) = (b(a, w), b(w, w));
                let disc = &(&ab * &ab) - &(&aa * &bb);
                let Some(q) = disc.as_rational() else { continue };
                let Ok(root) = f.sqrt_rational(&q) else { continue };
                let c = (&root - &ab).try_div(&bb)?;
                found = Some(axpy(a, &c, w));
                break;
            }
            found.ok_or_else(|| Error::unsupported("no isotropic vector in the -1 eigenspace over this field"))?
        };
        let partner = rest
            .iter()
            .find(|w| !b(&u, w).is_zero())
            .ok_or_else(|| Error::internal("form is degenerate on the -1 eigenspace"))?;
        let s = b(&u, partner).inv()?;
        let mut v: Vec<FieldElem> = partner.iter().map(|x| x * &s).collect();
        if symmetric {
            let half = b(&v, &v).scale(&BigRational::new((-1).into(), 2.into()));
            v = axpy(&v, &half, &u);
        }
        let vu = b(&v, &u);
        let mut next: Vec<Vec<FieldElem>> = Vec::new();
        for w in &rest {
            let beta = -(&b(w, &u).try_div(&vu)?);
            let alpha = -&b(w, &v);
            let w2 = axpy(&axpy(w, &alpha, &u), &beta, &v);
            if w2.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut trial = next.clone();
            trial.push(w2.clone());
            let rows = FMatrix::from_rows(trial)?;
            if rows.rank()? == next.len() + 1 {
                next.push(w2);
            }
        }
        us.push(u);
        vs.push(v);
        rest = next;
    }
    Ok((us, vs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusEquation {
    pub atilde: PuiseuxMatrix,
    /// Per eigenspace: (e with eigenvalue zeta_m^e, basis vectors as diagonals).
    pub eigenspaces: Vec<(i64, Vec<Vec<FieldElem>>)>,
}

/// A~ = sum over eigenspaces of z^{-q/m} sum_j z^{-j-1} b_j, where the
/// eigenvalue zeta_m^e gets q = (m - e) mod m so that A~^gamma = dphi(A~).
pub fn toric_equation(w: &ToricWitness) -> Result<TorusEquation> {
    let f = w.g.get(0, 0).field().clone();
    let m = w.dphi_order;
    if !f.order().is_multiple_of(m) {
        return Err(Error::FieldTooSmall { m: f.order(), need: format!("zeta_{m}") });
    }
    let n = w.perm.len();
    let perm = Perm::new(w.perm.clone())?;
    let mut by_e: BTreeMap<i64, Vec<Vec<FieldElem>>> = BTreeMap::new();
    for cyc in perm.cycles() {
        let c = cyc.len() as i64;
        for k in 0..c {
            let e = k * m as i64 / c;
            let omega = f.root_of_unity(m, e)?;
            let mut v = vec![f.zero(); n];
            let mut a = f.one();
            for &j in &cyc {
                v[j] = a.clone();
                a = &a * &omega;
            }
            let v = project_to_torus(w.algebra, &v);
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            let space = by_e.entry(e).or_default();
            let mut trial = space.clone();
            trial.push(v.clone());
            if FMatrix::from_rows(trial)?.rank()? == space.len() + 1 {
                space.push(normalize_leading(&v)?);
            }
        }
    }
    let total: usize = by_e.values().map(|s| s.len()).sum();
    if total != w.torus_rank {
        return Err(Error::internal(format!("torus eigenbasis has {total} vectors, expected {}", w.torus_rank)));
    }
    let mi = m as i64;
    let mut atilde = PuiseuxMatrix::zero(&f, n, m);
    for (e, basis) in &by_e {
        let q = (mi - e).rem_euclid(mi);
        for (j, b) in basis.iter().enumerate() {
            let d = FMatrix::from_fn(n, n, |r, c| if r == c { b[r].clone() } else { f.zero() });
            atilde = atilde.add(&PuiseuxMatrix::monomial(&d, -q - (j as i64 + 2) * mi, m))?;
        }
    }
    Ok(TorusEquation { atilde, eigenspaces: by_e.into_iter().collect() })
}

/// `A~^gamma == g^{-1} A~ g`.
pub fn check_torus_identity(w: &ToricWitness, atilde: &PuiseuxMatrix) -> Result<bool> {
    let m = atilde.ram().lcm(&w.dphi_order);
    let lhs = atilde.refine(m)?.gamma(w.dphi_order)?;
    let rhs = atilde.map_coeffs(|c| w.dphi(c))?.refine(m)?;
    Ok(lhs == rhs)
}

fn project_to_torus(alg: Algebra, v: &[FieldElem]) -> Vec<FieldElem> {
    let f = v[0].field().clone();
    let n = v.len();
    match alg {
        Algebra::Sl(_) => {
            let mean = v.iter().fold(f.zero(), |a, x| &a + x).scale(&BigRational::new(1.into(), (n as i64).into()));
            v.iter().map(|x| x - &mean).collect()
        }
        Algebra::Sp(_) | Algebra::So(_) => {
            let l = n / 2;
            let half = BigRational::new(1.into(), 2.into());
            let top: Vec<FieldElem> = (0..l).map(|i| (&v[i] - &v[l + i]).scale(&half)).collect();
            top.iter().cloned().chain(top.iter().map(|x| -x)).collect()
        }
        Algebra::Gl(_) => v.to_vec(),
    }
}

fn normalize_leading(v: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let lead = v.iter().find(|x| !x.is_zero()).ok_or_else(|| Error::internal("zero eigenvector"))?;
    let s = lead.inv()?;
    Ok(v.iter().map(|x| x * &s).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToricModel {
    pub witness: ToricWitness,
    pub eta: Eta,
    pub atilde: PuiseuxMatrix,
    /// Laurent polynomial in t, truncated above `q_trunc`.
    pub abar: PuiseuxMatrix,
    pub q_trunc: i64,
    pub eta_identity: bool,
    pub torus_identity: bool,
    pub in_algebra: bool,
}

/// eta' eta^{-1} + eta A~ eta^{-1}.
pub fn glue(eta: &Eta, atilde: &PuiseuxMatrix) -> Result<PuiseuxMatrix> {
    let d = eta.eta.derivative().mul(&eta.eta_inv)?;
    let conj = eta.eta.mul(atilde)?.mul(&eta.eta_inv)?;
    Ok(d.add(&conj)?.normalized())
}

pub fn toric_model(w: &ToricWitness, q_trunc: i64, norm: EtaNormalization) -> Result<ToricModel> {
    let eta = hilbert90_eta(w, norm)?;
    let eq = toric_equation(w)?;
    let eta_identity = check_eta_identity(&eta.eta, &w.g, w.order)?;
    let torus_identity = check_torus_identity(w, &eq.atilde)?;
    let full = glue(&eta, &eq.atilde)?;
    if !full.is_integral() {
        return Err(Error::internal("fractional exponent survives in the glued local model"));
    }
    let abar = full.truncate_above(q_trunc, 1);
    let in_algebra = abar.terms().all(|(_, c)| w.algebra.contains(c));
    Ok(ToricModel {
        witness: w.clone(),
        eta,
        atilde: eq.atilde,
        abar,
        q_trunc,
        eta_identity,
        torus_identity,
        in_algebra,
    })
}

/// The worked SL2 example: g of order 4, the printed eta and A~, and the
/// printed result.
pub mod sl2_example {
    use super::*;

    pub fn field() -> Arc<CycloField> {
        CycloField::new(4).expect("Q(i)")
    }

    fn m(f: &Arc<CycloField>, rows: [[FieldElem; 2]; 2]) -> FMatrix {
        let _ = f;
        FMatrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect()).expect("2x2")
    }

    pub fn g(f: &Arc<CycloField>) -> FMatrix {
        m(f, [[f.zero(), f.one()], [f.from_int(-1), f.zero()]])
    }

    /// 1/2 [[t^{1/4} + t^{-1/4}, i(-t^{1/4} + t^{-1/4})], [i(t^{1/4} - t^{-1/4}), t^{1/4} + t^{-1/4}]].
    pub fn eta(f: &Arc<CycloField>) -> PuiseuxMatrix {
        let h = f.from_ratio(1, 2);
        let hi = &h * &f.sqrt_minus_one().expect("i");
        let plus = m(f, [[h.clone(), -&hi], [hi.clone(), h.clone()]]);
        let minus = m(f, [[h.clone(), hi.clone()], [-&hi, h.clone()]]);
        PuiseuxMatrix::monomial(&plus, 1, 4).add(&PuiseuxMatrix::monomial(&minus, -1, 4)).expect("same shape")
    }

    pub fn eta_inverse(f: &Arc<CycloField>) -> PuiseuxMatrix {
        // eta is t^{1/4} P1 + t^{-1/4} P2 with complementary projections P1, P2.
        let h = f.from_ratio(1, 2);
        let hi = &h * &f.sqrt_minus_one().expect("i");
        let plus = m(f, [[h.clone(), -&hi], [hi.clone(), h.clone()]]);
        let minus = m(f, [[h.clone(), hi.clone()], [-&hi, h.clone()]]);
        PuiseuxMatrix::monomial(&plus, -1, 4).add(&PuiseuxMatrix::monomial(&minus, 1, 4)).expect("same shape")
    }

    /// diag(-1/(2 t^{3/2}), 1/(2 t^{3/2})).
    pub fn atilde(f: &Arc<CycloField>) -> PuiseuxMatrix {
        let d = m(f, [[f.from_ratio(-1, 2), f.zero()], [f.zero(), f.from_ratio(1, 2)]]);
        PuiseuxMatrix::monomial(&d, -3, 2)
    }

    /// [[-(t+1)/(4t^2), -i(2t-1)/(4t^2)], [i/(4t^2), (t+1)/(4t^2)]].
    pub fn abar(f: &Arc<CycloField>) -> PuiseuxMatrix {
        let i = f.sqrt_minus_one().expect("i");
        let q = |a, b| f.from_ratio(a, b);
        let t2 = m(f, [[q(-1, 4), &i * &q(1, 4)], [&i * &q(1, 4), q(1, 4)]]);
        let t1 = m(f, [[q(-1, 4), &i * &q(-1, 2)], [f.zero(), q(1, 4)]]);
        PuiseuxMatrix::laurent(f, 2, &[(-2, t2), (-1, t1)])
    }

    pub fn eta_struct(f: &Arc<CycloField>) -> Eta {
        Eta {
            eta: eta(f),
            eta_inv: eta_inverse(f),
            eigenvectors: FMatrix::identity_like(2, &f.one()),
            exponents: Vec::new(),
            normalization: EtaNormalization::InGroup,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::RootSystem;
    use crate::weyl::{reflection_perms, word_perm};

    #[test]
    fn sl2_lift_has_order_four() {
        let f = CycloField::new(4).unwrap();
        let w = weyl_lift(Kind::A, 1, &[1], &f).unwrap();
        assert_eq!(w.g, sl2_example::g(&f));
        assert_eq!(w.order, 4);
        assert_eq!(w.dphi_order, 2);
        let id = weyl_lift(Kind::A, 1, &[], &f).unwrap();
        assert!(id.g.is_identity());
        assert_eq!(id.order, 1);
    }

    #[test]
    fn lifts_match_weight_permutations() {
        let f = CycloField::new(1).unwrap();
        for (k, l) in [(Kind::A, 3), (Kind::C, 3), (Kind::D, 4), (Kind::D, 5)] {
            let rs = RootSystem::new(k, l).unwrap();
            let orbit = rs.weight_orbit(&rs.fundamental(1)).unwrap();
            let gens = reflection_perms(&rs, &orbit).unwrap();
            for word in [vec![1], vec![1, 2], (1..=l).collect::<Vec<_>>(), (1..l).collect(), vec![l, 1, l - 1]] {
                let w = weyl_lift(k, l, &word, &f).unwrap();
                assert_eq!(w.cycle_type(), word_perm(&gens, &word).unwrap().cycle_type(), "{k}{l} {word:?}");
            }
        }
    }

    #[test]
    fn eta_for_minus_identity() {
        let f = CycloField::new(4).unwrap();
        let w = weyl_lift(Kind::A, 1, &[1, 1], &f).unwrap();
        assert_eq!(w.order, 2);
        let plain = hilbert90_eta(&w, EtaNormalization::Plain).unwrap();
        assert_eq!(plain.eta, PuiseuxMatrix::monomial(&FMatrix::identity_like(2, &f.one()), 1, 2));
        assert!(check_eta_identity(&plain.eta, &w.g, 2).unwrap());
        let grp = hilbert90_eta(&w, EtaNormalization::InGroup).unwrap();
        assert!(check_eta_identity(&grp.eta, &w.g, 2).unwrap());
        assert_eq!(grp.exponents.iter().sum::<i64>(), 0);
    }

    #[test]
    fn worked_sl2_example() {
        let f = sl2_example::field();
        let g = sl2_example::g(&f);
        let eta = sl2_example::eta(&f);
        assert!(check_eta_identity(&eta, &g, 4).unwrap());
        let prod = eta.mul(&sl2_example::eta_inverse(&f)).unwrap().normalized();
        assert_eq!(prod, PuiseuxMatrix::identity(&f, 2));
        let abar = glue(&sl2_example::eta_struct(&f), &sl2_example::atilde(&f)).unwrap();
        assert_eq!(abar, sl2_example::abar(&f));
    }

    #[test]
    fn sl2_model_from_the_lemma() {
        let f = CycloField::new(4).unwrap();
        let w = weyl_lift(Kind::A, 1, &[1], &f).unwrap();
        let model = toric_model(&w, 0, EtaNormalization::InGroup).unwrap();
        assert!(model.eta_identity && model.torus_identity && model.in_algebra);
        let d = FMatrix::from_fn(2, 2, |i, j| if i != j { f.zero() } else { f.from_int(1 - 2 * i as i64) });
        assert_eq!(model.atilde, PuiseuxMatrix::monomial(&d, -5, 2));
        assert!(model.abar.is_integral());
    }

    #[test]
    fn models_for_classical_coxeter_elements() {
        for (k, l) in [(Kind::A, 2), (Kind::A, 3), (Kind::C, 2), (Kind::C, 3), (Kind::D, 3), (Kind::D, 4)] {
            let word: Vec<usize> = (1..=l).collect();
            let probe = weyl_lift(k, l, &word, &CycloField::new(1).unwrap()).unwrap();
            let f = CycloField::new(model_field_order(&probe).unwrap()).unwrap();
            let w = weyl_lift(k, l, &word, &f).unwrap();
            let model = toric_model(&w, 0, EtaNormalization::InGroup).unwrap();
            assert!(model.eta_identity, "{k}{l}");
            assert!(model.torus_identity, "{k}{l}");
            assert!(model.in_algebra, "{k}{l}");
        }
    }

    #[test]
    fn d_type_minus_one_eigenspace_is_split() {
        // S1...S_{l-1} in D4 has the type [4,4]; its lift has -1 eigenvalues.
        let probe = weyl_lift(Kind::D, 4, &[1, 2, 3], &CycloField::new(1).unwrap()).unwrap();
        let f = CycloField::new(model_field_order(&probe).unwrap()).unwrap();
        let w = weyl_lift(Kind::D, 4, &[1, 2, 3], &f).unwrap();
        let model = toric_model(&w, 0, EtaNormalization::InGroup).unwrap();
        assert!(model.eta_identity && model.torus_identity && model.in_algebra);
    }
}
