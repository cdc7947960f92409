//! Equivariant bases, jet interpolation and global assembly of `Y' = AY`
//! over a Kummer field K = F(x, y), y^n = x.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{CycloField, FieldElem};
use crate::funcfield::{rational_nth_root, KMatrix, KummerElem, Poly, RatFunc};
use crate::lie::{
    generic_torus_seed, irregular_seed, principal_nilpotent, torus_field_order, Algebra, Role,
};
use crate::linalg::{FMatrix, Matrix};
use crate::local::{model_field_order, toric_model, weyl_lift, EtaNormalization};
use crate::puiseux::PuiseuxMatrix;
use crate::roots::Kind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    Trivial,
    /// X -> g^{-1} X g
    Conjugation,
    /// X -> -g^{-1} X^T g, the differential of Y -> g^{-1} Y^{-T} g.
    TransposeInverse,
}

impl std::str::FromStr for ActionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(ActionKind::Trivial),
            "conjugation" => Ok(ActionKind::Conjugation),
            "transpose-inverse" => Ok(ActionKind::TransposeInverse),
            other => Err(Error::invalid(format!("unknown action {other:?}"))),
        }
    }
}

/// A cyclic group of order `order` acting on the Lie algebra; its generator
/// corresponds to y -> zeta_n y on K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub kind: ActionKind,
    pub order: u32,
    pub generator: FMatrix,
}

impl Action {
    pub fn trivial(f: &Arc<CycloField>, dim: usize) -> Action {
        Action { kind: ActionKind::Trivial, order: 1, generator: FMatrix::identity_like(dim, &f.one()) }
    }

    pub fn transpose_inverse(f: &Arc<CycloField>, dim: usize) -> Action {
        Action { kind: ActionKind::TransposeInverse, order: 2, generator: FMatrix::identity_like(dim, &f.one()) }
    }

    /// Conjugation by a diagonal matrix with zeta_n and zeta_n^{-1} in the
    /// slots `a` and `b`.
    pub fn diagonal(f: &Arc<CycloField>, dim: usize, order: u32, a: usize, b: usize) -> Result<Action> {
        let mut g = FMatrix::identity_like(dim, &f.one());
        g.set(a, a, f.root_of_unity(order, 1)?);
        g.set(b, b, f.root_of_unity(order, -1)?);
        Ok(Action { kind: ActionKind::Conjugation, order, generator: g })
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn apply(&self, x: &FMatrix) -> Result<FMatrix> {
        match self.kind {
            ActionKind::Trivial => Ok(x.clone()),
            ActionKind::Conjugation => self.generator.inverse()?.mul(x)?.mul(&self.generator),
            ActionKind::TransposeInverse => Ok(self.generator.inverse()?.mul(&x.transpose())?.mul(&self.generator)?.neg()),
        }
    }

    pub fn apply_k(&self, x: &KMatrix) -> Result<KMatrix> {
        let n = x.get(0, 0).n();
        let lift = |m: &FMatrix| m.map(|c| KummerElem::constant(c, n));
        match self.kind {
            ActionKind::Trivial => Ok(x.clone()),
            ActionKind::Conjugation => lift(&self.generator.inverse()?).mul(x)?.mul(&lift(&self.generator)),
            ActionKind::TransposeInverse => {
                Ok(lift(&self.generator.inverse()?).mul(&x.transpose())?.mul(&lift(&self.generator))?.neg())
            }
        }
    }

    /// Restriction to the diagonal block starting at `offset`.
    pub fn block(&self, offset: usize, dim: usize) -> Action {
        let g = FMatrix::from_fn(dim, dim, |i, j| self.generator.get(offset + i, offset + j).clone());
        Action { kind: self.kind, order: self.order, generator: g }
    }

    /// The action has the stated order on `alg` and preserves it.
    pub fn validate(&self, alg: Algebra) -> Result<()> {
        if self.order == 0 {
            return Err(Error::invalid("action order must be positive"));
        }
        if self.dim() != alg.n() {
            return Err(Error::invalid("action generator has the wrong size"));
        }
        if self.kind == ActionKind::Trivial && self.order != 1 {
            return Err(Error::invalid("the trivial action has order 1"));
        }
        let f = self.generator.get(0, 0).field().clone();
        for b in alg.basis(&f) {
            let mut y = b.clone();
            for _ in 0..self.order {
                y = self.apply(&y)?;
                if !alg.contains(&y) {
                    return Err(Error::invalid(format!("action does not preserve {alg}")));
                }
            }
            if y != b {
                return Err(Error::invalid(format!("action does not have order dividing {}", self.order)));
            }
        }
        Ok(())
    }
}

fn vectorize(m: &FMatrix) -> Vec<FieldElem> {
    m.entries().to_vec()
}

/// Coordinates of `x` in `basis`; `x` must lie in the span.
fn coordinates(basis: &[FMatrix], x: &FMatrix) -> Result<Vec<FieldElem>> {
    let nn = x.rows() * x.cols();
    let cols: Vec<Vec<FieldElem>> = basis.iter().map(vectorize).collect();
    let a = FMatrix::from_fn(nn, basis.len(), |r, c| cols[c][r].clone());
    Ok(a.solve(&FMatrix::column(&vectorize(x)))?.col(0))
}

/// Basis of g(K) whose elements satisfy sigma(e) = phi(e), plus the bad set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivariantBasis {
    pub algebra: Algebra,
    pub n: u32,
    pub elements: Vec<KMatrix>,
    /// Polynomial whose roots contain every x over which the basis fails:
    /// ramification, poles of B, zeros of det B.
    pub bad_set: Poly,
}

impl EquivariantBasis {
    /// Average the standard basis over the cyclic group with y^j weights:
    /// y^j P_j(e), where P_j projects onto the zeta_n^j eigenspace of phi.
    pub fn construct(alg: Algebra, action: &Action, n: u32) -> Result<EquivariantBasis> {
        if action.order != n && !(action.order == 1 && n == 1) {
            return Err(Error::invalid(format!("action of order {} on a degree-{n} extension", action.order)));
        }
        action.validate(alg)?;
        let f = action.generator.get(0, 0).field().clone();
        let std = alg.basis(&f);
        let mut chosen: Vec<(u32, FMatrix)> = Vec::new();
        let mut rows: Vec<Vec<FieldElem>> = Vec::new();
        'outer: for j in 0..n {
            for e in &std {
                let mut acc = FMatrix::zeros_like(alg.n(), alg.n(), &f.zero());
                let mut y = e.clone();
                for k in 0..n {
                    acc = acc.add(&y.scale(&f.root_of_unity(n, -((j * k) as i64))?))?;
                    y = action.apply(&y)?;
                }
                if acc.is_zero() {
                    continue;
                }
                rows.push(vectorize(&acc));
                let m = FMatrix::from_rows(rows.clone())?;
                if m.rank()? < rows.len() {
                    rows.pop();
                    continue;
                }
                chosen.push((j, acc));
                if chosen.len() == std.len() {
                    break 'outer;
                }
            }
        }
        if chosen.len() != std.len() {
            return Err(Error::Singular("averaging did not produce a basis".into()));
        }
        let elements: Vec<KMatrix> = chosen
            .iter()
            .map(|(j, v)| {
                let yj = KummerElem::y_pow(&f, n, *j as i64);
                v.map(|c| yj.scale(c))
            })
            .collect();
        // det B = det(P) y^{sum j}: only the ramification point is bad.
        let bad_set = if chosen.iter().any(|(j, _)| *j > 0) { Poly::x(&f) } else { Poly::one(&f) };
        Ok(EquivariantBasis { algebra: alg, n, elements, bad_set })
    }

    /// Wrap given elements; the bad set is computed from scratch.
    pub fn from_elements(alg: Algebra, n: u32, elements: Vec<KMatrix>) -> Result<EquivariantBasis> {
        let bad_set = bad_set_poly(alg, n, &elements)?;
        Ok(EquivariantBasis { algebra: alg, n, elements, bad_set })
    }

    /// sigma(e_i) = phi(e_i) for every element.
    pub fn is_equivariant(&self, action: &Action) -> Result<bool> {
        for e in &self.elements {
            if !is_equivariant(e, action)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn avoids(&self, x: &FieldElem) -> bool {
        !self.bad_set.eval(x).is_zero()
    }
}

pub fn is_equivariant(a: &KMatrix, action: &Action) -> Result<bool> {
    let sigma = a.try_map(|c| c.galois(1))?;
    Ok(sigma == action.apply_k(a)?)
}

/// x^{[n > 1]} * num(N(det B)) * (denominators of B).
pub fn bad_set_poly(alg: Algebra, n: u32, elements: &[KMatrix]) -> Result<Poly> {
    let s = alg.dim();
    if elements.len() != s {
        return Err(Error::invalid(format!("{} elements for an algebra of dimension {s}", elements.len())));
    }
    let f = elements[0].get(0, 0).field().clone();
    let std = alg.basis(&f);
    let nn = alg.n() * alg.n();
    // B: coordinates of e~_j in the standard basis, solved over F(x)[y] by
    // splitting each entry into its y^k components.
    let std_cols: Vec<Vec<FieldElem>> = std.iter().map(vectorize).collect();
    let std_mat = Matrix::<RatFunc>::from_fn(nn, s, |r, c| RatFunc::constant(&std_cols[c][r]));
    let mut b = Matrix::<KummerElem>::zeros_like(s, s, &KummerElem::zero(&f, n));
    for (j, e) in elements.iter().enumerate() {
        if !alg.contains(e) {
            return Err(Error::invalid(format!("basis element {j} is not in {alg}")));
        }
        for k in 0..n as usize {
            let rhs: Vec<RatFunc> = e.entries().iter().map(|c| c.components()[k].clone()).collect();
            let sol = std_mat.solve(&Matrix::column(&rhs))?.col(0);
            let yk = KummerElem::y_pow(&f, n, k as i64);
            for (i, c) in sol.into_iter().enumerate() {
                b.set(i, j, b.get(i, j).add(&yk.scale_rat(&c)));
            }
        }
    }
    let det = b.det()?;
    if det.is_zero() {
        return Err(Error::Singular("the elements are dependent over K".into()));
    }
    let mut out = det.norm()?.num().clone();
    for c in b.entries() {
        out = out.mul(&c.denominators());
    }
    if n > 1 {
        out = out.mul(&Poly::x(&f));
    }
    out.monic()
}

/// A marked point: x = p with a chosen branch y = root, and the prescribed
/// coefficients of t^lowest, ..., t^highest (t = x - p) for its factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub x: FieldElem,
    pub root: FieldElem,
    pub role: Role,
    pub factor: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<usize>>,
    pub lowest: i64,
    pub jet: Vec<FMatrix>,
}

impl MarkedPoint {
    pub fn highest(&self) -> i64 {
        self.lowest + self.jet.len() as i64 - 1
    }

    pub fn label(&self) -> String {
        self.x.to_string()
    }

    /// The jet as a Laurent series.
    pub fn series(&self) -> PuiseuxMatrix {
        let f = self.x.field();
        let n = self.jet.first().map(|m| m.rows()).unwrap_or(0);
        let terms: Vec<(i64, FMatrix)> =
            self.jet.iter().enumerate().map(|(k, m)| (self.lowest + k as i64, m.clone())).collect();
        PuiseuxMatrix::laurent(f, n, &terms).with_trunc(self.highest() + 1)
    }
}

/// Coefficients of t^0..t^{len-1} of each entry of a Kummer matrix at a
/// regular point.
fn taylor_matrices(e: &KMatrix, p: &FieldElem, root: &FieldElem, len: usize) -> Result<Vec<FMatrix>> {
    let f = p.field().clone();
    let mut out = vec![FMatrix::zeros_like(e.rows(), e.cols(), &f.zero()); len];
    for i in 0..e.rows() {
        for j in 0..e.cols() {
            let l = e.get(i, j).laurent(p, root, len as i64)?;
            if l.valuation().is_some_and(|v| v < 0) {
                return Err(Error::invalid(format!("basis element has a pole at x = {p}")));
            }
            for (k, m) in out.iter_mut().enumerate() {
                m.set(i, j, l.coeff(k as i64, &f));
            }
        }
    }
    Ok(out)
}

/// Expansion of a Kummer matrix at (p, root), exact below `prec`.
pub fn expand_matrix(a: &KMatrix, p: &FieldElem, root: &FieldElem, prec: i64) -> Result<PuiseuxMatrix> {
    let f = p.field().clone();
    let (r, c) = (a.rows(), a.cols());
    let ls: Vec<_> = a.entries().iter().map(|e| e.laurent(p, root, prec)).collect::<Result<_>>()?;
    let lo = ls.iter().filter_map(|l| l.valuation()).min().unwrap_or(prec);
    let terms: Vec<(i64, FMatrix)> = (lo..prec)
        .map(|k| (k, FMatrix::from_fn(r, c, |i, j| ls[i * c + j].coeff(k, &f))))
        .collect();
    Ok(PuiseuxMatrix::laurent(&f, r, &terms).with_trunc(prec))
}

/// Result of interpolating the jets of one factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolation {
    pub coefficients: Vec<RatFunc>,
    pub matrix: KMatrix,
}

/// f_j in F(x) with sum f_j e~_j matching every jet. All f_j share the
/// denominator prod (x - p_i)^{max(0, -lowest_i)}; the numerators come from
/// one confluent Vandermonde solve of the smallest size that fits.
pub fn interpolate_jets(basis: &EquivariantBasis, points: &[MarkedPoint]) -> Result<Interpolation> {
    if points.is_empty() {
        return Err(Error::invalid("no marked points"));
    }
    let f = points[0].x.field().clone();
    for (i, p) in points.iter().enumerate() {
        if points[..i].iter().any(|q| q.x == p.x) {
            return Err(Error::invalid(format!("point x = {} appears twice", p.x)));
        }
        if !basis.avoids(&p.x) {
            return Err(Error::invalid(format!("point x = {} lies in the bad set", p.x)));
        }
        if p.jet.is_empty() {
            return Err(Error::invalid(format!("empty jet at x = {}", p.x)));
        }
    }
    let s = basis.elements.len();
    // Laurent coefficients c_{j,k} of every f_j at every point.
    let mut local: Vec<Vec<Vec<FieldElem>>> = Vec::new();
    for p in points {
        let span = p.jet.len();
        let e = basis
            .elements
            .iter()
            .map(|b| taylor_matrices(b, &p.x, &p.root, span))
            .collect::<Result<Vec<_>>>()?;
        let at_p: Vec<FMatrix> = e.iter().map(|t| t[0].clone()).collect();
        let mut c: Vec<Vec<FieldElem>> = Vec::with_capacity(span);
        for k in 0..span {
            let mut r = p.jet[k].clone();
            for (a, ca) in c.iter().enumerate() {
                for j in 0..s {
                    if !ca[j].is_zero() {
                        r = r.sub(&e[j][k - a].scale(&ca[j]))?;
                    }
                }
            }
            c.push(coordinates(&at_p, &r).map_err(|_| {
                Error::invalid(format!("jet coefficient at x = {} is not in {}", p.x, basis.algebra))
            })?);
        }
        local.push(c);
    }
    let d: Vec<u32> = points.iter().map(|p| (-p.lowest).max(0) as u32).collect();
    let den = points.iter().zip(&d).fold(Poly::one(&f), |acc, (p, &di)| acc.mul(&Poly::linear(&p.x).pow(di)));
    let sizes: Vec<usize> = points.iter().zip(&d).map(|(p, &di)| (p.highest() + di as i64 + 1).max(0) as usize).collect();
    let total: usize = sizes.iter().sum();
    // rows: Taylor coefficient k at p_i of P = D f
    let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(total);
    let mut rhs: Vec<Vec<FieldElem>> = Vec::with_capacity(total);
    for (i, p) in points.iter().enumerate() {
        let others = points
            .iter()
            .zip(&d)
            .enumerate()
            .filter(|(i2, _)| *i2 != i)
            .fold(Poly::one(&f), |acc, (_, (q, &dq))| acc.mul(&Poly::linear(&q.x).pow(dq)));
        let g = others.taylor(&p.x);
        for k in 0..sizes[i] {
            rows.push(
                (0..total)
                    .map(|dd| {
                        if dd < k {
                            return f.zero();
                        }
                        let b: BigInt = binomial(dd, k);
                        p.x.pow((dd - k) as u64).scale(&BigRational::from_integer(b))
                    })
                    .collect(),
            );
            // u_k = sum_{a + b = k} g_a c_{b - d_i}
            let row: Vec<FieldElem> = (0..s)
                .map(|j| {
                    let mut acc = f.zero();
                    for (a, ga) in g.iter().enumerate().take(k + 1) {
                        let kk = k as i64 - a as i64 - d[i] as i64; // exponent of f's term
                        let idx = kk - p.lowest;
                        if idx >= 0 && (idx as usize) < local[i].len() && !ga.is_zero() {
                            acc = &acc + &(ga * &local[i][idx as usize][j]);
                        }
                    }
                    acc
                })
                .collect();
            rhs.push(row);
        }
    }
    let num = FMatrix::from_rows(rows)?.solve(&FMatrix::from_rows(rhs)?)?;
    let coefficients: Vec<RatFunc> = (0..s)
        .map(|j| RatFunc::new(Poly::new(&f, num.col(j)), den.clone()))
        .collect::<Result<_>>()?;
    let n = basis.n;
    let dim = basis.algebra.n();
    let mut a = KMatrix::zeros_like(dim, dim, &KummerElem::zero(&f, n));
    for (fj, e) in coefficients.iter().zip(&basis.elements) {
        a = a.add(&e.map(|c| c.scale_rat(fj)))?;
    }
    Ok(Interpolation { coefficients, matrix: a })
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Re-expand `a` at the point and compare with the jet through its highest
/// order; nothing below the lowest order may survive.
pub fn matches_jet(a: &KMatrix, p: &MarkedPoint) -> Result<bool> {
    let e = expand_matrix(a, &p.x, &p.root, p.highest() + 1)?;
    if e.valuation().is_some_and(|v| v < p.lowest) {
        return Ok(false);
    }
    Ok((0..p.jet.len()).all(|k| e.term(p.lowest + k as i64) == p.jet[k]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub kind: Kind,
    pub rank: usize,
}

impl Factor {
    pub fn algebra(&self) -> Result<Algebra> {
        Algebra::for_kind(self.kind, self.rank)
    }

    /// Roles of the marked points the factor needs, and toric words.
    pub fn plan(&self) -> Result<Vec<(Role, Option<Vec<usize>>)>> {
        let l = self.rank;
        match self.kind {
            Kind::A | Kind::C => Ok(vec![(Role::Irregular, None), (Role::Torus, None), (Role::Nilpotent, None)]),
            Kind::D => Ok(vec![
                (Role::Torus, None),
                (Role::Nilpotent, None),
                (Role::MaximallyToric, Some((1..l).collect())),
                (Role::MaximallyToric, Some((1..=l).collect())),
            ]),
            _ => Err(Error::unsupported(format!("matrix construction for type {}", self.kind))),
        }
    }
}

impl std::str::FromStr for Factor {
    type Err = Error;
    /// "sl2", "sp4", "so8", or "A1", "C2", "D4".
    fn from_str(s: &str) -> Result<Factor> {
        let s = s.trim();
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::invalid(format!("bad group {s:?}")));
        let lower = s.to_ascii_lowercase();
        let (kind, rank) = if let Some(r) = lower.strip_prefix("sl") {
            (Kind::A, num(r)?.checked_sub(1).ok_or_else(|| Error::invalid("sl0"))?)
        } else if let Some(r) = lower.strip_prefix("sp") {
            let n = num(r)?;
            if n % 2 == 1 {
                return Err(Error::invalid("sp needs even size"));
            }
            (Kind::C, n / 2)
        } else if let Some(r) = lower.strip_prefix("so") {
            let n = num(r)?;
            if n % 2 == 1 {
                return Err(Error::unsupported("odd orthogonal groups"));
            }
            (Kind::D, n / 2)
        } else {
            let (k, r) = s.split_at(1);
            (k.parse()?, num(r)?)
        };
        let fct = Factor { kind, rank };
        fct.algebra()?;
        Ok(fct)
    }
}

/// Full system: block-diagonal A over K together with everything needed to
/// re-verify it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub field: FieldInfo,
    pub extension: ExtensionInfo,
    pub group: GroupInfo,
    pub action: Action,
    pub points: Vec<MarkedPoint>,
    pub bases: Vec<EquivariantBasis>,
    pub coefficients: Vec<Vec<RatFunc>>,
    pub matrix: KMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    #[serde(rename = "M")]
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionInfo {
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub factors: Vec<Factor>,
}

impl SystemRecord {
    pub fn cyclo(&self) -> Result<Arc<CycloField>> {
        CycloField::new(self.field.m)
    }

    /// Offsets of the diagonal blocks.
    pub fn offsets(&self) -> Result<Vec<(usize, Algebra)>> {
        let mut off = 0;
        let mut out = Vec::new();
        for fct in &self.group.factors {
            let alg = fct.algebra()?;
            out.push((off, alg));
            off += alg.n();
        }
        Ok(out)
    }

    /// Re-run the interpolation from the stored bases and jets.
    pub fn rebuild(&mut self) -> Result<()> {
        let f = self.cyclo()?;
        let n = self.extension.n;
        let offs = self.offsets()?;
        let dim: usize = offs.iter().map(|(_, a)| a.n()).sum();
        let mut a = KMatrix::zeros_like(dim, dim, &KummerElem::zero(&f, n));
        self.coefficients.clear();
        for (i, (off, _)) in offs.iter().enumerate() {
            let pts: Vec<MarkedPoint> = self.points.iter().filter(|p| p.factor == i).cloned().collect();
            let interp = interpolate_jets(&self.bases[i], &pts)?;
            for r in 0..interp.matrix.rows() {
                for c in 0..interp.matrix.cols() {
                    a.set(off + r, off + c, interp.matrix.get(r, c).clone());
                }
            }
            self.coefficients.push(interp.coefficients);
        }
        self.matrix = a;
        Ok(())
    }
}

/// Which action to build with.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSpec {
    pub kind: ActionKind,
    pub order: u32,
}

/// Block generator for the requested action on all factors.
fn build_action(spec: &ActionSpec, f: &Arc<CycloField>, algs: &[Algebra]) -> Result<Action> {
    let dim: usize = algs.iter().map(|a| a.n()).sum();
    match spec.kind {
        ActionKind::Trivial => {
            if spec.order != 1 {
                return Err(Error::invalid("the trivial action has order 1"));
            }
            Ok(Action::trivial(f, dim))
        }
        ActionKind::TransposeInverse => {
            if spec.order != 2 {
                return Err(Error::invalid("transpose-inverse has order 2"));
            }
            Ok(Action::transpose_inverse(f, dim))
        }
        ActionKind::Conjugation => {
            let mut g = FMatrix::identity_like(dim, &f.one());
            let mut off = 0;
            for alg in algs {
                let other = match alg {
                    Algebra::Sl(_) | Algebra::Gl(_) => 1,
                    _ => alg.n() / 2,
                };
                g.set(off, off, f.root_of_unity(spec.order, 1)?);
                g.set(off + other, off + other, f.root_of_unity(spec.order, -1)?);
                off += alg.n();
            }
            Ok(Action { kind: ActionKind::Conjugation, order: spec.order, generator: g })
        }
    }
}

/// Cyclotomic order that holds every constant the construction needs.
pub fn required_field_order(factors: &[Factor], n: u32, points: &[BigRational]) -> Result<u32> {
    let q = CycloField::new(1)?;
    let mut m = n.max(1);
    for fct in factors {
        m = m.lcm(&torus_field_order(fct.rank));
        for (_, word) in fct.plan()? {
            if let Some(w) = word {
                m = m.lcm(&model_field_order(&weyl_lift(fct.kind, fct.rank, &w, &q)?)?);
            }
        }
    }
    for p in points {
        if rational_nth_root(p, n).is_none() {
            return Err(Error::invalid(format!("x = {p} is not the n-th power of a rational number (n = {n})")));
        }
    }
    Ok(m)
}

/// Seed for one marked point, as (lowest exponent, coefficients).
fn seed_jet(fct: Factor, role: Role, word: Option<&[usize]>, f: &Arc<CycloField>) -> Result<(i64, Vec<FMatrix>)> {
    let series = match role {
        Role::Irregular => irregular_seed(fct.kind, fct.rank, f)?,
        Role::Torus => {
            let (t, _) = generic_torus_seed(fct.kind, fct.rank, f)?;
            PuiseuxMatrix::laurent(f, t.algebra.n(), &[(-1, t.entries)])
        }
        Role::Nilpotent => {
            let e = principal_nilpotent(fct.kind, fct.rank, f)?;
            PuiseuxMatrix::laurent(f, e.algebra.n(), &[(-1, e.entries)])
        }
        Role::MaximallyToric => {
            let w = weyl_lift(fct.kind, fct.rank, word.ok_or_else(|| Error::invalid("toric point without a word"))?, f)?;
            let model = toric_model(&w, 0, EtaNormalization::InGroup)?;
            if !(model.eta_identity && model.torus_identity && model.in_algebra) {
                return Err(Error::internal("toric model failed its own identities"));
            }
            model.abar
        }
    };
    let terms = series.laurent_terms()?;
    let lo = terms.first().map(|t| t.0).unwrap_or(-1);
    let hi = terms.last().map(|t| t.0).unwrap_or(-1);
    let dim = series.dim();
    Ok((lo, (lo..=hi).map(|k| if series.is_zero() { FMatrix::zeros_like(dim, dim, &f.zero()) } else { series.term(k) }).collect()))
}

/// Assemble the block-diagonal equation for the product of `factors`, with
/// marked points taken from `xs` in plan order.
pub fn assemble_group_equation(factors: &[Factor], action: &ActionSpec, xs: &[BigRational]) -> Result<SystemRecord> {
    if factors.is_empty() {
        return Err(Error::invalid("no group factors"));
    }
    let plans: Vec<_> = factors.iter().map(|f| f.plan()).collect::<Result<_>>()?;
    let needed: usize = plans.iter().map(|p| p.len()).sum();
    if xs.len() != needed {
        return Err(Error::invalid(format!("the point plan needs {needed} points, got {}", xs.len())));
    }
    for (i, x) in xs.iter().enumerate() {
        if xs[..i].contains(x) {
            return Err(Error::invalid(format!("point x = {x} appears twice")));
        }
    }
    let n = action.order;
    let m = required_field_order(factors, n, xs)?;
    let f = CycloField::new(m)?;
    let algs: Vec<Algebra> = factors.iter().map(|fc| fc.algebra()).collect::<Result<_>>()?;
    let act = build_action(action, &f, &algs)?;
    let mut bases = Vec::new();
    let mut off = 0;
    for alg in &algs {
        bases.push(EquivariantBasis::construct(*alg, &act.block(off, alg.n()), n)?);
        off += alg.n();
    }
    let mut points = Vec::new();
    let mut it = xs.iter();
    for (i, (fct, plan)) in factors.iter().zip(&plans).enumerate() {
        for (role, word) in plan {
            let x = it.next().expect("counted above");
            let root = rational_nth_root(x, n).expect("checked above");
            let (lowest, jet) = seed_jet(*fct, *role, word.as_deref(), &f)?;
            points.push(MarkedPoint {
                x: f.from_rational(x),
                root: f.from_rational(&root),
                role: *role,
                factor: i,
                word: word.clone(),
                lowest,
                jet,
            });
        }
    }
    let dim: usize = algs.iter().map(|a| a.n()).sum();
    let mut rec = SystemRecord {
        field: FieldInfo { m },
        extension: ExtensionInfo { n },
        group: GroupInfo { factors: factors.to_vec() },
        action: act,
        points,
        bases,
        coefficients: Vec::new(),
        matrix: KMatrix::zeros_like(dim, dim, &KummerElem::zero(&f, n)),
        verification: None,
    };
    rec.rebuild()?;
    Ok(rec)
}

/// The worked SL2 example over K = F(x, sqrt x): basis, jets at x = 4, 9, 16
/// and the printed coefficient functions.
pub mod sl2_sqrtx {
    use super::*;

    pub fn field() -> Arc<CycloField> {
        CycloField::new(8).expect("Q(zeta_8)")
    }

    fn k(f: &Arc<CycloField>, c0: i64, c1: i64) -> KummerElem {
        KummerElem::from_y_coeffs(&[f.from_int(c0), f.from_int(c1)], 2)
    }

    fn km(rows: [[KummerElem; 2]; 2]) -> KMatrix {
        KMatrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect()).expect("2x2")
    }

    /// diag(sqrt x, -sqrt x), [[0, sqrt x], [sqrt x, 0]], [[0, -1 + sqrt x], [1 + sqrt x, 0]].
    pub fn basis(f: &Arc<CycloField>) -> EquivariantBasis {
        let z = k(f, 0, 0);
        let e1 = km([[k(f, 0, 1), z.clone()], [z.clone(), k(f, 0, -1)]]);
        let e2 = km([[z.clone(), k(f, 0, 1)], [k(f, 0, 1), z.clone()]]);
        let e3 = km([[z.clone(), k(f, -1, 1)], [k(f, 1, 1), z]]);
        EquivariantBasis::from_elements(Algebra::Sl(2), 2, vec![e1, e2, e3]).expect("worked basis")
    }

    pub fn action(f: &Arc<CycloField>) -> Action {
        Action::transpose_inverse(f, 2)
    }

    fn m(f: &Arc<CycloField>, a: [[i64; 2]; 2]) -> FMatrix {
        FMatrix::from_fn(2, 2, |i, j| f.from_int(a[i][j]))
    }

    pub fn points(f: &Arc<CycloField>) -> Vec<MarkedPoint> {
        let s2 = f.sqrt_prime(2).expect("sqrt 2");
        let d = FMatrix::from_fn(2, 2, |i, j| if i != j { f.zero() } else if i == 0 { s2.clone() } else { -&s2 });
        let lower = m(f, [[0, 0], [1, 0]]);
        let upper = m(f, [[0, 1], [0, 0]]);
        let pt = |x: i64, r: i64, role, lowest, jet| MarkedPoint {
            x: f.from_int(x),
            root: f.from_int(r),
            role,
            factor: 0,
            word: None,
            lowest,
            jet,
        };
        vec![
            pt(4, 2, Role::Irregular, -2, vec![lower.clone(), upper]),
            pt(9, 3, Role::Torus, -1, vec![d]),
            pt(16, 4, Role::Nilpotent, -1, vec![lower]),
        ]
    }

    fn lin(f: &Arc<CycloField>, p: i64) -> Poly {
        Poly::linear(&f.from_int(p))
    }

    /// c * prod (x - a) / prod (x - b)
    fn term(f: &Arc<CycloField>, c: FieldElem, zeros: &[i64], poles: &[i64]) -> RatFunc {
        let num = zeros.iter().fold(Poly::constant(&c), |acc, &a| acc.mul(&lin(f, a)));
        let den = poles.iter().fold(Poly::one(f), |acc, &b| acc.mul(&lin(f, b)));
        RatFunc::new(num, den).expect("nonzero")
    }

    /// The printed f1, f2, f3.
    pub fn coefficients(f: &Arc<CycloField>) -> Vec<RatFunc> {
        let s2 = f.sqrt_prime(2).expect("sqrt 2");
        let q = |a, b| f.from_ratio(a, b);
        let f1 = term(f, -&(&s2 * &q(1, 105)), &[4, 16], &[9]);
        let f2 = term(f, q(-1, 240), &[9, 16], &[4, 4])
            .add(&term(f, q(311, 28800), &[9, 16], &[4]))
            .add(&term(f, q(-3, 672), &[9, 4], &[16]));
        let f3 = term(f, q(1, 120), &[9, 16], &[4, 4])
            .add(&term(f, q(-43, 7200), &[9, 16], &[4]))
            .add(&term(f, q(1, 168), &[9, 4], &[16]));
        vec![f1, f2, f3]
    }

    pub fn combine(basis: &EquivariantBasis, coeffs: &[RatFunc]) -> Result<KMatrix> {
        let e = &basis.elements;
        let f = coeffs[0].field().clone();
        let mut a = KMatrix::zeros_like(2, 2, &KummerElem::zero(&f, basis.n));
        for (fj, ej) in coeffs.iter().zip(e) {
            a = a.add(&ej.map(|c| c.scale_rat(fj)))?;
        }
        Ok(a)
    }

    /// The fixture as a full system record built on the printed data.
    pub fn record() -> Result<SystemRecord> {
        let f = field();
        let basis = basis(&f);
        let coeffs = coefficients(&f);
        let matrix = combine(&basis, &coeffs)?;
        Ok(SystemRecord {
            field: FieldInfo { m: f.order() },
            extension: ExtensionInfo { n: 2 },
            group: GroupInfo { factors: vec![Factor { kind: Kind::A, rank: 1 }] },
            action: action(&f),
            points: points(&f),
            bases: vec![basis],
            coefficients: vec![coeffs],
            matrix,
            verification: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn worked_basis_is_equivariant_and_avoids_points() {
        let f = sl2_sqrtx::field();
        let b = sl2_sqrtx::basis(&f);
        assert!(b.is_equivariant(&sl2_sqrtx::action(&f)).unwrap());
        // det B = 2x, so N(det B) = 4x^2 and the bad set is {0}
        assert_eq!(b.bad_set, Poly::x(&f).pow(3));
        for x in [4, 9, 16] {
            assert!(b.avoids(&f.from_int(x)));
        }
        assert!(!b.avoids(&f.zero()));
    }

    #[test]
    fn printed_coefficients_reproduce_the_jets() {
        let f = sl2_sqrtx::field();
        let b = sl2_sqrtx::basis(&f);
        let a = sl2_sqrtx::combine(&b, &sl2_sqrtx::coefficients(&f)).unwrap();
        for p in sl2_sqrtx::points(&f) {
            assert!(matches_jet(&a, &p).unwrap(), "x = {}", p.x);
        }
        assert!(is_equivariant(&a, &sl2_sqrtx::action(&f)).unwrap());
    }

    #[test]
    fn interpolator_matches_the_same_jets() {
        let f = sl2_sqrtx::field();
        let b = sl2_sqrtx::basis(&f);
        let pts = sl2_sqrtx::points(&f);
        let it = interpolate_jets(&b, &pts).unwrap();
        for p in &pts {
            assert!(matches_jet(&it.matrix, p).unwrap());
        }
        assert!(is_equivariant(&it.matrix, &sl2_sqrtx::action(&f)).unwrap());
        assert!(Algebra::Sl(2).contains(&it.matrix));
    }

    #[test]
    fn averaged_basis_for_transpose_inverse() {
        let f = CycloField::new(8).unwrap();
        let act = Action::transpose_inverse(&f, 2);
        let b = EquivariantBasis::construct(Algebra::Sl(2), &act, 2).unwrap();
        assert!(b.is_equivariant(&act).unwrap());
        assert_eq!(b.bad_set, Poly::x(&f));
        let recomputed = bad_set_poly(Algebra::Sl(2), 2, &b.elements).unwrap();
        assert!(recomputed.eval(&f.zero()).is_zero());
        let triv = EquivariantBasis::construct(Algebra::Sl(3), &Action::trivial(&f, 3), 1).unwrap();
        assert!(triv.bad_set.is_constant());
    }

    #[test]
    fn single_residue_with_trivial_action() {
        let f = CycloField::new(1).unwrap();
        let b = EquivariantBasis::construct(Algebra::Sl(2), &Action::trivial(&f, 2), 1).unwrap();
        let r = FMatrix::from_fn(2, 2, |i, j| f.from_int([[1, 2], [3, -1]][i][j]));
        let p = MarkedPoint {
            x: f.from_int(5),
            root: f.from_int(5),
            role: Role::Torus,
            factor: 0,
            word: None,
            lowest: -1,
            jet: vec![r.clone()],
        };
        let it = interpolate_jets(&b, &[p]).unwrap();
        let expect = r.map(|c| {
            KummerElem::from_ratfunc(RatFunc::new(Poly::constant(c), Poly::linear(&f.from_int(5))).unwrap(), 1)
        });
        assert_eq!(it.matrix, expect);
    }

    #[test]
    fn assembled_sl2_and_product() {
        let sl2 = Factor { kind: Kind::A, rank: 1 };
        let rec = assemble_group_equation(&[sl2], &ActionSpec { kind: ActionKind::TransposeInverse, order: 2 }, &[q(4), q(9), q(16)])
            .unwrap();
        for p in &rec.points {
            assert!(matches_jet(&rec.matrix, p).unwrap());
        }
        assert!(is_equivariant(&rec.matrix, &rec.action).unwrap());
        let sl3 = Factor { kind: Kind::A, rank: 2 };
        let rec = assemble_group_equation(
            &[sl2, sl3],
            &ActionSpec { kind: ActionKind::Trivial, order: 1 },
            &[q(1), q(2), q(3), q(5), q(6), q(7)],
        )
        .unwrap();
        assert_eq!(rec.matrix.rows(), 5);
        assert!(assemble_group_equation(&[sl2], &ActionSpec { kind: ActionKind::Trivial, order: 1 }, &[]).is_err());
        let json = serde_json::to_string(&rec).unwrap();
        let back: SystemRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
    }
}
