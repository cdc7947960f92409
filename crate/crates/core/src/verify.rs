//! Replayable certificates for the hypotheses a system record is built to
//! satisfy, plus the deliberate mutations that must break them.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::funcfield::KMatrix;
use crate::lie::{ad_kernel_dim, independence_certificate, unique_slope, Algebra, Role};
use crate::linalg::FMatrix;
use crate::local::{model_field_order, toric_model, weyl_lift, EtaNormalization};
use crate::puiseux::PuiseuxMatrix;
use crate::system::{bad_set_poly, expand_matrix, is_equivariant, MarkedPoint, SystemRecord};
use crate::weyl::{is_strictly_transitive, weyl_action, word_perm, CycleType};

pub const REPORT_HEADER: &str = "This report certifies the machine-checkable hypotheses of the construction \
(points, bad set, jets, local roles, Lie membership, equivariance). It does not compute a differential \
Galois group; that conclusion is the theorem the hypotheses feed.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A prerequisite failed, so the check could not be evaluated.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub evidence: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationBundle {
    pub header: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationBundle {
    pub fn failed_ids(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.id.as_str()).collect()
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

struct Bundle(Vec<Check>);

impl Bundle {
    fn push(&mut self, id: impl Into<String>, ok: bool, evidence: Value) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.0.push(Check { id: id.into(), status, evidence });
    }

    fn skip(&mut self, id: impl Into<String>, why: &str) {
        self.0.push(Check { id: id.into(), status: Status::Skipped, evidence: json!({ "reason": why }) });
    }

    /// Errors inside a check are recorded as failures with the message.
    fn push_result(&mut self, id: impl Into<String>, r: Result<(bool, Value)>) {
        match r {
            Ok((ok, ev)) => self.push(id, ok, ev),
            Err(e) => self.push(id, false, json!({ "error": e.to_string() })),
        }
    }
}

fn block(a: &KMatrix, off: usize, n: usize) -> KMatrix {
    KMatrix::from_fn(n, n, |i, j| a.get(off + i, off + j).clone())
}

fn fblock(a: &FMatrix, off: usize, n: usize) -> FMatrix {
    FMatrix::from_fn(n, n, |i, j| a.get(off + i, off + j).clone())
}

fn is_diagonal(m: &FMatrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j).is_zero()))
}

fn check_fields(rec: &SystemRecord) -> Result<()> {
    let m = rec.field.m;
    let bad = |what: &str, got: u32| Err(Error::invalid(format!("{what} lives in Q(zeta_{got}), record says M = {m}")));
    let n = rec.extension.n;
    if n == 0 {
        return Err(Error::invalid("extension degree must be positive"));
    }
    if !m.is_multiple_of(n) {
        return Err(Error::invalid(format!("zeta_{n} is not in Q(zeta_{m})")));
    }
    for p in &rec.points {
        if p.x.field().order() != m {
            return bad("a point", p.x.field().order());
        }
        if p.root.field().order() != m {
            return bad("a root", p.root.field().order());
        }
        if p.factor >= rec.group.factors.len() {
            return Err(Error::invalid("point refers to a missing factor"));
        }
    }
    let offs = rec.offsets()?;
    let dim: usize = offs.iter().map(|(_, a)| a.n()).sum();
    if rec.matrix.rows() != dim || rec.matrix.cols() != dim {
        return Err(Error::invalid("matrix size does not match the group factors"));
    }
    for e in rec.matrix.entries() {
        if e.n() != n {
            return Err(Error::invalid("matrix entry has the wrong Kummer degree"));
        }
        if e.field().order() != m {
            return bad("a matrix entry", e.field().order());
        }
    }
    if rec.action.dim() != dim {
        return Err(Error::invalid("action generator has the wrong size"));
    }
    if rec.bases.len() != offs.len() {
        return Err(Error::invalid("one equivariant basis per factor is required"));
    }
    for (b, (_, alg)) in rec.bases.iter().zip(&offs) {
        if b.algebra != *alg || b.n != n {
            return Err(Error::invalid("basis does not match its factor"));
        }
    }
    for p in &rec.points {
        let size = offs[p.factor].1.n();
        if p.jet.iter().any(|m| m.rows() != size || m.cols() != size) {
            return Err(Error::invalid(format!("jet at x = {} has the wrong size", p.x)));
        }
    }
    Ok(())
}

/// Every hypothesis the record is built to satisfy, evaluated from scratch.
pub fn check_system(rec: &SystemRecord) -> Result<VerificationBundle> {
    check_fields(rec)?;
    let f = rec.cyclo()?;
    let n = rec.extension.n;
    let offs = rec.offsets()?;
    let mut b = Bundle(Vec::new());

    let distinct = rec.points.iter().enumerate().all(|(i, p)| rec.points[..i].iter().all(|q| q.x != p.x));
    b.push(
        "points-distinct",
        distinct && !rec.points.is_empty(),
        json!({ "x": rec.points.iter().map(|p| p.label()).collect::<Vec<_>>() }),
    );

    let bad_sets = rec
        .bases
        .iter()
        .map(|bs| bad_set_poly(bs.algebra, n, &bs.elements))
        .collect::<Vec<_>>();

    for p in &rec.points {
        let label = p.label();
        let (off, alg) = offs[p.factor];
        let ok_bad = match &bad_sets[p.factor] {
            Ok(s) => {
                let v = s.eval(&p.x);
                let root_ok = p.root.pow(n as u64) == p.x;
                b.push(
                    format!("bad-set:{label}"),
                    !v.is_zero() && root_ok,
                    json!({ "S(x)": v.to_string(), "root": p.root.to_string(), "root_valid": root_ok }),
                );
                !v.is_zero() && root_ok
            }
            Err(e) => {
                b.push(format!("bad-set:{label}"), false, json!({ "error": e.to_string() }));
                false
            }
        };
        let role_id = match p.role {
            Role::Torus => "torus-independence",
            Role::Nilpotent => "nilpotent-kernel",
            Role::Irregular => "unique-slope",
            Role::MaximallyToric => "toric-replay",
        };
        let role_id = format!("{role_id}:{label}");
        if !ok_bad {
            b.skip(format!("jets:{label}"), "point lies in the bad set");
            b.skip(role_id, "point lies in the bad set");
            continue;
        }
        let expansion = expand_matrix(&rec.matrix, &p.x, &p.root, p.highest().max(0) + 1);
        let expansion = match expansion {
            Ok(e) => e,
            Err(e) => {
                b.push(format!("jets:{label}"), false, json!({ "error": e.to_string() }));
                b.skip(role_id, "expansion failed");
                continue;
            }
        };
        b.push_result(format!("jets:{label}"), jet_check(&expansion, p, off, alg.n()));
        let terms: Vec<(i64, FMatrix)> = expansion.terms().map(|(k, c)| (k, fblock(c, off, alg.n()))).collect();
        let local = PuiseuxMatrix::laurent(&f, alg.n(), &terms);
        let r = match p.role {
            Role::Torus => torus_check(&local, alg),
            Role::Nilpotent => nilpotent_check(&local, alg),
            Role::Irregular => slope_check(&local),
            Role::MaximallyToric => toric_check(&local, alg, p, rec.field.m),
        };
        b.push_result(role_id, r);
    }

    for (i, (_, alg)) in offs.iter().enumerate() {
        let words: Vec<&Vec<usize>> =
            rec.points.iter().filter(|p| p.factor == i && p.role == Role::MaximallyToric).filter_map(|p| p.word.as_ref()).collect();
        if words.is_empty() {
            continue;
        }
        b.push_result(format!("strict-transitivity:factor{i}"), transitivity_check(*alg, &words));
    }

    b.push_result("lie-membership", membership_check(rec));
    b.push_result("equivariance", equivariance_check(rec));

    let passed = b.0.iter().all(|c| c.status == Status::Pass);
    Ok(VerificationBundle { header: REPORT_HEADER.to_string(), passed, checks: b.0 })
}

fn jet_check(e: &PuiseuxMatrix, p: &MarkedPoint, off: usize, n: usize) -> Result<(bool, Value)> {
    let lo = e.valuation().unwrap_or(0).min(p.lowest);
    let mut mismatches = Vec::new();
    let mut irregular_elsewhere = false;
    for k in lo..=p.highest() {
        let full = e.term(k);
        let mine = fblock(&full, off, n);
        let want = if k < p.lowest { None } else { p.jet.get((k - p.lowest) as usize) };
        let ok = match want {
            Some(w) => &mine == w,
            None => mine.is_zero(),
        };
        if !ok {
            mismatches.push(k);
        }
        if k < 0 {
            // other blocks must be regular at this point
            let d = full.rows();
            for i in 0..d {
                for j in 0..d {
                    let inside = (off..off + n).contains(&i) && (off..off + n).contains(&j);
                    if !inside && !full.get(i, j).is_zero() {
                        irregular_elsewhere = true;
                    }
                }
            }
        }
    }
    Ok((
        mismatches.is_empty() && !irregular_elsewhere,
        json!({ "orders": [p.lowest, p.highest()], "mismatched_orders": mismatches, "other_blocks_singular": irregular_elsewhere }),
    ))
}

fn principal_part_is_residue(local: &PuiseuxMatrix) -> bool {
    local.valuation().is_none_or(|v| v >= -1)
}

fn torus_check(local: &PuiseuxMatrix, alg: Algebra) -> Result<(bool, Value)> {
    let simple = principal_part_is_residue(local);
    let r = local.term(-1);
    let diag = is_diagonal(&r);
    let l = alg.rank();
    let vals: Vec<FieldElem> = (0..l).map(|i| r.get(i, i).clone()).collect();
    let cert = independence_certificate(&vals)?;
    Ok((
        simple && diag && cert.independent,
        json!({ "simple_pole": simple, "residue_diagonal": diag, "eigenvalues": vals.iter().map(|v| v.to_string()).collect::<Vec<_>>(), "q_rank": cert.rank, "required_rank": l + 1 }),
    ))
}

fn nilpotent_check(local: &PuiseuxMatrix, alg: Algebra) -> Result<(bool, Value)> {
    let simple = principal_part_is_residue(local);
    let r = local.term(-1);
    let nilpotent = r.pow(alg.n() as u64)?.is_zero();
    let kernel = ad_kernel_dim(alg, &r)?;
    Ok((
        simple && nilpotent && kernel == alg.rank(),
        json!({ "simple_pole": simple, "nilpotent": nilpotent, "ad_kernel_dim": kernel, "rank": alg.rank() }),
    ))
}

fn slope_check(local: &PuiseuxMatrix) -> Result<(bool, Value)> {
    let principal = local.truncate_above(-1, 1);
    let rep = unique_slope(&principal)?;
    let ok = rep.irregular && rep.coprime && rep.slope_den as usize == local.dim();
    Ok((
        ok,
        json!({ "pole_order": rep.pole_order, "slope": format!("{}/{}", rep.slope_num, rep.slope_den), "coprime": rep.coprime, "shear": rep.shear }),
    ))
}

fn toric_check(local: &PuiseuxMatrix, alg: Algebra, p: &MarkedPoint, m: u32) -> Result<(bool, Value)> {
    let word = p.word.as_ref().ok_or_else(|| Error::invalid("toric point without a Weyl word"))?;
    let (kind, rank) = alg.kind_rank().ok_or_else(|| Error::unsupported(format!("toric points for {alg}")))?;
    let f = local.field().clone();
    let probe = weyl_lift(kind, rank, word, &crate::field::CycloField::new(1)?)?;
    let need = model_field_order(&probe)?;
    if !m.is_multiple_of(need) {
        return Ok((false, json!({ "error": format!("model needs Q(zeta_{need})") })));
    }
    let w = weyl_lift(kind, rank, word, &f)?;
    let model = toric_model(&w, p.highest(), EtaNormalization::InGroup)?;
    let lo = model.abar.valuation().unwrap_or(0).min(local.valuation().unwrap_or(0));
    let agree = (lo..=p.highest()).all(|k| model.abar.term(k) == local.term(k));
    Ok((
        agree && model.eta_identity && model.torus_identity && model.in_algebra,
        json!({
            "word": word,
            "g_order": w.order,
            "cycle_type": w.cycle_type(),
            "eta_identity": model.eta_identity,
            "torus_identity": model.torus_identity,
            "in_algebra": model.in_algebra,
            "local_model_matches": agree,
        }),
    ))
}

fn transitivity_check(alg: Algebra, words: &[&Vec<usize>]) -> Result<(bool, Value)> {
    let (kind, rank) = alg.kind_rank().ok_or_else(|| Error::unsupported(format!("Weyl group of {alg}")))?;
    let mut highest = vec![0; rank];
    highest[0] = 1;
    let (_, orbit, gens) = weyl_action(kind, rank, &highest)?;
    let cts: Vec<CycleType> = words.iter().map(|w| word_perm(&gens, w).map(|p| p.cycle_type())).collect::<Result<_>>()?;
    let (ok, cert) = is_strictly_transitive(&cts, orbit.len());
    Ok((ok && cert.replay(&cts), json!({ "cycle_types": cts, "certificate": cert })))
}

fn membership_check(rec: &SystemRecord) -> Result<(bool, Value)> {
    let offs = rec.offsets()?;
    let mut blocks = Vec::new();
    let mut ok = true;
    for (off, alg) in &offs {
        let inside = alg.contains(&block(&rec.matrix, *off, alg.n()));
        blocks.push(json!({ "algebra": alg.to_string(), "member": inside }));
        ok &= inside;
    }
    let d = rec.matrix.rows();
    let owner = |i: usize| offs.iter().position(|(o, a)| (*o..o + a.n()).contains(&i));
    let off_diag_zero = (0..d).all(|i| (0..d).all(|j| owner(i) == owner(j) || rec.matrix.get(i, j).is_zero()));
    Ok((ok && off_diag_zero, json!({ "blocks": blocks, "off_diagonal_zero": off_diag_zero })))
}

fn equivariance_check(rec: &SystemRecord) -> Result<(bool, Value)> {
    let mut valid = true;
    let mut why = Vec::new();
    for (off, alg) in rec.offsets()? {
        if let Err(e) = rec.action.block(off, alg.n()).validate(alg) {
            valid = false;
            why.push(e.to_string());
        }
    }
    let eq = is_equivariant(&rec.matrix, &rec.action)?;
    Ok((
        valid && eq,
        json!({ "action": rec.action.kind, "order": rec.action.order, "action_valid": valid, "problems": why, "sigma_equals_phi": eq }),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Replace a torus residue by a rational diagonal matrix.
    RationalizeEigenvalue,
    /// Replace a nilpotent residue by zero.
    ZeroNilpotent,
    /// Move a marked point onto the ramification point x = 0.
    ShiftPointIntoBadSet,
    /// Flip one sign of the action generator.
    FlipActionSign,
}

impl Mutation {
    pub const ALL: [Mutation; 4] =
        [Mutation::RationalizeEigenvalue, Mutation::ZeroNilpotent, Mutation::ShiftPointIntoBadSet, Mutation::FlipActionSign];

    pub fn name(&self) -> &'static str {
        match self {
            Mutation::RationalizeEigenvalue => "rationalize-eigenvalue",
            Mutation::ZeroNilpotent => "zero-nilpotent",
            Mutation::ShiftPointIntoBadSet => "shift-point-into-bad-set",
            Mutation::FlipActionSign => "flip-action-sign",
        }
    }
}

impl std::str::FromStr for Mutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mutation> {
        Mutation::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::invalid(format!("unknown mutation {s:?}")))
    }
}

/// Apply a mutation; returns the mutated record and the one check id it
/// must break. Jet mutations re-run the interpolation so that only the
/// targeted hypothesis changes.
pub fn mutate(rec: &SystemRecord, m: Mutation) -> Result<(SystemRecord, String)> {
    let mut out = rec.clone();
    out.verification = None;
    let f = rec.cyclo()?;
    let find = |role: Role| {
        rec.points.iter().position(|p| p.role == role).ok_or_else(|| Error::invalid(format!("no {role} point to mutate")))
    };
    match m {
        Mutation::RationalizeEigenvalue => {
            let i = find(Role::Torus)?;
            let alg = rec.offsets()?[rec.points[i].factor].1;
            let dim = alg.n();
            let l = alg.rank();
            let mut d: Vec<i64> = (1..=l as i64).collect();
            match alg {
                Algebra::Sl(_) => d.push(-(d.iter().sum::<i64>())),
                _ => d.extend((1..=l as i64).map(|k| -k)),
            }
            let r = FMatrix::from_fn(dim, dim, |a, c| if a == c { f.from_int(d[a]) } else { f.zero() });
            let k = (-1 - out.points[i].lowest) as usize;
            out.points[i].jet[k] = r;
            out.rebuild()?;
            Ok((out, format!("torus-independence:{}", rec.points[i].label())))
        }
        Mutation::ZeroNilpotent => {
            let i = find(Role::Nilpotent)?;
            let k = (-1 - out.points[i].lowest) as usize;
            out.points[i].jet[k] = FMatrix::zeros_like(out.points[i].jet[k].rows(), out.points[i].jet[k].cols(), &f.zero());
            out.rebuild()?;
            Ok((out, format!("nilpotent-kernel:{}", rec.points[i].label())))
        }
        Mutation::ShiftPointIntoBadSet => {
            if rec.extension.n < 2 {
                return Err(Error::invalid("x = 0 is only bad on a ramified extension"));
            }
            let i = find(Role::Torus)?;
            out.points[i].x = f.zero();
            out.points[i].root = f.zero();
            Ok((out, "bad-set:0".to_string()))
        }
        Mutation::FlipActionSign => {
            let d = out.action.dim();
            let s = FMatrix::from_fn(d, d, |a, c| {
                if a != c {
                    f.zero()
                } else if a == d - 1 {
                    f.from_int(-1)
                } else {
                    f.one()
                }
            });
            out.action.generator = s.mul(&out.action.generator)?;
            Ok((out, "equivariance".to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::sl2_sqrtx;

    #[test]
    fn printed_fixture_passes_every_check() {
        let rec = sl2_sqrtx::record().unwrap();
        let b = check_system(&rec).unwrap();
        assert!(b.passed, "{:#?}", b.failed_ids());
        for id in ["points-distinct", "bad-set:4", "jets:9", "unique-slope:4", "torus-independence:9", "nilpotent-kernel:16", "lie-membership", "equivariance"] {
            assert_eq!(b.get(id).map(|c| c.status), Some(Status::Pass), "{id}");
        }
    }

    #[test]
    fn each_mutation_breaks_exactly_its_target() {
        let rec = sl2_sqrtx::record().unwrap();
        for m in Mutation::ALL {
            let (bad, target) = mutate(&rec, m).unwrap();
            let b = check_system(&bad).unwrap();
            assert_eq!(b.failed_ids(), vec![target.as_str()], "{}", m.name());
        }
    }

    #[test]
    fn malformed_records_are_rejected() {
        let mut rec = sl2_sqrtx::record().unwrap();
        rec.field.m = 16;
        assert!(check_system(&rec).is_err());
    }

    fn q(k: i64) -> num_rational::BigRational {
        num_rational::BigRational::from_integer(k.into())
    }

    #[test]
    fn assembled_systems_verify() {
        use crate::system::{assemble_group_equation, ActionKind, ActionSpec, Factor};
        let cases: Vec<(&str, ActionKind, u32, Vec<i64>)> = vec![
            ("sl2", ActionKind::TransposeInverse, 2, vec![4, 9, 16]),
            ("sp4", ActionKind::Conjugation, 2, vec![1, 4, 9]),
            ("sl3", ActionKind::Conjugation, 3, vec![1, 8, 27]),
            ("so8", ActionKind::Trivial, 1, vec![1, 2, 3, 5]),
        ];
        for (g, kind, order, xs) in cases {
            let fct: Factor = g.parse().unwrap();
            let xs: Vec<_> = xs.into_iter().map(q).collect();
            let rec = assemble_group_equation(&[fct], &ActionSpec { kind, order }, &xs).unwrap();
            let b = check_system(&rec).unwrap();
            assert!(b.passed, "{g}: {:?}", b.failed_ids());
        }
    }
}
