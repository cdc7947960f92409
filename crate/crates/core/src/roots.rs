//! Cartan data (Bourbaki numbering) and minuscule weight orbits.
//!
//! Weights live in fundamental-weight coordinates, `coords[i] = <lambda, alpha_i^vee>`.
//! Column `i` of the Cartan matrix is the simple root `alpha_i` written in the
//! same coordinates, so a simple reflection is integer-exact.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
    D,
    E6,
    E7,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::A => "A",
            Kind::B => "B",
            Kind::C => "C",
            Kind::D => "D",
            Kind::E6 => "E6",
            Kind::E7 => "E7",
        };
        f.write_str(s)
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Kind::A),
            "B" => Ok(Kind::B),
            "C" => Ok(Kind::C),
            "D" => Ok(Kind::D),
            "E6" => Ok(Kind::E6),
            "E7" => Ok(Kind::E7),
            other => Err(Error::unsupported(format!("root system type {other:?}"))),
        }
    }
}

pub type Weight = Vec<i64>;

/// Orbits larger than this are rejected as non-minuscule misuse.
pub const ORBIT_GUARD: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    kind: Kind,
    rank: usize,
    cartan: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn new(kind: Kind, rank: usize) -> Result<RootSystem> {
        let ok = match kind {
            Kind::A => rank >= 1,
            Kind::B | Kind::C => rank >= 2,
            Kind::D => rank >= 3,
            Kind::E6 => rank == 6,
            Kind::E7 => rank == 7,
        };
        if !ok {
            return Err(Error::invalid(format!("rank {rank} is not valid for type {kind}")));
        }
        let l = rank;
        let mut c = vec![vec![0i64; l]; l];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |a: usize, b: usize| {
            c[a - 1][b - 1] = -1;
            c[b - 1][a - 1] = -1;
        };
        match kind {
            Kind::A | Kind::B | Kind::C => (1..l).for_each(|i| link(i, i + 1)),
            Kind::D => {
                (1..l - 1).for_each(|i| link(i, i + 1));
                link(l - 2, l);
            }
            Kind::E6 | Kind::E7 => {
                link(1, 3);
                link(3, 4);
                link(2, 4);
                (4..l).for_each(|i| link(i, i + 1));
            }
        }
        match kind {
            // alpha_l short: <alpha_{l-1}, alpha_l^vee> = -2
            Kind::B => c[l - 1][l - 2] = -2,
            // alpha_l long: <alpha_l, alpha_{l-1}^vee> = -2
            Kind::C => c[l - 2][l - 1] = -2,
            _ => {}
        }
        Ok(RootSystem { kind, rank, cartan: c })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Entry (k, i) is <alpha_i, alpha_k^vee>.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Simple reflection s_i (1-based) applied to a weight.
    pub fn reflect(&self, i: usize, w: &[i64]) -> Weight {
        let c = w[i - 1];
        if c == 0 {
            return w.to_vec();
        }
        (0..self.rank).map(|k| w[k] - c * self.cartan[k][i - 1]).collect()
    }

    /// The standard basis vectors omega_k that are minuscule.
    pub fn minuscule_weights(&self) -> Vec<Weight> {
        let l = self.rank;
        let idx: Vec<usize> = match self.kind {
            Kind::A => (1..=l).collect(),
            Kind::B => vec![l],
            Kind::C => vec![1],
            Kind::D => vec![1, l - 1, l],
            Kind::E6 => vec![1, 6],
            Kind::E7 => vec![7],
        };
        idx.into_iter().map(|k| self.fundamental(k)).collect()
    }

    pub fn fundamental(&self, k: usize) -> Weight {
        let mut w = vec![0; self.rank];
        w[k - 1] = 1;
        w
    }

    /// Breadth-first orbit of `highest` under the simple reflections, children
    /// visited in simple-root order. The order is the canonical point labelling.
    pub fn weight_orbit(&self, highest: &[i64]) -> Result<Vec<Weight>> {
        if highest.len() != self.rank {
            return Err(Error::invalid("weight has the wrong number of coordinates"));
        }
        let mut seen: HashMap<Weight, usize> = HashMap::new();
        let mut orbit = vec![highest.to_vec()];
        seen.insert(highest.to_vec(), 0);
        let mut head = 0;
        while head < orbit.len() {
            let w = orbit[head].clone();
            head += 1;
            if w.iter().any(|c| c.abs() > 1) {
                return Err(Error::invalid(format!("weight {highest:?} is not minuscule")));
            }
            for i in 1..=self.rank {
                let r = self.reflect(i, &w);
                if !seen.contains_key(&r) {
                    seen.insert(r.clone(), orbit.len());
                    orbit.push(r);
                    if orbit.len() > ORBIT_GUARD {
                        return Err(Error::invalid("orbit-size guard exceeded"));
                    }
                }
            }
        }
        Ok(orbit)
    }

    /// Weight of the j-th coordinate vector (0-based) of the standard matrix
    /// representation: e_j for sl, and e_j, e_{l+j} carrying +eps, -eps for sp/so.
    pub fn coordinate_weight(&self, j: usize) -> Result<Weight> {
        let l = self.rank;
        let eps = |i: usize| -> Weight {
            // eps_i, 1-based
            let mut w = vec![0; l];
            match self.kind {
                Kind::A | Kind::C => {
                    if i <= l {
                        w[i - 1] += 1;
                    }
                    if i >= 2 {
                        w[i - 2] -= 1;
                    }
                }
                Kind::D => {
                    if i + 2 <= l {
                        w[i - 1] += 1;
                        if i >= 2 {
                            w[i - 2] -= 1;
                        }
                    } else if i == l - 1 {
                        w[l - 2] += 1;
                        w[l - 1] += 1;
                        w[l - 3] -= 1;
                    } else {
                        w[l - 1] += 1;
                        w[l - 2] -= 1;
                    }
                }
                _ => unreachable!(),
            }
            w
        };
        match self.kind {
            Kind::A if j <= l => Ok(eps(j + 1)),
            Kind::C | Kind::D if j < 2 * l => {
                let w = eps(j % l + 1);
                Ok(if j < l { w } else { w.into_iter().map(|c| -c).collect() })
            }
            _ => Err(Error::unsupported(format!("coordinate weights for {}{}", self.kind, l))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minuscule_lists() {
        let c3 = RootSystem::new(Kind::C, 3).unwrap();
        assert_eq!(c3.minuscule_weights(), vec![vec![1, 0, 0]]);
        let e7 = RootSystem::new(Kind::E7, 7).unwrap();
        assert_eq!(e7.minuscule_weights(), vec![vec![0, 0, 0, 0, 0, 0, 1]]);
        assert_eq!(RootSystem::new(Kind::A, 1).unwrap().minuscule_weights(), vec![vec![1]]);
        assert!(RootSystem::new(Kind::D, 2).is_err());
    }

    #[test]
    fn reflections() {
        let a1 = RootSystem::new(Kind::A, 1).unwrap();
        assert_eq!(a1.reflect(1, &[1]), vec![-1]);
        let a3 = RootSystem::new(Kind::A, 3).unwrap();
        let orbit = a3.weight_orbit(&[1, 0, 0]).unwrap();
        for i in 1..=3 {
            assert_eq!(a3.reflect(i, &orbit[i - 1]), orbit[i]);
        }
        assert_eq!(a3.reflect(2, &[1, 0, -1]), vec![1, 0, -1]);
    }

    #[test]
    fn orbit_sizes() {
        let size = |k, l, w: usize| {
            let rs = RootSystem::new(k, l).unwrap();
            rs.weight_orbit(&rs.fundamental(w)).unwrap().len()
        };
        assert_eq!(size(Kind::B, 3, 3), 8);
        assert_eq!(size(Kind::E6, 6, 1), 27);
        assert_eq!(size(Kind::E6, 6, 6), 27);
        assert_eq!(size(Kind::E7, 7, 7), 56);
        for l in 2..=6 {
            assert_eq!(size(Kind::C, l, 1), 2 * l);
            assert_eq!(size(Kind::B, l, l), 1 << l);
        }
        for l in 3..=6 {
            assert_eq!(size(Kind::D, l, 1), 2 * l);
            assert_eq!(size(Kind::D, l, l), 1 << (l - 1));
        }
    }

    #[test]
    fn non_minuscule_is_rejected() {
        let b3 = RootSystem::new(Kind::B, 3).unwrap();
        assert!(b3.weight_orbit(&[1, 0, 0]).is_err());
    }

    #[test]
    fn coordinate_weights_fill_the_standard_orbit() {
        for (k, l) in [(Kind::A, 4), (Kind::C, 3), (Kind::D, 4), (Kind::D, 3)] {
            let rs = RootSystem::new(k, l).unwrap();
            let mut orbit = rs.weight_orbit(&rs.fundamental(1)).unwrap();
            let n = orbit.len();
            let mut coords: Vec<Weight> = (0..n).map(|j| rs.coordinate_weight(j).unwrap()).collect();
            orbit.sort();
            coords.sort();
            assert_eq!(orbit, coords, "{k}{l}");
        }
    }
}
