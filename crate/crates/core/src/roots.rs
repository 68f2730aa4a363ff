//! Positive roots and their multiplicities.
//!
//! Multiplicities come from Peterson's recurrence
//!
//! ```text
//! (β | β - 2ρ) c_β = Σ_{β' + β'' = β} (β' | β'') c_β' c_β''
//! c_β = Σ_{n ≥ 1, β/n ∈ Q+} mult(β/n) / n
//! ```
//!
//! evaluated over every point of a componentwise box in `Q+`, so it works for
//! any symmetrizable matrix, including indefinite ones.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcm::{Gcm, RootVector};
use crate::rational::{self, int, Rational};

/// Positive roots inside a box, with exact multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveRootTable {
    gcm_hash: String,
    bound: RootVector,
    entries: BTreeMap<RootVector, u64>,
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    root: RootVector,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    gcm_hash: String,
    #[serde(rename = "box")]
    bound: RootVector,
    entries: Vec<TableEntry>,
}

impl PositiveRootTable {
    pub fn gcm_hash(&self) -> &str {
        &self.gcm_hash
    }

    /// The box corner: every positive root `β <= bound` is present.
    pub fn bound(&self) -> &RootVector {
        &self.bound
    }

    pub fn height_bound(&self) -> i64 {
        self.bound.height()
    }

    pub fn covers(&self, beta: &RootVector) -> bool {
        beta.is_below(&self.bound)
    }

    /// Multiplicity of `beta`, 0 for non-roots; `None` outside the box.
    pub fn mult(&self, beta: &RootVector) -> Option<u64> {
        self.covers(beta)
            .then(|| self.entries.get(beta).copied().unwrap_or(0))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Roots in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&RootVector, u64)> {
        self.entries.iter().map(|(r, m)| (r, *m))
    }

    /// Roots `β <= corner` sorted by height, then lexicographically.
    pub fn roots_below(&self, corner: &RootVector) -> Vec<(RootVector, u64)> {
        let mut v: Vec<(RootVector, u64)> = self
            .entries
            .iter()
            .filter(|(r, _)| r.is_below(corner))
            .map(|(r, m)| (r.clone(), *m))
            .collect();
        v.sort_by(|(a, _), (b, _)| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
        v
    }

    pub fn to_json(&self) -> String {
        let file = TableFile {
            gcm_hash: self.gcm_hash.clone(),
            bound: self.bound.clone(),
            entries: self
                .entries
                .iter()
                .map(|(r, m)| TableEntry { root: r.clone(), mult: *m })
                .collect(),
        };
        serde_json::to_string(&file).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(s).map_err(|e| Error::Parse(format!("root table: {e}")))?;
        let rank = file.bound.rank();
        let mut entries = BTreeMap::new();
        for e in file.entries {
            if e.root.rank() != rank || !e.root.in_positive_cone() || !e.root.is_below(&file.bound) || e.mult == 0 {
                return Err(Error::Parse(format!("root table: entry {} outside its box", e.root)));
            }
            entries.insert(e.root, e.mult);
        }
        Ok(PositiveRootTable {
            gcm_hash: file.gcm_hash,
            bound: file.bound,
            entries,
        })
    }
}

/// Real positive roots of height at most `height_bound`, found by closing the
/// simple roots under simple reflections.
pub fn real_roots(gcm: &Gcm, height_bound: i64) -> BTreeSet<RootVector> {
    let n = gcm.rank();
    let mut seen: BTreeSet<RootVector> = BTreeSet::new();
    let mut queue: VecDeque<RootVector> = VecDeque::new();
    if height_bound < 1 {
        return seen;
    }
    for i in 0..n {
        let r = RootVector::simple(n, i);
        seen.insert(r.clone());
        queue.push_back(r);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let img = gcm.reflect_root(&beta, i);
            if img.in_positive_cone() && !img.is_zero() && img.height() <= height_bound && seen.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    seen
}

/// `dim g_β` by Peterson's recurrence.
pub fn peterson_mult(gcm: &Gcm, beta: &RootVector) -> Result<u64> {
    gcm.check_root(beta)?;
    if !beta.in_positive_cone() || beta.is_zero() {
        return Err(Error::NotInPositiveCone(beta.to_string()));
    }
    let table = positive_roots_with_mult(gcm, beta)?;
    Ok(table.mult(beta).unwrap_or(0))
}

/// Every positive root `β <= corner` with its multiplicity.
pub fn positive_roots_with_mult(gcm: &Gcm, corner: &RootVector) -> Result<PositiveRootTable> {
    extend_table(gcm, None, corner)
}

/// Builds the table for `corner`, reusing every multiplicity that `seed`
/// already knows. The seed must belong to the same matrix.
pub fn extend_table(gcm: &Gcm, seed: Option<&PositiveRootTable>, corner: &RootVector) -> Result<PositiveRootTable> {
    gcm.check_root(corner)?;
    if !corner.in_positive_cone() {
        return Err(Error::NotInPositiveCone(corner.to_string()));
    }
    if let Some(s) = seed {
        if s.gcm_hash != gcm.hash() {
            return Err(Error::InternalInconsistency("seed table belongs to another matrix".into()));
        }
        if corner.is_below(&s.bound) {
            return Ok(PositiveRootTable {
                gcm_hash: s.gcm_hash.clone(),
                bound: corner.clone(),
                entries: s.entries.iter().filter(|(r, _)| r.is_below(corner)).map(|(r, m)| (r.clone(), *m)).collect(),
            });
        }
    }
    let n = gcm.rank();
    let scale = gcm.form_scale();
    // scale * (ρ | α_i) = scale * D_i
    let rho_scaled: Vec<i64> = (0..n)
        .map(|i| {
            let r = &gcm.symmetrizer()[i] * int(scale);
            rational::to_i64(&r).expect("scaled symmetrizer is integral")
        })
        .collect();

    let mut mult: BTreeMap<RootVector, u64> = BTreeMap::new();
    let mut c: HashMap<RootVector, Rational> = HashMap::new();
    let mut nonzero: Vec<(RootVector, Rational)> = Vec::new();

    for gamma in corner.box_points() {
        if gamma.is_zero() {
            continue;
        }
        let divisor_part = divisor_sum(&gamma, &mult);
        let m: u64 = if let Some(known) = seed.and_then(|s| s.mult(&gamma)) {
            known
        } else if gamma.height() == 1 {
            1
        } else {
            let rho_term: i64 = gamma.coeffs().iter().zip(&rho_scaled).map(|(g, r)| g * r).sum();
            let lhs_coeff = gcm.scaled_root_pairing(&gamma, &gamma) - 2 * rho_term;
            let mut rhs = Rational::zero();
            for (g1, c1) in &nonzero {
                if !g1.is_below(&gamma) || *g1 == gamma {
                    continue;
                }
                let g2 = &gamma - g1;
                if let Some(c2) = c.get(&g2) {
                    let p = gcm.scaled_root_pairing(g1, &g2);
                    if p != 0 {
                        rhs += int(p) * c1 * c2;
                    }
                }
            }
            let m_rat = if lhs_coeff == 0 {
                if !rhs.is_zero() {
                    return Err(Error::InternalInconsistency(format!(
                        "Peterson recurrence has vanishing left side but nonzero right side at {gamma}"
                    )));
                }
                Rational::zero()
            } else {
                rhs / int(lhs_coeff) - &divisor_part
            };
            to_multiplicity(&m_rat, &gamma)?
        };
        if m > 0 {
            mult.insert(gamma.clone(), m);
        }
        let cg = int(m as i64) + divisor_part;
        if !cg.is_zero() {
            c.insert(gamma.clone(), cg.clone());
            nonzero.push((gamma, cg));
        }
    }
    Ok(PositiveRootTable {
        gcm_hash: gcm.hash().to_string(),
        bound: corner.clone(),
        entries: mult,
    })
}

/// `Σ_{n ≥ 2, β/n ∈ Q+} mult(β/n) / n`
fn divisor_sum(beta: &RootVector, mult: &BTreeMap<RootVector, u64>) -> Rational {
    let content = beta.content();
    let mut s = Rational::zero();
    for d in 2..=content {
        if content % d != 0 {
            continue;
        }
        let part = RootVector::new(beta.coeffs().iter().map(|x| x / d).collect());
        if let Some(&m) = mult.get(&part) {
            s += Rational::new(BigInt::from(m), BigInt::from(d));
        }
    }
    s
}

fn to_multiplicity(m: &Rational, at: &RootVector) -> Result<u64> {
    if !m.is_integer() || m.is_negative() {
        return Err(Error::InternalInconsistency(format!(
            "Peterson recurrence produced multiplicity {} at {at}",
            rational::format(m)
        )));
    }
    m.to_integer()
        .to_u64()
        .ok_or_else(|| Error::InternalInconsistency(format!("multiplicity overflow at {at}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcm::validate_gcm;

    #[test]
    fn finite_a1_and_a2() {
        let a1 = validate_gcm(vec![vec![2]]).unwrap();
        let t = positive_roots_with_mult(&a1, &RootVector::new(vec![3])).unwrap();
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![(&RootVector::new(vec![1]), 1)]);
        assert_eq!(real_roots(&a1, 5).len(), 1);

        let a2 = Gcm::finite_a(2);
        let rr: Vec<RootVector> = real_roots(&a2, 2).into_iter().collect();
        assert_eq!(
            rr,
            vec![RootVector::new(vec![0, 1]), RootVector::new(vec![1, 0]), RootVector::new(vec![1, 1])]
        );
        let t = positive_roots_with_mult(&a2, &RootVector::new(vec![3, 3])).unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn affine_a1_small_box() {
        let g = Gcm::affine_a(1);
        let delta = RootVector::new(vec![1, 1]);
        assert_eq!(peterson_mult(&g, &RootVector::simple(2, 1)).unwrap(), 1);
        assert_eq!(peterson_mult(&g, &delta).unwrap(), 1);
        let t = positive_roots_with_mult(&g, &delta).unwrap();
        assert_eq!(t.len(), 3);
        let t2 = positive_roots_with_mult(&g, &delta.scale(2)).unwrap();
        for r in [vec![2, 2], vec![1, 2], vec![2, 1]] {
            assert_eq!(t2.mult(&RootVector::new(r)), Some(1));
        }
        assert_eq!(t2.mult(&RootVector::new(vec![2, 0])), Some(0));
        assert_eq!(t2.mult(&RootVector::new(vec![3, 0])), None);
    }

    #[test]
    fn affine_a1_real_roots() {
        let g = Gcm::affine_a(1);
        let got: BTreeSet<RootVector> = real_roots(&g, 5);
        let want: BTreeSet<RootVector> = [[1, 0], [0, 1], [2, 1], [1, 2], [3, 2], [2, 3]]
            .iter()
            .map(|v| RootVector::new(v.to_vec()))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn affine_a2_imaginary() {
        let g = Gcm::affine_a(2);
        assert_eq!(peterson_mult(&g, &RootVector::new(vec![1, 1, 1])).unwrap(), 2);
        assert_eq!(peterson_mult(&g, &RootVector::new(vec![2, 2, 2])).unwrap(), 2);
    }

    #[test]
    fn rejects_outside_cone() {
        let g = Gcm::affine_a(1);
        assert!(matches!(
            peterson_mult(&g, &RootVector::new(vec![1, -1])),
            Err(Error::NotInPositiveCone(_))
        ));
        assert!(peterson_mult(&g, &RootVector::zero(2)).is_err());
    }

    #[test]
    fn hyperbolic_known_values() {
        // Real roots get multiplicity 1 and the table is symmetric under the
        // diagram automorphism swapping the nodes.
        let g = validate_gcm(vec![vec![2, -3], vec![-3, 2]]).unwrap();
        let t = positive_roots_with_mult(&g, &RootVector::new(vec![4, 4])).unwrap();
        for r in real_roots(&g, 8) {
            if t.covers(&r) {
                assert_eq!(t.mult(&r), Some(1), "real root {r}");
            }
        }
        for (r, m) in t.iter() {
            let swapped = RootVector::new(vec![r.coeffs()[1], r.coeffs()[0]]);
            assert_eq!(t.mult(&swapped), Some(m));
        }
    }

    #[test]
    fn extension_keeps_old_values() {
        let g = Gcm::affine_a(2);
        let small = positive_roots_with_mult(&g, &RootVector::new(vec![2, 2, 2])).unwrap();
        let big = extend_table(&g, Some(&small), &RootVector::new(vec![3, 3, 3])).unwrap();
        let fresh = positive_roots_with_mult(&g, &RootVector::new(vec![3, 3, 3])).unwrap();
        assert_eq!(big, fresh);
        for (r, m) in small.iter() {
            assert_eq!(big.mult(r), Some(m));
        }
    }

    #[test]
    fn json_round_trip() {
        let g = Gcm::affine_a(1);
        let t = positive_roots_with_mult(&g, &RootVector::new(vec![3, 3])).unwrap();
        let back = PositiveRootTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(PositiveRootTable::from_json("{").is_err());
    }
}
