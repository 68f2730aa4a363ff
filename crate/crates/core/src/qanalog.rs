//! Lusztig's q-analog of weight multiplicity
//!
//! ```text
//! m^λ_μ(q) = Σ_{w ∈ W} ε(w) K(w * λ - μ; q),
//! Σ_β K(β; q) e^β = Π_{α > 0} (1 - q e^α)^{-mult α}
//! ```
//!
//! together with the Freudenthal recurrence as an independent check of
//! `m^λ_μ(1) = dim L(λ)_μ`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gcm::{Gcm, RootVector, Weight};
use crate::poly::QPolynomial;
use crate::rational::{self, int, Rational};
use crate::roots::{positive_roots_with_mult, PositiveRootTable};

/// `K(β; q)` for every `β` in a box, by convolving one geometric series per
/// root color.
#[derive(Clone, Debug)]
pub struct KostantTable {
    corner: RootVector,
    strides: Vec<usize>,
    values: Vec<QPolynomial>,
}

impl KostantTable {
    pub fn new(table: &PositiveRootTable, corner: &RootVector) -> Result<Self> {
        if !table.covers(corner) {
            return Err(Error::BoxTooSmall {
                table: table.bound().to_string(),
                requested: corner.to_string(),
            });
        }
        if !corner.in_positive_cone() {
            return Err(Error::NotInPositiveCone(corner.to_string()));
        }
        let n = corner.rank();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (corner.coeffs()[i + 1] as usize + 1);
        }
        let len = if n == 0 { 1 } else { strides[0] * (corner.coeffs()[0] as usize + 1) };
        let points: Vec<Vec<i64>> = (0..len)
            .map(|idx| {
                let mut rem = idx;
                strides
                    .iter()
                    .map(|s| {
                        let c = rem / s;
                        rem %= s;
                        c as i64
                    })
                    .collect()
            })
            .collect();
        let mut values = vec![QPolynomial::zero(); len];
        values[0] = QPolynomial::one();
        for (alpha, mult) in table.roots_below(corner) {
            let a = alpha.coeffs();
            let offset: usize = a.iter().zip(&strides).map(|(c, s)| *c as usize * s).sum();
            for _ in 0..mult {
                // Multiply by 1 / (1 - q e^α), in place, in increasing index order.
                for idx in offset..len {
                    if points[idx].iter().zip(a).all(|(p, c)| p >= c) {
                        let prev = values[idx - offset].shift(1);
                        if !prev.is_zero() {
                            values[idx] += &prev;
                        }
                    }
                }
            }
        }
        Ok(KostantTable {
            corner: corner.clone(),
            strides,
            values,
        })
    }

    pub fn corner(&self) -> &RootVector {
        &self.corner
    }

    pub fn get(&self, beta: &RootVector) -> Option<&QPolynomial> {
        if !beta.in_positive_cone() || !beta.is_below(&self.corner) {
            return None;
        }
        let idx: usize = beta.coeffs().iter().zip(&self.strides).map(|(c, s)| *c as usize * s).sum();
        self.values.get(idx)
    }
}

/// `K(β; q)`.
pub fn kostant_partition(beta: &RootVector, table: &PositiveRootTable) -> Result<QPolynomial> {
    if !beta.in_positive_cone() {
        return Err(Error::NotInPositiveCone(beta.to_string()));
    }
    let k = KostantTable::new(table, beta)?;
    Ok(k.get(beta).cloned().expect("corner lies in its own box"))
}

/// One term `ε(w) K(w * λ - μ; q)` of the alternating sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylContribution {
    /// `w = s_{word[0]} s_{word[1]} ⋯` (rightmost letter acts first).
    pub word: Vec<usize>,
    pub sign: i8,
    /// `w * λ - μ`, in `Q+`.
    pub beta: RootVector,
}

pub(crate) fn check_highest_weight(lambda: &Weight, gcm: &Gcm) -> Result<()> {
    gcm.check_weight(lambda)?;
    if !lambda.is_integral() {
        return Err(Error::NotIntegral(lambda.to_string()));
    }
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    Ok(())
}

/// `λ - μ` when it lies in `Q+`.
pub fn positive_difference(lambda: &Weight, mu: &Weight, gcm: &Gcm) -> Result<Option<RootVector>> {
    Ok(gcm.root_difference(lambda, mu)?.filter(RootVector::in_positive_cone))
}

/// All `w` with `w * λ - μ ∈ Q+`.
///
/// Breadth-first search from the identity along length-increasing simple
/// reflections. Each step adds a positive multiple of a simple root to the
/// deficit `λ + ρ - w(λ + ρ)`, and `w * λ - μ = (λ - μ) - deficit`, so a
/// branch whose deficit leaves the box `λ - μ` never returns.
pub fn contributing_weyl_elements(lambda: &Weight, mu: &Weight, gcm: &Gcm) -> Result<Vec<WeylContribution>> {
    check_highest_weight(lambda, gcm)?;
    gcm.check_weight(mu)?;
    let Some(corner) = positive_difference(lambda, mu, gcm)? else {
        return Ok(Vec::new());
    };
    let n = gcm.rank();
    let start: Vec<i64> = lambda
        .coroot_values
        .iter()
        .map(|v| rational::to_i64(v).expect("integral") + 1)
        .collect();

    let mut out = Vec::new();
    let mut seen: HashSet<RootVector> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(RootVector::zero(n));
    queue.push_back((Vec::<usize>::new(), start, RootVector::zero(n)));
    while let Some((word, nu, deficit)) = queue.pop_front() {
        out.push(WeylContribution {
            sign: if word.len() % 2 == 0 { 1 } else { -1 },
            beta: &corner - &deficit,
            word: word.clone(),
        });
        for i in 0..n {
            let k = nu[i];
            if k <= 0 {
                continue;
            }
            let mut d = deficit.coeffs().to_vec();
            d[i] += k;
            let d = RootVector::new(d);
            if !d.is_below(&corner) || !seen.insert(d.clone()) {
                continue;
            }
            let next_nu: Vec<i64> = (0..n).map(|j| nu[j] - k * gcm.entry(j, i)).collect();
            let mut next_word = Vec::with_capacity(word.len() + 1);
            next_word.push(i);
            next_word.extend_from_slice(&word);
            queue.push_back((next_word, next_nu, d));
        }
    }
    out.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.beta.cmp(&b.beta)));
    Ok(out)
}

/// `m^λ_μ(q)`; zero when `λ - μ ∉ Q+`.
pub fn q_multiplicity(lambda: &Weight, mu: &Weight, gcm: &Gcm) -> Result<QPolynomial> {
    check_highest_weight(lambda, gcm)?;
    gcm.check_weight(mu)?;
    let Some(corner) = positive_difference(lambda, mu, gcm)? else {
        return Ok(QPolynomial::zero());
    };
    let table = positive_roots_with_mult(gcm, &corner)?;
    q_multiplicity_with_table(lambda, mu, gcm, &table)
}

/// `m^λ_μ(q)` against a precomputed root table covering `λ - μ`.
pub fn q_multiplicity_with_table(
    lambda: &Weight,
    mu: &Weight,
    gcm: &Gcm,
    table: &PositiveRootTable,
) -> Result<QPolynomial> {
    let contributions = contributing_weyl_elements(lambda, mu, gcm)?;
    let Some(corner) = positive_difference(lambda, mu, gcm)? else {
        return Ok(QPolynomial::zero());
    };
    let kostant = KostantTable::new(table, &corner)?;
    let mut total = QPolynomial::zero();
    for c in &contributions {
        let k = kostant.get(&c.beta).expect("contribution lies in the box");
        if c.sign > 0 {
            total += k;
        } else {
            total -= k;
        }
    }
    Ok(total)
}

/// `dim L(λ)_{λ-γ}` for every `γ` in the box below `corner`.
pub fn freudenthal_dims(
    lambda: &Weight,
    corner: &RootVector,
    gcm: &Gcm,
    table: &PositiveRootTable,
) -> Result<HashMap<RootVector, BigInt>> {
    check_highest_weight(lambda, gcm)?;
    if !table.covers(corner) {
        return Err(Error::BoxTooSmall {
            table: table.bound().to_string(),
            requested: corner.to_string(),
        });
    }
    let rho = gcm.rho();
    let lambda_rho = lambda.add(&rho);
    let roots = table.roots_below(corner);
    let lambda_alpha: Vec<Rational> = roots.iter().map(|(a, _)| gcm.weight_root_pairing(lambda, a)).collect();
    let mut dims: HashMap<RootVector, Rational> = HashMap::new();
    for gamma in corner.box_points() {
        if gamma.is_zero() {
            dims.insert(gamma, rational::one());
            continue;
        }
        let factor = int(2) * gcm.weight_root_pairing(&lambda_rho, &gamma) - gcm.root_pairing(&gamma, &gamma);
        let mut rhs = Rational::zero();
        for ((alpha, mult), la) in roots.iter().zip(&lambda_alpha) {
            let mut shifted = &gamma - alpha;
            while shifted.in_positive_cone() {
                if let Some(d) = dims.get(&shifted) {
                    if !d.is_zero() {
                        let pair = la - gcm.root_pairing(&shifted, alpha);
                        rhs += int(*mult as i64) * pair * d;
                    }
                }
                shifted = &shifted - alpha;
            }
        }
        rhs *= int(2);
        let dim = if factor.is_zero() {
            let nu = lambda.sub_root(&gamma, gcm);
            if !rhs.is_zero() || nu.is_dominant() {
                return Err(Error::SingularWeight(nu.to_string()));
            }
            Rational::zero()
        } else {
            rhs / factor
        };
        if !dim.is_integer() || dim.is_negative() {
            return Err(Error::InternalInconsistency(format!(
                "Freudenthal recurrence produced {} at depth {gamma}",
                rational::format(&dim)
            )));
        }
        dims.insert(gamma, dim);
    }
    Ok(dims.into_iter().map(|(k, v)| (k, v.to_integer())).collect())
}

/// `dim L(λ)_μ` by the Freudenthal recurrence.
pub fn freudenthal_dim(lambda: &Weight, mu: &Weight, gcm: &Gcm) -> Result<BigInt> {
    check_highest_weight(lambda, gcm)?;
    gcm.check_weight(mu)?;
    let Some(corner) = positive_difference(lambda, mu, gcm)? else {
        return Ok(BigInt::zero());
    };
    let table = positive_roots_with_mult(gcm, &corner)?;
    let dims = freudenthal_dims(lambda, &corner, gcm, &table)?;
    Ok(dims[&corner].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcm::validate_gcm;

    fn triple(a: i64, h: i64, n: i64) -> Weight {
        Weight::affine_triple(int(a), int(h), int(n))
    }

    #[test]
    fn kostant_small_cases() {
        let g = Gcm::affine_a(1);
        let t = positive_roots_with_mult(&g, &RootVector::new(vec![1, 1])).unwrap();
        assert_eq!(kostant_partition(&RootVector::zero(2), &t).unwrap(), QPolynomial::one());
        assert_eq!(kostant_partition(&RootVector::simple(2, 1), &t).unwrap(), QPolynomial::q_power(1));
        assert_eq!(
            kostant_partition(&RootVector::new(vec![1, 1]), &t).unwrap(),
            QPolynomial::from_terms([(1, 1), (2, 1)])
        );
        assert!(matches!(
            kostant_partition(&RootVector::new(vec![2, 1]), &t),
            Err(Error::BoxTooSmall { .. })
        ));
    }

    #[test]
    fn identity_only_at_top() {
        let g = Gcm::affine_a(1);
        let lambda = triple(0, 1, 0);
        let c = contributing_weyl_elements(&lambda, &lambda, &g).unwrap();
        assert_eq!(
            c,
            vec![WeylContribution {
                word: vec![],
                sign: 1,
                beta: RootVector::zero(2)
            }]
        );
        assert_eq!(q_multiplicity(&lambda, &lambda, &g).unwrap(), QPolynomial::one());
    }

    #[test]
    fn golden_affine_values() {
        let g = Gcm::affine_a(1);
        let m = q_multiplicity(&triple(0, 1, 0), &triple(0, 1, -2), &g).unwrap();
        assert_eq!(m, QPolynomial::from_terms([(2, 1), (4, 1)]));
        let m = q_multiplicity(&triple(0, 3, 0), &triple(2, 3, -3), &g).unwrap();
        assert_eq!(m, QPolynomial::from_terms([(1, 1), (2, 1), (3, 2), (5, 1)]));
        assert_eq!(freudenthal_dim(&triple(0, 1, 0), &triple(0, 1, -2), &g).unwrap(), BigInt::from(2));
        assert_eq!(freudenthal_dim(&triple(0, 3, 0), &triple(2, 3, -3), &g).unwrap(), BigInt::from(5));
    }

    #[test]
    fn rank_one_finite() {
        let g = validate_gcm(vec![vec![2]]).unwrap();
        let lambda = Weight::from_ints(&[2], &[]);
        let mu = Weight::from_ints(&[0], &[]);
        let c = contributing_weyl_elements(&lambda, &mu, &g).unwrap();
        // Only the identity: s_1 pushes the deficit to 3α_1, outside the box α_1.
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].beta, RootVector::new(vec![1]));
        assert_eq!(q_multiplicity(&lambda, &mu, &g).unwrap(), QPolynomial::q_power(1));
        assert_eq!(freudenthal_dim(&lambda, &mu, &g).unwrap(), BigInt::from(1));
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        let g = Gcm::affine_a(1);
        let lambda = triple(0, 1, 0);
        let above = triple(0, 1, 1);
        assert!(q_multiplicity(&lambda, &above, &g).unwrap().is_zero());
        assert!(contributing_weyl_elements(&lambda, &above, &g).unwrap().is_empty());
        assert_eq!(freudenthal_dim(&lambda, &above, &g).unwrap(), BigInt::zero());
        let bad = Weight::from_ints(&[-1, 1], &[0]);
        assert!(matches!(q_multiplicity(&bad, &lambda, &g), Err(Error::NotDominant(_))));
        let frac = Weight::new(vec![Rational::new(1.into(), 2.into()), int(1)], vec![int(0)]);
        assert!(matches!(q_multiplicity(&frac, &lambda, &g), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn finite_a2_adjoint_zero_weight() {
        // Adjoint of sl_3: zero weight space has dim 2 and q-analog q + q^2.
        let g = Gcm::finite_a(2);
        let lambda = Weight::from_ints(&[1, 1], &[]);
        let mu = Weight::from_ints(&[0, 0], &[]);
        assert_eq!(q_multiplicity(&lambda, &mu, &g).unwrap(), QPolynomial::from_terms([(1, 1), (2, 1)]));
        assert_eq!(freudenthal_dim(&lambda, &mu, &g).unwrap(), BigInt::from(2));
    }
}
