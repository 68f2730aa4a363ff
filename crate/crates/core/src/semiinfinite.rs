//! The semi-infinite cocycle
//!
//! ```text
//! γ(x, y) = Σ_{0 ≤ n < k} tr_{g_n}(ad x · ad y),   deg x = k = -deg y,
//! ```
//!
//! computed by explicit traces on principal graded pieces of the loop
//! realization, and its comparison with `2⟨ρ, α⟩ {x, y}` where
//! `{x, y} = -⟨x, ȳ⟩`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcm::RootVector;
use crate::loop_algebra::{Generator, LoopAlgebra, LoopElement};
use crate::rational::{int, Rational};

/// Basis of the principal-degree-`n` subspace; degree 0 includes `c` and `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub degree: i64,
    pub basis: Vec<Generator>,
}

pub fn graded_basis(alg: &LoopAlgebra, degree: i64) -> GradedPiece {
    GradedPiece {
        degree,
        basis: alg.generators_of_degree(degree),
    }
}

fn homogeneous(alg: &LoopAlgebra, u: &LoopElement, which: &str) -> Result<i64> {
    alg.homogeneous_degree(u)
        .ok_or_else(|| Error::DegreeMismatch(format!("{which} = {} is not homogeneous", alg.format(u))))
}

/// `tr_{g_n}(ad x · ad y)`.
pub fn partial_trace(alg: &LoopAlgebra, x: &LoopElement, y: &LoopElement, n: i64) -> Rational {
    let mut tr = Rational::zero();
    for b in graded_basis(alg, n).basis {
        let img = alg.bracket(x, &alg.bracket(y, &LoopElement::generator(b)));
        tr += img.coeff(&b);
    }
    tr
}

/// `γ(x, y)`; zero when the degrees do not sum to zero.
pub fn cocycle(alg: &LoopAlgebra, x: &LoopElement, y: &LoopElement) -> Result<Rational> {
    let k = homogeneous(alg, x, "x")?;
    let l = homogeneous(alg, y, "y")?;
    if k + l != 0 {
        return Ok(Rational::zero());
    }
    if k < 0 {
        return Err(Error::DegreeMismatch(format!(
            "first argument has negative degree {k}"
        )));
    }
    Ok((0..k).map(|n| partial_trace(alg, x, y, n)).sum())
}

/// `{x, y} = -⟨x, ȳ⟩`, positive definite on the positive part.
pub fn hermitian_form(alg: &LoopAlgebra, x: &LoopElement, y: &LoopElement) -> Rational {
    -alg.form(x, &alg.bar(y))
}

#[derive(Clone, Debug, Serialize)]
pub struct KahlerRow {
    pub x: String,
    pub y: String,
    pub degree: i64,
    pub root: RootVector,
    /// `-γ(x, ȳ)`
    pub lhs: String,
    /// `2⟨ρ, α⟩ {x, y}`
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KahlerReport {
    pub depth: i64,
    pub rows: Vec<KahlerRow>,
}

impl KahlerReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("x\ty\tdegree\troot\tlhs\trhs\tstatus\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.x,
                r.y,
                r.degree,
                r.root,
                r.lhs,
                r.rhs,
                if r.holds { "pass" } else { "FAIL" }
            ));
        }
        s
    }
}

/// Compares both sides for every pair of basis vectors sharing a positive
/// root space of principal degree `1..=depth`.
pub fn kahler_check(alg: &LoopAlgebra, depth: i64) -> Result<KahlerReport> {
    if depth < 1 {
        return Err(Error::Parse(format!("depth must be at least 1, got {depth}")));
    }
    let gcm = alg.gcm();
    let rho = gcm.rho();
    let mut rows = Vec::new();
    for n in 1..=depth {
        let mut spaces: BTreeMap<RootVector, Vec<Generator>> = BTreeMap::new();
        for g in graded_basis(alg, n).basis {
            spaces.entry(alg.weight(&g)).or_default().push(g);
        }
        for (root, basis) in spaces {
            let scale = int(2) * gcm.weight_root_pairing(&rho, &root);
            for gx in &basis {
                for gy in &basis {
                    let x = LoopElement::generator(*gx);
                    let y = LoopElement::generator(*gy);
                    let lhs = -cocycle(alg, &x, &alg.bar(&y))?;
                    let rhs = &scale * hermitian_form(alg, &x, &y);
                    rows.push(KahlerRow {
                        x: alg.format_generator(gx),
                        y: alg.format_generator(gy),
                        degree: n,
                        root: root.clone(),
                        holds: lhs == rhs,
                        lhs: crate::rational::format(&lhs),
                        rhs: crate::rational::format(&rhs),
                    });
                }
            }
        }
    }
    Ok(KahlerReport { depth, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn graded_pieces() {
        let a = LoopAlgebra::sl(2);
        let names = |n: i64| -> Vec<String> {
            graded_basis(&a, n).basis.iter().map(|g| a.format_generator(g)).collect()
        };
        assert_eq!(names(0), vec!["H", "c", "d"]);
        assert_eq!(names(1), vec!["E", "Fz"]);
        assert_eq!(names(2), vec!["Hz"]);
        assert_eq!(names(-1), vec!["Ez^-1", "F"]);
    }

    #[test]
    fn first_values() {
        let a = LoopAlgebra::sl(2);
        let e = a.elem("E", 0);
        let f = a.elem("F", 0);
        assert_eq!(cocycle(&a, &e, &f).unwrap(), int(2));
        assert_eq!(partial_trace(&a, &e, &f, 0), int(2));
        assert!(cocycle(&a, &LoopElement::generator(Generator::D), &LoopElement::generator(Generator::C))
            .unwrap()
            .is_zero());
        let hz = a.elem("H", 1);
        assert_eq!(-cocycle(&a, &hz, &a.bar(&hz)).unwrap(), int(8));
        assert!(matches!(cocycle(&a, &f, &e), Err(Error::DegreeMismatch(_))));
        let mixed = e.plus(&hz);
        assert!(matches!(cocycle(&a, &mixed, &f), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn kahler_small_depth() {
        let a = LoopAlgebra::sl(2);
        let r = kahler_check(&a, 1).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.all_hold());
        let r3 = kahler_check(&LoopAlgebra::sl(3), 3).unwrap();
        assert!(r3.all_hold(), "{}", r3.to_tsv());
    }

    proptest! {
        #[test]
        fn vanishes_off_opposite_degrees(
            x in 0usize..3, mx in -3i64..=3, y in 0usize..3, my in -3i64..=3,
        ) {
            let a = LoopAlgebra::sl(2);
            let gx = LoopElement::generator(Generator::Loop { x, m: mx });
            let gy = LoopElement::generator(Generator::Loop { x: y, m: my });
            let (dx, dy) = (a.homogeneous_degree(&gx).unwrap(), a.homogeneous_degree(&gy).unwrap());
            prop_assume!(dx + dy != 0);
            prop_assert!(cocycle(&a, &gx, &gy).unwrap().is_zero());
        }
    }
}
