//! Loop realization `sl_n[z, z^{-1}] ⊕ Cc ⊕ Cd` of the untwisted affine
//! algebra `A_{n-1}^(1)`.
//!
//! Roots are written in the affine simple-root coordinates of
//! [`Gcm::affine_a`]: node 0 is `α_0`, `δ = (1, …, 1)`, and `ε_i - ε_j`
//! (`i < j`) is `α_{i+1} + … + α_j`. The invariant form is the trace form,
//! so the highest root has square length 2.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gcm::{Gcm, RootVector, Weight};
use crate::rational::{int, Rational};

/// Kind of an `sl_n` basis element; the derived order is the PBW order of kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    E,
    H,
    F,
}

/// Basis symbol of the affine algebra. `x` indexes the `sl_n` basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Loop { x: usize, m: i64 },
    C,
    D,
}

/// Finite formal sum of basis symbols with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LoopElement {
    terms: BTreeMap<Generator, Rational>,
}

impl LoopElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        let mut out = Self::zero();
        out.add_term(g, Rational::one());
        out
    }

    pub fn add_term(&mut self, g: Generator, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &LoopElement, k: &Rational) {
        for (g, c) in other.terms() {
            self.add_term(*g, c * k);
        }
    }

    pub fn scaled(&self, k: &Rational) -> LoopElement {
        let mut out = Self::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn plus(&self, other: &LoopElement) -> LoopElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &Generator) -> Rational {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies every loop term by `z^k`; central and derivation terms are dropped
    /// unless `k == 0`.
    pub fn times_z(&self, k: i64) -> LoopElement {
        if k == 0 {
            return self.clone();
        }
        let mut out = Self::zero();
        for (g, c) in self.terms() {
            if let Generator::Loop { x, m } = *g {
                out.add_term(Generator::Loop { x, m: m + k }, c.clone());
            }
        }
        out
    }
}

impl FromIterator<(Generator, Rational)> for LoopElement {
    fn from_iter<I: IntoIterator<Item = (Generator, Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (g, c) in iter {
            out.add_term(g, c);
        }
        out
    }
}

#[derive(Clone, Debug)]
struct BasisElement {
    kind: Kind,
    name: String,
    /// Matrix unit position, or `None` for a Cartan element.
    unit: Option<(usize, usize)>,
    /// Root in affine coordinates at loop degree 0.
    root: RootVector,
}

/// Structure constants of `sl_n` together with the affine extension data.
#[derive(Clone, Debug)]
pub struct LoopAlgebra {
    n: usize,
    gcm: Gcm,
    basis: Vec<BasisElement>,
    bracket: Vec<Vec<Vec<(usize, i64)>>>,
    form: Vec<Vec<i64>>,
    /// `x̄ = sign · basis[index]` for the compact involution `x ↦ -x^T`.
    bar: Vec<(usize, i64)>,
    /// `cartan[k - 1]` is the basis index of `H_k = α_k^∨`.
    cartan: Vec<usize>,
}

impl LoopAlgebra {
    /// The loop algebra over `sl_n`, `n ≥ 2`.
    pub fn sl(n: usize) -> LoopAlgebra {
        assert!(n >= 2, "sl_n needs n >= 2");
        let rank = n;
        let finite_root = |i: usize, j: usize| -> RootVector {
            let mut v = vec![0i64; rank];
            let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
            for slot in v.iter_mut().take(hi + 1).skip(lo + 1) {
                *slot = sign;
            }
            RootVector::new(v)
        };
        let name = |i: usize, j: usize| -> String {
            if n == 2 {
                if i < j { "E".into() } else { "F".into() }
            } else {
                format!("E{}{}", i + 1, j + 1)
            }
        };
        let mut pos: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        pos.sort_by_key(|&(i, j)| (j - i, i));
        let mut basis: Vec<BasisElement> = pos
            .iter()
            .map(|&(i, j)| BasisElement {
                kind: Kind::E,
                name: name(i, j),
                unit: Some((i, j)),
                root: finite_root(i, j),
            })
            .collect();
        let mut cartan = Vec::new();
        for k in 1..n {
            cartan.push(basis.len());
            basis.push(BasisElement {
                kind: Kind::H,
                name: if n == 2 { "H".into() } else { format!("H{k}") },
                unit: None,
                root: RootVector::zero(rank),
            });
        }
        for &(i, j) in &pos {
            basis.push(BasisElement {
                kind: Kind::F,
                name: name(j, i),
                unit: Some((j, i)),
                root: finite_root(j, i),
            });
        }

        let matrix_of = |b: &BasisElement, k_index: usize| -> Vec<Vec<i64>> {
            let mut m = vec![vec![0i64; n]; n];
            match b.unit {
                Some((i, j)) => m[i][j] = 1,
                None => {
                    let k = cartan.iter().position(|&c| c == k_index).unwrap() + 1;
                    m[k - 1][k - 1] = 1;
                    m[k][k] = -1;
                }
            }
            m
        };
        let mats: Vec<Vec<Vec<i64>>> = basis.iter().enumerate().map(|(i, b)| matrix_of(b, i)).collect();
        let index_of_unit = |i: usize, j: usize| basis.iter().position(|b| b.unit == Some((i, j))).unwrap();
        let decompose = |m: &[Vec<i64>]| -> Vec<(usize, i64)> {
            let mut out = Vec::new();
            for (i, row) in m.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if i != j && v != 0 {
                        out.push((index_of_unit(i, j), v));
                    }
                }
            }
            let mut running = 0;
            for k in 1..n {
                running += m[k - 1][k - 1];
                if running != 0 {
                    out.push((cartan[k - 1], running));
                }
            }
            debug_assert_eq!(running + m[n - 1][n - 1], 0, "traceless");
            out.sort_unstable();
            out
        };
        let mul = |a: &[Vec<i64>], b: &[Vec<i64>]| -> Vec<Vec<i64>> {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
                .collect()
        };
        let dim = basis.len();
        let mut bracket = vec![vec![Vec::new(); dim]; dim];
        let mut form = vec![vec![0i64; dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let ab = mul(&mats[a], &mats[b]);
                let ba = mul(&mats[b], &mats[a]);
                let comm: Vec<Vec<i64>> = (0..n)
                    .map(|i| (0..n).map(|j| ab[i][j] - ba[i][j]).collect())
                    .collect();
                bracket[a][b] = decompose(&comm);
                form[a][b] = (0..n).map(|i| ab[i][i]).sum();
            }
        }
        let bar = basis
            .iter()
            .enumerate()
            .map(|(idx, b)| match b.unit {
                Some((i, j)) => (index_of_unit(j, i), -1),
                None => (idx, -1),
            })
            .collect();
        LoopAlgebra {
            n,
            gcm: Gcm::affine_a(n - 1),
            basis,
            bracket,
            form,
            bar,
            cartan,
        }
    }

    /// Recognizes an untwisted affine matrix of type `A` listed with the
    /// affine node first.
    pub fn from_gcm(gcm: &Gcm) -> Result<LoopAlgebra> {
        let n = gcm.rank();
        if n >= 2 && Gcm::affine_a(n - 1).matrix() == gcm.matrix() {
            Ok(LoopAlgebra::sl(n))
        } else {
            Err(Error::Unsupported(
                "explicit loop realization is available only for A_l^(1) with node 0 affine".into(),
            ))
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    pub fn finite_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn kind(&self, x: usize) -> Kind {
        self.basis[x].kind
    }

    pub fn name(&self, x: usize) -> &str {
        &self.basis[x].name
    }

    /// Basis index of the finite element with the given name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// `name · z^m` as a generator.
    pub fn loop_gen(&self, name: &str, m: i64) -> Generator {
        let x = self
            .index_of(name)
            .unwrap_or_else(|| panic!("no basis element named {name}"));
        Generator::Loop { x, m }
    }

    pub fn elem(&self, name: &str, m: i64) -> LoopElement {
        LoopElement::generator(self.loop_gen(name, m))
    }

    /// Basis index of the coroot `α_k^∨` for `1 ≤ k < n`.
    pub fn cartan_index(&self, k: usize) -> usize {
        self.cartan[k - 1]
    }

    /// Trace form on `sl_n`.
    pub fn finite_form(&self, x: usize, y: usize) -> i64 {
        self.form[x][y]
    }

    pub fn weight(&self, g: &Generator) -> RootVector {
        match *g {
            Generator::Loop { x, m } => {
                let delta = RootVector::new(vec![m; self.n]);
                &self.basis[x].root + &delta
            }
            Generator::C | Generator::D => RootVector::zero(self.n),
        }
    }

    /// Principal degree: the height of the weight.
    pub fn degree(&self, g: &Generator) -> i64 {
        self.weight(g).height()
    }

    pub fn is_cartan(&self, g: &Generator) -> bool {
        match *g {
            Generator::Loop { x, m } => m == 0 && self.basis[x].kind == Kind::H,
            Generator::C | Generator::D => true,
        }
    }

    /// Common principal degree of all terms, or `None` if inhomogeneous.
    /// The zero element has degree 0.
    pub fn homogeneous_degree(&self, u: &LoopElement) -> Option<i64> {
        let mut degs = u.terms().map(|(g, _)| self.degree(g));
        let first = degs.next().unwrap_or(0);
        degs.all(|d| d == first).then_some(first)
    }

    /// Value of a weight on a Cartan generator.
    pub fn cartan_value(&self, g: &Generator, w: &Weight) -> Rational {
        match *g {
            Generator::Loop { x, m: 0 } => {
                let k = self
                    .cartan
                    .iter()
                    .position(|&c| c == x)
                    .expect("cartan generator");
                w.coroot_values[k + 1].clone()
            }
            Generator::C => w.coroot_values.iter().sum(),
            Generator::D => w.scaling_values[0].clone(),
            Generator::Loop { .. } => panic!("not a Cartan generator"),
        }
    }

    pub fn bracket_gen(&self, a: &Generator, b: &Generator) -> LoopElement {
        use Generator::*;
        let mut out = LoopElement::zero();
        match (*a, *b) {
            (Loop { x, m }, Loop { x: y, m: k }) => {
                for &(t, c) in &self.bracket[x][y] {
                    out.add_term(Loop { x: t, m: m + k }, int(c));
                }
                if m + k == 0 {
                    out.add_term(C, int(m * self.form[x][y]));
                }
            }
            (D, Loop { x, m }) => out.add_term(Loop { x, m }, int(m)),
            (Loop { x, m }, D) => out.add_term(Loop { x, m }, int(-m)),
            _ => {}
        }
        out
    }

    pub fn bracket(&self, u: &LoopElement, v: &LoopElement) -> LoopElement {
        let mut out = LoopElement::zero();
        for (a, ca) in u.terms() {
            for (b, cb) in v.terms() {
                out.add_scaled(&self.bracket_gen(a, b), &(ca * cb));
            }
        }
        out
    }

    /// Compact Cartan involution `x z^m + αc + βd ↦ x̄ z^{-m} - αc - βd`.
    /// On rational combinations the anti-linear map is linear.
    pub fn bar(&self, u: &LoopElement) -> LoopElement {
        let mut out = LoopElement::zero();
        for (g, c) in u.terms() {
            match *g {
                Generator::Loop { x, m } => {
                    let (y, s) = self.bar[x];
                    out.add_term(Generator::Loop { x: y, m: -m }, c * int(s));
                }
                Generator::C | Generator::D => out.add_term(*g, -c),
            }
        }
        out
    }

    /// Invariant form; `⟨c, d⟩ = 1` and `⟨x z^m, y z^k⟩ = δ_{m+k,0} tr(xy)`.
    pub fn form(&self, u: &LoopElement, v: &LoopElement) -> Rational {
        use Generator::*;
        let mut out = Rational::zero();
        for (a, ca) in u.terms() {
            for (b, cb) in v.terms() {
                let f = match (*a, *b) {
                    (Loop { x, m }, Loop { x: y, m: k }) if m + k == 0 => self.form[x][y],
                    (C, D) | (D, C) => 1,
                    _ => 0,
                };
                if f != 0 {
                    out += ca * cb * int(f);
                }
            }
        }
        out
    }

    /// Simple root vectors: `e_0 = E_{n1} z` and `e_k = E_{k,k+1}` (1-based units).
    pub fn simple_generator(&self, i: usize) -> Generator {
        let unit = if i == 0 { (self.n - 1, 0) } else { (i - 1, i) };
        let x = self.basis.iter().position(|b| b.unit == Some(unit)).unwrap();
        Generator::Loop { x, m: if i == 0 { 1 } else { 0 } }
    }

    /// All loop generators of the given principal degree, plus `c`, `d` and
    /// the finite Cartan at degree 0, in generator order.
    pub fn generators_of_degree(&self, degree: i64) -> Vec<Generator> {
        let n = self.n as i64;
        let mut out = Vec::new();
        for (x, b) in self.basis.iter().enumerate() {
            let h = b.root.height();
            if (degree - h).rem_euclid(n) == 0 {
                let m = (degree - h) / n;
                out.push(Generator::Loop { x, m });
            }
        }
        if degree == 0 {
            out.push(Generator::C);
            out.push(Generator::D);
        }
        out.sort();
        out
    }

    pub fn format_generator(&self, g: &Generator) -> String {
        match *g {
            Generator::Loop { x, m } => {
                let name = &self.basis[x].name;
                match m {
                    0 => name.clone(),
                    1 => format!("{name}z"),
                    _ => format!("{name}z^{m}"),
                }
            }
            Generator::C => "c".into(),
            Generator::D => "d".into(),
        }
    }

    pub fn format(&self, u: &LoopElement) -> String {
        Formatted(self, u).to_string()
    }
}

struct Formatted<'a>(&'a LoopAlgebra, &'a LoopElement);

impl fmt::Display for Formatted<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Formatted(alg, u) = self;
        if u.is_zero() {
            return write!(f, "0");
        }
        for (i, (g, c)) in u.terms().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "{}", alg.format_generator(g))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sl2() -> LoopAlgebra {
        LoopAlgebra::sl(2)
    }

    #[test]
    fn sl2_relations() {
        let a = sl2();
        assert_eq!(a.bracket(&a.elem("E", 0), &a.elem("F", 0)), a.elem("H", 0));
        assert_eq!(
            a.bracket(&a.elem("H", 0), &a.elem("E", 0)),
            a.elem("E", 0).scaled(&int(2))
        );
        let hc = a.elem("H", 0).plus(&LoopElement::generator(Generator::C));
        assert_eq!(a.bracket(&a.elem("E", 1), &a.elem("F", -1)), hc);
        let d = LoopElement::generator(Generator::D);
        assert_eq!(a.bracket(&d, &a.elem("E", 3)), a.elem("E", 3).scaled(&int(3)));
        assert_eq!(a.format(&hc), "H + c");
    }

    #[test]
    fn weights_and_degrees() {
        let a = sl2();
        assert_eq!(a.weight(&a.simple_generator(0)), RootVector::new(vec![1, 0]));
        assert_eq!(a.weight(&a.simple_generator(1)), RootVector::new(vec![0, 1]));
        assert_eq!(a.degree(&a.loop_gen("H", 1)), 2);
        assert_eq!(a.degree(&a.loop_gen("F", 1)), 1);
        assert_eq!(
            a.generators_of_degree(1),
            vec![a.loop_gen("E", 0), a.loop_gen("F", 1)]
        );
        assert_eq!(a.generators_of_degree(2), vec![a.loop_gen("H", 1)]);
        let a3 = LoopAlgebra::sl(3);
        for i in 0..3 {
            assert_eq!(a3.weight(&a3.simple_generator(i)), RootVector::simple(3, i));
        }
        assert_eq!(a3.generators_of_degree(3).len(), 2);
    }

    #[test]
    fn coroots_match_the_matrix() {
        for n in 2..=4 {
            let a = LoopAlgebra::sl(n);
            let gcm = a.gcm().clone();
            for i in 1..n {
                let h = LoopElement::generator(Generator::Loop { x: a.cartan_index(i), m: 0 });
                for j in 0..n {
                    let ej = LoopElement::generator(a.simple_generator(j));
                    let expected = ej.scaled(&int(gcm.entry(i, j)));
                    assert_eq!(a.bracket(&h, &ej), expected, "n={n} i={i} j={j}");
                }
            }
            // [e_0, f_0] = α_0^∨ = c - θ^∨
            let e0 = LoopElement::generator(a.simple_generator(0));
            let f0 = a.bar(&e0).scaled(&int(-1));
            let h0 = a.bracket(&e0, &f0);
            assert_eq!(h0.coeff(&Generator::C), int(1));
            for j in 0..n {
                let ej = LoopElement::generator(a.simple_generator(j));
                assert_eq!(a.bracket(&h0, &ej), ej.scaled(&int(gcm.entry(0, j))));
            }
        }
    }

    #[test]
    fn recognizes_affine_a() {
        assert!(LoopAlgebra::from_gcm(&Gcm::affine_a(2)).is_ok());
        assert!(matches!(
            LoopAlgebra::from_gcm(&Gcm::finite_a(2)),
            Err(Error::Unsupported(_))
        ));
    }

    fn any_generator(n: usize) -> impl Strategy<Value = Generator> {
        let dim = n * n - 1;
        prop_oneof![
            8 => (0..dim, -4i64..=4).prop_map(|(x, m)| Generator::Loop { x, m }),
            1 => Just(Generator::C),
            1 => Just(Generator::D),
        ]
    }

    proptest! {
        #[test]
        fn antisymmetry_and_jacobi(
            n in 2usize..=3,
            picks in proptest::collection::vec(any::<proptest::sample::Index>(), 3),
            seeds in proptest::collection::vec(any_generator(3), 3),
        ) {
            let a = LoopAlgebra::sl(n);
            let dim = a.finite_dim();
            let g: Vec<LoopElement> = seeds
                .iter()
                .zip(&picks)
                .map(|(s, p)| match *s {
                    Generator::Loop { m, .. } => LoopElement::generator(Generator::Loop { x: p.index(dim), m }),
                    other => LoopElement::generator(other),
                })
                .collect();
            let (x, y, z) = (&g[0], &g[1], &g[2]);
            prop_assert_eq!(a.bracket(x, y), a.bracket(y, x).scaled(&int(-1)));
            let mut jac = a.bracket(x, &a.bracket(y, z));
            jac.add_scaled(&a.bracket(y, &a.bracket(z, x)), &int(1));
            jac.add_scaled(&a.bracket(z, &a.bracket(x, y)), &int(1));
            prop_assert!(jac.is_zero());
            // invariance of the form
            let lhs = a.form(&a.bracket(x, y), z);
            let rhs = a.form(x, &a.bracket(y, z));
            prop_assert_eq!(lhs, rhs);
            // involution is an automorphism of order two
            prop_assert_eq!(a.bar(&a.bar(x)), x.clone());
            prop_assert_eq!(a.bar(&a.bracket(x, y)), a.bracket(&a.bar(x), &a.bar(y)));
        }
    }
}
