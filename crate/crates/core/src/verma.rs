//! Verma modules `M(λ)` over the loop realization, PBW straightening, and
//! the contravariant form weight space by weight space.
//!
//! `L(λ)` is never built globally: `L(λ)_{λ-β}` is `M(λ)_{λ-β}` modulo the
//! radical of the Gram matrix at depth `β`, and a vector vanishes in `L(λ)`
//! exactly when its projection modulo that radical is zero.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gcm::{RootVector, Weight};
use crate::linalg::Matrix;
use crate::loop_algebra::{Generator, LoopAlgebra, LoopElement};
use crate::qanalog::check_highest_weight;
use crate::rational::Rational;

/// Factors as indices into [`VermaModule::negative_generators`], leftmost
/// factor first, indices non-increasing. The vector is `m_1 m_2 ⋯ m_r v_λ`.
pub type Monomial = Vec<u16>;

/// Sparse vector of `M(λ)` in PBW coordinates.
pub type Vector = BTreeMap<Monomial, Rational>;

fn add_scaled(acc: &mut Vector, v: &Vector, k: &Rational) {
    if k.is_zero() {
        return;
    }
    for (m, c) in v {
        let entry = acc.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c * k;
        if entry.is_zero() {
            acc.remove(m);
        }
    }
}

/// Readable form of a PBW monomial: `(generator, exponent)` pairs, leftmost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwMonomial {
    pub factors: Vec<(Generator, u32)>,
    pub depth: RootVector,
}

/// The weight space `L(λ)_μ` as a quotient of `M(λ)_μ`.
#[derive(Clone, Debug)]
pub struct WeightSlice {
    pub lambda: Weight,
    pub mu: Weight,
    /// `λ - μ`.
    pub depth: RootVector,
    pub basis: Vec<Monomial>,
    pub gram: Matrix,
    pub radical_rank: usize,
    /// Diagonal pivots of the symmetric elimination, in elimination order.
    pub pivots: Vec<(usize, Rational)>,
    /// Basis positions whose images form a basis of `L(λ)_μ`.
    pub principal: Vec<usize>,
    /// `G_II^{-1} G_{I,:}`: coordinates in `L(λ)_μ` of the image of a vector of `M(λ)_μ`.
    pub projection: Matrix,
    index: HashMap<Monomial, usize>,
}

impl WeightSlice {
    pub fn dim(&self) -> usize {
        self.basis.len() - self.radical_rank
    }

    pub fn pivots_nonnegative(&self) -> bool {
        self.pivots.iter().all(|(_, p)| !p.is_negative())
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// PBW coordinates of a vector lying in this weight space.
    pub fn coords(&self, v: &Vector) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.basis.len()];
        for (m, c) in v {
            let i = self
                .position(m)
                .unwrap_or_else(|| panic!("monomial {m:?} is not of depth {}", self.depth));
            out[i] = c.clone();
        }
        out
    }

    /// Coordinates of the image in `L(λ)_μ`.
    pub fn project(&self, v: &Vector) -> Vec<Rational> {
        self.projection.mul_vec(&self.coords(v))
    }
}

/// `M(λ)` truncated to depths below a fixed box.
pub struct VermaModule {
    alg: LoopAlgebra,
    lambda: Weight,
    bound: RootVector,
    neg: Vec<Generator>,
    neg_depth: Vec<RootVector>,
    neg_index: HashMap<Generator, u16>,
    straighten: RefCell<HashMap<(Generator, Monomial), Rc<Vector>>>,
    bases: RefCell<HashMap<RootVector, Rc<Vec<Monomial>>>>,
    slices: RefCell<HashMap<RootVector, Rc<WeightSlice>>>,
}

impl VermaModule {
    /// `λ` must be dominant integral; weight spaces down to depth `bound`
    /// are available.
    pub fn new(alg: LoopAlgebra, lambda: Weight, bound: RootVector) -> Result<Self> {
        let gcm = alg.gcm();
        check_highest_weight(&lambda, gcm)?;
        gcm.check_root(&bound)?;
        if !bound.in_positive_cone() {
            return Err(Error::NotInPositiveCone(bound.to_string()));
        }
        let reach = bound.coeffs().iter().copied().max().unwrap_or(0) + 1;
        let mut neg = Vec::new();
        for x in 0..alg.finite_dim() {
            for m in -reach..=0 {
                let g = Generator::Loop { x, m };
                let depth = -&alg.weight(&g);
                if depth.in_positive_cone() && !depth.is_zero() && depth.is_below(&bound) {
                    neg.push(g);
                }
            }
        }
        // PBW order: height, then kind, then basis index.
        neg.sort_by_key(|g| {
            let Generator::Loop { x, m } = *g else { unreachable!() };
            (-alg.degree(g), alg.kind(x), x, m)
        });
        assert!(neg.len() < u16::MAX as usize, "too many negative generators");
        let neg_depth = neg.iter().map(|g| -&alg.weight(g)).collect();
        let neg_index = neg.iter().enumerate().map(|(i, g)| (*g, i as u16)).collect();
        Ok(VermaModule {
            alg,
            lambda,
            bound,
            neg,
            neg_depth,
            neg_index,
            straighten: RefCell::default(),
            bases: RefCell::default(),
            slices: RefCell::default(),
        })
    }

    pub fn algebra(&self) -> &LoopAlgebra {
        &self.alg
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn bound(&self) -> &RootVector {
        &self.bound
    }

    pub fn negative_generators(&self) -> &[Generator] {
        &self.neg
    }

    pub fn highest_weight_vector(&self) -> Vector {
        BTreeMap::from([(Vec::new(), Rational::one())])
    }

    pub fn depth(&self, m: &[u16]) -> RootVector {
        let mut d = RootVector::zero(self.bound.rank());
        for &i in m {
            d = &d + &self.neg_depth[i as usize];
        }
        d
    }

    pub fn describe(&self, m: &[u16]) -> PbwMonomial {
        let mut factors: Vec<(Generator, u32)> = Vec::new();
        for &i in m {
            let g = self.neg[i as usize];
            match factors.last_mut() {
                Some((h, k)) if *h == g => *k += 1,
                _ => factors.push((g, 1)),
            }
        }
        PbwMonomial {
            factors,
            depth: self.depth(m),
        }
    }

    pub fn format_monomial(&self, m: &[u16]) -> String {
        if m.is_empty() {
            return "v".into();
        }
        let parts: Vec<String> = self
            .describe(m)
            .factors
            .iter()
            .map(|(g, k)| {
                let s = self.alg.format_generator(g);
                if *k == 1 { format!("({s})") } else { format!("({s})^{k}") }
            })
            .collect();
        format!("{} v", parts.join(""))
    }

    /// All PBW monomials of depth `β`, sorted.
    pub fn pbw_basis(&self, beta: &RootVector) -> Rc<Vec<Monomial>> {
        if let Some(b) = self.bases.borrow().get(beta) {
            return b.clone();
        }
        let mut out = Vec::new();
        if beta.in_positive_cone() && beta.is_below(&self.bound) && !self.neg.is_empty() {
            let mut prefix = Vec::new();
            self.enumerate(beta, self.neg.len() - 1, &mut prefix, &mut out);
        } else if beta.is_zero() {
            out.push(Vec::new());
        }
        out.sort();
        let out = Rc::new(out);
        self.bases.borrow_mut().insert(beta.clone(), out.clone());
        out
    }

    fn enumerate(&self, remaining: &RootVector, max: usize, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        if remaining.is_zero() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..=max {
            let d = &self.neg_depth[i];
            if d.is_below(remaining) {
                prefix.push(i as u16);
                self.enumerate(&(remaining - d), i, prefix, out);
                prefix.pop();
            }
        }
    }

    fn act_generator(&self, g: Generator, m: &[u16]) -> Rc<Vector> {
        if self.alg.is_cartan(&g) {
            let nu = self.lambda.sub_root(&self.depth(m), self.alg.gcm());
            let c = self.alg.cartan_value(&g, &nu);
            let mut out = Vector::new();
            if !c.is_zero() {
                out.insert(m.to_vec(), c);
            }
            return Rc::new(out);
        }
        if let Some(&i) = self.neg_index.get(&g) {
            if m.first().is_none_or(|&first| i >= first) {
                let mut out = Vec::with_capacity(m.len() + 1);
                out.push(i);
                out.extend_from_slice(m);
                return Rc::new(BTreeMap::from([(out, Rational::one())]));
            }
        }
        let Some((&y, rest)) = m.split_first() else {
            assert!(
                self.alg.degree(&g) > 0,
                "lowering generator {} outside the module bound {}",
                self.alg.format_generator(&g),
                self.bound
            );
            return Rc::new(Vector::new());
        };
        let key = (g, m.to_vec());
        if let Some(v) = self.straighten.borrow().get(&key) {
            return v.clone();
        }
        // g · y · rest = y · (g · rest) + [g, y] · rest
        let yg = self.neg[y as usize];
        let mut out = Vector::new();
        let inner = self.act_generator(g, rest);
        for (mono, c) in inner.iter() {
            add_scaled(&mut out, &self.act_generator(yg, mono), c);
        }
        for (h, c) in self.alg.bracket_gen(&g, &yg).terms() {
            add_scaled(&mut out, &self.act_generator(*h, rest), c);
        }
        if cfg!(debug_assertions) {
            let expected = &self.depth(m) - &self.alg.weight(&g);
            for mono in out.keys() {
                debug_assert_eq!(self.depth(mono), expected, "straightening left the weight space");
            }
        }
        let out = Rc::new(out);
        self.straighten.borrow_mut().insert(key, out.clone());
        out
    }

    /// `u · v` in PBW coordinates.
    pub fn act(&self, u: &LoopElement, v: &Vector) -> Result<Vector> {
        let mut out = Vector::new();
        for (g, cg) in u.terms() {
            let shift = self.alg.weight(g);
            for (m, cm) in v {
                let target = &self.depth(m) - &shift;
                if !target.in_positive_cone() {
                    continue;
                }
                if !target.is_below(&self.bound) {
                    return Err(Error::BoxTooSmall {
                        table: self.bound.to_string(),
                        requested: target.to_string(),
                    });
                }
                add_scaled(&mut out, &self.act_generator(*g, m), &(cg * cm));
            }
        }
        Ok(out)
    }

    /// Applies `words[k-1] ⋯ words[1] words[0]` to `v`: the first element acts first.
    pub fn act_sequence(&self, elements: &[LoopElement], v: &Vector) -> Result<Vector> {
        elements.iter().try_fold(v.clone(), |acc, u| self.act(u, &acc))
    }

    /// The weight space at depth `β`, with its Gram matrix and projection.
    pub fn slice(&self, beta: &RootVector) -> Result<Rc<WeightSlice>> {
        if let Some(s) = self.slices.borrow().get(beta) {
            return Ok(s.clone());
        }
        if !beta.in_positive_cone() {
            return Err(Error::NotInPositiveCone(beta.to_string()));
        }
        if !beta.is_below(&self.bound) {
            return Err(Error::BoxTooSmall {
                table: self.bound.to_string(),
                requested: beta.to_string(),
            });
        }
        let basis = self.pbw_basis(beta);
        let n = basis.len();
        let mut gram = Matrix::zeros(n, n);
        if beta.is_zero() {
            gram.set(0, 0, Rational::one());
        } else {
            // ⟨y r v, m v⟩ = ⟨r v, σ(y) m v⟩ with σ(y) = -ȳ.
            let mut by_first: BTreeMap<u16, Vec<usize>> = BTreeMap::new();
            for (i, m) in basis.iter().enumerate() {
                by_first.entry(m[0]).or_default().push(i);
            }
            for (y, rows) in by_first {
                let sub = self.slice(&(beta - &self.neg_depth[y as usize]))?;
                let sigma = self
                    .alg
                    .bar(&LoopElement::generator(self.neg[y as usize]))
                    .scaled(&-Rational::one());
                let images: Vec<Vec<Rational>> = basis
                    .iter()
                    .map(|mj| {
                        let single = BTreeMap::from([(mj.clone(), Rational::one())]);
                        self.act(&sigma, &single).map(|v| sub.coords(&v))
                    })
                    .collect::<Result<_>>()?;
                for i in rows {
                    let r = sub.position(&basis[i][1..].to_vec()).expect("tail is a PBW monomial");
                    let grow = sub.gram.row(r);
                    for (j, img) in images.iter().enumerate() {
                        let mut s = Rational::zero();
                        for (a, b) in grow.iter().zip(img) {
                            if !b.is_zero() && !a.is_zero() {
                                s += a * b;
                            }
                        }
                        gram.set(i, j, s);
                    }
                }
            }
        }
        if !gram.is_symmetric() {
            return Err(Error::InternalInconsistency(format!(
                "Gram matrix at depth {beta} is not symmetric"
            )));
        }
        let elim = gram.symmetric_elimination();
        if elim.stalled || !elim.is_positive_semidefinite() {
            return Err(Error::InternalInconsistency(format!(
                "contravariant form at depth {beta} is not positive semidefinite"
            )));
        }
        let principal = elim.pivot_indices();
        let all: Vec<usize> = (0..n).collect();
        let projection = if principal.is_empty() {
            Matrix::zeros(0, n)
        } else {
            gram.submatrix(&principal, &principal)
                .solve_matrix(&gram.submatrix(&principal, &all))
                .ok_or_else(|| Error::InternalInconsistency("principal Gram block is singular".into()))?
        };
        let slice = Rc::new(WeightSlice {
            lambda: self.lambda.clone(),
            mu: self.lambda.sub_root(beta, self.alg.gcm()),
            depth: beta.clone(),
            radical_rank: n - principal.len(),
            index: basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect(),
            basis: (*basis).clone(),
            gram,
            pivots: elim.pivots,
            principal,
            projection,
        });
        self.slices.borrow_mut().insert(beta.clone(), slice.clone());
        Ok(slice)
    }

    /// Images in `L(λ)` of the weight components of `v`, zero components dropped.
    pub fn project(&self, v: &Vector) -> Result<BTreeMap<RootVector, Vec<Rational>>> {
        let mut parts: BTreeMap<RootVector, Vector> = BTreeMap::new();
        for (m, c) in v {
            parts.entry(self.depth(m)).or_default().insert(m.clone(), c.clone());
        }
        let mut out = BTreeMap::new();
        for (depth, part) in parts {
            let image = self.slice(&depth)?.project(&part);
            if image.iter().any(|c| !c.is_zero()) {
                out.insert(depth, image);
            }
        }
        Ok(out)
    }

    /// Matrix of a weight-homogeneous `u` from `L(λ)` at depth `β` to the
    /// target depth; `None` when the target lies outside `Q+`.
    pub fn operator_block(&self, u: &LoopElement, beta: &RootVector) -> Result<Option<(RootVector, Matrix)>> {
        let Some((g, _)) = u.terms().next() else {
            return Ok(None);
        };
        let target = beta - &self.alg.weight(g);
        if !target.in_positive_cone() {
            return Ok(None);
        }
        let src = self.slice(beta)?;
        let tgt = self.slice(&target)?;
        let mut out = Matrix::zeros(tgt.dim(), src.dim());
        for (col, &i) in src.principal.iter().enumerate() {
            let single = BTreeMap::from([(src.basis[i].clone(), Rational::one())]);
            let image = tgt.project(&self.act(u, &single)?);
            for (row, c) in image.into_iter().enumerate() {
                out.set(row, col, c);
            }
        }
        Ok(Some((target, out)))
    }
}

/// `L(λ)_μ` for dominant integral `λ` on the loop realization.
pub fn shapovalov_slice(alg: &LoopAlgebra, lambda: &Weight, mu: &Weight) -> Result<WeightSlice> {
    let gcm = alg.gcm();
    check_highest_weight(lambda, gcm)?;
    gcm.check_weight(mu)?;
    let beta = crate::qanalog::positive_difference(lambda, mu, gcm)?
        .ok_or_else(|| Error::NotInPositiveCone(format!("λ - μ for μ = {mu}")))?;
    let module = VermaModule::new(alg.clone(), lambda.clone(), beta.clone())?;
    let slice = module.slice(&beta)?;
    Ok((*slice).clone())
}
