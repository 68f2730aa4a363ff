//! Brylinski filtrations on weight spaces of `L(λ)` for `A_1^(1)`.
//!
//! `^eF^i` is the kernel of `e^{i+1}` for the principal nilpotent
//! `e = E + Fz`; `^sF^i` is the common kernel of all `x^{i+1}` with `x` in
//! the positive part of the principal Heisenberg, spanned by `e z^k`,
//! `k ≥ 0`. These commute, so by polarization it suffices to test every
//! degree-`(i+1)` monomial in them.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcm::{Gcm, RootVector, Weight};
use crate::linalg::Matrix;
use crate::loop_algebra::{LoopAlgebra, LoopElement};
use crate::poly::QPolynomial;
use crate::qanalog::{check_highest_weight, freudenthal_dim, positive_difference, q_multiplicity};
use crate::rational::{int, Rational};
use crate::verma::VermaModule;

/// Principal nilpotent of `ŝl_2` and the positive Heisenberg generators.
#[derive(Clone, Debug)]
pub struct PrincipalElements {
    pub e: LoopElement,
}

impl PrincipalElements {
    /// `e z^k`.
    pub fn heisenberg(&self, k: i64) -> LoopElement {
        self.e.times_z(k)
    }
}

pub fn principal_elements(alg: &LoopAlgebra) -> Result<PrincipalElements> {
    if alg.n() != 2 {
        return Err(Error::Unsupported("principal Heisenberg filtration is implemented for A_1^(1) only".into()));
    }
    Ok(PrincipalElements {
        e: alg.elem("E", 0).plus(&alg.elem("F", 1)),
    })
}

/// Graded pieces of a filtration of a weight space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationProfile {
    /// `(i, dim F^i / F^{i-1})` for each nonzero piece.
    pub jumps: Vec<(u32, usize)>,
    pub poincare: QPolynomial,
}

impl FiltrationProfile {
    pub fn total_dim(&self) -> usize {
        self.jumps.iter().map(|(_, d)| d).sum()
    }
}

/// An increasing filtration of `L(λ)_μ`, each step as a row basis.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub dim: usize,
    /// `levels[i]` spans `F^i`; the last level is the whole space.
    pub levels: Vec<Matrix>,
}

impl Filtration {
    pub fn profile(&self) -> FiltrationProfile {
        let mut jumps = Vec::new();
        let mut poincare = QPolynomial::zero();
        let mut prev = 0;
        for (i, level) in self.levels.iter().enumerate() {
            let d = level.rows();
            if d > prev {
                jumps.push((i as u32, d - prev));
                poincare.add_term(i as u32, (d - prev).into());
            }
            prev = d;
        }
        FiltrationProfile { jumps, poincare }
    }

    /// `F^i ⊆ other^i` for every `i`; missing levels count as the whole space.
    pub fn is_contained_in(&self, other: &Filtration) -> bool {
        self.levels.iter().enumerate().all(|(i, mine)| {
            let Some(theirs) = other.levels.get(i) else {
                return true;
            };
            let joint = Matrix::vstack(self.dim, [theirs, mine]);
            joint.rank() == theirs.rows()
        })
    }

    pub fn is_increasing(&self) -> bool {
        self.levels.windows(2).all(|w| {
            let joint = Matrix::vstack(self.dim, [&w[1], &w[0]]);
            joint.rank() == w[1].rows()
        })
    }

    pub fn is_exhaustive(&self) -> bool {
        self.levels.last().is_some_and(|l| l.rows() == self.dim)
    }
}

/// Images of a fixed weight space under a word in raising operators:
/// target depth ↦ matrix from `L(λ)_μ`.
type Blocks = BTreeMap<RootVector, Matrix>;

/// A raising element split into weight components, with cached operator blocks.
struct Raising<'m> {
    module: &'m VermaModule,
    components: Vec<LoopElement>,
    cache: RefCell<HashMap<RootVector, Vec<(RootVector, Matrix)>>>,
}

impl<'m> Raising<'m> {
    fn new(module: &'m VermaModule, u: &LoopElement) -> Self {
        let mut parts: BTreeMap<RootVector, LoopElement> = BTreeMap::new();
        for (g, c) in u.terms() {
            parts
                .entry(module.algebra().weight(g))
                .or_default()
                .add_term(*g, c.clone());
        }
        Raising {
            module,
            components: parts.into_values().collect(),
            cache: RefCell::default(),
        }
    }

    fn blocks_at(&self, beta: &RootVector) -> Result<Vec<(RootVector, Matrix)>> {
        if let Some(b) = self.cache.borrow().get(beta) {
            return Ok(b.clone());
        }
        let mut out = Vec::new();
        for u in &self.components {
            if let Some((target, m)) = self.module.operator_block(u, beta)? {
                if !m.is_zero() {
                    out.push((target, m));
                }
            }
        }
        self.cache.borrow_mut().insert(beta.clone(), out.clone());
        Ok(out)
    }

    fn apply(&self, blocks: &Blocks) -> Result<Blocks> {
        let mut out: Blocks = BTreeMap::new();
        for (gamma, m) in blocks {
            for (target, op) in self.blocks_at(gamma)? {
                let img = op.mul(m);
                match out.get_mut(&target) {
                    Some(acc) => acc.add_assign(&img),
                    None => {
                        out.insert(target, img);
                    }
                }
            }
        }
        out.retain(|_, m| !m.is_zero());
        Ok(out)
    }
}

fn kernel_rows(dim: usize, blocks: &[&Blocks]) -> Matrix {
    let parts: Vec<&Matrix> = blocks.iter().flat_map(|b| b.values()).collect();
    if parts.is_empty() {
        return Matrix::identity(dim);
    }
    let stacked = Matrix::vstack(dim, parts);
    let kernel = stacked.kernel();
    if kernel.is_empty() {
        Matrix::zeros(0, dim)
    } else {
        Matrix::from_rows(kernel)
    }
}

/// Shared setup: the module, the depth `β = λ - μ` and `dim L(λ)_μ`.
pub struct WeightSpace {
    pub module: VermaModule,
    pub beta: RootVector,
    pub dim: usize,
}

impl WeightSpace {
    pub fn new(alg: &LoopAlgebra, lambda: &Weight, mu: &Weight) -> Result<Self> {
        let gcm = alg.gcm();
        check_highest_weight(lambda, gcm)?;
        gcm.check_weight(mu)?;
        let beta = positive_difference(lambda, mu, gcm)?
            .ok_or_else(|| Error::NotInPositiveCone(format!("λ - μ for μ = {mu}")))?;
        let module = VermaModule::new(alg.clone(), lambda.clone(), beta.clone())?;
        let dim = module.slice(&beta)?.dim();
        Ok(WeightSpace { module, beta, dim })
    }

    fn start(&self) -> Blocks {
        BTreeMap::from([(self.beta.clone(), Matrix::identity(self.dim))])
    }

    fn max_steps(&self) -> usize {
        self.beta.height() as usize + 1
    }

    /// `F^i = ker e^{i+1}`.
    pub fn e_filtration(&self) -> Result<Filtration> {
        let p = principal_elements(self.module.algebra())?;
        let e = Raising::new(&self.module, &p.e);
        let mut blocks = self.start();
        let mut levels = Vec::new();
        for _ in 0..=self.max_steps() {
            blocks = e.apply(&blocks)?;
            let level = kernel_rows(self.dim, &[&blocks]);
            let full = level.rows() == self.dim;
            levels.push(level);
            if full {
                return Ok(Filtration { dim: self.dim, levels });
            }
        }
        Err(Error::InternalInconsistency(format!(
            "powers of e do not annihilate the weight space at depth {}",
            self.beta
        )))
    }

    /// `F^i` = common kernel of all degree-`(i+1)` monomials in `e z^k`,
    /// `0 ≤ k ≤ K` with `K` the `α_0`-coefficient of `λ - μ`.
    pub fn s_filtration(&self) -> Result<Filtration> {
        let p = principal_elements(self.module.algebra())?;
        let top = self.beta.coeffs()[0];
        let gens: Vec<Raising> = (0..=top)
            .map(|k| Raising::new(&self.module, &p.heisenberg(k)))
            .collect();
        // Generators beyond K push every weight out of the cone.
        let beyond = Raising::new(&self.module, &p.heisenberg(top + 1));
        for gamma in self.beta.box_points() {
            if !beyond.blocks_at(&gamma)?.is_empty() {
                return Err(Error::InternalInconsistency(format!(
                    "e z^{} acts nontrivially at depth {gamma}",
                    top + 1
                )));
            }
        }
        // monomial (non-decreasing generator indices) ↦ blocks
        let mut current: BTreeMap<Vec<usize>, Blocks> = BTreeMap::from([(Vec::new(), self.start())]);
        let mut levels = Vec::new();
        for _ in 0..=self.max_steps() {
            let mut next = BTreeMap::new();
            for (mono, blocks) in &current {
                let lo = mono.last().copied().unwrap_or(0);
                for (k, g) in gens.iter().enumerate().skip(lo) {
                    let img = g.apply(blocks)?;
                    if !img.is_empty() {
                        let mut m = mono.clone();
                        m.push(k);
                        next.insert(m, img);
                    }
                }
            }
            current = next;
            let all: Vec<&Blocks> = current.values().collect();
            let level = kernel_rows(self.dim, &all);
            let full = level.rows() == self.dim;
            levels.push(level);
            if full {
                return Ok(Filtration { dim: self.dim, levels });
            }
        }
        Err(Error::InternalInconsistency(format!(
            "Heisenberg monomials do not annihilate the weight space at depth {}",
            self.beta
        )))
    }
}

pub fn brylinski_e(alg: &LoopAlgebra, lambda: &Weight, mu: &Weight) -> Result<FiltrationProfile> {
    Ok(WeightSpace::new(alg, lambda, mu)?.e_filtration()?.profile())
}

pub fn brylinski_s(alg: &LoopAlgebra, lambda: &Weight, mu: &Weight) -> Result<FiltrationProfile> {
    Ok(WeightSpace::new(alg, lambda, mu)?.s_filtration()?.profile())
}

/// Both filtrations of one weight space compared with `m^λ_μ(q)`.
#[derive(Clone, Debug, Serialize)]
pub struct BrylinskiReport {
    pub dim: usize,
    pub e_profile: FiltrationProfile,
    pub s_profile: FiltrationProfile,
    pub m: QPolynomial,
    /// `^sP = m`.
    pub theorem_holds: bool,
    /// `^sF^i ⊆ ^eF^i` for all `i`.
    pub contained: bool,
    /// Both filtrations increase and exhaust the space.
    pub exhaustive: bool,
    /// Every Gram matrix used is symmetric with non-negative pivots.
    pub gram_ok: bool,
}

pub fn brylinski_report(alg: &LoopAlgebra, lambda: &Weight, mu: &Weight) -> Result<BrylinskiReport> {
    let space = WeightSpace::new(alg, lambda, mu)?;
    let m = q_multiplicity(lambda, mu, alg.gcm())?;
    let (ef, sf) = if space.dim == 0 {
        let empty = Filtration { dim: 0, levels: vec![Matrix::zeros(0, 0)] };
        (empty.clone(), empty)
    } else {
        (space.e_filtration()?, space.s_filtration()?)
    };
    let s_profile = sf.profile();
    let mut gram_ok = true;
    for gamma in space.beta.box_points() {
        let s = space.module.slice(&gamma)?;
        gram_ok &= s.gram.is_symmetric() && s.pivots_nonnegative();
    }
    Ok(BrylinskiReport {
        dim: space.dim,
        e_profile: ef.profile(),
        theorem_holds: s_profile.poincare == m,
        s_profile,
        m,
        contained: sf.is_contained_in(&ef),
        exhaustive: ef.is_exhaustive() && sf.is_exhaustive() && ef.is_increasing() && sf.is_increasing(),
        gram_ok,
    })
}

/// Pairs `(λ, μ)` on `A_1^(1)`: `λ = (α, h, 0)` dominant with `h ≤ max_level`,
/// `μ = λ - aα_0 - bα_1` dominant with `a ≤ max_depth`, and `μ` a weight of
/// `L(λ)`. Ordered by `λ`, then `(a, b)`.
pub fn verification_grid(max_level: i64, max_depth: i64) -> Result<Vec<(Weight, Weight)>> {
    let gcm = Gcm::affine_a(1);
    let mut out = Vec::new();
    for h in 0..=max_level {
        for alpha in 0..=h {
            let lambda = Weight::affine_triple(int(alpha), int(h), int(0));
            for a in 0..=max_depth {
                for b in 0..=a + alpha / 2 {
                    let beta = RootVector::new(vec![a, b]);
                    let mu = lambda.sub_root(&beta, &gcm);
                    if mu.is_dominant() && freudenthal_dim(&lambda, &mu, &gcm)? > BigInt::zero() {
                        out.push((lambda.clone(), mu));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `w = (F z^{-1})(E z^{-1}) v` in `L(λ)` together with `e² w` and `(e z) e w`,
/// each projected to `L(λ)` (zero weight components dropped).
#[derive(Clone, Debug)]
pub struct CounterexampleCheck {
    pub e_squared: BTreeMap<RootVector, Vec<Rational>>,
    /// `(e z) e w` in PBW coordinates of `M(λ)`.
    pub ez_e: BTreeMap<Vec<u16>, Rational>,
    pub ez_e_projected: BTreeMap<RootVector, Vec<Rational>>,
}

pub fn counterexample(alg: &LoopAlgebra, lambda: &Weight) -> Result<CounterexampleCheck> {
    let p = principal_elements(alg)?;
    let bound = RootVector::new(vec![2, 2]);
    let module = VermaModule::new(alg.clone(), lambda.clone(), bound)?;
    let w = module.act_sequence(&[alg.elem("E", -1), alg.elem("F", -1)], &module.highest_weight_vector())?;
    let e2w = module.act_sequence(&[p.e.clone(), p.e.clone()], &w)?;
    let ez_e = module.act_sequence(&[p.e.clone(), p.heisenberg(1)], &w)?;
    Ok(CounterexampleCheck {
        e_squared: module.project(&e2w)?,
        ez_e_projected: module.project(&ez_e)?,
        ez_e,
    })
}
