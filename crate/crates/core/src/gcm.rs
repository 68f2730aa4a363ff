//! Generalized Cartan matrices, root-lattice vectors, weights and the
//! invariant bilinear form.
//!
//! Conventions: `A[i][j] = α_j(α_i^∨)`. A weight stores its values on the
//! simple coroots together with its values on a fixed set of scaling
//! elements `d_k` completing the coroots to a basis of the Cartan
//! subalgebra. Scaling element `d_k` satisfies `α_j(d_k) = [j == J_k]` for a
//! set of nodes `J` chosen once per matrix (node 0 for an affine matrix
//! listed with `α_0` first). The form is normalized by `⟨α_i, α_j⟩ = D_i A_ij`
//! where `D` is the symmetrizer.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, int, Rational};

/// Integer vector in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(Vec<i64>);

impl RootVector {
    pub fn new(coeffs: Vec<i64>) -> Self {
        RootVector(coeffs)
    }

    pub fn zero(rank: usize) -> Self {
        RootVector(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        RootVector(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Membership in `Q+`.
    pub fn in_positive_cone(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Componentwise `self <= other`.
    pub fn is_below(&self, other: &RootVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, k: i64) -> RootVector {
        RootVector(self.0.iter().map(|c| c * k).collect())
    }

    /// Support: the nodes with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != 0).collect()
    }

    /// Largest `n` with `self / n` integral.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    /// All vectors `0 <= v <= self` in increasing height, ties broken
    /// lexicographically.
    pub fn box_points(&self) -> Vec<RootVector> {
        assert!(self.in_positive_cone(), "box corner must lie in Q+");
        let mut pts = vec![Vec::with_capacity(self.0.len())];
        for &b in &self.0 {
            let mut next = Vec::with_capacity(pts.len() * (b as usize + 1));
            for p in &pts {
                for c in 0..=b {
                    let mut q = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
            pts = next;
        }
        let mut out: Vec<RootVector> = pts.into_iter().map(RootVector).collect();
        out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
        out
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&c| int(c)).collect()
    }

    pub fn from_rational(v: &[Rational]) -> Option<RootVector> {
        v.iter().map(rational::to_i64).collect::<Option<Vec<_>>>().map(RootVector)
    }
}

impl fmt::Debug for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Add for &RootVector {
    type Output = RootVector;
    fn add(self, rhs: &RootVector) -> RootVector {
        assert_eq!(self.0.len(), rhs.0.len());
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RootVector {
    type Output = RootVector;
    fn sub(self, rhs: &RootVector) -> RootVector {
        assert_eq!(self.0.len(), rhs.0.len());
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector(self.0.iter().map(|c| -c).collect())
    }
}

/// A weight: values on the simple coroots and on the scaling elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coroot_values: Vec<Rational>,
    pub scaling_values: Vec<Rational>,
}

impl Weight {
    pub fn new(coroot_values: Vec<Rational>, scaling_values: Vec<Rational>) -> Self {
        Weight {
            coroot_values,
            scaling_values,
        }
    }

    pub fn from_ints(coroot_values: &[i64], scaling_values: &[i64]) -> Self {
        Weight::new(
            coroot_values.iter().map(|&c| int(c)).collect(),
            scaling_values.iter().map(|&c| int(c)).collect(),
        )
    }

    /// Affine rank-2 shorthand `(α, h, n)` meaning `α H* + h c* + n d*`:
    /// `λ(α_1^∨) = α`, `λ(α_0^∨) = h - α`, `λ(d) = n`.
    pub fn affine_triple(alpha: Rational, h: Rational, n: Rational) -> Self {
        Weight::new(vec![&h - &alpha, alpha], vec![n])
    }

    pub fn rank(&self) -> usize {
        self.coroot_values.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.coroot_values.iter().all(rational::is_nonnegative)
    }

    pub fn is_integral(&self) -> bool {
        self.coroot_values.iter().all(Rational::is_integer)
    }

    /// The `(α, h, n)` triple of a rank-2 affine weight.
    pub fn as_affine_triple(&self) -> Option<(Rational, Rational, Rational)> {
        if self.coroot_values.len() != 2 || self.scaling_values.len() != 1 {
            return None;
        }
        let a = self.coroot_values[1].clone();
        let h = &self.coroot_values[0] + &a;
        Some((a, h, self.scaling_values[0].clone()))
    }

    fn check_shape(&self, gcm: &Gcm) -> Result<()> {
        if self.coroot_values.len() != gcm.rank() {
            return Err(Error::DimensionMismatch {
                expected: gcm.rank(),
                found: self.coroot_values.len(),
            });
        }
        if self.scaling_values.len() != gcm.corank() {
            return Err(Error::DimensionMismatch {
                expected: gcm.corank(),
                found: self.scaling_values.len(),
            });
        }
        Ok(())
    }

    /// `self + Σ k_i α_i` with rational coefficients.
    pub fn add_root_rational(&self, k: &[Rational], gcm: &Gcm) -> Weight {
        let n = gcm.rank();
        let mut out = self.clone();
        for (j, kj) in k.iter().enumerate() {
            if kj.is_zero() {
                continue;
            }
            for i in 0..n {
                out.coroot_values[i] += kj * int(gcm.entry(i, j));
            }
            for (slot, &node) in gcm.scaling_nodes().iter().enumerate() {
                if node == j {
                    out.scaling_values[slot] += kj;
                }
            }
        }
        out
    }

    pub fn add_root(&self, beta: &RootVector, gcm: &Gcm) -> Weight {
        self.add_root_rational(&beta.to_rational(), gcm)
    }

    pub fn sub_root(&self, beta: &RootVector, gcm: &Gcm) -> Weight {
        self.add_root(&-beta, gcm)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight::new(
            self.coroot_values.iter().zip(&other.coroot_values).map(|(a, b)| a + b).collect(),
            self.scaling_values.iter().zip(&other.scaling_values).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight::new(
            self.coroot_values.iter().zip(&other.coroot_values).map(|(a, b)| a - b).collect(),
            self.scaling_values.iter().zip(&other.scaling_values).map(|(a, b)| a - b).collect(),
        )
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coroot_values.iter().map(rational::format).collect();
        let s: Vec<String> = self.scaling_values.iter().map(rational::format).collect();
        if s.is_empty() {
            write!(f, "({})", c.join(", "))
        } else {
            write!(f, "({}; {})", c.join(", "), s.join(", "))
        }
    }
}

/// Finite, affine or indefinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockType {
    Finite,
    Affine,
    Indefinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmatrixType {
    pub tag: BlockType,
    /// Indecomposable blocks (sorted node lists) with their types.
    pub blocks: Vec<(Vec<usize>, BlockType)>,
}

impl SubmatrixType {
    pub fn is_finite_or_affine_sum(&self) -> bool {
        self.tag != BlockType::Indefinite
    }
}

/// A validated, symmetrizable generalized Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gcm {
    matrix: Vec<Vec<i64>>,
    symmetrizer: Vec<Rational>,
    /// `scale * D_i * A_ij`, integral and symmetric.
    scaled_form: Vec<Vec<i64>>,
    scale: i64,
    scaling_nodes: Vec<usize>,
    hash: String,
}

/// Validates `A` and computes its symmetrizer (smallest entry per
/// indecomposable block equal to 1).
pub fn validate_gcm(matrix: Vec<Vec<i64>>) -> Result<Gcm> {
    check_shape_and_signs(&matrix)?;
    let d = compute_symmetrizer(&matrix)?;
    Gcm::assemble(matrix, d)
}

fn check_shape_and_signs(a: &[Vec<i64>]) -> Result<()> {
    let n = a.len();
    if n == 0 {
        return Err(Error::NotGcm("empty matrix".into()));
    }
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotGcm(format!("row {i} has length {}, expected {n}", row.len())));
        }
        if row[i] != 2 {
            return Err(Error::NotGcm(format!("diagonal entry ({i},{i}) is {}, expected 2", row[i])));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if a[i][j] > 0 {
                return Err(Error::NotGcm(format!("off-diagonal entry ({i},{j}) is positive")));
            }
            if (a[i][j] == 0) != (a[j][i] == 0) {
                return Err(Error::NotGcm(format!("entries ({i},{j}) and ({j},{i}) differ in vanishing")));
            }
        }
    }
    Ok(())
}

fn components(a: &[Vec<i64>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in nodes {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in nodes {
                if a[i][j] != 0 && i != j && seen.insert(j) {
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort();
    out
}

fn compute_symmetrizer(a: &[Vec<i64>]) -> Result<Vec<Rational>> {
    let n = a.len();
    let all: Vec<usize> = (0..n).collect();
    let mut d: Vec<Option<Rational>> = vec![None; n];
    for comp in components(a, &all) {
        d[comp[0]] = Some(rational::one());
        let mut stack = vec![comp[0]];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().expect("assigned");
            for &j in &comp {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                // d_i A_ij = d_j A_ji
                let dj = &di * int(a[i][j]) / int(a[j][i]);
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                    Some(existing) if *existing != dj => return Err(Error::NotSymmetrizable),
                    Some(_) => {}
                }
            }
        }
        let min = comp.iter().map(|&i| d[i].clone().expect("assigned")).min().expect("nonempty");
        for &i in &comp {
            d[i] = Some(d[i].take().expect("assigned") / &min);
        }
    }
    Ok(d.into_iter().map(|x| x.expect("every node is in a component")).collect())
}

impl Gcm {
    /// Accepts a user-supplied symmetrizer after checking it.
    pub fn with_symmetrizer(matrix: Vec<Vec<i64>>, symmetrizer: Vec<Rational>) -> Result<Gcm> {
        check_shape_and_signs(&matrix)?;
        if symmetrizer.len() != matrix.len() {
            return Err(Error::DimensionMismatch {
                expected: matrix.len(),
                found: symmetrizer.len(),
            });
        }
        if symmetrizer.iter().any(|x| !x.is_positive()) {
            return Err(Error::NotSymmetrizable);
        }
        Gcm::assemble(matrix, symmetrizer)
    }

    fn assemble(matrix: Vec<Vec<i64>>, symmetrizer: Vec<Rational>) -> Result<Gcm> {
        let n = matrix.len();
        for i in 0..n {
            for j in 0..n {
                if &symmetrizer[i] * int(matrix[i][j]) != &symmetrizer[j] * int(matrix[j][i]) {
                    return Err(Error::NotSymmetrizable);
                }
            }
        }
        let scale = symmetrizer
            .iter()
            .fold(1i64, |l, d| l.lcm(&i64::try_from(d.denom().clone()).unwrap_or(1)));
        let scaled_form = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = &symmetrizer[i] * int(matrix[i][j]) * int(scale);
                        rational::to_i64(&v).expect("scaled form is integral")
                    })
                    .collect()
            })
            .collect();
        let scaling_nodes = choose_scaling_nodes(&matrix);
        let mut hasher = Sha256::new();
        hasher.update(format!("{matrix:?}|"));
        for d in &symmetrizer {
            hasher.update(rational::format(d));
            hasher.update(",");
        }
        let hash = hex::encode(hasher.finalize());
        Ok(Gcm {
            matrix,
            symmetrizer,
            scaled_form,
            scale,
            scaling_nodes,
            hash,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// Number of scaling elements, `n - rank(A)`.
    pub fn corank(&self) -> usize {
        self.scaling_nodes.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn symmetrizer(&self) -> &[Rational] {
        &self.symmetrizer
    }

    pub fn scaling_nodes(&self) -> &[usize] {
        &self.scaling_nodes
    }

    /// Stable content hash of the matrix and symmetrizer (hex SHA-256).
    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// `⟨β, α_i^∨⟩ = Σ_j β_j A_ij`.
    pub fn coroot_pairing(&self, beta: &RootVector, i: usize) -> i64 {
        beta.coeffs().iter().zip(&self.matrix[i]).map(|(b, a)| b * a).sum()
    }

    /// `scale * ⟨β, γ⟩`, an integer; see [`Gcm::form_scale`].
    pub fn scaled_root_pairing(&self, beta: &RootVector, gamma: &RootVector) -> i64 {
        let mut s = 0;
        for (i, &bi) in beta.coeffs().iter().enumerate() {
            if bi == 0 {
                continue;
            }
            for (j, &gj) in gamma.coeffs().iter().enumerate() {
                s += bi * gj * self.scaled_form[i][j];
            }
        }
        s
    }

    /// Denominator clearing factor used by [`Gcm::scaled_root_pairing`].
    pub fn form_scale(&self) -> i64 {
        self.scale
    }

    pub fn root_pairing(&self, beta: &RootVector, gamma: &RootVector) -> Rational {
        Rational::new(self.scaled_root_pairing(beta, gamma).into(), self.scale.into())
    }

    /// `⟨μ, β⟩ = Σ β_i D_i μ(α_i^∨)`.
    pub fn weight_root_pairing(&self, mu: &Weight, beta: &RootVector) -> Rational {
        beta.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(i, &b)| int(b) * &self.symmetrizer[i] * &mu.coroot_values[i])
            .sum()
    }

    /// The form on the full dual Cartan, via the identification `h ≅ h*`.
    pub fn weight_pairing(&self, lambda: &Weight, mu: &Weight) -> Result<Rational> {
        lambda.check_shape(self)?;
        mu.check_shape(self)?;
        let n = self.rank();
        let c = self.corank();
        // Unknowns: x_i (coefficients of α_i^∨) then y_k (coefficients of d_k).
        let mut rows = Vec::with_capacity(n + c);
        let mut rhs = Vec::with_capacity(n + c);
        for j in 0..n {
            let mut row = vec![rational::zero(); n + c];
            for (i, slot) in row.iter_mut().enumerate().take(n) {
                *slot = int(self.matrix[j][i]) / &self.symmetrizer[i];
            }
            for (k, &node) in self.scaling_nodes.iter().enumerate() {
                if node == j {
                    row[n + k] = rational::one() / &self.symmetrizer[j];
                }
            }
            rows.push(row);
            rhs.push(lambda.coroot_values[j].clone());
        }
        for (l, &node) in self.scaling_nodes.iter().enumerate() {
            let mut row = vec![rational::zero(); n + c];
            row[node] = rational::one() / &self.symmetrizer[node];
            rows.push(row);
            rhs.push(lambda.scaling_values[l].clone());
        }
        let sol = Matrix::from_rows(rows)
            .solve_unique(&rhs)
            .ok_or_else(|| Error::InternalInconsistency("invariant form is degenerate".into()))?;
        let mut total = rational::zero();
        for i in 0..n {
            total += &sol[i] * &mu.coroot_values[i];
        }
        for k in 0..c {
            total += &sol[n + k] * &mu.scaling_values[k];
        }
        Ok(total)
    }

    /// The weight `Σ β_j α_j`.
    pub fn root_as_weight(&self, beta: &RootVector) -> Weight {
        let zero = Weight::new(vec![rational::zero(); self.rank()], vec![rational::zero(); self.corank()]);
        zero.add_root(beta, self)
    }

    /// `s_i(β) = β - ⟨β, α_i^∨⟩ α_i`.
    pub fn reflect_root(&self, beta: &RootVector, i: usize) -> RootVector {
        let mut v = beta.coeffs().to_vec();
        v[i] -= self.coroot_pairing(beta, i);
        RootVector::new(v)
    }

    /// `s_i(ν) = ν - ν(α_i^∨) α_i`.
    pub fn reflect_weight(&self, nu: &Weight, i: usize) -> Weight {
        let mut k = vec![rational::zero(); self.rank()];
        k[i] = -nu.coroot_values[i].clone();
        nu.add_root_rational(&k, self)
    }

    /// `ρ`: 1 on every simple coroot, 0 on every scaling element.
    pub fn rho(&self) -> Weight {
        Weight::new(vec![rational::one(); self.rank()], vec![rational::zero(); self.corank()])
    }

    pub fn zero_weight(&self) -> Weight {
        Weight::new(vec![rational::zero(); self.rank()], vec![rational::zero(); self.corank()])
    }

    /// Solves `λ - μ = Σ k_i α_i`; `None` when the difference is not in the
    /// root lattice.
    pub fn root_difference(&self, lambda: &Weight, mu: &Weight) -> Result<Option<RootVector>> {
        lambda.check_shape(self)?;
        mu.check_shape(self)?;
        let diff = lambda.sub(mu);
        let n = self.rank();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            rows.push(self.matrix[i].iter().map(|&a| int(a)).collect());
            rhs.push(diff.coroot_values[i].clone());
        }
        for (l, &node) in self.scaling_nodes.iter().enumerate() {
            let mut row = vec![rational::zero(); n];
            row[node] = rational::one();
            rows.push(row);
            rhs.push(diff.scaling_values[l].clone());
        }
        Ok(Matrix::from_rows(rows)
            .solve_unique(&rhs)
            .and_then(|k| RootVector::from_rational(&k)))
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        w.check_shape(self)
    }

    pub fn check_root(&self, beta: &RootVector) -> Result<()> {
        if beta.rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: beta.rank(),
            });
        }
        Ok(())
    }

    /// Decomposes `A_Z` into indecomposable blocks and classifies each.
    pub fn classify(&self, nodes: &[usize]) -> SubmatrixType {
        assert!(!nodes.is_empty(), "classify needs a nonempty node set");
        let mut z: Vec<usize> = nodes.to_vec();
        z.sort_unstable();
        z.dedup();
        let blocks: Vec<(Vec<usize>, BlockType)> = components(&self.matrix, &z)
            .into_iter()
            .map(|b| {
                let t = self.classify_block(&b);
                (b, t)
            })
            .collect();
        let tag = blocks.iter().map(|(_, t)| *t).max().expect("nonempty");
        SubmatrixType { tag, blocks }
    }

    fn symmetrized_block(&self, block: &[usize]) -> Matrix {
        Matrix::from_rows(
            block
                .iter()
                .map(|&i| block.iter().map(|&j| &self.symmetrizer[i] * int(self.matrix[i][j])).collect())
                .collect(),
        )
    }

    fn classify_block(&self, block: &[usize]) -> BlockType {
        let s = self.symmetrized_block(block);
        if is_positive_definite(&s) {
            return BlockType::Finite;
        }
        if s.determinant().is_zero()
            && (0..block.len()).all(|drop| {
                let keep: Vec<usize> = (0..block.len()).filter(|&k| k != drop).collect();
                keep.is_empty() || is_positive_definite(&s.submatrix(&keep, &keep))
            })
        {
            return BlockType::Affine;
        }
        BlockType::Indefinite
    }

    /// For an affine block, the positive vector `c` with `A_Z^t c = 0`,
    /// scaled to coprime integers.
    pub fn affine_null_vector(&self, block: &[usize]) -> Option<Vec<i64>> {
        let at = Matrix::from_rows(
            block
                .iter()
                .map(|&j| block.iter().map(|&i| int(self.matrix[i][j])).collect())
                .collect(),
        );
        let ker = at.kernel();
        if ker.len() != 1 {
            return None;
        }
        let v = &ker[0];
        let lcm = v.iter().fold(num_bigint::BigInt::from(1), |l, x| l.lcm(x.denom()));
        let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::from(0), |g, x| g.gcd(x));
        let sign = if ints.iter().any(|x| x.is_negative()) { -1 } else { 1 };
        let out: Option<Vec<i64>> = ints.iter().map(|x| i64::try_from(x * sign / &g).ok()).collect();
        out.filter(|o| o.iter().all(|&x| x > 0))
    }

    /// `Σ a_i^∨ μ(α_i^∨)` for an indecomposable affine matrix.
    pub fn level(&self, mu: &Weight) -> Result<Rational> {
        mu.check_shape(self)?;
        let all: Vec<usize> = (0..self.rank()).collect();
        let t = self.classify(&all);
        if t.blocks.len() != 1 || t.tag != BlockType::Affine {
            return Err(Error::Unsupported("level is defined for indecomposable affine matrices".into()));
        }
        let a = self
            .affine_null_vector(&all)
            .ok_or_else(|| Error::InternalInconsistency("affine block without positive null vector".into()))?;
        Ok(a.iter().zip(&mu.coroot_values).map(|(&ai, v)| int(ai) * v).sum())
    }

    /// The untwisted affine matrix `A_{l}^{(1)}` with node 0 the affine node.
    pub fn affine_a(l: usize) -> Gcm {
        assert!(l >= 1);
        let n = l + 1;
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        if n == 2 {
            m[0][1] = -2;
            m[1][0] = -2;
        } else {
            for i in 0..n {
                let j = (i + 1) % n;
                m[i][j] = -1;
                m[j][i] = -1;
            }
        }
        validate_gcm(m).expect("affine A is a valid GCM")
    }

    /// The finite type `A_l` Cartan matrix.
    pub fn finite_a(l: usize) -> Gcm {
        let mut m = vec![vec![0i64; l]; l];
        for i in 0..l {
            m[i][i] = 2;
            if i + 1 < l {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        }
        validate_gcm(m).expect("finite A is a valid GCM")
    }
}

fn is_positive_definite(s: &Matrix) -> bool {
    (1..=s.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        s.submatrix(&idx, &idx).determinant().is_positive()
    })
}

/// Greedily picks nodes `J` so that the simple roots, viewed as functionals
/// on `span{α_i^∨} ⊕ span{d_k}`, are linearly independent.
fn choose_scaling_nodes(a: &[Vec<i64>]) -> Vec<usize> {
    let n = a.len();
    let base = Matrix::from_i64_rows(a);
    let target = n;
    let mut rank = base.rank();
    let mut chosen = Vec::new();
    for j in 0..n {
        if rank == target {
            break;
        }
        let mut rows: Vec<Vec<i64>> = a.to_vec();
        for &k in chosen.iter().chain(std::iter::once(&j)) {
            let mut r = vec![0; n];
            r[k] = 1;
            rows.push(r);
        }
        let r = Matrix::from_i64_rows(&rows).rank();
        if r > rank {
            chosen.push(j);
            rank = r;
        }
    }
    chosen
}

/// An argument of the invariant form.
#[derive(Clone, Copy, Debug)]
pub enum FormArg<'a> {
    Weight(&'a Weight),
    Root(&'a RootVector),
}

/// The invariant symmetric form `⟨x, y⟩`.
pub fn bilinear(x: FormArg<'_>, y: FormArg<'_>, gcm: &Gcm) -> Result<Rational> {
    match (x, y) {
        (FormArg::Root(a), FormArg::Root(b)) => {
            gcm.check_root(a)?;
            gcm.check_root(b)?;
            Ok(gcm.root_pairing(a, b))
        }
        (FormArg::Weight(w), FormArg::Root(b)) | (FormArg::Root(b), FormArg::Weight(w)) => {
            gcm.check_root(b)?;
            gcm.check_weight(w)?;
            Ok(gcm.weight_root_pairing(w, b))
        }
        (FormArg::Weight(a), FormArg::Weight(b)) => gcm.weight_pairing(a, b),
    }
}

/// Applies the word `w = s_{i_1} ⋯ s_{i_k}` (rightmost letter first) to
/// `λ + ρ` and returns `λ + ρ - w(λ + ρ)` in simple-root coordinates.
pub fn shifted_deficit(word: &[usize], lambda: &Weight, gcm: &Gcm) -> Result<Vec<Rational>> {
    gcm.check_weight(lambda)?;
    let mut nu = lambda.add(&gcm.rho());
    let mut deficit = vec![rational::zero(); gcm.rank()];
    for &i in word.iter().rev() {
        if i >= gcm.rank() {
            return Err(Error::DimensionMismatch {
                expected: gcm.rank(),
                found: i + 1,
            });
        }
        deficit[i] += &nu.coroot_values[i];
        nu = gcm.reflect_weight(&nu, i);
    }
    Ok(deficit)
}

/// `w * λ = w(λ + ρ) - ρ`.
pub fn shifted_action(word: &[usize], lambda: &Weight, gcm: &Gcm) -> Result<Weight> {
    let deficit = shifted_deficit(word, lambda, gcm)?;
    let neg: Vec<Rational> = deficit.iter().map(|x| -x).collect();
    Ok(lambda.add_root_rational(&neg, gcm))
}

/// `w * λ - μ` as an integer root vector, when it is one.
pub fn shifted_offset(word: &[usize], lambda: &Weight, mu: &Weight, gcm: &Gcm) -> Result<Option<RootVector>> {
    let Some(base) = gcm.root_difference(lambda, mu)? else {
        return Ok(None);
    };
    let deficit = shifted_deficit(word, lambda, gcm)?;
    let v: Vec<Rational> = base.to_rational().iter().zip(&deficit).map(|(a, b)| a - b).collect();
    Ok(RootVector::from_rational(&v))
}
