//! Super vector bundles: the canonical bundle over the ν-grassmannian,
//! user-described finite-type bundles, and pullbacks along chart maps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atlas::{
    composite_failure, overlap_inverse, sampling_outcome, with_thread_cap, Atlas, AtlasError, Chart, ChartTransition,
    CheckKind, CheckRecord, GrassShape, Method, MultiIndex, Outcome, Report,
};
use crate::superalgebra::{
    AlgebraContext, AlgebraError, EvalFailure, EvalTarget, Evaluator, GrassmannElement, ModAlgebra, ModElement,
    OddMonomial, Parity, PointSampler, Poly, Substitution, MAX_ODD,
};
use crate::supermatrix::{Entry, MatrixError, SuperMatrix, SuperShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("scalar {0} is not homogeneous")]
    NotHomogeneous(String),
    #[error("section of rank {0}|{1} does not match rank {2}|{3}")]
    Rank(usize, usize, usize, usize),
    #[error("no chart map supplied for {0}")]
    MissingChart(MultiIndex),
    #[error("pulled-back transition {0} -> {1} is not invertible over the target algebra")]
    NotInvertible(MultiIndex, MultiIndex),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `e_i` (even) or `f_j` (odd, the π-copy), one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasisVector {
    E(usize),
    F(usize),
}

impl BasisVector {
    pub fn parity(&self) -> Parity {
        match self {
            BasisVector::E(_) => Parity::Even,
            BasisVector::F(_) => Parity::Odd,
        }
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisVector::E(i) => write!(f, "e{i}"),
            BasisVector::F(j) => write!(f, "f{j}"),
        }
    }
}

/// A local section `Σ a_i ⊗ e_i + Σ b_j ⊗ f_j` of a trivial bundle of rank `k|l`.
#[derive(Clone, Debug)]
pub struct Section {
    k: usize,
    l: usize,
    coeffs: Vec<GrassmannElement>,
}

impl Section {
    pub fn zero(k: usize, l: usize, ctx: &Arc<AlgebraContext>) -> Self {
        Section {
            k,
            l,
            coeffs: vec![GrassmannElement::zero(ctx); k + l],
        }
    }

    /// `1 ⊗ b`.
    pub fn basis(k: usize, l: usize, ctx: &Arc<AlgebraContext>, b: BasisVector) -> Self {
        let mut s = Self::zero(k, l, ctx);
        let slot = s.slot(b);
        s.coeffs[slot] = GrassmannElement::one(ctx);
        s
    }

    pub fn from_coefficients(k: usize, l: usize, coeffs: Vec<GrassmannElement>) -> Result<Self, BundleError> {
        if coeffs.len() != k + l {
            return Err(BundleError::Rank(coeffs.len(), 0, k, l));
        }
        Ok(Section { k, l, coeffs })
    }

    pub fn rank(&self) -> (usize, usize) {
        (self.k, self.l)
    }

    fn slot(&self, b: BasisVector) -> usize {
        match b {
            BasisVector::E(i) => i - 1,
            BasisVector::F(j) => self.k + j - 1,
        }
    }

    pub fn basis_vector(&self, slot: usize) -> BasisVector {
        if slot < self.k {
            BasisVector::E(slot + 1)
        } else {
            BasisVector::F(slot - self.k + 1)
        }
    }

    pub fn coefficient(&self, b: BasisVector) -> &GrassmannElement {
        &self.coeffs[self.slot(b)]
    }

    pub fn coefficients(&self) -> &[GrassmannElement] {
        &self.coeffs
    }

    /// Parity of a homogeneous section; `f`-coefficients count with flipped parity.
    pub fn parity(&self) -> Parity {
        let mut found = Parity::Zero;
        for (slot, c) in self.coeffs.iter().enumerate() {
            let p = match (c.parity(), self.basis_vector(slot)) {
                (p, BasisVector::F(_)) => p.flip(),
                (p, _) => p,
            };
            found = match (found, p) {
                (f, Parity::Zero) => f,
                (Parity::Zero, p) => p,
                (f, p) if f == p => f,
                _ => Parity::Mixed,
            };
        }
        found
    }

    pub fn try_add(&self, other: &Section) -> Result<Section, BundleError> {
        if self.rank() != other.rank() {
            return Err(BundleError::Rank(other.k, other.l, self.k, self.l));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_, _>>()?;
        Ok(Section {
            k: self.k,
            l: self.l,
            coeffs,
        })
    }

    pub fn equals_exact(&self, other: &Section) -> bool {
        self.rank() == other.rank() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.equals_exact(b))
    }
}

/// Left action of a homogeneous scalar: `z(a ⊗ e) = za ⊗ e` and
/// `z(b ⊗ f) = (−1)^{p(z)} zb ⊗ f`.
pub fn scalar_action(z: &GrassmannElement, s: &Section) -> Result<Section, BundleError> {
    let sign = match z.parity() {
        Parity::Zero => return Ok(Section::zero(s.k, s.l, z.context())),
        Parity::Even => 1,
        Parity::Odd => -1,
        Parity::Mixed => return Err(BundleError::NotHomogeneous(z.display())),
    };
    let mut coeffs = Vec::with_capacity(s.coeffs.len());
    for (slot, c) in s.coeffs.iter().enumerate() {
        let prod = z.try_mul(c)?;
        coeffs.push(if slot >= s.k && sign < 0 { -prod } else { prod });
    }
    Ok(Section { k: s.k, l: s.l, coeffs })
}

/// Action of a possibly inhomogeneous scalar, split into its parity parts.
fn scalar_action_split(z: &GrassmannElement, s: &Section) -> Result<Section, BundleError> {
    let (even, odd) = z.split_parity();
    scalar_action(&even, s)?.try_add(&scalar_action(&odd, s)?)
}

/// The gluing morphism `ψ*_IJ` of the canonical bundle: `m = (M_J(A^I)·id_J)⁻¹`
/// together with the base transition `φ*_IJ`.
#[derive(Clone, Debug)]
pub struct GammaTransition {
    pub source: MultiIndex,
    pub target: MultiIndex,
    pub m: SuperMatrix,
    pub base: ChartTransition,
}

impl GammaTransition {
    /// Image of `1 ⊗ b` for a basis vector of chart `target`: column `b` of `m`.
    pub fn basis_image(&self, b: BasisVector) -> Section {
        let (k, l) = (self.m.shape().row_even, self.m.shape().row_odd);
        let col = match b {
            BasisVector::E(i) => i - 1,
            BasisVector::F(j) => k + j - 1,
        };
        let coeffs = (0..k + l)
            .map(|r| self.m.element(r, col).expect("m carries no 1ν"))
            .collect();
        Section { k, l, coeffs }
    }

    /// `a ⊗ b ↦ (−1)^{p(a)p(b)} φ*_IJ(a)·ψ(1 ⊗ b)` summed over the slots of a
    /// section over chart `target`; the sign undoes `a·(1 ⊗ b) = ±a ⊗ b`.
    pub fn apply(&self, s: &Section) -> Result<Section, BundleError> {
        let ctx = self.m.context();
        let (k, l) = (self.m.shape().row_even, self.m.shape().row_odd);
        if s.rank() != (k, l) {
            return Err(BundleError::Rank(s.k, s.l, k, l));
        }
        let mut out = Section::zero(k, l, ctx);
        for (slot, a) in s.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let b = s.basis_vector(slot);
            let (even, odd) = self.base.map.apply(a)?.split_parity();
            let odd = if b.parity() == Parity::Odd { -odd } else { odd };
            let column = self.basis_image(b);
            out = out.try_add(&scalar_action_split(&(&even + &odd), &column)?)?;
        }
        Ok(out)
    }
}

pub fn gamma_transition(source: &Chart, target: &Chart) -> Result<GammaTransition, BundleError> {
    let base = crate::atlas::transition(source, target)?;
    let m = if source.index == target.index {
        SuperMatrix::identity(source.shape.k, source.shape.l, source.context())
    } else {
        overlap_inverse(source, &target.index)?.0
    };
    Ok(GammaTransition {
        source: source.index.clone(),
        target: target.index.clone(),
        m,
        base,
    })
}

/// The canonical bundle over a whole atlas.
pub struct GammaAtlas {
    pub atlas: Atlas,
    /// `m[i][j]` is `(M_J(A^I)·id_J)⁻¹` for `I = charts[i]`, `J = charts[j]`.
    pub m: Vec<Vec<Result<SuperMatrix, AtlasError>>>,
}

impl GammaAtlas {
    pub fn build(shape: &GrassShape) -> Result<GammaAtlas, AtlasError> {
        let atlas = Atlas::build(shape)?;
        let m = with_thread_cap(|| {
            atlas
                .charts
                .par_iter()
                .map(|a| {
                    atlas
                        .charts
                        .iter()
                        .map(|b| {
                            if a.index == b.index {
                                Ok(SuperMatrix::identity(shape.k, shape.l, a.context()))
                            } else {
                                overlap_inverse(a, &b.index).map(|(m, _)| m)
                            }
                        })
                        .collect()
                })
                .collect()
        });
        Ok(GammaAtlas { atlas, m })
    }

    pub fn transition(&self, i: usize, j: usize) -> Result<GammaTransition, AtlasError> {
        let m = self.m[i][j].clone()?;
        let base = self.atlas.transitions[i][j].clone()?;
        Ok(GammaTransition {
            source: self.atlas.charts[i].index.clone(),
            target: self.atlas.charts[j].index.clone(),
            m,
            base,
        })
    }
}

/// Checks `m_IJ·φ*_IJ(m_JK) = m_IK` on every ordered triple.
pub fn verify_gamma_cocycle(shape: &GrassShape, method: Method) -> Result<Report, AtlasError> {
    let gamma = GammaAtlas::build(shape)?;
    Ok(verify_gamma_atlas(&gamma, method))
}

pub fn verify_gamma_atlas(gamma: &GammaAtlas, method: Method) -> Report {
    let n = gamma.atlas.charts.len();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .collect();
    let records = with_thread_cap(|| {
        triples
            .par_iter()
            .enumerate()
            .map(|(stream, &(i, j, k))| {
                let start = Instant::now();
                let outcome = gamma_outcome(gamma, i, j, k, method, stream as u64);
                CheckRecord {
                    kind: CheckKind::Gamma,
                    charts: [i, j, k].iter().map(|&x| gamma.atlas.charts[x].index.clone()).collect(),
                    outcome,
                    micros: start.elapsed().as_micros() as u64,
                }
            })
            .collect()
    });
    Report::new(
        format!("{} canonical bundle cocycle", gamma.atlas.shape),
        method,
        records,
    )
}

fn gamma_outcome(gamma: &GammaAtlas, i: usize, j: usize, k: usize, method: Method, stream: u64) -> Outcome {
    let fetch = |a: usize, b: usize| -> Result<(&SuperMatrix, &ChartTransition), Outcome> {
        let vacuous = |e: &AtlasError| match e {
            AtlasError::EmptyOverlap { .. } => Outcome::Vacuous(e.to_string()),
            other => Outcome::Fail(other.to_string()),
        };
        let m = gamma.m[a][b].as_ref().map_err(vacuous)?;
        let t = gamma.atlas.transitions[a][b].as_ref().map_err(vacuous)?;
        Ok((m, t))
    };
    let result = (|| {
        let (m_ij, phi_ij) = fetch(i, j)?;
        let (m_jk, _) = fetch(j, k)?;
        let (m_ik, _) = fetch(i, k)?;
        Ok(match method {
            Method::Exact => {
                let lhs = m_jk
                    .substitute(&phi_ij.map)
                    .and_then(|pulled| m_ij.matmul(&pulled))
                    .map_err(|e| composite_failure(e.into()))?;
                match lhs.first_difference(m_ik) {
                    None => Outcome::Pass,
                    Some((r, c)) => {
                        let diff = match (lhs.element(r, c), m_ik.element(r, c)) {
                            (Some(a), Some(b)) => a.try_sub(&b).map(|d| d.display()).unwrap_or_default(),
                            _ => "1ν".into(),
                        };
                        Outcome::Fail(format!("entry ({}, {}) is off by {diff}", r + 1, c + 1))
                    }
                }
            }
            Method::Modular { seed, trials } => {
                modular_gamma(gamma.atlas.shape.q(), m_ij, phi_ij, m_jk, m_ik, seed, stream, trials)
            }
        })
    })();
    result.unwrap_or_else(|o| o)
}

fn mod_matmul(alg: &ModAlgebra, a: &[ModElement], b: &[ModElement], n: usize) -> Vec<ModElement> {
    let mut out = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = alg.zero();
            for t in 0..n {
                acc = alg.add(&acc, &alg.mul(&a[r * n + t], &b[t * n + c]));
            }
            out.push(acc);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn modular_gamma(
    q: usize,
    m_ij: &SuperMatrix,
    phi_ij: &ChartTransition,
    m_jk: &SuperMatrix,
    m_ik: &SuperMatrix,
    seed: u64,
    stream: u64,
    trials: usize,
) -> Outcome {
    if q > MAX_ODD {
        return Outcome::Fail(format!("modular evaluation supports at most {MAX_ODD} odd coordinates"));
    }
    let alg = ModAlgebra::new(q);
    let ctx = m_ij.context();
    let n = m_ij.rows();
    let mut sampler = PointSampler::split(seed, stream);
    let mut usable = 0;
    for _ in 0..32 * trials.max(1) + 64 {
        if usable == trials {
            break;
        }
        let Some(point) = sampler.point(ctx) else {
            continue;
        };
        let even: Vec<Option<ModElement>> = point.iter().map(|&x| Some(alg.scalar(x))).collect();
        let odd: Vec<Option<ModElement>> = (1..=q).map(|j| Some(alg.generator(j))).collect();
        let attempt = (|| -> Result<bool, EvalFailure> {
            let mut ev = Evaluator::new(&alg, &even, &odd);
            let a = m_ij.evaluate(&mut ev)?;
            let c = m_ik.evaluate(&mut ev)?;
            let src = phi_ij.map.source();
            let j_even = (0..src.even_count())
                .map(|v| ev.element(phi_ij.map.even_image(v).unwrap()).map(Some))
                .collect::<Result<Vec<_>, _>>()?;
            let j_odd = (1..=src.odd_count())
                .map(|v| ev.element(phi_ij.map.odd_image(v).unwrap()).map(Some))
                .collect::<Result<Vec<_>, _>>()?;
            let mut ev_j = Evaluator::new(&alg, &j_even, &j_odd);
            let b = m_jk.evaluate(&mut ev_j)?;
            Ok(mod_matmul(&alg, &a, &b, n) == c)
        })();
        match attempt {
            Ok(true) => usable += 1,
            Ok(false) => return Outcome::Fail("differs at a random point".into()),
            Err(_) => continue,
        }
    }
    sampling_outcome(usable, trials)
}

/// Transition data `a^{αβ}` of a bundle of rank `k|l` trivialised over a
/// cover of size `cover`, all over one test algebra. Indices are one-based.
#[derive(Clone, Debug)]
pub struct BundleDescription {
    pub cover: usize,
    pub k: usize,
    pub l: usize,
    ctx: Arc<AlgebraContext>,
    transitions: BTreeMap<(usize, usize), SuperMatrix>,
}

impl BundleDescription {
    pub fn new(cover: usize, k: usize, l: usize, ctx: &Arc<AlgebraContext>) -> Self {
        BundleDescription {
            cover,
            k,
            l,
            ctx: ctx.clone(),
            transitions: BTreeMap::new(),
        }
    }

    /// The trivial bundle: every transition is the identity.
    pub fn trivial(cover: usize, k: usize, l: usize, ctx: &Arc<AlgebraContext>) -> Self {
        let mut d = Self::new(cover, k, l, ctx);
        for a in 1..=cover {
            for b in 1..=cover {
                d.insert(a, b, SuperMatrix::identity(k, l, ctx));
            }
        }
        d
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn insert(&mut self, alpha: usize, beta: usize, m: SuperMatrix) {
        self.transitions.insert((alpha, beta), m);
    }

    pub fn get(&self, alpha: usize, beta: usize) -> Option<&SuperMatrix> {
        self.transitions.get(&(alpha, beta))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&(usize, usize), &SuperMatrix)> {
        self.transitions.iter()
    }

    /// Fills missing diagonal entries with the identity and missing
    /// `a^{βα}` with the inverse of `a^{αβ}`.
    pub fn complete(&mut self) -> Result<(), MatrixError> {
        for a in 1..=self.cover {
            self.transitions
                .entry((a, a))
                .or_insert_with(|| SuperMatrix::identity(self.k, self.l, &self.ctx));
        }
        let present: Vec<(usize, usize)> = self.transitions.keys().copied().collect();
        for (a, b) in present {
            if !self.transitions.contains_key(&(b, a)) {
                let inv = self.transitions[&(a, b)].invert_even()?;
                self.transitions.insert((b, a), inv);
            }
        }
        Ok(())
    }

    /// A seeded bundle satisfying the cocycle condition: random `a^{1β}`
    /// with unipotent body, and `a^{αβ} = (a^{1α})⁻¹·a^{1β}`.
    pub fn random(seed: u64, cover: usize, k: usize, l: usize, ctx: &Arc<AlgebraContext>) -> Result<Self, MatrixError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut from_first = vec![SuperMatrix::identity(k, l, ctx)];
        for _ in 1..cover {
            from_first.push(random_unipotent(&mut rng, k, l, ctx)?);
        }
        let mut d = Self::new(cover, k, l, ctx);
        for a in 1..=cover {
            let inv = from_first[a - 1].invert_even()?;
            for b in 1..=cover {
                let m = if a == b {
                    SuperMatrix::identity(k, l, ctx)
                } else {
                    inv.matmul(&from_first[b - 1])?
                };
                d.insert(a, b, m);
            }
        }
        Ok(d)
    }
}

/// A random element of the requested parity: small integer polynomial
/// coefficients on a few odd monomials.
pub fn random_element(rng: &mut impl Rng, ctx: &Arc<AlgebraContext>, parity: Parity) -> GrassmannElement {
    let q = ctx.odd_count();
    let mut z = GrassmannElement::zero(ctx);
    for _ in 0..rng.gen_range(1..=3) {
        let mask: u64 = if q == 0 { 0 } else { rng.gen_range(0..(1u64 << q)) };
        let mono = OddMonomial(mask);
        let wanted = parity.bit().unwrap_or(0);
        if mono.degree() % 2 != wanted {
            continue;
        }
        let mut poly = Poly::from_int(rng.gen_range(-3..=3));
        for v in 0..ctx.even_count() {
            if ctx.is_constrained(v) {
                continue;
            }
            if rng.gen_bool(0.4) {
                let c = rng.gen_range(-2..=2);
                poly = poly.add(&Poly::var(v).scale(&crate::superalgebra::rational(c)));
            }
        }
        let term = GrassmannElement::from_terms(
            ctx,
            vec![(mono, crate::superalgebra::RationalCoefficient::from_poly(poly))],
        );
        z = &z + &term;
    }
    z
}

fn random_unipotent(
    rng: &mut impl Rng,
    k: usize,
    l: usize,
    ctx: &Arc<AlgebraContext>,
) -> Result<SuperMatrix, MatrixError> {
    let shape = SuperShape::square(k, l);
    let mut m = SuperMatrix::zeros(shape, ctx);
    for r in 0..k + l {
        for c in 0..k + l {
            let parity = shape.block_parity(r, c);
            let mut z = if parity == Parity::Even && r < c && (r < k) == (c < k) {
                random_element(rng, ctx, Parity::Even)
            } else if parity == Parity::Even {
                // nilpotent part only, keeping the body unipotent
                let z = random_element(rng, ctx, Parity::Even);
                z.soul()
            } else {
                random_element(rng, ctx, Parity::Odd)
            };
            if r == c {
                z = &z + &GrassmannElement::one(ctx);
            }
            m.set(r, c, Entry::Value(z));
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "issue", rename_all = "camelCase")]
pub enum BundleIssue {
    Missing {
        alpha: usize,
        beta: usize,
    },
    Shape {
        alpha: usize,
        beta: usize,
        found: String,
    },
    NotStandard {
        alpha: usize,
        beta: usize,
        row: usize,
        col: usize,
    },
    NotInvertible {
        alpha: usize,
        beta: usize,
    },
    DiagonalNotIdentity {
        alpha: usize,
        row: usize,
        col: usize,
    },
    Cocycle {
        alpha: usize,
        beta: usize,
        gamma: usize,
        row: usize,
        col: usize,
    },
    Unevaluable {
        alpha: usize,
        beta: usize,
        gamma: usize,
        reason: String,
    },
}

impl fmt::Display for BundleIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleIssue::Missing { alpha, beta } => write!(f, "a{alpha}{beta} is missing"),
            BundleIssue::Shape { alpha, beta, found } => write!(f, "a{alpha}{beta} has shape {found}"),
            BundleIssue::NotStandard { alpha, beta, row, col } => {
                write!(f, "a{alpha}{beta} entry ({row}, {col}) has the wrong parity")
            }
            BundleIssue::NotInvertible { alpha, beta } => write!(f, "a{alpha}{beta} is not invertible"),
            BundleIssue::DiagonalNotIdentity { alpha, row, col } => {
                write!(f, "a{alpha}{alpha} differs from the identity at ({row}, {col})")
            }
            BundleIssue::Cocycle {
                alpha,
                beta,
                gamma,
                row,
                col,
            } => write!(
                f,
                "a{alpha}{beta}·a{beta}{gamma} differs from a{alpha}{gamma} at ({row}, {col})"
            ),
            BundleIssue::Unevaluable {
                alpha,
                beta,
                gamma,
                reason,
            } => {
                write!(f, "triple ({alpha}, {beta}, {gamma}) could not be checked: {reason}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BundleReport {
    pub issues: Vec<BundleIssue>,
}

impl BundleReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks presence, shape, standardness and invertibility of every
/// `a^{αβ}`, `a^{αα} = 1`, and `a^{αβ}·a^{βγ} = a^{αγ}` on all triples.
pub fn validate_bundle(desc: &BundleDescription) -> BundleReport {
    let mut issues = Vec::new();
    let t = desc.cover;
    let want = SuperShape::square(desc.k, desc.l);
    let mut usable = BTreeMap::new();
    for a in 1..=t {
        for b in 1..=t {
            let Some(m) = desc.get(a, b) else {
                issues.push(BundleIssue::Missing { alpha: a, beta: b });
                continue;
            };
            if m.shape() != want {
                issues.push(BundleIssue::Shape {
                    alpha: a,
                    beta: b,
                    found: m.shape().to_string(),
                });
                continue;
            }
            if let Some(v) = m.validate_standard().first() {
                issues.push(BundleIssue::NotStandard {
                    alpha: a,
                    beta: b,
                    row: v.row,
                    col: v.col,
                });
                continue;
            }
            match m.block_body_determinants() {
                Ok((de, dodd)) if !de.is_zero() && !dodd.is_zero() => {}
                _ => {
                    issues.push(BundleIssue::NotInvertible { alpha: a, beta: b });
                    continue;
                }
            }
            if a == b {
                let id = SuperMatrix::identity(desc.k, desc.l, &desc.ctx);
                if let Some((r, c)) = m.first_difference(&id) {
                    issues.push(BundleIssue::DiagonalNotIdentity {
                        alpha: a,
                        row: r + 1,
                        col: c + 1,
                    });
                }
            }
            usable.insert((a, b), m);
        }
    }
    for a in 1..=t {
        for b in 1..=t {
            for g in 1..=t {
                let (Some(ab), Some(bg), Some(ag)) = (usable.get(&(a, b)), usable.get(&(b, g)), usable.get(&(a, g)))
                else {
                    continue;
                };
                match ab.matmul(bg) {
                    Ok(p) => {
                        if let Some((r, c)) = p.first_difference(ag) {
                            issues.push(BundleIssue::Cocycle {
                                alpha: a,
                                beta: b,
                                gamma: g,
                                row: r + 1,
                                col: c + 1,
                            });
                        }
                    }
                    Err(e) => issues.push(BundleIssue::Unevaluable {
                        alpha: a,
                        beta: b,
                        gamma: g,
                        reason: e.to_string(),
                    }),
                }
            }
        }
    }
    BundleReport { issues }
}

/// Transitions of the canonical bundle pushed through chart maps
/// `σ_I` (chart-`I` coordinates to expressions over a common target algebra).
#[derive(Clone, Debug)]
pub struct PulledBack {
    pub target: Arc<AlgebraContext>,
    /// `(I, J) ↦ σ_I(m_IJ)` for every pair with a nonempty overlap.
    pub transitions: BTreeMap<(MultiIndex, MultiIndex), SuperMatrix>,
}

impl PulledBack {
    pub fn get(&self, i: &MultiIndex, j: &MultiIndex) -> Option<&SuperMatrix> {
        self.transitions.get(&(i.clone(), j.clone()))
    }
}

pub fn pullback_transitions(
    gamma: &GammaAtlas,
    sigma: &BTreeMap<MultiIndex, Substitution>,
) -> Result<PulledBack, BundleError> {
    let charts = &gamma.atlas.charts;
    let target = match sigma.values().next() {
        Some(s) => s.target().clone(),
        None => return Err(BundleError::MissingChart(charts[0].index.clone())),
    };
    let mut transitions = BTreeMap::new();
    for (i, a) in charts.iter().enumerate() {
        let s = sigma
            .get(&a.index)
            .ok_or_else(|| BundleError::MissingChart(a.index.clone()))?;
        for (j, b) in charts.iter().enumerate() {
            let Ok(m) = &gamma.m[i][j] else {
                continue;
            };
            let pulled = m.substitute(s).map_err(|e| match e {
                MatrixError::Algebra(AlgebraError::NotInvertible) => {
                    BundleError::NotInvertible(a.index.clone(), b.index.clone())
                }
                other => other.into(),
            })?;
            match pulled.block_body_determinants() {
                Ok((de, dodd)) if !de.is_zero() && !dodd.is_zero() => {}
                _ => return Err(BundleError::NotInvertible(a.index.clone(), b.index.clone())),
            }
            transitions.insert((a.index.clone(), b.index.clone()), pulled);
        }
    }
    Ok(PulledBack { target, transitions })
}
