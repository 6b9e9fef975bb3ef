//! Charts and gluing maps of `νGr_{k|l}(m|n)`.
//!
//! A chart is a `k+l`-element multi-index `I`. Its matrix `A^I` carries the
//! pseudo-unit `id_I` in the columns of `I` and the chart coordinates
//! `x1..xp`, `e1..eq` elsewhere. The transition `φ*_IJ` expresses the
//! coordinates of chart `J` through those of chart `I` by reading the
//! entries of `(M_J(A^I)·id_J)⁻¹·A^I`.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::superalgebra::{
    AlgebraContext, AlgebraError, EvalFailure, Evaluator, GrassmannElement, ModAlgebra, ModElement, Parity,
    PointSampler, Substitution, MAX_ODD,
};
use crate::supermatrix::{pseudo_unit, Entry, MatrixError, SuperMatrix, SuperShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid multi-index {index:?}: {reason}")]
    InvalidIndex { index: Vec<usize>, reason: String },
    #[error("charts {from} and {to} do not overlap: {reason}")]
    EmptyOverlap {
        from: MultiIndex,
        to: MultiIndex,
        reason: String,
    },
    #[error("image of {symbol} read at slot ({row}, {col}) is {found}, expected {expected}")]
    Parity {
        symbol: String,
        row: usize,
        col: usize,
        expected: Parity,
        found: Parity,
    },
    #[error("transitions {0} and {1} cannot be chained")]
    NotChainable(String, String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The type `(k|l)` in `(m|n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrassShape {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub n: usize,
}

impl GrassShape {
    pub fn new(k: usize, l: usize, m: usize, n: usize) -> Result<Self, AtlasError> {
        if k >= m || l >= n {
            return Err(AtlasError::InvalidShape(format!(
                "require k < m and l < n, got {k}|{l} in {m}|{n}"
            )));
        }
        if k + l == 0 {
            return Err(AtlasError::InvalidShape("k + l must be positive".into()));
        }
        let shape = GrassShape { k, l, m, n };
        if shape.q() > 63 {
            return Err(AtlasError::InvalidShape(format!(
                "{} odd coordinates exceed the supported 63",
                shape.q()
            )));
        }
        Ok(shape)
    }

    /// Number of even coordinates, `k(m−k)+l(n−l)`.
    pub fn p(&self) -> usize {
        self.k * (self.m - self.k) + self.l * (self.n - self.l)
    }

    /// Number of odd coordinates, `k(n−l)+l(m−k)`.
    pub fn q(&self) -> usize {
        self.k * (self.n - self.l) + self.l * (self.m - self.k)
    }

    /// The `(k|l)×(m|n)` shape of a chart matrix.
    pub fn ambient(&self) -> SuperShape {
        SuperShape::new(self.k, self.l, self.m, self.n)
    }

    /// The algebra of chart coordinates `x1..xp`, `e1..eq`.
    pub fn coordinate_context(&self) -> Arc<AlgebraContext> {
        let names: Vec<String> = (1..=self.p()).map(|i| format!("x{i}")).collect();
        AlgebraContext::with_symbols(&names, self.q()).expect("coordinate names are distinct")
    }
}

impl fmt::Display for GrassShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "νGr_{{{}|{}}}({}|{})", self.k, self.l, self.m, self.n)
    }
}

/// A strictly increasing sequence of `k+l` one-based column indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(shape: &GrassShape, indices: Vec<usize>) -> Result<Self, AtlasError> {
        let bad = |reason: &str| AtlasError::InvalidIndex {
            index: indices.clone(),
            reason: reason.into(),
        };
        if indices.len() != shape.k + shape.l {
            return Err(bad(&format!("expected {} entries", shape.k + shape.l)));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("not strictly increasing"));
        }
        if indices.iter().any(|&i| i == 0 || i > shape.m + shape.n) {
            return Err(bad(&format!("entries must lie in 1..={}", shape.m + shape.n)));
        }
        Ok(MultiIndex(indices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All multi-indices of the shape in lexicographic order.
pub fn enumerate_charts(shape: &GrassShape) -> Vec<MultiIndex> {
    let size = shape.k + shape.l;
    let total = shape.m + shape.n;
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=size).collect();
    loop {
        out.push(MultiIndex(current.clone()));
        let Some(pos) = (0..size).rev().find(|&p| current[p] < total - (size - 1 - p)) else {
            break;
        };
        current[pos] += 1;
        for p in pos + 1..size {
            current[p] = current[p - 1] + 1;
        }
    }
    out
}

/// A chart coordinate: `x_i` (even) or `e_j` (odd), one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Coordinate {
    Even(usize),
    Odd(usize),
}

impl Coordinate {
    pub fn parity(&self) -> Parity {
        match self {
            Coordinate::Even(_) => Parity::Even,
            Coordinate::Odd(_) => Parity::Odd,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Coordinate::Even(i) => format!("x{i}"),
            Coordinate::Odd(j) => format!("e{j}"),
        }
    }

    pub fn element(&self, ctx: &Arc<AlgebraContext>) -> GrassmannElement {
        match *self {
            Coordinate::Even(i) => GrassmannElement::even_symbol(ctx, i - 1),
            Coordinate::Odd(j) => GrassmannElement::odd_generator(ctx, j),
        }
    }
}

/// Position of a coordinate in a chart matrix (one-based) and whether it
/// is stored as `ν(coordinate)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub row: usize,
    pub col: usize,
    pub coordinate: Coordinate,
    pub wrapped: bool,
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub shape: GrassShape,
    pub index: MultiIndex,
    pub matrix: SuperMatrix,
    pub slots: Vec<Slot>,
}

impl Chart {
    pub fn context(&self) -> &Arc<AlgebraContext> {
        self.matrix.context()
    }

    pub fn slot_of(&self, c: Coordinate) -> Option<&Slot> {
        self.slots.iter().find(|s| s.coordinate == c)
    }
}

/// Builds `A^I`: the pseudo-unit in the columns of `I`; the remaining
/// columns, left to right, are even-type for the first `m−k` (top rows take
/// even coordinates, bottom rows odd ones) and odd-type after that (top rows
/// odd, bottom rows even). A coordinate whose parity disagrees with its block
/// is stored as its ν-image.
pub fn build_chart(shape: &GrassShape, index: &MultiIndex) -> Result<Chart, AtlasError> {
    MultiIndex::new(shape, index.0.clone())?;
    let ambient = shape.ambient();
    let ctx = shape.coordinate_context();
    let mut matrix = SuperMatrix::zeros(ambient, &ctx);
    let id = pseudo_unit(index.as_slice(), ambient, &ctx)?;
    for (a, &i) in index.as_slice().iter().enumerate() {
        matrix.set(a, i - 1, id.get(a, a).clone());
    }
    let (mut next_even, mut next_odd) = (1, 1);
    let mut slots = Vec::with_capacity(shape.p() + shape.q());
    let free = (1..=shape.m + shape.n).filter(|&c| !index.contains(c));
    for (pos, col) in free.enumerate() {
        let even_type = pos < shape.m - shape.k;
        for row in 1..=shape.k + shape.l {
            let top = row <= shape.k;
            let coordinate = if top == even_type {
                next_even += 1;
                Coordinate::Even(next_even - 1)
            } else {
                next_odd += 1;
                Coordinate::Odd(next_odd - 1)
            };
            let block = ambient.block_parity(row - 1, col - 1);
            let wrapped = coordinate.parity() != block;
            let z = coordinate.element(&ctx);
            let value = if wrapped { z.nu()? } else { z };
            matrix.set(row - 1, col - 1, Entry::Value(value));
            slots.push(Slot {
                row,
                col,
                coordinate,
                wrapped,
            });
        }
    }
    debug_assert_eq!((next_even - 1, next_odd - 1), (shape.p(), shape.q()));
    Ok(Chart {
        shape: *shape,
        index: index.clone(),
        matrix,
        slots,
    })
}

/// `φ*_IJ`: every coordinate of chart `target` (J) as an expression over
/// chart `source` (I), valid where each factor of `domain` is invertible.
#[derive(Clone, Debug)]
pub struct ChartTransition {
    pub source: MultiIndex,
    pub target: MultiIndex,
    pub map: Substitution,
    /// Factors whose product must be invertible, expressed over chart `source`.
    pub domain: Vec<GrassmannElement>,
}

impl ChartTransition {
    pub fn identity(shape: &GrassShape, index: &MultiIndex) -> Self {
        let ctx = shape.coordinate_context();
        ChartTransition {
            source: index.clone(),
            target: index.clone(),
            map: Substitution::identity(&ctx),
            domain: Vec::new(),
        }
    }

    /// Product of the domain factors.
    pub fn domain_condition(&self) -> GrassmannElement {
        let ctx = self.map.target();
        self.domain.iter().fold(GrassmannElement::one(ctx), |acc, f| &acc * f)
    }

    pub fn image(&self, c: Coordinate) -> &GrassmannElement {
        match c {
            Coordinate::Even(i) => self.map.even_image(i - 1),
            Coordinate::Odd(j) => self.map.odd_image(j),
        }
        .expect("transitions assign every coordinate")
    }

    pub fn label(&self) -> String {
        format!("φ*[{} <- {}]", self.source, self.target)
    }
}

/// The matrix `M_J(A^I)·id_J`.
pub fn overlap_matrix(source: &Chart, target: &MultiIndex) -> Result<SuperMatrix, AtlasError> {
    let ambient = source.shape.ambient();
    let minor = source.matrix.minor(target.as_slice())?;
    let id = pseudo_unit(target.as_slice(), ambient, source.context())?;
    Ok(minor.matmul(&id)?)
}

/// `(M_J(A^I)·id_J)⁻¹`, failing when its body is identically singular.
pub fn overlap_inverse(
    source: &Chart,
    target: &MultiIndex,
) -> Result<(SuperMatrix, Vec<GrassmannElement>), AtlasError> {
    let overlap = overlap_matrix(source, target)?;
    let (de, dodd) = overlap.block_body_determinants()?;
    if de.is_zero() || dodd.is_zero() {
        let block = if de.is_zero() { "even" } else { "odd" };
        return Err(AtlasError::EmptyOverlap {
            from: source.index.clone(),
            to: target.clone(),
            reason: format!("the {block} block of M_J(A^I)·id_J has identically singular body"),
        });
    }
    let ctx = source.context();
    let domain = [de, dodd]
        .into_iter()
        .filter(|d| d.as_constant().is_none())
        .map(|d| GrassmannElement::from_coefficient(ctx, d))
        .collect();
    Ok((overlap.invert_even()?, domain))
}

/// `(M_J(A^I)·id_J)⁻¹·A^I`, which has the layout of `A^J` over chart `I`.
fn transported_matrix(source: &Chart, target: &MultiIndex) -> Result<(SuperMatrix, Vec<GrassmannElement>), AtlasError> {
    let (inverse, domain) = overlap_inverse(source, target)?;
    Ok((inverse.matmul(&source.matrix)?, domain))
}

/// Computes `φ*_IJ` by reading chart `J`'s slots off `(M_J(A^I)·id_J)⁻¹·A^I`.
pub fn transition(source: &Chart, target: &Chart) -> Result<ChartTransition, AtlasError> {
    if source.index == target.index {
        return Ok(ChartTransition::identity(&source.shape, &source.index));
    }
    let (t, domain) = transported_matrix(source, &target.index)?;
    let ctx = source.context();
    let mut map = Substitution::new(target.context(), ctx);
    for slot in &target.slots {
        let tau = t.element(slot.row - 1, slot.col - 1).expect("products carry no 1ν");
        let image = if slot.wrapped { tau.nu()? } else { tau };
        let found = image.parity();
        if !found.fits(slot.coordinate.parity()) {
            return Err(AtlasError::Parity {
                symbol: slot.coordinate.name(),
                row: slot.row,
                col: slot.col,
                expected: slot.coordinate.parity(),
                found,
            });
        }
        match slot.coordinate {
            Coordinate::Even(i) => map.assign_even(i - 1, image)?,
            Coordinate::Odd(j) => map.assign_odd(j, image)?,
        }
    }
    Ok(ChartTransition {
        source: source.index.clone(),
        target: target.index.clone(),
        map,
        domain,
    })
}

/// `f ∘ g` for `f = φ*_IJ` and `g = φ*_JK`: chart `K` coordinates expressed
/// over chart `I`. Domain factors of `g` are pulled back along `f`.
pub fn compose(f: &ChartTransition, g: &ChartTransition) -> Result<ChartTransition, AtlasError> {
    if f.target != g.source {
        return Err(AtlasError::NotChainable(f.label(), g.label()));
    }
    let map = f.map.after(&g.map)?;
    let mut domain = f.domain.clone();
    for d in &g.domain {
        domain.push(f.map.apply(d)?);
    }
    Ok(ChartTransition {
        source: f.source.clone(),
        target: g.target.clone(),
        map,
        domain,
    })
}

/// Checks `minor(T, J)·id_J = 1` for `T = (M_J(A^I)·id_J)⁻¹·A^I`.
pub fn minor_consistency(source: &Chart, target: &MultiIndex) -> Result<bool, AtlasError> {
    let (t, _) = transported_matrix(source, target)?;
    let id = pseudo_unit(target.as_slice(), source.shape.ambient(), source.context())?;
    let back = t.minor(target.as_slice())?.matmul(&id)?;
    Ok(back.equals_exact(&SuperMatrix::identity(source.shape.k, source.shape.l, source.context())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Pairs,
    Triples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Method {
    Exact,
    Modular { seed: u64, trials: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// `φ*_II = id`.
    Identity,
    /// `φ*_IJ ∘ φ*_JI = id`.
    Pair,
    /// `minor(T, J)·id_J = 1`.
    Minor,
    /// `φ*_IK ∘ φ*_KJ ∘ φ*_JI = id`.
    Triple,
    /// `φ*_KI = φ*_KJ ∘ φ*_JI`.
    Chain,
    /// `m_IJ·φ*_IJ(m_JK) = m_IK` for the canonical bundle.
    Gamma,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    /// The identity holds on an empty overlap only.
    Vacuous(String),
    Fail(String),
}

impl Outcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::Fail(_))
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self, Outcome::Vacuous(_))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub kind: CheckKind,
    pub charts: Vec<MultiIndex>,
    pub outcome: Outcome,
    pub micros: u64,
}

/// Result of a verification run; records are sorted by kind and index tuple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub method: Method,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(title: impl Into<String>, method: Method, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| (a.kind, &a.charts).cmp(&(b.kind, &b.charts)));
        Report {
            title: title.into(),
            method,
            records,
        }
    }

    pub fn count(&self, kind: CheckKind) -> usize {
        self.records.iter().filter(|r| r.kind == kind).count()
    }

    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.outcome == Outcome::Pass).count()
    }

    pub fn vacuous(&self) -> usize {
        self.records.iter().filter(|r| r.outcome.is_vacuous()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.outcome.is_failure())
    }

    pub fn is_success(&self) -> bool {
        self.failures().next().is_none()
    }

    /// One line per check kind followed by one line per failure.
    pub fn summary(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for kind in [
            CheckKind::Identity,
            CheckKind::Pair,
            CheckKind::Minor,
            CheckKind::Triple,
            CheckKind::Chain,
            CheckKind::Gamma,
        ] {
            let recs: Vec<_> = self.records.iter().filter(|r| r.kind == kind).collect();
            if recs.is_empty() {
                continue;
            }
            let pass = recs.iter().filter(|r| r.outcome == Outcome::Pass).count();
            let vac = recs.iter().filter(|r| r.outcome.is_vacuous()).count();
            let micros: u64 = recs.iter().map(|r| r.micros).sum();
            out.push_str(&format!(
                "  {:<8} {}/{} pass, {} on empty overlaps, {} failed ({:.3} s)\n",
                format!("{kind:?}").to_lowercase(),
                pass + vac,
                recs.len(),
                vac,
                recs.len() - pass - vac,
                micros as f64 / 1e6
            ));
        }
        for r in self.failures() {
            let charts: Vec<String> = r.charts.iter().map(ToString::to_string).collect();
            if let Outcome::Fail(why) = &r.outcome {
                out.push_str(&format!("  FAIL {:?} {}: {why}\n", r.kind, charts.join(" ")));
            }
        }
        out
    }
}

/// Runs `f` on a rayon pool capped by `NUGRASS_THREADS` when that is set.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("NUGRASS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// All charts and all ordered-pair transitions of a shape.
pub struct Atlas {
    pub shape: GrassShape,
    pub charts: Vec<Chart>,
    /// `transitions[i][j]` is `φ*_{I_i I_j}`, or the reason the overlap is empty.
    pub transitions: Vec<Vec<Result<ChartTransition, AtlasError>>>,
}

impl Atlas {
    pub fn build(shape: &GrassShape) -> Result<Atlas, AtlasError> {
        let charts = enumerate_charts(shape)
            .iter()
            .map(|i| build_chart(shape, i))
            .collect::<Result<Vec<_>, _>>()?;
        let transitions = with_thread_cap(|| {
            charts
                .par_iter()
                .map(|a| charts.iter().map(|b| transition(a, b)).collect())
                .collect()
        });
        Ok(Atlas {
            shape: *shape,
            charts,
            transitions,
        })
    }

    pub fn position(&self, index: &MultiIndex) -> Option<usize> {
        self.charts.iter().position(|c| &c.index == index)
    }
}

fn timed(kind: CheckKind, charts: Vec<MultiIndex>, f: impl FnOnce() -> Outcome) -> CheckRecord {
    let start = Instant::now();
    let outcome = f();
    CheckRecord {
        kind,
        charts,
        outcome,
        micros: start.elapsed().as_micros() as u64,
    }
}

fn identity_outcome(s: &Substitution) -> Outcome {
    match s.first_non_identity() {
        None => Outcome::Pass,
        Some((name, diff)) => Outcome::Fail(format!("{name} is off by {}", diff.display())),
    }
}

/// Compares the chains `lhs` and `rhs` (each `[outer, ..., inner]`) at seeded
/// points of GF(p) on the chart `lhs[0]` starts from; an empty `rhs` is the
/// identity.
fn modular_agree(
    lhs: &[&ChartTransition],
    rhs: &[&ChartTransition],
    q: usize,
    seed: u64,
    stream: u64,
    trials: usize,
) -> Outcome {
    if q > MAX_ODD {
        return Outcome::Fail(format!("modular evaluation supports at most {MAX_ODD} odd coordinates"));
    }
    let alg = ModAlgebra::new(q);
    let ctx = lhs[0].map.target().clone();
    let mut sampler = PointSampler::split(seed, stream);
    let budget = 32 * trials.max(1) + 64;
    let mut usable = 0;
    for _ in 0..budget {
        if usable == trials {
            return Outcome::Pass;
        }
        let Some(point) = sampler.point(&ctx) else {
            continue;
        };
        let start_even: Vec<Option<ModElement>> = point.iter().map(|&x| Some(alg.scalar(x))).collect();
        let start_odd: Vec<Option<ModElement>> = (1..=q).map(|j| Some(alg.generator(j))).collect();
        let (Ok((even, odd)), Ok((want_even, want_odd))) = (
            evaluate_chain(&alg, lhs, &start_even, &start_odd),
            evaluate_chain(&alg, rhs, &start_even, &start_odd),
        ) else {
            continue;
        };
        if let Some(v) = (0..even.len()).find(|&v| even[v] != want_even[v]) {
            return Outcome::Fail(format!("x{} differs at a random point", v + 1));
        }
        if let Some(j) = (0..odd.len()).find(|&j| odd[j] != want_odd[j]) {
            return Outcome::Fail(format!("e{} differs at a random point", j + 1));
        }
        usable += 1;
    }
    sampling_outcome(usable, trials)
}

/// No usable point in the whole budget means the common overlap is empty
/// (a nonempty one is Zariski dense and is hit almost surely).
pub(crate) fn sampling_outcome(usable: usize, trials: usize) -> Outcome {
    if usable == trials {
        Outcome::Pass
    } else if usable == 0 {
        Outcome::Vacuous("no random point lies on the common overlap".into())
    } else {
        Outcome::Fail(format!("only {usable} of {trials} random points were usable"))
    }
}

type ModPoint = (Vec<Option<ModElement>>, Vec<Option<ModElement>>);

/// Pushes point values through a chain `[outer, ..., inner]` of transitions:
/// the values for the coordinates of `outer.source` determine those of
/// `outer.target`, and so on down the chain.
fn evaluate_chain(
    alg: &ModAlgebra,
    chain: &[&ChartTransition],
    even: &[Option<ModElement>],
    odd: &[Option<ModElement>],
) -> Result<ModPoint, EvalFailure> {
    let (mut even, mut odd) = (even.to_vec(), odd.to_vec());
    for t in chain {
        let mut ev = Evaluator::new(alg, &even, &odd);
        for d in &t.domain {
            if ev.element(d)?.body() == 0 {
                return Err(EvalFailure::Singular);
            }
        }
        let src = t.map.source();
        let next_even = (0..src.even_count())
            .map(|v| ev.element(t.map.even_image(v).unwrap()).map(Some))
            .collect::<Result<Vec<_>, _>>()?;
        let next_odd = (1..=src.odd_count())
            .map(|j| ev.element(t.map.odd_image(j).unwrap()).map(Some))
            .collect::<Result<Vec<_>, _>>()?;
        even = next_even;
        odd = next_odd;
    }
    Ok((even, odd))
}

/// Checks the gluing conditions on every chart, ordered pair and (at
/// `Level::Triples`) ordered triple. Pairs are always checked exactly;
/// triples use `method`.
pub fn verify_cocycles(shape: &GrassShape, level: Level, method: Method) -> Result<Report, AtlasError> {
    let atlas = Atlas::build(shape)?;
    Ok(verify_atlas(&atlas, level, method))
}

pub fn verify_atlas(atlas: &Atlas, level: Level, method: Method) -> Report {
    let n = atlas.charts.len();
    let idx = |i: usize| atlas.charts[i].index.clone();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut records: Vec<CheckRecord> = with_thread_cap(|| {
        pairs
            .par_iter()
            .flat_map_iter(|&(i, j)| {
                let mut out = Vec::new();
                if i == j {
                    out.push(timed(CheckKind::Identity, vec![idx(i)], || {
                        match &atlas.transitions[i][i] {
                            Ok(t) => identity_outcome(&t.map),
                            Err(e) => Outcome::Fail(e.to_string()),
                        }
                    }));
                }
                out.push(timed(CheckKind::Pair, vec![idx(i), idx(j)], || {
                    pair_outcome(atlas, i, j)
                }));
                if i != j {
                    out.push(timed(
                        CheckKind::Minor,
                        vec![idx(i), idx(j)],
                        || match minor_consistency(&atlas.charts[i], &idx(j)) {
                            Ok(true) => Outcome::Pass,
                            Ok(false) => Outcome::Fail("minor(T, J)·id_J is not the identity".into()),
                            Err(e @ AtlasError::EmptyOverlap { .. }) => Outcome::Vacuous(e.to_string()),
                            Err(e) => Outcome::Fail(e.to_string()),
                        },
                    ));
                }
                out
            })
            .collect()
    });
    if level == Level::Triples {
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .collect();
        let triple_records: Vec<CheckRecord> = with_thread_cap(|| {
            triples
                .par_iter()
                .enumerate()
                .flat_map_iter(|(stream, &(i, j, k))| {
                    let charts = vec![idx(i), idx(j), idx(k)];
                    [
                        timed(CheckKind::Triple, charts.clone(), || {
                            triple_outcome(atlas, i, j, k, method, stream as u64)
                        }),
                        timed(CheckKind::Chain, charts, || {
                            chain_outcome(atlas, i, j, k, method, stream as u64)
                        }),
                    ]
                })
                .collect()
        });
        records.extend(triple_records);
    }
    let title = format!("{} gluing conditions", atlas.shape);
    Report::new(title, method, records)
}

fn lookup(atlas: &Atlas, i: usize, j: usize) -> Result<&ChartTransition, Outcome> {
    atlas.transitions[i][j].as_ref().map_err(|e| match e {
        AtlasError::EmptyOverlap { .. } => Outcome::Vacuous(e.to_string()),
        other => Outcome::Fail(other.to_string()),
    })
}

/// A composite whose denominators vanish identically lives on an empty
/// common overlap, so the identity holds there vacuously.
pub(crate) fn composite_failure(e: AtlasError) -> Outcome {
    match e {
        AtlasError::Algebra(AlgebraError::NotInvertible)
        | AtlasError::Matrix(MatrixError::Algebra(AlgebraError::NotInvertible)) => {
            Outcome::Vacuous("the common overlap is empty".into())
        }
        other => Outcome::Fail(other.to_string()),
    }
}

fn pair_outcome(atlas: &Atlas, i: usize, j: usize) -> Outcome {
    let result = (|| {
        let f = lookup(atlas, i, j)?;
        let g = lookup(atlas, j, i)?;
        let c = compose(f, g).map_err(composite_failure)?;
        Ok(identity_outcome(&c.map))
    })();
    result.unwrap_or_else(|o| o)
}

fn triple_outcome(atlas: &Atlas, i: usize, j: usize, k: usize, method: Method, stream: u64) -> Outcome {
    let result = (|| {
        let ik = lookup(atlas, i, k)?;
        let kj = lookup(atlas, k, j)?;
        let ji = lookup(atlas, j, i)?;
        Ok(match method {
            Method::Exact => {
                let c = compose(ik, kj)
                    .and_then(|c| compose(&c, ji))
                    .map_err(composite_failure)?;
                identity_outcome(&c.map)
            }
            Method::Modular { seed, trials } => {
                modular_agree(&[ik, kj, ji], &[], atlas.shape.q(), seed, stream, trials)
            }
        })
    })();
    result.unwrap_or_else(|o| o)
}

/// `φ*_KI` computed directly from `(M_I(A^K)·id_I)⁻¹·A^K` against `φ*_KJ ∘ φ*_JI`.
fn chain_outcome(atlas: &Atlas, i: usize, j: usize, k: usize, method: Method, stream: u64) -> Outcome {
    let result = (|| {
        let ki = lookup(atlas, k, i)?;
        let kj = lookup(atlas, k, j)?;
        let ji = lookup(atlas, j, i)?;
        Ok(match method {
            Method::Exact => {
                let c = compose(kj, ji).map_err(composite_failure)?;
                match (0..c.map.source().even_count())
                    .map(|v| (format!("x{}", v + 1), c.map.even_image(v), ki.map.even_image(v)))
                    .chain(
                        (1..=c.map.source().odd_count())
                            .map(|j| (format!("e{j}"), c.map.odd_image(j), ki.map.odd_image(j))),
                    )
                    .find(|(_, a, b)| !a.unwrap().equals_exact(b.unwrap()))
                {
                    None => Outcome::Pass,
                    Some((name, _, _)) => Outcome::Fail(format!("image of {name} differs")),
                }
            }
            Method::Modular { seed, trials } => {
                modular_agree(&[kj, ji], &[ki], atlas.shape.q(), seed ^ 0x9e37_79b9, stream, trials)
            }
        })
    })();
    result.unwrap_or_else(|o| o)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape11() -> GrassShape {
        GrassShape::new(1, 1, 2, 2).unwrap()
    }

    fn mi(s: &GrassShape, v: &[usize]) -> MultiIndex {
        MultiIndex::new(s, v.to_vec()).unwrap()
    }

    fn column(chart: &Chart, col: usize) -> Vec<String> {
        (0..chart.matrix.rows())
            .map(|r| chart.matrix.get(r, col - 1).display())
            .collect()
    }

    #[test]
    fn dimensions() {
        let s = GrassShape::new(2, 2, 3, 3).unwrap();
        assert_eq!((s.p(), s.q()), (4, 4));
        assert_eq!(enumerate_charts(&s).len(), 15);
        let charts = enumerate_charts(&shape11());
        let shown: Vec<String> = charts.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["{1,2}", "{1,3}", "{1,4}", "{2,3}", "{2,4}", "{3,4}"]);
        assert!(GrassShape::new(2, 1, 2, 2).is_err());
    }

    #[test]
    fn small_charts() {
        let s = shape11();
        let c = build_chart(&s, &mi(&s, &[1, 3])).unwrap();
        assert_eq!(column(&c, 2), ["x1", "e1"]);
        assert_eq!(column(&c, 4), ["e2", "x2"]);
        let c = build_chart(&s, &mi(&s, &[1, 2])).unwrap();
        assert_eq!(column(&c, 2), ["0", "1ν"]);
        assert!(c.slots.iter().filter(|s| s.wrapped).count() == 2);
        assert!(c.matrix.is_standard());
    }

    #[test]
    fn worked_transition() {
        let s = shape11();
        let a = build_chart(&s, &mi(&s, &[1, 3])).unwrap();
        let b = build_chart(&s, &mi(&s, &[2, 3])).unwrap();
        let t = transition(&a, &b).unwrap();
        let ctx = a.context();
        let x1 = GrassmannElement::even_symbol(ctx, 0);
        let x2 = GrassmannElement::even_symbol(ctx, 1);
        let e1 = GrassmannElement::odd_generator(ctx, 1);
        let e2 = GrassmannElement::odd_generator(ctx, 2);
        let inv = x1.invert().unwrap();
        assert!(t.image(Coordinate::Even(1)).equals_exact(&inv));
        assert!(t.image(Coordinate::Odd(1)).equals_exact(&-(&e1 * &inv)));
        assert!(t.image(Coordinate::Odd(2)).equals_exact(&(&e2 * &inv)));
        assert!(t
            .image(Coordinate::Even(2))
            .equals_exact(&(&x2 - &(&(&e1 * &e2) * &inv))));
        assert!(t.domain_condition().equals_exact(&x1));
        let back = transition(&b, &a).unwrap();
        assert!(compose(&t, &back).unwrap().map.is_identity());
    }
}
