//! Gauss supermatrices of finite-type bundles, the induced maps into the
//! ν-grassmannian, the inclusion and index maps used for homotopies, and the
//! deformation retraction of projective superspace.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atlas::{build_chart, enumerate_charts, AtlasError, Coordinate, GrassShape, MultiIndex};
use crate::bundle::{validate_bundle, BundleDescription, BundleIssue, Section};
use crate::superalgebra::{AlgebraContext, AlgebraError, GrassmannElement, Substitution};
use crate::supermatrix::{pseudo_unit, Entry, MatrixError, SuperMatrix, SuperShape};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussError {
    #[error("bundle description is invalid: {}", .0.first().map(ToString::to_string).unwrap_or_default())]
    InvalidBundle(Vec<BundleIssue>),
    #[error("transition a{0}{1} is missing")]
    MissingTransition(usize, usize),
    #[error("multi-index {0:?} does not select {1} of {2} columns")]
    BadIndex(Vec<usize>, usize, usize),
    #[error("no chart map or section supplied for {0}")]
    MissingChart(MultiIndex),
    #[error("image of {coordinate} has parity {found}, expected {expected}")]
    Parity {
        coordinate: String,
        expected: crate::superalgebra::Parity,
        found: crate::superalgebra::Parity,
    },
    #[error("rank mismatch: {0}")]
    Rank(String),
    #[error("index {0} exceeds the target rank {1}")]
    Overflow(usize, usize),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Formal partition of unity `ρ_1..ρ_t` with square roots `s_α`, `s_α² = ρ_α`,
/// and the relation `Σ ρ_α = 1`. A one-set cover uses the constants `ρ_1 = s_1 = 1`.
#[derive(Clone, Debug)]
pub struct PartitionSymbols {
    pub cover: usize,
    rho: Vec<usize>,
    sqrt: Vec<usize>,
}

impl PartitionSymbols {
    /// Extends `base` by `rho{α}` (`{prefix}{α}`) and `s{prefix}{α}`.
    pub fn extend(
        base: &Arc<AlgebraContext>,
        cover: usize,
        prefix: &str,
    ) -> Result<(Arc<AlgebraContext>, PartitionSymbols), AlgebraError> {
        if cover <= 1 {
            let ctx = base.extend().build()?;
            return Ok((
                ctx,
                PartitionSymbols {
                    cover,
                    rho: Vec::new(),
                    sqrt: Vec::new(),
                },
            ));
        }
        let mut b = base.extend();
        let names: Vec<String> = (1..=cover).map(|a| format!("{prefix}{a}")).collect();
        let rho = names.iter().map(|n| b.even(n)).collect();
        let sqrt = names
            .iter()
            .map(|n| b.sqrt_of(&format!("s{n}"), n))
            .collect::<Result<_, _>>()?;
        b.sum_to_one(&names);
        Ok((b.build()?, PartitionSymbols { cover, rho, sqrt }))
    }

    pub fn rho(&self, ctx: &Arc<AlgebraContext>, alpha: usize) -> GrassmannElement {
        match self.rho.get(alpha - 1) {
            Some(&v) => GrassmannElement::even_symbol(ctx, v),
            None => GrassmannElement::one(ctx),
        }
    }

    pub fn sqrt_rho(&self, ctx: &Arc<AlgebraContext>, alpha: usize) -> GrassmannElement {
        match self.sqrt.get(alpha - 1) {
            Some(&v) => GrassmannElement::even_symbol(ctx, v),
            None => GrassmannElement::one(ctx),
        }
    }
}

/// `G` in `tk|tl × tk|tl` format. Row `(β, j)` is the generator `√ρ_β s_j^β`
/// (top block) or `√ρ_β t_j^β` (bottom block); column `(α, i)` is `e_{(α−1)k+i}`
/// or `f_{(α−1)l+i}`.
#[derive(Clone, Debug)]
pub struct GaussMatrix {
    pub cover: usize,
    pub k: usize,
    pub l: usize,
    pub partition: PartitionSymbols,
    pub matrix: SuperMatrix,
}

impl GaussMatrix {
    pub fn context(&self) -> &Arc<AlgebraContext> {
        self.matrix.context()
    }

    /// Zero-based row (or column) of the `e`-slot `i` or `f`-slot `k+i` of block `α`.
    pub fn position(&self, alpha: usize, slot: usize) -> usize {
        let (t, k, l) = (self.cover, self.k, self.l);
        if slot < k {
            (alpha - 1) * k + slot
        } else {
            t * k + (alpha - 1) * l + (slot - k)
        }
    }

    /// The target grassmannian `νGr_{k|l}(tk|tl)`; `None` for a one-set cover.
    pub fn grass_shape(&self) -> Option<GrassShape> {
        GrassShape::new(self.k, self.l, self.cover * self.k, self.cover * self.l).ok()
    }
}

/// Fills `G[(β,j)][(α,i)] = ρ_α·√ρ_β·a^{αβ}[i][j]` without validating the bundle.
pub fn assemble(desc: &BundleDescription) -> Result<GaussMatrix, GaussError> {
    let (t, k, l) = (desc.cover, desc.k, desc.l);
    let (ctx, partition) = PartitionSymbols::extend(desc.context(), t, "rho")?;
    let mut g = GaussMatrix {
        cover: t,
        k,
        l,
        partition,
        matrix: SuperMatrix::zeros(SuperShape::square(t * k, t * l), &ctx),
    };
    for beta in 1..=t {
        let sb = g.partition.sqrt_rho(&ctx, beta);
        for alpha in 1..=t {
            let a = desc
                .get(alpha, beta)
                .ok_or(GaussError::MissingTransition(alpha, beta))?
                .embed(&ctx)?;
            let weight = g.partition.rho(&ctx, alpha).try_mul(&sb)?;
            for j in 0..k + l {
                for i in 0..k + l {
                    let entry = a
                        .element(i, j)
                        .ok_or(MatrixError::IrreducibleOddUnit { row: i, col: j })?;
                    let value = weight.try_mul(&entry)?;
                    let (r, c) = (g.position(beta, j), g.position(alpha, i));
                    g.matrix.set(r, c, Entry::from_element(value));
                }
            }
        }
    }
    Ok(g)
}

/// Transition data with a free symbol `a{α}{β}_{i}{j}` in every entry: an even
/// symbol where the block is even, an odd generator where it is odd.
pub fn symbolic_bundle(cover: usize, k: usize, l: usize) -> Result<BundleDescription, GaussError> {
    let shape = SuperShape::square(k, l);
    let name = |a: usize, b: usize, i: usize, j: usize| format!("a{a}{b}_{}{}", i + 1, j + 1);
    let mut builder = AlgebraContext::builder();
    let pairs: Vec<(usize, usize)> = (1..=cover).flat_map(|a| (1..=cover).map(move |b| (a, b))).collect();
    for &(a, b) in &pairs {
        for i in 0..k + l {
            for j in 0..k + l {
                match shape.block_parity(i, j) {
                    crate::superalgebra::Parity::Odd => builder.odd(&name(a, b, i, j)),
                    _ => builder.even(&name(a, b, i, j)),
                };
            }
        }
    }
    let ctx = builder.build()?;
    let mut desc = BundleDescription::new(cover, k, l, &ctx);
    for &(a, b) in &pairs {
        let mut m = SuperMatrix::zeros(shape, &ctx);
        for i in 0..k + l {
            for j in 0..k + l {
                let z = GrassmannElement::symbol(&ctx, &name(a, b, i, j))?;
                m.set(i, j, Entry::Value(z));
            }
        }
        desc.insert(a, b, m);
    }
    Ok(desc)
}

/// Validates the bundle, then assembles its Gauss supermatrix.
pub fn build_gauss(desc: &BundleDescription) -> Result<GaussMatrix, GaussError> {
    let report = validate_bundle(desc);
    if !report.is_valid() {
        return Err(GaussError::InvalidBundle(report.issues));
    }
    assemble(desc)
}

/// `φ*_I`: chart coordinates of `V_I` in `νGr_{k|l}(tk|tl)` to entries of `id_I·G(I)`.
#[derive(Clone, Debug)]
pub struct InducedChartMap {
    pub index: MultiIndex,
    /// `id_I·G(I)` with the `I` columns deleted.
    pub y: SuperMatrix,
    pub map: Substitution,
}

pub fn induced_chart_map(g: &GaussMatrix, index: &MultiIndex) -> Result<InducedChartMap, GaussError> {
    let ctx = g.context();
    let size = g.k + g.l;
    let total = g.cover * size;
    let idx = index.as_slice();
    if idx.len() != size || idx.iter().any(|&i| i == 0 || i > total) {
        return Err(GaussError::BadIndex(idx.to_vec(), size, total));
    }
    let rows = g
        .matrix
        .select_rows(idx)?
        .with_shape(SuperShape::new(g.k, g.l, g.cover * g.k, g.cover * g.l))?;
    let id = pseudo_unit(idx, rows.shape(), ctx)?;
    let prod = id.matmul(&rows)?;
    let free: Vec<usize> = (1..=total).filter(|c| !index.contains(*c)).collect();
    let y = prod.minor(&free)?;
    let Some(shape) = g.grass_shape() else {
        let empty = AlgebraContext::with_symbols::<&str>(&[], 0)?;
        return Ok(InducedChartMap {
            index: index.clone(),
            y,
            map: Substitution::new(&empty, ctx),
        });
    };
    let chart = build_chart(&shape, index)?;
    let mut map = Substitution::new(chart.context(), ctx);
    for slot in &chart.slots {
        let entry = prod
            .element(slot.row - 1, slot.col - 1)
            .ok_or(MatrixError::IrreducibleOddUnit {
                row: slot.row,
                col: slot.col,
            })?;
        let image = if slot.wrapped { entry.nu()? } else { entry };
        assign(&mut map, slot.coordinate, image)?;
    }
    Ok(InducedChartMap {
        index: index.clone(),
        y,
        map,
    })
}

fn assign(map: &mut Substitution, c: Coordinate, image: GrassmannElement) -> Result<(), GaussError> {
    let found = image.parity();
    let result = match c {
        Coordinate::Even(i) => map.assign_even(i - 1, image),
        Coordinate::Odd(j) => map.assign_odd(j, image),
    };
    result.map_err(|e| match e {
        AlgebraError::ParityViolation { .. } => GaussError::Parity {
            coordinate: c.name(),
            expected: c.parity(),
            found,
        },
        other => other.into(),
    })
}

/// Induced chart maps for every chart of `νGr_{k|l}(tk|tl)`.
pub fn induced_chart_maps(g: &GaussMatrix) -> Result<BTreeMap<MultiIndex, InducedChartMap>, GaussError> {
    let Some(shape) = g.grass_shape() else {
        return Ok(BTreeMap::new());
    };
    enumerate_charts(&shape)
        .into_iter()
        .map(|i| induced_chart_map(g, &i).map(|m| (i, m)))
        .collect()
}

/// The formal sum `h̃ = Σ_I ρ′_I·φ*_I(h|V_I)`, one term per chart.
#[derive(Clone, Debug)]
pub struct SigmaAssembly {
    pub context: Arc<AlgebraContext>,
    pub partition: PartitionSymbols,
    pub terms: Vec<(MultiIndex, GrassmannElement)>,
    pub total: GrassmannElement,
}

/// Assembles `σ*` on chart-level restrictions `h|V_I`. The partition `ρ′`
/// of the grassmannian appears as formal symbols `rhoP{n}` in chart order.
pub fn sigma_assemble(
    maps: &BTreeMap<MultiIndex, InducedChartMap>,
    local: &BTreeMap<MultiIndex, GrassmannElement>,
) -> Result<SigmaAssembly, GaussError> {
    let Some(first) = maps.values().next() else {
        return Err(GaussError::Rank("no chart maps".into()));
    };
    let (ctx, partition) = PartitionSymbols::extend(first.map.target(), maps.len(), "rhoP")?;
    let mut total = GrassmannElement::zero(&ctx);
    let mut terms = Vec::with_capacity(maps.len());
    for (n, (index, chart_map)) in maps.iter().enumerate() {
        let h = local
            .get(index)
            .ok_or_else(|| GaussError::MissingChart(index.clone()))?;
        let pushed = chart_map.map.apply(h)?.embed(&ctx)?;
        let term = partition.rho(&ctx, n + 1).try_mul(&pushed)?;
        total = total.try_add(&term)?;
        terms.push((index.clone(), term));
    }
    Ok(SigmaAssembly {
        context: ctx,
        partition,
        terms,
        total,
    })
}

/// `I^e = {2i}`, `I^o = {2i−1}` and `Ī`, which shifts by `m−k` every entry
/// after the first `b` entries, `b` being the number of entries `≤ m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMaps {
    pub even: Vec<usize>,
    pub odd: Vec<usize>,
    pub bar: Vec<usize>,
}

pub fn index_maps(index: &MultiIndex, m: usize, k: usize) -> IndexMaps {
    let idx = index.as_slice();
    let b = idx.iter().filter(|&&i| i <= m).count();
    IndexMaps {
        even: idx.iter().map(|&i| 2 * i).collect(),
        odd: idx.iter().map(|&i| 2 * i - 1).collect(),
        bar: idx
            .iter()
            .enumerate()
            .map(|(pos, &i)| if pos < b { i } else { i + m - k })
            .collect(),
    }
}

/// `J^e`, `J^o` and `J` from rank `m|n` into rank `2m|2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InclusionKind {
    Even,
    Odd,
    Plain,
}

impl InclusionKind {
    /// Image of the one-based basis index `i`.
    pub fn index(self, i: usize) -> usize {
        match self {
            InclusionKind::Even => 2 * i,
            InclusionKind::Odd => 2 * i - 1,
            InclusionKind::Plain => i,
        }
    }
}

impl fmt::Display for InclusionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InclusionKind::Even => "J^e",
            InclusionKind::Odd => "J^o",
            InclusionKind::Plain => "J",
        })
    }
}

/// Re-indexes a section of rank `m|n` into rank `2m|2n`.
pub fn inclusion_apply(kind: InclusionKind, s: &Section) -> Result<Section, GaussError> {
    let (m, n) = s.rank();
    let ctx = s.coefficients().first().map(|c| c.context().clone());
    let Some(ctx) = ctx else {
        return Ok(Section::zero(0, 0, &AlgebraContext::with_symbols::<&str>(&[], 0)?));
    };
    let mut coeffs = vec![GrassmannElement::zero(&ctx); 2 * m + 2 * n];
    for (slot, c) in s.coefficients().iter().enumerate() {
        let target = if slot < m {
            kind.index(slot + 1) - 1
        } else {
            2 * m + kind.index(slot - m + 1) - 1
        };
        coeffs[target] = c.clone();
    }
    Section::from_coefficients(2 * m, 2 * n, coeffs).map_err(|e| GaussError::Rank(e.to_string()))
}

/// `J∘g` columnwise: column `c` of `G` moves to column `J(c)` of a matrix
/// with `2tk|2tl` columns.
pub fn inclusion_apply_matrix(kind: InclusionKind, g: &SuperMatrix) -> Result<SuperMatrix, GaussError> {
    let s = g.shape();
    let (m, n) = (s.col_even, s.col_odd);
    let shape = SuperShape::new(s.row_even, s.row_odd, 2 * m, 2 * n);
    let mut out = SuperMatrix::zeros(shape, g.context());
    for c in 0..m + n {
        let target = if c < m {
            kind.index(c + 1) - 1
        } else {
            2 * m + kind.index(c - m + 1) - 1
        };
        if target >= 2 * (m + n) {
            return Err(GaussError::Overflow(target + 1, 2 * (m + n)));
        }
        for r in 0..g.rows() {
            out.set(r, target, g.get(r, c).clone());
        }
    }
    Ok(out)
}

/// `(J̄^e)*` on the chart `W_{I^e}` of `νGr_{k|l}(2m|2n)`: the coordinate in
/// row `i`, free column `2j−1` goes to the chart-`I` coordinate in row `i`,
/// free column `j` (through ν when the two parities differ); every other
/// coordinate goes to zero.
pub fn induced_grass_inclusion(shape: &GrassShape, index: &MultiIndex) -> Result<Substitution, GaussError> {
    let source = build_chart(shape, index)?;
    let doubled = GrassShape::new(shape.k, shape.l, 2 * shape.m, 2 * shape.n)?;
    let maps = index_maps(index, shape.m, shape.k);
    let target = build_chart(&doubled, &MultiIndex::new(&doubled, maps.even)?)?;
    let free_cols = |chart: &crate::atlas::Chart| -> Vec<usize> {
        let mut cols: Vec<usize> = chart.slots.iter().map(|s| s.col).collect();
        cols.dedup();
        cols
    };
    let (src_cols, tgt_cols) = (free_cols(&source), free_cols(&target));
    let mut map = Substitution::new(target.context(), source.context());
    for slot in &target.slots {
        let pos = tgt_cols.iter().position(|&c| c == slot.col).unwrap();
        let image = if pos % 2 == 0 && pos / 2 < src_cols.len() {
            let col = src_cols[pos / 2];
            let from = source.slots.iter().find(|s| s.row == slot.row && s.col == col).unwrap();
            let x = from.coordinate.element(source.context());
            if from.coordinate.parity() == slot.coordinate.parity() {
                x
            } else {
                x.nu()?
            }
        } else {
            GrassmannElement::zero(source.context())
        };
        assign(&mut map, slot.coordinate, image)?;
    }
    Ok(map)
}

/// `F_t = (1−t)·J^e G_0 + t·J^o G_1` over the algebra extended by `t`.
#[derive(Clone, Debug)]
pub struct HomotopyFamily {
    pub context: Arc<AlgebraContext>,
    pub t: usize,
    pub family: SuperMatrix,
    pub start: SuperMatrix,
    pub end: SuperMatrix,
}

impl HomotopyFamily {
    /// `F_t` with `t` replaced by the given element of the base algebra.
    pub fn at(&self, value: &GrassmannElement) -> Result<SuperMatrix, GaussError> {
        let mut s = Substitution::identity(&self.context);
        s.assign_even(self.t, value.embed(&self.context)?)?;
        Ok(self.family.substitute(&s)?)
    }

    /// `(F_0 = J^e G_0, F_1 = J^o G_1)` as exact matrix equalities.
    pub fn endpoints(&self) -> Result<(bool, bool), GaussError> {
        let zero = GrassmannElement::zero(&self.context);
        let one = GrassmannElement::one(&self.context);
        Ok((
            self.at(&zero)?.equals_exact(&self.start),
            self.at(&one)?.equals_exact(&self.end),
        ))
    }
}

pub fn homotopy_family(g0: &GaussMatrix, g1: &GaussMatrix) -> Result<HomotopyFamily, GaussError> {
    if g0.matrix.shape() != g1.matrix.shape() {
        return Err(GaussError::Rank(format!(
            "{} against {}",
            g0.matrix.shape(),
            g1.matrix.shape()
        )));
    }
    let base = g0.context();
    let mut b = base.extend();
    let t = b.even("t");
    let ctx = b.build()?;
    let g1 = g1
        .matrix
        .embed(&ctx)
        .map_err(|_| GaussError::Rank("the two Gauss supermatrices live over different algebras".into()))?;
    let start = inclusion_apply_matrix(InclusionKind::Even, &g0.matrix.embed(&ctx)?)?;
    let end = inclusion_apply_matrix(InclusionKind::Odd, &g1)?;
    let tv = GrassmannElement::even_symbol(&ctx, t);
    let one_minus = &GrassmannElement::one(&ctx) - &tv;
    let family = start.scale(&one_minus)?.add(&end.scale(&tv)?)?;
    Ok(HomotopyFamily {
        context: ctx,
        t,
        family,
        start,
        end,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RetractionRecord {
    pub chart: usize,
    pub generator: String,
    /// `j₀∘H = id`.
    pub start: bool,
    /// `j₁∘H = r∘j`.
    pub end: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RetractionReport {
    pub m: usize,
    pub n: usize,
    pub records: Vec<RetractionRecord>,
}

impl RetractionReport {
    pub fn is_success(&self) -> bool {
        self.records.iter().all(|r| r.start && r.end)
    }
}

/// The retraction `H: x ↦ x, e ↦ (1−t)e` of projective superspace
/// `P^{m|n}`, checked on each of its `m+1` affine charts.
pub fn retraction_check(m: usize, n: usize) -> Result<RetractionReport, GaussError> {
    let names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    let base = AlgebraContext::with_symbols(&names, n)?;
    let mut b = base.extend();
    let t = b.even("t");
    let ext = b.build()?;
    let tv = GrassmannElement::even_symbol(&ext, t);
    let one_minus = &GrassmannElement::one(&ext) - &tv;

    let mut h = Substitution::new(&base, &ext);
    let mut rj = Substitution::new(&base, &base);
    for v in 0..m {
        h.assign_even(v, GrassmannElement::even_symbol(&ext, v))?;
        rj.assign_even(v, GrassmannElement::even_symbol(&base, v))?;
    }
    for j in 1..=n {
        h.assign_odd(j, one_minus.try_mul(&GrassmannElement::odd_generator(&ext, j))?)?;
        rj.assign_odd(j, GrassmannElement::zero(&base))?;
    }
    let endpoint = |value: GrassmannElement| -> Result<Substitution, AlgebraError> {
        let mut s = Substitution::new(&ext, &base);
        for v in 0..m {
            s.assign_even(v, GrassmannElement::even_symbol(&base, v))?;
        }
        for j in 1..=n {
            s.assign_odd(j, GrassmannElement::odd_generator(&base, j))?;
        }
        s.assign_even(t, value)?;
        Ok(s)
    };
    let j0 = endpoint(GrassmannElement::zero(&base))?.after(&h)?;
    let j1 = endpoint(GrassmannElement::one(&base))?.after(&h)?;

    let generators: Vec<(String, GrassmannElement)> = (0..m)
        .map(|v| (names[v].clone(), GrassmannElement::even_symbol(&base, v)))
        .chain((1..=n).map(|j| (format!("e{j}"), GrassmannElement::odd_generator(&base, j))))
        .collect();
    let mut records = Vec::new();
    for chart in 1..=m + 1 {
        for (name, z) in &generators {
            records.push(RetractionRecord {
                chart,
                generator: name.clone(),
                start: j0.apply(z)?.equals_exact(z),
                end: j1.apply(z)?.equals_exact(&rj.apply(z)?),
            });
        }
    }
    Ok(RetractionReport { m, n, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(shape: &GrassShape, v: &[usize]) -> MultiIndex {
        MultiIndex::new(shape, v.to_vec()).unwrap()
    }

    #[test]
    fn index_maps_example() {
        let s = GrassShape::new(2, 2, 3, 3).unwrap();
        let maps = index_maps(&mi(&s, &[1, 2, 3, 6]), 3, 2);
        assert_eq!(maps.even, vec![2, 4, 6, 12]);
        assert_eq!(maps.odd, vec![1, 3, 5, 11]);
        assert_eq!(maps.bar, vec![1, 2, 3, 7]);
        let all_small = index_maps(&mi(&s, &[1, 2, 3, 4]), 6, 2);
        assert_eq!(all_small.bar, vec![1, 2, 3, 4]);
        let all_large = index_maps(&mi(&s, &[3, 4, 5, 6]), 2, 1);
        assert_eq!(all_large.bar, vec![4, 5, 6, 7]);
    }

    #[test]
    fn single_chart_bundle() {
        let ctx = AlgebraContext::with_symbols(&["x1"], 1).unwrap();
        let desc = BundleDescription::trivial(1, 1, 1, &ctx);
        let g = build_gauss(&desc).unwrap();
        let id = SuperMatrix::identity(1, 1, g.context());
        assert!(g.matrix.equals_exact(&id));
        let shape_free = MultiIndex::new(&GrassShape::new(1, 1, 2, 2).unwrap(), vec![1, 2]).unwrap();
        let induced = induced_chart_map(&g, &shape_free).unwrap();
        assert_eq!(induced.y.cols(), 0);
        assert!(induced.map.is_identity() || induced.map.source().even_count() == 0);
    }

    #[test]
    fn symbolic_gauss_is_standard() {
        let desc = symbolic_bundle(2, 2, 1).unwrap();
        let g = assemble(&desc).unwrap();
        assert!(g.matrix.is_standard());
        assert_eq!(g.matrix.rows(), 6);
    }

    #[test]
    fn retraction_small() {
        let r = retraction_check(2, 2).unwrap();
        assert!(r.is_success());
        assert_eq!(r.records.len(), 3 * 4);
    }

    #[test]
    fn grass_inclusion_example() {
        let s = GrassShape::new(1, 1, 2, 2).unwrap();
        let map = induced_grass_inclusion(&s, &mi(&s, &[1, 3])).unwrap();
        let ctx = map.target().clone();
        let images = map.images();
        let x1 = GrassmannElement::even_symbol(&ctx, 0);
        assert!(images[0].1.equals_exact(&x1));
        assert!(images.iter().any(|(_, z)| z.is_zero()));
    }
}
