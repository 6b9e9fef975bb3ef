//! Block supermatrices with the pseudo-unit (`1ν`) calculus.
//!
//! Rows `1..=k` are even and `k+1..=k+l` odd; columns `1..=m` even and
//! `m+1..=m+n` odd. A matrix is *standard* when the diagonal blocks hold even
//! entries and the off-diagonal blocks odd ones.
//!
//! The formal odd unit `1ν` may only appear as an entry of a pseudo-unit or of
//! a chart matrix. Every product touching it is absorbed on the spot:
//! `z·(1ν) = ν(z)`, `(1ν)·z = ν(z)` and `(1ν)(1ν) = 1`, so a product never
//! contains `1ν`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::superalgebra::{
    AlgebraContext, AlgebraError, EvalFailure, EvalTarget, Evaluator, GrassmannElement, Parity, RationalCoefficient,
    Substitution,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("body matrix is singular (det = 0){0}")]
    Singular(String),
    #[error("irreducible 1ν entry at ({row}, {col})")]
    IrreducibleOddUnit { row: usize, col: usize },
    #[error("column index {0} outside 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("matrix is not a square standard supermatrix")]
    NotSquareStandard,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Row and column parity counts of a supermatrix: `(k|l) × (m|n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperShape {
    pub row_even: usize,
    pub row_odd: usize,
    pub col_even: usize,
    pub col_odd: usize,
}

impl SuperShape {
    pub fn new(row_even: usize, row_odd: usize, col_even: usize, col_odd: usize) -> Self {
        SuperShape {
            row_even,
            row_odd,
            col_even,
            col_odd,
        }
    }

    /// The square shape `(k|l) × (k|l)`.
    pub fn square(even: usize, odd: usize) -> Self {
        Self::new(even, odd, even, odd)
    }

    pub fn rows(&self) -> usize {
        self.row_even + self.row_odd
    }

    pub fn cols(&self) -> usize {
        self.col_even + self.col_odd
    }

    /// Parity bit of zero-based row `r`.
    pub fn row_parity(&self, r: usize) -> u32 {
        u32::from(r >= self.row_even)
    }

    /// Parity bit of zero-based column `c`.
    pub fn col_parity(&self, c: usize) -> u32 {
        u32::from(c >= self.col_even)
    }

    /// Parity required of the entry at `(r, c)` in standard format.
    pub fn block_parity(&self, r: usize, c: usize) -> Parity {
        Parity::of_bit(self.row_parity(r) ^ self.col_parity(c))
    }

    pub fn is_square(&self) -> bool {
        self.row_even == self.col_even && self.row_odd == self.col_odd
    }
}

impl fmt::Display for SuperShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}|{})x({}|{})",
            self.row_even, self.row_odd, self.col_even, self.col_odd
        )
    }
}

#[derive(Clone, Debug)]
pub enum Entry {
    Zero,
    One,
    /// The formal odd unit `1ν`.
    OddUnit,
    Value(GrassmannElement),
}

impl Entry {
    /// Canonical entry for an element: zero and one get their shorthands.
    pub fn from_element(z: GrassmannElement) -> Entry {
        if z.is_zero() {
            Entry::Zero
        } else if z.is_one() {
            Entry::One
        } else {
            Entry::Value(z)
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Entry::Zero)
    }

    pub fn is_odd_unit(&self) -> bool {
        matches!(self, Entry::OddUnit)
    }

    /// The entry as an element; `None` for `1ν`.
    pub fn element(&self, ctx: &Arc<AlgebraContext>) -> Option<GrassmannElement> {
        match self {
            Entry::Zero => Some(GrassmannElement::zero(ctx)),
            Entry::One => Some(GrassmannElement::one(ctx)),
            Entry::OddUnit => None,
            Entry::Value(z) => Some(z.clone()),
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            Entry::Zero => Parity::Zero,
            Entry::One => Parity::Even,
            Entry::OddUnit => Parity::Odd,
            Entry::Value(z) => z.parity(),
        }
    }

    /// Exact comparison; `1ν` equals only itself.
    pub fn equals(&self, other: &Entry, ctx: &Arc<AlgebraContext>) -> bool {
        match (self, other) {
            (Entry::OddUnit, Entry::OddUnit) => true,
            (Entry::OddUnit, _) | (_, Entry::OddUnit) => false,
            _ => self.element(ctx).unwrap().equals_exact(&other.element(ctx).unwrap()),
        }
    }

    pub fn display(&self) -> String {
        match self {
            Entry::Zero => "0".into(),
            Entry::One => "1".into(),
            Entry::OddUnit => "1ν".into(),
            Entry::Value(z) => z.display(),
        }
    }
}

/// Product of two entries with `1ν` absorbed; `None` when the product is zero.
fn entry_product(a: &Entry, b: &Entry, ctx: &Arc<AlgebraContext>) -> Result<Option<GrassmannElement>, MatrixError> {
    use Entry::*;
    Ok(match (a, b) {
        (Zero, _) | (_, Zero) => None,
        (OddUnit, OddUnit) => Some(GrassmannElement::one(ctx)),
        (OddUnit, x) | (x, OddUnit) => Some(x.element(ctx).unwrap().nu()?),
        (One, x) | (x, One) => Some(x.element(ctx).unwrap()),
        (Value(x), Value(y)) => Some(x.try_mul(y)?),
    })
}

/// A dense supermatrix of [`Entry`] values over one algebra context.
#[derive(Clone)]
pub struct SuperMatrix {
    shape: SuperShape,
    ctx: Arc<AlgebraContext>,
    entries: Vec<Entry>,
}

impl SuperMatrix {
    pub fn zeros(shape: SuperShape, ctx: &Arc<AlgebraContext>) -> Self {
        SuperMatrix {
            shape,
            ctx: ctx.clone(),
            entries: vec![Entry::Zero; shape.rows() * shape.cols()],
        }
    }

    pub fn identity(even: usize, odd: usize, ctx: &Arc<AlgebraContext>) -> Self {
        let mut m = Self::zeros(SuperShape::square(even, odd), ctx);
        for i in 0..even + odd {
            m.set(i, i, Entry::One);
        }
        m
    }

    /// Builds from row-major entries.
    pub fn from_entries(
        shape: SuperShape,
        ctx: &Arc<AlgebraContext>,
        entries: Vec<Entry>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != shape.rows() * shape.cols() {
            return Err(MatrixError::Dimension(format!(
                "{} entries for shape {shape}",
                entries.len()
            )));
        }
        let entries = entries
            .into_iter()
            .map(|e| match e {
                Entry::Value(z) => Entry::from_element(z),
                other => other,
            })
            .collect();
        Ok(SuperMatrix {
            shape,
            ctx: ctx.clone(),
            entries,
        })
    }

    /// Builds from row-major elements.
    pub fn from_elements(
        shape: SuperShape,
        ctx: &Arc<AlgebraContext>,
        rows: Vec<Vec<GrassmannElement>>,
    ) -> Result<Self, MatrixError> {
        let entries = rows.into_iter().flatten().map(Entry::Value).collect();
        Self::from_entries(shape, ctx, entries)
    }

    pub fn shape(&self) -> SuperShape {
        self.shape
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.shape.rows()
    }

    pub fn cols(&self) -> usize {
        self.shape.cols()
    }

    /// Zero-based access.
    pub fn get(&self, r: usize, c: usize) -> &Entry {
        &self.entries[r * self.cols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, e: Entry) {
        let cols = self.cols();
        self.entries[r * cols + c] = match e {
            Entry::Value(z) => Entry::from_element(z),
            other => other,
        };
    }

    /// Zero-based access as an element; `None` for `1ν`.
    pub fn element(&self, r: usize, c: usize) -> Option<GrassmannElement> {
        self.get(r, c).element(&self.ctx)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn has_odd_unit(&self) -> bool {
        self.entries.iter().any(Entry::is_odd_unit)
    }

    /// Row-by-column product with `1ν` absorption.
    pub fn matmul(&self, other: &SuperMatrix) -> Result<SuperMatrix, MatrixError> {
        if self.cols() != other.rows() {
            return Err(MatrixError::Dimension(format!(
                "cannot multiply {} by {}",
                self.shape, other.shape
            )));
        }
        if !crate::superalgebra::same_context(&self.ctx, &other.ctx) {
            return Err(AlgebraError::ContextMismatch.into());
        }
        let shape = SuperShape::new(
            self.shape.row_even,
            self.shape.row_odd,
            other.shape.col_even,
            other.shape.col_odd,
        );
        let mut out = SuperMatrix::zeros(shape, &self.ctx);
        for r in 0..self.rows() {
            for c in 0..other.cols() {
                let mut acc: Option<GrassmannElement> = None;
                for t in 0..self.cols() {
                    if let Some(p) = entry_product(self.get(r, t), other.get(t, c), &self.ctx)? {
                        acc = Some(match acc {
                            None => p,
                            Some(a) => a.try_add(&p)?,
                        });
                    }
                }
                if let Some(a) = acc {
                    out.set(r, c, Entry::Value(a));
                }
            }
        }
        Ok(out)
    }

    /// Columns at the one-based `indices`, in their original order.
    pub fn minor(&self, indices: &[usize]) -> Result<SuperMatrix, MatrixError> {
        let cols = self.cols();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > cols) {
            return Err(MatrixError::IndexOutOfRange(bad, cols));
        }
        let even = indices.iter().filter(|&&i| i <= self.shape.col_even).count();
        let shape = SuperShape::new(self.shape.row_even, self.shape.row_odd, even, indices.len() - even);
        let mut entries = Vec::with_capacity(self.rows() * indices.len());
        for r in 0..self.rows() {
            for &i in indices {
                entries.push(self.get(r, i - 1).clone());
            }
        }
        Ok(SuperMatrix {
            shape,
            ctx: self.ctx.clone(),
            entries,
        })
    }

    /// Rows at the one-based `indices`, in their original order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<SuperMatrix, MatrixError> {
        let rows = self.rows();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > rows) {
            return Err(MatrixError::IndexOutOfRange(bad, rows));
        }
        let even = indices.iter().filter(|&&i| i <= self.shape.row_even).count();
        let shape = SuperShape::new(even, indices.len() - even, self.shape.col_even, self.shape.col_odd);
        let mut entries = Vec::with_capacity(self.cols() * indices.len());
        for &i in indices {
            for c in 0..self.cols() {
                entries.push(self.get(i - 1, c).clone());
            }
        }
        Ok(SuperMatrix {
            shape,
            ctx: self.ctx.clone(),
            entries,
        })
    }

    /// The same entries under a different parity labelling.
    pub fn with_shape(&self, shape: SuperShape) -> Result<SuperMatrix, MatrixError> {
        if shape.rows() != self.rows() || shape.cols() != self.cols() {
            return Err(MatrixError::Dimension(format!(
                "cannot relabel {} as {shape}",
                self.shape
            )));
        }
        Ok(SuperMatrix {
            shape,
            ctx: self.ctx.clone(),
            entries: self.entries.clone(),
        })
    }

    /// Every entry whose parity violates its block, as `(row, col, expected, found)`,
    /// zero-based.
    pub fn validate_standard(&self) -> Vec<StandardViolation> {
        let mut out = Vec::new();
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                let expected = self.shape.block_parity(r, c);
                let found = self.get(r, c).parity();
                if !found.fits(expected) {
                    out.push(StandardViolation {
                        row: r + 1,
                        col: c + 1,
                        expected,
                        found,
                    });
                }
            }
        }
        out
    }

    pub fn is_standard(&self) -> bool {
        self.validate_standard().is_empty()
    }

    /// Body matrix (odd-degree-zero coefficients) of a matrix without `1ν`.
    fn body(&self) -> Result<Vec<Vec<RationalCoefficient>>, MatrixError> {
        let n = self.cols();
        let mut out = Vec::with_capacity(self.rows());
        for r in 0..self.rows() {
            let mut row = Vec::with_capacity(n);
            for c in 0..n {
                let z = self
                    .element(r, c)
                    .ok_or(MatrixError::IrreducibleOddUnit { row: r + 1, col: c + 1 })?;
                row.push(z.body());
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Determinants of the even-even and odd-odd body blocks of a square
    /// standard matrix. Their product is nonzero exactly where the matrix is
    /// invertible.
    pub fn block_body_determinants(&self) -> Result<(RationalCoefficient, RationalCoefficient), MatrixError> {
        if !self.shape.is_square() {
            return Err(MatrixError::NotSquareStandard);
        }
        let body = self.body()?;
        let k = self.shape.row_even;
        let n = self.rows();
        let block = |lo: usize, hi: usize| -> Vec<Vec<RationalCoefficient>> {
            (lo..hi).map(|r| body[r][lo..hi].to_vec()).collect()
        };
        let de = determinant(block(0, k), &self.ctx);
        let dodd = determinant(block(k, n), &self.ctx);
        Ok((de, dodd))
    }

    /// Inverse of a square standard supermatrix:
    /// `(Σ_{j=0}^{q} (−B⁻¹S)^j) · B⁻¹` with `B` the body and `S` the soul.
    pub fn invert_even(&self) -> Result<SuperMatrix, MatrixError> {
        if !self.shape.is_square() {
            return Err(MatrixError::NotSquareStandard);
        }
        let n = self.rows();
        let body = self.body()?;
        let (de, dodd) = self.block_body_determinants()?;
        if de.is_zero() || dodd.is_zero() {
            let which = if de.is_zero() { "even" } else { "odd" };
            return Err(MatrixError::Singular(format!(" in the {which} block")));
        }
        let body_inv = invert_field(body.clone(), &self.ctx).ok_or_else(|| MatrixError::Singular(String::new()))?;
        let lift = |rows: &Vec<Vec<RationalCoefficient>>| -> SuperMatrix {
            let entries = rows
                .iter()
                .flatten()
                .map(|c| Entry::from_element(GrassmannElement::from_coefficient(&self.ctx, c.clone())))
                .collect();
            SuperMatrix {
                shape: self.shape,
                ctx: self.ctx.clone(),
                entries,
            }
        };
        let b_inv = lift(&body_inv);
        let b = lift(&body);
        let soul = self.sub(&b)?;
        let step = b_inv.matmul(&soul)?.neg();
        let mut acc = SuperMatrix::identity(self.shape.row_even, self.shape.row_odd, &self.ctx);
        let mut power = acc.clone();
        for _ in 0..self.ctx.odd_count() {
            power = power.matmul(&step)?;
            if power.entries.iter().all(Entry::is_zero) {
                break;
            }
            acc = acc.add(&power)?;
        }
        let _ = n;
        acc.matmul(&b_inv)
    }

    pub fn add(&self, other: &SuperMatrix) -> Result<SuperMatrix, MatrixError> {
        self.zip(other, |a, b| a.try_add(b))
    }

    pub fn sub(&self, other: &SuperMatrix) -> Result<SuperMatrix, MatrixError> {
        self.zip(other, |a, b| a.try_sub(b))
    }

    fn zip(
        &self,
        other: &SuperMatrix,
        f: impl Fn(&GrassmannElement, &GrassmannElement) -> Result<GrassmannElement, AlgebraError>,
    ) -> Result<SuperMatrix, MatrixError> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(MatrixError::Dimension(format!("{} vs {}", self.shape, other.shape)));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for (i, (a, b)) in self.entries.iter().zip(&other.entries).enumerate() {
            let (r, c) = (i / self.cols() + 1, i % self.cols() + 1);
            let a = a
                .element(&self.ctx)
                .ok_or(MatrixError::IrreducibleOddUnit { row: r, col: c })?;
            let b = b
                .element(&self.ctx)
                .ok_or(MatrixError::IrreducibleOddUnit { row: r, col: c })?;
            entries.push(Entry::from_element(f(&a, &b)?));
        }
        Ok(SuperMatrix {
            shape: self.shape,
            ctx: self.ctx.clone(),
            entries,
        })
    }

    pub fn neg(&self) -> SuperMatrix {
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                Entry::Zero => Entry::Zero,
                other => Entry::from_element(-other.element(&self.ctx).expect("no 1ν in negation")),
            })
            .collect();
        SuperMatrix {
            shape: self.shape,
            ctx: self.ctx.clone(),
            entries,
        }
    }

    /// Multiplies every entry by a scalar element from the left.
    pub fn scale(&self, z: &GrassmannElement) -> Result<SuperMatrix, MatrixError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let v = e
                .element(&self.ctx)
                .ok_or(MatrixError::IrreducibleOddUnit { row: 0, col: 0 })?;
            entries.push(Entry::from_element(z.try_mul(&v)?));
        }
        Ok(SuperMatrix {
            shape: self.shape,
            ctx: self.ctx.clone(),
            entries,
        })
    }

    /// Applies a coordinate substitution entrywise; `1ν` is kept.
    pub fn substitute(&self, s: &Substitution) -> Result<SuperMatrix, MatrixError> {
        let target = s.target().clone();
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(match e {
                Entry::Zero => Entry::Zero,
                Entry::One => Entry::One,
                Entry::OddUnit => Entry::OddUnit,
                Entry::Value(z) => Entry::from_element(s.apply(z)?),
            });
        }
        Ok(SuperMatrix {
            shape: self.shape,
            ctx: target,
            entries,
        })
    }

    /// Moves the matrix into an extension of its context.
    pub fn embed(&self, target: &Arc<AlgebraContext>) -> Result<SuperMatrix, MatrixError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(match e {
                Entry::Value(z) => Entry::Value(z.embed(target)?),
                other => other.clone(),
            });
        }
        Ok(SuperMatrix {
            shape: self.shape,
            ctx: target.clone(),
            entries,
        })
    }

    /// Exact entrywise equality (dimensions must agree; parity labels are ignored).
    pub fn equals_exact(&self, other: &SuperMatrix) -> bool {
        self.first_difference(other).is_none()
    }

    /// First zero-based `(row, col)` where the matrices differ; `(0, 0)` on a
    /// dimension mismatch.
    pub fn first_difference(&self, other: &SuperMatrix) -> Option<(usize, usize)> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Some((0, 0));
        }
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                if !self.get(r, c).equals(other.get(r, c), &self.ctx) {
                    return Some((r, c));
                }
            }
        }
        None
    }

    /// Evaluates every entry into another algebra; fails on `1ν`.
    pub fn evaluate<T: EvalTarget>(&self, ev: &mut Evaluator<'_, T>) -> Result<Vec<T::Elem>, EvalFailure> {
        self.entries
            .iter()
            .map(|e| match e {
                Entry::OddUnit => Err(EvalFailure::Singular),
                other => ev.element(&other.element(&self.ctx).unwrap()),
            })
            .collect()
    }

    pub fn display(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.get(r, c).display()).collect())
            .collect();
        let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        let mut out = String::new();
        for (r, row) in cells.iter().enumerate() {
            if r == self.shape.row_even && r > 0 {
                out.push_str(&"-".repeat((width + 3) * self.cols()));
                out.push('\n');
            }
            for (c, cell) in row.iter().enumerate() {
                if c == self.shape.col_even && c > 0 {
                    out.push_str("; ");
                }
                out.push_str(&format!("{cell:>width$}  "));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\n{}", self.shape, self.display())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardViolation {
    pub row: usize,
    pub col: usize,
    pub expected: Parity,
    pub found: Parity,
}

/// Pseudo-unit `id_I` for the multi-index `indices` (one-based columns of
/// an ambient `(k|l)×(m|n)` shape): slot `a` holds `1` when row `a` and
/// column `i_a` have the same parity, `1ν` otherwise.
pub fn pseudo_unit(
    indices: &[usize],
    ambient: SuperShape,
    ctx: &Arc<AlgebraContext>,
) -> Result<SuperMatrix, MatrixError> {
    let size = ambient.rows();
    if indices.len() != size {
        return Err(MatrixError::Dimension(format!(
            "multi-index of length {} for {} rows",
            indices.len(),
            size
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > ambient.cols()) {
        return Err(MatrixError::IndexOutOfRange(bad, ambient.cols()));
    }
    let mut m = SuperMatrix::zeros(SuperShape::square(ambient.row_even, ambient.row_odd), ctx);
    for (a, &i) in indices.iter().enumerate() {
        let same = ambient.row_parity(a) == ambient.col_parity(i - 1);
        m.set(a, a, if same { Entry::One } else { Entry::OddUnit });
    }
    Ok(m)
}

/// Determinant over the rational-function field by Gaussian elimination.
pub fn determinant(mut a: Vec<Vec<RationalCoefficient>>, ctx: &AlgebraContext) -> RationalCoefficient {
    let n = a.len();
    let mut det = RationalCoefficient::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return RationalCoefficient::zero();
        };
        if p != col {
            a.swap(p, col);
            det = det.neg();
        }
        let pivot = a[col][col].clone();
        det = det.mul(&pivot, ctx);
        let pinv = pivot.inv(ctx).expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].mul(&pinv, ctx);
            for c in col..n {
                let v = a[r][c].sub(&f.mul(&a[col][c], ctx), ctx);
                a[r][c] = v;
            }
        }
    }
    det
}

/// Gauss-Jordan inverse over the rational-function field.
fn invert_field(mut a: Vec<Vec<RationalCoefficient>>, ctx: &AlgebraContext) -> Option<Vec<Vec<RationalCoefficient>>> {
    let n = a.len();
    let mut inv: Vec<Vec<RationalCoefficient>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        RationalCoefficient::one()
                    } else {
                        RationalCoefficient::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        inv.swap(p, col);
        let pinv = a[col][col].inv(ctx)?;
        for c in 0..n {
            a[col][c] = a[col][c].mul(&pinv, ctx);
            inv[col][c] = inv[col][c].mul(&pinv, ctx);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let v = a[r][c].sub(&f.mul(&a[col][c], ctx), ctx);
                a[r][c] = v;
                let w = inv[r][c].sub(&f.mul(&inv[col][c], ctx), ctx);
                inv[r][c] = w;
            }
        }
    }
    Some(inv)
}
