//! Small matrix groups over finite fields and their actions on projective
//! points and nonzero vectors.
//!
//! The Hermitian form is the antidiagonal one,
//! `h(x, y) = x0·y2^q + x1·y1^q + x2·y0^q` over GF(q²), and the alternating
//! form is the standard `β(x, y) = Σ x_i y_{i+m} − x_{i+m} y_i` on GF(q)^{2m}.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldCtx, FieldDoc, FieldElem, GfError};
use crate::permgroup::{Perm, PermError, PermGroup};
use crate::weyl::is_prime_power;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrepError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0} (supported: 2, 3, 4)")]
    UnsupportedDimension(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("q = {0} is outside the supported range for this construction")]
    UnsupportedQ(u64),
    #[error("form requires {0}")]
    FormMismatch(&'static str),
    #[error("image of point {0} is not in the point set")]
    PointLeavesSet(usize),
    #[error("matrix closure exceeds {0} elements")]
    CapExceeded(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Square matrix, row-major, entries over one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    entries: Vec<FieldElem>,
}

impl Matrix {
    pub fn from_rows(ctx: &FieldCtx, rows: Vec<Vec<FieldElem>>) -> Result<Self, MatrepError> {
        let n = rows.len();
        if !(2..=4).contains(&n) {
            return Err(MatrepError::UnsupportedDimension(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrepError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for e in row {
                if !ctx.same_field(e) {
                    return Err(GfError::ContextMismatch.into());
                }
                entries.push(e);
            }
        }
        Ok(Matrix { n, entries })
    }

    /// Convenience constructor from prime-field integers.
    pub fn from_ints(ctx: &FieldCtx, rows: &[&[i64]]) -> Result<Self, MatrepError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| ctx.from_int(x)).collect())
            .collect();
        Self::from_rows(ctx, rows)
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        Self::scalar(ctx, n, ctx.one())
    }

    pub fn scalar(ctx: &FieldCtx, n: usize, lambda: FieldElem) -> Self {
        let mut entries = vec![ctx.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = lambda;
        }
        Matrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<FieldElem>> {
        self.entries.chunks(self.n).map(<[_]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Matrix, ctx: &FieldCtx) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ctx.zero();
                for l in 0..n {
                    acc = ctx.add(acc, ctx.mul(self.get(i, l), other.get(l, j)));
                }
                entries.push(acc);
            }
        }
        Matrix { n, entries }
    }

    /// `M·v` for a column vector `v`.
    pub fn apply(&self, v: &[FieldElem], ctx: &FieldCtx) -> Vec<FieldElem> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(ctx.zero(), |acc, j| ctx.add(acc, ctx.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        Matrix {
            n,
            entries: (0..n * n).map(|idx| self.get(idx % n, idx / n)).collect(),
        }
    }

    /// Entrywise Frobenius `x ↦ x^(p^m)`.
    pub fn frobenius(&self, ctx: &FieldCtx, m: u32) -> Matrix {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|&e| ctx.frobenius(e, m)).collect(),
        }
    }

    pub fn det(&self, ctx: &FieldCtx) -> FieldElem {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = ctx.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return ctx.zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = ctx.neg(det);
            }
            let pv = a[col * n + col];
            det = ctx.mul(det, pv);
            let pinv = ctx.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = ctx.mul(a[r * n + col], pinv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = ctx.sub(a[r * n + j], ctx.mul(factor, a[col * n + j]));
                }
            }
        }
        det
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Result<Matrix, MatrepError> {
        let n = self.n;
        let w = 2 * n;
        let mut a = vec![ctx.zero(); n * w];
        for i in 0..n {
            for j in 0..n {
                a[i * w + j] = self.get(i, j);
            }
            a[i * w + n + i] = ctx.one();
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * w + col].is_zero())
                .ok_or(MatrepError::Singular)?;
            for j in 0..w {
                a.swap(pivot * w + j, col * w + j);
            }
            let pinv = ctx.inv(a[col * w + col])?;
            for j in 0..w {
                a[col * w + j] = ctx.mul(a[col * w + j], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * w + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..w {
                    a[r * w + j] = ctx.sub(a[r * w + j], ctx.mul(factor, a[col * w + j]));
                }
            }
        }
        Ok(Matrix {
            n,
            entries: (0..n)
                .flat_map(|i| a[i * w + n..i * w + w].to_vec())
                .collect(),
        })
    }

    pub fn to_doc(&self, ctx: &FieldCtx) -> MatrixDoc {
        MatrixDoc {
            field: ctx.to_doc(),
            n: self.n,
            entries: self
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(|e| ctx.coeffs(e)).collect())
                .collect(),
        }
    }

    /// Parses a matrix document together with the field it names.
    pub fn from_doc(doc: &MatrixDoc) -> Result<(FieldCtx, Matrix), MatrepError> {
        let ctx = FieldCtx::from_doc(&doc.field)?;
        if doc.entries.len() != doc.n {
            return Err(MatrepError::DimensionMismatch {
                expected: doc.n,
                found: doc.entries.len(),
            });
        }
        let rows = doc
            .entries
            .iter()
            .map(|r| r.iter().map(|c| ctx.from_coeffs(c)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let m = Matrix::from_rows(&ctx, rows)?;
        Ok((ctx, m))
    }
}

/// `{"field": {p,k,modulus}, "n": int, "entries": [[coeff-arrays]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub field: FieldDoc,
    pub n: usize,
    pub entries: Vec<Vec<Vec<u32>>>,
}

/// Projective point with its first nonzero coordinate scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<FieldElem>,
}

impl ProjPoint {
    /// `None` for the zero vector.
    pub fn normalize(ctx: &FieldCtx, v: &[FieldElem]) -> Option<ProjPoint> {
        let lead = v.iter().find(|e| !e.is_zero())?;
        let s = ctx.inv(*lead).ok()?;
        Some(ProjPoint {
            coords: v.iter().map(|&e| ctx.mul(e, s)).collect(),
        })
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    fn key(&self) -> Vec<u32> {
        self.coords.iter().map(|e| e.code()).collect()
    }
}

/// Point list as an array of coordinate arrays, each coordinate a coefficient array.
pub fn points_to_doc(ctx: &FieldCtx, pts: &[ProjPoint]) -> Vec<Vec<Vec<u32>>> {
    pts.iter()
        .map(|p| p.coords.iter().map(|&e| ctx.coeffs(e)).collect())
        .collect()
}

fn all_vectors(ctx: &FieldCtx, len: usize) -> Vec<Vec<FieldElem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                ctx.elements().map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// All points of PG(n−1, s), normalized, sorted by coordinate codes.
pub fn proj_points(ctx: &FieldCtx, n: usize) -> Vec<ProjPoint> {
    let mut pts = Vec::new();
    for lead in 0..n {
        for tail in all_vectors(ctx, n - lead - 1) {
            let mut coords = vec![ctx.zero(); lead];
            coords.push(ctx.one());
            coords.extend(tail);
            pts.push(ProjPoint { coords });
        }
    }
    pts.sort();
    pts
}

/// All nonzero vectors of GF(s)^n in code order.
pub fn nonzero_vectors(ctx: &FieldCtx, n: usize) -> Vec<Vec<FieldElem>> {
    all_vectors(ctx, n)
        .into_iter()
        .filter(|v| v.iter().any(|e| !e.is_zero()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    HermitianAntidiagonal,
    SymplecticStandard,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormSpec {
    pub kind: FormKind,
    pub n: usize,
    /// Subfield size; only meaningful for the Hermitian kind.
    pub q: u64,
}

impl FormSpec {
    pub fn hermitian(q: u64) -> Self {
        FormSpec {
            kind: FormKind::HermitianAntidiagonal,
            n: 3,
            q,
        }
    }

    pub fn symplectic(n: usize) -> Self {
        FormSpec {
            kind: FormKind::SymplecticStandard,
            n,
            q: 0,
        }
    }

    fn validate(&self, ctx: &FieldCtx) -> Result<(), MatrepError> {
        match self.kind {
            FormKind::HermitianAntidiagonal => {
                if self.q.checked_mul(self.q) != Some(ctx.size()) {
                    return Err(MatrepError::FormMismatch("a field of size q²"));
                }
            }
            FormKind::SymplecticStandard => {
                if !self.n.is_multiple_of(2) {
                    return Err(MatrepError::FormMismatch("an even dimension"));
                }
            }
        }
        Ok(())
    }

    fn gram(&self, ctx: &FieldCtx, i: usize, j: usize) -> FieldElem {
        let n = self.n;
        match self.kind {
            FormKind::HermitianAntidiagonal => {
                if i + j == n - 1 {
                    ctx.one()
                } else {
                    ctx.zero()
                }
            }
            FormKind::SymplecticStandard => {
                let m = n / 2;
                if j == i + m {
                    ctx.one()
                } else if i == j + m {
                    ctx.from_int(-1)
                } else {
                    ctx.zero()
                }
            }
        }
    }

    fn conj(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        match self.kind {
            FormKind::HermitianAntidiagonal => ctx.frobenius(x, ctx.k() / 2),
            FormKind::SymplecticStandard => x,
        }
    }

    /// `Σ x_i G_ij σ(y_j)`.
    pub fn evaluate(&self, ctx: &FieldCtx, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        let mut acc = ctx.zero();
        for (i, &xi) in x.iter().enumerate().take(self.n) {
            for (j, &yj) in y.iter().enumerate().take(self.n) {
                let g = self.gram(ctx, i, j);
                if g.is_zero() {
                    continue;
                }
                acc = ctx.add(acc, ctx.mul(ctx.mul(xi, g), self.conj(ctx, yj)));
            }
        }
        acc
    }
}

/// Whether `m` preserves the form on every pair of basis vectors.
pub fn form_preserves(ctx: &FieldCtx, m: &Matrix, form: &FormSpec) -> Result<bool, MatrepError> {
    if m.n != form.n {
        return Err(MatrepError::DimensionMismatch {
            expected: form.n,
            found: m.n,
        });
    }
    form.validate(ctx)?;
    let cols: Vec<Vec<FieldElem>> = (0..m.n).map(|j| (0..m.n).map(|i| m.get(i, j)).collect()).collect();
    for i in 0..m.n {
        for j in 0..m.n {
            if form.evaluate(ctx, &cols[i], &cols[j]) != form.gram(ctx, i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_q(q: u64, supported: &[u64]) -> Result<(u64, u32), MatrepError> {
    if !supported.contains(&q) {
        return Err(MatrepError::UnsupportedQ(q));
    }
    is_prime_power(q).ok_or(MatrepError::UnsupportedQ(q))
}

/// GF(q²), the field carrying the Hermitian form for subfield size `q`.
pub fn hermitian_field(q: u64) -> Result<FieldCtx, MatrepError> {
    let (p, a) = check_q(q, &[2, 3, 4, 5])?;
    Ok(FieldCtx::new(p, 2 * a)?)
}

/// Isotropic points of the antidiagonal Hermitian form in PG(2, q²).
pub fn hermitian_isotropic_points(ctx: &FieldCtx, q: u64) -> Result<Vec<ProjPoint>, MatrepError> {
    check_q(q, &[2, 3, 4, 5])?;
    let form = FormSpec::hermitian(q);
    form.validate(ctx)?;
    Ok(proj_points(ctx, 3)
        .into_iter()
        .filter(|p| form.evaluate(ctx, &p.coords, &p.coords).is_zero())
        .collect())
}

/// Transvection, diagonal torus element and Weyl element of SL(2, q), `q = |ctx|`.
pub fn gen_sl2(ctx: &FieldCtx) -> Vec<Matrix> {
    let g = ctx.primitive_element();
    let g_inv = ctx.inv(g).expect("primitive element is nonzero");
    let (zero, one) = (ctx.zero(), ctx.one());
    vec![
        Matrix::from_rows(ctx, vec![vec![one, one], vec![zero, one]]).unwrap(),
        Matrix::from_rows(ctx, vec![vec![g, zero], vec![zero, g_inv]]).unwrap(),
        Matrix::from_rows(ctx, vec![vec![zero, one], vec![ctx.neg(one), zero]]).unwrap(),
    ]
}

/// Generators of SU(3, q) for the antidiagonal form: every form-preserving
/// upper unitriangular matrix plus the antidiagonal Weyl element.
pub fn gen_su3(ctx: &FieldCtx, q: u64) -> Result<Vec<Matrix>, MatrepError> {
    check_q(q, &[2, 3, 4])?;
    let form = FormSpec::hermitian(q);
    form.validate(ctx)?;
    let (zero, one) = (ctx.zero(), ctx.one());
    let mut gens = Vec::new();
    for a in ctx.elements() {
        for c in ctx.elements() {
            for b in ctx.elements() {
                let m = Matrix::from_rows(
                    ctx,
                    vec![vec![one, a, b], vec![zero, one, c], vec![zero, zero, one]],
                )?;
                if form_preserves(ctx, &m, &form)? {
                    gens.push(m);
                }
            }
        }
    }
    if gens.len() as u64 != q * q * q {
        return Err(MatrepError::Internal(format!(
            "found {} unitriangular isometries, expected q^3 = {}",
            gens.len(),
            q * q * q
        )));
    }
    gens.push(Matrix::from_ints(ctx, &[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]])?);
    Ok(gens)
}

/// Symplectic transvections `x ↦ x + β(x, v)·v` for `v` in the standard basis
/// and the all-ones vector, `q = |ctx|`.
pub fn gen_sp4(ctx: &FieldCtx) -> Result<Vec<Matrix>, MatrepError> {
    check_q(ctx.size(), &[2, 3])?;
    let form = FormSpec::symplectic(4);
    let mut vs: Vec<Vec<FieldElem>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect())
        .collect();
    vs.push(vec![ctx.one(); 4]);
    let basis: Vec<Vec<FieldElem>> = vs[..4].to_vec();
    let mut gens = Vec::new();
    for v in &vs {
        // column j is T(e_j)
        let cols: Vec<Vec<FieldElem>> = basis
            .iter()
            .map(|e| {
                let c = form.evaluate(ctx, e, v);
                e.iter().zip(v).map(|(&ei, &vi)| ctx.add(ei, ctx.mul(c, vi))).collect()
            })
            .collect();
        let rows = (0..4).map(|i| (0..4).map(|j| cols[j][i]).collect()).collect();
        gens.push(Matrix::from_rows(ctx, rows)?);
    }
    Ok(gens)
}

/// Index of normalized points, built once per point set.
pub struct PointIndex<'a> {
    points: &'a [ProjPoint],
    index: HashMap<Vec<u32>, u32>,
}

impl<'a> PointIndex<'a> {
    pub fn new(points: &'a [ProjPoint]) -> Self {
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.key(), i as u32))
            .collect();
        PointIndex { points, index }
    }

    pub fn position(&self, p: &ProjPoint) -> Option<u32> {
        self.index.get(&p.key()).copied()
    }

    /// Permutation `i ↦ index of normalize(M·pts[i])`.
    pub fn perm_of(&self, ctx: &FieldCtx, m: &Matrix) -> Result<Perm, MatrepError> {
        let mut images = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            if p.coords.len() != m.n {
                return Err(MatrepError::DimensionMismatch {
                    expected: m.n,
                    found: p.coords.len(),
                });
            }
            let img = ProjPoint::normalize(ctx, &m.apply(&p.coords, ctx))
                .ok_or(MatrepError::Singular)?;
            images.push(self.position(&img).ok_or(MatrepError::PointLeavesSet(i))?);
        }
        Perm::from_images(images).map_err(|_| MatrepError::Singular)
    }
}

pub fn mat_to_perm(ctx: &FieldCtx, m: &Matrix, pts: &[ProjPoint]) -> Result<Perm, MatrepError> {
    PointIndex::new(pts).perm_of(ctx, m)
}

/// Permutation group induced on `pts` by the projective action of `gens`.
pub fn projectivize(ctx: &FieldCtx, gens: &[Matrix], pts: &[ProjPoint]) -> Result<PermGroup, MatrepError> {
    let index = PointIndex::new(pts);
    let perms = gens
        .iter()
        .map(|m| index.perm_of(ctx, m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PermGroup::new(pts.len(), perms)?)
}

/// Faithful permutation representation on all nonzero vectors of GF(s)^n.
pub fn linear_action(ctx: &FieldCtx, gens: &[Matrix]) -> Result<PermGroup, MatrepError> {
    let n = gens.first().map(Matrix::n).ok_or(MatrepError::UnsupportedDimension(0))?;
    let vecs = nonzero_vectors(ctx, n);
    let index: HashMap<Vec<u32>, u32> = vecs
        .iter()
        .enumerate()
        .map(|(i, v)| (v.iter().map(|e| e.code()).collect(), i as u32))
        .collect();
    let mut perms = Vec::with_capacity(gens.len());
    for m in gens {
        let mut images = Vec::with_capacity(vecs.len());
        for v in &vecs {
            let key: Vec<u32> = m.apply(v, ctx).iter().map(|e| e.code()).collect();
            images.push(*index.get(&key).ok_or(MatrepError::Singular)?);
        }
        perms.push(Perm::from_images(images).map_err(|_| MatrepError::Singular)?);
    }
    Ok(PermGroup::new(vecs.len(), perms)?)
}

/// Order of the matrix group generated by `gens`, by breadth-first closure.
pub fn matrix_closure_order(ctx: &FieldCtx, gens: &[Matrix], cap: usize) -> Result<usize, MatrepError> {
    let n = gens.first().map(Matrix::n).ok_or(MatrepError::UnsupportedDimension(0))?;
    let id = Matrix::identity(ctx, n);
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.mul(&x, ctx);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(MatrepError::CapExceeded(cap));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len())
}
