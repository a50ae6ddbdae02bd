// SPDX-License-Identifier: Apache-2.0

//! Sensitivity spaces of contingency-table queries and the geometry built on
//! them: ℓp sensitivities, spans, projections, hull membership and gauge
//! norms.

pub mod lp;

use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::dataspace::{hamming_distance, DataspaceSpec, Dataset};
use crate::error::{domain, Error, Result};

/// Relative rank tolerance for Gram–Schmidt.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    BruteForce { radius: usize, dataspace: String },
    ContingencyAnalytic { r: usize, c: usize },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivitySpace {
    /// Deduplicated, sorted lexicographically.
    pub vectors: Vec<Vec<f64>>,
    pub ambient_dim: usize,
    pub provenance: Provenance,
}

fn sort_dedup(vs: &mut Vec<Vec<f64>>) {
    vs.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    vs.dedup();
}

impl SensitivitySpace {
    pub fn new(mut vectors: Vec<Vec<f64>>, ambient_dim: usize, provenance: Provenance) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::Shape(format!("all vectors must have dimension {ambient_dim}")));
        }
        sort_dedup(&mut vectors);
        Ok(Self {
            vectors,
            ambient_dim,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        self.vectors.iter().any(|u| u.as_slice() == v)
    }

    pub fn is_subset_of(&self, other: &SensitivitySpace) -> bool {
        self.vectors.iter().all(|v| other.contains(v))
    }

    /// Same vector set, ignoring provenance.
    pub fn same_vectors(&self, other: &SensitivitySpace) -> bool {
        self.vectors == other.vectors
    }

    pub fn is_symmetric(&self) -> bool {
        self.vectors
            .iter()
            .all(|v| self.contains(&v.iter().map(|x| -x).collect::<Vec<_>>()))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.vectors.iter().filter(|v| v.iter().any(|&x| x != 0.0))
    }

    /// One vector per line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for v in &self.vectors {
            wr.serialize(v)?;
        }
        wr.flush().map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }
}

/// Cell counts of a two-way table built from two features of a dataset,
/// vectorised row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableQuery {
    pub row_feature: usize,
    pub col_feature: usize,
}

impl Default for TableQuery {
    fn default() -> Self {
        Self {
            row_feature: 0,
            col_feature: 1,
        }
    }
}

impl TableQuery {
    pub fn shape(&self, space: &DataspaceSpec) -> Result<(usize, usize)> {
        let p = space.p();
        if self.row_feature >= p || self.col_feature >= p || self.row_feature == self.col_feature {
            return domain(format!(
                "table query features ({}, {}) invalid for p = {p}",
                self.row_feature, self.col_feature
            ));
        }
        Ok((
            space.levels[self.row_feature] as usize,
            space.levels[self.col_feature] as usize,
        ))
    }

    pub fn eval(&self, space: &DataspaceSpec, x: &Dataset) -> Result<Vec<f64>> {
        let (r, c) = self.shape(space)?;
        let mut out = vec![0.0; r * c];
        for row in &x.rows {
            let i = row[self.row_feature] as usize - 1;
            let j = row[self.col_feature] as usize - 1;
            out[i * c + j] += 1.0;
        }
        Ok(out)
    }
}

/// `{φ(X) − φ(X′)}` over ordered pairs of `subset` at Hamming distance at most
/// `radius` (including `X = X′`).
pub fn brute_force_sensitivity_space(
    space: &DataspaceSpec,
    subset: &[Dataset],
    query: &TableQuery,
    radius: usize,
) -> Result<SensitivitySpace> {
    if radius == 0 {
        return domain("radius must be >= 1");
    }
    let (r, c) = query.shape(space)?;
    let values = subset
        .iter()
        .map(|x| query.eval(space, x))
        .collect::<Result<Vec<_>>>()?;
    let mut vs = Vec::new();
    for (i, x) in subset.iter().enumerate() {
        for (j, y) in subset.iter().enumerate() {
            if hamming_distance(x, y)? <= radius {
                vs.push(values[i].iter().zip(&values[j]).map(|(a, b)| a - b).collect());
            }
        }
    }
    SensitivitySpace::new(
        vs,
        r * c,
        Provenance::BruteForce {
            radius,
            dataspace: space.label(),
        },
    )
}

/// Margin-preserving swaps: `+1` at `(i,j)` and `(k,l)`, `−1` at `(i,l)` and
/// `(k,j)` for `i ≠ k`, `j ≠ l`, plus zero.
pub fn contingency_s_semi(r: usize, c: usize) -> Result<SensitivitySpace> {
    if r < 2 || c < 2 {
        return domain(format!("table needs r, c >= 2, got {r}x{c}"));
    }
    let mut vs = vec![vec![0.0; r * c]];
    for i in 0..r {
        for k in 0..r {
            for j in 0..c {
                for l in 0..c {
                    if i == k || j == l {
                        continue;
                    }
                    let mut v = vec![0.0; r * c];
                    v[i * c + j] += 1.0;
                    v[k * c + l] += 1.0;
                    v[i * c + l] -= 1.0;
                    v[k * c + j] -= 1.0;
                    vs.push(v);
                }
            }
        }
    }
    SensitivitySpace::new(vs, r * c, Provenance::ContingencyAnalytic { r, c })
}

/// Single-record replacement without invariants: `e_a − e_b`, plus zero.
pub fn contingency_s_dp(r: usize, c: usize) -> Result<SensitivitySpace> {
    if r < 1 || c < 1 {
        return domain("table needs r, c >= 1");
    }
    let d = r * c;
    let mut vs = vec![vec![0.0; d]];
    for a in 0..d {
        for b in 0..d {
            if a != b {
                let mut v = vec![0.0; d];
                v[a] = 1.0;
                v[b] = -1.0;
                vs.push(v);
            }
        }
    }
    SensitivitySpace::new(vs, d, Provenance::Custom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
    LInf,
}

impl Norm {
    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::LInf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "l1" => Ok(Norm::L1),
            "2" | "l2" => Ok(Norm::L2),
            "inf" | "linf" => Ok(Norm::LInf),
            other => Err(Error::Parse(format!("unknown norm {other:?}"))),
        }
    }
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::LInf => "linf",
        })
    }
}

/// `max_{u ∈ S} ‖u‖_p`.
pub fn lp_sensitivity(s: &SensitivitySpace, p: Norm) -> Result<f64> {
    if s.is_empty() {
        return domain("sensitivity space is empty");
    }
    Ok(s.vectors.iter().map(|v| p.of(v)).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalBasis {
    pub vectors: Vec<Vec<f64>>,
    pub ambient_dim: usize,
}

impl OrthonormalBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates `Uᵀv`.
    pub fn coords(&self, v: &[f64]) -> Vec<f64> {
        self.vectors.iter().map(|u| dot(u, v)).collect()
    }

    /// `U θ`.
    pub fn embed(&self, theta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient_dim];
        for (u, &t) in self.vectors.iter().zip(theta) {
            for (o, &ui) in out.iter_mut().zip(u) {
                *o += t * ui;
            }
        }
        out
    }

    /// `‖v − UUᵀv‖₂`.
    pub fn residual_norm(&self, v: &[f64]) -> f64 {
        let back = self.embed(&self.coords(v));
        v.iter().zip(&back).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis of `span(S)` by modified Gram–Schmidt with pivoting on
/// the largest residual. Each basis vector's first nonzero entry is positive.
pub fn span_basis(s: &SensitivitySpace, tol: f64) -> OrthonormalBasis {
    let mut work: Vec<Vec<f64>> = s.vectors.clone();
    let scale = work.iter().map(|v| Norm::L2.of(v)).fold(0.0, f64::max);
    let mut basis = Vec::new();
    if scale == 0.0 {
        return OrthonormalBasis {
            vectors: basis,
            ambient_dim: s.ambient_dim,
        };
    }
    loop {
        let (idx, norm) = work
            .iter()
            .enumerate()
            .map(|(i, v)| (i, Norm::L2.of(v)))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if work.is_empty() || norm < tol * scale {
            break;
        }
        let mut u: Vec<f64> = work.swap_remove(idx).iter().map(|x| x / norm).collect();
        if u.iter().find(|x| x.abs() > tol).is_some_and(|&x| x < 0.0) {
            u.iter_mut().for_each(|x| *x = -*x);
        }
        for v in work.iter_mut() {
            let proj = dot(v, &u);
            for (vi, ui) in v.iter_mut().zip(&u) {
                *vi -= proj * ui;
            }
        }
        basis.push(u);
    }
    OrthonormalBasis {
        vectors: basis,
        ambient_dim: s.ambient_dim,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionMatrix {
    pub rows: Vec<Vec<f64>>,
}

impl ProjectionMatrix {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.rows.iter().enumerate().map(|(i, r)| r[i]).sum()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for r in &self.rows {
            wr.serialize(r)?;
        }
        wr.flush().map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }
}

/// `P = Σ uᵢuᵢᵀ`.
pub fn projection_matrix(b: &OrthonormalBasis, d: usize) -> Result<ProjectionMatrix> {
    if b.vectors.iter().any(|u| u.len() != d) {
        return Err(Error::Shape(format!("basis vectors are not {d}-dimensional")));
    }
    let mut rows = vec![vec![0.0; d]; d];
    for u in &b.vectors {
        for i in 0..d {
            for j in 0..d {
                rows[i][j] += u[i] * u[j];
            }
        }
    }
    Ok(ProjectionMatrix { rows })
}

/// Is `v` a convex combination of the vectors of `S`?
pub fn hull_membership(s: &SensitivitySpace, v: &[f64], tol: f64) -> Result<bool> {
    if s.is_empty() {
        return domain("sensitivity space is empty");
    }
    if v.len() != s.ambient_dim {
        return Err(Error::Shape(format!("point has dimension {}, expected {}", v.len(), s.ambient_dim)));
    }
    let basis = span_basis(s, RANK_TOL);
    if basis.residual_norm(v) > tol.max(1e-9) * (1.0 + Norm::L2.of(v)) {
        return Ok(false);
    }
    let verts: Vec<Vec<f64>> = s.vectors.iter().map(|u| basis.coords(u)).collect();
    lp::in_convex_hull(&verts, &basis.coords(v), tol)
}

/// Gauge (Minkowski) norm of `v` with respect to `hull(S)`; `+∞` when `v` is
/// outside `span(S)`.
pub fn gauge_norm(s: &SensitivitySpace, v: &[f64]) -> Result<f64> {
    if s.is_empty() {
        return domain("sensitivity space is empty");
    }
    if v.len() != s.ambient_dim {
        return Err(Error::Shape(format!("point has dimension {}, expected {}", v.len(), s.ambient_dim)));
    }
    let basis = span_basis(s, RANK_TOL);
    if basis.residual_norm(v) > 1e-9 * (1.0 + Norm::L2.of(v)) {
        return Ok(f64::INFINITY);
    }
    let verts: Vec<Vec<f64>> = s.nonzero().map(|u| basis.coords(u)).collect();
    let theta = basis.coords(v);
    if theta.iter().all(|&t| t == 0.0) || verts.is_empty() {
        return Ok(if Norm::L2.of(v) <= 1e-12 { 0.0 } else { f64::INFINITY });
    }
    Ok(lp::conic_gauge(&verts, &theta, 1e-12)?.unwrap_or(f64::INFINITY))
}

/// Numerical rank of a set of vectors.
pub fn rank(vectors: &[Vec<f64>], dim: usize) -> usize {
    let s = SensitivitySpace {
        vectors: vectors.to_vec(),
        ambient_dim: dim,
        provenance: Provenance::Custom,
    };
    span_basis(&s, RANK_TOL).dim()
}
