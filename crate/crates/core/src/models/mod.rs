//! Matrix models of |1|-graded Lie algebras `g = g_-1 + g_0 + g_1`.
//!
//! A [`GradedModel`] owns the degree-split basis of one catalog algebra, its
//! structure constants in that basis, the Killing form, the grading element
//! and the Killing-dual basis of `g_1`. All later engines work in the
//! coordinates fixed here: the full basis is `basis_neg1 ++ basis_0 ++
//! basis_1`.

mod catalog;
pub mod quaternion;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, solve, Mat, SparseMat, SparseVec};
use crate::par;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Projective,
    Conformal,
    Grassmannian,
    Quaternionic,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Projective => "projective",
            Family::Conformal => "conformal",
            Family::Grassmannian => "grassmannian",
            Family::Quaternionic => "quaternionic",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "projective" => Ok(Family::Projective),
            "conformal" => Ok(Family::Conformal),
            "grassmannian" => Ok(Family::Grassmannian),
            "quaternionic" => Ok(Family::Quaternionic),
            _ => Err(format!("unknown family {s:?}")),
        }
    }
}

/// A family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelSpec {
    /// `sl(m+1, R)`, projective structures in dimension `m`.
    Projective { m: usize },
    /// `o(p+1, q+1)`, conformal structures of signature `(p, q)`.
    Conformal { p: usize, q: usize },
    /// `sl(p+q, R)` split `p | q`, almost Grassmannian structures.
    Grassmannian { p: usize, q: usize },
    /// `sl(m+1, H)`, almost quaternionic structures in dimension `4m`.
    Quaternionic { m: usize },
}

impl ModelSpec {
    pub fn family(&self) -> Family {
        match self {
            ModelSpec::Projective { .. } => Family::Projective,
            ModelSpec::Conformal { .. } => Family::Conformal,
            ModelSpec::Grassmannian { .. } => Family::Grassmannian,
            ModelSpec::Quaternionic { .. } => Family::Quaternionic,
        }
    }

    pub fn params(&self) -> Params {
        match *self {
            ModelSpec::Projective { m } | ModelSpec::Quaternionic { m } => Params {
                m: Some(m),
                p: None,
                q: None,
            },
            ModelSpec::Conformal { p, q } | ModelSpec::Grassmannian { p, q } => Params {
                m: None,
                p: Some(p),
                q: Some(q),
            },
        }
    }

    /// Group used by default: the choices under which the homogeneous models
    /// are symmetric.
    pub fn default_group(&self) -> GroupVariant {
        match self.family() {
            Family::Projective | Family::Grassmannian => GroupVariant::PGl,
            Family::Conformal => GroupVariant::O,
            Family::Quaternionic => GroupVariant::PGlH,
        }
    }

    pub fn allowed_groups(&self) -> &'static [GroupVariant] {
        match self.family() {
            Family::Projective | Family::Grassmannian => &[GroupVariant::Sl, GroupVariant::PGl],
            Family::Conformal => &[GroupVariant::O, GroupVariant::PO],
            Family::Quaternionic => &[GroupVariant::PGlH],
        }
    }

    fn validate(&self) -> Result<()> {
        let fail = |reason: &str| {
            Err(Error::UnsupportedParams {
                spec: *self,
                reason: reason.to_string(),
            })
        };
        match *self {
            ModelSpec::Projective { m } if m < 2 => fail("projective needs m >= 2"),
            ModelSpec::Conformal { p, q } if p + q < 3 => fail("conformal needs p + q >= 3"),
            ModelSpec::Grassmannian { p, q } if p < 2 || q < 2 => {
                fail("grassmannian needs p >= 2 and q >= 2")
            }
            ModelSpec::Quaternionic { m } if m < 1 => fail("quaternionic needs m >= 1"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Projective { m } => write!(f, "projective(m={m})"),
            ModelSpec::Conformal { p, q } => write!(f, "conformal(p={p},q={q})"),
            ModelSpec::Grassmannian { p, q } => write!(f, "grassmannian(p={p},q={q})"),
            ModelSpec::Quaternionic { m } => write!(f, "quaternionic(m={m})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
}

/// Choice of Lie group integrating the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GroupVariant {
    /// Special linear group, parabolic restricted to its identity component.
    Sl,
    /// Projective general linear group.
    PGl,
    /// Full orthogonal group of the form.
    O,
    /// Orthogonal group modulo its center `{I, -I}`.
    PO,
    /// Quaternionic projective general linear group.
    PGlH,
}

impl fmt::Display for GroupVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupVariant::Sl => "Sl",
            GroupVariant::PGl => "PGl",
            GroupVariant::O => "O",
            GroupVariant::PO => "PO",
            GroupVariant::PGlH => "PGlH",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "Sl" | "SL" | "sl" => Ok(GroupVariant::Sl),
            "PGl" | "PGL" | "pgl" => Ok(GroupVariant::PGl),
            "O" | "o" => Ok(GroupVariant::O),
            "PO" | "po" => Ok(GroupVariant::PO),
            "PGlH" | "PGLH" | "pglh" => Ok(GroupVariant::PGlH),
            _ => Err(format!("unknown group {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintKind {
    /// `det = 1` and the determinant of the lower diagonal block positive.
    SpecialLinearConnected,
    /// Invertible, modulo nonzero scalars.
    ProjectiveQuotient,
    /// `A Q A^T = Q` for the stored form `Q`.
    OrthogonalJ,
    /// `A Q A^T = Q` modulo `{I, -I}`.
    ProjectiveOrthogonalJ,
    /// Quaternion-linear and invertible, modulo nonzero real scalars.
    QuaternionicQuotient,
}

#[derive(Debug, Clone)]
pub struct GroupConstraints {
    pub kind: ConstraintKind,
    pub form: Option<Mat>,
    /// Matrices a quaternion-linear map must commute with.
    pub complex_structures: Vec<Mat>,
    /// Ambient rows/columns of the lower diagonal block (the `D` in
    /// `[[d, W], [0, D]]`).
    pub lower_block: Range<usize>,
}

impl GroupConstraints {
    pub fn is_quotient(&self) -> bool {
        matches!(
            self.kind,
            ConstraintKind::ProjectiveQuotient
                | ConstraintKind::ProjectiveOrthogonalJ
                | ConstraintKind::QuaternionicQuotient
        )
    }
}

/// An element of a model, stored as its ambient matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    pub matrix: Mat,
    pub spec: ModelSpec,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn scale(&self, s: &Rational) -> AlgebraElement {
        AlgebraElement {
            matrix: self.matrix.scale(s),
            spec: self.spec,
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        same_model(self, other)?;
        Ok(AlgebraElement {
            matrix: &self.matrix + &other.matrix,
            spec: self.spec,
        })
    }
}

fn same_model(x: &AlgebraElement, y: &AlgebraElement) -> Result<()> {
    if x.spec != y.spec {
        return Err(Error::ModelMismatch {
            left: x.spec,
            right: y.spec,
        });
    }
    Ok(())
}

/// JSON descriptor emitted by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct ModelDescriptor {
    pub family: Family,
    pub params: Params,
    pub ambient_size: usize,
    pub group: GroupVariant,
    pub dims: Dims,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub neg1: usize,
    pub zero: usize,
    pub one: usize,
}

/// Results of the exhaustive structural checks on a model.
#[derive(Debug, Clone, Default, Serialize)]
pub struct StructureReport {
    pub basis_in_algebra: bool,
    pub grading_compatible: bool,
    pub grading_element_ok: bool,
    pub jacobi_failures: usize,
    pub killing_invariance_failures: usize,
    pub pairing_nondegenerate: bool,
    pub grading_orthogonal: bool,
    pub complex_structures_ok: bool,
}

impl StructureReport {
    pub fn all_ok(&self) -> bool {
        self.basis_in_algebra
            && self.grading_compatible
            && self.grading_element_ok
            && self.jacobi_failures == 0
            && self.killing_invariance_failures == 0
            && self.pairing_nondegenerate
            && self.grading_orthogonal
            && self.complex_structures_ok
    }
}

#[derive(Debug, Clone)]
pub struct GradedModel {
    pub spec: ModelSpec,
    pub ambient_size: usize,
    pub basis_neg1: Vec<Mat>,
    pub basis_0: Vec<Mat>,
    pub basis_1: Vec<Mat>,
    pub group: GroupVariant,
    pub group_constraints: GroupConstraints,
    pub grading_element: Mat,
    signature: Mat,
    // Coordinates: c = x[pivots] * coord_inverse.
    coord_pivots: Vec<usize>,
    coord_inverse: Mat,
    // brackets[a][b] = coordinates of [B_a, B_b].
    brackets: Vec<Vec<SparseVec>>,
    killing: Mat,
    pairing_scale: Rational,
    // Full-basis coordinates of the dual basis Z^j of g_1.
    dual_g1: Vec<Vec<Rational>>,
}

/// Builds a catalog model with its default group.
pub fn build_model(spec: ModelSpec) -> Result<GradedModel> {
    spec.validate()?;
    let raw = match spec {
        ModelSpec::Projective { m } => catalog::projective(m),
        ModelSpec::Conformal { p, q } => catalog::conformal(p, q),
        ModelSpec::Grassmannian { p, q } => catalog::grassmannian(p, q),
        ModelSpec::Quaternionic { m } => catalog::quaternionic(m),
    };
    let lower_block = match spec {
        ModelSpec::Projective { m } => 1..m + 1,
        ModelSpec::Conformal { p, q } => 1..p + q + 1,
        ModelSpec::Grassmannian { p, q } => p..p + q,
        ModelSpec::Quaternionic { m } => 4..4 * (m + 1),
    };
    let group = spec.default_group();
    let constraints = GroupConstraints {
        kind: constraint_kind(group),
        form: raw.form.clone(),
        complex_structures: raw.complex_structures.clone(),
        lower_block,
    };
    GradedModel::assemble(
        spec,
        raw.ambient,
        raw.neg1,
        raw.zero,
        raw.one,
        raw.signature,
        group,
        constraints,
        Rational::one(),
    )
}

fn constraint_kind(g: GroupVariant) -> ConstraintKind {
    match g {
        GroupVariant::Sl => ConstraintKind::SpecialLinearConnected,
        GroupVariant::PGl => ConstraintKind::ProjectiveQuotient,
        GroupVariant::O => ConstraintKind::OrthogonalJ,
        GroupVariant::PO => ConstraintKind::ProjectiveOrthogonalJ,
        GroupVariant::PGlH => ConstraintKind::QuaternionicQuotient,
    }
}

impl GradedModel {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        spec: ModelSpec,
        ambient_size: usize,
        basis_neg1: Vec<Mat>,
        basis_0: Vec<Mat>,
        basis_1: Vec<Mat>,
        signature: Mat,
        group: GroupVariant,
        group_constraints: GroupConstraints,
        pairing_scale: Rational,
    ) -> Result<Self> {
        assert!(!basis_neg1.is_empty(), "g_-1 must be nonzero");
        let full: Vec<&Mat> = basis_neg1.iter().chain(&basis_0).chain(&basis_1).collect();
        let dim = full.len();
        let flat = Mat::from_rows(full.iter().map(|b| b.vectorize()).collect());
        let (_, pivots) = flat.rref_with_pivots();
        assert_eq!(pivots.len(), dim, "catalog basis is linearly dependent");
        let mut sub = Mat::zeros(dim, dim);
        for (r, b) in full.iter().enumerate() {
            for (c, &p) in pivots.iter().enumerate() {
                sub[(r, c)] = b.entries()[p].clone();
            }
        }
        let coord_inverse = sub.inverse().expect("pivot submatrix is invertible");

        let mut model = GradedModel {
            spec,
            ambient_size,
            basis_neg1,
            basis_0,
            basis_1,
            group,
            group_constraints,
            grading_element: Mat::zeros(ambient_size, ambient_size),
            signature,
            coord_pivots: pivots,
            coord_inverse,
            brackets: Vec::new(),
            killing: Mat::zeros(0, 0),
            pairing_scale,
            dual_g1: Vec::new(),
        };

        let brackets: Vec<Vec<SparseVec>> = {
            let m = &model;
            par::map_range(dim, |a| {
                (0..dim)
                    .map(|b| {
                        let br = m.basis(a).commutator(m.basis(b));
                        sparse(&m.coords(&br).expect("bracket closes in the algebra"))
                    })
                    .collect()
            })
        };
        model.brackets = brackets;
        model.killing = model.compute_killing();
        model.grading_element = model.solve_grading_element();
        model.dual_g1 = model.compute_dual_g1()?;
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.basis_neg1.len() + self.basis_0.len() + self.basis_1.len()
    }

    pub fn dims(&self) -> Dims {
        Dims {
            neg1: self.basis_neg1.len(),
            zero: self.basis_0.len(),
            one: self.basis_1.len(),
        }
    }

    /// Index range of the degree-`deg` basis inside the full basis.
    pub fn range(&self, deg: i32) -> Range<usize> {
        let (a, b) = (self.basis_neg1.len(), self.basis_0.len());
        match deg {
            -1 => 0..a,
            0 => a..a + b,
            1 => a + b..self.dim(),
            _ => 0..0,
        }
    }

    pub fn degree_of(&self, idx: usize) -> i32 {
        let (a, b) = (self.basis_neg1.len(), self.basis_0.len());
        if idx < a {
            -1
        } else if idx < a + b {
            0
        } else {
            1
        }
    }

    pub fn basis(&self, idx: usize) -> &Mat {
        let (a, b) = (self.basis_neg1.len(), self.basis_0.len());
        if idx < a {
            &self.basis_neg1[idx]
        } else if idx < a + b {
            &self.basis_0[idx - a]
        } else {
            &self.basis_1[idx - a - b]
        }
    }

    pub fn basis_element(&self, idx: usize) -> AlgebraElement {
        self.wrap(self.basis(idx).clone())
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor {
            family: self.spec.family(),
            params: self.spec.params(),
            ambient_size: self.ambient_size,
            group: self.group,
            dims: self.dims(),
        }
    }

    fn wrap(&self, matrix: Mat) -> AlgebraElement {
        AlgebraElement {
            matrix,
            spec: self.spec,
        }
    }

    fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.spec != self.spec {
            return Err(Error::ModelMismatch {
                left: self.spec,
                right: x.spec,
            });
        }
        Ok(())
    }

    /// Wraps a matrix after checking it lies in the algebra.
    pub fn element(&self, matrix: Mat) -> Result<AlgebraElement> {
        self.coords(&matrix)?;
        Ok(self.wrap(matrix))
    }

    /// Coordinates in the full basis; fails if the matrix is outside the span.
    pub fn coords(&self, m: &Mat) -> Result<Vec<Rational>> {
        let n = self.ambient_size;
        if m.rows() != n || m.cols() != n {
            return Err(Error::Shape {
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        let dim = self.dim();
        let entries = m.entries();
        let mut c = vec![Rational::zero(); dim];
        for (i, &p) in self.coord_pivots.iter().enumerate() {
            let x = &entries[p];
            if x.is_zero() {
                continue;
            }
            for (j, cj) in c.iter_mut().enumerate() {
                let t = &self.coord_inverse[(i, j)];
                if !t.is_zero() {
                    *cj += x * t;
                }
            }
        }
        if &self.from_coords(&c) != m {
            return Err(Error::NotInAlgebra(self.spec));
        }
        Ok(c)
    }

    pub fn from_coords(&self, c: &[Rational]) -> Mat {
        assert_eq!(c.len(), self.dim());
        let n = self.ambient_size;
        let mut m = Mat::zeros(n, n);
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let b = self.basis(i);
            for r in 0..n {
                for col in 0..n {
                    let v = &b[(r, col)];
                    if !v.is_zero() {
                        m[(r, col)] += ci * v;
                    }
                }
            }
        }
        m
    }

    pub fn element_from_coords(&self, c: &[Rational]) -> AlgebraElement {
        self.wrap(self.from_coords(c))
    }

    /// Coordinates of `[B_a, B_b]` as a sparse vector.
    pub fn structure(&self, a: usize, b: usize) -> &SparseVec {
        &self.brackets[a][b]
    }

    /// Bracket in coordinates, via structure constants.
    pub fn bracket_coords(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let s = xa * yb;
                for (c, v) in &self.brackets[a][b] {
                    out[*c] += &s * v;
                }
            }
        }
        out
    }

    /// Matrix commutator `xy - yx`.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(x.matrix.commutator(&y.matrix)))
    }

    /// Matrix of `ad x` in the full basis (column `b` holds `[x, B_b]`).
    pub fn ad_sparse(&self, x: &[Rational]) -> SparseMat {
        let dim = self.dim();
        let cols = (0..dim)
            .map(|b| {
                let mut col: SparseVec = Vec::new();
                for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    for (c, v) in &self.brackets[a][b] {
                        col.push((*c, xa * v));
                    }
                }
                col
            })
            .collect();
        SparseMat::from_columns(dim, cols)
    }

    /// Restriction of `ad x` to `g_-1` (requires `x` in `g_0`), as an
    /// `n x n` matrix in `basis_neg1`.
    pub fn ad_on_neg1(&self, x: &[Rational]) -> Mat {
        let r = self.range(-1);
        let full = self.ad_sparse(x);
        let idx: Vec<usize> = r.collect();
        full.select(&idx, &idx).to_dense()
    }

    /// Projection onto `g_i` along the other two summands.
    pub fn grade_component(&self, x: &AlgebraElement, i: i32) -> Result<AlgebraElement> {
        self.check(x)?;
        if !(-1..=1).contains(&i) {
            return Err(Error::InvalidDegree(i));
        }
        let mut c = self.coords(&x.matrix)?;
        let keep = self.range(i);
        for (k, v) in c.iter_mut().enumerate() {
            if !keep.contains(&k) {
                *v = Rational::zero();
            }
        }
        Ok(self.element_from_coords(&c))
    }

    fn compute_killing(&self) -> Mat {
        let dim = self.dim();
        // ad_a[c][d] = coefficient of B_c in [B_a, B_d]
        let rows: Vec<Vec<Rational>> = par::map_range(dim, |a| {
            (0..dim)
                .map(|b| {
                    let mut acc = Rational::zero();
                    for d in 0..dim {
                        for (c, v) in &self.brackets[a][d] {
                            // (ad_b)[d][c]: coefficient of B_d in [B_b, B_c]
                            if let Ok(i) =
                                self.brackets[b][*c].binary_search_by_key(&d, |(k, _)| *k)
                            {
                                acc += v * &self.brackets[b][*c][i].1;
                            }
                        }
                    }
                    acc
                })
                .collect()
        });
        Mat::from_rows(rows)
    }

    /// Killing form matrix in the full basis.
    pub fn killing_matrix(&self) -> &Mat {
        &self.killing
    }

    /// `tr(ad x ad y)`.
    pub fn killing(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<Rational> {
        self.check(x)?;
        self.check(y)?;
        let (cx, cy) = (self.coords(&x.matrix)?, self.coords(&y.matrix)?);
        Ok(self.killing_coords(&cx, &cy))
    }

    pub fn killing_coords(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let ky = self.killing.mul_vec(y);
        x.iter().zip(&ky).map(|(a, b)| a * b).sum()
    }

    fn solve_grading_element(&self) -> Mat {
        let dim = self.dim();
        let zero = self.range(0);
        // Unknowns: coefficients of E over basis_0. Equations: [E, B_b] = deg(b) B_b.
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for b in 0..dim {
            let deg = self.degree_of(b);
            for c in 0..dim {
                let row: Vec<Rational> = zero
                    .clone()
                    .map(|r| coefficient(&self.brackets[r][b], c))
                    .collect();
                rows.push(row);
                rhs.push(if c == b {
                    Rational::from_int(deg as i64)
                } else {
                    Rational::zero()
                });
            }
        }
        let system = Mat::from_rows(rows);
        let sol = solve(&system, &rhs).expect("grading element exists");
        assert!(
            kernel_basis(&system).is_empty(),
            "grading element is not unique"
        );
        let mut c = vec![Rational::zero(); dim];
        for (k, r) in zero.enumerate() {
            c[r] = sol[k].clone();
        }
        self.from_coords(&c)
    }

    pub fn grading_element(&self) -> AlgebraElement {
        self.wrap(self.grading_element.clone())
    }

    /// `g_-1 x g_1` block of the (scaled) Killing form.
    pub fn pairing_matrix(&self) -> Mat {
        let (neg, one) = (self.range(-1), self.range(1));
        let mut p = Mat::zeros(neg.len(), one.len());
        for (i, a) in neg.clone().enumerate() {
            for (j, b) in one.clone().enumerate() {
                p[(i, j)] = &self.killing[(a, b)] * &self.pairing_scale;
            }
        }
        p
    }

    fn compute_dual_g1(&self) -> Result<Vec<Vec<Rational>>> {
        let p = self.pairing_matrix();
        let inv = p.inverse().ok_or(Error::NotInvertible)?;
        let one = self.range(1);
        let n = self.basis_neg1.len();
        Ok((0..n)
            .map(|j| {
                let mut c = vec![Rational::zero(); self.dim()];
                for (l, idx) in one.clone().enumerate() {
                    c[idx] = inv[(l, j)].clone();
                }
                c
            })
            .collect())
    }

    /// `Z^1, ..., Z^n` in `g_1` with `pairing(X_i, Z^j) = delta_ij`.
    pub fn dual_g1_basis(&self) -> Vec<AlgebraElement> {
        self.dual_g1
            .iter()
            .map(|c| self.element_from_coords(c))
            .collect()
    }

    pub fn dual_g1_coords(&self) -> &[Vec<Rational>] {
        &self.dual_g1
    }

    pub fn pairing_scale(&self) -> &Rational {
        &self.pairing_scale
    }

    /// Same model with the `g_-1 / g_1` pairing multiplied by `scale`.
    pub fn with_pairing_scale(&self, scale: Rational) -> Result<GradedModel> {
        let mut m = self.clone();
        m.pairing_scale = scale;
        m.dual_g1 = m.compute_dual_g1()?;
        Ok(m)
    }

    /// Same algebra with `basis_neg1` reordered: new position `i` holds old
    /// element `perm[i]`.
    pub fn permute_neg1(&self, perm: &[usize]) -> Result<GradedModel> {
        let n = self.basis_neg1.len();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::Shape {
                expected: format!("permutation of 0..{n}"),
                got: format!("{perm:?}"),
            });
        }
        let neg1 = perm.iter().map(|&i| self.basis_neg1[i].clone()).collect();
        GradedModel::assemble(
            self.spec,
            self.ambient_size,
            neg1,
            self.basis_0.clone(),
            self.basis_1.clone(),
            self.signature.clone(),
            self.group,
            self.group_constraints.clone(),
            self.pairing_scale.clone(),
        )
    }

    pub fn with_group(&self, group: GroupVariant) -> Result<GradedModel> {
        if !self.spec.allowed_groups().contains(&group) {
            return Err(Error::UnsupportedGroup {
                spec: self.spec,
                group,
            });
        }
        let mut m = self.clone();
        m.group = group;
        m.group_constraints.kind = constraint_kind(group);
        Ok(m)
    }

    /// `S Z^T S` with the model's signature matrix `S`: the metric dual in
    /// `g_-1` of an element of `g_1` (plain transpose except in the
    /// conformal case, where `S = diag(1, J, 1)`).
    pub fn transpose_dual(&self, z: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(z)?;
        let s = &self.signature;
        let x = &(s * &z.matrix.transpose()) * s;
        self.element(x)
    }

    /// Exhaustive structural verification on all basis pairs and triples.
    pub fn structure_check(&self) -> StructureReport {
        let dim = self.dim();
        let mut rep = StructureReport {
            basis_in_algebra: (0..dim).all(|i| self.in_defining_algebra(self.basis(i))),
            ..Default::default()
        };

        rep.grading_compatible = (0..dim).all(|a| {
            (0..dim).all(|b| {
                let target = self.degree_of(a) + self.degree_of(b);
                self.brackets[a][b]
                    .iter()
                    .all(|(c, _)| (-1..=1).contains(&target) && self.degree_of(*c) == target)
            })
        });

        let e = self
            .coords(&self.grading_element)
            .expect("grading element in algebra");
        rep.grading_element_ok = self
            .range(0)
            .contains(&first_nonzero(&e).unwrap_or(usize::MAX))
            && e.iter()
                .enumerate()
                .all(|(i, v)| v.is_zero() || self.range(0).contains(&i))
            && (0..dim).all(|b| {
                let mut unit = vec![Rational::zero(); dim];
                unit[b] = Rational::one();
                let br = self.bracket_coords(&e, &unit);
                let deg = Rational::from_int(self.degree_of(b) as i64);
                br.iter()
                    .enumerate()
                    .all(|(c, v)| if c == b { *v == deg } else { v.is_zero() })
            });

        let jacobi: Vec<usize> = par::map_range(dim, |a| {
            let mut fails = 0;
            for b in 0..dim {
                for c in 0..dim {
                    let mut acc: SparseVec = Vec::new();
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for (d, v) in &self.brackets[x][y] {
                            for (e, w) in &self.brackets[*d][z] {
                                acc.push((*e, v * w));
                            }
                        }
                    }
                    if !sparse_sum_is_zero(acc) {
                        fails += 1;
                    }
                }
            }
            fails
        });
        rep.jacobi_failures = jacobi.iter().sum();

        let inv: Vec<usize> = par::map_range(dim, |x| {
            let mut fails = 0;
            for y in 0..dim {
                for w in 0..dim {
                    let mut acc = Rational::zero();
                    for (d, v) in &self.brackets[x][y] {
                        acc += v * &self.killing[(*d, w)];
                    }
                    for (d, v) in &self.brackets[x][w] {
                        acc += v * &self.killing[(y, *d)];
                    }
                    if !acc.is_zero() {
                        fails += 1;
                    }
                }
            }
            fails
        });
        rep.killing_invariance_failures = inv.iter().sum();

        rep.pairing_nondegenerate = self.pairing_matrix().inverse().is_some();
        let (neg, one) = (self.range(-1), self.range(1));
        rep.grading_orthogonal = neg
            .clone()
            .all(|a| neg.clone().all(|b| self.killing[(a, b)].is_zero()))
            && one
                .clone()
                .all(|a| one.clone().all(|b| self.killing[(a, b)].is_zero()));

        rep.complex_structures_ok = self.group_constraints.complex_structures.iter().all(|j| {
            (0..dim).all(|i| {
                let b = self.basis(i);
                (b * j) == (j * b)
            })
        });
        rep
    }

    /// Defining conditions of the ambient algebra: trace zero, plus
    /// orthogonality for the conformal form and quaternion-linearity.
    pub fn in_defining_algebra(&self, m: &Mat) -> bool {
        match &self.group_constraints.form {
            Some(q) => {
                let lhs = &(m * q) + &(q * &m.transpose());
                lhs.is_zero()
            }
            None => {
                m.trace().is_zero()
                    && self
                        .group_constraints
                        .complex_structures
                        .iter()
                        .all(|j| (m * j) == (j * m))
            }
        }
    }
}

fn coefficient(v: &SparseVec, c: usize) -> Rational {
    match v.binary_search_by_key(&c, |(k, _)| *k) {
        Ok(i) => v[i].1.clone(),
        Err(_) => Rational::zero(),
    }
}

fn first_nonzero(v: &[Rational]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn sparse_sum_is_zero(mut v: SparseVec) -> bool {
    v.sort_by_key(|(c, _)| *c);
    let mut i = 0;
    while i < v.len() {
        let c = v[i].0;
        let mut acc = Rational::zero();
        while i < v.len() && v[i].0 == c {
            acc += &v[i].1;
            i += 1;
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}
