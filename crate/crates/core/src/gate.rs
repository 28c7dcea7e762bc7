//! Curvature restrictions at a point with symmetries.
//!
//! * Group action on cochains and the dimensions of symmetry-fixed curvature.
//! * The algebraic action `A • W` of `A` in `g_0` on Weyl-type cochains
//!   (value degree 0), i.e. the four-term formula
//!   `[A, W(η,μ)(ν)] - W([A,η],μ)(ν) - W(η,[A,μ])(ν) - W(η,μ)([A,ν])`.
//! * The eigenvalue gate: if `ad([X, Z])` is diagonalizable on `g_-1` with
//!   eigenvalues `a_i` and no `a + b + c - d` vanishes, then `[X, Z] • W = 0`
//!   forces `W = 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::cohomology::{cochain_space, codifferential_slice, CochainSpace};
use crate::error::{Error, Result};
use crate::linalg::{rational_spectrum, Mat, SparseMat, SparseVec};
use crate::models::{AlgebraElement, Family, GradedModel, ModelSpec, Params};
use crate::par;
use crate::rational::Rational;

use crate::cohomology::Cochain;

/// Default number of seeded random `X` candidates after the structured ones.
pub const DEFAULT_RANDOM_CANDIDATES: usize = 16;

fn ser_element<S: Serializer>(x: &AlgebraElement, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.matrix.serialize(s)
}

fn ser_opt_element<S: Serializer>(
    x: &Option<AlgebraElement>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    x.as_ref().map(|e| &e.matrix).serialize(s)
}

/// Spectrum of `ad([X, Z])` on `g_-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    #[serde(serialize_with = "ser_element")]
    pub bracket_element: AlgebraElement,
    pub eigenvalues: Vec<Rational>,
    pub diagonalizable: bool,
    pub fully_split: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GateStatus {
    CurvatureVanishes,
    Inconclusive,
    NonRationalSpectrum,
}

/// Where a tried `X` came from in the search order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum CandidateSource {
    /// `S Z^T S`, the metric dual of `Z`.
    Dual,
    Basis(usize),
    Random(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateVerdict {
    pub family: Family,
    pub params: Params,
    #[serde(rename = "Z", serialize_with = "ser_element")]
    pub z: AlgebraElement,
    /// Rank of `Z` as a `p x q` block (Grassmannian models only).
    #[serde(rename = "Z_rank", skip_serializing_if = "Option::is_none")]
    pub z_rank: Option<usize>,
    #[serde(rename = "verdict")]
    pub status: GateStatus,
    #[serde(rename = "witness_X", serialize_with = "ser_opt_element")]
    pub witness_x: Option<AlgebraElement>,
    pub witness_source: Option<CandidateSource>,
    /// Spectrum of the witness, or of the first valid spectrum if none passed.
    pub eigenvalues: Vec<Rational>,
    pub violating_quadruple: Option<[Rational; 4]>,
    /// `dim {W in Λ^2 ⊗ g_0 : [X_l, Z] • W = 0 for all l} ∩ ker ∂*`.
    pub joint_solution_dim: usize,
    pub candidates_tried: usize,
    /// False only if the gate passed while the joint space is nonzero.
    pub cross_check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateOptions {
    pub seed: u64,
    pub random_candidates: usize,
}

impl Default for GateOptions {
    fn default() -> Self {
        GateOptions {
            seed: 0,
            random_candidates: DEFAULT_RANDOM_CANDIDATES,
        }
    }
}

/// Fixed-subspace dimensions for one value degree of `Λ^2 ⊗ g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FixedSlice {
    pub value_degree: i32,
    pub homogeneity: i32,
    /// Fixed cochains supported in this value degree.
    pub fixed_dim: usize,
    pub fixed_ker_dim: usize,
    /// `dim(F ∩ ker ∂*) - dim(F ∩ im ∂*)`.
    pub invariant_h2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedCurvatureReport {
    pub family: Family,
    pub params: Params,
    pub element: Mat,
    pub slices: Vec<FixedSlice>,
}

impl FixedCurvatureReport {
    pub fn slice(&self, value_degree: i32) -> &FixedSlice {
        self.slices
            .iter()
            .find(|s| s.value_degree == value_degree)
            .expect("value degree in -1..=1")
    }
}

fn require_degree(model: &GradedModel, x: &AlgebraElement, deg: i32) -> Result<Vec<Rational>> {
    if x.spec != model.spec {
        return Err(Error::ModelMismatch {
            left: model.spec,
            right: x.spec,
        });
    }
    let c = model.coords(&x.matrix)?;
    let r = model.range(deg);
    if c.iter()
        .enumerate()
        .any(|(i, v)| !v.is_zero() && !r.contains(&i))
    {
        return Err(Error::NotHomogeneous(deg));
    }
    Ok(c)
}

/// Matrix of `Ad̲_g` on `g_-1` (projection along `p`), columns in `basis_neg1`.
pub fn projected_neg1_action(model: &GradedModel, g: &Mat) -> Result<Mat> {
    let inv = g.inverse().ok_or(Error::NotInvertible)?;
    let n = model.dims().neg1;
    let mut l = Mat::zeros(n, n);
    for (i, x) in model.basis_neg1.iter().enumerate() {
        let c = model.coords(&(&(g * x) * &inv))?;
        for (k, idx) in model.range(-1).enumerate() {
            l[(k, i)] = c[idx].clone();
        }
    }
    Ok(l)
}

/// Matrix of `Ad_g` on `g` in the full basis.
pub fn adjoint_matrix(model: &GradedModel, g: &Mat) -> Result<Mat> {
    let inv = g.inverse().ok_or(Error::NotInvertible)?;
    let dim = model.dim();
    let cols: Vec<Vec<Rational>> =
        par::map_range(dim, |b| model.coords(&(&(g * model.basis(b)) * &inv)))
            .into_iter()
            .collect::<Result<_>>()?;
    let mut m = Mat::zeros(dim, dim);
    for (b, col) in cols.iter().enumerate() {
        for (c, v) in col.iter().enumerate() {
            m[(c, b)] = v.clone();
        }
    }
    Ok(m)
}

fn minor(l: &Mat, rows: &[usize], cols: &[usize]) -> Rational {
    let k = rows.len();
    let mut m = Mat::zeros(k, k);
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            m[(i, j)] = l[(r, c)].clone();
        }
    }
    m.determinant()
}

/// Representation of `g` on `Λ^k g_-1^* ⊗ g`:
/// `(g·φ)(X_1, .., X_k) = Ad_g φ(Ad̲_{g^-1} X_1, .., Ad̲_{g^-1} X_k)`.
pub fn group_action_on_cochains(model: &GradedModel, g: &Mat, k: usize) -> Result<SparseMat> {
    let space = cochain_space(model, k)?;
    let inv = g.inverse().ok_or(Error::NotInvertible)?;
    let l = projected_neg1_action(model, &inv)?;
    let ad = SparseMat::from_dense(&adjoint_matrix(model, g)?).transpose();
    let subsets = &space.subsets;
    let minors: Vec<Vec<Rational>> = par::map_range(subsets.len(), |b| {
        subsets.iter().map(|a| minor(&l, &subsets[b], a)).collect()
    });
    let dim_g = space.dim_g;
    let cols = par::map_range(space.dim(), |idx| {
        let (bs, b) = (idx / dim_g, idx % dim_g);
        let mut col: SparseVec = Vec::new();
        for (a, det) in minors[bs].iter().enumerate() {
            if det.is_zero() {
                continue;
            }
            for (c, v) in ad.row(b) {
                col.push((space.index(a, *c), det * v));
            }
        }
        col
    });
    Ok(SparseMat::from_columns(space.dim(), cols))
}

/// Dimensions of the `g`-fixed part of `Λ^2 ⊗ g` per value degree, with its
/// intersection with `ker ∂*` and the invariant part of `H^2`.
pub fn symmetry_fixed_curvature(model: &GradedModel, g: &Mat) -> Result<FixedCurvatureReport> {
    let space = cochain_space(model, 2)?;
    let t = group_action_on_cochains(model, g, 2)?;
    let shifted = t.sub(&SparseMat::identity(space.dim()));
    let all_rows: Vec<usize> = (0..space.dim()).collect();
    let slices = par::map_range(3, |i| -> Result<FixedSlice> {
        let j = i as i32 - 1;
        let cols = space.slice_indices(j);
        let fix = shifted.select(&all_rows, &cols);
        let d1 = codifferential_slice(model, 1, j)?;
        let fixed_dim = fix.nullity();
        let fixed_ker_dim = SparseMat::vstack(&[&fix, &d1]).nullity();
        let fixed_im_dim = if j > -1 {
            let d2 = codifferential_slice(model, 2, j - 1)?;
            fix.mul(&d2).nullity() - d2.nullity()
        } else {
            0
        };
        Ok(FixedSlice {
            value_degree: j,
            homogeneity: j + 2,
            fixed_dim,
            fixed_ker_dim,
            invariant_h2: fixed_ker_dim - fixed_im_dim,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(FixedCurvatureReport {
        family: model.spec.family(),
        params: model.spec.params(),
        element: g.clone(),
        slices,
    })
}

/// Spectrum of `ad([X, Z])` restricted to `g_-1`.
pub fn bracket_spectrum(
    model: &GradedModel,
    z: &AlgebraElement,
    x: &AlgebraElement,
) -> Result<SpectrumReport> {
    let zc = require_degree(model, z, 1)?;
    let xc = require_degree(model, x, -1)?;
    let b = model.bracket_coords(&xc, &zc);
    let spec = rational_spectrum(&model.ad_on_neg1(&b));
    Ok(SpectrumReport {
        bracket_element: model.element_from_coords(&b),
        eigenvalues: spec.roots,
        diagonalizable: spec.diagonalizable,
        fully_split: spec.fully_split,
    })
}

/// First quadruple `(a, b, c, d)` of distinct eigenvalues (repetition
/// allowed) with `a + b + c - d = 0`.
pub fn gate_violation(eigenvalues: &[Rational]) -> Option<[Rational; 4]> {
    let mut d = eigenvalues.to_vec();
    d.sort();
    d.dedup();
    for a in &d {
        for b in &d {
            for c in &d {
                let s = &(a + b) + c;
                if let Some(x) = d.iter().find(|x| **x == s) {
                    return Some([a.clone(), b.clone(), c.clone(), x.clone()]);
                }
            }
        }
    }
    None
}

/// Gate condition on a spectrum. Non-split or non-diagonalizable spectra
/// never pass.
pub fn eigenvalue_gate(spectrum: &SpectrumReport) -> bool {
    spectrum.fully_split
        && spectrum.diagonalizable
        && gate_violation(&spectrum.eigenvalues).is_none()
}

/// Matrix of `W -> A • W` on the value-degree-0 slice of `Λ^2 ⊗ g`, in the
/// slice basis order of [`CochainSpace::slice_indices`]`(0)`.
pub fn algebraic_action_matrix(model: &GradedModel, a: &[Rational]) -> Result<SparseMat> {
    let space = cochain_space(model, 2)?;
    let zero = model.range(0);
    if a.iter()
        .enumerate()
        .any(|(i, v)| !v.is_zero() && !zero.contains(&i))
    {
        return Err(Error::NotHomogeneous(0));
    }
    let w = zero.len();
    let n = space.n;
    // m[(i, j)]: coefficient of X_i in [A, X_j]; A·Z^i = -Σ_j m[(i, j)] Z^j
    let m = model.ad_on_neg1(a);
    let ad = model.ad_sparse(a).transpose();
    let ncols = space.subsets.len() * w;
    let cols = par::map_range(ncols, |idx| {
        let (s, r) = (idx / w, idx % w);
        let pair = &space.subsets[s];
        let mut col: SparseVec = Vec::new();
        for (c, v) in ad.row(zero.start + r) {
            col.push((s * w + (c - zero.start), v.clone()));
        }
        for slot in 0..2 {
            let (i, other) = (pair[slot], pair[1 - slot]);
            for j in 0..n {
                let coef = &m[(i, j)];
                if coef.is_zero() || j == other {
                    continue;
                }
                // Z^j takes slot `slot`; reorder to ascending.
                let mut v = -coef;
                let (lo, hi) = if slot == 0 { (j, other) } else { (other, j) };
                let sorted = if lo < hi { (lo, hi) } else { (hi, lo) };
                if lo > hi {
                    v = -v;
                }
                let t = space.subset_index((1 << sorted.0) | (1 << sorted.1));
                col.push((t * w + r, v));
            }
        }
        col
    });
    Ok(SparseMat::from_columns(ncols, cols))
}

/// `A • W` for `A` in `g_0` and `W` a 2-cochain of value degree 0.
pub fn algebraic_action(model: &GradedModel, a: &AlgebraElement, w: &Cochain) -> Result<Cochain> {
    let ac = require_degree(model, a, 0)?;
    let space = cochain_space(model, 2)?;
    if w.degree_k != 2 || w.coefficients.len() != space.dim() {
        return Err(Error::Shape {
            expected: format!("2-cochain of length {}", space.dim()),
            got: format!("{}-cochain of length {}", w.degree_k, w.coefficients.len()),
        });
    }
    if let Some(i) =
        (0..space.dim()).find(|&i| !w.coefficients[i].is_zero() && space.value_degree(i) != 0)
    {
        return Err(Error::NotHomogeneous(space.value_degree(i)));
    }
    let slice = space.slice_indices(0);
    let local: Vec<Rational> = slice.iter().map(|&i| w.coefficients[i].clone()).collect();
    let out = algebraic_action_matrix(model, &ac)?.mul_vec(&local);
    let mut res = Cochain::zero(&space);
    for (k, &i) in slice.iter().enumerate() {
        res.coefficients[i] = out[k].clone();
    }
    Ok(res)
}

/// Rank of the upper-right `p x q` block of `Z` for Grassmannian models.
pub fn grassmannian_rank(model: &GradedModel, z: &AlgebraElement) -> Option<usize> {
    match model.spec {
        ModelSpec::Grassmannian { p, q } => Some(z.matrix.submatrix(0..p, p..p + q).rank()),
        _ => None,
    }
}

fn candidates(
    model: &GradedModel,
    z: &AlgebraElement,
    opts: &GateOptions,
) -> Result<Vec<(CandidateSource, AlgebraElement)>> {
    let mut out = vec![(CandidateSource::Dual, model.transpose_dual(z)?)];
    for i in 0..model.basis_neg1.len() {
        out.push((
            CandidateSource::Basis(i),
            model.element(model.basis_neg1[i].clone())?,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = model.basis_neg1.len();
    for r in 0..opts.random_candidates {
        let coeffs: Vec<i64> = (0..n).map(|_| rng.random_range(-2i64..=2)).collect();
        if coeffs.iter().all(|c| *c == 0) {
            continue;
        }
        let m = coeffs.iter().zip(&model.basis_neg1).fold(
            Mat::zeros(model.ambient_size, model.ambient_size),
            |acc, (c, b)| &acc + &b.scale(&Rational::from_int(*c)),
        );
        out.push((CandidateSource::Random(r), model.element(m)?));
    }
    Ok(out)
}

/// Dimension of `{W in Λ^2 ⊗ g_0 : [X_l, Z] • W = 0 for all l} ∩ ker ∂*`.
pub fn joint_solution_dim(model: &GradedModel, z: &AlgebraElement) -> Result<usize> {
    let zc = require_degree(model, z, 1)?;
    let mut blocks: Vec<SparseMat> = par::map_range(model.basis_neg1.len(), |l| {
        let mut x = vec![Rational::zero(); model.dim()];
        x[model.range(-1).start + l] = Rational::one();
        algebraic_action_matrix(model, &model.bracket_coords(&x, &zc))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    blocks.push(codifferential_slice(model, 1, 0)?);
    let refs: Vec<&SparseMat> = blocks.iter().collect();
    Ok(SparseMat::vstack(&refs).nullity())
}

/// Verdict of the two-symmetry criterion for a difference `Z` in `g_1`.
pub fn two_symmetry_flatness(
    model: &GradedModel,
    z: &AlgebraElement,
    opts: &GateOptions,
) -> Result<GateVerdict> {
    require_degree(model, z, 1)?;
    if z.is_zero() {
        return Err(Error::ZeroDifference);
    }
    let cands = candidates(model, z, opts)?;
    let (spectra, joint) = par::join(
        || -> Result<Vec<SpectrumReport>> {
            par::map(&cands, |(_, x)| bracket_spectrum(model, z, x))
                .into_iter()
                .collect()
        },
        || joint_solution_dim(model, z),
    );
    let spectra = spectra?;
    let joint = joint?;

    let valid = |s: &SpectrumReport| s.fully_split && s.diagonalizable;
    let passing = spectra.iter().position(eigenvalue_gate);
    let first_valid = spectra.iter().position(valid);
    let (status, witness, eigenvalues, violation) = match (passing, first_valid) {
        (Some(i), _) => (
            GateStatus::CurvatureVanishes,
            Some(i),
            spectra[i].eigenvalues.clone(),
            None,
        ),
        (None, Some(i)) => (
            GateStatus::Inconclusive,
            None,
            spectra[i].eigenvalues.clone(),
            gate_violation(&spectra[i].eigenvalues),
        ),
        (None, None) => (GateStatus::NonRationalSpectrum, None, Vec::new(), None),
    };
    Ok(GateVerdict {
        family: model.spec.family(),
        params: model.spec.params(),
        z: z.clone(),
        z_rank: grassmannian_rank(model, z),
        status,
        witness_x: witness.map(|i| cands[i].1.clone()),
        witness_source: witness.map(|i| cands[i].0),
        eigenvalues,
        violating_quadruple: violation,
        joint_solution_dim: joint,
        candidates_tried: cands.len(),
        cross_check: status != GateStatus::CurvatureVanishes || joint == 0,
    })
}

/// Basis of the value-degree-0 slice as full-length 2-cochains.
pub fn weyl_slice_basis(space: &CochainSpace) -> Vec<Cochain> {
    space
        .slice_indices(0)
        .into_iter()
        .map(|i| {
            let mut c = Cochain::zero(space);
            c.coefficients[i] = Rational::one();
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_model;
    use crate::symmetry::anticommutant_g0;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn spec_report(v: &[i64]) -> SpectrumReport {
        let g = build_model(ModelSpec::Projective { m: 2 }).unwrap();
        SpectrumReport {
            bracket_element: g.basis_element(2),
            eigenvalues: v.iter().map(|x| q(*x)).collect(),
            diagonalizable: true,
            fully_split: true,
        }
    }

    #[test]
    fn gate_examples() {
        assert!(eigenvalue_gate(&spec_report(&[1, 2])));
        assert!(eigenvalue_gate(&spec_report(&[3, 3, 3])));
        assert!(!eigenvalue_gate(&spec_report(&[0])));
        assert!(!eigenvalue_gate(&spec_report(&[1, -1])));
        let mut s = spec_report(&[1, 2]);
        s.diagonalizable = false;
        assert!(!eigenvalue_gate(&s));
        assert_eq!(
            gate_violation(&[q(1), q(-1)]),
            Some([q(-1), q(-1), q(1), q(-1)])
        );
    }

    #[test]
    fn gate_scale_invariant() {
        for v in [[1i64, 2, 2], [1, -1, 3], [0, 1, 2], [2, 5, 7]] {
            let base: Vec<Rational> = v.iter().map(|x| q(*x)).collect();
            for s in [Rational::new(3, 1), Rational::new(-2, 7)] {
                let scaled: Vec<Rational> = base.iter().map(|x| x * &s).collect();
                assert_eq!(
                    gate_violation(&base).is_none(),
                    gate_violation(&scaled).is_none()
                );
            }
        }
    }

    #[test]
    fn projective_spectrum() {
        for m in 2..5 {
            let g = build_model(ModelSpec::Projective { m }).unwrap();
            let z = g.basis_element(g.range(1).start);
            let x = g.basis_element(0);
            let s = bracket_spectrum(&g, &z, &x).unwrap();
            let mut expect = vec![q(1); m - 1];
            expect.push(q(2));
            assert_eq!(s.eigenvalues, expect);
            assert!(s.diagonalizable && eigenvalue_gate(&s));
        }
    }

    #[test]
    fn zero_difference_spectrum_is_zero() {
        let g = build_model(ModelSpec::Projective { m: 2 }).unwrap();
        let z = g.element(Mat::zeros(3, 3)).unwrap();
        let s = bracket_spectrum(&g, &z, &g.basis_element(0)).unwrap();
        assert_eq!(s.eigenvalues, vec![q(0), q(0)]);
        assert!(matches!(
            two_symmetry_flatness(&g, &z, &GateOptions::default()),
            Err(Error::ZeroDifference)
        ));
    }

    #[test]
    fn wrong_degrees_rejected() {
        let g = build_model(ModelSpec::Projective { m: 2 }).unwrap();
        let x = g.basis_element(0);
        assert!(matches!(
            bracket_spectrum(&g, &x, &x),
            Err(Error::NotHomogeneous(1))
        ));
    }

    #[test]
    fn action_identity_and_symmetry_signs() {
        let g = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        let id = group_action_on_cochains(&g, &Mat::identity(5), 2).unwrap();
        assert_eq!(id, SparseMat::identity(30));
        let s = anticommutant_g0(&g).unwrap()[0].matrix.clone();
        let t = group_action_on_cochains(&g, &s, 2).unwrap().to_dense();
        let space = cochain_space(&g, 2).unwrap();
        for i in 0..space.dim() {
            let expect = if space.value_degree(i) == 0 {
                q(1)
            } else {
                q(-1)
            };
            for j in 0..space.dim() {
                let want = if i == j { expect.clone() } else { q(0) };
                assert_eq!(t[(j, i)], want);
            }
        }
    }

    #[test]
    fn action_is_a_representation() {
        let g = build_model(ModelSpec::Projective { m: 2 }).unwrap();
        let a = Mat::from_ints(&[&[2, 0, 0], &[0, 1, 1], &[0, 0, -1]]);
        let b = &Mat::from_ints(&[&[1, 0, 0], &[0, 3, 0], &[0, 1, 1]])
            * &crate::symmetry::exp_nilpotent(&g.basis_1[0]);
        for k in 1..=2 {
            let ta = group_action_on_cochains(&g, &a, k).unwrap();
            let tb = group_action_on_cochains(&g, &b, k).unwrap();
            let tab = group_action_on_cochains(&g, &(&a * &b), k).unwrap();
            assert_eq!(ta.mul(&tb), tab);
        }
    }

    #[test]
    fn torsion_free_fixed_subspaces() {
        for spec in [
            ModelSpec::Conformal { p: 2, q: 2 },
            ModelSpec::Projective { m: 2 },
        ] {
            let g = build_model(spec).unwrap();
            for s in anticommutant_g0(&g).unwrap() {
                let r = symmetry_fixed_curvature(&g, &s.matrix).unwrap();
                assert_eq!(r.slice(-1).fixed_dim, 0);
                assert_eq!(r.slice(1).fixed_dim, 0);
                if spec == (ModelSpec::Conformal { p: 2, q: 2 }) {
                    assert!(r.slice(0).fixed_ker_dim > 0);
                    assert_eq!(r.slice(0).invariant_h2, 10);
                } else {
                    assert_eq!(r.slice(0).invariant_h2, 0);
                }
            }
        }
    }

    #[test]
    fn grading_element_acts_by_homogeneity() {
        let g = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        let e = g.grading_element();
        let space = cochain_space(&g, 2).unwrap();
        for w in weyl_slice_basis(&space) {
            let out = algebraic_action(&g, &e, &w).unwrap();
            let twice: Vec<Rational> = w.coefficients.iter().map(|x| x * &q(2)).collect();
            assert_eq!(out.coefficients, twice);
        }
        let zero = g.element(Mat::zeros(5, 5)).unwrap();
        assert!(algebraic_action(&g, &zero, &weyl_slice_basis(&space)[0])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn flatness_verdicts() {
        let opts = GateOptions::default();
        let g = build_model(ModelSpec::Projective { m: 3 }).unwrap();
        let v = two_symmetry_flatness(&g, &g.basis_element(g.range(1).start), &opts).unwrap();
        assert_eq!(v.status, GateStatus::CurvatureVanishes);
        assert_eq!(v.witness_source, Some(CandidateSource::Dual));
        assert_eq!(v.joint_solution_dim, 0);

        let g = build_model(ModelSpec::Conformal { p: 2, q: 2 }).unwrap();
        let z = g.element(&g.basis_1[0] + &g.basis_1[3]).unwrap();
        let v = two_symmetry_flatness(&g, &z, &opts).unwrap();
        assert_eq!(v.status, GateStatus::Inconclusive);
        assert!(v.violating_quadruple.is_some());
        assert!(v.cross_check);

        let g = build_model(ModelSpec::Grassmannian { p: 2, q: 3 }).unwrap();
        let one = g.range(1).start;
        let rank1 = g.basis_element(one);
        let v = two_symmetry_flatness(&g, &rank1, &opts).unwrap();
        assert_eq!(v.status, GateStatus::Inconclusive);
        assert_eq!(v.z_rank, Some(1));
        let rank2 = g.element(&g.basis_1[0] + &g.basis_1[4]).unwrap();
        let v = two_symmetry_flatness(&g, &rank2, &opts).unwrap();
        assert_eq!(v.status, GateStatus::CurvatureVanishes);
        assert_eq!(v.z_rank, Some(2));
        assert_eq!(v.joint_solution_dim, 0);
    }

    #[test]
    fn verdict_is_deterministic_for_a_seed() {
        let g = build_model(ModelSpec::Conformal { p: 2, q: 2 }).unwrap();
        let z = g.element(&g.basis_1[0] + &g.basis_1[3]).unwrap();
        let opts = GateOptions {
            seed: 7,
            random_candidates: 8,
        };
        assert_eq!(
            two_symmetry_flatness(&g, &z, &opts).unwrap(),
            two_symmetry_flatness(&g, &z, &opts).unwrap()
        );
    }
}
