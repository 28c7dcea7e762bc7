//! Cochains `Λ^k g_-1^* ⊗ g`, the Kostant codifferential and `H^2(g_-, g)`.
//!
//! Forms are written in the dual basis `Z^1, ..., Z^n` of `g_1`. The basis of
//! `Λ^k ⊗ g` is `Z^{a_1} ∧ ... ∧ Z^{a_k} ⊗ B_b` with `a_1 < ... < a_k`,
//! ordered subset-major (subsets lexicographic, then `b` in the model's full
//! basis order).
//!
//! On decomposables
//!
//! ```text
//! ∂*(Z_0 ∧ ... ∧ Z_k ⊗ B) = Σ_i (-1)^(i+1) Z_0 ∧ ..^i.. ∧ Z_k ⊗ [Z_i, B]
//!                         + Σ_{i<j} (-1)^(i+j) [Z_i, Z_j] ∧ ..^i..^j.. ⊗ B
//! ```
//!
//! The second sum lies in `g_2 = 0` for every |1|-grading; it is still
//! evaluated and asserted to vanish.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{SparseMat, SparseVec};
use crate::models::{Family, GradedModel, Params};
use crate::par;
use crate::rational::Rational;

/// Largest `dim g_-1` supported by the subset index table.
pub const MAX_FORM_ARITY: usize = 20;

/// Ordered basis of `Λ^k g_-1^* ⊗ g`.
#[derive(Debug, Clone)]
pub struct CochainSpace {
    pub k: usize,
    pub n: usize,
    pub dim_g: usize,
    pub subsets: Vec<Vec<usize>>,
    // bitmask -> position in `subsets`
    index: Vec<usize>,
    value_degree: Vec<i32>,
}

impl CochainSpace {
    pub fn dim(&self) -> usize {
        self.subsets.len() * self.dim_g
    }

    pub fn index(&self, subset: usize, b: usize) -> usize {
        subset * self.dim_g + b
    }

    /// Position of a sorted subset given as a bitmask.
    pub fn subset_index(&self, mask: usize) -> usize {
        let i = self.index[mask];
        assert!(i != usize::MAX, "subset of the wrong size");
        i
    }

    /// Degree `j` of the `g`-part of basis vector `idx`.
    pub fn value_degree(&self, idx: usize) -> i32 {
        self.value_degree[idx % self.dim_g]
    }

    /// Basis positions with value degree `j`, ascending.
    pub fn slice_indices(&self, j: i32) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.value_degree(i) == j)
            .collect()
    }

    /// `(form indices, algebra basis index, value degree)` for each basis vector.
    pub fn labels(&self) -> Vec<(Vec<usize>, usize, i32)> {
        (0..self.dim())
            .map(|i| {
                (
                    self.subsets[i / self.dim_g].clone(),
                    i % self.dim_g,
                    self.value_degree(i),
                )
            })
            .collect()
    }
}

/// A cochain as a coefficient vector over a [`CochainSpace`] basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cochain {
    pub degree_k: usize,
    pub coefficients: Vec<Rational>,
}

impl Cochain {
    pub fn zero(space: &CochainSpace) -> Self {
        Cochain {
            degree_k: space.k,
            coefficients: vec![Rational::zero(); space.dim()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Rational::is_zero)
    }
}

pub fn cochain_space(model: &GradedModel, k: usize) -> Result<CochainSpace> {
    if k > 3 {
        return Err(Error::InvalidFormDegree(k));
    }
    let n = model.dims().neg1;
    assert!(n <= MAX_FORM_ARITY, "g_-1 too large for the subset table");
    let subsets = combinations(n, k);
    let mut index = vec![usize::MAX; 1 << n];
    for (i, s) in subsets.iter().enumerate() {
        index[mask(s)] = i;
    }
    Ok(CochainSpace {
        k,
        n,
        dim_g: model.dim(),
        subsets,
        index,
        value_degree: (0..model.dim()).map(|b| model.degree_of(b)).collect(),
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn mask(s: &[usize]) -> usize {
    s.iter().fold(0, |m, &i| m | (1 << i))
}

/// `ad(Z^a)` for each dual basis element, column-accessible: `cols[a][b]`
/// holds the coordinates of `[Z^a, B_b]`.
struct DualAction {
    cols: Vec<SparseMat>,
}

impl DualAction {
    fn new(model: &GradedModel) -> Self {
        let cols = model
            .dual_g1_coords()
            .iter()
            .map(|z| model.ad_sparse(z).transpose())
            .collect();
        DualAction { cols }
    }

    fn bracket(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        self.cols[a].row(b)
    }
}

fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Image of one basis cochain of `Λ^{k+1} ⊗ g` in the `Λ^k ⊗ g` basis.
fn codifferential_column(
    model: &GradedModel,
    action: &DualAction,
    target: &CochainSpace,
    subset: &[usize],
    b: usize,
) -> SparseVec {
    let mut col: SparseVec = Vec::new();
    let full = mask(subset);
    for (i, &a) in subset.iter().enumerate() {
        let s = sign(i + 1);
        let row_subset = target.subset_index(full & !(1 << a));
        for (c, v) in action.bracket(a, b) {
            col.push((target.index(row_subset, *c), &s * v));
        }
    }
    let duals = model.dual_g1_coords();
    for i in 0..subset.len() {
        for j in i + 1..subset.len() {
            let w = model.bracket_coords(&duals[subset[i]], &duals[subset[j]]);
            assert!(
                w.iter().all(Rational::is_zero),
                "[g_1, g_1] must vanish in a |1|-grading"
            );
        }
    }
    col
}

/// Matrix of `∂*: Λ^{k+1} ⊗ g -> Λ^k ⊗ g` in the canonical bases.
pub fn codifferential_matrix(model: &GradedModel, k: usize) -> Result<SparseMat> {
    if k + 1 > 3 {
        return Err(Error::InvalidFormDegree(k + 1));
    }
    let source = cochain_space(model, k + 1)?;
    let target = cochain_space(model, k)?;
    let action = DualAction::new(model);
    let cols = par::map_range(source.dim(), |idx| {
        let (s, b) = (idx / source.dim_g, idx % source.dim_g);
        codifferential_column(model, &action, &target, &source.subsets[s], b)
    });
    Ok(SparseMat::from_columns(target.dim(), cols))
}

/// `∂*` restricted to `Λ^{k+1} ⊗ g_j -> Λ^k ⊗ g_{j+1}`, in the ordered
/// slice bases of [`CochainSpace::slice_indices`].
pub fn codifferential_slice(model: &GradedModel, k: usize, j: i32) -> Result<SparseMat> {
    if k + 1 > 3 {
        return Err(Error::InvalidFormDegree(k + 1));
    }
    if !(-1..=1).contains(&j) {
        return Err(Error::InvalidDegree(j));
    }
    let source = cochain_space(model, k + 1)?;
    let target = cochain_space(model, k)?;
    let src_range = model.range(j);
    let dst_range = model.range(j + 1);
    let dst_width = dst_range.len();
    let ncols = source.subsets.len() * src_range.len();
    if dst_width == 0 {
        return Ok(SparseMat::zeros(0, ncols));
    }
    let action = DualAction::new(model);
    let cols = par::map_range(ncols, |idx| {
        let (s, off) = (idx / src_range.len(), idx % src_range.len());
        let col = codifferential_column(
            model,
            &action,
            &target,
            &source.subsets[s],
            src_range.start + off,
        );
        col.into_iter()
            .map(|(r, v)| {
                let (rs, c) = (r / target.dim_g, r % target.dim_g);
                assert!(
                    dst_range.contains(&c),
                    "codifferential must raise value degree by one"
                );
                (rs * dst_width + (c - dst_range.start), v)
            })
            .collect()
    });
    Ok(SparseMat::from_columns(
        target.subsets.len() * dst_width,
        cols,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Classification {
    #[serde(rename = "FlatIfSymmetric_Degree1")]
    FlatIfSymmetricDegree1,
    #[serde(rename = "FlatIfSymmetric_Degree3")]
    FlatIfSymmetricDegree3,
    #[serde(rename = "Interesting_Degree2")]
    InterestingDegree2,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::FlatIfSymmetricDegree1 => "FlatIfSymmetric_Degree1",
            Classification::FlatIfSymmetricDegree3 => "FlatIfSymmetric_Degree3",
            Classification::InterestingDegree2 => "Interesting_Degree2",
        })
    }
}

/// Kernel and image dimensions for one value-degree slice of `Λ^2 ⊗ g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub value_degree: i32,
    pub homogeneity: i32,
    pub cochain_dim: usize,
    pub dim_ker: usize,
    pub dim_im: usize,
    pub h2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub family: Family,
    pub params: Params,
    pub dim_ker: usize,
    pub dim_im: usize,
    pub h2_total: usize,
    /// Homogeneity degree (`"1"`, `"2"`, `"3"`) to dimension.
    pub h2_by_degree: BTreeMap<String, usize>,
    pub slices: Vec<SliceReport>,
    pub classification: Classification,
    pub notes: Vec<String>,
}

impl CohomologyReport {
    pub fn h2_at(&self, homogeneity: i32) -> usize {
        self.h2_by_degree
            .get(&homogeneity.to_string())
            .copied()
            .unwrap_or(0)
    }
}

/// Dimensions of `ker ∂*` and `im ∂*` at `Λ^2 ⊗ g_j`.
pub fn slice_homology(model: &GradedModel, j: i32) -> Result<SliceReport> {
    let (ker, im) = par::join(
        || -> Result<(usize, usize)> {
            let d = codifferential_slice(model, 1, j)?;
            Ok((d.cols(), d.nullity()))
        },
        || -> Result<usize> {
            if j - 1 < -1 {
                return Ok(0);
            }
            Ok(codifferential_slice(model, 2, j - 1)?.rank())
        },
    );
    let (cochain_dim, dim_ker) = ker?;
    let dim_im = im?;
    assert!(dim_im <= dim_ker, "∂*∘∂* must vanish");
    Ok(SliceReport {
        value_degree: j,
        homogeneity: j + 2,
        cochain_dim,
        dim_ker,
        dim_im,
        h2: dim_ker - dim_im,
    })
}

/// `H^2(g_-, g)` as homology of `∂*`, split by homogeneity degree.
pub fn harmonic_h2(model: &GradedModel) -> Result<CohomologyReport> {
    let slices: Vec<SliceReport> = par::map_range(3, |i| slice_homology(model, i as i32 - 1))
        .into_iter()
        .collect::<Result<_>>()?;
    let h2_by_degree: BTreeMap<String, usize> = slices
        .iter()
        .map(|s| (s.homogeneity.to_string(), s.h2))
        .collect();
    let dim_ker = slices.iter().map(|s| s.dim_ker).sum();
    let dim_im = slices.iter().map(|s| s.dim_im).sum();
    let mut report = CohomologyReport {
        family: model.spec.family(),
        params: model.spec.params(),
        dim_ker,
        dim_im,
        h2_total: dim_ker - dim_im,
        h2_by_degree,
        slices,
        classification: Classification::FlatIfSymmetricDegree3,
        notes: Vec::new(),
    };
    report.classification = match flatness_classification(&report) {
        Ok(c) => c,
        Err(Error::Ambiguous) => {
            report
                .notes
                .push("homogeneity 1 and 3 both present without 2; both force flatness".into());
            Classification::FlatIfSymmetricDegree1
        }
        Err(e) => return Err(e),
    };
    Ok(report)
}

/// Classification from the homogeneity pattern of `H^2`.
pub fn flatness_classification(report: &CohomologyReport) -> Result<Classification> {
    let (d1, d2, d3) = (report.h2_at(1), report.h2_at(2), report.h2_at(3));
    if d2 > 0 {
        Ok(Classification::InterestingDegree2)
    } else if d1 > 0 && d3 > 0 {
        Err(Error::Ambiguous)
    } else if d1 > 0 {
        Ok(Classification::FlatIfSymmetricDegree1)
    } else {
        Ok(Classification::FlatIfSymmetricDegree3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_model, ModelSpec};
    use proptest::prelude::*;

    fn small() -> Vec<ModelSpec> {
        vec![
            ModelSpec::Projective { m: 2 },
            ModelSpec::Projective { m: 3 },
            ModelSpec::Conformal { p: 2, q: 1 },
            ModelSpec::Conformal { p: 3, q: 0 },
            ModelSpec::Grassmannian { p: 2, q: 2 },
            ModelSpec::Quaternionic { m: 1 },
        ]
    }

    #[test]
    fn cochain_dimensions() {
        let p = build_model(ModelSpec::Projective { m: 2 }).unwrap();
        assert_eq!(cochain_space(&p, 2).unwrap().dim(), 8);
        let c = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        assert_eq!(cochain_space(&c, 2).unwrap().dim(), 30);
        assert_eq!(cochain_space(&c, 3).unwrap().dim(), 10);
        assert_eq!(cochain_space(&c, 0).unwrap().dim(), 10);
        assert!(matches!(
            cochain_space(&c, 4),
            Err(Error::InvalidFormDegree(4))
        ));
    }

    #[test]
    fn subsets_are_lexicographic() {
        let c = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        let s = cochain_space(&c, 2).unwrap();
        assert_eq!(s.subsets, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(s.subset_index(0b110), 2);
    }

    #[test]
    fn one_form_codifferential_is_minus_bracket() {
        // ∂*(Z^a ⊗ B) = -[Z^a, B] for one-forms.
        let g = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        let d = codifferential_matrix(&g, 0).unwrap().to_dense();
        let dim = g.dim();
        for a in 0..3 {
            for b in 0..dim {
                let mut e = vec![Rational::zero(); dim];
                e[b] = Rational::one();
                let br = g.bracket_coords(&g.dual_g1_coords()[a], &e);
                let col = d.column(a * dim + b);
                let neg: Vec<Rational> = br.iter().map(|x| -x).collect();
                assert_eq!(col, neg);
            }
        }
    }

    #[test]
    fn codifferential_squares_to_zero() {
        for spec in small() {
            let g = build_model(spec).unwrap();
            let d0 = codifferential_matrix(&g, 0).unwrap();
            let d1 = codifferential_matrix(&g, 1).unwrap();
            let d2 = codifferential_matrix(&g, 2).unwrap();
            assert!(d0.mul(&d1).is_zero(), "{spec}");
            assert!(d1.mul(&d2).is_zero(), "{spec}");
        }
    }

    #[test]
    fn codifferential_raises_value_degree() {
        let g = build_model(ModelSpec::Grassmannian { p: 2, q: 2 }).unwrap();
        let src = cochain_space(&g, 2).unwrap();
        let dst = cochain_space(&g, 1).unwrap();
        let d = codifferential_matrix(&g, 1).unwrap().transpose();
        for c in 0..d.rows() {
            for (r, _) in d.row(c) {
                assert_eq!(dst.value_degree(*r), src.value_degree(c) + 1);
            }
        }
    }

    #[test]
    fn slices_sum_to_unsliced() {
        for spec in small() {
            let g = build_model(spec).unwrap();
            let rep = harmonic_h2(&g).unwrap();
            let d1 = codifferential_matrix(&g, 1).unwrap();
            let d2 = codifferential_matrix(&g, 2).unwrap();
            assert_eq!(rep.dim_ker, d1.nullity(), "{spec}");
            assert_eq!(rep.dim_im, d2.rank(), "{spec}");
            let by_degree: usize = rep.h2_by_degree.values().sum();
            assert_eq!(rep.h2_total, by_degree);
        }
    }

    #[test]
    fn homogeneity_patterns() {
        let pattern = |spec| {
            let r = harmonic_h2(&build_model(spec).unwrap()).unwrap();
            (r.h2_at(1) > 0, r.h2_at(2) > 0, r.h2_at(3) > 0)
        };
        assert_eq!(
            pattern(ModelSpec::Projective { m: 2 }),
            (false, false, true)
        );
        assert!(pattern(ModelSpec::Projective { m: 3 }).1);
        assert_eq!(
            pattern(ModelSpec::Conformal { p: 3, q: 0 }),
            (false, false, true)
        );
        assert!(pattern(ModelSpec::Conformal { p: 2, q: 2 }).1);
        assert!(pattern(ModelSpec::Grassmannian { p: 2, q: 2 }).1);
    }

    #[test]
    fn classification_rules() {
        let mut r = harmonic_h2(&build_model(ModelSpec::Projective { m: 2 }).unwrap()).unwrap();
        assert_eq!(r.classification, Classification::FlatIfSymmetricDegree3);
        r.h2_by_degree.insert("1".into(), 1);
        assert_eq!(flatness_classification(&r), Err(Error::Ambiguous));
        r.h2_by_degree.insert("3".into(), 0);
        assert_eq!(
            flatness_classification(&r),
            Ok(Classification::FlatIfSymmetricDegree1)
        );
        r.h2_by_degree.insert("2".into(), 4);
        assert_eq!(
            flatness_classification(&r),
            Ok(Classification::InterestingDegree2)
        );
    }

    #[test]
    fn report_json_shape() {
        let r = harmonic_h2(&build_model(ModelSpec::Conformal { p: 2, q: 2 }).unwrap()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["classification"], "Interesting_Degree2");
        assert!(v["h2_by_degree"]["2"].as_u64().unwrap() > 0);
        assert_eq!(v["family"], "conformal");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn h2_invariant_under_neg1_permutation(seed in any::<u64>()) {
            let g = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
            let mut perm: Vec<usize> = (0..3).collect();
            let mut x = seed;
            for i in (1..perm.len()).rev() {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1);
                perm.swap(i, (x >> 33) as usize % (i + 1));
            }
            let h = g.permute_neg1(&perm).unwrap();
            prop_assert_eq!(harmonic_h2(&g).unwrap().h2_by_degree, harmonic_h2(&h).unwrap().h2_by_degree);
        }

        #[test]
        fn h2_invariant_under_pairing_scale(num in 1i64..7, den in 1i64..7, neg in any::<bool>()) {
            let s = Rational::new(if neg { -num } else { num }, den);
            let g = build_model(ModelSpec::Projective { m: 3 }).unwrap();
            let h = g.with_pairing_scale(s).unwrap();
            prop_assert_eq!(harmonic_h2(&g).unwrap().slices, harmonic_h2(&h).unwrap().slices);
        }
    }
}
