//! Group elements inducing symmetries of the homogeneous models.
//!
//! A symmetry at the origin of `G/P` comes from `g = g0 exp Z` with `g0` in
//! the grading-preserving subgroup acting by `-1` on `g_-1` and `Z` in `g_1`
//! arbitrary. The `g0` part is found by solving the linear anticommutation
//! conditions and then imposing the (polynomial) group constraints on the
//! small solution space by enumerating sign patterns and rescaling.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Mat, SparseMat, SparseVec};
use crate::models::{ConstraintKind, Family, GradedModel, GroupVariant, Params};
use crate::rational::Rational;

/// Largest linear solution space handled by the sign enumeration.
pub const MAX_SOLUTION_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub invertible: bool,
    pub grading_preserved: bool,
    pub family_constraints: bool,
}

impl Membership {
    pub fn all(&self) -> bool {
        self.invertible && self.grading_preserved && self.family_constraints
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCandidate {
    pub matrix: Mat,
    pub membership: Membership,
}

impl GroupCandidate {
    /// Evaluates membership evidence for an arbitrary matrix.
    pub fn evaluate(model: &GradedModel, matrix: Mat) -> Self {
        let inverse = matrix.inverse();
        let invertible = inverse.is_some();
        let grading_preserved = inverse
            .as_ref()
            .is_some_and(|inv| preserves_grading(model, &matrix, inv));
        let family_constraints = invertible && satisfies_constraints(model, &matrix);
        GroupCandidate {
            matrix,
            membership: Membership {
                invertible,
                grading_preserved,
                family_constraints,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Symmetric,
    NotSymmetric,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SymmetryNotes {
    /// Dimension of the linear anticommutant space before group constraints.
    pub linear_solution_dim: usize,
    /// Some linear solution was discarded because no admissible rescaling
    /// has the sign demanded by the determinant condition.
    pub determinant_obstruction: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub family: Family,
    pub params: Params,
    pub group_variant: GroupVariant,
    pub verdict: Verdict,
    #[serde(serialize_with = "matrices")]
    pub g0_solutions: Vec<GroupCandidate>,
    #[serde(serialize_with = "matrices")]
    pub kernel: Vec<GroupCandidate>,
    /// Each `g0` extends to the family `g0 exp Z`, `Z` in `g_1`.
    pub family_dimension_of_exp_part: usize,
    pub notes: SymmetryNotes,
}

fn matrices<S: Serializer>(v: &[GroupCandidate], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| &c.matrix))
}

/// Group elements `g0` preserving the grading with `Ad(g0) = -id` on `g_-1`,
/// one representative per class for quotient groups.
pub fn anticommutant_g0(model: &GradedModel) -> Result<Vec<GroupCandidate>> {
    Ok(anticommutant_with_notes(model)?.0)
}

fn anticommutant_with_notes(model: &GradedModel) -> Result<(Vec<GroupCandidate>, SymmetryNotes)> {
    let n = model.ambient_size;
    let e = &model.grading_element;
    let mut eqs = commutation_rows(e, -1, n);
    for x in &model.basis_neg1 {
        eqs.extend(commutation_rows(x, 1, n));
    }
    for j in &model.group_constraints.complex_structures {
        eqs.extend(commutation_rows(j, -1, n));
    }
    let space = SparseMat::from_rows(n * n, eqs).kernel();
    let mut notes = SymmetryNotes {
        linear_solution_dim: space.len(),
        ..Default::default()
    };
    let found = constrained_solutions(model, &space, &mut notes)?;
    let found: Vec<GroupCandidate> = found
        .into_iter()
        .filter(|c| check_symmetry_element(model, &c.matrix))
        .collect();
    Ok((found, notes))
}

/// Group elements acting trivially on `g` by conjugation.
pub fn geometry_kernel(model: &GradedModel) -> Result<Vec<GroupCandidate>> {
    let n = model.ambient_size;
    let mut eqs = Vec::new();
    for i in 0..model.dim() {
        eqs.extend(commutation_rows(model.basis(i), -1, n));
    }
    for j in &model.group_constraints.complex_structures {
        eqs.extend(commutation_rows(j, -1, n));
    }
    let space = SparseMat::from_rows(n * n, eqs).kernel();
    let mut notes = SymmetryNotes::default();
    constrained_solutions(model, &space, &mut notes)
}

/// True iff `g` is invertible and the `g_-1` component of `g X g^-1` equals
/// `-X` for every basis element `X` of `g_-1`.
pub fn check_symmetry_element(model: &GradedModel, g: &Mat) -> bool {
    let Some(inv) = g.inverse() else {
        return false;
    };
    let neg = model.range(-1);
    model.basis_neg1.iter().enumerate().all(|(i, x)| {
        let y = &(g * x) * &inv;
        let Ok(c) = model.coords(&y) else {
            return false;
        };
        neg.clone().enumerate().all(|(k, idx)| {
            let want = if k == i {
                -Rational::one()
            } else {
                Rational::zero()
            };
            c[idx] == want
        })
    })
}

/// `exp Z` for nilpotent `Z`, summing the series up to the first vanishing
/// power.
pub fn exp_nilpotent(z: &Mat) -> Mat {
    assert!(z.is_square());
    let n = z.rows();
    let mut acc = Mat::identity(n);
    let mut term = Mat::identity(n);
    for k in 1..=n as i64 {
        term = (&term * z).scale(&Rational::new(1, k));
        if term.is_zero() {
            return acc;
        }
        acc = &acc + &term;
    }
    assert!(
        (&term * z).is_zero(),
        "exp_nilpotent of a non-nilpotent matrix"
    );
    acc
}

/// Symmetric-model verdict for the model's group.
pub fn symmetry_verdict(model: &GradedModel) -> Result<SymmetryReport> {
    let (g0_solutions, notes) = anticommutant_with_notes(model)?;
    let kernel = geometry_kernel(model)?;
    let verdict = if g0_solutions.is_empty() {
        Verdict::NotSymmetric
    } else {
        Verdict::Symmetric
    };
    Ok(SymmetryReport {
        family: model.spec.family(),
        params: model.spec.params(),
        group_variant: model.group,
        verdict,
        g0_solutions,
        kernel,
        family_dimension_of_exp_part: model.dims().one,
        notes,
    })
}

/// Canonical representative of the class of `m` in a quotient group: the
/// first nonzero entry (row-major) is scaled to `1` for projective linear
/// groups and made positive for the orthogonal quotient.
pub fn class_representative(model: &GradedModel, m: &Mat) -> Mat {
    let Some(lead) = m.entries().iter().find(|x| !x.is_zero()) else {
        return m.clone();
    };
    match model.group_constraints.kind {
        ConstraintKind::ProjectiveQuotient | ConstraintKind::QuaternionicQuotient => {
            m.scale(&lead.recip())
        }
        ConstraintKind::ProjectiveOrthogonalJ if lead.is_negative() => -m,
        _ => m.clone(),
    }
}

/// Rows of the linear condition `g A + s A g = 0` on the row-major unknown
/// `g` (`n x n`).
fn commutation_rows(a: &Mat, s: i64, n: usize) -> Vec<SparseVec> {
    let sign = Rational::from_int(s);
    let mut rows = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut row: SparseVec = Vec::new();
            // (g A)_{rc} = sum_k g_{rk} A_{kc}
            for k in 0..n {
                let v = &a[(k, c)];
                if !v.is_zero() {
                    row.push((r * n + k, v.clone()));
                }
            }
            // (A g)_{rc} = sum_k A_{rk} g_{kc}
            for k in 0..n {
                let v = &a[(r, k)];
                if !v.is_zero() {
                    row.push((k * n + c, v * &sign));
                }
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    rows
}

/// Enumerates sign patterns over the linear solution space, rescales each
/// into the group and removes duplicates.
fn constrained_solutions(
    model: &GradedModel,
    space: &[Vec<Rational>],
    notes: &mut SymmetryNotes,
) -> Result<Vec<GroupCandidate>> {
    let d = space.len();
    if d > MAX_SOLUTION_DIM {
        return Err(Error::SolutionSpaceTooLarge(d));
    }
    let n = model.ambient_size;
    let mut out: Vec<GroupCandidate> = Vec::new();
    let mut irrational = false;
    let total = 3usize.pow(d as u32);
    for code in 1..total {
        let mut coeffs = Vec::with_capacity(d);
        let mut k = code;
        for _ in 0..d {
            coeffs.push(Rational::from_int((k % 3) as i64 - 1));
            k /= 3;
        }
        if coeffs.iter().all(Rational::is_zero) {
            continue;
        }
        let mut flat = vec![Rational::zero(); n * n];
        for (c, v) in coeffs.iter().zip(space) {
            if c.is_zero() {
                continue;
            }
            for (f, x) in flat.iter_mut().zip(v) {
                *f += c * x;
            }
        }
        let m = Mat::from_vec(n, n, flat);
        if m.inverse().is_none() {
            continue;
        }
        match normalize(model, &m) {
            Normalized::Found(list) => {
                for g in list {
                    let g = class_representative(model, &g);
                    if out.iter().any(|c| c.matrix == g) {
                        continue;
                    }
                    let cand = GroupCandidate::evaluate(model, g);
                    if cand.membership.all() {
                        out.push(cand);
                    }
                }
            }
            Normalized::Irrational => irrational = true,
            Normalized::Obstructed => notes.determinant_obstruction = true,
        }
    }
    if out.is_empty() && irrational {
        return Err(Error::IrrationalNormalization);
    }
    out.sort_by(|a, b| a.matrix.entries().cmp(b.matrix.entries()));
    Ok(out)
}

enum Normalized {
    Found(Vec<Mat>),
    Irrational,
    Obstructed,
}

/// Rescalings `t m` lying in the group.
fn normalize(model: &GradedModel, m: &Mat) -> Normalized {
    let gc = &model.group_constraints;
    match gc.kind {
        ConstraintKind::ProjectiveQuotient | ConstraintKind::QuaternionicQuotient => {
            Normalized::Found(vec![m.clone()])
        }
        ConstraintKind::OrthogonalJ | ConstraintKind::ProjectiveOrthogonalJ => {
            let q = gc.form.as_ref().expect("orthogonal group has a form");
            let mqm = &(m * q) * &m.transpose();
            // m Q m^T = c Q
            let c = &mqm[(0, q.cols() - 1)] / &q[(0, q.cols() - 1)];
            if mqm != q.scale(&c) || !c.is_positive() {
                return Normalized::Obstructed;
            }
            match c.recip().nth_root_exact(2) {
                Some(t) => Normalized::Found(vec![m.scale(&t), m.scale(&-t)]),
                None => Normalized::Irrational,
            }
        }
        ConstraintKind::SpecialLinearConnected => {
            let n = m.rows() as u32;
            let target = m.determinant().recip();
            if n.is_multiple_of(2) && target.is_negative() {
                return Normalized::Obstructed;
            }
            let Some(t) = target.nth_root_exact(n) else {
                return Normalized::Irrational;
            };
            let roots = if n.is_multiple_of(2) {
                vec![t.clone(), -t]
            } else {
                vec![t]
            };
            let found: Vec<Mat> = roots
                .into_iter()
                .map(|t| m.scale(&t))
                .filter(|g| lower_block_det(model, g).is_positive())
                .collect();
            if found.is_empty() {
                Normalized::Obstructed
            } else {
                Normalized::Found(found)
            }
        }
    }
}

fn lower_block_det(model: &GradedModel, g: &Mat) -> Rational {
    let r = model.group_constraints.lower_block.clone();
    g.submatrix(r.clone(), r).determinant()
}

fn satisfies_constraints(model: &GradedModel, g: &Mat) -> bool {
    let gc = &model.group_constraints;
    let h_linear = gc.complex_structures.iter().all(|j| (g * j) == (j * g));
    let kind_ok = match gc.kind {
        ConstraintKind::ProjectiveQuotient | ConstraintKind::QuaternionicQuotient => true,
        ConstraintKind::OrthogonalJ | ConstraintKind::ProjectiveOrthogonalJ => {
            let q = gc.form.as_ref().expect("orthogonal group has a form");
            &(&(g * q) * &g.transpose()) == q
        }
        ConstraintKind::SpecialLinearConnected => {
            g.determinant().is_one() && lower_block_det(model, g).is_positive()
        }
    };
    h_linear && kind_ok
}

fn preserves_grading(model: &GradedModel, g: &Mat, inv: &Mat) -> bool {
    (0..model.dim()).all(|i| {
        let y = &(g * model.basis(i)) * inv;
        let deg = model.degree_of(i);
        model.coords(&y).is_ok_and(|c| {
            c.iter()
                .enumerate()
                .all(|(k, v)| v.is_zero() || model.degree_of(k) == deg)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_model, ModelSpec};

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn conformal_pair(p: usize, qq: usize) -> (Mat, Mat) {
        let n = p + qq;
        let mut a = vec![q(1); n + 2];
        a[0] = q(-1);
        a[n + 1] = q(-1);
        let b: Vec<Rational> = a.iter().map(|x| -x).collect();
        (Mat::diag(&a), Mat::diag(&b))
    }

    #[test]
    fn conformal_anticommutant_and_kernel() {
        for (p, qq) in [(2, 1), (3, 0), (2, 2)] {
            let g = build_model(ModelSpec::Conformal { p, q: qq }).unwrap();
            let sols = anticommutant_g0(&g).unwrap();
            let (g1, g2) = conformal_pair(p, qq);
            let mats: Vec<Mat> = sols.iter().map(|c| c.matrix.clone()).collect();
            assert_eq!(mats.len(), 2);
            assert!(mats.contains(&g1) && mats.contains(&g2));
            let kernel: Vec<Mat> = geometry_kernel(&g)
                .unwrap()
                .into_iter()
                .map(|c| c.matrix)
                .collect();
            let id = Mat::identity(p + qq + 2);
            assert_eq!(kernel.len(), 2);
            assert!(kernel.contains(&id) && kernel.contains(&-&id));
        }
    }

    #[test]
    fn conformal_projective_orthogonal_has_one_class() {
        let g = build_model(ModelSpec::Conformal { p: 2, q: 1 })
            .unwrap()
            .with_group(GroupVariant::PO)
            .unwrap();
        assert_eq!(anticommutant_g0(&g).unwrap().len(), 1);
        assert_eq!(geometry_kernel(&g).unwrap().len(), 1);
    }

    #[test]
    fn projective_parity() {
        for m in 2..6 {
            let pgl = build_model(ModelSpec::Projective { m }).unwrap();
            let sols = anticommutant_g0(&pgl).unwrap();
            assert_eq!(sols.len(), 1);
            let mut d = vec![q(-1); m + 1];
            d[0] = q(1);
            assert_eq!(sols[0].matrix, Mat::diag(&d));

            let sl = pgl.with_group(GroupVariant::Sl).unwrap();
            let rep = symmetry_verdict(&sl).unwrap();
            let expect = if m % 2 == 0 {
                Verdict::Symmetric
            } else {
                Verdict::NotSymmetric
            };
            assert_eq!(rep.verdict, expect, "m = {m}");
            assert_eq!(rep.notes.determinant_obstruction, m % 2 == 1);
        }
    }

    #[test]
    fn quaternionic_and_grassmannian_symmetric() {
        for spec in [
            ModelSpec::Quaternionic { m: 1 },
            ModelSpec::Grassmannian { p: 2, q: 2 },
            ModelSpec::Grassmannian { p: 2, q: 3 },
        ] {
            let g = build_model(spec).unwrap();
            let rep = symmetry_verdict(&g).unwrap();
            assert_eq!(rep.verdict, Verdict::Symmetric, "{spec}");
            assert_eq!(rep.kernel.len(), 1, "{spec}");
            assert_eq!(rep.kernel[0].matrix, Mat::identity(g.ambient_size));
        }
    }

    #[test]
    fn identity_is_not_a_symmetry() {
        let g = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        assert!(!check_symmetry_element(&g, &Mat::identity(5)));
        assert!(!check_symmetry_element(&g, &Mat::zeros(5, 5)));
    }

    #[test]
    fn exp_part_does_not_change_the_symmetry() {
        let g = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        let (g1, _) = conformal_pair(2, 1);
        for seed in 0..6i64 {
            let z = (0..3).fold(Mat::zeros(5, 5), |acc, i| {
                &acc + &g.basis_1[i].scale(&q((seed * 3 + i as i64) % 5 - 2))
            });
            let e = exp_nilpotent(&z);
            assert!(check_symmetry_element(&g, &(&g1 * &e)));
        }
    }

    #[test]
    fn exp_series_terminates() {
        let g = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        let z = &g.basis_1[0] + &g.basis_1[1];
        let e = exp_nilpotent(&z);
        // Z^3 = 0 and Z^2 != 0 in the three-block realisation.
        let z2 = &z * &z;
        assert!(!z2.is_zero());
        assert_eq!(
            e,
            &(&Mat::identity(5) + &z) + &z2.scale(&Rational::new(1, 2))
        );
        assert_eq!(exp_nilpotent(&-&z), e.inverse().unwrap());
    }

    #[test]
    fn solutions_are_involutive_up_to_kernel() {
        for spec in [
            ModelSpec::Conformal { p: 2, q: 1 },
            ModelSpec::Projective { m: 3 },
            ModelSpec::Quaternionic { m: 1 },
        ] {
            let g = build_model(spec).unwrap();
            let kernel: Vec<Mat> = geometry_kernel(&g)
                .unwrap()
                .into_iter()
                .map(|c| c.matrix)
                .collect();
            let sols = anticommutant_g0(&g).unwrap();
            for s in &sols {
                let sq = class_representative(&g, &(&s.matrix * &s.matrix));
                assert!(kernel.contains(&sq), "{spec}");
                for t in &sols {
                    let ratio =
                        class_representative(&g, &(&s.matrix * &t.matrix.inverse().unwrap()));
                    assert!(kernel.contains(&ratio), "{spec}");
                }
            }
        }
    }

    #[test]
    fn kernel_elements_centralize() {
        let g = build_model(ModelSpec::Grassmannian { p: 2, q: 2 }).unwrap();
        for k in geometry_kernel(&g).unwrap() {
            for i in 0..g.dim() {
                let b = g.basis(i);
                assert_eq!(&(&k.matrix * b) * &k.matrix.inverse().unwrap(), *b);
            }
        }
    }

    #[test]
    fn report_serializes_matrices() {
        let g = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        let rep = symmetry_verdict(&g).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["g0_solutions"].as_array().unwrap().len(), 2);
        assert_eq!(v["verdict"], "Symmetric");
        assert_eq!(v["group_variant"], "O");
        assert_eq!(v["g0_solutions"][0][0][0], "-1");
    }
}
