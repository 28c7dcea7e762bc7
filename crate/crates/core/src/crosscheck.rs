//! Brute-force evaluation of the defining formulas, used to cross-check the
//! structured engines.
//!
//! Everything here works with ambient matrices and the Killing pairing
//! directly: cochains are evaluated on argument tuples, brackets are matrix
//! commutators, wedge evaluations are explicit permutation sums. No
//! structure constants, minors or form-action shortcuts are shared with
//! the engines being checked.

use crate::cohomology::{cochain_space, CochainSpace};
use crate::error::{Error, Result};
use crate::gate::{algebraic_action_matrix, group_action_on_cochains};
use crate::linalg::Mat;
use crate::models::GradedModel;
use crate::rational::Rational;

/// `Z^a(u)` for `u` an ambient matrix in `g_-1`.
fn form_value(model: &GradedModel, a: usize, u: &Mat) -> Result<Rational> {
    let z = model.element_from_coords(&model.dual_g1_coords()[a]);
    let u = model.element(u.clone())?;
    Ok(model.killing(&u, &z)? * model.pairing_scale())
}

fn permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    if k == 0 {
        return vec![(Vec::new(), true)];
    }
    let mut out = Vec::new();
    for (p, even) in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            // inserting at `pos` moves the new element past `len - pos` others
            let flips = p.len() - pos;
            out.push((q, even == (flips % 2 == 0)));
        }
    }
    out
}

/// `(Z^{a_1} ∧ .. ∧ Z^{a_k})(u_1, .., u_k)` by the Leibniz sum.
fn wedge_value(model: &GradedModel, forms: &[usize], args: &[Mat]) -> Result<Rational> {
    let k = forms.len();
    let mut table = vec![vec![Rational::zero(); k]; k];
    for (i, &a) in forms.iter().enumerate() {
        for (j, u) in args.iter().enumerate() {
            table[i][j] = form_value(model, a, u)?;
        }
    }
    let mut acc = Rational::zero();
    for (p, even) in permutations(k) {
        let mut t = Rational::one();
        for (i, &j) in p.iter().enumerate() {
            t *= &table[i][j];
        }
        if even {
            acc += t;
        } else {
            acc -= t;
        }
    }
    Ok(acc)
}

/// Matrix-valued evaluation of a cochain given by its coefficient vector.
fn evaluate(
    model: &GradedModel,
    space: &CochainSpace,
    coeffs: &[Rational],
    args: &[Mat],
) -> Result<Mat> {
    let n = model.ambient_size;
    let mut out = Mat::zeros(n, n);
    for (idx, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (s, b) = (idx / space.dim_g, idx % space.dim_g);
        let w = wedge_value(model, &space.subsets[s], args)?;
        if !w.is_zero() {
            out = &out + &model.basis(b).scale(&(c * &w));
        }
    }
    Ok(out)
}

fn project_neg1(model: &GradedModel, m: &Mat) -> Result<Mat> {
    let x = model.element(m.clone())?;
    Ok(model.grade_component(&x, -1)?.matrix)
}

/// Number of basis cochains on which `group_action_on_cochains(g)` disagrees
/// with direct evaluation of `Ad_g ∘ φ ∘ (Ad̲_{g^-1})^k` on all sorted
/// argument tuples of basis vectors.
pub fn group_action_mismatches(model: &GradedModel, g: &Mat, k: usize) -> Result<usize> {
    let action = group_action_on_cochains(model, g, k)?.to_dense();
    compare_group_action(model, g, k, &action)
}

fn compare_group_action(model: &GradedModel, g: &Mat, k: usize, action: &Mat) -> Result<usize> {
    let space = cochain_space(model, k)?;
    let inv = g.inverse().ok_or(Error::NotInvertible)?;
    let moved: Vec<Mat> = model
        .basis_neg1
        .iter()
        .map(|x| project_neg1(model, &(&(&inv * x) * g)))
        .collect::<Result<_>>()?;
    let mut bad = 0;
    for col in 0..space.dim() {
        let mut phi = vec![Rational::zero(); space.dim()];
        phi[col] = Rational::one();
        let image = action.column(col);
        for args in &space.subsets {
            let plain: Vec<Mat> = args.iter().map(|&i| model.basis_neg1[i].clone()).collect();
            let shifted: Vec<Mat> = args.iter().map(|&i| moved[i].clone()).collect();
            let direct = &(g * &evaluate(model, &space, &phi, &shifted)?) * &inv;
            let engine = evaluate(model, &space, &image, &plain)?;
            if direct != engine {
                bad += 1;
                break;
            }
        }
    }
    Ok(bad)
}

/// Number of value-degree-0 basis cochains `W` on which the engine's `A • W`
/// disagrees with the four-term formula
/// `[A, W(η,μ)(ν)] - W([A,η],μ)(ν) - W(η,[A,μ])(ν) - W(η,μ)([A,ν])`,
/// where `W(η,μ)(ν) = [W(η,μ), ν]`, over all basis triples.
pub fn algebraic_action_mismatches(model: &GradedModel, a: &Mat) -> Result<usize> {
    let ac = model.coords(a)?;
    let matrix = algebraic_action_matrix(model, &ac)?.to_dense();
    compare_algebraic_action(model, a, &matrix)
}

fn compare_algebraic_action(model: &GradedModel, a: &Mat, matrix: &Mat) -> Result<usize> {
    let space = cochain_space(model, 2)?;
    let slice = space.slice_indices(0);
    let xs = &model.basis_neg1;
    let embed = |local: &[Rational]| {
        let mut full = vec![Rational::zero(); space.dim()];
        for (k, &i) in slice.iter().enumerate() {
            full[i] = local[k].clone();
        }
        full
    };
    let mut bad = 0;
    for col in 0..slice.len() {
        let mut local = vec![Rational::zero(); slice.len()];
        local[col] = Rational::one();
        let w = embed(&local);
        let out = embed(&matrix.column(col));
        let wv = |u: &Mat, v: &Mat, nu: &Mat| -> Result<Mat> {
            Ok(evaluate(model, &space, &w, &[u.clone(), v.clone()])?.commutator(nu))
        };
        'outer: for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                for nu in xs {
                    let (eta, mu) = (&xs[i], &xs[j]);
                    let t1 = a.commutator(&wv(eta, mu, nu)?);
                    let t2 = wv(&a.commutator(eta), mu, nu)?;
                    let t3 = wv(eta, &a.commutator(mu), nu)?;
                    let t4 = wv(eta, mu, &a.commutator(nu))?;
                    let direct = &(&(&t1 - &t2) - &t3) - &t4;
                    let engine =
                        evaluate(model, &space, &out, &[eta.clone(), mu.clone()])?.commutator(nu);
                    if direct != engine {
                        bad += 1;
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(bad)
}

/// `dim {W in Λ^2 ⊗ g_0 : [X_l, Z] • W = 0 for all l} ∩ ker ∂*` from dense
/// evaluations of the four-term formula on all basis triples.
pub fn joint_solution_dim_bruteforce(model: &GradedModel, z: &Mat) -> Result<usize> {
    let space = cochain_space(model, 2)?;
    let slice = space.slice_indices(0);
    let xs = &model.basis_neg1;
    let brackets: Vec<Mat> = xs.iter().map(|x| x.commutator(z)).collect();
    let neg = model.range(-1);
    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(slice.len());
    for &idx in &slice {
        let mut w = vec![Rational::zero(); space.dim()];
        w[idx] = Rational::one();
        let wv = |u: &Mat, v: &Mat, nu: &Mat| -> Result<Mat> {
            Ok(evaluate(model, &space, &w, &[u.clone(), v.clone()])?.commutator(nu))
        };
        let mut col = Vec::new();
        for a in &brackets {
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    for nu in xs {
                        let (eta, mu) = (&xs[i], &xs[j]);
                        let t = &(&(&a.commutator(&wv(eta, mu, nu)?)
                            - &wv(&a.commutator(eta), mu, nu)?)
                            - &wv(eta, &a.commutator(mu), nu)?)
                            - &wv(eta, mu, &a.commutator(nu))?;
                        let c = model.coords(&t)?;
                        col.extend(neg.clone().map(|k| c[k].clone()));
                    }
                }
            }
        }
        columns.push(col);
    }
    let d = crate::cohomology::codifferential_slice(model, 1, 0)?.to_dense();
    let rows = columns.first().map_or(0, Vec::len);
    let mut m = Mat::zeros(rows + d.rows(), slice.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            m[(r, c)] = v.clone();
        }
        for r in 0..d.rows() {
            m[(rows + r, c)] = d[(r, c)].clone();
        }
    }
    Ok(slice.len() - m.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_model, ModelSpec};
    use crate::symmetry::{anticommutant_g0, exp_nilpotent};

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().filter(|(_, e)| *e).count(), 3);
        for (q, even) in p {
            let inversions = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| q[i] > q[j])
                .count();
            assert_eq!(even, inversions % 2 == 0);
        }
    }

    #[test]
    fn oracle_agrees_on_smallest_models() {
        for spec in [
            ModelSpec::Projective { m: 2 },
            ModelSpec::Conformal { p: 2, q: 1 },
        ] {
            let g = build_model(spec).unwrap();
            let s = anticommutant_g0(&g).unwrap()[0].matrix.clone();
            let e = exp_nilpotent(&g.basis_1[0]);
            for k in 1..=2 {
                assert_eq!(group_action_mismatches(&g, &s, k).unwrap(), 0, "{spec}");
                assert_eq!(
                    group_action_mismatches(&g, &(&s * &e), k).unwrap(),
                    0,
                    "{spec}"
                );
            }
            for i in g.range(0) {
                assert_eq!(
                    algebraic_action_mismatches(&g, g.basis(i)).unwrap(),
                    0,
                    "{spec}"
                );
            }
        }
    }

    #[test]
    fn joint_dimension_matches_engine() {
        use crate::gate::joint_solution_dim;
        let g = build_model(ModelSpec::Conformal { p: 2, q: 2 }).unwrap();
        for z in [&g.basis_1[0] + &g.basis_1[3], g.basis_1[1].clone()] {
            let el = g.element(z.clone()).unwrap();
            assert_eq!(
                joint_solution_dim(&g, &el).unwrap(),
                joint_solution_dim_bruteforce(&g, &z).unwrap()
            );
        }
    }

    #[test]
    fn oracle_detects_wrong_matrices() {
        let g = build_model(ModelSpec::Conformal { p: 2, q: 1 }).unwrap();
        let s = anticommutant_g0(&g).unwrap()[0].matrix.clone();
        let dim = cochain_space(&g, 2).unwrap().dim();
        // The identity is the action of I, not of the symmetry.
        assert!(compare_group_action(&g, &s, 2, &Mat::identity(dim)).unwrap() > 0);
        let a = g.basis(g.range(0).start).clone();
        let right = algebraic_action_matrix(&g, &g.coords(&a).unwrap())
            .unwrap()
            .to_dense();
        let wrong = right.scale(&Rational::new(1, 2));
        assert!(!right.is_zero());
        assert!(compare_algebraic_action(&g, &a, &wrong).unwrap() > 0);
    }
}
