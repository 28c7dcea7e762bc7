use gradsym::cohomology::harmonic_h2;
use gradsym::gate::{symmetry_fixed_curvature, two_symmetry_flatness, GateOptions, GateStatus};
use gradsym::symmetry::{check_symmetry_element, exp_nilpotent, symmetry_verdict, Verdict};
use gradsym::verify::{run_acceptance, Budget};
use gradsym::{build_model, GroupVariant, Mat, ModelSpec};

fn specs() -> [ModelSpec; 5] {
    [
        ModelSpec::Projective { m: 3 },
        ModelSpec::Conformal { p: 3, q: 1 },
        ModelSpec::Grassmannian { p: 2, q: 3 },
        ModelSpec::Quaternionic { m: 1 },
        ModelSpec::Projective { m: 2 },
    ]
}

#[test]
fn symmetries_extend_along_exp_g1() {
    for spec in specs() {
        let g = build_model(spec).unwrap();
        let r = symmetry_verdict(&g).unwrap();
        assert_eq!(r.verdict, Verdict::Symmetric, "{spec}");
        let n = g.ambient_size;
        let z = g.basis_1.iter().fold(Mat::zeros(n, n), |a, b| &a + b);
        for c in &r.g0_solutions {
            assert!(check_symmetry_element(&g, &(&c.matrix * &exp_nilpotent(&z))), "{spec}");
        }
    }
}

#[test]
fn symmetry_fixes_exactly_the_weyl_slice() {
    for spec in specs() {
        let g = build_model(spec).unwrap();
        let h2 = harmonic_h2(&g).unwrap();
        for c in symmetry_verdict(&g).unwrap().g0_solutions {
            let f = symmetry_fixed_curvature(&g, &c.matrix).unwrap();
            assert_eq!(f.slice(0).invariant_h2, h2.h2_at(2), "{spec}");
            assert_eq!(f.slice(-1).invariant_h2 + f.slice(1).invariant_h2, 0, "{spec}");
        }
    }
}

#[test]
fn sl_parity_flags_obstruction() {
    let g = build_model(ModelSpec::Projective { m: 3 }).unwrap();
    let r = symmetry_verdict(&g.with_group(GroupVariant::Sl).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::NotSymmetric);
    assert!(r.notes.determinant_obstruction);
    assert!(r.notes.linear_solution_dim > 0);
}

#[test]
fn gate_is_seed_independent_when_a_basis_candidate_passes() {
    let g = build_model(ModelSpec::Grassmannian { p: 2, q: 4 }).unwrap();
    let z = g.element(&g.basis_1[0] + &g.basis_1[5]).unwrap();
    for seed in [0, 1, 99] {
        let v = two_symmetry_flatness(&g, &z, &GateOptions { seed, random_candidates: 4 }).unwrap();
        assert_eq!(v.status, GateStatus::CurvatureVanishes);
        assert_eq!(v.candidates_tried, 1 + g.basis_neg1.len() + 4);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let budget: Budget = "m=3,pq=4,h=1".parse().unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = single.install(|| run_acceptance(&budget));
    let b = run_acceptance(&budget);
    assert_eq!(a, b);
    let g = build_model(ModelSpec::Conformal { p: 2, q: 2 }).unwrap();
    assert_eq!(single.install(|| harmonic_h2(&g).unwrap()), harmonic_h2(&g).unwrap());
}
