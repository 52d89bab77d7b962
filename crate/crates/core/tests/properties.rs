use dualinterp::linalg::{poly_of_matrix, spectral_norm};
use dualinterp::model_operator::build_model_matrix;
use dualinterp::scalar::{cis, cx};
use dualinterp::*;
use proptest::prelude::*;

fn point(radius: f64) -> impl Strategy<Value = C64> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| cis(t) * r)
}

// Distinct nodes at least 0.05 apart, with targets in the closed unit disk.
fn data(max_n: usize, radius: f64) -> impl Strategy<Value = (Vec<C64>, Vec<C64>)> {
    (1..=max_n)
        .prop_flat_map(move |n| (prop::collection::vec(point(radius), n), prop::collection::vec(point(1.0), n)))
        .prop_filter("nodes too close", |(ls, _)| {
            ls.iter().enumerate().all(|(i, a)| ls[..i].iter().all(|b| (a - b).norm() >= 0.05))
        })
}

fn quick(seed: u64) -> SolverOpts {
    let mut o = SolverOpts::with_seed(seed);
    o.restarts = 2;
    o
}

// The Wiener predual norm is a max norm, so the simplex search stalls a
// little short of the optimum on badly conditioned data; comparisons of
// dual values use DUAL_REL.
const DUAL_REL: f64 = 1e-4;

fn wiener_dual(ls: &[C64], w: &[C64]) -> f64 {
    let p = InterpolationProblem::new(SpaceSpec::wiener(), KernelFamily::simple(ls).unwrap(), w.to_vec()).unwrap();
    dual_norm(&p, &quick(1)).unwrap().value_lower
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_is_absolutely_homogeneous((ls, w) in data(3, 0.8), c in point(3.0)) {
        let fam = KernelFamily::simple(&ls).unwrap();
        let cw: Vec<C64> = w.iter().map(|z| z * c).collect();
        let h = pick_min_c_h2(&fam, &w).unwrap();
        let hc = pick_min_c_h2(&fam, &cw).unwrap();
        prop_assert!((hc - c.norm() * h).abs() <= 1e-10 * (1.0 + hc));
        let d = wiener_dual(&ls, &w);
        let dc = wiener_dual(&ls, &cw);
        prop_assert!((dc - c.norm() * d).abs() <= DUAL_REL * dc.max(1e-12));
    }

    #[test]
    fn norm_is_rotation_invariant((ls, w) in data(3, 0.8), t in 0.0..std::f64::consts::TAU) {
        let rot: Vec<C64> = ls.iter().map(|l| l * cis(t)).collect();
        let fam = KernelFamily::simple(&ls).unwrap();
        let fam_r = KernelFamily::simple(&rot).unwrap();
        let a = pick_min_c_hinf(&fam, &w).unwrap().c_min;
        let b = pick_min_c_hinf(&fam_r, &w).unwrap().c_min;
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
        let d = wiener_dual(&ls, &w);
        let dr = wiener_dual(&rot, &w);
        prop_assert!((d - dr).abs() <= DUAL_REL * d.max(1e-12));
    }

    #[test]
    fn certificate_recomputes((ls, w) in data(4, 0.8), beta in -1.0..1.0f64) {
        let space = SpaceSpec::beurling_sobolev(Exponent::Finite(1.0), beta).unwrap();
        let p = InterpolationProblem::new(space, KernelFamily::simple(&ls).unwrap(), w).unwrap();
        let cert = dual_norm(&p, &quick(3)).unwrap();
        let again = cert.recompute_lower(&p).unwrap();
        prop_assert!((again - cert.value_lower).abs() <= 1e-12 * (1.0 + again));
    }

    #[test]
    fn higher_degree_never_hurts((ls, w) in data(4, 0.8), extra in 1usize..20) {
        let p = InterpolationProblem::new(SpaceSpec::hardy2(), KernelFamily::simple(&ls).unwrap(), w).unwrap();
        let d = ls.len() + 2;
        let lo = primal_min(&p, d, &quick(0)).unwrap().value_upper;
        let hi = primal_min(&p, d + extra, &quick(0)).unwrap().value_upper;
        prop_assert!(hi <= lo + 1e-12 * (1.0 + lo));
    }

    #[test]
    fn pick_margin_changes_sign_at_c_min((ls, w) in data(4, 0.9)) {
        let r = pick_min_c_hinf(&KernelFamily::simple(&ls).unwrap(), &w).unwrap();
        let scale = r.q_norm();
        prop_assert!(r.psd_margin_at(r.c_min * (1.0 + 1e-4) + 1e-6) >= -1e-12 * scale);
        if r.c_min > 1e-3 {
            prop_assert!(r.psd_margin_at(r.c_min * (1.0 - 1e-4)) < 0.0);
        }
    }

    #[test]
    fn model_matrix_is_annihilated((ls, mult) in (prop::collection::vec(point(0.9), 1..4), prop::collection::vec(1usize..3, 3))) {
        let nodes: Vec<Node<f64>> = ls.iter().zip(&mult).map(|(&l, &k)| Node::new(l, k).unwrap()).collect();
        prop_assume!(KernelFamily::new(nodes.clone()).is_ok());
        let fam = KernelFamily::new(nodes).unwrap();
        let m = build_model_matrix(&fam);
        let checks = m.checks();
        prop_assert!(checks.lower_triangular && checks.diagonal_matches_nodes);
        prop_assert!(checks.annihilation_residual <= 1e-10);
        // compression of an isometry
        prop_assert!(spectral_norm(&m.entries) <= 1.0 + 1e-12);
    }

    #[test]
    fn lifting_matches_rational_calculus((ls, _) in data(4, 0.8), pole in point(1.0)) {
        // Psi = 1 / (z - xi) with xi outside the disk
        let xi = if pole.norm() < 1e-3 { cx(1.5, 0.0) } else { pole / pole.norm_sqr() * 1.2 };
        prop_assume!(ls.iter().all(|l| (l - xi).norm() > 1e-3));
        let psi = RationalFn::new(Poly::one(), Poly::new(vec![-xi, cx(1.0, 0.0)])).unwrap();
        let fam = KernelFamily::simple(&ls).unwrap();
        let g = lift_to_polynomial(&psi, &fam.minimal_polynomial()).unwrap();
        for l in &ls {
            prop_assert!((g.eval(*l) - psi.eval(*l)).norm() <= 1e-9 * (1.0 + psi.eval(*l).norm()));
        }
        let m = build_model_matrix(&fam);
        let direct = rational_of_matrix(&psi, &m.entries).unwrap().value;
        let lifted = poly_of_matrix(&g, &m.entries);
        prop_assert!((direct - lifted).norm() <= 1e-8 * (1.0 + spectral_norm(&m.entries)));
    }

    #[test]
    fn norms_are_ordered_across_spaces((ls, w) in data(3, 0.8)) {
        // ||f||_2 <= ||f||_inf <= ||f||_W
        let fam = KernelFamily::simple(&ls).unwrap();
        let h2 = pick_min_c_h2(&fam, &w).unwrap();
        let hinf = pick_min_c_hinf(&fam, &w).unwrap().c_min;
        let wiener = wiener_dual(&ls, &w);
        prop_assert!(h2 <= hinf * (1.0 + 1e-9) + 1e-12);
        prop_assert!(hinf <= wiener * (1.0 + DUAL_REL) + 1e-12);
    }
}
