//! Exact invariants of the threshold layer: the bruteforce oracle, the
//! quadrature oracle, scaling laws, and symmetry invariance.

use num::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toristab::geometry::RatVector;
use toristab::rational::{rat, Rat};
use toristab::sampling::{
    random_ample_divisor, random_big_divisor, random_lambda, random_primitive_vector,
};
use toristab::thresholds::{
    alpha, beta, delta, delta_bruteforce, expected_vanishing, expected_vanishing_quadrature,
    log_discrepancy_clf, ToricValuation,
};
use toristab::toric::ToricRDivisor;
use toristab::varieties::builtin;

#[test]
fn bruteforce_oracle_is_monotone_with_floor_delta() {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    for name in ["P2", "P1xP1"] {
        let x = builtin(name).unwrap();
        for _ in 0..4 {
            let l = random_big_divisor(&mut rng, &x).unwrap();
            let (d, w) = delta(&l).unwrap();
            let bf4 = delta_bruteforce(&l, 4).unwrap();
            let bf8 = delta_bruteforce(&l, 8).unwrap();
            let bf12 = delta_bruteforce(&l, 12).unwrap();
            assert!(bf4 >= bf8 && bf8 >= bf12, "oracle must be nonincreasing in the radius");
            assert!(bf12 >= d, "the oracle can never undercut the exact minimum");
            if w.vector().max_abs() <= rat(12, 1) {
                assert_eq!(bf12, d, "witness inside the ball forces equality");
            }
        }
    }
}

#[test]
fn quadrature_oracle_matches_the_exact_expected_vanishing() {
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    let names = ["P2", "P1xP1"];
    for k in 0..8 {
        let x = builtin(names[k % 2]).unwrap();
        let l = random_big_divisor(&mut rng, &x).unwrap();
        let w = ToricValuation::new(random_primitive_vector(&mut rng, 2, 5)).unwrap();
        let exact = expected_vanishing(&l, &w).unwrap();
        let quad = expected_vanishing_quadrature(&l, &w, 2000).unwrap();
        let err = (exact - quad).abs();
        assert!(err <= rat(5, 1000), "quadrature drifted by {err}");
    }
}

#[test]
fn delta_and_alpha_are_inverse_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let names = ["P2", "P1xP1", "dP1"];
    for k in 0..25 {
        let x = builtin(names[k % names.len()]).unwrap();
        let l = random_big_divisor(&mut rng, &x).unwrap();
        let lambda = random_lambda(&mut rng);
        let scaled = l.scale(&lambda);
        assert_eq!(delta(&scaled).unwrap().0 * &lambda, delta(&l).unwrap().0);
        assert_eq!(alpha(&scaled).unwrap().0 * &lambda, alpha(&l).unwrap().0);
    }
}

#[test]
fn beta_takes_the_smaller_branch_and_scales_inversely() {
    let mut rng = ChaCha8Rng::seed_from_u64(304);
    let names = ["P2", "P1xP1", "dP1"];
    for k in 0..15 {
        let x = builtin(names[k % names.len()]).unwrap();
        let xi = random_ample_divisor(&mut rng, &x).unwrap();
        let s = xi.nef_threshold().unwrap();
        let b = beta(&xi).unwrap();
        if s > Rat::from_integer(0.into()) {
            let (d, _) = delta(&xi).unwrap();
            assert_eq!(b, s.clone().min(d));
        } else {
            assert_eq!(b, s);
        }
        let lambda = random_lambda(&mut rng);
        assert_eq!(beta(&xi.scale(&lambda)).unwrap() * &lambda, b);
    }
}

#[test]
fn log_discrepancy_is_one_at_rays_and_linear_on_cones() {
    let mut rng = ChaCha8Rng::seed_from_u64(305);
    for name in ["P1", "P2", "P3", "P1xP1", "dP1"] {
        let x = builtin(name).unwrap();
        let clf = log_discrepancy_clf(&x);
        let fan = x.fan();
        for ray in fan.rays() {
            assert_eq!(clf.eval(ray).unwrap(), rat(1, 1), "A({ray}) != 1 on {name}");
        }
        for cone in fan.maximal_cones() {
            // A nonnegative integer combination of a cone's rays stays in the
            // cone, where A is linear: its value is the coefficient sum.
            let mut w = RatVector::zero(x.dim());
            let mut total = 0i64;
            for &ray_index in cone {
                let c = rng.gen_range(0..=4i64);
                w = w.add(&fan.rays()[ray_index].scale(&rat(c, 1)));
                total += c;
            }
            if total == 0 {
                continue;
            }
            assert_eq!(clf.eval(&w).unwrap(), rat(total, 1), "A not linear on a cone of {name}");
        }
    }
}

/// The linearly equivalent divisor with coefficients a_i + <m, v_i>.
fn translate_coeffs(d: &ToricRDivisor, m: &[i64]) -> ToricRDivisor {
    let x = d.variety();
    let m = RatVector::from_ints(m);
    let coeffs: Vec<Rat> =
        d.coeffs().iter().zip(x.rays()).map(|(a, v)| a + m.dot(v)).collect();
    x.divisor(coeffs).unwrap()
}

/// The divisor with coefficients permuted along a fan automorphism.
fn permute_coeffs(d: &ToricRDivisor, perm: &[usize]) -> ToricRDivisor {
    let coeffs: Vec<Rat> = perm.iter().map(|&i| d.coeffs()[i].clone()).collect();
    d.variety().divisor(coeffs).unwrap()
}

#[test]
fn thresholds_are_invariant_under_lattice_translations() {
    let mut rng = ChaCha8Rng::seed_from_u64(306);
    for name in ["P2", "P1xP1", "dP1"] {
        let x = builtin(name).unwrap();
        for _ in 0..5 {
            let l = random_big_divisor(&mut rng, &x).unwrap();
            let m = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
            let t = translate_coeffs(&l, &m);
            assert_eq!(delta(&l).unwrap().0, delta(&t).unwrap().0);
            assert_eq!(alpha(&l).unwrap().0, alpha(&t).unwrap().0);

            let xi = random_ample_divisor(&mut rng, &x).unwrap();
            let txi = translate_coeffs(&xi, &m);
            assert_eq!(beta(&xi).unwrap(), beta(&txi).unwrap());
        }
    }
}

#[test]
fn thresholds_are_invariant_under_fan_automorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(307);
    // Coefficient permutations realized by unimodular maps: the cyclic
    // rotation of P2's three rays, the axis swap and axis flips of P1xP1,
    // and the axis swap of dP1 (which fixes the exceptional ray).
    let cases: [(&str, Vec<Vec<usize>>); 3] = [
        ("P2", vec![vec![2, 0, 1], vec![1, 2, 0]]),
        ("P1xP1", vec![vec![2, 3, 0, 1], vec![1, 0, 2, 3], vec![0, 1, 3, 2]]),
        ("dP1", vec![vec![1, 0, 2, 3]]),
    ];
    for (name, perms) in &cases {
        let x = builtin(name).unwrap();
        for _ in 0..5 {
            let l = random_big_divisor(&mut rng, &x).unwrap();
            let xi = random_ample_divisor(&mut rng, &x).unwrap();
            for perm in perms {
                let lp = permute_coeffs(&l, perm);
                assert_eq!(delta(&l).unwrap().0, delta(&lp).unwrap().0, "{name} {perm:?}");
                assert_eq!(alpha(&l).unwrap().0, alpha(&lp).unwrap().0, "{name} {perm:?}");
                let xip = permute_coeffs(&xi, perm);
                assert_eq!(beta(&xi).unwrap(), beta(&xip).unwrap(), "{name} {perm:?}");
            }
        }
    }
}
