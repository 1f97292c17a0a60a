//! Invariants of the perturbation-comparison machinery and the continuity
//! sweeps.

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toristab::cone_explorer::{comparison_check, continuity_sweep, epsilon_zero, SweepSpec};
use toristab::rational::{rat, rat_i, Rat};
use toristab::sampling::{random_big_divisor, random_direction};
use toristab::varieties::builtin;

#[test]
fn comparison_chain_holds_whenever_its_hypotheses_do() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let x = builtin("P1xP1").unwrap();
    let eps_max = epsilon_zero(2);
    let mut checked = 0usize;
    while checked < 15 {
        let l = random_big_divisor(&mut rng, &x).unwrap();
        let eps = rat(rng.gen_range(1..=21), 100);
        if eps >= eps_max {
            continue;
        }
        let r = random_direction(&mut rng, &x, 1);
        let l_eps = l.add_scaled(&r, &(&eps * rat(1, 8)));
        let upper = l.scale(&(Rat::one() + &eps)).add_scaled(&l_eps, &-Rat::one());
        let lower = l_eps.add_scaled(&l.scale(&(Rat::one() - &eps)), &-Rat::one());
        if !(upper.is_big().unwrap() && lower.is_big().unwrap()) {
            continue;
        }
        let out = comparison_check(&l, &l_eps, &eps).unwrap();
        assert!(
            out.holds,
            "comparison failed: {} <= {} <= {} expected at eps = {}",
            out.delta_plus, out.delta_base, out.delta_minus, eps
        );
        checked += 1;
    }
}

#[test]
fn envelope_widths_shrink_with_the_step_size() {
    let x = builtin("P1xP1").unwrap();
    let base = x.anticanonical();
    let direction = x.divisor_ints(&[1, 0, 0, 0]);
    let mut largest_eps = Vec::new();
    let mut largest_width = Vec::new();
    for steps in [11usize, 21, 41] {
        let spec = SweepSpec {
            base: base.clone(),
            direction: direction.clone(),
            gamma_min: Rat::zero(),
            gamma_max: rat(1, 2),
            steps,
        };
        let rows = continuity_sweep(&spec).unwrap();
        let mut eps_max = Rat::zero();
        let mut width_max = Rat::zero();
        for pair in rows.windows(2) {
            let eps = pair[1]
                .envelope_eps
                .clone()
                .expect("every step of this sweep admits an envelope epsilon");
            let (da, db) = (pair[0].delta.clone().unwrap(), pair[1].delta.clone().unwrap());
            let width = da.max(db) * &eps;
            eps_max = eps_max.max(eps);
            width_max = width_max.max(width);
        }
        largest_eps.push(eps_max);
        largest_width.push(width_max);
    }
    assert!(largest_eps[1] < largest_eps[0] && largest_eps[2] < largest_eps[1]);
    assert!(largest_width[1] < largest_width[0] && largest_width[2] < largest_width[1]);
}

#[test]
fn sweep_rows_have_positive_delta_and_consistent_beta() {
    let x = builtin("P1xP1").unwrap();
    let spec = SweepSpec {
        base: x.anticanonical(),
        direction: x.divisor_ints(&[1, -1, 1, 0]),
        gamma_min: Rat::zero(),
        gamma_max: rat(1, 2),
        steps: 21,
    };
    let rows = continuity_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 21);
    for row in &rows {
        let d = row.delta.clone().expect("the whole segment stays big");
        assert!(d.is_positive());
        if let Some(s) = &row.s {
            assert!(s.is_positive());
            assert_eq!(row.beta.clone().unwrap(), s.clone().min(d));
        }
    }
}

#[test]
fn degenerate_sweeps_are_rejected() {
    let x = builtin("P1xP1").unwrap();
    let spec = SweepSpec {
        base: x.anticanonical(),
        direction: x.divisor_ints(&[1, 0, 0, 0]),
        gamma_min: rat(1, 2),
        gamma_max: Rat::zero(),
        steps: 5,
    };
    assert!(continuity_sweep(&spec).is_err());
    let spec = SweepSpec {
        base: x.anticanonical(),
        direction: x.divisor_ints(&[1, 0, 0, 0]),
        gamma_min: Rat::zero(),
        gamma_max: rat_i(1),
        steps: 1,
    };
    assert!(continuity_sweep(&spec).is_err());
}
