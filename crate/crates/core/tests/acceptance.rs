//! Acceptance criteria, one test per criterion, each printing a single
//! pass/fail line with the measured values.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use camforge::{
    compare_trajectories, design_branches, gsm_force, gsm_stiffness, restoring_force,
    simulate_reference, simulate_track, BoundaryKind, BranchLabel, BranchSet, DesignProblem,
    ForceSpec, GsmParams, Method, SimConfig, Termination, TrackBranch,
};

fn duffing_set() -> BranchSet {
    let problem = DesignProblem::new(
        Arc::new(ForceSpec::parse("5000*X^3").unwrap()),
        100.0,
        0.1,
        0.2,
    )
    .unwrap();
    design_branches(&problem).unwrap()
}

fn verdict(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// Randomized corpus shared by criteria 4 and 5: polynomial forces of
/// degree <= 7 with coefficients in [-1e4, 1e4] and valid (K, d, L).
fn corpus() -> Vec<DesignProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_CA_F0);
    let mut problems = Vec::new();
    while problems.len() < 60 {
        let degree = rng.gen_range(1..=7usize);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1e4..1e4)).collect();
        let stiffness = rng.gen_range(20.0..2000.0);
        let travel_limit = rng.gen_range(0.05..0.5);
        // Every third problem exercises the zero-preload classes alone.
        let preload = if problems.len() % 3 == 2 {
            0.0
        } else {
            rng.gen_range(0.05..0.8) * travel_limit
        };
        problems.push(
            DesignProblem::new(
                Arc::new(ForceSpec::polynomial(coeffs).unwrap()),
                stiffness,
                preload,
                travel_limit,
            )
            .unwrap(),
        );
    }
    problems
}

#[test]
fn criterion_1_sextuplet_reproduction() {
    let start = Instant::now();
    let set = duffing_set();
    let elapsed = start.elapsed();
    let labels: Vec<&str> = set.branches.iter().map(|b| b.label.name()).collect();
    let mut pass = labels == ["Y11", "Y21", "Y12", "Y22", "Y14", "Y24"];
    for b in &set.branches {
        let kinds = (b.domain.lo_kind, b.domain.hi_kind);
        let expected = match b.label {
            BranchLabel::Y11 | BranchLabel::Y21 => (BoundaryKind::RootTouch, BoundaryKind::RootTouch),
            _ => (BoundaryKind::TravelLimit, BoundaryKind::TravelLimit),
        };
        pass &= kinds == expected;
    }
    // The zero-preload pair equals +/- 5 X^2 on (-0.2, 0.2) within 1e-9 m.
    for (label, sign) in [(BranchLabel::Y14, 1.0), (BranchLabel::Y24, -1.0)] {
        let b = set.branch(label).unwrap();
        pass &= (b.domain.x_lo + 0.2).abs() < 1e-6 && (b.domain.x_hi - 0.2).abs() < 1e-6;
        for i in -199..=199 {
            let x = 0.001 * i as f64;
            pass &= (b.eval(x).unwrap() - sign * 5.0 * x * x).abs() <= 1e-9;
        }
    }
    pass &= elapsed.as_secs_f64() < 1.0;
    verdict(
        1,
        "sextuplet reproduction",
        pass,
        &format!("branches {labels:?} in {:.1} ms", elapsed.as_secs_f64() * 1e3),
    );
}

#[test]
fn criterion_2_domain_values() {
    let set = duffing_set();
    let y11 = set.branch(BranchLabel::Y11).unwrap();
    let y14 = set.branch(BranchLabel::Y14).unwrap();
    // Half-width (2 K d^2 / |A|)^(1/4) = 0.141421... for the K > 0 pair.
    let expected = (2.0 * 100.0 * 0.01f64 / 5000.0).powf(0.25);
    let w11 = 0.5 * (y11.domain.x_hi - y11.domain.x_lo);
    let w14 = 0.5 * (y14.domain.x_hi - y14.domain.x_lo);
    let pass = (w11 - 0.141421).abs() <= 1e-6
        && (w11 - expected).abs() <= 1e-6
        && (w14 - 0.2).abs() <= 1e-6;
    verdict(2, "domain values", pass, &format!("half-widths {w11:.6} and {w14:.6}"));
}

#[test]
fn criterion_3_eight_branch_case() {
    let problem = DesignProblem::new(
        Arc::new(ForceSpec::parse("X^2").unwrap()),
        100.0,
        0.0,
        0.2,
    )
    .unwrap();
    let set = design_branches(&problem).unwrap();
    let mut pass = set.branches.len() == 8;
    for b in &set.branches {
        if b.stiffness > 0.0 {
            pass &= b.domain.x_hi == 0.0 && b.domain.x_lo < 0.0;
        } else {
            pass &= b.domain.x_lo == 0.0 && b.domain.x_hi > 0.0;
        }
    }
    verdict(
        3,
        "eight-branch case",
        pass,
        &format!("{} branches, one-sided by stiffness sign", set.branches.len()),
    );
}

#[test]
fn criterion_4_reconstruction_oracle() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut branches = 0usize;
    for problem in corpus() {
        let set = design_branches(&problem).unwrap();
        for b in &set.branches {
            let r = b.reconstruction_residual(129).unwrap();
            worst = worst.max(r.sup_rel);
            branches += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-6 && elapsed.as_secs_f64() < 30.0;
    verdict(
        4,
        "reconstruction oracle",
        pass,
        &format!(
            "worst sup_rel {worst:.3e} over {branches} branches in {:.2} s",
            elapsed.as_secs_f64()
        ),
    );
}

/// The mirror of a branch: same class, opposite square-root sign.
fn mirror(label: BranchLabel) -> BranchLabel {
    match label {
        BranchLabel::Y11 => BranchLabel::Y21,
        BranchLabel::Y21 => BranchLabel::Y11,
        BranchLabel::Y12 => BranchLabel::Y22,
        BranchLabel::Y22 => BranchLabel::Y12,
        BranchLabel::Y13 => BranchLabel::Y23,
        BranchLabel::Y23 => BranchLabel::Y13,
        BranchLabel::Y14 => BranchLabel::Y24,
        BranchLabel::Y24 => BranchLabel::Y14,
    }
}

fn interior_point(b: &TrackBranch) -> f64 {
    0.5 * (b.domain.x_lo + b.domain.x_hi)
}

#[test]
fn criterion_5_mirror_invariance() {
    let mut worst_force = 0.0f64;
    let mut worst_traj = 0.0f64;
    let mut pairs = 0usize;
    for problem in corpus() {
        let set = design_branches(&problem).unwrap();
        for b in &set.branches {
            if b.sign < 0.0 {
                continue; // each pair once
            }
            let m = set.branch(mirror(b.label)).expect("mirror branch always exists");
            pairs += 1;
            let ta = b.to_track().unwrap();
            let tb = m.to_track().unwrap();
            for i in 1..=9 {
                let x = b.domain.x_lo + (b.domain.x_hi - b.domain.x_lo) * i as f64 / 10.0;
                let fa = restoring_force(&ta, x).unwrap();
                let fb = restoring_force(&tb, x).unwrap();
                worst_force = worst_force.max((fa - fb).abs() / fa.abs().max(1.0));
            }
            let x0 = interior_point(b);
            let config = SimConfig::new(1.0, 1e-4, 0.01).unwrap();
            let (ra, rb) = (
                simulate_track(&ta, &config, x0, 0.0),
                simulate_track(&tb, &config, x0, 0.0),
            );
            if let (Ok(ra), Ok(rb)) = (ra, rb) {
                worst_traj = worst_traj.max(compare_trajectories(&ra, &rb).unwrap());
            }
        }
    }
    let pass = worst_force <= 1e-12 && worst_traj <= 1e-12;
    verdict(
        5,
        "mirror invariance",
        pass,
        &format!("{pairs} pairs; force diff {worst_force:.2e}, trajectory diff {worst_traj:.2e}"),
    );
}

#[test]
fn criterion_6_dynamics_equivalence() {
    let set = duffing_set();
    let track = set.branch(BranchLabel::Y14).unwrap().to_track().unwrap();
    let force = Arc::new(ForceSpec::parse("5000*X^3").unwrap());
    let config = SimConfig::new(1.0, 1e-5, 2.0).unwrap();
    let a = simulate_track(&track, &config, 0.05, 0.0).unwrap();
    let b = simulate_reference(&force, &config, 0.05, 0.0).unwrap();
    let exited = matches!(a.termination, Termination::DomainExit { .. } | Termination::Locked { .. });
    let sup = compare_trajectories(&a, &b).unwrap();
    let pass = exited && sup <= 1e-5;
    verdict(
        6,
        "dynamics equivalence",
        pass,
        &format!("sup|dX| {sup:.3e} over {} steps until {:?}", a.steps, a.termination),
    );
}

#[test]
fn criterion_7_energy_conservation() {
    // Identity track: Y = X carried by a natural spline through linear data.
    let samples: Vec<(f64, f64)> = (0..61).map(|i| {
        let x = -0.15 + 0.005 * i as f64;
        (x, x)
    }).collect();
    let track = camforge::fit_track(&samples, camforge::LinearGsm::new(100.0, 0.2).unwrap()).unwrap();
    let omega = 10.0; // sqrt(K/M)
    let period = 2.0 * std::f64::consts::PI / omega;
    let dt = period / 1000.0;
    let config = SimConfig::new(1.0, dt, 10.0 * period).unwrap().with_method(Method::VelocityVerlet);
    let fwd = simulate_track(&track, &config, 0.01, 0.0).unwrap();
    let drift = camforge::energy_drift(&fwd).unwrap();

    let last = *fwd.samples.last().unwrap();
    let back = simulate_track(&track, &config, last.x, -last.v).unwrap();
    let end = *back.samples.last().unwrap();
    let reversal = ((end.x - 0.01).abs() / 0.01).max(end.v.abs() / (omega * 0.01));

    let pass = drift <= 1e-6 && reversal <= 1e-9;
    verdict(
        7,
        "energy conservation",
        pass,
        &format!("drift {drift:.3e} (<= 1e-6), reversal {reversal:.3e} (<= 1e-9) at dt = T/1000"),
    );
}

#[test]
fn criterion_8_gsm_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x65_AB_11);
    let mut worst_fd = 0.0f64;
    let mut worst_odd = 0.0f64;
    let mut pass = true;
    for _ in 0..100 {
        let l = rng.gen_range(0.05..0.5);
        let params = GsmParams::new(
            rng.gen_range(10.0..1000.0),
            rng.gen_range(10.0..1000.0),
            rng.gen_range(0.0..0.9) * l,
            l,
        )
        .unwrap();
        let y = rng.gen_range(-0.8..0.8) * l;
        // Finite-difference check of the stiffness law.
        let h = 1e-7 * l;
        let fd = (gsm_force(&params, y + h).unwrap() - gsm_force(&params, y - h).unwrap()) / (2.0 * h);
        let k = gsm_stiffness(&params, y).unwrap();
        worst_fd = worst_fd.max((fd - k).abs() / k.abs().max(1.0));
        // Odd symmetry of the force law.
        let f = gsm_force(&params, y).unwrap();
        let fm = gsm_force(&params, -y).unwrap();
        worst_odd = worst_odd.max((f + fm).abs() / f.abs().max(1.0));
    }
    pass &= worst_fd <= 1e-6 && worst_odd <= 1e-12;
    // QZS iff K1 = 2 K2 at B = 0.
    pass &= GsmParams::new(100.0, 50.0, 0.0, 0.2).unwrap().is_quasi_zero();
    pass &= !GsmParams::new(100.0, 49.0, 0.0, 0.2).unwrap().is_quasi_zero();
    pass &= !GsmParams::new(100.0, 50.0, 0.01, 0.2).unwrap().is_quasi_zero();
    verdict(
        8,
        "spring assembly laws",
        pass,
        &format!("FD stiffness err {worst_fd:.2e}, odd-symmetry err {worst_odd:.2e}"),
    );
}

#[test]
fn criterion_9_scaling_covariance() {
    let base = duffing_set();
    let mut worst = 0.0f64;
    for c in [0.5, 3.0, 10.0] {
        let problem = DesignProblem::new(
            Arc::new(ForceSpec::polynomial(vec![0.0, 0.0, 0.0, 5000.0 * c]).unwrap()),
            100.0 * c,
            0.1,
            0.2,
        )
        .unwrap();
        let scaled = design_branches(&problem).unwrap();
        assert_eq!(base.branches.len(), scaled.branches.len());
        for (a, b) in base.branches.iter().zip(&scaled.branches) {
            assert_eq!(a.label, b.label);
            worst = worst.max((a.domain.x_lo - b.domain.x_lo).abs() / a.domain.x_lo.abs().max(1e-300));
            worst = worst.max((a.domain.x_hi - b.domain.x_hi).abs() / a.domain.x_hi.abs().max(1e-300));
            for i in 1..=9 {
                let x = a.domain.x_lo + (a.domain.x_hi - a.domain.x_lo) * i as f64 / 10.0;
                let (ya, yb) = (a.eval(x).unwrap(), b.eval(x).unwrap());
                worst = worst.max((ya - yb).abs() / ya.abs().max(1e-300));
            }
        }
    }
    let pass = worst <= 1e-12;
    verdict(9, "scaling covariance", pass, &format!("worst relative deviation {worst:.2e}"));
}
