//! The named verification suite behind `qcap verify`: seeded oracle and
//! property checks spanning every module, each reported as one pass/fail
//! line. All expected relations here have an independent route (brute-force
//! averages, dense grid scans, closed forms vs. generic entropy paths).

use crate::bounds::{dep4_bound_curve, dep4_x_of_p, main_theorem_bound, sweep_curve, SweepKind};
use crate::capacity::{
    capacity_diagonal_program, coherent_information, diagonal_coherent_information,
    diagonal_coherent_information_gradient, verify_diagonal_sufficiency, OptimizerConfig,
};
use crate::channel::{
    check_covariance, diagonal_pauli_group, make_degrading_map, make_depolarizing_4,
    make_pauli_channel, make_phi_a, make_phi_xyz, make_qubit_amplitude_damping, ChannelParamsXYZ,
    KrausChannel,
};
use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::pauli::{basis_identity_defects, PauliString};
use crate::sampling;
use crate::twirl::{
    local_clifford_twirl, local_clifford_twirl_bruteforce, pauli_twirl, pauli_twirl_bruteforce,
    phi_xyz_twirl_weight_masses, PauliChannel,
};
use crate::von_neumann_entropy;
use rayon::prelude::*;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Runs the whole suite with the given seed. `corrupt` names a check whose
/// tolerance is replaced by −1 (an unsatisfiable bound), used to exercise
/// the failure path of the harness.
pub fn run_verification(seed: u64, corrupt: Option<&str>) -> Vec<CheckReport> {
    let tol = |name: &str, base: f64| if corrupt == Some(name) { -1.0 } else { base };
    #[allow(clippy::type_complexity)]
    let checks: Vec<(&'static str, Box<dyn Fn(f64) -> (bool, String)>)> = vec![
        ("cpt-constructors", Box::new(move |t| check_cpt(seed, t))),
        (
            "complement-parameters",
            Box::new(move |t| check_complement_parameters(seed, t)),
        ),
        (
            "complement-involution",
            Box::new(move |t| check_complement_involution(seed, t)),
        ),
        (
            "degradability-identity",
            Box::new(move |t| check_degradability(seed, t)),
        ),
        (
            "complement-output-rotation",
            Box::new(move |t| check_output_rotation(seed, t)),
        ),
        (
            "pauli-twirl-routes",
            Box::new(move |t| check_twirl_routes(seed, t)),
        ),
        ("twirl-weight-classes", Box::new(check_twirl_weight_classes)),
        (
            "local-twirl-routes",
            Box::new(move |t| check_local_twirl_routes(seed, t)),
        ),
        (
            "covariance-invariance",
            Box::new(move |t| check_covariance_invariance(seed, t)),
        ),
        ("pauli-identities", Box::new(check_identities)),
        (
            "capacity-anchors",
            Box::new(move |t| check_capacity_anchors(seed, t)),
        ),
        (
            "capacity-vs-grid",
            Box::new(move |t| check_capacity_vs_grid(seed, t)),
        ),
        (
            "diagonal-sufficiency",
            Box::new(move |t| check_diagonal_sufficiency(seed, t)),
        ),
        (
            "twirl-sandwich",
            Box::new(move |t| check_twirl_sandwich(seed, t)),
        ),
        ("dep4-curve", Box::new(check_dep4_curve)),
        ("curve-determinism", Box::new(check_curve_determinism)),
    ];

    let mut reports = Vec::with_capacity(checks.len());
    for (name, body) in checks {
        let base = base_tolerance(name);
        let (passed, detail) = body(tol(name, base));
        reports.push(CheckReport {
            name,
            passed,
            detail,
        });
    }
    reports
}

fn base_tolerance(name: &str) -> f64 {
    match name {
        "cpt-constructors" => 1e-10,
        "twirl-weight-classes" => 1e-10,
        "covariance-invariance" => 1e-10,
        "pauli-identities" => 1e-15,
        "capacity-vs-grid" => 2e-4,
        "diagonal-sufficiency" => 1e-8,
        "capacity-anchors" => 1e-9,
        "twirl-sandwich" => 1e-9,
        "dep4-curve" => 1e-9,
        "curve-determinism" => 0.0,
        _ => 1e-9,
    }
}

fn check_cpt(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed);
    let mut worst = 0.0f64;
    let mut count = 0usize;
    let mut record = |ch: Result<KrausChannel>| {
        count += 1;
        match ch {
            Ok(ch) => {
                let mut sum = ComplexMatrix::zeros(ch.in_dim(), ch.in_dim());
                for op in ch.kraus_ops() {
                    sum = &sum + &(&op.dagger() * op);
                }
                let defect = sum.max_diff(&ComplexMatrix::identity(ch.in_dim()));
                worst = worst.max(defect);
            }
            Err(_) => worst = f64::INFINITY,
        }
    };
    for _ in 0..50 {
        record(make_phi_a(&sampling::random_phi_a_coeffs(&mut rng)));
    }
    for _ in 0..50 {
        record(make_phi_xyz(&sampling::random_valid_xyz(&mut rng)));
    }
    for _ in 0..50 {
        let probs = sampling::random_pauli_channel_probs(&mut rng, 2);
        record(make_pauli_channel(2, &probs));
    }
    for _ in 0..50 {
        use rand::Rng;
        record(make_depolarizing_4(rng.gen_range(0.0..1.0)));
    }
    (
        worst <= tol,
        format!("{count} constructions, worst ‖ΣA†A − 1‖ = {worst:.2e} (tol {tol:.0e})"),
    )
}

fn check_complement_parameters(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(1));
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = sampling::random_valid_xyz(&mut rng);
        let direct = make_phi_xyz(&p).unwrap().complementary();
        let swapped = make_phi_xyz(&p.complement()).unwrap();
        worst = worst.max(direct.choi().max_diff(&swapped.choi()));
    }
    (
        worst <= tol,
        format!("100 draws, worst Choi distance {worst:.2e} (tol {tol:.0e})"),
    )
}

fn check_complement_involution(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(2));
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let a = sampling::random_phi_a_coeffs(&mut rng);
        let ch = make_phi_a(&a).unwrap();
        let twice = ch.complementary().complementary();
        worst = worst.max(ch.choi().max_diff(&twice.choi()));
    }
    (
        worst <= tol,
        format!("50 draws, worst double-complement Choi distance {worst:.2e}"),
    )
}

fn check_degradability(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(3));
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = sampling::random_degradable_xyz(&mut rng);
        let phi = make_phi_xyz(&p).unwrap();
        let composed = make_degrading_map(&p).unwrap().compose(&phi).unwrap();
        worst = worst.max(composed.choi().max_diff(&phi.complementary().choi()));
    }
    (
        worst <= tol,
        format!("100 degradable draws, worst Choi distance {worst:.2e}"),
    )
}

fn check_output_rotation(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(4));
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = sampling::random_valid_xyz(&mut rng);
        let phi = make_phi_xyz(&p).unwrap();
        let v = sampling::random_pauli_unitary(&mut rng, 2);
        let rotated = KrausChannel::new(
            phi.kraus_ops()
                .iter()
                .map(|a| v.matmul(a).unwrap())
                .collect(),
        )
        .unwrap();
        worst = worst.max(
            rotated
                .complementary()
                .choi()
                .max_diff(&phi.complementary().choi()),
        );
    }
    (
        worst <= tol,
        format!("50 rotated channels, worst complement Choi distance {worst:.2e}"),
    )
}

fn check_twirl_routes(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(5));
    let mut worst = 0.0f64;
    for m in 1..=2usize {
        let dim = 1 << m;
        for _ in 0..25 {
            let ch = sampling::random_channel(&mut rng, dim, dim);
            let formula = pauli_twirl(&ch).unwrap().to_kraus_channel().unwrap();
            let brute = pauli_twirl_bruteforce(&ch).unwrap();
            worst = worst.max(formula.choi().max_diff(&brute.choi()));
        }
    }
    (
        worst <= tol,
        format!("50 channels, worst formula-vs-bruteforce Choi distance {worst:.2e}"),
    )
}

fn check_twirl_weight_classes(tol: f64) -> (bool, String) {
    let mut worst = 0.0f64;
    for i in 0..5 {
        let x = 0.9 * i as f64 / 4.0;
        for j in 0..5 {
            let y = 0.45 * j as f64 / 4.0;
            for k in 0..5 {
                let z = (0.95 - 2.0 * y) * k as f64 / 4.0;
                let p = ChannelParamsXYZ::new(x, y, z);
                let twirled = pauli_twirl(&make_phi_xyz(&p).unwrap()).unwrap();
                let masses = twirled.weight_class_masses();
                let closed = phi_xyz_twirl_weight_masses(&p).unwrap();
                for (got, want) in masses[..3].iter().zip(closed) {
                    worst = worst.max((got - want).abs());
                }
            }
        }
    }
    (
        worst <= tol,
        format!("125 grid points, worst weight-class deviation {worst:.2e}"),
    )
}

fn check_local_twirl_routes(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(6));
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let probs = sampling::random_pauli_channel_probs(&mut rng, 2);
        let pc = PauliChannel::new(2, probs).unwrap();
        let formula = local_clifford_twirl(&pc).unwrap();
        let brute = local_clifford_twirl_bruteforce(&pc.to_kraus_channel().unwrap()).unwrap();
        worst = worst.max(
            formula
                .to_kraus_channel()
                .unwrap()
                .choi()
                .max_diff(&brute.choi()),
        );
        // idempotence at the Choi level
        let twice = local_clifford_twirl(&formula).unwrap();
        worst = worst.max(
            formula
                .to_kraus_channel()
                .unwrap()
                .choi()
                .max_diff(&twice.to_kraus_channel().unwrap().choi()),
        );
    }
    (
        worst <= tol,
        format!("50 Pauli channels, worst local-twirl Choi distance {worst:.2e}"),
    )
}

fn check_covariance_invariance(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(7));
    let mut worst = 0.0f64;
    let mut covariant = true;
    for trial in 0..10 {
        let p = sampling::random_valid_xyz(&mut rng);
        let phi = make_phi_xyz(&p).unwrap();
        covariant &= check_covariance(&phi, 5, seed.wrapping_add(100 + trial)).unwrap();
        covariant &=
            check_covariance(&phi.complementary(), 5, seed.wrapping_add(200 + trial)).unwrap();
        // invariance of the coherent information under diagonal signs
        let lambdas = diagonal_pauli_group(2).unwrap();
        let rho = sampling::random_density_matrix(&mut rng, 4);
        let base = coherent_information(&phi, &rho).unwrap();
        for lambda in &lambdas {
            let conj = lambda.conjugate(&rho).unwrap();
            worst = worst.max((coherent_information(&phi, &conj).unwrap() - base).abs());
        }
    }
    (
        covariant && worst <= tol,
        format!("covariant = {covariant}, worst I_coh shift {worst:.2e}"),
    )
}

fn check_identities(tol: f64) -> (bool, String) {
    let defects = basis_identity_defects();
    let worst = defects.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    (
        worst <= tol,
        format!("{} identities, worst defect {worst:.2e}", defects.len()),
    )
}

fn check_capacity_anchors(seed: u64, tol: f64) -> (bool, String) {
    let cfg = OptimizerConfig::default();
    let identity = capacity_diagonal_program(&ChannelParamsXYZ::new(0.0, 0.0, 0.0), &cfg).unwrap();
    let identity_err = (identity.value - 2.0).abs();

    // analytic gradient vs central finite differences
    let mut rng = sampling::seeded_rng(seed.wrapping_add(8));
    let mut grad_err = 0.0f64;
    for _ in 0..5 {
        use rand::Rng;
        let p = sampling::random_degradable_xyz(&mut rng);
        let raw: [f64; 4] = [
            rng.gen_range(0.05..1.0),
            rng.gen_range(0.05..1.0),
            rng.gen_range(0.05..1.0),
            rng.gen_range(0.05..1.0),
        ];
        let total: f64 = raw.iter().sum();
        let point = raw.map(|v| v / total);
        let grad = diagonal_coherent_information_gradient(&p, &point).unwrap();
        for i in 0..4 {
            let h = 1e-6;
            let mut plus = point;
            plus[i] += h;
            let mut minus = point;
            minus[i] -= h;
            let fd = (diagonal_coherent_information(&p, &plus).unwrap()
                - diagonal_coherent_information(&p, &minus).unwrap())
                / (2.0 * h);
            grad_err = grad_err.max((grad[i] - fd).abs());
        }
    }

    // tensor factorization: program value doubles the qubit capacity
    let mut factor_err = 0.0f64;
    for gamma in [0.1, 0.2, 0.3, 0.4] {
        let params = ChannelParamsXYZ::new(gamma, gamma * (1.0 - gamma), gamma * gamma);
        let program = capacity_diagonal_program(&params, &cfg).unwrap().value;
        let single = qubit_ad_capacity_scan(gamma);
        factor_err = factor_err.max((program - 2.0 * single).abs());
    }

    let passed = identity_err <= tol && grad_err <= tol.max(1e-5) && factor_err <= tol.max(5e-4);
    (
        passed,
        format!(
            "identity err {identity_err:.2e}, gradient err {grad_err:.2e}, factorization err {factor_err:.2e}"
        ),
    )
}

/// Independent dimension-2 oracle: two-stage scan of the qubit damping
/// channel's coherent information over diagonal inputs diag(1−t, t).
pub fn qubit_ad_capacity_scan(gamma: f64) -> f64 {
    let ch = make_qubit_amplitude_damping(gamma).expect("valid damping parameter");
    let comp = ch.complementary();
    let icoh = |t: f64| -> f64 {
        let rho = ComplexMatrix::from_real_diagonal(&[1.0 - t, t]);
        von_neumann_entropy(&ch.apply(&rho).unwrap()).unwrap()
            - von_neumann_entropy(&comp.apply(&rho).unwrap()).unwrap()
    };
    let mut best = f64::NEG_INFINITY;
    let mut best_t = 0.0;
    for k in 0..=2000 {
        let t = k as f64 / 2000.0;
        let v = icoh(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let lo = (best_t - 1e-3).max(0.0);
    let hi = (best_t + 1e-3).min(1.0);
    for k in 0..=2000 {
        best = best.max(icoh(lo + (hi - lo) * k as f64 / 2000.0));
    }
    best.max(0.0)
}

/// Dense simplex grid maximum of the diagonal coherent information at the
/// given step, evaluated through its own inline closed form. Brute force by
/// construction; parallel over the first coordinate.
pub fn capacity_grid_oracle(p: &ChannelParamsXYZ, step: f64) -> Result<f64> {
    p.validate_channel()?;
    let n = (1.0 / step).round() as usize;
    let (x, y, z) = (p.x, p.y, p.z);
    let s1sq = 1.0 - x;
    let s2sq = 1.0 - 2.0 * y - z;
    let eta = |w: f64| if w <= 0.0 { 0.0 } else { -w * w.log2() };

    let best = (0..=n)
        .into_par_iter()
        .map(|i| {
            let p1 = i as f64 / n as f64;
            let mut local = f64::NEG_INFINITY;
            for j in 0..=(n - i) {
                let p2 = j as f64 / n as f64;
                for k in 0..=(n - i - j) {
                    let p3 = k as f64 / n as f64;
                    let p4 = 1.0 - p1 - p2 - p3;
                    let value = eta(p1 + p2 * x + p3 * x + p4 * z)
                        + eta(p2 * s1sq + p4 * y)
                        + eta(p3 * s1sq + p4 * y)
                        + eta(p4 * s2sq)
                        - eta(p1 + p2 * s1sq + p3 * s1sq + p4 * s2sq)
                        - eta(p2 * x + p4 * y)
                        - eta(p3 * x + p4 * y)
                        - eta(p4 * z);
                    if value > local {
                        local = value;
                    }
                }
            }
            local
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(best)
}

fn check_capacity_vs_grid(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(9));
    let cfg = OptimizerConfig::default();
    let mut worst_above = 0.0f64; // optimizer above grid is fine up to slack
    let mut worst_below = 0.0f64; // optimizer below grid means a missed optimum
    for _ in 0..6 {
        let p = sampling::random_degradable_xyz(&mut rng);
        let program = capacity_diagonal_program(&p, &cfg).unwrap().value;
        let grid = capacity_grid_oracle(&p, 0.002).unwrap();
        worst_above = worst_above.max(program - grid);
        worst_below = worst_below.max(grid - program);
    }
    (
        worst_below <= 1e-9 && worst_above <= tol,
        format!(
            "6 points at step 0.002: optimizer-grid gap in [-{worst_below:.2e}, {worst_above:.2e}]"
        ),
    )
}

fn check_diagonal_sufficiency(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(10));
    let mut all = tol >= 0.0;
    for trial in 0..10 {
        let p = sampling::random_degradable_xyz(&mut rng);
        all &= verify_diagonal_sufficiency(&p, 200, seed.wrapping_add(300 + trial)).unwrap();
    }
    (
        all,
        "10 channels x 200 random states stayed below the diagonal optimum".to_string(),
    )
}

fn check_twirl_sandwich(seed: u64, tol: f64) -> (bool, String) {
    let mut rng = sampling::seeded_rng(seed.wrapping_add(11));
    let mixed = ComplexMatrix::identity(4).scale_real(0.25);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let p = sampling::random_degradable_xyz(&mut rng);
        let hat = pauli_twirl(&make_phi_xyz(&p).unwrap()).unwrap();
        let lower = coherent_information(&hat.to_kraus_channel().unwrap(), &mixed).unwrap();
        let upper = main_theorem_bound(&p).unwrap();
        worst = worst.max(lower - upper);
    }
    (
        worst <= tol,
        format!("50 points, max (lower − upper) = {worst:.2e}"),
    )
}

fn check_dep4_curve(tol: f64) -> (bool, String) {
    let curve = match dep4_bound_curve(0.0, 0.375, 2001) {
        Ok(c) => c,
        Err(e) => return (false, format!("curve construction failed: {e}")),
    };
    let samples = curve.samples();
    let left_err = (samples[0].1 - 2.0).abs();
    let right_err = samples[samples.len() - 1].1.abs();
    let mut convex_defect = 0.0f64;
    for t in samples.windows(3) {
        convex_defect = convex_defect.max(t[1].1 - (t[0].1 + t[2].1) / 2.0);
    }
    // identity-mass consistency of x(p)
    let mut mass_err = 0.0f64;
    for k in 0..=10 {
        let p = 0.375 * k as f64 / 10.0;
        let x = dep4_x_of_p(p).unwrap();
        let twirled =
            pauli_twirl(&make_phi_xyz(&ChannelParamsXYZ::new(x, 0.0, x)).unwrap()).unwrap();
        mass_err = mass_err.max((twirled.prob(&PauliString::identity(2)) - (1.0 - p)).abs());
    }
    let passed =
        left_err <= 1e-10 && right_err <= 1e-10 && convex_defect <= tol && mass_err <= 1e-12;
    (
        passed,
        format!(
            "endpoints ({left_err:.1e}, {right_err:.1e}), convexity defect {convex_defect:.1e}, identity-mass err {mass_err:.1e}"
        ),
    )
}

fn check_curve_determinism(tol: f64) -> (bool, String) {
    let dep_a = dep4_bound_curve(0.0, 0.375, 101).unwrap().to_csv();
    let dep_b = dep4_bound_curve(0.0, 0.375, 101).unwrap().to_csv();
    let kind = SweepKind::AmplitudeDamping {
        gmin: 0.0,
        gmax: 0.5,
        optimizer: OptimizerConfig::default(),
    };
    let ad_a = sweep_curve(&kind, 5).unwrap().to_csv();
    let ad_b = sweep_curve(&kind, 5).unwrap().to_csv();
    let equal = dep_a == dep_b && ad_a == ad_b;
    (
        equal && tol >= 0.0,
        format!("repeated renderings byte-identical: {equal}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes_with_default_seed() {
        let reports = run_verification(0, None);
        for r in &reports {
            assert!(r.passed, "check {} failed: {}", r.name, r.detail);
        }
        assert_eq!(reports.len(), 16);
    }

    #[test]
    fn corruption_hook_fails_the_named_check() {
        let reports = run_verification(0, Some("pauli-identities"));
        let target = reports
            .iter()
            .find(|r| r.name == "pauli-identities")
            .unwrap();
        assert!(!target.passed);
        // everything else still passes
        for r in &reports {
            if r.name != "pauli-identities" {
                assert!(r.passed, "{} unexpectedly failed", r.name);
            }
        }
    }
}
