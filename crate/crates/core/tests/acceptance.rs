//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ndwu_core::boxes::{noisy_family, FamilyPoint, JointOrder};
use ndwu_core::campaign::{
    quantum_criterion_fuzz, symmetry_fuzz, theorem1_fuzz, tsirelson_ndwu, TsirelsonConfig,
};
use ndwu_core::criteria::{
    boundary_bisect, ic_family_boundary, ndwu_family_boundary, npa_family_boundary2, npa_tlm, Criterion,
    IcFamilyForm, NpaFamilyForm,
};
use ndwu_core::ndwu::criterion;
use ndwu_core::quantum::{verify_theorem1, DensityMatrix, SharpBasis, TwoQubitSetup};
use ndwu_core::reproduce::{AqcReport, Table1};
use num_complex::Complex64;

const SEED: u64 = 20_240_601;

type Check = fn() -> Verdict;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn theorem1() -> Verdict {
    let start = Instant::now();
    let s = theorem1_fuzz(100_000, &[2, 3, 4, 5], SEED).expect("campaign runs");
    let elapsed = start.elapsed();
    let s2 = FRAC_1_SQRT_2;
    let plus = DensityMatrix::pure(&[Complex64::new(s2, 0.0), Complex64::new(s2, 0.0)]).unwrap();
    let w = verify_theorem1(&plus, &SharpBasis::qubit_z(), &SharpBasis::qubit_x()).unwrap();
    let gap = (w.lhs - w.rhs).abs();
    verdict(
        s.failures == 0 && s.min_slack >= -1e-9 && gap < 1e-12 && elapsed < Duration::from_secs(60),
        format!(
            "{} trials, {} failures, min slack {:.3e}, witness gap {gap:.1e}, {:.1}s",
            s.trials,
            s.failures,
            s.min_slack,
            secs(elapsed)
        ),
    )
}

fn symmetry() -> Verdict {
    let s = symmetry_fuzz(10_000, &[2, 3, 4, 5], SEED).expect("campaign runs");
    verdict(
        s.passed(),
        format!("{} basis pairs, {} above 1e-12", s.trials, s.failures),
    )
}

fn tsirelson() -> Verdict {
    let s = tsirelson_ndwu(TsirelsonConfig::new(100_000, SEED)).expect("search runs");
    let singlet = TwoQubitSetup::tsirelson().behavior().unwrap();
    let gap = (singlet.chsh() - 2.0 * SQRT_2).abs();
    verdict(
        s.violations == 0 && gap < 1e-9 && criterion(&singlet).overall,
        format!(
            "{} samples ({} accepted), best accepted |CHSH| {:.9}, {} above 2√2+1e-6, singlet gap {gap:.1e}",
            s.samples, s.accepted, s.max_abs_chsh, s.violations
        ),
    )
}

fn quantum() -> Verdict {
    let start = Instant::now();
    let s = quantum_criterion_fuzz(10_000, SEED).expect("campaign runs");
    let elapsed = start.elapsed();
    verdict(
        s.passed() && elapsed < Duration::from_secs(30),
        format!(
            "{} two-qubit behaviors, {} failures, min slack {:.3e}, {:.1}s",
            s.trials,
            s.failures,
            s.min_slack,
            secs(elapsed)
        ),
    )
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn boundary1() -> Verdict {
    let mut worst_ray = 0.0_f64;
    for dir in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] {
        let t = boundary_bisect(|p| Criterion::Ndwu.verdict(p), [0.0; 3], dir, 1e-13).unwrap();
        worst_ray = worst_ray.max((t - FRAC_1_SQRT_2).abs());
    }
    let (mut points, mut far) = (0usize, 0usize);
    for &a in &grid(400) {
        for &b in &grid(400) {
            let Ok(p) = FamilyPoint::new(a, b, 0.0) else {
                continue;
            };
            points += 1;
            let circle = a * a + b * b <= 0.5;
            if ndwu_family_boundary(p) != circle && ((a * a + b * b).sqrt() - FRAC_1_SQRT_2).abs() > 1e-7 {
                far += 1;
            }
        }
    }
    verdict(
        worst_ray <= 1e-9 && far == 0,
        format!("axis crossings within {worst_ray:.1e} of 1/√2, {points} grid points, {far} disagreements off the circle"),
    )
}

fn boundary2_ordering() -> Verdict {
    let (mut ndwu_not_npa, mut npa_not_ic, mut closed_vs_ndwu, mut npa_forms) = (0, 0, 0, 0);
    let mut strict_npa: Option<(f64, f64)> = None;
    let mut strict_ic: Option<(f64, f64)> = None;
    for &a in &grid(400) {
        for &t in &grid(400) {
            let Ok(p) = FamilyPoint::new(a, 0.0, t) else {
                continue;
            };
            let b = noisy_family(p).unwrap();
            let ndwu = ndwu_family_boundary(p);
            let npa = npa_tlm(&b);
            let ic = ic_family_boundary(a, t, IcFamilyForm::Corrected);
            if ndwu && !npa {
                ndwu_not_npa += 1;
            }
            if npa && !ic {
                npa_not_ic += 1;
            }
            if npa && !ndwu && strict_npa.is_none() {
                strict_npa = Some((a, t));
            }
            if ic && !npa && strict_ic.is_none() {
                strict_ic = Some((a, t));
            }
            if Criterion::Boundary2.verdict(p) != ndwu {
                closed_vs_ndwu += 1;
            }
            if npa_family_boundary2(a, t, NpaFamilyForm::Derived) != npa {
                npa_forms += 1;
            }
        }
    }
    let pass = ndwu_not_npa == 0
        && npa_not_ic == 0
        && strict_npa.is_some()
        && strict_ic.is_some()
        && closed_vs_ndwu == 0;
    verdict(
        pass,
        format!(
            "NDWU⊄NPA at {ndwu_not_npa}, NPA⊄IC at {npa_not_ic}, strict NPA witness {strict_npa:?}, strict IC witness {strict_ic:?}, boundary-2 mismatches {closed_vs_ndwu}, closed-form NPA mismatches {npa_forms}"
        ),
    )
}

/// True if the closed-form verdict changes within `eps` of `p` along an axis.
fn near_surface(p: FamilyPoint, eps: f64) -> bool {
    let here = ndwu_family_boundary(p);
    let c = [p.alpha, p.beta, p.tau];
    (0..3).any(|k| {
        [-eps, eps].iter().any(|d| {
            let mut q = c;
            q[k] += d;
            FamilyPoint::new(q[0], q[1], q[2]).is_ok_and(|q| ndwu_family_boundary(q) != here)
        })
    })
}

fn generic_vs_closed() -> Verdict {
    let start = Instant::now();
    let alphas = grid(100);
    let taus: Vec<f64> = (0..20).map(|k| 0.95 * k as f64 / 19.0).collect();
    let (mut points, mut disagree, mut far) = (0usize, 0usize, 0usize);
    for &a in &alphas {
        for &b in &alphas {
            for &t in &taus {
                let Ok(p) = FamilyPoint::new(a, b, t) else {
                    continue;
                };
                points += 1;
                if Criterion::Ndwu.verdict(p) != Criterion::NdwuGeneric.verdict(p) {
                    disagree += 1;
                    if !near_surface(p, 1e-7) {
                        far += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        far == 0 && elapsed < Duration::from_secs(120),
        format!(
            "{points} points, {disagree} disagreements, {far} farther than 1e-7 from the surface, {:.1}s",
            secs(elapsed)
        ),
    )
}

fn aqc() -> Verdict {
    let r = AqcReport::compute(JointOrder::AsListed);
    let checked = r.check_reference();
    verdict(
        checked.is_ok(),
        format!(
            "max_lhs {:.6} ({}), min_rhs {:.6} ({}), NDWU {}, NPA {}{}",
            r.max_lhs,
            r.max_lhs_rounded,
            r.min_rhs,
            r.min_rhs_rounded,
            if r.ndwu_violated { "violated" } else { "satisfied" },
            if r.npa_satisfied { "satisfied" } else { "violated" },
            checked.err().map(|e| format!(": {e}")).unwrap_or_default()
        ),
    )
}

fn table1() -> Verdict {
    let table = Table1::compute(20_000, SEED).expect("table computes");
    let checked = table.verify_against_reference();
    let rows: Vec<String> = table
        .to_string()
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect();
    verdict(
        checked.is_ok(),
        format!(
            "{}{}",
            rows.join(" / "),
            checked.err().map(|e| format!(": {e}")).unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("theorem 1 fuzz", theorem1),
        ("transfer symmetry", symmetry),
        ("Tsirelson bound", tsirelson),
        ("quantum consistency", quantum),
        ("boundary 1", boundary1),
        ("boundary 2 ordering", boundary2_ordering),
        ("closed form vs generic", generic_vs_closed),
        ("AQC exclusion", aqc),
        ("table I", table1),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {} [{name}]: {}: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
