//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::ExitCode;
use std::time::Instant;

use ecp_core::casimir::{
    cp_energy, cp_energy_continuum, decay_profile, decay_rate, ecp_force, force_curve,
};
use ecp_core::cli::{main_with_args, parse_csv, Cell};
use ecp_core::lattice::{brillouin_modes, dispersion, SymmetricSystem};
use ecp_core::oracle::{cp_energy_quadrature, diagonalize_symmetric};
use ecp_core::perturbation::{symmetric_spectrum_closed, symmetric_spectrum_ksum};
use ecp_core::thermal::thermal_force;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Self {
            passed,
            summary: summary.into(),
            details: Vec::new(),
        }
    }

    fn with_details(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }
}

fn system(delta: f64, j: f64, lambda: f64, n: usize) -> SymmetricSystem {
    SymmetricSystem::from_detuning(1.0, delta, j, lambda, n).expect("valid parameters")
}

fn rel(x: f64, reference: f64) -> f64 {
    ((x - reference) / reference).abs()
}

fn closed_vs_quadrature() -> Outcome {
    let mut worst: f64 = 0.0;
    for j in [0.3, 0.4] {
        let sys = system(-1.0, j, 0.01, 400);
        for r in 1..=20 {
            match cp_energy_quadrature(&sys, r) {
                Ok(q) => worst = worst.max(rel(q, cp_energy(&sys, r).unwrap())),
                Err(e) => {
                    return Outcome::new(
                        false,
                        format!("quadrature failed at J = {j}, R = {r}: {e}"),
                    )
                }
            }
        }
    }
    Outcome::new(
        worst < 1e-9,
        format!("max relative error {worst:.2e} over J in {{0.3, 0.4}}, R = 1..20 (< 1e-9)"),
    )
}

fn closed_vs_ksum() -> Outcome {
    let sys = system(-1.0, 0.3, 0.01, 2000);
    let mut worst: f64 = 0.0;
    for r in 1..=20 {
        let ksum = symmetric_spectrum_ksum(&sys, r).unwrap();
        let (ep, em) = symmetric_spectrum_closed(&sys, r).unwrap();
        worst = worst.max(rel(ksum.e_plus, ep)).max(rel(ksum.e_minus, em));
    }
    Outcome::new(
        worst < 1e-8,
        format!("N = 2000, max relative error on E+ and E- {worst:.2e} over R = 1..20 (< 1e-8)"),
    )
}

fn ed_oracle() -> Outcome {
    let start = Instant::now();
    let sys = system(-1.0, 0.3, 0.01, 400);
    let ed = match diagonalize_symmetric(&sys, 1) {
        Ok(ed) => ed,
        Err(e) => return Outcome::new(false, format!("diagonalization failed: {e}")),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let err = rel(ed.splitting(), 8.3333e-5);
    let passed = err < 0.01 && ed.ground_impurity_overlap > 0.999 && elapsed < 60.0;
    Outcome::new(
        passed,
        format!(
            "dim {}: splitting {:.6e} (rel. error {err:.2e} < 1e-2), overlap {:.6} (> 0.999), {elapsed:.1} s (< 60 s)",
            ed.spectrum.len(),
            ed.splitting(),
            ed.ground_impurity_overlap
        ),
    )
}

fn exponential_law() -> Outcome {
    let sys = system(-1.0, 0.3, 0.01, 100);
    let points: Vec<(f64, f64)> = (1..=10)
        .map(|r| (r as f64, ecp_force(&sys, r).unwrap().abs().ln()))
        .collect();
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let gamma = -sxy / sxx;
    let err = (gamma - 3f64.ln()).abs();
    Outcome::new(
        err < 1e-8,
        format!(
            "a = {}: fitted Γ = {gamma:.15}, |Γ − ln 3| = {err:.2e} (< 1e-8)",
            sys.band_parameter()
        ),
    )
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn monotonicity() -> Outcome {
    let mut failures = Vec::new();
    let hoppings = linspace(0.005, 0.495, 100);
    for r in [1, 2, 5] {
        let f: Vec<f64> = hoppings
            .iter()
            .map(|&j| ecp_force(&system(-1.0, j, 0.01, 50), r).unwrap().abs())
            .collect();
        if !f.windows(2).all(|w| w[1] > w[0]) {
            failures.push(format!("|f| not strictly increasing in J at R = {r}"));
        }
    }
    let detunings = linspace(-1.25, -5.0, 100);
    for r in [1, 2, 5] {
        let f: Vec<f64> = detunings
            .iter()
            .map(|&d| ecp_force(&system(d, 0.6, 0.01, 50), r).unwrap().abs())
            .collect();
        if !f.windows(2).all(|w| w[1] < w[0]) {
            failures.push(format!("|f| not strictly decreasing in |Δ| at R = {r}"));
        }
    }
    let gammas: Vec<f64> = linspace(-0.99, -0.01, 100)
        .into_iter()
        .map(|a| decay_rate(a).unwrap())
        .collect();
    if !gammas.windows(2).all(|w| w[1] > w[0]) {
        failures.push("Γ not strictly increasing in a".into());
    }
    let summary = "|f| vs J (100 pts, R = 1, 2, 5), |f| vs |Δ| (100 pts, J = 0.6), Γ vs a (100 pts in [-0.99, -0.01])";
    Outcome::new(failures.is_empty(), summary).with_details(failures)
}

fn continuum() -> Outcome {
    let gap_of = |j: f64| {
        let sys = system(-1.0, j, 0.01, 100);
        let b = cp_energy_continuum(&sys, 1).unwrap().b;
        let gamma = decay_profile(&sys).unwrap().gamma;
        (b, gamma, rel(b, gamma))
    };
    let (b1, g1, near) = gap_of(0.45);
    let (b2, g2, far) = gap_of(0.3);
    Outcome::new(
        near < 0.02 && far > 0.04,
        format!(
            "J = 0.45: b = {b1:.5}, Γ = {g1:.5}, gap {:.2}% (< 2%); J = 0.3: b = {b2:.5}, Γ = {g2:.5}, gap {:.2}% (> 4%)",
            100.0 * near,
            100.0 * far
        ),
    )
}

fn thermal_limits() -> Outcome {
    let mut details = Vec::new();
    let sys = system(-1.0, 0.3, 0.1, 200);
    let mut worst_cold: f64 = 0.0;
    for r in 1..=10 {
        let f_t = thermal_force(&sys, 1e-6, r).unwrap();
        let f = ecp_force(&sys, r).unwrap();
        let err = rel(f_t, f);
        worst_cold = worst_cold.max(err);
        if err >= 1e-6 {
            details.push(format!(
                "T = 1e-6, R = {r}: relative deviation {err:.2e} >= 1e-6 (level splitting 2|E_cp| = {:.2e} = {:.1} T)",
                2.0 * cp_energy(&sys, r).unwrap().abs(),
                2.0 * cp_energy(&sys, r).unwrap().abs() / 1e-6
            ));
        }
    }
    let mut ordering_ok = true;
    for n in [100, 200, 400] {
        let sys = system(-1.0, 0.3, 0.1, n);
        for r in 1..=8 {
            let f: Vec<f64> = [0.0, 0.1, 1.0]
                .iter()
                .map(|&t| thermal_force(&sys, t, r).unwrap().abs())
                .collect();
            if !(f[0] >= f[1] && f[1] >= f[2]) {
                ordering_ok = false;
                details.push(format!(
                    "N = {n}, R = {r}: |f_T| at T = 0, 0.1, 1 = {f:?} not ordered"
                ));
            }
        }
    }
    Outcome::new(
        worst_cold < 1e-6 && ordering_ok,
        format!(
            "zero-T limit at T = 1e-6 over R = 1..10: max rel. deviation {worst_cold:.2e} (< 1e-6); \
             ordering |f(0)| >= |f(0.1)| >= |f(1)| for R = 1..8, N in {{100, 200, 400}}: {}",
            if ordering_ok { "holds" } else { "violated" }
        ),
    )
    .with_details(details)
}

fn degenerate_cases() -> Outcome {
    let mut failures = Vec::new();
    let flat = system(-1.0, 0.0, 0.01, 50);
    for r in 1..=10 {
        if cp_energy(&flat, r).unwrap() != 0.0 || ecp_force(&flat, r).unwrap() != 0.0 {
            failures.push(format!("J = 0: nonzero energy or force at R = {r}"));
        }
    }
    let gamma = decay_profile(&flat).unwrap().gamma;
    if !(gamma.is_infinite() && gamma > 0.0) {
        failures.push(format!("J = 0: Γ = {gamma}, expected +inf"));
    }

    let free = system(-1.0, 0.3, 0.0, 50);
    let ed = diagonalize_symmetric(&free, 3).unwrap();
    let mut expected: Vec<f64> = brillouin_modes(free.chain())
        .iter()
        .map(|&k| dispersion(free.chain(), k))
        .collect();
    expected.extend([free.eps0(), free.eps0()]);
    expected.sort_by(f64::total_cmp);
    let worst = ed
        .spectrum
        .iter()
        .zip(&expected)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    if worst > 1e-13 {
        failures.push(format!(
            "λ = 0: ED spectrum deviates from decoupled union by {worst:.2e}"
        ));
    }
    Outcome::new(
        failures.is_empty(),
        format!("J = 0: E_cp = f = 0 for R = 1..10, Γ = {gamma}; λ = 0: ED vs decoupled spectrum max deviation {worst:.1e}"),
    )
    .with_details(failures)
}

fn determinism_and_round_trip() -> Outcome {
    let args = [
        "ecp",
        "--J",
        "0.3,0.4",
        "--delta",
        "-1",
        "--lambda",
        "0.01",
        "--mode",
        "force-sweep",
        "--rmax",
        "10",
    ];
    let run = || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with_args(args, &mut out, &mut err);
        (code, out)
    };
    let (c1, first) = run();
    let (c2, second) = run();
    if c1 != 0 || c2 != 0 {
        return Outcome::new(false, format!("CLI exited with {c1} / {c2}"));
    }
    let identical = first == second;
    let table = match parse_csv(std::str::from_utf8(&first).unwrap()) {
        Ok(t) => t,
        Err(e) => return Outcome::new(false, format!("re-parse failed: {e}")),
    };
    let mut expected = Vec::new();
    for j in [0.3, 0.4] {
        let curve = force_curve(&system(-1.0, j, 0.01, 400), 1, 10).unwrap();
        expected.extend(curve.records.into_iter().map(|p| (j, p)));
    }
    let (ji, ri, ei, fi) = (
        table.column_index("J").unwrap(),
        table.column_index("R").unwrap(),
        table.column_index("E_cp").unwrap(),
        table.column_index("f").unwrap(),
    );
    let exact = table.rows.len() == expected.len()
        && table.rows.iter().zip(&expected).all(|(row, (j, p))| {
            row[ji] == Cell::Real(*j)
                && row[ri] == Cell::Int(p.separation as i64)
                && row[ei] == Cell::Real(p.energy)
                && row[fi] == Cell::Real(p.force)
        });
    Outcome::new(
        identical && exact,
        format!(
            "two runs {} ({} bytes); {} re-parsed rows {} the in-memory curves bit for bit",
            if identical {
                "byte-identical"
            } else {
                "differ"
            },
            first.len(),
            table.rows.len(),
            if exact { "match" } else { "do not match" }
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed form vs quadrature", closed_vs_quadrature),
        ("closed form vs k-sum", closed_vs_ksum),
        ("exact-diagonalization oracle", ed_oracle),
        ("exponential decay law", exponential_law),
        ("monotonicity", monotonicity),
        ("continuum approximation", continuum),
        ("thermal limits", thermal_limits),
        ("degenerate cases", degenerate_cases),
        ("determinism and CSV round-trip", determinism_and_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {}", i + 1, outcome.summary);
        for line in &outcome.details {
            println!("       {line}");
        }
        if !outcome.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
