//! Residue-free numerical evaluation of the CP integrals.

use std::f64::consts::PI;

use super::double_double::DoubleDouble;
use crate::error::{Error, Result};
use crate::lattice::SymmetricSystem;

/// Successive periodic-trapezoid estimates must agree to this relative level.
pub const TRAPEZOID_TOLERANCE: f64 = 1e-12;
/// Largest trapezoid mesh tried before giving up.
pub const TRAPEZOID_MAX_POINTS: usize = 1 << 22;
const TRAPEZOID_START_POINTS: usize = 16;

/// `(1/2π)∮ λ² e^{−ikR} / (Δ + 2J cos k) dk` on an M-point periodic mesh,
/// evaluated in double-double. Returns (real, imaginary).
fn trapezoid(
    sys: &SymmetricSystem,
    separation: i64,
    points: usize,
) -> (DoubleDouble, DoubleDouble) {
    let m = points as i64;
    let coupling = DoubleDouble::from_f64(sys.lambda()) * DoubleDouble::from_f64(sys.lambda());
    let delta = DoubleDouble::from_f64(sys.delta());
    let two_j = DoubleDouble::from_f64(2.0 * sys.chain().hopping());
    let mut re = DoubleDouble::ZERO;
    let mut im = DoubleDouble::ZERO;
    for j in 0..m {
        let (cos_k, _) = DoubleDouble::cos_sin_turn(j, m);
        let (cos_kr, sin_kr) = DoubleDouble::cos_sin_turn(j * separation, m);
        let weight = coupling / (delta + two_j * cos_k);
        re = re + weight * cos_kr;
        im = im - weight * sin_kr;
    }
    let norm = DoubleDouble::from_f64(points as f64);
    (re / norm, im / norm)
}

/// CP energy by direct quadrature of the Brillouin-zone integral, doubling
/// the mesh until two successive estimates agree to [`TRAPEZOID_TOLERANCE`].
///
/// `separation = 0` gives the R-independent level shift of a single impurity.
pub fn cp_energy_quadrature(sys: &SymmetricSystem, separation: usize) -> Result<f64> {
    let a = sys.band_parameter();
    if !(a > -1.0 && a < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "quadrature oracle needs a in (-1, 0), got {a}"
        )));
    }
    let scale = (sys.lambda() * sys.lambda() / sys.delta()).abs() / (1.0 - a * a).sqrt();
    let r = separation as i64;

    let mut points = TRAPEZOID_START_POINTS;
    let mut previous = trapezoid(sys, r, points).0.to_f64();
    let mut last_change = f64::INFINITY;
    while points < TRAPEZOID_MAX_POINTS {
        points *= 2;
        let (re, im) = trapezoid(sys, r, points);
        let (re, im) = (re.to_f64(), im.to_f64());
        if im.abs() > TRAPEZOID_TOLERANCE * scale {
            return Err(Error::Numerical(format!(
                "imaginary part {im:e} of the CP integral does not vanish"
            )));
        }
        last_change = ((re - previous) / re).abs();
        if last_change < TRAPEZOID_TOLERANCE || re == previous {
            return Ok(re);
        }
        previous = re;
    }
    Err(Error::NonConvergence {
        points,
        last_change,
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = (-x, w);
        rule[n - 1 - i] = (x, w);
    }
    rule
}

/// Quadratic-band CP integral over the whole real line,
/// `(1/2π)∫ λ² e^{−ikR} / (ε₀ − ω + 2J − J k²) dk`.
///
/// The oscillatory integral is summed panel by panel on `[0, K]`, with `K` a
/// whole number of periods, and the tail beyond `K` is added from its
/// leading asymptotic term.
pub fn continuum_energy_quadrature(sys: &SymmetricSystem, separation: usize) -> Result<f64> {
    let j = sys.chain().hopping();
    let gap = sys.band_gap();
    if j <= 0.0 || gap <= 0.0 || separation == 0 {
        return Err(Error::InvalidParameter(
            "continuum quadrature needs J > 0, a level below the band, and R >= 1".into(),
        ));
    }
    let b2 = gap / j;
    let b = b2.sqrt();
    let r = separation as f64;
    let rule = gauss_legendre(24);

    let half_period = PI / r;
    let panels_per_half_period = (half_period / (0.5 * b)).ceil().max(1.0) as usize;
    let width = half_period / panels_per_half_period as f64;
    // cutoff K: even number of half periods so that cos(KR) = 1
    let half_periods = 2 * ((2000.0 / half_period / 2.0).ceil() as usize).max(1);
    let cutoff = half_periods as f64 * half_period;

    let h = |k: f64| 1.0 / (k * k + b2);
    let mut acc = DoubleDouble::ZERO;
    for p in 0..half_periods * panels_per_half_period {
        let lo = p as f64 * width;
        let mid = lo + 0.5 * width;
        let panel: f64 = rule
            .iter()
            .map(|&(x, w)| {
                let k = mid + 0.5 * width * x;
                w * (k * r).cos() * h(k)
            })
            .sum();
        acc = acc + DoubleDouble::from_f64(0.5 * width * panel);
    }
    // ∫_K^∞ cos(kR) h(k) dk ≈ −h'(K)/R² when sin(KR) = 0, cos(KR) = 1
    let tail = 2.0 * cutoff * h(cutoff) * h(cutoff) / (r * r);
    let half_line = acc.to_f64() + tail;

    let lambda = sys.lambda();
    Ok(-lambda * lambda / (PI * j) * half_line)
}
