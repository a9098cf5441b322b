//! Second-order effective Hamiltonian after eliminating the impurity-chain
//! coupling, and the symmetric-case eigenvalues.
//!
//! For a finite ring all coefficients are exact sums over the `2N + 1`
//! Brillouin modes with regularized couplings `g = λ/√(2N+1)`. For the
//! symmetric case the `N → ∞` limit is also available in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{dispersion, validate_regime, ChainParams, ImpurityConfig, SymmetricSystem};
use crate::summation::{CompensatedComplexSum, CompensatedSum};

/// Coefficients of the second-order effective Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveCoefficients {
    /// Level shift of impurity 1 (excluding ε₁ itself).
    pub shift1: f64,
    /// Level shift of impurity 2.
    pub shift2: f64,
    /// Coefficient of `d₁†d₂`.
    pub hop12: Complex64,
    /// `(k, shift)` for every mode: the correction added to Ω_k.
    pub band_shift: Vec<(f64, f64)>,
}

impl EffectiveCoefficients {
    /// Coefficient of `d₂†d₁`.
    pub fn hop21(&self) -> Complex64 {
        self.hop12.conj()
    }
}

/// Eigenvalues of the symmetric effective Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSpectrum {
    /// Energy of the symmetric impurity combination (ground state).
    pub e_plus: f64,
    /// Energy of the antisymmetric impurity combination.
    pub e_minus: f64,
    /// `(k, E_k)` for each chain mode.
    pub band: Vec<(f64, f64)>,
}

impl SymmetricSpectrum {
    pub fn splitting(&self) -> f64 {
        self.e_minus - self.e_plus
    }

    /// All eigenvalues in the order `E₊, E₋, E_k...`.
    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        [self.e_plus, self.e_minus]
            .into_iter()
            .chain(self.band.iter().map(|&(_, e)| e))
    }
}

/// Phase `k_n·R` reduced exactly to `(−π, π]` using integer arithmetic.
pub(crate) fn mode_phase(n: i64, separation: i64, sites: i64) -> f64 {
    let mut m = (n * separation).rem_euclid(sites);
    if 2 * m > sites {
        m -= sites;
    }
    2.0 * PI * m as f64 / sites as f64
}

fn mode_indices(chain: &ChainParams) -> impl Iterator<Item = (i64, f64)> {
    let n = chain.half_length() as i64;
    let sites = chain.sites() as i64;
    (-n..=n).map(move |m| (m, mode_phase(m, 1, sites)))
}

/// Effective-Hamiltonian coefficients as finite Brillouin-zone sums.
///
/// Works for asymmetric levels and couplings; the `d₁†d₂` coefficient keeps
/// the `e^{−ikR}` phase inside the sum.
pub fn effective_coefficients(
    chain: &ChainParams,
    imps: &ImpurityConfig,
) -> Result<EffectiveCoefficients> {
    validate_regime(chain, imps).into_result(chain, imps.separation())?;

    let sites = chain.sites() as i64;
    let norm = 1.0 / chain.sites() as f64;
    let g1 = imps.lambda0 * norm.sqrt();
    let g2 = imps.lambda_r * norm.sqrt();
    let r = imps.separation() as i64;

    let mut shift1 = CompensatedSum::new();
    let mut shift2 = CompensatedSum::new();
    let mut hop = CompensatedComplexSum::default();
    let mut band_shift = Vec::with_capacity(chain.sites());

    for (n, k) in mode_indices(chain) {
        let omega_k = dispersion(chain, k);
        let inv1 = 1.0 / (imps.eps1 - omega_k);
        let inv2 = 1.0 / (imps.eps2 - omega_k);
        shift1.add(imps.lambda0 * imps.lambda0 * norm * inv1);
        shift2.add(imps.lambda_r * imps.lambda_r * norm * inv2);
        let phase = Complex64::from_polar(1.0, -mode_phase(n, r, sites));
        hop.add(phase * (0.5 * g1 * g2 * (inv1 + inv2)));
        band_shift.push((k, -(g1 * g1) * inv1 - (g2 * g2) * inv2));
    }

    Ok(EffectiveCoefficients {
        shift1: shift1.value(),
        shift2: shift2.value(),
        hop12: hop.value(),
        band_shift,
    })
}

/// `q = (√(1−a²) − 1)/a`, evaluated as `−a/(√(1−a²) + 1)` so that it stays
/// accurate as `a → 0⁻`. Lies in `[0, 1)` for `a ∈ (−1, 0]`.
pub fn decay_ratio(a: f64) -> f64 {
    -a / ((1.0 - a * a).sqrt() + 1.0)
}

/// `(λ²/Δ)/√(1−a²)`: the R-independent second-order shift of each impurity
/// in the infinite-chain limit.
pub fn impurity_shift(sys: &SymmetricSystem) -> f64 {
    let a = sys.band_parameter();
    sys.lambda() * sys.lambda() / sys.delta() / (1.0 - a * a).sqrt()
}

fn check_separation(separation: usize) -> Result<()> {
    if separation == 0 {
        return Err(Error::InvalidParameter("separation R must be >= 1".into()));
    }
    Ok(())
}

/// Band energies `E_k = Ω_k + 2g²/(Ω_k − ε₀)` on the finite ring.
pub fn band_energies(sys: &SymmetricSystem) -> Vec<(f64, f64)> {
    let chain = sys.chain();
    let g2 = sys.lambda() * sys.lambda() / chain.sites() as f64;
    mode_indices(chain)
        .map(|(_, k)| {
            let omega_k = dispersion(chain, k);
            (k, omega_k + 2.0 * g2 / (omega_k - sys.eps0()))
        })
        .collect()
}

/// `E₊`, `E₋` and `E_k` as finite sums over the `2N + 1` modes.
pub fn symmetric_spectrum_ksum(
    sys: &SymmetricSystem,
    separation: usize,
) -> Result<SymmetricSpectrum> {
    check_separation(separation)?;
    let chain = sys.chain();
    if separation > chain.half_length() {
        return Err(Error::Dimension {
            separation,
            half_length: chain.half_length(),
            reason: "both impurity sites must lie on the chain (R <= N)",
        });
    }
    let sites = chain.sites() as i64;
    let r = separation as i64;
    let g2 = sys.lambda() * sys.lambda() / chain.sites() as f64;
    let delta = sys.delta();
    let two_j = 2.0 * chain.hopping();

    let mut local = CompensatedSum::new();
    let mut exchange = CompensatedSum::new();
    for (n, k) in mode_indices(chain) {
        let term = g2 / (delta + two_j * k.cos());
        local.add(term);
        exchange.add(term * mode_phase(n, r, sites).cos());
    }
    let (local, exchange) = (local.value(), exchange.value());

    Ok(SymmetricSpectrum {
        e_plus: sys.eps0() + (local + exchange),
        e_minus: sys.eps0() + (local - exchange),
        band: band_energies(sys),
    })
}

/// Infinite-chain closed forms `E± = ε₀ + (λ²/Δ)(1−a²)^{-1/2}[1 ± q^R]`.
///
/// At `a = 0` the exchange term vanishes and both levels equal `ε₀ + λ²/Δ`.
pub fn symmetric_spectrum_closed(sys: &SymmetricSystem, separation: usize) -> Result<(f64, f64)> {
    check_separation(separation)?;
    let shift = impurity_shift(sys);
    let exchange = shift * decay_ratio(sys.band_parameter()).powi(separation as i32);
    Ok((
        sys.eps0() + (shift + exchange),
        sys.eps0() + (shift - exchange),
    ))
}
