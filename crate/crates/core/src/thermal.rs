//! Canonical ensemble over the effective single-electron spectrum
//! `{E₊, E₋, E_k}` and the thermal CP force.
//!
//! The trace runs over the one-electron sector only (no vacuum, no
//! multi-electron states). The `2N + 1` band states compete with the two
//! bound states in `Z`, so finite-temperature results depend on `N`; the chain
//! length is always taken from the system, never defaulted.

use crate::casimir::cp_energy;
use crate::error::{Error, Result};
use crate::lattice::SymmetricSystem;
use crate::perturbation::{
    band_energies, impurity_shift, symmetric_spectrum_closed, SymmetricSpectrum,
};
use crate::summation::compensated_sum;

fn check_temperature(temperature: f64) -> Result<()> {
    if temperature.is_nan() || temperature < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "temperature must be >= 0, got {temperature}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalEnsemble {
    /// Inverse temperature (k_B = 1); infinite at `T = 0`, zero at `T = ∞`.
    pub beta: f64,
    pub spectrum: SymmetricSpectrum,
    /// Common energy subtracted before averaging: `ε₀ + (λ²/Δ)(1−a²)^{-1/2}`.
    reference: f64,
    /// Energies relative to `reference`, ordered `+, −, k...`.
    excess: Vec<f64>,
    /// Probabilities in the same order.
    weights: Vec<f64>,
    /// Smallest excess energy, factored out of every Boltzmann factor.
    floor: f64,
    /// `Σ exp(−β (E − E_min))`.
    scaled_partition: f64,
}

impl ThermalEnsemble {
    /// Builds the ensemble at separation `R` from the closed-form `E±` and the
    /// finite-ring band energies `E_k`.
    pub fn new(sys: &SymmetricSystem, temperature: f64, separation: usize) -> Result<Self> {
        check_temperature(temperature)?;
        let (e_plus, e_minus) = symmetric_spectrum_closed(sys, separation)?;
        let band = band_energies(sys);
        let reference = sys.eps0() + impurity_shift(sys);

        // the R-dependent parts are kept exactly rather than recovered by subtraction
        let exchange = cp_energy(sys, separation)?;
        let mut excess = Vec::with_capacity(band.len() + 2);
        excess.push(exchange);
        excess.push(-exchange);
        excess.extend(band.iter().map(|&(_, e)| e - reference));

        let floor = excess.iter().copied().fold(f64::INFINITY, f64::min);
        let beta = 1.0 / temperature;
        let factors: Vec<f64> = if beta.is_infinite() {
            let mut f = vec![0.0; excess.len()];
            f[0] = 1.0;
            f
        } else {
            excess
                .iter()
                .map(|&e| (-beta * (e - floor)).exp())
                .collect()
        };
        let scaled_partition = compensated_sum(factors.iter().copied());
        let weights = factors.iter().map(|f| f / scaled_partition).collect();

        Ok(Self {
            beta,
            spectrum: SymmetricSpectrum {
                e_plus,
                e_minus,
                band,
            },
            reference,
            excess,
            weights,
            floor,
            scaled_partition,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Probability of the symmetric bound state.
    pub fn weight_plus(&self) -> f64 {
        self.weights[0]
    }

    /// Probability of the antisymmetric bound state.
    pub fn weight_minus(&self) -> f64 {
        self.weights[1]
    }

    /// `ln Z`; finite even where `Z` itself would under- or overflow.
    pub fn ln_partition_function(&self) -> f64 {
        if self.beta.is_infinite() {
            return f64::NEG_INFINITY;
        }
        self.scaled_partition.ln() - self.beta * (self.floor + self.reference)
    }

    /// `Z = Σ_σ e^{−βE_σ} + Σ_k e^{−βE_k}` (may underflow at large β).
    pub fn partition_function(&self) -> f64 {
        self.ln_partition_function().exp()
    }

    /// Thermal average relative to the R-independent reference energy.
    fn mean_excess(&self) -> f64 {
        compensated_sum(self.weights.iter().zip(&self.excess).map(|(w, e)| w * e))
    }

    /// `E_T = Tr(ρ_T H_eff)`.
    pub fn mean_energy(&self) -> f64 {
        if self.beta.is_infinite() {
            return self.spectrum.e_plus;
        }
        self.reference + self.mean_excess()
    }
}

/// Thermal average energy at separation `R`.
pub fn thermal_energy(sys: &SymmetricSystem, temperature: f64, separation: usize) -> Result<f64> {
    Ok(ThermalEnsemble::new(sys, temperature, separation)?.mean_energy())
}

/// `f_T = −[E_T(R+1) − E_T(R)]`; reduces to the zero-temperature force at `T = 0`.
pub fn thermal_force(sys: &SymmetricSystem, temperature: f64, separation: usize) -> Result<f64> {
    let near = ThermalEnsemble::new(sys, temperature, separation)?;
    let far = ThermalEnsemble::new(sys, temperature, separation + 1)?;
    Ok(-(far.mean_excess() - near.mean_excess()))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TemperatureSweep {
    /// `(T, f_T)` in the order the temperatures were given.
    pub records: Vec<(f64, f64)>,
    /// Indices `i` where `|f_T|` grew from record `i − 1` to record `i`.
    pub violations: Vec<usize>,
}

impl TemperatureSweep {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Thermal force at a fixed separation over sorted, non-negative temperatures.
pub fn force_vs_temperature(
    sys: &SymmetricSystem,
    separation: usize,
    temperatures: &[f64],
) -> Result<TemperatureSweep> {
    for &t in temperatures {
        check_temperature(t)?;
    }
    if temperatures.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "temperatures must be sorted ascending".into(),
        ));
    }
    let records = temperatures
        .iter()
        .map(|&t| Ok((t, thermal_force(sys, t, separation)?)))
        .collect::<Result<Vec<_>>>()?;
    let violations = (1..records.len())
        .filter(|&i| records[i].1.abs() > records[i - 1].1.abs())
        .collect();
    Ok(TemperatureSweep {
        records,
        violations,
    })
}
