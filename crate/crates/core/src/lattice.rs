//! Chain and impurity parameters, the tight-binding dispersion and the
//! periodic Brillouin-zone mesh.
//!
//! Energies are dimensionless (impurity energy unit) and the lattice constant
//! is 1, so separations are plain positive integers.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Coupling ratio above which second-order results are flagged as marginal.
pub const WEAK_COUPLING_WARN: f64 = 0.1;
/// Coupling ratio above which the perturbative regime is rejected.
pub const WEAK_COUPLING_FAIL: f64 = 0.5;

/// Uniform tight-binding ring with `2N + 1` sites, indices `-N..=N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    omega: f64,
    hopping: f64,
    half_length: usize,
}

impl ChainParams {
    pub fn new(omega: f64, hopping: f64, half_length: usize) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "site energy must be finite, got {omega}"
            )));
        }
        if !(hopping.is_finite() && hopping >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hopping J must be >= 0, got {hopping}"
            )));
        }
        if half_length == 0 {
            return Err(Error::InvalidParameter("half-length N must be >= 1".into()));
        }
        Ok(Self {
            omega,
            hopping,
            half_length,
        })
    }

    /// Site energy ω.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Nearest-neighbour hopping J.
    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    /// N; the ring holds `2N + 1` sites.
    pub fn half_length(&self) -> usize {
        self.half_length
    }

    pub fn sites(&self) -> usize {
        2 * self.half_length + 1
    }

    pub fn band_bottom(&self) -> f64 {
        self.omega - 2.0 * self.hopping
    }

    pub fn band_top(&self) -> f64 {
        self.omega + 2.0 * self.hopping
    }

    /// Same chain with a different number of sites.
    pub fn with_half_length(&self, half_length: usize) -> Result<Self> {
        Self::new(self.omega, self.hopping, half_length)
    }
}

/// Two impurity levels attached at sites `0` and `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpurityConfig {
    pub eps1: f64,
    pub eps2: f64,
    pub lambda0: f64,
    pub lambda_r: f64,
    separation: usize,
}

impl ImpurityConfig {
    pub fn new(
        eps1: f64,
        eps2: f64,
        lambda0: f64,
        lambda_r: f64,
        separation: usize,
    ) -> Result<Self> {
        for (name, v) in [
            ("eps1", eps1),
            ("eps2", eps2),
            ("lambda0", lambda0),
            ("lambdaR", lambda_r),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if separation == 0 {
            return Err(Error::InvalidParameter("separation R must be >= 1".into()));
        }
        Ok(Self {
            eps1,
            eps2,
            lambda0,
            lambda_r,
            separation,
        })
    }

    pub fn symmetric(eps0: f64, lambda: f64, separation: usize) -> Result<Self> {
        Self::new(eps0, eps0, lambda, lambda, separation)
    }

    pub fn separation(&self) -> usize {
        self.separation
    }

    pub fn max_level(&self) -> f64 {
        self.eps1.max(self.eps2)
    }

    pub fn max_coupling(&self) -> f64 {
        self.lambda0.abs().max(self.lambda_r.abs())
    }
}

/// Symmetric specialization `ε₁ = ε₂ = ε₀`, `λ₀ = λ_R = λ`.
///
/// Construction guarantees `Δ = ε₀ − ω < 0` and `a = 2J/Δ ∈ (−1, 0]`, so every
/// closed-form quantity downstream is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricSystem {
    chain: ChainParams,
    eps0: f64,
    lambda: f64,
}

impl SymmetricSystem {
    pub fn new(chain: ChainParams, eps0: f64, lambda: f64) -> Result<Self> {
        if !(eps0.is_finite() && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "eps0 and lambda must be finite, got {eps0}, {lambda}"
            )));
        }
        let delta = eps0 - chain.omega();
        if delta >= 0.0 {
            return Err(Error::RegimeViolation(format!(
                "detuning eps0 - omega = {delta} must be negative"
            )));
        }
        let a = 2.0 * chain.hopping() / delta;
        if a <= -1.0 {
            return Err(Error::BandEdge { a });
        }
        Ok(Self {
            chain,
            eps0,
            lambda,
        })
    }

    /// Builds the system from detuning rather than absolute site energy: `ω = ε₀ − Δ`.
    pub fn from_detuning(
        eps0: f64,
        delta: f64,
        hopping: f64,
        lambda: f64,
        half_length: usize,
    ) -> Result<Self> {
        Self::new(
            ChainParams::new(eps0 - delta, hopping, half_length)?,
            eps0,
            lambda,
        )
    }

    pub fn chain(&self) -> &ChainParams {
        &self.chain
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Detuning Δ = ε₀ − ω (< 0).
    pub fn delta(&self) -> f64 {
        self.eps0 - self.chain.omega()
    }

    /// Band parameter a = 2J/Δ ∈ (−1, 0].
    pub fn band_parameter(&self) -> f64 {
        2.0 * self.chain.hopping() / self.delta()
    }

    /// Distance of the impurity level below the band bottom, `(ω − 2J) − ε₀ > 0`.
    pub fn band_gap(&self) -> f64 {
        self.chain.band_bottom() - self.eps0
    }

    pub fn impurities(&self, separation: usize) -> Result<ImpurityConfig> {
        ImpurityConfig::symmetric(self.eps0, self.lambda, separation)
    }

    pub fn with_chain(&self, chain: ChainParams) -> Result<Self> {
        Self::new(chain, self.eps0, self.lambda)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.chain, self.eps0, lambda)
    }
}

/// Ω_k = ω − 2J cos k.
pub fn dispersion(chain: &ChainParams, k: f64) -> f64 {
    chain.omega() - 2.0 * chain.hopping() * k.cos()
}

/// Momenta `k_n = 2πn/(2N+1)`, `n = −N..=N`, in increasing order.
pub fn brillouin_modes(chain: &ChainParams) -> Vec<f64> {
    let n = chain.half_length() as i64;
    let sites = chain.sites() as f64;
    (-n..=n).map(|m| 2.0 * PI * m as f64 / sites).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingStrength {
    Weak,
    /// Above [`WEAK_COUPLING_WARN`]; results carry a visible second-order error.
    Marginal,
    /// Above [`WEAK_COUPLING_FAIL`].
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub below_band: bool,
    /// `(ω − 2J) − max ε`; positive when both levels sit below the band.
    pub band_gap: f64,
    /// `max|λ| / band_gap`, infinite when the gap is not positive.
    pub coupling_ratio: f64,
    pub coupling: CouplingStrength,
    pub separation_on_chain: bool,
}

impl RegimeReport {
    pub fn passed(&self) -> bool {
        self.below_band && self.coupling != CouplingStrength::Strong && self.separation_on_chain
    }

    pub fn has_warning(&self) -> bool {
        self.coupling == CouplingStrength::Marginal
    }

    /// Converts a failed report into the first violated condition.
    pub fn into_result(self, chain: &ChainParams, separation: usize) -> Result<Self> {
        if !self.separation_on_chain {
            return Err(Error::Dimension {
                separation,
                half_length: chain.half_length(),
                reason: "both impurity sites must lie on the chain (R <= N)",
            });
        }
        if !self.below_band {
            return Err(Error::RegimeViolation(format!(
                "impurity level lies {} above the band bottom {}",
                -self.band_gap,
                chain.band_bottom()
            )));
        }
        if self.coupling == CouplingStrength::Strong {
            return Err(Error::RegimeViolation(format!(
                "coupling ratio {} exceeds {WEAK_COUPLING_FAIL}",
                self.coupling_ratio
            )));
        }
        Ok(self)
    }
}

/// Checks the below-band, weak-coupling and on-chain conditions.
pub fn validate_regime(chain: &ChainParams, imps: &ImpurityConfig) -> RegimeReport {
    let band_gap = chain.band_bottom() - imps.max_level();
    let below_band = band_gap > 0.0;
    let coupling_ratio = if below_band {
        imps.max_coupling() / band_gap
    } else {
        f64::INFINITY
    };
    let coupling = if coupling_ratio > WEAK_COUPLING_FAIL {
        CouplingStrength::Strong
    } else if coupling_ratio > WEAK_COUPLING_WARN {
        CouplingStrength::Marginal
    } else {
        CouplingStrength::Weak
    };
    RegimeReport {
        below_band,
        band_gap,
        coupling_ratio,
        coupling,
        separation_on_chain: imps.separation() <= chain.half_length(),
    }
}
