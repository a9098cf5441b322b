//! Zero-temperature Casimir-Polder energy and discrete force between the two
//! impurities, the exponential decay rate, and the quadratic-band
//! (continuum) approximation.
//!
//! Sign convention: `f(R) = −[E_cp(R+1) − E_cp(R)]`. In the below-band regime
//! `E_cp < 0` and grows towards zero with `R`, so `f < 0`: the pair is
//! attracted (energy decreases as `R` shrinks).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::SymmetricSystem;
use crate::perturbation::{decay_ratio, impurity_shift};

fn check_separation(separation: usize) -> Result<()> {
    if separation == 0 {
        return Err(Error::InvalidParameter("separation R must be >= 1".into()));
    }
    Ok(())
}

/// `E_cp(R) = (λ²/Δ)(1−a²)^{-1/2} q^R`, exactly 0 when `J = 0`.
pub fn cp_energy(sys: &SymmetricSystem, separation: usize) -> Result<f64> {
    check_separation(separation)?;
    let a = sys.band_parameter();
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(impurity_shift(sys) * decay_ratio(a).powi(separation as i32))
}

/// Discrete force `−[E_cp(R+1) − E_cp(R)] = −(λ²/Δ)(1−a²)^{-1/2} q^R (q − 1)`.
pub fn ecp_force(sys: &SymmetricSystem, separation: usize) -> Result<f64> {
    check_separation(separation)?;
    let a = sys.band_parameter();
    if a == 0.0 {
        return Ok(0.0);
    }
    let q = decay_ratio(a);
    Ok(-impurity_shift(sys) * q.powi(separation as i32) * (q - 1.0))
}

/// `f(R) = amplitude · e^{−Γ R}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayProfile {
    /// Γ = ln(1/q); `f64::INFINITY` when `a = 0`.
    pub gamma: f64,
    /// Characteristic length `R_C = 1/Γ`; 0 when Γ is infinite.
    pub characteristic_length: f64,
    pub amplitude: f64,
}

impl DecayProfile {
    pub fn is_contact_only(&self) -> bool {
        self.gamma.is_infinite()
    }

    pub fn force_at(&self, separation: usize) -> f64 {
        if self.is_contact_only() {
            return 0.0;
        }
        self.amplitude * (-self.gamma * separation as f64).exp()
    }
}

/// Decay rate Γ as a function of the band parameter alone.
pub fn decay_rate(a: f64) -> Result<f64> {
    if !(a > -1.0 && a <= 0.0) {
        return Err(Error::BandEdge { a });
    }
    if a == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-decay_ratio(a).ln())
}

pub fn decay_profile(sys: &SymmetricSystem) -> Result<DecayProfile> {
    let a = sys.band_parameter();
    let gamma = decay_rate(a)?;
    if gamma.is_infinite() {
        return Ok(DecayProfile {
            gamma,
            characteristic_length: 0.0,
            amplitude: 0.0,
        });
    }
    let q = decay_ratio(a);
    Ok(DecayProfile {
        gamma,
        characteristic_length: 1.0 / gamma,
        amplitude: -impurity_shift(sys) * (q - 1.0),
    })
}

/// Quadratic-band estimate of the CP energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumEstimate {
    pub energy: f64,
    /// Decay constant `b = √((ω − 2J − ε₀)/J)`, comparable to Γ.
    pub b: f64,
}

/// `E_CP ≈ −λ²/(2Jb) e^{−bR}` from expanding the band around `k = 0`.
pub fn cp_energy_continuum(sys: &SymmetricSystem, separation: usize) -> Result<ContinuumEstimate> {
    check_separation(separation)?;
    let j = sys.chain().hopping();
    if j == 0.0 {
        return Err(Error::RegimeViolation(
            "continuum approximation needs a dispersive band (J > 0)".into(),
        ));
    }
    let gap = sys.band_gap();
    if gap <= 0.0 {
        return Err(Error::BandEdge {
            a: sys.band_parameter(),
        });
    }
    let b = (gap / j).sqrt();
    let lambda = sys.lambda();
    Ok(ContinuumEstimate {
        energy: -lambda * lambda / (2.0 * j * b) * (-b * separation as f64).exp(),
        b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcePoint {
    pub separation: usize,
    pub energy: f64,
    pub force: f64,
}

/// CP energy and force on consecutive integer separations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ForceCurve {
    pub records: Vec<ForcePoint>,
}

impl ForceCurve {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn forces(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|p| p.force)
    }
}

/// Sweeps `R = r_min..=r_max` (requires `1 <= r_min <= r_max <= N − 1`).
pub fn force_curve(sys: &SymmetricSystem, r_min: usize, r_max: usize) -> Result<ForceCurve> {
    let n = sys.chain().half_length();
    if r_min == 0 || r_min > r_max || r_max + 1 > n {
        return Err(Error::InvalidParameter(format!(
            "force sweep needs 1 <= Rmin <= Rmax <= N - 1, got Rmin = {r_min}, Rmax = {r_max}, N = {n}"
        )));
    }
    let records = (r_min..=r_max)
        .into_par_iter()
        .map(|r| {
            Ok(ForcePoint {
                separation: r,
                energy: cp_energy(sys, r)?,
                force: ecp_force(sys, r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForceCurve { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(delta: f64, j: f64, lambda: f64) -> SymmetricSystem {
        SymmetricSystem::from_detuning(1.0, delta, j, lambda, 100).unwrap()
    }

    fn rel(x: f64, y: f64) -> f64 {
        ((x - y) / y).abs()
    }

    #[test]
    fn energy_reference_values() {
        let s = sys(-1.0, 0.3, 0.01);
        assert!(rel(cp_energy(&s, 1).unwrap(), -1.25e-4 / 3.0) < 1e-14);
        assert!(rel(cp_energy(&s, 2).unwrap(), -1.25e-4 / 9.0) < 1e-14);
        assert!((cp_energy(&s, 1).unwrap() + 4.16667e-5).abs() < 1e-10);
        assert!((cp_energy(&s, 2).unwrap() + 1.38889e-5).abs() < 1e-10);
    }

    #[test]
    fn force_reference_values() {
        let f = ecp_force(&sys(-1.0, 0.3, 0.01), 1).unwrap();
        assert!(rel(f, -1.25e-4 * (1.0 / 3.0) * (2.0 / 3.0)) < 1e-14);
        assert!((f + 2.77778e-5).abs() < 1e-10);
        let f = ecp_force(&sys(-2.0, 0.6, 0.01), 1).unwrap();
        assert!((f + 1.38889e-5).abs() < 1e-10);
    }

    #[test]
    fn zero_hopping_has_no_interaction() {
        let s = sys(-1.0, 0.0, 0.01);
        for r in 1..6 {
            assert_eq!(cp_energy(&s, r).unwrap(), 0.0);
            assert_eq!(ecp_force(&s, r).unwrap(), 0.0);
        }
        let p = decay_profile(&s).unwrap();
        assert!(p.gamma.is_infinite() && p.gamma > 0.0);
        assert_eq!(p.characteristic_length, 0.0);
        assert!(p.is_contact_only());
    }

    #[test]
    fn decay_rate_values() {
        assert!((decay_rate(-0.6).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!(decay_rate(-1.0 + 1e-12).unwrap() < 2e-6);
        assert!(matches!(decay_rate(-1.0), Err(Error::BandEdge { .. })));
        // Γ = arccosh(1/|a|)
        for a in [-0.95, -0.5, -0.2, -0.01] {
            assert!((decay_rate(a).unwrap() - (-1.0 / a).acosh()).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_reproduces_force() {
        let s = sys(-1.0, 0.4, 0.01);
        let p = decay_profile(&s).unwrap();
        for r in 1..15 {
            let f = ecp_force(&s, r).unwrap();
            assert!(rel(p.force_at(r), f) < 1e-13);
        }
    }

    #[test]
    fn continuum_close_to_band_edge() {
        let s = sys(-1.0, 0.45, 0.01);
        let c = cp_energy_continuum(&s, 1).unwrap();
        let gamma = decay_profile(&s).unwrap().gamma;
        assert!((c.b - 0.471_404_520_791_031_7).abs() < 1e-14);
        assert!((gamma - 0.467_145_308_103_262_2).abs() < 1e-12);
        assert!(rel(c.b, gamma) < 0.01);
    }

    #[test]
    fn continuum_far_from_band_edge() {
        let s = sys(-1.0, 0.3, 0.01);
        let c = cp_energy_continuum(&s, 1).unwrap();
        assert!((c.b - (0.4f64 / 0.3).sqrt()).abs() < 1e-15);
        assert!(rel(c.b, 3f64.ln()) > 0.04);
    }

    #[test]
    fn continuum_tail_and_errors() {
        let s = sys(-1.0, 0.3, 0.01);
        let far = cp_energy_continuum(&s, 60).unwrap().energy;
        assert!(far < 0.0 && far > -1e-30);
        assert!(matches!(
            cp_energy_continuum(&sys(-1.0, 0.0, 0.01), 1),
            Err(Error::RegimeViolation(_))
        ));
    }

    #[test]
    fn fig2_and_fig3_curves_are_ordered() {
        let weak = force_curve(&sys(-1.0, 0.3, 0.01), 1, 10).unwrap();
        let strong = force_curve(&sys(-1.0, 0.4, 0.01), 1, 10).unwrap();
        for (w, s) in weak.records.iter().zip(&strong.records) {
            assert!(s.force.abs() > w.force.abs());
        }
        let near = force_curve(&sys(-2.0, 0.6, 0.01), 1, 10).unwrap();
        let far = force_curve(&sys(-3.0, 0.6, 0.01), 1, 10).unwrap();
        for (n, f) in near.records.iter().zip(&far.records) {
            assert!(n.force.abs() > f.force.abs());
        }
    }

    #[test]
    fn curve_bounds() {
        let s = sys(-1.0, 0.3, 0.01);
        let c = force_curve(&s, 4, 4).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.records[0].separation, 4);
        assert!(force_curve(&s, 0, 4).is_err());
        assert!(force_curve(&s, 5, 4).is_err());
        assert!(force_curve(&s, 1, 100).is_err());
        assert!(force_curve(&s, 1, 99).is_ok());
    }
}
