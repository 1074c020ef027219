//! Shannon and von Neumann entropies and the quantities built from them.
//! All logarithms are base 2.

use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::measurement::{outcome_statistics, Basis};

const PROB_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::usage("empty probability vector"));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -PROB_TOL) {
            return Err(Error::usage(format!("invalid probability {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::usage(format!("probabilities sum to {sum}")));
        }
        Ok(Self(probs.into_iter().map(|p| p.max(0.0)).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `-Σ p log₂ p` over the strictly positive entries.
pub(crate) fn spectrum_entropy(values: &[f64]) -> f64 {
    let h: f64 = values
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

pub fn shannon(p: &ProbabilityVector) -> f64 {
    spectrum_entropy(p.as_slice())
}

pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    spectrum_entropy(&rho.spectrum())
}

fn check_pair(rho: &DensityMatrix, a: usize, b: usize) -> Result<()> {
    let n = rho.num_subsystems();
    if a >= n || b >= n {
        return Err(Error::usage(format!(
            "subsystems ({a}, {b}) out of range for a {n}-partite state"
        )));
    }
    if a == b {
        return Err(Error::usage(format!(
            "subsystems must differ, got {a} twice"
        )));
    }
    Ok(())
}

/// `S(a|b) = S(ρ_ab) - S(ρ_b)`.
pub fn conditional_entropy(rho: &DensityMatrix, a: usize, b: usize) -> Result<f64> {
    check_pair(rho, a, b)?;
    Ok(von_neumann(&rho.reduce(&[a, b])?) - von_neumann(&rho.reduce(&[b])?))
}

/// `I(a:b) = S(ρ_a) + S(ρ_b) - S(ρ_ab)`.
pub fn mutual_information(rho: &DensityMatrix, a: usize, b: usize) -> Result<f64> {
    check_pair(rho, a, b)?;
    Ok(
        von_neumann(&rho.reduce(&[a])?) + von_neumann(&rho.reduce(&[b])?)
            - von_neumann(&rho.reduce(&[a, b])?),
    )
}

/// Holevo quantity of the ensemble left on `memory` by measuring `basis` on
/// `measured`. Other subsystems are traced out first.
pub fn holevo(rho: &DensityMatrix, basis: &Basis, measured: usize, memory: usize) -> Result<f64> {
    check_pair(rho, measured, memory)?;
    let pair = rho.reduce(&[measured, memory])?;
    let target = usize::from(measured > memory);
    let stats = outcome_statistics(&pair, basis, target)?;
    let mem = pair.reduce(&[1 - target])?;
    let avg: f64 = stats
        .probs
        .iter()
        .zip(&stats.conditional_states)
        .filter_map(|(p, s)| s.as_ref().map(|s| p * von_neumann(s)))
        .sum();
    Ok(von_neumann(&mem) - avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, DimVector};
    use crate::measurement::{eigenbasis, sigma1};
    use crate::states::{bell_pair, make_state, random_density, Family, StateSpec};

    fn pv(v: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn shannon_values() {
        assert_eq!(shannon(&pv(&[1.0, 0.0])), 0.0);
        assert_eq!(shannon(&pv(&[0.5, 0.5])), 1.0);
        let oracle = -0.9 * 0.9f64.log2() - 0.1 * 0.1f64.log2();
        assert!((shannon(&pv(&[0.9, 0.1])) - oracle).abs() < 1e-15);
        assert!((shannon(&pv(&[0.9, 0.1])) - 0.4690).abs() < 1e-4);
    }

    #[test]
    fn invalid_probability_vectors() {
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn von_neumann_values() {
        let zero = make_state(&StateSpec::new(Family::Gghz).with("beta", 0.0)).unwrap();
        assert!(von_neumann(&zero).abs() < 1e-9);
        assert!(
            (von_neumann(&DensityMatrix::maximally_mixed(DimVector::qubits(3))) - 3.0).abs()
                < 1e-12
        );
        let ghz = make_state(&StateSpec::new(Family::Ghz)).unwrap();
        assert!((von_neumann(&ghz.reduce(&[0, 1]).unwrap()) - 1.0).abs() < 1e-12);
        assert!(von_neumann(&ghz).abs() < 1e-9);
    }

    #[test]
    fn conditional_entropy_values() {
        let bell = bell_pair();
        assert!((conditional_entropy(&bell, 0, 1).unwrap() + 1.0).abs() < 1e-12);

        let a = random_density(DimVector::qubits(1), 2, 5).unwrap();
        let b = random_density(DimVector::qubits(1), 2, 6).unwrap();
        let ab = a.tensor(&b);
        assert!((conditional_entropy(&ab, 0, 1).unwrap() - von_neumann(&a)).abs() < 1e-12);

        let ghz = make_state(&StateSpec::new(Family::Ghz)).unwrap();
        assert!(conditional_entropy(&ghz, 0, 1).unwrap().abs() < 1e-12);
        assert!(conditional_entropy(&ghz, 0, 2).unwrap().abs() < 1e-12);

        assert!(matches!(
            conditional_entropy(&ghz, 0, 0),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            conditional_entropy(&ghz, 0, 3),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn mutual_information_values() {
        let a = random_density(DimVector::qubits(1), 2, 8).unwrap();
        let b = random_density(DimVector::qubits(1), 2, 9).unwrap();
        assert!(mutual_information(&a.tensor(&b), 0, 1).unwrap().abs() < 1e-12);
        assert!((mutual_information(&bell_pair(), 0, 1).unwrap() - 2.0).abs() < 1e-12);
        let ghz = make_state(&StateSpec::new(Family::Ghz)).unwrap();
        assert!((mutual_information(&ghz, 0, 1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn holevo_values() {
        let ghz = make_state(&StateSpec::new(Family::Ghz)).unwrap();
        let z = Basis::computational(2);
        let x = eigenbasis(&sigma1()).unwrap();
        assert!((holevo(&ghz, &z, 0, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(holevo(&ghz, &x, 0, 1).unwrap().abs() < 1e-12);
        // Reversed index order on the same pair.
        assert!((holevo(&ghz, &z, 2, 0).unwrap() - 1.0).abs() < 1e-12);

        let a = random_density(DimVector::qubits(1), 2, 1).unwrap();
        let bc = random_density(DimVector::qubits(2), 4, 2).unwrap();
        let prod = a.tensor(&bc);
        for basis in [&z, &x, &Basis::qubit(1.1, 0.3)] {
            assert!(holevo(&prod, basis, 0, 1).unwrap().abs() < 1e-12);
            assert!(holevo(&prod, basis, 0, 2).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn mutual_information_is_symmetric() {
        let rho = random_density(DimVector::qubits(3), 4, 77).unwrap();
        let ab = mutual_information(&rho, 0, 1).unwrap();
        let ba = mutual_information(&rho, 1, 0).unwrap();
        assert!((ab - ba).abs() < 1e-12);
        assert!(ab >= -1e-10);
    }

    #[test]
    fn entropy_ignores_clamped_spectrum() {
        let m = ComplexMatrix::diag_real(&[0.5, 0.5, 0.0, 0.0]);
        let rho = DensityMatrix::new(m, DimVector::qubits(2)).unwrap();
        assert_eq!(von_neumann(&rho), 1.0);
    }
}
