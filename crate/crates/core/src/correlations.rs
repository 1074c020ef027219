//! Two-qubit correlation measures (classical correlation, discord,
//! entanglement of formation) and the saturation checker for three-qubit states.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bounds::evaluate;
use crate::entropy::{mutual_information, spectrum_entropy, von_neumann};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, DensityMatrix, C64};
use crate::measurement::{sigma2, ObservablePair};
use crate::optim::{nelder_mead, NelderMeadOptions};

pub const GRID_THETA: usize = 64;
pub const GRID_PHI: usize = 128;
const REFINE_FROM: usize = 3;

/// Default threshold on the uncertainty slack for flagging SSA saturation.
pub const SATURATION_TOL: f64 = 1e-6;

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().as_slice() != [2, 2] {
        return Err(Error::usage(format!(
            "expected a two-qubit state, got dims {:?}",
            rho.dims().as_slice()
        )));
    }
    Ok(())
}

fn require_side(measured: usize) -> Result<()> {
    if measured > 1 {
        return Err(Error::usage(format!(
            "measured side must be 0 or 1, got {measured}"
        )));
    }
    Ok(())
}

fn binary_entropy(p: f64) -> f64 {
    spectrum_entropy(&[p, 1.0 - p])
}

/// Entropy of a 2x2 positive matrix `[[a, b], [b*, d]]` scaled to unit trace.
fn qubit_entropy(a: f64, d: f64, b: C64) -> f64 {
    let t = a + d;
    let det = (a * d - b.norm_sqr()) / (t * t);
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    binary_entropy((1.0 + disc) / 2.0)
}

/// `J(θ, φ) = S(ρ_other) - Σ_i p_i S(ρ_other|i)` for the rank-1 projective
/// measurement with Bloch angles `(θ, φ)` on side `measured`.
struct MeasuredCorrelation<'a> {
    rho: &'a ComplexMatrix,
    measured: usize,
    s_other: f64,
}

impl MeasuredCorrelation<'_> {
    fn index(&self, other: usize, meas: usize) -> usize {
        if self.measured == 1 {
            2 * other + meas
        } else {
            2 * meas + other
        }
    }

    fn branch(&self, psi: [C64; 2]) -> (f64, f64) {
        // Unnormalized conditional state on the unmeasured qubit.
        let mut s = [[C64::new(0.0, 0.0); 2]; 2];
        for (a, row) in s.iter_mut().enumerate() {
            for (a2, entry) in row.iter_mut().enumerate() {
                for y in 0..2 {
                    for y2 in 0..2 {
                        *entry += psi[y].conj()
                            * self.rho[(self.index(a, y), self.index(a2, y2))]
                            * psi[y2];
                    }
                }
            }
        }
        let p = (s[0][0].re + s[1][1].re).max(0.0);
        if p <= 1e-15 {
            return (0.0, 0.0);
        }
        (p, qubit_entropy(s[0][0].re, s[1][1].re, s[0][1]))
    }

    fn value(&self, theta: f64, phi: f64) -> f64 {
        let (s, c) = (theta / 2.0).sin_cos();
        let e = C64::from_polar(1.0, phi);
        let up = [C64::new(c, 0.0), e * s];
        let down = [C64::new(-s, 0.0), e * c];
        let (p0, h0) = self.branch(up);
        let (p1, h1) = self.branch(down);
        self.s_other - p0 * h0 - p1 * h1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCorrelation {
    /// Maximized correlation, bits.
    pub j: f64,
    /// Bloch polar angle of the optimal projector.
    pub theta: f64,
    /// Bloch azimuth of the optimal projector.
    pub phi: f64,
}

/// Largest correlation extractable by a projective measurement on qubit `measured`.
///
/// Scans a 64 x 128 grid over (θ ∈ [0, π], φ ∈ [0, 2π)), then refines the
/// best three grid points with Nelder–Mead.
pub fn classical_correlation(rho: &DensityMatrix, measured: usize) -> Result<ClassicalCorrelation> {
    require_two_qubits(rho)?;
    require_side(measured)?;
    let objective = MeasuredCorrelation {
        rho: rho.matrix(),
        measured,
        s_other: von_neumann(&rho.reduce(&[1 - measured])?),
    };

    let d_theta = PI / (GRID_THETA - 1) as f64;
    let d_phi = 2.0 * PI / GRID_PHI as f64;
    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(GRID_THETA * GRID_PHI);
    for i in 0..GRID_THETA {
        for k in 0..GRID_PHI {
            let (t, f) = (i as f64 * d_theta, k as f64 * d_phi);
            grid.push((objective.value(t, f), t, f));
        }
    }
    grid.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut best = ClassicalCorrelation {
        j: grid[0].0,
        theta: grid[0].1,
        phi: grid[0].2,
    };
    for &(_, t, f) in grid.iter().take(REFINE_FROM) {
        let m = nelder_mead(
            |x| -objective.value(x[0], x[1]),
            &[t, f],
            &[d_theta, d_phi],
            NelderMeadOptions::default(),
        );
        if -m.f > best.j {
            best = ClassicalCorrelation {
                j: -m.f,
                theta: m.x[0],
                phi: m.x[1],
            };
        }
    }
    Ok(best)
}

/// `D = I(A:Y) - J_Y`, the measurement acting on `measured`.
pub fn discord(rho: &DensityMatrix, measured: usize) -> Result<f64> {
    let j = classical_correlation(rho, measured)?.j;
    Ok(mutual_information(rho, 0, 1)? - j)
}

/// Wootters concurrence.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    // Subnormalized eigenvectors v_k = √p_k e_k of the support.
    let eig = eig_hermitian(rho.matrix())?;
    let support: Vec<Vec<C64>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 1e-14)
        .map(|(k, &p)| {
            eig.vectors
                .column(k)
                .into_iter()
                .map(|z| z * p.sqrt())
                .collect()
        })
        .collect();
    if support.is_empty() {
        return Err(Error::Numeric("state has empty support".into()));
    }
    let yy = crate::linalg::tensor(&sigma2(), &sigma2());
    // τ_kl = ⟨v_k| σ_y⊗σ_y |v_l*⟩; its singular values are the λ_i.
    let r = support.len();
    let flipped: Vec<Vec<C64>> = support
        .iter()
        .map(|v| yy.mul_vec(&v.iter().map(|z| z.conj()).collect::<Vec<_>>()))
        .collect();
    let tau = ComplexMatrix::from_fn(r, r, |k, l| {
        support[k]
            .iter()
            .zip(&flipped[l])
            .map(|(a, b)| a.conj() * b)
            .sum()
    });
    let gram = tau.adjoint().matmul(&tau);
    let mut lambdas: Vec<f64> = eig_hermitian(&gram)?
        .values
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1..].iter().sum::<f64>();
    Ok(c.clamp(0.0, 1.0))
}

/// Two-qubit entanglement of formation from the concurrence.
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence(rho)?;
    Ok(binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0))
}

/// Residuals of the SSA, Koashi–Winter and conservation-law equalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationReport {
    /// `(S(A|B) + S(A|C)) / 2`.
    pub ssa_residual: f64,
    /// `E(ρ_AB) - D^C(ρ_AC) - S(A|C)`.
    pub kw_residual_ab: f64,
    /// `E(ρ_AC) - D^B(ρ_AB) - S(A|B)`.
    pub kw_residual_ac: f64,
    /// `E(ρ_AB) + E(ρ_AC) - D^B(ρ_AB) - D^C(ρ_AC)`.
    pub conservation_residual: f64,
    /// `S(X|B) + S(Z|C) - q_MU - max(0, δ)`.
    pub uncertainty_slack: f64,
    /// Set when the slack is below the tolerance.
    pub ssa_saturated: bool,
    pub eof_ab: f64,
    pub eof_ac: f64,
    pub discord_ab: f64,
    pub discord_ac: f64,
}

pub fn saturation_check(
    rho: &DensityMatrix,
    pair: &ObservablePair,
    tol: f64,
) -> Result<SaturationReport> {
    if rho.dims().as_slice() != [2, 2, 2] {
        return Err(Error::usage(format!(
            "expected a three-qubit state, got dims {:?}",
            rho.dims().as_slice()
        )));
    }
    let report = evaluate(rho, pair)?;
    let s_a_given_c = report.s_a_given_c.expect("tripartite");
    let delta = report.delta_new.expect("tripartite");

    let ab = rho.reduce(&[0, 1])?;
    let ac = rho.reduce(&[0, 2])?;
    let eof_ab = entanglement_of_formation(&ab)?;
    let eof_ac = entanglement_of_formation(&ac)?;
    let discord_ab = discord(&ab, 1)?;
    let discord_ac = discord(&ac, 1)?;

    let uncertainty_slack =
        report.lhs_tripartite.expect("tripartite") - report.q_mu - delta.max(0.0);
    Ok(SaturationReport {
        ssa_residual: report.ssa_term.expect("tripartite"),
        kw_residual_ab: eof_ab - discord_ac - s_a_given_c,
        kw_residual_ac: eof_ac - discord_ab - report.s_a_given_b,
        conservation_residual: eof_ab + eof_ac - discord_ab - discord_ac,
        uncertainty_slack,
        ssa_saturated: uncertainty_slack < tol,
        eof_ab,
        eof_ac,
        discord_ab,
        discord_ac,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DimVector;
    use crate::states::{bell_pair, make_state, random_density, Family, StateSpec};

    fn classical_pair() -> DensityMatrix {
        DensityMatrix::new(
            ComplexMatrix::diag_real(&[0.5, 0.0, 0.0, 0.5]),
            DimVector::qubits(2),
        )
        .unwrap()
    }

    fn product() -> DensityMatrix {
        let a = random_density(DimVector::qubits(1), 2, 21).unwrap();
        let b = random_density(DimVector::qubits(1), 2, 22).unwrap();
        a.tensor(&b)
    }

    #[test]
    fn classical_correlation_examples() {
        for side in [0, 1] {
            assert!((classical_correlation(&bell_pair(), side).unwrap().j - 1.0).abs() < 1e-5);
            assert!(classical_correlation(&product(), side).unwrap().j.abs() < 1e-5);
            let cc = classical_correlation(&classical_pair(), side).unwrap();
            assert!((cc.j - 1.0).abs() < 1e-5);
            // The optimum is the σ₃ basis: θ = 0 or π.
            assert!(cc.theta.sin().abs() < 1e-3, "{cc:?}");
        }
    }

    #[test]
    fn discord_examples() {
        assert!((discord(&bell_pair(), 1).unwrap() - 1.0).abs() < 1e-5);
        assert!(discord(&classical_pair(), 1).unwrap().abs() < 1e-5);
        assert!(discord(&product(), 0).unwrap().abs() < 1e-5);
    }

    #[test]
    fn side_and_shape_errors() {
        assert!(matches!(
            classical_correlation(&bell_pair(), 2),
            Err(Error::Usage(_))
        ));
        let ghz = make_state(&StateSpec::new(Family::Ghz)).unwrap();
        assert!(matches!(discord(&ghz, 0), Err(Error::Usage(_))));
        assert!(matches!(
            entanglement_of_formation(&ghz),
            Err(Error::Usage(_))
        ));
        assert!(saturation_check(&bell_pair(), &ObservablePair::pauli_xz(), 1e-6).is_err());
    }

    #[test]
    fn eof_examples() {
        assert!((entanglement_of_formation(&bell_pair()).unwrap() - 1.0).abs() < 1e-12);
        assert!(entanglement_of_formation(&classical_pair()).unwrap().abs() < 1e-12);
        let b = PI / 8.0;
        let mut v = vec![C64::new(0.0, 0.0); 4];
        v[0] = C64::new(b.cos(), 0.0);
        v[3] = C64::new(b.sin(), 0.0);
        let pure = DensityMatrix::from_pure(&v, DimVector::qubits(2)).unwrap();
        let analytic = binary_entropy(b.cos().powi(2));
        assert!((analytic - 0.6009).abs() < 1e-4);
        assert!((entanglement_of_formation(&pure).unwrap() - analytic).abs() < 1e-10);
    }

    #[test]
    fn werner_two_qubit_concurrence() {
        // (1 - p) Φ⁺ + p I/4 has C = max(0, 1 - 3p/2).
        for &p in &[0.0, 0.2, 0.5, 0.7, 1.0] {
            let m = &bell_pair().matrix().scale_real(1.0 - p)
                + &ComplexMatrix::identity(4).scale_real(p / 4.0);
            let rho = DensityMatrix::new(m, DimVector::qubits(2)).unwrap();
            let expected = (1.0 - 1.5 * p).max(0.0);
            assert!(
                (concurrence(&rho).unwrap() - expected).abs() < 1e-10,
                "p={p}"
            );
        }
    }

    #[test]
    fn ghz_saturation() {
        let ghz = make_state(&StateSpec::new(Family::Ghz)).unwrap();
        let r = saturation_check(&ghz, &ObservablePair::pauli_xz(), SATURATION_TOL).unwrap();
        for v in [
            r.ssa_residual,
            r.kw_residual_ab,
            r.kw_residual_ac,
            r.conservation_residual,
            r.uncertainty_slack,
        ] {
            assert!(v.abs() < 5e-5, "{r:?}");
        }
        assert!(r.ssa_saturated);
    }

    #[test]
    fn bell_zero_saturation() {
        let rho = make_state(&StateSpec::new(Family::Bell)).unwrap();
        let r = saturation_check(&rho, &ObservablePair::pauli_xz(), SATURATION_TOL).unwrap();
        assert!(r.ssa_residual.abs() < 1e-12);
        assert!((r.eof_ab - 1.0).abs() < 1e-10 && r.discord_ac.abs() < 1e-5);
        assert!(r.kw_residual_ab.abs() < 1e-5 && r.kw_residual_ac.abs() < 1e-5);
        assert!(r.uncertainty_slack.abs() < 1e-12);
    }

    #[test]
    fn product_zero_saturation() {
        let rho = make_state(&StateSpec::new(Family::Gghz).with("beta", 0.0)).unwrap();
        let r = saturation_check(&rho, &ObservablePair::pauli_xz(), SATURATION_TOL).unwrap();
        for v in [
            r.ssa_residual,
            r.kw_residual_ab,
            r.kw_residual_ac,
            r.conservation_residual,
            r.uncertainty_slack,
        ] {
            assert!(v.abs() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn residuals_are_related_through_ssa() {
        let rho = random_density(DimVector::qubits(3), 3, 5).unwrap();
        let r = saturation_check(&rho, &ObservablePair::pauli_xz(), SATURATION_TOL).unwrap();
        let lhs = r.conservation_residual;
        let rhs = r.kw_residual_ab + r.kw_residual_ac + 2.0 * r.ssa_residual;
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
