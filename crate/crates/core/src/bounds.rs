//! Memory-assisted uncertainty: the measured left-hand sides and the ladder of
//! lower bounds, bipartite (memory B) and tripartite (memories B and C).
//!
//! Subsystem roles are fixed by position: 0 is the measured system A, 1 is
//! the memory B that guesses X, 2 is the memory C (or Eve, E) that guesses Z.

use serde::{Deserialize, Serialize};

use crate::entropy::{holevo, spectrum_entropy, von_neumann};
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::measurement::{measure_channel, Basis, ObservablePair};

/// Every uncertainty, bound and intermediate for one state and observable pair.
///
/// Fields that need the third subsystem are `None` for bipartite input.
/// The `delta_*` fields hold the unclamped values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs_bipartite: f64,
    pub lhs_tripartite: Option<f64>,
    pub q_mu: f64,
    pub s_a: f64,
    pub s_a_given_b: f64,
    pub s_a_given_c: Option<f64>,
    pub s_x_given_b: f64,
    pub s_z_given_b: f64,
    pub s_z_given_c: Option<f64>,
    pub i_ab: f64,
    pub i_ac: Option<f64>,
    pub hol_xb: f64,
    pub hol_zb: f64,
    pub hol_xc: Option<f64>,
    pub hol_zc: Option<f64>,
    pub h_x: f64,
    pub h_z: f64,
    pub delta_adabi: f64,
    pub delta_new: Option<f64>,
    pub delta_ming: Option<f64>,
    pub ssa_term: Option<f64>,
    pub bound_mu: f64,
    pub bound_no_memory: f64,
    pub bound_berta: f64,
    pub bound_adabi: f64,
    pub bound_tripartite_base: Option<f64>,
    pub bound_ming: Option<f64>,
    pub bound_new: Option<f64>,
}

impl BoundReport {
    pub fn is_tripartite(&self) -> bool {
        self.lhs_tripartite.is_some()
    }

    fn tri(&self, v: Option<f64>, name: &str) -> Result<f64> {
        v.ok_or_else(|| Error::usage(format!("{name} needs a tripartite state")))
    }

    /// `q_MU + (S(A|B) + S(A|C))/2 + δ` without the clamp on δ. This is the
    /// quantity the chain `H(X) + H(Z) ≥ q_MU + S(A)` actually bounds from
    /// below; the clamped `bound_new` can exceed the left-hand side when δ < 0.
    pub fn bound_new_unclamped(&self) -> Option<f64> {
        Some(self.q_mu + self.ssa_term? + self.delta_new?)
    }

    /// `q_MU - S(X|B) - S(Z|B)`.
    pub fn key_rate_berta(&self) -> f64 {
        self.q_mu - self.s_x_given_b - self.s_z_given_b
    }

    /// `q_MU + (S(A|B) + S(A|E))/2 + max(0, δ) - S(X|B) - S(Z|B)`.
    pub fn key_rate_new(&self) -> Result<f64> {
        let ssa = self.tri(self.ssa_term, "key_rate_new")?;
        let delta = self.tri(self.delta_new, "key_rate_new")?;
        Ok(self.q_mu + ssa + delta.max(0.0) - self.s_x_given_b - self.s_z_given_b)
    }
}

/// Post-measurement pieces shared by several bounds.
struct Branch {
    state: DensityMatrix,
    /// Shannon entropy of the outcome distribution.
    h: f64,
}

fn branch(rho: &DensityMatrix, basis: &Basis, rho_a: &DensityMatrix) -> Result<Branch> {
    let state = measure_channel(rho, basis, 0)?;
    let probs: Vec<f64> = basis
        .vectors()
        .iter()
        .map(|v| rho_a.matrix().expectation(v).re.max(0.0))
        .collect();
    Ok(Branch {
        state,
        h: spectrum_entropy(&probs),
    })
}

pub fn evaluate(rho: &DensityMatrix, pair: &ObservablePair) -> Result<BoundReport> {
    let n = rho.num_subsystems();
    if !(2..=3).contains(&n) {
        return Err(Error::usage(format!(
            "bounds need 2 or 3 subsystems, state has {n}"
        )));
    }
    if rho.dims()[0] != pair.dim() {
        return Err(Error::usage(format!(
            "observables act on dimension {} but subsystem A has dimension {}",
            pair.dim(),
            rho.dims()[0]
        )));
    }
    let q = pair.q_mu;
    let rho_a = rho.reduce(&[0])?;
    let s_a = von_neumann(&rho_a);
    let s_b = von_neumann(&rho.reduce(&[1])?);
    let s_ab = von_neumann(&rho.reduce(&[0, 1])?);

    let x = branch(rho, &pair.basis_x, &rho_a)?;
    let z = branch(rho, &pair.basis_z, &rho_a)?;
    let s_x_given_b = von_neumann(&x.state.reduce(&[0, 1])?) - s_b;
    let s_z_given_b = von_neumann(&z.state.reduce(&[0, 1])?) - s_b;
    let hol_xb = holevo(rho, &pair.basis_x, 0, 1)?;
    let hol_zb = holevo(rho, &pair.basis_z, 0, 1)?;

    let s_a_given_b = s_ab - s_b;
    let i_ab = s_a + s_b - s_ab;
    let delta_adabi = i_ab - (hol_xb + hol_zb);

    let mut report = BoundReport {
        lhs_bipartite: s_x_given_b + s_z_given_b,
        lhs_tripartite: None,
        q_mu: q,
        s_a,
        s_a_given_b,
        s_a_given_c: None,
        s_x_given_b,
        s_z_given_b,
        s_z_given_c: None,
        i_ab,
        i_ac: None,
        hol_xb,
        hol_zb,
        hol_xc: None,
        hol_zc: None,
        h_x: x.h,
        h_z: z.h,
        delta_adabi,
        delta_new: None,
        delta_ming: None,
        ssa_term: None,
        bound_mu: q,
        bound_no_memory: q + s_a,
        bound_berta: q + s_a_given_b,
        bound_adabi: q + s_a_given_b + delta_adabi.max(0.0),
        bound_tripartite_base: None,
        bound_ming: None,
        bound_new: None,
    };
    if n == 2 {
        return Ok(report);
    }

    let s_c = von_neumann(&rho.reduce(&[2])?);
    let s_ac = von_neumann(&rho.reduce(&[0, 2])?);
    let s_z_given_c = von_neumann(&z.state.reduce(&[0, 2])?) - s_c;
    let hol_xc = holevo(rho, &pair.basis_x, 0, 2)?;
    let hol_zc = holevo(rho, &pair.basis_z, 0, 2)?;
    let s_a_given_c = s_ac - s_c;
    let i_ac = s_a + s_c - s_ac;

    let ssa_term = (s_a_given_b + s_a_given_c) / 2.0;
    let delta_new = (i_ab + i_ac) / 2.0 - (hol_xb + hol_zc);
    // The Holevo terms here are crossed: Z with B, X with C.
    let delta_ming = q + 2.0 * s_a - (i_ab + i_ac) + (hol_zb + hol_xc) - x.h - z.h;

    report.lhs_tripartite = Some(s_x_given_b + s_z_given_c);
    report.s_a_given_c = Some(s_a_given_c);
    report.s_z_given_c = Some(s_z_given_c);
    report.i_ac = Some(i_ac);
    report.hol_xc = Some(hol_xc);
    report.hol_zc = Some(hol_zc);
    report.delta_new = Some(delta_new);
    report.delta_ming = Some(delta_ming);
    report.ssa_term = Some(ssa_term);
    report.bound_tripartite_base = Some(q);
    report.bound_ming = Some(q + delta_ming.max(0.0));
    report.bound_new = Some(q + ssa_term + delta_new.max(0.0));
    Ok(report)
}

fn require_tripartite(rho: &DensityMatrix) -> Result<()> {
    if rho.num_subsystems() != 3 {
        return Err(Error::usage(format!(
            "key rates need an (A, B, E) state, got {} subsystems",
            rho.num_subsystems()
        )));
    }
    Ok(())
}

/// `q_MU - S(X|B) - S(Z|B)`, with subsystem 2 as the eavesdropper.
pub fn key_rate_berta(rho: &DensityMatrix, pair: &ObservablePair) -> Result<f64> {
    require_tripartite(rho)?;
    Ok(evaluate(rho, pair)?.key_rate_berta())
}

/// Key-rate bound obtained from the tripartite relation with C = E.
pub fn key_rate_new(rho: &DensityMatrix, pair: &ObservablePair) -> Result<f64> {
    require_tripartite(rho)?;
    evaluate(rho, pair)?.key_rate_new()
}

/// One-way rate `S(Z|E) - S(Z|B)` for Z measured on A.
pub fn devetak_winter(rho: &DensityMatrix, z_basis: &Basis) -> Result<f64> {
    require_tripartite(rho)?;
    if rho.dims()[0] != z_basis.dim() {
        return Err(Error::usage("basis dimension differs from subsystem A"));
    }
    let z = measure_channel(rho, z_basis, 0)?;
    let s_z_e = von_neumann(&z.reduce(&[0, 2])?) - von_neumann(&rho.reduce(&[2])?);
    let s_z_b = von_neumann(&z.reduce(&[0, 1])?) - von_neumann(&rho.reduce(&[1])?);
    Ok(s_z_e - s_z_b)
}
