//! Parameter sweeps over state families, the figure presets, and the
//! randomized invariant check.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{evaluate, BoundReport};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DimVector};
use crate::measurement::{
    pair_from_observables, random_observable, sigma1, sigma3, ObservablePair,
};
use crate::states::{is_periodic, make_state, random_density_with, Family, StateSpec};

/// One CSV column of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    LhsTripartite,
    BoundNew,
    BoundMing,
    BoundBase,
    BoundNoMemory,
    DeltaNew,
    DeltaMing,
    SsaTerm,
    SAGivenB,
    SAGivenC,
    IAb,
    IAc,
    HolXb,
    HolZc,
}

pub const DEFAULT_COLUMNS: [Column; 14] = [
    Column::LhsTripartite,
    Column::BoundNew,
    Column::BoundMing,
    Column::BoundBase,
    Column::BoundNoMemory,
    Column::DeltaNew,
    Column::DeltaMing,
    Column::SsaTerm,
    Column::SAGivenB,
    Column::SAGivenC,
    Column::IAb,
    Column::IAc,
    Column::HolXb,
    Column::HolZc,
];

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::LhsTripartite => "lhs_tripartite",
            Column::BoundNew => "bound_new",
            Column::BoundMing => "bound_ming",
            Column::BoundBase => "bound_base",
            Column::BoundNoMemory => "bound_no_memory",
            Column::DeltaNew => "delta_new",
            Column::DeltaMing => "delta_ming",
            Column::SsaTerm => "ssa_term",
            Column::SAGivenB => "s_a_given_b",
            Column::SAGivenC => "s_a_given_c",
            Column::IAb => "i_ab",
            Column::IAc => "i_ac",
            Column::HolXb => "hol_xb",
            Column::HolZc => "hol_zc",
        }
    }

    pub fn value(self, r: &BoundReport) -> Option<f64> {
        match self {
            Column::LhsTripartite => r.lhs_tripartite,
            Column::BoundNew => r.bound_new,
            Column::BoundMing => r.bound_ming,
            Column::BoundBase => r.bound_tripartite_base,
            Column::BoundNoMemory => Some(r.bound_no_memory),
            Column::DeltaNew => r.delta_new,
            Column::DeltaMing => r.delta_ming,
            Column::SsaTerm => r.ssa_term,
            Column::SAGivenB => Some(r.s_a_given_b),
            Column::SAGivenC => r.s_a_given_c,
            Column::IAb => Some(r.i_ab),
            Column::IAc => r.i_ac,
            Column::HolXb => Some(r.hol_xb),
            Column::HolZc => r.hol_zc,
        }
    }
}

impl FromStr for Column {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DEFAULT_COLUMNS
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::usage(format!("unknown column '{s}'")))
    }
}

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros removed.
pub fn format_sig12(x: f64) -> String {
    const SIG: i32 = 12;
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..SIG).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (SIG - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Family plus the fixed parameters.
    pub state: StateSpec,
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub obs_x: ComplexMatrix,
    pub obs_z: ComplexMatrix,
    pub columns: Vec<Column>,
}

impl SweepSpec {
    pub fn new(state: StateSpec, param: &str, from: f64, to: f64, steps: usize) -> Self {
        Self {
            state,
            param: param.to_string(),
            from,
            to,
            steps,
            obs_x: sigma1(),
            obs_z: sigma3(),
            columns: DEFAULT_COLUMNS.to_vec(),
        }
    }

    /// Grid values, ascending. The upper end is excluded for periodic parameters.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.to - self.from;
        if is_periodic(&self.param) {
            (0..self.steps)
                .map(|i| self.from + span * i as f64 / self.steps as f64)
                .collect()
        } else {
            let last = self.steps - 1;
            (0..self.steps)
                .map(|i| {
                    if i == last {
                        self.to
                    } else {
                        self.from + span * i as f64 / last as f64
                    }
                })
                .collect()
        }
    }

    pub fn state_at(&self, value: f64) -> StateSpec {
        self.state.clone().with(&self.param, value)
    }

    pub fn validate(&self) -> Result<ObservablePair> {
        if !self.state.family.sweepable().contains(&self.param.as_str()) {
            return Err(Error::usage(format!(
                "parameter '{}' cannot be swept for the {} family (sweepable: {:?})",
                self.param,
                self.state.family,
                self.state.family.sweepable()
            )));
        }
        if self.steps < 2 {
            return Err(Error::usage(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if self.from.partial_cmp(&self.to) != Some(std::cmp::Ordering::Less) {
            return Err(Error::usage(format!(
                "range must satisfy from < to, got [{}, {}]",
                self.from, self.to
            )));
        }
        if self.columns.is_empty() {
            return Err(Error::usage("no output columns selected"));
        }
        let grid = self.grid();
        for v in [grid[0], grid[grid.len() - 1]] {
            self.state_at(v).validate()?;
        }
        pair_from_observables(&self.obs_x, &self.obs_z)
    }

    /// Report at a single parameter value.
    pub fn evaluate_at(&self, value: f64) -> Result<BoundReport> {
        let pair = pair_from_observables(&self.obs_x, &self.obs_z)?;
        evaluate(&make_state(&self.state_at(value))?, &pair)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 4] = [
        FigurePreset::Fig1,
        FigurePreset::Fig2,
        FigurePreset::Fig3,
        FigurePreset::Fig4,
    ];

    pub fn expand(self) -> SweepSpec {
        use std::f64::consts::PI;
        match self {
            FigurePreset::Fig1 => {
                SweepSpec::new(StateSpec::new(Family::Gghz), "beta", 0.0, 2.0 * PI, 201)
            }
            FigurePreset::Fig2 => {
                SweepSpec::new(StateSpec::new(Family::Werner), "p", 0.0, 1.0, 101)
            }
            FigurePreset::Fig3 => SweepSpec::new(
                StateSpec::new(Family::Gw).with("phi", PI / 4.0),
                "theta",
                0.0,
                PI,
                181,
            ),
            FigurePreset::Fig4 => {
                SweepSpec::new(StateSpec::new(Family::SymMixed), "p", 0.0, 1.0, 101)
            }
        }
    }
}

impl FromStr for FigurePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig1" => Ok(FigurePreset::Fig1),
            "fig2" => Ok(FigurePreset::Fig2),
            "fig3" => Ok(FigurePreset::Fig3),
            "fig4" => Ok(FigurePreset::Fig4),
            _ => Err(Error::usage(format!(
                "unknown preset '{s}' (expected fig1..fig4)"
            ))),
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub param: f64,
    pub report: std::result::Result<BoundReport, String>,
}

/// Evaluates every grid point (in parallel) and returns rows in grid order.
pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let pair = spec.validate()?;
    Ok(spec
        .grid()
        .into_par_iter()
        .map(|v| {
            let report = make_state(&spec.state_at(v))
                .and_then(|rho| evaluate(&rho, &pair))
                .map_err(|e| e.to_string());
            SweepRow { param: v, report }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepStats {
    pub rows: usize,
    pub failures: usize,
}

/// Writes the sweep as CSV: a header, then one row per grid point. A point
/// that fails to evaluate gets empty value fields and a trailing error field.
pub fn run_sweep<W: Write>(spec: &SweepSpec, out: &mut W) -> Result<SweepStats> {
    let rows = sweep_rows(spec)?;
    write_csv(spec, &rows, out)?;
    Ok(SweepStats {
        rows: rows.len(),
        failures: rows.iter().filter(|r| r.report.is_err()).count(),
    })
}

fn csv_escape(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn write_csv<W: Write>(spec: &SweepSpec, rows: &[SweepRow], out: &mut W) -> Result<()> {
    let mut header = vec!["param".to_string()];
    header.extend(spec.columns.iter().map(|c| c.name().to_string()));
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let mut fields = vec![format_sig12(row.param)];
        match &row.report {
            Ok(r) => fields.extend(
                spec.columns
                    .iter()
                    .map(|c| c.value(r).map(format_sig12).unwrap_or_default()),
            ),
            Err(msg) => {
                fields.extend(spec.columns.iter().map(|_| String::new()));
                fields.push(csv_escape(&format!("error: {msg}")));
            }
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Settings for the randomized invariant check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub n: usize,
    pub seed: u64,
    pub tol: f64,
    /// Random observable pairs evaluated per state.
    pub pairs_per_state: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            n: 1000,
            seed: 42,
            tol: 1e-9,
            pairs_per_state: 5,
        }
    }
}

/// Counts for one invariant. The margin is `lhs - rhs` for inequalities and
/// `-|lhs - rhs|` for identities, so it is violated when below `-tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantTally {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    pub worst_margin: f64,
    /// `(state index, pair index)` of the worst margin.
    pub worst_at: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub n: usize,
    pub seed: u64,
    pub tol: f64,
    pub pairs_per_state: usize,
    pub invariants: Vec<InvariantTally>,
}

impl CheckSummary {
    pub fn total_violations(&self) -> usize {
        self.invariants.iter().map(|t| t.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn worst_margin(&self) -> f64 {
        self.invariants
            .iter()
            .map(|t| t.worst_margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn tally(&self, name: &str) -> Option<&InvariantTally> {
        self.invariants.iter().find(|t| t.name == name)
    }
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "states: {}  pairs/state: {}  seed: {}  tol: {:e}",
            self.n, self.pairs_per_state, self.seed, self.tol
        )?;
        for t in &self.invariants {
            writeln!(
                f,
                "{:<6} {:<24} checked {:>6}  violations {:>5}  worst margin {:>+.6e}  at state {} pair {}",
                if t.violations == 0 { "PASS" } else { "FAIL" },
                t.name,
                t.checked,
                t.violations,
                t.worst_margin,
                t.worst_at.0,
                t.worst_at.1
            )?;
        }
        write!(
            f,
            "total violations: {}  worst margin: {:+.6e}",
            self.total_violations(),
            self.worst_margin()
        )
    }
}

/// Names of the invariants evaluated by [`run_check`], in report order.
pub const CHECK_INVARIANTS: [&str; 14] = [
    "tripartite_bound",
    "unclamped_chain",
    "base_dominance",
    "ssa_average",
    "identity_ab",
    "identity_ac",
    "cq_decomposition_xb",
    "cq_decomposition_zc",
    "eve_corollary",
    "key_rate_order",
    "bipartite_adabi",
    "adabi_over_berta",
    "holevo_le_mi_b",
    "holevo_le_mi_c",
];

fn margins(r: &BoundReport) -> Result<[f64; 14]> {
    let tri = |v: Option<f64>| v.ok_or_else(|| Error::Numeric("missing tripartite field".into()));
    let lhs = tri(r.lhs_tripartite)?;
    let s_z_given_c = tri(r.s_z_given_c)?;
    let s_a_given_c = tri(r.s_a_given_c)?;
    let i_ac = tri(r.i_ac)?;
    let hol_zc = tri(r.hol_zc)?;
    Ok([
        lhs - tri(r.bound_new)?,
        lhs - tri(r.bound_new_unclamped())?,
        tri(r.bound_new)? - tri(r.bound_tripartite_base)?,
        tri(r.ssa_term)?,
        -(r.s_a - r.s_a_given_b - r.i_ab).abs(),
        -(r.s_a - s_a_given_c - i_ac).abs(),
        -(r.s_x_given_b - (r.h_x - r.hol_xb)).abs(),
        -(s_z_given_c - (r.h_z - hol_zc)).abs(),
        s_z_given_c - (r.q_mu - r.s_x_given_b),
        r.key_rate_new()? - r.key_rate_berta(),
        r.lhs_bipartite - r.bound_adabi,
        r.bound_adabi - r.bound_berta,
        r.i_ab - r.hol_xb,
        i_ac - hol_zc,
    ])
}

/// Draws one random observable pair on a qubit, redrawing degenerate ones.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R) -> ObservablePair {
    loop {
        let x = random_observable(rng, 2);
        let z = random_observable(rng, 2);
        if let Ok(pair) = pair_from_observables(&x, &z) {
            return pair;
        }
    }
}

/// Generates one sample of the check ensemble from its seed: a three-qubit Ginibre
/// state of uniformly drawn rank and `pairs` random observable pairs.
pub fn check_sample(
    state_seed: u64,
    pairs: usize,
) -> Result<(crate::linalg::DensityMatrix, Vec<ObservablePair>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(state_seed);
    let rank = rng.random_range(1..=8);
    let rho = random_density_with(&mut rng, DimVector::qubits(3), rank)?;
    let pairs = (0..pairs).map(|_| random_pair(&mut rng)).collect();
    Ok((rho, pairs))
}

/// Per-state seeds of the check ensemble.
pub fn check_seeds(seed: u64, n: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| master.random()).collect()
}

pub fn run_check(opts: CheckOptions) -> Result<CheckSummary> {
    if opts.n == 0 {
        return Err(Error::usage("n must be at least 1"));
    }
    if opts.pairs_per_state == 0 {
        return Err(Error::usage("need at least one observable pair per state"));
    }
    let per_state: Vec<Vec<[f64; 14]>> = check_seeds(opts.seed, opts.n)
        .into_par_iter()
        .map(|s| {
            let (rho, pairs) = check_sample(s, opts.pairs_per_state)?;
            pairs
                .iter()
                .map(|p| margins(&evaluate(&rho, p)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut invariants: Vec<InvariantTally> = CHECK_INVARIANTS
        .iter()
        .map(|&name| InvariantTally {
            name,
            checked: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            worst_at: (0, 0),
        })
        .collect();
    for (i, pairs) in per_state.iter().enumerate() {
        for (j, m) in pairs.iter().enumerate() {
            for (t, &v) in invariants.iter_mut().zip(m) {
                t.checked += 1;
                if v < -opts.tol {
                    t.violations += 1;
                }
                if v < t.worst_margin {
                    t.worst_margin = v;
                    t.worst_at = (i, j);
                }
            }
        }
    }
    Ok(CheckSummary {
        n: opts.n,
        seed: opts.seed,
        tol: opts.tol,
        pairs_per_state: opts.pairs_per_state,
        invariants,
    })
}

/// Loads a state file and evaluates every bound for the given observables.
pub fn run_report(state_file: &std::path::Path, x: &str, z: &str, tol: f64) -> Result<BoundReport> {
    let rho = crate::io::load_state_file_with_tol(state_file, tol)?;
    let pair = pair_from_observables(
        &crate::io::resolve_observable(x)?,
        &crate::io::resolve_observable(z)?,
    )?;
    evaluate(&rho, &pair)
}
