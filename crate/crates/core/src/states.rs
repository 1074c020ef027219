//! Three-qubit state families and seeded random density matrices.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, DimVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// cos β |000⟩ + sin β |111⟩
    Gghz,
    /// (1 - p) |GHZ⟩⟨GHZ| + p I/8
    Werner,
    /// sin θ cos φ |100⟩ + sin θ sin φ |010⟩ + cos θ |001⟩
    Gw,
    /// (1 - p) I/8 + p/2 |GHZ⟩⟨GHZ| + p/2 |W⟩⟨W|
    SymMixed,
    Ghz,
    W,
    /// |Φ⁺⟩ on AB with C in |0⟩.
    Bell,
    /// Loaded from a JSON state file.
    Custom,
    /// Ginibre random state on three qubits.
    Random,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Gghz,
        Family::Werner,
        Family::Gw,
        Family::SymMixed,
        Family::Ghz,
        Family::W,
        Family::Bell,
        Family::Custom,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gghz => "gghz",
            Family::Werner => "werner",
            Family::Gw => "gw",
            Family::SymMixed => "sym-mixed",
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::Bell => "bell",
            Family::Custom => "custom",
            Family::Random => "random",
        }
    }

    /// Continuous parameters that can be swept.
    pub fn sweepable(self) -> &'static [&'static str] {
        match self {
            Family::Gghz => &["beta"],
            Family::Werner | Family::SymMixed => &["p"],
            Family::Gw => &["theta", "phi"],
            _ => &[],
        }
    }

    fn accepted(self) -> &'static [&'static str] {
        match self {
            Family::Random => &["seed", "rank"],
            f => f.sweepable(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| Error::usage(format!("unknown state family '{s}'")))
    }
}

/// Whether a parameter's natural domain is a half-open period.
pub fn is_periodic(param: &str) -> bool {
    matches!(param, "beta" | "phi")
}

/// A state family together with its parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
    /// Source file for [`Family::Custom`].
    pub custom_path: Option<PathBuf>,
}

impl StateSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            params: BTreeMap::new(),
            custom_path: None,
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn custom(path: impl Into<PathBuf>) -> Self {
        Self {
            family: Family::Custom,
            params: BTreeMap::new(),
            custom_path: Some(path.into()),
        }
    }

    fn param(&self, name: &str) -> Result<f64> {
        self.params.get(name).copied().ok_or_else(|| {
            Error::usage(format!("{} state requires parameter '{name}'", self.family))
        })
    }

    fn param_in(&self, name: &str, lo: f64, hi: f64, hi_inclusive: bool) -> Result<f64> {
        let v = self.param(name)?;
        let ok = v.is_finite() && v >= lo && if hi_inclusive { v <= hi } else { v < hi };
        if !ok {
            let close = if hi_inclusive { ']' } else { ')' };
            return Err(Error::usage(format!(
                "parameter '{name}' = {v} outside [{lo}, {hi}{close}"
            )));
        }
        Ok(v)
    }

    /// Checks parameter names and ranges without building the state.
    pub fn validate(&self) -> Result<()> {
        for name in self.params.keys() {
            if !self.family.accepted().contains(&name.as_str()) {
                return Err(Error::usage(format!(
                    "parameter '{name}' does not belong to the {} family",
                    self.family
                )));
            }
        }
        match self.family {
            Family::Gghz => {
                self.param_in("beta", 0.0, 2.0 * PI, false)?;
            }
            Family::Werner | Family::SymMixed => {
                self.param_in("p", 0.0, 1.0, true)?;
            }
            Family::Gw => {
                self.param_in("theta", 0.0, PI, true)?;
                self.param_in("phi", 0.0, 2.0 * PI, false)?;
            }
            Family::Custom if self.custom_path.is_none() => {
                return Err(Error::usage("custom state needs a state file"));
            }
            Family::Random => {
                let seed = self.param("seed")?;
                if seed < 0.0 || seed.fract() != 0.0 {
                    return Err(Error::usage(format!(
                        "seed must be a non-negative integer, got {seed}"
                    )));
                }
                if let Some(&r) = self.params.get("rank") {
                    if !(1.0..=8.0).contains(&r) || r.fract() != 0.0 {
                        return Err(Error::usage(format!(
                            "rank must be an integer in 1..=8, got {r}"
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if let Some(p) = &self.custom_path {
            return write!(f, ":{}", p.display());
        }
        let mut sep = ':';
        for (k, v) in &self.params {
            write!(f, "{sep}{k}={v}")?;
            sep = ',';
        }
        Ok(())
    }
}

/// Parses `family[:name=value,...]`, or `custom:<path>`.
impl FromStr for StateSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (s, None),
        };
        let family: Family = head.parse()?;
        if family == Family::Custom {
            let path = tail
                .filter(|t| !t.is_empty())
                .ok_or_else(|| Error::usage("custom state needs a path: custom:<file>"))?;
            return Ok(StateSpec::custom(path));
        }
        let mut spec = StateSpec::new(family);
        for item in tail
            .into_iter()
            .flat_map(|t| t.split(','))
            .filter(|x| !x.trim().is_empty())
        {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::usage(format!("expected name=value, got '{item}'")))?;
            let v: f64 = v.trim().parse().map_err(|_| {
                Error::usage(format!("parameter '{}' is not a number: '{v}'", k.trim()))
            })?;
            spec.params.insert(k.trim().to_string(), v);
        }
        Ok(spec)
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Computational basis vector `|bits⟩` on `n` qubits.
pub fn basis_ket(n: usize, index: usize) -> Vec<C64> {
    let mut v = vec![re(0.0); 1 << n];
    v[index] = re(1.0);
    v
}

pub fn ghz_vector() -> Vec<C64> {
    let mut v = vec![re(0.0); 8];
    v[0] = re(FRAC_1_SQRT_2);
    v[7] = re(FRAC_1_SQRT_2);
    v
}

/// `(|001⟩ + |010⟩ + |100⟩) / √3`.
pub fn w_vector() -> Vec<C64> {
    let a = re(1.0 / 3f64.sqrt());
    let mut v = vec![re(0.0); 8];
    v[1] = a;
    v[2] = a;
    v[4] = a;
    v
}

/// Two-qubit `|Φ⁺⟩⟨Φ⁺|`.
pub fn bell_pair() -> DensityMatrix {
    let mut v = vec![re(0.0); 4];
    v[0] = re(FRAC_1_SQRT_2);
    v[3] = re(FRAC_1_SQRT_2);
    DensityMatrix::from_pure(&v, DimVector::qubits(2)).expect("Bell state is valid")
}

fn projector3(v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::projector(v)
}

pub fn make_state(spec: &StateSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    let dims = DimVector::qubits(3);
    let id8 = ComplexMatrix::identity(8);
    let matrix = match spec.family {
        Family::Gghz => {
            let b = spec.param("beta")?;
            let mut v = vec![re(0.0); 8];
            v[0] = re(b.cos());
            v[7] = re(b.sin());
            projector3(&v)
        }
        Family::Werner => {
            let p = spec.param("p")?;
            &projector3(&ghz_vector()).scale_real(1.0 - p) + &id8.scale_real(p / 8.0)
        }
        Family::Gw => {
            let (t, f) = (spec.param("theta")?, spec.param("phi")?);
            let mut v = vec![re(0.0); 8];
            v[0b100] = re(t.sin() * f.cos());
            v[0b010] = re(t.sin() * f.sin());
            v[0b001] = re(t.cos());
            projector3(&v)
        }
        Family::SymMixed => {
            let p = spec.param("p")?;
            let mix = &projector3(&ghz_vector()).scale_real(p / 2.0)
                + &projector3(&w_vector()).scale_real(p / 2.0);
            &id8.scale_real((1.0 - p) / 8.0) + &mix
        }
        Family::Ghz => projector3(&ghz_vector()),
        Family::W => projector3(&w_vector()),
        Family::Bell => {
            return Ok(bell_pair().tensor(&DensityMatrix::from_pure(
                &basis_ket(1, 0),
                DimVector::qubits(1),
            )?))
        }
        Family::Custom => {
            let path = spec.custom_path.as_ref().expect("validated");
            return crate::io::load_state_file(path);
        }
        Family::Random => {
            let seed = spec.param("seed")? as u64;
            let rank = spec.params.get("rank").map_or(8, |&r| r as usize);
            return random_density(dims, rank, seed);
        }
    };
    DensityMatrix::new(matrix, dims)
}

/// Ginibre-ensemble state `GG† / Tr(GG†)` with `G` a `dim × rank` matrix of
/// standard complex Gaussians drawn from a ChaCha8 stream seeded by `seed`.
pub fn random_density(dims: DimVector, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with(&mut rng, dims, rank)
}

pub fn random_density_with<R: Rng + ?Sized>(
    rng: &mut R,
    dims: DimVector,
    rank: usize,
) -> Result<DensityMatrix> {
    let dim = dims.total();
    if rank == 0 || rank > dim {
        return Err(Error::usage(format!("rank {rank} outside 1..={dim}")));
    }
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| gaussian(rng));
    let ggh = g.matmul(&g.adjoint());
    let tr = ggh.trace().re;
    DensityMatrix::new(ggh.scale_real(1.0 / tr), dims)
}

/// Haar-random pure state as a vector.
pub fn random_pure_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub(crate) fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;

    #[test]
    fn gghz_beta_zero_is_000() {
        let rho = make_state(&StateSpec::new(Family::Gghz).with("beta", 0.0)).unwrap();
        let expected = ComplexMatrix::projector(&basis_ket(3, 0));
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn werner_p1_is_maximally_mixed() {
        let rho = make_state(&StateSpec::new(Family::Werner).with("p", 1.0)).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::identity(8).scale_real(0.125))
                < 1e-15
        );
    }

    #[test]
    fn gw_angles_substitute() {
        let rho = make_state(
            &StateSpec::new(Family::Gw)
                .with("theta", PI / 2.0)
                .with("phi", PI / 4.0),
        )
        .unwrap();
        let mut v = vec![re(0.0); 8];
        v[4] = re(FRAC_1_SQRT_2);
        v[2] = re(FRAC_1_SQRT_2);
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::projector(&v)) < 1e-15);
    }

    #[test]
    fn w_state_is_normalized() {
        let rho = make_state(&StateSpec::new(Family::W)).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sym_mixed_p0_is_maximally_mixed() {
        let rho = make_state(&StateSpec::new(Family::SymMixed).with("p", 0.0)).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::identity(8).scale_real(0.125))
                < 1e-15
        );
        let w1 = make_state(&StateSpec::new(Family::Werner).with("p", 1.0)).unwrap();
        assert!(rho.matrix().max_abs_diff(w1.matrix()) < 1e-15);
    }

    #[test]
    fn parameter_ranges_enforced() {
        let bad = [
            StateSpec::new(Family::Werner).with("p", 1.5),
            StateSpec::new(Family::SymMixed).with("p", -0.1),
            StateSpec::new(Family::Gghz).with("beta", 2.0 * PI),
            StateSpec::new(Family::Gw)
                .with("theta", 4.0)
                .with("phi", 0.0),
            StateSpec::new(Family::Gw)
                .with("theta", 1.0)
                .with("phi", 7.0),
            StateSpec::new(Family::Gw).with("theta", 1.0),
            StateSpec::new(Family::Ghz).with("p", 0.5),
            StateSpec::new(Family::Random),
        ];
        for spec in bad {
            let err = make_state(&spec).unwrap_err();
            assert!(matches!(err, Error::Usage(_)), "{spec}: {err}");
        }
        let msg = make_state(&StateSpec::new(Family::Werner).with("p", 1.5))
            .unwrap_err()
            .to_string();
        assert!(msg.contains("'p'"), "{msg}");
    }

    #[test]
    fn spec_parsing() {
        let s: StateSpec = "gw:theta=0.5,phi=0.25".parse().unwrap();
        assert_eq!(
            s,
            StateSpec::new(Family::Gw)
                .with("theta", 0.5)
                .with("phi", 0.25)
        );
        assert_eq!(
            "sym_mixed:p=1".parse::<StateSpec>().unwrap().family,
            Family::SymMixed
        );
        assert_eq!(
            "custom:/tmp/x.json"
                .parse::<StateSpec>()
                .unwrap()
                .custom_path,
            Some(PathBuf::from("/tmp/x.json"))
        );
        assert!("bogus".parse::<StateSpec>().is_err());
        assert!("gw:theta".parse::<StateSpec>().is_err());
        assert!("gw:theta=abc".parse::<StateSpec>().is_err());
    }

    #[test]
    fn random_states() {
        let pure = random_density(DimVector::qubits(1), 1, 7).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);

        let full = random_density(DimVector::qubits(3), 8, 42).unwrap();
        assert!(crate::linalg::validate_density(full.matrix(), full.dims(), DEFAULT_TOL).is_ok());
        assert_eq!(full.rank(1e-12), 8);

        let again = random_density(DimVector::qubits(3), 8, 42).unwrap();
        assert_eq!(full, again);
        assert!(random_density(DimVector::qubits(1), 3, 0).is_err());
        assert!(random_density(DimVector::qubits(1), 0, 0).is_err());
    }

    #[test]
    fn every_family_validates() {
        let specs = [
            StateSpec::new(Family::Gghz).with("beta", 1.0),
            StateSpec::new(Family::Werner).with("p", 0.3),
            StateSpec::new(Family::Gw)
                .with("theta", 1.0)
                .with("phi", 2.0),
            StateSpec::new(Family::SymMixed).with("p", 0.7),
            StateSpec::new(Family::Ghz),
            StateSpec::new(Family::W),
            StateSpec::new(Family::Bell),
            StateSpec::new(Family::Random)
                .with("seed", 3.0)
                .with("rank", 2.0),
        ];
        for spec in specs {
            let rho = make_state(&spec).unwrap();
            assert!(
                crate::linalg::validate_density(rho.matrix(), rho.dims(), DEFAULT_TOL).is_ok(),
                "{spec}"
            );
            assert_eq!(rho.dims().as_slice(), &[2, 2, 2]);
        }
    }
}
