//! Scenario parameters: defaults, JSON config files and flag overrides.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use spinorlab::PhysicalConstants;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Declares a parameter block with its defaults and a matching set of
/// optional command-line flags.
macro_rules! params {
    ($params:ident, $flags:ident { $($(#[doc = $doc:literal])* $field:ident: $ty:ty = $default:expr,)* }) => {
        #[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
        #[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
        pub struct $params {
            $(pub $field: $ty,)*
        }

        impl Default for $params {
            fn default() -> Self {
                Self { $($field: $default,)* }
            }
        }

        #[derive(Clone, Debug, Default, Args)]
        pub struct $flags {
            $(
                $(#[doc = $doc])*
                #[arg(long, allow_negative_numbers = true)]
                pub $field: Option<$ty>,
            )*
        }

        impl $flags {
            pub fn apply(self, params: &mut $params) {
                $(if let Some(v) = self.$field {
                    params.$field = v;
                })*
            }
        }
    };
}

params!(
    AlgebraParams,
    AlgebraFlags {
        /// Number of random momenta [default: 100]
        samples: usize = 100,
        /// Seed of the momentum sampler [default: 0]
        seed: u64 = 0,
    }
);

params!(
    StepParams,
    StepFlags {
        /// Step height in units of m0c² [default: 1.95]
        v0: f64 = 1.95,
        /// Step smoothing width [default: 1/(4c)]
        w: f64 = 0.25 / PhysicalConstants::atomic().c(),
        /// Spatial standard deviation of the packet [default: 0.025]
        width: f64 = 0.025,
        /// Initial packet centre along x [default: -0.175]
        x0: f64 = -0.175,
        /// Mean momentum along x in units of m0c [default: 1.0]
        px: f64 = 1.0,
        /// Grid points along x, a power of two [default: 1024]
        nx: usize = 1024,
        /// Grid points along y, a power of two [default: 128]
        ny: usize = 128,
        /// Time step [default: 1e-6]
        dt: f64 = 1e-6,
        /// Final time, a multiple of dt [default: 0.0035]
        t_end: f64 = 0.0035,
        /// Record a row every this many steps [default: 10]
        sample_every: usize = 10,
        /// Spin axis of the packet and of the measured components: x, y or z [default: y]
        axis: String = "y".into(),
    }
);

params!(
    KapitzaParams,
    KapitzaFlags {
        /// Ponderomotive amplitude in units of m0c² [default: 0.88]
        v0: f64 = 0.88,
        /// Laser wave number along x in units of m0c [default: 0.5]
        k: f64 = 0.5,
        /// Initial momentum along x in units of m0c [default: -0.3169]
        px: f64 = -0.3169,
        /// Initial momentum along z in units of m0c [default: 0.1]
        pz: f64 = 0.1,
        /// Pulse duration in laser periods [default: 10.7]
        t_end: f64 = 10.7,
        /// Ladder truncation: orders -n_max..=n_max [default: 8]
        n_max: usize = 8,
        /// Integrator steps per laser period [default: 4096]
        steps_per_period: usize = 4096,
        /// Output rows per laser period [default: 10]
        samples_per_period: usize = 10,
    }
);

params!(
    HydrogenScanParams,
    HydrogenScanFlags {
        /// Comma-separated operator labels (P,FW,Cz,F,Ch,Pr,FG) or `all` [default: all]
        kinds: String = "all".into(),
        /// Smallest atomic number [default: 1]
        z_min: f64 = 1.0,
        /// Largest atomic number [default: 137]
        z_max: f64 = 137.0,
        /// Number of equally spaced atomic numbers [default: 137]
        steps: usize = 137,
        /// Radial quadrature nodes [default: 256]
        radial_nodes: usize = 256,
        /// Quadrature nodes in cos θ and in φ [default: 64]
        angular_nodes: usize = 64,
        /// Magnetic quantum number: up (+1/2) or down (-1/2) [default: up]
        m: String = "up".into(),
    }
);

params!(
    GaussianParams,
    GaussianFlags {
        /// Momentum spread in units of m0c; 0 gives the sharp-momentum limit [default: 0.001]
        sigma: f64 = 1e-3,
        /// Smallest mean momentum in units of m0c [default: -3]
        px_min: f64 = -3.0,
        /// Largest mean momentum in units of m0c [default: 3]
        px_max: f64 = 3.0,
        /// Number of mean momenta [default: 61]
        points: usize = 61,
    }
);

/// Keys accepted in every config file besides the scenario parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileCommon {
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Reads a JSON object of kebab-case parameter names; `output` and `format`
/// may appear alongside them.
pub fn load<P: Default + for<'de> Deserialize<'de>>(
    path: Option<&Path>,
) -> Result<(P, FileCommon), CliError> {
    let Some(path) = path else {
        return Ok((P::default(), FileCommon::default()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let bad = |e: &dyn std::fmt::Display| CliError::Config(format!("{}: {e}", path.display()));
    let mut map: Map<String, Value> = serde_json::from_str(&text).map_err(|e| bad(&e))?;
    let mut common = FileCommon::default();
    if let Some(v) = map.remove("output") {
        common.output = Some(serde_json::from_value(v).map_err(|e| bad(&e))?);
    }
    if let Some(v) = map.remove("format") {
        common.format = Some(serde_json::from_value(v).map_err(|e| bad(&e))?);
    }
    let params = serde_json::from_value(Value::Object(map)).map_err(|e| bad(&e))?;
    Ok((params, common))
}
