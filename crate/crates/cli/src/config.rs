//! Flat key-value experiment configuration with dotted sections.
//!
//! ```text
//! problem.family = matrix_game
//! problem.rows = 100
//! problem.cols = 50
//! problem.dist = uniform01
//! problem.seeds = 1, 2, 3
//! algorithms = sp_cba_plus, rm_plus, omd_theoretical
//! run.iterations = 1000
//! run.timing = off
//! output.dir = out
//! ```
//!
//! Lines starting with `#` are comments. Every parse failure names the
//! offending key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use saddle_core::baselines::BaselineMethod;
use saddle_core::problems::EntryDist;

/// A configuration problem, attributed to a key.
#[derive(Debug)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config key '{}': {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Raw parsed key-value pairs.
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line, format!("line {} is not 'key = value'", lineno + 1)))?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(err("(empty)", format!("empty key on line {}", lineno + 1)));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(err(&key, "duplicate key"));
            }
        }
        Ok(RawConfig { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.get(key).ok_or_else(|| err(key, "missing required key"))
    }

    pub fn parse_usize(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| err(key, format!("'{v}' is not a nonnegative integer"))),
        }
    }

    pub fn parse_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| err(key, format!("'{v}' is not a number"))),
        }
    }

    fn keys_with_prefix(&self, prefix: &str) -> Vec<&str> {
        self.entries
            .keys()
            .filter(|k| k.starts_with(prefix))
            .map(|s| s.as_str())
            .collect()
    }
}

/// Which problem family an experiment runs on.
#[derive(Clone, Debug)]
pub enum ProblemSpec {
    MatrixGame {
        rows: usize,
        cols: usize,
        dist: EntryDist,
    },
    DroSynthetic {
        features: usize,
        samples: usize,
        dist: EntryDist,
        flip_fraction: f64,
    },
    DroDataset {
        path: PathBuf,
        features: Option<usize>,
    },
    GarnetMdp {
        states: usize,
        actions: usize,
        branching: f64,
        discount: f64,
        reward_max: f64,
    },
}

impl ProblemSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            ProblemSpec::MatrixGame { .. } => "matrix_game",
            ProblemSpec::DroSynthetic { .. } => "dro_synthetic",
            ProblemSpec::DroDataset { .. } => "dro_dataset",
            ProblemSpec::GarnetMdp { .. } => "garnet_mdp",
        }
    }

    /// Whether both decision sets are simplexes (required by regret matching).
    pub fn is_simplex_pair(&self) -> bool {
        matches!(self, ProblemSpec::MatrixGame { .. })
    }
}

/// One algorithm entry from the config.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmSpec {
    SpCbaPlus,
    CbaUniform,
    RmPlus,
    Baseline { method: BaselineMethod, tuned: bool },
}

impl AlgorithmSpec {
    pub fn parse(name: &str) -> Option<Self> {
        let name = name.trim();
        match name {
            "sp_cba_plus" => Some(AlgorithmSpec::SpCbaPlus),
            "cba_uniform" => Some(AlgorithmSpec::CbaUniform),
            "rm_plus" => Some(AlgorithmSpec::RmPlus),
            _ => {
                let (method_str, tuned) = name.strip_suffix("_tuned").map_or_else(
                    || (name.strip_suffix("_theoretical"), false),
                    |m| (Some(m), true),
                );
                let method = match method_str? {
                    "omd" => BaselineMethod::Omd,
                    "ftrl" => BaselineMethod::Ftrl,
                    "oomd" => BaselineMethod::Oomd,
                    "oftrl" => BaselineMethod::Oftrl,
                    _ => return None,
                };
                Some(AlgorithmSpec::Baseline { method, tuned })
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            AlgorithmSpec::SpCbaPlus => "sp_cba_plus".into(),
            AlgorithmSpec::CbaUniform => "cba_uniform".into(),
            AlgorithmSpec::RmPlus => "rm_plus".into(),
            AlgorithmSpec::Baseline { method, tuned } => format!(
                "{}_{}",
                method.name(),
                if *tuned { "tuned" } else { "theoretical" }
            ),
        }
    }
}

/// Fully validated experiment description.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<AlgorithmSpec>,
    pub iterations: usize,
    pub metric_cadence: usize,
    /// Record wall-clock time in traces (breaks byte-reproducibility).
    pub timing: bool,
    pub time_budget_seconds: Option<f64>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let raw = RawConfig::parse(text)?;
        Self::from_raw(&raw)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let problem = parse_problem(raw)?;

        let seeds_text = raw.get("problem.seeds").unwrap_or("0");
        let mut seeds = Vec::new();
        for tok in seeds_text.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            seeds.push(tok.parse().map_err(|_| {
                err("problem.seeds", format!("'{tok}' is not a valid seed"))
            })?);
        }
        if seeds.is_empty() {
            return Err(err("problem.seeds", "at least one seed is required"));
        }

        let algorithms_text = raw.require("algorithms")?;
        let mut algorithms = Vec::new();
        for tok in algorithms_text.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let alg = AlgorithmSpec::parse(tok)
                .ok_or_else(|| err("algorithms", format!("unknown algorithm '{tok}'")))?;
            if alg == AlgorithmSpec::RmPlus && !problem.is_simplex_pair() {
                return Err(err(
                    "algorithms",
                    "rm_plus needs simplex decision sets (matrix_game only)",
                ));
            }
            algorithms.push(alg);
        }
        if algorithms.is_empty() {
            return Err(err("algorithms", "at least one algorithm is required"));
        }

        let iterations = raw
            .parse_usize("run.iterations")?
            .ok_or_else(|| err("run.iterations", "missing required key"))?;
        if iterations == 0 {
            return Err(err("run.iterations", "must be at least 1"));
        }

        let metric_cadence = raw.parse_usize("run.metric_cadence")?.unwrap_or(0);

        let timing = match raw.get("run.timing").unwrap_or("off") {
            "off" => false,
            "wall" => true,
            other => {
                return Err(err(
                    "run.timing",
                    format!("'{other}' is not one of off, wall"),
                ))
            }
        };

        let time_budget_seconds = raw.parse_f64("run.time_budget_seconds")?;
        if let Some(b) = time_budget_seconds {
            if b <= 0.0 {
                return Err(err("run.time_budget_seconds", "must be positive"));
            }
        }

        let out_dir = PathBuf::from(raw.get("output.dir").unwrap_or("out"));

        // Tuned baselines repeat the probe iterations; the main run must have
        // room left after charging them.
        let probe_cost = 5 * 10;
        if algorithms
            .iter()
            .any(|a| matches!(a, AlgorithmSpec::Baseline { tuned: true, .. }))
            && iterations <= probe_cost
        {
            return Err(err(
                "run.iterations",
                format!("tuned baselines charge {probe_cost} probe iterations; need more"),
            ));
        }

        Ok(ExperimentConfig {
            problem,
            seeds,
            algorithms,
            iterations,
            metric_cadence,
            timing,
            time_budget_seconds,
            out_dir,
        })
    }
}

fn parse_dist(raw: &RawConfig, key: &str) -> Result<EntryDist, ConfigError> {
    match raw.get(key).unwrap_or("uniform01") {
        "uniform01" => Ok(EntryDist::Uniform01),
        "normal01" => Ok(EntryDist::Normal01),
        other => Err(err(key, format!("'{other}' is not one of uniform01, normal01"))),
    }
}

fn parse_problem(raw: &RawConfig) -> Result<ProblemSpec, ConfigError> {
    let family = raw.require("problem.family")?;
    match family {
        "matrix_game" => Ok(ProblemSpec::MatrixGame {
            rows: raw
                .parse_usize("problem.rows")?
                .ok_or_else(|| err("problem.rows", "missing required key"))?,
            cols: raw
                .parse_usize("problem.cols")?
                .ok_or_else(|| err("problem.cols", "missing required key"))?,
            dist: parse_dist(raw, "problem.dist")?,
        }),
        "dro_synthetic" => Ok(ProblemSpec::DroSynthetic {
            features: raw
                .parse_usize("problem.features")?
                .ok_or_else(|| err("problem.features", "missing required key"))?,
            samples: raw
                .parse_usize("problem.samples")?
                .ok_or_else(|| err("problem.samples", "missing required key"))?,
            dist: parse_dist(raw, "problem.dist")?,
            flip_fraction: raw.parse_f64("problem.flip_fraction")?.unwrap_or(0.10),
        }),
        "dro_dataset" => Ok(ProblemSpec::DroDataset {
            path: PathBuf::from(raw.require("problem.path")?),
            features: raw.parse_usize("problem.features")?,
        }),
        "garnet_mdp" => Ok(ProblemSpec::GarnetMdp {
            states: raw
                .parse_usize("problem.states")?
                .ok_or_else(|| err("problem.states", "missing required key"))?,
            actions: raw
                .parse_usize("problem.actions")?
                .ok_or_else(|| err("problem.actions", "missing required key"))?,
            branching: raw.parse_f64("problem.branching")?.unwrap_or(0.5),
            discount: raw.parse_f64("problem.discount")?.unwrap_or(0.95),
            reward_max: raw.parse_f64("problem.reward_max")?.unwrap_or(10.0),
        }),
        other => Err(err(
            "problem.family",
            format!("'{other}' is not one of matrix_game, dro_synthetic, dro_dataset, garnet_mdp (unknown keys present: {:?})",
                raw.keys_with_prefix("problem.")),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
problem.family = matrix_game
problem.rows = 4
problem.cols = 3
problem.seeds = 1, 2
algorithms = sp_cba_plus
run.iterations = 10
";

    #[test]
    fn parses_minimal_matrix_game() {
        let cfg = ExperimentConfig::from_text(MINIMAL).unwrap();
        assert_eq!(cfg.seeds, vec![1, 2]);
        assert_eq!(cfg.iterations, 10);
        assert!(!cfg.timing);
        assert!(matches!(
            cfg.problem,
            ProblemSpec::MatrixGame { rows: 4, cols: 3, .. }
        ));
    }

    #[test]
    fn empty_algorithm_list_is_an_error_naming_the_key() {
        let text = MINIMAL.replace("algorithms = sp_cba_plus", "algorithms = ");
        let e = ExperimentConfig::from_text(&text).unwrap_err();
        assert_eq!(e.key, "algorithms");
    }

    #[test]
    fn unknown_algorithm_is_an_error() {
        let text = MINIMAL.replace("sp_cba_plus", "gradient_descent");
        let e = ExperimentConfig::from_text(&text).unwrap_err();
        assert_eq!(e.key, "algorithms");
    }

    #[test]
    fn rm_plus_is_rejected_off_the_simplex() {
        let text = "\
problem.family = garnet_mdp
problem.states = 4
problem.actions = 2
algorithms = rm_plus
run.iterations = 10
";
        let e = ExperimentConfig::from_text(text).unwrap_err();
        assert_eq!(e.key, "algorithms");
    }

    #[test]
    fn bad_numbers_name_their_key() {
        let text = MINIMAL.replace("run.iterations = 10", "run.iterations = ten");
        let e = ExperimentConfig::from_text(&text).unwrap_err();
        assert_eq!(e.key, "run.iterations");

        let text = MINIMAL.replace("problem.seeds = 1, 2", "problem.seeds = 1, x");
        let e = ExperimentConfig::from_text(&text).unwrap_err();
        assert_eq!(e.key, "problem.seeds");
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let text = format!("{MINIMAL}run.iterations = 20\n");
        let e = ExperimentConfig::from_text(&text).unwrap_err();
        assert_eq!(e.key, "run.iterations");
    }

    #[test]
    fn algorithm_names_round_trip() {
        for name in [
            "sp_cba_plus",
            "cba_uniform",
            "rm_plus",
            "omd_theoretical",
            "omd_tuned",
            "ftrl_theoretical",
            "ftrl_tuned",
            "oomd_theoretical",
            "oomd_tuned",
            "oftrl_theoretical",
            "oftrl_tuned",
        ] {
            let alg = AlgorithmSpec::parse(name).unwrap();
            assert_eq!(alg.name(), name);
        }
        assert!(AlgorithmSpec::parse("omd").is_none());
    }

    #[test]
    fn tuned_baselines_need_iteration_headroom() {
        let text = MINIMAL.replace("algorithms = sp_cba_plus", "algorithms = omd_tuned");
        let e = ExperimentConfig::from_text(&text).unwrap_err();
        assert_eq!(e.key, "run.iterations");
    }
}
