use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ensembles::EnsembleSpec;
use crate::error::{Error, Result};
use crate::experiments::ExperimentConfig;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// Everything `simulate` needs, as read from a JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub ensemble: EnsembleSpec,
    pub experiment: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(ensemble: EnsembleSpec, experiment: ExperimentConfig) -> Self {
        RunConfig { schema_version: CONFIG_SCHEMA_VERSION, ensemble, experiment, output_dir: None }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {CONFIG_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.ensemble.validate()?;
        if self.experiment.workers == Some(0) {
            return Err(Error::Config("workers must be positive".into()));
        }
        if self.experiment.d == 0 {
            return Err(Error::Config("d must be positive".into()));
        }
        for lambda in &self.experiment.lambdas {
            if lambda.len() > self.experiment.d {
                return Err(Error::TooManyParts { lambda: lambda.to_string(), d: self.experiment.d });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{EntryDistribution, Layout};
    use crate::pgroups::Partition;

    fn sample() -> RunConfig {
        let spec = EnsembleSpec::new(2, Layout::MatrixProduct { n: 8, k: 4 }, 11)
            .with_b(EntryDistribution::Constant { value: 0 });
        let exp = ExperimentConfig::new(100)
            .with_groups(vec![Partition::new(vec![1]).unwrap()])
            .with_lambdas(vec![Partition::new(vec![1]).unwrap()]);
        RunConfig::new(spec, exp)
    }

    #[test]
    fn round_trip() {
        let c = sample();
        let text = c.to_json().unwrap();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = sample();
        c.schema_version = 9;
        assert!(RunConfig::from_json(&c.to_json().unwrap()).unwrap_err().is_config());
        let text = sample().to_json().unwrap().replacen("{", "{\"bogus\": 1,", 1);
        assert!(RunConfig::from_json(&text).unwrap_err().is_config());
        let mut c = sample();
        c.ensemble.a_dist = EntryDistribution::Constant { value: 4 };
        let err = RunConfig::from_json(&c.to_json().unwrap()).unwrap_err();
        assert!(err.is_config());
        assert!(err.to_string().contains("A.3"));
    }
}
