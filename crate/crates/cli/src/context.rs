use std::path::Path;

use serde::{Deserialize, Serialize};

use rsdl::field::FieldTower;
use rsdl::instance::{Instance, Mode};
use rsdl::solver::DEFAULT_SMALL_THRESHOLD;

use crate::CliError;

/// Field and run parameters persisted by `setup` and read by every other
/// command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    pub p: u64,
    pub h: usize,
    /// Coefficients of `Q`, lowest degree first.
    #[serde(rename = "Q")]
    pub q: Vec<u64>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_threshold")]
    pub small_threshold: u64,
}

fn default_threshold() -> u64 {
    DEFAULT_SMALL_THRESHOLD
}

impl Context {
    pub fn mode(&self) -> Result<Mode, CliError> {
        Ok(Mode::from_parts(&self.mode, self.e)?)
    }

    pub fn instance(&self) -> Result<Instance, CliError> {
        let tower = FieldTower::new(self.p, self.h, &self.q)?;
        Ok(Instance::new(tower, self.mode()?)?)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("context serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let ctx = Context {
            p: 7,
            h: 5,
            q: vec![4, 1, 0, 0, 0, 1],
            mode: "hf".into(),
            e: Some(2),
            seed: 3,
            small_threshold: 1000,
        };
        let text = ctx.to_toml();
        assert!(text.contains("Q = [4, 1, 0, 0, 0, 1]"));
        assert_eq!(toml::from_str::<Context>(&text).unwrap(), ctx);
        assert_eq!(ctx.mode().unwrap(), Mode::Hf { e: 2 });
        let minimal: Context =
            toml::from_str("p = 13\nh = 3\nQ = [11, 2, 0, 1]\nmode = \"fq\"\n").unwrap();
        assert_eq!(minimal.small_threshold, DEFAULT_SMALL_THRESHOLD);
        assert_eq!(minimal.instance().unwrap().order(), 2196);
    }
}
