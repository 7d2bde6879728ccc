//! JSON product files: `{"gamma": [re, im], "zeros": [[re, im], ...]}`.

use std::path::Path;

use blaschke_core::{Complex64, FiniteBlaschkeProduct};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpecFile {
    pub gamma: [f64; 2],
    pub zeros: Vec<[f64; 2]>,
}

impl ProductSpecFile {
    pub fn from_product(b: &FiniteBlaschkeProduct) -> Self {
        Self {
            gamma: [b.gamma().re, b.gamma().im],
            zeros: b.zeros().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn parse(text: &str, origin: &str) -> CliResult<FiniteBlaschkeProduct> {
        let spec: ProductSpecFile = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
        spec.to_product(origin)
    }

    pub fn load(path: &Path) -> CliResult<FiniteBlaschkeProduct> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_product(&self, origin: &str) -> CliResult<FiniteBlaschkeProduct> {
        let gamma = Complex64::new(self.gamma[0], self.gamma[1]);
        if !(gamma.norm().is_finite() && gamma.norm() > 0.0) {
            return Err(CliError::Usage(format!(
                "{origin}: field gamma: {gamma} has no direction"
            )));
        }
        if self.zeros.is_empty() {
            return Err(CliError::Usage(format!(
                "{origin}: field zeros: empty list"
            )));
        }
        let mut zeros = Vec::with_capacity(self.zeros.len());
        for (i, [re, im]) in self.zeros.iter().enumerate() {
            let z = Complex64::new(*re, *im);
            if z.norm().is_nan() || z.norm() >= 1.0 - 1e-12 {
                return Err(CliError::Usage(format!(
                    "{origin}: field zeros[{i}]: {z} has modulus {} (must be < 1)",
                    z.norm()
                )));
            }
            zeros.push(z);
        }
        Ok(FiniteBlaschkeProduct::new(gamma, zeros)?)
    }
}
