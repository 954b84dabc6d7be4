//! `name[:key=value[,key=value]*]` strings used for spaces, maps, families and domains.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("empty descriptor")]
    Empty,
    #[error("malformed parameter `{0}`, expected key=value")]
    Malformed(String),
    #[error("parameter `{0}` given twice")]
    Duplicate(String),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("`{name}` does not take parameter `{key}`")]
    UnknownKey { name: String, key: String },
    #[error("`{name}` needs parameter `{key}`")]
    Missing { name: String, key: String },
    #[error("parameter `{key}` = `{value}` is not a {expected}")]
    BadValue { key: String, value: String, expected: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descriptor {
    pub name: String,
    params: BTreeMap<String, String>,
}

impl Descriptor {
    pub fn parse(text: &str) -> Result<Self, DescriptorError> {
        let text = text.trim();
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        if name.is_empty() {
            return Err(DescriptorError::Empty);
        }
        let mut params = BTreeMap::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| DescriptorError::Malformed(part.to_string()))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(DescriptorError::Malformed(part.to_string()));
            }
            if params.insert(k.to_string(), v.to_string()).is_some() {
                return Err(DescriptorError::Duplicate(k.to_string()));
            }
        }
        Ok(Descriptor { name: name.to_string(), params })
    }

    /// Fails if any parameter is outside `allowed`.
    pub fn expect_keys(&self, allowed: &[&str]) -> Result<(), DescriptorError> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(key) => Err(DescriptorError::UnknownKey { name: self.name.clone(), key: key.clone() }),
            None => Ok(()),
        }
    }

    fn raw(&self, key: &str) -> Result<&str, DescriptorError> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| DescriptorError::Missing { name: self.name.clone(), key: key.to_string() })
    }

    fn bad(key: &str, value: &str, expected: &'static str) -> DescriptorError {
        DescriptorError::BadValue { key: key.to_string(), value: value.to_string(), expected }
    }

    pub fn f64(&self, key: &str) -> Result<f64, DescriptorError> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| Self::bad(key, v, "number"))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, DescriptorError> {
        if self.params.contains_key(key) {
            self.f64(key)
        } else {
            Ok(default)
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize, DescriptorError> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| Self::bad(key, v, "nonnegative integer"))
    }

    pub fn str(&self, key: &str) -> Result<&str, DescriptorError> {
        self.raw(key)
    }

    /// `;`-separated list, e.g. `values=0;2;1`.
    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, DescriptorError> {
        let v = self.raw(key)?;
        v.split(';').map(|x| x.trim().parse().map_err(|_| Self::bad(key, v, "list of numbers"))).collect()
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>, DescriptorError> {
        let v = self.raw(key)?;
        v.split(';').map(|x| x.trim().parse().map_err(|_| Self::bad(key, v, "list of indices"))).collect()
    }

    pub fn has(&self, key: &str) -> bool {
        self.params.contains_key(key)
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}
