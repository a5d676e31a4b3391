//! Named experiment strategies behind a common trait object.

use std::collections::BTreeMap;

use demon_core::CoreError;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::experiments;
use crate::table::ResultTable;

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Whether equal configs give bitwise-equal results (otherwise equal within reported SE).
    fn deterministic(&self) -> bool;
    /// Fill defaults and reject unknown or mistyped keys.
    fn resolve(&self, params: &toml::Table) -> Result<toml::Table, toml::de::Error>;
    /// Validate the `[parameters]` table of a raw config, keeping source spans for errors.
    fn check_source(&self, src: &str) -> Result<(), toml::de::Error>;
    fn run(&self, params: &toml::Table, seed: u64) -> Result<ResultTable, CoreError>;
}

/// Experiment with a typed, strictly parsed parameter struct. A blanket impl lifts it to
/// [`Experiment`].
pub trait TypedExperiment: Send + Sync {
    type Params: Serialize + DeserializeOwned + Default;
    const NAME: &'static str;
    const DESCRIPTION: &'static str;
    const DETERMINISTIC: bool;

    fn execute(&self, params: &Self::Params, seed: u64) -> Result<ResultTable, CoreError>;
}

#[derive(Deserialize)]
struct ParamsOnly<P: Default> {
    #[serde(default)]
    parameters: P,
}

fn parse<P: DeserializeOwned>(params: &toml::Table) -> Result<P, toml::de::Error> {
    toml::Value::Table(params.clone()).try_into()
}

impl<T: TypedExperiment> Experiment for T {
    fn name(&self) -> &'static str {
        T::NAME
    }

    fn description(&self) -> &'static str {
        T::DESCRIPTION
    }

    fn deterministic(&self) -> bool {
        T::DETERMINISTIC
    }

    fn resolve(&self, params: &toml::Table) -> Result<toml::Table, toml::de::Error> {
        let p: T::Params = parse(params)?;
        Ok(toml::Table::try_from(&p).expect("parameter structs serialise to tables"))
    }

    fn check_source(&self, src: &str) -> Result<(), toml::de::Error> {
        toml::from_str::<ParamsOnly<T::Params>>(src).map(|p| drop(p.parameters))
    }

    fn run(&self, params: &toml::Table, seed: u64) -> Result<ResultTable, CoreError> {
        let p: T::Params = parse(params).map_err(|e| CoreError::Domain(format!("parameters: {}", e.message())))?;
        self.execute(&p, seed)
    }
}

#[derive(Default)]
pub struct Registry {
    entries: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every experiment shipped with the crate.
    pub fn builtin() -> Self {
        let mut r = Self::new();
        r.register(Box::new(experiments::Erasure));
        r.register(Box::new(experiments::Jarzynski));
        r.register(Box::new(experiments::Szilard));
        r.register(Box::new(experiments::Bounds));
        r.register(Box::new(experiments::Feedback));
        r.register(Box::new(experiments::Gamble));
        r.register(Box::new(experiments::ReebWolf));
        r
    }

    /// Returns the displaced entry if the name was taken.
    pub fn register(&mut self, exp: Box<dyn Experiment>) -> Option<Box<dyn Experiment>> {
        self.entries.insert(exp.name(), exp)
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Experiment> {
        self.entries.values().map(|b| b.as_ref())
    }
}
