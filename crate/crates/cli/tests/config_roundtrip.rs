use std::collections::BTreeMap;

use demon_cli::config::OutputSpec;
use demon_cli::{ExperimentConfig, Format, Registry};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, Just(0.0), Just(1e-300), Just(f64::MAX)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn parse_serialise_parse_is_identity(seed in 0u64..=i64::MAX as u64, tau in finite(), n in 1i64..100_000, json in any::<bool>(), path in prop::option::of("[a-z]{1,8}\\.csv"), axis in prop::collection::vec(finite(), 0..4)) {
        let reg = Registry::builtin();
        let mut cfg = ExperimentConfig::new("erasure", seed);
        cfg.output = OutputSpec { path: path.map(Into::into), format: if json { Format::Json } else { Format::Csv } };
        cfg.parameters.insert("tau".into(), toml::Value::Float(tau));
        cfg.parameters.insert("n_traj".into(), toml::Value::Integer(n));
        if !axis.is_empty() {
            cfg.grid = BTreeMap::from([("f_max".to_string(), axis.into_iter().map(toml::Value::Float).collect())]);
        }
        let text = cfg.to_toml();
        let back = ExperimentConfig::from_toml(&text, &reg).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_toml(), text);
        let resolved = back.resolved(&reg).unwrap();
        prop_assert_eq!(ExperimentConfig::from_toml(&resolved.to_toml(), &reg).unwrap(), resolved);
    }
}

#[test]
fn shipped_example_configs_parse() {
    let reg = Registry::builtin();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/examples");
    let mut seen = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::from_toml(&std::fs::read_to_string(&path).unwrap(), &reg).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.resolved(&reg).unwrap();
        seen.push(cfg.experiment);
    }
    seen.sort();
    assert_eq!(seen, reg.names());
}
