use std::path::PathBuf;

use bathtub::experiments::ExampleName;
use bathtub::io::{emit_config, parse_config, parse_config_str, parse_override};
use bathtub::{Category, InflowDistribution, InflowRate, VelocityFunction};

fn shipped(id: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(format!("{id}.toml"))
}

#[test]
fn shipped_configs_match_the_built_in_examples() {
    for e in ExampleName::ALL {
        let config = parse_config(&shipped(e.id()), &[]).unwrap();
        assert_eq!(config, e.config(), "{}", e.id());
    }
}

#[test]
fn constant_inflow_config() {
    let c = parse_config(&shipped("5.1a"), &[]).unwrap();
    assert_eq!(c.scenario.length, 10.0);
    assert_eq!(c.scenario.horizon, 8.0);
    assert_eq!(c.scenario.inflow, InflowRate::constant(0.15));
    assert_eq!(c.scenario.distribution, InflowDistribution::uniform(10.0));
    assert_eq!(
        c.scenario.velocity,
        VelocityFunction::greenshields(1.0, 1.0)
    );
    assert_eq!(c.scenario.velocity.speed(0.0), 1.0);
}

#[test]
fn horizon_override_gives_the_long_case() {
    let o = vec![parse_override("T=16").unwrap()];
    let c = parse_config(&shipped("5.1a"), &o).unwrap();
    assert_eq!(c.scenario, ExampleName::ConstantInflowLong.scenario());
}

#[test]
fn emit_parse_round_trip() {
    for e in ExampleName::ALL {
        let c = e.config();
        let text = emit_config(&c).unwrap();
        let back = parse_config_str(&text, &[]).unwrap();
        assert_eq!(back, c);
        assert_eq!(emit_config(&back).unwrap(), text);
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let err = parse_config(&shipped("nope"), &[]).unwrap_err();
    assert_eq!(err.category(), Category::Io);
}

#[test]
fn empty_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.toml");
    std::fs::write(&path, "").unwrap();
    let err = parse_config(&path, &[]).unwrap_err();
    assert_eq!(err.category(), Category::Configuration);
    assert!(err.to_string().contains("empty"), "{err}");
}
