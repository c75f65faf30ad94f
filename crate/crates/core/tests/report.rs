use coxperc::cert::{run_report, ReportOptions, Section, SCHEMA_VERSION};
use coxperc::fixtures;
use coxperc::ErrorKind;

fn without_right_angles(name: &str) -> String {
    let mut doc: serde_json::Value = serde_json::from_str(fixtures::source(name).unwrap()).unwrap();
    doc["orders"][0][1] = 3.into();
    doc["orders"][1][0] = 3.into();
    doc.to_string()
}

#[test]
fn dodecahedron_report_passes_everything() {
    let r = run_report(
        fixtures::source("dodecahedron").unwrap(),
        &ReportOptions::default(),
    )
    .unwrap();
    assert_eq!(r.schema_version, SCHEMA_VERSION);
    assert_eq!(r.exit_code, 0);
    assert!(r.certificate.ok().unwrap().is_certified());
    let oracles = r.oracles.as_ref().unwrap().ok().unwrap();
    assert_eq!(oracles.radius, 6);
    assert!(oracles.all_pass());
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["certificate"]["ok"]["verdict"], "certified");
}

#[test]
fn failed_right_angle_flag_is_a_validation_error() {
    let options = ReportOptions {
        oracles: false,
        ..ReportOptions::default()
    };
    let r = run_report(&without_right_angles("dodecahedron"), &options).unwrap();
    assert_eq!(r.exit_code, 2);
    match &r.certificate {
        Section::Error(e) => assert_eq!(e.kind, ErrorKind::Validation),
        Section::Ok(c) => panic!("certified {c:?}"),
    }
    assert!(r.input_warning.is_some());
}

#[test]
fn disabling_oracles_omits_the_section() {
    let options = ReportOptions {
        oracles: false,
        ..ReportOptions::default()
    };
    let r = run_report(fixtures::source("cube_three_thirds").unwrap(), &options).unwrap();
    assert!(r.oracles.is_none());
    assert_eq!(r.exit_code, 0);
    let json = serde_json::to_value(&r).unwrap();
    assert!(json["oracles"].is_null());
}

#[test]
fn ball_cap_is_a_resource_error() {
    let options = ReportOptions {
        radius: Some(8),
        max_ball_size: 10_000,
        ..ReportOptions::default()
    };
    let r = run_report(fixtures::source("dodecahedron").unwrap(), &options).unwrap();
    assert_eq!(r.exit_code, 3);
}

#[test]
fn malformed_input_is_a_parse_error() {
    let e = run_report("{\"rank\": 2}", &ReportOptions::default()).unwrap_err();
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn sections_serialize_as_tagged_objects() {
    let options = ReportOptions {
        oracles: false,
        ..ReportOptions::default()
    };
    let r = run_report(fixtures::source("lanner_535").unwrap(), &options).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["certificate"]["error"]["kind"], "validation");
    assert!(
        json["growth"]["ok"]["growth_rate"]["ok"]["growth_rate"]
            .as_f64()
            .unwrap()
            > 1.0
    );
}
