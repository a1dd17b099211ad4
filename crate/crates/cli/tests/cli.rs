//! Command-line behavior: exit codes, flag validation messages, output
//! selection and the custom state/plan path.

use std::path::Path;
use std::process::{Command, Output};

fn wigviz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wigviz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn wigviz_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wigviz"))
        .env("WIGVIZ_OUTPUT_DIR", dir)
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn reference_panel_renders_single_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.ppm");
    let scene = dir.path().join("e.json");
    let output = wigviz(&[
        "reference",
        "--panel",
        "e",
        "--output",
        out.to_str().unwrap(),
        "--scene-out",
        scene.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("norm: 1.000000000000"));
    assert!(stdout.contains("entanglement entropy: 1.000 bits"));
    assert!(stdout.contains("glyphs: 1"));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&scene).unwrap()).unwrap();
    let glyphs = doc["glyphs"].as_array().unwrap();
    assert_eq!(glyphs.len(), 1);
    // the singlet texture is the constant -1/2
    for v in glyphs[0]["texture"]["values"].as_array().unwrap() {
        assert!((v.as_f64().unwrap() + 0.5).abs() < 1e-12);
    }

    let bytes = std::fs::read(&out).unwrap();
    assert!(bytes.starts_with(b"P6\n"));
}

#[test]
fn flag_errors_exit_2_and_name_the_flag() {
    let cases: &[(&[&str], &str)] = &[
        (&["hydrogen", "--jm", "5/2", "1/2", "--threshold", "1.5"], "--threshold"),
        (&["hydrogen", "--jm", "5/2", "1/2", "--grid", "1"], "--grid"),
        (&["hydrogen", "--jm", "5/3", "1/2"], "--jm"),
        (&["hydrogen", "--orbital", "9Z", "--spin", "up"], "--orbital"),
        (&["hydrogen", "--orbital", "1S", "--spin", "sideways"], "--spin"),
        (&["molecule", "--bond", "single", "--separation", "-1"], "--separation"),
        (&["reference", "--panel", "q"], "--panel"),
        (&["lithium", "--slice", "z"], "--slice"),
        (&["helium", "--state", "quartet"], "--state"),
        (&["hydrogen", "--jm", "5/2", "1/2", "--canvas", "10x10"], "--canvas"),
        (&["hydrogen", "--jm", "5/2", "1/2", "--sphere-samples", "potato"], "--sphere-samples"),
        (&["hydrogen", "--jm", "5/2", "1/2", "--opacity-mode", "shiny"], "--opacity-mode"),
    ];
    for (args, flag) in cases {
        let output = wigviz(args);
        assert_eq!(
            output.status.code(),
            Some(2),
            "args {args:?} should exit 2, stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        let stderr = String::from_utf8_lossy(&output.stderr);
        assert!(
            stderr.contains(flag),
            "stderr for {args:?} should name {flag}: {stderr}"
        );
    }
    // clap's own parse failures also exit 2
    let output = wigviz(&["hydrogen", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(2));
    // missing selector
    let output = wigviz(&["hydrogen"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn io_failures_exit_1() {
    let output = wigviz(&[
        "reference",
        "--panel",
        "a",
        "--output",
        "/nonexistent-dir/x.ppm",
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn output_dir_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let output = wigviz_in(dir.path(), &["reference", "--panel", "a"]);
    assert!(output.status.success());
    assert!(dir.path().join("reference_a.ppm").exists());
}

#[test]
fn help_documents_defaults() {
    let output = wigviz(&["hydrogen", "--help"]);
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    for needle in ["61", "4.5", "24x12", "0.1", "marginal", "768x768"] {
        assert!(text.contains(needle), "--help should document default {needle}");
    }
}

#[test]
fn custom_state_and_plan() {
    let dir = tempfile::tempdir().unwrap();
    let state_path = dir.path().join("state.json");
    // a displaced p_z lobe with one spin
    std::fs::write(
        &state_path,
        r#"{
  "signature": [
    {"mode": {"axis": "x", "electron": 0}},
    {"mode": {"axis": "y", "electron": 0}},
    {"mode": {"axis": "z", "electron": 0}},
    {"spin": {"electron": 0}}
  ],
  "terms": [
    {"amplitude": [1.0, 0.0],
     "ket": [{"fock": 0, "displacement": [0.7, 0.0]}, {"fock": 0}, {"fock": 1}, {"spin": "up"}]}
  ]
}"#,
    )
    .unwrap();
    let out = dir.path().join("custom.ppm");
    let output = wigviz(&[
        "custom",
        "--state-file",
        state_path.to_str().unwrap(),
        "--plan",
        "m,m,m,e",
        "--grid",
        "21",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(out.exists());

    // malformed plans are flag errors
    let output = wigviz(&[
        "custom",
        "--state-file",
        state_path.to_str().unwrap(),
        "--plan",
        "m,m,e,e",
    ]);
    assert_eq!(output.status.code(), Some(2));
    let output = wigviz(&[
        "custom",
        "--state-file",
        state_path.to_str().unwrap(),
        "--plan",
        "t,t",
    ]);
    assert_eq!(output.status.code(), Some(2));
    let output = wigviz(&["custom", "--state-file", "/no/such/file.json", "--plan", "t"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn molecule_textures_distinguish_bond_order() {
    let dir = tempfile::tempdir().unwrap();
    let single_scene = dir.path().join("single.json");
    let double_scene = dir.path().join("double.json");
    for (bond, scene) in [("single", &single_scene), ("double", &double_scene)] {
        let output = wigviz(&[
            "molecule",
            "--bond",
            bond,
            "--separation",
            "2.0",
            "--grid",
            "21",
            "--output",
            dir.path().join(format!("{bond}.ppm")).to_str().unwrap(),
            "--scene-out",
            scene.to_str().unwrap(),
        ]);
        assert!(output.status.success());
    }
    let load = |p: &Path| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
    };
    let single = load(&single_scene);
    let double = load(&double_scene);
    // double bond: singlet spins, so every texture value is -1/2
    for glyph in double["glyphs"].as_array().unwrap() {
        for v in glyph["texture"]["values"].as_array().unwrap() {
            assert!((v.as_f64().unwrap() + 0.5).abs() < 1e-10);
        }
    }
    // single bond: up-state textures reach well above zero
    let max_single = single["glyphs"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|g| g["texture"]["values"].as_array().unwrap())
        .map(|v| v.as_f64().unwrap())
        .fold(f64::MIN, f64::max);
    assert!(max_single > 1.0);
}
