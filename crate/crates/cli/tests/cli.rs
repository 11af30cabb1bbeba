use std::process::Command;

fn symgate() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symgate"))
}

fn write_config(dir: &std::path::Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("sweep.toml");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn show_config_prints_defaults_with_overrides() {
    let out = symgate().args(["show-config", "--engine", "both", "--fock-margin", "4"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("engine = \"both\""));
    assert!(text.contains("fock_margin = 4"));
    assert!(text.contains("[integrator]"));
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "kappa_over_alpha0 = [0.0, 0.05, 0.1]\norders = [0, 1]\nbetas = [[2.0, 0.0]]\n");
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        let status = symgate()
            .args(["sweep", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out_dir)
            .status()
            .unwrap();
        assert!(status.success());
        files.push(std::fs::read(out_dir.join("fidelity.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.remove(0)).unwrap();
    assert!(text.lines().any(|l| l == "kappa_ratio,k,beta_re,beta_im,F,engine"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 6);
}

#[test]
fn validate_fails_on_undersized_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "kappa_over_alpha0 = [0.05]\norders = [0]\nbetas = [[2.0, 0.0]]\nfock_dim = 10\n");
    let out = symgate().args(["validate", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncation"));
    let csv = std::fs::read_to_string(dir.path().join("cross_validation.csv")).unwrap();
    assert!(csv.contains("error:truncation_overflow"));
}

#[test]
fn validate_passes_on_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "kappa_over_alpha0 = [0.0, 0.05]\norders = [0]\nbetas = [[0.0, 0.0]]\n");
    let status = symgate().args(["validate", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).status().unwrap();
    assert!(status.success());
}

#[test]
fn paths_writes_both_orientations() {
    let dir = tempfile::tempdir().unwrap();
    let status = symgate()
        .args(["paths", "--kind", "circular", "--samples", "21", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    for name in ["circular_C.csv", "circular_Cbar.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.starts_with("t,re,im\n"));
        assert_eq!(text.lines().count(), 22);
    }
}

#[test]
fn bad_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "phase = -1.0\n");
    let out = symgate().args(["show-config", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
