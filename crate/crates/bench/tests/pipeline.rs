use std::path::Path;
use std::process::Command;

use qapbench::commands::sweep::ParamRow;
use qapbench::commands::{cmd_classical, cmd_gen, cmd_grover, cmd_report, cmd_shells, cmd_sweep};
use qapbench::csvio::read_rows;
use qapbench::fit::quartic_coefficient;
use qapbench::{BenchError, ExperimentConfig, Layout};
use qapwalk::quantum::{NvQwoa, RampParams};
use qapwalk::QapInstance;

fn small(out: &Path) -> ExperimentConfig {
    ExperimentConfig {
        sizes: vec![4, 5],
        instances_per_size: 3,
        gls_restarts: 30,
        mmas_runs: 4,
        master_seed: 5,
        out_dir: out.to_path_buf(),
        ..Default::default()
    }
}

fn run_all(cfg: &ExperimentConfig) {
    cmd_gen(cfg).unwrap();
    cmd_sweep(cfg).unwrap();
    cmd_classical(cfg).unwrap();
    cmd_grover(cfg).unwrap();
    cmd_shells(cfg, false).unwrap();
    cmd_report(cfg).unwrap();
}

#[test]
fn gen_writes_solved_instances_idempotently() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    let ids = cmd_gen(&cfg).unwrap();
    assert_eq!(ids, vec!["n4_i00", "n4_i01", "n4_i02", "n5_i00", "n5_i01", "n5_i02"]);
    let layout = Layout::new(dir.path());
    let path = layout.instance("n5_i01").unwrap();
    let first = std::fs::read(&path).unwrap();
    let inst = QapInstance::load(&path).unwrap();
    assert!(inst.optimum().is_some());
    cmd_gen(&cfg).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), first);

    let empty = ExperimentConfig { sizes: vec![], ..cfg };
    assert!(matches!(cmd_gen(&empty), Err(BenchError::Config(_))));
}

#[test]
fn stages_require_their_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    for err in [
        cmd_sweep(&cfg).unwrap_err(),
        cmd_classical(&cfg).unwrap_err(),
        cmd_grover(&cfg).unwrap_err(),
        cmd_shells(&cfg, false).unwrap_err(),
        cmd_report(&cfg).unwrap_err(),
    ] {
        assert_eq!(err.exit_code(), 3, "{err}");
    }
}

#[test]
fn sweep_contract_and_report_closure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    cmd_gen(&cfg).unwrap();
    let sweep = cmd_sweep(&cfg).unwrap();
    for s in &sweep.summary {
        let p = s.p_star.expect("small sizes converge");
        let means = sweep.mean_osp_sequence(s.n);
        assert_eq!(means.len(), p);
        assert!(means[p - 1] >= cfg.osp_threshold);
        assert!(means[..p - 1].iter().all(|&m| m < cfg.osp_threshold));
        assert_eq!(s.nvqwoa_evals, Some(4 * p));
    }

    // the tuned parameters reproduce the recorded OSP exactly
    let layout = Layout::new(dir.path());
    let params: Vec<ParamRow> = read_rows(&layout.sweep_params()).unwrap();
    assert_eq!(params.len(), 6);
    for row in &params {
        let inst = QapInstance::load(layout.instance(&row.instance_id).unwrap()).unwrap();
        let out = NvQwoa::new(&inst)
            .unwrap()
            .run(&RampParams::new(row.gamma, row.t, row.beta, row.p_star).unwrap())
            .unwrap();
        assert_eq!(out.osp, row.osp);
    }

    cmd_classical(&cfg).unwrap();
    cmd_grover(&cfg).unwrap();
    cmd_shells(&cfg, true).unwrap();
    let report = cmd_report(&cfg).unwrap();
    assert_eq!(report.evaluations.len(), 2);
    assert!(layout.snapshot("n5_i02").exists());
    for row in &report.internode {
        assert!(row.tuned_mean_expected_distance < row.uniform_expected_distance);
    }

    // tampering with a raw count breaks accounting closure
    let runs = layout.classical_runs();
    let text = std::fs::read_to_string(&runs).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let last = lines.len() - 1;
    let mut fields: Vec<String> = lines[last].split(',').map(String::from).collect();
    let evals: u64 = fields[6].parse().unwrap();
    fields[6] = (evals + 1).to_string();
    lines[last] = fields.join(",");
    std::fs::write(&runs, lines.join("\n") + "\n").unwrap();
    let err = cmd_report(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 4, "{err}");
}

#[test]
fn quartic_fit_of_reference_depths() {
    // depths 3, 6, 10, 17, 28, 49 at n = 5..10; a pure n⁴ model is quoted
    // as 0.0049 n⁴, which is the n = 10 point alone. Least squares gives
    // about 0.00463, within 10% of that figure.
    let c = quartic_coefficient(&[5, 6, 7, 8, 9, 10], &[3, 6, 10, 17, 28, 49]).unwrap();
    assert!((c - 0.0049).abs() <= 0.1 * 0.0049, "c = {c}");
    assert!((c - 0.004634).abs() < 5e-6, "c = {c}");
}

#[test]
fn identical_configs_give_identical_csvs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_all(&small(a.path()));
    run_all(&small(b.path()));
    for rel in ["sweep/osp_by_p.csv", "classical/runs.csv", "report/evaluations_vs_n.csv", "shells/shells.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(rel)).unwrap(),
            std::fs::read(b.path().join(rel)).unwrap(),
            "{rel}"
        );
    }
}

fn qapbench(args: &[&str], env: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qapbench"));
    cmd.args(args).env_remove("QAPBENCH_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();

    let (code, err) = qapbench(&["report", "--out", out], &[]);
    assert_eq!(code, 3);
    assert!(err.contains("summary.csv"), "{err}");

    let cfg_path = dir.path().join("bad.json");
    std::fs::write(&cfg_path, r#"{"sizes": []}"#).unwrap();
    assert_eq!(qapbench(&["gen", "--config", cfg_path.to_str().unwrap()], &[]).0, 2);
    assert_eq!(qapbench(&["gen", "--sizes", "10", "--out", out], &[]).0, 2);
    assert_eq!(qapbench(&["grover", "--out", out], &[("QAPBENCH_WORKERS", "zero")]).0, 2);

    let (code, err) = qapbench(&["gen", "--sizes", "4", "--instances", "2", "--out", out], &[("QAPBENCH_WORKERS", "2")]);
    assert_eq!(code, 0, "{err}");
    let (code, err) = qapbench(&["grover", "--sizes", "4", "--instances", "2", "--out", out], &[]);
    assert_eq!(code, 0, "{err}");
    let grover = std::fs::read_to_string(dir.path().join("grover.csv")).unwrap();
    assert!(grover.starts_with("n,N,M,k_exact,k_paper_formula\n4,24,1,1,1\n"), "{grover}");
    assert!(dir.path().join("metadata/grover.json").exists());
}
