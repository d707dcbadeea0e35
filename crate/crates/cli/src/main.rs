mod cli;
mod commands;
mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use pshosc::quad::QuadratureSpec;

use cli::{Cli, OutputFormat};
use commands::{Ctx, Failure};
use report::{ConfigFile, ExperimentConfig};

const EXIT_FAIL: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let code = run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code)
}

/// Parses `argv`, runs one command and returns the exit code.
fn run<I, T>(argv: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().ansi().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut usage = |msg: String| {
        let _ = writeln!(stderr, "error: {msg}");
        EXIT_USAGE
    };

    let g = &cli.global;
    let file = match &g.config {
        Some(p) => match ConfigFile::load(p) {
            Ok(c) => c,
            Err(e) => return usage(format!("{e:#}")),
        },
        None => ConfigFile::default(),
    };

    let pool = match g.threads {
        Some(0) => return usage("--threads must be positive".into()),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(p) => Some(p),
            Err(e) => return usage(e.to_string()),
        },
        None => None,
    };

    let seed = g.seed.or(file.seed).unwrap_or(0);
    let quad_overrides = g.quad.clone().or(file.quad);
    let mut spec = QuadratureSpec::default();
    if let Some(q) = &quad_overrides {
        spec = match spec.with_overrides(q) {
            Ok(s) => s,
            Err(e) => return usage(e.to_string()),
        };
    }
    let explicit_mc_seed = quad_overrides.as_deref().is_some_and(|q| q.split(',').any(|kv| kv.trim().starts_with("seed")));
    if !explicit_mc_seed {
        spec = spec.with_seed(seed);
    }

    let mut ctx = Ctx { spec, seed, function: file.function, region: file.region, params: BTreeMap::new(), err: &mut *stderr };
    let started = Instant::now();
    let result = match &pool {
        Some(p) => p.install(|| commands::run(&cli.command, &mut ctx)),
        None => commands::run(&cli.command, &mut ctx),
    };
    let elapsed = started.elapsed();
    let Ctx { spec, function, region, params, .. } = ctx;

    let out = match result {
        Ok(o) => o,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return EXIT_USAGE;
        }
        Err(Failure::Numerical(m)) => {
            let _ = writeln!(stderr, "numerical failure: {m}");
            return EXIT_NUMERICAL;
        }
    };

    let cfg = ExperimentConfig {
        command: commands::command_name(&cli.command).to_string(),
        function,
        region,
        quad_overrides,
        quadrature: spec,
        seed,
        output: g.output.or(file.output).unwrap_or(OutputFormat::Json),
        json_out: g.json_out.clone().or(file.json_out),
        csv_out: g.csv_out.clone().or(file.csv_out),
        params,
    };
    if let Err(e) = report::emit(&cfg, &out, stdout, stderr) {
        let _ = writeln!(stderr, "error: {e:#}");
        return EXIT_USAGE;
    }
    let _ = writeln!(stderr, "{}: {}", if out.pass { "PASS" } else { "FAIL" }, out.summary);

    if g.timings {
        for (id, d, budget) in &out.timings {
            let _ = match budget {
                Some(b) => writeln!(stderr, "timing {id}: {:.3}s (budget {}s)", d.as_secs_f64(), b.as_secs_f64()),
                None => writeln!(stderr, "timing {id}: {:.3}s", d.as_secs_f64()),
            };
        }
        let _ = writeln!(stderr, "timing total: {:.3}s", elapsed.as_secs_f64());
    }

    if out.numerical {
        EXIT_NUMERICAL
    } else if out.pass {
        0
    } else {
        EXIT_FAIL
    }
}

#[cfg(test)]
mod tests {
    use std::fs;

    use serde_json::Value;

    use super::run;

    struct Run {
        code: u8,
        stdout: Vec<u8>,
        stderr: String,
    }

    fn pshosc(args: &[&str]) -> Run {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("pshosc").chain(args.iter().copied()), &mut out, &mut err);
        Run { code, stdout: out, stderr: String::from_utf8(err).unwrap() }
    }

    fn json(r: &Run) -> Value {
        serde_json::from_slice(&r.stdout).expect("JSON report on stdout")
    }

    #[test]
    fn gamma_solve_reports_the_root() {
        let r = pshosc(&["gamma", "solve", "--tol", "1e-12"]);
        assert_eq!(r.code, 0);
        let v = json(&r);
        let g = v["results"]["gamma"].as_f64().unwrap();
        assert!((g - 1.27846454276107).abs() < 1e-12);
        assert_eq!(v["config"]["params"]["tol"], "1e-12");
        assert_eq!(v["pass"], true);
    }

    #[test]
    fn ot_margin_for_a_quadratic_weight() {
        let r = pshosc(&["bergman", "ot", "--fn", "quadratic:c=1", "--n", "1"]);
        assert_eq!(r.code, 0);
        let margin = json(&r)["results"]["margin"].as_f64().unwrap();
        let want = 0.5035588255 - 1.0 / std::f64::consts::PI;
        assert!((margin - want).abs() < 1e-8, "margin {margin}");
    }

    #[test]
    fn dimension_mismatch_is_a_usage_error() {
        assert_eq!(pshosc(&["bergman", "ot", "--fn", "quadratic:c=1", "--n", "2"]).code, 64);
    }

    #[test]
    fn malformed_inputs_exit_64() {
        assert_eq!(pshosc(&["osc", "uo", "--fn", "nonsense", "--region", "disc:c=0,r=1"]).code, 64);
        assert_eq!(pshosc(&["osc", "uo", "--fn", "log_abs", "--region", "disc:c=0,r=-1"]).code, 64);
        assert_eq!(pshosc(&["osc", "uo", "--fn", "log_abs"]).code, 64);
        assert_eq!(pshosc(&["--no-such-flag"]).code, 64);
        assert_eq!(pshosc(&["gamma", "solve", "--quad", "radial=zero"]).code, 64);
        assert_eq!(pshosc(&["gamma", "solve", "--threads", "0"]).code, 64);
        let help = pshosc(&["--help"]);
        assert_eq!(help.code, 0);
        assert!(String::from_utf8_lossy(&help.stdout).contains("polydisc:c=0;0,r=0.5;0.25"));
    }

    #[test]
    fn config_file_and_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.json");
        fs::write(&cfg, r#"{"function":"log_abs","region":"disc:c=0.5,r=1","seed":5}"#).unwrap();
        let cfg = cfg.to_str().unwrap();

        let v = json(&pshosc(&["osc", "uo", "--config", cfg]));
        assert_eq!(v["config"]["seed"], 5);
        assert_eq!(v["config"]["region"], "disc:c=0.5,r=1");

        let v = json(&pshosc(&["osc", "uo", "--config", cfg, "--seed", "9", "--region", "disc:c=0,r=2"]));
        assert_eq!(v["config"]["seed"], 9);
        assert_eq!(v["config"]["region"], "disc:c=0,r=2");

        let bad = dir.path().join("bad.json");
        fs::write(&bad, r#"{"fn":"log_abs"}"#).unwrap();
        assert_eq!(pshosc(&["osc", "uo", "--config", bad.to_str().unwrap()]).code, 64);
    }

    #[test]
    fn reports_are_byte_identical_across_worker_counts() {
        let args = ["jn", "decay", "--fn", "log_abs", "--seed", "4"];
        let a = pshosc(&args);
        let b = pshosc(&[&args[..], &["--threads", "1"]].concat());
        let c = pshosc(&[&args[..], &["--threads", "3"]].concat());
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout);
        assert!(!String::from_utf8_lossy(&a.stdout).contains("wall"));
    }

    #[test]
    fn csv_table_for_the_counterexample() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ce.csv");
        let r = pshosc(&["osc", "counterexample", "--x", "-1;-2;-5", "--output", "csv", "--csv-out", path.to_str().unwrap()]);
        assert_eq!(r.code, 0);
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,gap,UO,MO_lower"));
        let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|s| s.parse().unwrap()).collect()).collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0][0], -1.0);
        // the gap grows with |x|
        assert!(rows[2][1] > rows[0][1]);
    }

    #[test]
    fn decay_table_as_csv_on_stdout() {
        let r = pshosc(&["jn", "decay", "--fn", "log_abs", "--t-grid", "0.5;1;2", "--output", "csv"]);
        assert_eq!(r.code, 0);
        let text = String::from_utf8(r.stdout).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,log_measure");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0.5,"));
    }

    #[test]
    fn tableless_commands_note_the_missing_csv() {
        let r = pshosc(&["gamma", "solve", "--output", "csv"]);
        assert_eq!(r.code, 0);
        assert!(r.stdout.is_empty());
        assert!(r.stderr.contains("no tabular payload"));
    }

    #[test]
    fn hessian_limit_for_a_diagonal_quadratic() {
        let r = pshosc(&["bergman", "hessian", "--fn", "quadratic:diag=1;4"]);
        assert_eq!(r.code, 0);
        let e = &json(&r)["results"]["extrapolated"];
        assert!((e[0][0][0].as_f64().unwrap() - 0.5).abs() < 1e-3);
        assert!((e[1][1][0].as_f64().unwrap() - 2.0).abs() < 1e-3);
    }

    #[test]
    fn verify_all_exit_code_tracks_failures() {
        let r = pshosc(&["verify-all", "--only", "C01,C12", "--timings"]);
        assert_eq!(r.code, 0);
        assert!(r.stderr.lines().any(|l| l.starts_with("C01 PASS")));
        assert!(r.stderr.lines().any(|l| l.starts_with("C12 PASS")));
        assert!(r.stderr.lines().any(|l| l.starts_with("timing C12")));
        assert_eq!(pshosc(&["verify-all", "--only", "C99"]).code, 64);
        // the counterexample criterion fails on its MO threshold
        assert_eq!(pshosc(&["verify-all", "--only", "C07"]).code, 1);
    }
}
