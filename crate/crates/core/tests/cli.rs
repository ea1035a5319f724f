use std::path::Path;

use cox_trend::cli::report::{AnalysisReport, CoverageCommandReport, TwoSampleReport};
use cox_trend::cli::{run, EXIT_ESTIMATION, EXIT_INPUT, EXIT_OK};
use cox_trend::model::{Decision, FitMode, IntervalKind};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cox-trend").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn fit_json(args: &[&str]) -> AnalysisReport {
    let mut all = vec!["fit"];
    all.extend_from_slice(args);
    all.extend(["--out", "json"]);
    let o = cli(&all);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

#[test]
fn fit_greece_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "greece.csv", "start,end,count\n2005,2010,2\n2010,2015,1\n");
    let plot = dir.path().join("plot.csv");
    let r = fit_json(&[&data, "--alpha", "0.05", "--plot", plot.to_str().unwrap()]);
    assert!((r.fit.beta_hat - 0.1386).abs() < 5e-5);
    assert_eq!(r.fit.mode, FitMode::ClassicalMle);
    assert_eq!(r.fit.time_origin, 2010.0);
    assert_eq!(r.verdict.decision, Decision::Inconclusive);
    assert_eq!(r.interval.kind, IntervalKind::Confidence);
    assert_eq!((r.input.window_start, r.input.window_end), (2005.0, 2015.0));

    let rows: Vec<Vec<f64>> = std::fs::read_to_string(&plot)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], 2007.5);
    assert!((rows[0][2] - 2.0).abs() < 1e-9 && (rows[1][2] - 1.0).abs() < 1e-9);
}

#[test]
fn flat_fixture_fits_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "flat.csv", "center,length,count\n0.5,1,3\n1.5,1,3\n2.5,1,3\n");
    let r = fit_json(&[&data]);
    assert!(r.fit.beta_hat.abs() < 1e-12);
    for p in &r.curve {
        assert!((p.expected - p.observed).abs() < 1e-9);
    }
}

#[test]
fn origin_changes_intensity_but_not_trend() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(
        dir.path(),
        "d.csv",
        "start,end,count\n0,5,9\n5,10,7\n10,15,8\n15,20,4\n20,25,5\n",
    );
    let mid = fit_json(&[&data, "--origin", "midpoint"]);
    let zero = fit_json(&[&data, "--origin", "zero"]);
    let at = fit_json(&[&data, "--origin", "3.5"]);
    assert!((mid.fit.beta_hat - zero.fit.beta_hat).abs() < 1e-9);
    assert!((mid.fit.beta_hat - at.fit.beta_hat).abs() < 1e-9);
    assert!((mid.interval.width() - zero.interval.width()).abs() > 1e-6);
    assert!((mid.fit.lambda0_hat - zero.fit.lambda0_hat).abs() > 1e-3);
    assert!((mid.fit.information - zero.fit.information).abs() > 1e-3);
    assert_eq!(zero.fit.time_origin, 0.0);
    assert_eq!(at.fit.time_origin, 3.5);
}

#[test]
fn fit_with_prior_files() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "g.csv", "start,end,count\n2005,2010,2\n2010,2015,1\n");
    let prior = write(dir.path(), "p.csv", "center,a\n2007.5,2\n2012.5,2\n");
    let r = fit_json(&[&data, "--prior", &prior]);
    assert_eq!(r.fit.mode, FitMode::BayesMap);
    assert_eq!(r.interval.kind, IntervalKind::HpdApprox);
    assert!((r.fit.beta_hat - 0.05754).abs() < 5e-6);
    assert!((r.fit.information - 43.75).abs() < 1e-9);

    let blend = write(dir.path(), "b.csv", "center,a,q\n2007.5,2,0.5\n2012.5,2,0.5\n");
    let r = fit_json(&[&data, "--prior", &blend, "--prior-mode", "blend"]);
    // counts (2, 1.5)
    assert!((r.fit.beta_hat - 0.2 * (2.0f64 / 1.5).ln()).abs() < 1e-9);

    let o = cli(&["fit", &data, "--prior", &prior, "--prior-mode", "blend"]);
    assert_eq!(o.code, EXIT_INPUT, "{}", o.stderr);

    let misaligned = write(dir.path(), "m.csv", "center,a\n2007.0,2\n2012.5,2\n");
    let o = cli(&["fit", &data, "--prior", &misaligned]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("prior"), "{}", o.stderr);
}

#[test]
fn input_errors_exit_2_and_name_rows() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "start,end,count\n0,1,2\n1,2,x\n");
    let o = cli(&["fit", &bad]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("row 3"), "{}", o.stderr);

    let overlap = write(dir.path(), "o.csv", "start,end,count\n0,2,2\n1,3,1\n");
    let o = cli(&["fit", &overlap]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("row 3") && o.stderr.contains("non-overlapping"), "{}", o.stderr);

    let comma = write(dir.path(), "c.csv", "center;length;count\n2,5;5;2\n7,5;5;1\n");
    let o = cli(&["fit", &comma]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("comma decimal"), "{}", o.stderr);

    let o = cli(&["fit", dir.path().join("missing.csv").to_str().unwrap()]);
    assert_eq!(o.code, EXIT_INPUT);

    let o = cli(&["fit", &bad, "--origin", "noon"]);
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn degenerate_data_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "e.csv", "start,end,count\n0,1,0\n1,2,0\n");
    assert_eq!(cli(&["fit", &empty]).code, EXIT_ESTIMATION);
    let boundary = write(dir.path(), "b.csv", "start,end,count\n0,1,4\n1,2,0\n2,3,0\n");
    let o = cli(&["fit", &boundary]);
    assert_eq!(o.code, EXIT_ESTIMATION);
    assert!(o.stderr.contains("boundary"), "{}", o.stderr);
}

#[test]
fn two_sample_reports_both_columns() {
    let o = cli(&[
        "two-sample", "--k1", "35", "--k2", "34", "--total-time", "10", "--a1", "2", "--a2", "2",
        "--out", "json",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let r: TwoSampleReport = serde_json::from_str(&o.stdout).unwrap();
    assert!((r.classical.fit.beta_hat - 5.798e-3).abs() < 5e-7);
    let bayes = r.bayes.unwrap();
    assert!((bayes.fit.beta_hat - 5.480e-3).abs() < 5e-7);
    assert_eq!(bayes.cell_means, [37.0, 36.0]);
    assert_eq!(r.classical.cell_means, [35.0, 34.0]);

    let o = cli(&["two-sample", "--k1", "2", "--k2", "1", "--total-time", "10", "--out", "json"]);
    let r: TwoSampleReport = serde_json::from_str(&o.stdout).unwrap();
    assert!(r.bayes.is_none());
    assert!((r.classical.fit.information - 18.75).abs() < 1e-9);
    assert!((r.classical.interval.lower + 0.2412).abs() < 5e-5);

    let o = cli(&["two-sample", "--k1", "0", "--k2", "0", "--total-time", "10"]);
    assert_eq!(o.code, EXIT_ESTIMATION);
    assert!(o.stderr.contains("degenerate"), "{}", o.stderr);
    let o = cli(&["two-sample", "--k1", "1", "--k2", "1", "--total-time", "10", "--split", "1.2"]);
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn coverage_command_is_deterministic() {
    let args = [
        "coverage", "--lambda0", "5", "--beta", "0", "--intervals", "10", "--reps", "10000",
        "--seed", "42", "--out", "json",
    ];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let r: CoverageCommandReport = serde_json::from_str(&a.stdout).unwrap();
    assert!((0.88..=0.92).contains(&r.report.empirical_coverage));

    assert_eq!(cli(&["coverage", "--lambda0", "5", "--beta", "0", "--reps", "0"]).code, EXIT_INPUT);
    assert_eq!(cli(&["coverage", "--lambda0", "-1", "--beta", "0", "--reps", "5"]).code, EXIT_INPUT);
}

#[test]
fn text_output_carries_every_json_field() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "g.csv", "start,end,count\n2005,2010,2\n2010,2015,1\n");
    let json = cli(&["fit", &data, "--out", "json"]).stdout;
    let text = cli(&["fit", &data]).stdout;
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    for (section, fields) in value.as_object().unwrap() {
        if let Some(obj) = fields.as_object() {
            for key in obj.keys() {
                assert!(text.contains(&format!("{section}.{key}")), "{section}.{key}");
            }
        }
    }
    assert!(text.contains("INCONCLUSIVE"));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "g.csv", "start,end,count\n2000,2005,7\n2005,2010,3\n2010,2015,4\n");
    let json = cli(&["fit", &data, "--out", "json"]).stdout;
    let r: AnalysisReport = serde_json::from_str(&json).unwrap();
    assert_eq!(cox_trend::cli::report::to_json(&r), json);
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(cli(&["--help"]).code, 0);
    assert_eq!(cli(&["fit"]).code, EXIT_INPUT);
    assert_eq!(cli(&["nonsense"]).code, EXIT_INPUT);
}
