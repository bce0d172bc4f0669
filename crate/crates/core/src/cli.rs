//! Deterministic demos behind the `wavesys` binary.
//!
//! Each `cmd_*` builds its inputs from a seeded ChaCha8 generator
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`), runs the parallel code path,
//! checks it against a sequential oracle and returns a [`Report`] whose
//! `passed` flag becomes the process exit status. The `*_report` functions
//! take explicit inputs so tests can pin them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::forkjoin::{par_quicksort, par_reduce, seq_fold, JoinPolicy, DEFAULT_CUTOFF};
use crate::horner::{eval_horner, eval_parallel, eval_powers, Polynomial};
use crate::netfmt::NetDocument;
use crate::sync::{serialized_sum_squares, BoundedChannel, SyncError};
use crate::wavenet::{self, fig1_inputs, fig1_net, NetSpec, RunError};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SORT_N: usize = 100;
pub const DEFAULT_SUM_N: usize = 32;
pub const DEFAULT_DEGREE: usize = 20;
pub const DEFAULT_SUMSQ_N: usize = 100;
pub const DEFAULT_MESSAGES: usize = 20;
pub const DEFAULT_CHANNEL_CAPACITY: usize = 10;
pub const DEFAULT_WAVES: usize = 20;

/// Relative tolerance between parallel and sequential floating-point results.
pub const REL_TOL: f64 = 1e-9;
/// Tolerance for fig1 values against their closed forms, after rounding both
/// to six significant digits.
pub const CLOSED_FORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoConfig {
    pub seed: u64,
    /// Size parameter; `None` picks the demo's default.
    pub n: Option<usize>,
    pub cutoff: usize,
    pub faithful: bool,
    pub capacity: Option<usize>,
    pub waves: Option<usize>,
}

impl Default for DemoConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            n: None,
            cutoff: DEFAULT_CUTOFF,
            faithful: false,
            capacity: None,
            waves: None,
        }
    }
}

impl DemoConfig {
    pub fn policy(&self) -> JoinPolicy {
        if self.faithful {
            JoinPolicy::faithful()
        } else {
            JoinPolicy::with_cutoff(self.cutoff)
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub passed: bool,
    pub text: String,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Sync(#[from] SyncError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}", .0.join("\n"))]
    Parse(Vec<String>),
    #[error("{0}")]
    Run(#[from] RunError),
    #[error("{path}:{line}: `{token}` is not a number")]
    BadStreamValue {
        path: PathBuf,
        line: usize,
        token: String,
    },
    #[error("no input for stream `{0}`; pass --input {0}=<file>")]
    MissingStream(String),
}

/// Formats like a C++ stream at its default precision (`%g`, six
/// significant digits, trailing zeros dropped).
pub fn fmt_g(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let fixed = format!("{:.*}", (5 - exp) as usize, v);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Value after a round trip through [`fmt_g`].
pub fn round_g(v: f64) -> f64 {
    fmt_g(v).parse().unwrap_or(v)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn join_values<T: std::fmt::Display>(values: &[T]) -> String {
    values.iter().map(|v| format!(" {v}")).collect()
}

pub fn cmd_sort(config: &DemoConfig) -> Report {
    let mut rng = config.rng();
    let n = config.n.unwrap_or(DEFAULT_SORT_N);
    let values: Vec<u32> = (0..n).map(|_| rng.gen_range(0..100)).collect();
    sort_report(values, &config.policy())
}

pub fn sort_report(values: Vec<u32>, policy: &JoinPolicy) -> Report {
    let mut expected = values.clone();
    expected.sort_unstable();
    let mut text = format!("{}\n", join_values(&values));
    let mut sorted = values;
    par_quicksort(&mut sorted, policy);
    let _ = writeln!(text, "{}", join_values(&sorted));
    Report {
        passed: sorted == expected,
        text,
    }
}

pub fn cmd_sum(config: &DemoConfig) -> Report {
    let mut rng = config.rng();
    let n = config.n.unwrap_or(DEFAULT_SUM_N).max(1);
    let values: Vec<i64> = (0..n).map(|_| rng.gen_range(0..100)).collect();
    sum_report(&values, &config.policy())
}

pub fn sum_report(values: &[i64], policy: &JoinPolicy) -> Report {
    let parallel = par_reduce(values, |a, b| a + b, policy);
    let sequential = seq_fold(values, |a, b| a + b);
    match (parallel, sequential) {
        (Ok(p), Ok(s)) => Report {
            passed: p == s,
            text: format!(" sum obtained = {p}\n sum is = {s}\n"),
        },
        _ => Report {
            passed: false,
            text: " nothing to sum\n".to_string(),
        },
    }
}

pub fn cmd_horner(config: &DemoConfig) -> Report {
    let mut rng = config.rng();
    let degree = config.n.unwrap_or(DEFAULT_DEGREE);
    let coeffs = (0..=degree)
        .map(|_| f64::from(rng.gen_range(0u8..10)))
        .collect();
    let poly = Polynomial::new(coeffs).expect("degree + 1 coefficients");
    let xs: Vec<f64> = (0..10).map(f64::from).collect();
    horner_report(&poly, &xs, &config.policy())
}

/// One row per point: pairing value, Horner value, power-sum value.
pub fn horner_report(poly: &Polynomial, xs: &[f64], policy: &JoinPolicy) -> Report {
    let mut passed = true;
    let mut text = String::new();
    for &x in xs {
        let q = eval_parallel(poly, x, policy);
        let horner = eval_horner(poly, x);
        let powers = eval_powers(poly, x);
        passed &= rel_close(q, horner, REL_TOL)
            && rel_close(q, powers, REL_TOL)
            && rel_close(horner, powers, REL_TOL);
        let _ = writeln!(
            text,
            " Polynomial value = {} == {} == {}",
            fmt_g(q),
            fmt_g(horner),
            fmt_g(powers)
        );
    }
    Report { passed, text }
}

pub fn cmd_sumsq(config: &DemoConfig) -> Result<Report, CliError> {
    let mut rng = config.rng();
    let n = config.n.unwrap_or(DEFAULT_SUMSQ_N);
    let values: Vec<f64> = (0..n)
        .map(|_| f64::from(rng.gen_range(0u32..100)) / 100.0 + 5.0)
        .collect();
    sumsq_report(&values)
}

/// One worker per element. Values print with nine decimals: for inputs that
/// are multiples of 0.01 the exact sum sits mid-way between printable
/// neighbours, so reassociation noise never changes the text.
pub fn sumsq_report(values: &[f64]) -> Result<Report, CliError> {
    let threads = serialized_sum_squares(values, values.len().max(1))?;
    let function: f64 = values.iter().map(|x| x * x).sum();
    Ok(Report {
        passed: rel_close(threads, function, REL_TOL),
        text: format!(
            "Value obtained by threads = {threads:.9}\nValue computed by function = {function:.9}\n"
        ),
    })
}

pub fn cmd_prodcons(config: &DemoConfig) -> Result<Report, CliError> {
    let messages = config.n.unwrap_or(DEFAULT_MESSAGES);
    let channel = BoundedChannel::new(config.capacity.unwrap_or(DEFAULT_CHANNEL_CAPACITY))?;
    let out = thread::scope(|s| {
        s.spawn(|| {
            for j in 0..messages {
                channel.send((1 + j) as f64);
            }
        });
        s.spawn(|| (0..messages).map(|_| channel.recv()).collect::<Vec<f64>>())
            .join()
            .expect("consumer panicked")
    });
    let expected: Vec<f64> = (1..=messages).map(|j| j as f64).collect();
    let shown: Vec<String> = out.iter().map(|&v| fmt_g(v)).collect();
    Ok(Report {
        passed: out == expected,
        text: format!("{}\n", join_values(&shown)),
    })
}

/// Which net `wave` runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WaveTarget {
    Fig1,
    File(PathBuf),
}

impl WaveTarget {
    pub fn parse(arg: &str) -> Self {
        if arg == "fig1" {
            WaveTarget::Fig1
        } else {
            WaveTarget::File(PathBuf::from(arg))
        }
    }
}

/// Reads one real per line; blank lines and `#` comments are skipped.
pub fn read_stream(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let token = line.split('#').next().unwrap_or("").trim();
        if token.is_empty() {
            continue;
        }
        let v = token.parse().map_err(|_| CliError::BadStreamValue {
            path: path.to_path_buf(),
            line: i + 1,
            token: token.to_string(),
        })?;
        values.push(v);
    }
    Ok(values)
}

fn load_net(target: &WaveTarget) -> Result<NetSpec, CliError> {
    match target {
        WaveTarget::Fig1 => Ok(fig1_net()),
        WaveTarget::File(path) => {
            let doc = NetDocument::read(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            doc.parse()
                .map_err(|diags| CliError::Parse(diags.iter().map(|d| doc.render(d)).collect()))
        }
    }
}

/// Runs a net and prints one row per wave. Streams named `u` and `v` default
/// to `u_i = i²` and `v_i = i + 1`; any other stream needs an input file.
pub fn cmd_wave(
    target: &WaveTarget,
    stream_files: &[(String, PathBuf)],
    config: &DemoConfig,
) -> Result<Report, CliError> {
    let mut net = load_net(target)?;
    let diags = wavenet::validate(&net);
    if !diags.is_empty() {
        return Err(RunError::Invalid(diags).into());
    }
    if let Some(capacity) = config.capacity {
        net = net.with_uniform_capacity(capacity);
    }
    let waves = config.waves.unwrap_or(DEFAULT_WAVES);

    let defaults = fig1_inputs(waves);
    let mut inputs = BTreeMap::new();
    for (stream, path) in stream_files {
        inputs.insert(stream.clone(), read_stream(path)?);
    }
    for stream in net.sources.keys() {
        if !inputs.contains_key(stream) {
            let values = defaults
                .get(stream)
                .ok_or_else(|| CliError::MissingStream(stream.clone()))?;
            inputs.insert(stream.clone(), values.clone());
        }
    }

    let report = wavenet::run(&net, &inputs, waves)?;
    if net.with_uniform_capacity(1) == fig1_net().with_uniform_capacity(1) {
        Ok(fig1_table(&report, &inputs))
    } else {
        Ok(generic_table(&report))
    }
}

/// Fig1 rows in the `x == closed-form   y == closed-form` layout.
#[allow(clippy::needless_range_loop)]
fn fig1_table(report: &wavenet::RunReport, inputs: &BTreeMap<String, Vec<f64>>) -> Report {
    let mut passed = report.bitwise_equal();
    let mut text = String::new();
    for i in 0..report.waves {
        let (u, v) = (inputs["u"][i], inputs["v"][i]);
        let x_closed = u + (v * v).sin();
        let y_closed = (u - v).sin().exp();
        let (x, y) = (report.outputs["x"][i], report.outputs["y"][i]);
        passed &= rel_close(round_g(x), round_g(x_closed), CLOSED_FORM_TOL)
            && rel_close(round_g(y), round_g(y_closed), CLOSED_FORM_TOL);
        let _ = writeln!(
            text,
            " {} == {}   {} == {}",
            fmt_g(x),
            fmt_g(x_closed),
            fmt_g(y),
            fmt_g(y_closed)
        );
    }
    Report { passed, text }
}

fn generic_table(report: &wavenet::RunReport) -> Report {
    let mut text = String::new();
    let header: Vec<&str> = report.outputs.keys().map(String::as_str).collect();
    let _ = writeln!(text, " # {}", header.join("   "));
    for i in 0..report.waves {
        let row: Vec<String> = report
            .outputs
            .iter()
            .map(|(name, values)| {
                format!("{} == {}", fmt_g(values[i]), fmt_g(report.oracle[name][i]))
            })
            .collect();
        let _ = writeln!(text, " {}", row.join("   "));
    }
    Report {
        passed: report.bitwise_equal(),
        text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_g_matches_stream_output() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(9.0), "9");
        assert_eq!(fmt_g(17.0), "17");
        assert_eq!(fmt_g(0.8414709848078965), "0.841471");
        assert_eq!(fmt_g(49.92002603819679), "49.92");
        assert_eq!(fmt_g(100.99881522472359), "100.999");
        assert_eq!(fmt_g(1_996_750.0), "1.99675e+06");
        assert_eq!(fmt_g(1.26117e19), "1.26117e+19");
        assert_eq!(fmt_g(999_999.6), "1e+06");
        assert_eq!(fmt_g(123_456.0), "123456");
        assert_eq!(fmt_g(0.0001234567), "0.000123457");
        assert_eq!(fmt_g(0.00001234567), "1.23457e-05");
        assert_eq!(fmt_g(-2.5), "-2.5");
    }

    #[test]
    fn sort_edge_sizes() {
        for n in [0, 1, 100] {
            let cfg = DemoConfig {
                n: Some(n),
                ..DemoConfig::default()
            };
            assert!(cmd_sort(&cfg).passed);
        }
    }

    #[test]
    fn sum_hooks() {
        let policy = JoinPolicy::default();
        let zero = sum_report(&[0; 32], &policy);
        assert!(zero.passed);
        assert_eq!(zero.text, " sum obtained = 0\n sum is = 0\n");
        assert_eq!(
            sum_report(&[42], &policy).text,
            " sum obtained = 42\n sum is = 42\n"
        );
        assert!(cmd_sum(&DemoConfig::default()).passed);
    }

    #[test]
    fn horner_rows() {
        let report = cmd_horner(&DemoConfig::default());
        assert!(report.passed);
        assert_eq!(report.text.lines().count(), 10);
        let poly = Polynomial::new(vec![1.0, 2.0, 3.0]).unwrap();
        let fixed = horner_report(&poly, &[2.0], &JoinPolicy::faithful());
        assert_eq!(fixed.text, " Polynomial value = 17 == 17 == 17\n");
    }

    #[test]
    fn horner_zero_row_is_constant_term() {
        let mut rng = DemoConfig::default().rng();
        let a0 = f64::from(rng.gen_range(0u8..10));
        let report = cmd_horner(&DemoConfig::default());
        let first = report.text.lines().next().unwrap();
        let g = fmt_g(a0);
        assert_eq!(first, format!(" Polynomial value = {g} == {g} == {g}"));
    }

    #[test]
    fn sumsq_hooks() {
        let zero = sumsq_report(&[0.0; 4]).unwrap();
        assert!(zero.passed);
        let pyth = sumsq_report(&[3.0, 4.0]).unwrap();
        assert!(pyth.passed);
        assert!(pyth
            .text
            .starts_with("Value obtained by threads = 25.000000000\n"));
        assert!(cmd_sumsq(&DemoConfig::default()).unwrap().passed);
    }

    #[test]
    fn prodcons_variants() {
        let report = cmd_prodcons(&DemoConfig::default()).unwrap();
        assert!(report.passed);
        let want: String = (1..=20).map(|i| format!(" {i}")).collect();
        assert_eq!(report.text.trim_end(), want);
        for (cap, n) in [(1, 20), (10, 10), (3, 1000)] {
            let cfg = DemoConfig {
                capacity: Some(cap),
                n: Some(n),
                ..DemoConfig::default()
            };
            assert!(cmd_prodcons(&cfg).unwrap().passed);
        }
        let zero_cap = DemoConfig {
            capacity: Some(0),
            ..DemoConfig::default()
        };
        assert!(matches!(
            cmd_prodcons(&zero_cap),
            Err(CliError::Sync(SyncError::ZeroCapacity))
        ));
    }

    #[test]
    fn wave_fig1_rows() {
        let report = cmd_wave(&WaveTarget::Fig1, &[], &DemoConfig::default()).unwrap();
        assert!(report.passed);
        let rows: Vec<&str> = report.text.lines().collect();
        assert_eq!(rows.len(), 20);
        assert_eq!(rows[0], " 0.841471 == 0.841471   0.431076 == 0.431076");
        assert_eq!(rows[2], " 4.41212 == 4.41212   2.31978 == 2.31978");
    }

    #[test]
    fn wave_missing_stream_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let net = dir.path().join("id.net");
        std::fs::write(&net, "place p cap 2\nsource w -> p\nsink z <- p\n").unwrap();
        let target = WaveTarget::File(net);
        assert!(matches!(
            cmd_wave(&target, &[], &DemoConfig::default()),
            Err(CliError::MissingStream(s)) if s == "w"
        ));
    }
}
