//! Command-line front end. Every command builds an [`OutputRecord`] from
//! library calls; the binary only parses arguments and prints.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage,
//! parse or domain errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{HalfInt, SignedSqrtRational};
use crate::gauge::{abelianization_check, AbelianizationVariant};
use crate::harmonics::{
    gram_check, monopole_harmonic, parity_map, MonopoleHarmonic, MonopoleHarmonicIndex,
    SphericalPoint,
};
use crate::quadrature::{SphereGrid, DEFAULT_N_PHI, DEFAULT_N_THETA};
use crate::selection::{
    selection_table, ChargeOperatorKind, TransitionTable, AGREEMENT_TOLERANCE, ALLOWED_THRESHOLD,
};
use crate::wigner::{three_j, ThreeJArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_GAUGE_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_GRAM_TOLERANCE: f64 = 1e-9;

/// Everything a command reports. Fields serialize in declaration order and
/// maps in key order, so output is byte-stable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
}

impl OutputRecord {
    fn new(command: &str) -> Self {
        OutputRecord {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            results: Value::Null,
            tolerances: BTreeMap::new(),
            checks: BTreeMap::new(),
        }
    }

    fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable"),
        );
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn ssr(x: &SignedSqrtRational) -> Value {
    json!({
        "sign": x.sign(),
        "radicand": x.radicand().to_string(),
        "exact": x.to_string(),
        "value": x.to_f64(),
    })
}

pub fn cmd_harmonic(
    j: HalfInt,
    m: HalfInt,
    mu: HalfInt,
    theta: f64,
    phi: f64,
) -> Result<OutputRecord> {
    let idx = MonopoleHarmonicIndex::new(j, m, mu)?;
    let p = SphericalPoint::new(theta, phi)?;
    let value = monopole_harmonic(&idx, p)?;
    let normalization = MonopoleHarmonic::new(idx)?.normalization();
    let parity = match parity_map(&idx, p) {
        Ok(img) => json!({
            "index": { "j": img.index.j().to_string(), "m": img.index.m().to_string(), "mu": img.index.mu().to_string() },
            "point": { "theta": img.point.theta(), "phi": img.point.phi() },
            "ratio": complex(img.ratio),
            "phase": complex(img.phase),
        }),
        // harmonic vanishes at p
        Err(_) => Value::Null,
    };
    let mut rec = OutputRecord::new("harmonic")
        .param("j", j.to_string())
        .param("m", m.to_string())
        .param("mu", mu.to_string())
        .param("theta", theta)
        .param("phi", phi);
    rec.results = json!({
        "value": complex(value),
        "normalization": normalization,
        "parity": parity,
    });
    Ok(rec)
}

pub fn cmd_wigner3j(args: [HalfInt; 6]) -> Result<OutputRecord> {
    let [j1, j2, j3, m1, m2, m3] = args;
    let value = three_j(&ThreeJArgs::new([j1, j2, j3], [m1, m2, m3])?);
    let mut rec = OutputRecord::new("wigner3j");
    for (k, v) in ["j1", "j2", "j3", "m1", "m2", "m3"].iter().zip(args) {
        rec = rec.param(k, v.to_string());
    }
    rec.results = ssr(&value);
    Ok(rec)
}

pub fn cmd_gauge_check(
    n_samples: usize,
    seed: u64,
    variant: AbelianizationVariant,
    tolerance: f64,
) -> Result<OutputRecord> {
    let report = abelianization_check(n_samples, seed, variant)?;
    let mut rec = OutputRecord::new("gauge-check")
        .param("samples", n_samples)
        .param("seed", seed)
        .param("variant", variant.name());
    rec.results = json!({
        "max_off_diagonal": report.max_off_diagonal,
        "c_mean": report.c_mean,
        "c_min": report.c_min,
        "c_max": report.c_max,
        "c_spread": report.c_spread(),
        "max_fit_residual": report.max_fit_residual,
    });
    rec.tolerances.insert("abelianization".into(), tolerance);
    rec.checks
        .insert("abelianized".into(), report.passes(tolerance));
    Ok(rec)
}

pub fn cmd_selection_table(
    j_max: HalfInt,
    mu: HalfInt,
    operator: ChargeOperatorKind,
    n_theta: usize,
    n_phi: usize,
) -> Result<(OutputRecord, TransitionTable)> {
    let grid = SphereGrid::new(n_theta, n_phi)?;
    let table = selection_table(j_max, mu, operator, &grid)?;
    let mut rec = OutputRecord::new("selection-table")
        .param("jmax", j_max.to_string())
        .param("mu", mu.to_string())
        .param("operator", operator.name())
        .param("ntheta", n_theta)
        .param("nphi", n_phi);
    let scales: BTreeMap<&str, Value> = table
        .scales
        .iter()
        .map(|(c, s)| (c.name(), complex(*s)))
        .collect();
    let records: Vec<Value> = table
        .records
        .iter()
        .map(|r| {
            json!({
                "j": r.j.to_string(),
                "m": r.m.to_string(),
                "j_prime": r.j_prime.to_string(),
                "m_prime": r.m_prime.to_string(),
                "component": r.component.name(),
                "operator": r.operator.name(),
                "value_quadrature": complex(r.value_quadrature),
                "value_closed_form": complex(r.value_closed_form),
                "reduced_exact": r.reduced.exact.as_ref().map(|x| x.to_string()),
                "verdict": r.verdict.name(),
                "dual_agreement": r.dual_agreement,
            })
        })
        .collect();
    rec.results = json!({
        "scales": scales,
        "max_disagreement": table.max_disagreement(),
        "records": records,
    });
    rec.tolerances
        .insert("allowed_threshold".into(), ALLOWED_THRESHOLD);
    rec.tolerances
        .insert("dual_agreement".into(), AGREEMENT_TOLERANCE);
    rec.checks
        .insert("dual_agreement".into(), table.all_agree());
    Ok((rec, table))
}

/// CSV rendering: `j,m,j_prime,m_prime,component,operator,re_value,im_value,verdict,dual_agreement`,
/// with the quadrature value.
pub fn table_csv(table: &TransitionTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "j",
        "m",
        "j_prime",
        "m_prime",
        "component",
        "operator",
        "re_value",
        "im_value",
        "verdict",
        "dual_agreement",
    ])
    .expect("in-memory write");
    for r in &table.records {
        w.write_record([
            r.j.to_string(),
            r.m.to_string(),
            r.j_prime.to_string(),
            r.m_prime.to_string(),
            r.component.name().to_string(),
            r.operator.name().to_string(),
            format!("{:e}", r.value_quadrature.re),
            format!("{:e}", r.value_quadrature.im),
            r.verdict.name().to_string(),
            r.dual_agreement.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn cmd_orthonormality(
    j_max: HalfInt,
    mu: HalfInt,
    n_theta: usize,
    n_phi: usize,
    tolerance: f64,
) -> Result<OutputRecord> {
    let grid = SphereGrid::new(n_theta, n_phi)?;
    let report = gram_check(j_max, mu, &grid)?;
    let mut rec = OutputRecord::new("orthonormality")
        .param("jmax", j_max.to_string())
        .param("mu", mu.to_string())
        .param("ntheta", n_theta)
        .param("nphi", n_phi);
    rec.results = json!({
        "states": report.states,
        "max_off_diagonal": report.max_off_diagonal,
        "diagonal_min": report.diagonal_min,
        "diagonal_max": report.diagonal_max,
        "diagonal_spread": report.diagonal_spread(),
        "max_diagonal_defect": report.max_diagonal_defect,
    });
    rec.tolerances.insert("orthonormality".into(), tolerance);
    rec.checks.insert(
        "orthonormal".into(),
        report.max_off_diagonal <= tolerance && report.max_diagonal_defect <= tolerance,
    );
    Ok(rec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OperatorArg {
    Pseudoscalar,
    Scalar,
}

impl From<OperatorArg> for ChargeOperatorKind {
    fn from(o: OperatorArg) -> Self {
        match o {
            OperatorArg::Pseudoscalar => ChargeOperatorKind::PseudoscalarSigma3,
            OperatorArg::Scalar => ChargeOperatorKind::ScalarIdentity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Direct,
    Parity,
}

#[derive(Debug, Parser)]
#[command(name = "monopole", version, about = "Charge-monopole angular algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate Y_{j m mu}(theta, phi)
    Harmonic {
        j: HalfInt,
        #[arg(allow_hyphen_values = true)]
        m: HalfInt,
        #[arg(allow_hyphen_values = true)]
        mu: HalfInt,
        theta: f64,
        #[arg(allow_hyphen_values = true)]
        phi: f64,
    },
    /// Exact 3-j symbol (j1 j2 j3; m1 m2 m3)
    Wigner3j {
        #[arg(num_args = 6, allow_hyphen_values = true, value_names = ["J1", "J2", "J3", "M1", "M2", "M3"])]
        args: Vec<HalfInt>,
    },
    /// Abelianization of the Wu-Yang potential on seeded random points
    GaugeCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = VariantArg::Direct)]
        variant: VariantArg,
        #[arg(long, default_value_t = DEFAULT_GAUGE_TOLERANCE)]
        tolerance: f64,
    },
    /// Dipole transition table
    SelectionTable {
        #[arg(long)]
        jmax: HalfInt,
        #[arg(long, allow_hyphen_values = true)]
        mu: HalfInt,
        #[arg(long, value_enum)]
        operator: OperatorArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_N_THETA)]
        ntheta: usize,
        #[arg(long, default_value_t = DEFAULT_N_PHI)]
        nphi: usize,
    },
    /// Quadrature Gram matrix of the harmonics
    Orthonormality {
        #[arg(long)]
        jmax: HalfInt,
        #[arg(long, allow_hyphen_values = true)]
        mu: HalfInt,
        #[arg(long, default_value_t = DEFAULT_N_THETA)]
        ntheta: usize,
        #[arg(long, default_value_t = DEFAULT_N_PHI)]
        nphi: usize,
        #[arg(long, default_value_t = DEFAULT_GRAM_TOLERANCE)]
        tolerance: f64,
    },
}

fn dispatch(command: Command) -> Result<(String, bool)> {
    let json_out = |rec: OutputRecord| (rec.to_json(), rec.passed());
    Ok(match command {
        Command::Harmonic {
            j,
            m,
            mu,
            theta,
            phi,
        } => json_out(cmd_harmonic(j, m, mu, theta, phi)?),
        Command::Wigner3j { args } => {
            let args: [HalfInt; 6] = args.try_into().map_err(|_| Error::Parse {
                arg: "wigner3j".into(),
                reason: "expected six values".into(),
            })?;
            json_out(cmd_wigner3j(args)?)
        }
        Command::GaugeCheck {
            samples,
            seed,
            variant,
            tolerance,
        } => {
            let variant = match variant {
                VariantArg::Direct => AbelianizationVariant::Direct,
                VariantArg::Parity => AbelianizationVariant::Parity,
            };
            json_out(cmd_gauge_check(samples, seed, variant, tolerance)?)
        }
        Command::SelectionTable {
            jmax,
            mu,
            operator,
            format,
            ntheta,
            nphi,
        } => {
            let (rec, table) = cmd_selection_table(jmax, mu, operator.into(), ntheta, nphi)?;
            match format {
                Format::Json => json_out(rec),
                Format::Csv => (table_csv(&table), rec.passed()),
            }
        }
        Command::Orthonormality {
            jmax,
            mu,
            ntheta,
            nphi,
            tolerance,
        } => json_out(cmd_orthonormality(jmax, mu, ntheta, nphi, tolerance)?),
    })
}

/// Parses `args` (including the program name), runs the command, and writes
/// to `out` and `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok((text, passed)) => {
            let _ = out.write_all(text.as_bytes());
            if passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
