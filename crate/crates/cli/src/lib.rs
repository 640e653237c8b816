//! Command-line front end: argument parsing, the five pipelines, and rendering
//! of their reports as JSON or CSV.

pub mod formats;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use indist_core::onephoton::{
    coherence_functions, fringe_scan, mandel_decompose, validate_density, validate_density_with,
    visibility_vs_pid, DensityOperator2, OnePhotonError,
};
use indist_core::qmetric::{degree, from_pid_table, QmetricError};
use indist_core::quasiset::{
    admissible_theorem_instances, check_equivalence_axioms, ext_identity, indist, RemovalReading,
    Term,
};
use indist_core::report::all_hold;
use indist_core::zwm::{sweep_transmission, ZwmError, ZwmSetup};
use indist_core::{Complex64, ANALYTIC_TOL, INPUT_TOL};
use thiserror::Error;

use report::{
    Bridge, Decomposition, DegreeRow, DensityInput, Inputs, Outputs, QsetCheck, RunReport, TOOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_UNSOUND: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "indist",
    version,
    about = "Degrees of indistinguishability: one-photon interferometry and finite quasi-set models"
)]
pub struct Cli {
    /// Machine-readable output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub output: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct DensityArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub rho11: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub rho22: f64,
    #[arg(
        long = "rho12-re",
        allow_negative_numbers = true,
        default_value_t = 0.0
    )]
    pub rho12_re: f64,
    #[arg(
        long = "rho12-im",
        allow_negative_numbers = true,
        default_value_t = 0.0
    )]
    pub rho12_im: f64,
}

impl From<DensityArgs> for DensityInput {
    fn from(a: DensityArgs) -> Self {
        DensityInput {
            rho11: a.rho11,
            rho22: a.rho22,
            rho12_re: a.rho12_re,
            rho12_im: a.rho12_im,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mandel decomposition, coherence and visibility of a density operator.
    Decompose(DensityArgs),
    /// Tabulate the induced-coherence model over idler transmission |τ| ∈ [0, 1].
    ZwmSweep {
        /// Pump amplitude toward crystal 1 (real part); amplitudes are normalized.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(
            long = "alpha-im",
            allow_negative_numbers = true,
            default_value_t = 0.0
        )]
        alpha_im: f64,
        /// Pump amplitude toward crystal 2 (real part).
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long = "beta-im", allow_negative_numbers = true, default_value_t = 0.0)]
        beta_im: f64,
        /// Phase of τ in radians, held fixed along the sweep.
        #[arg(
            long = "tau-phase",
            allow_negative_numbers = true,
            default_value_t = 0.0
        )]
        tau_phase: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
    /// Sampled detection rate against phase, with measured visibility.
    Fringes {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Equivalence axioms, permutation-theorem instances and ≡/=_E witnesses of a universe file.
    QsetCheck { file: PathBuf },
    /// Build the quasi-metric space induced by a P_ID table and check its axioms.
    Bridge {
        file: PathBuf,
        /// Tolerance for axiom checks.
        #[arg(long, default_value_t = ANALYTIC_TOL)]
        tolerance: f64,
    },
}

/// A run that produced no report.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
        }
    }
}

impl From<OnePhotonError> for CliError {
    fn from(e: OnePhotonError) -> Self {
        match e {
            OnePhotonError::DegenerateSource { .. } => CliError::Degenerate(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<ZwmError> for CliError {
    fn from(e: ZwmError) -> Self {
        match e {
            ZwmError::OnePhoton(inner) => inner.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn report(command: Vec<String>, inputs: Inputs, outputs: Outputs, exit_status: i32) -> RunReport {
    RunReport {
        tool: TOOL.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command,
        inputs,
        outputs,
        exit_status,
    }
}

/// Accept operators valid to input precision and nudge them onto the set of
/// density operators: clip negative populations, rescale the trace, shrink the
/// coherence to the positivity bound. Operators already valid at analytic
/// precision pass through untouched.
pub fn condition_density(input: &DensityInput) -> Result<DensityOperator2, CliError> {
    let rho = DensityOperator2::new(
        input.rho11,
        input.rho22,
        Complex64::new(input.rho12_re, input.rho12_im),
    );
    let check = validate_density_with(&rho, INPUT_TOL);
    if !check.is_valid() {
        return Err(CliError::Invalid(format!(
            "invalid density operator: {check}"
        )));
    }
    if validate_density(&rho).is_valid() {
        return Ok(rho);
    }
    let (r11, r22) = (rho.rho11.max(0.0), rho.rho22.max(0.0));
    let trace = r11 + r22;
    let (r11, r22) = (r11 / trace, r22 / trace);
    let mut r12 = rho.rho12 / trace;
    let bound = (r11 * r22).sqrt();
    if r12.norm() > bound {
        r12 = r12 * (bound / r12.norm());
    }
    Ok(DensityOperator2::new(r11, r22, r12))
}

/// Run a parsed command; `argv` is echoed into the report.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<RunReport, CliError> {
    match &cli.command {
        Command::Decompose(d) => decompose(argv, (*d).into()),
        Command::ZwmSweep {
            alpha,
            alpha_im,
            beta,
            beta_im,
            tau_phase,
            steps,
        } => zwm_sweep(
            argv,
            [*alpha, *alpha_im],
            [*beta, *beta_im],
            *tau_phase,
            *steps,
        ),
        Command::Fringes { density, samples } => fringes(argv, (*density).into(), *samples),
        Command::QsetCheck { file } => qset_check(argv, file),
        Command::Bridge { file, tolerance } => bridge(argv, file, *tolerance),
    }
}

pub fn decompose(argv: Vec<String>, input: DensityInput) -> Result<RunReport, CliError> {
    let rho = condition_density(&input)?;
    let m = mandel_decompose(&rho)?;
    let c = coherence_functions(&rho, Complex64::new(1.0, 0.0))?;
    let audit = visibility_vs_pid(&rho)?;
    let gamma12_abs = c.gamma12_normalized.norm();
    let out = Decomposition {
        p_id: m.p_id,
        p_d: m.p_d,
        rho_id: m.rho_id,
        rho_d: m.rho_d,
        gamma12_abs,
        identity_residual: gamma12_abs - m.p_id,
        reconstruction_residual: m.reconstruct().max_abs_diff(&rho),
        visibility: audit.visibility,
        visibility_ratio: audit.ratio,
    };
    Ok(report(
        argv,
        Inputs::Density(input),
        Outputs::Decomposition(out),
        EXIT_OK,
    ))
}

pub fn zwm_sweep(
    argv: Vec<String>,
    alpha: [f64; 2],
    beta: [f64; 2],
    tau_phase: f64,
    steps: usize,
) -> Result<RunReport, CliError> {
    let (a, b) = (
        Complex64::new(alpha[0], alpha[1]),
        Complex64::new(beta[0], beta[1]),
    );
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if !norm.is_finite() || norm == 0.0 || !tau_phase.is_finite() {
        return Err(CliError::Invalid(
            "pump amplitudes must be finite and not both zero".into(),
        ));
    }
    let setup = ZwmSetup::new(a / norm, b / norm, Complex64::from_polar(1.0, tau_phase));
    let rows = sweep_transmission(&setup, steps)?;
    let inputs = Inputs::Zwm {
        alpha,
        beta,
        tau_phase,
        steps,
    };
    Ok(report(argv, inputs, Outputs::Sweep { rows }, EXIT_OK))
}

pub fn fringes(
    argv: Vec<String>,
    input: DensityInput,
    samples: usize,
) -> Result<RunReport, CliError> {
    let rho = condition_density(&input)?;
    let scan = fringe_scan(&rho, Complex64::new(1.0, 0.0), samples)?;
    let analytic_visibility = visibility_vs_pid(&rho).ok().map(|a| a.visibility);
    let outputs = Outputs::Fringes {
        samples: scan.samples,
        visibility: scan.visibility,
        analytic_visibility,
    };
    Ok(report(
        argv,
        Inputs::Fringes {
            density: input,
            samples,
        },
        outputs,
        EXIT_OK,
    ))
}

fn read(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

pub fn qset_check(argv: Vec<String>, path: &std::path::Path) -> Result<RunReport, CliError> {
    let src = read(path)?;
    let u = formats::parse_universe(&src)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;

    let equivalence = check_equivalence_axioms(&u);
    let theorem_within_x = admissible_theorem_instances(&u, RemovalReading::WithinX);
    let theorem_whole_class = admissible_theorem_instances(&u, RemovalReading::WholeClass);
    let terms = u.terms();
    let mut witnesses = Vec::new();
    for (i, &x) in terms.iter().enumerate() {
        for &y in &terms[i + 1..] {
            let same = indist(&u, x, y).expect("terms of u");
            if same && !ext_identity(&u, x, y).expect("terms of u") {
                witnesses.push([u.name_of(x), u.name_of(y)]);
            }
        }
    }
    let all_hold = all_hold(&equivalence)
        && theorem_within_x
            .iter()
            .chain(&theorem_whole_class)
            .all(|i| i.report.holds);
    let inputs = Inputs::Universe {
        path: path.display().to_string(),
        species: u.species().to_vec(),
        atoms: u.atoms().map(|a| a.name.clone()).collect(),
        qsets: u.qset_ids().map(|q| u.name_of(Term::Qset(q))).collect(),
    };
    let outputs = Outputs::QsetCheck(QsetCheck {
        equivalence,
        theorem_within_x,
        theorem_whole_class,
        indistinguishable_not_identical: witnesses,
        all_hold,
    });
    let status = if all_hold { EXIT_OK } else { EXIT_UNSOUND };
    Ok(report(argv, inputs, outputs, status))
}

pub fn bridge(
    argv: Vec<String>,
    path: &std::path::Path,
    tolerance: f64,
) -> Result<RunReport, CliError> {
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(CliError::Invalid(format!(
            "tolerance must be a non-negative number, got {tolerance}"
        )));
    }
    let src = read(path)?;
    let table = formats::parse_pid_table(&src)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let inputs = Inputs::PidTable {
        path: path.display().to_string(),
        sources: table.sources.clone(),
        pid: table.pid.clone(),
        tolerance,
    };
    let distances: Vec<Vec<f64>> = table
        .pid
        .iter()
        .map(|r| r.iter().map(|p| 1.0 - p).collect())
        .collect();
    let out = match from_pid_table(&table.sources, &table.pid, tolerance) {
        Ok(b) => {
            let sound = b.space().is_sound();
            let mut degrees = Vec::new();
            if sound {
                for (i, s) in table.sources.iter().enumerate() {
                    for t in &table.sources[i..] {
                        let (a, c) = (b.term(s).expect("source"), b.term(t).expect("source"));
                        let r = degree(b.space(), a, c).expect("sound space");
                        degrees.push(DegreeRow {
                            a: s.clone(),
                            b: t.clone(),
                            r,
                        });
                    }
                }
            }
            Bridge {
                species: table
                    .sources
                    .iter()
                    .map(|s| b.species_of(s).expect("source").to_string())
                    .collect(),
                sources: table.sources,
                distances,
                axioms: b.reports().to_vec(),
                non_transitive_zeroes: None,
                degrees,
                sound,
            }
        }
        Err(QmetricError::NonTransitiveZeroes { a, b, c }) => Bridge {
            sources: table.sources,
            species: Vec::new(),
            distances,
            axioms: Vec::new(),
            non_transitive_zeroes: Some([a, b, c]),
            degrees: Vec::new(),
            sound: false,
        },
        Err(e) => return Err(CliError::Invalid(e.to_string())),
    };
    let status = if out.sound { EXIT_OK } else { EXIT_UNSOUND };
    Ok(report(argv, inputs, Outputs::Bridge(out), status))
}

/// Pretty JSON with a trailing newline.
pub fn render_json(r: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports hold only finite numbers");
    s.push('\n');
    s
}

fn axiom_rows(
    w: &mut csv::Writer<Vec<u8>>,
    group: &str,
    reports: &[indist_core::report::AxiomReport],
) -> csv::Result<()> {
    for r in reports {
        let (terms, detail) = r
            .counterexample
            .as_ref()
            .map(|c| (c.terms.join(" "), c.detail.clone()))
            .unwrap_or_default();
        w.write_record([
            group,
            r.axiom.label(),
            &r.holds.to_string(),
            &terms,
            &detail,
        ])?;
    }
    Ok(())
}

/// The CSV rendering of a report's outputs.
pub fn render_csv(r: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows: csv::Result<()> = (|| {
        match &r.outputs {
            Outputs::Decomposition(d) => {
                w.write_record(["quantity", "value"])?;
                let ratio = d
                    .visibility_ratio
                    .map(|v| v.to_string())
                    .unwrap_or_default();
                let rows: [(&str, String); 13] = [
                    ("p_id", d.p_id.to_string()),
                    ("p_d", d.p_d.to_string()),
                    ("rho_id_11", d.rho_id.rho11.to_string()),
                    ("rho_id_22", d.rho_id.rho22.to_string()),
                    ("rho_id_12_re", d.rho_id.rho12.re.to_string()),
                    ("rho_id_12_im", d.rho_id.rho12.im.to_string()),
                    ("rho_d_11", d.rho_d.rho11.to_string()),
                    ("rho_d_22", d.rho_d.rho22.to_string()),
                    ("gamma12_abs", d.gamma12_abs.to_string()),
                    ("identity_residual", d.identity_residual.to_string()),
                    (
                        "reconstruction_residual",
                        d.reconstruction_residual.to_string(),
                    ),
                    ("visibility", d.visibility.to_string()),
                    ("visibility_ratio", ratio),
                ];
                for (k, v) in rows {
                    w.write_record([k, v.as_str()])?;
                }
            }
            Outputs::Sweep { rows } => {
                w.write_record(["t_mag", "p_id", "visibility", "coincidence_id_prob"])?;
                for row in rows {
                    w.write_record(
                        [row.t_mag, row.p_id, row.visibility, row.coincidence_id_prob]
                            .map(|v| v.to_string()),
                    )?;
                }
            }
            Outputs::Fringes {
                samples,
                visibility,
                ..
            } => {
                w.write_record(["phase_rad", "rate"])?;
                for s in samples {
                    w.write_record([s.phase.to_string(), s.rate.to_string()])?;
                }
                w.write_record(["visibility".to_string(), visibility.to_string()])?;
            }
            Outputs::QsetCheck(q) => {
                w.write_record(["check", "name", "holds", "terms", "detail"])?;
                axiom_rows(&mut w, "equivalence", &q.equivalence)?;
                for (group, list) in [
                    ("within_x", &q.theorem_within_x),
                    ("whole_class", &q.theorem_whole_class),
                ] {
                    for i in list {
                        let subject = format!("x={} z={} w={}", i.x, i.z, i.w);
                        let detail = i
                            .report
                            .counterexample
                            .as_ref()
                            .map(|c| c.detail.clone())
                            .unwrap_or_default();
                        w.write_record([
                            group,
                            &subject,
                            &i.report.holds.to_string(),
                            "",
                            &detail,
                        ])?;
                    }
                }
                for [x, y] in &q.indistinguishable_not_identical {
                    w.write_record([
                        "witness",
                        "indistinguishable_not_identical",
                        "true",
                        &format!("{x} {y}"),
                        "",
                    ])?;
                }
            }
            Outputs::Bridge(b) => {
                w.write_record(["check", "name", "holds", "terms", "detail"])?;
                axiom_rows(&mut w, "axiom", &b.axioms)?;
                if let Some([x, y, z]) = &b.non_transitive_zeroes {
                    w.write_record([
                        "species",
                        "zero_distance_transitivity",
                        "false",
                        &format!("{x} {y} {z}"),
                        "",
                    ])?;
                }
                for d in &b.degrees {
                    w.write_record([
                        "degree",
                        &d.r.to_string(),
                        "true",
                        &format!("{} {}", d.a, d.b),
                        "",
                    ])?;
                }
            }
        }
        Ok(())
    })();
    rows.expect("writing to memory");
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 fields")
}

pub fn render(r: &RunReport, format: Format) -> String {
    match format {
        Format::Json => render_json(r),
        Format::Csv => render_csv(r),
    }
}
