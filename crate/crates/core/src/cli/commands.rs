use super::{run_verify, CliError, Outcome, RunConfig};
use crate::dynamics::{default_times, evolve_packet, zb_spectrum, TrajectoryRecord};
use crate::horizon::{
    emit_diagram, flat_space_analogue, scenario_timeline, validate_scenario, DiagramFormat,
    HorizonScenario,
};
use crate::kinematics::energy;
use crate::linalg::Vec3;
use crate::report::{Check, Report};
use serde::Serialize;
use std::path::Path;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";

#[derive(Serialize)]
struct SimulationSummary {
    trajectory: &'static str,
    samples: usize,
    k0: Vec3,
    mass: f64,
    omega: f64,
    zb_frequency: f64,
    mean_velocity: Vec3,
    /// Largest deviation of any current component from its mean.
    zb_amplitude: f64,
    max_norm_defect: f64,
    continuity_defect: f64,
}

fn simulate(
    cfg: &RunConfig,
    pure_branch: bool,
) -> Result<(TrajectoryRecord, SimulationSummary), CliError> {
    let mut packet = cfg.packet;
    if pure_branch {
        packet = packet.pure_positive();
    }
    if cfg.samples < 5 {
        return Err(CliError::Usage(format!(
            "samples must be at least 5, got {}",
            cfg.samples
        )));
    }
    let times = default_times(&packet.k0, packet.mass, cfg.samples, cfg.periods)
        .map_err(CliError::physics)?;
    let record = evolve_packet(&packet, &cfg.grid, &times).map_err(CliError::physics)?;
    let omega = energy(&packet.k0, packet.mass).map_err(CliError::physics)?;
    let summary = SimulationSummary {
        trajectory: TRAJECTORY_FILE,
        samples: record.len(),
        k0: packet.k0,
        mass: packet.mass,
        omega,
        zb_frequency: 2.0 * omega,
        mean_velocity: record.mean_current(),
        zb_amplitude: record.current_excursion(),
        max_norm_defect: record.max_norm_defect(),
        continuity_defect: record.continuity_defect(cfg.grid.resolved_axes()),
    };
    Ok((record, summary))
}

pub fn run_simulate(cfg: &RunConfig, pure_branch: bool) -> Result<Outcome, CliError> {
    cfg.require_mass()?;
    let (record, summary) = simulate(cfg, pure_branch)?;
    let dir = cfg.output_dir()?;
    let file = std::fs::File::create(dir.join(TRAJECTORY_FILE))
        .map_err(|e| CliError::Usage(format!("cannot write {TRAJECTORY_FILE}: {e}")))?;
    record
        .write_csv(std::io::BufWriter::new(file))
        .map_err(CliError::physics)?;
    let mut report = Report::new();
    report.record("simulation", &summary);
    report.check(Check::new(
        "norm",
        summary.max_norm_defect,
        cfg.tolerance("norm"),
    ));
    Ok(Outcome {
        report,
        report_name: "simulate.jsonl",
    })
}

pub fn run_spectrum(
    cfg: &RunConfig,
    trajectory: Option<&Path>,
    check: bool,
) -> Result<Outcome, CliError> {
    let path = trajectory
        .or(cfg.trajectory.as_deref())
        .ok_or_else(|| CliError::Usage("spectrum needs a trajectory file".into()))?;
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Usage(format!("cannot read trajectory {}: {e}", path.display())))?;
    let record =
        TrajectoryRecord::read_csv(std::io::BufReader::new(file)).map_err(CliError::physics)?;
    let spectrum = zb_spectrum(&record).map_err(CliError::physics)?;
    let mut report = Report::new();
    report.record("spectrum", &spectrum);
    if check {
        let omega = energy(&cfg.packet.k0, cfg.packet.mass).map_err(CliError::physics)?;
        let expected = 2.0 * omega;
        let rel = (spectrum.dominant_frequency - expected).abs() / expected;
        report.check(
            Check::new("frequency", rel, cfg.tolerance("frequency"))
                .with_detail(format!("expected {expected} from k0 and mass")),
        );
    }
    Ok(Outcome {
        report,
        report_name: "spectrum.jsonl",
    })
}

fn read_scenario(cfg: &RunConfig, scenario: Option<&Path>) -> Result<HorizonScenario, CliError> {
    let path = scenario
        .or(cfg.scenario.as_deref())
        .ok_or_else(|| CliError::Usage("horizon needs a scenario file".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read scenario {}: {e}", path.display())))?;
    HorizonScenario::parse(&text).map_err(CliError::physics)
}

#[derive(Serialize)]
struct ScenarioRecord<'a> {
    scenario: &'a HorizonScenario,
    variant: Option<crate::horizon::Variant>,
    violations: &'a [&'static str],
}

#[derive(Serialize)]
struct DiagramRecord {
    file: String,
    bytes: usize,
}

pub fn run_horizon(cfg: &RunConfig, scenario: Option<&Path>) -> Result<Outcome, CliError> {
    let scenario = read_scenario(cfg, scenario)?;
    let format: DiagramFormat = cfg
        .format
        .as_deref()
        .unwrap_or("svg")
        .parse()
        .map_err(CliError::physics)?;
    let validation = validate_scenario(&scenario).map_err(CliError::physics)?;
    let mut report = Report::new();
    report.record(
        "scenario",
        &ScenarioRecord {
            scenario: &scenario,
            variant: validation.variant,
            violations: &validation.violations,
        },
    );
    if validation.is_ok() {
        let timeline = scenario_timeline(&scenario).map_err(CliError::physics)?;
        let doc = emit_diagram(&timeline, format).map_err(CliError::physics)?;
        let name = format!("horizon.{}", format.extension());
        std::fs::write(cfg.output_dir()?.join(&name), &doc)
            .map_err(|e| CliError::Usage(format!("cannot write {name}: {e}")))?;
        report.record(
            "diagram",
            &DiagramRecord {
                file: name,
                bytes: doc.len(),
            },
        );
    } else {
        for v in &validation.violations {
            report.fail(format!("violated: {v}"));
        }
    }
    Ok(Outcome {
        report,
        report_name: "horizon.jsonl",
    })
}

/// Desk-scale smoke run of every module; nothing is written but the report.
pub fn run_selftest(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut base = cfg.clone();
    base.from_file = false;
    let mut report = run_verify(&base)?;

    let (record, mixed) = simulate(&base, false)?;
    report.check(Check::new(
        "simulate.norm",
        mixed.max_norm_defect,
        base.tolerance("norm"),
    ));
    report.check(Check::new(
        "simulate.continuity",
        mixed.continuity_defect,
        1e-3,
    ));
    let spectrum = zb_spectrum(&record).map_err(CliError::physics)?;
    let rel = (spectrum.dominant_frequency - mixed.zb_frequency).abs() / mixed.zb_frequency;
    report.check(Check::new(
        "spectrum.frequency",
        rel,
        base.tolerance("frequency"),
    ));
    let (_, pure) = simulate(&base, true)?;
    report.check(Check::new("simulate.pure_branch", pure.zb_amplitude, 1e-8));

    let mut horizon_ok = 0.0;
    for s in [
        HorizonScenario::new(1.0, 0.5, 1.5, 0.7, 10.0),
        HorizonScenario::new(1.0, 0.6, 2.0, 0.3, 10.0),
    ] {
        let v = validate_scenario(&s).map_err(CliError::physics)?;
        let t = scenario_timeline(&s);
        if !v.is_ok() || t.is_err() {
            horizon_ok += 1.0;
        }
    }
    let bad = validate_scenario(&HorizonScenario::new(1.0, 0.5, 0.9, 0.7, 10.0))
        .map_err(CliError::physics)?;
    if bad.violations != ["r1 > r_g"] {
        horizon_ok += 1.0;
    }
    let flat = flat_space_analogue(0.0, 0.4, 0.1, 0.5);
    let a = emit_diagram(&flat, DiagramFormat::Svg).map_err(CliError::physics)?;
    let b = emit_diagram(&flat, DiagramFormat::Svg).map_err(CliError::physics)?;
    if a != b || a.contains("stroke-dasharray") {
        horizon_ok += 1.0;
    }
    report.check(
        Check::new("horizon", horizon_ok, 0.0).with_detail("count of failed scenario checks"),
    );
    Ok(Outcome {
        report,
        report_name: "selftest.jsonl",
    })
}
