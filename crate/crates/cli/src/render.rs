//! Turns library results into the three output forms: a human table, a
//! JSON tree, or CSV rows. Every renderer is a pure function of its report,
//! so equal reports give byte-equal output.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;

use clap::ValueEnum;
use vcrit::demos::{self, ParadoxRecord};
use vcrit::lp::{LpSolution, LpStatus};
use vcrit::optimizer::{OptimizationReport, ScanReport};
use vcrit::quantum::{self, Visibility};
use vcrit::{grids, SettingsGrid};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    /// Human-readable lines.
    Table,
    /// One JSON tree.
    Json,
    /// Comma-separated rows.
    Csv,
}

fn json_tree(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn counts_words(counts: &[usize]) -> String {
    let words: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
    words.join(" ")
}

/// One `party N angles: ...` line per party; angles in their shortest
/// round-trip form (reports round them to 12 significant digits first).
fn angle_lines(out: &mut String, angles: &[Vec<f64>]) {
    for (party, list) in angles.iter().enumerate() {
        let words: Vec<String> = list.iter().map(|a| a.to_string()).collect();
        writeln!(out, "party {party} angles: {}", words.join(" ")).unwrap();
    }
}

fn status_word(status: LpStatus) -> &'static str {
    match status {
        LpStatus::Optimal => "optimal",
        LpStatus::Infeasible => "infeasible",
        LpStatus::IterationLimit => "iteration-limit",
    }
}

pub fn visibility(
    grid: &SettingsGrid,
    solution: &LpSolution,
    certificate: bool,
    format: Format,
) -> String {
    match format {
        Format::Table => {
            let mut out = String::new();
            writeln!(
                out,
                "grid: {} parties, settings {}",
                grid.party_count(),
                counts_words(&grid.counts())
            )
            .unwrap();
            writeln!(out, "v_max = {:.9}", solution.v_max().value()).unwrap();
            writeln!(out, "status: {}", status_word(solution.status())).unwrap();
            writeln!(out, "simplex iterations: {}", solution.iterations()).unwrap();
            if certificate {
                let weights = solution.weights();
                writeln!(out, "mixture weights (nonzero of {}):", weights.len()).unwrap();
                for (i, &w) in weights.iter().enumerate() {
                    if w.abs() > 1e-12 {
                        writeln!(out, "  w[{i}] = {w:.9}").unwrap();
                    }
                }
                writeln!(out, "row duals (entry rows, then normalization):").unwrap();
                for (i, &y) in solution.duals().iter().enumerate() {
                    writeln!(out, "  y[{i}] = {y:.9}").unwrap();
                }
            }
            out
        }
        Format::Json => json_tree(&serde_json::json!({
            "grid": grid,
            "solution": solution,
        })),
        Format::Csv => format!(
            "v_max,status,iterations\n{:.9},{},{}\n",
            solution.v_max().value(),
            status_word(solution.status()),
            solution.iterations()
        ),
    }
}

pub fn optimize(report: &OptimizationReport, format: Format) -> String {
    match format {
        Format::Table => {
            let converged = report.restarts().iter().filter(|r| r.converged).count();
            let mut out = String::new();
            writeln!(out, "counts: {}", counts_words(report.counts())).unwrap();
            writeln!(
                out,
                "seed: {}, restarts: {} ({converged} converged), lp solves: {}",
                report.seed(),
                report.restarts().len(),
                report.lp_solves()
            )
            .unwrap();
            writeln!(out, "best_v = {:.9}", report.best_v()).unwrap();
            angle_lines(&mut out, report.best_angles());
            out
        }
        Format::Json => json_tree(&serde_json::to_value(report).expect("report serializes")),
        Format::Csv => {
            let mut out = String::from("restart,end_value,iterations,evaluations,converged\n");
            for (i, r) in report.restarts().iter().enumerate() {
                writeln!(
                    out,
                    "{i},{},{},{},{}",
                    r.end_value, r.iterations, r.evaluations, r.converged
                )
                .unwrap();
            }
            out
        }
    }
}

pub fn scan(report: &ScanReport, format: Format) -> String {
    match format {
        Format::Table => {
            let mut out = String::new();
            writeln!(out, "counts: {}", counts_words(report.counts())).unwrap();
            writeln!(
                out,
                "seed: {}, samples: {}, lp solves: {}",
                report.seed(),
                report.samples(),
                report.lp_solves()
            )
            .unwrap();
            match (report.summary(), report.best()) {
                (Some(s), Some(best)) => {
                    writeln!(
                        out,
                        "v_max: min {:.9} / q1 {:.9} / median {:.9} / q3 {:.9} / max {:.9}",
                        s.min, s.q1, s.median, s.q3, s.max
                    )
                    .unwrap();
                    writeln!(out, "best grid (v_max = {:.9}):", best.v_max).unwrap();
                    angle_lines(&mut out, &best.angles);
                }
                _ => writeln!(out, "no samples drawn").unwrap(),
            }
            out
        }
        Format::Json => json_tree(&serde_json::to_value(report).expect("report serializes")),
        Format::Csv => {
            let mut out = String::from("sample,v_max\n");
            for (i, v) in report.values().iter().enumerate() {
                writeln!(out, "{i},{v}").unwrap();
            }
            out
        }
    }
}

fn angle_word(angle: f64) -> String {
    if angle == 0.0 {
        "0".into()
    } else if angle == FRAC_PI_2 {
        "pi/2".into()
    } else if angle == -FRAC_PI_2 {
        "-pi/2".into()
    } else if angle == FRAC_PI_4 {
        "pi/4".into()
    } else if angle == -FRAC_PI_4 {
        "-pi/4".into()
    } else {
        angle.to_string()
    }
}

pub fn ghz_transcript(record: &ParadoxRecord) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "each party measures in one shared plane, settings 0 and pi/2"
    )
    .unwrap();
    for (i, c) in record.constraints()[..3].iter().enumerate() {
        let words: Vec<String> = c.angles.iter().map(|&a| angle_word(a)).collect();
        writeln!(
            out,
            "premise {}: settings ({}), outcome product forced to {}",
            i + 1,
            words.join(", "),
            c.required
        )
        .unwrap();
    }
    writeln!(
        out,
        "multiplying the premises squares away every 0-setting outcome, \
         so a local answer sheet fixes the (pi/2, pi/2, pi/2) product at {}",
        record.derived_product()
    )
    .unwrap();
    writeln!(
        out,
        "the correlation at angle sum 3pi/2 makes that product {}",
        record.quantum_value()
    )
    .unwrap();
    writeln!(
        out,
        "answer sheets satisfying all four equations: {} of {}",
        record.satisfying_assignments(),
        record.assignment_count()
    )
    .unwrap();
    writeln!(
        out,
        "derived {}, quantum {}, contradiction",
        record.derived_product(),
        record.quantum_value()
    )
    .unwrap();
    out
}

pub fn chsh_transcript(classical: bool) -> String {
    let mut out = String::new();
    if classical {
        writeln!(
            out,
            "deterministic answer sheets and their combination values:"
        )
        .unwrap();
        writeln!(out, "a1 a2 b1 b2 -> a1b1 + a1b2 + a2b1 - a2b2").unwrap();
        for x in demos::ChshAssignment::all() {
            writeln!(
                out,
                "{} {} {} {} -> {:+}",
                x.a1,
                x.a2,
                x.b1,
                x.b2,
                demos::chsh_combination(x)
            )
            .unwrap();
        }
        writeln!(out, "every combination is -2 or +2, so |S| <= 2").unwrap();
        return out;
    }

    let grid = grids::chsh_optimal();
    let angles = grid.coplanar_angles().expect("reference grid is coplanar");
    let mut correlations = [0.0; 4];
    let mut names = Vec::new();
    for (i, &a) in angles[0].iter().enumerate() {
        for (j, &b) in angles[1].iter().enumerate() {
            correlations[2 * i + j] = quantum::correlation(&[a, b], Visibility::FULL);
            names.push(format!("E(a{},b{})", i + 1, j + 1));
        }
    }
    let (s, within) = demos::chsh_bound_check(correlations);

    writeln!(
        out,
        "settings (one plane): party A at {}, {}; party B at {}, {}",
        angle_word(angles[0][0]),
        angle_word(angles[0][1]),
        angle_word(angles[1][0]),
        angle_word(angles[1][1])
    )
    .unwrap();
    for (name, value) in names.iter().zip(correlations) {
        writeln!(out, "{name} = {value:.9}").unwrap();
    }
    writeln!(
        out,
        "S = E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2) = {s:.9}"
    )
    .unwrap();
    if within {
        writeln!(out, "local deterministic bound |S| <= 2: satisfied").unwrap();
    } else {
        writeln!(
            out,
            "local deterministic bound |S| <= 2: violated by {:.9}",
            s.abs() - 2.0
        )
        .unwrap();
    }
    out
}
