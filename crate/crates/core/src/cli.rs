//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when the document or a request fails
//! validation, 2 on I/O or parse failures.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::belief::{
    additive_probability, atom_commonalities, atom_normalized_commonalities, belief, plausibility,
};
use crate::decision::{rank_decisions_with_tolerance, rank_eq1, DecisionRanking, Method};
use crate::document::{Problem, ProblemDocument, Severity};
use crate::event_space::Level;
use crate::unforeseen::{label_unforeseen, UnforeseenProfile};
use crate::{Subset, EPS_TIE};

/// Environment variable that overrides the default tie tolerance.
pub const EPSILON_ENV: &str = "FORESIGHT_EPSILON";

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_IO: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "foresight",
    version,
    about = "Rank decisions when unforeseen events may occur"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a problem document and list diagnostics as JSON.
    Validate {
        input: PathBuf,
        /// Print the normalized document instead (diagnostics go to stderr).
        #[arg(long)]
        echo: bool,
    },
    /// Label unforeseen profiles with sets of foreseen atoms.
    Label {
        input: PathBuf,
        /// Comma-separated profile to label instead of the document's list.
        #[arg(long)]
        profile: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rank decisions by expected utility.
    Rank {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RankMethod::Eq2)]
        method: RankMethod,
        /// Expected utilities closer than this are tied.
        #[arg(long, env = EPSILON_ENV, default_value_t = EPS_TIE)]
        epsilon: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Belief, additive probability and plausibility of a set of atoms.
    Bounds {
        input: PathBuf,
        /// Atom ids joined by `+` (e.g. `b+c`); `*` for all atoms, `{}` for none.
        subset: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Per-atom normalized and Shafer commonalities.
    Commonalities {
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    Eq2,
    Commonality,
    Eq1Baseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Io(m) => m,
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

/// Runs one command, writing reports to `out` and errors to `err`.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match run(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Failure> {
    match &cli.command {
        Command::Validate { input, echo } => validate(input, *echo, out, err),
        Command::Label {
            input,
            profile,
            out: o,
        } => {
            let problem = load(input)?;
            let report = label(&problem, profile.as_deref())?;
            emit(o, out, &report)
        }
        Command::Rank {
            input,
            method,
            epsilon,
            out: o,
        } => {
            let problem = load(input)?;
            let report = rank(&problem, *method, *epsilon)?;
            emit(o, out, &report)
        }
        Command::Bounds {
            input,
            subset,
            out: o,
        } => {
            let problem = load(input)?;
            let report = bounds(&problem, subset)?;
            emit(o, out, &report)
        }
        Command::Commonalities { input, out: o } => {
            let problem = load(input)?;
            let report = commonalities(&problem)?;
            emit(o, out, &report)
        }
    }
}

fn validate(
    input: &PathBuf,
    echo: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, Failure> {
    let doc = ProblemDocument::load(input).map_err(|e| Failure::Io(e.to_string()))?;
    let validation = doc.validate();
    let diagnostics = serde_json::json!({
        "valid": validation.is_valid(),
        "diagnostics": validation.diagnostics,
    });
    let diagnostics = serde_json::to_string_pretty(&diagnostics).expect("serializable");
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    if echo {
        let echoed = match &validation.problem {
            Some(p) => doc.normalized(p),
            None => doc,
        };
        writeln!(out, "{}", echoed.to_json()).map_err(io)?;
        writeln!(err, "{diagnostics}").map_err(io)?;
    } else {
        writeln!(out, "{diagnostics}").map_err(io)?;
    }
    Ok(if validation.is_valid() {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}

fn load(input: &PathBuf) -> Result<Problem, Failure> {
    let doc = ProblemDocument::load(input).map_err(|e| Failure::Io(e.to_string()))?;
    let validation = doc.validate();
    validation.problem.ok_or_else(|| {
        let lines: Vec<String> = validation
            .diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
            .map(|d| format!("[{}] {}: {}", d.section, d.code, d.message))
            .collect();
        Failure::Invalid(format!("invalid document\n{}", lines.join("\n")))
    })
}

trait Report: Serialize {
    fn table(&self) -> String;
    fn csv(&self) -> String;
}

fn emit<R: Report>(args: &OutputArgs, out: &mut dyn Write, report: &R) -> Result<u8, Failure> {
    let text = match args.format {
        Format::Table => report.table(),
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv => report.csv(),
    };
    match &args.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string()))?,
    }
    Ok(EXIT_OK)
}

/// Formats with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=9).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn ids(problem: &Problem, subset: &Subset) -> Vec<String> {
    problem.space.ids_of(subset).map(str::to_string).collect()
}

#[derive(Debug, Serialize)]
pub struct LabelReport {
    pub labels: Vec<LabelRow>,
}

#[derive(Debug, Serialize)]
pub struct LabelRow {
    pub name: String,
    pub profile: Vec<Level>,
    pub atoms: Vec<String>,
    pub depth: usize,
    pub unmatched: bool,
}

fn label(problem: &Problem, profile: Option<&str>) -> Result<LabelReport, Failure> {
    let profiles = match profile {
        Some(p) => vec![(
            "profile".to_string(),
            UnforeseenProfile::new(p.split(',').map(Level::parse_token)),
        )],
        None => problem.unforeseen.clone(),
    };
    let mut labels = Vec::with_capacity(profiles.len());
    for (name, profile) in profiles {
        let l = label_unforeseen(&problem.space, &profile)?;
        labels.push(LabelRow {
            name,
            profile: profile.values().to_vec(),
            atoms: ids(problem, &l.subset),
            depth: l.depth,
            unmatched: l.is_unrecognisable(),
        });
    }
    Ok(LabelReport { labels })
}

impl Report for LabelReport {
    fn table(&self) -> String {
        let mut s = String::new();
        for l in &self.labels {
            let profile: Vec<String> = l.profile.iter().map(Level::to_string).collect();
            let target = if l.unmatched {
                "(unmatched)".to_string()
            } else {
                format!("{{{}}}", l.atoms.join(", "))
            };
            let _ = writeln!(
                s,
                "{}  ({})  ->  {}  depth {}",
                l.name,
                profile.join(","),
                target,
                l.depth
            );
        }
        s
    }

    fn csv(&self) -> String {
        let rows = self.labels.iter().map(|l| {
            let profile: Vec<String> = l.profile.iter().map(Level::to_string).collect();
            vec![
                l.name.clone(),
                profile.join(";"),
                l.atoms.join("+"),
                l.depth.to_string(),
                l.unmatched.to_string(),
            ]
        });
        csv_text(&["name", "profile", "atoms", "depth", "unmatched"], rows)
    }
}

#[derive(Debug, Serialize)]
pub struct RankReport {
    pub method: RankMethod,
    pub epsilon: f64,
    pub ranking: Vec<RankRow>,
    pub tie_groups: Vec<Vec<String>>,
    pub normalized_commonalities: Vec<AtomValue>,
}

#[derive(Debug, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub decision: String,
    pub expected_utility: f64,
}

#[derive(Debug, Serialize)]
pub struct AtomValue {
    pub atom: String,
    pub value: f64,
}

fn rank(problem: &Problem, method: RankMethod, epsilon: f64) -> Result<RankReport, Failure> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Failure::Invalid(format!(
            "epsilon must be a nonnegative number, got {epsilon}"
        )));
    }
    let u = problem
        .utilities
        .as_ref()
        .ok_or_else(|| Failure::Invalid("document has no utilities section".into()))?;
    let mass = problem.assessment.as_ref().map(|a| &a.mass);
    let need_mass =
        || mass.ok_or_else(|| Failure::Invalid("document has no assessment section".into()));

    let ranking: DecisionRanking = match method {
        RankMethod::Eq2 => rank_decisions_with_tolerance(need_mass()?, u, Method::Eq2, epsilon)?,
        RankMethod::Commonality => {
            rank_decisions_with_tolerance(need_mass()?, u, Method::Commonality, epsilon)?
        }
        RankMethod::Eq1Baseline => {
            let probabilities = problem.baseline_probabilities().ok_or_else(|| {
                Failure::Invalid("no baseline section and no assessment to derive one from".into())
            })?;
            rank_eq1(&probabilities, u, epsilon)?
        }
    };
    let normalized_commonalities = match mass {
        Some(mf) => {
            let cn = atom_normalized_commonalities(mf)?;
            problem
                .space
                .atoms()
                .iter()
                .zip(cn.values())
                .map(|(a, &value)| AtomValue {
                    atom: a.id.clone(),
                    value,
                })
                .collect()
        }
        None => Vec::new(),
    };
    Ok(RankReport {
        method,
        epsilon,
        ranking: ranking
            .entries
            .iter()
            .map(|e| RankRow {
                rank: e.rank,
                decision: e.decision.clone(),
                expected_utility: e.expected_utility,
            })
            .collect(),
        tie_groups: ranking
            .tie_groups
            .iter()
            .map(|g| g.iter().map(|&i| u.decisions()[i].clone()).collect())
            .collect(),
        normalized_commonalities,
    })
}

impl Report for RankReport {
    fn table(&self) -> String {
        let method = match self.method {
            RankMethod::Eq2 => "eq2",
            RankMethod::Commonality => "commonality",
            RankMethod::Eq1Baseline => "eq1-baseline",
        };
        let width = self
            .ranking
            .iter()
            .map(|r| r.decision.len())
            .max()
            .unwrap_or(0)
            .max(8);
        let mut s = format!(
            "method: {method}\ntie tolerance: {:e}\n\nranking:\n",
            self.epsilon
        );
        let _ = writeln!(
            s,
            "  {:<4}  {:<width$}  expected utility",
            "rank", "decision"
        );
        for r in &self.ranking {
            let _ = writeln!(
                s,
                "  {:<4}  {:<width$}  {}",
                r.rank,
                r.decision,
                sig6(r.expected_utility)
            );
        }
        s.push_str("tie groups:\n");
        for (g, group) in self.tie_groups.iter().enumerate() {
            let _ = writeln!(s, "  {}: {}", g + 1, group.join(", "));
        }
        if !self.normalized_commonalities.is_empty() {
            s.push_str("\nnormalized commonalities:\n");
            let width = self
                .normalized_commonalities
                .iter()
                .map(|a| a.atom.len())
                .max()
                .unwrap_or(0);
            for a in &self.normalized_commonalities {
                let _ = writeln!(s, "  {:<width$}  {}", a.atom, sig6(a.value));
            }
        }
        s
    }

    fn csv(&self) -> String {
        let rows = self
            .ranking
            .iter()
            .map(|r| vec![r.rank.to_string(), r.decision.clone(), r.expected_utility.to_string()]);
        csv_text(&["rank", "decision", "expected_utility"], rows)
    }
}

#[derive(Debug, Serialize)]
pub struct BoundsReport {
    pub atoms: Vec<String>,
    pub belief: f64,
    pub probability: f64,
    pub plausibility: f64,
    pub sandwich_holds: bool,
}

/// Parses `a+b+c`, `*` (all atoms) or `{}`/`∅`/empty (no atoms).
pub fn parse_subset_expression(problem: &Problem, expression: &str) -> Result<Subset, String> {
    let e = expression.trim();
    match e {
        "" | "{}" | "∅" => return Ok(Subset::empty()),
        "*" => return Ok(Subset::full(problem.space.atom_count())),
        _ => {}
    }
    let tokens: Vec<&str> = e.split('+').map(str::trim).collect();
    if tokens.iter().any(|t| t.is_empty()) {
        return Err(format!("cannot parse subset expression `{expression}`"));
    }
    problem.space.subset_of(tokens).map_err(|e| e.to_string())
}

fn bounds(problem: &Problem, expression: &str) -> Result<BoundsReport, Failure> {
    let mf = &problem
        .assessment
        .as_ref()
        .ok_or_else(|| Failure::Invalid("document has no assessment section".into()))?
        .mass;
    let subset = match parse_subset_expression(problem, expression) {
        Ok(s) => s,
        Err(msg) if msg.starts_with("cannot parse") => return Err(Failure::Io(msg)),
        Err(msg) => return Err(Failure::Invalid(msg)),
    };
    let (bel, pr, pl) = (
        belief(mf, &subset),
        additive_probability(mf, &subset),
        plausibility(mf, &subset),
    );
    Ok(BoundsReport {
        atoms: ids(problem, &subset),
        belief: bel,
        probability: pr,
        plausibility: pl,
        sandwich_holds: bel <= pr + crate::EPS_NUM && pr <= pl + crate::EPS_NUM,
    })
}

impl Report for BoundsReport {
    fn table(&self) -> String {
        format!(
            "subset: {{{}}}\nbelief:        {}\nprobability:   {}\nplausibility:  {}\nbelief <= probability <= plausibility: {}\n",
            self.atoms.join(", "),
            sig6(self.belief),
            sig6(self.probability),
            sig6(self.plausibility),
            if self.sandwich_holds { "holds" } else { "VIOLATED" }
        )
    }

    fn csv(&self) -> String {
        let row = vec![
            self.atoms.join("+"),
            self.belief.to_string(),
            self.probability.to_string(),
            self.plausibility.to_string(),
            self.sandwich_holds.to_string(),
        ];
        csv_text(&["atoms", "belief", "probability", "plausibility", "sandwich_holds"], [row])
    }
}

#[derive(Debug, Serialize)]
pub struct CommonalitiesReport {
    pub atoms: Vec<CommonalityRow>,
    pub normalized_sum: f64,
}

#[derive(Debug, Serialize)]
pub struct CommonalityRow {
    pub atom: String,
    pub normalized: f64,
    pub shafer: f64,
}

fn commonalities(problem: &Problem) -> Result<CommonalitiesReport, Failure> {
    let mf = &problem
        .assessment
        .as_ref()
        .ok_or_else(|| Failure::Invalid("document has no assessment section".into()))?
        .mass;
    let cn = atom_normalized_commonalities(mf)?;
    let c = atom_commonalities(mf);
    Ok(CommonalitiesReport {
        atoms: problem
            .space
            .atoms()
            .iter()
            .zip(cn.values().iter().zip(c.values()))
            .map(|(a, (&normalized, &shafer))| CommonalityRow {
                atom: a.id.clone(),
                normalized,
                shafer,
            })
            .collect(),
        normalized_sum: cn.values().iter().sum(),
    })
}

impl Report for CommonalitiesReport {
    fn table(&self) -> String {
        let width = self
            .atoms
            .iter()
            .map(|a| a.atom.len())
            .max()
            .unwrap_or(0)
            .max(4);
        let mut s = format!("{:<width$}  {:<10}  shafer\n", "atom", "normalized");
        for a in &self.atoms {
            let _ = writeln!(
                s,
                "{:<width$}  {:<10}  {}",
                a.atom,
                sig6(a.normalized),
                sig6(a.shafer)
            );
        }
        let _ = writeln!(s, "{:<width$}  {}", "sum", sig6(self.normalized_sum));
        s
    }

    fn csv(&self) -> String {
        let rows = self
            .atoms
            .iter()
            .map(|a| vec![a.atom.clone(), a.normalized.to_string(), a.shafer.to_string()]);
        csv_text(&["atom", "normalized", "shafer"], rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.7166666666), "0.716667");
        assert_eq!(sig6(0.2833333333), "0.283333");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(123456.78), "123457");
        assert_eq!(sig6(-2.5), "-2.5");
        assert_eq!(sig6(1.5e-7), "1.50000e-7");
    }

    #[test]
    fn csv_quoting() {
        let text = csv_text(&["x", "y"], [vec!["a,b".to_string(), "plain".to_string()]]);
        assert_eq!(text, "x,y\n\"a,b\",plain\n");
    }
}
