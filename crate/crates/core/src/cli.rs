//! The `descent-kit` command line.
//!
//! Exit codes: 0 when the evaluation ran (whatever the verdict), 1 for an
//! input that parses but violates an invariant, 2 for unreadable or
//! malformed input, 3 when an enumeration exceeds its budget.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::doc::{FamilyDoc, FincatDoc, FunctorDoc, LatticeDoc, OrdinaryFunctorDoc};
use crate::fam_thin::{self, FamError, ThinFamily};
use crate::fincat::{self, lattice_as_category, FincatError, GeneralFamily};
use crate::finset::{self, FinsetError, OracleBounds};
use crate::lattice::{detect_heyting, meet_distributes_over_family, FiniteLattice};
use crate::report::{Metadata, Report};
use crate::vcat_thin::{self, ThinVCategory, ThinVFunctor, VcatError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "descent-kit", version, about = "Check epimorphism and effective descent classes on finite inputs")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Also run the brute-force oracles.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Cap on enumerated candidates.
    #[arg(long, default_value_t = fam_thin::DEFAULT_BUDGET, global = true)]
    pub budget: u64,
    /// Use a builtin corpus lattice where the input has none.
    #[arg(long, global = true, value_name = "NAME")]
    pub corpus: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice validation, Heyting detection, distributivity.
    Lattice {
        #[command(subcommand)]
        action: LatticeCmd,
    },
    /// Families (X_i) <= Y over a lattice.
    Fam {
        #[command(subcommand)]
        action: FamCmd,
    },
    /// Lattice-enriched functors.
    Vcat {
        #[command(subcommand)]
        action: VcatCmd,
    },
    /// Families in an explicit finite category.
    Fincat {
        #[command(subcommand)]
        action: FincatCmd,
    },
    /// Functors between ordinary finite categories.
    Finset {
        #[command(subcommand)]
        action: FinsetCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    Info { path: Option<PathBuf> },
}

#[derive(Debug, Subcommand)]
pub enum FamCmd {
    Classify { path: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum VcatCmd {
    Check { path: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum FincatCmd {
    Regepi { path: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum FinsetCmd {
    Check { path: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Parse { .. } => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<FamError> for CliError {
    fn from(e: FamError) -> Self {
        match e {
            FamError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<VcatError> for CliError {
    fn from(e: VcatError) -> Self {
        match e {
            VcatError::Fam(f) => f.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<FincatError> for CliError {
    fn from(e: FincatError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<FinsetError> for CliError {
    fn from(e: FinsetError) -> Self {
        match e {
            FinsetError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse { path: shown.clone(), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: shown,
        message: format!("line {}, column {}: {e}", e.line(), e.column()),
    })
}

impl GlobalOpts {
    fn metadata(&self) -> Metadata {
        Metadata { budget: self.budget, oracle: self.oracle }
    }

    fn lattice(&self, doc: Option<&LatticeDoc>) -> Result<FiniteLattice, CliError> {
        match (doc, &self.corpus) {
            (Some(d), _) => d.build().map_err(CliError::Validation),
            (None, Some(name)) => LatticeDoc::Name(name.clone()).build().map_err(CliError::Validation),
            (None, None) => Err(CliError::Validation("no lattice given (use a `lattice` field or --corpus)".into())),
        }
    }
}

/// Runs one parsed invocation and returns its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Lattice { action: LatticeCmd::Info { path } } => {
            let (lat, input) = match path {
                Some(p) => (opts.lattice(Some(&read_doc::<LatticeDoc>(p)?))?, p.display().to_string()),
                None => (opts.lattice(None)?, format!("corpus:{}", opts.corpus.as_deref().unwrap_or(""))),
            };
            Ok(lattice_info(&lat, &input, opts))
        }
        Command::Fam { action: FamCmd::Classify { path } } => {
            let doc: FamilyDoc = read_doc(path)?;
            let lat = opts.lattice(doc.lattice.as_ref())?;
            fam_classify(&lat, &doc, &path.display().to_string(), opts)
        }
        Command::Vcat { action: VcatCmd::Check { path } } => {
            let doc: FunctorDoc = read_doc(path)?;
            let lat = opts.lattice(doc.lattice.as_ref())?;
            vcat_check(&lat, &doc, &path.display().to_string(), opts)
        }
        Command::Fincat { action: FincatCmd::Regepi { path } } => {
            let doc: FincatDoc = read_doc(path)?;
            fincat_regepi(&doc, &path.display().to_string(), opts)
        }
        Command::Finset { action: FinsetCmd::Check { path } } => {
            let doc: OrdinaryFunctorDoc = read_doc(path)?;
            finset_check(&doc, &path.display().to_string(), opts)
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    }
}

/// Parses `args`, runs the command, and returns the exit code together with
/// what belongs on standard output and standard error.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, if code == 0 { e.to_string() } else { String::new() }, if code == 0 { String::new() } else { e.to_string() });
        }
    };
    match execute(&cli) {
        Ok(report) => (0, render(&report, cli.opts.format), String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}

#[derive(Serialize)]
struct NonDistributive {
    z: usize,
    a: usize,
    b: usize,
}

pub fn lattice_info(lat: &FiniteLattice, input: &str, opts: &GlobalOpts) -> Report {
    let mut r = Report::new("lattice info", input, opts.metadata());
    let heyting = detect_heyting(lat);
    let n = lat.size();
    r.flag("lattice", true).flag("heyting", heyting.is_some()).flag("distributive", lat.is_distributive());
    r.value("size", n).value("bottom", lat.bottom()).value("top", lat.top());
    r.value("meet", lat.meet_table()).value("join", lat.join_table());
    match &heyting {
        Some(h) => {
            r.value("implication", h.table());
        }
        None => {
            let missing = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .find(|&(a, b)| {
                    let set: Vec<_> = lat.elements().filter(|&c| lat.leq(lat.meet(c, a), b)).collect();
                    !set.iter().any(|&m| set.iter().all(|&c| lat.leq(c, m)))
                });
            if let Some((a, b)) = missing {
                r.witness("heyting", serde_json::json!({ "a": a, "b": b }));
            }
        }
    }
    let failure = (0..n)
        .flat_map(|z| (0..n).flat_map(move |a| (0..n).map(move |b| NonDistributive { z, a, b })))
        .find(|t| !meet_distributes_over_family(lat, t.z, &[t.a, t.b]));
    if let Some(t) = failure {
        r.witness("distributive", t);
    }
    r
}

pub fn fam_classify(lat: &FiniteLattice, doc: &FamilyDoc, input: &str, opts: &GlobalOpts) -> Result<Report, CliError> {
    let fam = ThinFamily::new(lat, doc.codomain, doc.members.clone())?;
    let c = fam_thin::classify(&fam);
    let mut r = Report::new("fam classify", input, opts.metadata());
    r.flag("is_epi", c.is_epi)
        .flag("is_stable_epi", c.is_stable_epi)
        .flag("is_regular_epi", c.is_regular_epi)
        .flag("is_stable_regular_epi", c.is_stable_regular_epi);
    r.value("join", lat.join_family(fam.members())).value("kernel_matrix", fam_thin::kernel_matrix(&fam));
    if let Some(z) = c.stability_counterexample {
        r.witness("stable_regular_epi", serde_json::json!({ "z": z }));
    }
    if opts.oracle {
        let v = fam_thin::is_effective_descent(&fam, opts.budget)?;
        r.flag("effective_descent", v.effective).value("descent_data_count", v.data_count);
        if let Some(w) = v.witness {
            r.witness("effective_descent", w);
        }
    }
    Ok(r)
}

pub fn vcat_check(lat: &FiniteLattice, doc: &FunctorDoc, input: &str, opts: &GlobalOpts) -> Result<Report, CliError> {
    let source = ThinVCategory::new(lat, doc.source_hom.clone())?;
    let target = ThinVCategory::new(lat, doc.target_hom.clone())?;
    let f = ThinVFunctor::new(source, target, doc.map.clone())?;
    let report = vcat_thin::check_conditions(&f, opts.budget)?;
    let mut r = Report::new("vcat check", input, opts.metadata());
    r.verdict = Some(report.verdict);
    r.flag("surjective_on_objects", report.surjective_on_objects)
        .flag("heyting", report.heyting)
        .flag("star_quotient", report.star_quotient)
        .flag("cond_i", report.cond_i)
        .flag("cond_ii", report.cond_ii)
        .flag("cond_iii", report.cond_iii);
    if let Some(w) = &report.star_quotient_witness {
        r.witness("star_quotient", w);
    }
    for w in &report.witnesses {
        let name = match w {
            vcat_thin::ConditionWitness::HomObjects { .. } => "cond_i",
            vcat_thin::ConditionWitness::ComposablePairs { .. } => "cond_ii",
            vcat_thin::ConditionWitness::ComposableTriples { .. } => "cond_iii",
        };
        r.witness(name, w);
    }
    Ok(r)
}

pub fn fincat_regepi(doc: &FincatDoc, input: &str, opts: &GlobalOpts) -> Result<Report, CliError> {
    let lattice = match (&doc.category, &doc.lattice) {
        (Some(_), None) => None,
        (None, lat) => Some(opts.lattice(lat.as_ref())?),
        (Some(_), Some(_)) => return Err(CliError::Validation("give either `category` or `lattice`, not both".into())),
    };
    let cat = match (&doc.category, &lattice) {
        (Some(c), _) => c.build().map_err(CliError::Validation)?,
        (None, Some(lat)) => lattice_as_category(lat),
        (None, None) => unreachable!(),
    };
    let fam = match (&doc.legs, &doc.members, &lattice) {
        (Some(legs), None, _) => GeneralFamily::new(&cat, doc.codomain, legs.clone())?,
        (None, Some(members), Some(_)) => GeneralFamily::from_thin(&cat, doc.codomain, members)?,
        _ => return Err(CliError::Validation("give `legs` (morphisms), or `members` with a lattice".into())),
    };
    let regular = fincat::is_regular_epi(&fam)?;
    let stable = fincat::is_stable_regular_epi(&fam)?;
    let mut r = Report::new("fincat regepi", input, opts.metadata());
    r.flag("is_regular_epi", regular).flag("is_stable_regular_epi", stable.holds);
    if let Some(omega) = stable.counterexample {
        r.witness(
            "stable_regular_epi",
            serde_json::json!({ "omega": omega, "source": cat.source(omega), "target": cat.target(omega) }),
        );
    }
    if opts.oracle {
        if let (Some(lat), Some(members)) = (&lattice, &doc.members) {
            let thin = fam_thin::classify(&ThinFamily::new(lat, doc.codomain, members.clone())?);
            r.flag(
                "agrees_with_thin_classifier",
                thin.is_regular_epi == regular && thin.is_stable_regular_epi == stable.holds,
            );
        } else {
            r.note("--oracle cross-checks lattice inputs only");
        }
    }
    Ok(r)
}

pub fn finset_check(doc: &OrdinaryFunctorDoc, input: &str, opts: &GlobalOpts) -> Result<Report, CliError> {
    let f = doc.build().map_err(CliError::Validation)?;
    let report = finset::check_effective_descent_finset(&f);
    let mut r = Report::new("finset check", input, opts.metadata());
    r.verdict = Some(report.verdict);
    r.flag("surjective_on_objects", report.surjective_on_objects)
        .flag("condition_i", report.condition_i)
        .flag("condition_ii", report.condition_ii)
        .flag("condition_iii", report.condition_iii)
        .flag("condition_iv", report.condition_iv);
    for w in &report.witnesses {
        let name = match w {
            finset::FinsetWitness::EmptyIndex { condition, .. } | finset::FinsetWitness::Uncovered { condition, .. } => {
                format!("condition_{condition}")
            }
        };
        r.witness(&name, w);
    }
    for note in &report.notes {
        r.note(note.clone());
    }
    if opts.oracle {
        let covers = finset::build_mono_covers(&f);
        let mut oracle_all = true;
        for c in &covers.homs {
            let v = finset::oracle_condition_ii(&c.cover, OracleBounds::default())?;
            if !v.holds {
                oracle_all = false;
                if let Some(w) = v.witness {
                    r.witness("oracle_condition_ii", serde_json::json!({ "objects": c.objects, "witness": w }));
                }
                break;
            }
        }
        r.flag("oracle_condition_ii", oracle_all).flag("oracle_agrees", oracle_all == report.condition_ii);
    }
    Ok(r)
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let (code, out, err) = run(std::env::args_os());
    print!("{out}");
    eprint!("{err}");
    code
}
