//! Command-line front end. Every command prints a deterministic text report
//! and can also write it as JSON with `--report`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::brauer::{BrauerGroup, DEFAULT_ENUMERATION_LIMIT};
use crate::coefficients::RealCoefficient;
use crate::cohomology::{circle_cohomology, cohomology_bounded, fold_double, hr0_by_orbits, DEFAULT_MAX_DEGREE};
use crate::error::{Error, Result};
use crate::extension::{ExtensionContext, ExtensionInput};
use crate::groupoid::{GroupoidDescription, RealGroupoid};
use crate::invariants::CohomologyGroup;
use crate::oracle::{
    brute_force_circle_torsion, brute_force_cohomology, circle_torsion_modulus, m_torsion, DEFAULT_BUDGET,
};
use crate::types::{classify_type, type_table, GradedRealAlgebraModel, TypeIndex};

#[derive(Parser, Debug)]
#[command(
    name = "realbrauer",
    version,
    about = "Real groupoid cohomology and Real graded Brauer groups"
)]
struct Cli {
    /// Also write the report as JSON to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GroupoidArg {
    /// Groupoid description (JSON).
    #[arg(long)]
    groupoid: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a groupoid description and print its shape.
    Validate(GroupoidArg),
    /// Print the nerve up to a degree.
    Nerve {
        #[command(flatten)]
        g: GroupoidArg,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// List every simplex with its conjugate.
        #[arg(long)]
        list: bool,
    },
    /// Compute HR^n(G, A).
    Cohomology {
        #[command(flatten)]
        g: GroupoidArg,
        /// Coefficient literal: Z2, Z8, Z, Z(0,1), Zm(m,+1), Zm(m,-1), S1.
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        degree: usize,
        /// Cross-check with the brute-force oracle.
        #[arg(long)]
        oracle: bool,
        /// Oracle budget in enumerated cochains plus search nodes.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Highest degree the cochain complex is built for.
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// The Real graded Brauer group.
    Brauer {
        #[command(flatten)]
        g: GroupoidArg,
        /// Print the group table.
        #[arg(long)]
        table: bool,
        /// Largest group order to enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit: u64,
    },
    /// Graded extensions at cocycle level.
    Ext {
        #[command(subcommand)]
        op: ExtOp,
    },
    /// Types of Real graded elementary algebras.
    Types {
        #[command(subcommand)]
        op: TypesOp,
    },
    /// Compare HR^n of the swap double of H with ordinary H^n(H, A).
    Fold {
        #[command(flatten)]
        g: GroupoidArg,
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ExtOp {
    /// Product of two extensions.
    Mul {
        #[command(flatten)]
        g: GroupoidArg,
        /// Two extension files.
        #[arg(long = "in", num_args = 1..=2, required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Inverse of an extension.
    Inv {
        #[command(flatten)]
        g: GroupoidArg,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum TypesOp {
    /// Classify all 64 graded tensor products of the reference models.
    Table,
    /// Classify a model file.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// A command's report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub command: String,
    /// `sha256:` of the input file contents and parameters.
    pub fingerprint: String,
    pub results: BTreeMap<String, Value>,
    pub oracle: Option<String>,
    pub warnings: Vec<String>,
    pub lines: Vec<String>,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn result(&mut self, key: &str, v: impl Serialize) {
        self.results
            .insert(key.to_string(), serde_json::to_value(v).expect("results serialize"));
    }

    /// The text form printed on standard output.
    pub fn text(&self) -> String {
        let mut s = format!("# {}\n# input {}\n", self.command, self.fingerprint);
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        if let Some(o) = &self.oracle {
            s.push_str(&format!("oracle: {o}\n"));
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}

struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new(command: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        Inputs { hasher }
    }

    fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    fn param(&mut self, name: &str, value: impl ToString) {
        self.hasher.update(format!("\0{name}={}", value.to_string()).as_bytes());
    }

    fn groupoid(&mut self, path: &Path) -> Result<(GroupoidDescription, RealGroupoid)> {
        let d = GroupoidDescription::from_json_str(&self.read(path)?)?;
        let g = d.build()?;
        Ok((d, g))
    }

    fn fingerprint(self) -> String {
        format!("sha256:{}", hex::encode(self.hasher.finalize()))
    }
}

/// Parses `args` (including the program name), runs the command, prints the
/// report to `out` and errors to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let mut report = Report::default();
    let outcome = execute(&cli.command, &mut report);
    let _ = write!(out, "{}", report.text());
    // The report is written even when the command fails, so mismatches are recorded.
    let written = match &cli.report {
        Some(path) => serde_json::to_string_pretty(&report)
            .map_err(Error::from)
            .and_then(|body| {
                std::fs::write(path, body + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
            }),
        None => Ok(()),
    };
    let outcome = outcome.and(written);
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, report: &mut Report) -> Result<()> {
    match command {
        Command::Validate(g) => {
            let mut inputs = Inputs::new("validate");
            report.command = format!("validate --groupoid {}", g.groupoid.display());
            let result = inputs.groupoid(&g.groupoid);
            report.fingerprint = inputs.fingerprint();
            let (_, g) = result?;
            validate(&g, report);
            Ok(())
        }
        Command::Nerve { g, degree, list } => {
            let mut inputs = Inputs::new("nerve");
            inputs.param("degree", degree);
            report.command = format!("nerve --groupoid {} --degree {degree}", g.groupoid.display());
            let result = inputs.groupoid(&g.groupoid);
            report.fingerprint = inputs.fingerprint();
            nerve(&result?.1, *degree, *list, report);
            Ok(())
        }
        Command::Cohomology {
            g,
            coeff,
            degree,
            oracle,
            budget,
            max_degree,
        } => {
            let mut inputs = Inputs::new("cohomology");
            inputs.param("coeff", coeff);
            inputs.param("degree", degree);
            report.command = format!(
                "cohomology --groupoid {} --coeff {coeff} --degree {degree}{}",
                g.groupoid.display(),
                if *oracle { " --oracle" } else { "" }
            );
            let result = inputs.groupoid(&g.groupoid);
            report.fingerprint = inputs.fingerprint();
            let (_, g) = result?;
            let a = RealCoefficient::parse(coeff)?;
            cohomology_command(&g, &a, *degree, *oracle, *budget, *max_degree, report)
        }
        Command::Brauer { g, table, limit } => {
            let mut inputs = Inputs::new("brauer");
            report.command = format!(
                "brauer --groupoid {}{}",
                g.groupoid.display(),
                if *table { " --table" } else { "" }
            );
            let result = inputs.groupoid(&g.groupoid);
            report.fingerprint = inputs.fingerprint();
            brauer(&result?.1, *table, *limit, report)
        }
        Command::Ext { op } => {
            let (g, files, name) = match op {
                ExtOp::Mul { g, inputs } => (g, inputs.clone(), "mul"),
                ExtOp::Inv { g, input } => (g, vec![input.clone()], "inv"),
            };
            let mut inputs = Inputs::new(&format!("ext {name}"));
            let names: Vec<String> = files.iter().map(|f| f.display().to_string()).collect();
            report.command = format!(
                "ext {name} --groupoid {} --in {}",
                g.groupoid.display(),
                names.join(" ")
            );
            let groupoid = inputs.groupoid(&g.groupoid);
            let texts: Vec<Result<String>> = files.iter().map(|f| inputs.read(f)).collect();
            report.fingerprint = inputs.fingerprint();
            let (_, groupoid) = groupoid?;
            let parsed = texts
                .into_iter()
                .map(|t| Ok(serde_json::from_str::<ExtensionInput>(&t?)?))
                .collect::<Result<Vec<_>>>()?;
            ext(&groupoid, &parsed, name == "inv", report)
        }
        Command::Types { op } => match op {
            TypesOp::Table => {
                report.command = "types table".into();
                report.fingerprint = Inputs::new("types table").fingerprint();
                types_table(report)
            }
            TypesOp::Classify { input } => {
                let mut inputs = Inputs::new("types classify");
                report.command = format!("types classify --in {}", input.display());
                let text = inputs.read(input);
                report.fingerprint = inputs.fingerprint();
                let model: GradedRealAlgebraModel = serde_json::from_str(&text?).map_err(|e| {
                    if e.is_data() {
                        Error::InvalidModel(e.to_string())
                    } else {
                        Error::Parse(e.to_string())
                    }
                })?;
                let t = classify_type(&model)?;
                report.line(format!("type = {t}"));
                report.result("type", t.value());
                report.result("descriptor", t.descriptor().to_string());
                Ok(())
            }
        },
        Command::Fold { g, coeff, degree } => {
            let mut inputs = Inputs::new("fold");
            inputs.param("coeff", coeff);
            inputs.param("degree", degree);
            report.command = format!(
                "fold --groupoid {} --coeff {coeff} --degree {degree}",
                g.groupoid.display()
            );
            let result = inputs.groupoid(&g.groupoid);
            report.fingerprint = inputs.fingerprint();
            let (_, h) = result?;
            let a = RealCoefficient::parse(coeff)?;
            fold(&h, &a, *degree, report)
        }
    }
}

fn validate(g: &RealGroupoid, report: &mut Report) {
    let fixed = (0..g.object_count()).filter(|&x| g.bar_object(x) == x).count();
    let mut comps = g.components();
    comps.sort_unstable();
    comps.dedup();
    report.line(format!("objects = {}", g.object_count()));
    report.line(format!("arrows = {}", g.arrow_count()));
    report.line(format!("fixed objects = {fixed}"));
    report.line(format!("components = {}", comps.len()));
    report.line(format!(
        "involution = {}",
        if g.has_trivial_involution() {
            "trivial"
        } else {
            "nontrivial"
        }
    ));
    report.line("valid");
    report.result("objects", g.object_count());
    report.result("arrows", g.arrow_count());
    report.result("fixed_objects", fixed);
    report.result("components", comps.len());
}

fn nerve(g: &RealGroupoid, degree: usize, list: bool, report: &mut Report) {
    let mut levels = Vec::new();
    for n in 0..=degree {
        let level = g.nerve(n);
        let fixed = (0..level.len()).filter(|&i| level.is_fixed(i)).count();
        let free = (level.len() - fixed) / 2;
        report.line(format!(
            "N_{n}: {} simplices, {fixed} fixed, {free} free orbits",
            level.len()
        ));
        if list {
            for (i, s) in level.simplices.iter().enumerate() {
                let bar = &level.simplices[level.involution[i]];
                report.line(format!("  {i}: {s:?} -> {bar:?}"));
            }
        }
        levels.push(json!({ "simplices": level.len(), "fixed": fixed, "free_orbits": free }));
    }
    report.result("levels", levels);
}

fn cohomology_command(
    g: &RealGroupoid,
    a: &RealCoefficient,
    n: usize,
    oracle: bool,
    budget: u64,
    max_degree: usize,
    report: &mut Report,
) -> Result<()> {
    let h = if a.is_circle() {
        circle_cohomology(g, n)?
    } else {
        cohomology_bounded(g, n, a, max_degree)?
    };
    report.line(format!("HR^{n} = {h}"));
    report.result("degree", n);
    report.result("coefficient", a.name());
    report.result("group", &h);
    if !oracle {
        return Ok(());
    }
    let mut checks = Vec::new();
    if a.is_circle() {
        let m = circle_torsion_modulus(g);
        let brute = brute_force_circle_torsion(g, n, budget)?;
        let expected = m_torsion(&h, m);
        if brute != expected {
            report.oracle = Some("MISMATCH".into());
            return Err(Error::OracleMismatch(format!(
                "HR^{n}[{m}] is {expected} from the dual route but {brute} by brute force"
            )));
        }
        checks.push(format!("brute-force {m}-torsion {brute}"));
    } else if a.is_finite() {
        let brute = brute_force_cohomology(g, n, a, budget)?;
        if h.as_discrete() != Some(&brute) {
            report.oracle = Some("MISMATCH".into());
            return Err(Error::OracleMismatch(format!(
                "HR^{n} is {h} by Smith normal form but {brute} by brute force"
            )));
        }
        checks.push("brute force".into());
    }
    if n == 0 {
        let orbits = hr0_by_orbits(g, a)?;
        if orbits != h {
            report.oracle = Some("MISMATCH".into());
            return Err(Error::OracleMismatch(format!(
                "HR^0 is {h} but invariant functions give {orbits}"
            )));
        }
        checks.push("invariant functions".into());
    }
    report.oracle = Some(if checks.is_empty() {
        "not available for infinite coefficients".into()
    } else {
        format!("OK ({})", checks.join(", "))
    });
    report.result("oracle_checks", checks);
    Ok(())
}

fn brauer(g: &RealGroupoid, table: bool, limit: u64, report: &mut Report) -> Result<()> {
    let group = BrauerGroup::new(g)?;
    let r = group.report(g, limit)?;
    report.line(format!("type component HR^0(Z8) = {}", r.type_component));
    report.line(format!("grading component HR^1(Z2) = {}", r.grading_component));
    report.line(format!("circle component HR^2(S1) = {}", r.circle_component));
    match r.total_order {
        Some(o) => report.line(format!("total order = {o}")),
        None => report.line("total order = infinite"),
    }
    if let Some(e) = &r.extension_invariants {
        let split = match r.extension_splits {
            Some(true) => " (split)",
            Some(false) => " (non-split)",
            None => "",
        };
        report.line(format!("extension group = {e}{split}"));
    }
    if let Some(all) = &r.group_invariants {
        report.line(format!("group = {all}"));
        report.line(format!("cyclic = {}", if all.is_cyclic() { "yes" } else { "no" }));
    }
    report.warnings.extend(r.warnings.iter().cloned());
    if table {
        let (elems, rows) = group.cayley_table(limit)?;
        report.line("elements:");
        for (i, e) in elems.iter().enumerate() {
            report.line(format!("  {i}: {}", e.label()));
        }
        report.line("table:");
        for row in &rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            report.line(format!("  {}", cells.join(" ")));
        }
        report.result("table", &rows);
        report.result("elements", elems.iter().map(|e| e.label()).collect::<Vec<_>>());
    }
    report.result("brauer", &r);
    Ok(())
}

fn ext(g: &RealGroupoid, parsed: &[ExtensionInput], inverse: bool, report: &mut Report) -> Result<()> {
    let ctx = ExtensionContext::new(g)?;
    let elems = parsed.iter().map(|p| ctx.from_input(p)).collect::<Result<Vec<_>>>()?;
    let result = match elems.as_slice() {
        [a, b] => ctx.multiply(a, b)?,
        [a] if inverse => ctx.inverse(a)?,
        _ => return Err(Error::Parse("`ext mul` takes two extension files".into())),
    };
    for (i, e) in elems.iter().enumerate() {
        report.line(format!("input {i} class = {}", ctx.normal_form(e)?.label()));
    }
    let nf = ctx.normal_form(&result)?;
    let cochain = ctx.to_input(&result);
    report.line(format!("result = {}", serde_json::to_string(&cochain)?));
    report.line(format!("result class = {}", nf.label()));
    report.result("result", &cochain);
    report.result("class", nf.label());
    Ok(())
}

fn types_table(report: &mut Report) -> Result<()> {
    let table = type_table()?;
    report.line("    | 0 1 2 3 4 5 6 7");
    report.line("  --+----------------");
    let mut ok = true;
    let mut rows = Vec::new();
    for (p, row) in table.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|t| t.value().to_string()).collect();
        report.line(format!("  {p} | {}", cells.join(" ")));
        for (q, t) in row.iter().enumerate() {
            ok &= *t == TypeIndex::new((p + q) as i64);
        }
        rows.push(row.iter().map(|t| t.value()).collect::<Vec<_>>());
    }
    report.line(format!("equals addition mod 8 = {}", if ok { "yes" } else { "no" }));
    report.result("table", rows);
    report.result("equals_addition", ok);
    if !ok {
        return Err(Error::Mismatch("graded tensor products do not add types".into()));
    }
    Ok(())
}

fn fold(h: &RealGroupoid, a: &RealCoefficient, n: usize, report: &mut Report) -> Result<()> {
    let double = RealGroupoid::swap_double(h)?;
    let real = match cohomology_bounded(&double, n, a, DEFAULT_MAX_DEGREE)? {
        CohomologyGroup::FinitelyGenerated(x) => x,
        other => return Err(Error::Unsupported(format!("unexpected compact group {other}"))),
    };
    let plain = fold_double(h, n, a)?;
    report.line(format!("HR^{n}(swap double) = {real}"));
    report.line(format!("H^{n} = {plain}"));
    report.result("real", &real);
    report.result("ordinary", &plain);
    if real != plain {
        report.oracle = Some("MISMATCH".into());
        return Err(Error::OracleMismatch(format!(
            "folding fails: HR^{n} of the double is {real} but H^{n} is {plain}"
        )));
    }
    report.oracle = Some("OK (folding)".into());
    Ok(())
}
