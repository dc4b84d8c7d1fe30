//! Reports: one serializable document per invocation, rendered as text by
//! `Display` or as JSON by serde.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Document {
    pub command: &'static str,
    pub exit_code: i32,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Body {
    Check(CheckReport),
    Solve(SolveReport),
    Analyze(AnalyzeReport),
    Refine(RefineReport),
    Bell(BellReport),
    Error(ErrorReport),
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Body::Check(r) => r.fmt(f),
            Body::Solve(r) => r.fmt(f),
            Body::Analyze(r) => r.fmt(f),
            Body::Refine(r) => r.fmt(f),
            Body::Bell(r) => r.fmt(f),
            Body::Error(r) => r.fmt(f),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DiagnosticOut {
    pub severity: &'static str,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub declaration: Option<String>,
}

fn write_diagnostics(
    f: &mut fmt::Formatter<'_>,
    file: &str,
    diags: &[DiagnosticOut],
) -> fmt::Result {
    for d in diags {
        write!(
            f,
            "{file}:{}:{}: {}: {}",
            d.line, d.column, d.severity, d.message
        )?;
        match &d.declaration {
            Some(decl) => writeln!(f, " (in `{decl}`)")?,
            None => writeln!(f)?,
        }
    }
    Ok(())
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("1 {word}")
    } else {
        format!("{n} {word}s")
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub file: String,
    pub declarations: usize,
    pub diagnostics: Vec<DiagnosticOut>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_diagnostics(f, &self.file, &self.diagnostics)?;
        let errors = self
            .diagnostics
            .iter()
            .filter(|d| d.severity == "error")
            .count();
        let warnings = self.diagnostics.len() - errors;
        if self.diagnostics.is_empty() {
            writeln!(f, "{}: ok ({} declarations)", self.file, self.declarations)
        } else {
            writeln!(
                f,
                "{}: {}, {}",
                self.file,
                plural(errors, "error"),
                plural(warnings, "warning")
            )
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Trace {
    pub start: String,
    pub states: Vec<String>,
    /// Block of the final state, when solving on a quotient.
    pub block: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ConflictOut {
    pub generator: String,
    pub block: String,
    pub witnesses: [String; 2],
    pub images: [String; 2],
    pub image_blocks: [String; 2],
    pub conflicting_blocks: usize,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    Unsolvable,
    TransferFailure,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub file: String,
    pub problem: String,
    /// Present when solving on a quotient.
    pub quotient: Option<QuotientOut>,
    pub max_depth: usize,
    pub status: SolveStatus,
    pub plan: Option<Vec<String>>,
    pub traces: Vec<Trace>,
    /// Set when unsolvable: whether every reachable node was expanded.
    pub exhausted: Option<bool>,
    pub conflicts: Vec<ConflictOut>,
}

#[derive(Debug, Serialize)]
pub struct QuotientOut {
    pub evaluator: String,
    pub outset_block: String,
    pub goal_block: String,
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "problem {}", self.problem)?;
        if let Some(q) = &self.quotient {
            write!(
                f,
                " on {} ({} -> {})",
                q.evaluator, q.outset_block, q.goal_block
            )?;
        }
        writeln!(f)?;
        match self.status {
            SolveStatus::Solved => {
                let plan = self.plan.as_deref().unwrap_or_default();
                if plan.is_empty() {
                    writeln!(f, "plan: (empty)")?;
                } else {
                    writeln!(f, "plan: {}", plan.join(" "))?;
                }
                for t in &self.traces {
                    write!(f, "  {}", t.states.join(" -> "))?;
                    match &t.block {
                        Some(b) => writeln!(f, "  [{b}]")?,
                        None => writeln!(f)?,
                    }
                }
                Ok(())
            }
            SolveStatus::Unsolvable if self.exhausted == Some(true) => {
                writeln!(f, "UNSOLVABLE (search exhausted)")
            }
            SolveStatus::Unsolvable => {
                writeln!(f, "UNSOLVABLE (no plan within depth {})", self.max_depth)
            }
            SolveStatus::TransferFailure => {
                writeln!(f, "TRANSFER FAILURE")?;
                for c in &self.conflicts {
                    writeln!(
                        f,
                        "  `{}` conflicts in block {}: {} -> {} ({}) but {} -> {} ({})",
                        c.generator,
                        c.block,
                        c.witnesses[0],
                        c.images[0],
                        c.image_blocks[0],
                        c.witnesses[1],
                        c.images[1],
                        c.image_blocks[1]
                    )?;
                }
                Ok(())
            }
        }
    }
}

/// One analysis result; `holds` is the yes/no answer and `detail` the reason
/// or witness, if any.
#[derive(Debug, Serialize)]
pub struct Finding {
    pub check: &'static str,
    pub subject: Vec<String>,
    pub holds: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CanonicalOut {
    pub category: String,
    pub generators: Vec<String>,
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub file: String,
    pub findings: Vec<Finding>,
    pub canonical: Option<CanonicalOut>,
}

impl fmt::Display for AnalyzeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.findings {
            let answer = if x.holds { "yes" } else { "no" };
            write!(f, "{}: {answer}", x.check)?;
            match &x.detail {
                Some(d) => writeln!(f, " ({d})")?,
                None => writeln!(f)?,
            }
        }
        if let Some(c) = &self.canonical {
            writeln!(
                f,
                "canonical set of {} ({} generators):",
                c.category,
                c.generators.len()
            )?;
            write!(f, "{}", c.text)?;
        }
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct RefineReport {
    pub file: String,
    pub relation: String,
    pub states: usize,
    pub multi_valued: Vec<String>,
    pub verified: bool,
    pub out: Option<String>,
    pub text: String,
}

impl fmt::Display for RefineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.verified {
            return writeln!(
                f,
                "refinement of `{}` failed verification; nothing written",
                self.relation
            );
        }
        match &self.out {
            Some(path) => writeln!(
                f,
                "refined `{}` into {} states (verified); wrote {path}",
                self.relation, self.states
            ),
            None => write!(f, "{}", self.text),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BellReport {
    pub n: usize,
    /// Decimal digits; exceeds every machine integer for large `n`.
    pub value: String,
}

impl fmt::Display for BellReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.value)
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: String,
    pub file: Option<String>,
    pub diagnostics: Vec<DiagnosticOut>,
}

impl fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write_diagnostics(f, file, &self.diagnostics)?;
        }
        writeln!(f, "error: {}", self.error)
    }
}
