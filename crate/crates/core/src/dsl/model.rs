use std::fmt;

/// Source position (1-based). Ignored by equality so that models compare
/// structurally.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Loc {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Loc {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub loc: Loc,
}

impl Name {
    pub fn new(text: impl Into<String>) -> Self {
        Name {
            text: text.into(),
            loc: Loc::default(),
        }
    }

    pub fn at(text: impl Into<String>, loc: Loc) -> Self {
        Name {
            text: text.into(),
            loc,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryDecl {
    pub name: Name,
    pub states: Vec<Name>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorDecl {
    pub name: Name,
    pub over: Name,
    pub mappings: Vec<(Name, Name)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatorDecl {
    pub name: Name,
    pub over: Name,
    pub blocks: Vec<(Name, Vec<Name>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDecl {
    pub label: Name,
    pub target: Name,
    pub probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationDecl {
    pub name: Name,
    pub over: Name,
    pub entries: Vec<(Name, Vec<OutcomeDecl>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionDecl {
    pub name: Name,
    pub over: Name,
    pub deterministic: bool,
    pub entries: Vec<(Name, Vec<Name>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDecl {
    pub name: Name,
    pub over: Name,
    pub outset: Vec<Name>,
    pub goal: Vec<Name>,
    pub using: Vec<Name>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeclKind {
    Category,
    Generator,
    Evaluator,
    Relation,
    Transition,
    Problem,
}

impl DeclKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DeclKind::Category => "category",
            DeclKind::Generator => "generator",
            DeclKind::Evaluator => "evaluator",
            DeclKind::Relation => "relation",
            DeclKind::Transition => "transition",
            DeclKind::Problem => "problem",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    Category(CategoryDecl),
    Generator(GeneratorDecl),
    Evaluator(EvaluatorDecl),
    Relation(RelationDecl),
    Transition(TransitionDecl),
    Problem(ProblemDecl),
}

impl Decl {
    pub fn kind(&self) -> DeclKind {
        match self {
            Decl::Category(_) => DeclKind::Category,
            Decl::Generator(_) => DeclKind::Generator,
            Decl::Evaluator(_) => DeclKind::Evaluator,
            Decl::Relation(_) => DeclKind::Relation,
            Decl::Transition(_) => DeclKind::Transition,
            Decl::Problem(_) => DeclKind::Problem,
        }
    }

    pub fn name(&self) -> &Name {
        match self {
            Decl::Category(d) => &d.name,
            Decl::Generator(d) => &d.name,
            Decl::Evaluator(d) => &d.name,
            Decl::Relation(d) => &d.name,
            Decl::Transition(d) => &d.name,
            Decl::Problem(d) => &d.name,
        }
    }

    /// The category a non-category declaration is over.
    pub fn over(&self) -> Option<&Name> {
        match self {
            Decl::Category(_) => None,
            Decl::Generator(d) => Some(&d.over),
            Decl::Evaluator(d) => Some(&d.over),
            Decl::Relation(d) => Some(&d.over),
            Decl::Transition(d) => Some(&d.over),
            Decl::Problem(d) => Some(&d.over),
        }
    }
}

/// A parsed `.ccs` file: declarations in source order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Model {
    pub decls: Vec<Decl>,
}

impl Model {
    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn find(&self, kind: DeclKind, name: &str) -> Option<&Decl> {
        self.decls
            .iter()
            .find(|d| d.kind() == kind && d.name().text == name)
    }

    pub fn names(&self, kind: DeclKind) -> impl Iterator<Item = &str> {
        self.decls
            .iter()
            .filter(move |d| d.kind() == kind)
            .map(|d| d.name().as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub decl: Option<String>,
}

impl Diagnostic {
    pub fn error(loc: Loc, message: impl Into<String>, decl: Option<&str>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            line: loc.line,
            column: loc.column,
            message: message.into(),
            decl: decl.map(str::to_string),
        }
    }

    pub fn warning(loc: Loc, message: impl Into<String>, decl: Option<&str>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(loc, message, decl)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)?;
        if let Some(d) = &self.decl {
            write!(f, " (in `{d}`)")?;
        }
        Ok(())
    }
}
