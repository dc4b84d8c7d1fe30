//! Hand-written lexer and recursive-descent parser for `.ccs` files.

use super::model::*;

/// Diagnostics beyond this count are dropped.
pub const MAX_DIAGNOSTICS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Number(f64),
    LBrace,
    RBrace,
    Semi,
    Comma,
    Colon,
    Arrow,
    Equals,
    At,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("`{n}`"),
            Tok::Number(x) => format!("number `{x}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::At => "`@`".into(),
            Tok::Eof => "end of file".into(),
        }
    }
}

pub(crate) fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '#' | '⊗' | '-')
}

/// True if `s` lexes as a single NAME token.
pub fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_name_start) && chars.all(is_name_char) && !s.contains("->")
}

fn lex(text: &str, diags: &mut Vec<Diagnostic>) -> Vec<(Tok, Loc)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let loc = Loc { line, column: col };
        if c.is_whitespace() || c == '\u{feff}' {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        if is_name_start(c) {
            let start = i;
            while i < chars.len() && is_name_char(chars[i]) {
                if chars[i] == '-' && chars.get(i + 1) == Some(&'>') {
                    break;
                }
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), loc));
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
                if i < chars.len() && matches!(chars[i], '+' | '-') {
                    {
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut col, ch);
                    }
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    {
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut col, ch);
                    }
                }
            }
            let lexeme: String = chars[start..i].iter().collect();
            match lexeme.parse::<f64>() {
                Ok(x) => out.push((Tok::Number(x), loc)),
                Err(_) => diags.push(Diagnostic::error(
                    loc,
                    format!("malformed number `{lexeme}`"),
                    None,
                )),
            }
            continue;
        }
        let tok = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Equals),
            '@' => Some(Tok::At),
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance(&mut i, &mut line, &mut col, c);
                Some(Tok::Arrow)
            }
            _ => None,
        };
        match tok {
            Some(t) => out.push((t, loc)),
            None => diags.push(Diagnostic::error(
                loc,
                format!("unexpected character `{c}`"),
                None,
            )),
        }
        advance(&mut i, &mut line, &mut col, c);
    }
    out.push((Tok::Eof, Loc { line, column: col }));
    out
}

struct Parser {
    toks: Vec<(Tok, Loc)>,
    pos: usize,
    diags: Vec<Diagnostic>,
    current: Option<String>,
}

type PResult<T> = Result<T, ()>;

const KEYWORDS: [&str; 6] = [
    "category",
    "generator",
    "evaluator",
    "relation",
    "transition",
    "problem",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn loc(&self) -> Loc {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Loc) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&mut self, msg: String) -> PResult<T> {
        let loc = self.loc();
        self.diags
            .push(Diagnostic::error(loc, msg, self.current.as_deref()));
        Err(())
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            let found = self.peek().describe();
            self.error(format!("expected {}, found {found}", want.describe()))
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Name(n) => {
                let (_, loc) = self.bump();
                Ok(Name::at(n, loc))
            }
            other => self.error(format!("expected a name, found {}", other.describe())),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Name(n) if n == kw => {
                self.bump();
                Ok(())
            }
            other => {
                let found = other.describe();
                self.error(format!("expected `{kw}`, found {found}"))
            }
        }
    }

    /// `NAME ("," NAME)*`
    fn name_list(&mut self) -> PResult<Vec<Name>> {
        let mut out = vec![self.name()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.name()?);
        }
        Ok(out)
    }

    /// `"{" NAME ("," NAME)* "}"`
    fn braced_names(&mut self) -> PResult<Vec<Name>> {
        self.expect(Tok::LBrace)?;
        let names = self.name_list()?;
        self.expect(Tok::RBrace)?;
        Ok(names)
    }

    /// Repeats `entry` until the closing brace; at least one entry.
    fn body<T>(&mut self, mut entry: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            out.push(entry(self)?);
            self.expect(Tok::Semi)?;
            if *self.peek() == Tok::RBrace {
                self.bump();
                return Ok(out);
            }
        }
    }

    fn header(&mut self) -> PResult<(Name, Name)> {
        let name = self.name()?;
        self.current = Some(name.text.clone());
        self.keyword("over")?;
        let over = self.name()?;
        Ok((name, over))
    }

    fn decl(&mut self) -> PResult<Decl> {
        let kw = match self.peek().clone() {
            Tok::Name(n) if KEYWORDS.contains(&n.as_str()) => n,
            other => {
                return self.error(format!(
                    "expected a declaration keyword, found {}",
                    other.describe()
                ))
            }
        };
        self.bump();
        self.current = None;
        match kw.as_str() {
            "category" => {
                let name = self.name()?;
                self.current = Some(name.text.clone());
                self.expect(Tok::LBrace)?;
                self.keyword("states")?;
                self.expect(Tok::Colon)?;
                let states = self.name_list()?;
                self.expect(Tok::Semi)?;
                self.expect(Tok::RBrace)?;
                Ok(Decl::Category(CategoryDecl { name, states }))
            }
            "generator" => {
                let (name, over) = self.header()?;
                let mappings = self.body(|p| {
                    let from = p.name()?;
                    p.expect(Tok::Arrow)?;
                    Ok((from, p.name()?))
                })?;
                Ok(Decl::Generator(GeneratorDecl {
                    name,
                    over,
                    mappings,
                }))
            }
            "evaluator" => {
                let (name, over) = self.header()?;
                let blocks = self.body(|p| {
                    let label = p.name()?;
                    p.expect(Tok::Equals)?;
                    Ok((label, p.braced_names()?))
                })?;
                Ok(Decl::Evaluator(EvaluatorDecl { name, over, blocks }))
            }
            "relation" => {
                let (name, over) = self.header()?;
                let entries = self.body(|p| {
                    let from = p.name()?;
                    p.expect(Tok::Arrow)?;
                    p.expect(Tok::LBrace)?;
                    let mut outs = vec![p.outcome()?];
                    while *p.peek() == Tok::Comma {
                        p.bump();
                        outs.push(p.outcome()?);
                    }
                    p.expect(Tok::RBrace)?;
                    Ok((from, outs))
                })?;
                Ok(Decl::Relation(RelationDecl {
                    name,
                    over,
                    entries,
                }))
            }
            "transition" => {
                let (name, over) = self.header()?;
                let deterministic = match self.peek() {
                    Tok::Name(n) if n == "deterministic" => true,
                    Tok::Name(n) if n == "indeterministic" => false,
                    other => {
                        let found = other.describe();
                        return self.error(format!(
                            "expected `deterministic` or `indeterministic`, found {found}"
                        ));
                    }
                };
                self.bump();
                let entries = self.body(|p| {
                    let from = p.name()?;
                    p.expect(Tok::Arrow)?;
                    Ok((from, p.braced_names()?))
                })?;
                Ok(Decl::Transition(TransitionDecl {
                    name,
                    over,
                    deterministic,
                    entries,
                }))
            }
            "problem" => {
                let (name, over) = self.header()?;
                self.expect(Tok::LBrace)?;
                self.keyword("outset")?;
                self.expect(Tok::Colon)?;
                let outset = self.braced_names()?;
                self.expect(Tok::Semi)?;
                self.keyword("goal")?;
                self.expect(Tok::Colon)?;
                let goal = self.braced_names()?;
                self.expect(Tok::Semi)?;
                self.keyword("using")?;
                self.expect(Tok::Colon)?;
                let using = if *self.peek() == Tok::Semi {
                    Vec::new()
                } else {
                    self.name_list()?
                };
                self.expect(Tok::Semi)?;
                self.expect(Tok::RBrace)?;
                Ok(Decl::Problem(ProblemDecl {
                    name,
                    over,
                    outset,
                    goal,
                    using,
                }))
            }
            _ => unreachable!("keyword list"),
        }
    }

    /// `NAME ":" NAME ("@" NUMBER)?`
    fn outcome(&mut self) -> PResult<OutcomeDecl> {
        let label = self.name()?;
        self.expect(Tok::Colon)?;
        let target = self.name()?;
        let probability = if *self.peek() == Tok::At {
            self.bump();
            match self.peek().clone() {
                Tok::Number(x) => {
                    self.bump();
                    Some(x)
                }
                other => {
                    return self.error(format!(
                        "expected a probability, found {}",
                        other.describe()
                    ))
                }
            }
        } else {
            None
        };
        Ok(OutcomeDecl {
            label,
            target,
            probability,
        })
    }
}

/// Lexes and parses without semantic checks.
pub fn parse_syntax(text: &str) -> (Model, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let toks = lex(text, &mut diags);
    let mut p = Parser {
        toks,
        pos: 0,
        diags,
        current: None,
    };
    let mut model = Model::default();
    while *p.peek() != Tok::Eof {
        let start = p.pos;
        match p.decl() {
            Ok(d) => model.decls.push(d),
            Err(()) => {
                let before = p.pos;
                p.recover_from(start);
                if p.pos == before && *p.peek() != Tok::Eof {
                    p.bump();
                }
            }
        }
    }
    let mut diags = p.diags;
    diags.sort_by_key(|d| (d.line, d.column));
    diags.truncate(MAX_DIAGNOSTICS);
    (model, diags)
}

impl Parser {
    /// Skips past the failed declaration: closes any braces it opened, or
    /// resumes at the next declaration keyword.
    fn recover_from(&mut self, start: usize) {
        let mut depth: isize = 0;
        for (t, _) in &self.toks[start..self.pos] {
            match t {
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth -= 1,
                _ => {}
            }
        }
        if depth <= 0 {
            while !matches!(self.peek(), Tok::Eof) {
                if let Tok::Name(n) = self.peek() {
                    if KEYWORDS.contains(&n.as_str()) {
                        return;
                    }
                }
                self.bump();
            }
            return;
        }
        while depth > 0 {
            match self.peek() {
                Tok::Eof => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth -= 1,
                _ => {}
            }
            self.bump();
        }
    }
}
