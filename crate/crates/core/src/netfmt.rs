//! Line-oriented text format for wave-system nets.
//!
//! ```text
//! # comment
//! place <id> cap <positive-int>
//! trans <name> op <add|sub|mul|sin|exp|id> in <id> [<id>] out <id> [<id> ...]
//! source <stream> -> <id> [<id> ...]
//! sink <stream> <- <id>
//! ```
//!
//! One directive per line, whitespace-separated tokens, `#` starts a comment
//! that runs to the end of the line. LF and CRLF line endings are accepted.
//! The parser checks syntax, op names, arity and duplicate declarations;
//! wiring (writers, readers, cycles) is left to [`validate`](crate::wavenet::validate).

use std::fmt::{self, Write as _};
use std::path::Path;

use crate::wavenet::{NetSpec, OpKind, PlaceSpec, TransitionSpec};

/// The bundled description of [`fig1_net`](crate::wavenet::fig1_net).
pub const FIG1_NET: &str = include_str!("../nets/fig1.net");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownDirective,
    UnknownOp,
    DuplicateId,
    MalformedInteger,
    NonPositiveCapacity,
    WrongTokenCount,
    ExpectedKeyword(&'static str),
    ArityMismatch { op: OpKind, found: usize },
    InvalidUtf8,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownDirective => f.write_str("unknown directive"),
            ParseErrorKind::UnknownOp => f.write_str("unknown op"),
            ParseErrorKind::DuplicateId => f.write_str("duplicate id"),
            ParseErrorKind::MalformedInteger => f.write_str("malformed integer"),
            ParseErrorKind::NonPositiveCapacity => f.write_str("capacity must be positive"),
            ParseErrorKind::WrongTokenCount => f.write_str("wrong number of tokens"),
            ParseErrorKind::ExpectedKeyword(kw) => write!(f, "expected `{kw}`"),
            ParseErrorKind::ArityMismatch { op, found } => {
                write!(f, "`{op}` takes {} input(s), got {found}", op.arity())
            }
            ParseErrorKind::InvalidUtf8 => f.write_str("invalid UTF-8"),
        }
    }
}

/// A parse problem at a 1-based line, naming the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub token: String,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {} at `{}`", self.line, self.kind, self.token)
    }
}

impl std::error::Error for ParseDiagnostic {}

struct Parser<'a> {
    net: NetSpec,
    diags: Vec<ParseDiagnostic>,
    line: usize,
    tokens: Vec<&'a str>,
}

impl<'a> Parser<'a> {
    fn report(&mut self, token: &str, kind: ParseErrorKind) {
        self.diags.push(ParseDiagnostic {
            line: self.line,
            token: token.to_string(),
            kind,
        });
    }

    /// Checks the token count lies in `min..=max`, reporting the first extra
    /// token or the last present one.
    fn expect_count(&mut self, min: usize, max: usize) -> bool {
        let n = self.tokens.len();
        if n < min {
            let last = self.tokens[n - 1];
            self.report(last, ParseErrorKind::WrongTokenCount);
            false
        } else if n > max {
            let extra = self.tokens[max];
            self.report(extra, ParseErrorKind::WrongTokenCount);
            false
        } else {
            true
        }
    }

    fn expect_keyword(&mut self, at: usize, keyword: &'static str) -> bool {
        let token = self.tokens[at];
        if token == keyword {
            true
        } else {
            self.report(token, ParseErrorKind::ExpectedKeyword(keyword));
            false
        }
    }

    fn directive(&mut self) {
        match self.tokens[0] {
            "place" => self.place(),
            "trans" => self.trans(),
            "source" => self.source(),
            "sink" => self.sink(),
            other => self.report(other, ParseErrorKind::UnknownDirective),
        }
    }

    fn place(&mut self) {
        if !self.expect_count(4, 4) || !self.expect_keyword(2, "cap") {
            return;
        }
        let (id, cap) = (self.tokens[1], self.tokens[3]);
        let capacity = match cap.parse::<usize>() {
            Ok(0) => return self.report(cap, ParseErrorKind::NonPositiveCapacity),
            Ok(c) => c,
            Err(_) => return self.report(cap, ParseErrorKind::MalformedInteger),
        };
        if self.net.place(id).is_some() {
            return self.report(id, ParseErrorKind::DuplicateId);
        }
        self.net.places.push(PlaceSpec::new(id, capacity));
    }

    fn trans(&mut self) {
        if !self.expect_count(6, usize::MAX)
            || !self.expect_keyword(2, "op")
            || !self.expect_keyword(4, "in")
        {
            return;
        }
        let name = self.tokens[1];
        let op_token = self.tokens[3];
        let Ok(op) = op_token.parse::<OpKind>() else {
            return self.report(op_token, ParseErrorKind::UnknownOp);
        };
        let Some(out_at) = self.tokens[5..]
            .iter()
            .position(|&t| t == "out")
            .map(|i| i + 5)
        else {
            let last = self.tokens[self.tokens.len() - 1];
            return self.report(last, ParseErrorKind::ExpectedKeyword("out"));
        };
        let inputs = &self.tokens[5..out_at];
        let outputs = &self.tokens[out_at + 1..];
        if inputs.len() != op.arity() {
            let found = inputs.len();
            let token = inputs.get(op.arity()).copied().unwrap_or(op_token);
            return self.report(token, ParseErrorKind::ArityMismatch { op, found });
        }
        if outputs.is_empty() {
            return self.report("out", ParseErrorKind::WrongTokenCount);
        }
        if self.net.transitions.iter().any(|t| t.name == name) {
            return self.report(name, ParseErrorKind::DuplicateId);
        }
        self.net
            .transitions
            .push(TransitionSpec::new(name, op, inputs, outputs));
    }

    fn source(&mut self) {
        if !self.expect_count(4, usize::MAX) || !self.expect_keyword(2, "->") {
            return;
        }
        let stream = self.tokens[1];
        if self.net.sources.contains_key(stream) {
            return self.report(stream, ParseErrorKind::DuplicateId);
        }
        let places = self.tokens[3..].iter().map(|s| s.to_string()).collect();
        self.net.sources.insert(stream.to_string(), places);
    }

    fn sink(&mut self) {
        if !self.expect_count(4, 4) || !self.expect_keyword(2, "<-") {
            return;
        }
        let stream = self.tokens[1];
        if self.net.sinks.contains_key(stream) {
            return self.report(stream, ParseErrorKind::DuplicateId);
        }
        self.net
            .sinks
            .insert(stream.to_string(), self.tokens[3].to_string());
    }
}

/// Parses a net description, collecting every diagnostic rather than
/// stopping at the first.
pub fn parse_net(text: &str) -> Result<NetSpec, Vec<ParseDiagnostic>> {
    let mut parser = Parser {
        net: NetSpec::default(),
        diags: Vec::new(),
        line: 0,
        tokens: Vec::new(),
    };
    for (index, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        parser.tokens = content.split_whitespace().collect();
        if parser.tokens.is_empty() {
            continue;
        }
        parser.line = index + 1;
        parser.directive();
    }
    if parser.diags.is_empty() {
        Ok(parser.net)
    } else {
        Err(parser.diags)
    }
}

/// Like [`parse_net`] but starting from raw bytes, which must be UTF-8.
pub fn parse_net_bytes(bytes: &[u8]) -> Result<NetSpec, Vec<ParseDiagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_net(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let line = valid.iter().filter(|&&b| b == b'\n').count() + 1;
            let end = (e.valid_up_to() + e.error_len().unwrap_or(1)).min(bytes.len());
            let token = bytes[e.valid_up_to()..end]
                .iter()
                .map(|b| format!("\\x{b:02x}"))
                .collect();
            Err(vec![ParseDiagnostic {
                line,
                token,
                kind: ParseErrorKind::InvalidUtf8,
            }])
        }
    }
}

/// Canonical text: places sorted by id, then transitions in declaration
/// order, then sources and sinks sorted by stream name. LF line endings.
///
/// Ids must be whitespace-free tokens without `#` for the text to reparse.
pub fn serialize_net(net: &NetSpec) -> String {
    let mut out = String::new();
    let mut places: Vec<&PlaceSpec> = net.places.iter().collect();
    places.sort_by(|a, b| a.id.cmp(&b.id));
    for p in places {
        let _ = writeln!(out, "place {} cap {}", p.id, p.capacity);
    }
    for t in &net.transitions {
        let _ = writeln!(
            out,
            "trans {} op {} in {} out {}",
            t.name,
            t.op,
            t.inputs.join(" "),
            t.outputs.join(" ")
        );
    }
    for (stream, places) in &net.sources {
        let _ = writeln!(out, "source {stream} -> {}", places.join(" "));
    }
    for (stream, place) in &net.sinks {
        let _ = writeln!(out, "sink {stream} <- {place}");
    }
    out
}

/// Net text together with where it came from, for located diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetDocument {
    pub origin: String,
    pub text: String,
}

impl NetDocument {
    pub fn new(origin: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            origin: origin.into(),
            text: text.into(),
        }
    }

    pub fn read(path: &Path) -> std::io::Result<Self> {
        let bytes = std::fs::read(path)?;
        Ok(Self::new(
            path.display().to_string(),
            String::from_utf8_lossy(&bytes).into_owned(),
        ))
    }

    pub fn line(&self, number: usize) -> Option<&str> {
        number.checked_sub(1).and_then(|i| self.text.lines().nth(i))
    }

    pub fn parse(&self) -> Result<NetSpec, Vec<ParseDiagnostic>> {
        parse_net(&self.text)
    }

    /// `origin:line: message` plus the offending source line.
    pub fn render(&self, diag: &ParseDiagnostic) -> String {
        let mut s = format!(
            "{}:{}: {} at `{}`",
            self.origin, diag.line, diag.kind, diag.token
        );
        if let Some(line) = self.line(diag.line) {
            let _ = write!(s, "\n    {}", line.trim_end());
        }
        s
    }
}
