//! Reader for exactly the Jolie subset that [`render`](super::render) emits,
//! `///@` annotations included. Used to confirm that generated documents are
//! well-formed and that no information is lost in printing.

use std::collections::HashSet;

use super::ast::*;
use crate::diagnostic::{Diagnostic, Location, RuleId};

type PResult<T> = Result<T, Diagnostic>;

pub fn reparse_subset(text: &str) -> (Option<JolieDocument>, Vec<Diagnostic>) {
    let result = lex(text).and_then(|tokens| Reader { tokens, pos: 0 }.document());
    match result {
        Ok(doc) => (Some(doc), Vec::new()),
        Err(diag) => (None, vec![diag]),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    /// `///@name` or `///@name(arg)`
    Marker {
        name: String,
        arg: Option<String>,
    },
    Ident(String),
    Str(String),
    Punct(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Marker { name, .. } => format!("annotation `///@{name}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    at: Location,
}

fn syntax(at: Location, message: impl Into<String>) -> Diagnostic {
    Diagnostic::error(RuleId::JolieSyntax, at, message)
}

fn lex(text: &str) -> PResult<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    // Advances over chars[i], keeping line/col in sync.
    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let at = Location::new(line, col);
        if c.is_whitespace() {
            advance!();
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            let is_marker = chars[i..].starts_with(&['/', '/', '/', '@']);
            let start = i;
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
            if !is_marker {
                continue;
            }
            let body: String = chars[start + 4..i].iter().collect();
            let body = body.trim_end();
            let (name, arg) = match body.find('(') {
                Some(open) if body.ends_with(')') => (
                    &body[..open],
                    Some(body[open + 1..body.len() - 1].to_string()),
                ),
                _ => (body, None),
            };
            if !is_ident(name) || arg.as_deref().is_some_and(|a| !is_ident(a)) {
                return Err(syntax(at, format!("malformed annotation `///@{body}`")));
            }
            out.push(Spanned {
                tok: Tok::Marker {
                    name: name.to_string(),
                    arg,
                },
                at,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                advance!();
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                at,
            });
            continue;
        }
        if c == '"' {
            advance!();
            let mut s = String::new();
            loop {
                let Some(&c) = chars.get(i) else {
                    return Err(syntax(at, "unterminated string literal"));
                };
                advance!();
                match c {
                    '"' => break,
                    '\\' => {
                        let Some(&esc) = chars.get(i) else {
                            return Err(syntax(at, "unterminated string literal"));
                        };
                        advance!();
                        s.push(match esc {
                            'n' => '\n',
                            'r' => '\r',
                            't' => '\t',
                            '"' | '\\' => esc,
                            other => return Err(syntax(at, format!("unknown escape `\\{other}`"))),
                        });
                    }
                    c => s.push(c),
                }
            }
            out.push(Spanned {
                tok: Tok::Str(s),
                at,
            });
            continue;
        }
        if "{}()[]:?*,".contains(c) {
            advance!();
            out.push(Spanned {
                tok: Tok::Punct(c),
                at,
            });
            continue;
        }
        return Err(syntax(at, format!("unexpected character {c:?}")));
    }
    out.push(Spanned {
        tok: Tok::Eof,
        at: last_char_location(&chars),
    });
    Ok(out)
}

/// Location of the final character, or 1:1 for empty input.
fn last_char_location(chars: &[char]) -> Location {
    let (mut line, mut col) = (1, 1);
    let mut last = Location::START;
    for &c in chars {
        last = Location::new(line, col);
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    last
}

struct Reader {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Reader {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn at(&self) -> Location {
        self.tokens[self.pos].at
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        syntax(
            self.at(),
            format!("expected {expected}, found {}", self.peek().describe()),
        )
    }

    fn punct(&mut self, c: char) -> PResult<()> {
        if self.peek() == &Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == word => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{word}`"))),
        }
    }

    /// Closing brace of a body opened at `open`.
    fn close_brace(&mut self, open: Location) -> PResult<()> {
        if self.peek() == &Tok::Eof {
            return Err(Diagnostic::error(
                RuleId::UnbalancedDelimiter,
                open,
                "unclosed `{`: reached end of input",
            ));
        }
        self.punct('}')
    }

    /// Consecutive feature annotations preceding a declaration.
    fn annotations(&mut self) -> PResult<Vec<Annotation>> {
        let mut out = Vec::new();
        while let Tok::Marker { name, arg } = self.peek() {
            if name == "beginCtx" || name == "endCtx" {
                break;
            }
            let at = self.at();
            let annotation = match (name.parse::<Annotation>(), arg) {
                (Ok(a), None) => a,
                _ => {
                    return Err(Diagnostic::error(
                        RuleId::UnknownAnnotation,
                        at,
                        format!("unknown annotation `{}`", self.peek().describe()),
                    ))
                }
            };
            self.bump();
            out.push(annotation);
        }
        Ok(out)
    }

    fn dangling(&self, annotations: &[Annotation]) -> PResult<()> {
        if annotations.is_empty() {
            Ok(())
        } else {
            Err(Diagnostic::error(
                RuleId::DanglingAnnotation,
                self.at(),
                format!(
                    "annotation `{}` is not followed by a declaration",
                    annotations[0]
                ),
            ))
        }
    }

    fn document(&mut self) -> PResult<JolieDocument> {
        let mut items = Vec::new();
        let mut names = HashSet::new();
        let mut in_context = false;
        loop {
            let annotations = self.annotations()?;
            let at = self.at();
            match self.peek().clone() {
                Tok::Eof => {
                    self.dangling(&annotations)?;
                    if in_context {
                        return Err(syntax(at, "missing `///@endCtx` before end of input"));
                    }
                    break;
                }
                Tok::Marker { name, arg } => {
                    self.dangling(&annotations)?;
                    self.bump();
                    match (name.as_str(), arg) {
                        ("beginCtx", Some(ctx)) if !in_context => {
                            in_context = true;
                            items.push(DocumentItem::CtxBegin(ctx));
                        }
                        ("endCtx", None) if in_context => {
                            in_context = false;
                            items.push(DocumentItem::CtxEnd);
                        }
                        ("beginCtx", Some(_)) => {
                            return Err(syntax(at, "context begins inside another context"))
                        }
                        ("endCtx", None) => {
                            return Err(syntax(at, "`///@endCtx` without a matching begin"))
                        }
                        _ => return Err(syntax(at, "malformed context marker")),
                    }
                }
                Tok::Ident(word) if word == "type" => {
                    self.bump();
                    let decl = self.type_decl(annotations)?;
                    if !names.insert(decl.name.clone()) {
                        return Err(duplicate(at, &decl.name));
                    }
                    items.push(DocumentItem::Type(decl));
                }
                Tok::Ident(word) if word == "interface" => {
                    self.bump();
                    let decl = self.interface(annotations)?;
                    if !names.insert(decl.name.clone()) {
                        return Err(duplicate(at, &decl.name));
                    }
                    items.push(DocumentItem::Interface(decl));
                }
                _ => return Err(self.unexpected("`type`, `interface` or a context marker")),
            }
        }
        let doc = JolieDocument { items };
        doc.validate()
            .map_err(|violation| syntax(Location::START, violation.to_string()))?;
        Ok(doc)
    }

    fn type_decl(&mut self, annotations: Vec<Annotation>) -> PResult<TypeDecl> {
        let name = self.ident("type name")?;
        let body = if self.peek() == &Tok::Punct('{') {
            let open = self.at();
            self.bump();
            TypeBody::Tree(self.tree_children(open)?)
        } else {
            self.punct(':')?;
            let at = self.at();
            let word = self.ident("basic type")?;
            match BasicType::from_keyword(&word) {
                Some(BasicType::Void) => TypeBody::Tree(Vec::new()),
                Some(BasicType::Undefined) => TypeBody::Undefined,
                Some(basic) => TypeBody::Basic {
                    basic,
                    refinement: self.refinement()?,
                },
                None => return Err(syntax(at, format!("`{word}` is not a basic type"))),
            }
        };
        Ok(TypeDecl {
            name,
            annotations,
            body,
        })
    }

    fn tree_children(&mut self, open: Location) -> PResult<Vec<TypeNode>> {
        let mut children: Vec<TypeNode> = Vec::new();
        loop {
            let annotations = self.annotations()?;
            if matches!(self.peek(), Tok::Punct('}') | Tok::Eof) {
                self.dangling(&annotations)?;
                self.close_brace(open)?;
                return Ok(children);
            }
            let at = self.at();
            let name = self.ident("leaf name")?;
            let cardinality = if self.eat_punct('?') {
                Cardinality::Optional
            } else if self.eat_punct('*') {
                Cardinality::Star
            } else {
                Cardinality::One
            };
            self.punct(':')?;
            let ty_at = self.at();
            let word = self.ident("leaf type")?;
            let ty = match BasicType::from_keyword(&word) {
                Some(BasicType::Void) => {
                    return Err(syntax(ty_at, "`void` is only allowed at a type root"))
                }
                Some(basic) => NodeType::Basic {
                    basic,
                    refinement: self.refinement()?,
                },
                None => NodeType::Named(word),
            };
            if children.iter().any(|c| c.name == name) {
                return Err(duplicate(at, &name));
            }
            children.push(TypeNode {
                name,
                cardinality,
                annotations,
                ty,
            });
        }
    }

    /// `( enum( ["A", "B"] ) )`
    fn refinement(&mut self) -> PResult<Option<Refinement>> {
        if self.peek() != &Tok::Punct('(') {
            return Ok(None);
        }
        self.bump();
        self.keyword("enum")?;
        self.punct('(')?;
        self.punct('[')?;
        let mut literals = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Str(s) => {
                    self.bump();
                    literals.push(s);
                }
                _ => return Err(self.unexpected("string literal")),
            }
            if !self.eat_punct(',') {
                break;
            }
        }
        self.punct(']')?;
        self.punct(')')?;
        self.punct(')')?;
        Ok(Some(Refinement::Enum(literals)))
    }

    fn interface(&mut self, annotations: Vec<Annotation>) -> PResult<InterfaceDecl> {
        let name = self.ident("interface name")?;
        let open = self.at();
        self.punct('{')?;
        if matches!(self.peek(), Tok::Ident(w) if w == "RequestResponse") {
            self.bump();
            self.punct(':')?;
        }
        let mut operations: Vec<RequestResponseOp> = Vec::new();
        loop {
            let op_annotations = self.annotations()?;
            if matches!(self.peek(), Tok::Punct('}') | Tok::Eof) {
                self.dangling(&op_annotations)?;
                self.close_brace(open)?;
                break;
            }
            let at = self.at();
            let op_name = self.ident("operation name")?;
            self.punct('(')?;
            let request = self.type_name()?;
            self.punct(')')?;
            self.punct('(')?;
            let response = self.type_name()?;
            self.punct(')')?;
            if operations.iter().any(|o| o.name == op_name) {
                return Err(duplicate(at, &op_name));
            }
            operations.push(RequestResponseOp {
                name: op_name,
                annotations: op_annotations,
                request,
                response,
            });
        }
        Ok(InterfaceDecl {
            name,
            annotations,
            operations,
        })
    }

    fn type_name(&mut self) -> PResult<TypeName> {
        let word = self.ident("type name")?;
        Ok(match BasicType::from_keyword(&word) {
            Some(basic) => TypeName::Basic(basic),
            None => TypeName::Named(word),
        })
    }
}

fn duplicate(at: Location, name: &str) -> Diagnostic {
    Diagnostic::error(
        RuleId::DuplicateDeclaration,
        at,
        format!("`{name}` is declared more than once"),
    )
}
