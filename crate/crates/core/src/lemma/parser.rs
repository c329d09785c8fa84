//! Recursive descent parser for the DDML subset.
//!
//! ```text
//! model      ::= context*
//! context    ::= "context" id "{" complex* "}"
//! complex    ::= structure | collection | enum
//! structure  ::= "structure" id features? "{" (member ("," member)* ","?)? "}"
//! member     ::= field | operation
//! field      ::= type id features?
//! operation  ::= "procedure" id features? params?
//!              | "function" type id features? params?
//! params     ::= "(" (field ("," field)* ","?)? ")"
//! collection ::= "collection" id "{" type "}"
//! enum       ::= "enum" id "{" id ("," id)* ","? "}"
//! features   ::= "<" (id ","?)* ">"
//! ```
//!
//! Parsing stops at the first error.

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::Path;

use super::lexer::{tokenize, Token, TokenKind};
use super::model::*;
use crate::diagnostic::{Diagnostic, Location, RuleId};

type PResult<T> = Result<T, Diagnostic>;

const UTF8_BOM: &[u8] = b"\xEF\xBB\xBF";

/// Parses DDML source text. On failure no model is returned and the
/// diagnostics hold exactly one error at the first offending position.
pub fn parse(source: &str, source_path: Option<&Path>) -> (Option<DomainModel>, Vec<Diagnostic>) {
    let result = tokenize(source).and_then(|tokens| Parser::new(tokens).model());
    match result {
        Ok(model) => (Some(model), Vec::new()),
        Err(mut diag) => {
            if let Some(path) = source_path {
                diag.source_path = Some(path.to_path_buf());
            }
            (None, vec![diag])
        }
    }
}

/// Reads `path` as UTF-8 (a leading byte-order mark is ignored) and parses it.
pub fn parse_file(path: &Path) -> (Option<DomainModel>, Vec<Diagnostic>) {
    let bytes = match fs::read(path) {
        Ok(bytes) => bytes,
        Err(err) => {
            let (rule, message) = match err.kind() {
                io::ErrorKind::NotFound => (RuleId::FileNotFound, "no such file".to_string()),
                _ => (RuleId::IoError, format!("cannot read file: {err}")),
            };
            return (
                None,
                vec![Diagnostic::error(rule, Location::START, message).with_path(path)],
            );
        }
    };
    let bytes = bytes.strip_prefix(UTF8_BOM).unwrap_or(&bytes);
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text, Some(path)),
        Err(err) => {
            let valid = std::str::from_utf8(&bytes[..err.valid_up_to()]).unwrap_or_default();
            let diag = Diagnostic::error(
                RuleId::NotUtf8,
                end_location(valid),
                "file is not valid UTF-8",
            )
            .with_path(path);
            (None, vec![diag])
        }
    }
}

/// Location of the character that would follow `prefix`.
fn end_location(prefix: &str) -> Location {
    let line = prefix.matches('\n').count() + 1;
    let column = prefix.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Location::new(line, column)
}

fn is_reserved_type_name(name: &str) -> bool {
    PrimitiveType::from_keyword(name).is_some() || PrimitiveType::UNSUPPORTED.contains(&name)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Opening delimiters not yet closed, innermost last.
    open: Vec<(TokenKind, Location)>,
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            open: Vec::new(),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_is(&self, kind: &TokenKind) -> bool {
        &self.peek().kind == kind
    }

    fn peek_keyword(&self, word: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(name) if name == word)
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        if tok.kind.closer_of().is_some() {
            self.open.push((tok.kind.clone(), tok.location));
        } else if tok.kind.is_closing() {
            self.open.pop();
        }
        tok
    }

    /// Error for the current token when `expected` was wanted.
    fn unexpected(&self, expected: &str) -> Diagnostic {
        let tok = self.peek();
        match &tok.kind {
            TokenKind::Eof => match self.open.last() {
                Some((opener, at)) => Diagnostic::error(
                    RuleId::UnbalancedDelimiter,
                    *at,
                    format!("unclosed {opener}: reached end of input, expected {expected}"),
                ),
                None => Diagnostic::error(
                    RuleId::UnexpectedToken,
                    tok.location,
                    format!("unexpected end of input, expected {expected}"),
                ),
            },
            kind if kind.is_closing() => {
                let message = match self.open.last() {
                    Some((opener, at)) => format!(
                        "mismatched {kind}: {opener} opened at {at} is still open, expected {expected}"
                    ),
                    None => format!("unmatched {kind}, expected {expected}"),
                };
                Diagnostic::error(RuleId::UnbalancedDelimiter, tok.location, message)
            }
            kind => Diagnostic::error(
                RuleId::UnexpectedToken,
                tok.location,
                format!("expected {expected}, found {kind}"),
            ),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.peek_is(&kind) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&kind.to_string()))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, Location)> {
        match &self.peek().kind {
            TokenKind::Ident(name) => {
                let name = name.clone();
                let tok = self.bump();
                Ok((name, tok.location))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn type_name(&mut self, what: &str) -> PResult<(String, Location)> {
        let (name, at) = self.expect_ident(what)?;
        if is_reserved_type_name(&name) {
            return Err(Diagnostic::error(
                RuleId::ReservedName,
                at,
                format!("`{name}` is a primitive type and cannot name a {what}"),
            ));
        }
        Ok((name, at))
    }

    fn model(&mut self) -> PResult<DomainModel> {
        let mut contexts: Vec<Context> = Vec::new();
        let mut names = HashSet::new();
        loop {
            match &self.peek().kind {
                TokenKind::Eof => break,
                TokenKind::Ident(word) if word == "context" => {
                    let ctx = self.context()?;
                    if !names.insert(ctx.name.clone()) {
                        return Err(Diagnostic::error(
                            RuleId::DuplicateContext,
                            ctx.origin.location(),
                            format!("context `{}` is declared more than once", ctx.name),
                        ));
                    }
                    contexts.push(ctx);
                }
                TokenKind::Ident(word) => {
                    return Err(Diagnostic::error(
                        RuleId::UnknownKeyword,
                        self.peek().location,
                        format!("unknown keyword `{word}`, expected `context`"),
                    ))
                }
                _ => return Err(self.unexpected("`context`")),
            }
        }
        Ok(DomainModel { contexts })
    }

    fn context(&mut self) -> PResult<Context> {
        self.bump();
        let (name, at) = self.expect_ident("context name")?;
        self.expect(TokenKind::LBrace)?;
        let mut complex_types: Vec<ComplexType> = Vec::new();
        let mut names = HashSet::new();
        loop {
            let tok = self.peek().clone();
            let ty = match &tok.kind {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Ident(word) => match word.as_str() {
                    "structure" => ComplexType::Structure(self.structure()?),
                    "collection" => ComplexType::Collection(self.collection()?),
                    "enum" => ComplexType::Enumeration(self.enumeration()?),
                    other => {
                        return Err(Diagnostic::error(
                            RuleId::UnknownKeyword,
                            tok.location,
                            format!(
                                "unknown keyword `{other}`, expected `structure`, `collection` or `enum`"
                            ),
                        ))
                    }
                },
                _ => return Err(self.unexpected("`structure`, `collection`, `enum` or `}`")),
            };
            if !names.insert(ty.name().to_string()) {
                return Err(Diagnostic::error(
                    RuleId::DuplicateType,
                    ty.origin().location(),
                    format!(
                        "type `{}` is declared more than once in context `{name}`",
                        ty.name()
                    ),
                ));
            }
            complex_types.push(ty);
        }
        Ok(Context {
            name,
            complex_types,
            origin: at.into(),
        })
    }

    fn features<F: Feature>(&mut self) -> PResult<FeatureSet<F>> {
        let mut set = FeatureSet::new();
        if !self.peek_is(&TokenKind::LAngle) {
            return Ok(set);
        }
        self.bump();
        loop {
            if self.peek_is(&TokenKind::RAngle) {
                self.bump();
                return Ok(set);
            }
            let (word, at) = self.expect_ident("feature name or `>`")?;
            let Ok(feature) = word.parse::<F>() else {
                let allowed: Vec<_> = F::ALL.iter().map(|f| f.as_str()).collect();
                return Err(Diagnostic::error(
                    RuleId::UnknownFeature,
                    at,
                    format!(
                        "unknown feature `{word}`, expected one of: {}",
                        allowed.join(", ")
                    ),
                ));
            };
            if !set.insert(feature) {
                return Err(Diagnostic::error(
                    RuleId::DuplicateFeature,
                    at,
                    format!("feature `{word}` is listed more than once"),
                ));
            }
            if self.peek_is(&TokenKind::Comma) {
                self.bump();
            }
        }
    }

    fn type_ref(&mut self) -> PResult<TypeRef> {
        let (word, at) = self.expect_ident("type")?;
        if let Some(p) = PrimitiveType::from_keyword(&word) {
            return Ok(TypeRef::Primitive(p));
        }
        if PrimitiveType::UNSUPPORTED.contains(&word.as_str()) {
            return Err(Diagnostic::error(
                RuleId::UnknownPrimitive,
                at,
                format!("primitive type `{word}` is not supported"),
            ));
        }
        Ok(TypeRef::Named(word))
    }

    fn field(&mut self) -> PResult<Field> {
        let at = self.peek().location;
        let ty = self.type_ref()?;
        let (name, _) = self.expect_ident("field name")?;
        let features = self.features()?;
        Ok(Field {
            name,
            ty,
            features,
            origin: at.into(),
        })
    }

    fn structure(&mut self) -> PResult<Structure> {
        let at = self.bump().location;
        let (name, _) = self.type_name("structure")?;
        let features = self.features()?;
        self.expect(TokenKind::LBrace)?;

        let mut structure = Structure {
            name,
            features,
            fields: Vec::new(),
            operations: Vec::new(),
            origin: at.into(),
        };
        let mut members = HashSet::new();
        loop {
            if self.peek_is(&TokenKind::RBrace) {
                self.bump();
                break;
            }
            let (member, member_at) =
                if self.peek_keyword("procedure") || self.peek_keyword("function") {
                    let op = self.operation()?;
                    let at = op.origin.location();
                    let name = op.name.clone();
                    structure.operations.push(op);
                    (name, at)
                } else {
                    let field = self.field()?;
                    let at = field.origin.location();
                    let name = field.name.clone();
                    structure.fields.push(field);
                    (name, at)
                };
            if !members.insert(member.clone()) {
                return Err(Diagnostic::error(
                    RuleId::DuplicateMember,
                    member_at,
                    format!(
                        "member `{member}` is declared more than once in structure `{}`",
                        structure.name
                    ),
                ));
            }
            if self.peek_is(&TokenKind::Comma) {
                self.bump();
            } else if self.peek_is(&TokenKind::RBrace) {
                self.bump();
                break;
            } else {
                return Err(self.unexpected("`,` or `}`"));
            }
        }
        Ok(structure)
    }

    fn operation(&mut self) -> PResult<Operation> {
        let keyword = self.bump();
        let is_function = matches!(&keyword.kind, TokenKind::Ident(w) if w == "function");
        let kind = if is_function {
            OperationKind::Function {
                returns: self.type_ref()?,
            }
        } else {
            OperationKind::Procedure
        };
        let (name, _) = self.expect_ident("operation name")?;
        let features = self.features()?;
        let mut params: Vec<Field> = Vec::new();
        if self.peek_is(&TokenKind::LParen) {
            self.bump();
            loop {
                if self.peek_is(&TokenKind::RParen) {
                    self.bump();
                    break;
                }
                let param = self.field()?;
                if params.iter().any(|p| p.name == param.name) {
                    return Err(Diagnostic::error(
                        RuleId::DuplicateMember,
                        param.origin.location(),
                        format!(
                            "parameter `{}` is declared more than once in `{name}`",
                            param.name
                        ),
                    ));
                }
                params.push(param);
                if self.peek_is(&TokenKind::Comma) {
                    self.bump();
                } else if self.peek_is(&TokenKind::RParen) {
                    self.bump();
                    break;
                } else {
                    return Err(self.unexpected("`,` or `)`"));
                }
            }
        }
        Ok(Operation {
            name,
            kind,
            features,
            params,
            origin: keyword.location.into(),
        })
    }

    fn collection(&mut self) -> PResult<Collection> {
        let at = self.bump().location;
        let (name, _) = self.type_name("collection")?;
        self.expect(TokenKind::LBrace)?;
        let element_type = self.type_ref()?;
        self.expect(TokenKind::RBrace)?;
        Ok(Collection {
            name,
            element_type,
            origin: at.into(),
        })
    }

    fn enumeration(&mut self) -> PResult<Enumeration> {
        let at = self.bump().location;
        let (name, name_at) = self.type_name("enum")?;
        self.expect(TokenKind::LBrace)?;
        let mut literals: Vec<String> = Vec::new();
        loop {
            if self.peek_is(&TokenKind::RBrace) {
                self.bump();
                break;
            }
            let (literal, lit_at) = self.expect_ident("enum literal or `}`")?;
            if literals.contains(&literal) {
                return Err(Diagnostic::error(
                    RuleId::DuplicateMember,
                    lit_at,
                    format!("literal `{literal}` is declared more than once in enum `{name}`"),
                ));
            }
            literals.push(literal);
            if self.peek_is(&TokenKind::Comma) {
                self.bump();
            } else if self.peek_is(&TokenKind::RBrace) {
                self.bump();
                break;
            } else {
                return Err(self.unexpected("`,` or `}`"));
            }
        }
        if literals.is_empty() {
            return Err(Diagnostic::error(
                RuleId::EmptyEnum,
                name_at,
                format!("enum `{name}` declares no literals"),
            ));
        }
        Ok(Enumeration {
            name,
            literals,
            origin: at.into(),
        })
    }
}
