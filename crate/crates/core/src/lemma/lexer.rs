use std::fmt;

use crate::diagnostic::{Diagnostic, Location, RuleId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl TokenKind {
    pub fn is_closing(&self) -> bool {
        matches!(
            self,
            TokenKind::RBrace | TokenKind::RAngle | TokenKind::RParen
        )
    }

    pub fn closer_of(&self) -> Option<TokenKind> {
        match self {
            TokenKind::LBrace => Some(TokenKind::RBrace),
            TokenKind::LAngle => Some(TokenKind::RAngle),
            TokenKind::LParen => Some(TokenKind::RParen),
            _ => None,
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(name) => write!(f, "`{name}`"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::LAngle => f.write_str("`<`"),
            TokenKind::RAngle => f.write_str("`>`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub location: Location,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits DDML source into tokens. `//` comments and whitespace are dropped.
/// The trailing `Eof` token sits on the last character of the input (or 1:1
/// for empty input) so that every reported location is inside the text.
pub fn tokenize(source: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    let mut last = Location::START;

    while let Some(c) = chars.next() {
        let here = Location::new(line, column);
        last = here;
        if c == '\n' {
            line += 1;
            column = 1;
            continue;
        }
        column += 1;

        let kind = match c {
            c if c.is_whitespace() => continue,
            '{' => TokenKind::LBrace,
            '}' => TokenKind::RBrace,
            '<' => TokenKind::LAngle,
            '>' => TokenKind::RAngle,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            ',' => TokenKind::Comma,
            '/' if chars.peek() == Some(&'/') => {
                while let Some(&next) = chars.peek() {
                    if next == '\n' {
                        break;
                    }
                    chars.next();
                    last = Location::new(line, column);
                    column += 1;
                }
                continue;
            }
            c if is_ident_start(c) => {
                let mut name = String::from(c);
                while let Some(&next) = chars.peek() {
                    if !is_ident_continue(next) {
                        break;
                    }
                    name.push(next);
                    chars.next();
                    last = Location::new(line, column);
                    column += 1;
                }
                TokenKind::Ident(name)
            }
            other => {
                return Err(Diagnostic::error(
                    RuleId::UnexpectedCharacter,
                    here,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        tokens.push(Token {
            kind,
            location: here,
        });
    }

    tokens.push(Token {
        kind: TokenKind::Eof,
        location: last,
    });
    Ok(tokens)
}
