//! Findings reported by the parser, resolver, encoder and checker.

use std::fmt;
use std::path::PathBuf;

/// A 1-based line/column position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl Location {
    pub const START: Location = Location { line: 1, column: 1 };

    pub fn new(line: usize, column: usize) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        Location { line, column }
    }
}

impl Default for Location {
    fn default() -> Self {
        Location::START
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! rule_ids {
    ($( $(#[$meta:meta])* $variant:ident => $id:literal ),+ $(,)?) => {
        /// Closed set of rule identifiers a [`Diagnostic`] can carry.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum RuleId {
            $( $(#[$meta])* $variant, )+
        }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[ $( RuleId::$variant, )+ ];

            pub fn as_str(self) -> &'static str {
                match self {
                    $( RuleId::$variant => $id, )+
                }
            }

            pub fn from_id(id: &str) -> Option<RuleId> {
                match id {
                    $( $id => Some(RuleId::$variant), )+
                    _ => None,
                }
            }
        }
    };
}

rule_ids! {
    // I/O
    FileNotFound => "file-not-found",
    NotUtf8 => "not-utf8",
    IoError => "io-error",

    // DDML syntax
    UnexpectedCharacter => "unexpected-character",
    UnexpectedToken => "unexpected-token",
    UnknownKeyword => "unknown-keyword",
    UnknownPrimitive => "unknown-primitive",
    UnknownFeature => "unknown-feature",
    UnbalancedDelimiter => "unbalanced-delimiter",
    DuplicateFeature => "duplicate-feature",
    DuplicateMember => "duplicate-member",
    DuplicateType => "duplicate-type",
    DuplicateContext => "duplicate-context",
    ReservedName => "reserved-name",
    EmptyEnum => "empty-enum",

    // DDML semantics
    UnresolvedReference => "unresolved-reference",

    // Encoding
    GenNameClash => "gen-name-clash",

    // Jolie subset reparser
    JolieSyntax => "jolie-syntax",
    UnknownAnnotation => "unknown-annotation",
    DanglingAnnotation => "dangling-annotation",
    DuplicateDeclaration => "duplicate-declaration",

    // DDD consistency checks
    FactoryInputContainsProduct => "factory-input-contains-product",
    FactoryResponseNotType => "factory-response-not-type",
    ValidatorResponseNotBool => "validator-response-not-bool",
    ValidatorMissingSpecification => "validator-missing-specification",
    ValidatorArity => "validator-arity",
    CrossContextLeaf => "cross-context-leaf",
    CrossContextOperation => "cross-context-operation",
    AggregateWithoutEntity => "aggregate-without-entity",
    PartNotEntityOrVo => "part-not-entity-or-vo",
}

impl RuleId {
    /// The rules implemented by the DDD consistency checker.
    pub const CHECKER: &'static [RuleId] = &[
        RuleId::FactoryInputContainsProduct,
        RuleId::FactoryResponseNotType,
        RuleId::ValidatorResponseNotBool,
        RuleId::ValidatorMissingSpecification,
        RuleId::ValidatorArity,
        RuleId::CrossContextLeaf,
        RuleId::CrossContextOperation,
        RuleId::AggregateWithoutEntity,
        RuleId::PartNotEntityOrVo,
    ];
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule: RuleId,
    pub message: String,
    pub location: Location,
    pub source_path: Option<PathBuf>,
}

impl Diagnostic {
    pub fn error(rule: RuleId, location: Location, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            rule,
            message: message.into(),
            location,
            source_path: None,
        }
    }

    pub fn warning(rule: RuleId, location: Location, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(rule, location, message)
        }
    }

    pub fn with_path(mut self, path: impl Into<PathBuf>) -> Self {
        self.source_path = Some(path.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Renders as `severity rule_id: message (file:line:col)`.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {} (", self.severity, self.rule, self.message)?;
        if let Some(path) = &self.source_path {
            write!(f, "{}:", path.display())?;
        }
        write!(f, "{})", self.location)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
