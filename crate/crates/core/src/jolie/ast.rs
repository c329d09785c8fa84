//! Jolie API documents: type declarations, interfaces and `///@` annotations.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lemma::{Feature, FieldFeature, OperationFeature, StructureFeature};

/// A DDD marker carried as a `///@name` doc comment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Annotation {
    Aggregate,
    DomainEvent,
    Entity,
    Factory,
    Service,
    Repository,
    Specification,
    ValueObject,
    Identifier,
    Part,
    Closure,
    SideEffectFree,
    Validator,
}

impl Annotation {
    pub const ALL: &'static [Annotation] = &[
        Annotation::Aggregate,
        Annotation::DomainEvent,
        Annotation::Entity,
        Annotation::Factory,
        Annotation::Service,
        Annotation::Repository,
        Annotation::Specification,
        Annotation::ValueObject,
        Annotation::Identifier,
        Annotation::Part,
        Annotation::Closure,
        Annotation::SideEffectFree,
        Annotation::Validator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Annotation::Aggregate => "aggregate",
            Annotation::DomainEvent => "domainEvent",
            Annotation::Entity => "entity",
            Annotation::Factory => "factory",
            Annotation::Service => "service",
            Annotation::Repository => "repository",
            Annotation::Specification => "specification",
            Annotation::ValueObject => "valueObject",
            Annotation::Identifier => "identifier",
            Annotation::Part => "part",
            Annotation::Closure => "closure",
            Annotation::SideEffectFree => "sideEffectFree",
            Annotation::Validator => "validator",
        }
    }
}

impl FromStr for Annotation {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Annotation::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or(())
    }
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "///@{}", self.name())
    }
}

// Feature names and annotation names share one vocabulary.
impl From<StructureFeature> for Annotation {
    fn from(f: StructureFeature) -> Self {
        f.as_str()
            .parse()
            .expect("structure feature has an annotation")
    }
}

impl From<FieldFeature> for Annotation {
    fn from(f: FieldFeature) -> Self {
        f.as_str().parse().expect("field feature has an annotation")
    }
}

impl From<OperationFeature> for Annotation {
    fn from(f: OperationFeature) -> Self {
        f.as_str()
            .parse()
            .expect("operation feature has an annotation")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasicType {
    Bool,
    Int,
    Long,
    Double,
    String,
    Void,
    Undefined,
}

impl BasicType {
    pub const ALL: &'static [BasicType] = &[
        BasicType::Bool,
        BasicType::Int,
        BasicType::Long,
        BasicType::Double,
        BasicType::String,
        BasicType::Void,
        BasicType::Undefined,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            BasicType::Bool => "bool",
            BasicType::Int => "int",
            BasicType::Long => "long",
            BasicType::Double => "double",
            BasicType::String => "string",
            BasicType::Void => "void",
            BasicType::Undefined => "undefined",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        BasicType::ALL.iter().copied().find(|b| b.keyword() == word)
    }
}

impl fmt::Display for BasicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Only enumeration refinements are ever produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refinement {
    Enum(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    One,
    Optional,
    Star,
}

impl Cardinality {
    pub fn suffix(self) -> &'static str {
        match self {
            Cardinality::One => "",
            Cardinality::Optional => "?",
            Cardinality::Star => "*",
        }
    }
}

/// Type of a tree leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeType {
    Basic {
        basic: BasicType,
        refinement: Option<Refinement>,
    },
    Named(String),
}

impl NodeType {
    pub fn basic(basic: BasicType) -> Self {
        NodeType::Basic {
            basic,
            refinement: None,
        }
    }

    pub fn named(name: impl Into<String>) -> Self {
        NodeType::Named(name.into())
    }

    pub fn as_named(&self) -> Option<&str> {
        match self {
            NodeType::Named(n) => Some(n),
            NodeType::Basic { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeNode {
    pub name: String,
    pub cardinality: Cardinality,
    pub annotations: Vec<Annotation>,
    pub ty: NodeType,
}

impl TypeNode {
    pub fn new(name: impl Into<String>, ty: NodeType) -> Self {
        TypeNode {
            name: name.into(),
            cardinality: Cardinality::One,
            annotations: Vec::new(),
            ty,
        }
    }

    pub fn with_cardinality(mut self, cardinality: Cardinality) -> Self {
        self.cardinality = cardinality;
        self
    }

    pub fn annotated(mut self, annotations: impl IntoIterator<Item = Annotation>) -> Self {
        self.annotations = annotations.into_iter().collect();
        self
    }
}

/// Tree bodies always have a `void` root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeBody {
    Basic {
        basic: BasicType,
        refinement: Option<Refinement>,
    },
    Tree(Vec<TypeNode>),
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: String,
    pub annotations: Vec<Annotation>,
    pub body: TypeBody,
}

impl TypeDecl {
    pub fn tree(name: impl Into<String>, children: impl IntoIterator<Item = TypeNode>) -> Self {
        TypeDecl {
            name: name.into(),
            annotations: Vec::new(),
            body: TypeBody::Tree(children.into_iter().collect()),
        }
    }

    pub fn annotated(mut self, annotations: impl IntoIterator<Item = Annotation>) -> Self {
        self.annotations = annotations.into_iter().collect();
        self
    }

    pub fn has(&self, annotation: Annotation) -> bool {
        self.annotations.contains(&annotation)
    }

    pub fn children(&self) -> &[TypeNode] {
        match &self.body {
            TypeBody::Tree(children) => children,
            _ => &[],
        }
    }

    pub fn is_tree(&self) -> bool {
        matches!(self.body, TypeBody::Tree(_))
    }
}

/// Request or response of an interface operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeName {
    Named(String),
    Basic(BasicType),
}

impl TypeName {
    pub fn named(name: impl Into<String>) -> Self {
        TypeName::Named(name.into())
    }

    pub fn as_named(&self) -> Option<&str> {
        match self {
            TypeName::Named(n) => Some(n),
            TypeName::Basic(_) => None,
        }
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeName::Named(n) => f.write_str(n),
            TypeName::Basic(b) => b.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestResponseOp {
    pub name: String,
    pub annotations: Vec<Annotation>,
    pub request: TypeName,
    pub response: TypeName,
}

impl RequestResponseOp {
    pub fn new(name: impl Into<String>, request: TypeName, response: TypeName) -> Self {
        RequestResponseOp {
            name: name.into(),
            annotations: Vec::new(),
            request,
            response,
        }
    }

    pub fn annotated(mut self, annotations: impl IntoIterator<Item = Annotation>) -> Self {
        self.annotations = annotations.into_iter().collect();
        self
    }

    pub fn has(&self, annotation: Annotation) -> bool {
        self.annotations.contains(&annotation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfaceDecl {
    pub name: String,
    pub annotations: Vec<Annotation>,
    pub operations: Vec<RequestResponseOp>,
}

impl InterfaceDecl {
    pub fn new(
        name: impl Into<String>,
        operations: impl IntoIterator<Item = RequestResponseOp>,
    ) -> Self {
        InterfaceDecl {
            name: name.into(),
            annotations: Vec::new(),
            operations: operations.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocumentItem {
    CtxBegin(String),
    CtxEnd,
    Type(TypeDecl),
    Interface(InterfaceDecl),
}

impl DocumentItem {
    /// Name of a type or interface declaration.
    pub fn decl_name(&self) -> Option<&str> {
        match self {
            DocumentItem::Type(t) => Some(&t.name),
            DocumentItem::Interface(i) => Some(&i.name),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JolieDocument {
    pub items: Vec<DocumentItem>,
}

impl JolieDocument {
    pub fn new(items: impl IntoIterator<Item = DocumentItem>) -> Self {
        JolieDocument {
            items: items.into_iter().collect(),
        }
    }

    pub fn types(&self) -> impl Iterator<Item = &TypeDecl> {
        self.items.iter().filter_map(|i| match i {
            DocumentItem::Type(t) => Some(t),
            _ => None,
        })
    }

    pub fn interfaces(&self) -> impl Iterator<Item = &InterfaceDecl> {
        self.items.iter().filter_map(|i| match i {
            DocumentItem::Interface(d) => Some(d),
            _ => None,
        })
    }

    pub fn find_type(&self, name: &str) -> Option<&TypeDecl> {
        self.types().find(|t| t.name == name)
    }

    /// Checks the structural invariants that rendering relies on.
    pub fn validate(&self) -> Result<(), InvariantViolation> {
        let mut names = HashSet::new();
        let mut in_context = false;
        for item in &self.items {
            match item {
                DocumentItem::CtxBegin(name) => {
                    if in_context {
                        return Err(InvariantViolation::NestedContext(name.clone()));
                    }
                    check_ident(name)?;
                    in_context = true;
                }
                DocumentItem::CtxEnd => {
                    if !in_context {
                        return Err(InvariantViolation::UnmatchedContextEnd);
                    }
                    in_context = false;
                }
                DocumentItem::Type(decl) => {
                    check_ident(&decl.name)?;
                    if !names.insert(decl.name.as_str()) {
                        return Err(InvariantViolation::DuplicateDeclaration(decl.name.clone()));
                    }
                    validate_body(decl)?;
                }
                DocumentItem::Interface(decl) => {
                    check_ident(&decl.name)?;
                    if !names.insert(decl.name.as_str()) {
                        return Err(InvariantViolation::DuplicateDeclaration(decl.name.clone()));
                    }
                    let mut ops = HashSet::new();
                    for op in &decl.operations {
                        check_ident(&op.name)?;
                        if !ops.insert(op.name.as_str()) {
                            return Err(InvariantViolation::DuplicateMember {
                                owner: decl.name.clone(),
                                member: op.name.clone(),
                            });
                        }
                        for tp in [&op.request, &op.response] {
                            if let TypeName::Named(n) = tp {
                                check_type_ident(n)?;
                            }
                        }
                    }
                }
            }
        }
        if in_context {
            return Err(InvariantViolation::UnclosedContext);
        }
        Ok(())
    }
}

fn validate_body(decl: &TypeDecl) -> Result<(), InvariantViolation> {
    match &decl.body {
        TypeBody::Basic { basic, refinement } => {
            if matches!(basic, BasicType::Void | BasicType::Undefined) {
                return Err(InvariantViolation::MisplacedBasic {
                    owner: decl.name.clone(),
                    basic: *basic,
                });
            }
            validate_refinement(&decl.name, refinement.as_ref())
        }
        TypeBody::Undefined => Ok(()),
        TypeBody::Tree(children) => {
            let mut seen = HashSet::new();
            for child in children {
                check_ident(&child.name)?;
                if !seen.insert(child.name.as_str()) {
                    return Err(InvariantViolation::DuplicateMember {
                        owner: decl.name.clone(),
                        member: child.name.clone(),
                    });
                }
                match &child.ty {
                    NodeType::Basic { basic, refinement } => {
                        if *basic == BasicType::Void {
                            return Err(InvariantViolation::MisplacedBasic {
                                owner: decl.name.clone(),
                                basic: *basic,
                            });
                        }
                        validate_refinement(&decl.name, refinement.as_ref())?;
                    }
                    NodeType::Named(n) => check_type_ident(n)?,
                }
            }
            Ok(())
        }
    }
}

fn validate_refinement(
    owner: &str,
    refinement: Option<&Refinement>,
) -> Result<(), InvariantViolation> {
    let Some(Refinement::Enum(literals)) = refinement else {
        return Ok(());
    };
    let unique: HashSet<_> = literals.iter().collect();
    if literals.is_empty() || unique.len() != literals.len() {
        return Err(InvariantViolation::BadEnumRefinement(owner.to_string()));
    }
    Ok(())
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_ident(s: &str) -> Result<(), InvariantViolation> {
    if is_ident(s) {
        Ok(())
    } else {
        Err(InvariantViolation::BadIdentifier(s.to_string()))
    }
}

/// Type references must not read as basic types once printed.
fn check_type_ident(s: &str) -> Result<(), InvariantViolation> {
    check_ident(s)?;
    if BasicType::from_keyword(s).is_some() {
        return Err(InvariantViolation::BadIdentifier(s.to_string()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantViolation {
    #[error("`{0}` is not a valid identifier here")]
    BadIdentifier(String),
    #[error("`{0}` is declared more than once")]
    DuplicateDeclaration(String),
    #[error("`{member}` appears more than once in `{owner}`")]
    DuplicateMember { owner: String, member: String },
    #[error("`{basic}` cannot be used there in `{owner}`")]
    MisplacedBasic { owner: String, basic: BasicType },
    #[error("enum refinement in `{0}` must list unique literals")]
    BadEnumRefinement(String),
    #[error("context `{0}` begins inside another context")]
    NestedContext(String),
    #[error("context end without a matching begin")]
    UnmatchedContextEnd,
    #[error("context is never closed")]
    UnclosedContext,
}
