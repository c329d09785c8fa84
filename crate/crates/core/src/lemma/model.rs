//! Typed object graph of a DDML domain model.
//!
//! Every node keeps the source order of the text it was parsed from, and
//! every identifier is stored verbatim. Source positions are carried as
//! [`Origin`] metadata and do not take part in structural equality.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::diagnostic::{Diagnostic, Location, RuleId};

/// Where a node was declared. Compares equal to every other origin so that
/// two models with the same structure are equal regardless of layout.
#[derive(Debug, Clone, Copy, Default)]
pub struct Origin(pub Location);

impl PartialEq for Origin {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Origin {}

impl Origin {
    pub fn location(self) -> Location {
        self.0
    }
}

impl From<Location> for Origin {
    fn from(location: Location) -> Self {
        Origin(location)
    }
}

/// Common surface of the three feature enumerations.
pub trait Feature: Copy + Eq + fmt::Debug + fmt::Display + FromStr + 'static {
    const ALL: &'static [Self];
    fn as_str(self) -> &'static str;
}

macro_rules! feature_enum {
    ($(#[$meta:meta])* $name:ident { $( $variant:ident => $text:literal ),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $( $variant, )+
        }

        impl Feature for $name {
            const ALL: &'static [Self] = &[ $( $name::$variant, )+ ];

            fn as_str(self) -> &'static str {
                match self {
                    $( $name::$variant => $text, )+
                }
            }
        }

        impl FromStr for $name {
            type Err = ();

            fn from_str(s: &str) -> Result<Self, ()> {
                match s {
                    $( $text => Ok($name::$variant), )+
                    _ => Err(()),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

feature_enum! {
    StructureFeature {
        Aggregate => "aggregate",
        DomainEvent => "domainEvent",
        Entity => "entity",
        Factory => "factory",
        Service => "service",
        Repository => "repository",
        Specification => "specification",
        ValueObject => "valueObject",
    }
}

feature_enum! {
    FieldFeature {
        Identifier => "identifier",
        Part => "part",
    }
}

feature_enum! {
    /// `factory` is accepted on functions as well as structures: factory
    /// functions are written `function PSB create<factory>(...)`.
    OperationFeature {
        Closure => "closure",
        Factory => "factory",
        Identifier => "identifier",
        SideEffectFree => "sideEffectFree",
        Validator => "validator",
    }
}

/// Insertion-ordered set of features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSet<F>(Vec<F>);

impl<F> Default for FeatureSet<F> {
    fn default() -> Self {
        FeatureSet(Vec::new())
    }
}

impl<F: Feature> FeatureSet<F> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `feature`, returning `false` if it was already present.
    pub fn insert(&mut self, feature: F) -> bool {
        if self.0.contains(&feature) {
            return false;
        }
        self.0.push(feature);
        true
    }

    pub fn contains(&self, feature: F) -> bool {
        self.0.contains(&feature)
    }

    pub fn iter(&self) -> impl Iterator<Item = F> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<F: Feature> FromIterator<F> for FeatureSet<F> {
    /// Later duplicates are dropped.
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        let mut set = FeatureSet::new();
        for f in iter {
            set.insert(f);
        }
        set
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimitiveType {
    Boolean,
    Int,
    Long,
    Float,
    Double,
    String,
    Date,
    Unspecified,
}

impl PrimitiveType {
    pub const ALL: &'static [PrimitiveType] = &[
        PrimitiveType::Boolean,
        PrimitiveType::Int,
        PrimitiveType::Long,
        PrimitiveType::Float,
        PrimitiveType::Double,
        PrimitiveType::String,
        PrimitiveType::Date,
        PrimitiveType::Unspecified,
    ];

    /// Primitive keywords of the full DDML that this tool does not support.
    pub const UNSUPPORTED: &'static [&'static str] = &["byte", "char", "short"];

    pub fn keyword(self) -> &'static str {
        match self {
            PrimitiveType::Boolean => "boolean",
            PrimitiveType::Int => "int",
            PrimitiveType::Long => "long",
            PrimitiveType::Float => "float",
            PrimitiveType::Double => "double",
            PrimitiveType::String => "string",
            PrimitiveType::Date => "date",
            PrimitiveType::Unspecified => "unspecified",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        PrimitiveType::ALL
            .iter()
            .copied()
            .find(|p| p.keyword() == word)
    }
}

impl fmt::Display for PrimitiveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeRef {
    Primitive(PrimitiveType),
    Named(String),
}

impl TypeRef {
    pub fn named(name: impl Into<String>) -> Self {
        TypeRef::Named(name.into())
    }

    pub fn as_named(&self) -> Option<&str> {
        match self {
            TypeRef::Named(n) => Some(n),
            TypeRef::Primitive(_) => None,
        }
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeRef::Primitive(p) => p.fmt(f),
            TypeRef::Named(n) => f.write_str(n),
        }
    }
}

/// A structure field or an operation parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub name: String,
    pub ty: TypeRef,
    pub features: FeatureSet<FieldFeature>,
    pub origin: Origin,
}

impl Field {
    pub fn new(name: impl Into<String>, ty: TypeRef) -> Self {
        Field {
            name: name.into(),
            ty,
            features: FeatureSet::new(),
            origin: Origin::default(),
        }
    }

    pub fn with_features(mut self, features: impl IntoIterator<Item = FieldFeature>) -> Self {
        self.features = features.into_iter().collect();
        self
    }
}

/// Procedures have no return type; functions always have one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperationKind {
    Procedure,
    Function { returns: TypeRef },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    pub name: String,
    pub kind: OperationKind,
    pub features: FeatureSet<OperationFeature>,
    pub params: Vec<Field>,
    pub origin: Origin,
}

impl Operation {
    pub fn procedure(name: impl Into<String>) -> Self {
        Operation {
            name: name.into(),
            kind: OperationKind::Procedure,
            features: FeatureSet::new(),
            params: Vec::new(),
            origin: Origin::default(),
        }
    }

    pub fn function(name: impl Into<String>, returns: TypeRef) -> Self {
        Operation {
            kind: OperationKind::Function { returns },
            ..Operation::procedure(name)
        }
    }

    pub fn with_features(mut self, features: impl IntoIterator<Item = OperationFeature>) -> Self {
        self.features = features.into_iter().collect();
        self
    }

    pub fn with_params(mut self, params: impl IntoIterator<Item = Field>) -> Self {
        self.params = params.into_iter().collect();
        self
    }

    pub fn return_type(&self) -> Option<&TypeRef> {
        match &self.kind {
            OperationKind::Procedure => None,
            OperationKind::Function { returns } => Some(returns),
        }
    }

    pub fn is_function(&self) -> bool {
        matches!(self.kind, OperationKind::Function { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub name: String,
    pub features: FeatureSet<StructureFeature>,
    pub fields: Vec<Field>,
    pub operations: Vec<Operation>,
    pub origin: Origin,
}

impl Structure {
    pub fn new(name: impl Into<String>) -> Self {
        Structure {
            name: name.into(),
            features: FeatureSet::new(),
            fields: Vec::new(),
            operations: Vec::new(),
            origin: Origin::default(),
        }
    }

    pub fn with_features(mut self, features: impl IntoIterator<Item = StructureFeature>) -> Self {
        self.features = features.into_iter().collect();
        self
    }

    pub fn with_fields(mut self, fields: impl IntoIterator<Item = Field>) -> Self {
        self.fields = fields.into_iter().collect();
        self
    }

    pub fn with_operations(mut self, ops: impl IntoIterator<Item = Operation>) -> Self {
        self.operations = ops.into_iter().collect();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    pub name: String,
    pub element_type: TypeRef,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub name: String,
    pub literals: Vec<String>,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexType {
    Structure(Structure),
    Collection(Collection),
    Enumeration(Enumeration),
}

impl ComplexType {
    pub fn name(&self) -> &str {
        match self {
            ComplexType::Structure(s) => &s.name,
            ComplexType::Collection(c) => &c.name,
            ComplexType::Enumeration(e) => &e.name,
        }
    }

    pub fn origin(&self) -> Origin {
        match self {
            ComplexType::Structure(s) => s.origin,
            ComplexType::Collection(c) => c.origin,
            ComplexType::Enumeration(e) => e.origin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub name: String,
    pub complex_types: Vec<ComplexType>,
    pub origin: Origin,
}

impl Context {
    pub fn new(name: impl Into<String>) -> Self {
        Context {
            name: name.into(),
            complex_types: Vec::new(),
            origin: Origin::default(),
        }
    }

    pub fn with_types(mut self, types: impl IntoIterator<Item = ComplexType>) -> Self {
        self.complex_types = types.into_iter().collect();
        self
    }

    pub fn structures(&self) -> impl Iterator<Item = &Structure> {
        self.complex_types.iter().filter_map(|t| match t {
            ComplexType::Structure(s) => Some(s),
            _ => None,
        })
    }

    pub fn find_type(&self, name: &str) -> Option<&ComplexType> {
        self.complex_types.iter().find(|t| t.name() == name)
    }
}

/// Root of a parsed DDML file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DomainModel {
    pub contexts: Vec<Context>,
}

impl DomainModel {
    pub fn new(contexts: impl IntoIterator<Item = Context>) -> Self {
        DomainModel {
            contexts: contexts.into_iter().collect(),
        }
    }
}

/// Reports every named type reference that does not resolve to a complex
/// type of its enclosing context.
pub fn resolve_references(model: &DomainModel) -> Vec<Diagnostic> {
    // type name -> contexts declaring it, for better messages
    let mut declared_in: HashMap<&str, Vec<&str>> = HashMap::new();
    for ctx in &model.contexts {
        for ty in &ctx.complex_types {
            declared_in.entry(ty.name()).or_default().push(&ctx.name);
        }
    }

    let mut diagnostics = Vec::new();
    for ctx in &model.contexts {
        let local: HashSet<&str> = ctx.complex_types.iter().map(ComplexType::name).collect();
        let mut check = |ty: &TypeRef, origin: Origin| {
            let Some(name) = ty.as_named() else { return };
            if local.contains(name) {
                return;
            }
            let message = match declared_in.get(name) {
                Some(elsewhere) => format!(
                    "type `{name}` is declared in context `{}`, not in `{}`; references may not cross context boundaries",
                    elsewhere[0], ctx.name
                ),
                None => format!("unknown type `{name}` in context `{}`", ctx.name),
            };
            diagnostics.push(Diagnostic::error(
                RuleId::UnresolvedReference,
                origin.location(),
                message,
            ));
        };

        for ty in &ctx.complex_types {
            match ty {
                ComplexType::Structure(s) => {
                    for field in &s.fields {
                        check(&field.ty, field.origin);
                    }
                    for op in &s.operations {
                        if let Some(ret) = op.return_type() {
                            check(ret, op.origin);
                        }
                        for p in &op.params {
                            check(&p.ty, p.origin);
                        }
                    }
                }
                ComplexType::Collection(c) => check(&c.element_type, c.origin),
                ComplexType::Enumeration(_) => {}
            }
        }
    }
    diagnostics
}
