//! Translation of DDML domain models into Jolie API documents.
//!
//! Three cooperating encoders:
//!
//! * the main encoder walks contexts and complex types, emitting context
//!   markers and type declarations (including one request type per
//!   operation);
//! * the operations encoder turns a structure's operations into a
//!   `<Structure>_interface` of request-response operations;
//! * the structure encoder maps fields, primitives, collections and enums to
//!   tree leaves and basic types.
//!
//! Operations become functions over the enclosing structure: request types
//! carry an optional `self` leaf holding the structure's state, procedures
//! respond with the (new) structure, and functions respond with their return
//! type. Factories take no `self`. DDD features survive as `///@` annotations.

use std::collections::{BTreeMap, HashMap};

use crate::diagnostic::{Diagnostic, Location, RuleId};
use crate::jolie::*;
use crate::lemma::*;

pub const INTERFACE_SUFFIX: &str = "_interface";
pub const REQUEST_SUFFIX: &str = "_type";
pub const SELF_LEAF: &str = "self";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ItemKind {
    StructureType,
    RequestType,
    Interface,
    Collection,
    Enumeration,
}

/// Source node a generated declaration was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub context: String,
    pub complex_type: String,
    pub operation: Option<String>,
    pub kind: ItemKind,
    pub location: Location,
    /// Source locations of the declaration's leaves or operations, by name.
    pub members: BTreeMap<String, Location>,
}

impl Provenance {
    /// `context/type[/operation]`
    pub fn path(&self) -> String {
        match &self.operation {
            Some(op) => format!("{}/{}/{op}", self.context, self.complex_type),
            None => format!("{}/{}", self.context, self.complex_type),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingOutcome {
    pub document: JolieDocument,
    /// Keyed by generated type or interface name.
    pub provenance: BTreeMap<String, Provenance>,
}

/// Everything a single structure contributes, in emission order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedStructure {
    pub type_decl: Option<TypeDecl>,
    pub request_types: Vec<TypeDecl>,
    pub interface: Option<InterfaceDecl>,
}

pub fn map_primitive(p: PrimitiveType) -> BasicType {
    match p {
        PrimitiveType::Boolean => BasicType::Bool,
        PrimitiveType::Int => BasicType::Int,
        PrimitiveType::Long => BasicType::Long,
        PrimitiveType::Float | PrimitiveType::Double => BasicType::Double,
        PrimitiveType::String | PrimitiveType::Date => BasicType::String,
        PrimitiveType::Unspecified => BasicType::Undefined,
    }
}

fn node_type(ty: &TypeRef) -> NodeType {
    match ty {
        TypeRef::Primitive(p) => NodeType::basic(map_primitive(*p)),
        TypeRef::Named(n) => NodeType::named(n.clone()),
    }
}

fn type_name(ty: &TypeRef) -> TypeName {
    match ty {
        TypeRef::Primitive(p) => TypeName::Basic(map_primitive(*p)),
        TypeRef::Named(n) => TypeName::named(n.clone()),
    }
}

fn encode_field(field: &Field) -> TypeNode {
    TypeNode::new(field.name.clone(), node_type(&field.ty))
        .annotated(field.features.iter().map(Annotation::from))
}

/// A field-less specification holding only functions gets no type of its
/// own; its annotations move to the first operation's request type.
pub fn elides_structure_type(s: &Structure) -> bool {
    s.fields.is_empty()
        && s.features.contains(StructureFeature::Specification)
        && !s.operations.is_empty()
        && s.operations.iter().all(Operation::is_function)
}

/// Zero-parameter functions take the enclosing structure itself as request,
/// unless they need a dedicated request type (factories, identifiers,
/// validators) or the structure has no type to pass.
pub fn elides_request_type(op: &Operation, enclosing: &Structure) -> bool {
    op.is_function()
        && op.params.is_empty()
        && !op.features.contains(OperationFeature::Factory)
        && !op.features.contains(OperationFeature::Identifier)
        && !op.features.contains(OperationFeature::Validator)
        && !elides_structure_type(enclosing)
}

pub fn request_type_name(op: &Operation) -> String {
    format!("{}{REQUEST_SUFFIX}", op.name)
}

pub fn interface_name(s: &Structure) -> String {
    format!("{}{INTERFACE_SUFFIX}", s.name)
}

/// `op_type: void { self?: S, params... }`, or `None` when the request is
/// the enclosing structure itself.
pub fn encode_operation_request(op: &Operation, enclosing: &Structure) -> Option<TypeDecl> {
    if elides_request_type(op, enclosing) {
        return None;
    }
    let elided_owner = elides_structure_type(enclosing);
    let mut children = Vec::with_capacity(op.params.len() + 1);
    if !op.features.contains(OperationFeature::Factory) && !elided_owner {
        children.push(
            TypeNode::new(SELF_LEAF, NodeType::named(enclosing.name.clone()))
                .with_cardinality(Cardinality::Optional),
        );
    }
    children.extend(op.params.iter().map(encode_field));

    let mut annotations = Vec::new();
    let is_first = enclosing
        .operations
        .first()
        .map(|first| first.name == op.name)
        == Some(true);
    if elided_owner && is_first {
        annotations.extend(enclosing.features.iter().map(Annotation::from));
    }
    if op.features.contains(OperationFeature::Factory) {
        annotations.push(Annotation::Factory);
    }
    Some(TypeDecl::tree(request_type_name(op), children).annotated(annotations))
}

pub fn encode_operation(op: &Operation, enclosing: &Structure) -> RequestResponseOp {
    let request = if elides_request_type(op, enclosing) {
        TypeName::named(enclosing.name.clone())
    } else {
        TypeName::named(request_type_name(op))
    };
    let response = match &op.kind {
        OperationKind::Procedure => TypeName::named(enclosing.name.clone()),
        OperationKind::Function { returns } => type_name(returns),
    };
    // the factory marker sits on the request type
    let annotations = op
        .features
        .iter()
        .filter(|f| *f != OperationFeature::Factory)
        .map(Annotation::from);
    RequestResponseOp::new(op.name.clone(), request, response).annotated(annotations)
}

pub fn encode_structure(s: &Structure) -> EncodedStructure {
    let type_decl = (!elides_structure_type(s)).then(|| {
        TypeDecl::tree(s.name.clone(), s.fields.iter().map(encode_field))
            .annotated(s.features.iter().map(Annotation::from))
    });
    let request_types = s
        .operations
        .iter()
        .filter_map(|op| encode_operation_request(op, s))
        .collect();
    let interface = (!s.operations.is_empty()).then(|| {
        InterfaceDecl::new(
            interface_name(s),
            s.operations.iter().map(|op| encode_operation(op, s)),
        )
    });
    EncodedStructure {
        type_decl,
        request_types,
        interface,
    }
}

pub fn encode_collection(c: &Collection) -> TypeDecl {
    TypeDecl::tree(
        c.name.clone(),
        [TypeNode::new(c.name.clone(), node_type(&c.element_type))
            .with_cardinality(Cardinality::Star)],
    )
}

pub fn encode_enum(e: &Enumeration) -> TypeDecl {
    TypeDecl {
        name: e.name.clone(),
        annotations: Vec::new(),
        body: TypeBody::Basic {
            basic: BasicType::String,
            refinement: Some(Refinement::Enum(e.literals.clone())),
        },
    }
}

/// Encodes a whole model. References must resolve; generated names must be
/// unique across the document and must not read as Jolie basic types.
pub fn encode_model(model: &DomainModel) -> Result<EncodingOutcome, Vec<Diagnostic>> {
    let unresolved = resolve_references(model);
    if !unresolved.is_empty() {
        return Err(unresolved);
    }

    let mut builder = Builder::default();
    for ctx in &model.contexts {
        builder.items.push(DocumentItem::CtxBegin(ctx.name.clone()));
        for ty in &ctx.complex_types {
            match ty {
                ComplexType::Structure(s) => builder.structure(ctx, s),
                ComplexType::Collection(c) => {
                    let members = BTreeMap::from([(c.name.clone(), c.origin.location())]);
                    let prov = builder.provenance(
                        ctx,
                        &c.name,
                        None,
                        ItemKind::Collection,
                        c.origin,
                        members,
                    );
                    builder.push(DocumentItem::Type(encode_collection(c)), prov);
                }
                ComplexType::Enumeration(e) => {
                    let prov = builder.provenance(
                        ctx,
                        &e.name,
                        None,
                        ItemKind::Enumeration,
                        e.origin,
                        BTreeMap::new(),
                    );
                    builder.push(DocumentItem::Type(encode_enum(e)), prov);
                }
            }
        }
        builder.items.push(DocumentItem::CtxEnd);
    }

    if !builder.errors.is_empty() {
        return Err(builder.errors);
    }
    let document = JolieDocument {
        items: builder.items,
    };
    debug_assert_eq!(document.validate(), Ok(()));
    Ok(EncodingOutcome {
        document,
        provenance: builder.provenance,
    })
}

#[derive(Default)]
struct Builder {
    items: Vec<DocumentItem>,
    provenance: BTreeMap<String, Provenance>,
    errors: Vec<Diagnostic>,
    first_seen: HashMap<String, String>,
}

impl Builder {
    fn provenance(
        &self,
        ctx: &Context,
        complex_type: &str,
        operation: Option<&Operation>,
        kind: ItemKind,
        origin: Origin,
        members: BTreeMap<String, Location>,
    ) -> Provenance {
        Provenance {
            context: ctx.name.clone(),
            complex_type: complex_type.to_string(),
            operation: operation.map(|op| op.name.clone()),
            kind,
            location: origin.location(),
            members,
        }
    }

    fn push(&mut self, item: DocumentItem, prov: Provenance) {
        let name = item
            .decl_name()
            .expect("only declarations carry provenance")
            .to_string();
        if BasicType::from_keyword(&name).is_some() {
            self.errors.push(Diagnostic::error(
                RuleId::GenNameClash,
                prov.location,
                format!(
                    "generated name `{name}` (from {}) collides with a Jolie basic type",
                    prov.path()
                ),
            ));
            return;
        }
        if let Some(first) = self.first_seen.get(&name) {
            self.errors.push(Diagnostic::error(
                RuleId::GenNameClash,
                prov.location,
                format!(
                    "generated name `{name}` (from {}) is already generated from {first}",
                    prov.path()
                ),
            ));
            return;
        }
        if let DocumentItem::Type(decl) = &item {
            if let Some(dup) = first_duplicate(decl.children().iter().map(|c| c.name.as_str())) {
                self.errors.push(Diagnostic::error(
                    RuleId::GenNameClash,
                    prov.location,
                    format!(
                        "generated type `{name}` (from {}) has two leaves named `{dup}`",
                        prov.path()
                    ),
                ));
                return;
            }
        }
        self.first_seen.insert(name.clone(), prov.path());
        self.provenance.insert(name, prov);
        self.items.push(item);
    }

    fn structure(&mut self, ctx: &Context, s: &Structure) {
        let encoded = encode_structure(s);
        if let Some(decl) = encoded.type_decl {
            let members = s
                .fields
                .iter()
                .map(|f| (f.name.clone(), f.origin.location()))
                .collect();
            let prov = self.provenance(
                ctx,
                &s.name,
                None,
                ItemKind::StructureType,
                s.origin,
                members,
            );
            self.push(DocumentItem::Type(decl), prov);
        }

        let mut requests = encoded.request_types.into_iter();
        for op in &s.operations {
            if elides_request_type(op, s) {
                continue;
            }
            let decl = requests
                .next()
                .expect("one request type per non-elided operation");
            let mut members: BTreeMap<_, _> = op
                .params
                .iter()
                .map(|p| (p.name.clone(), p.origin.location()))
                .collect();
            members
                .entry(SELF_LEAF.to_string())
                .or_insert(op.origin.location());
            let prov = self.provenance(
                ctx,
                &s.name,
                Some(op),
                ItemKind::RequestType,
                op.origin,
                members,
            );
            self.push(DocumentItem::Type(decl), prov);
        }

        if let Some(interface) = encoded.interface {
            let members = s
                .operations
                .iter()
                .map(|op| (op.name.clone(), op.origin.location()))
                .collect();
            let prov = self.provenance(ctx, &s.name, None, ItemKind::Interface, s.origin, members);
            self.push(DocumentItem::Interface(interface), prov);
        }
    }
}

fn first_duplicate<'a>(names: impl Iterator<Item = &'a str>) -> Option<&'a str> {
    let mut seen = std::collections::HashSet::new();
    names.into_iter().find(|n| !seen.insert(*n))
}
