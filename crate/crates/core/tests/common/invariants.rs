//! Encoding laws, stated against the source model and checked through the
//! provenance map. Each function returns human-readable violations.

use std::collections::HashMap;

use lemma2jolie::encoder::{EncodingOutcome, ItemKind};
use lemma2jolie::jolie::*;
use lemma2jolie::lemma::*;

/// Field-less specifications made only of functions have no type of their own.
fn owner_elided(s: &Structure) -> bool {
    s.fields.is_empty()
        && s.features.contains(StructureFeature::Specification)
        && !s.operations.is_empty()
        && s.operations.iter().all(Operation::is_function)
}

/// Plain zero-parameter functions take the structure itself as request.
fn request_elided(op: &Operation, s: &Structure) -> bool {
    op.is_function()
        && op.params.is_empty()
        && ![
            OperationFeature::Factory,
            OperationFeature::Identifier,
            OperationFeature::Validator,
        ]
        .iter()
        .any(|f| op.features.contains(*f))
        && !owner_elided(s)
}

fn kinds(outcome: &EncodingOutcome) -> HashMap<&str, ItemKind> {
    outcome
        .provenance
        .iter()
        .map(|(name, p)| (name.as_str(), p.kind))
        .collect()
}

fn structures(model: &DomainModel) -> impl Iterator<Item = (&Context, &Structure)> {
    model
        .contexts
        .iter()
        .flat_map(|c| c.structures().map(move |s| (c, s)))
}

/// One type per structure, except elided specifications; one per request
/// type, collection and enumeration; nothing else.
pub fn structure_count(model: &DomainModel, outcome: &EncodingOutcome) -> Vec<String> {
    let mut out = Vec::new();
    let kinds = kinds(outcome);
    let mut expected_types = 0;
    for (_, s) in structures(model) {
        let has = kinds.get(s.name.as_str()) == Some(&ItemKind::StructureType);
        if has == owner_elided(s) {
            out.push(format!("structure {}: type present = {has}", s.name));
        }
        expected_types += usize::from(!owner_elided(s));
        expected_types += s
            .operations
            .iter()
            .filter(|op| !request_elided(op, s))
            .count();
    }
    for ctx in &model.contexts {
        expected_types += ctx
            .complex_types
            .iter()
            .filter(|t| !matches!(t, ComplexType::Structure(_)))
            .count();
    }
    let actual = outcome.document.types().count();
    if actual != expected_types {
        out.push(format!("{actual} types, expected {expected_types}"));
    }
    out
}

/// `S_interface` exists iff `S` has operations, with one operation each.
pub fn interface_iff_operations(model: &DomainModel, outcome: &EncodingOutcome) -> Vec<String> {
    let mut out = Vec::new();
    for (_, s) in structures(model) {
        let name = format!("{}_interface", s.name);
        let iface = outcome.document.interfaces().find(|i| i.name == name);
        match (iface, s.operations.is_empty()) {
            (Some(_), true) => out.push(format!("{name} exists without operations")),
            (None, false) => out.push(format!("{name} missing")),
            (Some(i), false) => {
                let names: Vec<&str> = i.operations.iter().map(|o| o.name.as_str()).collect();
                let expected: Vec<&str> = s.operations.iter().map(|o| o.name.as_str()).collect();
                if names != expected {
                    out.push(format!("{name} lists {names:?}, expected {expected:?}"));
                }
            }
            (None, true) => {}
        }
    }
    let expected = structures(model)
        .filter(|(_, s)| !s.operations.is_empty())
        .count();
    if outcome.document.interfaces().count() != expected {
        out.push("interface count mismatch".into());
    }
    out
}

/// Request types exist unless elided; they start with `self?: S` iff the
/// operation is no factory and `S` keeps its type.
pub fn self_leaf(model: &DomainModel, outcome: &EncodingOutcome) -> Vec<String> {
    let mut out = Vec::new();
    for (_, s) in structures(model) {
        for op in &s.operations {
            let req_name = format!("{}_type", op.name);
            let decl = outcome.document.find_type(&req_name);
            if decl.is_some() == request_elided(op, s) {
                out.push(format!("{req_name}: present = {}", decl.is_some()));
                continue;
            }
            let Some(decl) = decl else { continue };
            let want_self = !op.features.contains(OperationFeature::Factory) && !owner_elided(s);
            let selves: Vec<&TypeNode> = decl
                .children()
                .iter()
                .filter(|c| c.name == "self")
                .collect();
            let first_is_self = decl.children().first().is_some_and(|c| {
                c.name == "self"
                    && c.cardinality == Cardinality::Optional
                    && c.ty == NodeType::named(s.name.clone())
            });
            if want_self != (first_is_self && selves.len() == 1)
                || (!want_self && !selves.is_empty())
            {
                out.push(format!("{req_name}: self leaf expected = {want_self}"));
            }
            if decl.children().len() != op.params.len() + usize::from(want_self) {
                out.push(format!("{req_name}: wrong leaf count"));
            }
        }
    }
    out
}

/// Every source feature shows up exactly once, on the matching Jolie element.
pub fn annotation_conservation(model: &DomainModel, outcome: &EncodingOutcome) -> Vec<String> {
    let doc = &outcome.document;
    let mut out = Vec::new();
    let mut expected_total = 0;
    let leaf =
        |decl: &TypeDecl, name: &str| decl.children().iter().find(|c| c.name == name).cloned();

    for (_, s) in structures(model) {
        expected_total += s.features.len();
        let owner = if owner_elided(s) {
            doc.find_type(&format!("{}_type", s.operations[0].name))
        } else {
            doc.find_type(&s.name)
        };
        for f in s.features.iter() {
            if !owner.is_some_and(|d| d.has(f.into())) {
                out.push(format!("{}: feature {f} lost", s.name));
            }
        }
        if let Some(decl) = doc.find_type(&s.name) {
            for field in &s.fields {
                expected_total += field.features.len();
                let node = leaf(decl, &field.name);
                for f in field.features.iter() {
                    if !node
                        .as_ref()
                        .is_some_and(|n| n.annotations.contains(&f.into()))
                    {
                        out.push(format!("{}.{}: feature {f} lost", s.name, field.name));
                    }
                }
            }
        }
        let iface = doc
            .interfaces()
            .find(|i| i.name == format!("{}_interface", s.name));
        for op in &s.operations {
            expected_total += op.features.len();
            let req = doc.find_type(&format!("{}_type", op.name));
            let encoded = iface.and_then(|i| i.operations.iter().find(|o| o.name == op.name));
            for f in op.features.iter() {
                let ok = if f == OperationFeature::Factory {
                    req.is_some_and(|r| r.has(Annotation::Factory))
                } else {
                    encoded.is_some_and(|o| o.has(f.into()))
                };
                if !ok {
                    out.push(format!("{}.{}: feature {f} lost", s.name, op.name));
                }
            }
            for p in &op.params {
                expected_total += p.features.len();
                let node = req.and_then(|r| leaf(r, &p.name));
                for f in p.features.iter() {
                    if !node
                        .as_ref()
                        .is_some_and(|n| n.annotations.contains(&f.into()))
                    {
                        out.push(format!(
                            "{}.{}({}): feature {f} lost",
                            s.name, op.name, p.name
                        ));
                    }
                }
            }
        }
    }

    let actual: usize = doc
        .items
        .iter()
        .map(|item| match item {
            DocumentItem::Type(t) => {
                t.annotations.len()
                    + t.children()
                        .iter()
                        .map(|c| c.annotations.len())
                        .sum::<usize>()
            }
            DocumentItem::Interface(i) => {
                i.annotations.len()
                    + i.operations
                        .iter()
                        .map(|o| o.annotations.len())
                        .sum::<usize>()
            }
            _ => 0,
        })
        .sum();
    if actual != expected_total {
        out.push(format!("{actual} annotations, expected {expected_total}"));
    }
    out
}

/// Every generated declaration sits between the markers of its source context.
pub fn context_bracketing(model: &DomainModel, outcome: &EncodingOutcome) -> Vec<String> {
    let mut out = Vec::new();
    let mut current: Option<&str> = None;
    let mut opened = Vec::new();
    for item in &outcome.document.items {
        match item {
            DocumentItem::CtxBegin(name) => {
                if current.is_some() {
                    out.push(format!("context {name} opened inside another"));
                }
                current = Some(name);
                opened.push(name.as_str());
            }
            DocumentItem::CtxEnd => {
                if current.take().is_none() {
                    out.push("unmatched endCtx".into());
                }
            }
            other => {
                let name = other.decl_name().unwrap_or_default();
                match outcome.provenance.get(name) {
                    Some(p) if Some(p.context.as_str()) == current => {}
                    Some(p) => out.push(format!("{name} from {} placed in {current:?}", p.context)),
                    None => out.push(format!("{name} has no provenance")),
                }
            }
        }
    }
    if current.is_some() {
        out.push("unclosed context".into());
    }
    let expected: Vec<&str> = model.contexts.iter().map(|c| c.name.as_str()).collect();
    if opened != expected {
        out.push(format!("contexts {opened:?}, expected {expected:?}"));
    }
    if outcome.provenance.len() != outcome.document.items.len() - 2 * expected.len() {
        out.push("provenance does not cover every declaration".into());
    }
    out
}

pub type Law = fn(&DomainModel, &EncodingOutcome) -> Vec<String>;

pub const LAWS: &[(&str, Law)] = &[
    ("structure-count", structure_count),
    ("interface-iff-operations", interface_iff_operations),
    ("self-leaf", self_leaf),
    ("annotation-conservation", annotation_conservation),
    ("context-bracketing", context_bracketing),
];
