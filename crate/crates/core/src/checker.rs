//! DDD consistency checks over annotated Jolie documents.
//!
//! The checks only look at the generated document and follow the names the
//! encoder leaves behind: `///@` annotations, `<op>_type` request types and
//! the `///@beginCtx`/`///@endCtx` brackets.

use std::collections::HashMap;
use std::path::Path;

use crate::diagnostic::{Diagnostic, Location, RuleId, Severity};
use crate::encoder::{EncodingOutcome, SELF_LEAF};
use crate::jolie::*;

#[derive(Debug, Clone)]
struct Finding {
    rule: RuleId,
    severity: Severity,
    message: String,
    item: usize,
    member: Option<usize>,
}

impl Finding {
    fn error(rule: RuleId, item: usize, member: Option<usize>, message: String) -> Self {
        Finding {
            rule,
            severity: Severity::Error,
            message,
            item,
            member,
        }
    }

    fn warning(rule: RuleId, item: usize, member: Option<usize>, message: String) -> Self {
        Finding {
            severity: Severity::Warning,
            ..Finding::error(rule, item, member, message)
        }
    }

    fn sort_key(&self) -> (usize, Option<usize>, RuleId) {
        (self.item, self.member, self.rule)
    }
}

struct DocIndex<'a> {
    doc: &'a JolieDocument,
    types: HashMap<&'a str, (usize, &'a TypeDecl)>,
    /// Enclosing context (ordinal of its `beginCtx`) per item.
    context_of: Vec<Option<usize>>,
    context_names: Vec<&'a str>,
}

impl<'a> DocIndex<'a> {
    fn new(doc: &'a JolieDocument) -> Self {
        let mut types = HashMap::new();
        let mut context_of = Vec::with_capacity(doc.items.len());
        let mut context_names = Vec::new();
        let mut current = None;
        for (i, item) in doc.items.iter().enumerate() {
            match item {
                DocumentItem::CtxBegin(name) => {
                    context_names.push(name.as_str());
                    current = Some(context_names.len() - 1);
                }
                DocumentItem::CtxEnd => current = None,
                DocumentItem::Type(decl) => {
                    types.entry(decl.name.as_str()).or_insert((i, decl));
                }
                DocumentItem::Interface(_) => {}
            }
            context_of.push(current);
        }
        DocIndex {
            doc,
            types,
            context_of,
            context_names,
        }
    }

    fn lookup(&self, name: &str) -> Option<(usize, &'a TypeDecl)> {
        self.types.get(name).copied()
    }

    fn interfaces(&self) -> impl Iterator<Item = (usize, &'a InterfaceDecl)> {
        self.doc
            .items
            .iter()
            .enumerate()
            .filter_map(|(i, item)| match item {
                DocumentItem::Interface(d) => Some((i, d)),
                _ => None,
            })
    }

    fn type_items(&self) -> impl Iterator<Item = (usize, &'a TypeDecl)> {
        self.doc
            .items
            .iter()
            .enumerate()
            .filter_map(|(i, item)| match item {
                DocumentItem::Type(d) => Some((i, d)),
                _ => None,
            })
    }

    fn context_name(&self, item: usize) -> &str {
        self.context_of[item].map_or("<no context>", |c| self.context_names[c])
    }

    /// A declared type from another context that is not a value object.
    fn foreign_non_vo(&self, from_item: usize, name: &str) -> Option<usize> {
        let (target, decl) = self.lookup(name)?;
        let crosses = self.context_of[target] != self.context_of[from_item];
        (crosses && !decl.has(Annotation::ValueObject)).then_some(target)
    }
}

fn factory_findings(ix: &DocIndex<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for (i, iface) in ix.interfaces() {
        for (j, op) in iface.operations.iter().enumerate() {
            let Some((_, request)) = op.request.as_named().and_then(|n| ix.lookup(n)) else {
                continue;
            };
            if !request.has(Annotation::Factory) {
                continue;
            }
            match op.response.as_named().filter(|n| ix.lookup(n).is_some()) {
                Some(product) => {
                    if let Some(leaf) = request
                        .children()
                        .iter()
                        .find(|c| c.ty.as_named() == Some(product))
                    {
                        out.push(Finding::error(
                            RuleId::FactoryInputContainsProduct,
                            i,
                            Some(j),
                            format!(
                                "factory `{}` takes its own product `{product}` as input (leaf `{}` of `{}`)",
                                op.name, leaf.name, request.name
                            ),
                        ));
                    }
                }
                None => out.push(Finding::error(
                    RuleId::FactoryResponseNotType,
                    i,
                    Some(j),
                    format!(
                        "factory `{}` responds with `{}`, which is not a declared type",
                        op.name, op.response
                    ),
                )),
            }
        }
    }
    out
}

fn validator_findings(ix: &DocIndex<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for (i, iface) in ix.interfaces() {
        for (j, op) in iface.operations.iter().enumerate() {
            if !op.has(Annotation::Validator) {
                continue;
            }
            if op.response != TypeName::Basic(BasicType::Bool) {
                out.push(Finding::error(
                    RuleId::ValidatorResponseNotBool,
                    i,
                    Some(j),
                    format!(
                        "validator `{}` responds with `{}` instead of `bool`",
                        op.name, op.response
                    ),
                ));
            }
            let request = op.request.as_named().and_then(|n| ix.lookup(n));
            if !request.is_some_and(|(_, decl)| decl.has(Annotation::Specification)) {
                out.push(Finding::error(
                    RuleId::ValidatorMissingSpecification,
                    i,
                    Some(j),
                    format!(
                        "request type `{}` of validator `{}` is not annotated `///@specification`",
                        op.request, op.name
                    ),
                ));
            }
            if let Some((_, decl)) = request {
                let leaves: Vec<_> = decl
                    .children()
                    .iter()
                    .filter(|c| c.name != SELF_LEAF)
                    .collect();
                let validates_structure = decl.is_tree()
                    && leaves.len() == 1
                    && leaves[0]
                        .ty
                        .as_named()
                        .and_then(|n| ix.lookup(n))
                        .is_some_and(|(_, target)| target.is_tree());
                if !validates_structure {
                    out.push(Finding::error(
                        RuleId::ValidatorArity,
                        i,
                        Some(j),
                        format!(
                            "request type `{}` of validator `{}` must have exactly one leaf typed by a structure, found {}",
                            decl.name,
                            op.name,
                            leaves.len()
                        ),
                    ));
                }
            }
        }
    }
    out
}

fn context_findings(ix: &DocIndex<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for (i, decl) in ix.type_items() {
        for (j, child) in decl.children().iter().enumerate() {
            let Some(target) = child.ty.as_named().and_then(|n| ix.foreign_non_vo(i, n)) else {
                continue;
            };
            out.push(Finding::error(
                RuleId::CrossContextLeaf,
                i,
                Some(j),
                format!(
                    "leaf `{}` of `{}` (context {}) has type `{}` from context {}, which is not a value object",
                    child.name,
                    decl.name,
                    ix.context_name(i),
                    child.ty.as_named().unwrap_or_default(),
                    ix.context_name(target)
                ),
            ));
        }
    }
    for (i, iface) in ix.interfaces() {
        for (j, op) in iface.operations.iter().enumerate() {
            let crossing = [&op.request, &op.response].into_iter().find_map(|tp| {
                let name = tp.as_named()?;
                ix.foreign_non_vo(i, name).map(|target| (name, target))
            });
            if let Some((name, target)) = crossing {
                out.push(Finding::error(
                    RuleId::CrossContextOperation,
                    i,
                    Some(j),
                    format!(
                        "operation `{}` of `{}` (context {}) exchanges `{name}` from context {}, which is not a value object",
                        op.name,
                        iface.name,
                        ix.context_name(i),
                        ix.context_name(target)
                    ),
                ));
            }
        }
    }
    out
}

fn entity_findings(ix: &DocIndex<'_>) -> Vec<Finding> {
    let mut out = Vec::new();
    for (i, decl) in ix.type_items() {
        if decl.has(Annotation::Aggregate) && !decl.has(Annotation::Entity) {
            out.push(Finding::warning(
                RuleId::AggregateWithoutEntity,
                i,
                None,
                format!("aggregate `{}` does not specify a root entity", decl.name),
            ));
        }
        for (j, child) in decl.children().iter().enumerate() {
            if !child.annotations.contains(&Annotation::Part) {
                continue;
            }
            let ok = child
                .ty
                .as_named()
                .and_then(|n| ix.lookup(n))
                .is_some_and(|(_, t)| t.has(Annotation::Entity) || t.has(Annotation::ValueObject));
            if !ok {
                out.push(Finding::warning(
                    RuleId::PartNotEntityOrVo,
                    i,
                    Some(j),
                    format!(
                        "part `{}` of `{}` is neither an entity nor a value object",
                        child.name, decl.name
                    ),
                ));
            }
        }
    }
    out
}

fn with_layout(doc: &JolieDocument, findings: Vec<Finding>) -> Vec<Diagnostic> {
    let (_, layout) = render_with_layout(doc);
    let mut findings = findings;
    findings.sort_by_key(Finding::sort_key);
    findings
        .into_iter()
        .map(|f| {
            let location = match f.member {
                Some(m) => layout.member(f.item, m),
                None => layout.item(f.item),
            };
            to_diagnostic(f, location, None)
        })
        .collect()
}

fn to_diagnostic(f: Finding, location: Location, path: Option<&Path>) -> Diagnostic {
    Diagnostic {
        severity: f.severity,
        rule: f.rule,
        message: f.message,
        location,
        source_path: path.map(Path::to_path_buf),
    }
}

/// Factory operations must not consume their product and must respond with it.
pub fn check_factory(doc: &JolieDocument) -> Vec<Diagnostic> {
    with_layout(doc, factory_findings(&DocIndex::new(doc)))
}

/// Validators respond `bool` and take a `///@specification` request type
/// with a single structure-typed leaf.
pub fn check_validator(doc: &JolieDocument) -> Vec<Diagnostic> {
    with_layout(doc, validator_findings(&DocIndex::new(doc)))
}

/// Only value objects may cross context boundaries.
pub fn check_context_boundaries(doc: &JolieDocument) -> Vec<Diagnostic> {
    with_layout(doc, context_findings(&DocIndex::new(doc)))
}

/// Warnings for aggregates without a root entity and for parts that are
/// neither entities nor value objects.
pub fn check_entity(doc: &JolieDocument) -> Vec<Diagnostic> {
    with_layout(doc, entity_findings(&DocIndex::new(doc)))
}

/// Runs every check. Findings are ordered by document position, then rule.
/// Locations point into the source model wherever provenance is known.
pub fn check_all(outcome: &EncodingOutcome) -> Vec<Diagnostic> {
    check_outcome(outcome, None, None)
}

/// Like [`check_all`], tagging diagnostics with the model path when they
/// point into the source model and with the output path otherwise.
pub fn check_outcome(
    outcome: &EncodingOutcome,
    model_path: Option<&Path>,
    output_path: Option<&Path>,
) -> Vec<Diagnostic> {
    let doc = &outcome.document;
    let ix = DocIndex::new(doc);
    let mut findings: Vec<Finding> = [
        factory_findings,
        validator_findings,
        context_findings,
        entity_findings,
    ]
    .iter()
    .flat_map(|check| check(&ix))
    .collect();
    findings.sort_by_key(Finding::sort_key);

    let (_, layout) = render_with_layout(doc);
    findings
        .into_iter()
        .map(|f| {
            let item = &doc.items[f.item];
            let member_name = f.member.map(|m| member_name(item, m));
            let source = item
                .decl_name()
                .and_then(|name| outcome.provenance.get(name))
                .map(|prov| {
                    member_name
                        .and_then(|m| prov.members.get(m).copied())
                        .unwrap_or(prov.location)
                });
            match source {
                Some(location) => to_diagnostic(f, location, model_path),
                None => {
                    let location = match f.member {
                        Some(m) => layout.member(f.item, m),
                        None => layout.item(f.item),
                    };
                    to_diagnostic(f, location, output_path)
                }
            }
        })
        .collect()
}

fn member_name(item: &DocumentItem, index: usize) -> &str {
    match item {
        DocumentItem::Type(t) => &t.children()[index].name,
        DocumentItem::Interface(i) => &i.operations[index].name,
        _ => "",
    }
}
