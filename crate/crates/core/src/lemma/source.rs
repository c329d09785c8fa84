//! Emits DDML source text from a model. Used for debugging and for checking
//! that the parser accepts everything the model can express.

use std::fmt::Write;

use super::model::*;

pub fn render_source(model: &DomainModel) -> String {
    let mut out = String::new();
    for (i, ctx) in model.contexts.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "context {} {{", ctx.name);
        for ty in &ctx.complex_types {
            match ty {
                ComplexType::Structure(s) => structure(&mut out, s),
                ComplexType::Collection(c) => {
                    let _ = writeln!(out, "    collection {} {{ {} }}", c.name, c.element_type);
                }
                ComplexType::Enumeration(e) => {
                    let _ = writeln!(out, "    enum {} {{ {} }}", e.name, e.literals.join(", "));
                }
            }
        }
        out.push_str("}\n");
    }
    out
}

fn features<F: Feature>(set: &FeatureSet<F>) -> String {
    if set.is_empty() {
        return String::new();
    }
    let names: Vec<_> = set.iter().map(F::as_str).collect();
    format!("<{}>", names.join(", "))
}

fn field(f: &Field) -> String {
    format!("{} {}{}", f.ty, f.name, features(&f.features))
}

fn structure(out: &mut String, s: &Structure) {
    let _ = writeln!(out, "    structure {}{} {{", s.name, features(&s.features));
    let members: Vec<String> = s
        .fields
        .iter()
        .map(field)
        .chain(s.operations.iter().map(|op| {
            let params: Vec<_> = op.params.iter().map(field).collect();
            let head = match &op.kind {
                OperationKind::Procedure => "procedure".to_string(),
                OperationKind::Function { returns } => format!("function {returns}"),
            };
            format!(
                "{head} {}{}({})",
                op.name,
                features(&op.features),
                params.join(", ")
            )
        }))
        .collect();
    for (i, member) in members.iter().enumerate() {
        let sep = if i + 1 < members.len() { "," } else { "" };
        let _ = writeln!(out, "        {member}{sep}");
    }
    out.push_str("    }\n");
}
