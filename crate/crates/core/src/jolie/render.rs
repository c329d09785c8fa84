//! Deterministic printer for [`JolieDocument`]s.
//!
//! Layout: 4-space indentation, annotations on their own line at the
//! indentation of their owner, one blank line between top-level items, and a
//! trailing newline after the last item.

use super::ast::*;
use crate::diagnostic::Location;

const INDENT: &str = "    ";

/// Where each item (and each tree child or interface operation) begins in
/// the rendered text, indexed like `JolieDocument::items`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Layout {
    pub items: Vec<ItemLayout>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemLayout {
    pub location: Location,
    pub members: Vec<Location>,
}

impl Layout {
    pub fn item(&self, index: usize) -> Location {
        self.items[index].location
    }

    pub fn member(&self, item: usize, member: usize) -> Location {
        self.items[item].members[member]
    }
}

pub fn render(doc: &JolieDocument) -> String {
    render_with_layout(doc).0
}

pub fn render_with_layout(doc: &JolieDocument) -> (String, Layout) {
    let mut printer = Printer::default();
    let mut layout = Layout::default();
    for (i, item) in doc.items.iter().enumerate() {
        if i > 0 {
            printer.line(0, "");
        }
        layout.items.push(printer.item(item));
    }
    (printer.out, layout)
}

#[derive(Default)]
struct Printer {
    out: String,
    line: usize,
}

impl Printer {
    /// Writes one line and returns where its text starts.
    fn line(&mut self, depth: usize, text: &str) -> Location {
        if !text.is_empty() {
            for _ in 0..depth {
                self.out.push_str(INDENT);
            }
        }
        self.out.push_str(text);
        self.out.push('\n');
        self.line += 1;
        Location::new(self.line, depth * INDENT.len() + 1)
    }

    fn annotations(&mut self, depth: usize, annotations: &[Annotation]) {
        for a in annotations {
            self.line(depth, &a.to_string());
        }
    }

    fn item(&mut self, item: &DocumentItem) -> ItemLayout {
        match item {
            DocumentItem::CtxBegin(name) => ItemLayout {
                location: self.line(0, &format!("///@beginCtx({name})")),
                members: Vec::new(),
            },
            DocumentItem::CtxEnd => ItemLayout {
                location: self.line(0, "///@endCtx"),
                members: Vec::new(),
            },
            DocumentItem::Type(decl) => self.type_decl(decl),
            DocumentItem::Interface(decl) => self.interface(decl),
        }
    }

    fn type_decl(&mut self, decl: &TypeDecl) -> ItemLayout {
        self.annotations(0, &decl.annotations);
        let header = match &decl.body {
            TypeBody::Tree(children) if children.is_empty() => format!("type {}: void", decl.name),
            TypeBody::Tree(_) => format!("type {} {{", decl.name),
            TypeBody::Basic { basic, refinement } => {
                format!(
                    "type {}: {}",
                    decl.name,
                    basic_text(*basic, refinement.as_ref())
                )
            }
            TypeBody::Undefined => format!("type {}: undefined", decl.name),
        };
        let location = self.line(0, &header);
        let mut members = Vec::new();
        if let TypeBody::Tree(children) = &decl.body {
            for child in children {
                self.annotations(1, &child.annotations);
                let ty = match &child.ty {
                    NodeType::Basic { basic, refinement } => {
                        basic_text(*basic, refinement.as_ref())
                    }
                    NodeType::Named(n) => n.clone(),
                };
                members.push(self.line(
                    1,
                    &format!("{}{}: {}", child.name, child.cardinality.suffix(), ty),
                ));
            }
            if !children.is_empty() {
                self.line(0, "}");
            }
        }
        ItemLayout { location, members }
    }

    fn interface(&mut self, decl: &InterfaceDecl) -> ItemLayout {
        self.annotations(0, &decl.annotations);
        let location = self.line(0, &format!("interface {} {{", decl.name));
        let mut members = Vec::new();
        if !decl.operations.is_empty() {
            self.line(1, "RequestResponse:");
        }
        for op in &decl.operations {
            self.annotations(2, &op.annotations);
            members.push(self.line(2, &format!("{}({})({})", op.name, op.request, op.response)));
        }
        self.line(0, "}");
        ItemLayout { location, members }
    }
}

fn basic_text(basic: BasicType, refinement: Option<&Refinement>) -> String {
    match refinement {
        None => basic.to_string(),
        Some(Refinement::Enum(literals)) => {
            let quoted: Vec<String> = literals.iter().map(|l| quote(l)).collect();
            format!("{basic}( enum( [{}] ) )", quoted.join(", "))
        }
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
