//! Seeded random domain models for property, mutation and acceptance tests.
#![allow(dead_code)]

pub mod golden;
pub mod invariants;
pub mod mutants;

use lemma2jolie::lemma::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_CONTEXTS: usize = 3;
pub const MAX_TYPES: usize = 5;
pub const MAX_MEMBERS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Any well-formed model: arbitrary features, references within a context.
    Any,
    /// Models that follow the DDD conventions the checker enforces.
    Conventional,
}

/// All generated names are unique across the model, so encoding never
/// produces clashing declarations.
pub fn random_model(seed: u64, profile: Profile) -> DomainModel {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        next: 0,
        profile,
    };
    let n = g.rng.gen_range(0..=MAX_CONTEXTS);
    DomainModel::new((0..n).map(|_| g.context()).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Structure,
    Collection,
    Enumeration,
}

struct Decl {
    kind: Kind,
    name: String,
    features: Vec<StructureFeature>,
}

impl Decl {
    fn has(&self, f: StructureFeature) -> bool {
        self.features.contains(&f)
    }
}

const ROLES: &[&[StructureFeature]] = {
    use StructureFeature::*;
    &[
        &[],
        &[Entity],
        &[Aggregate, Entity],
        &[ValueObject],
        &[ValueObject, DomainEvent],
        &[Service],
        &[Repository],
        &[Specification],
    ]
};

struct Gen {
    rng: ChaCha8Rng,
    next: usize,
    profile: Profile,
}

impl Gen {
    fn fresh(&mut self, prefix: &str) -> String {
        self.next += 1;
        format!("{prefix}{}", self.next)
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn subset<F: Feature + Copy>(&mut self, p: f64) -> Vec<F> {
        F::ALL
            .iter()
            .copied()
            .filter(|_| self.rng.gen_bool(p))
            .collect()
    }

    fn context(&mut self) -> Context {
        let name = self.fresh("Ctx");
        let n = self.rng.gen_range(0..=MAX_TYPES);
        let mut decls: Vec<Decl> = (0..n)
            .map(|_| {
                let kind = match self.rng.gen_range(0..10) {
                    0..=5 => Kind::Structure,
                    6..=7 => Kind::Collection,
                    _ => Kind::Enumeration,
                };
                let features = match (kind, self.profile) {
                    (Kind::Structure, Profile::Any) => self.subset(0.2),
                    (Kind::Structure, Profile::Conventional) => {
                        ROLES.choose(&mut self.rng).unwrap().to_vec()
                    }
                    _ => Vec::new(),
                };
                Decl {
                    kind,
                    name: self.fresh("T"),
                    features,
                }
            })
            .collect();
        if self.profile == Profile::Conventional {
            // a specification needs a structure to validate
            let validatable = decls
                .iter()
                .any(|d| d.kind == Kind::Structure && !d.has(StructureFeature::Specification));
            if !validatable {
                for d in &mut decls {
                    d.features.retain(|f| *f != StructureFeature::Specification);
                }
            }
        }
        let types = (0..decls.len())
            .map(|i| self.complex_type(&decls, i))
            .collect::<Vec<_>>();
        Context::new(name).with_types(types)
    }

    fn complex_type(&mut self, decls: &[Decl], i: usize) -> ComplexType {
        let decl = &decls[i];
        match decl.kind {
            Kind::Collection => ComplexType::Collection(Collection {
                name: decl.name.clone(),
                element_type: self.type_ref(decls),
                origin: Origin::default(),
            }),
            Kind::Enumeration => {
                let n = self.rng.gen_range(1..=MAX_MEMBERS);
                ComplexType::Enumeration(Enumeration {
                    name: decl.name.clone(),
                    literals: (0..n).map(|_| self.fresh("L")).collect(),
                    origin: Origin::default(),
                })
            }
            Kind::Structure => ComplexType::Structure(match self.profile {
                Profile::Any => self.any_structure(decls, decl),
                Profile::Conventional => self.conventional_structure(decls, decl),
            }),
        }
    }

    fn type_ref(&mut self, decls: &[Decl]) -> TypeRef {
        if decls.is_empty() || self.coin(0.6) {
            TypeRef::Primitive(*PrimitiveType::ALL.choose(&mut self.rng).unwrap())
        } else {
            TypeRef::named(decls.choose(&mut self.rng).unwrap().name.clone())
        }
    }

    fn field(&mut self, decls: &[Decl], features: Vec<FieldFeature>) -> Field {
        let ty = self.type_ref(decls);
        Field::new(self.fresh("f"), ty).with_features(features)
    }

    fn any_structure(&mut self, decls: &[Decl], decl: &Decl) -> Structure {
        let n_fields = self.rng.gen_range(0..=MAX_MEMBERS);
        let n_ops = self.rng.gen_range(0..=MAX_MEMBERS);
        let fields: Vec<Field> = (0..n_fields)
            .map(|_| {
                let features = self.subset(0.25);
                self.field(decls, features)
            })
            .collect();
        let ops: Vec<Operation> = (0..n_ops)
            .map(|_| {
                let name = self.fresh("op");
                let op = if self.coin(0.5) {
                    Operation::procedure(name)
                } else {
                    Operation::function(name, self.type_ref(decls))
                };
                let n_params = self.rng.gen_range(0..=3);
                let params: Vec<Field> = (0..n_params)
                    .map(|_| {
                        let features = self.subset(0.15);
                        self.field(decls, features)
                    })
                    .collect();
                op.with_features(self.subset(0.2)).with_params(params)
            })
            .collect();
        Structure::new(decl.name.clone())
            .with_features(decl.features.iter().copied())
            .with_fields(fields)
            .with_operations(ops)
    }

    fn conventional_structure(&mut self, decls: &[Decl], decl: &Decl) -> Structure {
        use OperationFeature::*;
        let structures = |pred: &dyn Fn(&Decl) -> bool| -> Vec<String> {
            decls
                .iter()
                .filter(|d| d.kind == Kind::Structure && pred(d))
                .map(|d| d.name.clone())
                .collect()
        };
        let mut s = Structure::new(decl.name.clone()).with_features(decl.features.iter().copied());

        if decl.has(StructureFeature::Specification) {
            // one validator first, then plain functions
            let targets = structures(&|d| !d.has(StructureFeature::Specification));
            let target = targets.choose(&mut self.rng).unwrap().clone();
            let validator =
                Operation::function(self.fresh("op"), TypeRef::Primitive(PrimitiveType::Boolean))
                    .with_features([Validator])
                    .with_params([Field::new(self.fresh("p"), TypeRef::named(target))]);
            let mut ops = vec![validator];
            for _ in 0..self.rng.gen_range(0..MAX_MEMBERS) {
                let op = Operation::function(self.fresh("op"), self.type_ref(decls));
                let params: Vec<Field> = (0..self.rng.gen_range(0..=2))
                    .map(|_| self.field(decls, vec![]))
                    .collect();
                let features: Vec<_> = [Closure, SideEffectFree]
                    .into_iter()
                    .filter(|_| self.rng.gen_bool(0.3))
                    .collect();
                ops.push(op.with_features(features).with_params(params));
            }
            s.operations = ops;
            return s;
        }

        let part_targets = structures(&|d| {
            d.has(StructureFeature::Entity) || d.has(StructureFeature::ValueObject)
        });
        for _ in 0..self.rng.gen_range(0..=MAX_MEMBERS) {
            let field = if !part_targets.is_empty() && self.coin(0.25) {
                let target = part_targets.choose(&mut self.rng).unwrap().clone();
                Field::new(self.fresh("f"), TypeRef::named(target))
                    .with_features([FieldFeature::Part])
            } else {
                let features = if self.coin(0.2) {
                    vec![FieldFeature::Identifier]
                } else {
                    vec![]
                };
                self.field(decls, features)
            };
            s.fields.push(field);
        }
        for _ in 0..self.rng.gen_range(0..=MAX_MEMBERS) {
            let name = self.fresh("op");
            let op = if self.coin(0.2) {
                // factories produce the enclosing structure from other inputs
                let params: Vec<Field> = (0..self.rng.gen_range(0..=3))
                    .map(|_| loop {
                        let f = self.field(decls, vec![]);
                        if f.ty.as_named() != Some(decl.name.as_str()) {
                            break f;
                        }
                    })
                    .collect();
                Operation::function(name, TypeRef::named(decl.name.clone()))
                    .with_features([Factory])
                    .with_params(params)
            } else {
                let op = if self.coin(0.5) {
                    Operation::procedure(name)
                } else {
                    Operation::function(name, self.type_ref(decls))
                };
                let params: Vec<Field> = (0..self.rng.gen_range(0..=3))
                    .map(|_| self.field(decls, vec![]))
                    .collect();
                let features: Vec<_> = [Closure, Identifier, SideEffectFree]
                    .into_iter()
                    .filter(|_| self.rng.gen_bool(0.2))
                    .collect();
                op.with_features(features).with_params(params)
            };
            s.operations.push(op);
        }
        s
    }
}
