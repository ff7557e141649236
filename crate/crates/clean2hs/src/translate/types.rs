//! Type-level translation: types, signatures, type definitions, classes
//! and instances.

use super::{erase_type, Translator};
use crate::ast::*;
use crate::diag::{rules, Diagnostic};
use crate::hs::*;
use crate::translate::{RealType, StringType};
use crate::uniqueness;

impl Translator<'_> {
    /// Translate an already attribute-erased type.
    pub(crate) fn ty(&mut self, t: &AttrType) -> HsType {
        match &t.shape {
            Shape::Var(n) => HsType::Var(n.clone()),
            Shape::Con(name, args) => {
                let args: Vec<HsType> = args.iter().map(|a| self.ty(a)).collect();
                match name.as_str() {
                    "Real" if args.is_empty() => HsType::con0(self.real_name()),
                    "String" if args.is_empty() => HsType::con0(self.string_name()),
                    "Dynamic" if args.is_empty() => {
                        self.uses_dynamic = true;
                        HsType::con0("Dynamic")
                    }
                    _ => HsType::Con(name.clone(), args),
                }
            }
            Shape::Fun(a, b) => HsType::Fun(Box::new(self.ty(a)), Box::new(self.ty(b))),
            Shape::Tuple(elems) => HsType::Tuple(elems.iter().map(|e| self.ty(e)).collect()),
            Shape::List(e) => {
                if is_char(e) {
                    HsType::con0("String")
                } else {
                    HsType::List(Box::new(self.ty(e)))
                }
            }
            Shape::Array { elem, .. } => {
                if is_char(elem) {
                    HsType::con0(self.string_name())
                } else {
                    self.uses_array = true;
                    HsType::Con(
                        "Array".to_string(),
                        vec![HsType::con0("Int"), self.ty(elem)],
                    )
                }
            }
            Shape::Optional(e) => HsType::Con("Maybe".to_string(), vec![self.ty(e)]),
            Shape::Forall { vars, body } => HsType::Forall {
                vars: vars.clone(),
                context: vec![],
                body: Box::new(self.ty(body)),
            },
        }
    }

    fn real_name(&self) -> &'static str {
        match self.opts.real_type {
            RealType::Double => "Double",
            RealType::Float => "Float",
        }
    }

    pub(crate) fn string_name(&mut self) -> &'static str {
        match self.opts.string_type {
            StringType::CharList => "String",
            StringType::Text => {
                self.uses_text = true;
                "Text"
            }
        }
    }

    pub(crate) fn context(&mut self, cs: &[ClassConstraint]) -> Vec<HsConstraint> {
        cs.iter()
            .map(|c| {
                let class = self.class_name(&c.class);
                if class == "Typeable" {
                    self.uses_dynamic = true;
                }
                HsConstraint {
                    class,
                    args: c
                        .args
                        .iter()
                        .map(|a| {
                            let erased = erase_type(self, a);
                            self.ty(&erased)
                        })
                        .collect(),
                }
            })
            .collect()
    }

    // -----------------------------------------------------------------
    // Signatures

    pub(crate) fn sig_decl(&mut self, s: &FunSig) -> HsDecl {
        self.diags.extend(uniqueness::check_constraints(s));
        let (erased, report) = uniqueness::erase_sig(s);
        let written = report.written_counts();
        if written.unique + written.vars + written.dots > 0 {
            self.diags.push(Diagnostic::info(
                rules::UNIQUENESS_ERASED,
                s.span,
                format!(
                    "erased uniqueness attributes from the signature of `{}` \
                     ({} unique, {} variables, {} dots)",
                    s.name, written.unique, written.vars, written.dots
                ),
            ));
        }
        self.uniq.merge(report);
        HsDecl::Sig {
            name: erased.name.clone(),
            context: self.context(&erased.context),
            ty: self.sig_type(&erased),
        }
    }

    /// Juxtaposed argument types curry into a chain of arrows.
    pub(crate) fn sig_type(&mut self, s: &FunSig) -> HsType {
        let mut ty = self.ty(&s.ret);
        for arg in s.args.iter().rev() {
            ty = HsType::Fun(Box::new(self.ty(&arg.ty)), Box::new(ty));
        }
        ty
    }

    // -----------------------------------------------------------------
    // Type definitions

    pub(crate) fn typedef(&mut self, d: &TypeDef) -> HsDecl {
        match &d.body {
            Some(TypeDefBody::Synonym(ty)) => {
                let erased = self.erase_typedef_type(d, ty);
                HsDecl::TypeSyn {
                    name: d.name.clone(),
                    params: d.params.clone(),
                    ty: erased,
                }
            }
            Some(TypeDefBody::Algebraic(ctors)) => HsDecl::Data {
                name: d.name.clone(),
                params: d.params.clone(),
                ctors: ctors.iter().map(|c| self.ctor(d, c)).collect(),
            },
            Some(TypeDefBody::Record(fields)) => HsDecl::Data {
                name: d.name.clone(),
                params: d.params.clone(),
                ctors: vec![HsCtor {
                    forall_vars: vec![],
                    context: vec![],
                    name: d.name.clone(),
                    fields: HsFields::Record(
                        fields
                            .iter()
                            .map(|f| {
                                let ty = self.erase_typedef_type(d, &f.ty);
                                (
                                    f.name.clone(),
                                    HsBangType {
                                        strict: f.strict,
                                        ty,
                                    },
                                )
                            })
                            .collect(),
                    ),
                }],
            },
            Some(TypeDefBody::Newtype(ctor)) => HsDecl::Newtype {
                name: d.name.clone(),
                params: d.params.clone(),
                ctor: self.ctor(d, ctor),
            },
            // An abstract type only occurs in definition modules; an
            // implementation is expected to flesh it out.
            None => HsDecl::Data {
                name: d.name.clone(),
                params: d.params.clone(),
                ctors: vec![],
            },
        }
    }

    fn ctor(&mut self, d: &TypeDef, c: &CtorDef) -> HsCtor {
        HsCtor {
            forall_vars: c.exist_vars.clone(),
            context: self.context(&c.context),
            name: c.name.clone(),
            fields: HsFields::Positional(
                c.args
                    .iter()
                    .map(|a| {
                        let ty = self.erase_typedef_type(d, &a.ty);
                        HsBangType {
                            strict: a.strict,
                            ty,
                        }
                    })
                    .collect(),
            ),
        }
    }

    fn erase_typedef_type(&mut self, d: &TypeDef, t: &AttrType) -> HsType {
        let (erased, report) = uniqueness::erase(t);
        if !report.is_empty() {
            let counts = report.written_counts();
            self.diags.push(Diagnostic::info(
                rules::UNIQUENESS_ERASED,
                d.span,
                format!(
                    "erased uniqueness attributes in the definition of `{}` \
                     ({} unique, {} variables, {} dots)",
                    d.name, counts.unique, counts.vars, counts.dots
                ),
            ));
            self.uniq.merge(report);
        }
        self.ty(&erased)
    }

    // -----------------------------------------------------------------
    // Classes and instances

    pub(crate) fn class_def(&mut self, c: &ClassDef) -> HsDecl {
        let name = self.class_name(&c.name);
        let params: Vec<String> = c.params.iter().map(|p| p.name.clone()).collect();
        // `class C s ~m` reads "m determines the rest": one functional
        // dependency per marked parameter.
        let fundeps: Vec<(Vec<String>, Vec<String>)> = c
            .params
            .iter()
            .filter(|p| p.determines_rest)
            .map(|p| {
                let from = vec![p.name.clone()];
                let to = c
                    .params
                    .iter()
                    .filter(|q| q.name != p.name)
                    .map(|q| q.name.clone())
                    .collect();
                (from, to)
            })
            .collect();
        let members = c
            .members
            .iter()
            .map(|m| match m {
                ClassMember::Sig(s) => self.sig_decl(s),
                ClassMember::Def(d) => {
                    let strict = self.strict_args.get(&d.name).cloned();
                    self.fun_def(d, strict.as_deref().unwrap_or(&[]))
                }
            })
            .collect();
        HsDecl::Class {
            context: self.context(&c.context),
            name,
            params,
            fundeps,
            members,
        }
    }

    pub(crate) fn instance_def(&mut self, i: &InstanceDef) -> HsDecl {
        let class = self.class_name(&i.class);
        let types = i
            .types
            .iter()
            .map(|t| {
                let erased = erase_type(self, t);
                self.ty(&erased)
            })
            .collect();
        let members = i.members.iter().map(|m| self.local_def(m)).collect();
        HsDecl::Instance {
            context: self.context(&i.context),
            class,
            types,
            members,
        }
    }
}

fn is_char(t: &AttrType) -> bool {
    matches!(&t.shape, Shape::Con(name, args) if name == "Char" && args.is_empty())
}
