use super::*;

// -------------------------------------------------------------------
// Helpers: parse entry points with panics on failure, and compact
// s-expression printers so structure assertions stay readable.

fn module(src: &str) -> CleanModule {
    match parse_module(src) {
        Ok(m) => m,
        Err(err) => panic!("parse failed: {err}\nsource:\n{src}"),
    }
}

fn items(src: &str) -> Vec<Item> {
    module(&format!("module T\n{src}")).items
}

fn only_fun(src: &str) -> FunDef {
    let mut funs: Vec<FunDef> = items(src)
        .into_iter()
        .filter_map(|i| match i {
            Item::FunDef(d) => Some(d),
            _ => None,
        })
        .collect();
    assert_eq!(funs.len(), 1, "expected exactly one function definition");
    funs.pop().unwrap()
}

fn only_sig(src: &str) -> FunSig {
    let mut sigs: Vec<FunSig> = items(src)
        .into_iter()
        .filter_map(|i| match i {
            Item::FunSig(s) => Some(s),
            _ => None,
        })
        .collect();
    assert_eq!(sigs.len(), 1, "expected exactly one signature");
    sigs.pop().unwrap()
}

fn only_type_def(src: &str) -> TypeDef {
    let mut its = items(src);
    assert_eq!(its.len(), 1);
    match its.pop().unwrap() {
        Item::TypeDef(d) => d,
        other => panic!("expected a type definition, got {other:?}"),
    }
}

fn e(src: &str) -> Expr {
    match parse_expr(src) {
        Ok(x) => x,
        Err(err) => panic!("expression parse failed: {err}\nsource:\n{src}"),
    }
}

fn es(src: &str) -> String {
    sx(&e(src))
}

fn t(src: &str) -> AttrType {
    match parse_type(src) {
        Ok((ty, _)) => ty,
        Err(err) => panic!("type parse failed: {err}\nsource:\n{src}"),
    }
}

fn ts(src: &str) -> String {
    tx(&t(src))
}

fn lit_text(l: &Lit) -> String {
    match l {
        Lit::Int(n) => n.to_string(),
        Lit::Real(s) => s.clone(),
        Lit::Char(s) => format!("'{s}'"),
        Lit::CharList(s) => format!("['{s}']"),
        Lit::Str(s) => format!("\"{s}\""),
    }
}

fn join_sx(xs: &[Expr]) -> String {
    xs.iter().map(sx).collect::<Vec<_>>().join(" ")
}

fn sx(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Var(n) | ExprKind::Ctor(n) => n.clone(),
        ExprKind::OpRef(n) => format!("(op {n})"),
        ExprKind::Lit(l) => lit_text(l),
        ExprKind::App(f, args) => format!("(app {} {})", sx(f), join_sx(args)),
        ExprKind::BinOp { op, lhs, rhs } => format!("({op} {} {})", sx(lhs), sx(rhs)),
        ExprKind::Neg(x) => format!("(neg {})", sx(x)),
        ExprKind::If {
            cond,
            then_branch,
            else_branch,
        } => format!("(if {} {} {})", sx(cond), sx(then_branch), sx(else_branch)),
        ExprKind::Case { scrutinee, alts } => {
            let alts = alts
                .iter()
                .map(|a| format!("({} {})", px(&a.pat), bx(&a.body)))
                .collect::<Vec<_>>()
                .join(" ");
            format!("(case {} {alts})", sx(scrutinee))
        }
        ExprKind::Let { defs, body } => format!("(let {} {})", defs.len(), sx(body)),
        ExprKind::Lambda { params, body } => {
            let ps = params.iter().map(px).collect::<Vec<_>>().join(" ");
            format!("(lam [{ps}] {})", sx(body))
        }
        ExprKind::Tuple(xs) => format!("(tuple {})", join_sx(xs)),
        ExprKind::List { elems, tail } => match tail {
            Some(t) => format!("(list {} : {})", join_sx(elems), sx(t)),
            None => format!("(list {})", join_sx(elems)),
        },
        ExprKind::Range { from, then, to } => {
            let mut s = format!("(range {}", sx(from));
            if let Some(x) = then {
                s.push_str(&format!(" then {}", sx(x)));
            }
            if let Some(x) = to {
                s.push_str(&format!(" to {}", sx(x)));
            }
            s.push(')');
            s
        }
        ExprKind::ListComp { head, quals } => format!("(lc {} {})", sx(head), quals_text(quals)),
        ExprKind::ArrayLit(xs) => format!("(array {})", join_sx(xs)),
        ExprKind::ArrayComp { head, quals } => format!("(ac {} {})", sx(head), quals_text(quals)),
        ExprKind::ArraySelect { arr, index, unique } => {
            let tag = if *unique { "at!" } else { "at" };
            format!("({tag} {} {})", sx(arr), sx(index))
        }
        ExprKind::ArrayUpdate { arr, updates } => {
            let us = updates
                .iter()
                .map(|(i, v)| format!("[{}]={}", sx(i), sx(v)))
                .collect::<Vec<_>>()
                .join(" ");
            format!("(aupd {} {us})", sx(arr))
        }
        ExprKind::RecordLit { ctor, fields } => {
            let name = ctor.clone().unwrap_or_else(|| "_".into());
            format!("(rec {name} {})", fields_text(fields))
        }
        ExprKind::RecordUpdate { base, fields } => {
            format!("(rupd {} {})", sx(base), fields_text(fields))
        }
        ExprKind::FieldSelect {
            base,
            field,
            unique,
        } => {
            let tag = if *unique { "sel!" } else { "sel" };
            format!("({tag} {} {field})", sx(base))
        }
        ExprKind::Dynamic { expr, ty } => match ty {
            Some(t) => format!("(dyn {} :: {})", sx(expr), tx(t)),
            None => format!("(dyn {})", sx(expr)),
        },
        ExprKind::AsPredicate { scrutinee, pat } => {
            format!("(=: {} {})", sx(scrutinee), px(pat))
        }
        ExprKind::Annot { expr, ty } => format!("(:: {} {})", sx(expr), tx(ty)),
    }
}

fn bx(b: &ClauseBody) -> String {
    match b {
        ClauseBody::Simple(e) => sx(e),
        ClauseBody::Guarded(alts) => {
            let gs = alts
                .iter()
                .map(|a| match &a.guard {
                    Some(g) => format!("({} {})", sx(g), bx(&a.body)),
                    None => format!("(else {})", bx(&a.body)),
                })
                .collect::<Vec<_>>()
                .join(" ");
            format!("(guards {gs})")
        }
        ClauseBody::LetBefore { steps, rest } => {
            format!("(before {} {})", steps.len(), bx(rest))
        }
    }
}

fn fields_text(fields: &[FieldAssign]) -> String {
    fields
        .iter()
        .map(|f| match &f.value {
            Some(v) => format!("{}={}", f.field, sx(v)),
            None => f.field.clone(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn quals_text(quals: &[QualGroup]) -> String {
    quals
        .iter()
        .map(|g| {
            let mut s = g
                .gens
                .iter()
                .map(|gen| {
                    let (arrow, src) = match &gen.source {
                        GenSource::List(e) => ("<-", sx(e)),
                        GenSource::Array(e) => ("<-:", sx(e)),
                    };
                    format!("{}{arrow}{src}", px(&gen.pat))
                })
                .collect::<Vec<_>>()
                .join(" & ");
            for f in &g.filters {
                s.push_str(&format!(" | {}", sx(f)));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn px(p: &Pattern) -> String {
    match &p.kind {
        PatternKind::Wild => "_".into(),
        PatternKind::Var(n) => n.clone(),
        PatternKind::As(n, inner) => format!("({n}=:{})", px(inner)),
        PatternKind::Ctor(n, args) if args.is_empty() => n.clone(),
        PatternKind::Ctor(n, args) => {
            let a = args.iter().map(px).collect::<Vec<_>>().join(" ");
            format!("({n} {a})")
        }
        PatternKind::Lit(l) => lit_text(l),
        PatternKind::Tuple(ps) => {
            let a = ps.iter().map(px).collect::<Vec<_>>().join(" ");
            format!("(tuple {a})")
        }
        PatternKind::List { elems, tail } => {
            let a = elems.iter().map(px).collect::<Vec<_>>().join(" ");
            match tail {
                Some(t) => format!("(list {a} : {})", px(t)),
                None => format!("(list {a})"),
            }
        }
        PatternKind::Record { ctor, fields } => {
            let name = ctor.clone().unwrap_or_else(|| "_".into());
            let fs = fields
                .iter()
                .map(|f| match &f.pat {
                    Some(p) => format!("{}={}", f.field, px(p)),
                    None => f.field.clone(),
                })
                .collect::<Vec<_>>()
                .join(" ");
            format!("(recpat {name} {fs})")
        }
        PatternKind::Dynamic { pat, ty } => format!("({} :: {})", px(pat), tx(ty)),
    }
}

fn tx(t: &AttrType) -> String {
    let attr = match &t.attr {
        Attr::None => String::new(),
        Attr::Unique => "*".into(),
        Attr::Anonymous => ".".into(),
        Attr::Var(v) => format!("{v}:"),
    };
    let shape = match &t.shape {
        Shape::Var(n) => n.clone(),
        Shape::Con(n, args) if args.is_empty() => n.clone(),
        Shape::Con(n, args) => {
            let a = args.iter().map(tx).collect::<Vec<_>>().join(" ");
            format!("({n} {a})")
        }
        Shape::Fun(a, b) => format!("({} -> {})", tx(a), tx(b)),
        Shape::Tuple(ts) => {
            let a = ts.iter().map(tx).collect::<Vec<_>>().join(", ");
            format!("({a})")
        }
        Shape::List(t) => format!("[{}]", tx(t)),
        Shape::Array { flavor, elem } => {
            let f = match flavor {
                ArrayFlavor::Lazy => "",
                ArrayFlavor::Strict => "!",
                ArrayFlavor::Unboxed => "#",
            };
            format!("{{{f}{}}}", tx(elem))
        }
        Shape::Optional(t) => format!("?{}", tx(t)),
        Shape::Forall { vars, body } => format!("(A.{}: {})", vars.join(" "), tx(body)),
    };
    format!("{attr}{shape}")
}

// -------------------------------------------------------------------
// Module headers

#[test]
fn module_header_flavors() {
    assert_eq!(module("module Main\nx = 1").flavor, ModuleFlavor::Plain);
    assert_eq!(
        module("implementation module M\nx = 1").flavor,
        ModuleFlavor::Implementation
    );
    assert_eq!(
        module("definition module M\nf :: Int -> Int").flavor,
        ModuleFlavor::Definition
    );
    assert_eq!(
        module("system module M\nf :: Int -> Int").flavor,
        ModuleFlavor::System
    );
    assert_eq!(module("module Main\nx = 1").name, "Main");
}

#[test]
fn expected_kind_is_enforced() {
    let src = "definition module M\nf :: Int -> Int";
    assert!(parse_module_expecting(src, ModuleKind::Definition).is_ok());
    let err = parse_module_expecting(src, ModuleKind::Implementation).unwrap_err();
    assert!(matches!(err, ParseError::KindMismatch { .. }));
    let text = err.to_string();
    assert!(
        text.contains("expected an implementation module"),
        "unexpected message: {text}"
    );

    let src = "module Main\nx = 1";
    assert!(parse_module_expecting(src, ModuleKind::Implementation).is_ok());
    assert!(parse_module_expecting(src, ModuleKind::Definition).is_err());
}

#[test]
fn comments_are_collected_in_order() {
    let m = module("// top\nmodule T\nx = 1 // tail\n/* block */");
    let styles: Vec<CommentStyle> = m.comments.iter().map(|c| c.style).collect();
    assert_eq!(
        styles,
        vec![CommentStyle::Line, CommentStyle::Line, CommentStyle::Block]
    );
    assert_eq!(m.comments[0].text, " top");
}

#[test]
fn semicolons_separate_items_on_one_line() {
    let its = items("f x = x; g y = y");
    assert_eq!(its.len(), 2);
}

// -------------------------------------------------------------------
// Imports

#[test]
fn whole_import_lists_modules() {
    let m = module("module T\nimport StdEnv, StdList\nx = 1");
    assert_eq!(m.imports.len(), 1);
    match &m.imports[0] {
        ImportDecl::Whole { modules, .. } => {
            assert_eq!(modules, &vec!["StdEnv".to_string(), "StdList".to_string()]);
        }
        other => panic!("expected whole import, got {other:?}"),
    }
}

#[test]
fn arrow_import_marks_entry_kinds() {
    let m = module("module T\nimport M => qualified f, :: t, class C, g\nx = 1");
    match &m.imports[0] {
        ImportDecl::Selective { module, names, .. } => {
            assert_eq!(module, "M");
            let view: Vec<(&str, ImportEntryKind, bool)> = names
                .iter()
                .map(|n| (n.name.as_str(), n.kind, n.qualified))
                .collect();
            assert_eq!(
                view,
                vec![
                    ("f", ImportEntryKind::Value, true),
                    ("t", ImportEntryKind::Type, false),
                    ("C", ImportEntryKind::Class, false),
                    ("g", ImportEntryKind::Value, false),
                ]
            );
        }
        other => panic!("expected selective import, got {other:?}"),
    }
}

#[test]
fn from_import_lists_names() {
    let m = module("module T\nfrom StdList import map, foldr, +++\nx = 1");
    match &m.imports[0] {
        ImportDecl::Selective { module, names, .. } => {
            assert_eq!(module, "StdList");
            let view: Vec<&str> = names.iter().map(|n| n.name.as_str()).collect();
            assert_eq!(view, vec!["map", "foldr", "+++"]);
            assert!(names.iter().all(|n| n.kind == ImportEntryKind::Value));
        }
        other => panic!("expected selective import, got {other:?}"),
    }
}

// -------------------------------------------------------------------
// Type definitions

#[test]
fn algebraic_type_with_constructors() {
    let d = only_type_def(":: Color = Red | Green | Blue");
    assert_eq!(d.name, "Color");
    assert!(d.params.is_empty());
    match d.body {
        Some(TypeDefBody::Algebraic(ctors)) => {
            let names: Vec<&str> = ctors.iter().map(|c| c.name.as_str()).collect();
            assert_eq!(names, vec!["Red", "Green", "Blue"]);
            assert!(ctors.iter().all(|c| c.args.is_empty()));
        }
        other => panic!("expected algebraic body, got {other:?}"),
    }
}

#[test]
fn constructor_arguments_and_strictness() {
    let d = only_type_def(":: Pair a = MkPair !Int a");
    assert_eq!(d.params, vec!["a".to_string()]);
    match d.body {
        Some(TypeDefBody::Algebraic(ctors)) => {
            assert_eq!(ctors.len(), 1);
            assert!(ctors[0].args[0].strict);
            assert!(!ctors[0].args[1].strict);
        }
        other => panic!("expected algebraic body, got {other:?}"),
    }
}

#[test]
fn existential_constructor_with_context() {
    let d = only_type_def(":: Boxed = E.t: Box t & TC t");
    match d.body {
        Some(TypeDefBody::Algebraic(ctors)) => {
            let c = &ctors[0];
            assert_eq!(c.name, "Box");
            assert_eq!(c.exist_vars, vec!["t".to_string()]);
            assert_eq!(c.args.len(), 1);
            assert_eq!(c.context.len(), 1);
            assert_eq!(c.context[0].class, "TC");
        }
        other => panic!("expected algebraic body, got {other:?}"),
    }
}

#[test]
fn record_type_fields() {
    let d = only_type_def(":: Point = { ax :: Real, ay :: !Real }");
    match d.body {
        Some(TypeDefBody::Record(fields)) => {
            assert_eq!(fields.len(), 2);
            assert_eq!(fields[0].name, "ax");
            assert!(!fields[0].strict);
            assert!(fields[1].strict);
            assert_eq!(tx(&fields[0].ty), "Real");
        }
        other => panic!("expected record body, got {other:?}"),
    }
}

#[test]
fn synonym_and_newtype_and_abstract() {
    let d = only_type_def(":: Name :== String");
    assert!(matches!(d.body, Some(TypeDefBody::Synonym(_))));

    let d = only_type_def(":: Chars :== {#Char}");
    match d.body {
        Some(TypeDefBody::Synonym(ty)) => assert_eq!(tx(&ty), "{#Char}"),
        other => panic!("expected synonym body, got {other:?}"),
    }

    let d = only_type_def(":: Age =: Age Int");
    match d.body {
        Some(TypeDefBody::Newtype(ctor)) => {
            assert_eq!(ctor.name, "Age");
            assert_eq!(ctor.args.len(), 1);
        }
        other => panic!("expected newtype body, got {other:?}"),
    }

    let m = module("definition module S\n:: Stack a\npush :: a (Stack a) -> Stack a");
    match &m.items[0] {
        Item::TypeDef(d) => {
            assert_eq!(d.name, "Stack");
            assert!(d.body.is_none());
        }
        other => panic!("expected type definition, got {other:?}"),
    }
}

// -------------------------------------------------------------------
// Signatures and types

#[test]
fn signature_arguments_are_juxtaposed() {
    let s = only_sig("map :: (a -> b) [a] -> [b]");
    assert_eq!(s.args.len(), 2);
    assert_eq!(tx(&s.args[0].ty), "(a -> b)");
    assert_eq!(tx(&s.args[1].ty), "[a]");
    assert_eq!(tx(&s.ret), "[b]");
}

#[test]
fn signature_without_arrow_has_no_arguments() {
    let s = only_sig("pi :: Real");
    assert!(s.args.is_empty());
    assert_eq!(tx(&s.ret), "Real");
}

#[test]
fn grouped_context_distributes_arguments() {
    let s = only_sig("f :: a b -> Bool | Eq, Ord a & Show b");
    let view: Vec<(String, String)> = s
        .context
        .iter()
        .map(|c| {
            let args = c.args.iter().map(tx).collect::<Vec<_>>().join(" ");
            (c.class.clone(), args)
        })
        .collect();
    assert_eq!(
        view,
        vec![
            ("Eq".to_string(), "a".to_string()),
            ("Ord".to_string(), "a".to_string()),
            ("Show".to_string(), "b".to_string()),
        ]
    );
}

#[test]
fn uniqueness_attributes_and_constraints() {
    let s = only_sig("f :: v:a u:b -> u:b, [v<=u]");
    assert_eq!(s.args.len(), 2);
    assert_eq!(s.args[0].ty.attr, Attr::Var("v".into()));
    assert_eq!(s.args[1].ty.attr, Attr::Var("u".into()));
    assert_eq!(s.ret.attr, Attr::Var("u".into()));
    assert_eq!(s.attr_constraints.len(), 1);
    assert_eq!(s.attr_constraints[0].left, "v");
    assert_eq!(s.attr_constraints[0].right, "u");
}

#[test]
fn strict_signature_arguments() {
    let s = only_sig("f :: !Int Int -> Int");
    assert!(s.args[0].strict);
    assert!(!s.args[1].strict);
}

#[test]
fn operator_signature_with_fixity() {
    let s = only_sig("(+) infixl 6 :: Int Int -> Int");
    assert_eq!(s.name, "+");
    assert_eq!(
        s.fixity,
        Some(Fixity {
            assoc: Assoc::Left,
            prec: 6
        })
    );
    assert_eq!(s.args.len(), 2);
}

#[test]
fn rank2_argument_keeps_quantifier() {
    let s = only_sig("qid :: (A.a: a -> a) -> (Bool, Int)");
    assert_eq!(s.args.len(), 1);
    assert_eq!(tx(&s.args[0].ty), "(A.a: (a -> a))");
    assert_eq!(tx(&s.ret), "(Bool, Int)");
}

#[test]
fn type_forms_render_back() {
    assert_eq!(ts("(Int, *World) -> *World"), "((Int, *World) -> *World)");
    assert_eq!(ts("*a -> *a"), "(*a -> *a)");
    assert_eq!(ts(".a -> .a"), "(.a -> .a)");
    assert_eq!(ts("?Int"), "?Int");
    assert_eq!(ts("[Char]"), "[Char]");
    assert_eq!(ts("{Int}"), "{Int}");
    assert_eq!(ts("{!Int}"), "{!Int}");
    assert_eq!(ts("{#Char}"), "{#Char}");
    assert_eq!(ts("Tree (Tree a)"), "(Tree (Tree a))");
    assert_eq!(ts("m a"), "(m a)");
}

#[test]
fn standalone_type_can_carry_constraints() {
    let (ty, constraints) = parse_type("u:a -> v:b, [v<=u]").expect("type should parse");
    assert_eq!(tx(&ty), "(u:a -> v:b)");
    assert_eq!(constraints.len(), 1);
    assert_eq!(constraints[0].left, "v");
    assert_eq!(constraints[0].right, "u");
}

// -------------------------------------------------------------------
// Clauses and local definitions

#[test]
fn guards_with_final_fallthrough() {
    let f = only_fun("sign x\n  | x > 0 = 1\n  | x < 0 = -1\n  = 0");
    assert_eq!(f.clauses.len(), 1);
    match &f.clauses[0].body {
        ClauseBody::Guarded(alts) => {
            assert_eq!(alts.len(), 3);
            assert!(alts[0].guard.is_some());
            assert!(alts[2].guard.is_none());
            assert_eq!(bx(&f.clauses[0].body), "(guards ((> x 0) 1) ((< x 0) (neg 1)) (else 0))");
        }
        other => panic!("expected guarded body, got {other:?}"),
    }
}

#[test]
fn let_before_steps_chain() {
    let f = only_fun("f w\n  # (x, w) = get w\n  #! y = compute x\n  = (y, w)");
    match &f.clauses[0].body {
        ClauseBody::LetBefore { steps, rest } => {
            assert_eq!(steps.len(), 2);
            assert_eq!(px(&steps[0].pat), "(tuple x w)");
            assert!(!steps[0].strict);
            assert!(steps[1].strict);
            assert!(matches!(**rest, ClauseBody::Simple(_)));
        }
        other => panic!("expected let-before body, got {other:?}"),
    }
}

#[test]
fn let_before_can_feed_guards() {
    let f = only_fun("g x\n  # y = x + 1\n  | y > 0 = y\n  = 0");
    match &f.clauses[0].body {
        ClauseBody::LetBefore { steps, rest } => {
            assert_eq!(steps.len(), 1);
            assert!(matches!(**rest, ClauseBody::Guarded(_)));
        }
        other => panic!("expected let-before body, got {other:?}"),
    }
}

#[test]
fn where_block_holds_local_definitions() {
    let f = only_fun("area r = pival * sq r\nwhere\n  pival = 3.14\n  sq x = x * x");
    let defs = &f.clauses[0].where_defs;
    assert_eq!(defs.len(), 2);
    match (&defs[0], &defs[1]) {
        (LocalDef::Fun(a), LocalDef::Fun(b)) => {
            assert_eq!(a.name, "pival");
            assert!(a.clauses[0].params.is_empty());
            assert_eq!(b.name, "sq");
            assert_eq!(b.clauses[0].params.len(), 1);
        }
        other => panic!("expected two local functions, got {other:?}"),
    }
}

#[test]
fn with_block_attaches_to_clause() {
    let f = only_fun("f x = g x\nwith\n  g y = y + x");
    assert_eq!(f.clauses[0].with_defs.len(), 1);
    assert!(f.clauses[0].where_defs.is_empty());
}

#[test]
fn clauses_of_one_function_merge() {
    let its = items("len :: [a] -> Int\nlen [] = 0\nlen [x:xs] = 1 + len xs");
    assert_eq!(its.len(), 2);
    assert!(matches!(&its[0], Item::FunSig(s) if s.name == "len"));
    match &its[1] {
        Item::FunDef(d) => {
            assert_eq!(d.name, "len");
            assert_eq!(d.clauses.len(), 2);
            assert_eq!(px(&d.clauses[1].params[0]), "(list x : xs)");
        }
        other => panic!("expected function definition, got {other:?}"),
    }
}

#[test]
fn local_pattern_binding() {
    let f = only_fun("f n = q + r\nwhere\n  (q, r) = divMod n 10");
    match &f.clauses[0].where_defs[0] {
        LocalDef::PatBind { pat, .. } => assert_eq!(px(pat), "(tuple q r)"),
        other => panic!("expected pattern binding, got {other:?}"),
    }
}

#[test]
fn local_signature_stays_with_definition() {
    let f = only_fun("f x = g x\nwhere\n  g :: Int -> Int\n  g y = y + 1");
    let defs = &f.clauses[0].where_defs;
    assert_eq!(defs.len(), 2);
    assert!(matches!(&defs[0], LocalDef::Sig(s) if s.name == "g"));
    assert!(matches!(&defs[1], LocalDef::Fun(d) if d.name == "g"));
}

#[test]
fn start_rule_parses_as_definition() {
    let its = items("Start = 6 * 7");
    match &its[0] {
        Item::FunDef(d) => {
            assert_eq!(d.name, "Start");
            assert!(d.clauses[0].params.is_empty());
        }
        other => panic!("expected Start definition, got {other:?}"),
    }

    let its = items("Start :: *World -> *World\nStart w = w");
    assert!(matches!(&its[0], Item::FunSig(s) if s.name == "Start"));
    assert!(matches!(&its[1], Item::FunDef(d) if d.name == "Start"));
}

#[test]
fn continuation_lines_extend_an_expression() {
    let f = only_fun("f x = x\n  + 1");
    match &f.clauses[0].body {
        ClauseBody::Simple(e) => assert_eq!(sx(e), "(+ x 1)"),
        other => panic!("expected simple body, got {other:?}"),
    }
}

// -------------------------------------------------------------------
// Classes, instances, generics

#[test]
fn single_member_class_shares_its_name() {
    let its = items("class zero a :: a");
    match &its[0] {
        Item::ClassDef(d) => {
            assert_eq!(d.name, "zero");
            assert!(d.single_member);
            assert_eq!(d.params.len(), 1);
            match &d.members[0] {
                ClassMember::Sig(s) => {
                    assert_eq!(s.name, "zero");
                    assert_eq!(tx(&s.ret), "a");
                }
                other => panic!("expected signature member, got {other:?}"),
            }
        }
        other => panic!("expected class definition, got {other:?}"),
    }
}

#[test]
fn class_with_member_block() {
    let its = items("class Container c\nwhere\n  empty :: c a\n  insert :: a (c a) -> c a");
    match &its[0] {
        Item::ClassDef(d) => {
            assert!(!d.single_member);
            assert_eq!(d.members.len(), 2);
        }
        other => panic!("expected class definition, got {other:?}"),
    }
}

#[test]
fn tilde_marks_determining_parameter() {
    let its = items("class Store s ~m\nwhere\n  get :: s -> m s");
    match &its[0] {
        Item::ClassDef(d) => {
            assert_eq!(d.params.len(), 2);
            assert!(!d.params[0].determines_rest);
            assert!(d.params[1].determines_rest);
            assert_eq!(d.params[1].name, "m");
        }
        other => panic!("expected class definition, got {other:?}"),
    }
}

#[test]
fn instance_with_members_and_context() {
    let its = items("instance zero Int\nwhere\n  zero = 0");
    match &its[0] {
        Item::InstanceDef(d) => {
            assert_eq!(d.class, "zero");
            assert_eq!(tx(&d.types[0]), "Int");
            assert_eq!(d.members.len(), 1);
        }
        other => panic!("expected instance, got {other:?}"),
    }

    let its = items("instance zero [a] | zero a\nwhere\n  zero = []");
    match &its[0] {
        Item::InstanceDef(d) => {
            assert_eq!(tx(&d.types[0]), "[a]");
            assert_eq!(d.context.len(), 1);
            assert_eq!(d.context[0].class, "zero");
        }
        other => panic!("expected instance, got {other:?}"),
    }
}

#[test]
fn generic_and_derive_declarations() {
    let its = items("generic gEq a :: a a -> Bool\nderive gEq Color, Tree");
    match &its[0] {
        Item::GenericDef(d) => {
            assert_eq!(d.name, "gEq");
            assert_eq!(d.vars, vec!["a".to_string()]);
            assert_eq!(d.args.len(), 2);
            assert_eq!(tx(&d.ret), "Bool");
        }
        other => panic!("expected generic definition, got {other:?}"),
    }
    match &its[1] {
        Item::DeriveDecl(d) => {
            assert_eq!(d.generic, "gEq");
            assert_eq!(d.types, vec!["Color".to_string(), "Tree".to_string()]);
        }
        other => panic!("expected derive declaration, got {other:?}"),
    }
}

// -------------------------------------------------------------------
// Expressions

#[test]
fn operator_precedence_and_associativity() {
    assert_eq!(es("1 + 2 * 3"), "(+ 1 (* 2 3))");
    assert_eq!(es("1 * 2 + 3"), "(+ (* 1 2) 3)");
    assert_eq!(es("1 - 2 - 3"), "(- (- 1 2) 3)");
    assert_eq!(es("2 ^ 3 ^ 4"), "(^ 2 (^ 3 4))");
    assert_eq!(es("a && b || c"), "(|| (&& a b) c)");
    assert_eq!(es("x + 1 > y"), "(> (+ x 1) y)");
    assert_eq!(es("xs ++ ys ++ zs"), "(++ xs (++ ys zs))");
    assert_eq!(es("s +++ t"), "(+++ s t)");
}

#[test]
fn unknown_operators_default_left_and_loose() {
    assert_eq!(es("a <+> b <+> c"), "(<+> (<+> a b) c)");
}

#[test]
fn fixity_declarations_shape_later_parses() {
    let f = only_fun("(<+>) infixr 3 :: Int Int -> Int\nf x y z = x <+> y <+> z");
    assert_eq!(bx(&f.clauses[0].body), "(<+> x (<+> y z))");

    let s = only_sig("(<+>) infixr 3 :: Int Int -> Int\nf x y z = x <+> y <+> z");
    assert_eq!(
        s.fixity,
        Some(Fixity {
            assoc: Assoc::Right,
            prec: 3
        })
    );
}

#[test]
fn alphabetic_operators_are_infix_when_declared() {
    assert_eq!(es("7 mod 2"), "(mod 7 2)");
    assert_eq!(es("7 rem 2"), "(rem 7 2)");
    assert_eq!(es("f o g o h"), "(o f (o g h))");
    assert_eq!(es("n mod 2 == 0"), "(== (mod n 2) 0)");
    // Undeclared names still belong to the application spine.
    assert_eq!(es("g dot h"), "(app g dot h)");
}

#[test]
fn negation_binds_between_sum_and_product() {
    assert_eq!(es("-x + y"), "(+ (neg x) y)");
    assert_eq!(es("-x * y"), "(neg (* x y))");
    assert_eq!(es("3 - -2"), "(- 3 (neg 2))");
}

#[test]
fn application_binds_tighter_than_operators() {
    assert_eq!(es("f x + g y"), "(+ (app f x) (app g y))");
    assert_eq!(es("foldr (+) 0 xs"), "(app foldr (op +) 0 xs)");
}

#[test]
fn conditional_takes_three_arguments() {
    assert_eq!(es("if p 1 0"), "(if p 1 0)");
    assert_eq!(es("if (x > 0) (f x) (g x)"), "(if (> x 0) (app f x) (app g x))");
    // A conditional returning a function can still be applied.
    assert_eq!(es("if p inc dec x"), "(app (if p inc dec) x)");
}

#[test]
fn lambda_body_markers_are_equivalent() {
    let arrow = es(r"\x -> x + 1");
    assert_eq!(arrow, "(lam [x] (+ x 1))");
    assert_eq!(es(r"\x . x + 1"), arrow);
    assert_eq!(es(r"\x = x + 1"), arrow);
    assert_eq!(es(r"\f x y -> f y x"), "(lam [f x y] (app f y x))");
}

#[test]
fn case_alternatives_allow_both_body_markers() {
    assert_eq!(
        es("case n of\n  0 -> 1\n  _ -> 0"),
        "(case n (0 1) (_ 0))"
    );
    assert_eq!(
        es("case xs of\n  [] = 0\n  [y:_] = y"),
        "(case xs ((list ) 0) ((list y : _) y))"
    );
}

#[test]
fn case_alternatives_can_be_guarded() {
    assert_eq!(
        es("case x of\n  0 = 1\n  n\n    | n > 0 = n\n    = 0"),
        "(case x (0 1) (n (guards ((> n 0) n) (else 0))))"
    );
}

#[test]
fn let_expressions() {
    assert_eq!(es("let x = 1 in x + x"), "(let 1 (+ x x))");
    assert_eq!(es("let\n    x = 1\n    y = 2\nin x + y"), "(let 2 (+ x y))");
}

#[test]
fn list_forms() {
    assert_eq!(es("[]"), "(list )");
    assert_eq!(es("[1, 2, 3]"), "(list 1 2 3)");
    assert_eq!(es("[x:xs]"), "(list x : xs)");
    assert_eq!(es("[1, 2:xs]"), "(list 1 2 : xs)");
    assert_eq!(es("['a', 'b']"), "(list 'a' 'b')");
    assert_eq!(es("['Hello']"), "['Hello']");
    assert_eq!(es("\"text\""), "\"text\"");
}

#[test]
fn range_forms() {
    assert_eq!(es("[1..]"), "(range 1)");
    assert_eq!(es("[1..10]"), "(range 1 to 10)");
    assert_eq!(es("[1, 3..9]"), "(range 1 then 3 to 9)");
    assert_eq!(es("[1, 3..]"), "(range 1 then 3)");
}

#[test]
fn comprehension_forms() {
    assert_eq!(
        es(r"[e \\ e <- xs | isEven e]"),
        "(lc e e<-xs | (app isEven e))"
    );
    assert_eq!(
        es(r"[(l, r) \\ l <- xs & r <- ys]"),
        "(lc (tuple l r) l<-xs & r<-ys)"
    );
    assert_eq!(es(r"[x \\ xs <- xss, x <- xs]"), "(lc x xs<-xss, x<-xs)");
    assert_eq!(
        es(r"[x \\ x <- xs | x > 0 | x < 9]"),
        "(lc x x<-xs | (> x 0) | (< x 9))"
    );
    assert_eq!(es(r"{sq x \\ x <-: a}"), "(ac (app sq x) x<-:a)");
}

#[test]
fn array_forms() {
    assert_eq!(es("{1, 2, 3}"), "(array 1 2 3)");
    assert_eq!(es("a.[i]"), "(at a i)");
    assert_eq!(es("a![i]"), "(at! a i)");
    assert_eq!(es("m.[i].[j]"), "(at (at m i) j)");
    assert_eq!(es("{a & [i] = 0, [j] = 1}"), "(aupd a [i]=0 [j]=1)");
}

#[test]
fn record_forms() {
    assert_eq!(es("{ ax = 1.0, ay = 2.0 }"), "(rec _ ax=1.0 ay=2.0)");
    assert_eq!(es("{Point | ax = 1.0, ay = 2.0}"), "(rec Point ax=1.0 ay=2.0)");
    assert_eq!(es("{Point | ax}"), "(rec Point ax)");
    assert_eq!(es("{p & ax = 3.0}"), "(rupd p ax=3.0)");
    assert_eq!(es("r.f"), "(sel r f)");
    assert_eq!(es("r.f.g"), "(sel (sel r f) g)");
    assert_eq!(es("r!f"), "(sel! r f)");
    assert_eq!(es("f x.name"), "(app f (sel x name))");
}

#[test]
fn dynamics_and_annotations() {
    assert_eq!(es("dynamic 42 :: Int"), "(dyn 42 :: Int)");
    assert_eq!(es("dynamic f"), "(dyn f)");
    assert_eq!(es("42 :: Int"), "(:: 42 Int)");
    assert_eq!(es("toInteger 42 :: Integer"), "(:: (app toInteger 42) Integer)");
    assert_eq!(es("1 + 2 :: Int"), "(:: (+ 1 2) Int)");
}

#[test]
fn match_predicate_is_an_expression() {
    assert_eq!(
        es("if (xs =: [1:_]) 1 0"),
        "(if (=: xs (list 1 : _)) 1 0)"
    );
    assert_eq!(es("e =: ?None"), "(=: e ?None)");
}

#[test]
fn optional_constructors_are_atomic() {
    assert_eq!(es("?Just 3"), "(app ?Just 3)");
    assert_eq!(es("?None"), "?None");
}

#[test]
fn tuples_and_operator_references() {
    assert_eq!(es("(1, 'a', \"s\")"), "(tuple 1 'a' \"s\")");
    assert_eq!(es("(+)"), "(op +)");
    assert_eq!(es("(mod)"), "(op mod)");
    assert_eq!(es("((1))"), "1");
}

#[test]
fn expression_spans_cover_their_text() {
    let x = e("f x");
    assert_eq!((x.span.start.line, x.span.start.column), (1, 1));
    assert_eq!((x.span.end.line, x.span.end.column), (1, 4));
}

// -------------------------------------------------------------------
// Patterns

#[test]
fn clause_parameter_patterns() {
    let f = only_fun("first xs=:[x:_] = (x, xs)");
    assert_eq!(px(&f.clauses[0].params[0]), "(xs=:(list x : _))");

    let f = only_fun("area {w, h} = w * h");
    assert_eq!(px(&f.clauses[0].params[0]), "(recpat _ w h)");

    let f = only_fun("get {Point | ax = v} = v");
    assert_eq!(px(&f.clauses[0].params[0]), "(recpat Point ax=v)");

    let f = only_fun("f ?None = 0\nf (?Just x) = x");
    assert_eq!(px(&f.clauses[0].params[0]), "?None");
    assert_eq!(px(&f.clauses[1].params[0]), "(?Just x)");
}

#[test]
fn dynamic_pattern_clause() {
    let f = only_fun("g (n :: Int) = n\ng d = 0");
    match &f.clauses[0].params[0].kind {
        PatternKind::Dynamic { pat, ty } => {
            assert_eq!(px(pat), "n");
            assert_eq!(tx(ty), "Int");
        }
        other => panic!("expected dynamic pattern, got {other:?}"),
    }
}

#[test]
fn negative_literal_patterns() {
    assert_eq!(
        es("case x of\n  -1 -> a\n  _ -> b"),
        "(case x (-1 a) (_ b))"
    );
}

// -------------------------------------------------------------------
// Errors

#[test]
fn clause_arity_mismatch_is_rejected() {
    let err = parse_module("module T\nf x = x\nf x y = x").unwrap_err();
    let text = err.to_string();
    assert!(text.contains("parameters"), "unexpected message: {text}");
}

#[test]
fn signature_arity_mismatch_is_rejected() {
    let err = parse_module("module T\nf :: Int -> Int\nf x y = x").unwrap_err();
    let text = err.to_string();
    assert!(
        text.contains("signature declares"),
        "unexpected message: {text}"
    );
}

#[test]
fn parenthesised_function_result_leaves_arity_open() {
    assert!(parse_module("module T\nf :: (Int -> Int)\nf = id").is_ok());
    assert!(parse_module("module T\ng :: (Int -> Int)\ng x = x").is_ok());
}

#[test]
fn local_definitions_are_arity_checked_too() {
    let err = parse_module("module T\nf x = g x\nwhere\n  g :: Int -> Int\n  g a b = a").unwrap_err();
    assert!(err.to_string().contains("signature declares"));
}

#[test]
fn non_associative_operators_do_not_chain() {
    assert!(parse_expr("1 < 2 < 3").is_err());
    assert!(parse_expr("1 == 2 == 3").is_err());
    assert!(parse_expr("7 mod 2 mod 3").is_err());
    // Mixing levels is fine.
    assert!(parse_expr("1 + 2 < 3 + 4").is_ok());
}

#[test]
fn stray_input_is_reported() {
    assert!(parse_expr("r . f").is_err());
    assert!(parse_expr("(1 + 2").is_err());
    assert!(parse_expr("case x of").is_err());
}

#[test]
fn where_block_must_be_indented() {
    let err = parse_module("module T\nf x = y\nwhere\ny = 1").unwrap_err();
    assert!(matches!(err, ParseError::Layout(_)));
}

// -------------------------------------------------------------------
// Accepted surface sweep: every construct the translator handles should
// come back from the parser without error.

#[test]
fn accepted_surface_snippets_parse() {
    let exprs = [
        "38.0",
        "s0 +++ s1",
        "['Hello world']",
        "?Just 3",
        "[x:xs]",
        r"[e \\ e <- [0..9] | isEven e]",
        r"[l \\ l <- xs, r <- ys]",
        r"[(l, r) \\ l <- xs & r <- ys]",
        r"\a -> a + 1",
        "if p e0 e1",
        "{ ax = 1.0, ay = 2.0 }",
        "{r & f = 0}",
        "r.f",
        "r!f",
        "{1, 2, 3}",
        r"{f x \\ x <-: a}",
        "a.[i]",
        "a![i]",
        "{a & [i] = 0}",
        "dynamic 42 :: Int",
        "dynamic (f, g)",
        "let x = 1 in x",
        "x mod 2",
        "f o g",
        "case xs of\n  [] = 0\n  [y:_] = y",
    ];
    for src in exprs {
        if let Err(err) = parse_expr(src) {
            panic!("expression failed to parse: {err}\nsource:\n{src}");
        }
    }

    let types = [
        "?Int",
        "[Char]",
        "{#Char}",
        "(Int, *World) -> *World",
        "*a -> *a",
        ".a -> .a",
        "(A.a: a -> a) -> (Bool, Int)",
    ];
    for src in types {
        if let Err(err) = parse_type(src) {
            panic!("type failed to parse: {err}\nsource:\n{src}");
        }
    }

    let item_sources = [
        "import Mod0",
        "import Mod0, Mod1",
        "import Mod1 => qualified f, :: t",
        "from StdList import map, foldr",
        ":: Color = Red | Green | Blue",
        ":: Tree a = Leaf | Node (Tree a) a (Tree a)",
        ":: Point = { ax :: Real, ay :: Real }",
        ":: Name :== String",
        ":: Chars :== {#Char}",
        ":: Age =: Age Int",
        ":: Boxed = E.t: Box t & TC t",
        "(+) infixl 6 :: Int Int -> Int",
        "(.+.) infixl 6 :: Vec Vec -> Vec",
        "(mod) infix 7 :: Int Int -> Int\n(mod) a b = a - b * (a / b)",
        "qid :: (A.a: a -> a) -> (Bool, Int)",
        "char :: Real\nchar = 38.0",
        "class zero a :: a",
        "class Store s ~m\nwhere\n  get :: s -> m s",
        "instance zero Int\nwhere\n  zero = 0",
        "instance zero [a] | zero a\nwhere\n  zero = []",
        "generic gEq a :: a a -> Bool",
        "derive gEq Color, Tree",
        "sign x\n  | x > 0 = 1\n  | x < 0 = -1\n  = 0",
        "f w\n  # ys = g w\n  = h ys",
        "f w\n  #! ys = g w\n  = h ys",
        "g (n :: Int) = n\ng d = 0",
        "Start :: *World -> *World\nStart w = w",
        "Start = 6 * 7",
        "swap :: !Int Int -> Int\nswap a b = b",
        "area {w, h} = w * h",
        "first xs=:[x:_] = (x, xs)",
    ];
    for src in item_sources {
        let full = format!("module T\n{src}");
        if let Err(err) = parse_module(&full) {
            panic!("module item failed to parse: {err}\nsource:\n{src}");
        }
    }
}
