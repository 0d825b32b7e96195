mod strategies;

use liesym::dsl::{parse_document, parse_expr, print_ast, print_document};
use liesym::library::{builtin, BUILTIN};
use liesym::model::Model;
use proptest::prelude::*;
use strategies::{ast, model_text};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ast_print_parse_round_trip(a in ast()) {
        let text = print_ast(&a);
        let back = parse_expr(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, a, "{}", text);
    }

    #[test]
    fn canonical_expr_text_reparses(text in model_text()) {
        let m = builtin();
        let e = m.scope.parse(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        let printed = e.to_string();
        let back = m.scope.parse(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert_eq!(&back, &e, "{} printed as {}", text, printed);
        prop_assert_eq!(back.to_string(), printed);
    }
}

#[test]
fn builtin_document_round_trips() {
    let doc = parse_document(BUILTIN).unwrap();
    let printed = print_document(&doc);
    let again = parse_document(&printed).unwrap();
    assert_eq!(again, doc);
    assert_eq!(print_document(&again), printed);
    let m = Model::parse(&printed).unwrap();
    assert_eq!(m.fields.len(), builtin().fields.len());
}

#[test]
fn model_file_examples() {
    let text = "indep t, x, y\ndep u\nparam alpha\nfunc phi(t)\n\
        pde cc {\n  vars t, x, y\n  dep u\n  eq D( D(u;t) + alpha*D(u;x) - u*D(u;x) + D(u;x,x) ; x ) + D(u;y,y) = 0\n}\n\
        field x3 { dep u; xi x = phi(t); eta u = -D(phi;t) }\n";
    let m = Model::parse(text).unwrap();
    let b = builtin();
    assert_eq!(m.pde("cc").unwrap().lhs(), b.pde("cc").unwrap().lhs());
    assert!(m.field("x3").unwrap().same_as(b.field("x-shift-phi").unwrap()));
    assert_eq!(m.scope.parse("1 + 2").unwrap().to_string(), "3");
}

#[test]
fn printer_emits_derivative_form() {
    let m = builtin();
    assert_eq!(m.scope.parse("u[x,x] + 2*x").unwrap().to_string(), "2*x + D(u;x,x)");
    assert_eq!(m.scope.parse("u^n").unwrap().to_string(), "u^n");
    assert_eq!(m.scope.parse("2*x").unwrap().to_string(), "2*x");
}

#[test]
fn syntax_error_reports_position_and_expected_tokens() {
    let e = Model::parse("indep x\ndep u\npde p {\n  vars x\n  dep u\n  eq u + * x = 0\n}\n")
        .unwrap_err()
        .to_string();
    assert!(e.contains("line 6, column 10"), "{e}");
    assert!(e.contains("expected one of:"), "{e}");
}

#[test]
fn unclosed_block_is_reported() {
    let e = Model::parse("indep x\ndep u\nfield f {\n  dep u\n")
        .unwrap_err()
        .to_string();
    assert!(e.contains("line 5") && e.contains("`}`"), "{e}");
}

#[test]
fn unknown_identifier_names_the_declaration_rules() {
    let e = Model::parse("indep x\ndep u\nfield f {\n  dep u\n  xi x = beta\n}\n")
        .unwrap_err()
        .to_string();
    assert!(e.contains("line 5") && e.contains("unknown identifier `beta`"), "{e}");
    assert!(e.contains("func NAME(ARGS)"), "{e}");
}

#[test]
fn unknown_block_kind_lists_keywords() {
    let e = Model::parse("indep x\nsurface s { }\n").unwrap_err().to_string();
    assert!(e.contains("line 2, column 1"), "{e}");
    for k in ["pde", "field", "ansatz", "ode", "solution", "run", "indep", "func"] {
        assert!(e.contains(k), "{e}");
    }
}
