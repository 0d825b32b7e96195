use super::{Ast, BinOp, Body, Document, Item};

fn prec(a: &Ast) -> u8 {
    match a {
        Ast::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Ast::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Ast::Neg(_) => 3,
        Ast::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

fn write(out: &mut String, a: &Ast, min: u8) {
    let wrap = prec(a) < min;
    if wrap {
        out.push('(');
    }
    match a {
        Ast::Num(s) | Ast::Ident(s) => out.push_str(s),
        Ast::Call(f, args) => {
            out.push_str(f);
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(out, arg, 0);
            }
            out.push(')');
        }
        Ast::Jet(u, vars) => {
            out.push_str(&format!("{u}[{}]", vars.join(",")));
        }
        Ast::Deriv(e, vars) => {
            out.push_str("D(");
            write(out, e, 0);
            out.push_str(&format!(";{})", vars.join(",")));
        }
        Ast::Neg(e) => {
            out.push('-');
            write(out, e, 3);
        }
        Ast::Bin(op, l, r) => {
            let (sym, lmin, rmin) = match op {
                BinOp::Add => (" + ", 1, 2),
                BinOp::Sub => (" - ", 1, 2),
                BinOp::Mul => ("*", 2, 3),
                BinOp::Div => ("/", 2, 3),
                BinOp::Pow => ("^", 5, 3),
            };
            write(out, l, lmin);
            out.push_str(sym);
            write(out, r, rmin);
        }
    }
    if wrap {
        out.push(')');
    }
}

pub fn print_ast(a: &Ast) -> String {
    let mut s = String::new();
    write(&mut s, a, 0);
    s
}

/// Canonical text of a document: one declaration per line, blocks with
/// two-space indented clauses.
pub fn print_document(doc: &Document) -> String {
    let mut out = String::new();
    for (i, item) in doc.items.iter().enumerate() {
        match item {
            Item::Decl(d) => {
                let entries: Vec<String> = d
                    .entries
                    .iter()
                    .map(|e| match &e.args {
                        Some(a) => format!("{}({})", e.name, a.join(", ")),
                        None => e.name.clone(),
                    })
                    .collect();
                out.push_str(&format!("{} {}\n", d.kind.keyword(), entries.join(", ")));
            }
            Item::Block(b) => {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&format!("{} {} {{\n", b.kind.keyword(), b.name));
                for c in &b.clauses {
                    let body = match &c.body {
                        Body::Names(v) => v.join(", "),
                        Body::Assign(t, e) => format!("{t} = {}", print_ast(e)),
                        Body::Equation(l, r) => format!("{} = {}", print_ast(l), print_ast(r)),
                        Body::Values(v) => v.iter().map(print_ast).collect::<Vec<_>>().join(", "),
                    };
                    out.push_str(&format!("  {} {}\n", c.key, body));
                }
                out.push_str("}\n");
            }
        }
    }
    out
}
