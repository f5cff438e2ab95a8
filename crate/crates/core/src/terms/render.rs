use super::{Const, Mult, Node, OrdTerm, PsiIndex};

/// Output alphabet.  `Ascii` is the wire format accepted by the parser;
/// `Unicode` is for humans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Ascii,
    Unicode,
}

pub fn render(t: &OrdTerm, style: Style) -> String {
    let mut out = String::new();
    write_term(t, style, &mut out);
    out
}

fn write_term(t: &OrdTerm, style: Style, out: &mut String) {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || write_inner(t, style, out))
}

fn sym(style: Style, ascii: &'static str, uni: &'static str) -> &'static str {
    match style {
        Style::Ascii => ascii,
        Style::Unicode => uni,
    }
}

fn write_inner(t: &OrdTerm, style: Style, out: &mut String) {
    if let Some(n) = t.as_nat() {
        out.push_str(&n.to_string());
        return;
    }
    match t.node() {
        Node::Zero => out.push('0'),
        Node::Const(c) => out.push_str(match (style, c) {
            (Style::Ascii, c) => c.symbol(),
            (Style::Unicode, Const::Omega) => "Ω",
            (Style::Unicode, Const::BigS) => "𝕊",
            (Style::Unicode, Const::BigK) => "𝕂",
            (Style::Unicode, Const::BigI) => "𝕀",
        }),
        Node::Sum(parts) => {
            for (i, (p, m)) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                match m {
                    Mult::Nat(n) if p.as_nat() == Some(1) => out.push_str(&n.to_string()),
                    Mult::Nat(1) => write_term(p, style, out),
                    Mult::Nat(n) => {
                        write_term(p, style, out);
                        out.push_str(" * ");
                        out.push_str(&n.to_string());
                    }
                    Mult::Ord(a) => {
                        write_term(p, style, out);
                        out.push_str(" * ");
                        write_primary(a, style, out);
                    }
                }
            }
        }
        Node::Veblen(b, x) => call(sym(style, "phi", "φ"), &[b, x], style, out),
        Node::ThetaTilde(b, x) => call(sym(style, "t~", "θ̃"), &[b, x], style, out),
        Node::Psi(s, idx, a) => {
            out.push_str(sym(style, "psi(", "ψ("));
            write_term(s, style, out);
            match idx {
                PsiIndex::None => {}
                PsiIndex::Ord(v) => {
                    out.push_str(", ");
                    write_term(v, style, out);
                }
                PsiIndex::Vec(vs) => {
                    out.push_str(", [");
                    for (i, v) in vs.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        write_term(v, style, out);
                    }
                    out.push(']');
                }
                PsiIndex::Fn(f) => {
                    out.push_str(", {");
                    for (i, (k, v)) in f.entries().iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        write_term(k, style, out);
                        out.push_str(": ");
                        write_term(v, style, out);
                    }
                    out.push('}');
                }
            }
            out.push_str("; ");
            write_term(a, style, out);
            out.push(')');
        }
        Node::NextReg(b) => call(sym(style, "reg+", "reg⁺"), &[b], style, out),
        Node::Dagger(b) => call(sym(style, "dag", "†"), &[b], style, out),
        Node::IOf(b) => {
            out.push_str(sym(style, "I[", "𝕀["));
            write_term(b, style, out);
            out.push(']');
        }
    }
}

fn write_primary(t: &OrdTerm, style: Style, out: &mut String) {
    let needs_parens = matches!(t.node(), Node::Sum(_)) && t.as_nat().is_none();
    if needs_parens {
        out.push('(');
    }
    write_term(t, style, out);
    if needs_parens {
        out.push(')');
    }
}

fn call(name: &str, args: &[&OrdTerm], style: Style, out: &mut String) {
    out.push_str(name);
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(a, style, out);
    }
    out.push(')');
}
