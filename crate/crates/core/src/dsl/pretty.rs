use std::fmt::Write;

use super::ast::*;
use crate::special::HeckeRegion;

/// Canonical text of an identity; parsing it back gives an equal spec.
pub fn pretty_print(spec: &IdentitySpec) -> String {
    let mut s = format!("identity {} {{\n", spec.name);
    for p in &spec.params {
        let _ = writeln!(s, "  param {} in {}..{}", p.name, int_expr(&p.lo), int_expr(&p.hi));
    }
    let _ = writeln!(s, "  scale {}\n  order {}", spec.scale, spec.order);
    if let ZBinding::Monomial { sign, exp } = &spec.z {
        let sign = if *sign < 0 { "-" } else { "" };
        let _ = writeln!(s, "  z = {sign}q{}", exponent(exp));
    }
    let _ = writeln!(s, "  lhs {}\n  rhs {}\n}}", expr(&spec.lhs), expr(&spec.rhs));
    s
}

pub fn expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

pub fn int_expr(e: &IntExpr) -> String {
    let mut s = String::new();
    write_int(&mut s, e, 0);
    s
}

fn exponent(e: &IntExpr) -> String {
    match &e.kind {
        IntKind::Lit(1) => String::new(),
        IntKind::Lit(n) if *n >= 0 => format!("^{n}"),
        IntKind::Var(v) => format!("^{v}"),
        _ => format!("^({})", int_expr(e)),
    }
}

fn prec(e: &ExprKind) -> u8 {
    match e {
        ExprKind::Add(..) | ExprKind::Sub(..) => 1,
        ExprKind::Mul(..) | ExprKind::Div(..) => 2,
        ExprKind::Neg(_) => 3,
        ExprKind::Pow(..) => 4,
        _ => 5,
    }
}

fn write_expr(s: &mut String, e: &Expr, min: u8) {
    let p = prec(&e.kind);
    if p < min {
        s.push('(');
    }
    match &e.kind {
        ExprKind::Int(n) => {
            let _ = write!(s, "{n}");
        }
        ExprKind::Var(v) => s.push_str(v),
        ExprKind::Q => s.push('q'),
        ExprKind::Z => s.push('z'),
        ExprKind::Neg(a) => {
            s.push('-');
            write_expr(s, a, 3);
        }
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
            let op = match &e.kind {
                ExprKind::Add(..) => " + ",
                ExprKind::Sub(..) => " - ",
                ExprKind::Mul(..) => " * ",
                _ => " / ",
            };
            write_expr(s, a, p);
            s.push_str(op);
            write_expr(s, b, p + 1);
        }
        ExprKind::Pow(a, k) => {
            // `q^1` must stay a power node to round-trip
            write_expr(s, a, 5);
            match &k.kind {
                IntKind::Lit(n) => {
                    let _ = write!(s, "^{n}");
                }
                _ => s.push_str(&exponent(k)),
            }
        }
        ExprKind::Poch { bases, step, len } => {
            s.push_str("poch(");
            write_bases(s, bases, step);
            if let Some(l) = len {
                let _ = write!(s, ", {}", int_expr(l));
            }
            s.push(')');
        }
        ExprKind::Theta { bases, step } => {
            s.push_str("theta(");
            write_bases(s, bases, step);
            s.push(')');
        }
        ExprKind::QBinom(n, k) => {
            let _ = write!(s, "qbinom({}, {})", int_expr(n), int_expr(k));
        }
        ExprKind::Sum { index, body } => {
            s.push_str("sum(");
            match index {
                SumIndex::Chain(c) => write_chain(s, c),
                SumIndex::Bilateral(n) => {
                    let _ = write!(s, "{n} in Z");
                }
            }
            let _ = write!(s, ", {})", expr(body));
        }
        ExprKind::AltSum { chain, body } => {
            s.push_str("altsum(");
            write_chain(s, chain);
            let _ = write!(s, ", {})", expr(body));
        }
        ExprKind::Appell { var, body } => {
            let _ = write!(s, "appell({var}, {})", expr(body));
        }
        ExprKind::Hecke { n, j, region, body } => {
            let r = match region {
                HeckeRegion::Full => "full",
                HeckeRegion::Half => "half",
            };
            let _ = write!(s, "hecke({n}, {j}, {r}, {})", expr(body));
        }
    }
    if p < min {
        s.push(')');
    }
}

fn write_bases(s: &mut String, bases: &[Expr], step: &IntExpr) {
    let parts: Vec<String> = bases.iter().map(expr).collect();
    s.push_str(&parts.join(", "));
    match step.kind {
        IntKind::Lit(1) => s.push_str("; q"),
        _ => {
            let _ = write!(s, "; q{}", exponent(step));
        }
    }
}

fn write_chain(s: &mut String, chain: &[String]) {
    for n in chain {
        let _ = write!(s, "{n} >= ");
    }
    s.push('0');
}

fn iprec(e: &IntKind) -> u8 {
    match e {
        IntKind::Add(..) | IntKind::Sub(..) => 1,
        IntKind::Mul(..) => 2,
        IntKind::Neg(_) => 3,
        IntKind::Pow(..) => 4,
        _ => 5,
    }
}

fn write_int(s: &mut String, e: &IntExpr, min: u8) {
    let p = iprec(&e.kind);
    if p < min {
        s.push('(');
    }
    match &e.kind {
        IntKind::Lit(n) => {
            let _ = write!(s, "{n}");
        }
        IntKind::Var(v) => s.push_str(v),
        IntKind::Neg(a) => {
            s.push('-');
            write_int(s, a, 3);
        }
        IntKind::Add(a, b) | IntKind::Sub(a, b) => {
            write_int(s, a, 1);
            s.push_str(if matches!(e.kind, IntKind::Add(..)) { " + " } else { " - " });
            write_int(s, b, 2);
        }
        IntKind::Mul(a, b) => {
            write_int(s, a, 2);
            s.push('*');
            write_int(s, b, 3);
        }
        IntKind::Pow(a, k) => {
            write_int(s, a, 5);
            let _ = write!(s, "^{k}");
        }
        IntKind::Binom(a, k) => {
            let _ = write!(s, "binom({}, {k})", int_expr(a));
        }
    }
    if p < min {
        s.push(')');
    }
}
