//! Identities whose summation depth depends on `k`, emitted as source text
//! for one `k` at a time.

use std::fmt::Write;

fn chain(k: i64) -> Vec<String> {
    (1..=k).map(|i| format!("n{i}")).collect()
}

fn chain_head(names: &[String]) -> String {
    format!("{} >= 0", names.join(" >= "))
}

/// `1/((q^s;q^s)_{n1-n2} ... (q^s;q^s)_{n(k-1)-nk})` as a list of factors.
fn gaps(names: &[String], s: i64) -> Vec<String> {
    names.windows(2).map(|w| format!("poch({}; {}, {} - {})", q_pow(s), q_pow(s), w[0], w[1])).collect()
}

fn q_pow(e: i64) -> String {
    if e == 1 {
        "q".into()
    } else {
        format!("q^{e}")
    }
}

fn squares(names: &[String]) -> String {
    names.iter().map(|n| format!("{n}^2")).collect::<Vec<_>>().join(" + ")
}

fn quotient(num: &[String], den: &[String]) -> String {
    let top = num.join(" * ");
    match den.len() {
        0 => top,
        1 => format!("{top} / {}", den[0]),
        _ => format!("{top} / ({})", den.join(" * ")),
    }
}

/// Odd-modulus multisum with the key pair at its bottom.
pub fn ag1(k: i64, specialised: bool) -> String {
    let n = chain(k);
    let last = &n[n.len() - 1];
    let num = vec![format!("q^({})", squares(&n)), format!("poch(z, q/z; q, {last})")];
    let mut den = gaps(&n, 1);
    den.push(format!("poch(q; q, 2*{last})"));
    let m = 2 * k + 1;
    let mut s = String::new();
    let name = if specialised { "AG1_i" } else { "AG1" };
    let _ = writeln!(s, "identity {name} {{");
    if specialised {
        let _ = writeln!(s, "  param i in 1..{k}");
    }
    let _ = writeln!(s, "  scale 1\n  order 50");
    if specialised {
        let _ = writeln!(s, "  z = q^(i - {k})");
    }
    let _ = writeln!(s, "  lhs sum({}, {})", chain_head(&n), quotient(&num, &den));
    let _ = writeln!(s, "  rhs theta({}*z, {}/z, {}; {}) / theta(q; q)", q_pow(k), q_pow(k + 1), q_pow(m), q_pow(m));
    s.push_str("}\n");
    s
}

/// Even-modulus multisum in base `q^2`.
pub fn ag2(k: i64, specialised: bool) -> String {
    let n = chain(k);
    let last = &n[n.len() - 1];
    let num = vec![format!("q^({})", squares(&n)), format!("poch(z, q^2/z, -q; q^2, {last})")];
    let mut den = gaps(&n, 2);
    den.push(format!("poch(q^2; q^2, 2*{last})"));
    let m = 2 * (k + 1);
    let mut s = String::new();
    let name = if specialised { "AG2_i" } else { "AG2" };
    let _ = writeln!(s, "identity {name} {{");
    if specialised {
        let _ = writeln!(s, "  param i in 1..{}", k + 1);
    }
    let _ = writeln!(s, "  scale 1\n  order 50");
    if specialised {
        let _ = writeln!(s, "  z = q^(i - {k})");
    }
    let _ = writeln!(s, "  lhs sum({}, {})", chain_head(&n), quotient(&num, &den));
    let _ = writeln!(
        s,
        "  rhs theta(-q; q^2) * theta({}*z, {}/z, {}; {}) / theta(q^2; q^2)",
        q_pow(k),
        q_pow(k + 2),
        q_pow(m),
        q_pow(m)
    );
    s.push_str("}\n");
    s
}

/// `k - 1` lattice steps on the key pair followed by the weak lemma with
/// both limit parameters sent to infinity. `jouhet` selects the second
/// lattice; otherwise the first.
pub fn iterated_lattice(k: i64, jouhet: bool) -> String {
    let n = chain(k);
    let last = &n[n.len() - 1];
    let top = 1i64 << (k - 1);
    let mut num = vec![format!("q^(n1^2)")];
    let mut den = Vec::new();
    let mut shift = Vec::new();
    for i in 0..k - 1 {
        let s = 1i64 << i;
        let (a, b) = (&n[i as usize], &n[i as usize + 1]);
        if jouhet {
            num.push(format!("poch(-{}; {}, 2*{b})", q_pow(s), q_pow(s)));
            shift.push(format!("{s}*({a} - {b})"));
        } else {
            num.push(format!("poch(-1; {}, 2*{b})", q_pow(s)));
            shift.push(format!("{s}*{b}"));
        }
        den.push(format!("poch({}; {}, {a} - {b})", q_pow(2 * s), q_pow(2 * s)));
    }
    num[0] = format!("q^(n1^2 + {})", shift.join(" + "));
    num.push(format!("poch(z, {}/z; {}, {last})", q_pow(top), q_pow(top)));
    den.push(format!("poch({}; {}, 2*{last})", q_pow(top), q_pow(top)));

    let alpha = format!("(-1)^n * z^n * q^({top}*binom(n, 2) + n^2");
    let rhs_body = if jouhet {
        format!("{alpha})")
    } else {
        let lin: i64 = (0..k - 1).map(|i| 1i64 << i).sum();
        let dens: Vec<String> = (0..k - 1).map(|i| format!("(1 + q^({}*n))", 1i64 << (i + 1))).collect();
        format!("{} * {alpha} + {lin}*n) / ({})", 1i64 << (k - 1), dens.join(" * "))
    };
    let name = if jouhet { "jouhet_lattice" } else { "djk_lattice" };
    let mut s = String::new();
    let _ = writeln!(s, "identity {name} {{\n  scale 1\n  order 40");
    let _ = writeln!(s, "  lhs sum({}, {})", chain_head(&n), quotient(&num, &den));
    let _ = writeln!(s, "  rhs sum(n in Z, {rhs_body}) / theta(q; q)");
    s.push_str("}\n");
    s
}
