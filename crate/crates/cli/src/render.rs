use manin::coeff::Scalar;
use manin::liealg::{LieAlgebra, SymmetricForm};
use manin::tensor::Bivector;

pub fn names(alg: &LieAlgebra) -> &[String] {
    alg.names()
}

pub fn bivector(b: &Bivector, alg: &LieAlgebra) -> String {
    b.display(alg.names())
}

/// Nonzero brackets of an algebra, one `[X, Y] = ...` line per pair.
pub fn bracket_lines(alg: &LieAlgebra) -> Vec<String> {
    let n = alg.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = alg.bracket_basis(i, j);
            if v.iter().all(Scalar::is_zero) {
                continue;
            }
            let rhs = combination(&v, alg.names());
            out.push(format!("[{}, {}] = {}", alg.name(i), alg.name(j), rhs));
        }
    }
    out
}

/// Linear combination of basis vectors as text.
pub fn combination(coeffs: &[Scalar], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        parts.push(scaled_symbol(c, &names[k]));
    }
    join_signed(parts)
}

/// Nonzero upper-triangle entries of a symmetric form.
pub fn pairing_entries(p: &SymmetricForm, names: &[String]) -> String {
    let n = p.dim();
    let mut parts = Vec::new();
    for i in 0..n {
        for j in i..n {
            let c = p.get(i, j);
            if c.is_zero() {
                continue;
            }
            parts.push(format!("<{}, {}> = {}", names[i], names[j], c));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(", ")
    }
}

/// `c * sym` with 1 and -1 absorbed into the sign.
fn scaled_symbol(c: &Scalar, sym: &str) -> String {
    let one = Scalar::from_int(1);
    let minus = Scalar::from_int(-1);
    if *c == one {
        sym.to_string()
    } else if *c == minus {
        format!("-{sym}")
    } else {
        let cs = c.to_string();
        if cs.contains(" + ") || cs.contains(" - ") {
            format!("({cs})*{sym}")
        } else {
            format!("{cs}*{sym}")
        }
    }
}

fn join_signed(parts: Vec<String>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

/// Fixed-precision coefficient text: near-integers collapse, everything else
/// keeps ten digits, so equal seeds render byte-identically.
pub fn coeff(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() < 5e-11 {
        let r = if r == 0.0 { 0.0 } else { r };
        format!("{}", r as i64)
    } else {
        let s = format!("{x:.10}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn monomial(coords: &[String], powers: &[u32]) -> String {
    let mut parts = Vec::new();
    for (c, &p) in coords.iter().zip(powers) {
        match p {
            0 => {}
            1 => parts.push(c.clone()),
            _ => parts.push(format!("{c}^{p}")),
        }
    }
    parts.join("*")
}

/// Polynomial over the listed monomials, skipping zero coefficients.
pub fn polynomial(coords: &[String], monomials: &[Vec<u32>], coeffs: &[f64]) -> String {
    let mut parts = Vec::new();
    for (m, &c) in monomials.iter().zip(coeffs) {
        if c == 0.0 {
            continue;
        }
        let mono = monomial(coords, m);
        if mono.is_empty() {
            parts.push(coeff(c));
        } else if c == 1.0 {
            parts.push(mono);
        } else if c == -1.0 {
            parts.push(format!("-{mono}"));
        } else {
            parts.push(format!("{}*{mono}", coeff(c)));
        }
    }
    join_signed(parts)
}

/// Polynomial with exact coefficients, as stored in spacetime tables.
pub fn poly_terms(coords: &[String], terms: &[manin::doubles::PolyTerm]) -> String {
    let mut parts = Vec::new();
    for t in terms {
        if t.coeff.is_zero() {
            continue;
        }
        let mono = monomial(coords, &t.powers);
        if mono.is_empty() {
            parts.push(t.coeff.to_string());
        } else {
            parts.push(scaled_symbol(&t.coeff, &mono));
        }
    }
    join_signed(parts)
}

pub fn residual(x: f64) -> String {
    format!("{x:.3e}")
}
