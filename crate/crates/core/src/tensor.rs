//! Sparse tensors over a fixed basis: antisymmetric bivectors and
//! trivectors in canonical index order, and general 2-tensors.
//!
//! Wedge convention: `x ^ y = x (x) y - y (x) x`, with no 1/2. A bivector
//! stores each wedge monomial once, at strictly increasing indices.

use crate::coeff::Scalar;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bivector {
    dim: usize,
    terms: BTreeMap<(usize, usize), Scalar>,
}

impl Bivector {
    pub fn zero(dim: usize) -> Self {
        Bivector {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(dim: usize, terms: &[(usize, usize, Scalar)]) -> Self {
        let mut b = Bivector::zero(dim);
        for (i, j, s) in terms {
            b.add_term(*i, *j, s.clone());
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `s * e_i ^ e_j`, canonicalizing index order.
    pub fn add_term(&mut self, i: usize, j: usize, s: Scalar) {
        assert!(i < self.dim && j < self.dim, "index out of range");
        if i == j || s.is_zero() {
            return;
        }
        let (key, val) = if i < j { ((i, j), s) } else { ((j, i), -&s) };
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &val;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                v.insert(val);
            }
        }
    }

    /// Coefficient of `e_i ^ e_j` (signed for reversed order).
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        if i == j {
            return Scalar::zero();
        }
        if i < j {
            self.terms.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            self.terms
                .get(&(j, i))
                .map(|s| -s)
                .unwrap_or_default()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Scalar) -> Bivector {
        let mut out = Bivector::zero(self.dim);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c * s);
        }
        out
    }

    pub fn add(&self, other: &Bivector) -> Bivector {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Bivector) -> Bivector {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Bivector {
        self.scale(&Scalar::from_int(-1))
    }

    /// Full antisymmetric coefficient matrix.
    pub fn to_matrix(&self) -> Vec<Vec<Scalar>> {
        let mut m = vec![vec![Scalar::zero(); self.dim]; self.dim];
        for (&(i, j), c) in &self.terms {
            m[i][j] = c.clone();
            m[j][i] = -c;
        }
        m
    }

    /// Pushforward along a linear map: each basis vector is replaced by its
    /// image, so a map with columns `v_j` sends `e_i ^ e_j` to `v_i ^ v_j`.
    pub fn pushforward(&self, map: &crate::liealg::LinearMap) -> Bivector {
        assert_eq!(map.source_dim(), self.dim, "map domain mismatch");
        let mut out = Bivector::zero(map.target_dim());
        for (&(i, j), c) in &self.terms {
            let vi = map.column(i);
            let vj = map.column(j);
            for (a, ca) in vi.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (b, cb) in vj.iter().enumerate() {
                    if cb.is_zero() {
                        continue;
                    }
                    out.add_term(a, b, &(ca * cb) * c);
                }
            }
        }
        out
    }

    pub fn substitute_param(
        &self,
        name: &str,
        value: &Scalar,
    ) -> Result<Bivector, crate::coeff::CoeffError> {
        let mut out = Bivector::zero(self.dim);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c.substitute_param(name, value)?);
        }
        Ok(out)
    }

    /// Renders the bivector with the given basis names.
    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in &self.terms {
            parts.push(format_term(c, &format!("{}^{}", names[i], names[j])));
        }
        join_terms(parts)
    }
}

/// `v ^ w` for coefficient vectors over the same basis.
pub fn wedge(v: &[Scalar], w: &[Scalar]) -> Bivector {
    assert_eq!(v.len(), w.len());
    let mut out = Bivector::zero(v.len());
    for (i, a) in v.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in w.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            out.add_term(i, j, a * b);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trivector {
    dim: usize,
    terms: BTreeMap<(usize, usize, usize), Scalar>,
}

impl Trivector {
    pub fn zero(dim: usize) -> Self {
        Trivector {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `s * e_i ^ e_j ^ e_k`, canonicalizing by permutation sign.
    pub fn add_term(&mut self, i: usize, j: usize, k: usize, s: Scalar) {
        assert!(i < self.dim && j < self.dim && k < self.dim);
        if i == j || j == k || i == k || s.is_zero() {
            return;
        }
        let mut idx = [i, j, k];
        let mut sign = 1i64;
        // Sort three indices, tracking parity.
        for a in 0..2 {
            for b in 0..2 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        let val = if sign == 1 { s } else { -&s };
        use std::collections::btree_map::Entry;
        match self.terms.entry((idx[0], idx[1], idx[2])) {
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &val;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                v.insert(val);
            }
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Scalar {
        if i == j || j == k || i == k {
            return Scalar::zero();
        }
        let mut idx = [i, j, k];
        let mut sign = 1i64;
        for a in 0..2 {
            for b in 0..2 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        match self.terms.get(&(idx[0], idx[1], idx[2])) {
            Some(s) if sign == 1 => s.clone(),
            Some(s) => -s,
            None => Scalar::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Scalar) -> Trivector {
        let mut out = Trivector::zero(self.dim);
        for (&(i, j, k), c) in &self.terms {
            out.add_term(i, j, k, c * s);
        }
        out
    }

    pub fn add(&self, other: &Trivector) -> Trivector {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (&(i, j, k), c) in &other.terms {
            out.add_term(i, j, k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Trivector) -> Trivector {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&(i, j, k), c) in &self.terms {
            parts.push(format_term(
                c,
                &format!("{}^{}^{}", names[i], names[j], names[k]),
            ));
        }
        join_terms(parts)
    }
}

/// General 2-tensor with no symmetry assumption.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tensor2 {
    dim: usize,
    terms: BTreeMap<(usize, usize), Scalar>,
}

impl Tensor2 {
    pub fn zero(dim: usize) -> Self {
        Tensor2 {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(dim: usize, terms: &[(usize, usize, Scalar)]) -> Self {
        let mut t = Tensor2::zero(dim);
        for (i, j, s) in terms {
            t.add_term(*i, *j, s.clone());
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, i: usize, j: usize, s: Scalar) {
        assert!(i < self.dim && j < self.dim);
        if s.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &s;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                v.insert(s);
            }
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Tensor2) -> Tensor2 {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Tensor2) -> Tensor2 {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Tensor2 {
        let mut out = Tensor2::zero(self.dim);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c * s);
        }
        out
    }

    pub fn transpose(&self) -> Tensor2 {
        let mut out = Tensor2::zero(self.dim);
        for (&(i, j), c) in &self.terms {
            out.add_term(j, i, c.clone());
        }
        out
    }

    /// `(T + T^t)/2`.
    pub fn symmetric_part(&self) -> Tensor2 {
        let half = Scalar::rational(1, 2);
        self.add(&self.transpose()).scale(&half)
    }

    /// `(T - T^t)/2` as a bivector: the wedge-basis coefficient of
    /// `e_i ^ e_j` is exactly the antisymmetrized tensor component.
    pub fn antisymmetric_part(&self) -> Bivector {
        let mut out = Bivector::zero(self.dim);
        let half = Scalar::rational(1, 2);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c * &half);
        }
        out
    }

    /// Embeds a bivector: `e_i ^ e_j -> e_i (x) e_j - e_j (x) e_i`.
    pub fn from_bivector(b: &Bivector) -> Tensor2 {
        let mut out = Tensor2::zero(b.dim());
        for (&(i, j), c) in b.terms() {
            out.add_term(i, j, c.clone());
            out.add_term(j, i, -c);
        }
        out
    }

    pub fn pushforward(&self, map: &crate::liealg::LinearMap) -> Tensor2 {
        assert_eq!(map.source_dim(), self.dim);
        let mut out = Tensor2::zero(map.target_dim());
        for (&(i, j), c) in &self.terms {
            let vi = map.column(i);
            let vj = map.column(j);
            for (a, ca) in vi.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (b, cb) in vj.iter().enumerate() {
                    if cb.is_zero() {
                        continue;
                    }
                    out.add_term(a, b, &(ca * cb) * c);
                }
            }
        }
        out
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in &self.terms {
            parts.push(format_term(c, &format!("{}(x){}", names[i], names[j])));
        }
        join_terms(parts)
    }
}

fn format_term(c: &Scalar, basis: &str) -> String {
    if c.is_one() {
        basis.to_string()
    } else if (-c).is_one() {
        format!("-{}", basis)
    } else if c.num_terms() > 1 {
        format!("({})*{}", c, basis)
    } else {
        format!("{}*{}", c, basis)
    }
}

fn join_terms(parts: Vec<String>) -> String {
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i == 0 {
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

impl fmt::Display for Bivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim).map(|i| format!("e{}", i)).collect();
        write!(f, "{}", self.display(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_antisymmetry() {
        let dim = 3;
        let mut b = Bivector::zero(dim);
        b.add_term(2, 1, Scalar::one());
        assert_eq!(b.get(1, 2), Scalar::from_int(-1));
        assert_eq!(b.get(2, 1), Scalar::one());
        b.add_term(1, 2, Scalar::one());
        assert!(b.is_zero());
    }

    #[test]
    fn trivector_permutation_sign() {
        let mut t = Trivector::zero(4);
        t.add_term(2, 0, 1, Scalar::one());
        // (2,0,1) is an even permutation of (0,1,2)
        assert_eq!(t.get(0, 1, 2), Scalar::one());
        assert_eq!(t.get(1, 0, 2), Scalar::from_int(-1));
    }

    #[test]
    fn bivector_tensor_round_trip() {
        let b = Bivector::from_terms(3, &[(0, 1, Scalar::from_int(2)), (1, 2, Scalar::one())]);
        let t = Tensor2::from_bivector(&b);
        assert!(t.symmetric_part().is_zero());
        assert_eq!(t.antisymmetric_part(), b);
    }
}
