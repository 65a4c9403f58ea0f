use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::series::Rational;

/// A polynomial with rational coefficients in named integer variables.
/// Monomials are keyed by the sorted multiset of their variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Vec<String>, Rational>,
}

impl Poly {
    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::default();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(Rational::from_int(c))
    }

    pub fn var(name: &str) -> Self {
        let mut p = Poly::default();
        p.add_term(vec![name.to_string()], Rational::one());
        p
    }

    fn add_term(&mut self, mut key: Vec<String>, c: Rational) {
        if c.is_zero() {
            return;
        }
        key.sort();
        let e = self.terms.entry(key.clone()).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&Rational::from_int(-1))
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut out = Poly::default();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ka, a) in &self.terms {
            for (kb, b) in &o.terms {
                let mut k = ka.clone();
                k.extend(kb.iter().cloned());
                out.add_term(k, a * b);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::int(1), |acc, _| acc.mul(self))
    }

    /// `binom(self, k) = self (self - 1) ... (self - k + 1) / k!`.
    pub fn binom(&self, k: u32) -> Poly {
        let mut out = Poly::int(1);
        let mut fact = 1i64;
        for i in 0..k as i64 {
            out = out.mul(&self.sub(&Poly::int(i)));
            fact *= i + 1;
        }
        out.scale(&Rational::new(1, fact))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn coefficients_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vars(&self) -> Vec<String> {
        let mut v: Vec<String> = self.terms.keys().flatten().cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.terms.keys().any(|k| k.iter().any(|v| v == name))
    }

    /// Value with every variable bound; `None` if one is missing.
    pub fn eval(&self, env: &HashMap<String, i64>) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            let mut t = c.clone();
            for v in k {
                t = &t * &Rational::from_int(*env.get(v)?);
            }
            acc += &t;
        }
        Some(acc)
    }

    /// Substitutes a value for one variable.
    pub fn subst(&self, name: &str, value: i64) -> Poly {
        let mut out = Poly::default();
        let x = Rational::from_int(value);
        for (k, c) in &self.terms {
            let mut t = c.clone();
            let mut rest = Vec::new();
            for v in k {
                if v == name {
                    t = &t * &x;
                } else {
                    rest.push(v.clone());
                }
            }
            out.add_term(rest, t);
        }
        out
    }

    /// Substitutes `-name` for `name`.
    pub fn reflect(&self, name: &str) -> Poly {
        let mut out = Poly::default();
        for (k, c) in &self.terms {
            let deg = k.iter().filter(|v| *v == name).count();
            let c = if deg % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(k.clone(), c);
        }
        out
    }

    /// A lower bound valid whenever `0 <= v <= keep` for every variable `v`
    /// other than `keep`: monomials in those variables with a non-negative
    /// coefficient are dropped, negative ones have each such variable
    /// replaced by `keep`.
    pub fn lower_in(&self, keep: &str) -> Poly {
        let mut out = Poly::default();
        for (k, c) in &self.terms {
            if k.iter().all(|v| v == keep) {
                out.add_term(k.clone(), c.clone());
            } else if c.is_negative() {
                out.add_term(vec![keep.to_string(); k.len()], c.clone());
            }
        }
        out
    }

    /// Coefficients of a univariate polynomial in `name`, lowest degree first.
    /// `None` if another variable occurs.
    pub fn univariate(&self, name: &str) -> Option<Vec<Rational>> {
        let mut coeffs = Vec::new();
        for (k, c) in &self.terms {
            if k.iter().any(|v| v != name) {
                return None;
            }
            let d = k.len();
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rational::zero());
            }
            coeffs[d] = c.clone();
        }
        Some(coeffs)
    }

    /// Smallest `N >= 0` such that `self(n) > m` for all integers `n >= N`,
    /// from a Cauchy root bound; `None` if the polynomial does not grow.
    pub fn exceeds_from(&self, name: &str, m: i64) -> Option<i64> {
        let mut c = self.sub(&Poly::int(m)).univariate(name)?;
        if c.is_empty() {
            return None;
        }
        let lead = c.pop().expect("nonempty");
        if c.is_empty() {
            return if lead.is_negative() || lead.is_zero() { None } else { Some(0) };
        }
        if lead.is_negative() {
            return None;
        }
        let ratio = c.iter().map(|a| (a / &lead).abs()).max().unwrap_or_default();
        Some((&Rational::one() + &ratio).ceil_i64()?.max(0))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| if k.is_empty() { c.to_string() } else { format!("{c}*{}", k.join("*")) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_and_eval() {
        let n = Poly::var("n");
        let b = n.add(&Poly::int(1)).binom(2);
        let env = HashMap::from([("n".to_string(), 4)]);
        assert_eq!(b.eval(&env), Some(Rational::from_int(10)));
    }

    #[test]
    fn lower_in_drops_and_replaces() {
        // n^2 - n*j + j^2 >= n^2 - n^2 = 0 under 0 <= j <= n
        let n = Poly::var("n");
        let j = Poly::var("j");
        let p = n.mul(&n).sub(&n.mul(&j)).add(&j.mul(&j));
        assert_eq!(p.lower_in("n"), Poly::default());
    }

    #[test]
    fn growth_threshold() {
        let n = Poly::var("n");
        let p = n.mul(&n).sub(&n.scale(&Rational::from_int(20)));
        let start = p.exceeds_from("n", 10).unwrap();
        for k in start..start + 50 {
            assert!(k * k - 20 * k > 10);
        }
        assert!(Poly::int(3).exceeds_from("n", 5).is_none());
        assert!(n.neg().exceeds_from("n", 0).is_none());
    }
}
