//! Sparse multivariate polynomials.
//!
//! A polynomial knows only its number of variables; names are supplied when
//! parsing or printing. Terms are kept in a `BTreeMap` keyed by exponent
//! vectors, so iteration is lexicographic with the first variable most
//! significant and the last entry is the lex-leading term.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use smallvec::SmallVec;
use thiserror::Error;

use super::scalar::Scalar;
use super::upoly::UPoly;

pub type Exponent = SmallVec<[u32; 4]>;

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<T> {
    arity: usize,
    terms: BTreeMap<Exponent, T>,
}

#[derive(Debug, Clone, Error)]
#[error("polynomial division is not exact")]
pub struct NotDivisible<T: Scalar> {
    /// Nonzero remainder of the division by the leading term.
    pub remainder: Poly<T>,
}

pub fn exponent_degree(e: &Exponent) -> u32 {
    e.iter().sum()
}

/// All exponent vectors of total degree `d` in `n` variables, in descending
/// lexicographic order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = Exponent::from_elem(0, n);
    fn rec(i: usize, left: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(cur);
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// All exponent vectors of total degree at most `d`, by increasing degree.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Exponent> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

impl<T: Scalar> Poly<T> {
    pub fn zero(arity: usize) -> Self {
        Poly { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Poly::constant(arity, T::one())
    }

    pub fn constant(arity: usize, c: T) -> Self {
        Poly::monomial(arity, Exponent::from_elem(0, arity), c)
    }

    pub fn monomial(arity: usize, exp: Exponent, c: T) -> Self {
        assert_eq!(exp.len(), arity, "exponent arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Poly { arity, terms }
    }

    /// The `i`-th variable.
    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = Exponent::from_elem(0, arity);
        e[i] = 1;
        Poly::monomial(arity, e, T::one())
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Exponent, T)>) -> Self {
        let mut p = Poly::zero(arity);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &T)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn constant_term(&self) -> T {
        self.coeff(&Exponent::from_elem(0, self.arity))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn add_term(&mut self, e: Exponent, c: T) {
        debug_assert_eq!(e.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(exponent_degree).max()
    }

    /// Total degree, with 0 for the zero polynomial.
    pub fn deg(&self) -> u32 {
        self.total_degree().unwrap_or(0)
    }

    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().map(exponent_degree).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(exponent_degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|k| k == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| exponent_degree(e) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Lex-leading term.
    pub fn leading_term(&self) -> Option<(&Exponent, &T)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        let mut p = Poly::zero(self.arity);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), a.clone() * c.clone());
        }
        p
    }

    pub fn mul_monomial(&self, m: &Exponent, c: &T) -> Self {
        let mut p = Poly::zero(self.arity);
        for (e, a) in &self.terms {
            let mut f = e.clone();
            for (x, y) in f.iter_mut().zip(m) {
                *x += y;
            }
            p.add_term(f, a.clone() * c.clone());
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one(self.arity);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[var] -= 1;
            p.add_term(f, c.clone() * T::from_i64(e[var] as i64));
        }
        p
    }

    pub fn eval(&self, point: &[T]) -> T {
        self.eval_in(point, |c| c.clone())
    }

    /// Evaluation at a point with coordinates in a ring `R` containing `T`.
    pub fn eval_in<R: Scalar>(&self, point: &[R], lift: impl Fn(&T) -> R) -> R {
        assert_eq!(point.len(), self.arity, "point arity");
        let mut powers: Vec<Vec<R>> = vec![vec![R::one()]; self.arity];
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let mut t = lift(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= k as usize {
                    let next = pw.last().unwrap().clone() * point[i].clone();
                    pw.push(next);
                }
                t = t * pw[k as usize].clone();
            }
            acc = acc + t;
        }
        acc
    }

    /// Replaces variable `i` by `subs[i]`; the result has the substitutes'
    /// arity.
    pub fn substitute(&self, subs: &[Poly<T>]) -> Poly<T> {
        assert_eq!(subs.len(), self.arity, "one substitute per variable");
        let arity = subs.first().map(|p| p.arity).unwrap_or(0);
        let mut cache: Vec<Vec<Poly<T>>> = subs.iter().map(|s| vec![Poly::one(s.arity), s.clone()]).collect();
        let mut acc = Poly::zero(arity);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(arity, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap() * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][k as usize];
            }
            acc += &t;
        }
        acc
    }

    /// Sets variable `var` to the constant `v`, keeping the arity.
    pub fn set_var(&self, var: usize, v: &T) -> Self {
        let mut p = Poly::zero(self.arity);
        let mut powers = vec![T::one()];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().clone() * v.clone();
                powers.push(next);
            }
            let mut f = e.clone();
            f[var] = 0;
            p.add_term(f, c.clone() * powers[k].clone());
        }
        p
    }

    /// Removes variable `var`, which must not occur.
    pub fn drop_var(&self, var: usize) -> Self {
        let mut p = Poly::zero(self.arity - 1);
        for (e, c) in &self.terms {
            assert_eq!(e[var], 0, "dropped variable occurs");
            let mut f = e.clone();
            f.remove(var);
            p.add_term(f, c.clone());
        }
        p
    }

    /// Inserts a new variable at position `var` (occurring to power 0).
    pub fn insert_var(&self, var: usize) -> Self {
        let mut p = Poly::zero(self.arity + 1);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f.insert(var, 0);
            p.add_term(f, c.clone());
        }
        p
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut p = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            let mut f = Exponent::from_elem(0, self.arity);
            for (i, &k) in e.iter().enumerate() {
                f[perm[i]] = k;
            }
            p.add_term(f, c.clone());
        }
        p
    }

    /// Homogenizes to degree `d` by appending a new last variable.
    pub fn homogenize(&self, d: u32) -> Option<Self> {
        if self.total_degree().is_some_and(|k| k > d) {
            return None;
        }
        let mut p = Poly::zero(self.arity + 1);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f.push(d - exponent_degree(e));
            p.add_term(f, c.clone());
        }
        Some(p)
    }

    /// Sets the last variable to 1 and drops it.
    pub fn dehomogenize_last(&self) -> Self {
        let last = self.arity - 1;
        self.set_var(last, &T::one()).drop_var(last)
    }

    /// Coefficients with respect to powers of `var`; each coefficient keeps
    /// the full arity with `var` absent.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly<T>> {
        let n = self.degree_in(var).map(|d| d as usize + 1).unwrap_or(0);
        let mut out = vec![Poly::zero(self.arity); n];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut f = e.clone();
            f[var] = 0;
            out[k].add_term(f, c.clone());
        }
        out
    }

    pub fn from_coefficients_in(arity: usize, var: usize, coeffs: &[Poly<T>]) -> Self {
        let mut p = Poly::zero(arity);
        for (k, c) in coeffs.iter().enumerate() {
            let mut m = Exponent::from_elem(0, arity);
            m[var] = k as u32;
            p += &c.mul_monomial(&m, &T::one());
        }
        p
    }

    /// The univariate polynomial in `var`, if no other variable occurs.
    pub fn to_upoly(&self, var: usize) -> Option<UPoly<T>> {
        let n = self.degree_in(var).map(|d| d as usize + 1).unwrap_or(0);
        let mut v = vec![T::zero(); n];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return None;
            }
            v[e[var] as usize] = c.clone();
        }
        Some(UPoly::new(v))
    }

    pub fn from_upoly(arity: usize, var: usize, u: &UPoly<T>) -> Self {
        let mut p = Poly::zero(arity);
        for (k, c) in u.coeffs().iter().enumerate() {
            let mut e = Exponent::from_elem(0, arity);
            e[var] = k as u32;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        let mut p = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c));
        }
        p
    }

    pub fn try_map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> Option<U>) -> Option<Poly<U>> {
        let mut p = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c)?);
        }
        Some(p)
    }

    /// Exact quotient `num / den`, or the remainder as witness.
    pub fn exact_divide(&self, den: &Poly<T>) -> Result<Poly<T>, NotDivisible<T>> {
        assert!(!den.is_zero(), "division by the zero polynomial");
        let (lt_e, lt_c) = den.leading_term().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let lt_inv = lt_c.inverse().ok_or_else(|| NotDivisible { remainder: self.clone() })?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.arity);
        let mut stuck = Poly::zero(self.arity);
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lt_e).all(|(a, b)| a >= b) {
                let m: Exponent = e.iter().zip(&lt_e).map(|(a, b)| a - b).collect();
                let q = c * lt_inv.clone();
                rem -= &den.mul_monomial(&m, &q);
                quot.add_term(m, q);
            } else {
                rem.terms.remove(&e);
                stuck.add_term(e, c);
            }
        }
        if stuck.is_zero() {
            Ok(quot)
        } else {
            Err(NotDivisible { remainder: stuck })
        }
    }

    /// Linear change of variables `x_i ↦ Σ_j m[i][j] x_j`.
    pub fn linear_change(&self, m: &[Vec<T>]) -> Self {
        let subs: Vec<Poly<T>> = m
            .iter()
            .map(|row| {
                let mut p = Poly::zero(self.arity);
                for (j, c) in row.iter().enumerate() {
                    p += &Poly::var(self.arity, j).scale(c);
                }
                p
            })
            .collect();
        self.substitute(&subs)
    }

    /// Translation `x_i ↦ x_i + a_i`.
    pub fn translate(&self, a: &[T]) -> Self {
        let subs: Vec<Poly<T>> =
            (0..self.arity).map(|i| &Poly::var(self.arity, i) + &Poly::constant(self.arity, a[i].clone())).collect();
        self.substitute(&subs)
    }

    pub fn to_string_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Exponent> = self.terms.keys().collect();
        keys.sort_by(|a, b| exponent_degree(b).cmp(&exponent_degree(a)).then_with(|| b.cmp(a)));
        let mut out = String::new();
        for e in keys {
            let c = &self.terms[e];
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) if !m.contains(['+', '-', ' ']) => (true, m.to_string()),
                _ => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                .collect();
            let mag = if mag.contains(['+', '-', ' ']) { format!("({mag})") } else { mag };
            if mono.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", mag, mono.join("*")));
            }
        }
        out
    }
}

pub fn default_names(arity: usize) -> Vec<String> {
    match arity {
        1 => vec!["t".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        n => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.arity);
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.to_string_with(&refs))
    }
}

impl<T: Scalar> AddAssign<&Poly<T>> for Poly<T> {
    fn add_assign(&mut self, o: &Poly<T>) {
        debug_assert_eq!(self.arity, o.arity);
        for (e, c) in &o.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl<T: Scalar> SubAssign<&Poly<T>> for Poly<T> {
    fn sub_assign(&mut self, o: &Poly<T>) {
        debug_assert_eq!(self.arity, o.arity);
        for (e, c) in &o.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let mut p = self.clone();
        p += o;
        p
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        let mut p = self.clone();
        p -= o;
        p
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        debug_assert_eq!(self.arity, o.arity);
        let mut p = Poly::zero(self.arity);
        for (e, a) in &self.terms {
            for (f, b) in &o.terms {
                let g: Exponent = e.iter().zip(f).map(|(x, y)| x + y).collect();
                p.add_term(g, a.clone() * b.clone());
            }
        }
        p
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly { arity: self.arity, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, o: Poly<T>) -> Poly<T> {
                (&self).$m(&o)
            }
        }
        impl<T: Scalar> $tr<&Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, o: &Poly<T>) -> Poly<T> {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}
