//! Sparse exterior forms on a fixed six-dimensional frame.
//!
//! A blade e^{i1..ik} is stored as a bitmask (bit i-1 for index i); coefficients are complex
//! over the chosen real backend. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{complex_to_string, re, Scalar, C};

/// Frame dimension.
pub const DIM: usize = 6;

pub type Blade = u8;

/// 1-based indices of a blade, ascending.
pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..DIM).filter(|i| b & (1 << i) != 0).map(|i| i + 1).collect()
}

/// Blade and permutation sign for a list of 1-based indices; `None` on repeats or range errors.
pub fn blade_of(indices: &[usize]) -> Option<(Blade, i32)> {
    let mut mask: Blade = 0;
    let mut sign = 1;
    for &i in indices {
        if !(1..=DIM).contains(&i) || mask & (1 << (i - 1)) != 0 {
            return None;
        }
        // each already-present larger index is a transposition
        let above = mask >> i;
        if above.count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= 1 << (i - 1);
    }
    Some((mask, sign))
}

/// Sign of e^a ∧ e^b = sign · e^{a|b}; `None` if the blades overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0;
    for j in 0..DIM {
        if b & (1 << j) != 0 {
            inversions += (a >> (j + 1)).count_ones();
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// All blades of degree k, in lexicographic order of their index tuples.
pub fn blades(k: usize) -> Vec<Blade> {
    fn rec(start: usize, left: usize, acc: Blade, out: &mut Vec<Blade>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..DIM {
            rec(i + 1, left - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= DIM {
        rec(0, k, 0, &mut out);
    }
    out
}

/// A homogeneous exterior form with complex coefficients.
#[derive(Clone, Debug)]
pub struct Form<S> {
    degree: usize,
    terms: BTreeMap<Blade, C<S>>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(degree: usize) -> Self {
        Form { degree, terms: BTreeMap::new() }
    }

    /// The constant 0-form c.
    pub fn constant(c: C<S>) -> Self {
        Form::zero(0).with_term(0, c)
    }

    pub fn one() -> Self {
        Form::constant(C::one())
    }

    /// The blade e^{i1..ik} (1-based, any order; sign normalized).
    pub fn e(indices: &[usize]) -> Self {
        Form::term(indices, re(S::one()))
    }

    /// c · e^{i1..ik}.
    pub fn term(indices: &[usize], c: C<S>) -> Self {
        let mut f = Form::zero(indices.len());
        if let Some((b, s)) = blade_of(indices) {
            f.add_term(b, if s < 0 { -c } else { c });
        }
        f
    }

    /// Real-coefficient linear combination of blades given as 1-based index lists.
    pub fn real(degree: usize, terms: &[(&[usize], S)]) -> Self {
        let mut f = Form::zero(degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "blade of wrong degree");
            f = f + Form::term(idx, re(c.clone()));
        }
        f
    }

    pub fn from_blades(degree: usize, terms: impl IntoIterator<Item = (Blade, C<S>)>) -> Self {
        let mut f = Form::zero(degree);
        for (b, c) in terms {
            debug_assert_eq!(b.count_ones() as usize, degree);
            f.add_term(b, c);
        }
        f
    }

    fn with_term(mut self, b: Blade, c: C<S>) -> Self {
        self.add_term(b, c);
        self
    }

    fn add_term(&mut self, b: Blade, c: C<S>) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&b) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(b, v);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &C<S>)> {
        self.terms.iter()
    }

    /// Terms in lexicographic order of their index tuples.
    pub fn sorted_terms(&self) -> Vec<(Blade, C<S>)> {
        let mut v: Vec<(Blade, C<S>)> = self.terms.iter().map(|(b, c)| (*b, c.clone())).collect();
        v.sort_by_key(|(b, _)| blade_indices(*b));
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_blade(&self, b: Blade) -> C<S> {
        self.terms.get(&b).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of e^{i1..ik}, honoring the sign of the given index order.
    pub fn coeff(&self, indices: &[usize]) -> C<S> {
        match blade_of(indices) {
            Some((b, s)) => {
                let c = self.coeff_blade(b);
                if s < 0 {
                    -c
                } else {
                    c
                }
            }
            None => C::zero(),
        }
    }

    /// True when all coefficients are real.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// Coefficient-wise complex conjugation in the real frame.
    pub fn conj(&self) -> Self {
        Form {
            degree: self.degree,
            terms: self.terms.iter().map(|(b, c)| (*b, c.conj())).collect(),
        }
    }

    pub fn re(&self) -> Self {
        Form::from_blades(self.degree, self.terms.iter().map(|(b, c)| (*b, re(c.re.clone()))))
    }

    pub fn im(&self) -> Self {
        Form::from_blades(self.degree, self.terms.iter().map(|(b, c)| (*b, re(c.im.clone()))))
    }

    pub fn scale(&self, c: &C<S>) -> Self {
        Form::from_blades(self.degree, self.terms.iter().map(|(b, x)| (*b, x.clone() * c.clone())))
    }

    pub fn scale_real(&self, c: &S) -> Self {
        self.scale(&re(c.clone()))
    }

    pub fn wedge(&self, other: &Form<S>) -> Form<S> {
        let deg = self.degree + other.degree;
        let mut out = Form::zero(deg);
        if deg > DIM {
            return out;
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(s) = wedge_sign(*a, *b) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(a | b, if s < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// Interior product ι_{e_i} (1-based index).
    pub fn contract(&self, i: usize) -> Form<S> {
        let mut out = Form::zero(self.degree.saturating_sub(1));
        let bit = 1u8 << (i - 1);
        for (b, c) in &self.terms {
            if b & bit == 0 {
                continue;
            }
            let below = (b & (bit - 1)).count_ones();
            out.add_term(b & !bit, if below % 2 == 1 { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Value on frame vectors e_{i1}, …, e_{ik} (1-based).
    pub fn evaluate(&self, vectors: &[usize]) -> Result<C<S>> {
        if vectors.len() != self.degree {
            return Err(Error::Arity { expected: self.degree, got: vectors.len() });
        }
        Ok(self.coeff(vectors))
    }

    /// Value on arbitrary real vectors given by frame coordinates.
    pub fn evaluate_on(&self, vectors: &[[S; DIM]]) -> Result<C<S>> {
        if vectors.len() != self.degree {
            return Err(Error::Arity { expected: self.degree, got: vectors.len() });
        }
        let mut f = self.clone();
        for v in vectors {
            let mut g = Form::zero(f.degree - 1);
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    g = g + f.contract(i + 1).scale_real(x);
                }
            }
            f = g;
        }
        Ok(f.coeff_blade(0))
    }

    /// Change of backend.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form::from_blades(
            self.degree,
            self.terms.iter().map(|(b, c)| (*b, Complex::new(f(&c.re), f(&c.im)))),
        )
    }

    /// Coefficients on the given blade list.
    pub fn to_vec(&self, basis: &[Blade]) -> Vec<C<S>> {
        basis.iter().map(|b| self.coeff_blade(*b)).collect()
    }

    pub fn from_vec(degree: usize, basis: &[Blade], v: &[C<S>]) -> Self {
        Form::from_blades(degree, basis.iter().cloned().zip(v.iter().cloned()))
    }

    /// Real and imaginary parts of the coefficients on the given blades, concatenated.
    pub fn to_real_vec(&self, basis: &[Blade]) -> Vec<S> {
        let c = self.to_vec(basis);
        c.iter().map(|z| z.re.clone()).chain(c.iter().map(|z| z.im.clone())).collect()
    }

    /// Real coefficient vector; imaginary parts are ignored.
    pub fn to_re_vec(&self, basis: &[Blade]) -> Vec<S> {
        basis.iter().map(|b| self.coeff_blade(*b).re).collect()
    }

    pub fn from_re_vec(degree: usize, basis: &[Blade], v: &[S]) -> Self {
        Form::from_blades(degree, basis.iter().cloned().zip(v.iter().map(|x| re(x.clone()))))
    }

    /// Image under the algebra homomorphism e^i ↦ images[i−1].
    pub fn substitute(&self, images: &[Form<S>]) -> Form<S> {
        let mut out = Form::zero(self.degree);
        for (b, c) in &self.terms {
            let mut t = Form::constant(c.clone());
            for i in blade_indices(*b) {
                t = t.wedge(&images[i - 1]);
                if t.is_zero() {
                    break;
                }
            }
            if !t.is_zero() {
                out = out + t;
            }
        }
        out
    }

    /// Split into bidegree components given the (1,0) and (0,1) parts of each e^i.
    pub fn split_bidegree(&self, p10: &[Form<S>], p01: &[Form<S>]) -> BTreeMap<(usize, usize), Form<S>> {
        let mut out: BTreeMap<(usize, usize), Form<S>> = BTreeMap::new();
        for (b, c) in &self.terms {
            // partial products indexed by the number of (1,0) factors
            let mut parts: Vec<Form<S>> = vec![Form::constant(c.clone())];
            for i in blade_indices(*b) {
                let mut next: Vec<Form<S>> = vec![Form::zero(parts[0].degree + 1); parts.len() + 1];
                for (p, f) in parts.iter().enumerate() {
                    if f.is_zero() {
                        continue;
                    }
                    next[p + 1] = &next[p + 1] + &f.wedge(&p10[i - 1]);
                    next[p] = &next[p] + &f.wedge(&p01[i - 1]);
                }
                parts = next;
            }
            for (p, f) in parts.into_iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let key = (p, self.degree - p);
                let entry = out.entry(key).or_insert_with(|| Form::zero(self.degree));
                *entry = &*entry + &f;
            }
        }
        out.retain(|_, f| !f.is_zero());
        out
    }

    /// Human-readable text such as "2 e12 - 3/2 e34".
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (b, c)) in self.sorted_terms().iter().enumerate() {
            let name: String = if *b == 0 {
                String::new()
            } else {
                format!("e{}", blade_indices(*b).iter().map(|i| i.to_string()).collect::<String>())
            };
            let (neg, mag) = if c.im.is_zero() && c.re.is_negative() {
                (true, complex_to_string(&-c.clone()))
            } else {
                (false, complex_to_string(c))
            };
            let coef = if !c.im.is_zero() && !c.re.is_zero() { format!("({mag})") } else { mag };
            if n > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            if name.is_empty() {
                s.push_str(&coef);
            } else if coef == "1" {
                s.push_str(&name);
            } else {
                s.push_str(&format!("{coef} {name}"));
            }
        }
        s
    }
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<S: Scalar> PartialEq for Form<S> {
    fn eq(&self, other: &Self) -> bool {
        (self.degree == other.degree || (self.is_zero() && other.is_zero())) && (self - other).is_zero()
    }
}

impl<'a, S: Scalar> Add<&'a Form<S>> for &'a Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: &Form<S>) -> Form<S> {
        let mut out = self.clone();
        if out.is_zero() {
            out.degree = rhs.degree;
        }
        debug_assert!(rhs.is_zero() || out.degree == rhs.degree, "adding forms of different degree");
        for (b, c) in &rhs.terms {
            out.add_term(*b, c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Sub<&'a Form<S>> for &'a Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: &Form<S>) -> Form<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Form<S>) -> Form<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Form<S>) -> Form<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        Form {
            degree: self.degree,
            terms: self.terms.iter().map(|(b, c)| (*b, -c.clone())).collect(),
        }
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        -&self
    }
}

/// Sum of forms of the same degree.
pub fn sum<S: Scalar>(degree: usize, forms: impl IntoIterator<Item = Form<S>>) -> Form<S> {
    forms.into_iter().fold(Form::zero(degree), |a, b| a + b)
}
