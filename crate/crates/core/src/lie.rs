//! Six-dimensional Lie algebras given by their Chevalley–Eilenberg differential.


use crate::error::{Error, Result};
use crate::exterior::{blade_indices, blades, Form, DIM};
use crate::linalg::{nullspace, Subspace};
use crate::scalar::{imag_unit, Scalar, Q};

/// A frame vector in coordinates.
pub type Vector<S> = [S; DIM];

pub fn zero_vec<S: Scalar>() -> Vector<S> {
    std::array::from_fn(|_| S::zero())
}

pub fn unit_vec<S: Scalar>(i: usize) -> Vector<S> {
    std::array::from_fn(|k| if k + 1 == i { S::one() } else { S::zero() })
}

/// de^k = Σ_{i<j} c^k_ij e^{ij}, k = 1..6.
#[derive(Clone, Debug)]
pub struct LieAlgebra<S> {
    de: Vec<Form<S>>,
}

impl<S: Scalar> PartialEq for LieAlgebra<S> {
    fn eq(&self, other: &Self) -> bool {
        self.de == other.de
    }
}

/// Outcome of the d² = 0 test.
#[derive(Clone, Debug)]
pub enum Jacobi<S> {
    Pass,
    /// d(de^k) ≠ 0.
    Fail { k: usize, witness: Form<S> },
}

impl<S: Scalar> Jacobi<S> {
    pub fn passed(&self) -> bool {
        matches!(self, Jacobi::Pass)
    }
}

/// Ascending series of subspaces and the nilpotency verdict.
#[derive(Clone, Debug)]
pub struct Series<S> {
    /// Terms 𝔤_1, 𝔤_2, … up to stabilization (𝔤_0 = 0 is omitted).
    pub terms: Vec<Subspace<S>>,
    pub nilpotent: bool,
    /// Number of steps to reach 𝔤 when nilpotent.
    pub steps: Option<usize>,
}

impl<S: Scalar> Series<S> {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.dim()).collect()
    }
}

impl<S: Scalar> LieAlgebra<S> {
    /// Build from the six real 2-forms de^1..de^6 (Jacobi is not checked here).
    pub fn new(de: Vec<Form<S>>) -> Result<Self> {
        if de.len() != DIM {
            return Err(Error::Input(format!("expected {DIM} differentials, got {}", de.len())));
        }
        for (k, f) in de.iter().enumerate() {
            if !f.is_zero() && f.degree() != 2 {
                return Err(Error::Input(format!("de{} is not a 2-form", k + 1)));
            }
            if !f.is_real() {
                return Err(Error::Input(format!("de{} is not real", k + 1)));
            }
        }
        let de = de.into_iter().map(|f| if f.is_zero() { Form::zero(2) } else { f }).collect();
        Ok(LieAlgebra { de })
    }

    /// Build and require d² = 0.
    pub fn checked(de: Vec<Form<S>>) -> Result<Self> {
        let g = LieAlgebra::new(de)?;
        match g.jacobi_check() {
            Jacobi::Pass => Ok(g),
            Jacobi::Fail { k, witness } => Err(Error::Jacobi { k, witness: witness.to_text() }),
        }
    }

    pub fn abelian() -> Self {
        LieAlgebra { de: vec![Form::zero(2); DIM] }
    }

    /// de^k for k = 1..6.
    pub fn de(&self, k: usize) -> &Form<S> {
        &self.de[k - 1]
    }

    pub fn differentials(&self) -> &[Form<S>] {
        &self.de
    }

    /// c^k_ij, antisymmetric in i, j (1-based).
    pub fn c(&self, k: usize, i: usize, j: usize) -> S {
        self.de[k - 1].coeff(&[i, j]).re
    }

    pub fn is_abelian(&self) -> bool {
        self.de.iter().all(|f| f.is_zero())
    }

    /// Chevalley–Eilenberg differential, extended by the graded Leibniz rule.
    pub fn d(&self, a: &Form<S>) -> Form<S> {
        let mut out = Form::zero(a.degree() + 1);
        for (b, c) in a.terms() {
            let idx = blade_indices(*b);
            for (pos, &i) in idx.iter().enumerate() {
                if self.de[i - 1].is_zero() {
                    continue;
                }
                let before = Form::<S>::e(&idx[..pos]);
                let after = Form::<S>::e(&idx[pos + 1..]);
                let mut t = before.wedge(&self.de[i - 1]).wedge(&after).scale(c);
                if pos % 2 == 1 {
                    t = -t;
                }
                out = out + t;
            }
        }
        out
    }

    /// [e_i, e_j] = −Σ_k c^k_ij e_k.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector<S> {
        std::array::from_fn(|k| -self.c(k + 1, i, j))
    }

    pub fn bracket(&self, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        let mut out = zero_vec::<S>();
        for i in 0..DIM {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..DIM {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let b = self.bracket_basis(i + 1, j + 1);
                let f = x[i].clone() * y[j].clone();
                for k in 0..DIM {
                    out[k] = out[k].clone() + f.clone() * b[k].clone();
                }
            }
        }
        out
    }

    pub fn jacobi_check(&self) -> Jacobi<S> {
        for k in 1..=DIM {
            let dd = self.d(&self.de[k - 1]);
            if !dd.is_zero() {
                return Jacobi::Fail { k, witness: dd };
            }
        }
        Jacobi::Pass
    }

    /// {X : [L X, e_j] ∈ W for all j and all L in `maps`}.
    pub(crate) fn bracket_preimage(&self, w: &Subspace<S>, maps: &[[[S; DIM]; DIM]]) -> Subspace<S> {
        // functionals vanishing on W
        let annihilator = nullspace(&w.basis().to_vec(), DIM);
        let mut rows = Vec::new();
        for l in maps {
            for j in 1..=DIM {
                for f in &annihilator {
                    // f([L x, e_j]) as a linear functional in x
                    let row: Vec<S> = (0..DIM)
                        .map(|i| {
                            let lx: Vector<S> = std::array::from_fn(|r| l[r][i].clone());
                            let b = self.bracket(&lx, &unit_vec(j));
                            b.iter().zip(f).fold(S::zero(), |a, (x, y)| a + x.clone() * y.clone())
                        })
                        .collect();
                    rows.push(row);
                }
            }
        }
        Subspace::span(DIM, nullspace(&rows, DIM))
    }

    /// Ascending central series 𝔤_l = {X : [X,𝔤] ⊆ 𝔤_{l−1}}.
    pub fn ascending_series(&self) -> Series<S> {
        let id: [[S; DIM]; DIM] = std::array::from_fn(|r| std::array::from_fn(|c| if r == c { S::one() } else { S::zero() }));
        series_from(|w| self.bracket_preimage(w, std::slice::from_ref(&id)))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.ascending_series().nilpotent
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> LieAlgebra<T> {
        LieAlgebra { de: self.de.iter().map(|x| x.map(f)).collect() }
    }

    /// Real algebra with de^{2j−1} = Re dω^j, de^{2j} = Im dω^j for ω^j = e^{2j−1} + i e^{2j}.
    pub fn from_complex_equations(domega: &[Form<S>; 3]) -> Result<Self> {
        let mut de = Vec::with_capacity(DIM);
        for w in domega {
            de.push(w.re());
            de.push(w.im());
        }
        LieAlgebra::new(de)
    }

    /// Canonical Salamon tuple, e.g. "(0,0,0,0,12,3/2*34-56)".
    pub fn to_salamon(&self) -> String {
        let parts: Vec<String> = self
            .de
            .iter()
            .map(|f| {
                if f.is_zero() {
                    return "0".to_string();
                }
                let mut s = String::new();
                for (n, (b, c)) in f.sorted_terms().iter().enumerate() {
                    let idx: String = blade_indices(*b).iter().map(|i| i.to_string()).collect();
                    let neg = c.re.is_negative();
                    let mag = if neg { -c.re.clone() } else { c.re.clone() };
                    if neg {
                        s.push('-');
                    } else if n > 0 {
                        s.push('+');
                    }
                    if !mag.is_one() {
                        s.push_str(&format!("{}*", mag.to_plain_string()));
                    }
                    s.push_str(&idx);
                }
                s
            })
            .collect();
        format!("({})", parts.join(","))
    }

    /// Equation-list text: one "deK = …" line per generator.
    pub fn to_equations(&self) -> String {
        (1..=DIM).map(|k| format!("de{k} = {}", self.de[k - 1].to_text())).collect::<Vec<_>>().join("\n")
    }

    /// JSON mirror {"de":[[[i,j,"p/q"],…],…]}.
    pub fn to_json(&self) -> serde_json::Value {
        let de: Vec<serde_json::Value> = self
            .de
            .iter()
            .map(|f| {
                serde_json::Value::Array(
                    f.sorted_terms()
                        .iter()
                        .map(|(b, c)| {
                            let idx = blade_indices(*b);
                            serde_json::json!([idx[0], idx[1], c.re.to_plain_string()])
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "de": de })
    }
}

impl<S: Scalar> LieAlgebra<S> {
    /// Name of a nilpotent algebra with b₁ ≥ 4 and at most two-step (h2, h3, h4, h5, h6, h8 or
    /// "abelian"), read off from invariants of the differentials; `None` otherwise.
    pub fn identify(&self) -> Option<&'static str> {
        let basis = two_form_basis();
        let image = Subspace::span(DIM * (DIM - 1) / 2, self.de.iter().map(|f| f.to_re_vec(&basis)).collect());
        let series = self.ascending_series();
        match (image.dim(), series.steps) {
            (0, _) => Some("abelian"),
            (1, Some(2)) => {
                let a = Form::from_re_vec(2, &basis, &image.basis()[0]);
                Some(if a.wedge(&a).is_zero() { "h8" } else { "h3" })
            }
            (2, Some(2)) => {
                // the Pfaffian pencil x²·α∧α + 2xy·α∧β + y²·β∧β of the two generating 2-forms
                let a = Form::from_re_vec(2, &basis, &image.basis()[0]);
                let b = Form::from_re_vec(2, &basis, &image.basis()[1]);
                let (aa, ab, bb) = (a.wedge(&a), a.wedge(&b), b.wedge(&b));
                let Some(blade) = [&aa, &ab, &bb].iter().flat_map(|f| f.terms().map(|(k, _)| *k)).next() else {
                    return Some("h6");
                };
                let c = |f: &Form<S>| f.coeff_blade(blade).re;
                // all three 4-forms live on the same 4-dimensional space, so one component decides
                let disc = c(&ab) * c(&ab) - c(&aa) * c(&bb);
                Some(if disc.is_zero() {
                    "h4"
                } else if disc.is_positive() {
                    "h2"
                } else {
                    "h5"
                })
            }
            _ => None,
        }
    }
}

/// Iterate W ↦ step(W) from W = 0 until stable or the whole space.
pub(crate) fn series_from<S: Scalar>(step: impl Fn(&Subspace<S>) -> Subspace<S>) -> Series<S> {
    let mut terms = Vec::new();
    let mut cur = Subspace::zero(DIM);
    loop {
        let next = step(&cur);
        let stalled = next.dim() == cur.dim();
        let full = next.dim() == DIM;
        if !stalled {
            terms.push(next.clone());
        }
        if full {
            let steps = terms.len();
            return Series { terms, nilpotent: true, steps: Some(steps) };
        }
        if stalled {
            return Series { terms, nilpotent: false, steps: None };
        }
        cur = next;
    }
}

/// ω^j = e^{2j−1} + i e^{2j} (j = 1..3).
pub fn omega<S: Scalar>(j: usize) -> Form<S> {
    Form::e(&[2 * j - 1]) + Form::e(&[2 * j]).scale(&imag_unit())
}

/// ω̄^j = e^{2j−1} − i e^{2j}.
pub fn omega_bar<S: Scalar>(j: usize) -> Form<S> {
    omega::<S>(j).conj()
}

/// Named algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    H2,
    H3,
    H4,
    H5,
    H6,
    H8,
    H19Minus,
    /// Solvable non-nilpotent algebra with de³ = −e13 − e24.
    Solvable,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::H2,
        Preset::H3,
        Preset::H4,
        Preset::H5,
        Preset::H6,
        Preset::H8,
        Preset::H19Minus,
        Preset::Solvable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::H2 => "h2",
            Preset::H3 => "h3",
            Preset::H4 => "h4",
            Preset::H5 => "h5",
            Preset::H6 => "h6",
            Preset::H8 => "h8",
            Preset::H19Minus => "h19-",
            Preset::Solvable => "solvable",
        }
    }

    pub fn salamon(self) -> &'static str {
        match self {
            Preset::H2 => "(0,0,0,0,12,34)",
            Preset::H3 => "(0,0,0,0,0,12+34)",
            Preset::H4 => "(0,0,0,0,12,14+23)",
            Preset::H5 => "(0,0,0,0,13+42,14+23)",
            Preset::H6 => "(0,0,0,0,12,13)",
            Preset::H8 => "(0,0,0,0,0,12)",
            Preset::H19Minus => "(0,0,0,12,23,14-35)",
            Preset::Solvable => "(0,0,-13-24,-14+23,15+26,16-25)",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.iter().copied().find(|p| p.name().eq_ignore_ascii_case(name))
    }

    pub fn algebra<S: Scalar>(self) -> LieAlgebra<S> {
        crate::parse::parse_structure_equations(self.salamon())
            .expect("preset tuples are well formed")
            .map(S::from_rational)
    }
}

/// Convenience: exact algebra from a Salamon tuple or equation list.
pub fn algebra_q(text: &str) -> Result<LieAlgebra<Q>> {
    crate::parse::parse_structure_equations(text)
}

/// The 2-forms e^{ij} (i<j) in lexicographic order.
pub fn two_form_basis() -> Vec<u8> {
    blades(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn presets_satisfy_jacobi() {
        for p in Preset::ALL {
            assert!(p.algebra::<Q>().jacobi_check().passed(), "{}", p.name());
        }
    }

    #[test]
    fn jacobi_witness() {
        // de6 = e15 is still closed under d when de5 = e12
        assert!(algebra_q("(0,0,0,0,12,15)").unwrap().jacobi_check().passed());
        let g = algebra_q("(0,0,0,0,12,35)").unwrap();
        let Jacobi::Fail { k, witness } = g.jacobi_check() else { panic!("expected failure") };
        assert_eq!(k, 6);
        // Leibniz by hand: d(e35) = de3∧e5 − e3∧de5 = −e3∧e12
        assert_eq!(witness, -Form::<Q>::e(&[3]).wedge(&Form::e(&[1, 2])));
        // bracket oracle: the Jacobiator of (e1,e2,e3) is nonzero
        let x = |i| unit_vec::<Q>(i);
        let jac: Vec<Q> = (0..DIM)
            .map(|r| {
                g.bracket(&g.bracket(&x(1), &x(2)), &x(3))[r].clone()
                    + g.bracket(&g.bracket(&x(2), &x(3)), &x(1))[r].clone()
                    + g.bracket(&g.bracket(&x(3), &x(1)), &x(2))[r].clone()
            })
            .collect();
        assert!(jac.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn dual_bracket_formula() {
        let g = Preset::H5.algebra::<Q>();
        for i in 1..=DIM {
            for j in 1..=DIM {
                let b = g.bracket_basis(i, j);
                for k in 1..=DIM {
                    let lhs = g.de(k).evaluate(&[i, j]).unwrap_or_else(|_| unreachable!()).re;
                    if i == j {
                        continue;
                    }
                    assert_eq!(lhs, -b[k - 1].clone());
                }
            }
        }
    }

    #[test]
    fn h5_series() {
        let s = Preset::H5.algebra::<Q>().ascending_series();
        assert_eq!(s.dims(), vec![2, 6]);
        assert!(s.nilpotent);
        assert_eq!(s.steps, Some(2));
        let center = &s.terms[0];
        assert!(center.contains(&unit_vec::<Q>(5)) && center.contains(&unit_vec::<Q>(6)));
    }

    #[test]
    fn abelian_and_solvable_series() {
        let s = LieAlgebra::<Q>::abelian().ascending_series();
        assert_eq!(s.steps, Some(1));
        let s = Preset::Solvable.algebra::<Q>().ascending_series();
        assert!(!s.nilpotent);
        assert!(s.terms.last().map_or(0, |t| t.dim()) < DIM);
    }

    #[test]
    fn h5_d_e5() {
        let g = Preset::H5.algebra::<Q>();
        assert_eq!(g.de(5).clone(), Form::e(&[1, 3]) - Form::e(&[2, 4]));
        assert_eq!(g.c(5, 1, 3), q(1));
        assert_eq!(g.c(5, 3, 1), q(-1));
    }
}
