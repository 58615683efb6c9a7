//! Almost complex structures on a six-dimensional Lie algebra.
//!
//! J acts on vectors by the matrix `jv` (J e_j = Σ_i jv[i][j] e_i) and on 1-forms by
//! (Jα)(X) = −α(JX), extended multiplicatively to k-forms, so that
//! (Ja)(X1..Xk) = (−1)^k a(JX1..JXk). For the adapted structure Je¹ = −e², Je³ = −e⁴, Je⁵ = −e⁶.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{Form, DIM};
use crate::lie::{series_from, unit_vec, LieAlgebra, Series, Vector};
use crate::linalg::{inverse, mat_mul, nullspace, rref, Matrix};
use crate::scalar::{imag_unit, re, Scalar, C};

pub type Mat6<S> = [[S; DIM]; DIM];

fn mat6_to_vec<S: Scalar>(m: &Mat6<S>) -> Matrix<S> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn vec_to_mat6<S: Scalar>(m: &Matrix<S>) -> Mat6<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].clone()))
}

#[derive(Clone, Debug)]
pub struct ComplexStructure<S> {
    jv: Mat6<S>,
    /// Je^k as 1-forms.
    jforms: Vec<Form<S>>,
    /// (1,0) and (0,1) projections of each e^k.
    p10: Vec<Form<S>>,
    p01: Vec<Form<S>>,
}

impl<S: Scalar> PartialEq for ComplexStructure<S> {
    fn eq(&self, other: &Self) -> bool {
        (0..DIM).all(|i| (0..DIM).all(|j| (self.jv[i][j].clone() - other.jv[i][j].clone()).is_zero()))
    }
}

/// Which step of the classification decides the type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComplexType {
    ComplexParallelizable,
    Abelian,
    NilpotentNonAbelian,
    NonNilpotent,
    NonIntegrable,
}

impl ComplexType {
    pub fn label(self) -> &'static str {
        match self {
            ComplexType::ComplexParallelizable => "complex-parallelizable",
            ComplexType::Abelian => "abelian",
            ComplexType::NilpotentNonAbelian => "nilpotent-non-abelian",
            ComplexType::NonNilpotent => "non-nilpotent",
            ComplexType::NonIntegrable => "non-integrable",
        }
    }
}

impl fmt::Display for ComplexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Full classification record.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub kind: ComplexType,
    pub integrable: bool,
    pub parallelizable: bool,
    pub abelian: bool,
    /// J-ascending series reaches 𝔤.
    pub nilpotent: bool,
}

/// Result of the integrability test.
#[derive(Clone, Debug)]
pub struct Integrability<S> {
    pub integrable: bool,
    /// First frame pair (i, j) with N(e_i, e_j) ≠ 0, and the value.
    pub nijenhuis_witness: Option<(usize, usize, Vector<S>)>,
    /// Verdict of the "d(Λ^{1,0}) has no (0,2) part" criterion.
    pub forms_criterion: bool,
}

impl<S: Scalar> ComplexStructure<S> {
    /// From the matrix on vectors (column j is J e_j).
    pub fn from_vector_matrix(jv: Mat6<S>) -> Result<Self> {
        let sq = mat_mul(&mat6_to_vec(&jv), &mat6_to_vec(&jv));
        for (i, row) in sq.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let target = if i == j { -S::one() } else { S::zero() };
                if !(x.clone() - target).is_zero() {
                    return Err(Error::NotAlmostComplex);
                }
            }
        }
        let jforms: Vec<Form<S>> = (0..DIM)
            .map(|k| {
                let mut f = Form::zero(1);
                for j in 0..DIM {
                    if !jv[k][j].is_zero() {
                        f = f + Form::term(&[j + 1], re(-jv[k][j].clone()));
                    }
                }
                f
            })
            .collect();
        let half = re(S::half());
        let ihalf = imag_unit::<S>() * half.clone();
        let p10 = (0..DIM)
            .map(|k| Form::e(&[k + 1]).scale(&half) - jforms[k].scale(&ihalf))
            .collect();
        let p01 = (0..DIM)
            .map(|k| Form::e(&[k + 1]).scale(&half) + jforms[k].scale(&ihalf))
            .collect();
        Ok(ComplexStructure { jv, jforms, p10, p01 })
    }

    /// From the action on 1-forms: J e^k = Σ_i a[k][i] e^i.
    pub fn from_form_matrix(a: Mat6<S>) -> Result<Self> {
        ComplexStructure::from_vector_matrix(std::array::from_fn(|k| std::array::from_fn(|i| -a[k][i].clone())))
    }

    /// Je¹ = −e², Je³ = −e⁴, Je⁵ = −e⁶.
    pub fn adapted() -> Self {
        let mut jv: Mat6<S> = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
        for p in 0..3 {
            jv[2 * p][2 * p + 1] = S::one();
            jv[2 * p + 1][2 * p] = -S::one();
        }
        ComplexStructure::from_vector_matrix(jv).expect("adapted J squares to -1")
    }

    /// The structure whose (1,0)-forms are spanned by the given complex 1-forms.
    pub fn from_holomorphic_coframe(omega: &[Form<S>; 3]) -> Result<Self> {
        let rows: Matrix<C<S>> = omega
            .iter()
            .map(|w| w.clone())
            .chain(omega.iter().map(|w| w.conj()))
            .map(|w| (0..DIM).map(|i| w.coeff(&[i + 1])).collect())
            .collect();
        let inv = inverse(&rows).ok_or_else(|| Error::Singular("coframe is not a basis".into()))?;
        let mut a: Mat6<S> = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
        for k in 0..DIM {
            for i in 0..DIM {
                let mut acc = C::<S>::zero();
                for r in 0..DIM {
                    let lam = if r < 3 { imag_unit::<S>() } else { -imag_unit::<S>() };
                    acc = acc + inv[k][r].clone() * lam * rows[r][i].clone();
                }
                if !acc.im.is_zero() {
                    return Err(Error::Input("coframe does not define a real J".into()));
                }
                a[k][i] = acc.re;
            }
        }
        ComplexStructure::from_form_matrix(a)
    }

    pub fn vector_matrix(&self) -> &Mat6<S> {
        &self.jv
    }

    pub fn apply(&self, v: &Vector<S>) -> Vector<S> {
        std::array::from_fn(|i| {
            (0..DIM).fold(S::zero(), |acc, j| {
                if v[j].is_zero() {
                    acc
                } else {
                    acc + self.jv[i][j].clone() * v[j].clone()
                }
            })
        })
    }

    pub fn is_adapted(&self) -> bool {
        *self == ComplexStructure::adapted()
    }

    /// J e^k (1-based).
    pub fn j_form(&self, k: usize) -> &Form<S> {
        &self.jforms[k - 1]
    }

    /// The action of J on forms, extended multiplicatively.
    pub fn pullback(&self, a: &Form<S>) -> Form<S> {
        a.substitute(&self.jforms)
    }

    pub fn projections(&self) -> (&[Form<S>], &[Form<S>]) {
        (&self.p10, &self.p01)
    }

    /// Components by bidegree; they sum to `a`.
    pub fn split(&self, a: &Form<S>) -> BTreeMap<(usize, usize), Form<S>> {
        a.split_bidegree(&self.p10, &self.p01)
    }

    /// The (p,q) component of `a`.
    pub fn component(&self, a: &Form<S>, p: usize, q: usize) -> Form<S> {
        self.split(a).remove(&(p, q)).unwrap_or_else(|| Form::zero(p + q))
    }

    /// Bidegree of a nonzero pure form.
    pub fn bidegree(&self, a: &Form<S>) -> Result<Option<(usize, usize)>> {
        let parts = self.split(a);
        match parts.len() {
            0 => Ok(None),
            1 => Ok(parts.keys().next().copied()),
            _ => Err(Error::MixedBidegree),
        }
    }

    /// Basis of (1,0)-forms: the kernel of J − i on complex 1-forms, in reduced form.
    pub fn holomorphic_coframe(&self) -> [Form<S>; 3] {
        // J(Σ a_k e^k) = Σ_i (Σ_k a_k A[k][i]) e^i with A[k][i] = −jv[k][i]
        let m: Matrix<C<S>> = (0..DIM)
            .map(|i| {
                (0..DIM)
                    .map(|k| {
                        let a = re(-self.jv[k][i].clone());
                        if i == k {
                            a - imag_unit()
                        } else {
                            a
                        }
                    })
                    .collect()
            })
            .collect();
        // reduced row form, so the adapted case gives e^{2j-1} + i e^{2j}
        let red = rref(nullspace(&m, DIM), DIM);
        let forms: Vec<Form<S>> = red
            .rows
            .iter()
            .map(|v| (0..DIM).fold(Form::zero(1), |f, k| f + Form::term(&[k + 1], v[k].clone())))
            .collect();
        assert_eq!(forms.len(), 3, "J has a three-dimensional (1,0) eigenspace");
        [forms[0].clone(), forms[1].clone(), forms[2].clone()]
    }

    /// N(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] − [X,Y].
    pub fn nijenhuis(&self, g: &LieAlgebra<S>, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        let (jx, jy) = (self.apply(x), self.apply(y));
        let a = g.bracket(&jx, &jy);
        let b = self.apply(&g.bracket(&jx, y));
        let c = self.apply(&g.bracket(x, &jy));
        let d = g.bracket(x, y);
        std::array::from_fn(|i| a[i].clone() - b[i].clone() - c[i].clone() - d[i].clone())
    }

    pub fn integrability(&self, g: &LieAlgebra<S>) -> Integrability<S> {
        let mut witness = None;
        'outer: for i in 1..=DIM {
            for j in i + 1..=DIM {
                let n = self.nijenhuis(g, &unit_vec(i), &unit_vec(j));
                if n.iter().any(|x| !x.is_zero()) {
                    witness = Some((i, j, n));
                    break 'outer;
                }
            }
        }
        let forms_criterion =
            self.p10.iter().all(|w| self.component(&g.d(w), 0, 2).is_zero());
        Integrability { integrable: witness.is_none(), nijenhuis_witness: witness, forms_criterion }
    }

    pub fn is_integrable(&self, g: &LieAlgebra<S>) -> bool {
        self.integrability(g).integrable
    }

    /// (∂a, ∂̄a) for a form of pure bidegree.
    pub fn dolbeault_split(&self, g: &LieAlgebra<S>, a: &Form<S>) -> Result<(Form<S>, Form<S>)> {
        if !self.is_integrable(g) {
            return Err(Error::NotIntegrable);
        }
        let Some((p, q)) = self.bidegree(a)? else {
            return Ok((Form::zero(a.degree() + 1), Form::zero(a.degree() + 1)));
        };
        let mut parts = self.split(&g.d(a));
        let del = parts.remove(&(p + 1, q)).unwrap_or_else(|| Form::zero(a.degree() + 1));
        let delbar = parts.remove(&(p, q + 1)).unwrap_or_else(|| Form::zero(a.degree() + 1));
        debug_assert!(parts.is_empty(), "integrable J leaves no other components");
        Ok((del, delbar))
    }

    /// ∂ on any form (componentwise), assuming integrability.
    pub fn del(&self, g: &LieAlgebra<S>, a: &Form<S>) -> Form<S> {
        self.dolbeault_components(g, a).0
    }

    /// ∂̄ on any form (componentwise), assuming integrability.
    pub fn delbar(&self, g: &LieAlgebra<S>, a: &Form<S>) -> Form<S> {
        self.dolbeault_components(g, a).1
    }

    fn dolbeault_components(&self, g: &LieAlgebra<S>, a: &Form<S>) -> (Form<S>, Form<S>) {
        let mut del = Form::zero(a.degree() + 1);
        let mut delbar = Form::zero(a.degree() + 1);
        for ((p, q), part) in self.split(a) {
            let mut d = self.split(&g.d(&part));
            if let Some(x) = d.remove(&(p + 1, q)) {
                del = del + x;
            }
            if let Some(x) = d.remove(&(p, q + 1)) {
                delbar = delbar + x;
            }
        }
        (del, delbar)
    }

    /// 𝔤_l^J = {X : [X,𝔤] ⊆ 𝔤_{l−1}^J and [JX,𝔤] ⊆ 𝔤_{l−1}^J}.
    pub fn j_series(&self, g: &LieAlgebra<S>) -> Series<S> {
        let id: Mat6<S> = std::array::from_fn(|r| std::array::from_fn(|c| if r == c { S::one() } else { S::zero() }));
        let maps = [id, self.jv.clone()];
        series_from(|w| g.bracket_preimage(w, &maps))
    }

    pub fn is_parallelizable(&self, g: &LieAlgebra<S>) -> bool {
        pairs_all(|x, y| {
            let lhs = g.bracket(&self.apply(x), y);
            let rhs = self.apply(&g.bracket(x, y));
            eq_vec(&lhs, &rhs)
        })
    }

    pub fn is_abelian(&self, g: &LieAlgebra<S>) -> bool {
        pairs_all(|x, y| eq_vec(&g.bracket(&self.apply(x), &self.apply(y)), &g.bracket(x, y)))
    }

    /// Integrability, then parallelizable, then abelian, then nilpotency.
    pub fn classify(&self, g: &LieAlgebra<S>) -> Classification {
        let integrable = self.is_integrable(g);
        let parallelizable = integrable && self.is_parallelizable(g);
        let abelian = integrable && self.is_abelian(g);
        let nilpotent = integrable && self.j_series(g).nilpotent;
        let kind = if !integrable {
            ComplexType::NonIntegrable
        } else if parallelizable {
            ComplexType::ComplexParallelizable
        } else if abelian {
            ComplexType::Abelian
        } else if nilpotent {
            ComplexType::NilpotentNonAbelian
        } else {
            ComplexType::NonNilpotent
        };
        Classification { kind, integrable, parallelizable, abelian, nilpotent }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ComplexStructure<T> {
        ComplexStructure::from_vector_matrix(std::array::from_fn(|i| std::array::from_fn(|j| f(&self.jv[i][j]))))
            .expect("J² = −1 is preserved by a change of backend")
    }

    /// JSON matrix of rational strings (rows of the vector matrix).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.jv
                .iter()
                .map(|r| serde_json::Value::Array(r.iter().map(|x| x.to_plain_string().into()).collect()))
                .collect(),
        )
    }
}

fn eq_vec<S: Scalar>(a: &Vector<S>, b: &Vector<S>) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_zero())
}

fn pairs_all<S: Scalar>(f: impl Fn(&Vector<S>, &Vector<S>) -> bool) -> bool {
    (1..=DIM).all(|i| (1..=DIM).all(|j| f(&unit_vec(i), &unit_vec(j))))
}

/// Matrix of a linear map on vectors as a `Mat6` (for callers holding a `Matrix`).
pub fn to_mat6<S: Scalar>(m: &Matrix<S>) -> Mat6<S> {
    vec_to_mat6(m)
}

pub fn from_mat6<S: Scalar>(m: &Mat6<S>) -> Matrix<S> {
    mat6_to_vec(m)
}

/// Ψ = ω¹∧ω²∧ω³ for a (1,0)-coframe.
pub fn wedge3<S: Scalar>(w: &[Form<S>; 3]) -> Form<S> {
    w[0].wedge(&w[1]).wedge(&w[2])
}
