//! Invariant linear connections in an orthonormal frame: connection 1-forms, torsion,
//! curvature, covariant derivatives of forms and the first Pontrjagin trace.

use serde_json::{json, Value};

use crate::complex::ComplexStructure;
use crate::error::{Error, Result};
use crate::exterior::{blade_indices, Form, DIM};
use crate::hermitian::HermitianStructure;
use crate::lie::LieAlgebra;
use crate::scalar::{re, Scalar};

/// σ^i_j(e_k), indexed [i][j][k] (0-based).
pub type Coefficients<S> = [[[S; DIM]; DIM]; DIM];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectionKind {
    LeviCivita,
    Bismut,
    Chern,
    Custom(String),
}

impl ConnectionKind {
    pub fn label(&self) -> String {
        match self {
            ConnectionKind::LeviCivita => "levi-civita".into(),
            ConnectionKind::Bismut => "bismut".into(),
            ConnectionKind::Chern => "chern".into(),
            ConnectionKind::Custom(name) => name.clone(),
        }
    }
}

/// Connection 1-forms σ^i_j with σ^i_j(e_k) = g(∇_{e_k} e_j, e_i).
#[derive(Clone, Debug)]
pub struct Connection<S> {
    kind: ConnectionKind,
    coeffs: Coefficients<S>,
    forms: Vec<Vec<Form<S>>>,
}

fn zero_coeffs<S: Scalar>() -> Coefficients<S> {
    std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| S::zero())))
}

fn require_adapted<S: Scalar>(h: &HermitianStructure<S>) -> Result<()> {
    if h.is_adapted_frame() {
        Ok(())
    } else {
        Err(Error::NotAdapted)
    }
}

impl<S: Scalar> Connection<S> {
    pub fn from_coefficients(kind: ConnectionKind, coeffs: Coefficients<S>) -> Self {
        let forms = (0..DIM)
            .map(|i| {
                (0..DIM)
                    .map(|j| {
                        (0..DIM).fold(Form::zero(1), |f, k| {
                            if coeffs[i][j][k].is_zero() {
                                f
                            } else {
                                f + Form::term(&[k + 1], re(coeffs[i][j][k].clone()))
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Connection { kind, coeffs, forms }
    }

    /// From real 1-forms σ^i_j (1-based pairs); unspecified entries are zero and the
    /// skew partner σ^j_i = −σ^i_j is filled in.
    pub fn from_skew_forms(kind: ConnectionKind, entries: &[((usize, usize), Form<S>)]) -> Result<Self> {
        let mut c = zero_coeffs::<S>();
        for ((i, j), f) in entries {
            if f.degree() != 1 || !f.is_real() || *i == *j || !(1..=DIM).contains(i) || !(1..=DIM).contains(j) {
                return Err(Error::Input(format!("connection entry ({i},{j}) must be a real 1-form off the diagonal")));
            }
            for k in 0..DIM {
                let v = f.coeff(&[k + 1]).re;
                c[i - 1][j - 1][k] = v.clone();
                c[j - 1][i - 1][k] = -v;
            }
        }
        Ok(Connection::from_coefficients(kind, c))
    }

    /// ½(c^i_jk − c^k_ij + c^j_ki) for the metric making the frame orthonormal.
    pub fn levi_civita(g: &LieAlgebra<S>) -> Self {
        let mut c = zero_coeffs::<S>();
        for i in 1..=DIM {
            for j in 1..=DIM {
                for k in 1..=DIM {
                    let v = g.c(i, j, k) - g.c(k, i, j) + g.c(j, k, i);
                    c[i - 1][j - 1][k - 1] = v * S::half();
                }
            }
        }
        Connection::from_coefficients(ConnectionKind::LeviCivita, c)
    }

    /// Levi-Civita minus ½T(e_i, e_j, e_k), with T = J dF. Also returns T.
    pub fn bismut(h: &HermitianStructure<S>) -> Result<(Self, Form<S>)> {
        require_adapted(h)?;
        let lc = Connection::levi_civita(h.algebra());
        let t = h.torsion();
        let mut c = lc.coeffs;
        for i in 1..=DIM {
            for j in 1..=DIM {
                for k in 1..=DIM {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let v = t.evaluate(&[i, j, k])?.re;
                    if !v.is_zero() {
                        c[i - 1][j - 1][k - 1] = c[i - 1][j - 1][k - 1].clone() - v * S::half();
                    }
                }
            }
        }
        Ok((Connection::from_coefficients(ConnectionKind::Bismut, c), t))
    }

    /// Levi-Civita plus ½ dF(Je_k, e_j, e_i).
    pub fn chern(h: &HermitianStructure<S>) -> Result<Self> {
        require_adapted(h)?;
        let lc = Connection::levi_civita(h.algebra());
        let df = h.algebra().d(h.fundamental());
        let j = h.complex_structure();
        let mut c = lc.coeffs;
        for k in 1..=DIM {
            let jek = j.apply(&crate::lie::unit_vec(k));
            for jj in 1..=DIM {
                for i in 1..=DIM {
                    let vs = [jek.clone(), crate::lie::unit_vec(jj), crate::lie::unit_vec(i)];
                    let v = df.evaluate_on(&vs)?.re;
                    if !v.is_zero() {
                        c[i - 1][jj - 1][k - 1] = c[i - 1][jj - 1][k - 1].clone() + v * S::half();
                    }
                }
            }
        }
        Ok(Connection::from_coefficients(ConnectionKind::Chern, c))
    }

    pub fn kind(&self) -> &ConnectionKind {
        &self.kind
    }

    pub fn coefficients(&self) -> &Coefficients<S> {
        &self.coeffs
    }

    /// σ^i_j (1-based).
    pub fn form(&self, i: usize, j: usize) -> &Form<S> {
        &self.forms[i - 1][j - 1]
    }

    /// σ^i_j(e_k) (1-based).
    pub fn value(&self, i: usize, j: usize, k: usize) -> &S {
        &self.coeffs[i - 1][j - 1][k - 1]
    }

    pub fn is_flat_forms(&self) -> bool {
        self.forms.iter().flatten().all(|f| f.is_zero())
    }

    /// σ^i_j = −σ^j_i (∇g = 0 for the orthonormal frame).
    pub fn is_metric(&self) -> bool {
        (0..DIM).all(|i| (0..DIM).all(|j| (0..DIM).all(|k| (self.coeffs[i][j][k].clone() + self.coeffs[j][i][k].clone()).is_zero())))
    }

    /// ∇J = 0: each matrix (σ^i_j(e_k))_{ij} commutes with J.
    pub fn preserves(&self, j: &ComplexStructure<S>) -> bool {
        let jv = j.vector_matrix();
        (0..DIM).all(|k| {
            (0..DIM).all(|a| {
                (0..DIM).all(|b| {
                    let mut lhs = S::zero();
                    let mut rhs = S::zero();
                    for m in 0..DIM {
                        lhs = lhs + self.coeffs[a][m][k].clone() * jv[m][b].clone();
                        rhs = rhs + jv[a][m].clone() * self.coeffs[m][b][k].clone();
                    }
                    (lhs - rhs).is_zero()
                })
            })
        })
    }

    /// Torsion T(e_j, e_k) = ∇_{e_j}e_k − ∇_{e_k}e_j − [e_j, e_k] as vector-valued 2-forms:
    /// component i is the 2-form de^i + Σ_m σ^i_m ∧ e^m.
    pub fn torsion_forms(&self, g: &LieAlgebra<S>) -> Vec<Form<S>> {
        (1..=DIM)
            .map(|i| {
                (1..=DIM).fold(g.de(i).clone(), |acc, m| acc + self.form(i, m).wedge(&Form::e(&[m])))
            })
            .collect()
    }

    pub fn is_torsion_free(&self, g: &LieAlgebra<S>) -> bool {
        self.torsion_forms(g).iter().all(|f| f.is_zero())
    }

    /// ∇_{e_j} of a form, extending ∇_{e_j} e^i = −Σ_p σ^i_p(e_j) e^p as a derivation.
    pub fn covariant_derivative(&self, a: &Form<S>, j: usize) -> Form<S> {
        let mut out = Form::zero(a.degree());
        for (b, c) in a.terms() {
            let idx = blade_indices(*b);
            for pos in 0..idx.len() {
                let i = idx[pos];
                for p in 1..=DIM {
                    let s = &self.coeffs[i - 1][p - 1][j - 1];
                    if s.is_zero() {
                        continue;
                    }
                    let mut list = idx.clone();
                    list[pos] = p;
                    let t = Form::term(&list, c.clone() * re(-s.clone()));
                    if !t.is_zero() {
                        out = out + t;
                    }
                }
            }
        }
        out
    }

    pub fn is_parallel(&self, a: &Form<S>) -> bool {
        (1..=DIM).all(|j| self.covariant_derivative(a, j).is_zero())
    }

    pub fn curvature(&self, g: &LieAlgebra<S>) -> Curvature<S> {
        let omega = (1..=DIM)
            .map(|i| {
                (1..=DIM)
                    .map(|j| {
                        (1..=DIM).fold(g.d(self.form(i, j)), |acc, k| acc + self.form(i, k).wedge(self.form(k, j)))
                    })
                    .collect()
            })
            .collect();
        Curvature { omega }
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Vec::new();
        for i in 0..DIM {
            for j in 0..DIM {
                if self.forms[i][j].is_zero() {
                    continue;
                }
                let terms: Vec<Value> = (0..DIM)
                    .filter(|k| !self.coeffs[i][j][*k].is_zero())
                    .map(|k| json!([k + 1, self.coeffs[i][j][k].to_plain_string()]))
                    .collect();
                entries.push(json!([i + 1, j + 1, terms]));
            }
        }
        json!({ "kind": self.kind.label(), "sigma": entries })
    }

    /// Inverse of `to_json`: {"kind": .., "sigma": [[i, j, [[k, "c"], ..]], ..]}.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Input(format!("connection JSON: {m}"));
        let kind = match v.get("kind").and_then(|k| k.as_str()).unwrap_or("custom") {
            "levi-civita" => ConnectionKind::LeviCivita,
            "bismut" => ConnectionKind::Bismut,
            "chern" => ConnectionKind::Chern,
            other => ConnectionKind::Custom(other.to_string()),
        };
        let sigma = v.get("sigma").and_then(|s| s.as_array()).ok_or_else(|| bad("missing \"sigma\""))?;
        let mut c = zero_coeffs::<S>();
        let index = |x: &Value| x.as_u64().map(|n| n as usize).filter(|n| (1..=DIM).contains(n)).ok_or_else(|| bad("index out of range"));
        for e in sigma {
            let e = e.as_array().filter(|e| e.len() == 3).ok_or_else(|| bad("entries are [i, j, terms]"))?;
            let (i, j) = (index(&e[0])?, index(&e[1])?);
            for t in e[2].as_array().ok_or_else(|| bad("terms must be an array"))? {
                let t = t.as_array().filter(|t| t.len() == 2).ok_or_else(|| bad("terms are [k, coefficient]"))?;
                let k = index(&t[0])?;
                let val = match &t[1] {
                    Value::String(s) => S::parse(s).map_err(|m| bad(&m))?,
                    Value::Number(n) if n.is_i64() => S::from_int(n.as_i64().unwrap()),
                    _ => return Err(bad("coefficients must be rational strings")),
                };
                c[i - 1][j - 1][k - 1] = val;
            }
        }
        Ok(Connection::from_coefficients(kind, c))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Connection<T> {
        let c: Coefficients<T> =
            std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| f(&self.coeffs[i][j][k]))));
        Connection::from_coefficients(self.kind.clone(), c)
    }
}

/// Curvature 2-forms Ω^i_j = dσ^i_j + Σ_k σ^i_k ∧ σ^k_j.
#[derive(Clone, Debug)]
pub struct Curvature<S> {
    omega: Vec<Vec<Form<S>>>,
}

impl<S: Scalar> Curvature<S> {
    /// Ω^i_j (1-based).
    pub fn form(&self, i: usize, j: usize) -> &Form<S> {
        &self.omega[i - 1][j - 1]
    }

    pub fn is_flat(&self) -> bool {
        self.omega.iter().flatten().all(|f| f.is_zero())
    }

    pub fn is_skew(&self) -> bool {
        (1..=DIM).all(|i| (1..=DIM).all(|j| (self.form(i, j) + self.form(j, i)).is_zero()))
    }

    /// The 2-form Σ_{i<j} Ω^i_j(e_p, e_q) e^{ij}, identified with the endomorphism R(e_p, e_q).
    pub fn endomorphism(&self, p: usize, q: usize) -> Form<S> {
        let mut out = Form::zero(2);
        for i in 1..=DIM {
            for j in i + 1..=DIM {
                let c = self.form(i, j).coeff(&[p, q]);
                if !c.re.is_zero() || !c.im.is_zero() {
                    out = out + Form::term(&[i, j], c);
                }
            }
        }
        out
    }

    /// All R(e_p, e_q), p < q, in lexicographic order.
    pub fn endomorphisms(&self) -> Vec<((usize, usize), Form<S>)> {
        let mut v = Vec::new();
        for p in 1..=DIM {
            for q in p + 1..=DIM {
                v.push(((p, q), self.endomorphism(p, q)));
            }
        }
        v
    }

    /// tr Ω∧Ω = Σ_{i<j} Ω^i_j ∧ Ω^i_j.
    pub fn trace(&self) -> Form<S> {
        let mut out = Form::zero(4);
        for i in 1..=DIM {
            for j in i + 1..=DIM {
                let w = self.form(i, j).wedge(self.form(i, j));
                if !w.is_zero() {
                    out = out + w;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{build_family, Family, FamilyDescriptor};
    use crate::lie::Preset;
    use crate::scalar::Q;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn levi_civita_is_torsion_free_and_metric() {
        for p in Preset::ALL {
            let g = p.algebra::<Q>();
            let lc = Connection::levi_civita(&g);
            assert!(lc.is_metric(), "{}", p.name());
            assert!(lc.is_torsion_free(&g), "{}", p.name());
        }
        assert!(Connection::levi_civita(&LieAlgebra::<Q>::abelian()).is_flat_forms());
    }

    #[test]
    fn half_sum_value() {
        let h = build_family(&FamilyDescriptor::<Q>::new(Family::F214)).unwrap();
        let lc = Connection::levi_civita(h.algebra());
        assert_eq!(*lc.value(1, 5, 3), Q::frac(-1, 2));
    }

    #[test]
    fn bismut_on_iwasawa() {
        let t = q(3);
        let h = build_family(&FamilyDescriptor::new(Family::F214).t(t.clone())).unwrap();
        let (b, tor) = Connection::bismut(&h).unwrap();
        assert_eq!(*b.form(1, 5), Form::e(&[3]).scale_real(&-t.clone()));
        assert_eq!(*b.form(2, 6), Form::e(&[3]).scale_real(&-t.clone()));
        assert_eq!(*b.form(1, 6), Form::e(&[4]).scale_real(&-t.clone()));
        assert_eq!(*b.form(2, 5), Form::e(&[4]).scale_real(&t));
        assert!(b.is_metric() && b.preserves(h.complex_structure()));
        // ∇ − ∇ᵍ = ½T
        let lc = Connection::levi_civita(h.algebra());
        for i in 1..=DIM {
            for j in 1..=DIM {
                for k in 1..=DIM {
                    let diff = b.value(i, j, k).clone() - lc.value(i, j, k).clone();
                    let half_t = if i == j || j == k || i == k {
                        q(0)
                    } else {
                        tor.evaluate(&[i, j, k]).unwrap().re * Q::frac(-1, 2)
                    };
                    assert_eq!(diff, half_t);
                }
            }
        }
    }

    #[test]
    fn chern_is_hermitian() {
        for d in [
            FamilyDescriptor::new(Family::F214),
            FamilyDescriptor::new(Family::F215).rho(1).b2(q(1)),
            FamilyDescriptor::new(Family::F217).s(q(2)),
        ] {
            let h = build_family(&d).unwrap();
            let c = Connection::chern(&h).unwrap();
            assert!(c.is_metric());
            assert!(c.preserves(h.complex_structure()));
        }
    }

    #[test]
    fn kahler_degenerate_case() {
        let h = HermitianStructure::adapted(LieAlgebra::<Q>::abelian());
        let (b, t) = Connection::bismut(&h).unwrap();
        assert!(t.is_zero() && b.is_flat_forms());
        assert!(Connection::chern(&h).unwrap().is_flat_forms());
    }

    #[test]
    fn json_round_trip() {
        let h = build_family(&FamilyDescriptor::new(Family::F215).rho(1).b2(q(1))).unwrap();
        let (b, _) = Connection::bismut(&h).unwrap();
        let back = Connection::<Q>::from_json(&b.to_json()).unwrap();
        assert_eq!(back.coefficients(), b.coefficients());
        assert_eq!(back.kind(), b.kind());
    }

    #[test]
    fn curvature_of_iwasawa_endomorphism() {
        let h = build_family(&FamilyDescriptor::new(Family::F214)).unwrap();
        let (b, _) = Connection::bismut(&h).unwrap();
        let c = b.curvature(h.algebra());
        assert!(c.is_skew());
        // 2γ4 = 2(e34 − e56)
        assert_eq!(c.endomorphism(1, 2), Form::real(2, &[(&[3, 4], q(2)), (&[5, 6], q(-2))]));
    }
}
