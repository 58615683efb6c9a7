//! The weak ∂∂̄-lemma in bidegree (2,3) at the Lie-algebra level, with witnesses.
//!
//! Forms of pure type are written in the monomials ω^{I J̄} = ω^I ∧ ω̄^J of the holomorphic
//! coframe returned by [`ComplexStructure::holomorphic_coframe`].

use serde_json::{json, Value};

use crate::complex::ComplexStructure;
use crate::error::{Error, Result};
use crate::exterior::{blades, Form};
use crate::lie::LieAlgebra;
use crate::linalg::{nullspace, solve, Matrix, Subspace};
use crate::scalar::{complex_to_string, imag_unit, re, Scalar, C};

/// Increasing index lists of the given size drawn from {1, 2, 3}.
fn subsets(size: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u8..8)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (1..=3).filter(|i| m & (1 << (i - 1)) != 0).collect())
        .collect();
    out.sort();
    out
}

/// Monomial ω^I ∧ ω̄^J with its index lists.
#[derive(Clone, Debug)]
pub struct Monomial<S> {
    pub holo: Vec<usize>,
    pub anti: Vec<usize>,
    pub form: Form<S>,
}

impl<S: Scalar> Monomial<S> {
    pub fn label(&self) -> String {
        monomial_label(&self.holo, &self.anti)
    }
}

fn monomial_label(holo: &[usize], anti: &[usize]) -> String {
    let h: String = holo.iter().map(|i| i.to_string()).collect();
    let a: String = anti.iter().map(|i| format!("{i}\u{0304}")).collect();
    match (h.is_empty(), a.is_empty()) {
        (true, true) => "1".into(),
        (false, true) => format!("ω^{{{h}}}"),
        (true, false) => format!("ω^{{{a}}}"),
        (false, false) => format!("ω^{{{h} {a}}}"),
    }
}

/// The bigraded monomial basis of a complex structure.
#[derive(Clone, Debug)]
pub struct Bigraded<S> {
    omega: [Form<S>; 3],
    omega_bar: [Form<S>; 3],
}

impl<S: Scalar> Bigraded<S> {
    pub fn new(j: &ComplexStructure<S>) -> Self {
        let omega = j.holomorphic_coframe();
        let omega_bar = std::array::from_fn(|k| omega[k].conj());
        Bigraded { omega, omega_bar }
    }

    pub fn omega(&self) -> &[Form<S>; 3] {
        &self.omega
    }

    pub fn monomial(&self, holo: &[usize], anti: &[usize]) -> Form<S> {
        let mut f = Form::one();
        for &i in holo {
            f = f.wedge(&self.omega[i - 1]);
        }
        for &i in anti {
            f = f.wedge(&self.omega_bar[i - 1]);
        }
        f
    }

    /// Basis of Λ^{p,q}, ordered lexicographically by (I, J).
    pub fn monomials(&self, p: usize, q: usize) -> Vec<Monomial<S>> {
        let mut out = Vec::new();
        for holo in subsets(p) {
            for anti in subsets(q) {
                let form = self.monomial(&holo, &anti);
                out.push(Monomial { holo: holo.clone(), anti, form });
            }
        }
        out
    }

    /// Coefficients of a k-form on all monomials of total degree k (zero entries dropped).
    pub fn expand(&self, a: &Form<S>) -> Vec<(Monomial<S>, C<S>)> {
        let k = a.degree();
        let mons: Vec<Monomial<S>> = (0..=k.min(3)).filter(|p| k - p <= 3).flat_map(|p| self.monomials(p, k - p)).collect();
        let bl = blades(k);
        let cols: Vec<Vec<C<S>>> = mons.iter().map(|m| m.form.to_vec(&bl)).collect();
        let m: Matrix<C<S>> = (0..bl.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let x = solve(&m, &a.to_vec(&bl)).expect("monomials of total degree k span all k-forms");
        mons.into_iter().zip(x).filter(|(_, c)| !c.re.is_zero() || !c.im.is_zero()).collect()
    }

    /// Text in ω-monomials, e.g. "ω^{23 2̄3̄}" or "2i ω^{12 1̄2̄3̄}".
    pub fn text(&self, a: &Form<S>) -> String {
        let terms = self.expand(a);
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (m, c)) in terms.iter().enumerate() {
            let neg = c.im.is_zero() && c.re.is_negative();
            let mag = if neg { complex_to_string(&-c.clone()) } else { complex_to_string(c) };
            let coef = if !c.im.is_zero() && !c.re.is_zero() { format!("({mag})") } else { mag };
            if n > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            if coef == "1" {
                s.push_str(&m.label());
            } else {
                s.push_str(&format!("{coef} {}", m.label()));
            }
        }
        s
    }
}

/// A real (2,2)-form φ with ∂̄φ = ∂η but ∂̄φ outside ∂∂̄(Λ^{1,2}).
#[derive(Clone, Debug)]
pub struct Witness<S> {
    pub phi: Form<S>,
    pub delbar_phi: Form<S>,
    pub eta: Form<S>,
}

/// ∂̄φ = i∂∂̄ψ for a basis element φ of V.
#[derive(Clone, Debug)]
pub struct Certificate<S> {
    pub phi: Form<S>,
    pub psi: Form<S>,
}

#[derive(Clone, Debug)]
pub struct WeakLemmaReport<S> {
    pub holds: bool,
    /// ∂(Λ^{1,3}) ⊆ ∂∂̄(Λ^{1,2}), which implies `holds`.
    pub strong: bool,
    pub dim_del_13: usize,
    pub dim_ddbar_12: usize,
    /// Real dimension of V = {φ real (2,2) : ∂̄φ ∈ ∂(Λ^{1,3})}.
    pub dim_v: usize,
    pub witness: Option<Witness<S>>,
    pub certificates: Vec<Certificate<S>>,
    coframe: Bigraded<S>,
}

impl<S: Scalar> WeakLemmaReport<S> {
    pub fn coframe(&self) -> &Bigraded<S> {
        &self.coframe
    }

    pub fn verdict(&self) -> &'static str {
        if self.holds {
            "holds"
        } else {
            "fails"
        }
    }

    pub fn to_json(&self) -> Value {
        let w = |f: &Form<S>| Value::String(self.coframe.text(f));
        json!({
            "verdict": self.verdict(),
            "strong_sublemma": self.strong,
            "dim_del_1_3": self.dim_del_13,
            "dim_ddbar_1_2": self.dim_ddbar_12,
            "dim_v": self.dim_v,
            "witness": self.witness.as_ref().map(|x| json!({
                "phi": w(&x.phi), "delbar_phi": w(&x.delbar_phi), "eta": w(&x.eta),
            })),
            "certificates": self.certificates.iter().map(|c| json!({"phi": w(&c.phi), "psi": w(&c.psi)})).collect::<Vec<_>>(),
        })
    }
}

/// Real basis of Λ^{2,2}: real monomials ω^{I Ī} (times i when imaginary), and
/// m + m̄, i(m − m̄) for I < J.
pub fn real_22_basis<S: Scalar>(b: &Bigraded<S>) -> Vec<Form<S>> {
    let mut out = Vec::new();
    for m in b.monomials(2, 2) {
        let bar = m.form.conj();
        if m.holo == m.anti {
            if bar == m.form {
                out.push(m.form.clone());
            } else {
                out.push(m.form.scale(&imag_unit()));
            }
        } else if m.holo < m.anti {
            out.push(m.form.clone() + bar.clone());
            out.push((m.form.clone() - bar).scale(&imag_unit()));
        }
    }
    out
}

fn span_of<S: Scalar>(forms: &[Form<S>], degree: usize) -> Subspace<C<S>> {
    let bl = blades(degree);
    Subspace::span(bl.len(), forms.iter().map(|f| f.to_vec(&bl)).collect())
}

/// Σ c_n forms[n] = target over ℂ.
fn combine<S: Scalar>(forms: &[Form<S>], target: &Form<S>) -> Option<Vec<C<S>>> {
    let bl = blades(target.degree());
    let cols: Vec<Vec<C<S>>> = forms.iter().map(|f| f.to_vec(&bl)).collect();
    let m: Matrix<C<S>> = (0..bl.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    solve(&m, &target.to_vec(&bl))
}

fn sum_scaled<S: Scalar>(degree: usize, forms: &[Form<S>], c: &[C<S>]) -> Form<S> {
    forms
        .iter()
        .zip(c)
        .filter(|(_, c)| !c.re.is_zero() || !c.im.is_zero())
        .fold(Form::zero(degree), |acc, (f, c)| acc + f.scale(c))
}

/// The weak ∂∂̄-lemma in bidegree (2,3).
pub fn weak_ddbar_check<S: Scalar>(g: &LieAlgebra<S>, j: &ComplexStructure<S>) -> Result<WeakLemmaReport<S>> {
    if !j.is_integrable(g) {
        return Err(Error::NotIntegrable);
    }
    let b = Bigraded::new(j);
    let forms13: Vec<Form<S>> = b.monomials(1, 3).into_iter().map(|m| m.form).collect();
    let forms12: Vec<Form<S>> = b.monomials(1, 2).into_iter().map(|m| m.form).collect();
    let del13: Vec<Form<S>> = forms13.iter().map(|f| j.del(g, f)).collect();
    let ddbar12: Vec<Form<S>> = forms12.iter().map(|f| j.del(g, &j.delbar(g, f))).collect();
    let w = span_of(&del13, 5);
    let u = span_of(&ddbar12, 5);
    let strong = w.is_subspace_of(&u);

    // V as real coordinates on the real (2,2) basis
    let real22 = real_22_basis(&b);
    let dbar: Vec<Vec<C<S>>> = real22.iter().map(|f| j.delbar(g, f).to_vec(&blades(5))).collect();
    let rows_w: Matrix<C<S>> = w.basis().to_vec();
    let annihilator = nullspace(&rows_w, blades(5).len());
    let mut conds: Matrix<S> = Vec::new();
    for a in &annihilator {
        let vals: Vec<C<S>> = dbar
            .iter()
            .map(|col| a.iter().zip(col).fold(re(S::zero()), |acc, (x, y)| acc + x.clone() * y.clone()))
            .collect();
        conds.push(vals.iter().map(|z| z.re.clone()).collect());
        conds.push(vals.iter().map(|z| z.im.clone()).collect());
    }
    let v_basis = if conds.is_empty() {
        crate::linalg::identity(real22.len())
    } else {
        nullspace(&conds, real22.len())
    };
    let phis: Vec<Form<S>> = v_basis
        .iter()
        .map(|x| sum_scaled(4, &real22, &x.iter().map(|s| re(s.clone())).collect::<Vec<_>>()))
        .collect();

    let mut witness: Option<Witness<S>> = None;
    let mut certificates = Vec::new();
    for phi in &phis {
        let d = j.delbar(g, phi);
        let target = d.scale(&-imag_unit::<S>());
        match combine(&ddbar12, &target) {
            Some(c) => certificates.push(Certificate { phi: phi.clone(), psi: sum_scaled(3, &forms12, &c) }),
            None => {
                // prefer the witness with the fewest monomials
                let size = b.expand(phi).len();
                if witness.as_ref().map_or(true, |w| b.expand(&w.phi).len() > size) {
                    let c = combine(&del13, &d).expect("∂̄φ lies in ∂(Λ^{1,3}) by construction of V");
                    witness = Some(Witness { phi: phi.clone(), delbar_phi: d, eta: sum_scaled(4, &forms13, &c) });
                }
            }
        }
    }
    Ok(WeakLemmaReport {
        holds: witness.is_none(),
        strong,
        dim_del_13: w.dim(),
        dim_ddbar_12: u.dim(),
        dim_v: phis.len(),
        witness,
        certificates,
        coframe: b,
    })
}
