//! Holonomy algebras of invariant metric connections, generated from curvature endomorphisms,
//! their covariant derivatives and brackets, and compared with the γ-basis of su(3).
//!
//! A 2-form γ is identified with the skew endomorphism A whose matrix is the coefficient
//! matrix of γ: A_pq = γ(e_p, e_q).

use std::fmt;

use serde_json::{json, Value};

use crate::connection::Connection;
use crate::exterior::{blades, Form, DIM};
use crate::lie::LieAlgebra;
use crate::linalg::{Matrix, RankDiagnostic, Subspace};
use crate::scalar::{re, Scalar};

const PAIRS: usize = DIM * (DIM - 1) / 2;

/// γ1 … γ8 (1-based).
pub fn gamma<S: Scalar>(n: usize) -> Form<S> {
    let e = |i, j| Form::<S>::e(&[i, j]);
    match n {
        1 => e(1, 2) - e(3, 4),
        2 => e(1, 3) + e(2, 4),
        3 => e(1, 4) - e(2, 3),
        4 => e(3, 4) - e(5, 6),
        5 => e(1, 5) + e(2, 6),
        6 => e(1, 6) - e(2, 5),
        7 => e(3, 5) + e(4, 6),
        8 => e(3, 6) - e(4, 5),
        _ => panic!("gamma index {n} out of range 1..8"),
    }
}

pub fn gammas<S: Scalar>() -> Vec<Form<S>> {
    (1..=8).map(gamma).collect()
}

fn to_coords<S: Scalar>(a: &Form<S>) -> Vec<S> {
    a.to_re_vec(&blades(2))
}

fn from_coords<S: Scalar>(v: &[S]) -> Form<S> {
    Form::from_re_vec(2, &blades(2), v)
}

/// Coordinates of a 2-form in the γ-basis, if it lies in their span.
pub fn gamma_coordinates<S: Scalar>(a: &Form<S>) -> Option<Vec<S>> {
    // solve Σ c_n γ_n = a over the 15 blade coordinates
    let cols: Vec<Vec<S>> = gammas::<S>().iter().map(to_coords).collect();
    let target = to_coords(a);
    let m: Matrix<S> = (0..PAIRS).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    crate::linalg::solve(&m, &target)
}

/// "2γ1 − γ4" style text, or `None` outside the span.
pub fn gamma_text<S: Scalar>(a: &Form<S>) -> Option<String> {
    let c = gamma_coordinates(a)?;
    Some(coords_text(&c))
}

/// Nonzero terms of a γ-coordinate vector: "gamma1", "2*gamma3", "-gamma4".
fn coords_terms<S: Scalar>(c: &[S]) -> Vec<String> {
    let mut out = Vec::new();
    for (n, x) in c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let mag = x.abs();
        let sign = if x.is_negative() { "-" } else { "" };
        if (mag.clone() - S::one()).is_zero() {
            out.push(format!("{sign}gamma{}", n + 1));
        } else {
            out.push(format!("{sign}{}*gamma{}", mag.to_plain_string(), n + 1));
        }
    }
    out
}

fn coords_text<S: Scalar>(c: &[S]) -> String {
    let terms = coords_terms(c);
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => s.push_str(&format!(" - {rest}")),
            None => s.push_str(&format!(" + {t}")),
        }
    }
    s
}

/// Skew endomorphism of a 2-form.
pub fn form_to_endo<S: Scalar>(a: &Form<S>) -> Matrix<S> {
    (1..=DIM)
        .map(|p| (1..=DIM).map(|q| if p == q { S::zero() } else { a.coeff(&[p, q]).re }).collect())
        .collect()
}

/// Inverse of `form_to_endo` (reads the upper triangle).
pub fn endo_to_form<S: Scalar>(m: &Matrix<S>) -> Form<S> {
    let mut f = Form::zero(2);
    for p in 0..DIM {
        for q in p + 1..DIM {
            if !m[p][q].is_zero() {
                f = f + Form::term(&[p + 1, q + 1], re(m[p][q].clone()));
            }
        }
    }
    f
}

/// Commutator of endomorphisms, as a 2-form.
pub fn bracket<S: Scalar>(a: &Form<S>, b: &Form<S>) -> Form<S> {
    let (x, y) = (form_to_endo(a), form_to_endo(b));
    let xy = crate::linalg::mat_mul(&x, &y);
    let yx = crate::linalg::mat_mul(&y, &x);
    endo_to_form(&crate::linalg::mat_sub(&xy, &yx))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HolonomyLabel {
    Trivial,
    /// ⟨γ1⟩
    Gamma1,
    /// ⟨γ1, γ2, γ3⟩
    Su2,
    /// ⟨γ1 … γ8⟩
    Su3,
    Other(usize),
}

impl HolonomyLabel {
    pub fn name(&self) -> String {
        match self {
            HolonomyLabel::Trivial => "trivial".into(),
            HolonomyLabel::Gamma1 => "gamma1".into(),
            HolonomyLabel::Su2 => "su2".into(),
            HolonomyLabel::Su3 => "su3".into(),
            HolonomyLabel::Other(d) => format!("other({d})"),
        }
    }
}

impl fmt::Display for HolonomyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A subspace of 2-forms, closed under brackets and covariant derivatives.
#[derive(Clone, Debug)]
pub struct Holonomy<S> {
    space: Subspace<S>,
    /// Number of enlargement rounds before the fixpoint.
    pub rounds: usize,
    /// Dimension after each round (the first entry is the curvature span).
    pub history: Vec<usize>,
}

impl<S: Scalar> Holonomy<S> {
    /// Start from the span of R(e_p, e_q) and adjoin ∇_{e_j}-derivatives and pairwise brackets
    /// until the dimension is stable.
    pub fn generate(conn: &Connection<S>, g: &LieAlgebra<S>) -> Self {
        let curv = conn.curvature(g);
        let start: Vec<Vec<S>> = curv.endomorphisms().iter().map(|(_, f)| to_coords(f)).collect();
        Holonomy::close(conn, Subspace::span(PAIRS, start))
    }

    /// Closure of an arbitrary starting span.
    pub fn close(conn: &Connection<S>, mut space: Subspace<S>) -> Self {
        let mut history = vec![space.dim()];
        let mut rounds = 0;
        loop {
            let basis: Vec<Form<S>> = space.basis().iter().map(|v| from_coords(v)).collect();
            let mut more = Vec::new();
            for b in &basis {
                for j in 1..=DIM {
                    let d = conn.covariant_derivative(b, j);
                    if !d.is_zero() {
                        more.push(to_coords(&d));
                    }
                }
            }
            for (n, a) in basis.iter().enumerate() {
                for b in &basis[n + 1..] {
                    let c = bracket(a, b);
                    if !c.is_zero() {
                        more.push(to_coords(&c));
                    }
                }
            }
            let next = space.join(more);
            rounds += 1;
            let grew = next.dim() > space.dim();
            history.push(next.dim());
            space = next;
            if !grew {
                return Holonomy { space, rounds, history };
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> Vec<Form<S>> {
        self.space.basis().iter().map(|v| from_coords(v)).collect()
    }

    pub fn contains(&self, a: &Form<S>) -> bool {
        self.space.contains(&to_coords(a))
    }

    pub fn diagnostic(&self) -> RankDiagnostic {
        self.space.diagnostic()
    }

    /// Inside span(γ1 … γ8).
    pub fn in_su3(&self) -> bool {
        self.basis().iter().all(|b| gamma_coordinates(b).is_some())
    }

    pub fn label(&self) -> HolonomyLabel {
        let span = |ns: &[usize]| Subspace::span(PAIRS, ns.iter().map(|&n| to_coords(&gamma::<S>(n))).collect());
        if self.dim() == 0 {
            HolonomyLabel::Trivial
        } else if self.space.same_as(&span(&[1])) {
            HolonomyLabel::Gamma1
        } else if self.space.same_as(&span(&[1, 2, 3])) {
            HolonomyLabel::Su2
        } else if self.space.same_as(&span(&[1, 2, 3, 4, 5, 6, 7, 8])) {
            HolonomyLabel::Su3
        } else {
            HolonomyLabel::Other(self.dim())
        }
    }

    /// Reduced basis in γ-coordinates, or `None` when not inside su(3).
    pub fn gamma_basis(&self) -> Option<Vec<Vec<S>>> {
        let rows: Option<Vec<Vec<S>>> = self.basis().iter().map(gamma_coordinates).collect();
        Some(Subspace::span(8, rows?).basis().to_vec())
    }

    /// One line per basis element: γ-combinations inside su(3), plain 2-forms otherwise.
    pub fn basis_text(&self) -> Vec<String> {
        match self.gamma_basis() {
            Some(rows) => rows.iter().map(|r| coords_text(r)).collect(),
            None => self.basis().iter().map(|b| b.to_text()).collect(),
        }
    }

    /// {"dim":3,"label":"su2","basis":[["gamma1"],["gamma2"],["gamma3"]]}; outside su(3) each
    /// basis entry is a one-element list holding the 2-form text.
    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = match self.gamma_basis() {
            Some(rows) => rows.iter().map(|r| json!(coords_terms(r))).collect(),
            None => self.basis().iter().map(|b| json!([b.to_text()])).collect(),
        };
        json!({ "dim": self.dim(), "label": self.label().name(), "basis": basis })
    }
}
