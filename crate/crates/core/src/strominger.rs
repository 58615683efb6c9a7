//! SU(3)-instantons, the anomaly cancellation equation 4·dT = α′(tr Ω∧Ω − tr Ω^A∧Ω^A) and the
//! Strominger system with constant dilaton.
//!
//! With p₁ = tr Ω∧Ω / 8π², the equation dT = 2π²α′(p₁(∇) − p₁(A)) is exactly
//! 4·dT = α′(tr∇ − trA), so no π enters any backend.

use std::fmt;

use serde_json::{json, Value};

use crate::connection::{Connection, ConnectionKind};
use crate::error::{Error, Result};
use crate::exterior::{blades, Form, DIM};
use crate::hermitian::HermitianStructure;
use crate::holonomy::{gamma_coordinates, Holonomy};
use crate::linalg::{rank, solve, Matrix};
use crate::scalar::Scalar;

/// Verdict of the SU(3)-instanton conditions on every curvature form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantonCheck {
    /// Ω(Je_k, Je_l) = Ω(e_k, e_l).
    pub j_invariant: bool,
    /// Ω(e₁,e₂) + Ω(e₃,e₄) + Ω(e₅,e₆) = 0.
    pub trace_free: bool,
    /// Every Ω^i_j lies in span(γ₁ … γ₈).
    pub in_gamma_span: bool,
    pub flat: bool,
    /// First failing (i, j), 1-based.
    pub witness: Option<(usize, usize)>,
}

impl InstantonCheck {
    pub fn holds(&self) -> bool {
        self.j_invariant && self.trace_free
    }
}

/// Evaluate the instanton conditions on the curvature of `a` in the adapted frame of `h`.
pub fn instanton_check<S: Scalar>(h: &HermitianStructure<S>, a: &Connection<S>) -> Result<InstantonCheck> {
    if !h.is_adapted_frame() {
        return Err(Error::NotAdapted);
    }
    let j = h.complex_structure();
    let curv = a.curvature(h.algebra());
    let mut out = InstantonCheck { j_invariant: true, trace_free: true, in_gamma_span: true, flat: curv.is_flat(), witness: None };
    for i in 1..=DIM {
        for k in 1..=DIM {
            let w = curv.form(i, k);
            if w.is_zero() {
                continue;
            }
            let inv = j.pullback(w) == *w;
            let sum = w.coeff(&[1, 2]) + w.coeff(&[3, 4]) + w.coeff(&[5, 6]);
            let tr = sum.re.is_zero() && sum.im.is_zero();
            let span = gamma_coordinates(w).is_some();
            if (!inv || !tr || !span) && out.witness.is_none() {
                out.witness = Some((i, k));
            }
            out.j_invariant &= inv;
            out.trace_free &= tr;
            out.in_gamma_span &= span;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnomalyStatus {
    Solved,
    NotProportional,
    NonpositiveAlpha,
    Degenerate,
}

impl AnomalyStatus {
    pub fn label(self) -> &'static str {
        match self {
            AnomalyStatus::Solved => "solved",
            AnomalyStatus::NotProportional => "not-proportional",
            AnomalyStatus::NonpositiveAlpha => "nonpositive-alpha",
            AnomalyStatus::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for AnomalyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug)]
pub struct AnomalySolution<S> {
    pub status: AnomalyStatus,
    pub alpha: Option<S>,
    /// 4·dT.
    pub lhs: Form<S>,
    /// tr∇ − trA.
    pub difference: Form<S>,
}

impl<S: Scalar> AnomalySolution<S> {
    pub fn solved(&self) -> bool {
        self.status == AnomalyStatus::Solved
    }
}

/// Solve 4·dT = α′(tr∇ − trA) for a single scalar α′.
pub fn anomaly_solve<S: Scalar>(dt: &Form<S>, tr_conn: &Form<S>, tr_a: &Form<S>) -> AnomalySolution<S> {
    let lhs = dt.scale_real(&S::from_int(4));
    let difference = tr_conn.clone() - tr_a.clone();
    let done = |status, alpha| AnomalySolution { status, alpha, lhs: lhs.clone(), difference: difference.clone() };
    if difference.is_zero() {
        return done(if lhs.is_zero() { AnomalyStatus::Degenerate } else { AnomalyStatus::NotProportional }, None);
    }
    let (b, c) = difference.sorted_terms().into_iter().next().expect("nonzero form");
    let l = lhs.coeff_blade(b);
    if !c.im.is_zero() || !l.im.is_zero() {
        return done(AnomalyStatus::NotProportional, None);
    }
    let alpha = l.re / c.re;
    if !(lhs.clone() - difference.scale_real(&alpha)).is_zero() {
        return done(AnomalyStatus::NotProportional, None);
    }
    let status = if alpha.is_positive() { AnomalyStatus::Solved } else { AnomalyStatus::NonpositiveAlpha };
    done(status, Some(alpha))
}

/// Solution of 4·dT = α′·tr∇ − β·trA₁ for (α′, β), where the instanton trace scales as
/// trA = τ²·trA₁; then τ² = β/α′.
#[derive(Clone, Debug)]
pub struct ScaledSolution<S> {
    pub anomaly: AnomalySolution<S>,
    pub tau_squared: Option<S>,
}

pub fn anomaly_solve_scaled<S: Scalar>(dt: &Form<S>, tr_conn: &Form<S>, tr_a1: &Form<S>) -> ScaledSolution<S> {
    let lhs = dt.scale_real(&S::from_int(4));
    let bl = blades(4);
    let (x, y, z) = (tr_conn.to_real_vec(&bl), tr_a1.to_real_vec(&bl), lhs.to_real_vec(&bl));
    let m: Matrix<S> = x.iter().zip(&y).map(|(p, q)| vec![p.clone(), -q.clone()]).collect();
    let fail = |status| ScaledSolution {
        anomaly: AnomalySolution { status, alpha: None, lhs: lhs.clone(), difference: tr_conn.clone() },
        tau_squared: None,
    };
    if rank(&m, 2) < 2 {
        // tr∇ and trA₁ are parallel: (α′, β) is not determined
        return fail(if lhs.is_zero() { AnomalyStatus::Degenerate } else { AnomalyStatus::NotProportional });
    }
    let Some(sol) = solve(&m, &z) else {
        return fail(AnomalyStatus::NotProportional);
    };
    let (alpha, beta) = (sol[0].clone(), sol[1].clone());
    if !alpha.is_positive() {
        let mut f = fail(AnomalyStatus::NonpositiveAlpha);
        f.anomaly.alpha = Some(alpha);
        return f;
    }
    let tau2 = beta / alpha.clone();
    let tr_a = tr_a1.scale_real(&tau2);
    ScaledSolution {
        anomaly: AnomalySolution {
            status: AnomalyStatus::Solved,
            alpha: Some(alpha),
            lhs,
            difference: tr_conn.clone() - tr_a,
        },
        tau_squared: Some(tau2),
    }
}

/// Which invariant connection enters the anomaly equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseConnection {
    Bismut,
    Chern,
}

impl BaseConnection {
    pub fn build<S: Scalar>(self, h: &HermitianStructure<S>) -> Result<Connection<S>> {
        match self {
            BaseConnection::Bismut => Ok(Connection::bismut(h)?.0),
            BaseConnection::Chern => Connection::chern(h),
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "bismut" => Some(BaseConnection::Bismut),
            "chern" => Some(BaseConnection::Chern),
            _ => None,
        }
    }
}

/// σ¹₂ = −σ³₄ = λ(e⁵ + e⁶), and their skew partners.
pub fn a_lambda<S: Scalar>(lambda: &S) -> Connection<S> {
    let f = (Form::e(&[5]) + Form::e(&[6])).scale_real(lambda);
    Connection::from_skew_forms(
        ConnectionKind::Custom("A_lambda".into()),
        &[((1, 2), f.clone()), ((3, 4), -f)],
    )
    .expect("real off-diagonal 1-forms")
}

/// σ²₃ = σ²₅ = σ⁴₅ = ½σ⁵₆ = −τe⁶ and σ^i_j = τe⁶ for every other i < j.
pub fn a_tau<S: Scalar>(tau: &S) -> Connection<S> {
    let e6 = Form::e(&[6]).scale_real(tau);
    let mut entries = Vec::new();
    for i in 1..=DIM {
        for j in i + 1..=DIM {
            let f = match (i, j) {
                (2, 3) | (2, 5) | (4, 5) => -e6.clone(),
                (5, 6) => e6.scale_real(&S::from_int(-2)),
                _ => e6.clone(),
            };
            entries.push(((i, j), f));
        }
    }
    Connection::from_skew_forms(ConnectionKind::Custom("A_tau".into()), &entries).expect("real off-diagonal 1-forms")
}

/// Gauge connection entering the anomaly equation.
#[derive(Clone, Debug)]
pub enum InstantonSpec<S> {
    Lambda(S),
    Tau(S),
    /// A_τ with τ² solved from the anomaly equation.
    TauSolve,
    /// Known only through its trace 4-form; the instanton conditions are not checked.
    External(Form<S>),
}

impl<S: Scalar> InstantonSpec<S> {
    pub fn label(&self) -> &'static str {
        match self {
            InstantonSpec::Lambda(_) => "A_lambda",
            InstantonSpec::Tau(_) | InstantonSpec::TauSolve => "A_tau",
            InstantonSpec::External(_) => "external",
        }
    }
}

#[derive(Clone, Debug)]
pub struct StromingerReport<S> {
    pub base: BaseConnection,
    pub instanton: InstantonSpec<S>,
    /// (a): holonomy of the base connection inside su(3).
    pub gravitino: bool,
    pub holonomy: Holonomy<S>,
    /// (b): balanced.
    pub dilatino: bool,
    /// (c): instanton conditions hold and A is not flat.
    pub gaugino: bool,
    pub instanton_check: Option<InstantonCheck>,
    pub instanton_flat: bool,
    pub instanton_trace: Form<S>,
    /// (d).
    pub anomaly: AnomalySolution<S>,
    pub tau_squared: Option<S>,
    /// The base connection itself is an SU(3)-instanton.
    pub heterotic: bool,
    pub dt: Form<S>,
    pub base_trace: Form<S>,
}

impl<S: Scalar> StromingerReport<S> {
    pub fn solves_system(&self) -> bool {
        self.gravitino && self.dilatino && self.gaugino && self.anomaly.solved()
    }

    pub fn to_json(&self) -> Value {
        let param = match &self.instanton {
            InstantonSpec::Lambda(x) | InstantonSpec::Tau(x) => Some(x.to_plain_string()),
            _ => None,
        };
        json!({
            "schema": "1",
            "connection": match self.base { BaseConnection::Bismut => "bismut", BaseConnection::Chern => "chern" },
            "instanton": {
                "kind": self.instanton.label(),
                "parameter": param,
                "tau_squared": self.tau_squared.as_ref().map(|x| x.to_plain_string()),
                "verified": self.instanton_check.is_some(),
                "flat": self.instanton_flat,
                "trace": self.instanton_trace.to_text(),
            },
            "gravitino": self.gravitino,
            "holonomy": { "dim": self.holonomy.dim(), "label": self.holonomy.label().name() },
            "dilatino": self.dilatino,
            "gaugino": self.gaugino,
            "anomaly": {
                "status": self.anomaly.status.label(),
                "alpha_prime": self.anomaly.alpha.as_ref().map(|x| x.to_plain_string()),
                "four_dT": self.anomaly.lhs.to_text(),
                "trace_difference": self.anomaly.difference.to_text(),
            },
            "dT": self.dt.to_text(),
            "connection_trace": self.base_trace.to_text(),
            "heterotic": self.heterotic,
            "solution": self.solves_system(),
        })
    }
}

/// Evaluate the four Strominger conditions and the heterotic flag.
pub fn strominger_report<S: Scalar>(
    h: &HermitianStructure<S>,
    instanton: InstantonSpec<S>,
    base: BaseConnection,
) -> Result<StromingerReport<S>> {
    let g = h.algebra();
    let conn = base.build(h)?;
    let holonomy = Holonomy::generate(&conn, g);
    let gravitino = holonomy.in_su3();
    let dilatino = h.balanced_check()?.balanced;
    let base_trace = conn.curvature(g).trace();
    let heterotic = instanton_check(h, &conn)?.holds();
    let dt = g.d(&h.torsion());

    let (check, flat, trace, anomaly, tau_squared) = match &instanton {
        InstantonSpec::Lambda(l) => {
            if !h.complex_structure().is_abelian(g) {
                return Err(Error::Precondition("A_lambda requires an abelian complex structure (rho = 0)".into()));
            }
            let a = a_lambda(l);
            let ca = a.curvature(g);
            let tr = ca.trace();
            let sol = anomaly_solve(&dt, &base_trace, &tr);
            (Some(instanton_check(h, &a)?), ca.is_flat(), tr, sol, None)
        }
        InstantonSpec::Tau(t) => {
            let a = a_tau(t);
            let ca = a.curvature(g);
            let tr = ca.trace();
            let sol = anomaly_solve(&dt, &base_trace, &tr);
            (Some(instanton_check(h, &a)?), ca.is_flat(), tr, sol, None)
        }
        InstantonSpec::TauSolve => {
            let a1 = a_tau(&S::one());
            let tr1 = a1.curvature(g).trace();
            let tr2 = a_tau(&S::from_int(2)).curvature(g).trace();
            if tr2 != tr1.scale_real(&S::from_int(4)) {
                return Err(Error::Precondition("A_tau trace is not quadratic in tau on this algebra".into()));
            }
            let sol = anomaly_solve_scaled(&dt, &base_trace, &tr1);
            let flat = !sol.tau_squared.as_ref().is_some_and(|t| t.is_positive());
            let tr = tr1.scale_real(sol.tau_squared.as_ref().unwrap_or(&S::zero()));
            // the curvature of A_τ is τ times that of A₁, so the check at τ = 1 decides every τ ≠ 0
            (Some(instanton_check(h, &a1)?), flat, tr, sol.anomaly, sol.tau_squared)
        }
        InstantonSpec::External(tr) => {
            let sol = anomaly_solve(&dt, &base_trace, tr);
            (None, tr.is_zero(), tr.clone(), sol, None)
        }
    };
    let gaugino = !flat && check.as_ref().map_or(true, |c| c.holds());
    Ok(StromingerReport {
        base,
        instanton,
        gravitino,
        holonomy,
        dilatino,
        gaugino,
        instanton_check: check,
        instanton_flat: flat,
        instanton_trace: trace,
        anomaly,
        tau_squared,
        heterotic,
        dt,
        base_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{build_family, Family, FamilyDescriptor};
    use crate::scalar::Q;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn e1234(c: Q) -> Form<Q> {
        Form::real(4, &[(&[1, 2, 3, 4], c)])
    }

    #[test]
    fn h3_alpha_prime() {
        for (t, l) in [(q(1), q(1)), (q(2), q(1)), (q(1), Q::frac(3, 2))] {
            let h = build_family(&FamilyDescriptor::new(Family::F215).t(t.clone())).unwrap();
            let r = strominger_report(&h, InstantonSpec::Lambda(l.clone()), BaseConnection::Bismut).unwrap();
            let expect = q(2) / (q(4) * t.clone() * t.clone() - l.clone() * l.clone());
            assert_eq!(r.anomaly.alpha, Some(expect));
            assert!(r.solves_system() && r.heterotic);
            assert_eq!(r.instanton_trace, e1234(q(-16) * t.clone() * t.clone() * l.clone() * l.clone()));
        }
    }

    #[test]
    fn a_lambda_needs_abelian() {
        let h = build_family(&FamilyDescriptor::new(Family::F215).rho(1).b2(q(1))).unwrap();
        let e = strominger_report(&h, InstantonSpec::Lambda(q(1)), BaseConnection::Bismut).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
    }

    #[test]
    fn a_tau_trace_and_check() {
        let h = build_family(&FamilyDescriptor::<Q>::new(Family::F217)).unwrap();
        let a = a_tau(&q(1));
        assert_eq!(a.curvature(h.algebra()).trace(), e1234(q(-144)));
        let c = instanton_check(&h, &a).unwrap();
        assert!(c.holds() && c.in_gamma_span && !c.flat);
        assert!(a_tau(&q(0)).curvature(h.algebra()).is_flat());
    }

    #[test]
    fn anomaly_statuses() {
        let a = e1234(q(-2));
        assert_eq!(anomaly_solve(&a, &e1234(q(-8)), &Form::zero(4)).alpha, Some(q(1)));
        assert_eq!(anomaly_solve(&a, &a, &a).status, AnomalyStatus::NotProportional);
        assert_eq!(anomaly_solve(&Form::zero(4), &a, &a).status, AnomalyStatus::Degenerate);
        assert_eq!(anomaly_solve(&a, &e1234(q(8)), &Form::zero(4)).status, AnomalyStatus::NonpositiveAlpha);
        let mixed = a.clone() + Form::real(4, &[(&[1, 2, 5, 6], q(1))]);
        assert_eq!(anomaly_solve(&a, &mixed, &Form::zero(4)).status, AnomalyStatus::NotProportional);
    }

    #[test]
    fn bismut_side_tau() {
        // r = 1, s = 1: τ̃² = 2/9 and α′ = 2
        let h = build_family(&FamilyDescriptor::<Q>::new(Family::F217)).unwrap();
        let r = strominger_report(&h, InstantonSpec::TauSolve, BaseConnection::Bismut).unwrap();
        assert_eq!(r.tau_squared, Some(Q::frac(2, 9)));
        assert_eq!(r.anomaly.alpha, Some(q(2)));
        assert!(r.solves_system());
    }

    #[test]
    fn chern_side_tau() {
        for (r, s) in [(q(1), q(2)), (q(2), Q::frac(3, 2)), (q(1), q(1))] {
            let h = build_family(&FamilyDescriptor::<Q>::new(Family::F217).r(r.clone()).s(s.clone())).unwrap();
            let rep = strominger_report(&h, InstantonSpec::TauSolve, BaseConnection::Chern).unwrap();
            let s4 = s.clone() * s.clone() * s.clone() * s.clone();
            let expect = (s4 - q(1)) / (q(9) * r.clone() * r.clone() * s.clone() * s.clone());
            assert_eq!(rep.tau_squared, Some(expect), "r={r} s={s}");
        }
    }
}
