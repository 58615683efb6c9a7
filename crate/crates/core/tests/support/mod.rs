//! Shared helpers for the integration tests: scalar shorthands, strategies and the property
//! suites (run through proptest's `TestRunner` so the acceptance harness can drive them too).

#![allow(dead_code)]

use nilgeom::complex::ComplexStructure;
use nilgeom::connection::Connection;
use nilgeom::exterior::{blades, Blade, Form, DIM};
use nilgeom::hermitian::{build_family, Family, FamilyDescriptor, HermitianStructure};
use nilgeom::holonomy::{bracket, gamma, gamma_coordinates};
use nilgeom::lie::{LieAlgebra, Preset};
use nilgeom::scalar::{Scalar, C, Q};
use nilgeom::strominger::{a_lambda, a_tau};
use num_complex::Complex;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub fn q(n: i64) -> Q {
    Q::from_int(n)
}

pub fn fr(p: i64, d: i64) -> Q {
    Q::frac(p, d)
}

/// γ-coordinate vector from (index, value) pairs.
pub fn gv(entries: &[(usize, Q)]) -> Vec<Q> {
    let mut v = vec![q(0); 8];
    for (n, x) in entries {
        v[n - 1] = v[n - 1].clone() + x.clone();
    }
    v
}

pub fn scale(v: &[Q], c: &Q) -> Vec<Q> {
    v.iter().map(|x| x.clone() * c.clone()).collect()
}

/// Σ c_n γ_n as a 2-form.
pub fn gamma_combo(v: &[Q]) -> Form<Q> {
    v.iter().enumerate().fold(Form::zero(2), |acc, (n, c)| acc + gamma::<Q>(n + 1).scale_real(c))
}

pub fn e(indices: &[usize], c: Q) -> Form<Q> {
    Form::real(indices.len(), &[(indices, c)])
}

pub fn bismut(h: &HermitianStructure<Q>) -> Connection<Q> {
    Connection::bismut(h).expect("adapted frame").0
}

/// γ-coordinates of every R(e_p, e_q) of the Bismut connection, keyed by (p, q).
pub fn bismut_endomorphisms(h: &HermitianStructure<Q>) -> Vec<((usize, usize), Vec<Q>)> {
    bismut(h)
        .curvature(h.algebra())
        .endomorphisms()
        .into_iter()
        .map(|(pq, f)| (pq, gamma_coordinates(&f).unwrap_or_else(|| panic!("R{pq:?} = {f} outside su(3)"))))
        .collect()
}

/// Compare a table of expected γ-coordinates against the Bismut curvature; missing entries
/// must vanish.
pub fn compare_table(h: &HermitianStructure<Q>, expected: &[((usize, usize), Vec<Q>)]) -> Result<(), String> {
    for ((p, q_), got) in bismut_endomorphisms(h) {
        let want = expected.iter().find(|(pq, _)| *pq == (p, q_)).map(|(_, v)| v.clone()).unwrap_or_else(|| vec![q(0); 8]);
        if got != want {
            return Err(format!("R(e{p},e{q_}): got {} expected {}", show(&got), show(&want)));
        }
    }
    Ok(())
}

pub fn show(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(n, x)| format!("{x}·γ{}", n + 1)).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

// ---- strategies ----

pub fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Q::frac(n, d))
}

pub fn nonzero_q() -> impl Strategy<Value = Q> {
    (1i64..=6, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| Q::frac(if neg { -n } else { n }, d))
}

pub fn positive_q() -> impl Strategy<Value = Q> {
    (1i64..=6, 1i64..=4).prop_map(|(n, d)| Q::frac(n, d))
}

/// Sparse complex form of the given degree with small integer coefficients.
pub fn form_of_degree(k: usize) -> impl Strategy<Value = Form<Q>> {
    let bl: Vec<Blade> = blades(k);
    let n = bl.len();
    prop::collection::vec((0..n, -3i64..=3, -3i64..=3), 0..5).prop_map(move |terms| {
        Form::from_blades(k, terms.into_iter().map(|(i, a, b)| (bl[i], Complex::new(q(a), q(b)))))
    })
}

pub fn any_form() -> impl Strategy<Value = Form<Q>> {
    (0usize..=DIM).prop_flat_map(form_of_degree)
}

/// Valid descriptors of F214, F215 and F217 with random rational parameters.
pub fn rational_family() -> impl Strategy<Value = FamilyDescriptor<Q>> {
    prop_oneof![
        nonzero_q().prop_map(|t| FamilyDescriptor::new(Family::F214).t(t)),
        (0u8..=1, 0i64..=1, nonzero_q(), nonzero_q())
            .prop_map(|(rho, b2, s, t)| FamilyDescriptor::new(Family::F215).rho(rho).b2(q(b2)).s(s).t(t)),
        (nonzero_q(), positive_q(), any::<bool>())
            .prop_map(|(r, s, neg)| FamilyDescriptor::new(Family::F217).r(r).s(s).sign(if neg { -1 } else { 1 })),
    ]
}

/// (s, u₁, u₂) with s² − |u|² and |u| perfect squares.
pub const PYTHAGOREAN: [(i64, (i64, i64), (i64, i64)); 8] = [
    (5, (0, 1), (3, 1)),
    (5, (0, 1), (-3, 1)),
    (5, (3, 1), (0, 1)),
    (5, (9, 5), (12, 5)),
    (5, (12, 5), (-9, 5)),
    (5, (0, 1), (4, 1)),
    (5, (12, 5), (16, 5)),
    (13, (0, 1), (5, 1)),
];

pub fn f216_descriptor(k: usize, rho: u8, b2: i64, t: Q) -> FamilyDescriptor<Q> {
    let (s, (a, b), (c, d)) = PYTHAGOREAN[k];
    FamilyDescriptor::new(Family::F216).rho(rho).b2(q(b2)).s(q(s)).u(fr(a, b), fr(c, d)).t(t)
}

/// F216 at Pythagorean parameters, plus the rational families.
pub fn any_family() -> impl Strategy<Value = FamilyDescriptor<Q>> {
    prop_oneof![
        3 => rational_family(),
        1 => (0..PYTHAGOREAN.len(), 0u8..=1, 0i64..=1, nonzero_q()).prop_map(|(k, rho, b2, t)| f216_descriptor(k, rho, b2, t)),
    ]
}

/// Abelian families carrying A_λ: F215 and F216 with ρ = 0.
pub fn abelian_family() -> impl Strategy<Value = FamilyDescriptor<Q>> {
    prop_oneof![
        (0i64..=1, nonzero_q(), nonzero_q()).prop_map(|(b2, s, t)| FamilyDescriptor::new(Family::F215).b2(q(b2)).s(s).t(t)),
        (0..PYTHAGOREAN.len(), 0i64..=1, nonzero_q()).prop_map(|(k, b2, t)| f216_descriptor(k, 0, b2, t)),
    ]
}

fn built(d: &FamilyDescriptor<Q>) -> Result<HermitianStructure<Q>, TestCaseError> {
    if d.validate().is_err() {
        return Err(TestCaseError::reject("outside the family domain"));
    }
    build_family(d).map_err(|e| TestCaseError::fail(format!("{}: {e}", d.summary())))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

// ---- property suites ----

/// a∧b = (−1)^{pq} b∧a, associativity, and the Leibniz rule for d on every preset.
pub fn graded_commutativity(runner: &mut TestRunner) -> Result<(), String> {
    let presets = Preset::ALL.len();
    runner
        .run(&(any_form(), any_form(), any_form(), 0..presets), |(a, b, c, k)| {
            let (p, r) = (a.degree(), b.degree());
            let sign = if p * r % 2 == 1 { q(-1) } else { q(1) };
            ensure(a.wedge(&b) == b.wedge(&a).scale_real(&sign), || format!("{a} ∧ {b}"))?;
            ensure(a.wedge(&b).wedge(&c) == a.wedge(&b.wedge(&c)), || "associativity".into())?;
            let g: LieAlgebra<Q> = Preset::ALL[k].algebra();
            let sp = if p % 2 == 1 { q(-1) } else { q(1) };
            let lhs = g.d(&a.wedge(&b));
            let rhs = g.d(&a).wedge(&b) + a.wedge(&g.d(&b)).scale_real(&sp);
            ensure(lhs == rhs, || format!("Leibniz on {} for {a}, {b}", Preset::ALL[k].name()))?;
            ensure(g.d(&g.d(&a)).is_zero(), || format!("d² ≠ 0 on {}", Preset::ALL[k].name()))
        })
        .map_err(|e| e.to_string())
}

/// ∂² = 0, ∂̄² = 0, ∂∂̄ = −∂̄∂ and d = ∂ + ∂̄ for the complex structure of every family.
pub fn dolbeault(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(any_family(), any_form()), |(d, a)| {
            let h = built(&d)?;
            let (g, j): (&LieAlgebra<Q>, &ComplexStructure<Q>) = (h.algebra(), h.complex_structure());
            let (del, dbar) = (j.del(g, &a), j.delbar(g, &a));
            ensure(j.del(g, &del).is_zero(), || format!("∂² on {}", d.summary()))?;
            ensure(j.delbar(g, &dbar).is_zero(), || format!("∂̄² on {}", d.summary()))?;
            ensure((j.del(g, &dbar) + j.delbar(g, &del)).is_zero(), || format!("∂∂̄ + ∂̄∂ on {}", d.summary()))?;
            ensure(del + dbar == g.d(&a), || format!("d ≠ ∂ + ∂̄ on {}", d.summary()))
        })
        .map_err(|e| e.to_string())
}

/// Bismut and Chern connections: σ^i_j = −σ^j_i (∇g = 0) and ∇F = 0 (∇J = 0).
pub fn metric_and_complex(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&any_family(), |d| {
            let h = built(&d)?;
            let f = h.fundamental().clone();
            for (name, conn) in [("bismut", bismut(&h)), ("chern", Connection::chern(&h).expect("adapted"))] {
                for i in 1..=DIM {
                    for k in 1..=DIM {
                        ensure((conn.form(i, k) + conn.form(k, i)).is_zero(), || format!("{name} σ{i}{k} not skew on {}", d.summary()))?;
                    }
                }
                for jdx in 1..=DIM {
                    ensure(conn.covariant_derivative(&f, jdx).is_zero(), || format!("{name} ∇F ≠ 0 on {}", d.summary()))?;
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// The fixed non-balanced example: h3 with de⁶ = c(e¹² + e³⁴) and adapted J, F.
pub fn unbalanced(c: Q) -> HermitianStructure<Q> {
    let mut de: Vec<Form<Q>> = (0..DIM).map(|_| Form::zero(2)).collect();
    de[5] = e(&[1, 2], c.clone()) + e(&[3, 4], c);
    HermitianStructure::adapted(LieAlgebra::checked(de).expect("Jacobi"))
}

/// Balanced ⇔ the Bismut connection preserves Ψ, on the families (balanced) and on h3 with
/// adapted F (not balanced, F∧dF = −2c e¹²³⁴⁵ ≠ 0).
pub fn balanced_iff_psi(runner: &mut TestRunner) -> Result<(), String> {
    let strategy = prop_oneof![any_family().prop_map(Ok), nonzero_q().prop_map(Err)];
    runner
        .run(&strategy, |input| {
            let (h, label) = match input {
                Ok(d) => (built(&d)?, d.summary()),
                Err(c) => (unbalanced(c.clone()), format!("unbalanced h3 c={c}")),
            };
            let balanced = h.balanced_check().expect("integrable").balanced;
            let residual = h.fundamental().wedge(&h.algebra().d(h.fundamental()));
            ensure(balanced == residual.is_zero(), || format!("balanced flag disagrees with F∧dF on {label}"))?;
            let psi = h.psi();
            let parallel = (1..=DIM).all(|jdx| bismut(&h).covariant_derivative(&psi, jdx).is_zero());
            ensure(balanced == parallel, || format!("balanced={balanced} but ∇Ψ parallel={parallel} on {label}"))
        })
        .map_err(|e| e.to_string())
}

/// Brackets of su(3): the printed table, antisymmetry, Jacobi and closure.
pub fn gamma_brackets(runner: &mut TestRunner) -> Result<(), String> {
    let table = [
        (1, 2, gv(&[(3, q(2))])),
        (2, 3, gv(&[(1, q(2))])),
        (3, 1, gv(&[(2, q(2))])),
        (5, 6, gv(&[(1, q(2)), (4, q(2))])),
        (1, 4, gv(&[])),
    ];
    for (a, b, want) in &table {
        let got = gamma_coordinates(&bracket(&gamma::<Q>(*a), &gamma::<Q>(*b)));
        if got.as_ref() != Some(want) {
            return Err(format!("[γ{a},γ{b}] = {got:?}"));
        }
    }
    let coords = || prop::collection::vec(-3i64..=3, 8).prop_map(|v| v.into_iter().map(q).collect::<Vec<Q>>());
    runner
        .run(&(coords(), coords(), coords()), |(x, y, z)| {
            let (a, b, c) = (gamma_combo(&x), gamma_combo(&y), gamma_combo(&z));
            let ab = bracket(&a, &b);
            ensure(gamma_coordinates(&ab).is_some(), || "bracket leaves su(3)".into())?;
            ensure((ab.clone() + bracket(&b, &a)).is_zero(), || "antisymmetry".into())?;
            let jac = bracket(&a, &bracket(&b, &c)) + bracket(&b, &bracket(&c, &a)) + bracket(&c, &bracket(&a, &b));
            ensure(jac.is_zero(), || "Jacobi".into())
        })
        .map_err(|e| e.to_string())
}

/// Ω(e₁,e₂) + Ω(e₃,e₄) + Ω(e₅,e₆) = 0 and Ω(Je_k, Je_l) = Ω(e_k, e_l), evaluated from the
/// coefficients with Je_{2m−1} = e_{2m}, Je_{2m} = −e_{2m−1}.
pub fn satisfies_instanton_equations(w: &Form<Q>) -> bool {
    let z = |c: C<Q>| c.re.is_zero() && c.im.is_zero();
    if !z(w.coeff(&[1, 2]) + w.coeff(&[3, 4]) + w.coeff(&[5, 6])) {
        return false;
    }
    let jv = |k: usize| if k % 2 == 1 { (k + 1, q(1)) } else { (k - 1, q(-1)) };
    for k in 1..=DIM {
        for l in k + 1..=DIM {
            let ((a, sa), (b, sb)) = (jv(k), jv(l));
            let lhs = w.coeff(&[a, b]) * Complex::new(sa * sb, q(0));
            if !z(lhs - w.coeff(&[k, l])) {
                return false;
            }
        }
    }
    true
}

/// Every curvature form of A_λ (abelian families) and A_τ (F217) satisfies the instanton
/// equations, and the connection is not flat for λ, τ ≠ 0.
pub fn instanton_condition(runner: &mut TestRunner) -> Result<(), String> {
    let f217 = (nonzero_q(), positive_q(), any::<bool>())
        .prop_map(|(r, s, neg)| FamilyDescriptor::new(Family::F217).r(r).s(s).sign(if neg { -1 } else { 1 }));
    let strategy = prop_oneof![
        (abelian_family(), nonzero_q()).prop_map(|(d, l)| (d, l, true)),
        (f217, nonzero_q()).prop_map(|(d, t)| (d, t, false)),
    ];
    runner
        .run(&strategy, |(d, x, is_lambda)| {
            let h = built(&d)?;
            let a = if is_lambda { a_lambda(&x) } else { a_tau(&x) };
            let curv = a.curvature(h.algebra());
            ensure(!curv.is_flat(), || format!("flat instanton on {}", d.summary()))?;
            for i in 1..=DIM {
                for k in 1..=DIM {
                    ensure(satisfies_instanton_equations(curv.form(i, k)), || {
                        format!("Ω{i}{k} = {} on {}", curv.form(i, k), d.summary())
                    })?;
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub type Suite = fn(&mut TestRunner) -> Result<(), String>;

pub const SUITES: [(&str, Suite); 6] = [
    ("graded commutativity", graded_commutativity),
    ("del/delbar", dolbeault),
    ("nabla g = nabla J = 0", metric_and_complex),
    ("balanced iff nabla Psi = 0", balanced_iff_psi),
    ("gamma brackets", gamma_brackets),
    ("instanton condition", instanton_condition),
];

/// A runner with a fixed seed.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, max_global_rejects: 4096, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}
