//! Hermitian structures, balanced checks, the canonical balanced families in adapted frames,
//! and verification of equivalences.

use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::complex::{to_mat6, wedge3, ComplexStructure, ComplexType, Mat6};
use crate::error::{Error, Result};
use crate::exterior::{Form, DIM};
use crate::lie::{omega, omega_bar, unit_vec, LieAlgebra, Preset, Vector};
use crate::linalg::{identity, inverse, mat_mul, positive_definite, transpose, Matrix};
use crate::scalar::{imag_unit, re, Scalar, C};

/// A J-compatible inner product on a Lie algebra, with its fundamental form F(X,Y) = g(X,JY).
#[derive(Clone, Debug)]
pub struct HermitianStructure<S> {
    algebra: LieAlgebra<S>,
    j: ComplexStructure<S>,
    metric: Matrix<S>,
    fundamental: Form<S>,
}

fn fundamental_from_metric<S: Scalar>(g: &Matrix<S>, jv: &Mat6<S>) -> Form<S> {
    let mut f = Form::zero(2);
    for i in 0..DIM {
        for j in i + 1..DIM {
            let c = (0..DIM).fold(S::zero(), |a, m| a + g[i][m].clone() * jv[m][j].clone());
            if !c.is_zero() {
                f = f + Form::term(&[i + 1, j + 1], re(c));
            }
        }
    }
    f
}

impl<S: Scalar> HermitianStructure<S> {
    /// Checks symmetry, J-compatibility and positive definiteness of `metric`.
    pub fn new(algebra: LieAlgebra<S>, j: ComplexStructure<S>, metric: Matrix<S>) -> Result<Self> {
        if metric.len() != DIM || metric.iter().any(|r| r.len() != DIM) {
            return Err(Error::Input(format!("metric must be {DIM}x{DIM}")));
        }
        for i in 0..DIM {
            for k in i + 1..DIM {
                if !(metric[i][k].clone() - metric[k][i].clone()).is_zero() {
                    return Err(Error::Input("metric is not symmetric".into()));
                }
            }
        }
        let jm: Matrix<S> = j.vector_matrix().iter().map(|r| r.to_vec()).collect();
        let pulled = mat_mul(&transpose(&jm), &mat_mul(&metric, &jm));
        for i in 0..DIM {
            for k in 0..DIM {
                if !(pulled[i][k].clone() - metric[i][k].clone()).is_zero() {
                    return Err(Error::NotCompatible);
                }
            }
        }
        if let Err(k) = positive_definite(&metric) {
            return Err(Error::Positivity(format!("metric is not positive definite (leading minor {})", k + 1)));
        }
        let fundamental = fundamental_from_metric(&metric, j.vector_matrix());
        Ok(HermitianStructure { algebra, j, metric, fundamental })
    }

    /// From the fundamental form, via g(X,Y) = −F(X,JY).
    pub fn from_fundamental(algebra: LieAlgebra<S>, j: ComplexStructure<S>, f: &Form<S>) -> Result<Self> {
        if f.degree() != 2 || !f.is_real() {
            return Err(Error::Input("fundamental form must be a real 2-form".into()));
        }
        if j.pullback(f) != *f {
            return Err(Error::NotCompatible);
        }
        let jv = j.vector_matrix();
        let fm: Vec<Vec<S>> = (1..=DIM).map(|a| (1..=DIM).map(|b| f.coeff(&[a, b]).re).collect()).collect();
        let metric: Matrix<S> = (0..DIM)
            .map(|a| {
                (0..DIM)
                    .map(|b| (0..DIM).fold(S::zero(), |acc, m| acc - fm[a][m].clone() * jv[m][b].clone()))
                    .collect()
            })
            .collect();
        HermitianStructure::new(algebra, j, metric)
    }

    /// Adapted J and the identity metric: F = e12 + e34 + e56.
    pub fn adapted(algebra: LieAlgebra<S>) -> Self {
        HermitianStructure::new(algebra, ComplexStructure::adapted(), identity(DIM))
            .expect("identity metric is compatible with the adapted J")
    }

    pub fn algebra(&self) -> &LieAlgebra<S> {
        &self.algebra
    }

    pub fn complex_structure(&self) -> &ComplexStructure<S> {
        &self.j
    }

    pub fn metric(&self) -> &Matrix<S> {
        &self.metric
    }

    pub fn fundamental(&self) -> &Form<S> {
        &self.fundamental
    }

    /// g(x, y).
    pub fn inner(&self, x: &Vector<S>, y: &Vector<S>) -> S {
        let mut acc = S::zero();
        for i in 0..DIM {
            if x[i].is_zero() {
                continue;
            }
            for k in 0..DIM {
                if !y[k].is_zero() {
                    acc = acc + x[i].clone() * self.metric[i][k].clone() * y[k].clone();
                }
            }
        }
        acc
    }

    /// Adapted J with the identity metric: the frame is orthonormal and adapted.
    pub fn is_adapted_frame(&self) -> bool {
        self.j.is_adapted()
            && (0..DIM).all(|i| {
                (0..DIM).all(|k| {
                    let target = if i == k { S::one() } else { S::zero() };
                    (self.metric[i][k].clone() - target).is_zero()
                })
            })
    }

    /// The (3,0)-form built from the reduced (1,0)-coframe; in an adapted frame this is
    /// (e1 + i e2)∧(e3 + i e4)∧(e5 + i e6).
    pub fn psi(&self) -> Form<S> {
        wedge3(&self.j.holomorphic_coframe())
    }

    pub fn balanced_check(&self) -> Result<Balanced<S>> {
        if !self.j.is_integrable(&self.algebra) {
            return Err(Error::NotIntegrable);
        }
        let residual = self.fundamental.wedge(&self.algebra.d(&self.fundamental));
        Ok(Balanced { balanced: residual.is_zero(), residual })
    }

    /// T = J dF.
    pub fn torsion(&self) -> Form<S> {
        self.j.pullback(&self.algebra.d(&self.fundamental))
    }

    /// Re-express the structure in the frame f_a = Σ_i p[i][a] e_i.
    pub fn change_frame(&self, p: &Matrix<S>) -> Result<Self> {
        let q = inverse(p).ok_or_else(|| Error::Singular("frame change".into()))?;
        // e^i = Σ_a p[i][a] f^a, f^a = Σ_i q[a][i] e^i
        let images: Vec<Form<S>> = (0..DIM).map(|i| linear_form(&p[i])).collect();
        let de = (0..DIM)
            .map(|a| {
                let da = (0..DIM).fold(Form::zero(2), |acc, i| {
                    if q[a][i].is_zero() {
                        acc
                    } else {
                        acc + self.algebra.de(i + 1).scale_real(&q[a][i])
                    }
                });
                da.substitute(&images)
            })
            .collect();
        let algebra = LieAlgebra::new(de)?;
        let jm: Matrix<S> = self.j.vector_matrix().iter().map(|r| r.to_vec()).collect();
        let j = ComplexStructure::from_vector_matrix(to_mat6(&mat_mul(&q, &mat_mul(&jm, p))))?;
        let metric = mat_mul(&transpose(p), &mat_mul(&self.metric, p));
        HermitianStructure::new(algebra, j, metric)
    }

    /// An orthonormal frame adapted to (J, g), by Gram–Schmidt on e_1..e_6 taking pairs
    /// (v, −Jv). Returns the structure in that frame and the frame matrix (columns).
    pub fn adapted_frame(&self) -> Result<(Self, Matrix<S>)> {
        if self.is_adapted_frame() {
            return Ok((self.clone(), identity(DIM)));
        }
        let mut frame: Vec<Vector<S>> = Vec::new();
        for c in 1..=DIM {
            if frame.len() == DIM {
                break;
            }
            let mut v = unit_vec::<S>(c);
            for f in &frame {
                let k = self.inner(&v, f);
                if !k.is_zero() {
                    v = std::array::from_fn(|i| v[i].clone() - k.clone() * f[i].clone());
                }
            }
            let n2 = self.inner(&v, &v);
            if n2.is_zero() {
                continue;
            }
            let n = n2.sqrt().ok_or_else(|| {
                Error::Domain(format!("normalizing the adapted frame needs sqrt({n2}); use the float backend"))
            })?;
            let f1: Vector<S> = std::array::from_fn(|i| v[i].clone() / n.clone());
            let jf = self.j.apply(&f1);
            let f2: Vector<S> = std::array::from_fn(|i| -jf[i].clone());
            frame.push(f1);
            frame.push(f2);
        }
        let p: Matrix<S> = (0..DIM).map(|i| (0..DIM).map(|a| frame[a][i].clone()).collect()).collect();
        let moved = self.change_frame(&p)?;
        if !moved.is_adapted_frame() {
            return Err(Error::NotAdapted);
        }
        // drop rounding residue in J and g
        Ok((HermitianStructure::adapted(moved.algebra), p))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> HermitianStructure<T> {
        HermitianStructure::new(
            self.algebra.map(f),
            self.j.map(f),
            self.metric.iter().map(|r| r.iter().map(f).collect()).collect(),
        )
        .expect("a change of backend preserves compatibility")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.algebra.to_json(),
            "salamon": self.algebra.to_salamon(),
            "j": self.j.to_json(),
            "metric": self.metric.iter().map(|r| r.iter().map(|x| x.to_plain_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "fundamental": self.fundamental.to_text(),
        })
    }
}

fn linear_form<S: Scalar>(coeffs: &[S]) -> Form<S> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(Form::zero(1), |f, (i, c)| f + Form::term(&[i + 1], re(c.clone())))
}

#[derive(Clone, Debug)]
pub struct Balanced<S> {
    pub balanced: bool,
    /// F∧dF.
    pub residual: Form<S>,
}

/// Coefficients of 2F = i(r²ω11̄ + s²ω22̄ + t²ω33̄) + uω12̄ − ūω21̄ + vω23̄ − v̄ω32̄ + zω13̄ − z̄ω31̄.
#[derive(Clone, Debug)]
pub struct HermitianCoeffs<S> {
    pub r2: S,
    pub s2: S,
    pub t2: S,
    pub u: C<S>,
    pub v: C<S>,
    pub z: C<S>,
}

impl<S: Scalar> HermitianCoeffs<S> {
    pub fn diagonal(r2: S, s2: S, t2: S) -> Self {
        HermitianCoeffs { r2, s2, t2, u: C::zero(), v: C::zero(), z: C::zero() }
    }

    /// The conditions for g to be positive definite, each named on failure.
    pub fn check_positivity(&self) -> Result<()> {
        let n2 = |c: &C<S>| c.norm_sqr();
        let fail = |name: &str| Err(Error::Positivity(name.to_string()));
        for (x, name) in [(&self.r2, "r² > 0"), (&self.s2, "s² > 0"), (&self.t2, "t² > 0")] {
            if !x.is_positive() {
                return fail(name);
            }
        }
        let (r2, s2, t2) = (self.r2.clone(), self.s2.clone(), self.t2.clone());
        if !(r2.clone() * s2.clone() - n2(&self.u)).is_positive() {
            return fail("r²s² > |u|²");
        }
        if !(s2.clone() * t2.clone() - n2(&self.v)).is_positive() {
            return fail("s²t² > |v|²");
        }
        if !(r2.clone() * t2.clone() - n2(&self.z)).is_positive() {
            return fail("r²t² > |z|²");
        }
        let cross = (imag_unit::<S>() * self.u.conj() * self.v.conj() * self.z.clone()).re;
        let lhs = r2.clone() * s2.clone() * t2.clone() + cross.clone() + cross;
        let rhs = t2 * n2(&self.u) + r2 * n2(&self.v) + s2 * n2(&self.z);
        if !(lhs - rhs).is_positive() {
            return fail("r²s²t² + 2Re(i ū v̄ z) > t²|u|² + r²|v|² + s²|z|²");
        }
        Ok(())
    }

    /// F in terms of a (1,0)-basis.
    pub fn fundamental(&self, w: &[Form<S>; 3]) -> Form<S> {
        let i = imag_unit::<S>();
        let wb: Vec<Form<S>> = w.iter().map(|x| x.conj()).collect();
        let m = |a: usize, b: usize| w[a].wedge(&wb[b]);
        let two_f = (m(0, 0).scale_real(&self.r2) + m(1, 1).scale_real(&self.s2) + m(2, 2).scale_real(&self.t2))
            .scale(&i)
            + m(0, 1).scale(&self.u)
            - m(1, 0).scale(&self.u.conj())
            + m(1, 2).scale(&self.v)
            - m(2, 1).scale(&self.v.conj())
            + m(0, 2).scale(&self.z)
            - m(2, 0).scale(&self.z.conj());
        two_f.scale_real(&S::half())
    }
}

/// The Hermitian structure whose J has (1,0)-basis `basis` and whose F has the given coefficients.
pub fn build_hermitian<S: Scalar>(
    algebra: LieAlgebra<S>,
    basis: &[Form<S>; 3],
    coeffs: &HermitianCoeffs<S>,
) -> Result<HermitianStructure<S>> {
    coeffs.check_positivity()?;
    let j = ComplexStructure::from_holomorphic_coframe(basis)?;
    let f = coeffs.fundamental(basis);
    HermitianStructure::from_fundamental(algebra, j, &f)
}

/// The standard (1,0)-basis ω^j = e^{2j−1} + i e^{2j}.
pub fn standard_coframe<S: Scalar>() -> [Form<S>; 3] {
    [omega(1), omega(2), omega(3)]
}

/// ω^j ∧ ω̄^k for the standard coframe (1-based).
pub fn omega_mixed<S: Scalar>(j: usize, k: usize) -> Form<S> {
    omega::<S>(j).wedge(&omega_bar(k))
}

/// The canonical balanced families, plus two auxiliary structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    F214,
    F215,
    F216,
    F217,
    F218,
    /// Deformation I_λ of an abelian structure on h5 with the diagonal balanced metric.
    Deformed,
    /// Abelian balanced structure on a solvable non-nilpotent algebra.
    Solvable,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::F214, Family::F215, Family::F216, Family::F217, Family::F218, Family::Deformed, Family::Solvable];

    pub fn name(self) -> &'static str {
        match self {
            Family::F214 => "F214",
            Family::F215 => "F215",
            Family::F216 => "F216",
            Family::F217 => "F217",
            Family::F218 => "F218",
            Family::Deformed => "DEF",
            Family::Solvable => "SOLV",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name().eq_ignore_ascii_case(s))
    }

    /// Parameter names accepted by the family.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Family::F214 => &["t"],
            Family::F215 => &["rho", "b2", "s", "t"],
            Family::F216 => &["rho", "b2", "s", "t", "u"],
            Family::F217 => &["r", "s", "sign"],
            Family::F218 => &["r", "s", "t", "sign"],
            Family::Deformed => &["lambda"],
            Family::Solvable => &[],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family tag with its parameters. `b2` holds b² (the parameter only enters squared).
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyDescriptor<S> {
    pub family: Family,
    pub rho: u8,
    pub b2: S,
    pub s: S,
    pub t: S,
    pub u: (S, S),
    pub r: S,
    pub sign: i8,
    pub lambda: S,
}

impl<S: Scalar> FamilyDescriptor<S> {
    /// Defaults: ρ = 0, b² = 0, s = t = r = 1, u = 0, sign +, λ = 0.
    pub fn new(family: Family) -> Self {
        FamilyDescriptor {
            family,
            rho: 0,
            b2: S::zero(),
            s: S::one(),
            t: S::one(),
            u: (S::zero(), S::zero()),
            r: S::one(),
            sign: 1,
            lambda: S::zero(),
        }
    }

    pub fn rho(mut self, rho: u8) -> Self {
        self.rho = rho;
        self
    }
    pub fn b2(mut self, b2: S) -> Self {
        self.b2 = b2;
        self
    }
    pub fn s(mut self, s: S) -> Self {
        self.s = s;
        self
    }
    pub fn t(mut self, t: S) -> Self {
        self.t = t;
        self
    }
    pub fn u(mut self, u1: S, u2: S) -> Self {
        self.u = (u1, u2);
        self
    }
    pub fn r(mut self, r: S) -> Self {
        self.r = r;
        self
    }
    pub fn sign(mut self, sign: i8) -> Self {
        self.sign = sign;
        self
    }
    pub fn lambda(mut self, lambda: S) -> Self {
        self.lambda = lambda;
        self
    }

    /// Parse {"family":"F216","rho":0,"delta":1,"s":"5","u":["0","3"],"t":"1"}.
    /// b may be given as "b" (squared here), "b2" or "delta".
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: String| Error::Input(format!("family descriptor: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object".into()))?;
        let name = obj.get("family").and_then(|x| x.as_str()).ok_or_else(|| bad("missing \"family\"".into()))?;
        let family = Family::from_name(name).ok_or_else(|| bad(format!("unknown family {name:?}")))?;
        let num = |key: &str, x: &Value| -> Result<S> {
            match x {
                Value::String(s) => S::parse(s).map_err(|e| bad(format!("{key}: {e}"))),
                Value::Number(n) if n.is_i64() => Ok(S::from_int(n.as_i64().unwrap())),
                _ => Err(bad(format!("{key}: rationals must be strings"))),
            }
        };
        let mut d = FamilyDescriptor::new(family);
        for (key, x) in obj {
            match key.as_str() {
                "family" | "schema" => {}
                "rho" => d.rho = zero_one(&num(key, x)?).ok_or_else(|| bad("rho must be 0 or 1".into()))?,
                "delta" => {
                    let delta = zero_one(&num(key, x)?).ok_or_else(|| bad("delta must be 0 or 1".into()))?;
                    d.b2 = S::from_int(delta as i64);
                }
                "b" => {
                    let b = num(key, x)?;
                    d.b2 = b.clone() * b;
                }
                "b2" => d.b2 = num(key, x)?,
                "s" => d.s = num(key, x)?,
                "t" => d.t = num(key, x)?,
                "r" => d.r = num(key, x)?,
                "lambda" => d.lambda = num(key, x)?,
                "u" => {
                    let arr = x.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("u must be [u1, u2]".into()))?;
                    d.u = (num("u1", &arr[0])?, num("u2", &arr[1])?);
                }
                "sign" => {
                    d.sign = match x {
                        Value::String(s) if s == "+" => 1,
                        Value::String(s) if s == "-" => -1,
                        Value::Number(n) if n.as_i64() == Some(1) => 1,
                        Value::Number(n) if n.as_i64() == Some(-1) => -1,
                        _ => return Err(bad("sign must be \"+\" or \"-\"".into())),
                    }
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(d)
    }

    /// Only the parameters the family uses.
    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("family".into(), self.family.name().into());
        for p in self.family.parameters() {
            let v: Value = match *p {
                "rho" => self.rho.into(),
                "b2" => self.b2.to_plain_string().into(),
                "s" => self.s.to_plain_string().into(),
                "t" => self.t.to_plain_string().into(),
                "r" => self.r.to_plain_string().into(),
                "u" => json!([self.u.0.to_plain_string(), self.u.1.to_plain_string()]),
                "sign" => (if self.sign < 0 { "-" } else { "+" }).into(),
                "lambda" => self.lambda.to_plain_string().into(),
                _ => unreachable!(),
            };
            m.insert((*p).into(), v);
        }
        Value::Object(m)
    }

    /// Short human-readable parameter list.
    pub fn summary(&self) -> String {
        let v = self.to_json();
        let obj = v.as_object().unwrap();
        let parts: Vec<String> = self
            .family
            .parameters()
            .iter()
            .map(|p| {
                let x = &obj[*p];
                let s = match x {
                    Value::String(s) => s.clone(),
                    Value::Array(a) => format!("({},{})", a[0].as_str().unwrap(), a[1].as_str().unwrap()),
                    other => other.to_string(),
                };
                format!("{p}={s}")
            })
            .collect();
        format!("{} {}", self.family, parts.join(" ")).trim_end().to_string()
    }

    /// |u|, requiring an exact square root on the exact backend.
    fn u_norm(&self) -> Result<S> {
        let n2 = self.u.0.clone() * self.u.0.clone() + self.u.1.clone() * self.u.1.clone();
        n2.sqrt().ok_or_else(|| Error::Domain(format!("|u| = sqrt({n2}) is irrational; use the float backend")))
    }

    /// Per-family validity domain; each violation is named.
    pub fn validate(&self) -> Result<()> {
        let dom = |m: &str| Err(Error::Domain(m.to_string()));
        let nz = |x: &S, name: &str| if x.is_zero() { dom(&format!("{name} ≠ 0")) } else { Ok(()) };
        if self.rho > 1 {
            return dom("rho ∈ {0, 1}");
        }
        if self.sign != 1 && self.sign != -1 {
            return dom("sign ∈ {+, -}");
        }
        match self.family {
            Family::F214 => nz(&self.t, "t"),
            Family::F215 => {
                nz(&self.s, "s")?;
                nz(&self.t, "t")?;
                if self.b2.is_negative() {
                    return dom("b² ≥ 0");
                }
                Ok(())
            }
            Family::F216 => {
                nz(&self.t, "t")?;
                if self.b2.is_negative() {
                    return dom("b² ≥ 0");
                }
                let n2 = self.u.0.clone() * self.u.0.clone() + self.u.1.clone() * self.u.1.clone();
                if !n2.is_positive() {
                    return dom("|u|² > 0");
                }
                if !(self.s.clone() * self.s.clone() - n2).is_positive() {
                    return dom("s² > |u|²");
                }
                Ok(())
            }
            Family::F217 => {
                nz(&self.r, "r")?;
                nz(&self.s, "s")
            }
            Family::F218 => {
                nz(&self.r, "r")?;
                nz(&self.s, "s")?;
                nz(&self.t, "t")?;
                let st = self.s.clone() * self.t.clone();
                if !(st.clone() * st - S::one()).is_positive() {
                    return dom("s²t² > 1");
                }
                Ok(())
            }
            Family::Deformed => {
                if self.lambda.is_negative() || !(S::one() - self.lambda.clone()).is_positive() {
                    return dom("0 ≤ λ < 1");
                }
                Ok(())
            }
            Family::Solvable => Ok(()),
        }
    }

    /// The complex type the family is known to carry.
    pub fn expected_type(&self) -> ComplexType {
        match self.family {
            Family::F214 => ComplexType::ComplexParallelizable,
            Family::F215 | Family::F216 if self.rho == 1 => ComplexType::NilpotentNonAbelian,
            Family::F215 | Family::F216 => ComplexType::Abelian,
            Family::F217 | Family::F218 => ComplexType::NonNilpotent,
            Family::Deformed if self.lambda.is_zero() => ComplexType::Abelian,
            Family::Deformed => ComplexType::NilpotentNonAbelian,
            Family::Solvable => ComplexType::Abelian,
        }
    }

    /// Name of the underlying algebra from the complex-equation data.
    pub fn expected_algebra(&self) -> &'static str {
        let (u1, u2) = self.u.clone();
        let s2 = self.s.clone() * self.s.clone();
        match self.family {
            Family::F214 | Family::Deformed => "h5",
            Family::F215 => classify_underlying_algebra(self.rho, &self.b2, &-s2, &S::zero()).name(),
            Family::F216 => {
                let x = u2 * self.b2.clone() - s2;
                let y = u1 * self.b2.clone();
                classify_underlying_algebra(self.rho, &self.b2, &x, &y).name()
            }
            Family::F217 | Family::F218 => "h19-",
            Family::Solvable => "solvable",
        }
    }
}

fn zero_one<S: Scalar>(x: &S) -> Option<u8> {
    if x.is_zero() {
        Some(0)
    } else if x.is_one() {
        Some(1)
    } else {
        None
    }
}

/// Build the structure named by a descriptor. Families F214–F218 and SOLV come in an adapted
/// orthonormal frame; DEF comes in its natural frame with a diagonal metric.
pub fn build_family<S: Scalar>(d: &FamilyDescriptor<S>) -> Result<HermitianStructure<S>> {
    d.validate()?;
    let n = S::from_int;
    let blade = |i: usize, j: usize, c: S| Form::term(&[i, j], re(c));
    let mut de: Vec<Form<S>> = vec![Form::zero(2); DIM];
    let (s, t, r) = (d.s.clone(), d.t.clone(), d.r.clone());
    let rho = S::from_int(d.rho as i64);
    let b2 = d.b2.clone();
    let sign = S::from_int(d.sign as i64);
    match d.family {
        Family::F214 => {
            de[4] = blade(1, 3, t.clone()) - blade(2, 4, t.clone());
            de[5] = blade(1, 4, t.clone()) + blade(2, 3, t);
        }
        Family::F215 => {
            let q = t.clone() / s;
            let plus = q.clone() * (rho.clone() + b2.clone());
            let minus = q * (rho - b2);
            de[4] = blade(1, 3, plus.clone()) - blade(2, 4, minus.clone());
            let two_t = n(2) * t;
            de[5] = blade(3, 4, two_t.clone()) - blade(1, 2, two_t) + blade(1, 4, minus) + blade(2, 3, plus);
        }
        Family::F216 => {
            let (u1, u2) = d.u.clone();
            let un = d.u_norm()?;
            let root = (s.clone() * s.clone() - un.clone() * un.clone()).sqrt().ok_or_else(|| {
                Error::Domain("sqrt(s² − |u|²) is irrational; use the float backend".into())
            })?;
            let y = n(2) * root / (un.clone() * t.clone());
            let m = s.clone() * y.clone();
            let e12_34 = blade(1, 2, S::one()) - blade(3, 4, S::one());
            let e13p24 = blade(1, 3, S::one()) + blade(2, 4, S::one());
            let e13m24 = blade(1, 3, S::one()) - blade(2, 4, S::one());
            let mixed = blade(1, 4, rho.clone() - b2.clone()) + blade(2, 3, rho.clone() + b2.clone());
            let five = e12_34.scale_real(&(n(2) * b2.clone() * u1.clone() * un.clone()))
                - e13p24.scale_real(&(b2.clone() * t.clone() * u1.clone() * un.clone() * y.clone()))
                + e13m24.scale_real(&(n(2) * rho.clone() * s.clone() * u1.clone()))
                + mixed.scale_real(&(n(2) * s.clone() * u2.clone()));
            let six = e12_34.scale_real(&(n(2) * (n(2) * s.clone() * s.clone() - b2.clone() * u2.clone()) * un.clone()))
                + e13p24.scale_real(&(b2 * t * u2.clone() * un * y))
                - e13m24.scale_real(&(n(2) * rho * s.clone() * u2))
                + mixed.scale_real(&(n(2) * s * u1));
            de[4] = five.scale_real(&m);
            de[5] = six.scale_real(&m);
        }
        Family::F217 => {
            let a = n(2) * s.clone() / r.clone();
            de[2] = blade(1, 5, a.clone());
            de[3] = blade(2, 5, a);
            let c = sign * n(2) / (r * s);
            de[5] = blade(1, 3, c.clone()) + blade(2, 4, c);
        }
        Family::F218 => {
            let st = s.clone() * t.clone();
            let z = (st.clone() * st.clone() - S::one())
                .sqrt()
                .ok_or_else(|| Error::Domain("Z = sqrt(s²t² − 1) is irrational; use the float backend".into()))?;
            let w = st + z.clone();
            let winv = S::one() / w.clone();
            let c = s.clone() / (r * t.clone() * z);
            let q = sign * t.clone() * t / (s.clone() * s);
            let e13p24 = blade(1, 3, S::one()) + blade(2, 4, S::one());
            let e25m16 = blade(2, 5, S::one()) - blade(1, 6, S::one());
            de[2] = (e13p24.scale_real(&q) + e25m16.scale_real(&(q.clone() * w.clone())) + blade(1, 4, S::one())
                + blade(1, 5, winv.clone()))
            .scale_real(&c);
            de[3] = (blade(2, 4, S::one()) + blade(2, 5, winv.clone())).scale_real(&c);
            de[4] = (blade(2, 4, w.clone()) + blade(2, 5, S::one())).scale_real(&-c.clone());
            de[5] = (e13p24.scale_real(&(q.clone() * winv)) + e25m16.scale_real(&q) + blade(1, 4, w)
                + blade(1, 5, S::one()))
            .scale_real(&c);
        }
        Family::Deformed => return deformed_iwasawa(&d.lambda),
        Family::Solvable => return Ok(HermitianStructure::adapted(Preset::Solvable.algebra())),
    }
    Ok(HermitianStructure::adapted(LieAlgebra::checked(de)?))
}

/// k = (λ+1)/(λ−1) for the deformed structure.
fn deform_k<S: Scalar>(lambda: &S) -> S {
    (lambda.clone() + S::one()) / (lambda.clone() - S::one())
}

/// The complex structure I_λ on h5: Je¹ = −e², Je³ = −k e⁴, Je⁵ = −e⁶ with k = (λ+1)/(λ−1).
pub fn deformed_complex_structure<S: Scalar>(lambda: &S) -> Result<ComplexStructure<S>> {
    let k = deform_k(lambda);
    let mut a: Mat6<S> = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
    a[0][1] = -S::one();
    a[1][0] = S::one();
    a[2][3] = -k.clone();
    a[3][2] = S::one() / k;
    a[4][5] = -S::one();
    a[5][4] = S::one();
    ComplexStructure::from_form_matrix(a)
}

/// (h5, I_λ) with the diagonal metric
/// (e¹)² + (e²)² + ((1−λ)/(1+λ))(e³)² + ((1+λ)/(1−λ))(e⁴)² + (1+λ)((e⁵)² + (e⁶)²).
pub fn deformed_iwasawa<S: Scalar>(lambda: &S) -> Result<HermitianStructure<S>> {
    let one = S::one();
    let (p, m) = (one.clone() + lambda.clone(), one.clone() - lambda.clone());
    let diag = [one.clone(), one, m.clone() / p.clone(), p.clone() / m, p.clone(), p];
    HermitianStructure::new(Preset::H5.algebra(), deformed_complex_structure(lambda)?, diagonal(&diag))
}

/// The diagonal metric with equal weights √((1+λ)/(1−λ)) on (e³)² and (e⁴)²; compatible with
/// I_λ only at λ = 0.
pub fn deformed_equal_weight_metric<S: Scalar>(lambda: &S) -> Result<Matrix<S>> {
    let one = S::one();
    let ratio = (one.clone() + lambda.clone()) / (one.clone() - lambda.clone());
    let w = ratio.sqrt().ok_or_else(|| Error::Domain(format!("sqrt({ratio}) is irrational; use the float backend")))?;
    let p = one.clone() + lambda.clone();
    Ok(diagonal(&[one.clone(), one, w.clone(), w, p.clone(), p]))
}

pub fn diagonal<S: Scalar>(d: &[S]) -> Matrix<S> {
    (0..d.len()).map(|i| (0..d.len()).map(|k| if i == k { d[i].clone() } else { S::zero() }).collect()).collect()
}

/// Nilpotent algebras reachable from dω¹ = dω² = 0, dω³ = ρω¹² + ω¹¹̄ + b²ω¹²̄ + (x+iy)ω²²̄.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraClass {
    H2,
    H3,
    H4,
    H5,
    H6,
    /// Carries no balanced structure.
    H8,
}

impl AlgebraClass {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraClass::H2 => "h2",
            AlgebraClass::H3 => "h3",
            AlgebraClass::H4 => "h4",
            AlgebraClass::H5 => "h5",
            AlgebraClass::H6 => "h6",
            AlgebraClass::H8 => "h8",
        }
    }

    pub fn admits_balanced(self) -> bool {
        self != AlgebraClass::H8
    }
}

/// Case table on (ρ, b², x, y): with b² = ρ it is decided by which of x, y vanish; otherwise by
/// the sign of 4y² − (ρ − b⁴)(4x + ρ − b⁴).
pub fn classify_underlying_algebra<S: Scalar>(rho: u8, b2: &S, x: &S, y: &S) -> AlgebraClass {
    let rho_s = S::from_int(rho as i64);
    if (b2.clone() - rho_s.clone()).is_zero() {
        return if !y.is_zero() {
            AlgebraClass::H2
        } else if !x.is_zero() {
            if rho == 0 {
                AlgebraClass::H3
            } else {
                AlgebraClass::H4
            }
        } else if rho == 1 {
            AlgebraClass::H6
        } else {
            AlgebraClass::H8
        };
    }
    let b4 = b2.clone() * b2.clone();
    let disc = S::from_int(4) * y.clone() * y.clone()
        - (rho_s.clone() - b4.clone()) * (S::from_int(4) * x.clone() + rho_s - b4);
    if disc.is_zero() {
        AlgebraClass::H4
    } else if disc.is_positive() {
        AlgebraClass::H2
    } else {
        AlgebraClass::H5
    }
}

/// Outcome of checking a candidate map between two Hermitian structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    /// A* commutes with d.
    pub lie_isomorphism: bool,
    pub intertwines_j: bool,
    /// A*F′ = F.
    pub pulls_back_fundamental: bool,
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        self.lie_isomorphism && self.intertwines_j && self.pulls_back_fundamental
    }
}

/// Check that A*, given by A*(e′^k) = Σ_i a[k][i] e^i, maps (J′, F′) on the second algebra to
/// (J, F) on the first.
pub fn verify_equivalence<S: Scalar>(
    h: &HermitianStructure<S>,
    h2: &HermitianStructure<S>,
    a: &Matrix<S>,
) -> Result<Equivalence> {
    if inverse(a).is_none() {
        return Err(Error::Singular("equivalence map".into()));
    }
    let images: Vec<Form<S>> = (0..DIM).map(|k| linear_form(&a[k])).collect();
    let lie_isomorphism = (1..=DIM).all(|k| h2.algebra.de(k).substitute(&images) == h.algebra.d(&images[k - 1]));
    let intertwines_j = (1..=DIM).all(|k| h2.j.j_form(k).substitute(&images) == h.j.pullback(&images[k - 1]));
    let pulls_back_fundamental = h2.fundamental.substitute(&images) == h.fundamental;
    Ok(Equivalence { lie_isomorphism, intertwines_j, pulls_back_fundamental })
}

/// Real matrix of A* from complex images of the standard coframe: A*(ω′^j) = images[j].
pub fn pullback_matrix_from_coframe<S: Scalar>(images: &[Form<S>; 3]) -> Matrix<S> {
    let mut a = vec![vec![S::zero(); DIM]; DIM];
    for (j, w) in images.iter().enumerate() {
        for i in 0..DIM {
            let c = w.coeff(&[i + 1]);
            a[2 * j][i] = c.re;
            a[2 * j + 1][i] = c.im;
        }
    }
    a
}

/// The balanced structure dω³ = ω¹¹̄ − ω²²̄, 2F = i(ω¹¹̄ + ω²²̄ + t²ω³³̄) + uω¹²̄ − ūω²¹̄ (|u| < 1),
/// together with its diagonal normal form (u = 0, t′² = t²/|a₃₃|²) and the map between them.
pub fn h3_normal_form<S: Scalar>(
    u: &C<S>,
    t2: &S,
) -> Result<(HermitianStructure<S>, HermitianStructure<S>, Matrix<S>)> {
    let one = S::one();
    let n2 = u.norm_sqr();
    let w = (one.clone() - n2.clone())
        .sqrt()
        .ok_or_else(|| Error::Domain("sqrt(1 − |u|²) is unavailable".into()))?;
    let half_sum = (one.clone() + w.clone()) * S::half();
    let a11 = half_sum.sqrt().ok_or_else(|| Error::Domain("a11 needs a square root; use the float backend".into()))?;
    let a12 = imag_unit::<S>() * u.conj() * re(S::half() / a11.clone());
    let a33 = (one.clone() - n2 + w.clone()) / (one + w);
    let dw3 = omega_mixed::<S>(1, 1) - omega_mixed(2, 2);
    let algebra = LieAlgebra::from_complex_equations(&[Form::zero(2), Form::zero(2), dw3])?;
    let basis = standard_coframe::<S>();
    let generic = HermitianCoeffs { r2: S::one(), s2: S::one(), t2: t2.clone(), u: u.clone(), v: C::zero(), z: C::zero() };
    let h = build_hermitian(algebra.clone(), &basis, &generic)?;
    let t2_new = t2.clone() / (a33.clone() * a33.clone());
    let h2 = build_hermitian(algebra, &basis, &HermitianCoeffs::diagonal(S::one(), S::one(), t2_new))?;
    let sigma = [
        omega::<S>(1).scale(&re(a11.clone())) + omega::<S>(2).scale(&a12),
        omega::<S>(1).scale(&a12.conj()) + omega::<S>(2).scale(&re(a11)),
        omega::<S>(3).scale_real(&a33),
    ];
    Ok((h, h2, pullback_matrix_from_coframe(&sigma)))
}

/// Complex-equation data for the nilpotent normal form with given (ρ, b², x, y).
pub fn nilpotent_normal_algebra<S: Scalar>(rho: u8, b2: &S, x: &S, y: &S) -> Result<LieAlgebra<S>> {
    let w12 = omega::<S>(1).wedge(&omega(2));
    let dw3 = w12.scale_real(&S::from_int(rho as i64))
        + omega_mixed(1, 1)
        + omega_mixed(1, 2).scale_real(b2)
        + omega_mixed(2, 2).scale(&C::new(x.clone(), y.clone()));
    LieAlgebra::from_complex_equations(&[Form::zero(2), Form::zero(2), dw3])
}
