//! The eight types of Real graded elementary algebras as finite-dimensional
//! graded matrix algebras, their graded tensor product, and classification.
//!
//! A model is a graded `*`-subalgebra `A` of `M_N(C)` with grading operator
//! `Γ` and Real structure `σ(x) = U x̄ U*`.

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

/// Largest underlying space dimension a model may have.
pub const MAX_SPACE_DIM: usize = 16;
/// Tolerance for identities that hold exactly in exact arithmetic.
pub const TOLERANCE: f64 = 1e-6;
/// Sign reads require quantities at least this far from zero.
const SIGN_FLOOR: f64 = 0.5;
/// Gram eigenvalues below this (relative) count as zero.
const NULL_THRESHOLD: f64 = 1e-9;

/// `(parity, ε or i, sign)` per type, indexed by `p`.
const DESCRIPTORS: [(u8, u8, i8); 8] = [
    (0, 0, 1),
    (1, 0, 1),
    (0, 1, 1),
    (1, 1, -1),
    (0, 0, -1),
    (1, 0, -1),
    (0, 1, -1),
    (1, 1, 1),
];

/// `[parity; ε, η]` for even types, `[parity; i, ε]` for odd types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TypeDescriptor {
    pub parity: u8,
    pub index: u8,
    pub sign: i8,
}

impl fmt::Display for TypeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "[{};{},{}]", self.parity, self.index, s)
    }
}

/// An element of `Z8` labelling a type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeIndex(u8);

impl TypeIndex {
    pub fn new(p: i64) -> Self {
        TypeIndex(p.rem_euclid(8) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn descriptor(self) -> TypeDescriptor {
        let (parity, index, sign) = DESCRIPTORS[self.0 as usize];
        TypeDescriptor { parity, index, sign }
    }

    pub fn from_descriptor(d: TypeDescriptor) -> Option<Self> {
        DESCRIPTORS
            .iter()
            .position(|&(p, i, s)| p == d.parity && i == d.index && s == d.sign)
            .map(|p| TypeIndex(p as u8))
    }

    pub fn add(self, other: TypeIndex) -> TypeIndex {
        TypeIndex((self.0 + other.0) % 8)
    }
}

impl fmt::Display for TypeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{} = {}", self.0, self.descriptor())
    }
}

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

fn real_matrix(n: usize, entries: &[f64]) -> CMat {
    CMat::from_row_iterator(n, n, entries.iter().map(|&x| c(x, 0.0)))
}

fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

fn inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = c(1.0, 0.0);
    m
}

/// Orthonormal homogeneous basis of a graded subalgebra.
#[derive(Clone, Debug)]
pub struct HomogeneousBasis {
    pub even: Vec<CMat>,
    pub odd: Vec<CMat>,
}

impl HomogeneousBasis {
    pub fn dim(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn all(&self) -> impl Iterator<Item = &CMat> {
        self.even.iter().chain(&self.odd)
    }

    fn residual(&self, x: &CMat) -> f64 {
        let mut r = x.clone();
        for b in self.all() {
            let coef = inner(b, x);
            r.zip_apply(b, |v, y| *v -= coef * y);
        }
        r.norm()
    }
}

/// Adds `x` to an orthonormal list if it is not already in the span.
fn extend_orthonormal(basis: &mut Vec<CMat>, x: &CMat) -> bool {
    let scale = x.norm();
    if scale < NULL_THRESHOLD {
        return false;
    }
    let mut r = x.clone();
    for _ in 0..2 {
        for b in basis.iter() {
            let coef = inner(b, &r);
            r.zip_apply(b, |x, y| *x -= coef * y);
        }
    }
    let rn = r.norm();
    if rn <= 1e-8 * scale.max(1.0) {
        return false;
    }
    basis.push(r / c(rn, 0.0));
    true
}

/// Vectors spanning the kernel of `Σ L_g* L_g`, given its Gram matrix.
fn null_vectors(gram: CMat) -> Vec<DVector<C64>> {
    let n = gram.nrows();
    if n == 0 {
        return Vec::new();
    }
    let eig = gram.symmetric_eigen();
    let top = eig.eigenvalues.iter().fold(1.0f64, |m, &v| m.max(v.abs()));
    (0..n)
        .filter(|&i| eig.eigenvalues[i].abs() < NULL_THRESHOLD * top)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect()
}

/// Gram matrix of the linear map `c ↦ Σ c_k f(b_k, g)` stacked over `g`.
fn gram_of<F>(basis: &[&CMat], gens: &[CMat], f: F) -> CMat
where
    F: Fn(&CMat, &CMat) -> CMat,
{
    let k = basis.len();
    let mut gram = CMat::zeros(k, k);
    for g in gens {
        let images: Vec<CMat> = basis.iter().map(|b| f(b, g)).collect();
        for i in 0..k {
            for j in i..k {
                let v = inner(&images[i], &images[j]);
                gram[(i, j)] += v;
                if i != j {
                    gram[(j, i)] += v.conj();
                }
            }
        }
    }
    gram
}

fn combine(basis: &[&CMat], coeffs: &DVector<C64>) -> CMat {
    let n = basis[0].nrows();
    let mut x = CMat::zeros(n, n);
    for (b, a) in basis.iter().zip(coeffs.iter()) {
        x += *b * *a;
    }
    x
}

/// A graded `*`-subalgebra of `M_N(C)` with a Real structure `Ad(U ∘ bar)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct GradedRealAlgebraModel {
    parity: u8,
    grading: CMat,
    u: CMat,
    /// `None` means the full matrix algebra.
    generators: Option<Vec<CMat>>,
}

impl GradedRealAlgebraModel {
    pub fn new(parity: u8, grading: CMat, u: CMat, generators: Option<Vec<CMat>>) -> Result<Self> {
        let m = GradedRealAlgebraModel {
            parity,
            grading,
            u,
            generators,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn space_dim(&self) -> usize {
        self.grading.nrows()
    }

    pub fn grading(&self) -> &CMat {
        &self.grading
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    pub fn generators(&self) -> Option<&[CMat]> {
        self.generators.as_deref()
    }

    pub fn is_full(&self) -> bool {
        self.generators.is_none()
    }

    /// `σ(x) = U x̄ U*`.
    pub fn sigma(&self, x: &CMat) -> CMat {
        &self.u * conj(x) * self.u.adjoint()
    }

    fn graded_parts(&self, x: &CMat) -> (CMat, CMat) {
        let flipped = &self.grading * x * &self.grading;
        let half = c(0.5, 0.0);
        ((x + &flipped) * half, (x - &flipped) * half)
    }

    /// Orthonormal homogeneous basis of the algebra.
    pub fn basis(&self) -> HomogeneousBasis {
        let n = self.space_dim();
        let mut basis = HomogeneousBasis {
            even: Vec::new(),
            odd: Vec::new(),
        };
        let mut queue = Vec::new();
        let push = |basis: &mut HomogeneousBasis, queue: &mut Vec<CMat>, x: &CMat| {
            let (e, o) = self.graded_parts(x);
            if extend_orthonormal(&mut basis.even, &e) {
                queue.push(basis.even.last().expect("pushed").clone());
            }
            if extend_orthonormal(&mut basis.odd, &o) {
                queue.push(basis.odd.last().expect("pushed").clone());
            }
        };
        match &self.generators {
            None => {
                for i in 0..n {
                    for j in 0..n {
                        push(&mut basis, &mut Vec::new(), &unit(n, i, j));
                    }
                }
            }
            Some(gens) => {
                push(&mut basis, &mut queue, &CMat::identity(n, n));
                for g in gens {
                    push(&mut basis, &mut queue, g);
                }
                while let Some(b) = queue.pop() {
                    for g in gens {
                        push(&mut basis, &mut queue, &(&b * g));
                    }
                }
            }
        }
        basis
    }

    /// A generating set: the stored generators or adjacent matrix units.
    fn generating_set(&self) -> Vec<CMat> {
        match &self.generators {
            Some(g) => g.clone(),
            None => {
                let n = self.space_dim();
                (0..n.saturating_sub(1))
                    .flat_map(|i| [unit(n, i, i + 1), unit(n, i + 1, i)])
                    .collect()
            }
        }
    }

    /// Checks shapes, unitarity, closure under `*` and `σ`, `σ² = id`,
    /// that `σ` preserves degree, and that `parity` matches the center.
    pub fn validate(&self) -> Result<()> {
        let n = self.grading.nrows();
        let bad = |m: String| Err(Error::InvalidModel(m));
        if n == 0 || self.grading.ncols() != n || self.u.shape() != (n, n) {
            return bad("grading and U must be square matrices of the same size".into());
        }
        if n > MAX_SPACE_DIM {
            return bad(format!("space dimension {n} exceeds {MAX_SPACE_DIM}"));
        }
        if self.parity > 1 {
            return bad("parity must be 0 or 1".into());
        }
        let id = CMat::identity(n, n);
        if (&self.grading * &self.grading - &id).norm() > TOLERANCE
            || (&self.grading - self.grading.adjoint()).norm() > TOLERANCE
        {
            return bad("the grading operator must be a self-adjoint involution".into());
        }
        if (&self.u * self.u.adjoint() - &id).norm() > TOLERANCE {
            return bad("U must be unitary".into());
        }
        if let Some(gens) = &self.generators {
            if gens.iter().any(|g| g.shape() != (n, n)) {
                return bad("generators must match the space dimension".into());
            }
        }
        let basis = self.basis();
        for (deg, part) in [(0, &basis.even), (1, &basis.odd)] {
            for b in part.iter() {
                if basis.residual(&b.adjoint()) > TOLERANCE {
                    return bad("the algebra is not closed under adjoints".into());
                }
                let s = self.sigma(b);
                let (e, o) = self.graded_parts(&s);
                let wrong = if deg == 0 { o } else { e };
                if wrong.norm() > TOLERANCE {
                    return bad("the Real structure does not preserve the grading".into());
                }
                if basis.residual(&s) > TOLERANCE {
                    return bad("the Real structure does not preserve the algebra".into());
                }
                if (self.sigma(&s) - b).norm() > TOLERANCE {
                    return bad("the Real structure does not square to the identity".into());
                }
            }
        }
        let parity = self.center_parity(&basis)?;
        if parity != self.parity {
            return bad(format!("declared parity {} but the center says {parity}", self.parity));
        }
        Ok(())
    }

    fn center_parity(&self, basis: &HomogeneousBasis) -> Result<u8> {
        let all: Vec<&CMat> = basis.all().collect();
        let gram = gram_of(&all, &self.generating_set(), |b, g| b * g - g * b);
        match null_vectors(gram).len() {
            1 => Ok(0),
            2 => Ok(1),
            d => Err(Error::InvalidModel(format!(
                "the algebra is not elementary: center of dimension {d}"
            ))),
        }
    }

    /// Conjugates by an even unitary `W`: `A ↦ W A W*`, `U ↦ W U Wᵀ`.
    pub fn conjugate_by(&self, w: &CMat) -> Result<Self> {
        let n = self.space_dim();
        if w.shape() != (n, n) || (w * w.adjoint() - CMat::identity(n, n)).norm() > TOLERANCE {
            return Err(Error::InvalidModel("the conjugating matrix must be unitary".into()));
        }
        if (w * &self.grading - &self.grading * w).norm() > TOLERANCE {
            return Err(Error::InvalidModel("the conjugating unitary must be even".into()));
        }
        GradedRealAlgebraModel::new(
            self.parity,
            self.grading.clone(),
            w * &self.u * w.transpose(),
            self.generators
                .as_ref()
                .map(|g| g.iter().map(|x| w * x * w.adjoint()).collect()),
        )
    }

    /// The same model with `U` replaced by `e^{iθ} U`.
    pub fn rephased(&self, theta: f64) -> Self {
        let mut m = self.clone();
        m.u *= Complex::from_polar(1.0, theta);
        m
    }

    /// The sign `s` with `U Γ̄ U* = s Γ`, if `U` is homogeneous.
    fn u_degree(&self) -> Option<u8> {
        let d = &self.u * conj(&self.grading) * self.u.adjoint();
        if (&d - &self.grading).norm() < TOLERANCE {
            Some(0)
        } else if (&d + &self.grading).norm() < TOLERANCE {
            Some(1)
        } else {
            None
        }
    }
}

/// A random even unitary for a grading operator, by the Cayley transform
/// of a random even Hermitian matrix.
pub fn random_even_unitary<R: Rng>(grading: &CMat, rng: &mut R) -> CMat {
    let n = grading.nrows();
    let h = CMat::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = (&h + h.adjoint()) * c(0.5, 0.0);
    let h = (&h + grading * &h * grading) * c(0.5, 0.0);
    let id = CMat::identity(n, n);
    let i = c(0.0, 1.0);
    let inv = (&id + &h * i)
        .try_inverse()
        .expect("I + iH is invertible for Hermitian H");
    (&id - &h * i) * inv
}

/// Rank-one odd Clifford algebra on `C^{1|1}` with `σ(e) = e`.
pub fn clifford_one() -> GradedRealAlgebraModel {
    GradedRealAlgebraModel {
        parity: 1,
        grading: real_matrix(2, &[1.0, 0.0, 0.0, -1.0]),
        u: CMat::identity(2, 2),
        generators: Some(vec![real_matrix(2, &[0.0, 1.0, 1.0, 0.0])]),
    }
}

fn even_core(p: u8) -> GradedRealAlgebraModel {
    let (grading, u) = match p {
        0 => (real_matrix(1, &[1.0]), real_matrix(1, &[1.0])),
        2 => (
            real_matrix(2, &[1.0, 0.0, 0.0, -1.0]),
            real_matrix(2, &[0.0, 1.0, 1.0, 0.0]),
        ),
        4 => (CMat::identity(2, 2), real_matrix(2, &[0.0, -1.0, 1.0, 0.0])),
        6 => (
            real_matrix(2, &[1.0, 0.0, 0.0, -1.0]),
            real_matrix(2, &[0.0, 1.0, -1.0, 0.0]),
        ),
        _ => unreachable!("even cores only"),
    };
    GradedRealAlgebraModel {
        parity: 0,
        grading,
        u,
        generators: None,
    }
}

/// The fixed minimal model of type `K_p`.
pub fn reference_model(p: TypeIndex) -> GradedRealAlgebraModel {
    let p = p.value();
    if p.is_multiple_of(2) {
        even_core(p)
    } else {
        graded_tensor(&even_core(p - 1), &clifford_one()).expect("reference models fit the bound")
    }
}

/// Graded tensor product: `a ⊗̂ b` is realized as `a Γ_A^{|b|} ⊗ b` and the
/// Real structure as `σ_A ⊗̂ σ_B`.
pub fn graded_tensor(a: &GradedRealAlgebraModel, b: &GradedRealAlgebraModel) -> Result<GradedRealAlgebraModel> {
    let (na, nb) = (a.space_dim(), b.space_dim());
    if na * nb > MAX_SPACE_DIM {
        return Err(Error::Unsupported(format!(
            "tensor space of dimension {} exceeds {MAX_SPACE_DIM}",
            na * nb
        )));
    }
    let s = a
        .u_degree()
        .ok_or_else(|| Error::InvalidModel("U of the left factor must be homogeneous".into()))?;
    let ub = if s == 0 { b.u.clone() } else { &b.grading * &b.u };
    let generators = if a.is_full() && b.is_full() {
        None
    } else {
        let ida = CMat::identity(na, na);
        let idb = CMat::identity(nb, nb);
        let mut gens: Vec<CMat> = a.generating_set().iter().map(|x| x.kronecker(&idb)).collect();
        for y in b.generating_set() {
            let (e, o) = b.graded_parts(&y);
            if e.norm() > NULL_THRESHOLD {
                gens.push(ida.kronecker(&e));
            }
            if o.norm() > NULL_THRESHOLD {
                gens.push(a.grading.kronecker(&o));
            }
        }
        if gens.is_empty() {
            gens.push(CMat::identity(na * nb, na * nb));
        }
        Some(gens)
    };
    GradedRealAlgebraModel::new(
        (a.parity + b.parity) % 2,
        a.grading.kronecker(&b.grading),
        a.u.kronecker(&ub),
        generators,
    )
}

fn normalize_involution(x: CMat) -> Result<CMat> {
    let n = x.nrows();
    let mu = (&x * &x).trace() / c(n as f64, 0.0);
    if mu.norm() < SIGN_FLOOR * 1e-3 {
        return Err(Error::InvalidModel("grading element is nilpotent".into()));
    }
    let y = x / mu.sqrt();
    if (&y * &y - CMat::identity(n, n)).norm() > TOLERANCE {
        return Err(Error::InvalidModel(
            "grading element does not square to a scalar".into(),
        ));
    }
    Ok(y)
}

/// Reads `λ` in `σ(x) = λ x`, which must be `±1`.
fn sigma_sign(model: &GradedRealAlgebraModel, x: &CMat) -> Result<i8> {
    let s = model.sigma(x);
    let lambda = inner(x, &s) / inner(x, x);
    if lambda.im.abs() > TOLERANCE || lambda.re.abs() < SIGN_FLOOR || (s - x * lambda).norm() > TOLERANCE {
        return Err(Error::InvalidModel(
            "the Real structure does not preserve the grading element".into(),
        ));
    }
    Ok(if lambda.re > 0.0 { 1 } else { -1 })
}

/// Signature of the trace form `Re tr(xy)` on the real form `{x : σ(x) = x}`
/// of the span of `basis`, as `dim(hermitian) - dim(antihermitian)`.
fn real_form_signature(model: &GradedRealAlgebraModel, basis: &[CMat]) -> Result<i64> {
    let quarter = c(0.25, 0.0);
    let mut herm = 0.0;
    let mut anti = 0.0;
    for b in basis {
        for e in [b.clone(), b * c(0.0, 1.0)] {
            let s = model.sigma(&e);
            let sym = &e + &s;
            let h = (&sym + sym.adjoint()) * quarter;
            let a = (&sym - sym.adjoint()) * quarter;
            herm += inner(&e, &h).re;
            anti += inner(&e, &a).re;
        }
    }
    let sig = herm - anti;
    if (sig - sig.round()).abs() > TOLERANCE || (herm - herm.round()).abs() > TOLERANCE {
        return Err(Error::InvalidModel(
            "trace form of the real form is not integral".into(),
        ));
    }
    Ok(sig.round() as i64)
}

fn sign_of(sig: i64) -> Result<i8> {
    if (sig.abs() as f64) < SIGN_FLOOR {
        return Err(Error::InvalidModel("degenerate real form".into()));
    }
    Ok(if sig > 0 { 1 } else { -1 })
}

/// Classifies a model from intrinsic data: parity from the center, then for
/// even models `ε` from `σ(u₀) = ±u₀` and `η` from the real form; for odd
/// models `i` from `σ(z) = ±z` on the odd central `z` and `ε` from the real
/// form of the even part. Even models on a full matrix algebra are
/// cross-checked against [`classify_by_implementing_unitary`]. Models are
/// validated on construction.
pub fn classify_type(model: &GradedRealAlgebraModel) -> Result<TypeIndex> {
    let basis = model.basis();
    let gens = model.generating_set();
    let descriptor = if model.parity == 0 {
        let all: Vec<&CMat> = basis.all().collect();
        let gamma = &model.grading;
        let gram = gram_of(&all, &gens, |b, g| b * g - gamma * g * gamma * b);
        let null = null_vectors(gram);
        if null.len() != 1 {
            return Err(Error::InvalidModel("no unique grading element".into()));
        }
        let u0 = normalize_involution(combine(&all, &null[0]))?;
        let epsilon = u8::from(sigma_sign(model, &u0)? < 0);
        let all: Vec<CMat> = basis.all().cloned().collect();
        let eta = sign_of(real_form_signature(model, &all)?)?;
        TypeDescriptor {
            parity: 0,
            index: epsilon,
            sign: eta,
        }
    } else {
        let odd: Vec<&CMat> = basis.odd.iter().collect();
        let gram = gram_of(&odd, &gens, |b, g| b * g - g * b);
        let null = null_vectors(gram);
        if null.len() != 1 {
            return Err(Error::InvalidModel("no unique odd central element".into()));
        }
        let z = normalize_involution(combine(&odd, &null[0]))?;
        let i = u8::from(sigma_sign(model, &z)? < 0);
        let epsilon = sign_of(real_form_signature(model, &basis.even)?)?;
        TypeDescriptor {
            parity: 1,
            index: i,
            sign: epsilon,
        }
    };
    let t = TypeIndex::from_descriptor(descriptor).expect("every descriptor is in the table");
    if model.parity == 0 && model.is_full() {
        let other = classify_by_implementing_unitary(model)?;
        if other != t {
            return Err(Error::Mismatch(format!(
                "classification routes disagree: {t} from the real form, {other} from J"
            )));
        }
    }
    Ok(t)
}

/// Even full-matrix models: solves `V x̄ = σ(x) V` for `V`, sets `J = V ∘ bar`
/// and reads the degree of `J` and the sign of `J² = V V̄`.
pub fn classify_by_implementing_unitary(model: &GradedRealAlgebraModel) -> Result<TypeIndex> {
    if model.parity != 0 || !model.is_full() {
        return Err(Error::Unsupported(
            "the implementing-unitary route needs an even full matrix algebra".into(),
        ));
    }
    let n = model.space_dim();
    let id = CMat::identity(n, n);
    let mut gram = CMat::zeros(n * n, n * n);
    for g in model.generating_set() {
        // vec(V X) = (Xᵀ ⊗ I) vec V, vec(Y V) = (I ⊗ Y) vec V.
        let l = conj(&g).transpose().kronecker(&id) - id.kronecker(&model.sigma(&g));
        gram += l.adjoint() * l;
    }
    let null = null_vectors(gram);
    if null.len() != 1 {
        return Err(Error::InvalidModel("no implementing unitary found".into()));
    }
    let v = CMat::from_column_slice(n, n, null[0].as_slice());
    let scale = ((&v * v.adjoint()).trace().re / n as f64).sqrt();
    let v = v / c(scale, 0.0);
    if (&v * v.adjoint() - &id).norm() > TOLERANCE {
        return Err(Error::InvalidModel("the implementing operator is not unitary".into()));
    }
    let square = (&v * conj(&v)).trace() / c(n as f64, 0.0);
    let gamma = &model.grading;
    let moved = &v * conj(gamma) * v.adjoint();
    let degree = inner(gamma, &moved) / inner(gamma, gamma);
    for z in [square, degree] {
        if z.im.abs() > TOLERANCE || z.re.abs() < SIGN_FLOOR {
            return Err(Error::InvalidModel("sign read too close to zero".into()));
        }
    }
    let d = TypeDescriptor {
        parity: 0,
        index: u8::from(degree.re < 0.0),
        sign: if square.re > 0.0 { 1 } else { -1 },
    };
    Ok(TypeIndex::from_descriptor(d).expect("even descriptor"))
}

/// `table[p][q] = classify(K_p ⊗̂ K_q)`.
pub fn type_table() -> Result<[[TypeIndex; 8]; 8]> {
    let refs: Vec<GradedRealAlgebraModel> = (0..8).map(|p| reference_model(TypeIndex::new(p))).collect();
    let mut table = [[TypeIndex(0); 8]; 8];
    for (p, a) in refs.iter().enumerate() {
        for (q, b) in refs.iter().enumerate() {
            table[p][q] = classify_type(&graded_tensor(a, b)?)?;
        }
    }
    Ok(table)
}

type Entries = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    parity: u8,
    grading: Entries,
    u: Entries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<Entries>>,
}

fn to_entries(m: &CMat) -> Entries {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn from_entries(rows: &Entries) -> Result<CMat> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidModel("matrices must be square".into()));
    }
    Ok(CMat::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

impl TryFrom<ModelFile> for GradedRealAlgebraModel {
    type Error = Error;

    fn try_from(f: ModelFile) -> Result<Self> {
        let generators = match &f.generators {
            Some(g) => Some(g.iter().map(from_entries).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        GradedRealAlgebraModel::new(f.parity, from_entries(&f.grading)?, from_entries(&f.u)?, generators)
    }
}

impl From<GradedRealAlgebraModel> for ModelFile {
    fn from(m: GradedRealAlgebraModel) -> Self {
        ModelFile {
            parity: m.parity,
            grading: to_entries(&m.grading),
            u: to_entries(&m.u),
            generators: m.generators.as_ref().map(|g| g.iter().map(to_entries).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn descriptors_match_table() {
        let names: Vec<String> = (0..8).map(|p| TypeIndex::new(p).descriptor().to_string()).collect();
        assert_eq!(
            names,
            ["[0;0,+]", "[1;0,+]", "[0;1,+]", "[1;1,-]", "[0;0,-]", "[1;0,-]", "[0;1,-]", "[1;1,+]"]
        );
        for p in 0..8 {
            let t = TypeIndex::new(p);
            assert_eq!(TypeIndex::from_descriptor(t.descriptor()), Some(t));
        }
    }

    #[test]
    fn reference_round_trip() {
        for p in 0..8 {
            let t = TypeIndex::new(p);
            assert_eq!(classify_type(&reference_model(t)).unwrap(), t);
        }
    }

    #[test]
    fn reference_dimensions() {
        let dims: Vec<usize> = (0..8).map(|p| reference_model(TypeIndex::new(p)).space_dim()).collect();
        assert_eq!(dims, [1, 2, 2, 4, 2, 4, 2, 4]);
        assert_eq!(reference_model(TypeIndex::new(1)).basis().dim(), 2);
    }

    #[test]
    fn spec_examples() {
        let t = |p| reference_model(TypeIndex::new(p));
        assert_eq!(classify_type(&graded_tensor(&t(0), &t(0)).unwrap()).unwrap().value(), 0);
        assert_eq!(classify_type(&graded_tensor(&t(1), &t(1)).unwrap()).unwrap().value(), 2);
        assert_eq!(classify_type(&graded_tensor(&t(3), &t(5)).unwrap()).unwrap().value(), 0);
    }

    #[test]
    fn full_table_is_addition() {
        let table = type_table().unwrap();
        for p in 0..8 {
            for q in 0..8 {
                assert_eq!(table[p][q].value() as usize, (p + q) % 8, "K{p} x K{q}");
            }
        }
    }

    #[test]
    fn second_route_on_even_cores() {
        for p in [0, 2, 4, 6] {
            let m = reference_model(TypeIndex::new(p));
            assert_eq!(classify_by_implementing_unitary(&m).unwrap().value(), p as u8);
        }
        assert!(classify_by_implementing_unitary(&reference_model(TypeIndex::new(1))).is_err());
    }

    #[test]
    fn rephasing_and_even_conjugation_preserve_type() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in 0..8 {
            let m = reference_model(TypeIndex::new(p));
            for _ in 0..3 {
                let w = random_even_unitary(m.grading(), &mut rng);
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                let conj = m.conjugate_by(&w).unwrap().rephased(theta);
                assert_eq!(classify_type(&conj).unwrap().value(), p as u8);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let m = reference_model(TypeIndex::new(5));
        let s = serde_json::to_string(&m).unwrap();
        let back: GradedRealAlgebraModel = serde_json::from_str(&s).unwrap();
        assert_eq!(classify_type(&back).unwrap().value(), 5);
    }

    #[test]
    fn invalid_models_rejected() {
        // U not unitary.
        let f = r#"{"parity":0,"grading":[[[1,0]]],"u":[[[2,0]]]}"#;
        assert!(serde_json::from_str::<GradedRealAlgebraModel>(f).is_err());
        // Wrong declared parity.
        let f = r#"{"parity":1,"grading":[[[1,0]]],"u":[[[1,0]]]}"#;
        assert!(serde_json::from_str::<GradedRealAlgebraModel>(f).is_err());
        // Diagonal algebra C + C with trivial grading is not elementary.
        let f = r#"{"parity":0,"grading":[[[1,0],[0,0]],[[0,0],[1,0]]],"u":[[[1,0],[0,0]],[[0,0],[1,0]]],
                   "generators":[[[[1,0],[0,0]],[[0,0],[0,0]]]]}"#;
        assert!(serde_json::from_str::<GradedRealAlgebraModel>(f).is_err());
    }

    #[test]
    fn dimension_bound() {
        let big = graded_tensor(&reference_model(TypeIndex::new(5)), &reference_model(TypeIndex::new(7))).unwrap();
        assert_eq!(big.space_dim(), 16);
        assert!(matches!(
            graded_tensor(&big, &reference_model(TypeIndex::new(4))),
            Err(Error::Unsupported(_))
        ));
    }
}
