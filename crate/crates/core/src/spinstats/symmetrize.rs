use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{sign_character, SpinError, SpinSign, SpinSystem};
use crate::linalg::{hermitian_eigen, orthonormal_range, CMatrix};
use crate::pigroup::{parity_sign, CosetDecomposition, FiniteGroup, GroupChain};
use crate::reptheory::{irrep_matrices, CharacterTable, IrrepMatrices};
use crate::tunneling::{build_h_nrm, character_projector, InducedRepresentation, TunnelingModel};

/// Largest rovib ⊗ spin dimension handled explicitly.
pub const MAX_MODEL_DIM: usize = 4096;

/// Rovib kets `F_t G_r |Γi⟩` for every coset of `R` in `P`, tensored with
/// the spin space.
///
/// The rovib basis is the representation of `P` induced from `Γ`, with
/// representatives `F_t ∘ G_r` (`t` outer), so the `t = 0` block is the
/// model space of the tunneling Hamiltonian. Vectors are laid out with the
/// rovib index outer and the spin index inner.
#[derive(Debug, Clone)]
pub struct ModelSpace {
    rovib: InducedRepresentation,
    spin: SpinSystem,
    spin_perms: Vec<Vec<usize>>,
    epsilon: Vec<i32>,
    q_cosets: Vec<usize>,
}

impl ModelSpace {
    /// `gamma` is an irrep of `chain.r()`.
    pub fn new(chain: &GroupChain, gamma: &IrrepMatrices, spin: SpinSystem) -> Result<Self, SpinError> {
        let p = Arc::clone(chain.p());
        let q_in_p = chain.q_in_p().to_vec();
        let r_in_p: Vec<usize> = chain.r_in_q().subgroup_indices().iter().map(|&g| q_in_p[g]).collect();
        let f_reps = chain.q_in_p_dec().representatives();
        let g_reps = chain.r_in_q().representatives();
        let reps: Vec<usize> = f_reps
            .iter()
            .flat_map(|&ft| g_reps.iter().map(move |&gr| (ft, gr)))
            .map(|(ft, gr)| p.mul(ft, q_in_p[gr]))
            .collect();
        let dec = CosetDecomposition::with_representatives(Arc::clone(&p), &r_in_p, reps)?;
        let irrep = gamma.transport(Arc::clone(dec.subgroup()))?;
        let rovib = InducedRepresentation::new(dec, irrep)?;
        let dim = rovib.dim() * spin.dim();
        if dim > MAX_MODEL_DIM {
            return Err(SpinError::TooLarge { dim, max: MAX_MODEL_DIM });
        }
        let spin_perms = p.elements().iter().map(|x| spin.permutation(x)).collect();
        let epsilon = p
            .elements()
            .iter()
            .map(|x| parity_sign(x, spin.frame()))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            rovib,
            spin,
            spin_perms,
            epsilon,
            q_cosets: f_reps.to_vec(),
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.rovib.group()
    }

    pub fn rovib(&self) -> &InducedRepresentation {
        &self.rovib
    }

    pub fn spin(&self) -> &SpinSystem {
        &self.spin
    }

    pub fn dim(&self) -> usize {
        self.rovib.dim() * self.spin.dim()
    }

    /// `P` indices of the representatives `F_t` of `Q` in `P`.
    pub fn q_coset_representatives(&self) -> &[usize] {
        &self.q_cosets
    }

    /// `ε(x)` for element `x` of `P`.
    pub fn epsilon(&self, x: usize) -> i32 {
        self.epsilon[x]
    }

    fn as_matrix(&self, v: &[Complex64]) -> CMatrix {
        CMatrix::from_row_slice(self.rovib.dim(), self.spin.dim(), v)
    }

    fn flatten(m: &CMatrix) -> Vec<Complex64> {
        m.transpose().iter().copied().collect()
    }

    /// `(D(x) ⊗ Spin(x)) v`.
    pub fn apply(&self, x: usize, v: &[Complex64]) -> Vec<Complex64> {
        let moved = self.rovib.apply_left(x, &self.as_matrix(v));
        let perm = &self.spin_perms[x];
        let mut out = CMatrix::zeros(moved.nrows(), moved.ncols());
        for (b, &bp) in perm.iter().enumerate() {
            out.set_column(bp, &moved.column(b));
        }
        Self::flatten(&out)
    }
}

/// One `S±` state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetrizedState {
    pub sign: SpinSign,
    pub label: String,
    /// Counted from 1.
    pub mu: usize,
    /// Counted from 1.
    pub theta: usize,
    pub vector: Vec<Complex64>,
    /// `⟨v| H ⊗ 1 |v⟩` with the tunneling Hamiltonian copied onto every
    /// `F_t` block.
    pub energy: f64,
}

/// Both signs for one `(λ, μ, θ)`; a sign is absent when the twisted irrep
/// has fewer than `θ` copies in spin space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetrizedPair {
    pub plus: Option<SymmetrizedState>,
    pub minus: Option<SymmetrizedState>,
    /// `E_λμ` of the tunneling Hamiltonian.
    pub level_energy: f64,
}

fn column(m: &CMatrix, j: usize) -> CMatrix {
    m.columns(j, 1).into_owned()
}

/// `(d/f) Σ_h conj(t(h)) A(h)`; with `t(h) = T_{k0}(h)` this maps a vector
/// of the first partner onto the `k`-th.
fn partner(order: usize, dim: usize, t: impl Fn(usize) -> Complex64, act: impl Fn(usize) -> CMatrix) -> CMatrix {
    let mut out = act(0) * Complex64::new(0.0, 0.0);
    for h in 0..order {
        let w = t(h).conj() * (dim as f64 / order as f64);
        if w.norm() > 0.0 {
            out += act(h) * w;
        }
    }
    out
}

/// The rovib factor `|λμj⟩` of one level and the Hamiltonian on the
/// `P`-level rovib space.
struct RovibLevel {
    label: String,
    mu: usize,
    s_lambda: IrrepMatrices,
    partners: Vec<CMatrix>,
    h_p: CMatrix,
    energy: f64,
}

fn rovib_level(
    chain: &GroupChain,
    model: &TunnelingModel,
    qtable: &CharacterTable,
    space: &ModelSpace,
    lambda: &str,
    mu: usize,
) -> Result<RovibLevel, SpinError> {
    let q = chain.q();
    if model.dec().group().as_ref() != q.as_ref()
        || qtable.group().as_ref() != q.as_ref()
        || space.group().as_ref() != chain.p().as_ref()
    {
        return Err(SpinError::Mismatch("model, table, space and chain must agree".into()));
    }
    let li = qtable.index_of(lambda)?;
    let s_lambda = irrep_matrices(q, lambda, qtable)?;
    let d = s_lambda.dim();
    let f = q.order();
    let rep = model.induced();

    let h = build_h_nrm(model)?.matrix;
    let basis = orthonormal_range(&character_projector(li, qtable, rep), 1e-6);
    let levels = basis.ncols() / d;
    if mu == 0 || mu > levels {
        return Err(SpinError::InvalidLevel(format!("{lambda} has {levels} levels, asked for μ = {mu}")));
    }
    let restricted = basis.adjoint() * &h * &basis;
    let eig = hermitian_eigen(&restricted)?;
    let chunk = &eig.eigenvalues[(mu - 1) * d..mu * d];
    let energy = chunk.iter().sum::<f64>() / d as f64;
    let tol = (1e-8 * energy.abs().max(1.0)).max(chunk[d - 1] - chunk[0]);
    let cols: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| (eig.eigenvalues[i] - energy).abs() <= tol)
        .collect();
    // an H-invariant, Q-invariant subspace; cut one copy of λ out of it
    let eigenspace = &basis * eig.eigenvectors.select_columns(&cols);
    let first = partner(f, d, |g| s_lambda.matrix(g)[(0, 0)], |g| rep.apply_left(g, &eigenspace));
    let seed = orthonormal_range(&first, 1e-6);
    if seed.ncols() == 0 {
        return Err(SpinError::InvalidLevel(format!("no {lambda} partner found for μ = {mu}")));
    }
    let y = column(&seed, 0);
    let partners = (0..d)
        .map(|k| partner(f, d, |g| s_lambda.matrix(g)[(k, 0)], |g| rep.apply_left(g, &y)))
        .collect();

    // H copied onto every F_t block of the P-level rovib space
    let n_q = rep.dim();
    let mut h0 = CMatrix::zeros(space.rovib.dim(), space.rovib.dim());
    h0.view_mut((0, 0), (n_q, n_q)).copy_from(&h);
    let h_p = space
        .q_cosets
        .iter()
        .map(|&ft| space.rovib.conjugate(ft, &h0))
        .fold(CMatrix::zeros(h0.nrows(), h0.ncols()), |acc, m| acc + m);

    Ok(RovibLevel {
        label: lambda.to_string(),
        mu,
        s_lambda,
        partners,
        h_p,
        energy,
    })
}

fn symmetrize(
    level: &RovibLevel,
    q: &FiniteGroup,
    space: &ModelSpace,
    sign: SpinSign,
    theta: usize,
) -> Result<SymmetrizedState, SpinError> {
    let d = level.s_lambda.dim();
    let f = q.order();
    let c_q = sign_character(q, &space.spin, sign)?;
    let c_p = sign_character(space.group(), &space.spin, sign)?;
    let spin_q: Vec<CMatrix> = q.elements().iter().map(|x| space.spin.matrix(x)).collect();
    // the spin partner transforms as T(h) = c(h)·conj(S^λ(h))
    let t = |g: usize, k: usize| level.s_lambda.matrix(g)[(k, 0)].conj() * c_q[g] as f64;
    let first = partner(f, d, |g| t(g, 0), |g| spin_q[g].clone());
    let copies = orthonormal_range(&first, 1e-6);
    let absent = || SpinError::ZeroVector {
        label: level.label.clone(),
        sign,
        available: copies.ncols(),
    };
    if theta == 0 || theta > copies.ncols() {
        return Err(absent());
    }
    let y = column(&copies, theta - 1);
    let spin_partners: Vec<CMatrix> = (0..d)
        .map(|k| partner(f, d, |g| t(g, k), |g| &spin_q[g] * &y))
        .collect();

    let n_q = level.partners[0].nrows();
    let mut v0 = CMatrix::zeros(space.rovib.dim(), space.spin.dim());
    for (rovib, spin) in level.partners.iter().zip(&spin_partners) {
        let mut block = v0.view_mut((0, 0), (n_q, space.spin.dim()));
        block += rovib * spin.transpose();
    }
    let v0 = ModelSpace::flatten(&v0);
    let mut v = vec![Complex64::new(0.0, 0.0); v0.len()];
    for &ft in &space.q_cosets {
        for (acc, x) in v.iter_mut().zip(space.apply(ft, &v0)) {
            *acc += x * c_p[ft] as f64;
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-10 {
        return Err(absent());
    }
    v.iter_mut().for_each(|z| *z /= norm);
    let vm = space.as_matrix(&v);
    let energy = (vm.adjoint() * &level.h_p * &vm).trace().re;
    Ok(SymmetrizedState {
        sign,
        label: level.label.clone(),
        mu: level.mu,
        theta,
        vector: v,
        energy,
    })
}

/// Builds `Σ_t c(F_t) A(F_t) Σ_j |λμj⟩|θj⟩` for level `μ` of species `λ`
/// of `Q`, with `c = ε` for `S+` and `c = u·ε` for `S−`, where `|θj⟩` is
/// the `θ`-th copy of the twisted irrep in spin space.
#[allow(clippy::too_many_arguments)]
pub fn build_symmetrized_state(
    chain: &GroupChain,
    model: &TunnelingModel,
    qtable: &CharacterTable,
    space: &ModelSpace,
    lambda: &str,
    mu: usize,
    theta: usize,
    sign: SpinSign,
) -> Result<SymmetrizedState, SpinError> {
    let level = rovib_level(chain, model, qtable, space, lambda, mu)?;
    symmetrize(&level, chain.q(), space, sign, theta)
}

/// Both signs for one `(λ, μ, θ)`. Fails with `ZeroVector` only when
/// neither sign has a spin partner.
pub fn build_symmetrized_states(
    chain: &GroupChain,
    model: &TunnelingModel,
    qtable: &CharacterTable,
    space: &ModelSpace,
    lambda: &str,
    mu: usize,
    theta: usize,
) -> Result<SymmetrizedPair, SpinError> {
    let level = rovib_level(chain, model, qtable, space, lambda, mu)?;
    let attempt = |sign| match symmetrize(&level, chain.q(), space, sign, theta) {
        Ok(state) => Ok(Some(state)),
        Err(SpinError::ZeroVector { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let plus = attempt(SpinSign::Plus)?;
    let minus = attempt(SpinSign::Minus)?;
    if plus.is_none() && minus.is_none() {
        return Err(SpinError::ZeroVector {
            label: lambda.to_string(),
            sign: SpinSign::Plus,
            available: 0,
        });
    }
    Ok(SymmetrizedPair {
        plus,
        minus,
        level_energy: level.energy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub sign: SpinSign,
    /// `max_x max|A(x)v − ε(x)·(±1)^{star(x)} v|`.
    pub residual: f64,
    pub elements_checked: usize,
}

impl VerificationReport {
    pub fn label(&self) -> &'static str {
        self.sign.symbol()
    }
}

/// Applies every element of `P` to `v` and checks that it transforms as
/// `S+` or `S−`. The sign is read off the first starred element; with no
/// starred elements it is `+`.
pub fn verify_s_pm(vector: &[Complex64], space: &ModelSpace) -> Result<VerificationReport, SpinError> {
    let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if vector.len() != space.dim() || norm == 0.0 {
        return Err(SpinError::Mismatch("vector must be nonzero and match the model space".into()));
    }
    let p = space.group();
    let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>();
    let sign = match (0..p.order()).find(|&x| p.element(x).star()) {
        Some(x) => {
            let overlap = dot(vector, &space.apply(x, vector)) / (norm * norm) * space.epsilon(x) as f64;
            if overlap.re >= 0.0 {
                SpinSign::Plus
            } else {
                SpinSign::Minus
            }
        }
        None => SpinSign::Plus,
    };
    let mut residual: f64 = 0.0;
    for x in 0..p.order() {
        let mut expected = space.epsilon(x) as f64;
        if sign == SpinSign::Minus && p.element(x).star() {
            expected = -expected;
        }
        let moved = space.apply(x, vector);
        let r = moved
            .iter()
            .zip(vector)
            .map(|(a, b)| (a - b * expected).norm())
            .fold(0.0, f64::max)
            / norm;
        residual = residual.max(r);
    }
    if residual > 1e-9 {
        return Err(SpinError::NotSymmetrized { residual });
    }
    Ok(VerificationReport {
        sign,
        residual,
        elements_checked: p.order(),
    })
}
