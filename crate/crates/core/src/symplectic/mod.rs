//! Symplectic similitude groups: multiplier, doubling embedding, coset
//! representatives and the Siegel parabolic.

mod matrix;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use matrix::{Matrix, MatrixJson};

use crate::algebra::scalar::Scalar;
use crate::error::{Error, Result};

/// `J_n = [[0, I_n], [-I_n, 0]]`.
pub fn j_matrix<T: Scalar>(n: usize) -> Matrix<T> {
    let i = Matrix::identity(n);
    let z = Matrix::zeros(n, n);
    Matrix::from_blocks(&[vec![z.clone(), i.clone()], vec![-i, z]])
}

/// The `μ` with `ᵗg J_n g = μ J_n`.
pub fn gsp_multiplier<T: Scalar>(g: &Matrix<T>, n: usize) -> Result<T> {
    if g.rows() != 2 * n || g.cols() != 2 * n || n == 0 {
        return Err(Error::NotInGsp { rows: g.rows(), cols: g.cols(), n });
    }
    let j = j_matrix::<T>(n);
    let form = &(&g.transpose() * &j) * g;
    let mu = form[(0, n)].clone();
    if !form.approx_eq(&j.scale(&mu)) {
        return Err(Error::NotInGsp { rows: g.rows(), cols: g.cols(), n });
    }
    if mu.approx_eq(&T::zero()) {
        return Err(Error::ZeroMultiplier);
    }
    Ok(mu)
}

/// An element of `GSp(2n)` together with its multiplier.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix<T> {
    n: usize,
    m: Matrix<T>,
    mu: T,
}

impl<T: Scalar> SymplecticMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if !m.is_square() || m.rows() % 2 != 0 {
            return Err(Error::NotInGsp { rows: m.rows(), cols: m.cols(), n: m.rows() / 2 });
        }
        let n = m.rows() / 2;
        let mu = gsp_multiplier(&m, n)?;
        Ok(SymplecticMatrix { n, m, mu })
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix { n, m: Matrix::identity(2 * n), mu: T::one() }
    }

    pub fn j(n: usize) -> Self {
        SymplecticMatrix { n, m: j_matrix(n), mu: T::one() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.m
    }

    pub fn multiplier(&self) -> &T {
        &self.mu
    }

    pub fn is_sp(&self) -> bool {
        self.mu.approx_eq(&T::one())
    }

    /// `(A, B, C, D)` blocks of size `n x n`.
    pub fn abcd(&self) -> [Matrix<T>; 4] {
        let n = self.n;
        [
            self.m.block(0, 0, n, n),
            self.m.block(0, n, n, n),
            self.m.block(n, 0, n, n),
            self.m.block(n, n, n, n),
        ]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "size mismatch");
        SymplecticMatrix { n: self.n, m: &self.m * &other.m, mu: self.mu.clone() * other.mu.clone() }
    }

    pub fn inverse(&self) -> Self {
        let m = self.m.inverse().expect("GSp elements are invertible");
        SymplecticMatrix { n: self.n, m, mu: T::one() / self.mu.clone() }
    }
}

/// Doubling embedding of `GSp(2a) x GSp(2b)` (equal multipliers) into
/// `GSp(2a+2b)`. The `B` and `C` blocks of the first factor change sign.
pub fn embed_doubling<T: Scalar>(
    g1: &SymplecticMatrix<T>,
    g2: &SymplecticMatrix<T>,
) -> Result<SymplecticMatrix<T>> {
    if !g1.mu.approx_eq(&g2.mu) {
        return Err(Error::MultiplierMismatch {
            left: format!("{:?}", g1.mu),
            right: format!("{:?}", g2.mu),
        });
    }
    let (a, b) = (g1.n, g2.n);
    let [a1, b1, c1, d1] = g1.abcd();
    let [a2, b2, c2, d2] = g2.abcd();
    let zab = Matrix::zeros(a, b);
    let zba = Matrix::zeros(b, a);
    let m = Matrix::from_blocks(&[
        vec![a1, zab.clone(), -b1, zab.clone()],
        vec![zba.clone(), a2, zba.clone(), b2],
        vec![-c1, zab.clone(), d1, zab],
        vec![zba.clone(), c2, zba, d2],
    ]);
    Ok(SymplecticMatrix { n: a + b, m, mu: g1.mu.clone() })
}

/// `diag(0_{n-r}, I_r)`.
fn i_tilde<T: Scalar>(n: usize, r: usize) -> Matrix<T> {
    let d: Vec<T> = (0..n).map(|i| if i >= n - r { T::one() } else { T::zero() }).collect();
    Matrix::diag(&d)
}

fn check_r(n: usize, r: usize) -> Result<()> {
    if r > n || n == 0 {
        return Err(Error::OutOfRange(format!("need 0 <= r <= n with n >= 1, got n={n}, r={r}")));
    }
    Ok(())
}

/// The coset representative `α_r` in `Sp(4n)`.
pub fn alpha_r<T: Scalar>(n: usize, r: usize) -> Result<SymplecticMatrix<T>> {
    check_r(n, r)?;
    let i = Matrix::identity(n);
    let t = i_tilde::<T>(n, r);
    let z = Matrix::zeros(n, n);
    let m = Matrix::from_blocks(&[
        vec![i.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), i.clone(), z.clone(), z.clone()],
        vec![z.clone(), t.clone(), i.clone(), z.clone()],
        vec![t, z.clone(), z, i],
    ]);
    Ok(SymplecticMatrix { n: 2 * n, m, mu: T::one() })
}

/// The coset representative `Q_r` in `Sp(4n)`.
pub fn q_matrix<T: Scalar>(n: usize, r: usize) -> Result<SymplecticMatrix<T>> {
    check_r(n, r)?;
    let i = Matrix::identity(n);
    let t = i_tilde::<T>(n, r);
    let ip = &i - &t;
    let z = Matrix::zeros(n, n);
    let m = Matrix::from_blocks(&[
        vec![i.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), ip.clone(), z.clone(), t.clone()],
        vec![z.clone(), z.clone(), i, t.clone()],
        vec![t.clone(), -t, z, ip],
    ]);
    Ok(SymplecticMatrix { n: 2 * n, m, mu: T::one() })
}

/// `[[I', Ĩ], [-Ĩ, I']]` in `Sp(2n)`: the element `J_r` padded by the identity.
pub fn padded_j<T: Scalar>(n: usize, r: usize) -> Result<SymplecticMatrix<T>> {
    check_r(n, r)?;
    let t = i_tilde::<T>(n, r);
    let ip = &Matrix::identity(n) - &t;
    let m = Matrix::from_blocks(&[vec![ip.clone(), t.clone()], vec![-t, ip]]);
    Ok(SymplecticMatrix { n, m, mu: T::one() })
}

/// Levi decomposition of an element of the Siegel parabolic:
/// `p = [[A, 0], [0, v ᵗA⁻¹]] · [[I, X], [0, I]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelFactorization<T> {
    pub a: Matrix<T>,
    pub v: T,
    pub x: Matrix<T>,
}

impl<T: Scalar> SiegelFactorization<T> {
    pub fn reassemble(&self) -> Matrix<T> {
        let m = self.a.rows();
        let levi = Matrix::from_blocks(&[
            vec![self.a.clone(), Matrix::zeros(m, m)],
            vec![
                Matrix::zeros(m, m),
                self.a.inverse().expect("invertible Levi block").transpose().scale(&self.v),
            ],
        ]);
        let unip = Matrix::from_blocks(&[
            vec![Matrix::identity(m), self.x.clone()],
            vec![Matrix::zeros(m, m), Matrix::identity(m)],
        ]);
        &levi * &unip
    }

    /// `d(p) = v^{-m/2} det(A)` for Levi block size `m`.
    pub fn d_value(&self) -> T {
        let half = self.a.rows() / 2;
        let vinv = T::one() / self.v.clone();
        let vpow = num_traits::pow(vinv, half);
        vpow * self.a.det()
    }
}

/// Factors `p` (size `2m`, `m` even) through the Siegel parabolic and returns
/// the factorization together with `d(p)`.
pub fn siegel_factor<T: Scalar>(p: &SymplecticMatrix<T>) -> Result<(SiegelFactorization<T>, T)> {
    let m = p.n;
    if m % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "d(p) needs an even Levi block, got size {m}"
        )));
    }
    let [a, b, c, _] = p.abcd();
    if !c.approx_zero() {
        return Err(Error::NotInSiegelParabolic);
    }
    let ainv = a.inverse().ok_or(Error::ZeroMultiplier)?;
    let x = &ainv * &b;
    let f = SiegelFactorization { a, v: p.mu.clone(), x };
    let d = f.d_value();
    Ok((f, d))
}

/// Inputs for the three cases of conjugation into the Siegel parabolic.
#[derive(Clone, Debug)]
pub enum CosetCase<T> {
    /// `p_i = diag(g_i, I_r, ᵗg_i⁻¹, I_r) · n_i` with `g_i ∈ GL(n-r)` and
    /// `n_i` in the unipotent radical of `P_{2n,r}`.
    LeviPair { g1: Matrix<T>, n1: Matrix<T>, g2: Matrix<T>, n2: Matrix<T> },
    /// `x = (1, x_1)` with `x_1 ∈ Sp(2r)`.
    Sp2rDiagonal { x1: SymplecticMatrix<T> },
    /// `g ∈ GSp(2n)`, used with `r = n`.
    FullDiagonal { g: SymplecticMatrix<T> },
}

/// Result of a conjugation check.
#[derive(Clone, Debug)]
pub struct CosetConjugation<T> {
    pub conjugate: SymplecticMatrix<T>,
    pub d: T,
    pub expected_d: T,
}

fn levi_element<T: Scalar>(g: &Matrix<T>, n: usize, r: usize) -> Result<Matrix<T>> {
    let k = n - r;
    if g.rows() != k || g.cols() != k {
        return Err(Error::InvalidParameter(format!("GL block must be {k}x{k}")));
    }
    let ginv_t = g.inverse().ok_or(Error::ZeroMultiplier)?.transpose();
    let mut a = Matrix::identity(n);
    a.set_block(0, 0, g);
    let mut d = Matrix::identity(n);
    d.set_block(0, 0, &ginv_t);
    let z = Matrix::zeros(n, n);
    Ok(Matrix::from_blocks(&[vec![a, z.clone()], vec![z, d]]))
}

/// Whether `u` lies in `P_{2n,r}` with trivial `GL(n-r) x G_r` part, i.e.
/// in its unipotent radical.
fn in_unipotent_radical<T: Scalar>(u: &Matrix<T>, n: usize, r: usize) -> bool {
    let k = n - r;
    let lower_left_zero = u.block(k, 0, n + r, k).approx_zero();
    let g = SymplecticMatrix::new(u.clone());
    let gl_part_trivial = u.block(0, 0, k, k).approx_eq(&Matrix::identity(k));
    let mut idx: Vec<usize> = (k..n).collect();
    idx.extend(n + k..2 * n);
    let mut inner = Matrix::zeros(2 * r, 2 * r);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            inner[(a, b)] = u[(i, j)].clone();
        }
    }
    let inner_trivial = inner.approx_eq(&Matrix::identity(2 * r));
    lower_left_zero && gl_part_trivial && inner_trivial && g.is_ok_and(|g| g.is_sp())
}

/// Conjugates by `Q_r` and checks the result lies in the Siegel parabolic
/// of `GSp(4n)` with the predicted value of `d`.
pub fn conjugate_into_parabolic<T: Scalar>(n: usize, r: usize, case: &CosetCase<T>) -> Result<CosetConjugation<T>> {
    check_r(n, r)?;
    let (left, right, expected_d) = match case {
        CosetCase::LeviPair { g1, n1, g2, n2 } => {
            if r >= n {
                return Err(Error::OutOfRange("levi-pair case needs r < n".into()));
            }
            for u in [n1, n2] {
                if !in_unipotent_radical(u, n, r) {
                    return Err(Error::InvalidParameter(
                        "unipotent factor is not in the radical of P_{2n,r}".into(),
                    ));
                }
            }
            let p1 = SymplecticMatrix::new(&levi_element(g1, n, r)? * n1)?;
            let p2 = SymplecticMatrix::new(&levi_element(g2, n, r)? * n2)?;
            (p1, p2, g1.det() * g2.det())
        }
        CosetCase::Sp2rDiagonal { x1 } => {
            if r >= n {
                return Err(Error::OutOfRange("sp2r-diagonal case needs r < n".into()));
            }
            if x1.n() != r || !x1.is_sp() {
                return Err(Error::InvalidParameter(format!("x_1 must lie in Sp({})", 2 * r)));
            }
            let x = if r == 0 {
                SymplecticMatrix::identity(n)
            } else {
                embed_doubling(&SymplecticMatrix::identity(n - r), x1)?
            };
            (x.clone(), x, T::one())
        }
        CosetCase::FullDiagonal { g } => {
            if r != n {
                return Err(Error::OutOfRange("full-diagonal case needs r = n".into()));
            }
            if g.n() != n {
                return Err(Error::InvalidParameter(format!("g must lie in GSp({})", 2 * n)));
            }
            (g.clone(), g.clone(), T::one())
        }
    };
    let q = q_matrix::<T>(n, r)?;
    let h = embed_doubling(&left, &right)?;
    let conjugate = q.mul(&h).mul(&q.inverse());
    let d = match siegel_factor(&conjugate) {
        Ok((_, d)) => d,
        Err(Error::NotInSiegelParabolic) => {
            return Err(Error::IdentityViolation(format!(
                "conjugate by Q_{r} (n={n}) is not block upper triangular"
            )))
        }
        Err(e) => return Err(e),
    };
    if !d.approx_eq(&expected_d) {
        return Err(Error::IdentityViolation(format!("d = {d:?}, expected {expected_d:?}")));
    }
    Ok(CosetConjugation { conjugate, d, expected_d })
}

/// A random unimodular integer matrix: unit lower times unit upper
/// triangular, with small entries.
pub fn random_unimodular<T: Scalar>(rng: &mut ChaCha8Rng, k: usize) -> Matrix<T> {
    let mut lower = Matrix::identity(k);
    let mut upper = Matrix::identity(k);
    for i in 0..k {
        for j in 0..i {
            lower[(i, j)] = T::from_i64(rng.random_range(-2..=2));
            upper[(j, i)] = T::from_i64(rng.random_range(-2..=2));
        }
    }
    &lower * &upper
}

/// A random symmetric integer matrix with entries in `[-2, 2]`.
pub fn random_symmetric<T: Scalar>(rng: &mut ChaCha8Rng, k: usize) -> Matrix<T> {
    let mut s = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let v = T::from_i64(rng.random_range(-2..=2));
            s[(i, j)] = v.clone();
            s[(j, i)] = v;
        }
    }
    s
}

/// `[[I, S], [0, I]]`.
pub fn unipotent_siegel<T: Scalar>(s: &Matrix<T>) -> Matrix<T> {
    let n = s.rows();
    Matrix::from_blocks(&[
        vec![Matrix::identity(n), s.clone()],
        vec![Matrix::zeros(n, n), Matrix::identity(n)],
    ])
}

/// `[[U, 0], [0, ᵗU⁻¹]]`.
pub fn levi_gl<T: Scalar>(u: &Matrix<T>) -> Matrix<T> {
    let n = u.rows();
    let d = u.inverse().expect("invertible GL block").transpose();
    Matrix::from_blocks(&[vec![u.clone(), Matrix::zeros(n, n)], vec![Matrix::zeros(n, n), d]])
}

/// Deterministic word of length `word_length` in the generators `J_n`,
/// `[[I, X], [0, I]]` (symmetric `X`) and `[[U, 0], [0, ᵗU⁻¹]]` (unimodular `U`).
pub fn random_symplectic<T: Scalar>(n: usize, seed: u64, word_length: usize) -> SymplecticMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symplectic_with(&mut rng, n, word_length)
}

pub fn random_symplectic_with<T: Scalar>(
    rng: &mut ChaCha8Rng,
    n: usize,
    word_length: usize,
) -> SymplecticMatrix<T> {
    let mut m = Matrix::identity(2 * n);
    for _ in 0..word_length {
        let gen = match rng.random_range(0..3) {
            0 => j_matrix(n),
            1 => unipotent_siegel(&random_symmetric(rng, n)),
            _ => levi_gl(&random_unimodular(rng, n)),
        };
        m = &m * &gen;
    }
    SymplecticMatrix { n, m, mu: T::one() }
}

/// Random elements of the unipotent radical of `P_{2n,r}`, as products of
/// the two generator families.
pub fn random_radical_element<T: Scalar>(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Matrix<T> {
    let k = n - r;
    let mut u = Matrix::identity(n);
    for i in 0..k {
        for j in k..n {
            u[(i, j)] = T::from_i64(rng.random_range(-2..=2));
        }
    }
    let mut s = random_symmetric::<T>(rng, n);
    for i in k..n {
        for j in k..n {
            s[(i, j)] = T::zero();
        }
    }
    &levi_gl(&u) * &unipotent_siegel(&s)
}

/// JSON-facing summary of a symplectic matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymplecticJson {
    pub matrix: MatrixJson,
    pub multiplier: String,
}
