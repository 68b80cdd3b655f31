//! Quadrature-space (symplectic) descriptions of the Gaussian elements,
//! ordered as `(x1, p1, x2, p2, ...)`.

use ndarray::{s, Array2};

use crate::error::{Error, Result};

pub const SYMPLECTIC_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    m: Array2<f64>,
}

/// Standard symplectic form for `modes` modes.
pub fn omega(modes: usize) -> Array2<f64> {
    let mut w = Array2::zeros((2 * modes, 2 * modes));
    for k in 0..modes {
        w[[2 * k, 2 * k + 1]] = 1.0;
        w[[2 * k + 1, 2 * k]] = -1.0;
    }
    w
}

impl SymplecticMatrix {
    pub fn new(m: Array2<f64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || n % 2 != 0 || m.ncols() != n {
            return Err(Error::InvalidParameter(format!(
                "symplectic matrices are 2m x 2m, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let dev = symplectic_deviation(&m);
        if dev > SYMPLECTIC_TOLERANCE {
            return Err(Error::NotSymplectic(dev));
        }
        Ok(SymplecticMatrix { m })
    }

    pub fn identity(modes: usize) -> Self {
        SymplecticMatrix { m: Array2::eye(2 * modes) }
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.m
    }

    pub fn modes(&self) -> usize {
        self.m.nrows() / 2
    }

    /// `max |S^T Omega S - Omega|`.
    pub fn deviation(&self) -> f64 {
        symplectic_deviation(&self.m)
    }

    /// `S^{-1} = -Omega S^T Omega`.
    pub fn inverse(&self) -> Self {
        let w = omega(self.modes());
        SymplecticMatrix { m: -w.dot(&self.m.t()).dot(&w) }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.m.nrows(), other.m.nrows());
        let mut m = Array2::zeros((a + b, a + b));
        m.slice_mut(s![..a, ..a]).assign(&self.m);
        m.slice_mut(s![a.., a..]).assign(&other.m);
        SymplecticMatrix { m }
    }

    /// Single-mode squeezer `diag(e^{-r}, e^{r})`.
    pub fn squeezer(r: f64) -> Self {
        SymplecticMatrix { m: Array2::from_diag(&ndarray::arr1(&[(-r).exp(), r.exp()])) }
    }

    /// 50:50 beam splitter `(1/sqrt 2) [[I, I], [-I, I]]`.
    pub fn balanced_beamsplitter() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut m = Array2::zeros((4, 4));
        for k in 0..2 {
            m[[k, k]] = h;
            m[[k, k + 2]] = h;
            m[[k + 2, k]] = -h;
            m[[k + 2, k + 2]] = h;
        }
        SymplecticMatrix { m }
    }

    /// Two-mode squeezer in block form `[[c I, -s Z], [-s Z, c I]]`,
    /// `Z = diag(1, -1)`.
    pub fn two_mode_squeezer(r: f64) -> Self {
        let (c, s) = (r.cosh(), r.sinh());
        let mut m = Array2::zeros((4, 4));
        for k in 0..4 {
            m[[k, k]] = c;
        }
        m[[0, 2]] = -s;
        m[[1, 3]] = s;
        m[[2, 0]] = -s;
        m[[3, 1]] = s;
        SymplecticMatrix { m }
    }
}

fn symplectic_deviation(m: &Array2<f64>) -> f64 {
    let w = omega(m.nrows() / 2);
    let lhs = m.t().dot(&w).dot(m);
    (lhs - w).iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Product `S_1 S_2 ... S_k`, each factor checked for the symplectic
/// condition.
pub fn compose_symplectic(factors: &[&SymplecticMatrix]) -> Result<SymplecticMatrix> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidParameter("nothing to compose".into()))?;
    let mut acc = first.m.clone();
    for f in factors {
        let dev = f.deviation();
        if dev > SYMPLECTIC_TOLERANCE {
            return Err(Error::NotSymplectic(dev));
        }
    }
    for f in &factors[1..] {
        if f.m.nrows() != acc.nrows() {
            return Err(Error::InvalidParameter("mode counts differ".into()));
        }
        acc = acc.dot(&f.m);
    }
    Ok(SymplecticMatrix { m: acc })
}

/// `BS(pi/4)^{-1} (S(r) + S(r)^{-1}) BS(pi/4)`, the two-mode squeezer built
/// from two opposite single-mode squeezers between balanced beam splitters.
pub fn two_mode_squeezer_from_single_modes(r: f64) -> Result<SymplecticMatrix> {
    let bs = SymplecticMatrix::balanced_beamsplitter();
    let sq = SymplecticMatrix::squeezer(r);
    let middle = sq.direct_sum(&sq.inverse());
    compose_symplectic(&[&bs.inverse(), &middle, &bs])
}
