//! sl₂-triples (N₀, H, N₀⁺) with [H,N₀] = −2N₀, [H,N₀⁺] = 2N₀⁺, [N₀⁺,N₀] = H.

use crate::error::{Error, Result};
use crate::linalg::{rat, solve_linear, ExactMatrix, GR};
use crate::mhs::Grading;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub n0: ExactMatrix,
    pub h: ExactMatrix,
    pub n0_plus: ExactMatrix,
}

impl Sl2Triple {
    pub fn new(n0: ExactMatrix, h: ExactMatrix, n0_plus: ExactMatrix) -> Result<Self> {
        let t = Self { n0, h, n0_plus };
        t.verify()?;
        Ok(t)
    }

    pub fn zero(dim: usize) -> Self {
        let z = ExactMatrix::zeros(dim, dim);
        Self { n0: z.clone(), h: z.clone(), n0_plus: z }
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    pub fn verify(&self) -> Result<()> {
        if self.h.commutator(&self.n0) != -self.n0.scale_q(&rat(2, 1)) {
            return Err(Error::invariant("[H, N0] != -2 N0"));
        }
        if self.h.commutator(&self.n0_plus) != self.n0_plus.scale_q(&rat(2, 1)) {
            return Err(Error::invariant("[H, N0+] != 2 N0+"));
        }
        if self.n0_plus.commutator(&self.n0) != self.h {
            return Err(Error::invariant("[N0+, N0] != H"));
        }
        self.h_grading()?;
        Ok(())
    }

    /// H as a grading (eigenspaces).
    pub fn h_grading(&self) -> Result<Grading> {
        let d = self.dim() as i32;
        Grading::from_matrix(&self.h, -d..=d)
    }

    /// X⁺ = ½H + (i/2)(N₀ + N₀⁺).
    pub fn x_plus(&self) -> ExactMatrix {
        &self.h.scale_q(&rat(1, 2)) + &(&self.n0 + &self.n0_plus).scale(&GR::new(rat(0, 1), rat(1, 2)))
    }

    /// X⁻ = ½H − (i/2)(N₀ + N₀⁺).
    pub fn x_minus(&self) -> ExactMatrix {
        &self.h.scale_q(&rat(1, 2)) - &(&self.n0 + &self.n0_plus).scale(&GR::new(rat(0, 1), rat(1, 2)))
    }

    /// Z = i(N₀ − N₀⁺).
    pub fn z(&self) -> ExactMatrix {
        (&self.n0 - &self.n0_plus).scale(&GR::i())
    }
}

/// The N₀⁺ completing (N₀, H) to an sl₂-triple; it is the unique solution
/// of [N₀⁺, N₀] = H in the ad H-weight 2 space.
pub fn sl2_complete(n0: &ExactMatrix, h: &ExactMatrix) -> Result<ExactMatrix> {
    let dim = h.rows();
    if h.commutator(n0) != -n0.scale_q(&rat(2, 1)) {
        return Err(Error::invalid("[H, N0] != -2 N0: not part of an sl2-triple"));
    }
    let d = dim as i32;
    let hg = Grading::from_matrix(h, -d..=d).map_err(|_| Error::invalid("H is not semisimple with integer eigenvalues"))?;
    let frame = hg.frame();
    let basis = frame.basis_where(|a, _| a == 2);
    let target = h.to_vec();
    let cols: Vec<_> = basis.iter().map(|b| b.commutator(n0).to_vec()).collect();
    let x = if cols.is_empty() {
        if h.is_zero() {
            ExactMatrix::zeros(dim, dim)
        } else {
            return Err(Error::invalid("no sl2 completion of (N0, H)"));
        }
    } else {
        let a = ExactMatrix::from_columns(&cols);
        let sol = solve_linear(&a, &target).0.ok_or_else(|| Error::invalid("no sl2 completion of (N0, H)"))?;
        basis.iter().zip(&sol).fold(ExactMatrix::zeros(dim, dim), |acc, (b, c)| &acc + &b.scale(c))
    };
    Sl2Triple::new(n0.clone(), h.clone(), x.clone())?;
    Ok(x)
}

/// Matrix of ad X on gl(V) in the basis E_{ij}, index i·n + j.
pub fn ad_operator(x: &ExactMatrix) -> ExactMatrix {
    let n = x.rows();
    let cols: Vec<_> = (0..n * n).map(|k| x.commutator(&ExactMatrix::e(n, k / n, k % n)).to_vec()).collect();
    ExactMatrix::from_columns(&cols)
}
