use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::continuation::relative_equilibrium;
use crate::dynamics::{symplectic_j, SeriesHamiltonian};
use crate::error::{Error, Result};
use crate::normal_form::NormalFormResult;
use crate::poly_algebra::TaylorFourierSeries;

/// Largest admissible gradient of the normal form at the relative
/// equilibrium, the `p_1` row excepted.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;

/// Second derivatives of `Z^(r)` at a relative equilibrium.
///
/// Index conventions: `B = D^2_q` over the slow angles, `D = D_q D_p` with
/// rows over the slow angles and columns over all actions, `C = D^2_p`,
/// `E = D_xi D_eta` (rows `xi`), `G = D^2_xi`, `F = D^2_eta`.
#[derive(Clone, Debug)]
pub struct LinearizationBlocks {
    pub eps: f64,
    pub omega: f64,
    /// Transverse frequencies of the unperturbed problem.
    pub big_omega: Vec<f64>,
    pub b: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub e: DMatrix<Complex64>,
    pub f: DMatrix<Complex64>,
    pub g: DMatrix<Complex64>,
    /// Largest second derivative involving the fast angle.
    pub fast_angle_residual: f64,
    /// Largest imaginary part discarded from `B`, `C`, `D`.
    pub imag_residual: f64,
}

impl LinearizationBlocks {
    pub fn n1(&self) -> usize {
        self.c.nrows()
    }

    pub fn n2(&self) -> usize {
        self.e.nrows()
    }

    /// `B` with a zero row and column prepended.
    pub fn b_sharp(&self) -> DMatrix<f64> {
        let n = self.n1();
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((1, 1), (n - 1, n - 1)).copy_from(&self.b);
        m
    }

    /// `D` with a zero row prepended.
    pub fn d_sharp(&self) -> DMatrix<f64> {
        let n = self.n1();
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((1, 0), (n - 1, n)).copy_from(&self.d);
        m
    }

    /// Largest asymmetry of `B` and `C`.
    pub fn asymmetry(&self) -> f64 {
        (&self.b - self.b.transpose()).amax().max((&self.c - self.c.transpose()).amax())
    }
}

/// Extract the blocks from the complex Hessian of `z` at the real point `x`.
pub fn linearize_blocks(
    z: &TaylorFourierSeries<Complex64>,
    x: &[f64],
    eps: f64,
    omega: f64,
    big_omega: &[f64],
) -> Result<LinearizationBlocks> {
    let (n1, n2) = z.dims();
    if x.len() != 2 * (n1 + n2) || n1 < 1 || big_omega.len() != n2 {
        return Err(Error::DimensionMismatch {
            left: (2 * (n1 + n2), n2),
            right: (x.len(), big_omega.len()),
        });
    }
    let ham = SeriesHamiltonian::new(z, None);
    let der = ham.complex_derivatives(x, 2);
    for (i, g) in der.gradient.iter().enumerate() {
        if i != n1 && g.norm() > EQUILIBRIUM_TOL {
            return Err(Error::InvalidInput(format!(
                "not a relative equilibrium: gradient entry {i} is {:.3e}",
                g.norm()
            )));
        }
    }
    let h = der.hessian.expect("order 2 requested");
    let (q, p, xi, eta) = (0, n1, 2 * n1, 2 * n1 + n2);
    let mut imag: f64 = 0.0;
    let mut real_block = |r0: usize, c0: usize, nr: usize, nc: usize| {
        DMatrix::from_fn(nr, nc, |i, j| {
            let v = h[(r0 + i, c0 + j)];
            imag = imag.max(v.im.abs());
            v.re
        })
    };
    let b = real_block(q + 1, q + 1, n1 - 1, n1 - 1);
    let d = real_block(q + 1, p, n1 - 1, n1);
    let c = real_block(p, p, n1, n1);
    let cblock = |r0: usize, c0: usize| DMatrix::from_fn(n2, n2, |i, j| h[(r0 + i, c0 + j)]);
    let fast = (0..2 * (n1 + n2)).map(|j| h[(q, j)].norm()).fold(0.0, f64::max);
    Ok(LinearizationBlocks {
        eps,
        omega,
        big_omega: big_omega.to_vec(),
        b,
        d,
        c,
        e: cblock(xi, eta),
        f: cblock(eta, eta),
        g: cblock(xi, xi),
        fast_angle_residual: fast,
        imag_residual: imag,
    })
}

/// Blocks of `Z^(r)` (orders up to the normalization order) at the relative
/// equilibrium of a normal form.
pub fn linearize_normal_form(nf: &NormalFormResult<Complex64>, eps: f64) -> Result<LinearizationBlocks> {
    let h = &nf.hamiltonian;
    let z = h.total(eps, nf.order());
    let x = relative_equilibrium((h.n1, h.n2), &nf.qstar);
    linearize_blocks(&z, &x, eps, h.omega_f64(), &h.big_omega_f64())
}

/// The linear vector field of the quadratic part of `Z^(r)`, block
/// diagonal with `L11` on `(Q, P)` and `L22` on `(xi, eta)`.
#[derive(Clone, Debug)]
pub struct LinearVectorField {
    pub l11: DMatrix<f64>,
    pub l22: DMatrix<Complex64>,
}

fn transverse_change(n2: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let hi = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let mut s = DMatrix::zeros(2 * n2, 2 * n2);
    let mut s_inv = DMatrix::zeros(2 * n2, 2 * n2);
    for j in 0..n2 {
        s[(j, j)] = h;
        s[(j, n2 + j)] = -hi;
        s[(n2 + j, j)] = -hi;
        s[(n2 + j, n2 + j)] = h;
        s_inv[(j, j)] = h;
        s_inv[(j, n2 + j)] = hi;
        s_inv[(n2 + j, j)] = hi;
        s_inv[(n2 + j, n2 + j)] = h;
    }
    (s, s_inv)
}

impl LinearVectorField {
    pub fn n1(&self) -> usize {
        self.l11.nrows() / 2
    }

    pub fn n2(&self) -> usize {
        self.l22.nrows() / 2
    }

    /// `L22` in the real transverse coordinates `(x, y)`, with the largest
    /// discarded imaginary part.
    pub fn l22_real(&self) -> (DMatrix<f64>, f64) {
        let (s, s_inv) = transverse_change(self.n2());
        let m = s_inv * &self.l22 * s;
        let imag = m.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        (m.map(|c| c.re), imag)
    }

    /// The full real matrix in the layout `(q, p, x, y)`.
    pub fn real(&self) -> DMatrix<f64> {
        let (a, b) = (2 * self.n1(), 2 * self.n2());
        let mut m = DMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.l11);
        m.view_mut((a, a), (b, b)).copy_from(&self.l22_real().0);
        m
    }

    /// `Sigma(L11)` with the two zero eigenvalues of the fast pair removed:
    /// the spectrum of `L11` with the `Q_1` and `P_1` rows and columns
    /// deleted.
    pub fn slow_part(&self) -> DMatrix<f64> {
        let n1 = self.n1();
        self.l11.clone().remove_row(n1).remove_column(n1).remove_row(0).remove_column(0)
    }

    /// Symmetric real Hessian of the transverse quadratic form.
    pub fn transverse_hessian(&self) -> DMatrix<f64> {
        let (l, _) = self.l22_real();
        let n2 = self.n2();
        // K = -J L for the transverse pairs
        -symplectic_j((0, n2)) * l
    }
}

/// Assemble `L11 = [[D#^T, C], [-B#, -D#]]` and `L22 = [[E^T, F], [-G, -E]]`.
pub fn assemble_l(bl: &LinearizationBlocks) -> Result<LinearVectorField> {
    let n1 = bl.c.nrows();
    let n2 = bl.e.nrows();
    let shapes_ok = bl.c.ncols() == n1
        && n1 >= 1
        && bl.b.shape() == (n1 - 1, n1 - 1)
        && bl.d.shape() == (n1 - 1, n1)
        && bl.e.shape() == (n2, n2)
        && bl.f.shape() == (n2, n2)
        && bl.g.shape() == (n2, n2);
    if !shapes_ok {
        return Err(Error::DimensionMismatch {
            left: (n1, n2),
            right: bl.b.shape(),
        });
    }
    let bs = bl.b_sharp();
    let ds = bl.d_sharp();
    let mut l11 = DMatrix::zeros(2 * n1, 2 * n1);
    l11.view_mut((0, 0), (n1, n1)).copy_from(&ds.transpose());
    l11.view_mut((0, n1), (n1, n1)).copy_from(&bl.c);
    l11.view_mut((n1, 0), (n1, n1)).copy_from(&(-bs));
    l11.view_mut((n1, n1), (n1, n1)).copy_from(&(-ds));
    let mut l22 = DMatrix::zeros(2 * n2, 2 * n2);
    l22.view_mut((0, 0), (n2, n2)).copy_from(&bl.e.transpose());
    l22.view_mut((0, n2), (n2, n2)).copy_from(&bl.f);
    l22.view_mut((n2, 0), (n2, n2)).copy_from(&(-&bl.g));
    l22.view_mut((n2, n2), (n2, n2)).copy_from(&(-&bl.e));
    Ok(LinearVectorField { l11, l22 })
}
