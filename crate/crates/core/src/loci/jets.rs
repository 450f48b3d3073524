//! Derivatives of `f^k` and of the cycle multiplier `(f^k)'` with respect to
//! the starting point and the parameters, for Newton systems on cycles.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A one- or two-parameter family in the coordinates used for solving.
pub(crate) trait Chart: Copy + Send + Sync {
    fn f(&self, z: Complex64) -> Complex64;
    fn fp(&self, z: Complex64) -> Complex64;
    fn fpp(&self, z: Complex64) -> Complex64;
    /// `∂f/∂p_i`
    fn df_dp(&self, z: Complex64) -> [Complex64; 2];
    /// `∂f'/∂p_i`
    fn dfp_dp(&self, z: Complex64) -> [Complex64; 2];
}

/// `z^d + c`
#[derive(Clone, Copy, Debug)]
pub(crate) struct Uni {
    pub d: u32,
    pub c: Complex64,
}

impl Chart for Uni {
    fn f(&self, z: Complex64) -> Complex64 {
        z.powu(self.d) + self.c
    }
    fn fp(&self, z: Complex64) -> Complex64 {
        f64::from(self.d) * z.powu(self.d - 1)
    }
    fn fpp(&self, z: Complex64) -> Complex64 {
        let d = self.d;
        f64::from(d * (d - 1)) * if d == 2 { ONE } else { z.powu(d - 2) }
    }
    fn df_dp(&self, _z: Complex64) -> [Complex64; 2] {
        [ONE, ZERO]
    }
    fn dfp_dp(&self, _z: Complex64) -> [Complex64; 2] {
        [ZERO, ZERO]
    }
}

/// `z^3/3 - c1 z^2/2 + b`, i.e. the cubic family with `b = a^3`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CubicB {
    pub c1: Complex64,
    pub b: Complex64,
}

impl Chart for CubicB {
    fn f(&self, z: Complex64) -> Complex64 {
        let z2 = z * z;
        z2 * z / 3.0 - self.c1 * z2 / 2.0 + self.b
    }
    fn fp(&self, z: Complex64) -> Complex64 {
        z * (z - self.c1)
    }
    fn fpp(&self, z: Complex64) -> Complex64 {
        2.0 * z - self.c1
    }
    fn df_dp(&self, z: Complex64) -> [Complex64; 2] {
        [-z * z / 2.0, ONE]
    }
    fn dfp_dp(&self, z: Complex64) -> [Complex64; 2] {
        [-z, ZERO]
    }
}

/// `f^k(z)`, `ρ = (f^k)'(z)` and their derivatives.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CycleJet {
    pub value: Complex64,
    pub rho: Complex64,
    pub dvalue_dz: Complex64,
    pub dvalue_dp: [Complex64; 2],
    pub drho_dz: Complex64,
    pub drho_dp: [Complex64; 2],
}

pub(crate) fn cycle_jet<F: Chart>(f: &F, z0: Complex64, k: u32) -> CycleJet {
    let mut z = z0;
    let mut a = ONE; // ∂z_i/∂z0 = (f^i)'(z0)
    let mut b = [ZERO, ZERO]; // ∂z_i/∂p
    let mut da_dz = ZERO;
    let mut da_dp = [ZERO, ZERO];
    for _ in 0..k {
        let fp = f.fp(z);
        let fpp = f.fpp(z);
        let dfdp = f.df_dp(z);
        let dfpdp = f.dfp_dp(z);
        // a_{i+1} = f'(z_i) a_i
        da_dz = fpp * a * a + fp * da_dz;
        for i in 0..2 {
            da_dp[i] = (fpp * b[i] + dfpdp[i]) * a + fp * da_dp[i];
            b[i] = fp * b[i] + dfdp[i];
        }
        a *= fp;
        z = f.f(z);
    }
    CycleJet {
        value: z,
        rho: a,
        dvalue_dz: a,
        dvalue_dp: b,
        drho_dz: da_dz,
        drho_dp: da_dp,
    }
}
