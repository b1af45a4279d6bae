use num_complex::Complex64;

/// Dense 2x2 complex operator, row-major over `[|+l>, |-l>]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operator2 {
    pub m: [[Complex64; 2]; 2],
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Operator2 {
    pub const fn new(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub const fn identity() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn diagonal(d0: Complex64, d1: Complex64) -> Self {
        Self::new([[d0, ZERO], [ZERO, d1]])
    }

    #[inline]
    pub fn apply_to(&self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        (
            self.m[0][0] * a + self.m[0][1] * b,
            self.m[1][0] * a + self.m[1][1] * b,
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        Self::new(out)
    }

    pub fn adjoint(&self) -> Self {
        Self::new([
            [self.m[0][0].conj(), self.m[1][0].conj()],
            [self.m[0][1].conj(), self.m[1][1].conj()],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entrywise deviation of `U^dagger U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = Self::identity();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.m[i][j] - id.m[i][j]).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }
}
