//! Small dense complex matrices used as coefficients (d=1 is the scalar
//! case). The spectral norm uses the 2x2 closed form or a short power
//! iteration on M^*M for larger d.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    dim: usize,
    /// row-major, length dim*dim
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        CMat {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn scalar(c: Complex64) -> Self {
        CMat { dim: 1, data: vec![c] }
    }

    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim);
        CMat {
            dim,
            data: entries.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add_assign(&mut self, other: &CMat) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.dim, other.dim);
        CMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in self.data.iter_mut() {
            *a *= c;
        }
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = CMat::zeros(d);
        for i in 0..d {
            for l in 0..d {
                let a = self.get(i, l);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.get(l, j);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMat {
        let d = self.dim;
        let mut out = CMat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// y += M x for slices of length dim.
    pub fn apply_add(&self, x: &[Complex64], y: &mut [Complex64]) {
        let d = self.dim;
        debug_assert_eq!(x.len(), d);
        debug_assert_eq!(y.len(), d);
        for i in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..d {
                acc += self.data[i * d + j] * x[j];
            }
            y[i] += acc;
        }
    }

    /// Largest singular value. Exact closed form for d <= 2; power iteration
    /// on the Hermitian M^*M otherwise (converges from below, accurate to
    /// ~1e-14 at these sizes).
    pub fn spectral_norm(&self) -> f64 {
        match self.dim {
            0 => 0.0,
            1 => self.data[0].norm(),
            2 => {
                let t: f64 = self.data.iter().map(|c| c.norm_sqr()).sum();
                let det = self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0);
                let d2 = det.norm_sqr();
                let disc = (t * t - 4.0 * d2).max(0.0);
                (0.5 * (t + disc.sqrt())).sqrt()
            }
            d => {
                // H = M^* M
                let h = self.adjoint().mul(self);
                let mut best = 0.0f64;
                // starts: each basis vector, then the all-ones vector
                for start in 0..=d {
                    let mut v: Vec<Complex64> = (0..d)
                        .map(|i| {
                            if start == d || i == start {
                                Complex64::new(1.0, 0.0)
                            } else {
                                Complex64::new(0.0, 0.0)
                            }
                        })
                        .collect();
                    let mut prev = 0.0f64;
                    for _ in 0..500 {
                        let mut w = vec![Complex64::new(0.0, 0.0); d];
                        h.apply_add(&v, &mut w);
                        let n = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                        if n == 0.0 {
                            break;
                        }
                        for c in w.iter_mut() {
                            *c /= n;
                        }
                        if (n - prev).abs() <= 1e-16 * n.max(1.0) {
                            prev = n;
                            break;
                        }
                        prev = n;
                        v = w;
                    }
                    best = best.max(prev);
                }
                best.sqrt()
            }
        }
    }
}
