use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::{unit_root, ZERO};

/// Largest supported transform length.
pub const MAX_DFT_LEN: usize = 10_000_000;

/// Direction of a discrete Fourier transform: `out[y] = Σ in[x] exp(±2πi xy/N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Direction::Plus),
            -1 => Ok(Direction::Minus),
            s => Err(Error::InvalidArgument(format!("transform sign must be ±1, got {s}"))),
        }
    }

    fn root(self, j: u64, n: u64) -> Complex64 {
        match self {
            Direction::Plus => unit_root(j, n),
            Direction::Minus => unit_root(j, n).conj(),
        }
    }
}

/// Iterative radix-2 FFT of a fixed power-of-two length.
#[derive(Debug, Clone)]
struct Radix2 {
    n: usize,
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let twiddles = (0..n / 2).map(|k| unit_root(k as u64, n as u64)).collect();
        Self { n, twiddles }
    }

    fn run(&self, buf: &mut [Complex64], dir: Direction) {
        let n = self.n;
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = if dir == Direction::Minus { w.conj() } else { w };
                    let u = buf[start + k];
                    let v = buf[start + k + half] * w;
                    buf[start + k] = u + v;
                    buf[start + k + half] = u - v;
                }
            }
            len <<= 1;
        }
    }
}

/// A reusable plan for DFTs of length `n`; arbitrary `n` via Bluestein's chirp-z reduction.
#[derive(Debug, Clone)]
pub struct DftPlan {
    n: usize,
    kind: PlanKind,
}

#[derive(Debug, Clone)]
enum PlanKind {
    Pow2(Radix2),
    Bluestein {
        fft: Radix2,
        /// `exp(πi k²/n)` for `k < n`.
        chirp: Vec<Complex64>,
        /// Transformed conjugate chirp for each direction.
        kernel_plus: Vec<Complex64>,
        kernel_minus: Vec<Complex64>,
    },
}

impl DftPlan {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("DFT length must be positive".into()));
        }
        if n > MAX_DFT_LEN {
            return Err(Error::Capacity(format!(
                "DFT length {n} exceeds {MAX_DFT_LEN}"
            )));
        }
        if n.is_power_of_two() {
            return Ok(Self {
                n,
                kind: PlanKind::Pow2(Radix2::new(n)),
            });
        }
        let m = (2 * n - 1).next_power_of_two();
        let fft = Radix2::new(m);
        let two_n = 2 * n as u64;
        let chirp: Vec<Complex64> = (0..n as u64)
            .map(|k| unit_root((k * k) % two_n, two_n))
            .collect();
        let kernel = |dir: Direction| {
            let mut b = vec![ZERO; m];
            for k in 0..n {
                let c = match dir {
                    Direction::Plus => chirp[k].conj(),
                    Direction::Minus => chirp[k],
                };
                b[k] = c;
                if k > 0 {
                    b[m - k] = c;
                }
            }
            fft.run(&mut b, Direction::Minus);
            b
        };
        let kernel_plus = kernel(Direction::Plus);
        let kernel_minus = kernel(Direction::Minus);
        Ok(Self {
            n,
            kind: PlanKind::Bluestein {
                fft,
                chirp,
                kernel_plus,
                kernel_minus,
            },
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized transform of `input`, which must have length `n`.
    pub fn apply(&self, input: &[Complex64], dir: Direction) -> Vec<Complex64> {
        assert_eq!(input.len(), self.n, "DFT input length");
        match &self.kind {
            PlanKind::Pow2(fft) => {
                let mut buf = input.to_vec();
                fft.run(&mut buf, dir);
                buf
            }
            PlanKind::Bluestein {
                fft,
                chirp,
                kernel_plus,
                kernel_minus,
            } => {
                let m = fft.n;
                let c = |k: usize| match dir {
                    Direction::Plus => chirp[k],
                    Direction::Minus => chirp[k].conj(),
                };
                let mut a = vec![ZERO; m];
                for (k, x) in input.iter().enumerate() {
                    a[k] = x * c(k);
                }
                fft.run(&mut a, Direction::Minus);
                let kernel = match dir {
                    Direction::Plus => kernel_plus,
                    Direction::Minus => kernel_minus,
                };
                for (x, b) in a.iter_mut().zip(kernel) {
                    *x *= b;
                }
                fft.run(&mut a, Direction::Plus);
                let scale = 1.0 / m as f64;
                (0..self.n).map(|y| a[y] * c(y) * scale).collect()
            }
        }
    }
}

/// One-shot unnormalized DFT.
pub fn dft(input: &[Complex64], dir: Direction) -> Result<Vec<Complex64>> {
    Ok(DftPlan::new(input.len())?.apply(input, dir))
}

/// `O(N²)` reference transform.
pub fn naive_dft(input: &[Complex64], dir: Direction) -> Vec<Complex64> {
    let n = input.len() as u64;
    (0..n)
        .map(|y| {
            input
                .iter()
                .enumerate()
                .map(|(x, v)| v * dir.root((x as u64 * y) % n, n))
                .sum()
        })
        .collect()
}
