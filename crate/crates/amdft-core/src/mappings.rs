//! Index permutations: Rader reorder and pre-additions, and the Good/CRT
//! multidimensional input and output maps.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::ntheory::{gcd, inv_mod, is_prime, pow_mod, primitive_root};

/// A permutation of `0..size`, stored with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMap {
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl IndexMap {
    pub fn new(table: Vec<usize>) -> Result<IndexMap> {
        let mut inverse = vec![usize::MAX; table.len()];
        for (i, &t) in table.iter().enumerate() {
            if t >= table.len() || inverse[t] != usize::MAX {
                return Err(invalid!("index table is not a bijection (entry {i} -> {t})"));
            }
            inverse[t] = i;
        }
        Ok(IndexMap { table, inverse })
    }

    pub fn identity(n: usize) -> IndexMap {
        IndexMap { table: (0..n).collect(), inverse: (0..n).collect() }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn get(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }
}

/// Rader reorder for a prime `q`: position `n` of the convolution reads index
/// `g^n`, position `k` of the output lands on bin `g^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaderMaps {
    pub q: u64,
    pub g: u64,
    /// `input[n] = g^n mod q`
    pub input: Vec<u64>,
    /// `output[k] = g^k mod q`
    pub output: Vec<u64>,
}

pub fn rader_maps(q: u64) -> Result<RaderMaps> {
    if q < 3 || !is_prime(q) {
        return Err(invalid!("Rader maps need an odd prime, got {q}"));
    }
    let g = primitive_root(q)?;
    let powers: Vec<u64> = (0..q - 1).map(|n| pow_mod(g, n, q)).collect();
    Ok(RaderMaps { q, g, input: powers.clone(), output: powers })
}

/// Pre-addition stage: `x'(0) = sum x`, `x'(n) = x(q-n) - x(0)`.
pub fn rader_preadd(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let q = x.len();
    if q < 2 || !is_prime(q as u64) {
        return Err(invalid!("pre-addition needs a prime length, got {q}"));
    }
    let mut out = Vec::with_capacity(q);
    out.push(x.iter().sum());
    for n in 1..q {
        out.push(x[q - n] - x[0]);
    }
    Ok(out)
}

/// Nonzero bins of the q-point DFT from the Rader maps and pre-additions.
///
/// With both maps running forward the sum is a correlation,
/// `X(g^k) = sum_n x'(g^n) W^(-g^(k+n))`; reversing the input positions turns
/// it into the circular convolution used by the modules.
pub fn rader_dft(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let q = x.len() as u64;
    let maps = rader_maps(q)?;
    let xp = rader_preadd(x)?;
    let m = (q - 1) as usize;
    let u: Vec<Complex64> = (0..m).map(|n| xp[maps.input[(m - n) % m] as usize]).collect();
    let h: Vec<Complex64> = (0..m).map(|j| crate::engine::twiddle(q, q - maps.output[j])).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); q as usize];
    out[0] = xp[0];
    for k in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 0..m {
            acc += u[n] * h[(k + m - n) % m];
        }
        out[maps.output[k] as usize] = acc;
    }
    Ok(out)
}

/// Pairwise coprime factorization `N = prod dims`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexShape {
    dims: Vec<usize>,
    n: usize,
}

impl MultiIndexShape {
    pub fn new(dims: Vec<usize>) -> Result<MultiIndexShape> {
        for (i, &a) in dims.iter().enumerate() {
            if a == 0 {
                return Err(invalid!("zero dimension"));
            }
            for &b in &dims[i + 1..] {
                if gcd(a as u64, b as u64) != 1 {
                    return Err(invalid!("dimensions {a} and {b} are not coprime"));
                }
            }
        }
        let n = dims.iter().product();
        Ok(MultiIndexShape { dims, n })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `N / N_i` per dimension.
    pub fn strides(&self) -> Vec<usize> {
        self.dims.iter().map(|&d| self.n / d).collect()
    }

    /// Row-major multi-index of a flat position.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (i, &d) in self.dims.iter().enumerate().rev() {
            idx[i] = flat % d;
            flat /= d;
        }
        idx
    }
}

/// Row-major multi-index `(n_i)` to the linear index `sum (N/N_i) n_i mod N`.
pub fn crt_input_map(shape: &MultiIndexShape) -> IndexMap {
    let n = shape.size();
    let strides = shape.strides();
    let table = (0..n)
        .map(|flat| shape.unflatten(flat).iter().zip(&strides).map(|(i, s)| i * s).sum::<usize>() % n)
        .collect();
    IndexMap::new(table).expect("CRT map is a bijection")
}

/// Row-major multi-bin `(k_i)` to the 1-D bin congruent to `k_i` mod `N_i`.
pub fn output_map(shape: &MultiIndexShape) -> IndexMap {
    let n = shape.size();
    let coef: Vec<usize> = shape
        .dims()
        .iter()
        .zip(shape.strides())
        .map(|(&d, s)| {
            let inv = if d == 1 { 0 } else { inv_mod(s as u64 % d as u64, d as u64).expect("coprime") as usize };
            (s * inv) % n.max(1)
        })
        .collect();
    let table = (0..n)
        .map(|flat| shape.unflatten(flat).iter().zip(&coef).map(|(k, c)| k * c % n).sum::<usize>() % n)
        .collect();
    IndexMap::new(table).expect("CRT output map is a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::naive_dft;

    #[test]
    fn rader_examples() {
        let m = rader_maps(3).unwrap();
        assert_eq!(m.input, [1, 2]);
        // x'(1), x'(2) read samples x(2), x(1)
        let samples: Vec<u64> = m.input.iter().map(|a| 3 - a).collect();
        assert_eq!(samples, [2, 1]);
        assert_eq!(rader_maps(5).unwrap().input[0], 1);
        let mut seven = rader_maps(7).unwrap().output;
        seven.sort();
        assert_eq!(seven, [1, 2, 3, 4, 5, 6]);
        assert!(rader_maps(9).is_err());
    }

    #[test]
    fn preadd_examples() {
        let c = |r: f64| Complex64::new(r, 0.0);
        assert_eq!(rader_preadd(&[c(1.0), c(0.0), c(0.0)]).unwrap(), [c(1.0), c(-1.0), c(-1.0)]);
        assert_eq!(rader_preadd(&[c(1.0); 5]).unwrap(), [c(5.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn rader_reconstructs_dft() {
        for q in (3..=97u64).filter(|&q| is_prime(q)) {
            let x: Vec<Complex64> = (0..q).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos())).collect();
            let want = naive_dft(&x);
            let got = rader_dft(&x).unwrap();
            let err: f64 = want.iter().zip(&got).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            let norm: f64 = want.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            assert!(err / norm < 1e-11, "q = {q}");
        }
    }

    #[test]
    fn crt_maps() {
        let s = MultiIndexShape::new(vec![3, 5]).unwrap();
        let m = crt_input_map(&s);
        assert_eq!(m.get(5 + 1), 8);
        assert_eq!(m.get(0), 0);
        let o = output_map(&s);
        for flat in 0..15 {
            let k = s.unflatten(flat);
            let bin = o.get(flat);
            assert_eq!((bin % 3, bin % 5), (k[0], k[1]));
        }
        assert!(MultiIndexShape::new(vec![6, 4]).is_err());
    }

    #[test]
    fn good_thomas_pipeline() {
        for dims in [vec![3, 5], vec![5, 7], vec![9, 5], vec![9, 7], vec![8, 3, 5]] {
            let s = MultiIndexShape::new(dims.clone()).unwrap();
            let n = s.size();
            let x: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64).sin(), (2.0 * i as f64).cos())).collect();
            let inp = crt_input_map(&s);
            let mut t: Vec<Complex64> = (0..n).map(|f| x[inp.get(f)]).collect();
            // per-dimension naive DFTs
            let mut stride = n;
            for &d in &dims {
                stride /= d;
                let outer = n / (d * stride);
                for o in 0..outer {
                    for i in 0..stride {
                        let base = o * d * stride + i;
                        let line: Vec<Complex64> = (0..d).map(|k| t[base + k * stride]).collect();
                        let y = naive_dft(&line);
                        for k in 0..d {
                            t[base + k * stride] = y[k];
                        }
                    }
                }
            }
            let out = output_map(&s);
            let mut got = vec![Complex64::new(0.0, 0.0); n];
            for f in 0..n {
                got[out.get(f)] = t[f];
            }
            let want = naive_dft(&x);
            let err: f64 = want.iter().zip(&got).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-10 * n as f64, "dims {dims:?}");
        }
    }
}
