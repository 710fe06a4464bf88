//! Sums over total degree. All three series routes for F_B have the shape
//!
//!   sum_N r(N) * sum_{|k| = N} prod_i g_i(k_i)
//!
//! with g_i depending on one index only and r on the total degree, so the
//! inner sums are convolutions. Each g_i may carry a polynomial in a formal
//! variable X (used by the logarithmic expansion), and the convolution is
//! normalised by binomial factors so that no intermediate value overflows.

use crate::Complex;

pub(crate) type Poly = Vec<Complex>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Norm {
    /// Inputs are u_i(k) / k!, the level sum is returned divided by N!.
    InverseBinomial,
    /// Inputs are w_i(k) * k!, the level sum is returned multiplied by N!.
    Binomial,
}

fn poly_mul_add(acc: &mut Poly, a: &Poly, b: &Poly, scale: f64) {
    for (i, x) in a.iter().enumerate() {
        if x.re == 0.0 && x.im == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            acc[i + j] += x * y * scale;
        }
    }
}

/// Level sums up to `levels` (exclusive) for sequences of polynomials.
pub(crate) fn level_sums(seqs: &[Vec<Poly>], levels: usize, norm: Norm) -> Vec<Poly> {
    let mut cur: Vec<Poly> = seqs[0][..levels].to_vec();
    let mut deg = cur.iter().map(|p| p.len()).max().unwrap_or(1) - 1;
    for seq in &seqs[1..] {
        let sdeg = seq.iter().map(|p| p.len()).max().unwrap_or(1) - 1;
        let mut next = vec![vec![Complex::new(0.0, 0.0); deg + sdeg + 1]; levels];
        for (m, slot) in next.iter_mut().enumerate() {
            // binomial C(m, k) or its inverse, updated along the row
            let mut w = 1.0f64;
            for k in 0..=m {
                poly_mul_add(slot, &seq[k], &cur[m - k], w);
                let ratio = (m - k) as f64 / (k + 1) as f64;
                match norm {
                    Norm::Binomial => w *= ratio,
                    Norm::InverseBinomial => w /= ratio,
                }
            }
        }
        deg += sdeg;
        cur = next;
    }
    cur
}

/// Outcome of summing r(N) * L(N) with a geometric tail bound.
pub(crate) struct LevelSum {
    pub value: Complex,
    pub abs_sum: f64,
    pub last_term: f64,
    pub levels: usize,
    pub converged: bool,
}

/// Sums `weights(N)[j] * L(N)[j]`, doubling the number of levels until the
/// tail estimate `|term| / (1 - q)` falls below `rel_tol * |sum|` for four
/// consecutive levels.
pub(crate) fn sum_levels<S, W>(
    mut seq: S,
    mut weights: W,
    norm: Norm,
    q: f64,
    rel_tol: f64,
    max_levels: usize,
) -> LevelSum
where
    S: FnMut(usize) -> Vec<Vec<Poly>>,
    W: FnMut(usize) -> Vec<Poly>,
{
    let tail = if q < 1.0 { 1.0 / (1.0 - q) } else { f64::INFINITY };
    let mut levels = 32usize;
    loop {
        let seqs = seq(levels);
        let sums = level_sums(&seqs, levels, norm);
        let abs_seqs: Vec<Vec<Poly>> =
            seqs.iter().map(|s| s.iter().map(|p| p.iter().map(|c| Complex::new(c.norm(), 0.0)).collect()).collect()).collect();
        let abs_sums = level_sums(&abs_seqs, levels, norm);
        let w = weights(levels);
        let mut value = Complex::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        let mut small = 0;
        let mut last_term = f64::INFINITY;
        for n in 0..levels {
            let term: Complex = sums[n].iter().zip(&w[n]).map(|(a, b)| a * b).sum();
            let term_abs: f64 = abs_sums[n].iter().zip(&w[n]).map(|(a, b)| a.re * b.norm()).sum();
            value += term;
            abs_sum += term_abs;
            last_term = term_abs;
            if n >= 8 && term_abs * tail <= rel_tol * value.norm().max(1e-300) {
                small += 1;
                if small >= 4 {
                    return LevelSum { value, abs_sum, last_term, levels: n + 1, converged: true };
                }
            } else {
                small = 0;
            }
            if !term_abs.is_finite() {
                return LevelSum { value, abs_sum, last_term, levels: n + 1, converged: false };
            }
        }
        if levels >= max_levels {
            return LevelSum { value, abs_sum, last_term, levels, converged: false };
        }
        levels = (levels * 2).min(max_levels);
    }
}
