//! Exact spectral certificates. Cospectrality is decided on integer
//! characteristic polynomials computed in arbitrary precision; floating
//! eigenvalues exist only for human-readable reports.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::blocks::block_matrix;
use crate::error::{Error, Result};
use crate::graph::ClusteredGraph;
use crate::matrix::IntMatrix;

/// Monic integer characteristic polynomial; `coefficients[k]` multiplies
/// `x^k` and the degree equals the vertex count of the originating graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharPoly {
    coefficients: Vec<BigInt>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Coefficient of `x^k`.
    pub fn coefficient(&self, k: usize) -> &BigInt {
        &self.coefficients[k]
    }

    /// Coefficients in ascending power order (constant term first).
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Coefficients in descending power order (leading term first).
    pub fn coefficients_descending(&self) -> Vec<BigInt> {
        self.coefficients.iter().rev().cloned().collect()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Exact characteristic polynomial of the adjacency matrix of `g`, by the
/// Faddeev-LeVerrier recurrence over `BigInt` (every division is exact).
pub fn char_poly(g: &ClusteredGraph) -> CharPoly {
    char_poly_of_matrix(&block_matrix(g).dense())
}

/// Faddeev-LeVerrier on an arbitrary square integer matrix.
pub fn char_poly_of_matrix(a: &IntMatrix) -> CharPoly {
    let n = a.order();
    let mut coefficients = vec![BigInt::zero(); n + 1];
    coefficients[n] = BigInt::one();
    if n == 0 {
        return CharPoly { coefficients };
    }
    let big_a: Vec<Vec<BigInt>> = a
        .rows()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    // M_1 = A, c_{n-k} = -tr(M_k)/k, M_{k+1} = A (M_k + c_{n-k} I)
    let mut m: Vec<Vec<BigInt>> = big_a.clone();
    for k in 1..=n {
        let trace: BigInt = (0..n).map(|i| m[i][i].clone()).sum();
        let c = -trace / BigInt::from(k as i64);
        coefficients[n - k] = c.clone();
        if k == n {
            break;
        }
        for i in 0..n {
            m[i][i] += &c;
        }
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if big_a[i][l].is_zero() {
                    continue;
                }
                if big_a[i][l].is_one() {
                    // adjacency entries are 0/1, so this is a row addition
                    for j in 0..n {
                        next[i][j] += &m[l][j];
                    }
                } else {
                    for j in 0..n {
                        next[i][j] += &big_a[i][l] * &m[l][j];
                    }
                }
            }
        }
        m = next;
    }
    CharPoly { coefficients }
}

/// Exact cospectrality: coefficient-wise equality of the two characteristic
/// polynomials. Errors if the vertex counts differ.
pub fn are_cospectral(g: &ClusteredGraph, h: &ClusteredGraph) -> Result<bool> {
    if g.vertex_count() != h.vertex_count() {
        return Err(Error::VertexCountMismatch(g.vertex_count(), h.vertex_count()));
    }
    Ok(char_poly(g) == char_poly(h))
}

/// Eigenvalues of the (symmetric) adjacency matrix, sorted descending.
pub fn approx_eigenvalues(g: &ClusteredGraph) -> Vec<f64> {
    let dense = block_matrix(g).dense();
    let n = dense.order();
    let mat = DMatrix::from_fn(n, n, |i, j| dense.get(i, j) as f64);
    let mut eigen: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigen.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigen
}

/// Fast exact cospectrality test via power-sum traces in `i128`, with early
/// exit on the first differing trace. Sound and complete for graphs small
/// enough for the bound (`tr(A^k)` for `k = 1..=n` determines the
/// characteristic polynomial over the rationals). Returns `None` when the
/// graphs are too large for the fixed-width path.
pub(crate) fn traces_equal_fast(g: &ClusteredGraph, h: &ClusteredGraph) -> Option<bool> {
    let n = g.vertex_count();
    if n != h.vertex_count() || n > 16 {
        return None;
    }
    let a = small_adjacency(g);
    let b = small_adjacency(h);
    let mut pa = a.clone();
    let mut pb = b.clone();
    for _ in 1..=n {
        let ta: i128 = (0..n).map(|i| pa[i * n + i]).sum();
        let tb: i128 = (0..n).map(|i| pb[i * n + i]).sum();
        if ta != tb {
            return Some(false);
        }
        pa = mul_small(&a, &pa, n);
        pb = mul_small(&b, &pb, n);
    }
    Some(true)
}

fn small_adjacency(g: &ClusteredGraph) -> Vec<i128> {
    let n = g.vertex_count();
    let m = g.cluster_size();
    let mut out = vec![0i128; n * n];
    for (u, v) in g.edges() {
        let (i, j) = (u.index(m), v.index(m));
        out[i * n + j] = 1;
        out[j * n + i] = 1;
    }
    out
}

fn mul_small(a: &[i128], b: &[i128], n: usize) -> Vec<i128> {
    let mut out = vec![0i128; n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += b[k * n + j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;
    use crate::transpose::partial_transpose;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn k2() -> ClusteredGraph {
        ClusteredGraph::from_edges(1, 2, [edge((1, 1), (1, 2))]).unwrap()
    }

    fn g3() -> ClusteredGraph {
        ClusteredGraph::from_edges(
            2,
            3,
            [
                edge((1, 1), (2, 1)),
                edge((1, 1), (2, 2)),
                edge((1, 2), (2, 2)),
                edge((1, 3), (2, 2)),
                edge((1, 3), (2, 3)),
                edge((2, 1), (2, 2)),
                edge((2, 2), (2, 3)),
            ],
        )
        .unwrap()
    }

    /// Two 4-stars joined leaf-to-leaf; its GTPT joins leaf-to-center.
    fn twin_stars() -> ClusteredGraph {
        ClusteredGraph::from_edges(
            2,
            4,
            [
                edge((2, 1), (2, 2)),
                edge((2, 1), (2, 3)),
                edge((2, 1), (2, 4)),
                edge((1, 1), (1, 2)),
                edge((1, 2), (1, 3)),
                edge((1, 2), (1, 4)),
                edge((1, 4), (2, 2)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn char_poly_of_single_edge() {
        let p = char_poly(&k2());
        assert_eq!(p.coefficients(), &[big(-1), big(0), big(1)]);
        assert_eq!(p.eval(&big(2)), big(3));
    }

    #[test]
    fn char_poly_is_monic_with_zero_trace_term() {
        let p = char_poly(&g3());
        assert_eq!(p.degree(), 6);
        assert!(p.coefficient(6).is_one());
        assert!(p.coefficient(5).is_zero());
        // x^(deg-2) coefficient is minus the edge count
        assert_eq!(*p.coefficient(4), big(-7));
    }

    #[test]
    fn g3_is_cospectral_with_its_transpose() {
        let g = g3();
        let t = partial_transpose(&g);
        assert_ne!(g, t);
        assert!(are_cospectral(&g, &t).unwrap());
        assert!(are_cospectral(&g, &g).unwrap());
    }

    #[test]
    fn twin_stars_polynomials_match_closed_forms() {
        let g = twin_stars();
        let t = partial_transpose(&g);
        // x^8 - 7x^6 + 13x^4 - 4x^2 and x^8 - 7x^6 + 11x^4
        let pg = char_poly(&g);
        assert_eq!(
            pg.coefficients(),
            &[big(0), big(0), big(-4), big(0), big(13), big(0), big(-7), big(0), big(1)]
        );
        let pt = char_poly(&t);
        assert_eq!(
            pt.coefficients(),
            &[big(0), big(0), big(0), big(0), big(11), big(0), big(-7), big(0), big(1)]
        );
        assert!(!are_cospectral(&g, &t).unwrap());
    }

    #[test]
    fn twin_stars_eigenvalues_match_reported_decimals() {
        let eig = approx_eigenvalues(&twin_stars());
        let expected = [2.0, 1.618, 0.618, 0.0, 0.0, -0.618, -1.618, -2.0];
        for (a, b) in eig.iter().zip(expected) {
            assert!((a - b).abs() < 1e-3, "{a} vs {b}");
        }
        let eig_t = approx_eigenvalues(&partial_transpose(&twin_stars()));
        let expected_t = [2.1490, 1.5434, 0.0, 0.0, 0.0, 0.0, -1.5434, -2.1490];
        for (a, b) in eig_t.iter().zip(expected_t) {
            assert!((a - b).abs() < 1e-3, "{a} vs {b}");
        }
    }

    #[test]
    fn k2_eigenvalues() {
        let eig = approx_eigenvalues(&k2());
        assert!((eig[0] - 1.0).abs() < 1e-9);
        assert!((eig[1] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn eigenvalue_product_matches_constant_coefficient() {
        for g in [g3(), twin_stars()] {
            let p = char_poly(&g);
            let eig = approx_eigenvalues(&g);
            let product: f64 = eig.iter().product();
            let sign = BigInt::from(if p.degree() % 2 == 0 { 1 } else { -1 });
            let expected: f64 = (p.coefficient(0) * sign).to_string().parse().unwrap();
            let scale = expected.abs().max(1.0);
            assert!((product - expected).abs() / scale < 1e-6);
        }
    }

    #[test]
    fn mismatched_vertex_counts_error() {
        let a = ClusteredGraph::edgeless(1, 2).unwrap();
        let b = ClusteredGraph::edgeless(1, 3).unwrap();
        assert!(are_cospectral(&a, &b).is_err());
    }

    #[test]
    fn fast_trace_filter_agrees_with_char_poly() {
        let g = g3();
        let t = partial_transpose(&g);
        assert_eq!(traces_equal_fast(&g, &t), Some(true));
        let s = twin_stars();
        let st = partial_transpose(&s);
        assert_eq!(traces_equal_fast(&s, &st), Some(false));
    }
}
