use crate::hypergraph::Graph;
use crate::{Error, Result};

/// Hard size cap for the dense eigensolver; it exists as a test oracle,
/// never on the hot path.
pub const SPECTRUM_NODE_CAP: usize = 2000;

/// Subset-enumeration cap for [`brute_force_graph_conductance`].
pub const CONDUCTANCE_NODE_CAP: usize = 20;

/// First two eigenpairs of a normalized graph Laplacian, ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Smallest eigenvalue; ≈ 0 whenever some vertex has positive degree.
    pub omega1: f64,
    /// Second-smallest eigenvalue; 0 iff the graph is disconnected (or
    /// has more than one zero-degree vertex).
    pub omega2: f64,
    pub vector1: Vec<f64>,
    pub vector2: Vec<f64>,
}

/// Dense normalized Laplacian `L̃ = D^{−1/2} (D − W) D^{−1/2}`, row-major.
/// Zero-degree vertices get an all-zero row/column, contributing a zero
/// eigenvalue with an indicator eigenvector.
fn normalized_laplacian(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let scale: Vec<f64> = (0..n as u32)
        .map(|v| {
            let d = g.weighted_degree(v);
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut a = vec![0.0; n * n];
    for u in 0..n {
        if scale[u] > 0.0 {
            a[u * n + u] = 1.0;
        }
        for &(v, w) in g.neighbors(u as u32) {
            a[u * n + v as usize] -= w * scale[u] * scale[v as usize];
        }
    }
    a
}

/// Cyclic Jacobi eigensolve of a symmetric matrix, in place. `a` ends up
/// (numerically) diagonal; `v` accumulates the rotations, one eigenvector
/// per column. Converges quadratically; the sweep cap is generous.
fn jacobi_eigen(a: &mut [f64], v: &mut [f64], n: usize) {
    const MAX_SWEEPS: usize = 60;
    const OFF_TOLERANCE: f64 = 1e-11;
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= OFF_TOLERANCE {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
}

/// First two eigenpairs of the normalized Laplacian of `g`.
///
/// Exact dense solve (cyclic Jacobi), capped at [`SPECTRUM_NODE_CAP`]
/// nodes. Eigenvalues are accurate to well below 1e-8 for Laplacians,
/// whose spectrum lies in [0, 2].
pub fn dense_spectrum(g: &Graph) -> Result<Spectrum> {
    let n = g.node_count();
    if n > SPECTRUM_NODE_CAP {
        return Err(Error::OracleTooLarge {
            n,
            cap: SPECTRUM_NODE_CAP,
        });
    }
    if n < 2 {
        return Err(Error::Degenerate(
            "spectrum needs at least two nodes".into(),
        ));
    }
    let mut a = normalized_laplacian(g);
    let mut vectors = vec![0.0; n * n];
    jacobi_eigen(&mut a, &mut vectors, n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let column = |j: usize| -> Vec<f64> { (0..n).map(|i| vectors[i * n + j]).collect() };
    Ok(Spectrum {
        omega1: a[order[0] * n + order[0]],
        omega2: a[order[1] * n + order[1]],
        vector1: column(order[0]),
        vector2: column(order[1]),
    })
}

/// Exact graph conductance `Φ(G) = min cut(S)/vol(S)` over all subsets
/// with `0 < vol(S) ≤ vol(V)/2`, by enumeration. Capped at
/// [`CONDUCTANCE_NODE_CAP`] nodes.
pub fn brute_force_graph_conductance(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n > CONDUCTANCE_NODE_CAP {
        return Err(Error::OracleTooLarge {
            n,
            cap: CONDUCTANCE_NODE_CAP,
        });
    }
    // Undirected edge list, each edge once.
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    for u in 0..n as u32 {
        for &(v, w) in g.neighbors(u) {
            if u < v {
                edges.push((u, v, w));
            }
        }
    }
    let degree: Vec<f64> = (0..n as u32).map(|v| g.weighted_degree(v)).collect();
    let total: f64 = degree.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("graph has no edges".into()));
    }

    let mut best = f64::INFINITY;
    for mask in 1u64..(1u64 << n) {
        let inside = |v: u32| mask >> v & 1 == 1;
        let vol: f64 = (0..n as u32)
            .filter(|&v| inside(v))
            .map(|v| degree[v as usize])
            .sum();
        if vol <= 0.0 || vol > total / 2.0 {
            continue;
        }
        let cut: f64 = edges
            .iter()
            .filter(|&&(u, v, _)| inside(u) != inside(v))
            .map(|&(_, _, w)| w)
            .sum();
        best = best.min(cut / vol);
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::Degenerate("no subset has admissible volume".into()))
    }
}
