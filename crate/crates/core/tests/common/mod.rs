//! Random generators and an independent brute-force hom oracle shared by
//! the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use quiver_core::linalg::{self, CMat};
use quiver_core::rep;
use quiver_core::{Arrow, Quiver, Representation};
use rand::Rng;

pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `dim Hom(a, b)` by applying the intertwining map to every elementary
/// matrix unit and taking the rank of the realified image.
pub fn brute_hom_dim(a: &Representation, b: &Representation) -> usize {
    let q = a.quiver();
    let mut units: Vec<(usize, usize, usize)> = Vec::new();
    for v in 0..q.vertex_count() {
        for i in 0..b.dims()[v] {
            for j in 0..a.dims()[v] {
                units.push((v, i, j));
            }
        }
    }
    if units.is_empty() {
        return 0;
    }
    let mut rows = 0;
    for k in 0..q.arrow_count() {
        let (_, t) = q.ends(k);
        rows += b.dims()[t] * a.maps()[k].ncols();
    }
    // complex column z contributes [re; im] for z and [-im; re] for i*z
    let mut m = DMatrix::<f64>::zeros(2 * rows.max(1), 2 * units.len());
    for (col, &(v, i, j)) in units.iter().enumerate() {
        let mut r0 = 0;
        for k in 0..q.arrow_count() {
            let (s, t) = q.ends(k);
            let f = &a.maps()[k];
            let g = &b.maps()[k];
            let mut img = CMat::zeros(b.dims()[t], f.ncols());
            if t == v {
                // E_ij f: row i gets row j of f
                for c in 0..f.ncols() {
                    img[(i, c)] += f[(j, c)];
                }
            }
            if s == v {
                // g E_ij: column j gets column i of g
                for r in 0..g.nrows() {
                    img[(r, j)] -= g[(r, i)];
                }
            }
            for r in 0..img.nrows() {
                for c in 0..img.ncols() {
                    let z = img[(r, c)];
                    let row = r0 + r * img.ncols() + c;
                    m[(2 * row, 2 * col)] = z.re;
                    m[(2 * row + 1, 2 * col)] = z.im;
                    m[(2 * row, 2 * col + 1)] = -z.im;
                    m[(2 * row + 1, 2 * col + 1)] = z.re;
                }
            }
            r0 += img.nrows() * img.ncols();
        }
    }
    // rank from a column-pivoted QR, independent of the SVD used by the library
    let r = m.col_piv_qr().unpack_r();
    let diag: Vec<f64> = (0..r.nrows().min(r.ncols())).map(|i| r[(i, i)].abs()).collect();
    let rmax = diag.iter().cloned().fold(0.0, f64::max);
    let rank = diag.iter().filter(|&&d| d > 1e-9 * rmax.max(1.0)).count();
    units.len() - rank / 2
}

pub fn brute_end_dim(a: &Representation) -> usize {
    brute_hom_dim(a, a)
}

#[derive(Clone, Copy, Debug)]
pub struct QuiverShape {
    pub vertices: usize,
    pub arrows: usize,
    pub acyclic: bool,
    /// Force at least one loop and one pair of parallel arrows.
    pub loops_and_multi: bool,
}

pub fn random_quiver<R: Rng>(rng: &mut R, shape: QuiverShape) -> Quiver {
    let n = shape.vertices;
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut ends: Vec<(usize, usize)> = Vec::new();
    if shape.loops_and_multi {
        let v = rng.random_range(0..n);
        ends.push((v, v));
        let s = rng.random_range(0..n);
        let t = rng.random_range(0..n);
        ends.push((s, t));
        ends.push((s, t));
    }
    let wanted = if shape.acyclic && n < 2 { ends.len() } else { shape.arrows.max(ends.len()) };
    while ends.len() < wanted {
        let s = rng.random_range(0..n);
        let t = rng.random_range(0..n);
        if shape.acyclic {
            if s == t {
                continue;
            }
            ends.push((s.min(t), s.max(t)));
        } else {
            ends.push((s, t));
        }
    }
    let arrows = ends
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| Arrow::new(format!("e{k}"), names[s].clone(), names[t].clone()))
        .collect();
    Quiver::new(names, arrows).unwrap()
}

/// Random maps of the given dimensions; each map is zero with probability
/// `zero_prob`.
pub fn random_maps_rep<R: Rng>(rng: &mut R, q: &Quiver, dims: &[usize], zero_prob: f64) -> Representation {
    let maps = (0..q.arrow_count())
        .map(|k| {
            let (s, t) = q.ends(k);
            if rng.random_bool(zero_prob) {
                CMat::zeros(dims[t], dims[s])
            } else {
                linalg::random_matrix(rng, dims[t], dims[s])
            }
        })
        .collect();
    Representation::new(q.clone(), dims.to_vec(), maps).unwrap()
}

pub fn random_rep<R: Rng>(rng: &mut R, q: &Quiver, max_dim: usize, zero_prob: f64) -> Representation {
    loop {
        let dims: Vec<usize> = (0..q.vertex_count()).map(|_| rng.random_range(0..=max_dim)).collect();
        if dims.iter().sum::<usize>() > 0 {
            return random_maps_rep(rng, q, &dims, zero_prob);
        }
    }
}

/// Random invertible matrix with condition number bounded by construction.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let u = linalg::random_unitary(rng, n);
    let v = linalg::random_unitary(rng, n);
    let d = CMat::from_fn(n, n, |i, j| if i == j { linalg::real(rng.random_range(0.5..2.0)) } else { linalg::ZERO });
    u * d * v
}

/// `a ⊕ b` moved to a random basis at every vertex.
pub fn hidden_sum<R: Rng>(rng: &mut R, a: &Representation, b: &Representation) -> Representation {
    let sum = rep::direct_sum(a, b).unwrap();
    let phi: Vec<CMat> = sum.dims().iter().map(|&d| random_invertible(rng, d)).collect();
    sum.transport(&phi).unwrap()
}

pub fn random_unitaries<R: Rng>(rng: &mut R, dims: &[usize]) -> Vec<CMat> {
    dims.iter().map(|&d| linalg::random_unitary(rng, d)).collect()
}
