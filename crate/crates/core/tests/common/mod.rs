//! A second, deliberately naive implementation of the star operators, used
//! to cross-check the library. It shares no code with `capable_core` beyond
//! the coordinate order of `V(n)`: `v_ji` for `j > i`, sorted by `(j, i)`.

#![allow(dead_code)]

use std::collections::HashMap;

pub struct Naive {
    pub p: u64,
    pub n: usize,
    pub v: Vec<(usize, usize)>,
    w: HashMap<(usize, usize, usize), usize>,
    /// `phi[k - 1][c]` is the image of the `c`-th basis vector of `V`.
    phi: Vec<Vec<Vec<u64>>>,
}

impl Naive {
    pub fn new(p: u64, n: usize) -> Self {
        let mut v = Vec::new();
        for j in 1..=n {
            for i in 1..j {
                v.push((j, i));
            }
        }
        let mut w = HashMap::new();
        for j in 1..=n {
            for i in 1..j {
                for k in i..=n {
                    let next = w.len();
                    w.insert((j, i, k), next);
                }
            }
        }
        let dim_w = w.len();
        let mut phi = Vec::new();
        for k in 1..=n {
            let mut cols = Vec::new();
            for &(j, i) in &v {
                let mut out = vec![0u64; dim_w];
                if k >= i {
                    out[w[&(j, i, k)]] = 1;
                } else {
                    out[w[&(j, k, i)]] = 1;
                    out[w[&(i, k, j)]] = p - 1;
                }
                cols.push(out);
            }
            phi.push(cols);
        }
        Self { p, n, v, w, phi }
    }

    pub fn dim_v(&self) -> usize {
        self.v.len()
    }

    pub fn dim_w(&self) -> usize {
        self.w.len()
    }

    pub fn phi_image(&self, k: usize, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.dim_w()];
        for (c, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(&self.phi[k - 1][c]) {
                *o = (*o + a * b) % self.p;
            }
        }
        out
    }

    fn star_rows(&self, x: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut rows = Vec::new();
        for k in 1..=self.n {
            for v in x {
                rows.push(self.phi_image(k, v));
            }
        }
        echelon(self.p, rows)
    }

    pub fn star_dim(&self, x: &[Vec<u64>]) -> usize {
        self.star_rows(x).len()
    }

    /// `dim X**`: the kernel of `v ↦ (φ_k(v) mod X*)_k`.
    pub fn closure_dim(&self, x: &[Vec<u64>]) -> usize {
        let star = self.star_rows(x);
        let mut images = Vec::new();
        for c in 0..self.dim_v() {
            let mut e = vec![0u64; self.dim_v()];
            e[c] = 1;
            let mut img = Vec::new();
            for k in 1..=self.n {
                img.extend(reduce_mod(self.p, &star, self.phi_image(k, &e)));
            }
            images.push(img);
        }
        self.dim_v() - rank(self.p, images)
    }

    pub fn is_closed(&self, x: &[Vec<u64>]) -> bool {
        self.closure_dim(x) == rank(self.p, x.to_vec())
    }

    /// `ψ_i(u)` for every `i`, as vectors of `V`.
    pub fn u_star(&self, u: &[u64]) -> Vec<Vec<u64>> {
        (1..=self.n)
            .map(|i| {
                let mut out = vec![0u64; self.dim_v()];
                for (c, &(a, b)) in self.v.iter().enumerate() {
                    if b == i {
                        out[c] = (out[c] + u[a - 1]) % self.p;
                    } else if a == i {
                        out[c] = (out[c] + (self.p - u[b - 1])) % self.p;
                    }
                }
                out
            })
            .collect()
    }

    /// Whether `⟨u⟩* ⊆ X` for some nonzero `u`, by trying every line of `U`.
    pub fn has_central_line(&self, x: &[Vec<u64>]) -> bool {
        let r = rank(self.p, x.to_vec());
        projective_points(self.p, self.n).any(|u| {
            let mut rows = x.to_vec();
            rows.extend(self.u_star(&u));
            rank(self.p, rows) == r
        })
    }
}

fn inv(p: u64, a: u64) -> u64 {
    let mut r = 1;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row echelon form with unit pivots, zero rows dropped.
pub fn echelon(p: u64, mut rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let s = inv(p, rows[r][c]);
        for e in rows[r].iter_mut() {
            *e = *e * s % p;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (e, &q) in row.iter_mut().zip(&pivot_row) {
                    *e = (*e + p * p - f * q) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

pub fn rank(p: u64, rows: Vec<Vec<u64>>) -> usize {
    echelon(p, rows).len()
}

fn reduce_mod(p: u64, ech: &[Vec<u64>], mut v: Vec<u64>) -> Vec<u64> {
    for row in ech {
        let c = row.iter().position(|&e| e != 0).expect("no zero rows");
        let f = v[c];
        if f != 0 {
            for (e, &q) in v.iter_mut().zip(row) {
                *e = (*e + p * p - f * q) % p;
            }
        }
    }
    v
}

/// One representative per line of `F_p^m`: first nonzero entry equal to 1.
pub fn projective_points(p: u64, m: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(m as u32);
    (1..total).filter_map(move |mut code| {
        let mut v = vec![0u64; m];
        for e in v.iter_mut() {
            *e = code % p;
            code /= p;
        }
        let first = v.iter().position(|&e| e != 0)?;
        (v[first] == 1).then_some(v)
    })
}

/// Every hyperplane of `F_p^m`, as a basis of the kernel of a functional.
pub fn hyperplanes(p: u64, m: usize) -> impl Iterator<Item = Vec<Vec<u64>>> {
    projective_points(p, m).map(move |f| {
        let c0 = f.iter().position(|&e| e != 0).unwrap();
        (0..m)
            .filter(|&c| c != c0)
            .map(|c| {
                let mut v = vec![0u64; m];
                v[c] = 1;
                v[c0] = (p - f[c]) % p;
                v
            })
            .collect()
    })
}

pub fn to_u64(rows: impl Iterator<Item = impl AsRef<[u32]>>) -> Vec<Vec<u64>> {
    rows.map(|r| r.as_ref().iter().map(|&e| e as u64).collect())
        .collect()
}
