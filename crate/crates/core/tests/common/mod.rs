//! Reference computations written directly on fixed-size arrays, independent
//! of the library's matrix type.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use qetlab_core::ComplexMatrix;

pub type M4 = [[C; 4]; 4];
pub type M2 = [[C; 2]; 2];

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn to_m4(m: &ComplexMatrix) -> M4 {
    let mut out = [[c(0.0); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z = m[(i, j)];
        }
    }
    out
}

pub fn from_m4(m: &M4) -> ComplexMatrix {
    ComplexMatrix::new(4, 4, m.iter().flatten().copied().collect()).unwrap()
}

pub fn outer4(v: &[C; 4]) -> M4 {
    let mut out = [[c(0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = v[i] * v[j].conj();
        }
    }
    out
}

pub fn max_diff4(a: &M4, b: &M4) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// `C[(b,b′),(c,c′)] = Σ_{a,a′} ρ[(a,c),(a′,b)]·H[(a′,b′),(a,c′)]`
pub fn c_by_index_sum(rho: &M4, h: &M4) -> M4 {
    let mut out = [[c(0.0); 4]; 4];
    for b in 0..2 {
        for bp in 0..2 {
            for cc in 0..2 {
                for cp in 0..2 {
                    let mut acc = c(0.0);
                    for a in 0..2 {
                        for a2 in 0..2 {
                            acc += rho[2 * a + cc][2 * a2 + b] * h[2 * a2 + bp][2 * a + cp];
                        }
                    }
                    out[2 * b + bp][2 * cc + cp] = acc;
                }
            }
        }
    }
    out
}

/// Energy `Tr[H (I⊗G)(ρ)]` with `G` given by Kraus operators, by explicit sums.
pub fn energy_after_channel(rho: &M4, h: &M4, kraus: &[M2]) -> f64 {
    let mut out = [[c(0.0); 4]; 4];
    for k in kraus {
        for a in 0..2 {
            for b in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        let mut acc = c(0.0);
                        for x in 0..2 {
                            for y in 0..2 {
                                acc += k[b][x] * rho[2 * a + x][2 * a2 + y] * k[b2][y].conj();
                            }
                        }
                        out[2 * a + b][2 * a2 + b2] += acc;
                    }
                }
            }
        }
    }
    let mut e = c(0.0);
    for i in 0..4 {
        for j in 0..4 {
            e += h[i][j] * out[j][i];
        }
    }
    e.re
}

pub fn energy(rho: &M4, h: &M4) -> f64 {
    energy_after_channel(rho, h, &[[[c(1.0), c(0.0)], [c(0.0), c(1.0)]]])
}

/// Smallest eigenvalue of a 2×2 Hermitian matrix in closed form.
pub fn min_eig2(m: &M2) -> f64 {
    let a = m[0][0].re;
    let d = m[1][1].re;
    (a + d) / 2.0 - (((a - d) / 2.0).powi(2) + m[0][1].norm_sqr()).sqrt()
}

/// Conditional extraction for a pure initial state: after outcome `s`, Bob
/// holds `φ_s` and can lower `⟨φ_s|H_s|φ_s⟩` to the ground energy of
/// `H_s = ⟨s|H|s⟩`.
pub fn conditional_extraction(h: &M4, psi: &[C; 4]) -> f64 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let alice = [c(r), c(sign * r)];
        let mut phi = [c(0.0); 2];
        for b in 0..2 {
            phi[b] = alice[0].conj() * psi[b] + alice[1].conj() * psi[2 + b];
        }
        let p = phi[0].norm_sqr() + phi[1].norm_sqr();
        if p < 1e-15 {
            continue;
        }
        let mut heff = [[c(0.0); 2]; 2];
        for b in 0..2 {
            for b2 in 0..2 {
                for a in 0..2 {
                    for a2 in 0..2 {
                        heff[b][b2] += alice[a].conj() * h[2 * a + b][2 * a2 + b2] * alice[a2];
                    }
                }
            }
        }
        let mut e_before = c(0.0);
        for b in 0..2 {
            for b2 in 0..2 {
                e_before += phi[b].conj() * heff[b][b2] * phi[b2];
            }
        }
        total += e_before.re - p * min_eig2(&heff);
    }
    total
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}
