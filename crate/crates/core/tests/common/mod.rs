#![allow(dead_code)]

use dimerwall_core::reps::check_generic;
use dimerwall_core::tiling::Tiling;

pub const CATALOG: [&str; 4] = ["c3", "conifold", "spp", "c3z3"];

/// Up to `count` strongly generic parameters with small entries, in a fixed
/// order spreading over all directions of `Θ`.
pub fn sample_thetas(t: &Tiling, count: usize) -> Vec<Vec<i64>> {
    let n = t.num_vertices();
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for radius in 1i64.. {
        let side = (2 * radius + 1) as usize;
        let total = side.pow((n - 1) as u32);
        for code in 0..total {
            let mut c = code;
            let mut x = Vec::with_capacity(n - 1);
            for _ in 0..n - 1 {
                x.push((c % side) as i64 - radius);
                c /= side;
            }
            if x.iter().map(|v| v.abs()).max() != Some(radius) {
                continue;
            }
            let mut theta = x.clone();
            theta.push(-x.iter().sum::<i64>());
            if check_generic(&t.quiver, &theta).is_ok() {
                out.push(theta);
                if out.len() == count {
                    return out;
                }
            }
        }
    }
    unreachable!()
}

/// A generic seed with the first vertex heavy.
pub fn seed(t: &Tiling) -> Vec<i64> {
    let n = t.num_vertices();
    let mut s = vec![-1; n];
    s[0] = n as i64 - 1;
    s
}
