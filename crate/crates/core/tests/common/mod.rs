//! Brute-force oracles shared by the integration tests and the acceptance run.
//! Everything here works on plain `i64` data and recomputes from definitions.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num::ToPrimitive;

use mukai_core::MukaiVector;

/// `(r, c1, s)` with integer entries.
pub type Mv = (i64, Vec<i64>, i64);

pub fn form(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut t = 0;
    for (i, row) in g.iter().enumerate() {
        for (j, gij) in row.iter().enumerate() {
            t += x[i] * gij * y[j];
        }
    }
    t
}

pub fn mukai(g: &[Vec<i64>], x: &Mv, y: &Mv) -> i64 {
    form(g, &x.1, &y.1) - x.0 * y.2 - x.2 * y.0
}

pub fn to_mv(v: &MukaiVector) -> Mv {
    let c = v.c1().coords().iter().map(|x| {
        assert!(x.is_integer());
        x.to_integer().to_i64().unwrap()
    });
    (v.r().to_integer().to_i64().unwrap(), c.collect(), v.s().to_integer().to_i64().unwrap())
}

pub fn gram_i64(p: &mukai_core::PicardLattice) -> Vec<Vec<i64>> {
    p.gram().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn is_primitive(x: &Mv) -> bool {
    let mut g = gcd(x.0, x.2);
    for c in &x.1 {
        g = gcd(g, *c);
    }
    g == 1
}

/// Calls `f` on every integer point of the box `lo..=hi` (per coordinate).
pub fn for_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    let n = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut x = lo.to_vec();
    loop {
        f(&x);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}

fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        let d = a[c][c];
        for x in a[c].iter_mut() {
            *x /= d;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                let pivot = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(pivot) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Walls by exhaustive search: `s` in `1..r`, `η` in a box, `b` forced by
/// `<u²> = -2`, then every defining constraint checked directly.
///
/// Box: `D = rη - sξ` satisfies `(D,H) = 0` and `-(D²) <= 2r²`. On `H^⊥` the
/// majorant `Q(y) = 2(y,H)²/(H²) - (y²)` equals `-(D²)`, and `Q` is positive
/// definite on the whole lattice, so `|D_i| <= sqrt(2r² (Q⁻¹)_ii)`.
pub fn wall_oracle(g: &[Vec<i64>], h: &[i64], v: &Mv) -> BTreeSet<Mv> {
    let n = g.len();
    let (r, xi, _) = (v.0, &v.1, v.2);
    let hh = form(g, h, h) as f64;
    let gh: Vec<f64> = (0..n).map(|i| (0..n).map(|j| g[i][j] * h[j]).sum::<i64>() as f64).collect();
    let q: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| 2.0 * gh[i] * gh[j] / hh - g[i][j] as f64).collect()).collect();
    let qi = invert(&q);
    let bound: Vec<f64> = (0..n).map(|i| (2.0 * (r * r) as f64 * qi[i][i]).sqrt()).collect();
    let h_xi = form(g, h, xi);
    let mut out = BTreeSet::new();
    for s in 1..r {
        let lo: Vec<i64> = (0..n).map(|i| ((s * xi[i]) as f64 - bound[i]).div_euclid(r as f64) as i64 - 2).collect();
        let hi: Vec<i64> = (0..n).map(|i| ((s * xi[i]) as f64 + bound[i]).div_euclid(r as f64) as i64 + 2).collect();
        for_box(&lo, &hi, |eta| {
            let n2 = form(g, eta, eta);
            if (n2 + 2).rem_euclid(2 * s) != 0 {
                return;
            }
            let u: Mv = (s, eta.to_vec(), (n2 + 2) / (2 * s));
            // <Ĥ,u> = (H,η) - s (H,ξ)/r
            if r * form(g, h, eta) != s * h_xi {
                return;
            }
            assert_eq!(mukai(g, &u, &u), -2);
            if mukai(g, v, &u) <= 0 {
                out.insert(u);
            }
        });
    }
    out
}

/// An instance for wall enumeration: Gram, polarization, `v`.
pub struct WallInstance {
    pub name: &'static str,
    pub gram: Vec<Vec<i64>>,
    pub h: Vec<i64>,
    pub v: Mv,
}

fn wi(name: &'static str, gram: Vec<Vec<i64>>, h: Vec<i64>, v: Mv) -> WallInstance {
    WallInstance { name, gram, h, v }
}

pub fn elliptic() -> WallInstance {
    wi("elliptic sigma+3f", vec![vec![-2, 1], vec![1, 0]], vec![1, 3], (2, vec![1, 3], 1))
}

/// Picard rank <= 3 instances, each with `v` primitive isotropic.
pub fn wall_instances() -> Vec<WallInstance> {
    let ell = vec![vec![-2, 1], vec![1, 0]];
    let u = vec![vec![0, 1], vec![1, 0]];
    vec![
        elliptic(),
        wi("elliptic r=3", ell.clone(), vec![1, 3], (3, vec![1, 4], 1)),
        wi("elliptic H=sigma+4f", ell.clone(), vec![1, 4], (2, vec![0, 1], 0)),
        wi("elliptic r=4", ell, vec![1, 3], (4, vec![1, 5], 1)),
        wi("U", u.clone(), vec![1, 1], (2, vec![1, 2], 1)),
        wi("U r=3", u, vec![1, 2], (3, vec![1, 3], 1)),
        wi("<2>+<-2>", vec![vec![2, 0], vec![0, -2]], vec![1, 0], (2, vec![1, 1], 0)),
        wi("<2>+<-2> r=3", vec![vec![2, 0], vec![0, -2]], vec![1, 0], (3, vec![1, 1], 0)),
        wi("<4>+<-2>", vec![vec![4, 0], vec![0, -2]], vec![1, 0], (2, vec![1, 0], 1)),
        wi("~A1 r=a=1", vec![vec![0, 4], vec![4, 0]], vec![1, 1], (2, vec![1, 1], 2)),
        wi("~A1 r=2 a=1", vec![vec![2, 6], vec![6, 2]], vec![1, 1], (4, vec![1, 1], 2)),
        wi("<4>", vec![vec![4]], vec![1], (2, vec![1], 1)),
        wi("<2>+<-2>+<-2>", vec![vec![2, 0, 0], vec![0, -2, 0], vec![0, 0, -2]], vec![1, 0, 0], (2, vec![1, 1, 0], 0)),
        wi("block rank 3", vec![vec![0, 4, 2], vec![4, 0, 2], vec![2, 2, 0]], vec![1, 1, 0], (2, vec![1, 1, 0], 2)),
        wi("U+<-2>", vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]], vec![1, 1, 0], (3, vec![1, 3, 0], 1)),
        wi("U+<-4> r=3", vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -4]], vec![1, 2, 0], (3, vec![1, 3, 0], 1)),
    ]
}

/// Every primitive isotropic `(r, c, s)` with `2 <= r <= 5` and `|c_i| <= 4`
/// over a few lattices of rank 2 and 3.
pub fn generated_wall_instances() -> Vec<WallInstance> {
    let lattices: [(&'static str, Vec<Vec<i64>>, Vec<i64>); 5] = [
        ("gen elliptic", vec![vec![-2, 1], vec![1, 0]], vec![1, 3]),
        ("gen U", vec![vec![0, 1], vec![1, 0]], vec![1, 2]),
        ("gen <2>+<-2>", vec![vec![2, 0], vec![0, -2]], vec![1, 0]),
        ("gen U+<-2>", vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]], vec![1, 1, 0]),
        ("gen <4>+<-2>+<-2>", vec![vec![4, 0, 0], vec![0, -2, 0], vec![0, 0, -2]], vec![1, 0, 0]),
    ];
    let mut out = Vec::new();
    for (name, g, h) in lattices {
        let n = g.len();
        for r in 2..=5 {
            for_box(&vec![-4; n], &vec![4; n], |c| {
                let cc = form(&g, c, c);
                if cc.rem_euclid(2 * r) != 0 {
                    return;
                }
                let v: Mv = (r, c.to_vec(), cc / (2 * r));
                if is_primitive(&v) {
                    out.push(wi(name, g.clone(), h.clone(), v));
                }
            });
        }
    }
    out
}

/// All `x` in the box `[lo, hi]^n` with `x^T C x = 2`.
pub fn box_roots(c: &[Vec<i64>], lo: i64, hi: i64) -> BTreeSet<Vec<i64>> {
    let n = c.len();
    let mut out = BTreeSet::new();
    for_box(&vec![lo; n], &vec![hi; n], |x| {
        if form(c, x, x) == 2 {
            out.insert(x.to_vec());
        }
    });
    out
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a == b || adj[a].contains(&b) {
            return None;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    Some(adj)
}

fn connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Lengths of the paths hanging off `centre`, sorted.
fn arms(adj: &[Vec<usize>], centre: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for &start in &adj[centre] {
        let (mut prev, mut cur, mut len) = (centre, start, 1);
        while adj[cur].len() == 2 {
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
            len += 1;
        }
        out.push(len);
    }
    out.sort();
    out
}

/// Type of a simply laced finite Dynkin diagram given as a simple graph.
pub fn finite_type(n: usize, edges: &[(usize, usize)]) -> Option<(char, usize)> {
    let adj = adjacency(n, edges)?;
    if n == 0 || edges.len() != n - 1 || !connected(&adj) {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&i| adj[i].len() >= 3).collect();
    match branch.as_slice() {
        [] => Some(('A', n)),
        [c] if adj[*c].len() == 3 => match arms(&adj, *c).as_slice() {
            [1, 1, k] => Some(('D', k + 3)),
            [1, 2, 2] => Some(('E', 6)),
            [1, 2, 3] => Some(('E', 7)),
            [1, 2, 4] => Some(('E', 8)),
            _ => None,
        },
        _ => None,
    }
}

/// Type of an affine simply laced diagram from its Cartan matrix.
pub fn affine_type(c: &[Vec<i64>]) -> Option<(char, usize)> {
    let n = c.len();
    if n == 2 && c[0][1] == -2 && c[1][0] == -2 && c[0][0] == 2 && c[1][1] == 2 {
        return Some(('A', 1));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        if c[i][i] != 2 {
            return None;
        }
        for j in i + 1..n {
            match c[i][j] {
                0 => {}
                -1 if c[j][i] == -1 => edges.push((i, j)),
                _ => return None,
            }
        }
    }
    let adj = adjacency(n, &edges)?;
    if !connected(&adj) {
        return None;
    }
    if edges.len() == n {
        return adj.iter().all(|a| a.len() == 2).then_some(('A', n - 1));
    }
    if edges.len() != n - 1 {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&i| adj[i].len() >= 3).collect();
    let leaves = |x: usize| adj[x].iter().filter(|&&y| adj[y].len() == 1).count();
    match branch.as_slice() {
        [c] if adj[*c].len() == 4 && n == 5 => Some(('D', 4)),
        [c] if adj[*c].len() == 3 => match arms(&adj, *c).as_slice() {
            [2, 2, 2] => Some(('E', 6)),
            [1, 3, 3] => Some(('E', 7)),
            [1, 2, 5] => Some(('E', 8)),
            _ => None,
        },
        [a, b] if adj[*a].len() == 3 && adj[*b].len() == 3 && leaves(*a) == 2 && leaves(*b) == 2 => Some(('D', n - 1)),
        _ => None,
    }
}

/// The types of the sweep: `~A1..~A18`, `~D4..~D18`, `~E6..~E8`.
pub fn sweep_types() -> Vec<(char, usize)> {
    let mut t: Vec<(char, usize)> = (1..=18).map(|n| ('A', n)).collect();
    t.extend((4..=18).map(|n| ('D', n)));
    t.extend((6..=8).map(|n| ('E', n)));
    t
}

pub fn family(c: char) -> mukai_core::roots::Family {
    match c {
        'A' => mukai_core::roots::Family::A,
        'D' => mukai_core::roots::Family::D,
        _ => mukai_core::roots::Family::E,
    }
}
