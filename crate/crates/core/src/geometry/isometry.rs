use nalgebra::{Matrix3, Vector3};

use super::assembly::Assembly;
use super::{Point3, EPS_GEOM};

/// Orthogonal map plus translation taking vertex `i` of A to
/// `correspondence[i]` of B (indices into `Assembly::vertex_set`).
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryWitness {
    pub linear: Matrix3<f64>,
    pub translation: Vector3<f64>,
    pub correspondence: Vec<usize>,
}

impl IsometryWitness {
    pub fn apply(&self, p: &Point3) -> Point3 {
        Point3::from(self.linear * p.coords + self.translation)
    }

    pub fn is_identity(&self) -> bool {
        self.correspondence.iter().enumerate().all(|(i, &j)| i == j)
            && (self.linear - Matrix3::identity()).norm() <= 1e-9
            && self.translation.norm() <= 1e-9
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsometryReport {
    pub isometric: bool,
    pub witness: Option<IsometryWitness>,
    /// Whether the sorted pairwise-distance multisets agree.
    pub distances_match: bool,
}

fn distance_matrix(v: &[Point3]) -> Vec<Vec<f64>> {
    v.iter().map(|p| v.iter().map(|q| (p - q).norm()).collect()).collect()
}

fn sorted_multiset(d: &[Vec<f64>]) -> Vec<f64> {
    let mut all: Vec<f64> = d
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row[i + 1..].iter().copied())
        .collect();
    all.sort_by(f64::total_cmp);
    all
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Tile vertex lists as sorted indices into the vertex set.
fn tile_keys(a: &Assembly, verts: &[Point3]) -> Vec<Vec<usize>> {
    a.tiles()
        .iter()
        .map(|t| {
            let mut k: Vec<usize> = t
                .vertices
                .iter()
                .map(|p| verts.iter().position(|q| (q - p).norm() <= EPS_GEOM).expect("vertex in set"))
                .collect();
            k.sort_unstable();
            k
        })
        .collect()
}

/// Best-fit orthogonal map (reflections allowed) from `src` onto `dst`.
fn procrustes(src: &[Point3], dst: &[Point3]) -> (Matrix3<f64>, Vector3<f64>) {
    let n = src.len() as f64;
    let cs: Vector3<f64> = src.iter().map(|p| p.coords).sum::<Vector3<f64>>() / n;
    let cd: Vector3<f64> = dst.iter().map(|p| p.coords).sum::<Vector3<f64>>() / n;
    let mut h = Matrix3::zeros();
    for (s, d) in src.iter().zip(dst) {
        h += (s.coords - cs) * (d.coords - cd).transpose();
    }
    let svd = h.svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v requested");
    let r = vt.transpose() * u.transpose();
    (r, cd - r * cs)
}

struct Search<'a> {
    da: &'a [Vec<f64>],
    db: &'a [Vec<f64>],
    candidates: Vec<Vec<usize>>,
    order: Vec<usize>,
    tol: f64,
    assign: Vec<Option<usize>>,
    used: Vec<bool>,
    budget: usize,
}

impl Search<'_> {
    fn run(&mut self, depth: usize, accept: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        if depth == self.order.len() {
            let full: Vec<usize> = self.assign.iter().map(|x| x.expect("assigned")).collect();
            return accept(&full);
        }
        let i = self.order[depth];
        for c in 0..self.candidates[i].len() {
            let j = self.candidates[i][c];
            if self.used[j] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&k| {
                let jk = self.assign[k].expect("assigned");
                close(self.da[i][k], self.db[j][jk], self.tol)
            });
            if !consistent {
                continue;
            }
            self.assign[i] = Some(j);
            self.used[j] = true;
            if self.run(depth + 1, accept) {
                return true;
            }
            self.assign[i] = None;
            self.used[j] = false;
        }
        false
    }
}

/// Decides congruence of two assemblies.
///
/// Distance multisets are compared first. On a match, a correspondence
/// consistent with all pairwise distances is searched (candidates pruned
/// by each vertex's sorted distance profile, the same index tried
/// first), fitted by an orthogonal Procrustes map, and accepted only if
/// it carries tiles onto tiles.
pub fn is_isometric(a: &Assembly, b: &Assembly) -> IsometryReport {
    let no = |distances_match| IsometryReport {
        isometric: false,
        witness: None,
        distances_match,
    };
    if a.dim() != b.dim() || a.tiles().len() != b.tiles().len() {
        return no(false);
    }
    let va = a.vertex_set();
    let vb = b.vertex_set();
    if va.len() != vb.len() {
        return no(false);
    }
    let scale = a.base().diameter().max(1.0) * a.tiles().len() as f64;
    let tol = EPS_GEOM * scale;
    let da = distance_matrix(&va);
    let db = distance_matrix(&vb);
    let (ma, mb) = (sorted_multiset(&da), sorted_multiset(&db));
    if !ma.iter().zip(&mb).all(|(x, y)| close(*x, *y, tol)) {
        return no(false);
    }
    let profile = |d: &Vec<f64>| {
        let mut p = d.clone();
        p.sort_by(f64::total_cmp);
        p
    };
    let pa: Vec<Vec<f64>> = da.iter().map(profile).collect();
    let pb: Vec<Vec<f64>> = db.iter().map(profile).collect();
    let n = va.len();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut c: Vec<usize> = (0..n)
                .filter(|&j| pa[i].iter().zip(&pb[j]).all(|(x, y)| close(*x, *y, tol)))
                .collect();
            if let Some(pos) = c.iter().position(|&j| j == i) {
                c.swap(0, pos);
            }
            c
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return no(true);
    }
    // Most constrained first, then nearest to already chosen vertices.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut left: Vec<usize> = (0..n).collect();
    left.sort_by_key(|&i| (candidates[i].len(), i));
    order.push(left.remove(0));
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .min_by(|(_, &x), (_, &y)| {
                let dx = order.iter().map(|&o| da[x][o]).fold(f64::INFINITY, f64::min);
                let dy = order.iter().map(|&o| da[y][o]).fold(f64::INFINITY, f64::min);
                (candidates[x].len(), dx).partial_cmp(&(candidates[y].len(), dy)).expect("finite")
            })
            .expect("nonempty");
        order.push(left.remove(pos));
    }

    let keys_a = tile_keys(a, &va);
    let mut keys_b = tile_keys(b, &vb);
    keys_b.sort();
    let mut witness = None;
    let mut accept = |corr: &[usize]| {
        let dst: Vec<Point3> = corr.iter().map(|&j| vb[j]).collect();
        let (r, t) = procrustes(&va, &dst);
        let fits = va.iter().zip(&dst).all(|(p, q)| (r * p.coords + t - q.coords).norm() <= tol);
        if !fits {
            return false;
        }
        let mut mapped: Vec<Vec<usize>> = keys_a
            .iter()
            .map(|k| {
                let mut m: Vec<usize> = k.iter().map(|&i| corr[i]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        mapped.sort();
        if mapped != keys_b {
            return false;
        }
        witness = Some(IsometryWitness {
            linear: r,
            translation: t,
            correspondence: corr.to_vec(),
        });
        true
    };
    let mut search = Search {
        da: &da,
        db: &db,
        candidates,
        order,
        tol,
        assign: vec![None; n],
        used: vec![false; n],
        budget: 5_000_000,
    };
    let found = search.run(0, &mut accept);
    IsometryReport {
        isometric: found,
        witness,
        distances_match: true,
    }
}
