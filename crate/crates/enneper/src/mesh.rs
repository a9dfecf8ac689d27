//! Triangle meshes of immersed surfaces and interchange-file output.
//!
//! The sampled height field is multivalued; a deterministic spanning-tree
//! walk unwraps one branch, and grid cells whose edges disagree with that
//! branch become seam triangles with locally re-anchored duplicate vertices.
//! Layer copies stack the fundamental sheet at the common vertical period.

use std::collections::VecDeque;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Complex, MotifField};
use crate::region::Region;

#[derive(Clone, Debug, Default)]
pub struct SurfaceMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
    pub k_gauss: Vec<f64>,
    pub abs_g: Vec<f64>,
    pub in_omega_n: Vec<bool>,
    pub layer: Vec<i32>,
    pub provenance: String,
}

impl SurfaceMesh {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Largest `q` dividing every pitch magnitude to integer multiples, with
/// ratios recognized as rationals within `tol` (relative). `None` when the
/// pitches are incommensurate.
pub fn pitch_quantum(pitches: &[f64], tol: f64) -> Option<f64> {
    let base = pitches.iter().map(|p| p.abs()).fold(0.0f64, f64::max);
    if base == 0.0 {
        return None;
    }
    let mut num = Vec::with_capacity(pitches.len());
    let mut den = Vec::with_capacity(pitches.len());
    for &p in pitches {
        let (a, b) = approx_rational(p.abs() / base, tol)?;
        if a == 0 {
            return None;
        }
        num.push(a);
        den.push(b);
    }
    let mut l: i128 = 1;
    for &b in &den {
        l = lcm(l, b as i128);
        if l > 1_000_000_000_000 {
            return None;
        }
    }
    let mut g: i128 = 0;
    for (&a, &b) in num.iter().zip(&den) {
        g = gcd(g, a as i128 * (l / b as i128));
    }
    Some(base * g as f64 / l as f64)
}

/// Denominator cap for recognized pitch ratios. Every real has rational
/// approximations within any tolerance once denominators grow unboundedly,
/// so commensurability is only meaningful below a cap.
const MAX_RATIO_DENOMINATOR: i64 = 10_000;

/// Continued-fraction approximation `x ~ a/b` with `|x - a/b| <= tol` and
/// `b` below the cap.
fn approx_rational(x: f64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let (mut h0, mut h1): (i64, i64) = (1, x.floor() as i64);
    let (mut k0, mut k1): (i64, i64) = (0, 1);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if (x - h1 as f64 / k1 as f64).abs() <= tol * x.max(1.0) {
            return Some((h1, k1));
        }
        if frac.abs() < 1e-18 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a >= 1e9 {
            break;
        }
        frac = inv - a;
        let h2 = a as i64 * h1 + h0;
        let k2 = a as i64 * k1 + k0;
        if k2 > MAX_RATIO_DENOMINATOR {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    if (x - h1 as f64 / k1 as f64).abs() <= tol * x.max(1.0) {
        Some((h1, k1))
    } else {
        None
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

#[derive(Serialize)]
struct Provenance<'a> {
    field: &'a MotifField,
    region: &'a Region,
    grid: usize,
    layers: usize,
    clip: bool,
}

/// Samples the immersion over `region` on a `grid x grid` node lattice,
/// unwraps height and potential along a breadth-first spanning tree rooted
/// at the corner farthest from the singularities, triangulates, and stacks
/// `layers` copies offset by the common vertical period.
///
/// `clip` keeps only triangles whose vertices all carry north-hemisphere
/// normals (`|g| >= 1`).
pub fn build_mesh(
    field: &MotifField,
    region: &Region,
    grid: usize,
    layers: usize,
    clip: bool,
) -> Result<SurfaceMesh> {
    if grid < 2 {
        return Err(Error::Config("mesh grid must be at least 2".into()));
    }
    if layers == 0 {
        return Err(Error::Config("at least one layer is required".into()));
    }
    let period = if layers > 1 {
        match pitch_quantum(&field.pitches(), 1e-9) {
            Some(q) => 2.0 * std::f64::consts::PI * q,
            None => return Err(Error::IncommensuratePitches),
        }
    } else {
        0.0
    };

    let (x0, x1, y0, y1) = region.bounding_box();
    let step = ((x1 - x0) / (grid - 1) as f64).max((y1 - y0) / (grid - 1) as f64);
    let centers = field.singularities_in(x0 - 1.0, x1 + 1.0, y0 - 1.0, y1 + 1.0);
    let guard = |z: Complex| -> bool {
        centers.iter().any(|&c| {
            let r = (2.0 * step).max(1e-3 * field.nearest_pitch(c).abs());
            (z - c).norm() < r
        })
    };

    let node = |i: usize, j: usize| -> Complex {
        Complex::new(
            x0 + (x1 - x0) * i as f64 / (grid - 1) as f64,
            y0 + (y1 - y0) * j as f64 / (grid - 1) as f64,
        )
    };
    let idx = |i: usize, j: usize| j * grid + i;

    // Sample the two-jet on every region node; guard discs only decide
    // which samples become vertices, so resolution checks see the full
    // field.
    let mut sampled = vec![false; grid * grid];
    let mut included = vec![false; grid * grid];
    let mut jets = vec![(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)); grid * grid];
    for j in 0..grid {
        for i in 0..grid {
            let z = node(i, j);
            if region.mask(z.re, z.im) < 0.0 {
                continue;
            }
            if let Ok(jet) = field.hz_hzz(z) {
                sampled[idx(i, j)] = true;
                jets[idx(i, j)] = jet;
                included[idx(i, j)] = !guard(z);
            }
        }
    }

    if clip {
        check_clip_resolution(grid, &sampled, &jets)?;
    }

    // Root: node nearest the bounding-box corner that is farthest from the
    // singular set.
    let corner = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)]
        .into_iter()
        .max_by(|a, b| {
            let da = corner_distance(&centers, *a);
            let db = corner_distance(&centers, *b);
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    let corner = Complex::new(corner.0, corner.1);

    // Spanning-tree unwrap of h and P. Nodes unreachable from the first
    // root (region split by guard discs) start fresh principal branches.
    let mut h = vec![f64::NAN; grid * grid];
    let mut p = vec![Complex::new(0.0, 0.0); grid * grid];
    let mut order: Vec<usize> = (0..grid * grid).filter(|&k| included[k]).collect();
    order.sort_by(|&a, &b| {
        let za = node(a % grid, a / grid);
        let zb = node(b % grid, b / grid);
        (za - corner)
            .norm()
            .partial_cmp(&(zb - corner).norm())
            .unwrap()
            .then(a.cmp(&b))
    });
    let seg_tol = 1e-11 * field.scale().max(1.0);
    let mut queue = VecDeque::new();
    for &root in &order {
        if !h[root].is_nan() {
            continue;
        }
        let zr = node(root % grid, root / grid);
        let jet = field.eval_jet(zr)?;
        h[root] = jet.h;
        p[root] = jet.p;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let (iu, ju) = (u % grid, u / grid);
            let zu = node(iu, ju);
            let neighbors = [
                (iu.wrapping_sub(1), ju),
                (iu + 1, ju),
                (iu, ju.wrapping_sub(1)),
                (iu, ju + 1),
            ];
            for (iv, jv) in neighbors {
                if iv >= grid || jv >= grid {
                    continue;
                }
                let v = idx(iv, jv);
                if !included[v] || !h[v].is_nan() {
                    continue;
                }
                let zv = node(iv, jv);
                let dh = match field.h_increment(zu, zv) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                let dp = match field.numeric_p_along(&[zu, zv], seg_tol) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                h[v] = h[u] + dh;
                p[v] = p[u] + dp;
                queue.push_back(v);
            }
        }
    }

    // Base-layer vertices straight from the tree branch.
    let mut vert_of_node = vec![u32::MAX; grid * grid];
    let mut base = SurfaceMesh::default();
    for j in 0..grid {
        for i in 0..grid {
            let k = idx(i, j);
            if !included[k] || h[k].is_nan() {
                continue;
            }
            vert_of_node[k] = base.vertices.len() as u32;
            push_vertex(&mut base, node(i, j), jets[k], h[k], p[k]);
        }
    }

    let bbox_diag2 = (x1 - x0).powi(2) + (y1 - y0).powi(2);
    let area_floor = 1e-14 * bbox_diag2;

    // Triangulate cells; a triangle whose corner heights disagree with the
    // tree branch re-anchors duplicated vertices at its first corner.
    let emit = |tri: [usize; 3], base: &mut SurfaceMesh| -> Result<()> {
        let za = node(tri[0] % grid, tri[0] / grid);
        let mut consistent = true;
        for w in [[0, 1], [1, 2], [2, 0]] {
            let (u, v) = (tri[w[0]], tri[w[1]]);
            let zu = node(u % grid, u / grid);
            let zv = node(v % grid, v / grid);
            let dh = match field.h_increment(zu, zv) {
                Ok(d) => d,
                Err(_) => return Ok(()),
            };
            if (h[u] + dh - h[v]).abs() > 1e-6 * (1.0 + h[u].abs()) {
                consistent = false;
            }
        }
        let ids: [u32; 3] = if consistent {
            [
                vert_of_node[tri[0]],
                vert_of_node[tri[1]],
                vert_of_node[tri[2]],
            ]
        } else {
            let mut ids = [0u32; 3];
            for (slot, &n) in tri.iter().enumerate() {
                let zn = node(n % grid, n / grid);
                let (hh, pp) = if slot == 0 {
                    (h[n], p[n])
                } else {
                    let dh = field.h_increment(za, zn)?;
                    let dp = field.numeric_p_along(&[za, zn], seg_tol)?;
                    (h[tri[0]] + dh, p[tri[0]] + dp)
                };
                ids[slot] = base.vertices.len() as u32;
                push_vertex(base, zn, jets[n], hh, pp);
            }
            ids
        };
        let a = base.vertices[ids[0] as usize];
        let b = base.vertices[ids[1] as usize];
        let c = base.vertices[ids[2] as usize];
        if triangle_area(a, b, c) > area_floor {
            base.triangles.push([ids[0], ids[1], ids[2]]);
        }
        Ok(())
    };

    for j in 0..grid - 1 {
        for i in 0..grid - 1 {
            let quad = [idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)];
            let ok: Vec<bool> = quad
                .iter()
                .map(|&k| included[k] && !h[k].is_nan())
                .collect();
            match ok.iter().filter(|&&b| b).count() {
                4 => {
                    emit([quad[0], quad[1], quad[2]], &mut base)?;
                    emit([quad[0], quad[2], quad[3]], &mut base)?;
                }
                3 => {
                    let tri: Vec<usize> = quad
                        .iter()
                        .zip(&ok)
                        .filter(|&(_, &b)| b)
                        .map(|(&k, _)| k)
                        .collect();
                    emit([tri[0], tri[1], tri[2]], &mut base)?;
                }
                _ => {}
            }
        }
    }

    if clip {
        clip_south(&mut base);
    }

    // Stack layers: exact vertical offsets of the fundamental sheet.
    let mut mesh = SurfaceMesh::default();
    let nbase = base.vertices.len() as u32;
    for l in 0..layers {
        let dz = l as f64 * period;
        for (k, v) in base.vertices.iter().enumerate() {
            mesh.vertices.push([v[0], v[1], v[2] + dz]);
            mesh.k_gauss.push(base.k_gauss[k]);
            mesh.abs_g.push(base.abs_g[k]);
            mesh.in_omega_n.push(base.in_omega_n[k]);
            mesh.layer.push(l as i32);
        }
        for t in &base.triangles {
            mesh.triangles
                .push([t[0] + l as u32 * nbase, t[1] + l as u32 * nbase, t[2] + l as u32 * nbase]);
        }
    }
    mesh.provenance = serde_json::to_string(&Provenance {
        field,
        region,
        grid,
        layers,
        clip,
    })
    .map_err(|e| Error::Numeric(format!("provenance serialization: {}", e)))?;
    Ok(mesh)
}

fn corner_distance(centers: &[Complex], (x, y): (f64, f64)) -> f64 {
    let z = Complex::new(x, y);
    centers
        .iter()
        .map(|&c| (z - c).norm())
        .fold(f64::INFINITY, f64::min)
}

fn push_vertex(mesh: &mut SurfaceMesh, z: Complex, (hz, hzz): (Complex, Complex), h: f64, p: Complex) {
    let planar = z - p.conj();
    mesh.vertices.push([planar.re, planar.im, h]);
    let w = 1.0 + hz.norm_sqr();
    mesh.k_gauss.push(-4.0 * hzz.norm_sqr() / (w * w * w * w));
    let abs_g = if hz.norm_sqr() == 0.0 { f64::INFINITY } else { 1.0 / hz.norm() };
    mesh.abs_g.push(abs_g);
    mesh.in_omega_n.push(abs_g >= 1.0);
    mesh.layer.push(0);
}

fn triangle_area(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let x = u[1] * v[2] - u[2] * v[1];
    let y = u[2] * v[0] - u[0] * v[2];
    let z = u[0] * v[1] - u[1] * v[0];
    0.5 * (x * x + y * y + z * z).sqrt()
}

/// A grid edge jumping across `|g| = 1` by more than this is treated as an
/// underresolved clip boundary.
const CLIP_JUMP: f64 = 0.5;

fn check_clip_resolution(
    grid: usize,
    included: &[bool],
    jets: &[(Complex, Complex)],
) -> Result<()> {
    let abs_g = |k: usize| -> f64 {
        let n = jets[k].0.norm();
        if n == 0.0 { f64::INFINITY } else { 1.0 / n }
    };
    for j in 0..grid {
        for i in 0..grid {
            let k = j * grid + i;
            if !included[k] {
                continue;
            }
            for (di, dj) in [(1usize, 0usize), (0, 1)] {
                let (ii, jj) = (i + di, j + dj);
                if ii >= grid || jj >= grid || !included[jj * grid + ii] {
                    continue;
                }
                let a = abs_g(k);
                let b = abs_g(jj * grid + ii);
                if (a - 1.0).signum() != (b - 1.0).signum() && (a - b).abs() > CLIP_JUMP {
                    return Err(Error::GridTooCoarse(format!(
                        "|g| jumps {:.3} -> {:.3} across one cell at the clip boundary",
                        a, b
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Drops triangles with any south-pointing vertex, then compacts vertices.
fn clip_south(mesh: &mut SurfaceMesh) {
    mesh.triangles
        .retain(|t| t.iter().all(|&v| mesh.in_omega_n[v as usize]));
    let mut remap = vec![u32::MAX; mesh.vertices.len()];
    let mut kept = 0u32;
    for t in &mesh.triangles {
        for &v in t {
            if remap[v as usize] == u32::MAX {
                remap[v as usize] = kept;
                kept += 1;
            }
        }
    }
    // Stable order: old index order, not first-use order.
    let mut next = 0u32;
    for r in remap.iter_mut() {
        if *r != u32::MAX {
            *r = next;
            next += 1;
        }
    }
    let pick = |r: &Vec<u32>, src: &mut Vec<f64>| {
        let mut out = Vec::with_capacity(next as usize);
        for (k, &m) in r.iter().enumerate() {
            if m != u32::MAX {
                out.push(src[k]);
            }
        }
        *src = out;
    };
    let mut verts = Vec::with_capacity(next as usize);
    for (k, &m) in remap.iter().enumerate() {
        if m != u32::MAX {
            verts.push(mesh.vertices[k]);
        }
    }
    mesh.vertices = verts;
    pick(&remap, &mut mesh.k_gauss);
    pick(&remap, &mut mesh.abs_g);
    let mut omega = Vec::with_capacity(next as usize);
    let mut layer = Vec::with_capacity(next as usize);
    for (k, &m) in remap.iter().enumerate() {
        if m != u32::MAX {
            omega.push(mesh.in_omega_n[k]);
            layer.push(mesh.layer[k]);
        }
    }
    mesh.in_omega_n = omega;
    mesh.layer = layer;
    for t in mesh.triangles.iter_mut() {
        for v in t.iter_mut() {
            *v = remap[*v as usize];
        }
    }
}

/// Unsigned discrete mean curvature per vertex: cotangent Laplacian over the
/// Meyer mixed area. Boundary and seam vertices get NaN.
pub fn discrete_mean_curvature(mesh: &SurfaceMesh) -> Vec<f64> {
    let nv = mesh.vertices.len();
    let mut lap = vec![[0.0f64; 3]; nv];
    let mut mixed = vec![0.0f64; nv];
    let mut edge_tris: std::collections::HashMap<(u32, u32), u8> =
        std::collections::HashMap::new();
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    for t in &mesh.triangles {
        let pv = [
            mesh.vertices[t[0] as usize],
            mesh.vertices[t[1] as usize],
            mesh.vertices[t[2] as usize],
        ];
        let area2 = {
            let c = cross(sub(pv[1], pv[0]), sub(pv[2], pv[0]));
            dot(c, c).sqrt()
        };
        if area2 <= 0.0 {
            continue;
        }
        let mut cots = [0.0f64; 3];
        let mut obtuse = usize::MAX;
        for c in 0..3 {
            let u = sub(pv[(c + 1) % 3], pv[c]);
            let v = sub(pv[(c + 2) % 3], pv[c]);
            let d = dot(u, v);
            cots[c] = d / area2;
            if d < 0.0 {
                obtuse = c;
            }
        }
        for c in 0..3 {
            let i = t[c] as usize;
            let j = t[(c + 1) % 3] as usize;
            let k = t[(c + 2) % 3] as usize;
            // cot at corner c weights the opposite edge (j, k).
            let d = sub(mesh.vertices[j], mesh.vertices[k]);
            for a in 0..3 {
                lap[j][a] += cots[c] * d[a];
                lap[k][a] -= cots[c] * d[a];
            }
            // Meyer mixed area contribution at corner c.
            let tri_area = 0.25 * area2;
            mixed[i] += if obtuse == usize::MAX {
                let e_ij = sub(pv[(c + 1) % 3], pv[c]);
                let e_ik = sub(pv[(c + 2) % 3], pv[c]);
                0.125 * (dot(e_ij, e_ij) * cots[(c + 2) % 3] + dot(e_ik, e_ik) * cots[(c + 1) % 3])
            } else if obtuse == c {
                tri_area
            } else {
                0.5 * tri_area
            };
            let key = if t[c] < t[(c + 1) % 3] {
                (t[c], t[(c + 1) % 3])
            } else {
                (t[(c + 1) % 3], t[c])
            };
            *edge_tris.entry(key).or_insert(0) += 1;
        }
    }
    let mut interior = vec![true; nv];
    for (&(a, b), &count) in edge_tris.iter() {
        if count != 2 {
            interior[a as usize] = false;
            interior[b as usize] = false;
        }
    }
    let mut out = vec![f64::NAN; nv];
    for i in 0..nv {
        if interior[i] && mixed[i] > 0.0 {
            let l = lap[i];
            out[i] = 0.25 * dot(l, l).sqrt() / mixed[i];
        }
    }
    out
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp: PathBuf = path.with_extension("tmp-part");
    let io_err = |e: std::io::Error| Error::Io { path: path.to_path_buf(), source: e };
    let mut f = fs::File::create(&tmp).map_err(io_err)?;
    f.write_all(bytes).map_err(io_err)?;
    f.sync_all().map_err(io_err)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io_err)
}

/// ASCII OBJ plus a sidecar CSV (same stem, `.csv`) with per-vertex
/// attributes. Numbers print in shortest round-trip form, so files are
/// byte-stable and re-parse to identical floats.
pub fn write_obj(mesh: &SurfaceMesh, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("# provenance ");
    out.push_str(if mesh.provenance.is_empty() { "{}" } else { &mesh.provenance });
    out.push('\n');
    for v in &mesh.vertices {
        out.push_str(&format!("v {} {} {}\n", v[0], v[1], v[2]));
    }
    for t in &mesh.triangles {
        out.push_str(&format!("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1));
    }
    write_atomic(path, out.as_bytes())?;
    let mut csv = String::from("vertex_id,k_gauss,abs_g,layer\n");
    for i in 0..mesh.vertices.len() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            i, mesh.k_gauss[i], mesh.abs_g[i], mesh.layer[i]
        ));
    }
    write_atomic(&path.with_extension("csv"), csv.as_bytes())
}

/// Binary little-endian PLY with double positions and float attribute
/// channels; provenance rides in a header comment.
pub fn write_ply(mesh: &SurfaceMesh, path: &Path) -> Result<()> {
    let mut out: Vec<u8> = Vec::new();
    out.extend_from_slice(b"ply\nformat binary_little_endian 1.0\n");
    out.extend_from_slice(b"comment provenance ");
    out.extend_from_slice(if mesh.provenance.is_empty() {
        b"{}"
    } else {
        mesh.provenance.as_bytes()
    });
    out.push(b'\n');
    out.extend_from_slice(format!("element vertex {}\n", mesh.vertices.len()).as_bytes());
    out.extend_from_slice(
        b"property double x\nproperty double y\nproperty double z\n\
property float k_gauss\nproperty float abs_g\nproperty float layer\n",
    );
    out.extend_from_slice(format!("element face {}\n", mesh.triangles.len()).as_bytes());
    out.extend_from_slice(b"property list uchar int vertex_indices\nend_header\n");
    for (i, v) in mesh.vertices.iter().enumerate() {
        for &c in v {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out.extend_from_slice(&(mesh.k_gauss[i] as f32).to_le_bytes());
        out.extend_from_slice(&(mesh.abs_g[i] as f32).to_le_bytes());
        out.extend_from_slice(&(mesh.layer[i] as f32).to_le_bytes());
    }
    for t in &mesh.triangles {
        out.push(3u8);
        for &v in t {
            out.extend_from_slice(&(v as i32).to_le_bytes());
        }
    }
    write_atomic(path, &out)
}

pub fn read_obj(path: &Path) -> Result<SurfaceMesh> {
    let io_err = |e: std::io::Error| Error::Io { path: path.to_path_buf(), source: e };
    let text = fs::read_to_string(path).map_err(io_err)?;
    let mut mesh = SurfaceMesh::default();
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let mut v = [0.0f64; 3];
                for slot in v.iter_mut() {
                    *slot = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Config(format!("bad OBJ vertex line: {}", line)))?;
                }
                mesh.vertices.push(v);
            }
            Some("f") => {
                let mut t = [0u32; 3];
                for slot in t.iter_mut() {
                    let raw: i64 = parts
                        .next()
                        .and_then(|s| s.split('/').next().unwrap().parse().ok())
                        .ok_or_else(|| Error::Config(format!("bad OBJ face line: {}", line)))?;
                    *slot = (raw - 1) as u32;
                }
                mesh.triangles.push(t);
            }
            _ => {}
        }
    }
    Ok(mesh)
}

pub fn read_ply(path: &Path) -> Result<SurfaceMesh> {
    let io_err = |e: std::io::Error| Error::Io { path: path.to_path_buf(), source: e };
    let bytes = fs::read(path).map_err(io_err)?;
    let header_end = bytes
        .windows(11)
        .position(|w| w == b"end_header\n")
        .ok_or_else(|| Error::Config("PLY missing end_header".into()))?
        + 11;
    let header = std::str::from_utf8(&bytes[..header_end])
        .map_err(|_| Error::Config("PLY header is not UTF-8".into()))?;
    let mut nv = 0usize;
    let mut nf = 0usize;
    for line in header.lines() {
        if let Some(rest) = line.strip_prefix("element vertex ") {
            nv = rest.trim().parse().map_err(|_| Error::Config("bad vertex count".into()))?;
        }
        if let Some(rest) = line.strip_prefix("element face ") {
            nf = rest.trim().parse().map_err(|_| Error::Config("bad face count".into()))?;
        }
    }
    let mut mesh = SurfaceMesh::default();
    let mut at = header_end;
    let need = |at: usize, n: usize, len: usize| -> Result<()> {
        if at + n > len {
            Err(Error::Config("PLY truncated".into()))
        } else {
            Ok(())
        }
    };
    for _ in 0..nv {
        need(at, 36, bytes.len())?;
        let mut v = [0.0f64; 3];
        for slot in v.iter_mut() {
            *slot = f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
            at += 8;
        }
        mesh.vertices.push(v);
        let mut fl = [0.0f32; 3];
        for slot in fl.iter_mut() {
            *slot = f32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
            at += 4;
        }
        mesh.k_gauss.push(fl[0] as f64);
        mesh.abs_g.push(fl[1] as f64);
        mesh.in_omega_n.push(fl[1] >= 1.0);
        mesh.layer.push(fl[2] as i32);
    }
    for _ in 0..nf {
        need(at, 13, bytes.len())?;
        if bytes[at] != 3 {
            return Err(Error::Config("PLY face is not a triangle".into()));
        }
        at += 1;
        let mut t = [0u32; 3];
        for slot in t.iter_mut() {
            *slot = i32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as u32;
            at += 4;
        }
        mesh.triangles.push(t);
    }
    Ok(mesh)
}
