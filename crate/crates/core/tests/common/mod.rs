//! Independent oracles shared by the integration tests and the acceptance
//! runner: tensor Gauss quadrature on collapsed triangles, hand-written P1/P2
//! bases, dense assembly, and the property checks of the acceptance suite.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use ofd_core::assembly::{
    assemble_fluid, assemble_reference_stiffness, assemble_solid_matrices, compose_system,
    compose_velocity_block, fluid_operator, solid_operator, BoundaryKind, DofMap, ElementKind,
    ModelParams, Scheme,
};
use ofd_core::coupling::build_coupling;
use ofd_core::diagnostics::potential_energy;
use ofd_core::fem::element::element_matrices;
use ofd_core::la::minres::{minres, MinresOptions};
use ofd_core::mesh::locate::BinGrid;
use ofd_core::mesh::solid::SolidState;
use ofd_core::mesh::trimesh::{Point, TriMesh};
use ofd_core::stepper::{Simulation, SolverSettings};

/// Gauss-Legendre nodes and weights on `[0, 1]`, by Newton on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

/// Quadrature point on a triangle: barycentric coordinates and weight.
#[derive(Debug, Clone, Copy)]
pub struct TriPoint {
    pub lambda: [f64; 3],
    pub x: Point,
    pub w: f64,
}

/// Collapsed (Duffy) tensor Gauss rule, exact to total degree `2n - 2`.
pub fn collapsed_rule(corners: &[Point; 3], n: usize) -> Vec<TriPoint> {
    let gl = gauss_legendre(n);
    let area = triangle_area(corners);
    let mut pts = Vec::with_capacity(n * n);
    for &(s, ws) in &gl {
        for &(t, wt) in &gl {
            let xi = s;
            let eta = t * (1.0 - s);
            let lambda = [1.0 - xi - eta, xi, eta];
            let x = [
                lambda[0] * corners[0][0] + lambda[1] * corners[1][0] + lambda[2] * corners[2][0],
                lambda[0] * corners[0][1] + lambda[1] * corners[1][1] + lambda[2] * corners[2][1],
            ];
            pts.push(TriPoint {
                lambda,
                x,
                w: ws * wt * (1.0 - s) * 2.0 * area,
            });
        }
    }
    pts
}

/// Degree-8 rule used by the element oracles.
pub fn degree8(corners: &[Point; 3]) -> Vec<TriPoint> {
    collapsed_rule(corners, 5)
}

pub fn triangle_area(c: &[Point; 3]) -> f64 {
    0.5 * ((c[1][0] - c[0][0]) * (c[2][1] - c[0][1]) - (c[2][0] - c[0][0]) * (c[1][1] - c[0][1]))
}

/// Gradients of the barycentric coordinates, from the inverse Jacobian.
pub fn grad_lambda(c: &[Point; 3]) -> [[f64; 2]; 3] {
    let j = nalgebra::Matrix2::new(
        c[1][0] - c[0][0],
        c[2][0] - c[0][0],
        c[1][1] - c[0][1],
        c[2][1] - c[0][1],
    );
    let inv = j.try_inverse().expect("degenerate triangle");
    // rows of J^{-1} are grad xi and grad eta
    let g1 = [inv[(0, 0)], inv[(0, 1)]];
    let g2 = [inv[(1, 0)], inv[(1, 1)]];
    [[-g1[0] - g2[0], -g1[1] - g2[1]], g1, g2]
}

const EDGES: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

pub fn p2_values(l: [f64; 3]) -> [f64; 6] {
    let mut v = [0.0; 6];
    for i in 0..3 {
        v[i] = l[i] * (2.0 * l[i] - 1.0);
    }
    for (k, &(i, j)) in EDGES.iter().enumerate() {
        v[3 + k] = 4.0 * l[i] * l[j];
    }
    v
}

pub fn p2_grads(l: [f64; 3], gl: &[[f64; 2]; 3]) -> [[f64; 2]; 6] {
    let mut g = [[0.0; 2]; 6];
    for i in 0..3 {
        for d in 0..2 {
            g[i][d] = (4.0 * l[i] - 1.0) * gl[i][d];
        }
    }
    for (k, &(i, j)) in EDGES.iter().enumerate() {
        for d in 0..2 {
            g[3 + k][d] = 4.0 * (l[j] * gl[i][d] + l[i] * gl[j][d]);
        }
    }
    g
}

/// `1/2 D(phi_a e_c) : D(phi_b e_e)` with `D u = grad u + grad u^T`, built
/// from the full tensors rather than the simplified formula.
pub fn sym_grad_product(ga: [f64; 2], c: usize, gb: [f64; 2], e: usize) -> f64 {
    let tensor = |g: [f64; 2], comp: usize| {
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                // (grad u)_{ij} = d_j u_i
                let gu = if i == comp { g[j] } else { 0.0 };
                let gut = if j == comp { g[i] } else { 0.0 };
                m[i][j] = gu + gut;
            }
        }
        m
    };
    let (a, b) = (tensor(ga, c), tensor(gb, e));
    0.5 * (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| a[i][j] * b[i][j])
        .sum::<f64>()
}

/// Local matrices computed by the oracle on one triangle.
pub struct OracleElement {
    pub mass: DMatrix<f64>,
    pub visc: DMatrix<f64>,
    pub div: DMatrix<f64>,
    pub solid_mass: DMatrix<f64>,
    pub solid_visc: DMatrix<f64>,
    pub ref_grad: DMatrix<f64>,
}

pub fn oracle_element(corners: &[Point; 3], reference: &[Point; 3]) -> OracleElement {
    let gl = grad_lambda(corners);
    let mut mass = DMatrix::zeros(12, 12);
    let mut visc = DMatrix::zeros(12, 12);
    let mut div = DMatrix::zeros(12, 4);
    let mut solid_mass = DMatrix::zeros(6, 6);
    let mut solid_visc = DMatrix::zeros(6, 6);
    for q in degree8(corners) {
        let phi = p2_values(q.lambda);
        let g = p2_grads(q.lambda, &gl);
        let psi = [q.lambda[0], q.lambda[1], q.lambda[2], 1.0];
        for c in 0..2 {
            for a in 0..6 {
                for b in 0..6 {
                    mass[(c * 6 + a, c * 6 + b)] += q.w * phi[a] * phi[b];
                    for e in 0..2 {
                        visc[(c * 6 + a, e * 6 + b)] += q.w * sym_grad_product(g[a], c, g[b], e);
                    }
                }
                for (k, p) in psi.iter().enumerate() {
                    div[(c * 6 + a, k)] -= q.w * p * g[a][c];
                }
            }
            for a in 0..3 {
                for b in 0..3 {
                    solid_mass[(c * 3 + a, c * 3 + b)] += q.w * q.lambda[a] * q.lambda[b];
                    for e in 0..2 {
                        solid_visc[(c * 3 + a, e * 3 + b)] +=
                            q.w * sym_grad_product(gl[a], c, gl[b], e);
                    }
                }
            }
        }
    }
    let glr = grad_lambda(reference);
    let mut ref_grad = DMatrix::zeros(6, 6);
    for q in degree8(reference) {
        for c in 0..2 {
            for a in 0..3 {
                for b in 0..3 {
                    ref_grad[(c * 3 + a, c * 3 + b)] +=
                        q.w * (glr[a][0] * glr[b][0] + glr[a][1] * glr[b][1]);
                }
            }
        }
    }
    OracleElement {
        mass,
        visc,
        div,
        solid_mass,
        solid_visc,
        ref_grad,
    }
}

pub struct DenseFluid {
    pub m: DMatrix<f64>,
    pub k: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub mp: DMatrix<f64>,
}

/// Global fluid matrices scattered from the oracle element blocks.
pub fn dense_fluid(mesh: &TriMesh, dofs: &DofMap, nu: f64) -> DenseFluid {
    let (nu_dofs, np) = (dofs.n_free_u(), dofs.n_p());
    let mut m = DMatrix::zeros(nu_dofs, nu_dofs);
    let mut k = DMatrix::zeros(nu_dofs, nu_dofs);
    let mut b = DMatrix::zeros(nu_dofs, np);
    let mut mp = DMatrix::zeros(np, np);
    for t in 0..mesh.n_triangles() {
        let corners = mesh.corners(t);
        let o = oracle_element(&corners, &corners);
        let ud = dofs.element_velocity_dofs(mesh, t);
        let p1 = dofs.element_p1_dofs(mesh, t);
        let p0 = dofs.element_p0_dof(t);
        let mut pd: Vec<(usize, usize)> = p1.iter().enumerate().map(|(q, &j)| (q, j)).collect();
        if let Some(j) = p0 {
            pd.push((3, j));
        }
        for r in 0..12 {
            let Some(i) = ud[r] else { continue };
            for s in 0..12 {
                if let Some(j) = ud[s] {
                    m[(i, j)] += o.mass[(r, s)];
                    k[(i, j)] += nu * o.visc[(r, s)];
                }
            }
            for &(q, j) in &pd {
                b[(i, j)] += o.div[(r, q)];
            }
        }
        // pressure Gram matrix from the oracle rule
        let rule = degree8(&corners);
        let psi = |l: [f64; 3], q: usize| if q < 3 { l[q] } else { 1.0 };
        for &(q, i) in &pd {
            for &(r, j) in &pd {
                mp[(i, j)] += rule
                    .iter()
                    .map(|x| x.w * psi(x.lambda, q) * psi(x.lambda, r))
                    .sum::<f64>();
            }
        }
    }
    DenseFluid { m, k, b, mp }
}

/// `int (w . grad) w . v` evaluated with the oracle rule.
pub fn oracle_convection(mesh: &TriMesh, dofs: &DofMap, w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; w.len()];
    for t in 0..mesh.n_triangles() {
        let corners = mesh.corners(t);
        let gl = grad_lambda(&corners);
        let nodes = mesh.p2_nodes(t);
        let vals: Vec<Point> = nodes.iter().map(|&n| dofs.node_velocity(w, n)).collect();
        let ud = dofs.element_velocity_dofs(mesh, t);
        for q in degree8(&corners) {
            let phi = p2_values(q.lambda);
            let g = p2_grads(q.lambda, &gl);
            let u: Point = [0, 1].map(|c| (0..6).map(|a| phi[a] * vals[a][c]).sum());
            for c in 0..2 {
                let du: [f64; 2] = [0, 1].map(|d| (0..6).map(|a| vals[a][c] * g[a][d]).sum());
                let conv = u[0] * du[0] + u[1] * du[1];
                for a in 0..6 {
                    if let Some(i) = ud[c * 6 + a] {
                        out[i] += q.w * conv * phi[a];
                    }
                }
            }
        }
    }
    out
}

pub fn dense<const R: usize, const C: usize>(m: &[[f64; C]; R]) -> DMatrix<f64> {
    DMatrix::from_fn(R, C, |i, j| m[i][j])
}

pub fn to_nalgebra(m: &ofd_core::la::SparseMatrix) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(m.n_rows(), m.n_cols());
    for i in 0..m.n_rows() {
        let (cols, vals) = m.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            d[(i, j)] += v;
        }
    }
    d
}

/// Largest entry of `a - b` relative to the largest entry of `b`.
pub fn rel_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = b.amax().max(f64::MIN_POSITIVE);
    (a - b).amax() / scale
}

/// Small deterministic generator for test inputs.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(
            seed.wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407),
        )
    }

    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Disc with one rotated, sheared configuration, so that current and
/// reference geometry differ.
pub fn deformed_disc(center: Point, radius: f64, h: f64) -> SolidState {
    let disc = SolidState::build_disc(center, radius, h, false).unwrap();
    let coords: Vec<Point> = disc
        .ref_coords()
        .iter()
        .map(|p| {
            let (x, y) = (p[0] - center[0], p[1] - center[1]);
            [
                center[0] + 1.1 * x + 0.05 * y,
                center[1] - 0.03 * x + 0.95 * y,
            ]
        })
        .collect();
    disc.with_coords(coords).unwrap()
}

// ---------------------------------------------------------------------------
// Property checks shared with the acceptance runner. Each returns a short
// description of what was measured, or the reason for failure.

pub type Check = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Rows of the interpolation sum to one and quadratics are reproduced.
pub fn check_interpolation() -> Check {
    let mesh = TriMesh::unit_square(6, false).unwrap();
    let dofs = DofMap::new(&mesh, BoundaryKind::Freeslip, ElementKind::P2P1P0).unwrap();
    let grid = BinGrid::new(&mesh);
    let mut rng = Lcg::new(7);
    let nodes: Vec<Point> = (0..200)
        .map(|_| [rng.range(0.0, 1.0), rng.range(0.0, 1.0)])
        .collect();
    let c = build_coupling(&mesh, &grid, &dofs, &nodes, 0.0).map_err(|e| e.to_string())?;
    let f =
        |p: Point| 1.0 + 2.0 * p[0] - p[1] + 3.0 * p[0] * p[0] - p[0] * p[1] + 0.5 * p[1] * p[1];
    let nodal: Vec<f64> = (0..dofs.n_canonical())
        .map(|i| f(dofs.canonical_coords(i)))
        .collect();
    let vals = c.p.spmv(&nodal).map_err(|e| e.to_string())?;
    let mut worst_sum: f64 = 0.0;
    let mut worst_quad: f64 = 0.0;
    for (i, x) in nodes.iter().enumerate() {
        let (_, row) = c.p.row(i);
        worst_sum = worst_sum.max((row.iter().sum::<f64>() - 1.0).abs());
        worst_quad = worst_quad.max((vals[i] - f(*x)).abs());
    }
    ensure(
        worst_sum < 1e-13 && worst_quad < 1e-12,
        format!("row-sum error {worst_sum:.1e}, quadratic error {worst_quad:.1e}"),
    )
}

/// Element matrices against the degree-8 oracle.
pub fn check_element_matrices() -> Check {
    let tris: [[Point; 3]; 3] = [
        [[0.1, 0.2], [0.9, 0.0], [0.4, 0.7]],
        [[0.0, 0.0], [0.02, 0.0], [0.0, 0.02]],
        [[-1.0, 0.3], [2.5, -0.4], [0.2, 1.9]],
    ];
    let reference: [Point; 3] = [[0.0, 0.0], [0.3, 0.05], [0.1, 0.25]];
    let mut worst: f64 = 0.0;
    for t in &tris {
        let lib = element_matrices(t, Some(&reference)).map_err(|e| e.to_string())?;
        let o = oracle_element(t, &reference);
        let mut div = DMatrix::zeros(12, 4);
        for i in 0..12 {
            for k in 0..3 {
                div[(i, k)] = lib.div_p1[i][k];
            }
            div[(i, 3)] = lib.div_p0[i][0];
        }
        for d in [
            rel_diff(&dense(&lib.mass), &o.mass),
            rel_diff(&dense(&lib.visc), &o.visc),
            rel_diff(&div, &o.div),
            rel_diff(&dense(&lib.solid_mass), &o.solid_mass),
            rel_diff(&dense(&lib.solid_visc), &o.solid_visc),
            rel_diff(&dense(&lib.ref_grad), &o.ref_grad),
        ] {
            worst = worst.max(d);
        }
    }
    ensure(
        worst <= 1e-12,
        format!("max relative deviation {worst:.1e}"),
    )
}

/// Coupled velocity block on a mesh with a deformed disc.
pub fn coupled_block(
    n: usize,
    params: ModelParams,
    dt: f64,
    scheme: Scheme,
) -> (DMatrix<f64>, usize) {
    let mesh = TriMesh::unit_square(n, false).unwrap();
    let dofs = DofMap::new(&mesh, BoundaryKind::Freeslip, ElementKind::P2P1P0).unwrap();
    let grid = BinGrid::new(&mesh);
    let fluid = assemble_fluid(&mesh, &dofs, &params).unwrap();
    let af = fluid_operator(&fluid, &params, dt, scheme).unwrap();
    let solid = deformed_disc([0.45, 0.5], 0.25, 1.0 / n as f64);
    let c = build_coupling(&mesh, &grid, &dofs, solid.cur_coords(), 0.0).unwrap();
    let mats = assemble_solid_matrices(&solid).unwrap();
    let gref = assemble_reference_stiffness(&solid).unwrap();
    let s = solid_operator(&mats, &gref, &params, dt, scheme).unwrap();
    let a = compose_velocity_block(&af, &c.d, &s).unwrap();
    let sys = compose_system(a, &fluid, &dofs, vec![0.0; dofs.n_free_u()]).unwrap();
    (saddle_dense(&sys), sys.n_u())
}

/// Full system symmetric to 1e-12 relative, for both parameter sets.
pub fn check_symmetry() -> Check {
    let mut worst: f64 = 0.0;
    for params in [ModelParams::param1(), ModelParams::param2()] {
        for scheme in [Scheme::CrankNicolson, Scheme::BackwardEuler] {
            let (k, _) = coupled_block(5, params, 1e-2, scheme);
            worst = worst.max((&k - k.transpose()).amax() / k.amax());
        }
    }
    ensure(
        worst <= 1e-12,
        format!("max relative asymmetry {worst:.1e}"),
    )
}

/// Velocity block positive definite via dense Cholesky on a 6x6 mesh.
pub fn check_velocity_block_spd() -> Check {
    let mut msgs = Vec::new();
    for (name, params) in [
        ("param1", ModelParams::param1()),
        ("param2", ModelParams::param2()),
    ] {
        let (k, nu) = coupled_block(6, params, 1e-2, Scheme::CrankNicolson);
        let a = k.view((0, 0), (nu, nu)).into_owned();
        let sym = 0.5 * (&a + a.transpose());
        if sym.cholesky().is_none() {
            return Err(format!("{name}: dense Cholesky failed ({nu} unknowns)"));
        }
        msgs.push(format!("{name} ok ({nu} unknowns)"));
    }
    Ok(msgs.join(", "))
}

/// Dense solution of the saddle system with the deflation vectors enforced
/// through Lagrange multipliers.
pub fn dense_saddle_solve(
    k: &DMatrix<f64>,
    n_u: usize,
    rhs: &DVector<f64>,
    deflation: &[Vec<f64>],
) -> DVector<f64> {
    let n = k.nrows();
    let m = deflation.len();
    let mut big = DMatrix::zeros(n + m, n + m);
    big.view_mut((0, 0), (n, n)).copy_from(k);
    for (j, z) in deflation.iter().enumerate() {
        for (i, v) in z.iter().enumerate() {
            big[(n_u + i, n + j)] = *v;
            big[(n + j, n_u + i)] = *v;
        }
    }
    let mut r = DVector::zeros(n + m);
    r.rows_mut(0, n).copy_from(rhs);
    let x = big
        .lu()
        .solve(&r)
        .expect("bordered saddle matrix is singular");
    x.rows(0, n).into_owned()
}

/// MinRes against dense LU on coupled systems of at most 300 unknowns.
pub fn check_minres_vs_lu() -> Check {
    let mut worst: f64 = 0.0;
    let mut sizes = Vec::new();
    for (n, element, seed) in [
        (3, ElementKind::P2P1P0, 1),
        (4, ElementKind::P2P1, 2),
        (4, ElementKind::P2P1P0, 3),
    ] {
        let params = ModelParams::param2();
        let (dt, scheme) = (1e-2, Scheme::CrankNicolson);
        let mesh = TriMesh::unit_square(n, false).unwrap();
        let dofs = DofMap::new(&mesh, BoundaryKind::Freeslip, element).unwrap();
        let grid = BinGrid::new(&mesh);
        let fluid = assemble_fluid(&mesh, &dofs, &params).unwrap();
        let af = fluid_operator(&fluid, &params, dt, scheme).unwrap();
        let solid = deformed_disc([0.5, 0.5], 0.25, 1.0 / n as f64);
        let c = build_coupling(&mesh, &grid, &dofs, solid.cur_coords(), 0.0).unwrap();
        let mats = assemble_solid_matrices(&solid).unwrap();
        let gref = assemble_reference_stiffness(&solid).unwrap();
        let s = solid_operator(&mats, &gref, &params, dt, scheme).unwrap();
        let a = compose_velocity_block(&af, &c.d, &s).unwrap();
        let mut rng = Lcg::new(seed);
        let rhs_u: Vec<f64> = (0..dofs.n_free_u()).map(|_| rng.range(-1.0, 1.0)).collect();
        let sys = compose_system(a, &fluid, &dofs, rhs_u.clone()).unwrap();
        let total = sys.n_u() + sys.n_p();
        if total > 300 {
            return Err(format!("test system too large: {total}"));
        }
        sizes.push(total);
        let pc =
            ofd_core::assembly::block_preconditioner(&af, &fluid, &params, dt, scheme).unwrap();
        let opts = MinresOptions {
            tol: 1e-13,
            max_iters: 5000,
            record_history: false,
        };
        let sol = minres(&sys, &pc, opts, None).map_err(|e| e.to_string())?;
        let nu = sys.n_u();
        let k = saddle_dense(&sys);
        let mut rhs = DVector::zeros(total);
        rhs.rows_mut(0, nu).copy_from(&DVector::from_vec(rhs_u));
        let x = dense_saddle_solve(&k, nu, &rhs, sys.deflation_basis());
        let mine = DVector::from_iterator(total, sol.u.iter().chain(&sol.p).copied());
        worst = worst.max((&mine - &x).amax() / x.amax());
    }
    ensure(
        worst <= 1e-8,
        format!("max relative deviation {worst:.1e} on systems of {sizes:?} unknowns"),
    )
}

/// Dense `[[A, B], [B^T, 0]]`.
pub fn saddle_dense(sys: &ofd_core::la::SaddleSystem<'_>) -> DMatrix<f64> {
    let (nu, np) = (sys.n_u(), sys.n_p());
    let a = to_nalgebra(&sys.a);
    let b = to_nalgebra(sys.b);
    let mut k = DMatrix::zeros(nu + np, nu + np);
    k.view_mut((0, 0), (nu, nu)).copy_from(&a);
    k.view_mut((0, nu), (nu, np)).copy_from(&b);
    k.view_mut((nu, 0), (np, nu)).copy_from(&b.transpose());
    k
}

/// Rigid motions of an unstretched disc store no elastic energy.
pub fn check_rigid_motion_energy() -> Check {
    let disc = SolidState::build_disc([0.5, 0.5], 0.2, 0.04, false).unwrap();
    let mut worst: f64 = 0.0;
    for (theta, shift) in [
        (0.3, [0.1, -0.05]),
        (PI / 2.0, [0.0, 0.0]),
        (2.0, [-0.2, 0.3]),
    ] {
        let (s, c) = f64::sin_cos(theta);
        let coords: Vec<Point> = disc
            .ref_coords()
            .iter()
            .map(|p| {
                let (x, y) = (p[0] - 0.5, p[1] - 0.5);
                [
                    0.5 + c * x - s * y + shift[0],
                    0.5 + s * x + c * y + shift[1],
                ]
            })
            .collect();
        let moved = disc.with_coords(coords).map_err(|e| e.to_string())?;
        worst = worst.max(potential_energy(&moved, 10.0).abs());
    }
    ensure(worst <= 1e-12, format!("max |Ep| {worst:.1e}"))
}

/// A stress-free solid in fluid at rest stays at rest for ten steps.
pub fn check_rest_state() -> Check {
    let mut worst: f64 = 0.0;
    for (params, scheme) in [
        (ModelParams::param1(), Scheme::CrankNicolson),
        (ModelParams::param2(), Scheme::BackwardEuler),
    ] {
        let mesh = TriMesh::unit_square(10, true).unwrap();
        let dofs = DofMap::new(&mesh, BoundaryKind::Periodic, ElementKind::P2P1P0).unwrap();
        let n_u = dofs.n_free_u();
        let mut sim =
            Simulation::new(mesh, dofs, params, 1e-2, scheme, SolverSettings::default()).unwrap();
        let disc = SolidState::build_disc([0.5, 0.5], 0.2, 0.1, false).unwrap();
        let mut state = sim.initial_state(vec![0.0; n_u], Some(disc)).unwrap();
        for _ in 0..10 {
            state = sim.step(&state).map_err(|e| e.to_string())?.state;
            worst = worst.max(state.u.iter().fold(0.0, |m, v| m.max(v.abs())));
        }
    }
    ensure(
        worst <= 1e-12,
        format!("max |u| after 10 steps {worst:.1e}"),
    )
}

/// Every property check, in acceptance order.
pub fn property_checks() -> Vec<(&'static str, fn() -> Check)> {
    vec![
        (
            "interpolation partition of unity and quadratic reproduction",
            check_interpolation as fn() -> Check,
        ),
        (
            "element matrices vs degree-8 quadrature",
            check_element_matrices,
        ),
        ("full-system symmetry", check_symmetry),
        (
            "velocity block SPD (dense Cholesky, 6x6 mesh)",
            check_velocity_block_spd,
        ),
        ("MinRes vs dense LU", check_minres_vs_lu),
        ("rigid motion potential energy", check_rigid_motion_energy),
        ("stress-free rest state", check_rest_state),
    ]
}
