use log::{debug, trace};

use crate::matcore::{symmetric_eig, Cholesky, RealMatrix};
use crate::tolerance;

use super::problem::{RealBlock, RealSdp};
use super::{IterationLog, SdpError, SdpSettings, SdpStatus};

/// Iterate on the real standard-form problem.
#[derive(Clone, Debug)]
pub(crate) struct RealIterate {
    pub x: Vec<RealMatrix>,
    pub z: Vec<RealMatrix>,
    pub y: Vec<f64>,
}

#[derive(Clone, Debug)]
pub(crate) struct RealOutcome {
    pub iterate: RealIterate,
    pub status: SdpStatus,
    pub iterations: usize,
    pub history: Vec<IterationLog>,
    /// `<C, X>`
    pub primal_value: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

/// `A(X)_i = sum_blocks <A_i, X_b>`.
fn apply_a(p: &RealSdp, x: &[RealMatrix]) -> Vec<f64> {
    let mut out = vec![0.0; p.num_vars];
    for (blk, xb) in p.blocks.iter().zip(x) {
        for (i, entries) in &blk.a {
            out[*i] += entries.iter().map(|&(r, c, v)| v * xb[(r, c)]).sum::<f64>();
        }
    }
    out
}

/// `sum_i y_i A_i` for one block.
fn apply_at(blk: &RealBlock, y: &[f64]) -> RealMatrix {
    let mut out = RealMatrix::zeros(blk.dim, blk.dim);
    for (i, entries) in &blk.a {
        let yi = y[*i];
        if yi != 0.0 {
            for &(r, c, v) in entries {
                out[(r, c)] += yi * v;
            }
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn block_norm(ms: &[RealMatrix]) -> f64 {
    ms.iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>().sqrt()
}

/// Largest `alpha` with `M + alpha D` positive semidefinite, or infinity.
fn max_step(chol: &Cholesky, d: &RealMatrix) -> Result<f64, SdpError> {
    let s = chol.congruence_inverse(d);
    let eig = symmetric_eig(&s)?;
    let lmin = eig.eigenvalues[0];
    Ok(if lmin < 0.0 { -1.0 / lmin } else { f64::INFINITY })
}

/// Schur complement `M_ij = sum_b tr(A_i X_b A_j Z_b^{-1})`.
fn schur_complement(p: &RealSdp, x: &[RealMatrix], zinv: &[RealMatrix]) -> RealMatrix {
    let m = p.num_vars;
    let mut schur = RealMatrix::zeros(m, m);
    for ((blk, xb), zb) in p.blocks.iter().zip(x).zip(zinv) {
        let n = blk.dim;
        let mut g = RealMatrix::zeros(n, n);
        for (i, ai) in &blk.a {
            // G = X A_i Z^{-1} built from the sparse entries of A_i.
            g.as_mut_slice().iter_mut().for_each(|v| *v = 0.0);
            for &(pp, q, a) in ai {
                let zrow = zb.row(q);
                for r in 0..n {
                    let xa = a * xb[(r, pp)];
                    if xa != 0.0 {
                        let grow = &mut g.as_mut_slice()[r * n..(r + 1) * n];
                        for (gv, zv) in grow.iter_mut().zip(zrow) {
                            *gv += xa * zv;
                        }
                    }
                }
            }
            for (j, aj) in &blk.a {
                if j < i {
                    continue;
                }
                let v: f64 = aj.iter().map(|&(r, c, a)| a * g[(c, r)]).sum();
                schur[(*i, *j)] += v;
            }
        }
    }
    for i in 0..m {
        for j in 0..i {
            schur[(i, j)] = schur[(j, i)];
        }
    }
    schur
}

/// Schur complement with a factor of its shifted copy; solves are refined
/// against the unshifted matrix.
struct SchurSystem {
    m: RealMatrix,
    chol: Cholesky,
}

impl SchurSystem {
    const REFINEMENT_STEPS: usize = 3;

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut x = rhs.to_vec();
        self.chol.solve(&mut x);
        for _ in 0..Self::REFINEMENT_STEPS {
            let mut r: Vec<f64> = (0..n).map(|i| rhs[i] - dot(self.m.row(i), &x)).collect();
            self.chol.solve(&mut r);
            x.iter_mut().zip(&r).for_each(|(xi, ri)| *xi += ri);
        }
        x
    }
}

struct Direction {
    dx: Vec<RealMatrix>,
    dy: Vec<f64>,
    dz: Vec<RealMatrix>,
}

/// Solves the HKM Newton system for a given complementarity term `Rc Z^{-1}`.
fn direction(
    p: &RealSdp,
    schur: &SchurSystem,
    x: &[RealMatrix],
    zinv: &[RealMatrix],
    rp: &[f64],
    rd: &[RealMatrix],
    rc_zinv: &[RealMatrix],
) -> Direction {
    // rhs = Rp - A(Rc Z^{-1}) + A(X Rd Z^{-1})
    let x_rd_zinv: Vec<RealMatrix> = x
        .iter()
        .zip(rd)
        .zip(zinv)
        .map(|((xb, rdb), zb)| xb.matmul(rdb).matmul(zb))
        .collect();
    let a1 = apply_a(p, rc_zinv);
    let a2 = apply_a(p, &x_rd_zinv);
    let rhs: Vec<f64> = rp.iter().zip(&a1).zip(&a2).map(|((r, a), b)| r - a + b).collect();
    let dy = schur.solve(&rhs);

    let mut dz = Vec::with_capacity(p.blocks.len());
    let mut dx = Vec::with_capacity(p.blocks.len());
    for (b, blk) in p.blocks.iter().enumerate() {
        let mut dzb = rd[b].clone();
        dzb.add_scaled(-1.0, &apply_at(blk, &dy));
        let mut dxb = rc_zinv[b].clone();
        dxb.add_scaled(-1.0, &x[b].matmul(&dzb).matmul(&zinv[b]));
        dxb.symmetrize();
        dz.push(dzb);
        dx.push(dxb);
    }
    Direction { dx, dy, dz }
}

fn step_lengths(
    xchol: &[Cholesky],
    zchol: &[Cholesky],
    d: &Direction,
) -> Result<(f64, f64), SdpError> {
    let mut ap = f64::INFINITY;
    let mut ad = f64::INFINITY;
    for b in 0..xchol.len() {
        ap = ap.min(max_step(&xchol[b], &d.dx[b])?);
        ad = ad.min(max_step(&zchol[b], &d.dz[b])?);
    }
    Ok((ap, ad))
}

fn identity_blocks(p: &RealSdp, s: f64) -> Vec<RealMatrix> {
    p.blocks.iter().map(|b| RealMatrix::scaled_identity(b.dim, s)).collect()
}

/// Chooses the starting point. A supplied `y0` is used when its slack is
/// positive definite in every block; otherwise the iteration starts from scaled
/// identities with `y = 0`.
fn initial_point(p: &RealSdp, y0: Option<&[f64]>) -> RealIterate {
    let n_total: usize = p.blocks.iter().map(|b| b.dim).sum();
    let max_a = p
        .blocks
        .iter()
        .flat_map(|b| b.a.iter().map(|(_, e)| e.iter().map(|t| t.2 * t.2).sum::<f64>().sqrt()))
        .fold(0.0, f64::max);
    let max_b = p.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let xi = 10f64.max((n_total as f64).sqrt()).max((1.0 + max_b) / (1.0 + max_a));

    if let Some(y0) = y0 {
        let z: Vec<RealMatrix> = p
            .blocks
            .iter()
            .map(|blk| {
                let mut z = blk.c.clone();
                z.add_scaled(-1.0, &apply_at(blk, y0));
                z.symmetrize();
                z
            })
            .collect();
        if z.iter().all(|zb| Cholesky::new(zb).is_ok()) {
            return RealIterate {
                x: identity_blocks(p, xi),
                z,
                y: y0.to_vec(),
            };
        }
        debug!("supplied start is not strictly feasible; using identity start");
    }
    let max_c = p.blocks.iter().map(|b| b.c.frobenius_norm()).fold(0.0, f64::max);
    let eta = 10f64.max((n_total as f64).sqrt()).max(max_a).max(max_c);
    RealIterate {
        x: identity_blocks(p, xi),
        z: identity_blocks(p, eta),
        y: vec![0.0; p.num_vars],
    }
}

/// Measures of one iterate, kept so the most accurate point seen can be returned.
struct Snapshot {
    iterate: RealIterate,
    iteration: usize,
    primal_value: f64,
    gap: f64,
    pres: f64,
    dres: f64,
}

impl Snapshot {
    fn merit(&self) -> f64 {
        self.gap.max(self.pres).max(self.dres)
    }
}

/// Iterations without improving the best merit before the method gives up.
const STALL_LIMIT: usize = 8;

pub(crate) fn solve_real(
    p: &RealSdp,
    y0: Option<&[f64]>,
    settings: &SdpSettings,
) -> Result<RealOutcome, SdpError> {
    let mut it = initial_point(p, y0);
    let n_total: f64 = p.blocks.iter().map(|b| b.dim as f64).sum();
    let b_norm = norm(&p.b);
    let c_norm = block_norm(&p.blocks.iter().map(|b| b.c.clone()).collect::<Vec<_>>());
    let mut history = Vec::new();
    let mut best: Option<Snapshot> = None;

    let finish = |best: Option<Snapshot>, history: Vec<IterationLog>, iterations, status: SdpStatus, why: &str| {
        let best = best.expect("at least one iterate is recorded");
        let status = if best.merit() <= settings.gap_optimal {
            SdpStatus::Optimal
        } else {
            debug!("interior point stopped after {iterations} iterations: {why}");
            status
        };
        Ok(RealOutcome {
            iterate: best.iterate,
            status,
            iterations,
            history,
            primal_value: best.primal_value,
            gap: best.gap,
            primal_residual: best.pres,
            dual_residual: best.dres,
        })
    };

    let mut iterations = 0;
    loop {
        let ax = apply_a(p, &it.x);
        let rp: Vec<f64> = p.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let rd: Vec<RealMatrix> = p
            .blocks
            .iter()
            .zip(&it.z)
            .map(|(blk, zb)| {
                let mut r = blk.c.clone();
                r.add_scaled(-1.0, zb);
                r.add_scaled(-1.0, &apply_at(blk, &it.y));
                r
            })
            .collect();
        let primal_value: f64 = p.blocks.iter().zip(&it.x).map(|(b, x)| b.c.dot(x)).sum();
        let dual_value = dot(&p.b, &it.y);
        let xz: f64 = it.x.iter().zip(&it.z).map(|(x, z)| x.dot(z)).sum();
        let gap = (primal_value - dual_value).abs().max(xz);
        let pres = norm(&rp) / (1.0 + b_norm);
        let dres = block_norm(&rd) / (1.0 + c_norm);
        history.push(IterationLog {
            iteration: iterations,
            primal_objective: primal_value,
            dual_objective: dual_value,
            gap,
            primal_residual: pres,
            dual_residual: dres,
        });
        trace!("iter {iterations}: p {primal_value:.10e} d {dual_value:.10e} gap {gap:.2e} pres {pres:.2e} dres {dres:.2e}");

        let snap = Snapshot {
            iterate: it.clone(),
            iteration: iterations,
            primal_value,
            gap,
            pres,
            dres,
        };
        if best.as_ref().is_none_or(|b| snap.merit() < b.merit()) {
            best = Some(snap);
        }
        let best_merit = best.as_ref().map_or(f64::INFINITY, Snapshot::merit);
        let best_iteration = best.as_ref().map_or(0, |b| b.iteration);

        if best_merit <= settings.gap_target {
            return finish(best, history, iterations, SdpStatus::Optimal, "converged");
        }
        if iterations >= settings.max_iterations {
            return finish(best, history, iterations, SdpStatus::MaxIterations, "iteration limit");
        }
        if iterations - best_iteration >= STALL_LIMIT {
            return finish(best, history, iterations, SdpStatus::NumericalFailure, "no progress");
        }
        if block_norm(&it.x) > 1e10 || norm(&it.y) > 1e10 {
            return Err(SdpError::Infeasible);
        }

        let fail = |best, history, why: &str| {
            finish(best, history, iterations, SdpStatus::NumericalFailure, why)
        };

        let zchol: Vec<Cholesky> = match it.z.iter().map(Cholesky::new).collect() {
            Ok(c) => c,
            Err(_) => return fail(best, history, "slack lost definiteness"),
        };
        let xchol: Vec<Cholesky> = match it.x.iter().map(Cholesky::new).collect() {
            Ok(c) => c,
            Err(_) => return fail(best, history, "primal lost definiteness"),
        };
        let zinv: Vec<RealMatrix> = zchol.iter().map(Cholesky::inverse).collect();

        let schur = schur_complement(p, &it.x, &zinv);
        let scale = (0..p.num_vars).map(|i| schur[(i, i)].abs()).fold(1.0, f64::max);
        let shifts = [0.0, 1e-2, 1.0, 1e2].map(|k| k * settings.regularization * scale);
        let Some(chol) = shifts.iter().find_map(|&shift| {
            let mut shifted = schur.clone();
            for i in 0..p.num_vars {
                shifted[(i, i)] += shift;
            }
            Cholesky::new(&shifted).ok()
        }) else {
            return fail(best, history, "Schur complement is not positive definite");
        };
        let system = SchurSystem { m: schur, chol };

        let mu = xz / n_total;

        // Predictor: Rc = -XZ, so Rc Z^{-1} = -X.
        let neg_x: Vec<RealMatrix> = it.x.iter().map(|x| x.scaled(-1.0)).collect();
        let aff = direction(p, &system, &it.x, &zinv, &rp, &rd, &neg_x);
        let (ap, ad) = step_lengths(&xchol, &zchol, &aff)?;
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mu_aff: f64 = it
            .x
            .iter()
            .zip(&it.z)
            .zip(aff.dx.iter().zip(&aff.dz))
            .map(|((x, z), (dx, dz))| {
                let mut xa = x.clone();
                xa.add_scaled(ap, dx);
                let mut za = z.clone();
                za.add_scaled(ad, dz);
                xa.dot(&za)
            })
            .sum::<f64>()
            / n_total;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // Corrector: Rc Z^{-1} = sigma mu Z^{-1} - X - dXa dZa Z^{-1}.
        let rc_zinv: Vec<RealMatrix> = (0..p.blocks.len())
            .map(|b| {
                let mut r = zinv[b].scaled(sigma * mu);
                r.add_scaled(-1.0, &it.x[b]);
                r.add_scaled(-1.0, &aff.dx[b].matmul(&aff.dz[b]).matmul(&zinv[b]));
                r
            })
            .collect();
        let d = direction(p, &system, &it.x, &zinv, &rp, &rd, &rc_zinv);
        let (ap, ad) = step_lengths(&xchol, &zchol, &d)?;
        let ap = (settings.step_fraction * ap).min(1.0);
        let ad = (settings.step_fraction * ad).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            return fail(best, history, "step length collapsed");
        }
        for b in 0..p.blocks.len() {
            it.x[b].add_scaled(ap, &d.dx[b]);
            it.x[b].symmetrize();
            it.z[b].add_scaled(ad, &d.dz[b]);
            it.z[b].symmetrize();
        }
        for (yi, dyi) in it.y.iter_mut().zip(&d.dy) {
            *yi += ad * dyi;
        }
        iterations += 1;
    }
}

pub(crate) fn default_settings() -> SdpSettings {
    SdpSettings {
        max_iterations: tolerance::SDP_MAX_ITERATIONS,
        gap_target: tolerance::SDP_GAP_TARGET,
        gap_optimal: tolerance::SDP_GAP_OPTIMAL,
        step_fraction: tolerance::SDP_STEP_FRACTION,
        regularization: tolerance::SDP_REGULARIZATION,
    }
}
