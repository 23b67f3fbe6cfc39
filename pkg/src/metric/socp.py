"""
Primal-dual interior-point method for small dense second-order cone programs.

Solves the homogeneous self-dual embedding of

    minimize cᵀx  s.t.  Ax = b,  Gx + s = h,  s ∈ K

with Nesterov-Todd scaling and a Mehrotra predictor-corrector. Problems
here have a few dozen variables at most, so the KKT system is assembled
densely and factored with LU (static regularisation plus iterative
refinement). The embedding yields certificates when the program is
infeasible or unbounded.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from src.metric.program import ConeDims, ConicProgram
from src.models.metric import MetricSolution, SolveStatus

logger = logging.getLogger(__name__)

STEP_FACTOR = 0.99
STATIC_REG = 1e-9
REFINE_STEPS = 3
RANK_TOL = 1e-10


@dataclass
class ConicResult:
    """Scaled (τ = 1) iterate and exit information."""
    x: Optional[np.ndarray]
    y: Optional[np.ndarray]
    s: Optional[np.ndarray]
    z: Optional[np.ndarray]
    status: SolveStatus
    iterations: int
    residual: float
    pcost: float = float("nan")
    dcost: float = float("nan")


# ---------------------------------------------------------------- cone algebra

def cone_identity(dims: ConeDims) -> np.ndarray:
    e = np.zeros(dims.total)
    e[:dims.linear] = 1.0
    for sl in dims.soc_slices():
        e[sl.start] = 1.0
    return e


def cone_margin(v: np.ndarray, dims: ConeDims) -> float:
    """Smallest distance-like margin to the cone boundary; > 0 means interior."""
    margin = np.inf
    if dims.linear:
        margin = min(margin, float(v[:dims.linear].min()))
    for sl in dims.soc_slices():
        block = v[sl]
        margin = min(margin, float(block[0] - np.linalg.norm(block[1:])))
    return margin


def shift_into_cone(v: np.ndarray, dims: ConeDims) -> np.ndarray:
    alpha = -cone_margin(v, dims)
    if alpha < 0:
        return v.copy()
    return v + (1.0 + alpha) * cone_identity(dims)


def jordan_product(x: np.ndarray, y: np.ndarray, dims: ConeDims) -> np.ndarray:
    out = np.empty_like(x)
    lin = slice(0, dims.linear)
    out[lin] = x[lin] * y[lin]
    for sl in dims.soc_slices():
        xs, ys = x[sl], y[sl]
        block = np.empty(len(xs))
        block[0] = xs @ ys
        block[1:] = xs[0] * ys[1:] + ys[0] * xs[1:]
        out[sl] = block
    return out


def jordan_divide(lam: np.ndarray, v: np.ndarray, dims: ConeDims) -> np.ndarray:
    """u such that lam ∘ u = v."""
    out = np.empty_like(v)
    lin = slice(0, dims.linear)
    out[lin] = v[lin] / lam[lin]
    for sl in dims.soc_slices():
        ls, vs = lam[sl], v[sl]
        det = ls[0] ** 2 - ls[1:] @ ls[1:]
        u0 = (ls[0] * vs[0] - ls[1:] @ vs[1:]) / det
        block = np.empty(len(vs))
        block[0] = u0
        block[1:] = (vs[1:] - u0 * ls[1:]) / ls[0]
        out[sl] = block
    return out


def nt_scaling(s: np.ndarray, z: np.ndarray, dims: ConeDims):
    """
    Nesterov-Todd scaling W with W z = W⁻¹ s = λ.

    Returns (W, W⁻¹, λ) as dense block-diagonal matrices.
    """
    m = dims.total
    W = np.zeros((m, m))
    W_inv = np.zeros((m, m))
    for i in range(dims.linear):
        w = np.sqrt(s[i] / z[i])
        W[i, i] = w
        W_inv[i, i] = 1.0 / w
    for sl in dims.soc_slices():
        ss, zs = s[sl], z[sl]
        s_res = ss[0] ** 2 - ss[1:] @ ss[1:]
        z_res = zs[0] ** 2 - zs[1:] @ zs[1:]
        s_bar = ss / np.sqrt(s_res)
        z_bar = zs / np.sqrt(z_res)
        gamma = np.sqrt(0.5 * (1.0 + s_bar @ z_bar))
        jz = z_bar.copy()
        jz[1:] = -jz[1:]
        w_bar = (s_bar + jz) / (2.0 * gamma)
        eta = (s_res / z_res) ** 0.25
        w0, w1 = w_bar[0], w_bar[1:]
        lower = np.eye(len(w1)) + np.outer(w1, w1) / (1.0 + w0)
        block = np.empty((len(ss), len(ss)))
        block[0, 0] = w0
        block[0, 1:] = w1
        block[1:, 0] = w1
        block[1:, 1:] = lower
        W[sl, sl] = eta * block
        block_inv = block.copy()
        block_inv[0, 1:] = -w1
        block_inv[1:, 0] = -w1
        W_inv[sl, sl] = block_inv / eta
    return W, W_inv, W @ z


def max_step(v: np.ndarray, dv: np.ndarray, dims: ConeDims) -> float:
    """Largest α ≥ 0 with v + α·dv still in the cone (inf when unbounded)."""
    alpha = np.inf
    if dims.linear:
        lin, dlin = v[:dims.linear], dv[:dims.linear]
        neg = dlin < 0
        if np.any(neg):
            alpha = min(alpha, float(np.min(-lin[neg] / dlin[neg])))
    for sl in dims.soc_slices():
        alpha = min(alpha, _soc_step(v[sl], dv[sl]))
    return alpha


def _soc_step(x: np.ndarray, d: np.ndarray) -> float:
    # (x0 + αd0)² − ‖x1 + αd1‖² = aα² + 2bα + c
    a = d[0] ** 2 - d[1:] @ d[1:]
    b = x[0] * d[0] - x[1:] @ d[1:]
    c = x[0] ** 2 - x[1:] @ x[1:]
    roots = []
    if d[0] < 0:
        roots.append(-x[0] / d[0])
    if abs(a) <= 1e-14 * (d @ d + 1e-300):
        if b < 0:
            roots.append(-c / (2.0 * b))
    else:
        disc = b * b - a * c
        if disc >= 0:
            root = np.sqrt(disc)
            roots.extend([(-b - root) / a, (-b + root) / a])
    roots = [r for r in roots if r > 0]
    return min(roots) if roots else np.inf


def _reduce_equalities(A: np.ndarray, b: np.ndarray):
    """Orthonormal row basis of A; flags b components outside its range."""
    if A.shape[0] == 0:
        return A, b, 0.0
    u, sv, vt = np.linalg.svd(A, full_matrices=False)
    rank = int(np.sum(sv > RANK_TOL * max(sv[0], 1.0)))
    ub = u.T @ b
    inconsistency = float(np.linalg.norm(b - u[:, :rank] @ ub[:rank]))
    return vt[:rank], ub[:rank] / sv[:rank], inconsistency


# ---------------------------------------------------------------- solver

def solve_conic(c, A, b, G, h, dims: ConeDims, tol: float = 1e-7,
                max_iter: int = 200) -> ConicResult:
    """Run the interior-point method on a program in standard form."""
    c, b, h = (np.asarray(v, dtype=float) for v in (c, b, h))
    A = np.asarray(A, dtype=float).reshape(-1, len(c))
    G = np.asarray(G, dtype=float).reshape(-1, len(c))

    A, b, inconsistency = _reduce_equalities(A, b)
    if inconsistency > 1e-9 * (1.0 + np.linalg.norm(b)):
        logger.debug("equality rows are inconsistent (residual %.3e)", inconsistency)
        return ConicResult(None, None, None, None, SolveStatus.INFEASIBLE, 0, inconsistency)

    n, p, m = len(c), A.shape[0], len(h)

    def kkt_solver(W2):
        K = np.zeros((n + p + m, n + p + m))
        K[:n, n:n + p] = A.T
        K[:n, n + p:] = G.T
        K[n:n + p, :n] = A
        K[n + p:, :n] = G
        K[n + p:, n + p:] = -W2
        reg = K.copy()
        reg[np.arange(n), np.arange(n)] += STATIC_REG
        idx = np.arange(n, n + p + m)
        reg[idx, idx] -= STATIC_REG
        factor = lu_factor(reg)

        def solve_(rhs):
            sol = lu_solve(factor, rhs)
            for _ in range(REFINE_STEPS):
                err = rhs - K @ sol
                if np.linalg.norm(err) <= 1e-15 * (1.0 + np.linalg.norm(rhs)):
                    break
                sol = sol + lu_solve(factor, err)
            return sol[:n], sol[n:n + p], sol[n + p:]
        return solve_

    # initial point: least-squares primal and dual estimates shifted into the cone
    init = kkt_solver(np.eye(m))
    x, _, z_hat = init(np.concatenate([np.zeros(n), b, h]))
    s = shift_into_cone(-z_hat, dims)
    _, y, z_hat = init(np.concatenate([-c, np.zeros(p), np.zeros(m)]))
    z = shift_into_cone(z_hat, dims)
    tau, kappa = 1.0, 1.0

    e = cone_identity(dims)
    degree = dims.degree
    pscale = max(1.0, np.linalg.norm(b), np.linalg.norm(h))
    dscale = max(1.0, np.linalg.norm(c))
    status = SolveStatus.MAX_ITER
    residual = np.inf
    iteration = 0

    for iteration in range(max_iter + 1):
        rx = A.T @ y + G.T @ z + c * tau
        ry = -A @ x + b * tau
        rz = -G @ x + h * tau - s
        rt = kappa + c @ x + b @ y + h @ z
        mu = (s @ z + tau * kappa) / (degree + 1)

        pcost = c @ x / tau
        dcost = -(b @ y + h @ z) / tau
        pres = max(np.linalg.norm(ry), np.linalg.norm(rz)) / tau / pscale
        dres = np.linalg.norm(rx) / tau / dscale
        gap = (s @ z) / tau ** 2
        gap_rel = gap / (1.0 + abs(pcost))
        residual = max(pres, dres, gap_rel)
        logger.debug("iter %2d pcost %+.6e dcost %+.6e gap %.2e pres %.2e dres %.2e tau %.2e",
                     iteration, pcost, dcost, gap, pres, dres, tau)

        if pres <= tol and dres <= tol and gap_rel <= tol:
            status = SolveStatus.OPTIMAL
            break
        hzby = h @ z + b @ y
        if hzby < 0 and np.linalg.norm(A.T @ y + G.T @ z) / dscale <= tol * -hzby:
            status = SolveStatus.INFEASIBLE
            residual = np.linalg.norm(A.T @ y + G.T @ z) / -hzby
            break
        cx = c @ x
        if cx < 0 and max(np.linalg.norm(A @ x), np.linalg.norm(G @ x + s)) / pscale <= tol * -cx:
            status = SolveStatus.UNBOUNDED
            residual = max(np.linalg.norm(A @ x), np.linalg.norm(G @ x + s)) / -cx
            break
        if iteration == max_iter:
            break

        W, W_inv, lam = nt_scaling(s, z, dims)
        W2 = W @ W
        kkt = kkt_solver(W2)
        x1, y1, z1 = kkt(np.concatenate([-c, b, h]))
        tau_den = c @ x1 + b @ y1 + h @ z1 - kappa / tau
        lam_sq = jordan_product(lam, lam, dims)

        def direction(d, d_s, d_k):
            lds = jordan_divide(lam, d_s, dims)
            x2, y2, z2 = kkt(np.concatenate([-d * rx, d * ry, d * rz + W @ lds]))
            dtau = (-d * rt + d_k / tau - c @ x2 - b @ y2 - h @ z2) / tau_den
            dx = x2 + dtau * x1
            dy = y2 + dtau * y1
            dz = z2 + dtau * z1
            ds = -W @ lds - W2 @ dz
            dkappa = (-d_k - kappa * dtau) / tau
            return dx, dy, dz, ds, dtau, dkappa

        def step_to_boundary(step):
            _, _, dz, ds, dtau, dkappa = step
            alpha = min(max_step(s, ds, dims), max_step(z, dz, dims))
            if dtau < 0:
                alpha = min(alpha, -tau / dtau)
            if dkappa < 0:
                alpha = min(alpha, -kappa / dkappa)
            return alpha

        affine = direction(1.0, lam_sq, tau * kappa)
        alpha_aff = min(1.0, step_to_boundary(affine))
        sigma = float(np.clip((1.0 - alpha_aff) ** 3, 0.0, 1.0))

        second_order = jordan_product(W_inv @ affine[3], W @ affine[2], dims)
        combined = direction(1.0 - sigma,
                             lam_sq + second_order - sigma * mu * e,
                             tau * kappa + affine[4] * affine[5] - sigma * mu)
        alpha = min(1.0, STEP_FACTOR * step_to_boundary(combined))

        dx, dy, dz, ds, dtau, dkappa = combined
        for _ in range(60):
            if (cone_margin(s + alpha * ds, dims) > 0 and cone_margin(z + alpha * dz, dims) > 0
                    and tau + alpha * dtau > 0 and kappa + alpha * dkappa > 0):
                break
            alpha *= 0.8
        x = x + alpha * dx
        y = y + alpha * dy
        z = z + alpha * dz
        s = s + alpha * ds
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa

    if status is SolveStatus.OPTIMAL or status is SolveStatus.MAX_ITER:
        return ConicResult(x / tau, y / tau, s / tau, z / tau, status, iteration, residual,
                           c @ x / tau, -(b @ y + h @ z) / tau)
    return ConicResult(x, y, s, z, status, iteration, residual)


def solve(prog: ConicProgram, tol: float = 1e-7, max_iter: int = 200) -> MetricSolution:
    """Solve a metric program; η is the optimal axial moment λ about the screw."""
    result = solve_conic(prog.c, prog.A, prog.b, prog.G, prog.h, prog.dims, tol, max_iter)
    if result.status is SolveStatus.OPTIMAL:
        eta = float(result.x[-1])
        return MetricSolution(eta, prog.forces(result.x), result.status, float(result.residual),
                              prog.gravity_moment, result.iterations)
    if result.status is SolveStatus.MAX_ITER:
        logger.warning("conic solver stopped after %d iterations (residual %.2e)",
                       result.iterations, result.residual)
        forces = prog.forces(result.x)
    else:
        forces = [np.zeros(3) for _ in range(prog.n_contacts)]
    return MetricSolution(0.0, forces, result.status, float(result.residual),
                          prog.gravity_moment, result.iterations)
