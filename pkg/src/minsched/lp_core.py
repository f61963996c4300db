"""Dense two-phase primal simplex with dual prices.

Solves min c'x subject to Ax = b, x >= 0 and returns a certified
primal/dual pair: feasibility, non-negativity and the strong-duality
gap are all checked before a solution is reported OPTIMAL.

The implementation is a revised simplex with an explicitly maintained
basis inverse (eta updates, periodic refactorization).  Rows are
equilibrated by their largest absolute coefficient before solving --
rate coefficients routinely span ten orders of magnitude -- and dual
prices are mapped back to the original row scaling on exit.  Pricing is
Dantzig (most negative reduced cost); Bland's rule takes over after a
run of 10*m degenerate pivots so the method cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7
DUAL_GAP_TOL = 1e-6
_DEGENERATE_STEP = 1e-11
_REFACTOR_EVERY = 64


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class SolverStallError(RuntimeError):
    """Pivot budget exhausted before reaching a conclusive status."""


class CertificationError(RuntimeError):
    """A claimed optimum failed the primal/dual residual checks."""


@dataclass(eq=False)
class LpProblem:
    """min c'x s.t. a x = b, x >= 0 (dense, equality constraints only)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.a = np.atleast_2d(np.asarray(self.a, dtype=float))
        self.b = np.asarray(self.b, dtype=float).ravel()
        self.c = np.asarray(self.c, dtype=float).ravel()
        m, n = self.a.shape
        if m < 1 or n < 1:
            raise ValueError("need at least one row and one column")
        if self.b.shape != (m,) or self.c.shape != (n,):
            raise ValueError("inconsistent dimensions between a, b and c")
        if not (np.isfinite(self.a).all() and np.isfinite(self.b).all()
                and np.isfinite(self.c).all()):
            raise ValueError("all problem data must be finite")

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape


@dataclass(eq=False)
class LpSolution:
    status: LpStatus
    x: np.ndarray | None = None
    duals: np.ndarray | None = None
    objective: float | None = None
    basis: tuple[int, ...] | None = None
    iterations: int = 0


class _Simplex:
    """Revised simplex over the row-scaled system; artificial columns are
    virtual unit vectors with ids >= n."""

    def __init__(self, a: np.ndarray, b: np.ndarray, max_iter: int,
                 force_bland: bool):
        self.A = a
        self.b = b
        self.m, self.n = a.shape
        self.max_iter = max_iter
        self.iterations = 0
        self.bland = force_bland
        self._force_bland = force_bland
        self._deg_run = 0
        self._since_refactor = 0
        self.kept_rows = np.arange(self.m)
        self.basis: np.ndarray | None = None
        self.Binv: np.ndarray | None = None
        self.xB: np.ndarray | None = None
        self.duals_scaled: np.ndarray | None = None

    # -- basis plumbing ----------------------------------------------------

    def _column(self, j: int) -> np.ndarray:
        if j < self.n:
            return self.A[:, j]
        e = np.zeros(self.m)
        e[j - self.n] = 1.0
        return e

    def _basis_matrix(self) -> np.ndarray:
        mat = np.empty((self.m, self.m))
        for idx, j in enumerate(self.basis):
            mat[:, idx] = self._column(int(j))
        return mat

    def _refactor(self) -> None:
        try:
            self.Binv = np.linalg.inv(self._basis_matrix())
        except np.linalg.LinAlgError as exc:
            raise CertificationError(f"singular basis matrix: {exc}") from exc
        if not np.isfinite(self.Binv).all():
            raise CertificationError("basis inverse overflowed")
        self.xB = self.Binv @ self.b
        self._since_refactor = 0

    def set_basis(self, basis) -> None:
        self.basis = np.asarray(basis, dtype=int)
        self._refactor()

    def _basic_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        struct = self.basis[self.basis < self.n]
        mask[struct] = True
        return mask

    # -- core iteration ----------------------------------------------------

    def run(self, c_struct: np.ndarray, c_artificial: float) -> LpStatus:
        """Optimize the current basis; returns OPTIMAL or UNBOUNDED."""
        basic_mask = self._basic_mask()
        cost_of = lambda ids: np.where(
            ids < self.n, c_struct[np.minimum(ids, self.n - 1)], c_artificial
        )
        while True:
            if self._since_refactor >= _REFACTOR_EVERY:
                self._refactor()
            y = cost_of(self.basis) @ self.Binv
            rc = c_struct - y @ self.A
            rc_view = np.where(basic_mask, np.inf, rc)
            if self.bland:
                eligible = np.flatnonzero(rc_view < -PIVOT_TOL)
                q = int(eligible[0]) if eligible.size else -1
            else:
                q = int(np.argmin(rc_view))
                if rc_view[q] >= -PIVOT_TOL:
                    q = -1
            if q < 0:
                self.duals_scaled = y
                self.xB = self.Binv @ self.b
                return LpStatus.OPTIMAL

            u = self.Binv @ self.A[:, q]
            pos = np.flatnonzero(u > PIVOT_TOL)
            if pos.size == 0:
                return LpStatus.UNBOUNDED
            ratios = np.maximum(self.xB[pos], 0.0) / u[pos]
            theta = float(ratios.min())
            ties = pos[ratios <= theta * (1.0 + 1e-9) + 1e-12]
            if self.bland:
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                r = int(ties[np.argmax(u[ties])])

            if theta <= _DEGENERATE_STEP:
                self._deg_run += 1
                if self._deg_run > 10 * self.m:
                    self.bland = True
            else:
                self._deg_run = 0

            leaving = int(self.basis[r])
            if leaving < self.n:
                basic_mask[leaving] = False
            basic_mask[q] = True
            self.basis[r] = q
            self.xB -= theta * u
            self.xB[r] = theta
            row_r = self.Binv[r, :].copy()
            self.Binv -= np.outer(u / u[r], row_r)
            self.Binv[r, :] = row_r / u[r]
            self._since_refactor += 1
            self.iterations += 1
            if self.iterations > self.max_iter:
                raise SolverStallError(
                    f"simplex exceeded the pivot budget of {self.max_iter}"
                )

    # -- phase 1 -----------------------------------------------------------

    def phase1(self) -> bool:
        """Find a feasible basis; returns False when infeasible.

        On success all artificial variables are removed, dropping any
        redundant rows they reveal.
        """
        self.set_basis(np.arange(self.n, self.n + self.m))
        status = self.run(np.zeros(self.n), 1.0)
        if status is not LpStatus.OPTIMAL:  # cannot happen: bounded below by 0
            raise CertificationError("phase-1 subproblem reported unbounded")
        artificial = self.basis >= self.n
        infeas = float(self.xB[artificial].sum()) if artificial.any() else 0.0
        if infeas > FEAS_TOL * (1.0 + float(np.abs(self.b).max())):
            return False

        drop: list[int] = []
        for r in np.flatnonzero(self.basis >= self.n):
            d_row = self.Binv[int(r), :] @ self.A
            d_row[self._basic_mask()] = 0.0
            q = int(np.argmax(np.abs(d_row)))
            if abs(d_row[q]) > PIVOT_TOL:
                u = self.Binv @ self.A[:, q]
                row_r = self.Binv[int(r), :].copy()
                self.Binv -= np.outer(u / u[int(r)], row_r)
                self.Binv[int(r), :] = row_r / u[int(r)]
                self.basis[int(r)] = q
                self.xB = self.Binv @ self.b
            else:
                drop.append(int(r))
        if drop:
            keep = np.setdiff1d(np.arange(self.m), np.array(drop))
            self.A = self.A[keep]
            self.b = self.b[keep]
            self.kept_rows = self.kept_rows[keep]
            self.basis = np.delete(self.basis, drop)
            self.m = len(keep)
            self._refactor()
        return True

    def try_warm_basis(self, hint) -> bool:
        basis = np.unique(np.asarray(list(hint), dtype=int))
        if basis.size != self.m or basis.min() < 0 or basis.max() >= self.n:
            return False
        try:
            binv = np.linalg.inv(self.A[:, basis])
        except np.linalg.LinAlgError:
            return False
        if not np.isfinite(binv).all():
            return False
        xb = binv @ self.b
        if xb.min() < -FEAS_TOL * (1.0 + float(np.abs(self.b).max())):
            return False
        self.basis = basis
        self.Binv = binv
        self.xB = xb
        return True


def _certified_solution(problem: LpProblem, core: _Simplex,
                        scale: np.ndarray, flip: np.ndarray,
                        m_orig: int) -> LpSolution:
    x = np.zeros(core.n)
    x[core.basis] = core.xB  # phase 2 basis is purely structural
    duals = np.zeros(m_orig)
    duals[core.kept_rows] = core.duals_scaled * flip[core.kept_rows] / scale[core.kept_rows]
    objective = float(problem.c @ x)

    residual = float(np.abs(problem.a @ x - problem.b).max())
    if residual > FEAS_TOL * (1.0 + float(np.abs(problem.b).max())):
        raise CertificationError(f"primal residual {residual:.3e} too large")
    if float(x.min()) < -1e-9:
        raise CertificationError(f"negative activity {float(x.min()):.3e}")
    gap = abs(objective - float(problem.b @ duals))
    if gap > DUAL_GAP_TOL * (1.0 + abs(objective)):
        raise CertificationError(f"duality gap {gap:.3e} too large")

    return LpSolution(
        status=LpStatus.OPTIMAL,
        x=x,
        duals=duals,
        objective=objective,
        basis=tuple(int(j) for j in core.basis),
        iterations=core.iterations,
    )


def _run(problem: LpProblem, hint, max_iter: int | None,
         force_bland: bool) -> LpSolution:
    m, n = problem.shape
    budget = max_iter if max_iter is not None else 50 * (m + n)

    scale = np.abs(problem.a).max(axis=1)
    scale[scale == 0.0] = 1.0
    a = problem.a / scale[:, None]
    b = problem.b / scale
    flip = np.where(b < 0.0, -1.0, 1.0)
    a = a * flip[:, None]
    b = b * flip

    core = _Simplex(a, b, budget, force_bland)
    warmed = hint is not None and len(tuple(hint)) > 0 and core.try_warm_basis(hint)
    if not warmed:
        if not core.phase1():
            return LpSolution(status=LpStatus.INFEASIBLE, iterations=core.iterations)
    status = core.run(problem.c.copy(), np.inf)
    if status is LpStatus.UNBOUNDED:
        return LpSolution(status=LpStatus.UNBOUNDED, iterations=core.iterations)
    return _certified_solution(problem, core, scale, flip, m)


def solve(problem: LpProblem, *, max_iter: int | None = None,
          force_bland: bool = False) -> LpSolution:
    """Solve the LP from scratch (two phases).

    Returns an OPTIMAL solution with certified primal/dual pair, or an
    INFEASIBLE / UNBOUNDED status with no payload.  Raises
    :class:`SolverStallError` when the pivot budget (default 50*(m+n))
    is exhausted.
    """
    try:
        return _run(problem, None, max_iter, force_bland)
    except CertificationError:
        if force_bland:
            raise
        return _run(problem, None, max_iter, True)


def warm_solve(problem: LpProblem, basis_hint, *, max_iter: int | None = None,
               force_bland: bool = False) -> LpSolution:
    """Solve starting from a hinted basis (column indices).

    Falls back to a cold :func:`solve` whenever the hint is not a
    feasible nonsingular basis; the result contract is identical.
    """
    try:
        return _run(problem, basis_hint, max_iter, force_bland)
    except CertificationError:
        if force_bland:
            raise
        return _run(problem, None, max_iter, True)
