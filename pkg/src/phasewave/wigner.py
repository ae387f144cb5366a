"""Wigner quasiprobability on the dimensionless phase plane.

Two independent evaluation routes are provided and cross-checked:

* :func:`wigner_direct` integrates the position-representation Fourier
  kernel over the chord coordinate y at every node,
* :func:`parity_sum` forms twice the alternating sum of the occupation
  probabilities of the state displaced to the opposite phase point.

Route agreement fixes the identification between the phase-plane
coordinate u + i*v and the displacement amplitude: the winning scale is
frozen in :data:`UV_TO_ALPHA` and re-derivable with
:func:`convention_check`.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import fock
from .errors import (
    ContainmentError,
    GridMismatchError,
    QuadratureError,
    TruncationError,
    ValidationError,
)

#: Displacement amplitude per unit of (u + i*v).  Fixed empirically by
#: convention_check: only alpha = (u + i*v)/sqrt(2) makes the alternating
#: parity sum equal 2*pi times the direct Fourier-integral value.
UV_TO_ALPHA = 1.0 / math.sqrt(2.0)

#: Hard bound of the dimensionless Wigner function, with roundoff slack.
WIGNER_BOUND = 1.0 / math.pi + 1e-6

_CHUNK_ELEMS = 8_000_000


class ContainmentWarning(UserWarning):
    """The sampled grid may not contain the state's classical support."""


def alpha_from_uv(u, v) -> np.ndarray:
    """Displacement amplitude matching phase-plane coordinates (u, v)."""
    return (np.asarray(u, dtype=float) + 1j * np.asarray(v, dtype=float)) * UV_TO_ALPHA


@dataclass(frozen=True)
class PhaseGrid:
    """Rectangular sampling of the (u, v) phase plane."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float
    n_u: int
    n_v: int

    def __post_init__(self):
        for lo, hi, n, name in (
            (self.u_min, self.u_max, self.n_u, "u"),
            (self.v_min, self.v_max, self.n_v, "v"),
        ):
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise ValidationError(f"{name} bounds must be finite")
            if hi <= lo:
                raise ValidationError(f"{name}_max must exceed {name}_min")
            if n < 2:
                raise ValidationError(f"n_{name} must be at least 2")

    @property
    def u_axis(self) -> np.ndarray:
        return np.linspace(self.u_min, self.u_max, self.n_u)

    @property
    def v_axis(self) -> np.ndarray:
        return np.linspace(self.v_min, self.v_max, self.n_v)

    @property
    def cell_area(self) -> float:
        du = (self.u_max - self.u_min) / (self.n_u - 1)
        dv = (self.v_max - self.v_min) / (self.n_v - 1)
        return du * dv

    @property
    def max_extent(self) -> float:
        return max(abs(self.u_min), abs(self.u_max), abs(self.v_min), abs(self.v_max))


class WignerField:
    """Wigner values sampled on a PhaseGrid, shape (n_u, n_v)."""

    def __init__(self, grid: PhaseGrid, values, *, check: bool = True):
        vals = np.asarray(values, dtype=float)
        if vals.shape != (grid.n_u, grid.n_v):
            raise ValidationError(
                f"values shape {vals.shape} does not match grid ({grid.n_u}, {grid.n_v})"
            )
        if check and float(np.max(np.abs(vals))) > WIGNER_BOUND:
            raise ValidationError(
                f"values exceed the Wigner bound 1/pi: max |W| = {np.max(np.abs(vals)):.6e}"
            )
        self.grid = grid
        self.values = vals
        self.values.setflags(write=False)

    def normalization(self) -> float:
        """Riemann-sum integral of the field; 1 for a well-contained state."""
        return float(self.values.sum() * self.grid.cell_area)

    # -- serialization ----------------------------------------------------

    def to_csv(self) -> str:
        """CSV with header u,v,w, row-major nodes, 17 significant digits."""
        buf = io.StringIO()
        u, v = self.grid.u_axis, self.grid.v_axis
        buf.write("u,v,w\n")
        for i in range(self.grid.n_u):
            for j in range(self.grid.n_v):
                buf.write(f"{u[i]:.17g},{v[j]:.17g},{self.values[i, j]:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "WignerField":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["u", "v", "w"]:
            raise ValidationError("expected header u,v,w")
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
        if data.size == 0:
            raise ValidationError("no data rows")
        u_axis = np.unique(data[:, 0])
        v_axis = np.unique(data[:, 1])
        if data.shape[0] != u_axis.size * v_axis.size:
            raise ValidationError("nodes do not form a complete rectangular grid")
        grid = PhaseGrid(
            float(u_axis[0]), float(u_axis[-1]),
            float(v_axis[0]), float(v_axis[-1]),
            int(u_axis.size), int(v_axis.size),
        )
        vals = data[:, 2].reshape(u_axis.size, v_axis.size)
        return cls(grid, vals)

    def to_json_dict(self) -> dict:
        g = self.grid
        return {
            "grid": {
                "u_min": g.u_min, "u_max": g.u_max,
                "v_min": g.v_min, "v_max": g.v_max,
                "n_u": g.n_u, "n_v": g.n_v,
            },
            "values": [[float(x) for x in row] for row in self.values],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "WignerField":
        obj = json.loads(text)
        try:
            g = obj["grid"]
            grid = PhaseGrid(
                g["u_min"], g["u_max"], g["v_min"], g["v_max"], g["n_u"], g["n_v"]
            )
            return cls(grid, np.array(obj["values"], dtype=float))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed field JSON: {exc}") from exc


# -- direct Fourier-integral route ----------------------------------------


def _chord_integrand(rho: np.ndarray, u: np.ndarray, y: np.ndarray) -> np.ndarray:
    """F(u, y) = <u + y/2| rho |u - y/2> built from oscillator eigenfunctions."""
    n_max = rho.shape[0] - 1
    out = np.empty((u.size, y.size))
    step = max(1, int(_CHUNK_ELEMS // ((n_max + 1) * y.size)))
    for lo in range(0, u.size, step):
        ub = u[lo : lo + step]
        psi_p = fock.eigenfunction_stack(n_max, ub[:, None] + 0.5 * y[None, :])
        psi_m = fock.eigenfunction_stack(n_max, ub[:, None] - 0.5 * y[None, :])
        out[lo : lo + step] = np.real(
            np.einsum("mxy,mn,nxy->xy", psi_p, rho, psi_m, optimize=True)
        )
    return out


def _wigner_eval(rho_mat, u_vec, v_vec, paired, rel_tol, max_refinements, min_points=None):
    """Trapezoid-with-halving evaluation of the chord integral.

    paired=False: full outer grid, result (len(u), len(v)).
    paired=True: pointwise, result (len(u),) with u_vec/v_vec zipped.
    """
    if max_refinements < 2:
        raise ValidationError("need at least two refinement levels")
    n_max = rho_mat.shape[0] - 1
    u_vec = np.asarray(u_vec, dtype=float)
    v_vec = np.asarray(v_vec, dtype=float)
    half_window = 2.0 * (math.sqrt(2.0 * n_max + 1.0) + float(np.max(np.abs(u_vec)))) + 12.0
    v_scale = float(np.max(np.abs(v_vec))) if v_vec.size else 0.0
    npts = 257
    while npts < 6.0 * half_window * v_scale / math.pi:
        npts = 2 * npts - 1
    if min_points is not None:
        npts = max(npts, int(min_points))
    tol = rel_tol / math.pi
    prev = None
    for _ in range(max_refinements):
        y = np.linspace(-half_window, half_window, npts)
        f = _chord_integrand(rho_mat, u_vec, y)
        wy = np.full(npts, y[1] - y[0])
        wy[0] *= 0.5
        wy[-1] *= 0.5
        if paired:
            phases = np.exp(-1j * v_vec[:, None] * y[None, :])
            vals = np.real(np.sum(f * wy * phases, axis=1)) / (2.0 * math.pi)
        else:
            phases = np.exp(-1j * np.outer(v_vec, y))
            vals = np.real((f * wy) @ phases.T) / (2.0 * math.pi)
        if prev is not None:
            delta = np.abs(vals - prev)
            if float(delta.max()) < tol:
                return vals
        prev = vals
        npts = 2 * npts - 1
    worst = np.unravel_index(int(np.argmax(delta)), delta.shape)
    if paired:
        node = (float(u_vec[worst[0]]), float(v_vec[worst[0]]))
    else:
        node = (float(u_vec[worst[0]]), float(v_vec[worst[1]]))
    raise QuadratureError(
        f"chord quadrature not converged: Richardson estimate "
        f"{float(delta.max()) / 3.0:.3e} above tolerance at node {node}",
        worst_node=node,
    )


def wigner_direct(
    rho: fock.DensityMatrix,
    grid: PhaseGrid,
    *,
    rel_tol: float = 1e-10,
    max_refinements: int = 8,
) -> WignerField:
    """Wigner function on a grid via the Fourier integral over the chord.

    Containment is not required, but a warning is emitted when the state's
    classical radius sticks out beyond 1.2 times the grid extent.
    """
    radius = math.sqrt(2.0 * rho.top_occupied())
    if radius > 1.2 * grid.max_extent:
        warnings.warn(
            f"state radius {radius:.2f} exceeds 1.2x grid extent "
            f"{grid.max_extent:.2f}; normalization will fall short",
            ContainmentWarning,
            stacklevel=2,
        )
    vals = _wigner_eval(
        rho.entries, grid.u_axis, grid.v_axis, False, rel_tol, max_refinements
    )
    return WignerField(grid, vals)


def wigner_values(
    rho: fock.DensityMatrix,
    u,
    v,
    *,
    rel_tol: float = 1e-10,
    max_refinements: int = 8,
    min_points: int | None = None,
) -> np.ndarray:
    """Wigner function at paired scattered points (u[i], v[i])."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if u.shape != v.shape:
        raise ValidationError("u and v must have matching shapes")
    return _wigner_eval(rho.entries, u, v, True, rel_tol, max_refinements, min_points)


# -- alternating parity-sum route ------------------------------------------


@dataclass(frozen=True)
class ParitySum:
    """Value of the alternating sum with its truncation diagnostic."""

    value: float
    last_term: float

    def __float__(self) -> float:
        return self.value


def parity_sum(
    rho: fock.DensityMatrix,
    alpha: complex,
    n_max: int | None = None,
    *,
    last_term_tol: float = 1e-8,
) -> ParitySum:
    """S(alpha) = 2 * sum_n (-1)^n P_n(-alpha) over the truncated basis.

    The magnitude of the last retained occupation probability is reported
    as the truncation diagnostic; above ``last_term_tol`` the sum has not
    converged and a larger n_max is needed.
    """
    p = fock.energy_distribution(rho, -alpha, n_max)
    last = float(p[-1])
    if last > last_term_tol:
        raise TruncationError(
            f"alternating sum not converged: last term {last:.3e} above "
            f"{last_term_tol:.0e}; increase n_max",
            detail=last,
        )
    signs = 1.0 - 2.0 * (np.arange(p.size) % 2)
    return ParitySum(value=2.0 * float(np.dot(signs, p)), last_term=last)


def _parity_values(
    rho: fock.DensityMatrix,
    alphas: np.ndarray,
    n_max: int | None = None,
    *,
    last_term_tol: float = 1e-8,
) -> np.ndarray:
    """Wigner values S(alpha)/(2*pi) for a batch of phase points.

    Same closed-form displacement entries as the single-point route, but
    only the columns carrying the state's support are materialized, which
    keeps full-grid evaluation tractable.
    """
    alphas = np.asarray(alphas, dtype=complex).ravel()
    if n_max is None:
        n_max = fock.default_cutoff(
            float(np.max(np.abs(alphas))), math.sqrt(rho.top_occupied())
        )
    work = rho.embedded(max(n_max, rho.n_max))
    # keep every stored component: amplitudes as small as sqrt(eps) still
    # shift the displaced probabilities at the 1e-8 level via interference
    support = work.top_occupied(0.0) + 1
    evals, evecs = np.linalg.eigh(work.entries[:support, :support])
    keep = evals > 1e-13
    weights, vectors = evals[keep], evecs[:, keep]
    cols = np.arange(support)
    signs = 1.0 - 2.0 * (np.arange(work.n_max + 1) % 2)
    out = np.empty(alphas.size)
    worst_last = 0.0
    step = max(1, int(_CHUNK_ELEMS // ((work.n_max + 1) * support)))
    for lo in range(0, alphas.size, step):
        block = fock._displacement_batch(-alphas[lo : lo + step], work.n_max, cols)
        moved = block @ vectors  # (chunk, n_max+1, n_eig)
        p = np.einsum("e,ame->am", weights, np.abs(moved) ** 2)
        worst_last = max(worst_last, float(p[:, -1].max()))
        out[lo : lo + step] = 2.0 * (p @ signs)
    if worst_last > last_term_tol:
        raise TruncationError(
            f"alternating sum not converged on the batch: worst last term "
            f"{worst_last:.3e}; increase n_max",
            detail=worst_last,
        )
    return out / (2.0 * math.pi)


def wigner_parity(
    rho: fock.DensityMatrix,
    grid: PhaseGrid,
    n_max: int | None = None,
) -> WignerField:
    """Wigner function on a grid via the alternating parity sum."""
    uu, vv = np.meshgrid(grid.u_axis, grid.v_axis, indexing="ij")
    alphas = alpha_from_uv(uu.ravel(), vv.ravel())
    vals = _parity_values(rho, alphas, n_max).reshape(grid.n_u, grid.n_v)
    return WignerField(grid, vals)


# -- convention discrimination ----------------------------------------------


@dataclass(frozen=True)
class ConventionReport:
    """Outcome of discriminating the alpha <-> (u, v) identification."""

    deviations: dict
    winner: str
    scale: float


def convention_check(
    rho: fock.DensityMatrix,
    points,
    *,
    tol: float = 1e-6,
) -> ConventionReport:
    """Test both candidate identifications of alpha against 2*pi*W.

    ``points`` is an iterable of (u, v) pairs.  Exactly one candidate must
    reach max deviation below ``tol`` over the sample; anything else is an
    implementation bug (or a non-discriminating sample) and raises.
    """
    pts = np.asarray([(float(p[0]), float(p[1])) for p in points], dtype=float)
    if pts.size == 0:
        raise ValidationError("need at least one sample point")
    direct = 2.0 * math.pi * wigner_values(rho, pts[:, 0], pts[:, 1])
    candidates = {"u+iv": 1.0, "(u+iv)/sqrt(2)": UV_TO_ALPHA}
    deviations = {}
    for name, scale in candidates.items():
        alphas = (pts[:, 0] + 1j * pts[:, 1]) * scale
        vals = 2.0 * math.pi * _parity_values(rho, alphas)
        deviations[name] = float(np.max(np.abs(vals - direct)))
    matching = [name for name, dev in deviations.items() if dev < tol]
    if len(matching) != 1:
        raise QuadratureError(
            f"convention check did not single out one mapping: {deviations!r}"
        )
    winner = matching[0]
    return ConventionReport(
        deviations=deviations, winner=winner, scale=candidates[winner]
    )


# -- overlap and tomography --------------------------------------------------


def overlap_trace(w1: WignerField, w2: WignerField) -> float:
    """Trace of the product of two states as 2*pi times the field overlap."""
    if w1.grid != w2.grid:
        raise GridMismatchError("overlap requires identical grids")
    return float(2.0 * math.pi * np.sum(w1.values * w2.values) * w1.grid.cell_area)


def rotated_quadrature(
    psi: fock.FockState,
    theta: float,
    xs,
    *,
    oversample: int = 1,
    tol: float = 1e-9,
) -> np.ndarray:
    """Probability density of the theta-rotated quadrature of a pure state.

    Applies the quadratic-phase integral kernel of fractional order theta
    to the position wavefunction; theta = 0 is the identity and theta =
    pi/2 the ordinary Fourier transform.  The result is checked by doubling
    the kernel sampling density.
    """
    xs = np.asarray(xs, dtype=float)
    coarse = _rotated_once(psi, theta, xs, oversample)
    fine = _rotated_once(psi, theta, xs, 2 * oversample)
    err = float(np.max(np.abs(fine - coarse)))
    if err > tol:
        raise QuadratureError(
            f"rotation kernel quadrature not converged: doubling changes the "
            f"density by {err:.3e}"
        )
    return fine


def _rotated_once(psi: fock.FockState, theta: float, xs, oversample: int) -> np.ndarray:
    st, ct = math.sin(theta), math.cos(theta)
    if abs(st) < 1e-12:
        dens = np.abs(fock.position_wavefunction(psi, math.copysign(1.0, ct) * xs)) ** 2
        return dens
    half = math.sqrt(2.0 * psi.n_max + 1.0) + 8.0
    cot, csc = ct / st, 1.0 / st
    freq = abs(cot) * half + abs(csc) * float(np.max(np.abs(xs), initial=1.0))
    dx = 2.0 * math.pi / (max(freq, 1.0) * 12.0 * oversample)
    npts = int(math.ceil(2.0 * half / dx)) + 1
    xp = np.linspace(-half, half, npts)
    w = np.full(npts, xp[1] - xp[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    inner = np.exp(0.5j * cot * xp**2) * fock.position_wavefunction(psi, xp) * w
    kernel_phase = np.exp(-1j * csc * np.outer(xs, xp))
    pref = np.sqrt((1.0 - 1j * cot) / (2.0 * math.pi))
    out = pref * np.exp(0.5j * cot * xs**2) * (kernel_phase @ inner)
    return np.abs(out) ** 2


def radon_slice(
    field: WignerField,
    theta: float,
    xs,
    *,
    step: float | None = None,
    leak_tol: float = 1e-6,
) -> np.ndarray:
    """Marginal density of ``field`` along the theta-rotated axis.

    Line integrals run perpendicular to the rotated axis with bilinear
    interpolation between nodes; the sampling step defaults to half the
    smaller grid spacing.  A line leaving the grid where |W| is still
    above ``leak_tol`` raises, since the marginal would be wrong.
    """
    xs = np.asarray(xs, dtype=float)
    g = field.grid
    u0, v0 = g.u_min, g.v_min
    du = (g.u_max - g.u_min) / (g.n_u - 1)
    dv = (g.v_max - g.v_min) / (g.n_v - 1)
    if step is None:
        step = 0.5 * min(du, dv)
    diag = math.hypot(g.u_max - g.u_min, g.v_max - g.v_min)
    t = np.arange(-0.5 * diag, 0.5 * diag + step, step)
    ct, st = math.cos(theta), math.sin(theta)
    vals = field.values
    out = np.empty(xs.size)
    for i, s in enumerate(xs):
        uu = s * ct - t * st
        vv = s * st + t * ct
        fu = (uu - u0) / du
        fv = (vv - v0) / dv
        inside = (fu >= 0.0) & (fu <= g.n_u - 1) & (fv >= 0.0) & (fv <= g.n_v - 1)
        cu = np.clip(fu, 0.0, g.n_u - 1.0)
        cv = np.clip(fv, 0.0, g.n_v - 1.0)
        iu = np.minimum(cu.astype(int), g.n_u - 2)
        iv = np.minimum(cv.astype(int), g.n_v - 2)
        au = cu - iu
        av = cv - iv
        w = (
            vals[iu, iv] * (1 - au) * (1 - av)
            + vals[iu + 1, iv] * au * (1 - av)
            + vals[iu, iv + 1] * (1 - au) * av
            + vals[iu + 1, iv + 1] * au * av
        )
        if not inside.all():
            worst = float(np.max(np.abs(w[~inside])))
            if worst > leak_tol:
                raise ContainmentError(
                    f"integration line exits the grid where |W| = {worst:.3e} "
                    f"exceeds {leak_tol:.0e}"
                )
        out[i] = float(np.sum(w[inside]) * step)
    return out
