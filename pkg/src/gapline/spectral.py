"""Hamiltonian assembly and dense symmetric eigensolving.

The Hamiltonian of a graph with a potential is the graph Laplacian plus
the potential on the diagonal.  Only the two lowest eigenpairs are exposed;
ground states on connected graphs are sign-fixed positive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionError, DomainError, SolverError
from .graphcore import Graph, Potential, caterpillar_layout

DEFAULT_TOL = 1e-10

# |Delta^2 psi| at or below this is treated as exactly zero (plateau noise).
CURVATURE_TOL = 1e-12


@dataclass(frozen=True)
class Hamiltonian:
    """Symmetric matrix d_x + W(x) on the diagonal, -1 on graph edges."""

    matrix: np.ndarray
    graph: Graph | None = None
    potential: Potential | None = None
    s: float | None = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Spectrum:
    """Two lowest eigenpairs of a graph Hamiltonian."""

    energy: float          # ground energy E
    gap: float             # second-lowest eigenvalue minus E
    psi: np.ndarray        # unit-norm ground vector, sign-fixed positive
    residual: float        # max relative residual of the two eigenpairs
    tol: float
    degenerate: bool = False   # gap below tol, reported as-is
    positive: bool = True      # Perron positivity guaranteed (graph connected)

    def to_json(self) -> str:
        return json.dumps(
            {
                "E": self.energy,
                "gap": self.gap,
                "psi": list(self.psi),
                "residual": self.residual,
            }
        )


def laplacian(g: Graph) -> np.ndarray:
    m = np.zeros((g.n, g.n))
    for x, y in g.edges:
        m[x, y] = m[y, x] = -1.0
        m[x, x] += 1.0
        m[y, y] += 1.0
    return m


def assemble(g: Graph, w: Potential) -> Hamiltonian:
    """Hamiltonian for graph g and potential w."""
    if len(w) != g.n:
        raise DimensionError(f"potential has length {len(w)}, graph has {g.n} vertices")
    m = laplacian(g)
    m[np.diag_indices(g.n)] += w.values
    return Hamiltonian(matrix=m, graph=g, potential=w)


def solve_ground_and_gap(h: Hamiltonian, tol: float = DEFAULT_TOL) -> Spectrum:
    """Two lowest eigenpairs by dense symmetric diagonalization.

    The ground vector is normalized and sign-fixed by the sign of its
    largest-magnitude entry.  A gap below tol is flagged degenerate, never
    rounded to zero.  On a disconnected graph, positivity of the ground
    vector is not guaranteed and the result is flagged.
    """
    if h.n < 2:
        raise DomainError("need at least 2 vertices to define a gap")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    vals, vecs = scipy.linalg.eigh(h.matrix)
    energy = float(vals[0])
    gap = float(vals[1] - vals[0])
    psi = vecs[:, 0]
    top = psi[np.argmax(np.abs(psi))]
    if top < 0:
        psi = -psi
    scale = max(1.0, float(np.abs(vals).max()))
    res = max(
        float(np.linalg.norm(h.matrix @ vecs[:, k] - vals[k] * vecs[:, k]))
        for k in (0, 1)
    ) / scale
    if res > tol:
        raise SolverError(
            f"eigensolver residual {res:.3e} exceeds tolerance {tol:.3e}",
            residual=res,
        )
    connected = h.graph.is_connected() if h.graph is not None else bool(np.all(psi > 0))
    return Spectrum(
        energy=energy,
        gap=gap,
        psi=psi,
        residual=res,
        tol=tol,
        degenerate=gap < tol,
        positive=connected,
    )


def eigen_residual(h: Hamiltonian, v, lam: float) -> float:
    """Relative eigenpair residual ||Hv - lam v|| / ||v||."""
    v = np.asarray(v, dtype=float)
    if len(v) != h.n:
        raise DimensionError(f"vector has length {len(v)}, matrix is {h.n}x{h.n}")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise DomainError("residual of the zero vector is undefined")
    return float(np.linalg.norm(h.matrix @ v - lam * v) / norm)


def rayleigh_quotient(h: Hamiltonian, v) -> float:
    """<v|H|v> / <v|v>; upper-bounds excited energies for v orthogonal to psi."""
    v = np.asarray(v, dtype=float)
    if len(v) != h.n:
        raise DimensionError(f"vector has length {len(v)}, matrix is {h.n}x{h.n}")
    nrm2 = float(v @ v)
    if nrm2 == 0:
        raise DomainError("Rayleigh quotient of the zero vector is undefined")
    return float(v @ (h.matrix @ v)) / nrm2


def two_lobe_trial_state(l: int, psi) -> np.ndarray:
    """Sign-flipped trial state for the caterpillar: +psi on the left lobe,
    -psi on the right, zero at the center spine vertex and its two legs.

    Orthogonal to psi by mirror symmetry; its Rayleigh quotient upper-bounds
    the gap by 2 (2/3)^(2l-1).
    """
    psi = np.asarray(psi, dtype=float)
    layout = caterpillar_layout(l)
    if len(psi) != 6 * l - 1:
        raise DimensionError(
            f"vector has length {len(psi)}, caterpillar l={l} has {6 * l - 1} vertices"
        )
    phi = np.zeros_like(psi)
    for v in layout["left"]:
        phi[v] = psi[v]
    for v in layout["right"]:
        phi[v] = -psi[v]
    return phi


def discrete_curvature(g: Graph, psi) -> np.ndarray:
    """Delta^2 psi(x) = -d_x psi(x) + sum of psi over neighbors (= -L psi)."""
    psi = np.asarray(psi, dtype=float)
    if len(psi) != g.n:
        raise DimensionError(f"vector has length {len(psi)}, graph has {g.n} vertices")
    out = np.empty(g.n)
    for x in range(g.n):
        out[x] = -g.degree(x) * psi[x] + sum(psi[y] for y in g.neighbors(x))
    return out


def negative_curvature_set(g: Graph, psi, tol: float = CURVATURE_TOL) -> set[int]:
    """S[psi] = vertices of strictly negative discrete curvature.

    Values within tol of zero are treated as zero and excluded.
    """
    curv = discrete_curvature(g, psi)
    return {x for x in range(g.n) if curv[x] < -tol}
