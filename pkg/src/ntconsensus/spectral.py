"""Laplacian assembly, the mirrored-system lifting, and the eigen toolbox."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NotNonnegativeWeightsError,
    NumericalFailureError,
)
from .graph import Definiteness, MatrixWeight, SignedGraph, classify_weight

RANK_TOL = 1e-8


class LaplacianKind(Enum):
    SIGNED = "signed"
    GROUNDED = "grounded"
    AUGMENTED = "augmented"
    EXPANDED_GROUNDED = "expanded-grounded"
    EXPANDED_AUGMENTED = "expanded-augmented"


@dataclass(frozen=True)
class Laplacian:
    matrix: np.ndarray
    kind: LaplacianKind
    n: int  # number of agent blocks along the top-left (excludes the signal block)
    d: int


def _block(i: int, d: int) -> slice:
    return slice((i - 1) * d, i * d)


def signed_laplacian(g: SignedGraph) -> Laplacian:
    """Diagonal block i is the sum of |A_ik| over in-neighbors; off-diagonal
    block (i, j) is -A_ij."""
    m = np.zeros((g.n * g.d, g.n * g.d))
    for (i, j), w in g.weights.items():
        m[_block(i, g.d), _block(j, g.d)] = -w.entries
        m[_block(i, g.d), _block(i, g.d)] += w.magnitude
    return Laplacian(matrix=m, kind=LaplacianKind.SIGNED, n=g.n, d=g.d)


def _grounding_terms(
    lap: Laplacian, deltas: Mapping[int, float], blocks: Mapping[int, MatrixWeight]
) -> Dict[int, Tuple[float, MatrixWeight]]:
    out: Dict[int, Tuple[float, MatrixWeight]] = {}
    for i, delta in deltas.items():
        if delta == 0.0:
            continue
        if not (1 <= i <= lap.n):
            raise DimensionMismatchError(f"grounded vertex {i} outside 1..{lap.n}")
        b = blocks.get(i)
        if b is None or b.definiteness is Definiteness.ZERO:
            raise DimensionMismatchError(f"vertex {i} has delta > 0 but no block")
        if b.d != lap.d:
            raise DimensionMismatchError(
                f"block for vertex {i} has dimension {b.d}, expected {lap.d}"
            )
        out[i] = (delta, b)
    return out


def grounded_laplacian(
    lap: Laplacian,
    deltas: Mapping[int, float],
    blocks: Mapping[int, MatrixWeight],
    expanded: bool = False,
) -> Laplacian:
    """Add the block-diagonal grounding delta_i * |B_i|."""
    want = LaplacianKind.SIGNED
    if lap.kind is not want:
        raise DimensionMismatchError(f"need a {want.value} Laplacian, got {lap.kind.value}")
    m = lap.matrix.copy()
    for i, (delta, b) in _grounding_terms(lap, deltas, blocks).items():
        m[_block(i, lap.d), _block(i, lap.d)] += delta * b.magnitude
    kind = LaplacianKind.EXPANDED_GROUNDED if expanded else LaplacianKind.GROUNDED
    return Laplacian(matrix=m, kind=kind, n=lap.n, d=lap.d)


def augmented_laplacian(
    grounded: Laplacian,
    deltas: Mapping[int, float],
    blocks: Mapping[int, MatrixWeight],
) -> Laplacian:
    """Adjoin the external-signal block: top-right carries -delta_i * B_i with
    the signed block (not its magnitude); the bottom block row is zero."""
    if grounded.kind not in (LaplacianKind.GROUNDED, LaplacianKind.EXPANDED_GROUNDED):
        raise DimensionMismatchError(
            f"need a grounded Laplacian, got {grounded.kind.value}"
        )
    n, d = grounded.n, grounded.d
    m = np.zeros(((n + 1) * d, (n + 1) * d))
    m[: n * d, : n * d] = grounded.matrix
    for i, (delta, b) in _grounding_terms(grounded, deltas, blocks).items():
        m[_block(i, d), n * d:] = -delta * b.entries
    kind = (
        LaplacianKind.EXPANDED_AUGMENTED
        if grounded.kind is LaplacianKind.EXPANDED_GROUNDED
        else LaplacianKind.AUGMENTED
    )
    return Laplacian(matrix=m, kind=kind, n=n, d=d)


def expand_system(
    g: SignedGraph,
    deltas: Mapping[int, float],
    blocks: Mapping[int, MatrixWeight],
) -> Tuple[SignedGraph, Laplacian]:
    """Mirror every agent and reroute antagonistic edges to the mirror copies.

    The definiteness-order max{A, 0} keeps positive-class weights in place and
    moves negative-class ones (as magnitudes) onto the cross edges.  Returns
    the all-nonnegative 2N-vertex graph and its grounded Laplacian, with the
    mirror copies grounded through -B_i.
    """
    edges: Dict[Tuple[int, int], np.ndarray] = {}
    for (i, j), w in g.weights.items():
        if w.sign > 0:
            edges[(i, j)] = w.entries
            edges[(i + g.n, j + g.n)] = w.entries
        else:
            edges[(i + g.n, j)] = w.magnitude
            edges[(i, j + g.n)] = w.magnitude
    expanded = SignedGraph.from_edges(2 * g.n, g.d, g.directed, edges)
    exp_deltas: Dict[int, float] = {}
    exp_blocks: Dict[int, MatrixWeight] = {}
    for i, delta in deltas.items():
        exp_deltas[i] = delta
        exp_deltas[i + g.n] = delta
        b = blocks.get(i)
        if b is not None:
            exp_blocks[i] = b
            exp_blocks[i + g.n] = classify_weight(-b.entries)
    lap = grounded_laplacian(
        signed_laplacian(expanded), exp_deltas, exp_blocks, expanded=True
    )
    return expanded, lap


def eigenvalues_sorted(m: np.ndarray) -> np.ndarray:
    """Dense spectrum sorted by real part ascending, ties by imaginary part."""
    try:
        eigs = np.linalg.eigvals(np.asarray(m, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigensolver failed: {exc}") from exc
    order = np.lexsort((eigs.imag, eigs.real))
    return eigs[order]


def min_real_part(m: np.ndarray) -> float:
    return float(eigenvalues_sorted(m)[0].real)


@dataclass(frozen=True)
class Basis:
    """Orthonormal columns spanning a subspace."""

    columns: np.ndarray

    @property
    def dim(self) -> int:
        return self.columns.shape[1]


def null_space(m: np.ndarray, tau_rank: float = RANK_TOL) -> Basis:
    """Right null space via SVD; singular values below tau_rank * sigma_max
    count as zero."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    try:
        _, s, vt = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD failed: {exc}") from exc
    cols = m.shape[1]
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > tau_rank * s[0]))
    return Basis(columns=vt[rank:].T.copy() if rank < cols else np.zeros((cols, 0)))


def intersect_null_spaces(bases: Sequence[Basis], tau_rank: float = RANK_TOL) -> Basis:
    """Intersection of subspaces, via the null space of the stacked orthogonal
    projectors onto their complements."""
    if not bases:
        raise DimensionMismatchError("need at least one basis")
    rows = bases[0].columns.shape[0]
    stack: List[np.ndarray] = []
    for b in bases:
        if b.columns.shape[0] != rows:
            raise DimensionMismatchError("bases have mismatched row dimensions")
        stack.append(np.eye(rows) - b.columns @ b.columns.T)
    return null_space(np.vstack(stack), tau_rank)


def principal_angle(a: Basis, b: Basis) -> float:
    """Largest principal angle between two subspaces (radians)."""
    if a.columns.shape[0] != b.columns.shape[0]:
        raise DimensionMismatchError("bases have mismatched row dimensions")
    if a.dim != b.dim:
        return float(np.pi / 2)
    if a.dim == 0:
        return 0.0
    sigma = np.linalg.svd(a.columns.T @ b.columns, compute_uv=False)
    return float(np.arccos(np.clip(sigma.min(), -1.0, 1.0)))


def log_norm2(m: np.ndarray) -> float:
    """Logarithmic norm induced by the spectral norm: lambda_max of the
    symmetric part."""
    m = np.asarray(m, dtype=float)
    return float(np.max(np.linalg.eigvalsh((m + m.T) / 2.0)))


def matrix_exp(m: np.ndarray, t: float = 1.0) -> np.ndarray:
    """e^{tM} (scaling-and-squaring, via scipy)."""
    if t < 0:
        raise NumericalFailureError("matrix_exp requires t >= 0")
    out = scipy.linalg.expm(t * np.asarray(m, dtype=float))
    if not np.all(np.isfinite(out)):
        raise NumericalFailureError("matrix exponential overflowed")
    return out


def consensus_space(n: int, d: int, xi: float = 1.0, xi0: float = 1.0) -> np.ndarray:
    """The (n+1)d x d matrix whose span is the target convergence space:
    xi on every agent block, xi0 on the signal block."""
    return np.vstack([xi * np.tile(np.eye(d), (n, 1)), xi0 * np.eye(d)])


def quadratic_form_gap(
    g: SignedGraph,
    deltas: Mapping[int, float],
    blocks: Mapping[int, MatrixWeight],
    x: np.ndarray,
) -> float:
    """Quadratic-form slack of the grounded Laplacian of an all-nonnegative
    graph over the per-vertex lower bound; nonnegative up to roundoff.

    Returns x^T L_B x - sum_i x_i^T [delta_i |B_i| + (1/2) sum_{j != i}
    (A_ij - A_ji)] x_i.
    """
    for (i, j), w in g.weights.items():
        if w.sign < 0:
            raise NotNonnegativeWeightsError(
                f"edge ({j}->{i}) has negative class {w.definiteness.value}"
            )
    lap = grounded_laplacian(signed_laplacian(g), deltas, blocks)
    x = np.asarray(x, dtype=float).reshape(g.n * g.d)
    phi = float(x @ lap.matrix @ x)
    rhs = 0.0
    for i in g.vertices:
        xi = x[_block(i, g.d)]
        m = np.zeros((g.d, g.d))
        delta = deltas.get(i, 0.0)
        if delta:
            b = blocks.get(i)
            if b is not None:
                m += delta * b.magnitude
        for (a, bidx), w in g.weights.items():
            if a == i:
                m += 0.5 * w.entries
            if bidx == i:
                m -= 0.5 * w.entries
        rhs += float(xi @ m @ xi)
    return phi - rhs


@dataclass(frozen=True)
class SpectralReport:
    min_real_part: float
    null_dim: int
    psi_match: bool
    eigenvalues: Tuple[complex, ...]

    def to_dict(self) -> dict:
        return {
            "minRealPart": self.min_real_part,
            "nullDim": self.null_dim,
            "psiMatch": self.psi_match,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
        }
