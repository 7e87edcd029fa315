"""Synthesis and verification of the nonzero-consensus coupling design.

The design drives every agent of a signed matrix-weighted network to a preset
nonzero state theta by coupling the antagonized vertices to a constant
external signal x0 = k1 * theta with k1 = 1 + 2/delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import (
    AssumptionViolatedError,
    DegenerateCouplingError,
    DimensionMismatchError,
    NotContractingError,
    SingularCouplingError,
    ZeroThetaError,
)
from .graph import (
    Decomposition,
    MatrixWeight,
    SignedGraph,
    classify_weight,
    structural_sets,
    verify_assumption,
)
from .spectral import (
    Basis,
    Laplacian,
    SpectralReport,
    augmented_laplacian,
    consensus_space,
    eigenvalues_sorted,
    grounded_laplacian,
    null_space,
    principal_angle,
    signed_laplacian,
)

INVERT_TOL = 1e-8
SPEC_TOL = 1e-8
ANGLE_TOL = 1e-6


@dataclass(frozen=True)
class ProtocolDesign:
    theta: np.ndarray
    informed: FrozenSet[int]
    delta: float
    blocks: Dict[int, MatrixWeight]  # signed coupling blocks, positive convention
    k1: float
    x0: np.ndarray
    bound_c: float
    per_vertex_c: Dict[int, float]

    def deltas(self) -> Dict[int, float]:
        return {i: self.delta for i in self.informed}

    def to_dict(self) -> dict:
        return {
            "theta": self.theta.tolist(),
            "delta": self.delta,
            "k1": self.k1,
            "x0": self.x0.tolist(),
            "informed": sorted(self.informed),
            "C": self.bound_c,
            "perVertexC": {str(i): c for i, c in sorted(self.per_vertex_c.items())},
            "blocks": {str(i): b.entries.tolist() for i, b in sorted(self.blocks.items())},
        }


@dataclass(frozen=True)
class SwitchingDesign:
    designs: Dict[int, ProtocolDesign]  # keyed by graph id
    alpha: float


def _in_out_gap(g: SignedGraph, i: int) -> np.ndarray:
    """sum of out-weight magnitudes minus sum of in-weight magnitudes at i."""
    m = np.zeros((g.d, g.d))
    for (a, b), w in g.weights.items():
        if b == i:
            m += w.magnitude
        if a == i:
            m -= w.magnitude
    return m


def _half_lmax_reduced(b_abs: np.ndarray, m: np.ndarray) -> float:
    """(1/2) lambda_max of |B|^{-1} M via the Cholesky reduction R^-1 M R^-T,
    which keeps the problem symmetric (the eigenvalues are real)."""
    try:
        r = np.linalg.cholesky(b_abs)
    except np.linalg.LinAlgError as exc:
        raise SingularCouplingError(f"coupling block not positive definite: {exc}") from exc
    reduced = scipy.linalg.solve_triangular(
        r, scipy.linalg.solve_triangular(r, m.T, lower=True).T, lower=True
    )
    return 0.5 * float(np.max(np.linalg.eigvalsh((reduced + reduced.T) / 2.0)))


def coupling_bound(
    g: SignedGraph,
    dec: Decomposition,
    blocks: Mapping[int, MatrixWeight],
) -> Tuple[Dict[int, float], float]:
    """Per-vertex coupling lower bounds C_i over V1 for user-supplied blocks,
    and their maximum C.  Each |B_i| must be positive definite."""
    report = verify_assumption(g, dec)
    if not report.ok:
        raise AssumptionViolatedError(
            f"decomposition fails for vertices {list(report.failures)}"
        )
    return _bound_given_blocks(g, dec, blocks)


def _bound_given_blocks(
    g: SignedGraph,
    dec: Decomposition,
    blocks: Mapping[int, MatrixWeight],
) -> Tuple[Dict[int, float], float]:
    per_vertex: Dict[int, float] = {}
    for i in sorted(dec.v1):
        b = blocks.get(i)
        if b is None:
            raise SingularCouplingError(f"no coupling block for V1 vertex {i}")
        b_abs = b.magnitude
        if float(np.min(np.linalg.eigvalsh(b_abs))) <= INVERT_TOL:
            raise SingularCouplingError(
                f"|B_{i}| has an eigenvalue below {INVERT_TOL}, cannot invert"
            )
        per_vertex[i] = _half_lmax_reduced(b_abs, _in_out_gap(g, i))
    return per_vertex, max(per_vertex.values())


def design_fixed(
    g: SignedGraph,
    dec: Decomposition,
    theta: np.ndarray,
    margin: float = 0.1,
    delta: Optional[float] = None,
) -> ProtocolDesign:
    """Synthesize the coupling design for a fixed topology.

    Informed vertices are exactly those with incoming negative edges; each
    gets the block B_i = sum of |A_ij| over its negative in-neighbors (taken
    with positive sign).  Directed graphs use delta = C + margin with C the
    coupling bound at these blocks; undirected graphs accept any positive
    delta, so delta = margin and C is reported as 0.  An explicit ``delta``
    overrides the margin rule (C is still reported); in that case a failed
    decomposition check is tolerated, since the caller takes responsibility
    for the coefficient and verify_design delivers the operative spectral
    verdict.
    """
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape[0] != g.d:
        raise DimensionMismatchError(
            f"theta has dimension {theta.shape[0]}, graph has d={g.d}"
        )
    if not np.any(theta):
        raise ZeroThetaError("the preset consensus state must be nonzero")
    report = verify_assumption(g, dec)
    if not report.ok and delta is None:
        raise AssumptionViolatedError(
            f"decomposition fails for vertices {list(report.failures)}"
        )
    sets = structural_sets(g)
    informed = sets.antagonized
    blocks: Dict[int, MatrixWeight] = {}
    for i in sorted(informed):
        total = np.zeros((g.d, g.d))
        for j in sets.negative_in[i]:
            total += g.weights[(i, j)].magnitude
        blocks[i] = classify_weight(total)
    if g.directed:
        for i in sorted(dec.v1):
            b = blocks.get(i)
            if b is None or float(np.min(np.linalg.eigvalsh(b.magnitude))) <= INVERT_TOL:
                raise DegenerateCouplingError(
                    f"V1 vertex {i} lacks a positive definite negative-in-weight sum"
                )
        per_vertex, bound_c = _bound_given_blocks(g, dec, blocks)
        chosen = bound_c + margin if delta is None else delta
    else:
        per_vertex, bound_c = {}, 0.0
        chosen = margin if delta is None else delta
    if chosen <= 0:
        raise DegenerateCouplingError(f"coupling coefficient must be positive, got {chosen}")
    k1 = 1.0 + 2.0 / chosen
    return ProtocolDesign(
        theta=theta,
        informed=informed,
        delta=float(chosen),
        blocks=blocks,
        k1=k1,
        x0=k1 * theta,
        bound_c=bound_c,
        per_vertex_c=per_vertex,
    )


def design_laplacians(g: SignedGraph, design: ProtocolDesign) -> Tuple[Laplacian, Laplacian]:
    """Grounded and signal-augmented Laplacians realized by a design."""
    deltas = design.deltas()
    grounded = grounded_laplacian(signed_laplacian(g), deltas, design.blocks)
    return grounded, augmented_laplacian(grounded, deltas, design.blocks)


@dataclass(frozen=True)
class DesignReport:
    spec_ok: bool
    null_ok: bool
    equilibrium_residual: float
    spectral: SpectralReport

    @property
    def min_real_part(self) -> float:
        return self.spectral.min_real_part


def verify_design(g: SignedGraph, design: ProtocolDesign) -> DesignReport:
    """Spectral and null-space verdicts for a design, report-only.

    spec_ok: every grounded-Laplacian eigenvalue has real part above 1e-8.
    null_ok: the augmented Laplacian's null space has dimension d and matches
    the target space to principal angle below 1e-6.
    """
    grounded, augmented = design_laplacians(g, design)
    eigs = eigenvalues_sorted(grounded.matrix)
    min_re = float(eigs[0].real)
    basis = null_space(augmented.matrix)
    psi = consensus_space(g.n, g.d, 1.0, design.k1)
    psi_basis = Basis(np.linalg.qr(psi)[0])
    null_ok = basis.dim == g.d and principal_angle(basis, psi_basis) < ANGLE_TOL
    residual = float(np.max(np.abs(augmented.matrix @ psi)))
    return DesignReport(
        spec_ok=min_re > SPEC_TOL,
        null_ok=null_ok,
        equilibrium_residual=residual,
        spectral=SpectralReport(
            min_real_part=min_re,
            null_dim=basis.dim,
            psi_match=null_ok,
            eigenvalues=tuple(eigs),
        ),
    )


def design_switching(
    graphs: Mapping[int, SignedGraph],
    decs: Mapping[int, Decomposition],
    theta: np.ndarray,
    alpha: float,
    margin: float = 0.1,
    deltas: Optional[Mapping[int, float]] = None,
) -> SwitchingDesign:
    """One fixed-topology design per graph, sharing theta; coupling parameters
    jump with the topology.  ``deltas`` optionally pins per-graph coefficients."""
    if alpha <= 0:
        raise DimensionMismatchError(f"dwell time must be positive, got {alpha}")
    designs: Dict[int, ProtocolDesign] = {}
    for gid in sorted(graphs):
        try:
            designs[gid] = design_fixed(
                graphs[gid],
                decs[gid],
                theta,
                margin=margin,
                delta=None if deltas is None else deltas.get(gid),
            )
        except Exception as exc:
            raise type(exc)(f"graph {gid}: {exc}") from exc
    return SwitchingDesign(designs=designs, alpha=alpha)


@dataclass(frozen=True)
class ContractionReport:
    factor: float            # per-dwell squared-error decay bound, < 1
    per_graph_lmin: Dict[int, float]


def contraction_factor(
    sdesign: SwitchingDesign, graphs: Mapping[int, SignedGraph]
) -> ContractionReport:
    """Lambda = max_i exp(-2 alpha lambda_min(S_i)) with S_i the symmetric
    part of graph i's grounded Laplacian."""
    lmins: Dict[int, float] = {}
    for gid, design in sorted(sdesign.designs.items()):
        grounded, _ = design_laplacians(graphs[gid], design)
        sym = (grounded.matrix + grounded.matrix.T) / 2.0
        lmins[gid] = float(np.min(np.linalg.eigvalsh(sym)))
    bad = [gid for gid, l in lmins.items() if l <= 0]
    if bad:
        raise NotContractingError(
            f"symmetric part not positive definite for graphs {bad}"
        )
    factor = max(float(np.exp(-2.0 * sdesign.alpha * l)) for l in lmins.values())
    return ContractionReport(factor=factor, per_graph_lmin=lmins)


def necessary_condition_check(
    zstar: np.ndarray,
    augmented_matrices: Sequence[np.ndarray],
    tol: float = 1e-6,
) -> bool:
    """True when the candidate limit lies in the intersection of the null
    spaces of the recurring augmented Laplacians."""
    zstar = np.asarray(zstar, dtype=float).reshape(-1)
    bases = [null_space(m) for m in augmented_matrices]
    inter = (
        bases[0]
        if len(bases) == 1
        else null_space(np.vstack([np.eye(len(zstar)) - b.columns @ b.columns.T for b in bases]))
    )
    norm = float(np.linalg.norm(zstar))
    if norm == 0.0:
        return True
    resid = zstar - inter.columns @ (inter.columns.T @ zstar)
    return float(np.linalg.norm(resid)) < tol * norm
