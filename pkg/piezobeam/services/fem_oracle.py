"""1D coupled electromechanical finite-element eigensolver.

Each node carries four DOFs: axial displacement u, deflection w, slope
w' and the electric amplitude phi. u is linear, w is Hermite cubic and
phi is linear plus an interior quadratic bubble that is condensed out of
each element before assembly. The element energy is the electric enthalpy

    1/2 A11 u'^2 + 1/2 D11 w''^2 - F w'' phi - 1/2 c phi^2 - 1/2 d phi'^2

with c = epsbar33 h1^3 / 3 and d = epsbar11 h1^5 / 30, and the kinetic
energy 1/2 rho0 (u_t^2 + w_t^2) + 1/2 rho2 w_t'^2 (- rho1 u_t w_t' when
flagged). phi carries no mass; the electric block is negative definite.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum, IntEnum
from pathlib import Path
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
import scipy.linalg as la
from scipy.sparse import coo_matrix

from piezobeam.models.error_codes import (
    EigenSolverError,
    IndefiniteMassError,
    ParameterError,
    SingularElectricBlockError,
)
from piezobeam.services.electric import potential_derivative
from piezobeam.services.modal_analytic import ModalResult, shape_derivative
from piezobeam.services.section import Layup, Section
from piezobeam.utils.performance import cached_solution, timed

logger = logging.getLogger(__name__)

DOFS_PER_NODE = 4


class DofKind(IntEnum):
    U = 0
    W = 1
    THETA = 2
    PHI = 3


class ModeClass(str, Enum):
    FLEXURAL_SYMMETRIC = "flexural-symmetric"
    FLEXURAL_ANTISYMMETRIC = "flexural-antisymmetric"
    AXIAL = "axial"

    @property
    def is_flexural(self) -> bool:
        return self is not ModeClass.AXIAL


@dataclass(frozen=True)
class FemFlags:
    include_rho1_coupling: bool = False
    include_axial: bool = True


@dataclass(frozen=True, eq=False)
class FemModel:
    layup: Layup
    section: Section
    n_elems: int
    flags: FemFlags
    nodes: np.ndarray
    dof_kinds: np.ndarray
    dof_nodes: np.ndarray
    K: np.ndarray
    M: np.ndarray
    condensed: bool = False
    # phi = recovery @ x on the retained DOFs, set by condensation
    recovery: Optional[np.ndarray] = None

    @property
    def n_dofs(self) -> int:
        return self.K.shape[0]

    @property
    def element_length(self) -> float:
        return self.layup.length / self.n_elems

    def dofs_of(self, *kinds: DofKind) -> np.ndarray:
        return np.flatnonzero(np.isin(self.dof_kinds, [int(k) for k in kinds]))


@dataclass(frozen=True, eq=False)
class FemModes:
    model: FemModel
    omegas: np.ndarray
    classes: Tuple[ModeClass, ...]
    shapes: np.ndarray
    phi: Optional[np.ndarray]

    @property
    def frequencies_hz(self) -> np.ndarray:
        return self.omegas / (2.0 * np.pi)

    def flexural_indices(self) -> List[int]:
        return [i for i, c in enumerate(self.classes) if c.is_flexural]

    def __len__(self) -> int:
        return len(self.omegas)


class WeakFormResidual(NamedTuple):
    mechanical: float
    electric: float


def _phi_bubble(section: Section, l: float) -> Tuple[np.ndarray, float]:
    """
    Stiffness row of the interior phi bubble against the 8 element DOFs,
    and its diagonal entry.

    The pivot is negative whenever the layer has permittivity; a zero
    pivot means there is nothing to condense.
    """
    coupling = np.zeros(8)
    coupling[[2, 6]] = section.F * 2.0 / 3.0 * np.array([1.0, -1.0])
    coupling[[3, 7]] = -section.c_elec * l / 3.0
    pivot = -(8.0 * section.c_elec * l / 15.0 + 16.0 * section.d_elec / (3.0 * l))
    return coupling, pivot


def _element_matrices(section: Section, le: float, flags: FemFlags) -> Tuple[np.ndarray, np.ndarray]:
    """Element stiffness and mass on local DOFs (u0, w0, t0, p0, u1, w1, t1, p1)."""
    U, B, P = [0, 4], [1, 2, 5, 6], [3, 7]
    l = le
    Ke = np.zeros((8, 8))
    Me = np.zeros((8, 8))

    Ke[np.ix_(U, U)] = section.A11 / l * np.array([[1.0, -1.0], [-1.0, 1.0]])
    Me[np.ix_(U, U)] = section.rho0 * l / 6.0 * np.array([[2.0, 1.0], [1.0, 2.0]])

    Ke[np.ix_(B, B)] = section.D11 / l ** 3 * np.array([
        [12.0, 6 * l, -12.0, 6 * l],
        [6 * l, 4 * l * l, -6 * l, 2 * l * l],
        [-12.0, -6 * l, 12.0, -6 * l],
        [6 * l, 2 * l * l, -6 * l, 4 * l * l],
    ])
    Me[np.ix_(B, B)] = section.rho0 * l / 420.0 * np.array([
        [156.0, 22 * l, 54.0, -13 * l],
        [22 * l, 4 * l * l, 13 * l, -3 * l * l],
        [54.0, 13 * l, 156.0, -22 * l],
        [-13 * l, -3 * l * l, -22 * l, 4 * l * l],
    ]) + section.rho2 / (30.0 * l) * np.array([
        [36.0, 3 * l, -36.0, 3 * l],
        [3 * l, 4 * l * l, -3 * l, -l * l],
        [-36.0, -3 * l, 36.0, -3 * l],
        [3 * l, -l * l, -3 * l, 4 * l * l],
    ])

    Ke[np.ix_(P, P)] = -(
        section.c_elec * l / 6.0 * np.array([[2.0, 1.0], [1.0, 2.0]])
        + section.d_elec / l * np.array([[1.0, -1.0], [-1.0, 1.0]])
    )

    # integral of N_w'' (rows) times N_phi (columns) over the element
    curvature_phi = np.array([
        [-1.0 / l, 1.0 / l],
        [-1.0, 0.0],
        [1.0 / l, -1.0 / l],
        [0.0, 1.0],
    ])
    Ke[np.ix_(B, P)] = -section.F * curvature_phi
    Ke[np.ix_(P, B)] = Ke[np.ix_(B, P)].T

    # quadratic phi bubble 4 xi (1 - xi), eliminated element by element
    coupling, pivot = _phi_bubble(section, l)
    if pivot < 0:
        Ke -= np.outer(coupling, coupling) / pivot

    if flags.include_rho1_coupling:
        # integral of N_u (rows) times N_w' (columns)
        u_slope = np.array([
            [-0.5, l / 12.0, 0.5, -l / 12.0],
            [-0.5, -l / 12.0, 0.5, l / 12.0],
        ])
        Me[np.ix_(U, B)] = -section.rho1 * u_slope
        Me[np.ix_(B, U)] = Me[np.ix_(U, B)].T

    return Ke, Me


def assemble(layup: Layup, section: Section, n_elems: int, flags: FemFlags = FemFlags()) -> FemModel:
    """
    Assemble global stiffness and mass on a uniform mesh over [-L/2, L/2].

    Args:
        layup: Layup providing the length
        section: Section scalars
        n_elems: Number of elements (>= 2)
        flags: rho1 coupling and axial DOF switches

    Returns:
        Uncondensed FemModel with 4 DOFs per node
    """
    if int(n_elems) != n_elems or n_elems < 2:
        raise ParameterError(f"n_elems must be an integer >= 2 (got {n_elems})")
    n_elems = int(n_elems)

    n_nodes = n_elems + 1
    n_dofs = DOFS_PER_NODE * n_nodes
    nodes = np.linspace(-0.5 * layup.length, 0.5 * layup.length, n_nodes)
    Ke, Me = _element_matrices(section, layup.length / n_elems, flags)

    element_dofs = DOFS_PER_NODE * np.arange(n_elems)[:, None] + np.arange(2 * DOFS_PER_NODE)[None, :]
    rows = np.repeat(element_dofs, 2 * DOFS_PER_NODE, axis=1).ravel()
    cols = np.tile(element_dofs, (1, 2 * DOFS_PER_NODE)).ravel()

    K = coo_matrix((np.tile(Ke.ravel(), n_elems), (rows, cols)), shape=(n_dofs, n_dofs)).toarray()
    M = coo_matrix((np.tile(Me.ravel(), n_elems), (rows, cols)), shape=(n_dofs, n_dofs)).toarray()

    model = FemModel(
        layup=layup,
        section=section,
        n_elems=n_elems,
        flags=flags,
        nodes=nodes,
        dof_kinds=np.tile(np.arange(DOFS_PER_NODE), n_nodes),
        dof_nodes=np.repeat(np.arange(n_nodes), DOFS_PER_NODE),
        K=K,
        M=M,
    )
    logger.info(f"Assembled FEM model: {n_elems} elements, {n_dofs} DOFs")
    return model


def schur_complement(K: np.ndarray, keep: np.ndarray, eliminate: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eliminate a negative-definite block by static condensation.

    Args:
        K: Symmetric matrix
        keep: Retained indices
        eliminate: Indices of the negative-definite block to eliminate

    Returns:
        (S, R) with S = K_kk - K_ke K_ee^-1 K_ek and x_e = R x_k

    Raises:
        SingularElectricBlockError: if -K_ee is not positive definite
    """
    K_ee = K[np.ix_(eliminate, eliminate)]
    K_ek = K[np.ix_(eliminate, keep)]
    try:
        factor = la.cho_factor(-K_ee)
    except la.LinAlgError as e:
        raise SingularElectricBlockError(f"electric block is not definite: {e}")

    R = la.cho_solve(factor, K_ek)
    S = K[np.ix_(keep, keep)] + K_ek.T @ R
    return 0.5 * (S + S.T), R


def condense_electric(model: FemModel) -> FemModel:
    """Eliminate the phi DOFs; the result is mechanical-only."""
    if model.condensed:
        return model

    phi = model.dofs_of(DofKind.PHI)
    mech = model.dofs_of(DofKind.U, DofKind.W, DofKind.THETA)
    with timed(f"Electric condensation ({model.n_elems} elements)"):
        S, R = schur_complement(model.K, mech, phi)

    return replace(
        model,
        dof_kinds=model.dof_kinds[mech],
        dof_nodes=model.dof_nodes[mech],
        K=S,
        M=model.M[np.ix_(mech, mech)],
        condensed=True,
        recovery=R,
    )


def simply_supported_dofs(model: FemModel) -> np.ndarray:
    """Free DOF positions: w fixed at both ends, u fixed at the left end
    (or everywhere without axial DOFs); slopes and phi are free."""
    last = model.n_elems
    kinds, nodes = model.dof_kinds, model.dof_nodes

    fixed = (kinds == DofKind.W) & ((nodes == 0) | (nodes == last))
    if model.flags.include_axial:
        fixed |= (kinds == DofKind.U) & (nodes == 0)
    else:
        fixed |= kinds == DofKind.U
    return np.flatnonzero(~fixed)


def _by_node(model: FemModel, x: np.ndarray, kind: DofKind) -> np.ndarray:
    values = np.zeros(model.n_elems + 1)
    dofs = model.dofs_of(kind)
    values[model.dof_nodes[dofs]] = x[dofs]
    return values


def _strain_energy(model: FemModel, x: np.ndarray) -> float:
    """x' K x of a condensed model, integrated element by element from
    curvature, potential and axial strain."""
    s = model.section
    l = model.element_length
    xi, weights = np.polynomial.legendre.leggauss(3)
    xi, weights = 0.5 * (xi + 1.0), 0.5 * weights

    u = _by_node(model, x, DofKind.U)
    w = _by_node(model, x, DofKind.W)
    t = _by_node(model, x, DofKind.THETA)
    p = model.recovery @ x

    t0, t1 = t[:-1, None], t[1:, None]
    p0, p1 = p[:-1, None], p[1:, None]
    curvature = (
        (6.0 - 12.0 * xi) * np.diff(w)[:, None] / l ** 2
        + ((-4.0 + 6.0 * xi) * t0 + (-2.0 + 6.0 * xi) * t1) / l
    )

    coupling, pivot = _phi_bubble(s, l)
    bubble = np.zeros_like(t0)
    if pivot < 0:
        bubble = -(coupling[2] * (t0 - t1) + coupling[3] * (p0 + p1)) / pivot

    phi = (1.0 - xi) * p0 + xi * p1 + 4.0 * xi * (1.0 - xi) * bubble
    dphi = (p1 - p0) / l + 4.0 * (1.0 - 2.0 * xi) * bubble / l
    density = s.D11 * curvature ** 2 - 2.0 * s.F * curvature * phi - s.c_elec * phi ** 2 - s.d_elec * dphi ** 2

    return float(l * (np.sum(density @ weights) + s.A11 * np.sum((np.diff(u) / l) ** 2)))


def rayleigh_quotient(model: FemModel, x: np.ndarray) -> float:
    """
    omega^2 estimate x'Kx / x'Mx on a condensed model.

    The stiffness side comes from element strains rather than the assembled
    matrix, so it keeps full relative precision on fine meshes.
    """
    if not model.condensed:
        raise ParameterError("Rayleigh quotient needs the condensed model")
    return _strain_energy(model, x) / float(x @ model.M @ x)


def _classify(model: FemModel, x: np.ndarray) -> ModeClass:
    u = model.dofs_of(DofKind.U)
    bend = model.dofs_of(DofKind.W, DofKind.THETA)
    axial_energy = x[u] @ model.M[np.ix_(u, u)] @ x[u]
    bending_energy = x[bend] @ model.M[np.ix_(bend, bend)] @ x[bend]
    if axial_energy > bending_energy:
        return ModeClass.AXIAL

    w = x[model.dofs_of(DofKind.W)]
    if np.dot(w, w[::-1]) >= 0:
        return ModeClass.FLEXURAL_SYMMETRIC
    return ModeClass.FLEXURAL_ANTISYMMETRIC


def solve_modes(model: FemModel, k: int, bc: str = "simply_supported") -> FemModes:
    """
    First k eigenpairs of K x = omega^2 M x after condensation.

    Shapes are mass-normalized and returned on the condensed DOF layout,
    zero at constrained DOFs.

    Raises:
        IndefiniteMassError: if M is not positive definite on the free DOFs
        EigenSolverError: if the symmetric solver fails
    """
    if bc != "simply_supported":
        raise ParameterError(f"unsupported boundary condition {bc!r}")

    condensed = condense_electric(model)
    free = simply_supported_dofs(condensed)
    if not 1 <= k <= free.size:
        raise ParameterError(f"mode count must be in [1, {free.size}] (got {k})")

    Kf = condensed.K[np.ix_(free, free)]
    Mf = condensed.M[np.ix_(free, free)]
    try:
        la.cholesky(Mf, lower=True)
    except la.LinAlgError as e:
        raise IndefiniteMassError(f"mass matrix is not positive definite: {e}")

    scale = 1.0 / np.sqrt(np.diag(Mf))
    Ks = Kf * scale[:, None] * scale[None, :]
    Ms = Mf * scale[:, None] * scale[None, :]

    with timed(f"Eigen-solve ({free.size} DOFs, {k} modes)"):
        try:
            eigvals, vectors = la.eigh(Ks, Ms, subset_by_index=[0, k - 1])
        except la.LinAlgError as e:
            raise EigenSolverError(f"eigen-solve failed: {e}")

    if np.any(eigvals <= 0):
        raise EigenSolverError(f"non-positive eigenvalue {eigvals.min():.3e}; check constraints")

    shapes = np.zeros((condensed.n_dofs, k))
    shapes[free] = vectors * scale[:, None]

    # omega^2 from element strains; eigh values carry eps * ||K|| error
    lam = np.array([rayleigh_quotient(condensed, shapes[:, j]) for j in range(k)])
    if np.any(lam <= 0):
        raise EigenSolverError(f"non-positive Rayleigh quotient {lam.min():.3e}")
    order = np.argsort(lam, kind="stable")
    lam, shapes = lam[order], shapes[:, order]
    phi = condensed.recovery @ shapes

    return FemModes(
        model=condensed,
        omegas=np.sqrt(lam),
        classes=tuple(_classify(condensed, shapes[:, j]) for j in range(k)),
        shapes=shapes,
        phi=phi,
    )


def solve_modes_monolithic(model: FemModel, k: int) -> np.ndarray:
    """
    First k angular frequencies from the uncondensed coupled pencil.

    The mass matrix is singular on the phi DOFs, so the pencil is solved by
    QZ and only finite positive eigenvalues are kept.
    """
    if model.condensed:
        raise ParameterError("monolithic solve needs the uncondensed model")

    free = simply_supported_dofs(model)
    Kf = model.K[np.ix_(free, free)]
    Mf = model.M[np.ix_(free, free)]
    scale = 1.0 / np.sqrt(np.abs(np.diag(Kf)))
    Ks = Kf * scale[:, None] * scale[None, :]
    Ms = Mf * scale[:, None] * scale[None, :]

    alpha, beta = la.eig(Ks, Ms, right=False, homogeneous_eigvals=True)
    finite = beta != 0
    lam = alpha[finite] / beta[finite]
    real = np.abs(lam.imag) <= 1e-6 * np.abs(lam.real)
    lam = np.sort(lam.real[real & (lam.real > 0)])
    if lam.size < k:
        raise EigenSolverError(f"only {lam.size} finite positive eigenvalues found")
    return np.sqrt(lam[:k])


@cached_solution
def solve_flexural(layup: Layup, section: Section, n_elems: int, count: int,
                   flags: FemFlags = FemFlags()) -> Tuple[float, ...]:
    """First ``count`` flexural frequencies in Hz; axial modes are skipped."""
    condensed = condense_electric(assemble(layup, section, n_elems, flags))
    n_free = simply_supported_dofs(condensed).size
    request = min(2 * count + 2, n_free)

    while True:
        modes = solve_modes(condensed, request)
        flexural = modes.frequencies_hz[modes.flexural_indices()]
        if flexural.size >= count:
            return tuple(float(f) for f in flexural[:count])
        if request == n_free:
            raise EigenSolverError(f"only {flexural.size} flexural modes in the spectrum, {count} requested")
        request = min(2 * request, n_free)


def nodal_vector(model: FemModel, w=None, dw=None, u=None, phi=None) -> np.ndarray:
    """Build a DOF vector from nodal samples (arrays of length n_elems + 1)."""
    x = np.zeros(model.n_dofs)
    for kind, values in ((DofKind.U, u), (DofKind.W, w), (DofKind.THETA, dw), (DofKind.PHI, phi)):
        if values is None:
            continue
        dofs = model.dofs_of(kind)
        if dofs.size == 0:
            raise ParameterError(f"model has no {kind.name} DOFs")
        x[dofs] = np.asarray(values, dtype=float)
    return x


def bending_patch_stiffness(model: FemModel, curvature: float = 1.0) -> float:
    """
    Effective bending stiffness under a uniform curvature state.

    w = kappa x^2 / 2 is represented exactly; condensation lets phi relax,
    so the result is Dbar, not D11.
    """
    condensed = condense_electric(model)
    x_nodes = condensed.nodes
    x = nodal_vector(condensed, w=0.5 * curvature * x_nodes ** 2, dw=curvature * x_nodes)
    energy = 0.5 * x @ condensed.K @ x
    return 2.0 * energy / (curvature ** 2 * model.layup.length)


def _inertial_load(model: FemModel, result: ModalResult) -> np.ndarray:
    """Consistent load  int rho0 w N + rho2 w' N'  of the analytic deflection,
    integrated by Gauss quadrature on each element."""
    s = model.section
    l = model.element_length
    xi, weights = np.polynomial.legendre.leggauss(4)
    xi, weights = 0.5 * (xi + 1.0), 0.5 * weights

    points = model.nodes[:-1, None] + l * xi[None, :]
    w = shape_derivative(result, points, 0)
    dw = shape_derivative(result, points, 1)

    # Hermite cubics on (w0, t0, w1, t1) and their x-derivatives
    N = np.stack([
        1.0 - 3.0 * xi ** 2 + 2.0 * xi ** 3,
        l * (xi - 2.0 * xi ** 2 + xi ** 3),
        3.0 * xi ** 2 - 2.0 * xi ** 3,
        l * (xi ** 3 - xi ** 2),
    ], axis=1)
    dN = np.stack([
        6.0 * (xi ** 2 - xi) / l,
        1.0 - 4.0 * xi + 3.0 * xi ** 2,
        6.0 * (xi - xi ** 2) / l,
        3.0 * xi ** 2 - 2.0 * xi,
    ], axis=1)
    element_load = l * ((s.rho0 * w * weights) @ N + (s.rho2 * dw * weights) @ dN)

    dofs = DOFS_PER_NODE * np.arange(model.n_elems)[:, None] + np.array([1, 2, 5, 6])[None, :]
    load = np.zeros(model.n_dofs)
    np.add.at(load, dofs.ravel(), element_load.ravel())
    return load


def weak_form_residual(model: FemModel, result: ModalResult) -> WeakFormResidual:
    """
    Relative residual of the discrete equations for an analytic mode.

    The analytic deflection and phi are interpolated at the nodes and the
    stiffness side is K x. The inertia side is the exact consistent load of
    the analytic deflection, so the mechanical residual measures the
    coupling and interpolation error alone. phi rows at the two end nodes
    are excluded: the analytic phi does not satisfy the natural electric
    boundary condition.

    Raises:
        ParameterError: for a condensed model or one with rho1 coupling
    """
    if model.condensed:
        raise ParameterError("weak-form residual needs the uncondensed model")
    if model.flags.include_rho1_coupling:
        raise ParameterError("weak-form residual needs the rho1 coupling switched off")

    nodes = model.nodes
    x = nodal_vector(
        model,
        w=shape_derivative(result, nodes, 0),
        dw=shape_derivative(result, nodes, 1),
        phi=potential_derivative(result, model.section, nodes, 0),
    )
    inertia = result.omega ** 2 * _inertial_load(model, result)
    r = model.K @ x - inertia

    free = simply_supported_dofs(model)
    mech = np.intersect1d(free, model.dofs_of(DofKind.U, DofKind.W, DofKind.THETA))
    phi_dofs = model.dofs_of(DofKind.PHI)
    interior = phi_dofs[1:-1]
    electric_scale = (model.K[np.ix_(phi_dofs, phi_dofs)] @ x[phi_dofs])[1:-1]

    return WeakFormResidual(
        mechanical=float(np.linalg.norm(r[mech]) / np.linalg.norm(inertia[mech])),
        electric=float(np.linalg.norm(r[interior]) / np.linalg.norm(electric_scale)),
    )


def end_slope_ratio(modes: FemModes, index: int) -> float:
    """|phi'| in the two end elements relative to the largest element slope."""
    if modes.phi is None:
        raise ParameterError("modes carry no electric potential")
    slopes = np.abs(np.diff(modes.phi[:, index])) / modes.model.element_length
    return float(max(slopes[0], slopes[-1]) / slopes.max())


def dump_triplets(model: FemModel, directory: Path) -> List[Path]:
    """Write K and M as 'row col value' text files; returns the paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    suffix = "condensed" if model.condensed else "coupled"

    written = []
    for name, matrix in (("stiffness", model.K), ("mass", model.M)):
        triplets = coo_matrix(matrix)
        path = directory / f"{name}_{model.n_elems}_{suffix}.txt"
        lines = [
            f"{r} {c} {v:.17e}"
            for r, c, v in zip(triplets.row, triplets.col, triplets.data)
        ]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)

    logger.info(f"Wrote matrix triplets to {directory}")
    return written
