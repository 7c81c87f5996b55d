"""Two-qubit coordinate chart on the dual of u(4).

A Hermitian 4x4 operator is expanded over the Pauli product basis as

    A = y0 I(x)I + sum_k m_k sigma_k(x)I + sum_j n_j I(x)sigma_j
        + sum_kj (m_k n_j + r_kj) sigma_k(x)sigma_j

so (y0, m, n, r) is a nonlinear chart: the correlation block carries the
product of the local coordinates plus the genuinely bipartite remainder r
(r = 0 marks product structure). Poisson and symmetric (Jordan-type) vector
fields of the coordinate functions are computed by pushing the dual-space
tensors through the chart Jacobian; long hand-derived closed forms for ten of
those fields are kept as cross-check targets, with a per-term discrepancy
report instead of silent absorption where the two disagree.

Normalization: the chart tensors here use the product-basis structure
constants with quarter-trace coordinates, which is exactly the scaling under
which the coordinate fields take the closed polynomial forms below; it is 2x
the dual-space convention of :mod:`geoqm.liedual`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linops import require_hermitian
from .liedual import pauli_product_basis, structure_constants

COORD_NAMES: tuple[str, ...] = (
    "y0", "m1", "m2", "m3", "n1", "n2", "n3",
    "r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33",
)
COORD_INDEX = {name: i for i, name in enumerate(COORD_NAMES)}


@dataclass(frozen=True)
class U4ChartPoint:
    """Chart coordinates (y0, m, n, r) of a Hermitian two-qubit operator."""

    y0: float
    m: np.ndarray  # shape (3,)
    n: np.ndarray  # shape (3,)
    r: np.ndarray  # shape (3, 3)

    def vector(self) -> np.ndarray:
        """Flatten to the 16-vector in COORD_NAMES order."""
        return np.concatenate([[self.y0], self.m, self.n, self.r.reshape(-1)])

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "U4ChartPoint":
        x = np.asarray(x, float)
        if x.shape != (16,):
            raise ValueError("chart point vector must have length 16")
        return cls(y0=float(x[0]), m=x[1:4].copy(), n=x[4:7].copy(),
                   r=x[7:].reshape(3, 3).copy())


@lru_cache(maxsize=1)
def _product_structure():
    basis = pauli_product_basis()
    sc = structure_constants(basis)
    return basis, sc.c, sc.d


def to_chart(a: np.ndarray) -> U4ChartPoint:
    """Extract (y0, m, n, r) by quarter traces against the product basis."""
    a = require_hermitian(a)
    if a.shape != (4, 4):
        raise ValueError("the two-qubit chart needs a 4x4 operator")
    basis, _, _ = _product_structure()
    c = np.array([np.trace(a @ b).real / 4.0 for b in basis.matrices])
    m = np.array([c[4 * (k + 1)] for k in range(3)])
    n = np.array([c[j + 1] for j in range(3)])
    t = np.array([[c[4 * (k + 1) + (j + 1)] for j in range(3)] for k in range(3)])
    return U4ChartPoint(y0=float(c[0]), m=m, n=n, r=t - np.outer(m, n))


def from_chart(point: U4ChartPoint) -> np.ndarray:
    """Rebuild the Hermitian operator from chart coordinates."""
    basis, _, _ = _product_structure()
    c = _basis_coords(point.vector())
    return basis.matrix(c)


def _basis_coords(x: np.ndarray) -> np.ndarray:
    """Chart vector -> product-basis coefficients c_mu (quarter traces)."""
    y0 = x[0]
    m = x[1:4]
    n = x[4:7]
    r = x[7:].reshape(3, 3)
    c = np.zeros(16)
    c[0] = y0
    for k in range(3):
        c[4 * (k + 1)] = m[k]
    for j in range(3):
        c[j + 1] = n[j]
    for k in range(3):
        for j in range(3):
            c[4 * (k + 1) + (j + 1)] = m[k] * n[j] + r[k, j]
    return c


def _chart_jacobian(x: np.ndarray) -> np.ndarray:
    """J[i, mu] = d x_i / d c_mu at the chart point x (inverse-map Jacobian)."""
    m = x[1:4]
    n = x[4:7]
    jac = np.zeros((16, 16))
    jac[0, 0] = 1.0
    for k in range(3):
        jac[1 + k, 4 * (k + 1)] = 1.0
    for j in range(3):
        jac[4 + j, j + 1] = 1.0
    for k in range(3):
        for j in range(3):
            i = 7 + 3 * k + j
            jac[i, 4 * (k + 1) + (j + 1)] = 1.0
            jac[i, 4 * (k + 1)] = -n[j]
            jac[i, j + 1] = -m[k]
    return jac


def chart_tensors(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Poisson bivector and symmetric tensor in chart coordinates at x.

    Returns (P, R) with P[i, j] = {x_i, x_j} and R[i, j] the symmetric pairing
    of dx_i, dx_j; both obtained by the chain rule from the linear dual-space
    tensors, never from the printed closed forms.
    """
    x = np.asarray(x, float)
    _, c4, d4 = _product_structure()
    c = _basis_coords(x)
    pc = np.einsum("mnr,r->mn", c4, c)
    rc = np.einsum("mnr,r->mn", d4, c)
    jac = _chart_jacobian(x)
    return jac @ pc @ jac.T, jac @ rc @ jac.T


def hamiltonian_field_chart(coordinate: str, point: U4ChartPoint) -> np.ndarray:
    """Chain-rule Poisson field {coordinate, .} as a 16-vector of components."""
    p, _ = chart_tensors(point.vector())
    return p[COORD_INDEX[coordinate]].copy()


def riemann_field_chart(coordinate: str, point: U4ChartPoint) -> np.ndarray:
    """Chain-rule symmetric-tensor field of a coordinate, 16 components."""
    _, r = chart_tensors(point.vector())
    return r[COORD_INDEX[coordinate]].copy()


def chart_poisson(f, g, x: np.ndarray, fd_step: float = 1e-6) -> float:
    """{F, G} at x for scalar functions of the chart vector (FD gradients)."""
    x = np.asarray(x, float)
    p, _ = chart_tensors(x)

    def grad(fn):
        d = np.empty(16)
        for i in range(16):
            e = np.zeros(16)
            e[i] = fd_step
            d[i] = (fn(x + e) - fn(x - e)) / (2 * fd_step)
        return d

    return float(grad(f) @ p @ grad(g))


# ---------------------------------------------------------------------------
# reference closed forms (cross-check targets, components keyed by coordinate)


def reference_hamiltonian_fields(x: np.ndarray) -> dict[str, dict[str, float]]:
    """Hand-derived closed forms of five Poisson coordinate fields.

    Retained purely as regression targets for the chain-rule computation;
    see :func:`discrepancy_report` for the components known to disagree.
    """
    m1, m2, m3 = x[1:4]
    n1, n2, n3 = x[4:7]
    r11, r12, r13, r21, r22, r23, r31, r32, r33 = x[7:]
    out: dict[str, dict[str, float]] = {}
    out["m1"] = {"r23": r33, "r33": -r23, "r22": r32, "r32": -r22,
                 "r31": r21, "r21": -r31, "m3": -m2, "m2": m3}
    out["n1"] = {"r33": -r32, "r32": r33, "r23": -r22, "r22": r23,
                 "r13": -r12, "r12": r13, "n3": -n2, "n2": n3}
    out["r11"] = {
        "n3": r12,
        "r13": -((-1 + m1 ** 2) * n2 + 2 * m1 * r12),
        "n2": -r13,
        "r12": ((-1 + m1 ** 2) * n3 + 2 * m1 * r13),
        "m3": r21,
        "r31": -(m2 * (-1 + n1 ** 2) + 2 * n1 * r21),
        "m2": -r31,
        "r21": (m3 * (-1 + n1 ** 2) + 2 * n1 * r31),
        "r22": (m2 * r13 + m1 * (m2 * n3 + r23) + n2 * (m3 * n1 + r31) + n1 * r32),
        "r33": -(m3 * r12 + n3 * (m2 * n1 + r21) + n1 * r23 + m1 * (m3 * n2 + r32)),
        "r23": (-m2 * r12 - m1 * (m2 * n2 + r22) + n3 * (m3 * n1 + r31) + n1 * r33),
        "r32": (m3 * r13 - n2 * (m2 * n1 + r21) - n1 * r22 + m1 * (m3 * n3 + r33)),
    }
    out["r12"] = {
        "n3": r11,
        "r13": -((-1 + m1 ** 2) * n1 + 2 * m1 * r11),
        "n1": -r13,
        "r11": ((-1 + m1 ** 2) * n3 + 2 * m1 * r13),
        "m3": -r22,
        "r32": (m2 * (-1 + n2 ** 2) + 2 * n2 * r22),
        "r33": (-m3 * r11 + n3 * (m2 * n2 + r22) + n2 * r23 - m1 * (m3 * n1 + r31)),
        "m2": r32,
        "r21": (m2 * r13 + m1 * (m2 * n3 + r23) - n2 * (m3 * n1 + r31) - n1 * r32),
        "r22": -(m3 * (-1 + n2 ** 2) + 2 * n2 * r32),
        "r23": -(m2 * r11 + m1 * (m2 * n1 + r21) + n3 * (m3 * n2 + r32) + n2 * r33),
        "r31": (m3 * r13 + n2 * (m2 * n1 + r21) + n1 * r22 + m1 * (m3 * n3 + r33)),
    }
    out["r21"] = {
        "m3": r11,
        "r31": -(m1 * (-1 + n1 ** 2) + 2 * n1 * r11),
        "n3": -r22,
        "r23": ((-1 + m2 ** 2) * n2 + 2 * m2 * r22),
        "n2": r23,
        "r22": -((-1 + m2 ** 2) * n3 + 2 * m2 * r23),
        "m1": -r31,
        "r11": (m3 * (-1 + n1 ** 2) + 2 * n1 * r31),
        "r12": (-m2 * r13 - m1 * (m2 * n3 + r23) + n2 * (m3 * n1 + r31) + n1 * r32),
        "r33": (-n3 * (m1 * n1 + r11) - n1 * r13 + m3 * r22 + m2 * (m3 * n2 + r32)),
        "r13": (m2 * r12 + m1 * (m2 * n2 + r22) + n3 * (m3 * n1 + r31) + n1 * r33),
        "r32": -(n2 * (m1 * n1 + r11) + n1 * r12 + m3 * r23 + m2 * (m3 * n3 + r33)),
    }
    return out


def reference_riemann_fields(x: np.ndarray) -> dict[str, dict[str, float]]:
    """Hand-derived closed forms of five symmetric-tensor coordinate fields."""
    y0 = x[0]
    m1, m2, m3 = x[1:4]
    n1, n2, n3 = x[4:7]
    r11, r12, r13, r21, r22, r23, r31, r32, r33 = x[7:]
    out: dict[str, dict[str, float]] = {}
    euler = {"y0": y0, "m1": m1, "m2": m2, "m3": m3, "n1": n1, "n2": n2, "n3": n3}
    mv = (m1, m2, m3)
    nv = (n1, n2, n3)
    rv = ((r11, r12, r13), (r21, r22, r23), (r31, r32, r33))
    for k in range(3):
        for j in range(3):
            euler[f"r{k + 1}{j + 1}"] = rv[k][j] - nv[j] * mv[k]
    out["y0"] = euler
    out["m1"] = {
        "m1": y0,
        "n1": m1 * n1 + r11, "n2": m1 * n2 + r12, "n3": m1 * n3 + r13,
        "r11": -(m1 * r11 + n1 * (m1 ** 2 + y0 - 1)),
        "r12": -(m1 * r12 + n2 * (m1 ** 2 + y0 - 1)),
        "r13": -(m1 * r13 + n3 * (m1 ** 2 + y0 - 1)),
        "r21": -m2 * (m1 * n1 + r11), "r22": -m2 * (m1 * n2 + r12),
        "r23": -m2 * (m1 * n3 + r13),
        "r31": -m3 * (m1 * n1 + r11), "r32": -m3 * (m1 * n2 + r12),
        "r33": -m3 * (m1 * n3 + r13),
        "y0": m1,
    }
    out["n1"] = {
        "m1": m1 * n1 + r11, "m2": m2 * n1 + r21, "m3": m3 * n1 + r31,
        "n1": y0,
        "r11": -(n1 * r11 + m1 * (n1 ** 2 + y0 - 1)),
        "r12": -n2 * (m1 * n1 + r11), "r13": -n3 * (m1 * n1 + r11),
        "r21": -(n1 * r21 + m2 * (n1 ** 2 + y0 - 1)),
        "r22": -n2 * (m2 * n1 + r21), "r23": -n3 * (m2 * n1 + r21),
        "r31": -(n1 * r31 + m3 * (n1 ** 2 + y0 - 1)),
        "r32": -n2 * (m3 * n1 + r31), "r33": -n3 * (m3 * n1 + r31),
        "y0": n1,
    }
    out["r11"] = {
        "m1": m1 * r11 + n1 * (m1 ** 2 + y0 - 1),
        "m2": m1 * (m2 * n1 + r21),
        "m3": m1 * (m3 * n1 + r31),
        "n1": n1 * r11 + m1 * (n1 ** 2 + y0 - 1),
        "n2": n1 * (m1 * n2 + r12),
        "n3": n1 * (m1 * n3 + r13),
        "r11": -((2 * n1 ** 2 + y0 - 2) * m1 ** 2 + 2 * n1 * r11 * m1
                 + n1 ** 2 * (y0 - 2) + y0),
        "r12": -(m1 * n2 * r11 + n1 * (m1 * r12 + n2 * (2 * m1 ** 2 + y0 - 2))),
        "r13": -(m1 * n3 * r11 + n1 * (m1 * r13 + n3 * (2 * m1 ** 2 + y0 - 2))),
        "r21": -(m2 * n1 * r11 + m1 * (n1 * r21 + m2 * (2 * n1 ** 2 + y0 - 2))),
        "r22": (m3 * n3 - m2 * n1 * r12 - m1 * n2 * (2 * m2 * n1 + r21) + r33),
        "r23": -(m3 * n2 + m2 * n1 * r13 + m1 * n3 * (2 * m2 * n1 + r21) + r32),
        "r31": -(m3 * n1 * r11 + m1 * (n1 * r31 + m3 * (2 * n1 ** 2 + y0 - 2))),
        "r32": -(m2 * n3 + m3 * n1 * r12 + r23 + m1 * n2 * (2 * m3 * n1 + r31)),
        "r33": (m2 * n2 - m3 * n1 * r13 + r22 - m1 * n3 * (2 * m3 * n1 + r31)),
        "y0": m1 * n1 - r11,
    }
    out["r12"] = {
        "m1": m1 * r12 + n2 * (m1 ** 2 + y0 - 1),
        "m2": m1 * (m2 * n2 + r22),
        "m3": m1 * (m3 * n2 + r32),
        "n1": n2 * (m1 * n1 + r11),
        "n2": n2 * r12 + m1 * (n2 ** 2 + y0 - 1),
        "n3": n2 * (m1 * n3 + r13),
        "r11": -(m1 * n2 * r11 + n1 * (m1 * r12 + n2 * (2 * m1 ** 2 + y0 - 2))),
        "r12": -((2 * n2 ** 2 + y0 - 2) * m1 ** 2 + 2 * n2 * r12 * m1
                 + n2 ** 2 * (y0 - 2) + y0),
        "r13": -(m1 * n3 * r12 + n2 * (m1 * r13 + n3 * (2 * m1 ** 2 + y0 - 2))),
        "r21": -(m3 * n3 + m2 * n2 * r11 + m1 * n1 * (2 * m2 * n2 + r22) + r33),
        "r22": -(m2 * n2 * r12 + m1 * (n2 * r22 + m2 * (2 * n2 ** 2 + y0 - 2))),
        "r23": (m3 * n1 - m2 * n2 * r13 - m1 * n3 * (2 * m2 * n2 + r22) + r31),
        "r31": (m2 * n3 - m3 * n2 * r11 + r23 - m1 * n1 * (2 * m3 * n2 + r32)),
        "r32": -(m3 * n2 * r12 + m1 * (n2 * r32 + m3 * (2 * n2 ** 2 + y0 - 2))),
        "r33": -(m2 * n1 + m3 * n2 * r13 + r21 + m1 * n3 * (2 * m3 * n2 + r32)),
        "y0": m1 * n2 - r12,
    }
    return out


# ---------------------------------------------------------------------------
# discrepancy reporting and field-algebra diagnostics


def discrepancy_report(
    points: np.ndarray, tol: float = 1e-9
) -> list[dict[str, object]]:
    """Compare derived fields against the reference closed forms per component.

    Returns one record per disagreeing component:
    {field, component, point_id, derived, printed, delta}. An empty list means
    every reference component matched within ``tol`` at every point.
    """
    pts = np.atleast_2d(np.asarray(points, float))
    records: list[dict[str, object]] = []
    for pid, x in enumerate(pts):
        p, r = chart_tensors(x)
        ham_ref = reference_hamiltonian_fields(x)
        riem_ref = reference_riemann_fields(x)
        for kind, tensor, ref in (("ham", p, ham_ref), ("riem", r, riem_ref)):
            for fname, comps in ref.items():
                row = tensor[COORD_INDEX[fname]]
                for cname in COORD_NAMES:
                    derived = float(row[COORD_INDEX[cname]])
                    printed = float(comps.get(cname, 0.0))
                    delta = derived - printed
                    if abs(delta) > tol:
                        records.append({
                            "field": f"{kind}:{fname}",
                            "component": cname,
                            "point_id": pid,
                            "derived": derived,
                            "printed": printed,
                            "delta": delta,
                        })
    return records


def field_algebra_report(
    points: np.ndarray, fd_step: float = 1e-5, rank_tol: float = 1e-8
) -> dict[str, object]:
    """Pointwise span of the 32 coordinate fields and their Lie brackets.

    For each sample point reports the tangent-space rank of the Poisson
    family, the symmetric family, and both together, the rank after adjoining
    all pairwise finite-difference Lie brackets, and the largest antisymmetry
    residual of the bracket table. At a generic point the combined rank fills
    the whole 16-dimensional tangent space (the real dimension count of the
    complexified matrix algebra acting there), while at a central point such
    as r = 0, m = n = 0 the Poisson rank collapses.
    """
    pts = np.atleast_2d(np.asarray(points, float))
    poisson_ranks: list[int] = []
    symmetric_ranks: list[int] = []
    combined_ranks: list[int] = []
    bracket_ranks: list[int] = []
    antisym = 0.0

    def all_fields(x: np.ndarray) -> np.ndarray:
        p, r = chart_tensors(x)
        return np.vstack([p, r])  # 32 x 16

    def rank(rows: np.ndarray, tol: float) -> int:
        scale = max(1.0, float(np.max(np.abs(rows)))) if rows.size else 1.0
        return int(np.linalg.matrix_rank(rows, tol=tol * scale))

    for x in pts:
        fields = all_fields(x)
        # FD Jacobian of every field at once: D[a, i, j] = d fields[a, i] / d x_j
        jacs = np.empty((32, 16, 16))
        for j in range(16):
            e = np.zeros(16)
            e[j] = fd_step
            jacs[:, :, j] = (all_fields(x + e) - all_fields(x - e)) / (2 * fd_step)
        # Lie brackets [X_a, X_b] = DX_b . X_a - DX_a . X_b
        push = np.einsum("bij,aj->abi", jacs, fields)
        brackets = push - push.transpose(1, 0, 2)
        antisym = max(antisym, float(np.max(np.abs(brackets + brackets.transpose(1, 0, 2)))))
        poisson_ranks.append(rank(fields[:16], rank_tol))
        symmetric_ranks.append(rank(fields[16:], rank_tol))
        combined_ranks.append(rank(fields, rank_tol))
        bracket_ranks.append(rank(np.vstack([fields, brackets.reshape(-1, 16)]), 1e-6))
    return {
        "poisson_rank": poisson_ranks,
        "symmetric_rank": symmetric_ranks,
        "combined_rank": combined_ranks,
        "rank_with_brackets": bracket_ranks,
        "bracket_antisymmetry_residual": antisym,
    }


def chain_rule_consistency(points: np.ndarray, fd_step: float = 1e-5) -> float:
    """Worst mismatch between the chart tensors and direct dual-space pairings.

    Two routes are compared at each point: (a) the chain-rule tensors from
    :func:`chart_tensors`, and (b) the Lie-Poisson bracket and Jordan pairing
    of the coordinate functions themselves, evaluated at the rebuilt operator
    with finite-difference gradients. Route (b) never touches the chart
    Jacobian, so agreement exercises the whole inverse-map chain rule. Chart
    normalization is twice the dual-space one on both tables.
    """
    from .liedual import DualFunction

    pts = np.atleast_2d(np.asarray(points, float))
    worst = 0.0
    for x in pts:
        a = from_chart(U4ChartPoint.from_vector(x))
        grads = np.array([
            DualFunction(lambda xi, i=i: float(to_chart(xi).vector()[i]),
                         fd_step=fd_step).gradient(a)
            for i in range(16)
        ])
        # t[i, j] = Tr(A g_i g_j); bracket and Jordan tables follow from it
        t = np.einsum("ab,ibc,jca->ij", a, grads, grads)
        lie = (t - t.T).imag
        jordan = (t + t.T).real
        pc, rc = chart_tensors(x)
        worst = max(worst,
                    float(np.max(np.abs(pc - 2.0 * lie))),
                    float(np.max(np.abs(rc - 2.0 * jordan))))
    return worst
