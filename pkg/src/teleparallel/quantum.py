"""Faithful density matrices with Petz monotone metrics.

States are strictly positive unit-trace Hermitian matrices.  All
superoperators are applied in the eigenbasis of the state: entry ``(j, k)``
of ``U^dagger A U`` is multiplied by ``c[j, k] = p_k f(p_j / p_k)``.

The chart uses an orthonormal traceless Hermitian basis with
``Tr(sigma_j sigma_k) = delta_jk`` (generalised Gell-Mann matrices divided by
sqrt 2), so ``x_k = Tr(rho sigma_k)`` and ``rho = I/n + sum_k x_k sigma_k``.
Multiply coordinates by ``sqrt 2`` to get Bloch-vector (Pauli) components.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import ManifoldChart
from .errors import DomainError, NotUnitary, SpecError
from .monotone import MonotoneFunction, petz_f_eval

__all__ = [
    "HermitianBasis",
    "gell_mann_basis",
    "DensityState",
    "random_state",
    "random_tangent",
    "random_unitary",
    "check_tangent",
    "hermitian_function",
    "multipliers",
    "apply_K",
    "apply_Tf",
    "metric_gf",
    "gradient_field",
    "bkm_geodesic",
    "deformed_geodesic",
    "unitary_action",
    "QuantumChart",
    "quantum_chart",
    "pack_complex",
    "unpack_complex",
    "to_nested",
    "from_nested",
]

STATE_FLOOR = 1e-10
VALID_MARGIN = 1e-9
SAMPLE_FLOOR = 1e-2


def _herm(a):
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def _dag(a):
    return np.conj(np.swapaxes(a, -1, -2))


# ---------------------------------------------------------------------------
# basis


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """Traceless Hermitian matrices ``sigma[k]`` (shape ``(n^2 - 1, n, n)``),
    orthonormal for the Hilbert-Schmidt product."""

    dim: int
    sigma: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=complex)
        n = int(self.dim)
        object.__setattr__(self, "sigma", s)
        if s.shape != (n * n - 1, n, n):
            raise SpecError(f"expected {n * n - 1} matrices of size {n}x{n}, got {s.shape}")
        if np.max(np.abs(s - _dag(s))) > 1e-12:
            raise SpecError("basis matrices must be Hermitian")
        if np.max(np.abs(np.trace(s, axis1=1, axis2=2))) > 1e-12:
            raise SpecError("basis matrices must be traceless")
        gram = np.einsum("aij,bji->ab", s, s)
        if np.max(np.abs(gram - np.eye(n * n - 1))) > 1e-12:
            raise SpecError("basis is not orthonormal: Tr(s_j s_k) != delta_jk")

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def coords(self, a) -> np.ndarray:
        """``x_k = Re Tr(a sigma_k)``."""
        return np.einsum("ij,kji->k", np.asarray(a), self.sigma).real

    def matrix(self, x) -> np.ndarray:
        """``I/n + sum_k x_k sigma_k``."""
        return self.identity / self.dim + np.einsum("k,kij->ij", np.asarray(x, dtype=float), self.sigma)

    def tangent(self, v) -> np.ndarray:
        """``sum_k v_k sigma_k``."""
        return np.einsum("k,kij->ij", np.asarray(v, dtype=float), self.sigma)


def gell_mann_basis(n: int) -> HermitianBasis:
    """Generalised Gell-Mann matrices scaled to unit Hilbert-Schmidt norm.

    Order: symmetric off-diagonal, antisymmetric off-diagonal, diagonal.  For
    ``n = 2`` this is ``(X, Y, Z) / sqrt 2``.
    """
    if n < 2:
        raise SpecError("Hilbert space dimension must be at least 2")
    sym, anti, diag = [], [], []
    r2 = np.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1.0 / r2
            sym.append(s)
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j / r2
            a[k, j] = 1j / r2
            anti.append(a)
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -float(l)
        diag.append(np.diag(d / np.sqrt(l * (l + 1))).astype(complex))
    return HermitianBasis(n, np.array(sym + anti + diag))


# ---------------------------------------------------------------------------
# states


class DensityState:
    """Faithful density matrix with its spectral decomposition cached.

    ``p`` holds the (ascending) eigenvalues, ``vecs`` the eigenvectors as
    columns, ``rho = vecs @ diag(p) @ vecs^dagger``.
    """

    __slots__ = ("rho", "p", "vecs")

    def __init__(self, rho, check: bool = True):
        rho = np.array(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DomainError(f"density matrix must be square, got {rho.shape}")
        if check:
            if np.max(np.abs(rho - _dag(rho))) > 1e-12:
                raise DomainError("density matrix is not Hermitian")
            if abs(np.trace(rho) - 1.0) > 1e-12:
                raise DomainError(f"density matrix has trace {np.trace(rho).real!r}")
        rho = _herm(rho)
        p, vecs = np.linalg.eigh(rho)
        if not p[0] > STATE_FLOOR:
            raise DomainError(f"state is not faithful: min eigenvalue {p[0]:.3g}")
        if check:
            rebuilt = (vecs * p) @ _dag(vecs)
            if np.max(np.abs(rebuilt - rho)) > 1e-10:
                raise DomainError("spectral decomposition does not reconstruct the state")
        for arr in (rho, p, vecs):
            arr.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "vecs", vecs)

    def __setattr__(self, name, value):
        raise AttributeError("DensityState is immutable")

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def function(self, fn) -> np.ndarray:
        """``fn(rho)`` through the cached spectrum."""
        return _herm((self.vecs * fn(self.p)) @ _dag(self.vecs))

    def __repr__(self):
        return f"DensityState(spectrum={np.array2string(self.p, precision=6)})"


def random_state(n: int, rng: np.random.Generator, floor: float = STATE_FLOOR) -> DensityState:
    """``A A^dagger / Tr(A A^dagger)`` for complex Gaussian ``A``, rejected below ``floor``."""
    while True:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rho = a @ _dag(a)
        rho = _herm(rho / np.trace(rho).real)
        if np.linalg.eigvalsh(rho)[0] > floor:
            return DensityState(rho, check=False)


def random_tangent(n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = _herm(a)
    return h - np.trace(h).real / n * np.eye(n)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def check_tangent(v, tol: float = 1e-12) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(v))) if v.size else 1.0)
    if np.max(np.abs(v - _dag(v))) > tol * scale:
        raise DomainError("tangent matrix is not Hermitian")
    if abs(np.trace(v)) > tol * scale:
        raise DomainError(f"tangent matrix has trace {np.trace(v)!r}")
    return v


def hermitian_function(a, fn) -> np.ndarray:
    """``fn(a)`` for Hermitian ``a`` via its eigendecomposition."""
    w, u = np.linalg.eigh(_herm(np.asarray(a, dtype=complex)))
    return _herm((u * fn(w)) @ _dag(u))


# ---------------------------------------------------------------------------
# superoperators and metric


def multipliers(state: DensityState, f: MonotoneFunction) -> np.ndarray:
    """``c[j, k] = p_k f(p_j / p_k)`` in the eigenbasis of ``state``."""
    p = state.p
    return p[None, :] * petz_f_eval(f, p[:, None] / p[None, :])


def _in_eigenbasis(state, a, scale):
    u = state.vecs
    return u @ (scale * (_dag(u) @ np.asarray(a, dtype=complex) @ u)) @ _dag(u)


def apply_K(state: DensityState, f: MonotoneFunction, a) -> np.ndarray:
    """``f(L_rho R_rho^{-1}) R_rho`` applied to ``a`` (accepts stacks of matrices)."""
    return _in_eigenbasis(state, a, multipliers(state, f))


def apply_Tf(state: DensityState, f: MonotoneFunction, a) -> np.ndarray:
    """Inverse of :func:`apply_K`."""
    return _in_eigenbasis(state, a, 1.0 / multipliers(state, f))


def metric_gf(state: DensityState, f: MonotoneFunction, v, w) -> float:
    """``Tr(V T_rho(W))``."""
    return float(np.trace(np.asarray(v) @ apply_Tf(state, f, w)).real)


def gradient_field(state: DensityState, f: MonotoneFunction, omega) -> np.ndarray:
    """Metric gradient of ``rho -> Tr(rho omega)``: ``K(omega) - Tr(K(omega)) rho``."""
    k = apply_K(state, f, omega)
    tr = np.trace(k, axis1=-2, axis2=-1).real
    return _herm(k - np.multiply.outer(tr, state.rho) if np.ndim(tr) else k - tr * state.rho)


# ---------------------------------------------------------------------------
# closed-form curves and symmetries


def bkm_geodesic(state: DensityState, v, t: float) -> DensityState:
    """``exp(ln rho + t v)`` normalised to unit trace."""
    h = state.function(np.log) + t * np.asarray(v, dtype=complex)
    w, u = np.linalg.eigh(_herm(h))
    e = np.exp(w - w.max())
    return DensityState(_herm((u * (e / e.sum())) @ _dag(u)), check=False)


def deformed_geodesic(state: DensityState, v, t: float, kappa: float) -> DensityState:
    """``(e^{tv} rho^a e^{tv})^{1/a}`` normalised, with ``a = sqrt(kappa)``.

    This is a geodesic of the teleparallel connection of the gradient frame
    for ``MonotoneFunction.deformed(sqrt(kappa))``; ``kappa = 1`` is Bures and
    ``kappa = 1/4`` is Wigner-Yanase.
    """
    if not 0.0 < kappa <= 1.0:
        raise DomainError(f"kappa must lie in (0, 1], got {kappa!r}")
    a = np.sqrt(kappa)
    e = hermitian_function(t * np.asarray(v, dtype=complex), np.exp)
    m = e @ state.function(lambda p: p**a) @ e
    w, u = np.linalg.eigh(_herm(m))
    w = np.clip(w / w.max(), 0.0, None) ** (1.0 / a)
    return DensityState(_herm((u * (w / w.sum())) @ _dag(u)), check=False)


def unitary_action(u, state: DensityState) -> DensityState:
    u = np.asarray(u, dtype=complex)
    if u.shape != state.rho.shape or np.max(np.abs(_dag(u) @ u - np.eye(u.shape[0]))) > 1e-10:
        raise NotUnitary("matrix is not unitary")
    return DensityState(_herm(u @ state.rho @ _dag(u)), check=False)


# ---------------------------------------------------------------------------
# chart


class QuantumChart(ManifoldChart):
    """Coordinates ``x_k = Tr(rho sigma_k)`` on faithful states.

    The frame is the constant (mixture) frame ``sigma_k``; the coframe is
    ``d Tr(rho omega_k)`` with ``omega`` defaulting to ``sigma``.
    """

    def __init__(
        self,
        basis: HermitianBasis,
        f: MonotoneFunction,
        omega: Optional[np.ndarray] = None,
        margin: float = VALID_MARGIN,
        sample_floor: float = SAMPLE_FLOOR,
    ):
        self.basis = basis
        self.f = f
        self.n = basis.dim
        self.dim = self.n * self.n - 1
        self.margin = float(margin)
        self.sample_floor = float(sample_floor)
        sig = basis.sigma
        om = sig if omega is None else np.asarray(omega, dtype=complex)
        if om.shape != sig.shape:
            raise SpecError(f"omega must have shape {sig.shape}, got {om.shape}")
        if np.max(np.abs(om - _dag(om))) > 1e-12 or np.max(np.abs(np.trace(om, axis1=1, axis2=2))) > 1e-12:
            raise SpecError("omega matrices must be traceless Hermitian")
        self.omega = om
        self._coframe = np.einsum("iab,kba->ki", sig, om).real
        if np.linalg.cond(self._coframe) > 1e12:
            raise SpecError("omega matrices are linearly dependent")

    def state(self, x, check=False) -> DensityState:
        return DensityState(self.basis.matrix(x), check=check)

    def coords(self, state) -> np.ndarray:
        rho = state.rho if isinstance(state, DensityState) else state
        return self.basis.coords(rho)

    def is_valid(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,) or not np.all(np.isfinite(x)):
            return False
        return bool(np.linalg.eigvalsh(self.basis.matrix(x))[0] > self.margin)

    def length_scale(self, x) -> float:
        # ||sum u_k sigma_k||_op <= |u|, so the smallest eigenvalue bounds the distance
        return float(np.linalg.eigvalsh(self.basis.matrix(x))[0])

    def sample(self, rng) -> np.ndarray:
        floor = max(self.sample_floor, self.margin)
        return self.coords(random_state(self.n, rng, floor))

    def metric_at(self, x) -> np.ndarray:
        st = self.state(x)
        sig = self.basis.sigma
        t = apply_Tf(st, self.f, sig)
        g = np.einsum("iab,jba->ij", sig, t).real
        return 0.5 * (g + g.T)

    def frame_at(self, x) -> np.ndarray:
        return np.eye(self.dim)

    def coframe_at(self, x) -> np.ndarray:
        return self._coframe.copy()

    def explicit_dual_frame_at(self, x) -> np.ndarray:
        """Chart components of the gradient fields ``Y_k`` (columns)."""
        st = self.state(x)
        y = gradient_field(st, self.f, self.omega)
        return np.einsum("kab,iba->ik", y, self.basis.sigma).real


def quantum_chart(basis, f: MonotoneFunction, omega=None, **kwargs) -> QuantumChart:
    """``basis`` may be a :class:`HermitianBasis` or a Hilbert space dimension."""
    if not isinstance(basis, HermitianBasis):
        basis = gell_mann_basis(int(basis))
    return QuantumChart(basis, f, omega, **kwargs)


# ---------------------------------------------------------------------------
# interchange


def pack_complex(a) -> np.ndarray:
    """Row-major buffer with interleaved real and imaginary parts."""
    a = np.ascontiguousarray(a, dtype=complex)
    return a.view(np.float64).ravel().copy()


def unpack_complex(buf, shape) -> np.ndarray:
    buf = np.ascontiguousarray(buf, dtype=np.float64)
    return buf.view(complex).reshape(shape).copy()


def to_nested(a) -> list:
    """Nested lists with ``[re, im]`` pairs as leaves (JSON friendly)."""
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def from_nested(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.shape[-1] != 2:
        raise DomainError("expected [re, im] pairs as innermost entries")
    return arr[..., 0] + 1j * arr[..., 1]
