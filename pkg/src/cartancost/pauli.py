"""Pauli-string operator algebra for su(2**n), n <= 4.

Pauli strings are plain letter strings over ``IXYZ`` ("XZ" means X on qubit 0
and Z on qubit 1).  Hermitian operators are real combinations of non-identity
strings (class :class:`Hamiltonian`); the trace inner product on that space
is ``tr(AB) = 2**n * sum_P a_P b_P`` because distinct strings are trace
orthogonal and every string squares to the identity.

The module also owns Cartan splits: a pair of subspaces (l, p) closing under
commutators as ``[l,l] in l``, ``[p,l] in p``, ``[p,p] in l``, together with
a maximal commuting subspace z of p and the basis change that makes exp(i*l)
real orthogonal and z diagonal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import PreconditionError

__all__ = [
    "pauli_product",
    "pauli_weight",
    "pauli_matrix",
    "pauli_strings",
    "dense_basis",
    "Hamiltonian",
    "trace_inner_product",
    "i_commutator",
    "random_hamiltonian",
    "support_residual",
    "CartanSplit",
    "project",
    "SplitReport",
    "verify_cartan_split",
    "builtin_split",
    "verify_maximal_abelian",
    "AdaptedBasisReport",
    "adapted_basis_properties",
    "MAGIC_BASIS",
]

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# sigma_a sigma_b = phase * sigma_c for the non-trivial combinations
_PRODUCT = {
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}

#: Frame in which SU(2) x SU(2) acts as SO(4) and XX, YY, ZZ are diagonal.
MAGIC_BASIS = np.array(
    [
        [1, -1j, 0, 0],
        [0, 0, 1, -1j],
        [0, 0, -1, -1j],
        [1, 1j, 0, 0],
    ],
    dtype=complex,
) / np.sqrt(2)


def pauli_product(p: str, q: str) -> tuple[complex, str]:
    """Product of two Pauli strings: matrix(p) @ matrix(q) = phase * matrix(r)."""
    if len(p) != len(q):
        raise PreconditionError("strings act on different qubit counts")
    phase = 1 + 0j
    out = []
    for a, b in zip(p, q):
        if a == "I":
            out.append(b)
        elif b == "I" or a == b:
            out.append("I" if a == b else a)
        else:
            ph, c = _PRODUCT[(a, b)]
            phase *= ph
            out.append(c)
    return phase, "".join(out)


def pauli_weight(s: str) -> int:
    return sum(1 for c in s if c != "I")


@lru_cache(maxsize=None)
def pauli_matrix(s: str) -> np.ndarray:
    m = _SINGLE[s[0]]
    for c in s[1:]:
        m = np.kron(m, _SINGLE[c])
    m.setflags(write=False)
    return m


@lru_cache(maxsize=8)
def pauli_strings(n: int) -> tuple[str, ...]:
    """All 4**n - 1 non-identity strings on n qubits, in product order."""
    if not 1 <= n <= 4:
        raise PreconditionError("supported qubit counts are 1..4")
    idn = "I" * n
    return tuple(
        "".join(t) for t in itertools.product("IXYZ", repeat=n) if "".join(t) != idn
    )


@lru_cache(maxsize=8)
def dense_basis(n: int) -> tuple[tuple[str, ...], np.ndarray]:
    """Stacked dense matrices of all non-identity strings, for vectorized use."""
    strings = pauli_strings(n)
    stack = np.stack([pauli_matrix(s) for s in strings])
    stack.setflags(write=False)
    return strings, stack


class Hamiltonian:
    """A Hermitian operator as a real coefficient map over Pauli strings.

    Treated as an immutable value; arithmetic returns new instances.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict[str, float] | None = None):
        self.n = n
        self.coeffs = dict(coeffs) if coeffs else {}
        idn = "I" * n
        if idn in self.coeffs:
            raise PreconditionError("the identity string is not part of su(2**n)")

    def __repr__(self):
        terms = ", ".join(f"{s}: {c:+.4g}" for s, c in sorted(self.coeffs.items()))
        return f"Hamiltonian(n={self.n}, {{{terms}}})"

    def __add__(self, other: "Hamiltonian") -> "Hamiltonian":
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, 0.0) + c
        return Hamiltonian(self.n, out)

    def __sub__(self, other: "Hamiltonian") -> "Hamiltonian":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "Hamiltonian":
        return Hamiltonian(self.n, {s: c * scalar for s, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "Hamiltonian":
        return self * -1.0

    def norm(self) -> float:
        """Trace norm sqrt(tr(H^2)) with unnormalized strings (tr P^2 = 2**n)."""
        return float(np.sqrt(2**self.n * sum(c * c for c in self.coeffs.values())))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.coeffs.values())

    def restrict(self, strings) -> "Hamiltonian":
        keep = set(strings)
        return Hamiltonian(self.n, {s: c for s, c in self.coeffs.items() if s in keep})

    def to_vector(self, strings) -> np.ndarray:
        return np.array([self.coeffs.get(s, 0.0) for s in strings])

    def to_matrix(self) -> np.ndarray:
        m = np.zeros((2**self.n, 2**self.n), dtype=complex)
        for s, c in self.coeffs.items():
            if c != 0.0:
                m += c * pauli_matrix(s)
        return m

    @classmethod
    def from_vector(cls, n: int, strings, values) -> "Hamiltonian":
        return cls(n, {s: float(v) for s, v in zip(strings, values) if v != 0.0})

    @classmethod
    def from_matrix(cls, m: np.ndarray, imag_tol: float = 1e-9) -> "Hamiltonian":
        """Coefficient expansion of a Hermitian traceless matrix.

        Raises if the anti-Hermitian or identity leakage exceeds ``imag_tol``
        relative to the matrix norm.
        """
        m = np.asarray(m, dtype=complex)
        dim = m.shape[0]
        n = int(round(np.log2(dim)))
        if 2**n != dim:
            raise PreconditionError(f"dimension {dim} is not a power of two")
        strings, stack = dense_basis(n)
        raw = np.einsum("kij,ji->k", stack, m) / dim
        scale = max(np.linalg.norm(m), 1.0)
        leak = np.linalg.norm(raw.imag) + abs(np.trace(m)) / dim
        if leak > imag_tol * scale:
            raise PreconditionError(
                f"matrix is not Hermitian-traceless within tolerance (leak {leak:.2e})"
            )
        return cls.from_vector(n, strings, raw.real)


def trace_inner_product(a: Hamiltonian, b: Hamiltonian) -> float:
    """tr(AB) computed in coefficient space."""
    if a.n != b.n:
        raise PreconditionError("operands act on different qubit counts")
    small, large = (a.coeffs, b.coeffs) if len(a.coeffs) <= len(b.coeffs) else (b.coeffs, a.coeffs)
    acc = sum(c * large.get(s, 0.0) for s, c in small.items())
    return float(2**a.n * acc)


def i_commutator(a: Hamiltonian, b: Hamiltonian) -> Hamiltonian:
    """i[A, B]; Hermitian again, with real string coefficients."""
    out: dict[str, float] = {}
    for s, ca in a.coeffs.items():
        for t, cb in b.coeffs.items():
            ph, r = pauli_product(s, t)
            ph_back, _ = pauli_product(t, s)
            diff = 1j * (ph - ph_back)  # in {0, +-2}
            if diff != 0:
                out[r] = out.get(r, 0.0) + ca * cb * diff.real
    return Hamiltonian(a.n, {s: c for s, c in out.items() if c != 0.0})


def random_hamiltonian(n: int, strings, rng, norm: float | None = None) -> Hamiltonian:
    """Random element of the span of ``strings`` with N(0,1) coefficients,
    optionally rescaled to a given trace norm."""
    strings = tuple(strings)
    values = rng.standard_normal(len(strings))
    h = Hamiltonian.from_vector(n, strings, values)
    if norm is not None and h.norm() > 0:
        h = h * (norm / h.norm())
    return h


def support_residual(h: Hamiltonian, strings) -> float:
    """Trace norm of the component of ``h`` outside the span of ``strings``."""
    keep = set(strings)
    outside = {s: c for s, c in h.coeffs.items() if s not in keep}
    return Hamiltonian(h.n, outside).norm()


# -- Cartan splits -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CartanSplit:
    """An orthogonal split of su(2**n) with commutator closure, plus the
    maximal commuting subspace ``z_basis`` of p and the adapted frame ``q``
    (conjugation by which diagonalizes z and realifies exp(i*l))."""

    n: int
    l_basis: tuple[str, ...]
    p_basis: tuple[str, ...]
    z_basis: tuple[str, ...]
    q: np.ndarray = field(repr=False)

    @property
    def kind(self) -> str:
        return getattr(self, "_kind", "custom")


def _with_kind(split: CartanSplit, kind: str) -> CartanSplit:
    object.__setattr__(split, "_kind", kind)
    return split


def project(h: Hamiltonian, split: CartanSplit, which: str) -> Hamiltonian:
    """Coefficient-wise restriction of ``h`` to the l or p basis list."""
    if which not in ("l", "p"):
        raise PreconditionError("which must be 'l' or 'p'")
    return h.restrict(split.l_basis if which == "l" else split.p_basis)


def _strings_commute(s: str, t: str) -> bool:
    return pauli_product(s, t)[0] == pauli_product(t, s)[0]


@dataclass
class SplitReport:
    """Outcome of the commutator-closure checks on a split.

    ``pl_spans`` records whether the commutators [p, l] span all of p (the
    strict form of the middle relation); containment alone decides ``pl_ok``.
    """

    ll_ok: bool
    pl_ok: bool
    pp_ok: bool
    orthogonal_ok: bool
    pl_spans: bool
    violations: list[tuple[str, str, str, str]]

    @property
    def all_ok(self) -> bool:
        return self.ll_ok and self.pl_ok and self.pp_ok and self.orthogonal_ok


def verify_cartan_split(split: CartanSplit, tol: float = 1e-12) -> SplitReport:
    """Check [l,l] in l, [p,l] in p, [p,p] in l on every basis pair.

    Commutators of Pauli strings are single strings, so the containment
    checks are exact; ``tol`` is accepted for interface symmetry with dense
    verification but plays no role on string bases.
    """
    del tol
    lset, pset = set(split.l_basis), set(split.p_basis)
    violations = []

    def check(pairs, target, label):
        ok = True
        for s, t in pairs:
            if _strings_commute(s, t):
                continue
            _, r = pauli_product(s, t)
            if r not in target:
                ok = False
                violations.append((label, s, t, r))
        return ok

    ll_ok = check(itertools.combinations(split.l_basis, 2), lset, "[l,l]")
    pl_ok = check(itertools.product(split.p_basis, split.l_basis), pset, "[p,l]")
    pp_ok = check(itertools.combinations(split.p_basis, 2), lset, "[p,p]")

    spanned = {
        pauli_product(s, t)[1]
        for s, t in itertools.product(split.p_basis, split.l_basis)
        if not _strings_commute(s, t)
    }
    pl_spans = pset <= spanned

    full = set(pauli_strings(split.n))
    orthogonal_ok = (
        not (lset & pset)
        and len(lset) == len(split.l_basis)
        and len(pset) == len(split.p_basis)
        and lset | pset == full
        and set(split.z_basis) <= pset
    )
    return SplitReport(ll_ok, pl_ok, pp_ok, orthogonal_ok, pl_spans, violations)


def builtin_split(n: int, kind: str) -> CartanSplit:
    """The built-in splits.

    ``single_x``  n=1, l = span(X): magnetic fields along x are free.
    ``two_local`` n=2, l = all one-qubit strings: local operations are free.
    ``ai``        1<=n<=4, l = strings with an odd number of Y letters, the
                  orthogonal so(2**n) split; z is the diagonal {I,Z} span and
                  the adapted frame is the computational basis itself.
    """
    if kind == "single_x":
        if n != 1:
            raise PreconditionError("single_x requires n=1")
        q = np.diag([np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4)])
        split = CartanSplit(1, ("X",), ("Y", "Z"), ("Z",), q)
    elif kind == "two_local":
        if n != 2:
            raise PreconditionError("two_local requires n=2")
        strings = pauli_strings(2)
        l = tuple(s for s in strings if pauli_weight(s) == 1)
        p = tuple(s for s in strings if pauli_weight(s) == 2)
        split = CartanSplit(2, l, p, ("XX", "YY", "ZZ"), MAGIC_BASIS.copy())
    elif kind == "ai":
        if not 1 <= n <= 4:
            raise PreconditionError("ai split supports 1 <= n <= 4")
        strings = pauli_strings(n)
        l = tuple(s for s in strings if s.count("Y") % 2 == 1)
        p = tuple(s for s in strings if s.count("Y") % 2 == 0)
        z = tuple(s for s in strings if set(s) <= {"I", "Z"})
        split = CartanSplit(n, l, p, z, np.eye(2**n, dtype=complex))
    else:
        raise PreconditionError(f"unknown split kind {kind!r}")
    return _with_kind(split, kind)


def verify_maximal_abelian(split: CartanSplit) -> bool:
    """True iff z is commuting and nothing in p outside span(z) commutes
    with all of z (kernel of the joint commutator map has dimension |z|)."""
    for s, t in itertools.combinations(split.z_basis, 2):
        if not _strings_commute(s, t):
            return False
    strings = pauli_strings(split.n)
    index = {s: k for k, s in enumerate(strings)}
    rows = []
    for z in split.z_basis:
        block = np.zeros((len(strings), len(split.p_basis)))
        for col, s in enumerate(split.p_basis):
            com = i_commutator(
                Hamiltonian(split.n, {s: 1.0}), Hamiltonian(split.n, {z: 1.0})
            )
            for r, c in com.coeffs.items():
                block[index[r], col] = c
        rows.append(block)
    joint = np.vstack(rows)
    kernel_dim = len(split.p_basis) - np.linalg.matrix_rank(joint, tol=1e-10)
    return kernel_dim == len(split.z_basis)


@dataclass
class AdaptedBasisReport:
    """Residuals of the adapted-frame properties on random samples."""

    realness: float       # max || Im(q^+ exp(iK) q) || over K in l
    orthogonality: float  # max || R^T R - I || for the realified images
    diagonality: float    # max off-diagonal norm of q^+ Z q over Z in z
    ok: bool


def adapted_basis_properties(
    split: CartanSplit, samples: int = 20, seed: int = 0
) -> AdaptedBasisReport:
    """Numerically verify the adapted frame: conjugation sends exp(i*l) to
    real orthogonal matrices and z elements to diagonal matrices."""
    from .linalg import expm  # local import to avoid a cycle

    rng = np.random.default_rng(seed)
    q = split.q
    realness = orthogonality = diagonality = 0.0
    dim = 2**split.n
    for _ in range(samples):
        k = random_hamiltonian(split.n, split.l_basis, rng, norm=rng.uniform(0.2, 2.0))
        img = q.conj().T @ expm(1j * k.to_matrix()) @ q
        realness = max(realness, float(np.linalg.norm(img.imag)))
        r = img.real
        orthogonality = max(
            orthogonality, float(np.linalg.norm(r.T @ r - np.eye(dim)))
        )
        z = random_hamiltonian(split.n, split.z_basis, rng, norm=rng.uniform(0.2, 2.0))
        img_z = q.conj().T @ z.to_matrix() @ q
        off = img_z - np.diag(np.diagonal(img_z))
        diagonality = max(diagonality, float(np.linalg.norm(off)))
    ok = realness <= 1e-8 and orthogonality <= 1e-8 and diagonality <= 1e-10
    return AdaptedBasisReport(realness, orthogonality, diagonality, ok)
