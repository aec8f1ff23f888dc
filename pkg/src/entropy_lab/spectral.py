"""Dense Hermitian linear algebra.

Every matrix function in the package goes through one spectral decomposition and acts
on eigenvalues only, so the basis chosen inside a degenerate eigenspace never changes a
result.
"""

import dataclasses as D
from typing import Callable, Iterable

import numpy as np
import scipy.linalg as SL

from entropy_lab.config import LabConfig
from entropy_lab.errors import DomainError, InvalidInputError

DEFAULT_CONFIG = LabConfig()

# Irrational weights used to split joint eigenspaces of commuting pairs.
JOINT_WEIGHTS = ((np.sqrt(5.0) - 1.0) / 2.0, np.sqrt(2.0) - 1.0, np.pi - 3.0)


def frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_square(entries: Iterable | np.ndarray, what: str = "matrix") -> np.ndarray:
    a = np.array(entries, dtype=np.complex128)

    match a.shape:
        case (n, m) if n == m and n >= 1:
            pass
        case shape:
            raise InvalidInputError(f"Expected a nonempty square {what}, got {shape}.")

    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"The {what} has non-finite entries.")

    return a


def hermitian(
    entries: Iterable | np.ndarray,
    what: str = "matrix",
    atol: float = DEFAULT_CONFIG.hermitian_atol,
) -> np.ndarray:
    """Validates and returns a read-only Hermitian matrix.

    The check is `max|A - A*| <= atol * max(1, max|A|)`: `atol` is an absolute
    tolerance for entries up to unit size and a relative one above it, so rescaling a
    large matrix does not change the verdict.
    """
    a = as_square(entries, what)
    defect = float(np.max(np.abs(a - a.conj().T)))

    if defect > atol * max(1.0, float(np.max(np.abs(a)))):
        raise InvalidInputError(f"The {what} is not Hermitian: max |A - A*| = {defect:.3e}.")

    return frozen((a + a.conj().T) / 2)


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a @ b - b @ a))


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


@D.dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Returns `V diag(values) V*`."""
        v = self.eigenvectors
        return v @ (np.asarray(values)[:, None] * v.conj().T)

    def reconstruct(self) -> np.ndarray:
        return self.apply(self.eigenvalues)

    def zero_threshold(self, rtol: float = DEFAULT_CONFIG.faithful_rtol) -> float:
        return rtol * max(self.max_eigenvalue, 0.0)

    def support(self, rtol: float = DEFAULT_CONFIG.faithful_rtol) -> np.ndarray:
        return self.eigenvalues > self.zero_threshold(rtol)

    def is_faithful(self, rtol: float = DEFAULT_CONFIG.faithful_rtol) -> bool:
        return bool(self.eigenvalues[0] > self.zero_threshold(rtol))

    def require_positive(
        self,
        what: str = "matrix",
        atol: float = DEFAULT_CONFIG.positivity_atol,
    ):
        lowest = float(self.eigenvalues[0])
        if lowest < -atol * max(1.0, abs(self.max_eigenvalue)):
            raise DomainError(
                f"The {what} is not positive semidefinite: eigenvalue {lowest:.6e}."
            )

    def require_faithful(
        self,
        what: str = "matrix",
        rtol: float = DEFAULT_CONFIG.faithful_rtol,
    ):
        self.require_positive(what)
        if not self.is_faithful(rtol):
            raise DomainError(
                f"The {what} is not faithful: eigenvalue {self.eigenvalues[0]:.6e} is "
                f"below {rtol:g} x {self.max_eigenvalue:.6e}."
            )

    def log_eigenvalues(self, what: str = "matrix") -> np.ndarray:
        self.require_faithful(what)
        return np.log(self.eigenvalues)


def eigh(a: np.ndarray) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    a = hermitian(a)
    eigenvalues, eigenvectors = SL.eigh(a)
    return SpectralDecomposition(frozen(eigenvalues), frozen(eigenvectors))


@D.dataclass(frozen=True, eq=False)
class ScalarFunction:
    """A named scalar function for the Borel functional calculus.

    `fn` is only ever called on eigenvalues above the zero threshold. Eigenvalues at or
    below the threshold are exact zeros: they map to 0 when `support_only` is set, to
    `at_zero` otherwise, and raise `DomainError` if `at_zero` is `None`.
    """

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    at_zero: float | None = 0.0
    support_only: bool = False

    def __call__(self, x: np.ndarray | float) -> np.ndarray:
        return self.fn(np.asarray(x, dtype=float))

    def __str__(self) -> str:
        return self.name


def log(restrict_to_support: bool = True) -> ScalarFunction:
    return ScalarFunction(
        "log",
        np.log,
        at_zero=None,
        support_only=restrict_to_support,
    )


def power(r: float) -> ScalarFunction:
    match r:
        case 0:
            at_zero = 1.0
        case _ if r > 0:
            at_zero = 0.0
        case _:
            at_zero = None

    return ScalarFunction(f"pow({r:g})", lambda x: x**r, at_zero=at_zero)


def chi_above(
    eps: float,
    tie: float = DEFAULT_CONFIG.threshold_tie,
    shift: float = DEFAULT_CONFIG.threshold_shift,
) -> ScalarFunction:
    """Indicator of the open half-line `(eps, inf)`.

    A threshold within `tie` of an eigenvalue is moved up by `shift`, so that the
    half-open interval semantics stay deterministic under spectral noise.
    """

    def fn(x: np.ndarray) -> np.ndarray:
        threshold = eps + shift if np.any(np.abs(x - eps) <= tie) else eps
        return (x > threshold).astype(float)

    return ScalarFunction(f"chi_above({eps:g})", fn, at_zero=1.0 if eps < 0 else 0.0)


def custom_table(xs: Iterable[float], ys: Iterable[float], name: str = "table"):
    """Piecewise-linear function through the points `(xs, ys)`, constant outside."""
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)

    if xs.shape != ys.shape or xs.size < 2 or np.any(np.diff(xs) <= 0):
        raise InvalidInputError("A function table needs >= 2 strictly increasing nodes.")

    return ScalarFunction(
        name,
        lambda x: np.interp(x, xs, ys),
        at_zero=float(np.interp(0.0, xs, ys)),
    )


type Operand = np.ndarray | SpectralDecomposition | DensityMatrix


def spectrum_of(a: Operand) -> SpectralDecomposition:
    match a:
        case DensityMatrix():
            return a.spectrum
        case SpectralDecomposition():
            return a
        case _:
            return eigh(a)


def apply_scalar_function(a: Operand, f: ScalarFunction) -> np.ndarray:
    spectrum = spectrum_of(a)
    spectrum.require_positive()

    zero = ~spectrum.support()
    values = np.zeros(spectrum.dim)
    values[~zero] = f(spectrum.eigenvalues[~zero])

    if np.any(zero) and not f.support_only:
        if f.at_zero is None:
            raise DomainError(
                f"{f} is undefined at eigenvalue {spectrum.eigenvalues[zero][0]:.6e}."
            )
        values[zero] = f.at_zero

    result = spectrum.apply(values)
    return (result + dagger(result)) / 2


def imaginary_power(a: Operand, t: float) -> np.ndarray:
    """`A^{it}` for faithful positive `A`; a unitary."""
    spectrum = spectrum_of(a)
    return spectrum.apply(np.exp(1j * t * spectrum.log_eigenvalues()))


def complex_power(a: Operand, z: complex) -> np.ndarray:
    """`A^z = exp(z log A)` for faithful positive `A`."""
    spectrum = spectrum_of(a)
    return spectrum.apply(np.exp(z * spectrum.log_eigenvalues()))


def support_projection(a: Operand) -> np.ndarray:
    spectrum = spectrum_of(a)
    spectrum.require_positive()
    return spectrum.apply(spectrum.support().astype(float))


def joint_eigh(
    a: np.ndarray,
    b: np.ndarray,
    atol: float = 1e-9,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Joint eigenbasis of two commuting Hermitian matrices.

    Returns the eigenvalues of `a`, the eigenvalues of `b` and the shared eigenvectors.
    A weight that leaves a tie in `a + w b` is replaced by the next one, and a basis that
    fails to reproduce both matrices within `atol` raises `DomainError`.
    """
    a, b = hermitian(a), hermitian(b)
    defect = np.inf

    for weight in JOINT_WEIGHTS:
        vectors = eigh(a + weight * b).eigenvectors
        alpha = np.real(np.einsum("ji,jk,ki->i", vectors.conj(), a, vectors))
        beta = np.real(np.einsum("ji,jk,ki->i", vectors.conj(), b, vectors))

        defect = max(
            reconstruction_defect(a, alpha, vectors),
            reconstruction_defect(b, beta, vectors),
        )
        if defect <= atol:
            return alpha, beta, vectors

    raise DomainError(f"The pair has no joint eigenbasis: reconstruction defect {defect:.3e}.")


def reconstruction_defect(a: np.ndarray, eigenvalues: np.ndarray, vectors: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(a))))
    rebuilt = vectors @ (eigenvalues[:, None] * vectors.conj().T)
    return float(np.max(np.abs(rebuilt - a))) / scale


def unitary_quotient(lam: np.ndarray | float, t: np.ndarray | float) -> np.ndarray:
    """`(lam^{it} - 1) / t`, evaluated without cancellation.

    Its modulus is bounded by `|log lam|` for every `t`, which is what lets the cocycle
    difference quotients converge dominatedly.
    """
    theta = np.asarray(t) * np.log(lam)
    return (-2.0 * np.sin(theta / 2) ** 2 + 1j * np.sin(theta)) / t


@D.dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A positive semidefinite unit-trace matrix with its cached spectrum."""

    matrix: np.ndarray
    spectrum: SpectralDecomposition
    faithful: bool

    @classmethod
    def of(
        cls,
        entries: Iterable | np.ndarray,
        config: LabConfig = DEFAULT_CONFIG,
    ) -> "DensityMatrix":
        matrix = hermitian(entries, "density matrix", config.hermitian_atol)
        spectrum = eigh(matrix)

        if (lowest := float(spectrum.eigenvalues[0])) < -config.positivity_atol:
            raise InvalidInputError(
                f"The density matrix has a negative eigenvalue {lowest:.6e}."
            )

        if abs((trace := float(np.trace(matrix).real)) - 1.0) > config.trace_atol:
            raise InvalidInputError(f"The density matrix has trace {trace!r}, not 1.")

        return cls(matrix, spectrum, spectrum.is_faithful(config.faithful_rtol))

    @classmethod
    def diagonal(cls, *probabilities: float) -> "DensityMatrix":
        return cls.of(np.diag(probabilities))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls.of(np.eye(dim) / dim)

    @classmethod
    def normalized(cls, positive: np.ndarray) -> "DensityMatrix":
        positive = hermitian(positive)
        return cls.of(positive / np.trace(positive).real)

    @classmethod
    def gibbs(cls, hamiltonian: np.ndarray, beta: float = 1.0) -> "DensityMatrix":
        """The Gibbs state `exp(-beta H) / Tr exp(-beta H)`."""
        if beta <= 0:
            raise DomainError(f"The inverse temperature must be positive, got {beta}.")

        spectrum = eigh(hamiltonian)
        weights = np.exp(-beta * (spectrum.eigenvalues - spectrum.eigenvalues[0]))
        return cls.of(spectrum.apply(weights / weights.sum()))

    @property
    def dim(self) -> int:
        return self.spectrum.dim

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def expectation(self, x: np.ndarray) -> complex:
        """`Tr(rho x)`."""
        return complex(np.einsum("ij,ji->", self.matrix, x))

    def log(self) -> np.ndarray:
        return apply_scalar_function(self, log())

    def support(self) -> np.ndarray:
        return support_projection(self)

    def power(self, z: complex) -> np.ndarray:
        return complex_power(self, z)

    def imaginary_power(self, t: float) -> np.ndarray:
        return imaginary_power(self, t)

    def require_faithful(self, what: str = "state"):
        self.spectrum.require_faithful(what)

    def commutes_with(self, other: "DensityMatrix", atol: float = 1e-10) -> bool:
        return commutator_norm(self.matrix, other.matrix) <= atol
