"""Dense complex matrix helpers: unitarity checks, determinant phase removal,
skew-Hermitian exponentials, seeded Haar-random unitaries, and the JSON matrix
interchange format.
"""

from __future__ import annotations

import cmath
import math
from numbers import Real

import numpy as np

from .errors import FormatError, ValidationError

__all__ = [
    "as_complex_matrix",
    "is_unitary",
    "determinant",
    "project_to_su",
    "expm_skew_hermitian",
    "random_unitary_qr",
    "matrix_to_json",
    "matrix_from_json",
]


def as_complex_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a square complex128 array, validating its shape."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValidationError("matrix must be at least 1x1")
    return a


def is_unitary(m, tol: float = 1e-10) -> bool:
    """True when ``m.conj().T @ m`` is the identity within Frobenius norm tol."""
    a = as_complex_matrix(m)
    n = a.shape[0]
    return float(np.linalg.norm(a.conj().T @ a - np.eye(n))) <= tol


def determinant(m) -> complex:
    """Determinant via LU with partial pivoting (LAPACK)."""
    return complex(np.linalg.det(as_complex_matrix(m)))


def project_to_su(m, tol: float = 1e-10) -> tuple[float, np.ndarray]:
    """Split a unitary as ``m = exp(i*phi) * msu`` with ``det(msu) = 1``.

    Returns ``(phi, msu)`` where ``phi = Arg(det m) / n`` is the removed
    global phase per mode.  Input must be unitary within ``tol``.
    """
    a = as_complex_matrix(m)
    if not is_unitary(a, tol):
        raise ValidationError("project_to_su requires a unitary matrix")
    n = a.shape[0]
    phi = cmath.phase(determinant(a)) / n
    return phi, a * cmath.exp(-1j * phi)


def expm_skew_hermitian(h, tol: float = 1e-10) -> np.ndarray:
    """Exponential of a skew-Hermitian matrix by unitary diagonalization.

    ``i*h`` is Hermitian, so ``exp(h) = V diag(exp(-i w)) V*`` with
    ``w, V = eigh(i*h)``.  The result is exactly normal and unitary to
    rounding, independent of the norm of ``h``.
    """
    a = as_complex_matrix(h)
    if float(np.linalg.norm(a + a.conj().T)) > tol:
        raise ValidationError("expm_skew_hermitian requires h = -h.conj().T")
    w, v = np.linalg.eigh(1j * a)
    return (v * np.exp(-1j * w)) @ v.conj().T


def random_unitary_qr(n: int, seed: int = 0) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary from a complex Ginibre QR.

    Draws an i.i.d. standard complex Gaussian matrix from a counter-based
    Philox stream, takes its QR factorization, and multiplies each column of
    Q by the conjugated phase of the matching diagonal entry of R.  That
    fixes the phase ambiguity of QR, which is exactly what makes the output
    Haar rather than merely unitary.
    """
    if n < 1:
        raise ValidationError(f"dimension must be positive, got {n}")
    rng = np.random.Generator(np.random.Philox(seed))
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * np.conj(d / np.abs(d))


def matrix_to_json(m) -> dict:
    """Serialize a square complex matrix to the interchange dict."""
    a = as_complex_matrix(m)
    n = a.shape[0]
    entries = [[[float(a[r, c].real), float(a[r, c].imag)] for c in range(n)] for r in range(n)]
    return {"n": n, "entries": entries}


def _as_finite_float(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, Real):
        raise FormatError(f"{where}: expected a number, got {type(x).__name__}")
    val = float(x)
    if not math.isfinite(val):
        raise FormatError(f"{where}: value must be finite")
    return val


def matrix_from_json(obj) -> np.ndarray:
    """Parse the interchange dict back into a complex matrix.

    Raises :class:`FormatError` on any structural problem; numerical
    properties (such as unitarity) are deliberately not checked here.
    """
    if not isinstance(obj, dict):
        raise FormatError("matrix document must be a JSON object")
    if "n" not in obj or "entries" not in obj:
        raise FormatError("matrix document needs 'n' and 'entries' fields")
    n = obj["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FormatError("'n' must be a positive integer")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n:
        raise FormatError(f"'entries' must be a list of {n} rows")
    out = np.empty((n, n), dtype=np.complex128)
    for r, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            raise FormatError(f"row {r} must be a list of {n} entries")
        for c, cell in enumerate(row):
            if not isinstance(cell, (list, tuple)) or len(cell) != 2:
                raise FormatError(f"entry ({r},{c}) must be a [re, im] pair")
            out[r, c] = complex(
                _as_finite_float(cell[0], f"entry ({r},{c}) real part"),
                _as_finite_float(cell[1], f"entry ({r},{c}) imaginary part"),
            )
    return out
