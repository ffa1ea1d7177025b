"""Plane-wave mode expansions in a periodic box and the equal-time A-E commutator.

The transverse vector potential and electric field are expanded over the
discrete wavevectors of a cubic box with periodic boundary conditions.  Each
wavevector carries three bosonic channels whose vector coefficients are the
columns of the transverse projector 1 - khat khat^T; the longitudinal
combination of the three channels then has an identically zero coefficient, so
the two physical polarizations are represented without ever choosing a basis
for them.  Summing coefficient products over modes gives the equal-time
commutator of the two fields, which converges (away from contact) to the
closed-form dipole-kernel tensor provided by :func:`analytic_dipole_tensor`.

All functions here are pure and treat their array inputs as immutable; mode
sums are plain serial reductions, so repeated calls produce bit-identical
results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeparationError
from .units import NATURAL, UnitSystem

__all__ = [
    "ModeLattice",
    "FieldCoefficients",
    "as_vec3",
    "build_mode_lattice",
    "transverse_projectors",
    "regulator_weights",
    "vector_potential_coeffs",
    "electric_field_coeffs",
    "commutator_ae_modesum",
    "analytic_dipole_tensor",
]


def as_vec3(value, name: str = "vector") -> np.ndarray:
    """Coerce to a finite float 3-vector, raising ValueError otherwise."""
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must have finite components, got {arr}")
    return arr


def _read_only(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ModeLattice:
    """Nonzero wavevectors k = 2 pi n / L of a periodic cube of side L.

    The integer vectors n range over max|n_i| <= half_extent with n = 0
    excluded (the zero mode has no transverse content).  Modes are ordered
    lexicographically in (n_x, n_y, n_z) and the arrays are read-only, so any
    sum over modes is reproducible bit for bit.

    Attributes
    ----------
    box_length : float
        Side length L of the quantization box.
    half_extent : int
        Largest |n_i| kept in each direction.
    units : UnitSystem
        Constants used by every field amplitude built on this lattice.
    nvecs : (M, 3) int array
        Integer mode labels.
    kvecs : (M, 3) float array
        Wavevectors 2 pi n / L.
    knorm : (M,) float array
        |k| per mode.
    omega : (M,) float array
        Dispersion c |k| per mode.
    """

    box_length: float
    half_extent: int
    units: UnitSystem
    nvecs: np.ndarray
    kvecs: np.ndarray
    knorm: np.ndarray
    omega: np.ndarray

    @property
    def num_modes(self) -> int:
        return self.kvecs.shape[0]

    @property
    def volume(self) -> float:
        return self.box_length**3

    def __repr__(self):
        return (
            f"ModeLattice(box_length={self.box_length}, "
            f"half_extent={self.half_extent}, num_modes={self.num_modes})"
        )


def build_mode_lattice(
    box_length: float, half_extent: int, units: UnitSystem = NATURAL
) -> ModeLattice:
    """Enumerate the (2 half_extent + 1)^3 - 1 nonzero modes of the box.

    Parameters
    ----------
    box_length : float
        Side length of the periodic cube, > 0.
    half_extent : int
        Per-axis cutoff on the integer labels, >= 1.
    units : UnitSystem, optional
        Constants attached to the lattice; natural units by default.
    """
    if not (box_length > 0.0) or not np.isfinite(box_length):
        raise ValueError(f"box_length must be finite and positive, got {box_length}")
    if not isinstance(half_extent, (int, np.integer)) or half_extent < 1:
        raise ValueError(f"half_extent must be an integer >= 1, got {half_extent}")
    if not isinstance(units, UnitSystem):
        raise ValueError("units must be a UnitSystem instance")

    rng = np.arange(-half_extent, half_extent + 1)
    # meshgrid with 'ij' indexing reshaped in C order yields lexicographic
    # ordering in (n_x, n_y, n_z)
    nvecs = np.array(np.meshgrid(rng, rng, rng, indexing="ij")).reshape(3, -1).T
    nvecs = nvecs[np.any(nvecs != 0, axis=1)]
    kvecs = (2.0 * np.pi / box_length) * nvecs.astype(float)
    knorm = np.linalg.norm(kvecs, axis=1)
    omega = units.c * knorm
    return ModeLattice(
        box_length=float(box_length),
        half_extent=int(half_extent),
        units=units,
        nvecs=_read_only(nvecs),
        kvecs=_read_only(kvecs),
        knorm=_read_only(knorm),
        omega=_read_only(omega),
    )


def transverse_projectors(lattice: ModeLattice) -> np.ndarray:
    """Projectors 1 - khat khat^T for every mode, shape (M, 3, 3)."""
    khat = lattice.kvecs / lattice.knorm[:, None]
    return np.eye(3)[None, :, :] - khat[:, :, None] * khat[:, None, :]


def regulator_weights(lattice: ModeLattice, sigma: float) -> np.ndarray:
    """Gaussian damping exp(-(|k| sigma)^2) per mode; sigma = 0 disables it.

    The weight smears point evaluations over a region of size sigma, which is
    what lets a finite cubic mode sum approximate the rotation-invariant
    continuum limit.
    """
    if sigma < 0.0 or not np.isfinite(sigma):
        raise ValueError(f"sigma must be finite and >= 0, got {sigma}")
    if sigma == 0.0:
        return np.ones(lattice.num_modes)
    return np.exp(-((lattice.knorm * sigma) ** 2))


def _field_amplitudes(lattice: ModeLattice) -> np.ndarray:
    u = lattice.units
    return np.sqrt(u.hbar / (2.0 * u.epsilon0 * lattice.omega * lattice.volume))


@dataclass(frozen=True, eq=False)
class FieldCoefficients:
    """Mode coefficients of one Hermitian vector field evaluated at a point.

    The field component j is sum over modes k and channels m of
    ``ann[k, j, m] a_{k m} + cre[k, j, m] a_{k m}^dag``.  Channel coefficient
    columns are transverse to k, and the creation block is the complex
    conjugate of the annihilation block, so the reconstructed operator is
    Hermitian.  Both blocks are stored explicitly (rather than deriving one
    from the other) so that :meth:`validate` is a real check on the
    construction.
    """

    kvecs: np.ndarray
    position: np.ndarray
    ann: np.ndarray
    cre: np.ndarray

    @property
    def num_modes(self) -> int:
        return self.ann.shape[0]

    def validate(self, tol: float = 1e-12) -> None:
        """Raise ValueError unless transversality and Hermiticity hold.

        Both are checked as max absolute deviations against ``tol`` scaled by
        the largest coefficient magnitude.
        """
        scale = max(float(np.max(np.abs(self.ann))), 1e-300)
        herm = float(np.max(np.abs(self.cre - np.conj(self.ann))))
        if herm > tol * scale:
            raise ValueError(
                f"creation block is not the conjugate of the annihilation "
                f"block: max deviation {herm:.3e} (scale {scale:.3e})"
            )
        # k_j ann[k, j, m] = 0 for every mode and channel
        trans = float(np.max(np.abs(np.einsum("kj,kjm->km", self.kvecs, self.ann))))
        kscale = float(np.max(np.linalg.norm(self.kvecs, axis=1))) * scale
        if trans > tol * kscale:
            raise ValueError(
                f"coefficient columns are not transverse: max k-contraction "
                f"{trans:.3e} (scale {kscale:.3e})"
            )


def vector_potential_coeffs(lattice: ModeLattice, r) -> FieldCoefficients:
    """Coefficients of the transverse vector potential at position r.

    Per mode the annihilation block is sqrt(hbar / (2 eps0 omega V))
    exp(i k . r) times the transverse projector columns; the creation block is
    its conjugate, built independently from exp(-i k . r).
    """
    r = as_vec3(r, "r")
    amp = _field_amplitudes(lattice)
    proj = transverse_projectors(lattice)
    phase = np.exp(1j * (lattice.kvecs @ r))
    ann = (amp * phase)[:, None, None] * proj
    cre = (amp * np.exp(-1j * (lattice.kvecs @ r)))[:, None, None] * proj
    return FieldCoefficients(
        kvecs=lattice.kvecs, position=_read_only(r.copy()), ann=ann, cre=cre
    )


def electric_field_coeffs(lattice: ModeLattice, r) -> FieldCoefficients:
    """Coefficients of the transverse electric field at position r.

    Relative to the vector potential each annihilation coefficient is
    multiplied by i omega and each creation coefficient by -i omega, which is
    minus the free-field time derivative of the potential.
    """
    r = as_vec3(r, "r")
    amp = _field_amplitudes(lattice)
    proj = transverse_projectors(lattice)
    phase = np.exp(1j * (lattice.kvecs @ r))
    ann = (1j * lattice.omega * amp * phase)[:, None, None] * proj
    cre = (-1j * lattice.omega * amp * np.exp(-1j * (lattice.kvecs @ r)))[
        :, None, None
    ] * proj
    return FieldCoefficients(
        kvecs=lattice.kvecs, position=_read_only(r.copy()), ann=ann, cre=cre
    )


def commutator_ae_modesum(lattice: ModeLattice, R, Rp, sigma: float) -> np.ndarray:
    """Equal-time commutator tensor [A_j(R), E_l(R')] summed over box modes.

    Contracting the coefficient blocks with the canonical commutation
    relations leaves, per mode, the purely imaginary tensor
    ``-i (hbar / (eps0 V)) cos(k . (R - R')) (1 - khat khat^T)``, damped here
    by the Gaussian regulator weight for ``sigma``.  Within the window
    sigma << |R - R'| << box_length the sum approaches
    :func:`analytic_dipole_tensor` of the separation.

    Parameters
    ----------
    lattice : ModeLattice
    R, Rp : 3-vectors
        Evaluation points of the two fields; must not coincide.
    sigma : float
        Regulator length, > 0.

    Returns
    -------
    (3, 3) complex array, purely imaginary and symmetric up to rounding.
    """
    R = as_vec3(R, "R")
    Rp = as_vec3(Rp, "Rp")
    rho = R - Rp
    if float(np.linalg.norm(rho)) == 0.0:
        raise DegenerateSeparationError(
            "commutator evaluated at coincident points; the contact term is "
            "not represented by this mode sum"
        )
    if not (sigma > 0.0):
        raise ValueError(f"sigma must be > 0 for the regulated sum, got {sigma}")
    weights = regulator_weights(lattice, sigma) * np.cos(lattice.kvecs @ rho)
    proj = transverse_projectors(lattice)
    u = lattice.units
    tensor = np.einsum("k,kjl->jl", weights, proj)
    return -1j * (u.hbar / (u.epsilon0 * lattice.volume)) * tensor


def analytic_dipole_tensor(rho, units: UnitSystem = NATURAL) -> np.ndarray:
    """Closed-form continuum limit of the equal-time A-E commutator.

    For separation rho != 0 this is
    ``i hbar / (4 pi eps0 |rho|^3) (delta_jl - 3 rhohat_j rhohat_l)``;
    the delta-function contact term at rho = 0 is outside its domain.
    """
    rho = as_vec3(rho, "rho")
    dist = float(np.linalg.norm(rho))
    if dist == 0.0:
        raise DegenerateSeparationError(
            "analytic commutator tensor is singular at zero separation"
        )
    rhohat = rho / dist
    core = np.eye(3) - 3.0 * np.outer(rhohat, rhohat)
    return 1j * units.hbar / (4.0 * np.pi * units.epsilon0 * dist**3) * core
