"""Dense multi-mode bosonic states with a per-mode photon-number cutoff.

States are flat complex vectors indexed row-major over per-mode occupation
numbers; every operation returns a new value (states are immutable in
practice, so parameter sweeps can run in parallel without coordination).
All unitaries are built by exponentiating truncated ladder operators, which
keeps them exactly unitary on the truncated space.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import expm

from .errors import InvalidArgumentError, TruncationRiskError

NORM_TOL = 1e-9
HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-9
# Eigenvalue checks on big density matrices are costly; skip PSD above this.
_PSD_CHECK_MAX_DIM = 1024


def _dim(cutoff: int, mode_count: int) -> int:
    return (cutoff + 1) ** mode_count


@dataclass(frozen=True)
class TruncatedFockState:
    """Pure state of ``len(mode_labels)`` bosonic modes with photon cutoff.

    ``amplitudes`` has length ``(cutoff+1)**mode_count`` and is indexed
    row-major over per-mode occupations, first label varying slowest.
    ``truncation_loss`` accumulates the squared norm explicitly discarded by
    truncating operations; it is the only sanctioned source of
    sub-normalisation.
    """

    mode_labels: tuple[str, ...]
    cutoff: int
    amplitudes: np.ndarray
    truncation_loss: float = 0.0

    def __post_init__(self):
        if self.cutoff < 1:
            raise InvalidArgumentError(f"cutoff must be >= 1, got {self.cutoff}")
        if len(set(self.mode_labels)) != len(self.mode_labels):
            raise InvalidArgumentError(f"duplicate mode labels: {self.mode_labels}")
        expected = _dim(self.cutoff, len(self.mode_labels))
        if self.amplitudes.shape != (expected,):
            raise InvalidArgumentError(
                f"amplitude vector has shape {self.amplitudes.shape}, expected ({expected},)"
            )
        n2 = self.norm_squared
        if not (0.0 < n2 <= 1.0 + NORM_TOL):
            raise InvalidArgumentError(f"state norm^2 {n2} outside (0, 1+{NORM_TOL}]")

    @property
    def mode_count(self) -> int:
        return len(self.mode_labels)

    @property
    def dim(self) -> int:
        return _dim(self.cutoff, self.mode_count)

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis of size cutoff+1 per mode."""
        return self.amplitudes.reshape((self.cutoff + 1,) * self.mode_count)

    def mode_axis(self, label: str) -> int:
        try:
            return self.mode_labels.index(label)
        except ValueError:
            raise InvalidArgumentError(
                f"unknown mode {label!r}; have {self.mode_labels}"
            ) from None

    def index_of(self, occupations: dict[str, int]) -> int:
        """Flat index of a basis state given per-mode occupations (others 0)."""
        occ = [0] * self.mode_count
        for label, n in occupations.items():
            occ[self.mode_axis(label)] = n
        return int(np.ravel_multi_index(occ, (self.cutoff + 1,) * self.mode_count))

    def amplitude(self, occupations: dict[str, int]) -> complex:
        return complex(self.amplitudes[self.index_of(occupations)])

    def occupation_grid(self, label: str) -> np.ndarray:
        """Occupation number of ``label`` for every flat basis index."""
        axis = self.mode_axis(label)
        d = self.cutoff + 1
        grid = np.indices((d,) * self.mode_count)[axis]
        return grid.reshape(-1)

    def mean_photon_number(self, label: str) -> float:
        probs = np.abs(self.amplitudes) ** 2
        return float(np.sum(probs * self.occupation_grid(label)))

    def total_photon_expectation(self) -> float:
        return sum(self.mean_photon_number(m) for m in self.mode_labels)


@dataclass(frozen=True)
class DensityState:
    """Mixed state over the kept modes of a truncated Fock space."""

    mode_labels: tuple[str, ...]
    cutoff: int
    matrix: np.ndarray

    def __post_init__(self):
        expected = _dim(self.cutoff, len(self.mode_labels))
        if self.matrix.shape != (expected, expected):
            raise InvalidArgumentError(
                f"density matrix has shape {self.matrix.shape}, expected square dim {expected}"
            )

    @property
    def mode_count(self) -> int:
        return len(self.mode_labels)

    @property
    def dim(self) -> int:
        return _dim(self.cutoff, self.mode_count)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def mode_axis(self, label: str) -> int:
        try:
            return self.mode_labels.index(label)
        except ValueError:
            raise InvalidArgumentError(
                f"unknown mode {label!r}; have {self.mode_labels}"
            ) from None

    def occupation_grid(self, label: str) -> np.ndarray:
        axis = self.mode_axis(label)
        d = self.cutoff + 1
        return np.indices((d,) * self.mode_count)[axis].reshape(-1)

    def validate(self) -> "DensityState":
        """Check Hermiticity, trace and (for small dims) positivity."""
        m = self.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > HERMITICITY_TOL:
            raise InvalidArgumentError(f"density matrix not Hermitian: max dev {herm}")
        tr = self.trace
        if not (0.0 < tr <= 1.0 + NORM_TOL):
            raise InvalidArgumentError(f"trace {tr} outside (0, 1+{NORM_TOL}]")
        if self.dim <= _PSD_CHECK_MAX_DIM:
            min_eig = float(np.linalg.eigvalsh(m)[0])
            if min_eig < -PSD_TOL:
                raise InvalidArgumentError(f"density matrix not PSD: min eigenvalue {min_eig}")
        return self


def vacuum_state(mode_labels, cutoff: int) -> TruncatedFockState:
    labels = tuple(mode_labels)
    amps = np.zeros(_dim(cutoff, len(labels)), dtype=complex)
    amps[0] = 1.0
    return TruncatedFockState(labels, cutoff, amps)


def basis_state(mode_labels, cutoff: int, occupations: dict[str, int]) -> TruncatedFockState:
    state = vacuum_state(mode_labels, cutoff)
    amps = np.zeros_like(state.amplitudes)
    amps[state.index_of(occupations)] = 1.0
    return replace(state, amplitudes=amps)


def annihilation_matrix(cutoff: int) -> np.ndarray:
    """a|n> = sqrt(n)|n-1> on the (cutoff+1)-dimensional single-mode space."""
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1).astype(complex)


def displacement_matrix(gamma: complex, cutoff: int) -> np.ndarray:
    a = annihilation_matrix(cutoff)
    return expm(gamma * a.conj().T - np.conjugate(gamma) * a)


def beamsplitter_matrix(xi: float, cutoff: int) -> np.ndarray:
    """Two-mode coupling exp(phi (a^dag b - a b^dag)) with cos(phi) = sqrt(xi).

    Ordering: the matrix acts on the kron(mode_a, mode_b) product space. On
    one-photon states it sends |1,0> to sqrt(xi)|1,0> - sqrt(1-xi)|0,1> and
    |0,1> to sqrt(xi)|0,1> + sqrt(1-xi)|1,0>, i.e. the transmitted mode keeps
    its sign while the amplitude scattered from a into b picks up a minus.
    """
    if not 0.0 <= xi <= 1.0:
        raise InvalidArgumentError(f"xi must lie in [0, 1], got {xi}")
    phi = float(np.arccos(np.clip(np.sqrt(xi), 0.0, 1.0)))
    a = annihilation_matrix(cutoff)
    generator = phi * (np.kron(a.conj().T, a) - np.kron(a, a.conj().T))
    return expm(generator)


def _apply_single_mode(state: TruncatedFockState, label: str, op: np.ndarray) -> np.ndarray:
    axis = state.mode_axis(label)
    tensor = state.tensor()
    out = np.tensordot(op, tensor, axes=([1], [axis]))
    out = np.moveaxis(out, 0, axis)
    return out.reshape(-1)

def _apply_two_mode(state: TruncatedFockState, label_a: str, label_b: str, op: np.ndarray) -> np.ndarray:
    d = state.cutoff + 1
    ax_a, ax_b = state.mode_axis(label_a), state.mode_axis(label_b)
    tensor = np.moveaxis(state.tensor(), (ax_a, ax_b), (0, 1))
    shape = tensor.shape
    out = op @ tensor.reshape(d * d, -1)
    out = np.moveaxis(out.reshape(shape), (0, 1), (ax_a, ax_b))
    return out.reshape(-1)


def apply_displacement(state: TruncatedFockState, label: str, gamma: complex) -> TruncatedFockState:
    """Displace one mode by gamma via the truncated matrix exponential.

    gamma = 0 is an exact no-op. Otherwise the truncation guard
    |gamma|^2 + 3|gamma| + 3 <= cutoff must hold so that the truncated
    exponential stays faithful to the true displacement.
    """
    if gamma == 0:
        return state
    g = abs(gamma)
    if g * g + 3.0 * g + 3.0 > state.cutoff:
        raise TruncationRiskError(
            f"displacement |gamma|={g:.4g} needs cutoff >= {g * g + 3 * g + 3:.2f}, "
            f"state has {state.cutoff}"
        )
    amps = _apply_single_mode(state, label, displacement_matrix(gamma, state.cutoff))
    loss = state.truncation_loss + max(0.0, state.norm_squared - float(np.vdot(amps, amps).real))
    return replace(state, amplitudes=amps, truncation_loss=loss)


def apply_phase(state: TruncatedFockState, label: str, delta: float) -> TruncatedFockState:
    """Apply exp(-i delta n) on one mode."""
    phases = np.exp(-1j * delta * state.occupation_grid(label))
    return replace(state, amplitudes=state.amplitudes * phases)


def apply_beamsplitter(
    state: TruncatedFockState, label_a: str, label_b: str, xi: float
) -> TruncatedFockState:
    """Couple two modes with the fixed-sign beamsplitter of reflectivity xi."""
    if label_a == label_b:
        raise InvalidArgumentError(f"beamsplitter needs two distinct modes, got {label_a!r} twice")
    if xi == 1.0:
        return state
    amps = _apply_two_mode(state, label_a, label_b, beamsplitter_matrix(xi, state.cutoff))
    return replace(state, amplitudes=amps)


def tensor_product(left: TruncatedFockState, right: TruncatedFockState) -> TruncatedFockState:
    if left.cutoff != right.cutoff:
        raise InvalidArgumentError("tensor product needs equal cutoffs")
    overlap = set(left.mode_labels) & set(right.mode_labels)
    if overlap:
        raise InvalidArgumentError(f"mode labels collide: {sorted(overlap)}")
    amps = np.kron(left.amplitudes, right.amplitudes)
    return TruncatedFockState(
        left.mode_labels + right.mode_labels,
        left.cutoff,
        amps,
        truncation_loss=left.truncation_loss + right.truncation_loss,
    )


def append_vacuum_mode(state: TruncatedFockState, label: str) -> TruncatedFockState:
    return tensor_product(state, vacuum_state((label,), state.cutoff))


def couple_loss_ancilla(
    state: TruncatedFockState, label: str, eta: float, ancilla_label: str
) -> TruncatedFockState:
    """Route a 1-eta fraction of one mode into a fresh vacuum ancilla.

    The ancilla mode stays in the state; trace it out at the end of the
    circuit. eta = 1 is a no-op (no ancilla added).
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidArgumentError(f"eta must lie in [0, 1], got {eta}")
    if eta == 1.0:
        return state
    extended = append_vacuum_mode(state, ancilla_label)
    return apply_beamsplitter(extended, label, ancilla_label, eta)


def partial_trace_pure(state: TruncatedFockState, keep) -> DensityState:
    """Reduced density matrix of a pure state over the kept modes."""
    keep = tuple(keep)
    if not keep:
        raise InvalidArgumentError("keep must name at least one mode")
    keep_axes = [state.mode_axis(m) for m in keep]
    rest_axes = [i for i in range(state.mode_count) if i not in keep_axes]
    d = state.cutoff + 1
    tensor = np.transpose(state.tensor(), keep_axes + rest_axes)
    m = tensor.reshape(d ** len(keep_axes), -1)
    rho = m @ m.conj().T
    return DensityState(keep, state.cutoff, rho)


def partial_trace(rho: DensityState, keep) -> DensityState:
    """Reduced density matrix over the kept modes; trace preserving."""
    keep = tuple(keep)
    if not keep:
        raise InvalidArgumentError("keep must name at least one mode")
    keep_axes = [rho.mode_axis(m) for m in keep]
    rest_axes = [i for i in range(rho.mode_count) if i not in keep_axes]
    if not rest_axes:
        return DensityState(keep, rho.cutoff, rho.matrix.copy())
    d = rho.cutoff + 1
    n = rho.mode_count
    tensor = rho.matrix.reshape((d,) * (2 * n))
    order = keep_axes + rest_axes + [n + ax for ax in keep_axes] + [n + ax for ax in rest_axes]
    tensor = np.transpose(tensor, order)
    dk = d ** len(keep_axes)
    dr = d ** len(rest_axes)
    tensor = tensor.reshape(dk, dr, dk, dr)
    reduced = np.einsum("irjr->ij", tensor)
    return DensityState(keep, rho.cutoff, reduced)


def to_density(state: TruncatedFockState) -> DensityState:
    amps = state.amplitudes
    return DensityState(state.mode_labels, state.cutoff, np.outer(amps, amps.conj()))


def apply_loss(state: TruncatedFockState, label: str, eta: float) -> DensityState:
    """Loss channel on one mode: beamsplit into vacuum, trace the ancilla."""
    if eta == 1.0:
        return to_density(state)
    lossy = couple_loss_ancilla(state, label, eta, ancilla_label="_loss")
    return partial_trace_pure(lossy, state.mode_labels)


def _occupied_mask(state_or_rho, label: str) -> np.ndarray:
    return state_or_rho.occupation_grid(label) >= 1


def singles_expectation(rho, label: str) -> float:
    """Tr(Pi_i rho) with Pi_i the >=1 photon projector on one mode."""
    mask = _occupied_mask(rho, label)
    if isinstance(rho, TruncatedFockState):
        return float(np.sum(np.abs(rho.amplitudes[mask]) ** 2))
    return float(np.sum(np.diag(rho.matrix).real[mask]))


def coincidence_expectation(rho, label_i: str, label_j: str) -> float:
    """Tr(Pi_C rho): >=1 photon in both named modes (occupation projector)."""
    if label_i == label_j:
        raise InvalidArgumentError("coincidence needs two distinct modes")
    mask = _occupied_mask(rho, label_i) & _occupied_mask(rho, label_j)
    if isinstance(rho, TruncatedFockState):
        return float(np.sum(np.abs(rho.amplitudes[mask]) ** 2))
    return float(np.sum(np.diag(rho.matrix).real[mask]))


def apply_phase_density(rho: DensityState, label: str, delta: float) -> DensityState:
    phases = np.exp(-1j * delta * rho.occupation_grid(label))
    return DensityState(rho.mode_labels, rho.cutoff, (phases[:, None] * rho.matrix) * phases.conj()[None, :])


def fidelity_with_pure(rho: DensityState, target: TruncatedFockState) -> float:
    """<t|rho|t> for a pure target sharing the mode layout."""
    if rho.mode_labels != target.mode_labels or rho.cutoff != target.cutoff:
        raise InvalidArgumentError("fidelity target must share mode labels and cutoff")
    t = target.amplitudes
    return float(np.real(t.conj() @ rho.matrix @ t))
