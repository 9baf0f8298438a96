"""Exact complex statevector simulation.

Gate matrices, gate application, unitary embedding/composition, fidelity,
squared Frobenius distance, Haar-random sampling, and projective measurement.

Conventions used throughout the package:

* Bit order is big-endian: qubit 0 is the most significant bit of the
  amplitude index, so the basis state |b0 b1 ... b_{n-1}> sits at index
  b0*2^(n-1) + b1*2^(n-2) + ... + b_{n-1}.
* Global phase is kept exactly as the gate definitions produce it; nothing
  is canonicalized away. In particular P(phi) = diag(1, e^{i phi}) carries
  the e^{i phi/2} prefactor of exp(i phi/2) * exp(-i phi/2 Z), which makes
  P(pi/2) RX(pi/2) P(pi/2) equal H entrywise, not merely up to phase.
* Two-qubit gate matrices are written with the control on the first
  (more significant) wire: gate index = (control_bit << 1) | target_bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidActionError, ParseError

# Practical simulator limit; dense vectors of 2^20 amplitudes are the cap.
MAX_QUBITS = 20

ONE_QUBIT_GATES = ("RX", "P", "H", "T")
TWO_QUBIT_GATES = ("CX", "CP")
THREE_QUBIT_GATES = ("CCX",)
PARAMETRIC_GATES = ("RX", "P", "CP")
# H, T, CCX are fixed reference gates: challenge targets only, never actions.
GATE_NAMES = ONE_QUBIT_GATES + TWO_QUBIT_GATES + THREE_QUBIT_GATES

_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class Gate:
    """A gate kind, optionally parameterized by an angle in [-pi, pi]."""

    name: str
    angle: float | None = None

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise InvalidActionError(f"unknown gate kind {self.name!r}")
        if self.name in PARAMETRIC_GATES:
            if self.angle is None:
                raise InvalidActionError(f"{self.name} requires an angle")
            if abs(self.angle) > math.pi + _ANGLE_TOL:
                raise InvalidActionError(
                    f"{self.name} angle {self.angle} outside [-pi, pi]"
                )
        elif self.angle is not None:
            raise InvalidActionError(f"{self.name} takes no angle")

    @property
    def arity(self) -> int:
        if self.name in ONE_QUBIT_GATES:
            return 1
        if self.name in TWO_QUBIT_GATES:
            return 2
        return 3


def rx(angle: float) -> Gate:
    return Gate("RX", angle)


def phase(angle: float) -> Gate:
    return Gate("P", angle)


def cx() -> Gate:
    return Gate("CX")


def cp(angle: float) -> Gate:
    return Gate("CP", angle)


def gate_matrix(gate: Gate) -> np.ndarray:
    """Exact unitary matrix of a gate kind.

    RX(l) = exp(-i l/2 X), P(f) = diag(1, e^{if}), CX flips the target
    when the control is |1>, CP(f) phases |11>, H and T are the usual
    fixed matrices, CCX swaps |110> and |111>.
    """
    name, angle = gate.name, gate.angle
    if name == "RX":
        c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if name == "P":
        return np.array([[1.0, 0.0], [0.0, np.exp(1j * angle)]], dtype=np.complex128)
    if name == "H":
        inv = 1.0 / math.sqrt(2.0)
        return np.array([[inv, inv], [inv, -inv]], dtype=np.complex128)
    if name == "T":
        return np.array(
            [[1.0, 0.0], [0.0, np.exp(1j * math.pi / 4.0)]], dtype=np.complex128
        )
    if name == "CX":
        m = np.eye(4, dtype=np.complex128)
        m[[2, 3]] = m[[3, 2]]
        return m
    if name == "CP":
        return np.diag([1.0, 1.0, 1.0, np.exp(1j * angle)]).astype(np.complex128)
    # CCX: identity except |110> <-> |111>
    m = np.eye(8, dtype=np.complex128)
    m[[6, 7]] = m[[7, 6]]
    return m


def num_qubits_of(dim: int) -> int:
    """Qubit count for a vector length / matrix dimension, or raise."""
    n = dim.bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise ConfigError(f"dimension {dim} is not a power of two")
    return n


def init_state(num_qubits: int) -> np.ndarray:
    """The all-zeros computational basis state |0...0>."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ConfigError(
            f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}"
        )
    state = np.zeros(1 << num_qubits, dtype=np.complex128)
    state[0] = 1.0
    return state


def _bit_position(qubit: int, num_qubits: int) -> int:
    # big-endian: qubit 0 lives at the most significant bit
    return num_qubits - 1 - qubit


def _check_wires(num_qubits: int, gate: Gate, target: int, control: int | None):
    if not 0 <= target < num_qubits:
        raise InvalidActionError(f"target {target} out of range for {num_qubits} qubits")
    if gate.name in TWO_QUBIT_GATES:
        if control is None:
            raise InvalidActionError(f"{gate.name} requires a control qubit")
        if not 0 <= control < num_qubits:
            raise InvalidActionError(
                f"control {control} out of range for {num_qubits} qubits"
            )
        if control == target:
            raise InvalidActionError("control and target must differ")
    elif gate.name in ONE_QUBIT_GATES:
        if control is not None:
            raise InvalidActionError(f"{gate.name} takes no control qubit")
    else:
        raise InvalidActionError(f"{gate.name} cannot be applied as an action")


def apply_gate(
    state: np.ndarray, gate: Gate, target: int, control: int | None = None
) -> np.ndarray:
    """Apply a gate to a statevector and return the new vector.

    This is the specialized kernel (index arithmetic on the amplitude
    array); embed_unitary provides the independent matrix-product route.
    """
    num_qubits = num_qubits_of(len(state))
    _check_wires(num_qubits, gate, target, control)
    pos_t = _bit_position(target, num_qubits)
    out = np.array(state, dtype=np.complex128, copy=True)

    if gate.name in ONE_QUBIT_GATES:
        u = gate_matrix(gate)
        idx = np.arange(len(state))
        i0 = idx[(idx >> pos_t) & 1 == 0]
        i1 = i0 | (1 << pos_t)
        a, b = out[i0], out[i1]
        out[i0] = u[0, 0] * a + u[0, 1] * b
        out[i1] = u[1, 0] * a + u[1, 1] * b
        return out

    pos_c = _bit_position(control, num_qubits)
    idx = np.arange(len(state))
    if gate.name == "CX":
        sel0 = idx[((idx >> pos_c) & 1 == 1) & ((idx >> pos_t) & 1 == 0)]
        sel1 = sel0 | (1 << pos_t)
        out[sel0], out[sel1] = out[sel1].copy(), out[sel0].copy()
    else:  # CP
        sel = idx[((idx >> pos_c) & 1 == 1) & ((idx >> pos_t) & 1 == 1)]
        out[sel] *= np.exp(1j * gate.angle)
    return out


def embed_unitary(
    gate_u: np.ndarray, target: int, control: int | None, num_qubits: int
) -> np.ndarray:
    """Embed a 2x2 or 4x4 gate matrix into the full 2^n unitary.

    The gate acts on the given wires (control as its first wire) and as
    the identity elsewhere, under the big-endian bit convention.
    """
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ConfigError(f"num_qubits must be in [1, {MAX_QUBITS}]")
    dim = 1 << num_qubits
    gdim = gate_u.shape[0]
    if gate_u.shape != (gdim, gdim) or gdim not in (2, 4):
        raise InvalidActionError(f"cannot embed gate of shape {gate_u.shape}")
    if not 0 <= target < num_qubits:
        raise InvalidActionError(f"target {target} out of range")
    if gdim == 2:
        if control is not None:
            raise InvalidActionError("a 2x2 gate takes no control qubit")
        wires = [target]
    else:
        if control is None or not 0 <= control < num_qubits or control == target:
            raise InvalidActionError("a 4x4 gate needs a distinct in-range control")
        wires = [control, target]

    positions = [_bit_position(q, num_qubits) for q in wires]
    wire_mask = 0
    for p in positions:
        wire_mask |= 1 << p
    bases = np.arange(dim)
    bases = bases[bases & wire_mask == 0]

    full = np.zeros((dim, dim), dtype=np.complex128)
    # gate bit g maps onto the full index via the wire positions, first
    # wire most significant within the gate's own index
    offsets = []
    for g in range(gdim):
        off = 0
        for k, p in enumerate(positions):
            if (g >> (len(positions) - 1 - k)) & 1:
                off |= 1 << p
        offsets.append(off)
    for gi, oi in enumerate(offsets):
        for gj, oj in enumerate(offsets):
            full[bases + oi, bases + oj] = gate_u[gi, gj]
    return full


def compose(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Matrix product U @ V (apply V first, then U)."""
    if u.shape != v.shape or u.shape[0] != u.shape[1]:
        raise ValueError(f"cannot compose shapes {u.shape} and {v.shape}")
    return u @ v


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for normalized pure states."""
    if len(a) != len(b):
        raise ValueError(f"state lengths differ: {len(a)} vs {len(b)}")
    return float(abs(np.vdot(a, b)) ** 2)


def frobenius_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Squared Frobenius norm ||U - V||_F^2."""
    if u.shape != v.shape:
        raise ValueError(f"matrix shapes differ: {u.shape} vs {v.shape}")
    d = u - v
    return float(np.sum(d.real * d.real + d.imag * d.imag))


# ---------------------------------------------------------------------------
# Haar-random sampling
#
# Platform-reproducible by construction: uniforms come from splitmix64 and
# are mapped to normals with the Box-Muller transform, so a seed pins the
# Ginibre matrix bit-for-bit everywhere.

_MASK64 = (1 << 64) - 1


def _splitmix64_stream(seed: int, count: int) -> np.ndarray:
    state = seed & _MASK64
    out = np.empty(count, dtype=np.uint64)
    for i in range(count):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        out[i] = z ^ (z >> 31)
    return out


def _box_muller_normals(seed: int, count: int) -> np.ndarray:
    pairs = (count + 1) // 2
    words = _splitmix64_stream(seed, 2 * pairs)
    # 53-bit mantissa uniforms; u1 shifted into (0, 1] so log(u1) is finite
    u1 = ((words[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
    u2 = (words[1::2] >> np.uint64(11)).astype(np.float64) * 2.0**-53
    radius = np.sqrt(-2.0 * np.log(u1))
    g = np.empty(2 * pairs, dtype=np.float64)
    g[0::2] = radius * np.cos(2.0 * np.pi * u2)
    g[1::2] = radius * np.sin(2.0 * np.pi * u2)
    return g[:count]


def haar_random_unitary(num_qubits: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    The Q factor's columns are multiplied by the phases of R's diagonal,
    which removes the QR sign ambiguity and yields the Haar measure.
    """
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ConfigError(f"num_qubits must be in [1, {MAX_QUBITS}]")
    dim = 1 << num_qubits
    g = _box_muller_normals(seed, 2 * dim * dim)
    z = (g[0::2] + 1j * g[1::2]).reshape(dim, dim) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r).copy()
    moduli = np.abs(diag)
    phases = np.where(moduli > 0, diag / np.where(moduli > 0, moduli, 1.0), 1.0)
    return q * phases[np.newaxis, :]


def haar_random_state(num_qubits: int, seed: int) -> np.ndarray:
    """Haar-random state U|0...0>, i.e. the first column of a Haar unitary."""
    return haar_random_unitary(num_qubits, seed)[:, 0].copy()


def measure_qubit(
    state: np.ndarray, qubit: int, rng: np.random.Generator
) -> tuple[int, np.ndarray]:
    """Projectively measure one qubit; return (outcome, collapsed state).

    The outcome is sampled from the qubit's marginal; amplitudes
    inconsistent with it are zeroed and the rest renormalized. A certain
    outcome (marginal 0 or 1) is never "missed" by sampling noise.
    """
    num_qubits = num_qubits_of(len(state))
    if not 0 <= qubit < num_qubits:
        raise InvalidActionError(f"qubit {qubit} out of range for {num_qubits} qubits")
    pos = _bit_position(qubit, num_qubits)
    bit_set = (np.arange(len(state)) >> pos) & 1 == 1
    p1 = float(np.sum(np.abs(state[bit_set]) ** 2))
    if p1 <= 0.0:
        outcome = 0
    elif p1 >= 1.0:
        outcome = 1
    else:
        outcome = 1 if rng.random() < p1 else 0
    keep = bit_set if outcome == 1 else ~bit_set
    collapsed = np.where(keep, state, 0.0).astype(np.complex128)
    collapsed /= np.linalg.norm(collapsed)
    return outcome, collapsed


# ---------------------------------------------------------------------------
# Plain-text serialization ("dims: <rows> <cols>" header, one "re im" pair
# per entry in row-major order). Used for custom challenge targets.


def dump_array(arr: np.ndarray, path: str) -> None:
    """Write a statevector (cols=1) or matrix to the plain-text format."""
    mat = np.atleast_2d(np.asarray(arr, dtype=np.complex128))
    if arr.ndim == 1:
        mat = mat.T
    rows, cols = mat.shape
    with open(path, "w") as f:
        f.write(f"dims: {rows} {cols}\n")
        for r in range(rows):
            for c in range(cols):
                z = mat[r, c]
                f.write(f"{z.real:.17g} {z.imag:.17g}\n")


def load_array(path: str) -> np.ndarray:
    """Read the plain-text format; returns 1-D for cols=1, else 2-D."""
    with open(path) as f:
        header = f.readline()
        parts = header.split()
        if len(parts) != 3 or parts[0] != "dims:":
            raise ParseError(f"{path}:1: expected 'dims: <rows> <cols>'")
        try:
            rows, cols = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"{path}:1: non-integer dims {parts[1]!r} {parts[2]!r}")
        if rows < 1 or cols < 1:
            raise ParseError(f"{path}:1: dims must be positive")
        entries = np.empty(rows * cols, dtype=np.complex128)
        for i in range(rows * cols):
            line = f.readline()
            fields = line.split()
            if len(fields) != 2:
                raise ParseError(f"{path}:{i + 2}: expected 're im', got {line!r}")
            try:
                entries[i] = complex(float(fields[0]), float(fields[1]))
            except ValueError:
                raise ParseError(f"{path}:{i + 2}: malformed number in {line!r}")
    if cols == 1:
        return entries
    return entries.reshape(rows, cols)


def is_unitary(u: np.ndarray, tol: float = 1e-9) -> bool:
    """U @ U^dagger == I within an entrywise tolerance."""
    n = u.shape[0]
    return u.shape == (n, n) and np.allclose(
        u @ u.conj().T, np.eye(n), atol=tol, rtol=0.0
    )
