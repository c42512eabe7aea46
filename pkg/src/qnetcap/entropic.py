"""Entropy and information functionals over probability vectors and labeled
classical-quantum joint states.

All logarithms are base 2; every quantity is in bits.  Classical registers are
treated as orthogonal diagonal blocks, so the entropy of a classical/quantum
subset decomposes as H(p) + sum_c p(c) H(rho_c); subsets with no quantum label
marginalize the table directly instead of building any matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import DensityMatrix, InvariantError, partial_trace

PROB_SUM_TOL = 1e-10
EIG_CUTOFF = 1e-12  # below the spectral noise floor of state validation


@dataclass(frozen=True, eq=False)
class ProbDist:
    """Nonnegative weights over a named finite alphabet, summing to one."""

    symbols: tuple
    weights: np.ndarray

    def __init__(self, symbols, weights):
        symbols = tuple(symbols)
        w = np.array(weights, dtype=float).reshape(-1)
        if len(symbols) != w.size:
            raise InvariantError(
                f"{len(symbols)} symbols but {w.size} weights"
            )
        if w.size and float(w.min()) < -1e-12:
            raise InvariantError(f"negative weight {float(w.min()):.3e}")
        w = np.maximum(w, 0.0)
        if abs(float(w.sum()) - 1.0) > PROB_SUM_TOL:
            raise InvariantError(f"weights sum to {float(w.sum())!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "weights", w)

    def prob(self, symbol) -> float:
        return float(self.weights[self.symbols.index(symbol)])

    def items(self):
        return zip(self.symbols, self.weights)

    @classmethod
    def uniform(cls, symbols) -> "ProbDist":
        symbols = tuple(symbols)
        return cls(symbols, np.full(len(symbols), 1.0 / len(symbols)))

    @classmethod
    def point_mass(cls, symbols, at) -> "ProbDist":
        symbols = tuple(symbols)
        w = np.zeros(len(symbols))
        w[symbols.index(at)] = 1.0
        return cls(symbols, w)


def _entropy_bits(values, cutoff: float = 0.0) -> float:
    v = np.asarray(values, dtype=float)
    v = v[v > cutoff]
    if v.size == 0:
        return 0.0
    return float(-np.sum(v * np.log2(v)))


def shannon_entropy(p: ProbDist) -> float:
    """H(p) in bits, with 0 log 0 := 0."""
    return _entropy_bits(p.weights)


def binary_entropy(p: float) -> float:
    """H2(p) = -p log p - (1-p) log(1-p)."""
    if not 0.0 <= p <= 1.0:
        raise InvariantError(f"binary entropy argument {p!r} outside [0, 1]")
    return _entropy_bits([p, 1.0 - p])


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-Tr(rho log rho): Shannon entropy of the spectrum.

    Eigenvalues below 1e-12 contribute zero.
    """
    return _entropy_bits(np.linalg.eigvalsh(rho.entries), cutoff=EIG_CUTOFF)


def g_thermal(n: float) -> float:
    """Entropy g(N) = (N+1) log(N+1) - N log N of a thermal state with mean
    photon number N; g(0) = 0."""
    if n < 0:
        raise InvariantError(f"mean photon number {n!r} is negative")
    if n == 0:
        return 0.0
    return float((n + 1) * np.log2(n + 1) - n * np.log2(n))


class LabeledCqState:
    """Joint state of named classical registers and named quantum subsystems.

    ``registers`` is an ordered list of (name, alphabet) pairs; ``table`` maps
    each full classical symbol tuple to (probability, conditional
    DensityMatrix); ``quantum_names`` labels the subsystems of the conditional
    matrices, one name per dims slot.
    """

    def __init__(self, registers, table, quantum_names):
        self.registers = tuple((str(n), tuple(a)) for n, a in registers)
        self.register_names = tuple(n for n, _ in self.registers)
        self.quantum_names = tuple(str(n) for n in quantum_names)
        if set(self.register_names) & set(self.quantum_names):
            raise InvariantError("classical and quantum names overlap")
        items = {}
        dims = None
        total = 0.0
        for key, (p, rho) in table.items():
            key = tuple(key)
            if len(key) != len(self.registers):
                raise InvariantError(
                    f"tuple {key} has {len(key)} symbols for "
                    f"{len(self.registers)} registers"
                )
            p = float(p)
            if p < -1e-12:
                raise InvariantError(f"negative probability {p:.3e} at {key}")
            p = max(p, 0.0)
            if not isinstance(rho, DensityMatrix):
                raise InvariantError(f"conditional at {key} is not a DensityMatrix")
            if dims is None:
                dims = rho.dims
            elif rho.dims != dims:
                raise InvariantError(
                    f"conditional dims differ: {rho.dims} at {key} vs {dims}"
                )
            total += p
            items[key] = (p, rho)
        if dims is not None and len(dims) != len(self.quantum_names):
            raise InvariantError(
                f"{len(self.quantum_names)} quantum names for {len(dims)} dims"
            )
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise InvariantError(f"table probabilities sum to {total!r}, not 1")
        self.table = items
        self.dims = dims

    def _split(self, names):
        names = set(names)
        unknown = names - set(self.register_names) - set(self.quantum_names)
        if unknown:
            raise InvariantError(f"unknown names {sorted(unknown)}")
        classical = [i for i, n in enumerate(self.register_names) if n in names]
        quantum = [i for i, n in enumerate(self.quantum_names) if n in names]
        return classical, quantum

    def entropy(self, names) -> float:
        """Joint entropy H(S) of any mix of classical and quantum names, bits."""
        classical, quantum = self._split(names)
        if not quantum:
            marginal = {}
            for key, (p, _) in self.table.items():
                sub = tuple(key[i] for i in classical)
                marginal[sub] = marginal.get(sub, 0.0) + p
            return _entropy_bits(list(marginal.values()))
        groups: dict[tuple, list] = {}
        for key, (p, rho) in self.table.items():
            if p <= 0.0:
                continue
            groups.setdefault(tuple(key[i] for i in classical), []).append((p, rho))
        h = 0.0
        weights = []
        for members in groups.values():
            pc = sum(p for p, _ in members)
            weights.append(pc)
            block = 0.0
            for p, rho in members:
                reduced = partial_trace(rho, quantum) if len(quantum) < len(
                    self.dims
                ) else rho
                block = block + p * reduced.entries
            block = block / pc
            h += pc * _entropy_bits(np.linalg.eigvalsh(block), cutoff=EIG_CUTOFF)
        return h + _entropy_bits(weights)


def conditional_mutual_information(state: LabeledCqState, a, b, c=()) -> float:
    """I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C), in bits.

    A and C must be classical register names; B may mix classical registers
    and quantum subsystem labels.  With C empty this is the plain mutual
    information I(A;B).
    """
    a, b, c = set(a), set(b), set(c)
    if (a & b) or (a & c) or (b & c):
        raise InvariantError("register sets overlap")
    quantum = set(state.quantum_names)
    if a & quantum or c & quantum:
        raise InvariantError("A and C must be classical register sets")
    h_c = state.entropy(c) if c else 0.0
    return (
        state.entropy(a | c)
        + state.entropy(b | c)
        - state.entropy(a | b | c)
        - h_c
    )


def cq_state(alphabet, conditionals, p: ProbDist, register="X", quantum_names=("B",)) -> LabeledCqState:
    """Build the joint state sum_x p(x) |x><x| (x) rho_x."""
    table = {}
    for x in alphabet:
        table[(x,)] = (p.prob(x), conditionals[x])
    return LabeledCqState([(register, tuple(alphabet))], table, quantum_names)


def holevo_information(channel, p: ProbDist) -> float:
    """I(X;B) of the joint state induced by a single-input cq channel."""
    if len(channel.input_alphabets) != 1:
        raise InvariantError("holevo_information needs a single-input channel")
    alphabet = channel.input_alphabets[0]
    conditionals = {x: channel.outputs[(x,)] for x in alphabet}
    state = cq_state(alphabet, conditionals, p, quantum_names=channel.output_names)
    return conditional_mutual_information(state, {"X"}, set(channel.output_names))
