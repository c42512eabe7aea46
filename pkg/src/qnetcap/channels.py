"""Finite classical-quantum channel models.

A channel maps tuples of classical input symbols (one or two senders) to
density matrices on one or two named quantum output systems.  This module
holds the channel type, POVMs, JSON load/dump, a registry of worked example
channels, and derived channels (marginals, input averages, measured
classical channels).
"""

from __future__ import annotations

import itertools
import json
from pathlib import Path

import numpy as np

from .entropic import ProbDist
from .qstate import (
    DensityMatrix,
    InvariantError,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    pure_state,
)

POVM_COMPLETENESS_TOL = 1e-9
POVM_PSD_TOL = -1e-10

KET0 = np.array([1.0, 0.0])
KET1 = np.array([0.0, 1.0])
KET_PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)
KET_MINUS = np.array([1.0, -1.0]) / np.sqrt(2.0)


class SchemaError(ValueError):
    """A document, name, or argument does not match the expected structure."""


class CqChannel:
    """Map from classical input tuples to output density matrices.

    ``input_alphabets`` is a tuple of one or two symbol tuples (symbols are
    canonicalized to str), ``outputs`` maps each full input tuple to a
    DensityMatrix, and ``output_names`` labels the subsystem slots of the
    output dims, e.g. ("B",) or ("B1", "B2").
    """

    def __init__(self, input_alphabets, outputs, input_names=None, output_names=None):
        alphabets = tuple(tuple(str(s) for s in a) for a in input_alphabets)
        if not 1 <= len(alphabets) <= 2:
            raise SchemaError(f"{len(alphabets)} input alphabets; need 1 or 2")
        for a in alphabets:
            if len(a) != len(set(a)):
                raise SchemaError(f"alphabet {a} has repeated symbols")
        if input_names is None:
            input_names = ("X",) if len(alphabets) == 1 else ("X1", "X2")
        input_names = tuple(str(n) for n in input_names)
        if len(input_names) != len(alphabets):
            raise SchemaError(
                f"{len(input_names)} input names for {len(alphabets)} alphabets"
            )

        canon = {}
        for key, rho in outputs.items():
            if not isinstance(key, tuple):
                key = (key,)
            canon[tuple(str(s) for s in key)] = rho
        combos = set(itertools.product(*alphabets))
        missing = combos - set(canon)
        if missing:
            raise SchemaError(f"no output for input {sorted(missing)[0]}")
        extra = set(canon) - combos
        if extra:
            raise SchemaError(f"output for unknown input {sorted(extra)[0]}")
        dims = None
        for combo in sorted(combos):
            rho = canon[combo]
            if not isinstance(rho, DensityMatrix):
                raise SchemaError(f"output for input {combo} is not a DensityMatrix")
            if dims is None:
                dims = rho.dims
            elif rho.dims != dims:
                raise InvariantError(
                    f"output dims {rho.dims} at input {combo} differ from {dims}"
                )

        if output_names is None:
            output_names = ("B",) if len(dims) == 1 else tuple(
                f"B{i + 1}" for i in range(len(dims))
            )
        output_names = tuple(str(n) for n in output_names)
        if len(output_names) != len(dims):
            raise SchemaError(
                f"{len(output_names)} output names for {len(dims)} subsystems"
            )
        if not 1 <= len(output_names) <= 2:
            raise SchemaError(f"{len(output_names)} quantum outputs; need 1 or 2")

        self.input_names = input_names
        self.input_alphabets = alphabets
        self.outputs = canon
        self.output_names = output_names
        self.dims = dims

    @property
    def n_inputs(self) -> int:
        return len(self.input_alphabets)

    @property
    def output_dim(self) -> int:
        return int(np.prod(self.dims))

    def output(self, *symbols) -> DensityMatrix:
        key = tuple(str(s) for s in symbols)
        try:
            return self.outputs[key]
        except KeyError:
            raise SchemaError(f"no output for input {key}") from None

    def input_tuples(self):
        return itertools.product(*self.input_alphabets)


class Povm:
    """Measurement: PSD elements summing to the identity.

    ``info`` is a free-form dict for construction diagnostics (e.g. the
    support rank used by a square-root measurement).
    """

    def __init__(self, elements, labels=None, info=None, completeness_tol=POVM_COMPLETENESS_TOL):
        mats = tuple(np.array(e, dtype=complex) for e in elements)
        if not mats:
            raise SchemaError("empty POVM")
        d = mats[0].shape[0]
        for k, e in enumerate(mats):
            if e.shape != (d, d):
                raise SchemaError(f"element {k} has shape {e.shape}, want {(d, d)}")
            if np.max(np.abs(e - e.conj().T)) > 1e-9:
                raise InvariantError(f"element {k} is not Hermitian")
            low = float(np.linalg.eigvalsh(e)[0])
            if low < POVM_PSD_TOL:
                raise InvariantError(f"element {k} has eigenvalue {low:.3e}")
            e.setflags(write=False)
        total = sum(mats)
        defect = float(np.max(np.abs(total - np.eye(d))))
        if defect > completeness_tol:
            raise InvariantError(f"POVM completeness defect {defect:.3e}")
        self.elements = mats
        self.labels = tuple(labels) if labels is not None else tuple(range(len(mats)))
        if len(self.labels) != len(mats):
            raise SchemaError(f"{len(self.labels)} labels for {len(mats)} elements")
        self.info = dict(info) if info else {}

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def computational(cls, dim: int) -> "Povm":
        """Projectors onto the standard basis, labeled "0".."dim-1"."""
        eye = np.eye(dim, dtype=complex)
        return cls(
            [np.outer(eye[:, k], eye[:, k].conj()) for k in range(dim)],
            labels=tuple(str(k) for k in range(dim)),
        )

    @classmethod
    def qubit_projective(cls, angle: float) -> "Povm":
        """Qubit projectors onto directions angle and angle + pi/2."""
        v0 = np.array([np.cos(angle), np.sin(angle)])
        v1 = np.array([-np.sin(angle), np.cos(angle)])
        return cls(
            [np.outer(v0, v0), np.outer(v1, v1)],
            labels=("0", "1"),
        )

    @classmethod
    def complete(cls, elements, labels=None, remainder_label=None, info=None,
                 completeness_tol=POVM_COMPLETENESS_TOL) -> "Povm":
        """Append the remainder I - sum(elements) as a final outcome."""
        mats = [np.array(e, dtype=complex) for e in elements]
        d = mats[0].shape[0]
        remainder = np.eye(d, dtype=complex) - sum(mats)
        if labels is None:
            labels = tuple(range(len(mats)))
        return cls(
            mats + [remainder],
            labels=tuple(labels) + (remainder_label,),
            info=info,
            completeness_tol=completeness_tol,
        )


def measurement_probabilities(povm: Povm, rho: DensityMatrix) -> np.ndarray:
    """Outcome distribution Tr[E_y rho] over the POVM's labels."""
    if povm.dim != rho.dim:
        raise InvariantError(f"POVM dim {povm.dim} vs state dim {rho.dim}")
    p = np.array([np.trace(e @ rho.entries).real for e in povm.elements])
    return np.clip(p, 0.0, None)


def induced_classical_channel(ch: CqChannel, povm: Povm) -> np.ndarray:
    """Transition matrix p(y|x) = Tr[E_y rho_x] for a single-input channel.

    Rows follow the input alphabet order, columns the POVM label order; each
    row is a probability vector.
    """
    if ch.n_inputs != 1:
        raise SchemaError("induced classical channel needs a single-input channel")
    rows = [measurement_probabilities(povm, ch.output(x)) for x in ch.input_alphabets[0]]
    t = np.array(rows)
    if np.max(np.abs(t.sum(axis=1) - 1.0)) > 1e-9:
        raise InvariantError("transition rows do not sum to 1")
    return t


def marginal_output(ch: CqChannel, keep) -> CqChannel:
    """Restrict outputs to the named quantum subsystems via partial trace."""
    keep = {str(n) for n in keep}
    unknown = keep - set(ch.output_names)
    if unknown:
        raise SchemaError(f"unknown output names {sorted(unknown)}")
    if not keep:
        raise SchemaError("empty keep set")
    idx = [i for i, n in enumerate(ch.output_names) if n in keep]
    if len(idx) == len(ch.output_names):
        return ch
    outputs = {key: partial_trace(rho, idx) for key, rho in ch.outputs.items()}
    return CqChannel(
        ch.input_alphabets,
        outputs,
        input_names=ch.input_names,
        output_names=tuple(ch.output_names[i] for i in idx),
    )


def averaged_channel(ch: CqChannel, average_over: int, p: ProbDist) -> CqChannel:
    """Average a two-input channel over one input: rho-bar_x1 = sum_x2 p(x2) rho_x1,x2."""
    if ch.n_inputs != 2:
        raise SchemaError("averaging needs a two-input channel")
    if average_over not in (0, 1):
        raise SchemaError(f"average_over {average_over!r} not an input index")
    alphabet = ch.input_alphabets[average_over]
    weights = {str(x): p.prob(x) for x in p.symbols}
    if set(weights) != set(alphabet):
        raise SchemaError("distribution symbols do not match the averaged alphabet")
    keep = 1 - average_over
    outputs = {}
    for x in ch.input_alphabets[keep]:
        acc = np.zeros((ch.output_dim, ch.output_dim), dtype=complex)
        for y in alphabet:
            key = (x, y) if average_over == 1 else (y, x)
            acc += weights[y] * ch.outputs[key].entries
        outputs[(x,)] = DensityMatrix(acc, ch.dims)
    return CqChannel(
        (ch.input_alphabets[keep],),
        outputs,
        input_names=(ch.input_names[keep],),
        output_names=ch.output_names,
    )


# ---------------------------------------------------------------------------
# worked example channels

def bb84_p2p() -> CqChannel:
    """Point-to-point channel 0 -> |0><0|, 1 -> |+><+|."""
    return CqChannel(
        (("0", "1"),),
        {("0",): pure_state(KET0), ("1",): pure_state(KET_PLUS)},
    )


def bb84_qmac() -> CqChannel:
    """Two-sender channel emitting one of the four BB84 states.

    Sender 2 flips the encoding basis: x2=0 row is {|0>, |+>}, x2=1 row is
    {|->, |1>}.  Also serves as an interference channel in which both
    receivers observe the same system B.
    """
    table = {
        ("0", "0"): pure_state(KET0),
        ("1", "0"): pure_state(KET_PLUS),
        ("0", "1"): pure_state(KET_MINUS),
        ("1", "1"): pure_state(KET1),
    }
    return CqChannel((("0", "1"), ("0", "1")), table)


def theta_swap(theta: float) -> CqChannel:
    """Two-qubit swap interaction of strength theta.

    00 -> |00>, 11 -> |11>, 01 -> cos(t)|01> + sin(t)|10>,
    10 -> -sin(t)|01> + cos(t)|10>; receiver m keeps qubit Bm.
    theta = pi/2 is a full swap.
    """
    c, s = np.cos(theta), np.sin(theta)
    v01 = np.array([0.0, c, s, 0.0])
    v10 = np.array([0.0, -s, c, 0.0])
    table = {
        ("0", "0"): pure_state(np.array([1.0, 0, 0, 0]), dims=(2, 2)),
        ("0", "1"): pure_state(v01, dims=(2, 2)),
        ("1", "0"): pure_state(v10, dims=(2, 2)),
        ("1", "1"): pure_state(np.array([0.0, 0, 0, 1.0]), dims=(2, 2)),
    }
    return CqChannel(
        (("0", "1"), ("0", "1")), table, output_names=("B1", "B2")
    )


def bb84_bc() -> CqChannel:
    """Broadcast channel: receiver 1 gets the clean BB84 state, receiver 2 a
    depolarized copy (30% white noise)."""
    clean = {"0": pure_state(KET0), "1": pure_state(KET_PLUS)}
    eye = np.eye(2, dtype=complex) / 2.0
    table = {}
    for x, rho in clean.items():
        noisy = DensityMatrix(0.7 * rho.entries + 0.3 * eye, (2,))
        joint = np.kron(rho.entries, noisy.entries)
        table[(x,)] = DensityMatrix(joint, (2, 2))
    return CqChannel((("0", "1"),), table, output_names=("B1", "B2"))


def bb84_relay() -> CqChannel:
    """Relay channel with inputs (x, x1): the relay observes the source's
    BB84 state on B1; the destination observes the four-state encoding of
    (x, x1) on B."""
    src = {"0": pure_state(KET0), "1": pure_state(KET_PLUS)}
    dest = {
        ("0", "0"): pure_state(KET0),
        ("1", "0"): pure_state(KET_PLUS),
        ("0", "1"): pure_state(KET_MINUS),
        ("1", "1"): pure_state(KET1),
    }
    table = {}
    for x in ("0", "1"):
        for x1 in ("0", "1"):
            joint = np.kron(src[x].entries, dest[(x, x1)].entries)
            table[(x, x1)] = DensityMatrix(joint, (2, 2))
    return CqChannel(
        (("0", "1"), ("0", "1")),
        table,
        input_names=("X", "X1"),
        output_names=("B1", "B"),
    )


_BUILTINS = {
    "bb84_p2p": (bb84_p2p, 0),
    "bb84_qmac": (bb84_qmac, 0),
    "theta_swap": (theta_swap, 1),
    "bb84_bc": (bb84_bc, 0),
    "bb84_relay": (bb84_relay, 0),
}


def builtin_names():
    return sorted(_BUILTINS)


def builtin(name: str, params=()) -> CqChannel:
    """Construct a named example channel.

    Parameters may be passed in the name itself, e.g. "theta_swap(1.5)".
    """
    name = name.strip()
    params = list(params)
    if name.endswith(")") and "(" in name:
        base, _, inside = name[:-1].partition("(")
        if params:
            raise SchemaError("parameters given both in name and separately")
        name = base.strip()
        inside = inside.strip()
        if inside:
            try:
                params = [float(tok) for tok in inside.split(",")]
            except ValueError:
                raise SchemaError(f"bad parameter list in {name!r}") from None
    if name not in _BUILTINS:
        raise SchemaError(
            f"unknown builtin channel {name!r}; known: {', '.join(builtin_names())}"
        )
    factory, arity = _BUILTINS[name]
    if len(params) != arity:
        raise SchemaError(f"{name} takes {arity} parameter(s), got {len(params)}")
    return factory(*params)


# ---------------------------------------------------------------------------
# JSON interchange
#
# {"alphabets": [[symbols]], "dims": [ints], "outputs": {"x1,x2": matrix}}
# with matrices encoded row-major as [re, im] pairs.

def _key_string(combo) -> str:
    for s in combo:
        if "," in s:
            raise SchemaError(f"symbol {s!r} contains a comma")
    return ",".join(combo)


def load_channel(source) -> CqChannel:
    """Build a channel from a schema document, dict, or path to a JSON file."""
    if isinstance(source, (str, Path)):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise SchemaError(f"cannot read channel file {source}: {exc}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"channel file {source} is not JSON: {exc}") from None
    elif isinstance(source, dict):
        doc = source
    else:
        raise SchemaError(f"cannot load a channel from {type(source).__name__}")

    for key in ("alphabets", "dims", "outputs"):
        if key not in doc:
            raise SchemaError(f"channel document missing {key!r}")
    alphabets = doc["alphabets"]
    if not isinstance(alphabets, list) or not all(isinstance(a, list) for a in alphabets):
        raise SchemaError("'alphabets' must be a list of symbol lists")
    alphabets = tuple(tuple(str(s) for s in a) for a in alphabets)
    dims = doc["dims"]
    if not isinstance(dims, list) or not all(
        isinstance(d, int) and d >= 1 for d in dims
    ):
        raise SchemaError("'dims' must be a list of positive integers")
    dims = tuple(dims)
    size = int(np.prod(dims))
    raw = doc["outputs"]
    if not isinstance(raw, dict):
        raise SchemaError("'outputs' must be an object")

    outputs = {}
    for combo in itertools.product(*alphabets):
        key = _key_string(combo)
        if key not in raw:
            raise SchemaError(f"no output for input {key!r}")
        try:
            m = matrix_from_json(raw[key], size)
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"output for input {key!r}: {exc}") from None
        try:
            outputs[combo] = DensityMatrix(m, dims)
        except InvariantError as exc:
            raise InvariantError(f"output for input {key!r}: {exc}") from None
    known = {_key_string(c) for c in itertools.product(*alphabets)}
    extra = set(raw) - known
    if extra:
        raise SchemaError(f"output for unknown input {sorted(extra)[0]!r}")
    return CqChannel(alphabets, outputs)


def dump_channel(ch: CqChannel) -> dict:
    """Schema document for a channel; json.dumps(..., sort_keys=True) of the
    result round-trips byte-identically through load_channel."""
    return {
        "alphabets": [list(a) for a in ch.input_alphabets],
        "dims": list(ch.dims),
        "outputs": {
            _key_string(combo): matrix_to_json(ch.outputs[combo].entries)
            for combo in ch.input_tuples()
        },
    }
