"""Exact small-blocklength simulation of block-coded quantum decoding.

Builds explicit n-fold typical and conditionally typical projectors, the
square-root measurement over a random codebook, and the exact average
error probability of that measurement.  Everything is dense linear
algebra on matrices of dimension dim^n, so a hard budget keeps n small;
there are no asymptotics here, only exact numbers at desk scale.

Conditional typicality is judged against the empirical conditional
entropy of the actual codeword, not the ensemble average: at n <= 10
the ensemble window is so loose that every sequence qualifies, and no
trend would be visible.  A classical Monte-Carlo decoder with the same
typicality rules serves as a baseline.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .channels import CqChannel, Povm, SchemaError
from .entropic import ProbDist, shannon_entropy, von_neumann_entropy
from .qstate import DensityMatrix, InvariantError, eig_hermitian

# n * log2(dim) above this would need matrices beyond 2^14 dimensions
DIMENSION_BUDGET_BITS = 14

PROJECTOR_TOL = 1e-8
SRM_COMPLETENESS_TOL = 1e-8
PINV_RELATIVE_CUTOFF = 1e-10
EIG_FLOOR = 1e-12


def _check_budget(dim, n):
    bits = n * math.log2(dim)
    if bits > DIMENSION_BUDGET_BITS + 1e-9:
        raise SchemaError(
            f"blocklength {n} over a dimension-{dim} output needs "
            f"2^{bits:.1f}-dimensional matrices; the budget is 2^{DIMENSION_BUDGET_BITS}"
        )


def message_count(n, rate):
    """Codebook size for rate R at blocklength n, never below one."""
    return max(1, round(2.0 ** (n * rate)))


@dataclass(frozen=True)
class Codebook:
    """Block code: M codewords of length n over a channel input alphabet."""

    n: int
    codewords: tuple
    seed: object = None
    prior: object = None

    def __post_init__(self):
        words = tuple(tuple(str(s) for s in w) for w in self.codewords)
        if not words:
            raise SchemaError("codebook needs at least one codeword")
        for m, w in enumerate(words):
            if len(w) != self.n:
                raise SchemaError(
                    f"codeword {m} has length {len(w)}, blocklength is {self.n}"
                )
        object.__setattr__(self, "codewords", words)

    @property
    def M(self):
        return len(self.codewords)

    @classmethod
    def random(cls, alphabet, n, rate, seed, prior=None):
        """Draw M = max(1, round(2^{nR})) codewords i.i.d. from the prior.

        The same seed always reproduces the same codebook.
        """
        alphabet = tuple(str(s) for s in alphabet)
        if prior is None:
            prior = ProbDist.uniform(alphabet)
        if tuple(prior.symbols) != alphabet:
            raise SchemaError("prior must be over the channel input alphabet")
        rng = np.random.default_rng(seed)
        draws = rng.choice(len(alphabet), size=(message_count(n, rate), n),
                           p=prior.weights)
        words = tuple(tuple(alphabet[i] for i in row) for row in draws)
        return cls(n=n, codewords=words, seed=seed, prior=prior)


def _positive_logs(evals):
    logs = np.full(len(evals), -np.inf)
    pos = evals > EIG_FLOOR
    logs[pos] = np.log2(evals[pos])
    return logs


def _sequence_projector(bases, logs, n, dim, center, delta):
    """Projector onto product eigenvectors whose per-sequence sample
    entropy sits within delta of the target value.

    ``bases[i]`` and ``logs[i]`` give position i's eigenvectors and log
    eigenvalues; a sequence with any zero-weight eigenvector is never
    typical.
    """
    total = reduce(np.add.outer, logs).ravel() if n > 1 else logs[0]
    with np.errstate(invalid="ignore"):
        mask = np.abs(-total / n - center) <= delta
    full = dim**n
    if mask.all():
        return np.eye(full, dtype=complex)
    sel = np.flatnonzero(mask)
    if len(sel) == 0:
        return np.zeros((full, full), dtype=complex)
    digits = np.stack(np.unravel_index(sel, (dim,) * n), axis=1)
    cols = np.ones((len(sel), 1), dtype=complex)
    for pos in range(n):
        u = bases[pos][:, digits[:, pos]].T
        cols = (cols[:, :, None] * u[:, None, :]).reshape(len(sel), -1)
    v = cols.T
    return v @ v.conj().T


def typical_projector(rho, n, delta):
    """Projector onto the delta-typical subspace of n copies of rho."""
    if delta < 0:
        raise SchemaError(f"typicality width must be >= 0, got {delta}")
    dim = rho.dim
    _check_budget(dim, n)
    spec = eig_hermitian(rho)
    h = von_neumann_entropy(rho)
    logs = _positive_logs(spec.eigenvalues)
    return _sequence_projector([spec.eigenvectors] * n, [logs] * n, n, dim, h, delta)


def cond_typical_projector(ch, xn, delta):
    """Projector onto outputs typical for the given input word.

    The typicality center is the empirical conditional entropy: the mean
    output entropy of the symbols actually appearing in ``xn``.
    """
    if delta < 0:
        raise SchemaError(f"typicality width must be >= 0, got {delta}")
    if ch.n_inputs != 1:
        raise SchemaError("conditionally typical projectors need a single-input channel")
    word = tuple(str(s) for s in xn)
    n = len(word)
    if n == 0:
        raise SchemaError("empty input word")
    dim = ch.output_dim
    _check_budget(dim, n)
    decomp = {}
    for x in dict.fromkeys(word):
        spec = eig_hermitian(ch.output(x))
        decomp[x] = (
            spec.eigenvectors,
            _positive_logs(spec.eigenvalues),
            von_neumann_entropy(ch.output(x)),
        )
    h_emp = float(np.mean([decomp[x][2] for x in word]))
    bases = [decomp[x][0] for x in word]
    logs = [decomp[x][1] for x in word]
    return _sequence_projector(bases, logs, n, dim, h_emp, delta)


def _validate_projector(p, what):
    if np.max(np.abs(p - p.conj().T)) > PROJECTOR_TOL:
        raise InvariantError(f"{what} is not Hermitian")
    if np.max(np.abs(p @ p - p)) > PROJECTOR_TOL:
        raise InvariantError(f"{what} is not idempotent")


@dataclass(frozen=True)
class ProjectorSet:
    """Average-output typical projector plus one conditional projector
    per codeword, all at the same typicality width."""

    average: np.ndarray
    conditional: tuple
    delta: float

    def __post_init__(self):
        avg = np.array(self.average, dtype=complex)
        conds = tuple(np.array(c, dtype=complex) for c in self.conditional)
        _validate_projector(avg, "average projector")
        for m, c in enumerate(conds):
            if c.shape != avg.shape:
                raise SchemaError(f"projector {m} has shape {c.shape}, want {avg.shape}")
            _validate_projector(c, f"conditional projector {m}")
        avg.setflags(write=False)
        for c in conds:
            c.setflags(write=False)
        object.__setattr__(self, "average", avg)
        object.__setattr__(self, "conditional", conds)


def _codebook_frequencies(ch, codebook):
    alphabet = ch.input_alphabets[0]
    if codebook.prior is not None:
        return codebook.prior
    counts = {s: 0 for s in alphabet}
    for w in codebook.codewords:
        for s in w:
            counts[s] += 1
    total = codebook.n * codebook.M
    return ProbDist(alphabet, [counts[s] / total for s in alphabet])


def projector_set(ch, codebook, delta):
    """Build the decoder's projectors for a codebook.

    The average projector is the typical projector of the mean output
    state under the codebook's prior (or its empirical symbol
    frequencies when no prior is recorded).
    """
    if ch.n_inputs != 1:
        raise SchemaError("decoder simulation needs a single-input channel")
    freq = _codebook_frequencies(ch, codebook)
    mean = sum(
        freq.prob(x) * ch.output(x).entries for x in ch.input_alphabets[0]
    )
    rho_bar = DensityMatrix(mean, ch.dims)
    avg = typical_projector(rho_bar, codebook.n, delta)
    conds = tuple(
        cond_typical_projector(ch, w, delta) for w in codebook.codewords
    )
    return ProjectorSet(average=avg, conditional=conds, delta=delta)


def _word_state(ch, word):
    mats = [ch.output(x).entries for x in word]
    return reduce(np.kron, mats) if len(mats) > 1 else mats[0]


def _detection_operators(projs):
    pbar = projs.average
    return [pbar @ c @ pbar for c in projs.conditional]


def square_root_measurement(ch, codebook, delta, projs=None):
    """Square-root (pretty good) measurement for the codebook.

    Each detection operator P_m sandwiches the codeword's conditional
    projector between average projectors; the POVM normalizes them by
    S^{-1/2} on the support of S = sum P_m and appends the remainder as
    a "fail" outcome.  The support rank and pseudo-inverse cutoff are
    reported in the POVM's info dict so rank deficiency is visible
    rather than silently absorbed.
    """
    if projs is None:
        projs = projector_set(ch, codebook, delta)
    ps = _detection_operators(projs)
    s = sum(ps)
    s = (s + s.conj().T) / 2.0
    evals, evecs = np.linalg.eigh(s)
    top = float(evals[-1]) if len(evals) else 0.0
    cutoff = PINV_RELATIVE_CUTOFF * max(top, 0.0)
    keep = evals > cutoff
    inv_root = (evecs[:, keep] * evals[keep] ** -0.5) @ evecs[:, keep].conj().T
    lams = []
    for p in ps:
        lam = inv_root @ p @ inv_root
        lams.append((lam + lam.conj().T) / 2.0)
    info = {
        "s_rank": int(keep.sum()),
        "dim": s.shape[0],
        "pinv_cutoff": cutoff,
        "delta": projs.delta,
    }
    return Povm.complete(
        lams,
        labels=tuple(range(len(lams))),
        remainder_label="fail",
        info=info,
        completeness_tol=SRM_COMPLETENESS_TOL,
    )


def exact_error(ch, codebook, povm):
    """Average over messages of 1 - Tr[Lambda_m rho_{x^n(m)}], exactly."""
    if len(povm.elements) < codebook.M:
        raise SchemaError(
            f"POVM has {len(povm.elements)} outcomes for {codebook.M} messages"
        )
    errs = []
    for m, word in enumerate(codebook.codewords):
        rho = _word_state(ch, word)
        hit = float(np.trace(povm.elements[m] @ rho).real)
        errs.append(1.0 - hit)
    return float(np.clip(np.mean(errs), 0.0, 1.0))


def hn_diagnostic(ch, codebook, projs):
    """Average of 2 Tr[(I - P_m) rho_m] + 4 sum_{k != m} Tr[P_k rho_m].

    An operator-union bound on the square-root measurement's error,
    evaluated exactly.  It is a diagnostic column, often far above the
    exact error (and above 1) at these blocklengths.
    """
    ps = _detection_operators(projs)
    eye = np.eye(ps[0].shape[0], dtype=complex)
    vals = []
    for m, word in enumerate(codebook.codewords):
        rho = _word_state(ch, word)
        miss = float(np.trace((eye - ps[m]) @ rho).real)
        confuse = sum(
            float(np.trace(ps[k] @ rho).real)
            for k in range(codebook.M)
            if k != m
        )
        vals.append(2.0 * miss + 4.0 * confuse)
    return float(np.mean(vals))


def srm_error_sweep(ch, rate, blocklengths, delta, seeds, prior=None):
    """Exact error and diagnostic rows over blocklengths and seeds.

    Returns (n, R, seed, delta, exact_error, hn_bound) tuples in sweep
    order, one per (blocklength, seed) pair.
    """
    alphabet = ch.input_alphabets[0]
    # reject the whole sweep before computing anything
    for n in blocklengths:
        _check_budget(ch.output_dim, n)
    rows = []
    for n in blocklengths:
        for seed in seeds:
            cb = Codebook.random(alphabet, n, rate, seed, prior)
            projs = projector_set(ch, cb, delta)
            povm = square_root_measurement(ch, cb, delta, projs=projs)
            rows.append(
                (
                    n,
                    rate,
                    seed,
                    delta,
                    exact_error(ch, cb, povm),
                    hn_diagnostic(ch, cb, projs),
                )
            )
    return rows


def export_error_csv(rows, path):
    """Write sweep rows with the standard header."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "R", "seed", "delta", "exact_error", "hn_bound"])
        for n, rate, seed, delta, err, hn in rows:
            writer.writerow(
                [n, f"{rate:.10g}", seed, f"{delta:.10g}", f"{err:.10g}", f"{hn:.10g}"]
            )


@dataclass(frozen=True)
class ClassicalDecodeResult:
    """Tally of a classical typical-set decoding run.

    ``wrong_match`` counts trials where some wrong codeword looked
    conditionally typical, whether or not the true one did.
    """

    trials: int
    errors: int
    output_atypical: int
    no_match: int
    multi_match: int
    wrong_match: int

    @property
    def error_rate(self):
        return self.errors / self.trials


def classical_typical_decode_sim(transition, p, rate, n, delta, trials, seed=0):
    """Monte-Carlo typical-set decoder over random classical codebooks.

    Each trial draws a fresh codebook i.i.d. from ``p``, sends message 0,
    samples the channel, and decodes: fail if the output sequence is not
    typical for the output marginal, otherwise accept a codeword exactly
    when the output is conditionally typical for it (empirical centers,
    same rule as the quantum decoder) and succeed only on a unique,
    correct match.
    """
    t = np.array(transition, dtype=float)
    if t.ndim != 2:
        raise SchemaError("transition must be a matrix")
    if np.any(t < 0) or np.max(np.abs(t.sum(axis=1) - 1.0)) > 1e-10:
        raise InvariantError("transition rows must be probability vectors")
    if n < 1 or trials < 1 or rate < 0 or delta < 0:
        raise SchemaError("need n >= 1, trials >= 1, rate >= 0, delta >= 0")
    weights = np.asarray(p.weights, dtype=float)
    if len(weights) != t.shape[0]:
        raise SchemaError(f"prior has {len(weights)} symbols, transition {t.shape[0]} rows")
    out = weights @ t
    h_out = shannon_entropy(ProbDist(range(t.shape[1]), out))
    with np.errstate(divide="ignore"):
        log_t = np.log2(t)
        log_out = np.log2(out)
    h_rows = np.array(
        [shannon_entropy(ProbDist(range(t.shape[1]), row)) for row in t]
    )
    m_count = message_count(n, rate)
    rng = np.random.default_rng(seed)
    errors = atypical = none = multi = wrong = 0
    for _ in range(trials):
        cb = rng.choice(len(weights), size=(m_count, n), p=weights)
        xn = cb[0]
        yn = np.array([rng.choice(t.shape[1], p=t[x]) for x in xn])
        if abs(-log_out[yn].sum() / n - h_out) > delta:
            atypical += 1
            errors += 1
            continue
        sample = -log_t[cb, yn[None, :]].sum(axis=1) / n
        centers = h_rows[cb].mean(axis=1)
        with np.errstate(invalid="ignore"):
            matches = np.flatnonzero(np.abs(sample - centers) <= delta)
        if len(matches) != 1 or matches[0] != 0:
            errors += 1
        if len(matches) == 0:
            none += 1
        elif len(matches) > 1:
            multi += 1
        if np.any(matches != 0):
            wrong += 1
    return ClassicalDecodeResult(
        trials=trials,
        errors=errors,
        output_atypical=atypical,
        no_match=none,
        multi_match=multi,
        wrong_match=wrong,
    )
