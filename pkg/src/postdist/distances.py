# src/postdist/distances.py

"""
Distance measures between channels, standard and postselected.

Every supremum-type measure is estimated by a seeded multi-start local
optimizer and therefore is a lower bound on the true value; callers that need
sound inequality checks must keep such estimates on the small side of a
comparison or transfer witnesses (see theorems module).  The renormalized
("hat") measures optimize the nonlinear objective

    f(rho) = || Psi(rho)/tr[Psi(rho)] - Phi(rho)/tr[Phi(rho)] ||_1

over all density matrices, not just pure ones: f is not convex, so a pure-state
restriction would be unsound.  The stabilized measures optimize over pure
states on H (x) H, which is exhaustive for both the diamond distance and its
renormalized counterpart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as npl

from .channels import (
    Channel,
    DensityMatrix,
    PureState,
    require_postselection_pair,
    tensor_with_identity,
)
from .linalg import CapacityError, InvalidInputError, trace_norm

MEASURES = ("dtrD", "dtr", "diamond", "hat-tr", "hat-diamond")

# Input-dimension policy: unstabilized objectives stay cheap up to dim 8;
# stabilized ones square the space, so they stop at dim-4 inputs.
UNSTABILIZED_DIM_CAP = 8
STABILIZED_DIM_CAP = 4

# The sampling oracle is only trusted as a cross-check at tiny dimensions.
ORACLE_UNSTABILIZED_DIM_CAP = 3
ORACLE_STABILIZED_DIM_CAP = 3

GRADIENT_STEP = 1e-6
_SEED_MASK = (1 << 63) - 1


@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start settings; defaults favor accuracy over speed."""

    restarts: int = 64
    max_iterations: int = 2000
    step_tolerance: float = 1e-9
    value_tolerance: float = 1e-8
    master_seed: int = 0


@dataclass(frozen=True)
class DistanceEstimate:
    """
    Optimizer output.  `value` is exactly the measure's objective evaluated at
    `witness` (so it is reproducible), and a lower bound on the supremum.
    `converged` records whether the two best restarts agreed within the value
    tolerance.
    """

    measure: str
    value: float
    witness: object
    restarts_used: int
    converged: bool


# ---------------------------------------------------------------------------
# batched objective machinery
# ---------------------------------------------------------------------------


def _complex_rows(x: np.ndarray, dim: int) -> np.ndarray:
    return x[:, :dim] + 1j * x[:, dim:]


def _normalize_rows(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = npl.norm(v, axis=1)
    bad = norms < 1e-12
    safe = np.where(bad, 1.0, norms)
    return v / safe[:, None], bad


def _herm_trace_norms(x: np.ndarray) -> np.ndarray:
    w = npl.eigvalsh(x)
    return np.abs(w).sum(axis=-1)


def _gram_trace_norms(x: np.ndarray) -> np.ndarray:
    g = np.einsum("mji,mjk->mik", x.conj(), x)
    w = npl.eigvalsh(g)
    return np.sqrt(np.clip(w, 0.0, None)).sum(axis=-1)


def _pure_outputs(stack: np.ndarray, states: np.ndarray) -> np.ndarray:
    # Psi(|u><u|) for a batch of normalized states, without forming |u><u|.
    w = np.einsum("eij,mj->mei", stack, states)
    return np.einsum("mei,mek->mik", w, w.conj())


def _extended_pure_outputs(stack: np.ndarray, states3: np.ndarray) -> np.ndarray:
    # (Psi (x) I)(|u><u|) with u given as (batch, dim_in, anc).
    y = np.einsum("eij,mja->meia", stack, states3)
    m, r = y.shape[0], y.shape[1]
    flat = y.reshape(m, r, -1)
    return np.einsum("mep,meq->mpq", flat, flat.conj())


def _density_outputs(stack: np.ndarray, factors: np.ndarray) -> np.ndarray:
    # Psi(T T^H) for a batch of Ginibre-style factors T.
    m = np.einsum("eij,mjk->meik", stack, factors)
    return np.einsum("meik,melk->mil", m, m.conj())


def _kraus_stacks(chan_a: Channel, chan_b: Channel) -> tuple[np.ndarray, np.ndarray]:
    if (chan_a.dim_in, chan_a.dim_out) != (chan_b.dim_in, chan_b.dim_out):
        raise InvalidInputError(
            f"channel dimensions differ: ({chan_a.dim_in}->{chan_a.dim_out}) vs "
            f"({chan_b.dim_in}->{chan_b.dim_out})"
        )
    return chan_a.kraus_stack, chan_b.kraus_stack


def _objective_dtrD(chan_a: Channel, chan_b: Channel):
    ka, kb = _kraus_stacks(chan_a, chan_b)
    d = chan_a.dim_in

    def fn(x: np.ndarray) -> np.ndarray:
        states, bad = _normalize_rows(_complex_rows(x, d))
        vals = _herm_trace_norms(_pure_outputs(ka, states) - _pure_outputs(kb, states))
        vals[bad] = -np.inf
        return vals

    return fn, 2 * d


def _objective_dtr(chan_a: Channel, chan_b: Channel):
    ka, kb = _kraus_stacks(chan_a, chan_b)
    d = chan_a.dim_in

    def fn(x: np.ndarray) -> np.ndarray:
        u, bad_u = _normalize_rows(_complex_rows(x[:, : 2 * d], d))
        v, bad_v = _normalize_rows(_complex_rows(x[:, 2 * d :], d))
        wau = np.einsum("eij,mj->mei", ka, u)
        wav = np.einsum("eij,mj->mei", ka, v)
        wbu = np.einsum("eij,mj->mei", kb, u)
        wbv = np.einsum("eij,mj->mei", kb, v)
        diff = np.einsum("mei,mek->mik", wau, wav.conj()) - np.einsum(
            "mei,mek->mik", wbu, wbv.conj()
        )
        vals = _gram_trace_norms(diff)
        vals[bad_u | bad_v] = -np.inf
        return vals

    return fn, 4 * d


def _objective_diamond(chan_a: Channel, chan_b: Channel):
    ka, kb = _kraus_stacks(chan_a, chan_b)
    d = chan_a.dim_in

    def fn(x: np.ndarray) -> np.ndarray:
        states, bad = _normalize_rows(_complex_rows(x, d * d))
        s3 = states.reshape(-1, d, d)
        vals = _herm_trace_norms(
            _extended_pure_outputs(ka, s3) - _extended_pure_outputs(kb, s3)
        )
        vals[bad] = -np.inf
        return vals

    return fn, 2 * d * d


def _objective_hat_tr(chan_a: Channel, chan_b: Channel):
    ka, kb = _kraus_stacks(chan_a, chan_b)
    d = chan_a.dim_in

    def fn(x: np.ndarray) -> np.ndarray:
        rows, bad = _normalize_rows(x[:, : d * d] + 1j * x[:, d * d :])
        factors = rows.reshape(-1, d, d)
        out_a = _density_outputs(ka, factors)
        out_b = _density_outputs(kb, factors)
        tr_a = np.einsum("mii->m", out_a).real
        tr_b = np.einsum("mii->m", out_b).real
        bad = bad | (tr_a < 1e-30) | (tr_b < 1e-30)
        tr_a = np.where(tr_a < 1e-30, 1.0, tr_a)
        tr_b = np.where(tr_b < 1e-30, 1.0, tr_b)
        vals = _herm_trace_norms(out_a / tr_a[:, None, None] - out_b / tr_b[:, None, None])
        vals[bad] = -np.inf
        return vals

    return fn, 2 * d * d


def _objective_hat_diamond(chan_a: Channel, chan_b: Channel):
    ka, kb = _kraus_stacks(chan_a, chan_b)
    d = chan_a.dim_in

    def fn(x: np.ndarray) -> np.ndarray:
        states, bad = _normalize_rows(_complex_rows(x, d * d))
        s3 = states.reshape(-1, d, d)
        out_a = _extended_pure_outputs(ka, s3)
        out_b = _extended_pure_outputs(kb, s3)
        tr_a = np.einsum("mii->m", out_a).real
        tr_b = np.einsum("mii->m", out_b).real
        bad = bad | (tr_a < 1e-30) | (tr_b < 1e-30)
        tr_a = np.where(tr_a < 1e-30, 1.0, tr_a)
        tr_b = np.where(tr_b < 1e-30, 1.0, tr_b)
        vals = _herm_trace_norms(out_a / tr_a[:, None, None] - out_b / tr_b[:, None, None])
        vals[bad] = -np.inf
        return vals

    return fn, 2 * d * d


# ---------------------------------------------------------------------------
# multi-start maximizer
# ---------------------------------------------------------------------------


_LINE_SEARCH = np.array([2.0, 1.0, 0.5, 0.125])


def _restart_rng(master_seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng([master_seed & _SEED_MASK, restart])


def _maximize(batch_fn, n_params: int, cfg: OptimizerConfig) -> tuple[np.ndarray, np.ndarray, int, bool]:
    """
    Run all restarts of a gradient-ascent line-search loop in lockstep.

    Returns (values, points, winner_index, converged).  Restart r starts from
    its own rng stream derived from (master_seed, r); the winner is the maximal
    value with smallest-index tie-break; `converged` means the two best
    restarts agree within the value tolerance.
    """
    if cfg.restarts < 1:
        raise InvalidInputError("optimizer needs at least one restart")
    reps = cfg.restarts
    x = np.empty((reps, n_params))
    for r in range(reps):
        x[r] = _restart_rng(cfg.master_seed, r).standard_normal(n_params)
    x /= np.maximum(npl.norm(x, axis=1), 1e-12)[:, None]
    values = batch_fn(x)
    alpha = np.full(reps, 0.25)
    stall = np.zeros(reps, dtype=int)
    active = np.ones(reps, dtype=bool)
    eye = np.eye(n_params)
    for _ in range(cfg.max_iterations):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        k = idx.size
        xa = x[idx]
        plus = xa[:, None, :] + GRADIENT_STEP * eye[None, :, :]
        minus = xa[:, None, :] - GRADIENT_STEP * eye[None, :, :]
        probe = np.concatenate([plus, minus], axis=1).reshape(2 * k * n_params, n_params)
        sides = batch_fn(probe).reshape(k, 2, n_params)
        grad = (sides[:, 0, :] - sides[:, 1, :]) / (2.0 * GRADIENT_STEP)
        gnorm = npl.norm(grad, axis=1)
        flat = gnorm <= 1e-9
        dirs = grad / np.maximum(gnorm, 1e-300)[:, None]
        steps = alpha[idx, None] * _LINE_SEARCH[None, :]
        cand = xa[:, None, :] + steps[:, :, None] * dirs[:, None, :]
        cand_vals = batch_fn(cand.reshape(k * _LINE_SEARCH.size, n_params))
        cand_vals = cand_vals.reshape(k, _LINE_SEARCH.size)
        pick = np.argmax(cand_vals, axis=1)
        rows = np.arange(k)
        best_vals = cand_vals[rows, pick]
        improved = best_vals > values[idx] + 1e-15
        for j in range(k):
            r = idx[j]
            if flat[j]:
                active[r] = False
                continue
            if improved[j]:
                new_x = cand[j, pick[j]]
                norm = npl.norm(new_x)
                x[r] = new_x / norm if norm > 1e-12 else new_x
                gain = best_vals[j] - values[r]
                values[r] = best_vals[j]
                alpha[r] = min(max(steps[j, pick[j]], 10.0 * cfg.step_tolerance), 4.0)
                stall[r] = stall[r] + 1 if gain < cfg.value_tolerance else 0
            else:
                alpha[r] *= 0.125
                stall[r] += 1
            if alpha[r] < cfg.step_tolerance or stall[r] >= 5:
                active[r] = False
    winner = int(np.argmax(values))
    if reps == 1:
        converged = True
    else:
        top = np.sort(values)[::-1]
        converged = bool(top[0] - top[1] <= cfg.value_tolerance)
    return values, x, winner, converged


# ---------------------------------------------------------------------------
# public objective and measures
# ---------------------------------------------------------------------------


def _canonical_pair(chan_a: Channel, chan_b: Channel) -> tuple[Channel, Channel]:
    # Deterministic argument order makes the symmetric renormalized measures
    # bit-for-bit symmetric (the objective itself is symmetric only in exact
    # arithmetic).
    def key(ch: Channel):
        return (ch.dim_in, ch.dim_out, ch.rank, ch.kraus_stack.tobytes())

    return (chan_b, chan_a) if key(chan_b) < key(chan_a) else (chan_a, chan_b)


def renormalized_distance(
    chan_a: Channel, chan_b: Channel, rho: DensityMatrix | PureState
) -> float:
    """
    Pointwise objective of the postselected distances:
    || Psi(rho)/tr[Psi(rho)] - Phi(rho)/tr[Phi(rho)] ||_1.
    Both channels must be postselection-valid so the traces stay positive.
    """
    chan_a, chan_b = _canonical_pair(chan_a, chan_b)
    _kraus_stacks(chan_a, chan_b)
    require_postselection_pair(chan_a, chan_b)
    if isinstance(rho, PureState):
        rho = rho.density()
    if not isinstance(rho, DensityMatrix):
        raise InvalidInputError("rho must be a DensityMatrix or PureState")
    if rho.dim != chan_a.dim_in:
        raise InvalidInputError(
            f"state dimension {rho.dim} does not match channel input {chan_a.dim_in}"
        )
    from .channels import apply  # local import keeps module load order simple

    out_a = apply(chan_a, rho)
    out_b = apply(chan_b, rho)
    return float(
        trace_norm(out_a / np.trace(out_a).real - out_b / np.trace(out_b).real)
    )


def _check_unstabilized(chan_a: Channel, chan_b: Channel) -> None:
    _kraus_stacks(chan_a, chan_b)
    if chan_a.dim_in > UNSTABILIZED_DIM_CAP:
        raise CapacityError(
            f"input dimension {chan_a.dim_in} exceeds unstabilized cap {UNSTABILIZED_DIM_CAP}"
        )


def _check_stabilized(chan_a: Channel, chan_b: Channel) -> None:
    _kraus_stacks(chan_a, chan_b)
    if chan_a.dim_in > STABILIZED_DIM_CAP:
        raise CapacityError(
            f"input dimension {chan_a.dim_in} exceeds stabilized cap {STABILIZED_DIM_CAP}"
        )


def _run_measure(measure, chan_a, chan_b, cfg, objective_factory, decode):
    fn, n_params = objective_factory(chan_a, chan_b)
    _, points, winner, converged = _maximize(fn, n_params, cfg)
    witness = decode(points[winner])
    value = evaluate_witness(measure, chan_a, chan_b, witness)
    return DistanceEstimate(
        measure=measure,
        value=value,
        witness=witness,
        restarts_used=cfg.restarts,
        converged=converged,
    )


def trace_distance_states(
    chan_a: Channel, chan_b: Channel, cfg: OptimizerConfig = OptimizerConfig()
) -> DistanceEstimate:
    """
    d_tr^D: sup over density matrices of ||Psi(rho) - Phi(rho)||_1.  The
    objective is convex in rho, so optimizing over pure states is exhaustive.
    """
    _check_unstabilized(chan_a, chan_b)
    d = chan_a.dim_in

    def decode(x):
        return PureState.normalized(x[: 2 * d][:d] + 1j * x[: 2 * d][d:])

    return _run_measure("dtrD", chan_a, chan_b, cfg, _objective_dtrD, decode)


def trace_distance_operators(
    chan_a: Channel, chan_b: Channel, cfg: OptimizerConfig = OptimizerConfig()
) -> DistanceEstimate:
    """
    d_tr: sup over trace-norm-one operators of ||Psi(X) - Phi(X)||_1, optimized
    over its rank-one extreme points X = |u><v|.
    """
    _check_unstabilized(chan_a, chan_b)
    d = chan_a.dim_in

    def decode(x):
        u = PureState.normalized(x[: 2 * d][:d] + 1j * x[: 2 * d][d:])
        v = PureState.normalized(x[2 * d :][:d] + 1j * x[2 * d :][d:])
        return (u, v)

    return _run_measure("dtr", chan_a, chan_b, cfg, _objective_dtr, decode)


def diamond_distance(
    chan_a: Channel, chan_b: Channel, cfg: OptimizerConfig = OptimizerConfig()
) -> DistanceEstimate:
    """
    d_diamond: the stabilized trace distance, optimized over pure states on
    H (x) H (an ancilla of the input dimension attains the supremum).
    """
    _check_stabilized(chan_a, chan_b)
    d = chan_a.dim_in

    def decode(x):
        return PureState.normalized(x[: d * d] + 1j * x[d * d :])

    return _run_measure("diamond", chan_a, chan_b, cfg, _objective_diamond, decode)


def diamond_norm_channel(ch: Channel) -> float:
    """
    ||Psi||_diamond for a CP trace-nonincreasing map: equals the squared
    operator norm of any Stinespring dilation, i.e. lambda_max of the effect
    operator.  Exact (no optimization).
    """
    return float(ch.effect_eigenvalues[-1])


def postselected_trace_distance(
    chan_a: Channel, chan_b: Channel, cfg: OptimizerConfig = OptimizerConfig()
) -> DistanceEstimate:
    """
    hat d_tr: sup of the renormalized objective over all density matrices,
    parameterized as rho = T T^H / tr (the objective is not convex, so pure
    states alone would undershoot).
    """
    chan_a, chan_b = _canonical_pair(chan_a, chan_b)
    _check_unstabilized(chan_a, chan_b)
    require_postselection_pair(chan_a, chan_b)
    d = chan_a.dim_in

    def decode(x):
        t = (x[: d * d] + 1j * x[d * d :]).reshape(d, d)
        rho = t @ t.conj().T
        return DensityMatrix(rho / np.trace(rho).real)

    return _run_measure("hat-tr", chan_a, chan_b, cfg, _objective_hat_tr, decode)


def postselected_diamond_distance(
    chan_a: Channel, chan_b: Channel, cfg: OptimizerConfig = OptimizerConfig()
) -> DistanceEstimate:
    """
    hat d_diamond: the renormalized objective of the H (x) H extensions,
    optimized over pure bipartite states (exhaustive for this measure).
    """
    chan_a, chan_b = _canonical_pair(chan_a, chan_b)
    _check_stabilized(chan_a, chan_b)
    require_postselection_pair(chan_a, chan_b)
    d = chan_a.dim_in

    def decode(x):
        return PureState.normalized(x[: d * d] + 1j * x[d * d :])

    return _run_measure("hat-diamond", chan_a, chan_b, cfg, _objective_hat_diamond, decode)


_MEASURE_FUNCS = {
    "dtrD": trace_distance_states,
    "dtr": trace_distance_operators,
    "diamond": diamond_distance,
    "hat-tr": postselected_trace_distance,
    "hat-diamond": postselected_diamond_distance,
}


def distance(
    measure: str, chan_a: Channel, chan_b: Channel, cfg: OptimizerConfig = OptimizerConfig()
) -> DistanceEstimate:
    """Dispatch a measure by its tag (dtrD, dtr, diamond, hat-tr, hat-diamond)."""
    if measure not in _MEASURE_FUNCS:
        raise InvalidInputError(f"unknown measure {measure!r}; choose from {MEASURES}")
    return _MEASURE_FUNCS[measure](chan_a, chan_b, cfg)


# ---------------------------------------------------------------------------
# witness evaluation
# ---------------------------------------------------------------------------


def _witness_pure(witness, dim: int, what: str) -> PureState:
    if not isinstance(witness, PureState):
        raise InvalidInputError(f"{what} expects a PureState witness, got {type(witness).__name__}")
    if witness.dim != dim:
        raise InvalidInputError(f"{what} witness has dim {witness.dim}, expected {dim}")
    return witness


def evaluate_witness(measure: str, chan_a: Channel, chan_b: Channel, witness) -> float:
    """
    Exact objective value of `measure` at a specific witness, used both to
    reproduce optimizer output and to transfer witnesses between measures for
    sound inequality checks.
    """
    from .channels import apply

    _kraus_stacks(chan_a, chan_b)
    d = chan_a.dim_in
    if measure == "dtrD":
        if isinstance(witness, DensityMatrix):
            rho = witness
            if rho.dim != d:
                raise InvalidInputError(f"dtrD witness has dim {rho.dim}, expected {d}")
        else:
            rho = _witness_pure(witness, d, "dtrD").density()
        return float(trace_norm(apply(chan_a, rho) - apply(chan_b, rho)))
    if measure == "dtr":
        if not (isinstance(witness, tuple) and len(witness) == 2):
            raise InvalidInputError("dtr expects a (PureState, PureState) witness")
        u = _witness_pure(witness[0], d, "dtr")
        v = _witness_pure(witness[1], d, "dtr")
        x = np.outer(u.vector, v.vector.conj())
        return float(trace_norm(apply(chan_a, x) - apply(chan_b, x)))
    if measure == "diamond":
        u = _witness_pure(witness, d * d, "diamond")
        ext_a = tensor_with_identity(chan_a, d)
        ext_b = tensor_with_identity(chan_b, d)
        rho = u.density()
        return float(trace_norm(apply(ext_a, rho) - apply(ext_b, rho)))
    if measure == "hat-tr":
        if isinstance(witness, PureState):
            witness = _witness_pure(witness, d, "hat-tr").density()
        if not isinstance(witness, DensityMatrix):
            raise InvalidInputError("hat-tr expects a DensityMatrix or PureState witness")
        if witness.dim != d:
            raise InvalidInputError(f"hat-tr witness has dim {witness.dim}, expected {d}")
        return renormalized_distance(chan_a, chan_b, witness)
    if measure == "hat-diamond":
        chan_a, chan_b = _canonical_pair(chan_a, chan_b)
        require_postselection_pair(chan_a, chan_b)
        u = _witness_pure(witness, d * d, "hat-diamond")
        ext_a = tensor_with_identity(chan_a, d)
        ext_b = tensor_with_identity(chan_b, d)
        rho = u.density()
        out_a = apply(ext_a, rho)
        out_b = apply(ext_b, rho)
        return float(
            trace_norm(out_a / np.trace(out_a).real - out_b / np.trace(out_b).real)
        )
    raise InvalidInputError(f"unknown measure {measure!r}; choose from {MEASURES}")


# ---------------------------------------------------------------------------
# dense sampling oracle
# ---------------------------------------------------------------------------

_ORACLE_CHUNK = 8192


def dense_oracle(
    measure: str,
    chan_a: Channel,
    chan_b: Channel,
    samples: int = 100_000,
    seed: int = 0,
) -> float:
    """
    Brute-force lower bound: the measure's objective maximized over `samples`
    seeded random points of its domain (Haar pure states, independent rank-one
    pairs, or normalized Ginibre density factors).  Independent of the
    optimizer; used to cross-check it at tiny dimensions.
    """
    if samples < 1:
        raise InvalidInputError("oracle needs at least one sample")
    _kraus_stacks(chan_a, chan_b)
    d = chan_a.dim_in
    if measure in ("dtrD", "dtr", "hat-tr"):
        if d > ORACLE_UNSTABILIZED_DIM_CAP:
            raise CapacityError(
                f"oracle cap for unstabilized measures is dim {ORACLE_UNSTABILIZED_DIM_CAP}"
            )
    elif measure in ("diamond", "hat-diamond"):
        if d > ORACLE_STABILIZED_DIM_CAP:
            raise CapacityError(
                f"oracle cap for stabilized measures is dim {ORACLE_STABILIZED_DIM_CAP}"
            )
    else:
        raise InvalidInputError(f"unknown measure {measure!r}; choose from {MEASURES}")
    if measure in ("hat-tr", "hat-diamond"):
        chan_a, chan_b = _canonical_pair(chan_a, chan_b)
        require_postselection_pair(chan_a, chan_b)
    factory = {
        "dtrD": _objective_dtrD,
        "dtr": _objective_dtr,
        "diamond": _objective_diamond,
        "hat-tr": _objective_hat_tr,
        "hat-diamond": _objective_hat_diamond,
    }[measure]
    fn, n_params = factory(chan_a, chan_b)
    rng = np.random.default_rng([seed & _SEED_MASK, 1])
    best = -np.inf
    remaining = int(samples)
    while remaining > 0:
        take = min(_ORACLE_CHUNK, remaining)
        vals = fn(rng.standard_normal((take, n_params)))
        top = float(np.max(vals))
        if top > best:
            best = top
        remaining -= take
    return best
