"""Oscillating sequences that realise weak* limits of two-valued functions.

A target ``u`` whose value on cell ``i`` is ``lam_i * alpha + (1 - lam_i) * beta``
is approximated by ``u_j(x) = h_i(j x)``, where ``h_i`` equals ``alpha`` on the
first ``lam_i`` fraction of each unit period and ``beta`` on the rest.  The
phase is global (periods start at multiples of ``1/j``), so all pairings with
piecewise polynomial test functions are computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InclusionError, PreconditionError
from .functional import SimpleFunction, in_A_E
from .setcore import BoxUnion, FinitePairSet, hat, segment_parameter

DEFAULT_J = tuple(2 ** k for k in range(2, 10))


@dataclass(frozen=True, eq=False)
class OscillationSpec:
    alpha: np.ndarray
    beta: np.ndarray
    target: SimpleFunction
    j_list: tuple = DEFAULT_J
    tol: float = 1e-9
    lambdas: np.ndarray = field(init=False)

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.alpha, dtype=float))
        b = np.atleast_1d(np.asarray(self.beta, dtype=float))
        if a.shape != b.shape or a.shape != (self.target.m,):
            raise PreconditionError("alpha, beta and the target values must share m")
        if any(int(j) < 1 for j in self.j_list):
            raise ValueError("frequencies must be positive integers")
        lam = []
        for i, v in enumerate(self.target.values):
            t = segment_parameter(v, a, b, self.tol)
            if t is None:
                raise PreconditionError(f"target value {v.tolist()} on cell {i} is not on [alpha, beta]")
            lam.append(t)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "j_list", tuple(int(j) for j in self.j_list))
        object.__setattr__(self, "lambdas", np.array(lam))


def build_sequence(spec: OscillationSpec, j: int) -> SimpleFunction:
    """The ``j``-th oscillating function; its values lie in ``{alpha, beta}``."""
    j = int(j)
    if j < 1:
        raise ValueError("j must be a positive integer")
    breaks, vals = [0.0], []

    def push(b, v):
        if b <= breaks[-1]:
            return
        if vals and vals[-1] is v:
            breaks[-1] = b
        else:
            breaks.append(b)
            vals.append(v)

    u = spec.target
    for a, b, lam in zip(u.breaks[:-1], u.breaks[1:], spec.lambdas):
        if lam >= 1.0:
            push(b, spec.alpha)
            continue
        if lam <= 0.0:
            push(b, spec.beta)
            continue
        k = int(np.floor(a * j))
        x = a
        while x < b:
            switch = (k + lam) / j
            end = (k + 1) / j
            if x < switch:
                push(min(switch, b), spec.alpha)
                x = min(switch, b)
            if x < b:
                push(min(end, b), spec.beta)
                x = min(end, b)
            k += 1
    breaks[-1] = 1.0
    return SimpleFunction(np.array(breaks), np.array(vals))


# --------------------------------------------------------------------------- exact pairings


@dataclass(frozen=True)
class PairingFunction:
    """``1_(0, t)`` (kind "ind") or ``x**k`` (kind "mono")."""

    kind: str
    param: float

    @property
    def name(self) -> str:
        if self.kind == "ind":
            return f"ind_0_{self.param:g}"
        return f"mono_{int(self.param)}"

    def integral(self, a, b):
        """Integral over ``(a, b)``, vectorised."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.kind == "ind":
            return np.clip(np.minimum(b, self.param) - a, 0.0, None)
        k = int(self.param)
        return (b ** (k + 1) - a ** (k + 1)) / (k + 1)


def default_test_family() -> list:
    return [PairingFunction("ind", k / 16) for k in range(1, 17)] + \
        [PairingFunction("mono", k) for k in range(3)]


def pairing(u: SimpleFunction, phi: PairingFunction) -> np.ndarray:
    """``int_0^1 u(x) phi(x) dx`` (one entry per component)."""
    w = phi.integral(u.breaks[:-1], u.breaks[1:])
    return w @ u.values


def pairing_error(uj: SimpleFunction, u: SimpleFunction, phi: PairingFunction) -> float:
    """``|int (u_j - u) phi|`` on the common refinement of both partitions."""
    br = np.union1d(uj.breaks, u.breaks)
    mid = 0.5 * (br[:-1] + br[1:])
    diff = uj(mid) - u(mid)
    w = phi.integral(br[:-1], br[1:])
    return float(np.linalg.norm(w @ diff))


# --------------------------------------------------------------------------- young measures


@dataclass(frozen=True)
class EmpiricalMeasure:
    atoms: list

    def weight_of(self, value, tol: float = 1e-9) -> float:
        v = np.atleast_1d(np.asarray(value, dtype=float))
        return float(sum(w for p, w in self.atoms if np.all(np.abs(np.asarray(p) - v) <= tol)))

    def to_dict(self) -> dict:
        return {"atoms": [{"value": list(p), "weight": w} for p, w in self.atoms]}


def empirical_young_measure(uj: SimpleFunction, region) -> EmpiricalMeasure:
    """Distribution of the values of ``u_j`` on ``region`` (an interval or a list of them)."""
    if np.ndim(region) == 1:
        region = [region]
    total = 0.0
    acc: dict = {}
    for a, b in region:
        lo = np.clip(uj.breaks[:-1], a, b)
        hi = np.clip(uj.breaks[1:], a, b)
        lens = hi - lo
        total += b - a
        for v, L in zip(uj.values, lens):
            if L > 0:
                key = tuple(v.tolist())
                acc[key] = acc.get(key, 0.0) + L
    if total <= 0:
        raise ValueError("region must have positive length")
    return EmpiricalMeasure(sorted((k, float(L / total)) for k, L in acc.items()))


def tv_to_two_atoms(mu: EmpiricalMeasure, alpha, beta, lam: float) -> float:
    """Total-variation distance to ``lam delta_alpha + (1 - lam) delta_beta``."""
    alpha = tuple(np.atleast_1d(alpha).tolist())
    beta = tuple(np.atleast_1d(beta).tolist())
    target = {alpha: lam}
    target[beta] = target.get(beta, 0.0) + 1 - lam
    emp = dict(mu.atoms)
    keys = set(emp) | set(target)
    return 0.5 * sum(abs(emp.get(k, 0.0) - target.get(k, 0.0)) for k in keys)


# --------------------------------------------------------------------------- reports


@dataclass
class OscillationReport:
    j: int
    violations: int
    pairings: list
    ym: list

    def to_dict(self) -> dict:
        return {"j": self.j, "violations": self.violations,
                "pairings": self.pairings, "ym": self.ym}

    def error(self, phi_name: str) -> float:
        for p in self.pairings:
            if p["phi"] == phi_name:
                return p["err"]
        raise KeyError(phi_name)


def count_violations(uj: SimpleFunction, K) -> int:
    """Ordered pairs of distinct cell values of ``u_j`` that fall outside ``K``."""
    v = uj.value_set()
    xi, zeta = np.broadcast_arrays(v[:, None, :], v[None, :, :])
    return int(np.sum(~K.contains(xi, zeta)))


def two_well_set(alpha, beta) -> FinitePairSet:
    a = np.atleast_1d(alpha)
    b = np.atleast_1d(beta)
    return FinitePairSet(np.array([[a, a], [a, b], [b, a], [b, b]]), m=len(a))


def weak_star_report(spec: OscillationSpec, sequences=None, test_family=None) -> list:
    """Constraint audit, pairing errors and Young-measure distances for each ``j``."""
    family = test_family or default_test_family()
    K = two_well_set(spec.alpha, spec.beta)
    u = spec.target
    out = []
    for k, j in enumerate(spec.j_list):
        uj = sequences[k] if sequences is not None else build_sequence(spec, j)
        pairs = [{"phi": phi.name, "err": pairing_error(uj, u, phi)} for phi in family]
        ym = []
        for i, (a, b) in enumerate(zip(u.breaks[:-1], u.breaks[1:])):
            mu = empirical_young_measure(uj, (a, b))
            ym.append({"cell": i, "tv": tv_to_two_atoms(mu, spec.alpha, spec.beta,
                                                        float(spec.lambdas[i]))})
        out.append(OscillationReport(j, count_violations(uj, K), pairs, ym))
    return out


def error_table(reports, phi_name: str) -> str:
    """Two-column ``j error`` text for external plotting."""
    return "".join(f"{r.j} {r.error(phi_name):.17g}\n" for r in reports)


# --------------------------------------------------------------------------- approximation by simple functions


def _sampled(u, samples: int):
    if callable(u):
        x = (np.arange(samples) + 0.5) / samples
        vals = np.asarray(u(x), dtype=float)
    else:
        vals = np.asarray(u, dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    return vals


def simple_approximation(u, E, j: int, samples: int = 2000, return_report: bool = False):
    """Simple ``u_j`` within ``1/j`` of ``u`` in sup norm with all value pairs in ``E``.

    ``u`` is a callable on (0, 1) or an array of values at the midpoints of a
    uniform partition.  Values are binned into half-open boxes of diameter
    ``1/j``; each box receives an attained representative compatible (in
    ``E``) with every representative chosen before it.  Success is certified
    relative to the samples only.
    """
    vals = _sampled(u, samples)
    N, m = vals.shape
    if E.m != m:
        raise InclusionError(f"E has m={E.m}, u has m={m}")
    uniq, inv = np.unique(vals, axis=0, return_inverse=True)
    inv = np.asarray(inv).ravel()
    xi, zeta = np.broadcast_arrays(uniq[:, None, :], uniq[None, :, :])
    ok = E.contains(xi, zeta)
    if not ok.all():
        i, k = np.argwhere(~ok)[0]
        raise InclusionError(
            f"sampled u is not in A_E: pair ({uniq[i].tolist()}, {uniq[k].tolist()}) lies outside E")
    side = 1.0 / (j * np.sqrt(m))
    box = np.floor(uniq / side).astype(np.int64)
    keys, box_of = np.unique(box, axis=0, return_inverse=True)
    box_of = np.asarray(box_of).ravel()
    reps = np.zeros((len(keys), m))
    chosen = []
    for b in range(len(keys)):
        cands = uniq[box_of == b]
        pick = None
        for c in cands:
            if not E.contains(c, c):
                continue
            if chosen:
                prev = np.array(chosen)
                if not (np.all(E.contains(c[None], prev)) and np.all(E.contains(prev, c[None]))):
                    continue
            pick = c
            break
        if pick is None:
            raise InclusionError(f"no compatible representative in value box {keys[b].tolist()}")
        reps[b] = pick
        chosen.append(pick)
    uj_vals = reps[box_of[inv]]
    breaks = np.linspace(0.0, 1.0, N + 1)
    uj = SimpleFunction(breaks, uj_vals).merged()
    if not return_report:
        return uj
    report = {
        "boxes": len(keys),
        "sup_error": float(np.max(np.abs(uj_vals - vals))),
        "samples": N,
        "certified": "relative to samples",
    }
    return uj, report


# --------------------------------------------------------------------------- closure witness


@dataclass
class ClosureWitness:
    alpha: np.ndarray
    beta: np.ndarray
    reports: list
    in_A_K: list

    @property
    def ok(self) -> bool:
        return all(self.in_A_K) and all(r.violations == 0 for r in self.reports)


def closure_witness(K: FinitePairSet, u: SimpleFunction, j_list=DEFAULT_J) -> ClosureWitness:
    """Functions in ``A_K`` converging weakly* to ``u``, for ``u`` in ``A`` of the hull.

    Picks a generator ``(alpha, beta)`` of ``hat(K)`` whose segment carries
    every value of ``u`` (the single-cube base of the hull that holds the value
    set) and oscillates between ``alpha`` and ``beta``.  Since ``u`` is already
    simple, the diagonal approximation index is taken equal to ``j``.
    """
    G = hat(K)
    if not in_A_E(BoxUnion(G.points, m=G.m, tol=G.tol), u):
        raise InclusionError("u is not in A of the hull of hat(K)")
    vals = u.value_set()
    for a, b in G.points:
        if all(segment_parameter(v, a, b, G.tol) is not None for v in vals):
            spec = OscillationSpec(a, b, u, tuple(j_list), tol=G.tol)
            seqs = [build_sequence(spec, j) for j in spec.j_list]
            reports = weak_star_report(spec, seqs)
            return ClosureWitness(a, b, reports, [in_A_E(K, s) for s in seqs])
    raise InclusionError("no single generator segment carries the values of u")
