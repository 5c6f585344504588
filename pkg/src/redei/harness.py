"""Verification campaigns: exhaustive and seeded-random sweeps that pin every
proved statement to concrete finite configurations, plus extremal search and
counterexample persistence.

A campaign fixes a target, a field, a size range and a mode.  Exhaustive
mode walks candidate sets by lexicographic combination index, which makes the
work partitionable across processes by index range; random mode derives one
generator per trial from the master seed, so a trial's candidate does not
depend on how trials are distributed over workers.  Reports therefore come
out byte-identical between serial and parallel runs and across reruns.

Campaign wall time is kept on the report object for human output but left
out of the canonical JSON, which must be reproducible byte for byte.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Optional

from . import formats
from .affgroup import (
    IDENTITY,
    AffSet,
    aff_inv,
    aff_mul,
    classify,
    enumerate_aff,
    fiber_slope,
    pi_bound_check,
)
from .bounds import enumerate_lines, kneser_check, ruzsa_check, vinh_check
from .errors import BudgetExceeded
from .ff import Field, construct_field
from .plane import (
    INF,
    TRIVIAL_UPPER,
    PlanePointSet,
    direction_bounds,
    direction_set,
    ghost_slopes,
    is_collinear,
    maindir_check,
    pair_slope,
    spans_all_check,
)

DEFAULT_BUDGET = 10 ** 8

TARGETS = ("szonyi", "maindir", "qbounds", "moreq", "classify",
           "vinh", "kneser", "ruzsa", "ghost", "lemma_phipi")

_SKIP = "skip"


@dataclass(frozen=True)
class Campaign:
    target: str
    p: int
    e: int
    sizes: tuple
    mode: str  # "exhaustive" or "random"
    samples: Optional[int] = None
    seed: int = 0
    jobs: int = 1
    budget: int = DEFAULT_BUDGET

    def replay_command(self) -> str:
        mode = ("--exhaustive" if self.mode == "exhaustive"
                else f"--samples {self.samples} --seed {self.seed}")
        q = self.p ** self.e
        return (f"redei verify --target {self.target} --q {q} {mode} "
                f"--sizes {self.sizes[0]}..{self.sizes[1]}")


@dataclass
class CampaignReport:
    campaign: Campaign
    q: int
    checked: int
    violations: list
    extremal: Optional[dict]
    seconds: float

    def to_json_dict(self) -> dict:
        c = self.campaign
        out = {"target": c.target, "q": self.q, "p": c.p, "e": c.e,
               "mode": c.mode}
        if c.mode == "random":
            out["samples"] = c.samples
            out["seed"] = c.seed
        out["sizes"] = [c.sizes[0], c.sizes[1]]
        out["checked"] = self.checked
        out["violations"] = self.violations
        if self.extremal is not None:
            out["extremal"] = {
                str(size): entry for size, entry in sorted(self.extremal.items())}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


# -- lexicographic combination enumeration -----------------------------------

def unrank_combination(n: int, k: int, rank: int) -> list:
    """The rank-th k-subset of range(n) in lexicographic order."""
    out, x = [], 0
    for i in range(k):
        while comb(n - 1 - x, k - 1 - i) <= rank:
            rank -= comb(n - 1 - x, k - 1 - i)
            x += 1
        out.append(x)
        x += 1
    return out


def next_combination(c: list, n: int) -> bool:
    """Advance to the lexicographic successor in place; False at the end."""
    k = len(c)
    for i in range(k - 1, -1, -1):
        if c[i] < n - k + i:
            c[i] += 1
            for j in range(i + 1, k):
                c[j] = c[j - 1] + 1
            return True
    return False


def _iter_size_blocks(n, sizes, lo, hi):
    """Yield (global_index, size, combination) for indexes in [lo, hi) of the
    concatenated lexicographic blocks, one block per size."""
    offset = 0
    for s in sizes:
        block = comb(n, s)
        if offset + block <= lo or offset >= hi:
            offset += block
            continue
        start = max(lo - offset, 0)
        stop = min(hi - offset, block)
        combination = unrank_combination(n, s, start)
        idx = start
        while idx < stop:
            yield offset + idx, s, combination
            idx += 1
            if idx < stop and not next_combination(combination, n):
                break
        offset += block
    return


# -- candidate spaces and checkers per target ---------------------------------

def _point(field, i):
    return (i // field.q, i % field.q)


def _plane_sizes(c: Campaign, field: Field):
    lo, hi = c.sizes
    n = field.q * field.q
    if c.target == "moreq":
        lo = max(lo, field.q + 1)
    elif c.target == "ghost":
        lo, hi = max(lo, 2), min(hi, field.q)
    else:
        lo = max(lo, 2)
    hi = min(hi, n)
    return list(range(lo, hi + 1))


def _sample_plane_noncollinear(field, rng, lo, hi):
    n = field.q * field.q
    hi = min(hi, n)
    while True:
        size = rng.randint(lo, hi)
        pts = [_point(field, i) for i in rng.sample(range(n), size)]
        if size >= 3 and not is_collinear(PlanePointSet(field, pts)):
            return PlanePointSet(field, pts)


def _check_szonyi(c, field, A):
    rep = direction_set(A)
    if rep.collinear:
        return _SKIP, None
    size = len(A)
    if 2 * rep.count >= size + 3:
        return None, rep.count
    return {"expected": f"|D| >= ceil((|A|+3)/2) = {(size + 3 + 1) // 2}",
            "observed": f"|D| = {rep.count}",
            "input": formats.serialize_point_set(A)}, rep.count


def _check_maindir(c, field, A):
    rep = direction_set(A)
    if rep.collinear:
        return _SKIP, None
    res = maindir_check(A)
    if res.holds:
        return None, rep.count
    return {"expected": f"|D| > {formats.fraction_to_json(res.threshold)}",
            "observed": f"|D| = {rep.count}",
            "input": formats.serialize_point_set(A)}, rep.count


def _check_qbounds(c, field, A):
    rep = direction_set(A)
    if rep.collinear or rep.count == field.q + 1:
        return _SKIP, None
    b = direction_bounds(A)
    upper_ok = b.upper is TRIVIAL_UPPER or rep.count <= b.upper
    if b.lower <= rep.count and upper_ok:
        return None, rep.count
    upper_text = "trivial" if b.upper is TRIVIAL_UPPER else str(b.upper)
    return {"expected": f"{b.lower} <= |D| <= {upper_text} (l1={b.l1}, l2={b.l2})",
            "observed": f"|D| = {rep.count}",
            "input": formats.serialize_point_set(A)}, rep.count


def _check_moreq(c, field, A):
    if len(A) <= field.q:
        return _SKIP, None
    if spans_all_check(A):
        return None, None
    count = direction_set(A).count
    return {"expected": f"|D| = q+1 = {field.q + 1}",
            "observed": f"|D| = {count}",
            "input": formats.serialize_point_set(A)}, None


def _check_ghost(c, field, candidate):
    if isinstance(candidate, tuple):
        A, pts = candidate
    else:
        A, pts = candidate, None
    if not 2 <= len(A) <= field.q:
        return _SKIP, None
    if direction_set(A).count == field.q + 1:
        return _SKIP, None
    n = field.q - len(A)
    for pt in (pts if pts is not None else A.sorted_points()):
        found = ghost_slopes(A, pt)
        if len(found) > n:
            return {"expected": f"at most n = {n} ghost slopes",
                    "observed": f"{len(found)} ghost slopes at point {pt[0]} {pt[1]}",
                    "input": formats.serialize_point_set(A)}, None
    return None, None


def _atoms(field):
    """Inversion-closed singletons and {g, g^-1} pairs, deterministically
    ordered; every symmetric set is a unique union of atoms."""
    out = []
    for g in enumerate_aff(field):
        gi = aff_inv(field, g)
        if g == gi:
            out.append((g,))
        elif g < gi:
            out.append((g, gi))
    return out


def _sample_symmetric(field, rng, lo, hi):
    while True:
        m = rng.randint(lo, hi)
        elems = set()
        for _ in range(m):
            g = (rng.randrange(1, field.q), rng.randrange(field.q))
            elems.add(g)
            elems.add(aff_inv(field, g))
        if rng.random() < 0.5:
            elems.add(IDENTITY)
        if len(elems) > 1:
            return AffSet(field, elems)


def _check_classify(c, field, A):
    if len(A) <= 1 or not A.is_symmetric():
        return _SKIP, None
    rep = classify(A)
    if rep.disjunction_holds:
        return None, None
    parts = [f"regime={rep.size_regime}", f"C={rep.tripling}"]
    if rep.case_b is not None:
        parts.append(f"pi={rep.case_b.pi_size} bound={rep.case_b.bound_text}")
    if rep.case_c is not None:
        parts.append(f"pi={rep.case_c.pi_size} bound={rep.case_c.bound} "
                     f"u_covered={rep.case_c.u_covered}")
    return {"expected": "one of the structure cases holds",
            "observed": "; ".join(parts),
            "input": formats.serialize_aff_set(A)}, None


def _check_ruzsa(c, field, A):
    if len(A) == 0 or not A.is_symmetric():
        return _SKIP, None
    for k in (4, 5, 6):
        holds, C = ruzsa_check(A, k)
        if not holds:
            return {"expected": f"|A^{k}| <= C^{k - 2}|A| with C = {C}",
                    "observed": f"violated at k = {k}",
                    "input": formats.serialize_aff_set(A)}, None
    return None, None


def _check_vinh(c, field, candidate):
    P, L = candidate
    holds, result = vinh_check(field, P, L)
    if holds:
        return None, None
    lines_text = "; ".join(line.to_text() for line in sorted(L))
    points_text = "; ".join(f"{a} {b}" for a, b in sorted(P))
    return {"expected": f"(q*I - |P||L|)^2 <= q^3|P||L| = {field.q ** 3 * len(P) * len(L)}",
            "observed": f"I = {result.count}, deviation^2 = {result.deviation_sq}",
            "input": f"P: {points_text} | L: {lines_text}"}, None


def _check_kneser(c, field, candidate):
    A, B = candidate
    holds, h_size = kneser_check(field, A, B)
    if holds:
        return None, None
    return {"expected": f"|A+B| >= min(q, |A|+|B|-|H|) with |H| = {h_size}",
            "observed": f"|A+B| = {len(set(field.add(a, b) for a in A for b in B))}",
            "input": f"A: {sorted(A)} | B: {sorted(B)}"}, None


def _check_lemma_phipi(c, field, g):
    slope = fiber_slope(field, g)
    elems = enumerate_aff(field)
    image = {h: aff_mul(field, aff_mul(field, h, g), aff_inv(field, h))
             for h in elems}
    for i, h1 in enumerate(elems):
        for h2 in elems[i + 1:]:
            same = image[h1] == image[h2]
            on_line = pair_slope(field, h1, h2) == slope
            if same != on_line:
                return {"expected": "equal conjugates exactly on fiber-slope lines",
                        "observed": (f"g = {g}, pair {h1} {h2}: "
                                     f"equal={same}, slope match={on_line}"),
                        "input": f"g: {g[0]} {g[1]}"}, None
    return None, None


_CHECKERS = {
    "szonyi": _check_szonyi,
    "maindir": _check_maindir,
    "qbounds": _check_qbounds,
    "moreq": _check_moreq,
    "ghost": _check_ghost,
    "classify": _check_classify,
    "ruzsa": _check_ruzsa,
    "vinh": _check_vinh,
    "kneser": _check_kneser,
    "lemma_phipi": _check_lemma_phipi,
}

_PLANE_TARGETS = {"szonyi", "maindir", "qbounds", "moreq", "ghost"}
_AFF_TARGETS = {"classify", "ruzsa"}
_EXTREMAL_TARGETS = {"szonyi", "maindir"}


def _kneser_subsets(c, field):
    lo, hi = c.sizes
    lo, hi = max(lo, 1), min(hi, field.q)
    out = []
    for s in range(lo, hi + 1):
        combination = list(range(s))
        while True:
            out.append(frozenset(combination))
            if not next_combination(combination, field.q):
                break
    return out


def candidate_count(c: Campaign, field: Field) -> int:
    """Exhaustive enumeration size, computed before any work starts."""
    if c.target in _PLANE_TARGETS:
        n = field.q * field.q
        return sum(comb(n, s) for s in _plane_sizes(c, field))
    if c.target in _AFF_TARGETS:
        return 2 ** len(_atoms(field)) - 1
    if c.target == "kneser":
        m = len(_kneser_subsets(c, field))
        return m * m
    if c.target == "vinh":
        n = field.q * field.q
        return 2 ** n * 2 ** (n + field.q)
    if c.target == "lemma_phipi":
        return field.q * (field.q - 1) - 1
    raise ValueError(f"unknown target {c.target!r}")


def _exhaustive_candidates(c: Campaign, field: Field, lo: int, hi: int):
    """Yield (index, candidate) for the index range [lo, hi)."""
    if c.target in _PLANE_TARGETS:
        n = field.q * field.q
        for idx, _, combination in _iter_size_blocks(n, _plane_sizes(c, field), lo, hi):
            yield idx, PlanePointSet(field, [_point(field, i) for i in combination])
        return
    if c.target in _AFF_TARGETS:
        atoms = _atoms(field)
        size_lo, size_hi = c.sizes
        n = len(atoms)
        sizes = list(range(1, n + 1))
        for idx, _, combination in _iter_size_blocks(n, sizes, lo, hi):
            elems = [g for i in combination for g in atoms[i]]
            if size_lo <= len(elems) <= size_hi:
                yield idx, AffSet(field, elems)
            else:
                yield idx, None
        return
    if c.target == "kneser":
        subsets = _kneser_subsets(c, field)
        m = len(subsets)
        for idx in range(lo, hi):
            yield idx, (subsets[idx // m], subsets[idx % m])
        return
    if c.target == "vinh":
        points = [_point(field, i) for i in range(field.q * field.q)]
        lines = enumerate_lines(field)
        nl = len(lines)
        for idx in range(lo, hi):
            p_mask, l_mask = divmod(idx, 2 ** nl)
            P = {points[i] for i in range(len(points)) if p_mask >> i & 1}
            L = [lines[i] for i in range(nl) if l_mask >> i & 1]
            yield idx, (P, L)
        return
    if c.target == "lemma_phipi":
        elems = [g for g in enumerate_aff(field) if g != IDENTITY]
        for idx in range(lo, hi):
            yield idx, elems[idx]
        return
    raise ValueError(f"unknown target {c.target!r}")


def _sample_candidate(c: Campaign, field: Field, rng: random.Random):
    lo, hi = c.sizes
    if c.target in ("szonyi", "maindir", "qbounds"):
        return _sample_plane_noncollinear(field, rng, max(lo, 2), hi)
    if c.target == "moreq":
        n = field.q * field.q
        size = rng.randint(max(lo, field.q + 1), min(hi, n))
        return PlanePointSet(field, [_point(field, i)
                                     for i in rng.sample(range(n), size)])
    if c.target == "ghost":
        slo, shi = max(lo, 2), min(hi, field.q)
        while True:
            size = rng.randint(slo, shi)
            pts = [_point(field, i)
                   for i in rng.sample(range(field.q * field.q), size)]
            A = PlanePointSet(field, pts)
            if direction_set(A).count < field.q + 1:
                pt = A.sorted_points()[rng.randrange(len(A))]
                return (A, [pt])
    if c.target in _AFF_TARGETS:
        return _sample_symmetric(field, rng, max(lo, 1), hi)
    if c.target == "vinh":
        n = field.q * field.q
        lines = enumerate_lines(field)
        p_size = rng.randint(max(lo, 0), min(hi, n))
        l_size = rng.randint(max(lo, 0), min(hi, len(lines)))
        P = {_point(field, i) for i in rng.sample(range(n), p_size)}
        L = rng.sample(lines, l_size)
        return (P, L)
    if c.target == "kneser":
        slo, shi = max(lo, 1), min(hi, field.q)
        A = frozenset(rng.sample(range(field.q), rng.randint(slo, shi)))
        B = frozenset(rng.sample(range(field.q), rng.randint(slo, shi)))
        return (A, B)
    if c.target == "lemma_phipi":
        while True:
            g = (rng.randrange(1, field.q), rng.randrange(field.q))
            if g != IDENTITY:
                return g
    raise ValueError(f"unknown target {c.target!r}")


def _trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random((seed << 32) + trial)


def _run_chunk(args):
    c, lo, hi = args
    field = construct_field(c.p, c.e)
    check = _CHECKERS[c.target]
    track_extremal = c.target in _EXTREMAL_TARGETS
    checked = 0
    violations = []
    extremal = {}
    if c.mode == "exhaustive":
        candidates = _exhaustive_candidates(c, field, lo, hi)
    else:
        candidates = ((t, _sample_candidate(c, field, _trial_rng(c.seed, t)))
                      for t in range(lo, hi))
    for index, cand in candidates:
        if cand is None:
            continue
        outcome, dcount = check(c, field, cand)
        if outcome == _SKIP:
            continue
        checked += 1
        if outcome is not None:
            outcome = dict(outcome)
            outcome["index"] = index
            violations.append(outcome)
        if track_extremal and dcount is not None:
            size = len(cand)
            best = extremal.get(size)
            if best is None or dcount < best[0]:
                extremal[size] = (dcount, index,
                                  [list(pt) for pt in cand.sorted_points()])
    return checked, violations, extremal


def run_campaign(c: Campaign) -> CampaignReport:
    """Execute a campaign and return its report.

    Raises BudgetExceeded before any enumeration work if an exhaustive
    campaign is larger than the configured budget.
    """
    if c.target not in TARGETS:
        raise ValueError(f"unknown target {c.target!r}")
    if c.mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown mode {c.mode!r}")
    lo, hi = c.sizes
    if lo > hi or lo < 0:
        raise ValueError(f"bad size range {lo}..{hi}")
    field = construct_field(c.p, c.e)
    if c.mode == "exhaustive":
        total = candidate_count(c, field)
        if total > c.budget:
            raise BudgetExceeded(total, c.budget)
    else:
        if not c.samples or c.samples < 1:
            raise ValueError("random mode needs a positive sample count")
        if c.target in ("szonyi", "maindir", "qbounds") and max(hi, 0) < 3:
            raise ValueError("non-collinear sampling needs sizes up to 3 or more")
        total = c.samples
    start = time.perf_counter()
    jobs = max(c.jobs, 1)
    if jobs == 1 or total <= 1:
        parts = [_run_chunk((c, 0, total))]
    else:
        chunk = max(1, -(-total // (jobs * 4)))
        ranges = [(c, i, min(i + chunk, total)) for i in range(0, total, chunk)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, ranges))
    checked = 0
    violations = []
    extremal = {}
    for part_checked, part_violations, part_extremal in parts:
        checked += part_checked
        violations.extend(part_violations)
        for size, entry in part_extremal.items():
            best = extremal.get(size)
            if best is None or entry[0] < best[0] or \
                    (entry[0] == best[0] and entry[1] < best[1]):
                extremal[size] = entry
    seconds = time.perf_counter() - start
    out_extremal = None
    if c.target in _EXTREMAL_TARGETS:
        out_extremal = {size: {"min_D": entry[0], "witness": entry[2]}
                        for size, entry in extremal.items()}
    return CampaignReport(campaign=c, q=field.q, checked=checked,
                          violations=violations, extremal=out_extremal,
                          seconds=seconds)


def exhaustive_verify(c: Campaign) -> CampaignReport:
    if c.mode != "exhaustive":
        raise ValueError("campaign is not exhaustive")
    return run_campaign(c)


def random_verify(c: Campaign) -> CampaignReport:
    if c.mode != "random":
        raise ValueError("campaign is not randomized")
    return run_campaign(c)


# -- extremal search -----------------------------------------------------------

@dataclass
class ExtremalResult:
    size: int
    min_directions: Optional[int]
    witnesses: list
    mode: str  # "exhaustive" | "heuristic" | "exempt"
    checked: int

    def to_json_dict(self):
        return {"size": self.size, "min_D": self.min_directions,
                "mode": self.mode, "checked": self.checked,
                "witnesses": [[list(pt) for pt in w] for w in self.witnesses]}


def extremal_search(field: Field, size: int, budget: int = DEFAULT_BUDGET,
                    samples: int = 10000, seed: int = 0) -> ExtremalResult:
    """Minimum direction count over non-collinear sets of the given size.

    Size 2 (or less) admits no non-collinear set and reports mode "exempt".
    Exhaustive scan when the subset count fits the budget, else seeded random
    restarts reported as mode "heuristic"; with samples = 0 the budget
    overrun is raised instead.
    """
    if size < 3:
        return ExtremalResult(size=size, min_directions=None, witnesses=[],
                              mode="exempt", checked=0)
    n = field.q * field.q
    if size > n:
        raise ValueError(f"size {size} exceeds the plane ({n} points)")
    total = comb(n, size)
    best = None
    witnesses = []
    checked = 0
    if total <= budget:
        combination = list(range(size))
        while True:
            A = PlanePointSet(field, [_point(field, i) for i in combination])
            if not is_collinear(A):
                checked += 1
                count = direction_set(A).count
                if best is None or count < best:
                    best = count
                    witnesses = [A.sorted_points()]
                elif count == best and len(witnesses) < 10:
                    witnesses.append(A.sorted_points())
                if not next_combination(combination, n):
                    break
            elif not next_combination(combination, n):
                break
        return ExtremalResult(size=size, min_directions=best,
                              witnesses=witnesses, mode="exhaustive",
                              checked=checked)
    if not samples:
        raise BudgetExceeded(total, budget)
    for trial in range(samples):
        rng = _trial_rng(seed, trial)
        pts = [_point(field, i) for i in rng.sample(range(n), size)]
        A = PlanePointSet(field, pts)
        if is_collinear(A):
            continue
        checked += 1
        count = direction_set(A).count
        if best is None or count < best:
            best = count
            witnesses = [A.sorted_points()]
        elif count == best and len(witnesses) < 10 \
                and A.sorted_points() not in witnesses:
            witnesses.append(A.sorted_points())
    return ExtremalResult(size=size, min_directions=best, witnesses=witnesses,
                          mode="heuristic", checked=checked)


# -- counterexample persistence -------------------------------------------------

def make_counterexample_record(c: Campaign, q: int, violation: dict) -> dict:
    record = {"target": c.target, "q": q, "p": c.p, "e": c.e,
              "mode": c.mode}
    if c.mode == "random":
        record["samples"] = c.samples
        record["seed"] = c.seed
    record["sizes"] = [c.sizes[0], c.sizes[1]]
    record["index"] = violation.get("index")
    record["input"] = violation.get("input")
    record["expected"] = violation.get("expected")
    record["observed"] = violation.get("observed")
    record["replay"] = c.replay_command()
    return record


def persist_counterexample(record: dict, directory) -> Path:
    """Write a counterexample record as JSON; returns the file path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    name = f"counterexample-{record['target']}-q{record['q']}-{record['index']}.json"
    path = directory / name
    path.write_text(json.dumps(record, indent=2) + "\n")
    return path


def replay_counterexample(record: dict) -> Optional[dict]:
    """Re-run the target checker on the persisted input; returns the fresh
    violation dict (None if the check now passes)."""
    c = Campaign(target=record["target"], p=record["p"], e=record["e"],
                 sizes=tuple(record["sizes"]), mode=record["mode"],
                 samples=record.get("samples"), seed=record.get("seed", 0))
    field = construct_field(c.p, c.e)
    text = record["input"]
    if c.target in _PLANE_TARGETS:
        candidate = formats.parse_point_set(text)
    elif c.target in _AFF_TARGETS:
        candidate = formats.parse_aff_set(text)
    else:
        raise ValueError(f"replay not supported for target {c.target!r}")
    outcome, _ = _CHECKERS[c.target](c, field, candidate)
    return None if outcome in (None, _SKIP) else outcome
