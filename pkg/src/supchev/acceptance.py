"""The ten acceptance criteria as runnable checks.

Each check returns a CriterionResult; `run_all` evaluates them (optionally in
worker processes) and returns results in criterion order.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .kostant import (
    NormalizationStats,
    enumerate_basis,
    enumerate_basis_bruteforce,
    integrality_check,
    is_normal,
    oracle_straighten,
    pbw_normalize,
    random_product,
)
from .lattice import (
    adjoint_module,
    admissible_check,
    defining_module,
    missing_coroots,
    standard_lattice,
)
from .scalarring import is_integer
from .superalg import D21ARealization, build_chevalley_basis, structure_constants, verify_chevalley_axioms
from .supergroup import (
    EvenRoot,
    FactorizationStats,
    GroupWord,
    OddRootFree,
    OddRootSquare,
    Torus,
    commutator,
    extract_odd_coordinates,
    factorize,
    group_module,
    has_square,
    inverse_generator,
    lie_functor,
    normal_form_matrix,
    odd_generator,
    one_parameter_law,
    random_word,
    semidirect_check,
    torus_for_root,
    word_to_matrix,
)

CERTIFIED_FAMILIES = (
    "sl(2|1)",
    "sl(3|2)",
    "osp(1|2)",
    "osp(3|2)",
    "osp(2|2)",
    "osp(2|4)",
    "osp(5|2)",
    "osp(4|2)",
    "P(2)",
    "P(4)",
    "D(2,1;1)",
    "D(2,1;2)",
    "D(2,1;3)",
    "D(2,1;-2)",
)

# [x, y] = sum c * name with c = c0 + c1 * a + c2 * a^2
D21A_GOLDEN: tuple[tuple[str, str, dict[str, tuple[int, int, int]]], ...] = (
    ("e1", "e2", {"e12": (1, 0, 0)}),
    ("e1", "e3", {"e13": (1, 0, 0)}),
    ("e1", "e123", {"e'1123": (1, 0, 0)}),
    ("e1", "f21", {"f2": (1, 0, 0)}),
    ("e1", "f31", {"f3": (0, 1, 0)}),
    ("e1", "f'3211", {"f321": (-1, -1, 0)}),
    ("e2", "e13", {"e123": (-1, 0, 0)}),
    ("e2", "f21", {"f1": (1, 0, 0)}),
    ("e2", "f321", {"f31": (1, 0, 0)}),
    ("e3", "e12", {"e123": (-1, 0, 0)}),
    ("e3", "f31", {"f1": (1, 0, 0)}),
    ("e3", "f321", {"f21": (1, 0, 0)}),
    ("f1", "f2", {"f21": (-1, 0, 0)}),
    ("f1", "f3", {"f31": (-1, 0, 0)}),
    ("f1", "f321", {"f'3211": (1, 0, 0)}),
    ("f1", "e12", {"e2": (1, 0, 0)}),
    ("f1", "e13", {"e3": (0, 1, 0)}),
    ("f1", "e'1123", {"e123": (1, 1, 0)}),
    ("f2", "f31", {"f321": (1, 0, 0)}),
    ("f2", "e12", {"e1": (-1, 0, 0)}),
    ("f2", "e123", {"e13": (-1, 0, 0)}),
    ("f3", "f21", {"f321": (1, 0, 0)}),
    ("f3", "e13", {"e1": (-1, 0, 0)}),
    ("f3", "e123", {"e12": (-1, 0, 0)}),
    ("e12", "e13", {"e'1123": (-1, 0, 0)}),
    ("e12", "f21", {"h1": (1, 0, 0), "h2": (-1, 0, 0)}),
    ("e12", "f321", {"f3": (0, 1, 0)}),
    ("e12", "f'3211", {"f31": (1, 1, 0)}),
    ("e13", "f31", {"h1": (1, 0, 0), "h3": (0, -1, 0)}),
    ("e13", "f321", {"f2": (1, 0, 0)}),
    ("e13", "f'3211", {"f21": (1, 1, 0)}),
    ("f21", "f31", {"f'3211": (-1, 0, 0)}),
    ("f21", "e123", {"e3": (0, 1, 0)}),
    ("f21", "e'1123", {"e13": (-1, -1, 0)}),
    ("f31", "e123", {"e2": (1, 0, 0)}),
    ("f31", "e'1123", {"e12": (-1, -1, 0)}),
    ("f321", "e'1123", {"e1": (-1, -1, 0)}),
    ("e'1123", "f'3211", {"h1": (-2, -2, 0), "h2": (1, 1, 0), "h3": (0, 1, 1)}),
)

D21A_PARAMETERS = (1, 2, 3, -2)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} [{self.number:2d}] {self.title} ({self.seconds:.1f}s)"
        return text + (f": {self.detail}" if self.detail else "")


def d21a_golden_mismatches(a: int) -> list[tuple[str, str]]:
    """Entries of the D(2,1;a) bracket table that the realization does not reproduce."""
    real = D21ARealization(a)
    el = real.named_elements()
    bad = []
    for x, y, expected in D21A_GOLDEN:
        want = real.zero()
        for name, (c0, c1, c2) in expected.items():
            want = want + el[name].scale(c0 + c1 * a + c2 * a * a)
        if real.bracket(el[x], el[y]) != want:
            bad.append((x, y))
    return bad


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def criterion_1(seed: int) -> CriterionResult:
    bad, slow = [], []
    for fam in CERTIFIED_FAMILIES:
        t0 = time.perf_counter()
        cb = build_chevalley_basis(fam)
        rep = verify_chevalley_axioms(cb)
        consts = structure_constants(cb)
        if not rep.ok or not all(is_integer(c) for _, _, c in consts):
            bad.append(f"{fam}: {len(rep.violations)} violations")
        if time.perf_counter() - t0 >= 10:
            slow.append(fam)
    ok = not bad and not slow
    return CriterionResult(1, "Chevalley-basis certification", ok, "; ".join(bad + [f"slow {f}" for f in slow]))


def criterion_2(seed: int) -> CriterionResult:
    bad = {a: d21a_golden_mismatches(a) for a in D21A_PARAMETERS}
    bad = {a: v for a, v in bad.items() if v}
    detail = "; ".join(f"a={a}: " + ", ".join(f"[{x},{y}]" for x, y in v) for a, v in bad.items())
    return CriterionResult(2, "D(2,1;a) golden table", not bad, detail, data={"mismatches": bad})


def criterion_3(seed: int, samples: int = 200) -> CriterionResult:
    problems = []
    for fam in ("sl(2|1)", "osp(1|2)"):
        cb = build_chevalley_basis(fam)
        rng = random.Random(seed)
        t0 = time.perf_counter()
        for trial in range(samples):
            e = random_product(cb, rng)
            stats = NormalizationStats()
            n = pbw_normalize(e, cb, stats)
            if stats.violations:
                problems.append(f"{fam}#{trial}: measure not decreasing")
            if not integrality_check(n)[0]:
                problems.append(f"{fam}#{trial}: non-integral output")
            if not all(is_normal(m, cb.rd) for m in n.terms):
                problems.append(f"{fam}#{trial}: output not normal")
            if pbw_normalize(n, cb) != n:
                problems.append(f"{fam}#{trial}: not idempotent")
            if oracle_straighten(n, cb) != oracle_straighten(e, cb):
                problems.append(f"{fam}#{trial}: oracle disagrees")
        if time.perf_counter() - t0 >= 60:
            problems.append(f"{fam}: over 60 s")
    return CriterionResult(3, "PBW normalization at desk scale", not problems, "; ".join(problems[:5]))


def criterion_4(seed: int) -> CriterionResult:
    cb = build_chevalley_basis("sl(2|1)")
    prod = enumerate_basis(cb, 4)
    brute = enumerate_basis_bruteforce(cb, 4)
    ok = len(prod) == len(set(prod)) and set(prod) == set(brute)
    return CriterionResult(4, "basis factorization", ok, "" if ok else f"{len(prod)} vs {len(brute)}", data={"size": len(prod)})


def commutator_pairs(cb, gm, rng: random.Random):
    """Every applicable generator pair for the three commutator identities."""
    rd = cb.rd
    ring = gm.ring
    for g in rd.odd_roots:
        for a in rd.even_roots:
            yield odd_generator(cb, g, ring.random_odd(rng)), EvenRoot(a, ring.random_even(rng))
        for d in rd.odd_roots:
            yield odd_generator(cb, g, ring.random_odd(rng)), odd_generator(cb, d, ring.random_odd(rng))
    tori = [Torus(tuple(int(i == j) for j in range(rd.rank)), ring.random_even(rng, unit=True)) for i in range(rd.rank)]
    tori += [torus_for_root(cb, r, ring.random_even(rng, unit=True)) for r in rd.roots if r in rd.coroots]
    for h in tori:
        for r in rd.roots:
            if r.parity == 0:
                yield h, EvenRoot(r, ring.random_even(rng))
            else:
                yield h, odd_generator(cb, r, ring.random_odd(rng))


def criterion_5(seed: int) -> CriterionResult:
    problems = []
    counts = {}
    t0 = time.perf_counter()
    for fam in ("sl(2|1)", "osp(3|2)"):
        cb = build_chevalley_basis(fam)
        gm = group_module(cb, n_gens=4)
        rng = random.Random(seed)
        for g1, g2 in commutator_pairs(cb, gm, rng):
            res = commutator(g1, g2, gm)
            counts[res.kind] = counts.get(res.kind, 0) + 1
            if not res.ok:
                problems.append(f"{fam}: {res.kind} {g1.root if hasattr(g1, 'root') else g1.h}")
    if time.perf_counter() - t0 >= 30:
        problems.append("over 30 s")
    return CriterionResult(5, "commutator identities", not problems, "; ".join(problems[:5]), data=counts)


def criterion_6(seed: int, samples: int = 50) -> CriterionResult:
    problems = []
    for fam in ("osp(1|2)", "osp(3|2)"):
        cb = build_chevalley_basis(fam)
        gm = group_module(cb, n_gens=4)
        rng = random.Random(seed)
        roots = [g for g in cb.rd.odd_roots if has_square(cb, g)]
        if not roots:
            problems.append(f"{fam}: no root with 2*root a root")
        for _ in range(samples):
            ring = gm.ring
            for g in roots:
                if not one_parameter_law(gm, g, ring.random_even(rng), ring.random_odd(rng), ring.random_even(rng), ring.random_odd(rng)):
                    problems.append(f"{fam}: {cb.rd.label(g)}")
    return CriterionResult(6, "one-parameter law for 1|1 generators", not problems, "; ".join(problems[:5]))


def augment_word(w: GroupWord, rng: random.Random, gm) -> GroupWord:
    """An equal word: split some generators into two factors and insert cancelling pairs."""
    ring = gm.ring
    out = []
    for g in w.gens:
        if isinstance(g, EvenRoot) and rng.random() < 0.5:
            s = ring.random_even(rng)
            out += [EvenRoot(g.root, s), EvenRoot(g.root, g.t - s)]
        elif isinstance(g, OddRootFree) and rng.random() < 0.5:
            s = ring.random_odd(rng)
            out += [OddRootFree(g.root, s), OddRootFree(g.root, g.theta - s)]
        elif isinstance(g, OddRootSquare) and rng.random() < 0.5:
            # x(t, th) = x(t1, th1) x(t - t1 + th1 (th - th1), th - th1)
            t1, th1 = ring.random_even(rng, body=False), ring.random_odd(rng)
            out += [OddRootSquare(g.root, t1, th1), OddRootSquare(g.root, g.t - t1 + th1 * (g.theta - th1), g.theta - th1)]
        else:
            out.append(g)
        if rng.random() < 0.3:
            extra = random_word(gm, rng, 1).gens[0]
            out += [extra, inverse_generator(extra)]
    return GroupWord(w.ring, tuple(out))


def criterion_7(seed: int, samples: int = 100) -> CriterionResult:
    cb = build_chevalley_basis("sl(2|1)")
    gm = group_module(cb, n_gens=6)
    rng = random.Random(seed)
    problems = []
    t0 = time.perf_counter()
    for trial in range(samples):
        w = random_word(gm, rng, rng.randint(1, 8))
        m = word_to_matrix(w, gm)
        nf = factorize(w, gm, FactorizationStats())
        if normal_form_matrix(nf, gm) != m:
            problems.append(f"#{trial}: normal form matrix differs")
            continue
        ex = extract_odd_coordinates(m, gm)
        if ex.coordinates() != nf.coordinates() or ex.g0 != nf.g0:
            problems.append(f"#{trial}: extraction disagrees")
        w2 = augment_word(w, rng, gm)
        if word_to_matrix(w2, gm) != m:
            problems.append(f"#{trial}: augmented word changed the element")
            continue
        nf2 = factorize(w2, gm)
        if nf2.coordinates() != nf.coordinates() or nf2.g0 != nf.g0:
            problems.append(f"#{trial}: coordinates not stable")
    if time.perf_counter() - t0 >= 60:
        problems.append("over 60 s")
    return CriterionResult(7, "unique factorization", not problems, "; ".join(problems[:5]))


def criterion_8(seed: int) -> CriterionResult:
    problems = []
    for fam in ("sl(2|1)", "osp(1|2)", "osp(3|2)", "P(2)", "D(2,1;2)"):
        cb = build_chevalley_basis(fam)
        gm = group_module(cb, n_gens=4, max_degree=1)
        rep = semidirect_check(gm, random.Random(seed), samples=20)
        if not rep.ok:
            problems.append(f"{fam}: {rep.failures[0]}")
    return CriterionResult(8, "semidirect degeneration", not problems, "; ".join(problems))


def criterion_9(seed: int) -> CriterionResult:
    problems = []
    checks = 0
    for fam in CERTIFIED_FAMILIES:
        rep = lie_functor(build_chevalley_basis(fam))
        checks += rep.checks
        if not rep.ok:
            problems.append(f"{fam}: {rep.failures[0]}")
    return CriterionResult(9, "Lie functor reproduces the bracket", not problems, "; ".join(problems), data={"checks": checks})


def lattice_modules(fam: str):
    cb = build_chevalley_basis(fam)
    mods = [adjoint_module(cb)]
    try:
        mods.insert(0, defining_module(cb))
    except ValueError:
        pass
    return mods


def halving_witness(mod, lat):
    """(vector index, witness) for the first basis vector whose halving breaks admissibility."""
    for v in range(mod.dim):
        half = [list(r) for r in lat]
        for r in range(mod.dim):
            half[r][v] = half[r][v] * Fraction(1, 2)
        ok, wit = admissible_check(mod, half)
        if not ok:
            return v, wit
    return None


def criterion_10(seed: int) -> CriterionResult:
    problems = []
    t0 = time.perf_counter()
    for fam in ("sl(2|1)", "osp(1|2)", "osp(3|2)", "osp(2|2)", "P(2)", "D(2,1;2)"):
        for mod in lattice_modules(fam):
            lat = standard_lattice(mod)
            ok, wit = admissible_check(mod, lat)
            if not ok:
                problems.append(f"{fam} {mod.kind}: {wit.generator} fails")
            if halving_witness(mod, lat) is None:
                problems.append(f"{fam} {mod.kind}: every half-scaled lattice accepted")
            if missing_coroots(mod):
                problems.append(f"{fam} {mod.kind}: coroots missing from the stabilizer")
    if time.perf_counter() - t0 >= 10:
        problems.append("over 10 s")
    return CriterionResult(10, "admissible lattices", not problems, "; ".join(problems))


CRITERIA: tuple[Callable[[int], CriterionResult], ...] = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
)


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    t0 = time.perf_counter()
    res = CRITERIA[number - 1](seed)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(seed: int = 0, jobs: int = 1) -> list[CriterionResult]:
    numbers = range(1, len(CRITERIA) + 1)
    if jobs <= 1:
        return [run_criterion(n, seed) for n in numbers]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_criterion, numbers, [seed] * len(CRITERIA)))
