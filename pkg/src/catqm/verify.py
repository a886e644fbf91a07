"""Named verification suites behind the ``verify`` command.

Each case evaluates a construction exactly and yields one report; suites
group cases.  Cases run on a worker pool capped by the ``CATQM_JOBS``
environment variable, and reports are always emitted in sorted case
order so output is deterministic.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional

from . import constructions as C
from . import kernel as k
from . import protocols as P
from .matrix import Matrix, Model, evaluate
from .models import standard_model
from .protocols import VerificationReport, compare_matrices
from .scalars import HALF_SQRT2, I_UNIT, ONE, QiSqrt2


def _report_bool(case, model_name, ok, witness, started, shape=(0, 0)):
    ms = (time.perf_counter() - started) * 1000.0
    return VerificationReport(case, model_name, shape, shape, ok,
                              None if ok else witness, round(ms, 3))


def _eq_case(case: str, builder) -> Callable[[Model], VerificationReport]:
    def run(model: Model) -> VerificationReport:
        started = time.perf_counter()
        lhs, rhs = builder(model)
        return compare_matrices(case, model.name, evaluate(lhs, model),
                                evaluate(rhs, model), started)

    return run


def _case_teleportation(model):
    return _eq_case("teleportation", P.build_teleportation)(model)


def _lgt_case(gen_name):
    def run(model):
        started = time.perf_counter()
        f = evaluate(k.GenMor(gen_name), model)
        lhs, rhs, model2 = P.build_logic_gate_teleportation(
            f, model, gen_name=f"lgt_{gen_name}")
        return compare_matrices(f"lgt-{gen_name}", model.name,
                                evaluate(lhs, model2), evaluate(rhs, model2),
                                started)

    return run


def _case_cnot_relations(model):
    started = time.perf_counter()
    results = P.cnot_relations(model)
    bad = [desc for desc, ok in results if not ok]
    return _report_bool("cnot-relations", model.name, not bad,
                        "; ".join(bad), started, (4, 4))


def _case_cnot(model):
    return _eq_case("cnot", P.build_cnot_teleportation)(model)


def _case_swap(model):
    return _eq_case("swap", P.build_entanglement_swapping)(model)


def _case_swap_projectors(model):
    started = time.perf_counter()
    failures = []
    for i, term in enumerate(P.swap_measurement_branches(model), start=1):
        p = evaluate(term, model)
        if p @ p != p:
            failures.append(f"branch {i} not idempotent")
        if p.dagger() != p:
            failures.append(f"branch {i} not self-adjoint")
    return _report_bool("swap-projectors", model.name, not failures,
                        "; ".join(failures), started, (4, 4))


def _case_rel_nobase(model):
    started = time.perf_counter()
    tried, rejected = P.rel_prebase_search()
    return _report_bool("rel-nobase", "rel", tried == 48 and rejected == tried,
                        f"{tried - rejected} of {tried} candidates slipped through",
                        started, (4, 4))


def _basis_case(n):
    def run(model):
        started = time.perf_counter()
        b = C.basis_structure(n, model.sr)
        failures = []
        if not C.comonoid_laws_hold(b):
            failures.append("comonoid laws fail")
        if not C.frobenius_identity_holds(b):
            failures.append("Frobenius identity fails")
        if not C.measurement_coalgebra_check(b):
            failures.append("measurement coalgebra square fails")
        return _report_bool(f"constructions-basis-{n}", model.name,
                            not failures, "; ".join(failures), started,
                            b.copy.shape)

    return run


def _case_decoherence(model):
    started = time.perf_counter()
    b = C.basis_structure(2, model.sr)
    dec = C.decoherence(b)
    sel = Matrix.zeros(model.sr, 4, 4)
    one = model.sr.one()
    for i in range(2):
        sel.data[(i * 2 + i) * 4 + (i * 2 + i)] = one
    ok = dec == sel and dec @ dec == dec
    return _report_bool("constructions-decoherence", model.name, ok,
                        "Copy.Copy+ is not the diagonal selector", started,
                        dec.shape)


_DOUBLING_ALPHABET = (QiSqrt2(0), QiSqrt2(1), QiSqrt2(-1), I_UNIT,
                      -I_UNIT, HALF_SQRT2, -HALF_SQRT2)


def _det_matrix(sr, seed, n=2):
    """A deterministic small matrix from a seed (alphabet entries)."""
    data = []
    state = seed
    for _ in range(n * n):
        state = (state * 1103515245 + 12345) % (1 << 31)
        data.append(sr.from_exact(_DOUBLING_ALPHABET[state % len(_DOUBLING_ALPHABET)]))
    return Matrix(sr, n, n, data)


def _case_doubling(model):
    started = time.perf_counter()
    failures = []
    eye = Matrix.identity(model.sr, 2)
    if C.wproj_double(eye) != Matrix.identity(model.sr, 4):
        failures.append("double of the identity is not the identity")
    for seed in range(100):
        f = _det_matrix(model.sr, 2 * seed + 1)
        g = _det_matrix(model.sr, 2 * seed + 2)
        if C.wproj_double(g @ f) != C.wproj_double(g) @ C.wproj_double(f):
            failures.append(f"doubling not functorial at seed {seed}")
            break
    return _report_bool("constructions-doubling", model.name, not failures,
                        "; ".join(failures), started, (4, 4))


def _case_global_phase(model):
    started = time.perf_counter()
    failures = []
    units = (ONE, -ONE, I_UNIT, -I_UNIT)
    for seed in range(25):
        f = _det_matrix(model.sr, seed + 501)
        for u in units:
            g = f.scale(model.sr.from_exact(u))
            w = C.global_phase_equal(f, g)
            if not w.equal:
                failures.append(f"phase {u} not erased at seed {seed}")
    b2 = evaluate(k.GenMor("beta2"), model)
    eye = Matrix.identity(model.sr, 2)
    if C.global_phase_equal(eye, b2).equal:
        failures.append("distinct maps reported phase-equal")
    return _report_bool("constructions-global-phase", model.name,
                        not failures, "; ".join(failures[:3]), started, (2, 2))


def _case_no_cloning(model):
    rep = C.no_cloning_witness()
    rep.case = "constructions-no-cloning"
    rep.model = model.name
    return rep


def _case_projector_fine_structure(model):
    started = time.perf_counter()
    failures = []
    for gname in ("beta1", "beta2", "beta3", "beta4", "H"):
        f = evaluate(k.GenMor(gname), model)
        p = C.bipartite_projector(f)
        s_f = C.bipartite_normalizer(f)
        pn = p.scale(s_f)
        if pn @ pn != pn:
            failures.append(f"{gname}: normalised projector not idempotent")
        name_col = Matrix.zeros(model.sr, 4, 1)
        for kk in range(2):
            for j in range(2):
                name_col.data[kk * 2 + j] = f.entry(j, kk)
        if pn @ name_col != name_col:
            failures.append(f"{gname}: projector does not absorb the name")
    return _report_bool("constructions-projectors", model.name, not failures,
                        "; ".join(failures), started, (4, 4))


CASES: Dict[str, Callable[[Model], VerificationReport]] = {
    "teleportation": _case_teleportation,
    "lgt-beta1": _lgt_case("beta1"),
    "lgt-beta2": _lgt_case("beta2"),
    "lgt-beta3": _lgt_case("beta3"),
    "lgt-beta4": _lgt_case("beta4"),
    "lgt-H": _lgt_case("H"),
    "cnot-relations": _case_cnot_relations,
    "cnot": _case_cnot,
    "swap": _case_swap,
    "swap-projectors": _case_swap_projectors,
    "rel-nobase": _case_rel_nobase,
    "constructions-basis-2": _basis_case(2),
    "constructions-basis-3": _basis_case(3),
    "constructions-basis-4": _basis_case(4),
    "constructions-decoherence": _case_decoherence,
    "constructions-doubling": _case_doubling,
    "constructions-global-phase": _case_global_phase,
    "constructions-no-cloning": _case_no_cloning,
    "constructions-projectors": _case_projector_fine_structure,
}

SUITES: Dict[str, List[str]] = {
    "teleportation": ["teleportation"],
    "lgt": ["lgt-beta1", "lgt-beta2", "lgt-beta3", "lgt-beta4", "lgt-H"],
    "cnot": ["cnot-relations", "cnot"],
    "swap": ["swap", "swap-projectors"],
    "constructions": sorted(name for name in CASES if name.startswith("constructions-")),
    "rel-nobase": ["rel-nobase"],
}
SUITES["all"] = sorted(CASES)


_MATRIX_BUILDERS = {
    "teleportation": lambda model: P.build_teleportation(model),
    "cnot": lambda model: P.build_cnot_teleportation(model),
    "swap": lambda model: P.build_entanglement_swapping(model),
}


def case_matrices(case_name: str, model_name: str = "fdhilb-exact"):
    """(lhs, rhs) matrices of an equality case, or None for law cases."""
    model = standard_model(model_name)
    if case_name.startswith("lgt-"):
        gen_name = case_name[len("lgt-"):]
        f = evaluate(k.GenMor(gen_name), model)
        lhs, rhs, model2 = P.build_logic_gate_teleportation(
            f, model, gen_name=f"lgt_{gen_name}")
        return evaluate(lhs, model2), evaluate(rhs, model2)
    builder = _MATRIX_BUILDERS.get(case_name)
    if builder is None:
        return None
    lhs, rhs = builder(model)
    return evaluate(lhs, model), evaluate(rhs, model)


def default_jobs() -> int:
    env = os.environ.get("CATQM_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def run_suite(suite: str, model_name: str = "fdhilb-exact",
              jobs: Optional[int] = None) -> List[VerificationReport]:
    """Run a named suite; reports come back sorted by case name."""
    if suite not in SUITES:
        raise KeyError(
            f"unknown suite {suite!r}; choose one of {', '.join(sorted(SUITES))}")
    names = sorted(SUITES[suite])
    jobs = jobs or default_jobs()

    def run_one(case_name):
        # the relational counterexample always runs in its own model
        model = standard_model("rel" if case_name == "rel-nobase" else model_name)
        return CASES[case_name](model)

    if jobs == 1 or len(names) == 1:
        return [run_one(n) for n in names]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_one, names))
