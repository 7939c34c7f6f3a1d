"""Acceptance harness: randomized oracle batches cross-checking the parity
engine, the descent and the root numbers, plus the density and
group-algebra checks.  ``python -m twistlab validate`` runs it."""

import itertools
import logging
import os
import sys
from math import gcd

import numpy as np
import pandas as pd
from sympy import n_order, primerange

from . import f2
from .arith import REAL, factor, hilbert, is_squarefree
from .config import DEFAULT_MAX_X, DENSITY_MAX_X, RANDOM_SEED, REPORTS_PATH
from .curve import GaloisType, ReductionType, bad_primes, make_curve, minimal_model, reduction_type, twist, two_division
from .descent import FullTorsionCurve, relaxed_strict, sel2, twist_full, verify_twist_formula
from .errors import FamilyCheckFailed, TwistNotFound
from .gmodule import direct_sum, group_algebra, regular_module, simple_module, split_module, trivial_module, GModule
from .localdata import Admissible, ParityFlag, PlaceDescriptor, PlaceKind, admissible, h1f_dim
from .parity import classify_constant_parity, kramer_parity, parity_crosscheck, root_number
from .twistsearch import density_scan, family_curve, flip_twist, stable_twist_primes

logger = logging.getLogger(__name__)

OUTPUT_CSV = os.path.join(REPORTS_PATH, "full_validation.csv")

E0 = make_curve([0, -1, 1, 0, 0])
C3_CURVE = make_curve([0, 0, 0, -3, 1])


# ------------------------------
# RANDOM INPUTS
# ------------------------------
def random_full_torsion(rng: np.random.Generator, bound: int = 50) -> FullTorsionCurve:
    while True:
        e = [int(x) for x in rng.integers(-bound, bound + 1, size=3)]
        if len(set(e)) == 3:
            return FullTorsionCurve(*e)


def random_semistable_full_torsion(rng: np.random.Generator) -> FullTorsionCurve:
    """y^2 = x(x - A)(x + B) with A = -1 mod 4, 16 | B, gcd(A, B) = 1."""
    while True:
        A = 4 * int(rng.integers(-12, 13)) - 1
        B = 16 * int(rng.integers(-3, 4))
        if B and gcd(A, B) == 1 and A != -B:
            return FullTorsionCurve(0, A, -B)


def admissible_discs(E: FullTorsionCurve, bound: int = 500) -> list:
    """Nontrivial d with |d| <= bound admissible for E."""
    out = []
    for d in range(-bound, bound + 1):
        if d in (0, 1) or d % 8 != 1 or not is_squarefree(d):
            continue
        if isinstance(admissible(E.curve, d), Admissible):
            out.append(d)
    return out


def random_admissible(rng: np.random.Generator, bound: int = 500) -> tuple:
    while True:
        E = random_full_torsion(rng)
        discs = admissible_discs(E, bound)
        if discs:
            return E, discs[int(rng.integers(len(discs)))]


def random_gmodule(rng: np.random.Generator, p: int) -> GModule:
    pieces = [trivial_module(p, 1), regular_module(p)] + [simple_module(p, f) for f in group_algebra(p).factors]
    B = pieces[int(rng.integers(len(pieces)))]
    for _ in range(int(rng.integers(0, 3))):
        B = direct_sum(B, pieces[int(rng.integers(len(pieces)))])
    n = B.dim
    while True:
        P = rng.integers(0, 2, size=(n, n)).astype(np.uint8)
        if f2.rank(P) == n:
            break
    return GModule(p, f2.matmul(f2.matmul(P, B.action), f2.inverse(P)))


# ------------------------------
# 1-4. ORACLE AGREEMENT
# ------------------------------
def check_kramer_oracle(rng, n: int) -> dict:
    agree = 0
    for _ in range(n):
        E, d = random_admissible(rng)
        d2 = sel2(E).dim
        d2_twist = sel2(twist_full(E, d)).dim
        flip = kramer_parity(E.curve, d).flip_bit
        if (d2_twist - d2 - flip) % 2 == 0:
            agree += 1
        else:
            logger.error("Kramer mismatch for %s, d=%d: d2 %d -> %d, flip %d", E.roots, d, d2, d2_twist, flip)
    return {"kramer_cases": n, "kramer_agree": agree}


def check_poitou_tate(rng, n: int) -> dict:
    ok = 0
    for _ in range(n):
        E = random_full_torsion(rng)
        pool = [REAL] + list(E.bad_support) + [q for q in (3, 5, 7, 11, 13) if q not in E.bad_support]
        k = int(rng.integers(0, 3))
        T = [pool[i] for i in rng.choice(len(pool), size=k, replace=False)]
        setup = relaxed_strict(E, T)
        expected = sum(h1f_dim(E.curve, v) for v in T)
        if setup.dim_relaxed - setup.dim_strict == expected and setup.dim_vt + setup.dim_strict == setup.d2:
            ok += 1
        else:
            logger.error("Poitou-Tate mismatch for %s, T=%s: %s", E.roots, T, setup)
    return {"poitou_tate_cases": n, "poitou_tate_ok": ok}


def check_twist_formula(rng, n: int) -> dict:
    passed = 0
    for _ in range(n):
        E, d = random_admissible(rng)
        report = verify_twist_formula(E, d)
        passed += report.passed
        if not report.passed:
            logger.error("twist formula failed for %s, d=%d: %s", E.roots, d, report)
    return {"twist_formula_cases": n, "twist_formula_passed": passed}


def check_root_numbers(rng, n: int) -> dict:
    checked = agree = 0
    for _ in range(n):
        E = random_semistable_full_torsion(rng)
        if not root_number(E.curve, strict=False).domain_ok:
            continue
        checked += 1
        agree += parity_crosscheck(E.curve, sel2(E).dim)
    return {"root_number_cases": checked, "root_number_agree": agree}


# ------------------------------
# 5-8. SIEVES AND FAMILY
# ------------------------------
def check_density(X: int) -> dict:
    s3 = density_scan(E0, X).fractions()
    c3 = density_scan(C3_CURVE, X).fractions()
    return {
        "density_x": X,
        "s3_order3_fraction": round(s3.get(3, 0.0), 4),
        "c3_order3_fraction": round(c3.get(3, 0.0), 4),
        "density_ok": abs(s3.get(3, 0.0) - 1 / 3) <= 0.02 and abs(c3.get(3, 0.0) - 2 / 3) <= 0.02,
    }


def check_stable_twists(X: int) -> dict:
    w0 = root_number(E0).global_
    primes = stable_twist_primes(E0, X)
    ok = sum(
        1
        for p in primes
        if admissible(E0, p) == Admissible(()) and root_number(twist(E0, p)).global_ == w0
    )
    return {"stable_primes": len(primes), "stable_ok": ok}


def family_curves(count: int = 10) -> list:
    """First passing t0 in 0..4 for each of the first odd primes."""
    out = []
    for p in primerange(3, 100):
        for t0 in range(5):
            try:
                out.append((p, t0, family_curve(p, t0)))
                break
            except FamilyCheckFailed:
                continue
        if len(out) == count:
            break
    return out


def check_flip(X: int, count: int = 10) -> dict:
    curves = [E0] + [E for _, _, E in family_curves(count)]
    ok = 0
    for E in curves:
        try:
            d = flip_twist(E, X)
        except TwistNotFound as exc:
            logger.error("%s", exc)
            continue
        ok += root_number(twist(E, d)).global_ == -root_number(E).global_
    return {"flip_curves": len(curves), "flip_ok": ok}


def check_family(count: int = 10) -> dict:
    ok = 0
    found = family_curves(count)
    for p, _, E in found:
        M = minimal_model(E)
        semistable = all(reduction_type(M, q).type is not ReductionType.ADDITIVE for q in bad_primes(M))
        red = reduction_type(M, p)
        ok += semistable and red.ord_delta_min == 1 and two_division(M).galois_type is GaloisType.S3
    eta0 = all(
        make_curve([0, -1, 1, 0, t]).disc == -(4 * t + 1) * (108 * t + 11) and make_curve([0, -1, 1, 0, t]).c4 == 16
        for t in range(5)
    )
    return {"family_curves": len(found), "family_ok": ok, "family_eta0_ok": eta0}


# ------------------------------
# 9-11. ALGEBRA, CLASSIFIER, HILBERT
# ------------------------------
def check_group_algebra(rng, n: int) -> dict:
    dims_ok = all(
        set(group_algebra(p).simple_dims) == {n_order(2, p)} and sum(group_algebra(p).simple_dims) == p - 1
        for p in (3, 5, 7, 11, 13)
    )
    additive = 0
    for _ in range(n):
        p = int(rng.choice([3, 5, 7]))
        B = random_gmodule(rng, p)
        split = split_module(B)
        degrees = dict(zip(split.multiplicities, group_algebra(p).simple_dims))
        total = split.fixed_dim + sum(m * degrees[k] for k, m in split.multiplicities.items())
        additive += total == B.dim
    return {"gmodule_dims_ok": dims_ok, "gmodule_cases": n, "gmodule_additive": additive}


CLASSIFIER_ALPHABET = (
    PlaceDescriptor(PlaceKind.REAL),
    PlaceDescriptor(PlaceKind.COMPLEX),
    PlaceDescriptor(PlaceKind.FINITE, p=7, reduction=ReductionType.GOOD),
    PlaceDescriptor(PlaceKind.FINITE, p=5, reduction=ReductionType.MULT_SPLIT, ord_delta=1),
    PlaceDescriptor(PlaceKind.FINITE, p=3, reduction=ReductionType.ADDITIVE, ord_delta=3, flag=ParityFlag.YES),
    PlaceDescriptor(PlaceKind.FINITE, p=2, reduction=ReductionType.ADDITIVE, ord_delta=4, flag=ParityFlag.NO),
)


def check_classifier(max_size: int = 6) -> dict:
    total = ok = 0
    for k in range(1, max_size + 1):
        for places in itertools.combinations_with_replacement(CLASSIFIER_ALPHABET, k):
            total += 1
            verdict = classify_constant_parity(list(places))
            has_no = any(
                d.kind is PlaceKind.REAL
                or (d.reduction is not None and d.reduction.multiplicative)
                or d.flag is ParityFlag.NO
                for d in places
            )
            ok += verdict.constant == (not has_no)
    return {"classifier_cases": total, "classifier_ok": ok}


def check_hilbert(rng, n: int) -> dict:
    ok = 0
    for _ in range(n):
        a, b = (int(x) for x in rng.integers(1, 10**4 + 1, size=2) * rng.choice([-1, 1], size=2))
        places = [REAL] + factor(2 * a * b).primes()
        product = 1
        for v in places:
            product *= hilbert(a, b, v)
        ok += product == 1
    return {"hilbert_cases": n, "hilbert_ok": ok}


# ------------------------------
# RUN
# ------------------------------
def run_validation(
    size: int | None = None,
    seed: int = RANDOM_SEED,
    density_x: int = DENSITY_MAX_X,
    flip_x: int = DEFAULT_MAX_X,
    export: bool = True,
) -> dict:
    """Run every acceptance check; ``size`` shrinks the randomized batches."""
    rng = np.random.default_rng(seed)
    n = size or 200
    summary = {"seed": seed}
    summary.update(check_kramer_oracle(rng, n))
    summary.update(check_poitou_tate(rng, size or 50))
    summary.update(check_twist_formula(rng, size or 100))
    summary.update(check_root_numbers(rng, size or 50))
    summary.update(check_density(density_x if size is None else min(density_x, 1000 * size)))
    summary.update(check_stable_twists(flip_x))
    summary.update(check_flip(flip_x))
    summary.update(check_family())
    summary.update(check_group_algebra(rng, size or 100))
    summary.update(check_classifier())
    summary.update(check_hilbert(rng, 50 * n))
    summary["all_passed"] = bool(
        summary["kramer_agree"] == summary["kramer_cases"]
        and summary["poitou_tate_ok"] == summary["poitou_tate_cases"]
        and summary["twist_formula_passed"] == summary["twist_formula_cases"]
        and summary["root_number_agree"] == summary["root_number_cases"]
        and (summary["density_ok"] or size is not None)
        and summary["stable_ok"] == summary["stable_primes"]
        and summary["flip_ok"] == summary["flip_curves"]
        and summary["family_ok"] == summary["family_curves"]
        and summary["family_eta0_ok"]
        and summary["gmodule_dims_ok"]
        and summary["gmodule_additive"] == summary["gmodule_cases"]
        and summary["classifier_ok"] == summary["classifier_cases"]
        and summary["hilbert_ok"] == summary["hilbert_cases"]
    )
    logger.info("validation summary: %s", summary)
    if export:
        os.makedirs(os.path.dirname(OUTPUT_CSV), exist_ok=True)
        pd.DataFrame([summary]).to_csv(OUTPUT_CSV, index=False)
        logger.info("Full validation CSV exported to %s", OUTPUT_CSV)
    return summary


def print_summary(summary: dict, stream=None) -> None:
    stream = stream or sys.stdout
    print("\n=== TWISTLAB VALIDATION ===", file=stream)
    for key, value in summary.items():
        print(f"{key:<24}: {value}", file=stream)


if __name__ == "__main__":
    print_summary(run_validation())
