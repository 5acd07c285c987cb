"""Bundled verification suites: every library identity checked at truncation.

Each check compares two independently computed values (composition vs closed
form, generic vs oracle, product vs identity) bit-exactly and records the
first offending position on failure.  Randomized instances are drawn from a
seeded generator so reports are reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import builders, duals, matclass, spaces
from .core import (
    Seq,
    Triangle,
    ZERO,
    apply,
    compose,
    dense_identity,
    dense_mul,
    invert,
    transform_seq,
    truncate,
)
from .matclass import BandedMatrix

SUITES = ("identities", "bases", "duals", "matclass", "all")


@dataclass
class CheckResult:
    name: str
    passed: bool
    counterexample: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "counterexample": self.counterexample,
        }


def _entries_equal(name, pairs):
    """Compare (position, expected, got) triples; record the first mismatch."""
    for pos, expected, got in pairs:
        if expected != got:
            return CheckResult(
                name,
                False,
                {"position": pos, "expected": str(expected), "got": str(got)},
            )
    return CheckResult(name, True)


def _matrices_equal(name, a, b, n):
    return _entries_equal(
        name,
        (
            ([row, col], a.entry(row, col), b.entry(row, col))
            for row in range(n)
            for col in range(row + 1)
        ),
    )


def _is_identity(name, dense):
    ident = dense_identity(dense.size)
    return _entries_equal(
        name,
        (
            ([row, col], ident.values[row][col], dense.values[row][col])
            for row in range(dense.size)
            for col in range(dense.size)
        ),
    )


def _rand_rat(rng) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def _rand_finite_seq(rng, max_len=8, label="rand") -> Seq:
    values = [_rand_rat(rng) for _ in range(rng.randint(1, max_len))]
    if all(v == 0 for v in values):
        values[0] = Fraction(1)
    return Seq.from_values(values, label=label)


def _rand_banded(rng, max_rows=6, max_width=5, label="rand_banded") -> BandedMatrix:
    rows = [
        [_rand_rat(rng) for _ in range(rng.randint(1, max_width))]
        for _ in range(rng.randint(1, max_rows))
    ]
    return BandedMatrix.from_rows(rows, label=label)


def _weight_pairs():
    return (
        builders.WeightPair(
            Seq(lambda n: Fraction(1, n + 2), label="1/(n+2)"),
            Seq(lambda k: Fraction(k + 1), label="k+1"),
        ),
        builders.WeightPair(
            Seq(lambda n: Fraction((-1) ** n, n + 1), label="(-1)^n/(n+1)"),
            Seq(lambda k: Fraction(1, k + 1), label="1/(k+1)"),
        ),
        builders.WeightPair(
            Seq(lambda n: Fraction(2, 2 * n + 1), label="2/(2n+1)"),
            Seq(lambda k: Fraction(k + 2, 2), label="(k+2)/2"),
        ),
    )


def _riesz_weights():
    return (
        builders.RieszWeights(Seq(lambda k: Fraction(2**k), label="2^k")),
        builders.RieszWeights(Seq.constant(1, label="e")),
        builders.RieszWeights(Seq(lambda k: Fraction(k + 1), label="k+1")),
    )


def _standard_domains():
    w = _weight_pairs()[0]
    r = _riesz_weights()[0]
    return (
        builders.cesaro_domain(),
        builders.weighted_domain(w),
        builders.riesz_domain(r),
    )


def suite_identities(n: int, rng) -> list:
    checks = []
    w = _weight_pairs()[0]
    r = _riesz_weights()[0]
    named = [
        ("delta", builders.delta()),
        ("cesaro", builders.cesaro()),
        ("weighted", builders.weighted_mean(w)),
        ("riesz", builders.riesz(r)),
        ("phi", builders.phi()),
        ("gamma", builders.gamma(w)),
        ("sigma", builders.sigma_riesz(r)),
    ]
    for label, t in named:
        dense = truncate(t, n)
        dense_inv = truncate(invert(t), n)
        checks.append(_is_identity(f"inverse_identity_right[{label}]", dense_mul(dense, dense_inv)))
        checks.append(_is_identity(f"inverse_identity_left[{label}]", dense_mul(dense_inv, dense)))

    for label, t in named[:2] + [named[4]]:
        checks.append(
            _matrices_equal(f"inverse_involution[{label}]", t, invert(invert(t)), n)
        )

    a, b, c = builders.delta(), builders.cesaro(), builders.sigma_sum()
    left = truncate(compose(a, compose(b, c)), n)
    right = truncate(compose(compose(a, b), c), n)
    checks.append(
        _entries_equal(
            "compose_associativity",
            (
                ([row, col], left.values[row][col], right.values[row][col])
                for row in range(n)
                for col in range(n)
            ),
        )
    )

    x = _rand_finite_seq(rng, label="x")
    composed = apply(compose(a, b), x, n)
    chained = apply(a, transform_seq(b, x), n)
    checks.append(
        _entries_equal(
            "apply_compose_coherence",
            (([i], composed[i], chained[i]) for i in range(n)),
        )
    )

    cesaro_as_weighted = builders.weighted_mean(
        builders.WeightPair(
            Seq(lambda m: Fraction(1, m + 1), label="1/(n+1)"),
            Seq.constant(1, label="e"),
        )
    )
    checks.append(
        _matrices_equal("specialization_weighted_to_cesaro", builders.cesaro(), cesaro_as_weighted, n)
    )
    checks.append(
        _matrices_equal(
            "specialization_riesz_to_cesaro",
            builders.cesaro(),
            builders.riesz(builders.RieszWeights(Seq.constant(1, label="e"))),
            n,
        )
    )

    checks.append(_matrices_equal("closed_form_phi", builders.phi(), builders.phi_closed_form(), n))
    checks.append(
        _matrices_equal("closed_form_gamma", builders.gamma(w), builders.gamma_closed_form(w), n)
    )
    checks.append(
        _matrices_equal("closed_form_sigma", builders.sigma_riesz(r), builders.sigma_closed_form(r), n)
    )
    checks.append(
        _matrices_equal("closed_form_cesaro_inverse", invert(builders.cesaro()), builders.cesaro_inverse(), n)
    )

    sample = truncate(builders.phi(), min(n, 16))
    checks.append(
        _entries_equal(
            "rational_canonical_form",
            (
                (
                    [row, col],
                    True,
                    v.denominator > 0 and Fraction(v.numerator, v.denominator) == v,
                )
                for row in range(sample.size)
                for col in range(sample.size)
                for v in [sample.values[row][col]]
            ),
        )
    )
    return checks


def suite_bases(n: int, rng) -> list:
    checks = []
    domains = _standard_domains()
    for dom in domains:
        t = dom.matrix
        for k in range(min(32, n // 2)):
            got = apply(t, builders.basis_column(t, k), n)
            unit = Seq.unit(k)
            result = _entries_equal(
                f"basis_application[{dom.label},k={k}]",
                (([i], unit(i), got[i]) for i in range(n)),
            )
            if not result.passed:
                checks.append(result)
                break
        else:
            checks.append(CheckResult(f"basis_application[{dom.label}]", True))

    col = builders.basis_column(builders.delta(), 3)
    checks.append(
        _entries_equal(
            "delta_basis_step_shape",
            (([i], ZERO if i < 3 else Fraction(1), col(i)) for i in range(n)),
        )
    )

    r = _riesz_weights()[0]
    inv_sigma = invert(builders.sigma_riesz(r))
    checks.append(
        _entries_equal(
            "riesz_basis_degeneracy",
            (
                (
                    [row, col_],
                    r.big_q(col_) / r.q_at(col_) if row == col_ else Fraction(1),
                    inv_sigma.entry(row, col_),
                )
                for row in range(n)
                for col_ in range(row + 1)
            ),
        )
    )

    for dom in domains:
        t = dom.matrix
        for case in range(5):
            x = _rand_finite_seq(rng, label=f"x{case}")
            top = x.support_bound
            y = apply(t, x, top + 1)
            rebuilt = [
                sum(
                    (y[k] * builders.basis_column(t, k)(i) for k in range(top + 1)),
                    ZERO,
                )
                for i in range(top + 1)
            ]
            result = _entries_equal(
                f"basis_reconstruction[{dom.label},case={case}]",
                (([i], x(i), rebuilt[i]) for i in range(top + 1)),
            )
            if not result.passed:
                checks.append(result)
                break
        else:
            checks.append(CheckResult(f"basis_reconstruction[{dom.label}]", True))
    return checks


def suite_duals(n: int, rng) -> list:
    checks = []
    a = _rand_finite_seq(rng, label="a")
    assoc = duals.alpha_assoc(builders.phi(), a)
    checks.append(
        _entries_equal(
            "alpha_assoc_phi_closed_form",
            (
                (
                    [row, col],
                    (row + 1) * a(row) if row == col else a(row),
                    assoc.entry(row, col),
                )
                for row in range(n)
                for col in range(row + 1)
            ),
        )
    )

    for wi, w in enumerate(_weight_pairs()):
        dom = builders.weighted_domain(w)
        ok = True
        for case in range(3):
            a = _rand_finite_seq(rng, label=f"a{case}")
            report = duals.dual_test(dom, a, "beta", n)
            if not report.cross_check["match"]:
                checks.append(
                    CheckResult(
                        f"beta_cross_check[G,w={wi}]",
                        False,
                        {"case": case, "detail": report.cross_check},
                    )
                )
                ok = False
                break
        if ok:
            checks.append(CheckResult(f"beta_cross_check[G,w={wi}]", True))

    for dom in _standard_domains():
        for kind in duals.DUAL_KINDS:
            a = _rand_finite_seq(rng, max_len=min(8, n // 4), label="a")
            report = duals.dual_test(dom, a, kind, n)
            checks.append(
                CheckResult(
                    f"finite_support_certified[{dom.label},{kind}]",
                    report.verdict == "certified_in",
                    None if report.verdict == "certified_in" else {"verdict": report.verdict},
                )
            )

    dom = builders.cesaro_domain()
    for label, seq in (("e0", Seq.unit(0)), ("geometric", Seq(lambda k: Fraction(1, 2**k)))):
        beta = duals.dual_test(dom.matrix, seq, "beta", n)
        gamma_rep = duals.dual_test(dom.matrix, seq, "gamma", n)
        implied = beta.verdict != "likely_in" or gamma_rep.verdict == "likely_in"
        checks.append(
            CheckResult(
                f"beta_implies_gamma[{label}]",
                implied,
                None if implied else {"beta": beta.verdict, "gamma": gamma_rep.verdict},
            )
        )

    unit_riesz = builders.sigma_riesz(builders.RieszWeights(Seq.constant(1, label="e")))
    a = _rand_finite_seq(rng, label="a")
    same = all(
        duals.dual_test(builders.phi(), a, kind, n).to_dict()
        == duals.dual_test(unit_riesz, a, kind, n).to_dict()
        for kind in duals.DUAL_KINDS
    )
    checks.append(CheckResult("riesz_cesaro_dual_coincidence", same))

    for case in range(5):
        m = _rand_banded(rng, label=f"m{case}")
        dense = truncate(m, n)
        brute_l1 = max(
            sum((abs(dense.values[row][col]) for row in range(n)), ZERO)
            for col in range(n)
        )
        brute_sup = max(
            abs(dense.values[row][col]) for row in range(n) for col in range(n)
        )
        got_l1 = duals.cond_l1_l1(m, n)[-1][1]
        got_sup = duals.cond_l1_linf(m, n)[-1][1]
        if got_l1 != brute_l1 or got_sup != brute_sup:
            checks.append(
                CheckResult(
                    "condition_brute_force_agreement",
                    False,
                    {
                        "case": case,
                        "column_l1": [str(brute_l1), str(got_l1)],
                        "sup": [str(brute_sup), str(got_sup)],
                    },
                )
            )
            break
    else:
        checks.append(CheckResult("condition_brute_force_agreement", True))
    return checks


def suite_matclass(n: int, rng) -> list:
    checks = []
    for dom in _standard_domains():
        ok = True
        for case in range(5):
            a = _rand_banded(rng, label=f"A{case}")
            x = _rand_finite_seq(rng, label=f"x{case}")
            e = matclass.row_transform_E(a, dom.matrix)
            y = transform_seq(dom.matrix, x)
            ax = matclass.apply_general(a, x, n)
            ey = matclass.apply_general(e, y, n)
            result = _entries_equal(
                f"transform_identity_E[{dom.label}]",
                (([i], ax[i], ey[i]) for i in range(n)),
            )
            if not result.passed:
                result.counterexample["case"] = case
                checks.append(result)
                ok = False
                break
        if ok:
            checks.append(CheckResult(f"transform_identity_E[{dom.label}]", True))

        ok = True
        for case in range(5):
            b = _rand_banded(rng, label=f"B{case}")
            z = _rand_finite_seq(rng, label=f"z{case}")
            f = matclass.left_transform_F(b, dom.matrix)
            fz = matclass.apply_general(f, z, n)
            bz = Seq(lambda i, _b=b, _z=z: sum(
                (_b.entry(i, k) * _z(k) for k in range(_b.row_bound(i) + 1)), ZERO
            ))
            phi_bz = apply(dom.matrix, bz, n)
            result = _entries_equal(
                f"transform_identity_F[{dom.label}]",
                (([i], phi_bz[i], fz[i]) for i in range(n)),
            )
            if not result.passed:
                result.counterexample["case"] = case
                checks.append(result)
                ok = False
                break
        if ok:
            checks.append(CheckResult(f"transform_identity_F[{dom.label}]", True))

        report = matclass.class_test_into_domain(
            invert(dom.matrix), dom, spaces.SpaceId.L1, n
        )
        stats = report.transformed_condition["column_l1"]
        flat = all(entry["value"] == "1" for entry in stats)
        checks.append(
            CheckResult(
                f"composition_sanity_F_identity[{dom.label}]",
                flat and report.verdict == "likely_in_class",
                None if flat else {"stats": stats},
            )
        )

    cesaro_style = (
        builders.cesaro_domain(),
        builders.weighted_domain(
            builders.WeightPair(
                Seq(lambda m: Fraction(1, m + 1), label="1/(n+1)"),
                Seq.constant(1, label="e"),
            )
        ),
        builders.riesz_domain(builders.RieszWeights(Seq.constant(1, label="e"))),
    )
    a = _rand_banded(rng, label="A")
    blocks = [
        matclass.class_test_from_domain(a, dom, spaces.SpaceId.LINF, n).transformed_condition
        for dom in cesaro_style
    ]
    checks.append(
        CheckResult(
            "cesaro_coherence_across_domains",
            blocks[0] == blocks[1] == blocks[2],
            None if blocks[0] == blocks[1] == blocks[2] else {"blocks": blocks},
        )
    )
    return checks


def run_suite(suite: str, n: int, seed: int) -> dict:
    """Run one suite (or all) and return a deterministic report dict."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    if n < 8 or n % 4 != 0 or n > 256:
        raise ValueError(
            f"suite truncation must be a multiple of 4 in [8, 256], got {n}"
        )
    rng = random.Random(seed)
    runners = {
        "identities": suite_identities,
        "bases": suite_bases,
        "duals": suite_duals,
        "matclass": suite_matclass,
    }
    selected = list(runners) if suite == "all" else [suite]
    checks = []
    for name in selected:
        checks.extend(runners[name](n, rng))
    failed = [c for c in checks if not c.passed]
    return {
        "suite": suite,
        "n": n,
        "seed": seed,
        "checks": [c.to_dict() for c in checks],
        "summary": {"total": len(checks), "failed": len(failed)},
    }
