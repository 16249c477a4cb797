"""Closed-form extremal bounds and the report type tying them together.

Every bound is kept as an exact rational (several are non-integral,
e.g. 5n/4 and the fixed-set formulas); rounding to integers happens
only in comparisons, ceiling for lower bounds and floor for upper
bounds.  ``exact`` is set only when a divisibility condition guarantees
a certified witness construction exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor
from typing import Optional

from .hypergraph import Hypergraph, HypergraphError


@dataclass(frozen=True)
class BoundReport:
    """(lower, upper, optional exact value) for one extremal quantity."""

    quantity: str
    params: dict = field(compare=False)
    lower: Fraction
    upper: Fraction
    exact: Optional[int] = None
    achievable: bool = False
    witness: Optional[str] = None
    note: str = ""

    def __post_init__(self):
        if self.lower > self.upper:
            raise HypergraphError(
                f"{self.quantity}: lower {self.lower} exceeds upper {self.upper}"
            )
        if self.exact is not None and not (
            self.int_lower <= self.exact <= self.int_upper
        ):
            raise HypergraphError(
                f"{self.quantity}: exact {self.exact} outside "
                f"[{self.int_lower}, {self.int_upper}]"
            )

    @property
    def int_lower(self) -> int:
        return -floor(-self.lower)  # ceiling

    @property
    def int_upper(self) -> int:
        return floor(self.upper)

    def kv_lines(self):
        out = [
            f"quantity={self.quantity}",
        ]
        for k, v in sorted(self.params.items()):
            out.append(f"param.{k}={v}")
        out.append(f"lower={self.lower}")
        out.append(f"upper={self.upper}")
        out.append(f"exact={'' if self.exact is None else self.exact}")
        out.append(f"achievable={str(self.achievable).lower()}")
        if self.witness:
            out.append(f"witness={self.witness}")
        if self.note:
            out.append(f"note={self.note}")
        return out


def tree_upper(n: int, k: int) -> int:
    """(3k-5)n, an upper bound for any k-edge linear 4-tree, k > 1."""
    if k <= 1:
        raise HypergraphError(f"tree bound needs k > 1, got {k}")
    if n < 0:
        raise HypergraphError(f"negative n = {n}")
    return (3 * k - 5) * n


def steiner_union_lower(n: int, k: int):
    """n(k-1)/4 with its applicability flag.

    The value is attained by disjoint order-(3k-2) Steiner components,
    which exist exactly when (3k-2) | n and 3k-2 = 1 or 4 (mod 12).
    Returns (Fraction, applicable).
    """
    value = Fraction(n * (k - 1), 4)
    m = 3 * k - 2
    applicable = m > 0 and n % m == 0 and m % 12 in (1, 4)
    return value, applicable


def path3_bound(n: int) -> BoundReport:
    """ex for the 3-edge linear 4-path: upper n, exact n when 13 | n."""
    exact = n if n % 13 == 0 else None
    return BoundReport(
        quantity="ex4lin(n,P3)",
        params={"n": n},
        lower=Fraction(0) if exact is None else Fraction(exact),
        upper=Fraction(n),
        exact=exact,
        achievable=exact is not None,
        witness="disjoint steiner13 components" if exact is not None else None,
        note="extremal systems are unions of order-13 Steiner components",
    )


def path4_bound(n: int) -> BoundReport:
    """ex for the 4-edge path (equally for S3plus): upper 5n/4,
    exact when 16 | n via disjoint order-16 Steiner components."""
    upper = Fraction(5 * n, 4)
    exact = (5 * n) // 4 if n % 16 == 0 else None
    return BoundReport(
        quantity="ex4lin(n,{S3plus,P4})",
        params={"n": n},
        lower=Fraction(0) if exact is None else Fraction(exact),
        upper=upper,
        exact=exact,
        achievable=exact is not None,
        witness="disjoint steiner16 components" if exact is not None else None,
        note="extremal systems are unions of order-16 Steiner components",
    )


def augmentation_target(n: int) -> int:
    """Extra edges the E4plus-free construction adds beyond 12*floor((n-4)/9).

    Depends only on (n-4) mod 9: residues 0,1,2 -> 0; 3,4 -> 1; 5 -> 2;
    6 -> 4; 7 -> 5; 8 -> 8.
    """
    if n < 4:
        raise HypergraphError(f"augmentation target needs n >= 4, got {n}")
    residue = (n - 4) % 9
    return {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 2, 6: 4, 7: 5, 8: 8}[residue]


def e4plus_bounds(n: int) -> BoundReport:
    """ex for E4plus: lower 12*floor((n-4)/9) + residue extra, upper 2n."""
    if n < 4:
        raise HypergraphError(f"E4plus bounds need n >= 4, got {n}")
    lower = 12 * ((n - 4) // 9) + augmentation_target(n)
    return BoundReport(
        quantity="ex4lin(n,E4plus)",
        params={"n": n},
        lower=Fraction(lower),
        upper=Fraction(2 * n),
        witness="e4plus construction",
        note="lower bound via apex-extended triple-system copies",
    )


def path_upper(n: int, k: int) -> BoundReport:
    """ex for the k-edge path: upper 2.5kn; k = 2 is exactly floor(n/4)."""
    if k < 1 or n < 0:
        raise HypergraphError(f"path bound needs k >= 1 and n >= 0, got k={k}, n={n}")
    upper = Fraction(5 * k * n, 2)
    exact = None
    achievable = False
    witness = None
    if k == 2:
        exact = n // 4
        upper = min(upper, Fraction(exact)) if n >= 0 else upper
        achievable = True
        witness = "perfect matching of quadruples"
    return BoundReport(
        quantity=f"ex4lin(n,P{k})",
        params={"n": n, "k": k},
        lower=Fraction(exact) if exact is not None else Fraction(0),
        upper=upper,
        exact=exact,
        achievable=achievable,
        witness=witness,
    )


def packing_deficiency(m: int) -> int:
    """floor((m/4)*floor((m-1)/3)) minus the packing number, by case."""
    if m in (8, 10, 11):
        return 2
    if m == 19:
        return 3
    if m in (9, 17):
        return 1
    if m % 12 in (7, 10):
        return 1
    return 0


def packing_number(m: int) -> BoundReport:
    """Maximum blocks of a pair-disjoint quadruple packing on m points."""
    if m < 0:
        raise HypergraphError(f"negative m = {m}")
    trivial = (m * ((m - 1) // 3)) // 4
    exact = trivial - packing_deficiency(m)
    note = ""
    if m % 12 in (1, 4):
        # Steiner orders: every pair covered, m(m-1)/12 blocks.
        assert exact == m * (m - 1) // 12
        note = "Steiner order: every pair covered exactly once"
    return BoundReport(
        quantity="D1(m,4,2)",
        params={"m": m},
        lower=Fraction(exact),
        upper=Fraction(exact),
        exact=exact,
        achievable=True,
        witness="optimal packing (table or exact search)",
        note=note,
    )


def g_lower_formula(n: int, k: int) -> Fraction:
    """(k-1)*floor((n-k+1)/3) + C(k-1,2)/6 - 7/2 - (k+2)/6."""
    return (
        (k - 1) * ((n - k + 1) // 3)
        + Fraction(comb(k - 1, 2), 6)
        - Fraction(7, 2)
        - Fraction(k + 2, 6)
    )


def g_upper_formula(n: int, k: int) -> Fraction:
    """(k-1)*floor((n-k+1)/3) + C(k-1,2)/2."""
    return (k - 1) * ((n - k + 1) // 3) + Fraction(comb(k - 1, 2), 2)


def g_bounds(n: int, k: int) -> BoundReport:
    """Bounds on g(n,k), the maximum number of quadruples meeting a fixed
    (k-1)-set in a linear quadruple system on n vertices.

    The lower-bound formula is valid for n >= 4k-4 (flagged in the
    note otherwise); g(n,2) = floor((n-1)/3) exactly.  Above the
    threshold 37(k-1)^2 + 3 this quantity equals the matching Turan
    number ex4lin(n, M_k).
    """
    if k < 2 or n < 0:
        raise HypergraphError(f"g bounds need k >= 2 and n >= 0, got k={k}, n={n}")
    lower_valid = n >= 4 * k - 4
    lower = g_lower_formula(n, k) if lower_valid else Fraction(0)
    upper = g_upper_formula(n, k)
    exact = (n - 1) // 3 if k == 2 else None
    notes = []
    if not lower_valid:
        notes.append(f"lower-bound formula requires n >= {4 * k - 4}")
    if n > matching_threshold(k):
        notes.append("equals ex4lin(n,M_k) at this n")
    return BoundReport(
        quantity="g(n,k)",
        params={"n": n, "k": k},
        lower=max(lower, Fraction(0)),
        upper=upper,
        exact=exact,
        achievable=exact is not None,
        witness="fixed-set construction" if exact is not None else None,
        note="; ".join(notes),
    )


def matching_threshold(k: int) -> int:
    """37(k-1)^2 + 3: beyond this n, ex4lin(n,M_k) = g(n,k).
    Sharp at k = 2, where the threshold evaluates to 40."""
    if k < 1:
        raise HypergraphError(f"threshold needs k >= 1, got {k}")
    return 37 * (k - 1) ** 2 + 3


def check_consistency(report: BoundReport, witness: Optional[Hypergraph] = None,
                      exact: Optional[int] = None):
    """Assert a report against an exact value and/or a witness.

    Returns (ok, findings).  Violations are fatal findings: an exact
    value outside [lower, upper], or an extremal witness smaller than
    the claimed lower bound, would contradict the theory this library
    implements.
    """
    findings = []
    if exact is not None:
        if not report.lower <= exact <= report.upper:
            findings.append(
                f"exact value {exact} outside [{report.lower}, {report.upper}]"
            )
        if report.exact is not None and exact != report.exact:
            findings.append(f"exact value {exact} != reported exact {report.exact}")
    if witness is not None:
        count = len(witness.edges)
        if count > report.upper:
            findings.append(f"witness has {count} edges, above upper {report.upper}")
        if report.achievable and count < report.lower:
            findings.append(f"witness has {count} edges, below lower {report.lower}")
    return not findings, findings
