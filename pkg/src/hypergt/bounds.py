"""Closed-form lower and upper bounds on the number of tests.

Logarithms are base 2 unless a formula is stated with ``ln``.  ``e`` is
Euler's number wherever it appears inside a logarithm.  Every calculator is
a pure function; those with preconditions return a :class:`BoundReport`
that is marked inapplicable instead of raising.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from .errors import PreconditionError

E = math.e

INNER_LOG_NOTE = ("log2 applied to e*v/(c(d-v/c)) as printed; a natural inner log "
                  "would rescale the value by a constant factor")


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: float | None
    params: dict
    reason: str = ""
    clamped: bool = False
    extra: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def applicable(self) -> bool:
        return self.value is not None

    @property
    def tests(self) -> int | None:
        """Value rounded up to a whole number of tests."""
        return None if self.value is None else math.ceil(self.value - 1e-12)


def info_lower_bound(m: int) -> int:
    """``ceil(log2 m)``: tests needed to tell ``m`` candidates apart."""
    if m < 1:
        raise PreconditionError(f"m must be positive, got {m}")
    return (m - 1).bit_length()


def _separable_conditions(d, v, c) -> str:
    if not (isinstance(v, int) and isinstance(d, int)) or v < 1 or d < 1:
        return "v and d must be positive integers"
    if not 1 <= c < 1.5:
        return f"c={c} outside [1, 3/2)"
    if not v < d:
        return f"need v < d, got v={v}, d={d}"
    if not d * 2 * c <= 3 * v:
        return f"need d <= 3v/(2c), got d={d} > {3 * v / (2 * c):.6g}"
    return ""


def _separable_value(n, m, d, v, c) -> tuple[float, bool]:
    z = v / c
    gap = c * (d - z)
    coeff = v / (gap * math.log2(E * v / gap))
    tail = math.log2(m) - z * math.log2(n)
    if tail <= 0:
        return 0.0, True
    return coeff * tail, False


def separable_lower_bound(n: int, m: int, d: int, v: int, c: float) -> BoundReport:
    """Minimum length of an E-separable code for a d-uniform E with |E| = m on n vertices.

    Valid for ``v < d <= 3v/(2c)`` and ``1 <= c < 3/2``.  Returns 0 (flagged
    as clamped) when ``m <= n^(v/c)``.
    """
    params = dict(n=n, m=m, d=d, v=v, c=c)
    if n < 1 or m < 1:
        return BoundReport("separable", None, params, "n and m must be positive")
    why = _separable_conditions(d, v, c)
    if why:
        return BoundReport("separable", None, params, why)
    value, clamped = _separable_value(n, m, d, v, c)
    return BoundReport("separable", value, params, clamped=clamped, notes=(INNER_LOG_NOTE,))


def intersection_lower_bound(n: int, m: int, d: int, max_intersection: int, c: float) -> BoundReport:
    """Separable lower bound with ``v`` set to the maximum pairwise intersection.

    ``value`` is the exact bound.  ``extra["asymptotic"]`` holds
    ``max(coeff * log2 m, log2 m)`` with
    ``coeff = lam / ((d - lam) log2(e lam / (d - lam)))``; it needs
    ``m >= n^(lam * c')`` for some ``c'`` in ``(1/c, 1)`` and is ``None``
    otherwise (reason in ``extra["asymptotic_reason"]``).
    """
    lam = max_intersection
    params = dict(n=n, m=m, d=d, lambda_bar=lam, c=c)
    if n < 1 or m < 1:
        return BoundReport("intersection", None, params, "n and m must be positive")
    why = _separable_conditions(d, lam, c)
    if why:
        return BoundReport("intersection", None, params, why + " (v = lambda_bar)")
    value, clamped = _separable_value(n, m, d, lam, c)
    coeff = lam / ((d - lam) * math.log2(E * lam / (d - lam)))
    extra = {"coefficient": coeff}
    if c <= 1:
        extra["asymptotic"] = None
        extra["asymptotic_reason"] = "interval (1/c, 1) is empty for c = 1"
    elif math.log2(m) <= lam / c * math.log2(n):
        extra["asymptotic"] = None
        extra["asymptotic_reason"] = f"need m > n^(lambda_bar/c) = {n ** (lam / c):.6g}"
    else:
        lm = math.log2(m)
        extra["asymptotic"] = max(coeff * lm, lm)
    return BoundReport("intersection", value, params, clamped=clamped, extra=extra,
                       notes=(INNER_LOG_NOTE,))


def edge_count_cap(n: int, d: int, max_intersection: int) -> int:
    """Most d-subsets of [n] that pairwise share at most ``max_intersection`` vertices
    can number: ``floor(C(n, lam+1) / C(d, lam+1))``."""
    lam = max_intersection
    if not 0 <= lam < d <= n:
        raise PreconditionError(f"need 0 <= lambda_bar < d <= n, got {lam}, {d}, {n}")
    return math.comb(n, lam + 1) // math.comb(d, lam + 1)


def s_stage_cost_estimate(d: int, m: int, s: int, C1: float, C2: float) -> float:
    """``C1 * s * d^(1/s) * log2 m + C2 * s * d``."""
    return C1 * s * d ** (1.0 / s) * math.log2(m) + C2 * s * d


def trivial_two_stage_bound(n: int, m: int, d: int, q: int, chi: int) -> BoundReport:
    """Tests of the two-stage scheme that needs every ``q`` edges to leave at
    least ``chi`` vertices outside any other edge.

    ``(2e(d+chi)/chi) * (1 + ln(C(d+chi-1, chi-1) * beta)) + d*q`` with
    ``beta = min(e^q m ((m-1)/q)^q, e^(d+chi-1) ((n+d-1)/(d+chi-1))^(d+chi))``,
    evaluated in log space.  ``extra["chi_ge_sqrt_d"]`` flags ``chi >= sqrt(d)``.
    """
    params = dict(n=n, m=m, d=d, q=q, chi=chi)
    if not 1 <= q <= m - 1:
        return BoundReport("trivial_two_stage", None, params, f"need 1 <= q <= m-1, got q={q}, m={m}")
    if chi < 1:
        return BoundReport("trivial_two_stage", None, params, f"need chi >= 1, got {chi}")
    if d < 1 or n < 1:
        return BoundReport("trivial_two_stage", None, params, "n and d must be positive")
    ln_beta1 = q + math.log(m) + q * math.log((m - 1) / q)
    k = d + chi - 1
    ln_beta2 = k + (d + chi) * math.log((n + d - 1) / k)
    ln_beta = min(ln_beta1, ln_beta2)
    inner = math.log(math.comb(k, chi - 1)) + ln_beta
    value = 2 * E * (d + chi) / chi * (1 + inner) + d * q
    extra = {"ln_beta": ln_beta, "chi_ge_sqrt_d": chi * chi >= d}
    return BoundReport("trivial_two_stage", value, params, extra=extra)


# ---------------------------------------------------------------------------
# CSV for the command line

def all_bounds(n=None, m=None, d=None, v=None, c=None, lambda_bar=None, q=None, chi=None,
               s=None, C1=None, C2=None) -> list[BoundReport]:
    """Every bound whose parameters were supplied; missing inputs make a bound
    appear as inapplicable with the reason."""
    out = []

    def missing(name, **kw):
        absent = [k for k, x in kw.items() if x is None]
        if absent:
            out.append(BoundReport(name, None, kw, "missing " + ", ".join(absent)))
            return True
        return False

    if not missing("info", m=m):
        out.append(BoundReport("info", float(info_lower_bound(m)), {"m": m}))
    if not missing("separable", n=n, m=m, d=d, v=v, c=c):
        out.append(separable_lower_bound(n, m, d, v, c))
    if not missing("intersection", n=n, m=m, d=d, lambda_bar=lambda_bar, c=c):
        rep = intersection_lower_bound(n, m, d, lambda_bar, c)
        out.append(rep)
        if rep.applicable:
            asym = rep.extra.get("asymptotic")
            out.append(BoundReport("intersection_asymptotic", asym, rep.params,
                                   rep.extra.get("asymptotic_reason", "")))
    if not missing("edge_count_cap", n=n, d=d, lambda_bar=lambda_bar):
        try:
            out.append(BoundReport("edge_count_cap", float(edge_count_cap(n, d, lambda_bar)),
                                   dict(n=n, d=d, lambda_bar=lambda_bar)))
        except PreconditionError as exc:
            out.append(BoundReport("edge_count_cap", None, dict(n=n, d=d, lambda_bar=lambda_bar),
                                   str(exc)))
    if not missing("s_stage_cost", d=d, m=m, s=s, C1=C1, C2=C2):
        out.append(BoundReport("s_stage_cost", s_stage_cost_estimate(d, m, s, C1, C2),
                               dict(d=d, m=m, s=s, C1=C1, C2=C2)))
    if not missing("trivial_two_stage", n=n, m=m, d=d, q=q, chi=chi):
        out.append(trivial_two_stage_bound(n, m, d, q, chi))
    return out


def bounds_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "value", "tests", "reason", "params"])
    for r in reports:
        params = ";".join(f"{k}={v}" for k, v in r.params.items())
        w.writerow([r.name, "" if r.value is None else repr(float(r.value)),
                    "" if r.value is None else r.tests, r.reason, params])
    return buf.getvalue()
