"""Exhaustive property suites over every element of S0..S3 at a given (n, k).

Each suite returns a :class:`SuiteReport` holding how many elements were
checked and the first few counterexamples per property, so a failure can be
reported without rerunning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .enumeration import DEFAULT_CAP, enumerate_set
from .errors import RHPError
from .forest import ForestTuple, SetName, classify, has_s1_shape, in_set, sign_of, weight_multiset
from .involutions import garsia_milne_backward, garsia_milne_forward, phi0, phi1_detail, phi2

MAX_EXAMPLES = 3


@dataclass
class SuiteReport:
    name: str
    n: int
    k: int
    checked: int = 0
    failures: dict[str, list[str]] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, prop: str, detail) -> None:
        bucket = self.failures.setdefault(prop, [])
        if len(bucket) < MAX_EXAMPLES:
            bucket.append(str(detail))

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "n": self.n,
            "k": self.k,
            "checked": self.checked,
            "ok": self.ok,
            "counts": dict(self.counts),
            "failures": {p: list(v) for p, v in sorted(self.failures.items())},
        }


def difference_sign(t: ForestTuple, side: str) -> int:
    """Sign inside ``S1 - S2``: the S2 side carries the opposite sign."""
    s = sign_of(t)
    return s if side == "S1" else -s


def _phi1_side(t: ForestTuple, out: ForestTuple, side: str) -> str:
    if t.k == 1:
        return "S2" if side == "S1" else "S1"
    return "S1" if has_s1_shape(out) else "S2"


def _check_toggle(report: SuiteReport, name: str, f, t: ForestTuple, fixed: bool) -> None:
    u = f(t)
    if f(u) != t:
        report.fail(f"{name} involution", t)
    if weight_multiset(u) != weight_multiset(t):
        report.fail(f"{name} weight", t)
    if fixed:
        if u != t:
            report.fail(f"{name} fixes the subset", t)
    elif sign_of(u) != -sign_of(t):
        report.fail(f"{name} sign reversal", t)


def involution_suite(n: int, k: int, cap: int = DEFAULT_CAP) -> SuiteReport:
    """phi0 on S1, phi2 on S2 and phi1 on S1 and S2, every element."""
    report = SuiteReport("involutions", n, k)
    for which, inner, f, name in (("S1", "S0", phi0, "phi0"), ("S2", "S3", phi2, "phi2")):
        total = 0
        for t in enumerate_set(n, k, which, cap=cap):
            total += 1
            try:
                _check_toggle(report, name, f, t, fixed=in_set(t, inner))
            except RHPError as exc:
                report.fail(f"{name} raised", f"{t}: {exc!r}")
        report.counts[which] = total
        report.checked += total

    for side in ("S1", "S2"):
        for t in enumerate_set(n, k, side, cap=cap):
            try:
                _check_phi1(report, t, side)
            except RHPError as exc:
                report.fail("phi1 raised", f"{t}: {exc!r}")
    return report


def _check_phi1(report: SuiteReport, t: ForestTuple, side: str) -> None:
    u, infos = phi1_detail(t)
    tag = classify(u)
    # range: the image has a legal S1 or S2 shape with red edges only on cycles
    if tag.set is SetName.INVALID:
        report.fail("phi1 shape and red closure", t)
        return
    out_side = _phi1_side(t, u, side)
    if phi1_detail(u)[0] != t:
        report.fail("phi1 involution", t)
    if weight_multiset(u) != weight_multiset(t):
        report.fail("phi1 weight", t)
    if difference_sign(u, out_side) != -difference_sign(t, side):
        report.fail("phi1 sign reversal", t)
    flips = sum(1 for s in infos if not s.ended_in_A)
    if sign_of(u) * sign_of(t) != (-1) ** flips:
        report.fail("phi1 parity", t)


def bijection_suite(n: int, k: int, cap: int = DEFAULT_CAP) -> SuiteReport:
    """Forward is a bijection S0 -> S3, backward undoes it, weights match."""
    report = SuiteReport("bijection", n, k)
    targets = {t.key() for t in enumerate_set(n, k, "S3", cap=cap)}
    images = set()
    for t in enumerate_set(n, k, "S0", cap=cap):
        report.checked += 1
        try:
            u, _ = garsia_milne_forward(t)
            back, _ = garsia_milne_backward(u)
        except RHPError as exc:
            report.fail("driver raised", f"{t}: {exc!r}")
            continue
        if u.key() not in targets:
            report.fail("image in S3", t)
        if weight_multiset(u) != weight_multiset(t):
            report.fail("weight", t)
        if back != t:
            report.fail("round trip", t)
        images.add(u.key())
    report.counts.update(S0=report.checked, S3=len(targets), images=len(images))
    if len(images) != report.checked:
        report.fail("injective", f"{report.checked} inputs, {len(images)} images")
    if images != targets:
        report.fail("surjective", f"{len(targets - images)} S3 elements missed")
    return report
