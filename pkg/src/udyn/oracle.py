"""Brute-force verification: iterate f exactly and cross-check every claim.

The harness samples points with exactly known absolute values, runs the
map with certified arithmetic (truncated p-adics for rational points,
exact quadratic-extension arithmetic for ramified ones), and compares
the observed valuations against the radius-map predictions and the
phase-portrait claims.  Every check is exact: a PASS is an identity of
valuations, never a float comparison.

Statuses: PASS (verified on all samples), FAIL (exact counterexample,
carried in the entry), FLAGGED (a discrepancy in the stated behaviour —
either a stated-vs-computed disagreement the classifier already reported
or a structural exception the verifier certifies exactly — never an
engine error), INCONCLUSIVE (horizon- or precision-limited, or no
qualifying sample; never silently promoted to PASS).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exactnum import (
    TOP,
    InvalidArgument,
    PrecisionExhausted,
    QuadExt,
    TruncatedPadic,
    vp_rat,
)
from .mapengine import (
    MapParams,
    PoleHit,
    PrecisionExhaustedAt,
    UnsupportedRadius,
    derivative_at,
    eval_f,
    fixed_points,
    orbit,
    point_val,
    sample_sphere,
    validate_params,
)
from .portrait import PhasePortrait, character_from_multiplier, classify
from .radiusmaps import (
    CriticalValueNeeded,
    Radius,
    RadiusMapSpec,
    Regime,
    ToInfinity,
    ToZero,
    fix_set,
    lambda_interval,
    limit_classify,
    radius_orbit,
    radius_step,
    relevant_exceptional,
)

# |f^n(x)| <= p**-THRESH counts as converged to zero, >= p**THRESH as escaped
_THRESH = 20
# exact quadratic-extension orbits triple in size per step; keep them short
# and let the radius-level fate certificate finish the argument
_QUAD_CAP = 6
_QUAD_SAMPLES = 2
_MAX_DIGITS = 1 << 13


class WrongSphere(InvalidArgument):
    """The point is not on the critical sphere the value refers to."""


# ------------------------------------------------------------------- report


@dataclass
class CheckEntry:
    name: str
    tag: str
    samples: int
    status: str  # PASS | FAIL | FLAGGED | INCONCLUSIVE
    counterexample: Optional[dict] = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tag": self.tag,
            "samples": self.samples,
            "status": self.status,
            "counterexample": self.counterexample,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    params: MapParams
    seed: int
    horizon: int
    checks: List[CheckEntry] = field(default_factory=list)

    @property
    def has_fail(self) -> bool:
        return any(e.status == "FAIL" for e in self.checks)

    @property
    def has_flag(self) -> bool:
        return any(e.status == "FLAGGED" for e in self.checks)

    @property
    def passed(self) -> bool:
        return not self.has_fail

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "verification": {
                "params": {
                    "p": self.params.p,
                    "a": str(self.params.a),
                    "b": str(self.params.b),
                    "c": str(self.params.c),
                },
                "seed": self.seed,
                "horizon": self.horizon,
                "checks": [e.to_dict() for e in self.checks],
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


# --------------------------------------------------------- critical values


def critical_value_at(x, params: MapParams, which: str) -> Radius:
    """The exact image radius for a point on a critical sphere.

    |f(x)| = |a| |w| |x+b|**2 / |x+c|**2 for a point with |x| = |w|,
    w = b or c.  x = -b maps to zero exactly; x = -c is the pole.
    """
    if which not in ("b", "c"):
        raise InvalidArgument("which must be 'b' or 'c'")
    p = params.p
    w_val = params.val_b if which == "b" else params.val_c
    if point_val(x, p) != w_val:
        raise WrongSphere(
            f"point valuation {point_val(x, p)!s} is off the |{which}| sphere"
        )
    if isinstance(x, TruncatedPadic):
        num = x + TruncatedPadic.from_rational(params.b, p, x.digits)
        den = x + TruncatedPadic.from_rational(params.c, p, x.digits)
        if den.exact_zero:
            raise PoleHit("x = -c is the pole")
    else:
        num = x + params.b
        den = x + params.c
        pole = den.is_zero if isinstance(den, QuadExt) else den == 0
        if pole:
            raise PoleHit("x = -c is the pole")
    v_num = point_val(num, p)
    if v_num is TOP:
        return Radius.zero(p)
    v_den = point_val(den, p)
    if v_den is TOP:
        raise PoleHit("x = -c is the pole")
    return Radius.from_val(p, params.val_a + w_val + 2 * v_num - 2 * v_den)


# --------------------------------------------------------------- sampling


def _probe_radii(params: MapParams) -> List[Radius]:
    """Lattice and half-lattice radii spanning three valuations beyond
    the critical spheres on either side."""
    spec = params.radius_spec()
    vmin = min(spec.val_b, spec.val_c)
    vmax = max(spec.val_b, spec.val_c)
    lo_q2 = -2 * (vmax + 3)
    hi_q2 = -2 * (vmin - 3)
    return [Radius.from_exponent(params.p, q2) for q2 in range(lo_q2, hi_q2 + 1)]


def _sample(radius: Radius, params: MapParams, count: int, seed: int) -> list:
    if radius.is_finite and radius.q2 % 2 != 0:
        count = min(count, _QUAD_SAMPLES)  # extension points are expensive
    try:
        return sample_sphere(radius, params, count, seed)
    except UnsupportedRadius:
        return []


def _run_orbit(x0, params: MapParams, steps: int, precision: int):
    """Orbit record with certified valuations; rational starts retry with
    more digits on cancellation, extension points run exactly but shorter."""
    if isinstance(x0, QuadExt):
        return orbit(x0, params, min(steps, _QUAD_CAP))
    digits = precision
    while True:
        rec = orbit(Fraction(x0), params, steps, precision=digits)
        if (
            not isinstance(rec.termination, PrecisionExhaustedAt)
            or digits >= _MAX_DIGITS
        ):
            return rec
        digits *= 2


def _reached(vals, threshold: int) -> Optional[int]:
    """First index whose valuation certifies |x| <= p**-threshold."""
    for i, v in enumerate(vals):
        if v is TOP or v >= threshold:
            return i
    return None


def _escaped(vals, threshold: int) -> Optional[int]:
    for i, v in enumerate(vals):
        if v is not TOP and v <= -threshold:
            return i
    return None


def _fate_certificate(vals, params: MapParams, spec: RadiusMapSpec) -> Optional[str]:
    """Closed-form fate of the orbit from its last certified radius.

    Sound because the radius dynamics away from the critical spheres is
    a function of the radius alone; from an unresolved critical sphere
    the classifier refuses to decide and this returns None.
    """
    if not vals:
        return None
    last = vals[-1]
    if last is TOP:
        return "zero"
    verdict = limit_classify(Radius.from_val(params.p, last), spec)
    if isinstance(verdict, ToZero):
        return "zero"
    if isinstance(verdict, ToInfinity):
        return "infinity"
    return None


# ------------------------------------------------------------ Lemma bridge


def _bridge_one(x0, params: MapParams, spec: RadiusMapSpec, horizon: int, precision: int):
    """Walk one sample, feeding point-level critical values to the radius
    map at each critical-sphere visit.  Returns (ok, counterexample, note)."""
    p = params.p
    rec = _run_orbit(x0, params, horizon, precision)
    if not rec.points:
        return True, None, "start valuation not certified"
    vals = rec.valuations
    r = Radius.from_val(p, vals[0])
    for i in range(len(rec.points) - 1):
        use = None
        if r == spec.sphere_b():
            use = "b"
        elif spec.regime is not Regime.EQ and r == spec.sphere_c():
            use = "c"
        step_spec = spec
        if use is not None:
            try:
                crit = critical_value_at(rec.points[i], params, use)
            except PrecisionExhausted:
                return True, None, "critical value beyond working precision"
            except PoleHit:
                return True, None, ""
            step_spec = params.radius_spec(
                crit_b=crit if use == "b" else None,
                crit_c=crit if use == "c" else None,
            )
        r = radius_step(r, step_spec)
        got = Radius.from_val(p, vals[i + 1])
        if got != r:
            return (
                False,
                {"x": str(x0), "step": i + 1, "expected": str(r), "got": str(got)},
                "",
            )
        if r.is_zero:
            break
    note = ""
    if isinstance(rec.termination, PrecisionExhaustedAt):
        note = "precision exhausted mid-orbit"
    return True, None, note


def check_lemma1(
    params: MapParams,
    sample_count: int = 20,
    horizon: int = 15,
    seed: int = 0,
    precision: int = 96,
) -> List[CheckEntry]:
    """Point-level |f^n(x)| against the bridged radius-map iterate."""
    spec = params.radius_spec()
    probes = _probe_radii(params)
    per = max(1, sample_count // max(1, len(probes)))
    samples = 0
    limited = 0
    for i, radius in enumerate(probes):
        for x0 in _sample(radius, params, per, seed + 1009 * i):
            samples += 1
            ok, cex, note = _bridge_one(x0, params, spec, horizon, precision)
            if not ok:
                return [CheckEntry("lemma1-bridge", "L1", samples, "FAIL", cex)]
            if note:
                limited += 1
    if samples == 0:
        return [
            CheckEntry("lemma1-bridge", "L1", 0, "INCONCLUSIVE", None, "no samples")
        ]
    status = "INCONCLUSIVE" if limited == samples else "PASS"
    note = f"{limited} sample(s) precision-limited" if limited else ""
    # x = 0 is a trivial bridged sample: both sides stay at zero
    return [CheckEntry("lemma1-bridge", "L1", samples + 1, status, None, note)]


# ------------------------------------------------------------- fixed points


def _exact_eq(x, y) -> Optional[bool]:
    """Equality in the scalar domain; None when truncated precision
    cannot certify either way."""
    if isinstance(x, TruncatedPadic) or isinstance(y, TruncatedPadic):
        diff = x - y
        if diff.exact_zero:
            return True
        if not diff.is_certified:
            return None
        return False
    return x == y


def _separation_radius(params: MapParams, x1, x2) -> Optional[Radius]:
    """|x1 - x2| measured in the scalar domain; None if uncertified."""
    p = params.p
    diff = x1 - x2
    if isinstance(diff, TruncatedPadic):
        if not diff.is_certified:
            return None
        return Radius.from_val(p, diff.valuation())
    return Radius.from_val(p, point_val(diff, p))


def check_fixed_points(params: MapParams, precision: int = 64) -> List[CheckEntry]:
    """Fixed-point algebra: residuals, multipliers, branch symmetry,
    the separation identity, and character agreement."""
    entries: List[CheckEntry] = []
    infos = fixed_points(params, precision=precision)
    p = params.p

    lam0 = params.a * params.b**2 / params.c**2
    ok = infos[0].multiplier == lam0
    entries.append(
        CheckEntry(
            "fp-lambda0",
            "FP",
            1,
            "PASS" if ok else "FAIL",
            None if ok else {"expected": str(lam0), "got": str(infos[0].multiplier)},
        )
    )

    for info in infos[1:]:
        res = _exact_eq(eval_f(info.location, params), info.location)
        entries.append(
            CheckEntry(
                f"fp-residual:{info.which}",
                "FP",
                1,
                "PASS" if res is not False else "FAIL",
                None if res is not False else {"which": info.which},
                "" if res else "vanishes to working precision",
            )
        )
        der = derivative_at(info.location, params)
        res = _exact_eq(der, info.multiplier)
        entries.append(
            CheckEntry(
                f"fp-multiplier:{info.which}",
                "FP",
                1,
                "PASS" if res is not False else "FAIL",
                None
                if res is not False
                else {"derivative": str(der), "closed_form": str(info.multiplier)},
                "" if res else "agrees to working precision",
            )
        )

    swapped = fixed_points(params, precision=precision, conjugate_root=True)
    if isinstance(infos[1].location, TruncatedPadic):
        swap_ok = (
            swapped[1].location_val == infos[2].location_val
            and swapped[2].location_val == infos[1].location_val
        )
        note = "valuation comparison (truncated root)"
    else:
        swap_ok = (
            swapped[1].location == infos[2].location
            and swapped[2].location == infos[1].location
        )
        note = ""
    entries.append(
        CheckEntry(
            "fp-branch-swap",
            "FP",
            2,
            "PASS" if swap_ok else "FAIL",
            None if swap_ok else {"swapped_x1": str(swapped[1].location)},
            note,
        )
    )

    # x1 - x2 = 2 sqrt(a) (c - b) / (a - 1), an identity of the quadratic
    actual = _separation_radius(params, infos[1].location, infos[2].location)
    expected = Radius.from_val(
        p,
        vp_rat(2, p)
        + Fraction(params.val_a, 2)
        + vp_rat(params.c - params.b, p)
        - vp_rat(params.a - 1, p),
    )
    if actual is None:
        entries.append(
            CheckEntry(
                "fp-separation", "FP", 1, "INCONCLUSIVE", None, "beyond precision"
            )
        )
    else:
        entries.append(
            CheckEntry(
                "fp-separation",
                "FP",
                1,
                "PASS" if actual == expected else "FAIL",
                None
                if actual == expected
                else {"actual": str(actual), "identity": str(expected)},
            )
        )

    for which in ("x1", "x2"):
        computed, admissible, agree = character_from_multiplier(
            params, which, precision=precision
        )
        if agree is True:
            status, note = "PASS", ""
        elif agree is False:
            status, note = "FLAGGED", "stated and computed characters disagree"
        else:
            status, note = "FLAGGED", "the applicable case names no character"
        entries.append(
            CheckEntry(
                f"fp-character:{which}",
                "FP",
                1,
                status,
                None,
                note or f"computed {computed.value}; admissible {list(admissible)}",
            )
        )
    return entries


# -------------------------------------------------------- portrait checking


def _radii_in_region(region, probes: List[Radius]) -> List[Radius]:
    if region is None:
        return []
    if region.kind == "sphere":
        return [region.radius]
    if region.kind == "on-ladder":
        return [region.ladder.element(k) for k in range(3)]
    if region.kind == "interval":
        return list(region.interval.lattice_members())
    return [r for r in probes if region.contains(r)][:8]


def _threshold_entry(
    name: str,
    tag: str,
    direction: str,  # "zero" | "infinity"
    radii: List[Radius],
    params: MapParams,
    spec: RadiusMapSpec,
    sample_count: int,
    horizon: int,
    seed: int,
    precision: int,
    qualifier=None,
) -> CheckEntry:
    """Shared engine for limit-zero / escape style claims.

    A sample passes by crossing p**(+-THRESH) within the horizon or by a
    closed-form radius certificate from its last certified valuation; it
    fails by crossing the opposite threshold or by a certificate of the
    opposite fate.
    """
    samples = 0
    pending = 0
    per = max(1, sample_count // max(1, len(radii))) if radii else 0
    other = "infinity" if direction == "zero" else "zero"
    for i, radius in enumerate(radii):
        for x0 in _sample(radius, params, per, seed + 2003 * i):
            if qualifier is not None and not qualifier(x0):
                continue
            samples += 1
            rec = _run_orbit(x0, params, horizon, precision)
            vals = rec.valuations
            hit = _reached(vals, _THRESH) if direction == "zero" else _escaped(vals, _THRESH)
            bad = _escaped(vals, _THRESH) if direction == "zero" else _reached(vals, _THRESH)
            if bad is not None:
                return CheckEntry(
                    name,
                    tag,
                    samples,
                    "FAIL",
                    {
                        "x": str(x0),
                        "step": bad,
                        "valuation": str(vals[bad]),
                        "claimed": direction,
                    },
                )
            cert = _fate_certificate(vals, params, spec)
            if cert == other:
                return CheckEntry(
                    name,
                    tag,
                    samples,
                    "FAIL",
                    {"x": str(x0), "certified": other, "claimed": direction},
                )
            if hit is None and cert != direction:
                pending += 1
    if samples == 0:
        return CheckEntry(name, tag, 0, "INCONCLUSIVE", None, "no qualifying sample")
    if pending:
        return CheckEntry(
            name,
            tag,
            samples,
            "INCONCLUSIVE",
            None,
            f"{pending} orbit(s) undecided within the horizon",
        )
    return CheckEntry(name, tag, samples, "PASS")


def _no_convergence_entry(
    name, tag, radii, params, spec, sample_count, horizon, seed, precision
) -> CheckEntry:
    """Points outside a claimed basin must not fall into it."""
    samples = 0
    per = max(1, sample_count // max(1, len(radii))) if radii else 0
    for i, radius in enumerate(radii):
        for x0 in _sample(radius, params, per, seed + 8009 * i):
            samples += 1
            rec = _run_orbit(x0, params, horizon, precision)
            k = _reached(rec.valuations, _THRESH)
            cert = _fate_certificate(rec.valuations, params, spec)
            if k is not None or cert == "zero":
                return CheckEntry(
                    name,
                    tag,
                    samples,
                    "FAIL",
                    {"x": str(x0), "note": "converged to zero outside the basin"},
                )
    if samples == 0:
        return CheckEntry(name, tag, 0, "INCONCLUSIVE", None, "no representable sample")
    return CheckEntry(name, tag, samples, "PASS")


def _constant_entry(
    name, tag, radii, params, sample_count, horizon, seed, precision
) -> CheckEntry:
    samples = 0
    per = max(1, sample_count // max(1, len(radii))) if radii else 0
    for i, radius in enumerate(radii):
        for x0 in _sample(radius, params, per, seed + 3001 * i):
            samples += 1
            vals = _run_orbit(x0, params, horizon, precision).valuations
            for k, v in enumerate(vals):
                if v != vals[0]:
                    return CheckEntry(
                        name,
                        tag,
                        samples,
                        "FAIL",
                        {
                            "x": str(x0),
                            "step": k,
                            "expected": str(vals[0]),
                            "got": str(v),
                        },
                    )
    if samples == 0:
        return CheckEntry(name, tag, 0, "INCONCLUSIVE", None, "no representable sample")
    return CheckEntry(name, tag, samples, "PASS")


def _eventually_constant_entry(
    name, tag, radii, params, sample_count, horizon, seed, precision, qualifier=None
) -> CheckEntry:
    samples = 0
    pending = 0
    per = max(1, sample_count // max(1, len(radii))) if radii else 0
    for i, radius in enumerate(radii):
        for x0 in _sample(radius, params, per, seed + 4001 * i):
            if qualifier is not None and not qualifier(x0):
                continue
            samples += 1
            vals = _run_orbit(x0, params, horizon, precision).valuations
            k = len(vals) - 1
            while k > 0 and vals[k - 1] == vals[-1]:
                k -= 1
            if len(vals) - k < 5:
                pending += 1
    if samples == 0:
        return CheckEntry(name, tag, 0, "INCONCLUSIVE", None, "no qualifying sample")
    if pending:
        return CheckEntry(
            name,
            tag,
            samples,
            "INCONCLUSIVE",
            None,
            f"{pending} orbit(s) without >= 5 stable trailing steps",
        )
    return CheckEntry(name, tag, samples, "PASS")


def _enters_sphere_entry(claim, params, spec, sample_count, seed, precision) -> CheckEntry:
    ladder = claim.region.ladder
    target = spec.sphere_b() if claim.detail("sphere") == "b" else spec.sphere_c()
    target_val = -Fraction(target.q2, 2)
    name = f"portrait:{claim.tag}:{claim.kind}"
    samples = 0
    per = max(1, sample_count // 3)
    for k in range(3):
        for x0 in _sample(ladder.element(k), params, per, seed + 5003 * k):
            samples += 1
            if k == 0:
                continue  # on the sphere already, by construction
            rec = _run_orbit(x0, params, k, precision)
            if len(rec.valuations) <= k:
                continue  # pole or precision loss before step k; rare
            if rec.valuations[k] != target_val:
                return CheckEntry(
                    name,
                    claim.tag,
                    samples,
                    "FAIL",
                    {
                        "x": str(x0),
                        "k": k,
                        "expected": str(target),
                        "got": str(rec.valuations[k]),
                    },
                )
    if samples == 0:
        return CheckEntry(name, claim.tag, 0, "INCONCLUSIVE", None, "no representable sample")
    return CheckEntry(name, claim.tag, samples, "PASS")


def _crit_targeted_samples(
    params: MapParams, which: str, ladder, count: int, seed: int
) -> List[Tuple[object, int]]:
    """Points on the |which| sphere whose critical value is ladder
    element k, built by placing x near -b (deep numerator) or near -c
    (deep denominator) at the exact depth the ladder element requires.

    Every candidate is post-verified; a wrong sphere or wrong critical
    value drops it, so the construction can only under-sample.
    """
    p = params.p
    w_val = params.val_b if which == "b" else params.val_c
    v_cb = vp_rat(params.c - params.b, p)
    out: List[Tuple[object, int]] = []
    for k in range(6):
        target = ladder.element(k)
        t_val = -Fraction(target.q2, 2)
        for anchor, v_delta in (
            (-params.b, Fraction(t_val - params.val_a - w_val, 2) + v_cb),
            (-params.c, Fraction(params.val_a + w_val - t_val, 2) + v_cb),
        ):
            if v_delta.denominator > 2:
                continue
            for d in _sample(Radius.from_val(p, v_delta), params, 2, seed + 101 * k):
                x0 = anchor + d
                if point_val(x0, p) != w_val:
                    continue
                try:
                    crit = critical_value_at(x0, params, which)
                except (PoleHit, PrecisionExhausted):
                    continue
                if crit == target and ladder.member(crit) == k:
                    out.append((x0, k))
                    if len(out) >= count:
                        return out
    return out


def _returns_entry(claim, params, spec, sample_count, seed, precision) -> CheckEntry:
    """Critical value on ladder element k => f^(k+1) lands back on the
    sphere; the samples are constructed to hit each ladder element."""
    which = "b" if claim.detail("condition").startswith("b*") else "c"
    name = f"portrait:{claim.tag}:{claim.kind}"
    eset = relevant_exceptional(spec)
    if eset is None:
        return CheckEntry(name, claim.tag, 0, "INCONCLUSIVE", None, "no ladder")
    sphere = spec.sphere_b() if which == "b" else spec.sphere_c()
    sphere_val = -Fraction(sphere.q2, 2)
    built = _crit_targeted_samples(params, which, eset, max(4, sample_count // 4), seed)
    samples = 0
    for x0, k in built:
        samples += 1
        rec = _run_orbit(x0, params, k + 1, precision)
        if len(rec.valuations) <= k + 1:
            continue
        if rec.valuations[k + 1] != sphere_val:
            return CheckEntry(
                name,
                claim.tag,
                samples,
                "FAIL",
                {
                    "x": str(x0),
                    "k": k,
                    "expected": str(sphere),
                    "got": str(rec.valuations[k + 1]),
                },
            )
    if samples == 0:
        return CheckEntry(
            name, claim.tag, 0, "INCONCLUSIVE", None, "no constructible sample"
        )
    return CheckEntry(name, claim.tag, samples, "PASS")


def _two_cycle_entry(claim, params, sample_count, horizon, seed, precision) -> CheckEntry:
    lam = claim.region.interval
    name = f"portrait:{claim.tag}:{claim.kind}"
    samples = 0
    flagged = 0
    for i, radius in enumerate(lam.lattice_members()):
        for x0 in _sample(radius, params, max(1, sample_count // 4), seed + 6007 * i):
            samples += 1
            steps = max(2, horizon - horizon % 2)
            vals = _run_orbit(x0, params, steps, precision).valuations
            if any(vals[j] != vals[0] for j in range(0, len(vals), 2)):
                if lam.in_core(radius):
                    return CheckEntry(
                        name,
                        claim.tag,
                        samples,
                        "FAIL",
                        {
                            "x": str(x0),
                            "radius": str(radius),
                            "valuations": [str(v) for v in vals[:6]],
                        },
                    )
                flagged += 1
    if samples == 0:
        return CheckEntry(name, claim.tag, 0, "INCONCLUSIVE", None, "no representable sample")
    if flagged:
        return CheckEntry(
            name,
            claim.tag,
            samples,
            "FLAGGED",
            None,
            f"{flagged} sample(s) outside the certified core broke the two-step return",
        )
    return CheckEntry(name, claim.tag, samples, "PASS")


def _interval_reachable(
    start: Radius, spec: RadiusMapSpec, lam, vstep: int
) -> Optional[bool]:
    """Whether the radius walk from ``start`` can ever land inside ``lam``.

    Explores every branch exhaustively: zone steps are deterministic, and
    a critical sphere fans out into the full progression of image radii
    that the cancellation depth can realize (``vstep`` is the valuation
    granularity of that depth: 1 when half-integer valuations exist, else
    2).  Deeper cancellations only prepend radii on the far side of the
    interval before rejoining an enumerated residue class, so a bounded
    progression is complete.  Returns True when some branch enters, False
    when the whole web was exhausted without entering (a certificate),
    and None when the search cannot certify either way.
    """
    if spec.regime is not Regime.GT:
        return None
    p = spec.p
    kcap = max(abs(spec.bottom_delta_q2), abs(spec.top_delta_q2), 4) + 2
    window = (
        4 * kcap
        + max(abs(start.q2), 2 * spec.val_b, 2 * spec.val_c, 2 * abs(spec.val_a))
        + 32
    )
    img_b = spec.val_a + spec.val_b  # shallowest image valuation from S_|b|
    img_c = spec.val_a + 2 * spec.val_b - spec.val_c  # ... from S_|c|
    seen: set = set()
    frontier = [start]
    while frontier:
        r = frontier.pop()
        if r.is_zero or r.is_infinite:
            continue
        if lam.contains(r):
            return True
        if r.q2 in seen:
            continue
        seen.add(r.q2)
        if abs(r.q2) > window or len(seen) > 4096:
            return None
        if r.q2 == -2 * spec.val_b:
            frontier.extend(Radius.from_val(p, img_b + vstep * k) for k in range(kcap))
        elif r.q2 == -2 * spec.val_c:
            frontier.extend(Radius.from_val(p, img_c - vstep * k) for k in range(kcap))
        else:
            frontier.append(radius_step(r, spec))
    return False


def _enters_region_entry(
    claim, params, spec, sample_count, horizon, seed, precision
) -> CheckEntry:
    """Orbits from outside the two-cycle interval eventually enter it.

    A probe radius whose whole reachability web misses the interval can
    never satisfy the claim; those are surfaced as FLAGGED with the
    certificate rather than counted as failures of the engine.
    """
    lam = claim.region.interval
    name = f"portrait:{claim.tag}:{claim.kind}"
    probes = [r for r in _probe_radii(params) if claim.region.contains(r)][:8]
    samples = 0
    pending = 0
    entered_count = 0
    blocked: List[str] = []
    contradiction = None
    for i, radius in enumerate(probes):
        points = _sample(radius, params, max(1, sample_count // 6), seed + 7001 * i)
        if not points:
            continue
        vstep = 1 if radius.q2 % 2 else 2
        certified_blocked = _interval_reachable(radius, spec, lam, vstep) is False
        if certified_blocked:
            blocked.append(str(radius))
        for x0 in points:
            samples += 1
            vals = _run_orbit(x0, params, horizon, precision).valuations
            entered = any(
                v is not TOP and lam.contains(Radius.from_val(params.p, v))
                for v in vals
            )
            if entered and certified_blocked:
                contradiction = {"x": str(x0), "radius": str(radius)}
            elif entered:
                entered_count += 1
            elif not certified_blocked:
                pending += 1
    if contradiction is not None:
        return CheckEntry(
            name,
            claim.tag,
            samples,
            "FAIL",
            contradiction,
            "an orbit entered from a radius certified as blocked",
        )
    if blocked:
        return CheckEntry(
            name,
            claim.tag,
            samples,
            "FLAGGED",
            {"blocked_radii": blocked},
            f"the stated entry is impossible from {len(blocked)} probe "
            f"radius(es): every branch of the radius walk stays outside the "
            f"interval; {entered_count} orbit(s) from other radii entered",
        )
    if samples == 0:
        return CheckEntry(name, claim.tag, 0, "INCONCLUSIVE", None, "no sample drawn")
    if pending:
        return CheckEntry(
            name,
            claim.tag,
            samples,
            "INCONCLUSIVE",
            None,
            f"{pending} orbit(s) had not entered within the horizon",
        )
    return CheckEntry(name, claim.tag, samples, "PASS")


def _dichotomy_entry(claim, params, sample_count, horizon, seed, precision) -> CheckEntry:
    """Orbits on the sphere either stay forever or leave once and keep a
    constant radius afterwards; report the observed branches."""
    sphere = claim.region.radius
    sphere_val = -Fraction(sphere.q2, 2)
    name = f"portrait:{claim.tag}:{claim.kind}"
    samples = 0
    left = 0
    for x0 in _sample(sphere, params, sample_count, seed):
        samples += 1
        vals = _run_orbit(x0, params, horizon, precision).valuations
        k = next((j for j, v in enumerate(vals) if v != sphere_val), None)
        if k is None:
            continue  # stayed within the horizon
        tail = vals[k:]
        if any(v != tail[0] for v in tail):
            return CheckEntry(
                name,
                claim.tag,
                samples,
                "FAIL",
                {
                    "x": str(x0),
                    "left_at": k,
                    "valuations": [str(v) for v in vals[: k + 4]],
                },
            )
        if len(tail) >= 3:
            left += 1
    if samples == 0:
        return CheckEntry(name, claim.tag, 0, "INCONCLUSIVE", None, "no representable sample")
    if left == 0:
        return CheckEntry(
            name,
            claim.tag,
            samples,
            "INCONCLUSIVE",
            None,
            "all sampled orbits stayed on the sphere within the horizon",
        )
    return CheckEntry(
        name,
        claim.tag,
        samples,
        "PASS",
        None,
        f"{left} orbit(s) settled off the sphere, {samples - left} stayed",
    )


def _expansion_entry(claim, params, info, sample_count, seed) -> CheckEntry:
    """|f(x) - x_i| > |x - x_i| on the punctured ball around a repelling
    fixed point, verified with exact arithmetic.

    The stated ball contains the sphere through the pole -c, which also
    carries the other preimages of x_i; there the inequality genuinely
    breaks, so exhibits on that exact sphere are FLAGGED rather than
    FAILed.  A violation on any other sphere is an engine-level FAIL.
    """
    name = f"portrait:{claim.tag}:{claim.kind}:{info.which}"
    xi = info.location
    if isinstance(xi, TruncatedPadic):
        return CheckEntry(
            name, claim.tag, 0, "INCONCLUSIVE", None, "truncated fixed point"
        )
    p = params.p
    ball = claim.region.radius
    pole_val = point_val(-params.c - xi, p)
    samples = 0
    flagged = None
    for j in range(1, 4):
        for d in _sample(
            ball.scaled_by_power(-2 * j), params, max(1, sample_count // 3), seed + j
        ):
            x = xi + d
            try:
                fx = eval_f(x, params)
            except PoleHit:
                continue
            samples += 1
            before = point_val(x - xi, p)
            after = point_val(fx - xi, p)
            expanded = after is not TOP and before is not TOP and after < before
            if not expanded:
                exhibit = {"x": str(x), "v_before": str(before), "v_after": str(after)}
                if before == pole_val:
                    flagged = exhibit
                else:
                    return CheckEntry(name, claim.tag, samples, "FAIL", exhibit)
    if samples == 0:
        return CheckEntry(name, claim.tag, 0, "INCONCLUSIVE", None, "no sample")
    if flagged is not None:
        return CheckEntry(
            name,
            claim.tag,
            samples,
            "FLAGGED",
            flagged,
            "inequality breaks on the sphere through the pole",
        )
    return CheckEntry(name, claim.tag, samples, "PASS")


def _distance_entry(claim, params: MapParams, infos) -> CheckEntry:
    name = f"portrait:{claim.tag}:{claim.kind}"
    actual = _separation_radius(params, infos["x1"].location, infos["x2"].location)
    recomputed = claim.detail("recomputed")
    stated = claim.detail("stated")
    if actual is None:
        return CheckEntry(
            name, claim.tag, 1, "INCONCLUSIVE", None, "distance beyond precision"
        )
    if actual != recomputed:
        return CheckEntry(
            name,
            claim.tag,
            1,
            "FAIL",
            {"actual": str(actual), "recomputed": str(recomputed)},
            "identity recomputation does not match the engine",
        )
    if actual != stated:
        return CheckEntry(
            name,
            claim.tag,
            1,
            "FLAGGED",
            None,
            f"stated {stated} but the exact distance is {actual}",
        )
    return CheckEntry(name, claim.tag, 1, "PASS")


def _condition_qualifier(claim, params: MapParams, spec: RadiusMapSpec, precision: int):
    """Sample filter for conditional claims: evaluates the critical value
    at the orbit's arrival on the critical sphere and keeps the sample
    when the stated condition holds."""
    cond = claim.detail("condition")
    if cond is None:
        return None
    which = "b" if cond.startswith("b*") else "c"
    want_in = not cond.endswith("-not-in-ladder")
    eset = relevant_exceptional(spec)

    def qualifier(x0) -> bool:
        region = claim.region
        y = x0
        if region is not None and region.kind == "on-ladder":
            k = region.ladder.member(
                Radius.from_val(params.p, point_val(x0, params.p))
            )
            if k is None:
                return False
            if k > 0:
                rec = _run_orbit(x0, params, k, precision)
                if len(rec.points) <= k:
                    return False
                y = rec.points[k]
        try:
            crit = critical_value_at(y, params, which)
        except (PrecisionExhausted, PoleHit, WrongSphere):
            return False
        member = eset.member(crit) if eset is not None else None
        return (member is not None) if want_in else (member is None)

    return qualifier


def check_portrait(
    params: MapParams,
    portrait: Optional[PhasePortrait] = None,
    sample_count: int = 20,
    horizon: int = 25,
    seed: int = 0,
    precision: int = 96,
) -> List[CheckEntry]:
    """Verify every claim the portrait makes, claim by claim."""
    if portrait is None:
        portrait = classify(params)
    spec = params.radius_spec()
    probes = _probe_radii(params)
    entries: List[CheckEntry] = []
    infos = {i.which: i for i in portrait.fixed_points}

    for idx, claim in enumerate(portrait.claims):
        cseed = seed + 37 * idx
        name = f"portrait:{claim.tag}:{claim.kind}"
        kind = claim.kind
        if kind in (
            "limit-zero",
            "basin",
            "escape",
            "conditional-limit-zero",
            "conditional-escape",
        ):
            direction = "infinity" if kind.endswith("escape") else "zero"
            radii = _radii_in_region(claim.region, probes)
            qualifier = _condition_qualifier(claim, params, spec, precision)
            entries.append(
                _threshold_entry(
                    name, claim.tag, direction, radii, params, spec,
                    sample_count, horizon, cseed, precision, qualifier,
                )
            )
            if kind == "basin":
                outside = [r for r in probes if not claim.region.contains(r)][:6]
                if outside:
                    entries.append(
                        _no_convergence_entry(
                            name + ":outside", claim.tag, outside, params, spec,
                            sample_count, horizon, cseed + 1, precision,
                        )
                    )
        elif kind in ("invariant-sphere", "siegel"):
            radii = _radii_in_region(claim.region, probes)
            entries.append(
                _constant_entry(
                    name, claim.tag, radii, params,
                    sample_count, min(horizon, 30), cseed, precision,
                )
            )
        elif kind == "eventually-constant-radius":
            radii = _radii_in_region(claim.region, probes)
            qualifier = _condition_qualifier(claim, params, spec, precision)
            entries.append(
                _eventually_constant_entry(
                    name, claim.tag, radii, params,
                    sample_count, horizon, cseed, precision, qualifier,
                )
            )
        elif kind == "enters-sphere":
            entries.append(
                _enters_sphere_entry(claim, params, spec, sample_count, cseed, precision)
            )
        elif kind == "returns-to-sphere":
            entries.append(
                _returns_entry(claim, params, spec, sample_count, cseed, precision)
            )
        elif kind == "two-cycle-region":
            entries.append(
                _two_cycle_entry(claim, params, sample_count, horizon, cseed, precision)
            )
        elif kind == "enters-region":
            entries.append(
                _enters_region_entry(
                    claim, params, spec, sample_count, horizon, cseed, precision
                )
            )
        elif kind == "dichotomy":
            entries.append(
                _dichotomy_entry(claim, params, sample_count, horizon, cseed, precision)
            )
        elif kind in ("fp-location", "fp-character"):
            agree = claim.detail("agree")
            which = claim.detail("which")
            if agree is True:
                status, note = "PASS", ""
            elif agree is False:
                status, note = "FLAGGED", "stated and computed values disagree"
                if (
                    kind == "fp-location"
                    and claim.region is not None
                    and claim.detail("computed") == claim.region.radius
                ):
                    note = "computed location sits exactly on the boundary sphere"
            else:
                status, note = "FLAGGED", "the applicable case leaves this unspecified"
            entries.append(
                CheckEntry(f"{name}:{which}", claim.tag, 1, status, None, note)
            )
        elif kind == "fp-distance":
            entries.append(_distance_entry(claim, params, infos))
        elif kind == "fp-expansion":
            which = claim.detail("which")
            entries.append(
                _expansion_entry(claim, params, infos[which], sample_count, cseed)
            )
    return entries


# ------------------------------------------------------- radius-level lemmas


def _verdicts_compatible(r: Radius, orbit_v, limit_v) -> bool:
    from .radiusmaps import (
        Cycle,
        EventuallyConstantAt,
        EventuallyInLambda,
        FixedAt,
        HorizonExceeded,
        NeedsCriticalValue,
        TwoCycleRegion,
    )

    if orbit_v == limit_v:
        return True
    if isinstance(limit_v, (TwoCycleRegion, EventuallyInLambda)):
        if isinstance(orbit_v, (ToZero, ToInfinity)):
            return False
        if isinstance(limit_v, TwoCycleRegion) and isinstance(orbit_v, Cycle):
            return len(orbit_v.radii) <= 2 and r in orbit_v.radii
        return isinstance(
            orbit_v,
            (Cycle, FixedAt, EventuallyConstantAt, NeedsCriticalValue, HorizonExceeded),
        )
    if isinstance(orbit_v, NeedsCriticalValue):
        return isinstance(limit_v, (ToZero, ToInfinity))
    if isinstance(orbit_v, HorizonExceeded):
        return not isinstance(limit_v, HorizonExceeded)
    return False


def check_radius_lemmas(
    specs: Optional[Sequence[RadiusMapSpec]] = None, horizon: int = 80
) -> List[CheckEntry]:
    """Radius-level dynamics: the closed-form classifier against the
    mechanical iterator, the fixed-radius set, and the two-cycle zone."""
    if specs is None:
        specs = [params.radius_spec() for params in default_grid()]
    entries: List[CheckEntry] = []
    for spec in specs:
        label = f"p={spec.p}(va={spec.val_a},vb={spec.val_b},vc={spec.val_c})"
        lo_q2 = min(-2 * spec.val_b, -2 * spec.val_c) - 5
        hi_q2 = max(-2 * spec.val_b, -2 * spec.val_c) + 5
        probes = [Radius.zero(spec.p), Radius.infinite(spec.p)] + [
            Radius.from_exponent(spec.p, q2) for q2 in range(lo_q2, hi_q2 + 1)
        ]

        bad = None
        for r in probes:
            orbit_v = radius_orbit(r, spec, max_iter=horizon).verdict
            limit_v = limit_classify(r, spec)
            if not _verdicts_compatible(r, orbit_v, limit_v):
                bad = {
                    "radius": str(r),
                    "orbit": type(orbit_v).__name__,
                    "classifier": type(limit_v).__name__,
                }
                break
        entries.append(
            CheckEntry(
                f"radius:classify-vs-orbit:{label}",
                "RAD",
                len(probes),
                "FAIL" if bad else "PASS",
                bad,
            )
        )

        fs = fix_set(spec)
        fix_ok = True
        cex = None
        count = len(fs.members)
        for m in fs.members:
            if radius_step(m, spec) != m:
                fix_ok, cex = False, {"radius": str(m)}
        for ray in fs.rays:
            for e2 in (-3, -1) if ray.side == "below" else (1, 3):
                count += 1
                probe = ray.bound.scaled_by_power(e2)
                if radius_step(probe, spec) != probe:
                    fix_ok, cex = False, {"radius": str(probe)}
        entries.append(
            CheckEntry(
                f"radius:fix-set:{label}",
                "RAD",
                count,
                "PASS" if fix_ok else "FAIL",
                cex,
            )
        )

        if spec.regime is Regime.GT and spec.val_a > 0 and spec.s < 0:
            lam = lambda_interval(spec)
            members = lam.lattice_members()
            flagged = 0
            bad = None
            for r in members:
                try:
                    back = radius_step(radius_step(r, spec), spec)
                except CriticalValueNeeded:
                    flagged += 1
                    continue
                if back != r:
                    if lam.in_core(r):
                        bad = {"radius": str(r), "after_two_steps": str(back)}
                        break
                    flagged += 1
            status = "FAIL" if bad else ("FLAGGED" if flagged else "PASS")
            entries.append(
                CheckEntry(
                    f"radius:lambda-two-cycle:{label}",
                    "RAD",
                    len(members),
                    status,
                    bad,
                    f"{flagged} member(s) outside the certified core misbehave"
                    if flagged
                    else "",
                )
            )

            outside = [
                r
                for r in probes
                if r.is_finite and not r.is_zero and not lam.contains(r)
            ]
            entered = 0
            undecided = 0
            trapped: List[str] = []
            vstep = 1 if spec.val_a % 2 else 2
            for r in outside:
                cur = r
                hit = False
                for _ in range(horizon):
                    if lam.contains(cur):
                        hit = True
                        break
                    try:
                        cur = radius_step(cur, spec)
                    except CriticalValueNeeded:
                        break
                if hit:
                    entered += 1
                elif _interval_reachable(r, spec, lam, vstep) is False:
                    trapped.append(str(r))
                else:
                    undecided += 1
            entries.append(
                CheckEntry(
                    f"radius:lambda-entry:{label}",
                    "RAD",
                    len(outside),
                    "FLAGGED"
                    if trapped
                    else ("PASS" if entered else "INCONCLUSIVE"),
                    {"trapped_radii": trapped} if trapped else None,
                    f"{entered} entered, {undecided} undetermined on critical "
                    f"spheres, {len(trapped)} certified unable to enter",
                )
            )
    return entries


# ---------------------------------------------------------------- assembly


def default_grid() -> Tuple[MapParams, ...]:
    """Parameter roster covering every case and both odd and even p."""
    rosters = [
        (3, Fraction(9), 3, 1),
        (3, Fraction(2), 3, 1),
        (3, Fraction(1, 3), 3, 1),
        (3, Fraction(9), 1, 2),
        (5, Fraction(2), 1, 3),
        (3, Fraction(1, 9), 1, 2),
        (3, Fraction(27), 1, 6),
        (3, Fraction(9), 1, 6),
        (3, Fraction(81), 2, 9),
        (3, Fraction(3), 1, 6),
        (3, Fraction(4), 1, 3),
        (3, Fraction(4), 1, 9),
        (3, Fraction(1, 3), 1, 3),
        (2, Fraction(3), 4, 1),
        (2, Fraction(20), 4, 1),
        (2, Fraction(48), 4, 1),
    ]
    return tuple(validate_params(*r) for r in rosters)


def run_verification(
    params: MapParams,
    sample_count: int = 20,
    horizon: int = 25,
    seed: int = 0,
    precision: int = 96,
) -> VerificationReport:
    """The full suite for one parameter set: fixed-point algebra, the
    point-vs-radius bridge, every portrait claim, and the radius-level
    lemmas for this spec."""
    report = VerificationReport(params, seed, horizon)
    report.checks.extend(check_fixed_points(params, precision=max(64, precision)))
    report.checks.extend(
        check_lemma1(params, sample_count, min(horizon, 15), seed, precision)
    )
    portrait = classify(params)
    report.checks.extend(
        check_portrait(params, portrait, sample_count, horizon, seed, precision)
    )
    report.checks.extend(check_radius_lemmas([params.radius_spec()], horizon=80))
    return report
