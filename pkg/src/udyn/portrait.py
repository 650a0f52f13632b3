"""Phase-portrait classifier: the full claim set for a parameter choice.

Given validated parameters, ``classify`` picks the unique applicable case
of the limit theory (by regime, |a| against 1, and |ab^2| against |c^2|)
and emits every claim that case makes — invariant spheres, basins,
Siegel disks, escape regions, exceptional-ladder conditionals, and
fixed-point locations/characters — as structured data with exact radii.

Claims are never silently corrected: where the computed algebra
contradicts a claim (boundary fixed-point locations, the distance
formula, some p = 2 characters), the portrait carries an explicit flag
and both values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .exactnum import InvalidArgument, vp_rat
from .mapengine import (
    Character,
    FixedPointInfo,
    MapParams,
    fixed_points,
)
from .radiusmaps import (
    ExceptionalSet,
    LambdaInterval,
    Radius,
    RadiusMapSpec,
    Regime,
    lambda_interval,
    relevant_exceptional,
)

# ------------------------------------------------------------------- regions


@dataclass(frozen=True)
class Region:
    """A set of (finite) radii a claim quantifies over.

    kinds: sphere | ball | closed-ball | above | all-but-sphere |
    on-ladder | off-ladder | interval | off-interval.  Balls contain the
    zero radius; every other kind excludes it.
    """

    kind: str
    radius: Optional[Radius] = None
    ladder: Optional[ExceptionalSet] = None
    interval: Optional[LambdaInterval] = None

    def contains(self, r: Radius) -> bool:
        if r.is_infinite:
            return False
        if r.is_zero:
            return self.kind in ("ball", "closed-ball")
        if self.kind == "sphere":
            return r == self.radius
        if self.kind == "ball":
            return r < self.radius
        if self.kind == "closed-ball":
            return r <= self.radius
        if self.kind == "above":
            return r > self.radius
        if self.kind == "all-but-sphere":
            return r != self.radius
        if self.kind == "on-ladder":
            return self.ladder.member(r) is not None
        if self.kind == "off-ladder":
            return self.ladder.member(r) is None
        if self.kind == "interval":
            return self.interval.contains(r)
        if self.kind == "off-interval":
            return not self.interval.contains(r)
        raise InvalidArgument(f"unknown region kind {self.kind!r}")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.radius is not None:
            out["radius"] = str(self.radius)
        if self.ladder is not None:
            out["ladder"] = {
                "kind": self.ladder.kind,
                "step_q2": self.ladder.step_q2,
                "elements": [str(self.ladder.element(k)) for k in range(4)],
            }
        if self.interval is not None:
            out["interval"] = self.interval.to_dict()
        return out


# -------------------------------------------------------------------- claims


def _render(v):
    if isinstance(v, Radius):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Character):
        return v.value
    if isinstance(v, tuple):
        return [_render(x) for x in v]
    return v


@dataclass(frozen=True)
class Claim:
    """One machine-checkable statement, tagged with its case item."""

    tag: str
    kind: str
    region: Optional[Region] = None
    details: tuple = ()

    @classmethod
    def make(cls, tag: str, kind: str, region: Optional[Region] = None, **details) -> "Claim":
        return cls(tag, kind, region, tuple(sorted(details.items())))

    def detail(self, key: str, default=None):
        for k, v in self.details:
            if k == key:
                return v
        return default

    def to_dict(self) -> dict:
        out: dict = {"tag": self.tag, "kind": self.kind}
        if self.region is not None:
            out["region"] = self.region.to_dict()
        for k, v in self.details:
            out[k] = _render(v)
        return out


# ------------------------------------------------------------ case dispatch


def case_of(spec: RadiusMapSpec) -> Tuple[str, str]:
    """(theorem, case) identifiers for the unique applicable leaf."""
    va, s = spec.val_a, spec.s
    if spec.regime is Regime.LT:
        if va > 0:
            return "T1", "T1.2"
        if va == 0:
            return "T1", "T1.3"
        if s > 0:
            return "T1", "T1.4.1"
        if s == 0:
            return "T1", "T1.4.2"
        return "T1", "T1.4.3-5"
    if spec.regime is Regime.EQ:
        if va > 0:
            return "T2", "T2.A"
        if va == 0:
            return "T2", "T2.B"
        return "T2", "T2.C"
    if va > 0 and s > 0:
        return "T3", "T3.II"
    if va > 0 and s == 0:
        return "T3", "T3.III"
    if va > 0:
        return "T3", "T3.IV"
    if va == 0:
        return "T3", "T3.V"
    return "T3", "T3.VI"


# ---------------------------------------------------------------- portraits


@dataclass(frozen=True)
class PhasePortrait:
    params: MapParams
    theorem: str
    case: str
    claims: Tuple[Claim, ...]
    fixed_points: Tuple[FixedPointInfo, FixedPointInfo, FixedPointInfo]
    exceptional: Optional[ExceptionalSet]
    lambda_region: Optional[LambdaInterval]
    flags: Tuple[str, ...]

    def claims_of_kind(self, *kinds: str) -> Tuple[Claim, ...]:
        return tuple(c for c in self.claims if c.kind in kinds)

    @property
    def invariant_spheres(self) -> Tuple[Claim, ...]:
        return self.claims_of_kind("invariant-sphere")

    @property
    def basin_of_zero(self) -> Optional[Claim]:
        found = self.claims_of_kind("basin")
        return found[0] if found else None

    @property
    def siegel_disk_zero(self) -> Optional[Claim]:
        found = self.claims_of_kind("siegel")
        return found[0] if found else None

    @property
    def escape_claims(self) -> Tuple[Claim, ...]:
        return self.claims_of_kind("escape", "conditional-escape")

    @property
    def fixed_point_reports(self) -> Tuple[Claim, ...]:
        return self.claims_of_kind(
            "fp-location", "fp-character", "fp-distance", "fp-expansion"
        )

    def to_dict(self) -> dict:
        out = {
            "schema": 1,
            "params": {
                "p": self.params.p,
                "a": str(self.params.a),
                "b": str(self.params.b),
                "c": str(self.params.c),
            },
            "regime": self.params.radius_spec().regime.name,
            "theorem": self.theorem,
            "case": self.case,
            "claims": [c.to_dict() for c in self.claims],
            "fixed_points": [i.to_dict() for i in self.fixed_points],
            "flags": list(self.flags),
            "exceptional": None,
            "lambda": None,
        }
        if self.exceptional is not None:
            out["exceptional"] = {
                "kind": self.exceptional.kind,
                "step_q2": self.exceptional.step_q2,
                "elements": [str(self.exceptional.element(k)) for k in range(4)],
            }
        if self.lambda_region is not None:
            out["lambda"] = self.lambda_region.to_dict()
        return out


# ------------------------------------------------------- fixed-point claims


def _location_radius(info: FixedPointInfo, p: int) -> Radius:
    return Radius.from_val(p, info.location_val)


def _fp_location_claims(
    tag: str,
    relation: str,
    rho: Radius,
    infos,
    p: int,
    flags: set,
) -> list:
    claims = []
    for info in infos[1:]:
        where = _location_radius(info, p)
        if relation == "on-sphere":
            agree = where == rho
        elif relation == "in-closed-ball":
            agree = where <= rho
        else:  # off-closed-ball
            agree = where > rho
        if not agree:
            flags.add("BOUNDARY" if where == rho else "LOCATION-DISAGREE")
        region = Region("sphere" if relation == "on-sphere" else "closed-ball", rho)
        claims.append(
            Claim.make(
                tag,
                "fp-location",
                region,
                which=info.which,
                relation=relation,
                computed=where,
                agree=agree,
            )
        )
    return claims


def _fp_character_claims(
    tag: str,
    admissible: Tuple[str, ...],
    infos,
    flags: set,
) -> list:
    claims = []
    for info in infos[1:]:
        if not admissible:
            agree = None
            flags.add("UNSPECIFIED-CHARACTER")
        else:
            agree = info.character.value in admissible
            if not agree:
                flags.add("CHARACTER-DISAGREE")
        claims.append(
            Claim.make(
                tag,
                "fp-character",
                None,
                which=info.which,
                admissible=admissible,
                computed=info.character,
                agree=agree,
            )
        )
    return claims


def _distance_claim(params: MapParams, flags: set) -> Claim:
    """|x1 - x2|: the stated value against the exact identity
    x1 - x2 = 2*sqrt(a)*(c - b)/(a - 1)."""
    p = params.p
    spec = params.radius_spec()
    stated = spec.sphere_c()
    if p == 2:
        stated = stated.scaled_by_power(-2)  # |c| / 2
    v = (
        vp_rat(2, p)
        + Fraction(params.val_a, 2)
        + vp_rat(params.c - params.b, p)
        - vp_rat(params.a - 1, p)
    )
    recomputed = Radius.from_val(p, v)
    agree = stated == recomputed
    if not agree:
        flags.add("DISCREPANCY")
    return Claim.make(
        "T1.2.3",
        "fp-distance",
        None,
        stated=stated,
        recomputed=recomputed,
        agree=agree,
    )


# --------------------------------------------------------------- classifier


def _indiff_or_attr(p: int) -> Tuple[str, ...]:
    return ("indifferent",) if p == 2 else ("indifferent", "attracting")


def classify(params: MapParams, precision: int = 64) -> PhasePortrait:
    """Emit the applicable case's claims for these parameters."""
    spec = params.radius_spec()
    theorem, case = case_of(spec)
    infos = fixed_points(params, precision=precision)
    eset = relevant_exceptional(spec)
    lam = lambda_interval(spec) if case == "T3.IV" else None
    p = params.p
    claims: list = []
    flags: set = set()
    s_b, s_c = spec.sphere_b(), spec.sphere_c()

    if case == "T1.2":
        claims.append(
            Claim.make("T1.2.1", "limit-zero", Region("off-ladder", ladder=eset))
        )
        claims.append(
            Claim.make(
                "T1.2.2",
                "enters-sphere",
                Region("on-ladder", ladder=eset),
                sphere="c",
            )
        )
        claims.append(
            Claim.make(
                "T1.2.2",
                "conditional-limit-zero",
                Region("on-ladder", ladder=eset),
                condition="c*-not-in-ladder",
            )
        )
        claims.extend(_fp_location_claims("T1.2.3", "on-sphere", s_c, infos, p, flags))
        claims.append(_distance_claim(params, flags))
        if p >= 3:
            claims.extend(_fp_character_claims("T1.2.4", ("repelling",), infos, flags))
            for info in infos[1:]:
                claims.append(
                    Claim.make(
                        "T1.2.4",
                        "fp-expansion",
                        Region("ball", s_c),
                        which=info.which,
                    )
                )
        else:
            va = spec.val_a
            admissible = (
                ("repelling",)
                if va > 2
                else ("attracting",) if va == 2 else ("indifferent",)
            )
            claims.extend(_fp_character_claims("T1.2.5", admissible, infos, flags))
    elif case == "T1.3":
        claims.append(Claim.make("T1.1", "invariant-sphere", Region("above", s_c)))
        claims.append(Claim.make("T1.3", "basin", Region("ball", s_c)))
        claims.extend(
            _fp_location_claims("T1.3", "off-closed-ball", s_c, infos, p, flags)
        )
        claims.extend(_fp_character_claims("T1.3", _indiff_or_attr(p), infos, flags))
    elif case == "T1.4.1":
        rho = Radius.from_exponent(p, spec.val_a - 2 * spec.val_c)  # |c|/sqrt|a|
        claims.append(Claim.make("T1.1", "invariant-sphere", Region("sphere", rho)))
        claims.append(Claim.make("T1.4.1", "basin", Region("ball", rho)))
        claims.append(Claim.make("T1.4.1", "escape", Region("above", rho)))
        claims.extend(
            _fp_location_claims("T1.4.1", "on-sphere", rho, infos, p, flags)
        )
        claims.extend(_fp_character_claims("T1.4.1", _indiff_or_attr(p), infos, flags))
    elif case == "T1.4.2":
        claims.append(Claim.make("T1.1", "invariant-sphere", Region("ball", s_b)))
        claims.append(Claim.make("T1.4.2", "siegel", Region("ball", s_b)))
        claims.append(Claim.make("T1.4.2", "escape", Region("above", s_b)))
        claims.extend(
            _fp_location_claims("T1.4.2", "in-closed-ball", s_b, infos, p, flags)
        )
        claims.extend(_fp_character_claims("T1.4.2", _indiff_or_attr(p), infos, flags))
    elif case == "T1.4.3-5":
        claims.append(
            Claim.make("T1.4.3", "escape", Region("off-ladder", ladder=eset))
        )
        claims.append(
            Claim.make(
                "T1.4.4",
                "enters-sphere",
                Region("on-ladder", ladder=eset),
                sphere="b",
            )
        )
        claims.append(
            Claim.make(
                "T1.4.4",
                "conditional-escape",
                Region("on-ladder", ladder=eset),
                condition="b*-not-in-ladder",
            )
        )
        claims.extend(
            _fp_location_claims("T1.4.5", "on-sphere", s_b, infos, p, flags)
        )
        if p >= 3:
            claims.extend(_fp_character_claims("T1.4.5", ("repelling",), infos, flags))
        else:
            # |b|sqrt|a| against 2|c|, compared by doubled exponents
            lhs = -2 * spec.val_b - spec.val_a
            rhs = 2 - 2 * spec.val_c
            if lhs == rhs:
                admissible: Tuple[str, ...] = ("attracting",)
            elif lhs > rhs:
                admissible = ("repelling",)
            else:
                admissible = ()
            claims.extend(_fp_character_claims("T1.4.5", admissible, infos, flags))
    elif case == "T2.A":
        claims.append(
            Claim.make("T2.A.a", "limit-zero", Region("off-ladder", ladder=eset))
        )
        claims.append(
            Claim.make(
                "T2.A.b", "enters-sphere", Region("on-ladder", ladder=eset), sphere="b"
            )
        )
        claims.append(
            Claim.make(
                "T2.A.c",
                "conditional-limit-zero",
                Region("sphere", s_b),
                condition="b*-not-in-ladder",
            )
        )
        claims.append(
            Claim.make(
                "T2.A.d",
                "returns-to-sphere",
                Region("sphere", s_b),
                condition="b*-in-ladder",
            )
        )
        claims.extend(_fp_location_claims("T2.A.e", "on-sphere", s_b, infos, p, flags))
        claims.extend(_fp_character_claims("T2.A.e", ("repelling",), infos, flags))
    elif case == "T2.B":
        claims.append(
            Claim.make("T2.B", "invariant-sphere", Region("all-but-sphere", s_b))
        )
        claims.append(Claim.make("T2.B", "dichotomy", Region("sphere", s_b)))
        claims.extend(_fp_character_claims("T2.B", (), infos, flags))
    elif case == "T2.C":
        claims.append(
            Claim.make("T2.C.a", "escape", Region("off-ladder", ladder=eset))
        )
        claims.append(
            Claim.make(
                "T2.C.b", "enters-sphere", Region("on-ladder", ladder=eset), sphere="b"
            )
        )
        claims.append(
            Claim.make(
                "T2.C.c",
                "conditional-escape",
                Region("sphere", s_b),
                condition="b*-not-in-ladder",
            )
        )
        claims.append(
            Claim.make(
                "T2.C.d",
                "returns-to-sphere",
                Region("sphere", s_b),
                condition="b*-in-ladder",
            )
        )
        claims.extend(_fp_location_claims("T2.C.e", "on-sphere", s_b, infos, p, flags))
        claims.extend(_fp_character_claims("T2.C.e", ("repelling",), infos, flags))
    elif case == "T3.II":
        claims.append(
            Claim.make("T3.II.a", "limit-zero", Region("off-ladder", ladder=eset))
        )
        claims.append(
            Claim.make(
                "T3.II.b", "enters-sphere", Region("on-ladder", ladder=eset), sphere="c"
            )
        )
        claims.append(
            Claim.make(
                "T3.II.c",
                "conditional-limit-zero",
                Region("sphere", s_c),
                condition="c*-not-in-ladder",
            )
        )
        claims.append(
            Claim.make(
                "T3.II.d",
                "returns-to-sphere",
                Region("sphere", s_c),
                condition="c*-in-ladder",
            )
        )
        claims.extend(_fp_location_claims("T3.II.e", "on-sphere", s_c, infos, p, flags))
        if p >= 3:
            admissible = ("repelling",)
        else:
            lhs = -2 * spec.val_c
            rhs = 2 + (-2 * spec.val_b - spec.val_a)  # 2|b|sqrt|a|, doubled exps
            if lhs > rhs:
                admissible = ("repelling",)
            elif lhs == rhs:
                admissible = ("attracting",)
            else:
                admissible = ()
        claims.extend(_fp_character_claims("T3.II.e", admissible, infos, flags))
    elif case == "T3.III":
        claims.append(Claim.make("T3.I", "invariant-sphere", Region("ball", s_c)))
        claims.append(
            Claim.make(
                "T3.III.a",
                "eventually-constant-radius",
                Region("off-ladder", ladder=eset),
            )
        )
        claims.append(
            Claim.make(
                "T3.III.b",
                "enters-sphere",
                Region("on-ladder", ladder=eset),
                sphere="c",
            )
        )
        claims.append(
            Claim.make(
                "T3.III.c",
                "eventually-constant-radius",
                Region("sphere", s_c),
                condition="c*-not-in-ladder",
            )
        )
        claims.append(
            Claim.make(
                "T3.III.d",
                "returns-to-sphere",
                Region("sphere", s_c),
                condition="c*-in-ladder",
            )
        )
        claims.extend(
            _fp_location_claims("T3.III.e", "in-closed-ball", s_c, infos, p, flags)
        )
        claims.extend(
            _fp_character_claims("T3.III.e", ("attracting", "indifferent"), infos, flags)
        )
    elif case == "T3.IV":
        rho_star = Radius.from_exponent(p, -spec.val_a - 2 * spec.val_b)
        claims.append(
            Claim.make("T3.I", "invariant-sphere", Region("sphere", rho_star))
        )
        claims.append(
            Claim.make("T3.IV", "two-cycle-region", Region("interval", interval=lam))
        )
        claims.append(
            Claim.make("T3.IV", "enters-region", Region("off-interval", interval=lam))
        )
        claims.extend(_fp_character_claims("T3.IV", (), infos, flags))
    elif case == "T3.V":
        claims.append(Claim.make("T3.I", "invariant-sphere", Region("above", s_b)))
        claims.append(
            Claim.make(
                "T3.V.a",
                "eventually-constant-radius",
                Region("off-ladder", ladder=eset),
            )
        )
        claims.append(
            Claim.make(
                "T3.V.b", "enters-sphere", Region("on-ladder", ladder=eset), sphere="b"
            )
        )
        claims.append(
            Claim.make(
                "T3.V.c",
                "eventually-constant-radius",
                Region("sphere", s_b),
                condition="b*-not-in-ladder",
            )
        )
        claims.append(
            Claim.make(
                "T3.V.d",
                "returns-to-sphere",
                Region("sphere", s_b),
                condition="b*-in-ladder",
            )
        )
        claims.extend(
            _fp_location_claims("T3.V.e", "off-closed-ball", s_b, infos, p, flags)
        )
        claims.extend(
            _fp_character_claims("T3.V.e", ("attracting", "indifferent"), infos, flags)
        )
    else:  # T3.VI
        claims.append(
            Claim.make("T3.VI.a", "escape", Region("off-ladder", ladder=eset))
        )
        claims.append(
            Claim.make(
                "T3.VI.b", "enters-sphere", Region("on-ladder", ladder=eset), sphere="b"
            )
        )
        claims.append(
            Claim.make(
                "T3.VI.c",
                "conditional-escape",
                Region("sphere", s_b),
                condition="b*-not-in-ladder",
            )
        )
        claims.append(
            Claim.make(
                "T3.VI.d",
                "returns-to-sphere",
                Region("sphere", s_b),
                condition="b*-in-ladder",
            )
        )
        claims.extend(_fp_location_claims("T3.VI.e", "on-sphere", s_b, infos, p, flags))
        claims.extend(_fp_character_claims("T3.VI.e", ("repelling",), infos, flags))

    ladder_used = any(
        c.region is not None and c.region.ladder is not None for c in claims
    )
    return PhasePortrait(
        params=params,
        theorem=theorem,
        case=case,
        claims=tuple(claims),
        fixed_points=infos,
        exceptional=eset if ladder_used else None,
        lambda_region=lam,
        flags=tuple(sorted(flags)),
    )


def character_from_multiplier(
    params: MapParams, which: str, precision: int = 64
):
    """(computed character, claimed admissible set, agree) for x1 or x2.

    ``agree`` is None when the applicable case leaves the character
    unspecified.
    """
    if which not in ("x1", "x2"):
        raise InvalidArgument("which must be 'x1' or 'x2'")
    portrait = classify(params, precision=precision)
    for claim in portrait.claims_of_kind("fp-character"):
        if claim.detail("which") == which:
            return (
                claim.detail("computed"),
                claim.detail("admissible"),
                claim.detail("agree"),
            )
    raise InvalidArgument("no character claim emitted; unreachable for valid params")
