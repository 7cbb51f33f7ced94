"""Whole-trinomial analysis: grading, structural flags, elementary families
with their verification verdicts, and kernel probes for non-primitive
multiples.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import SCHEMA
from .abelian import GroupElement
from .derivation import (
    FamilyVerdict,
    enumerate_elementary_families,
    homogeneity_degree,
    kernel_variables,
    verify_family,
)
from .grading import (
    KGrading,
    compute_grading,
    cone_contains,
    cone_inequalities_2d,
    is_primitive_degree,
    weight_cone,
)
from .trinomial import (
    TrinomialSpec,
    existence_criterion,
    has_linear_term,
    is_factorial,
    monomial_gcds,
    parse_trinomial,
    rigidity_criterion,
    theorem_hypothesis,
)

DEFAULT_PROBE_DEGREE = 6

# Specs for which a commonly quoted inequality for the weight cone
# disagrees with its generators; the note is attached to their reports.
_CONE_NOTES = {
    ((1, 3), (3,), (2,)): (
        "weight cone is the conic hull of the generator degrees; in the basis "
        "deg T01=(-3,3), deg T02=(1,1), deg T11=(0,2), deg T21=(0,3) it is "
        "{-v <= u <= v}. The angle {-u <= v <= u} would exclude deg T11 and deg T21."
    ),
}


@dataclass(frozen=True)
class AnalyzeRequest:
    input: str
    format: str = "json"
    basis_target: Mapping[str, Sequence[int]] | None = None
    nilpotency_bound: int | None = None
    kernel_probe_degree: int = DEFAULT_PROBE_DEGREE

    def __post_init__(self):
        if self.format not in ("json", "text"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.kernel_probe_degree < 0:
            raise ValueError("probe degree must be nonnegative")
        if self.nilpotency_bound is not None and self.nilpotency_bound < 1:
            raise ValueError("nilpotency bound must be >= 1")


def read_input(text: str) -> TrinomialSpec:
    """A trinomial in either grammar, or ``@path`` to a file holding one."""
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    return parse_trinomial(text)


def load_basis(path_or_json: str) -> dict[str, list[int]]:
    """Target degrees as JSON ``{"T01": [...], ...}``, inline or ``@path``."""
    text = path_or_json
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("basis must be a JSON object mapping variable names to coordinates")
    degrees = data.get("degrees", data)
    return {str(k): [int(x) for x in v] for k, v in degrees.items()}


@dataclass
class KernelProbe:
    family_label: str
    max_degree: int
    kernel_variables: list[str]
    nonprimitive: list[tuple[str, GroupElement]] = field(default_factory=list)
    power_boundary: dict[str, int | None] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "family": self.family_label,
            "max_degree": self.max_degree,
            "kernel_variables": self.kernel_variables,
            "nonprimitive": [{"h": h, "degree": w.to_json()} for h, w in self.nonprimitive],
            "power_boundary": dict(self.power_boundary),
        }


def _monomial_str(names, exps) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e) or "1"


def probe_kernel(grading: KGrading, verdict: FamilyVerdict, max_degree: int) -> KernelProbe:
    """Monomials h in the variables killed by delta, of total degree at most
    ``max_degree``, for which h*delta has a degree inside the weight cone.
    """
    s = grading.spec
    kv = kernel_variables(verdict.derivation)
    probe = KernelProbe(verdict.family.label(), max_degree, [s.names[k] for k in kv])
    if verdict.degree is None:
        return probe
    cone = weight_cone(grading)
    base = verdict.degree
    for total in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(kv, total):
            exps = [0] * s.n
            for k in combo:
                exps[k] += 1
            w = grading.degree_of_exponents(exps) + base
            if cone_contains(cone, w.free_part()):
                probe.nonprimitive.append((_monomial_str(s.names, exps), w))
    for k in kv:
        probe.power_boundary[s.names[k]] = next(
            (m for m in range(1, max_degree + 1)
             if cone_contains(cone, (m * grading.degrees[k] + base).free_part())),
            None,
        )
    return probe


@dataclass
class ClassificationReport:
    spec: TrinomialSpec
    grading: KGrading
    d: tuple[int, int, int]
    factorial: bool | None
    has_linear_term: bool
    rigid_criterion: bool
    existence_criterion: bool
    theorem_hypothesis: bool
    families: list[FamilyVerdict]
    probes: list[KernelProbe]
    notes: list[str]

    @property
    def consistency(self) -> dict[str, bool]:
        out = {
            "existence_iff_families": self.existence_criterion == bool(self.families),
            "rigid_iff_no_families": self.rigid_criterion == (not self.families),
            "hypothesis_implies_type_ii": (not self.theorem_hypothesis
                                           or all(v.family.type == "II" for v in self.families)),
        }
        if self.factorial is not None:
            out["factorial_iff_torsion_free"] = self.factorial == self.grading.group.is_torsion_free
        return out

    @property
    def verification_ok(self) -> bool:
        return all(v.ok for v in self.families)

    def to_json(self) -> dict:
        g = self.grading
        cone = weight_cone(g)
        ineq = cone_inequalities_2d(cone)
        return {
            "schema": SCHEMA,
            "spec": {
                "structured": self.spec.structured(),
                "polynomial": self.spec.polynomial(),
                "l": [list(li) for li in self.spec.l],
            },
            "grading": {
                "group": g.group.to_json(),
                "group_type": g.group.describe(),
                "degrees": {name: w.to_json() for name, w in g.degree_map().items()},
                "mu": g.mu.to_json(),
                "basis_change": g.basis_change.tolist() if g.basis_change is not None else None,
                "cone_generators": [[int(x) for x in v] for v in cone.generators],
                "cone_inequalities": [[int(x) for x in a] for a in ineq] if ineq else None,
            },
            "d": list(self.d),
            "flags": {
                "factorial": self.factorial,
                "has_linear_term": self.has_linear_term,
                "rigid_criterion": self.rigid_criterion,
                "rigid_criterion_scope": self.rigidity_scope,
                "existence_criterion": self.existence_criterion,
                "theorem_hypothesis": self.theorem_hypothesis,
            },
            "family_counts": {
                "I": sum(1 for v in self.families if v.family.type == "I"),
                "II": sum(1 for v in self.families if v.family.type == "II"),
            },
            "families": [v.to_json() for v in self.families],
            "kernel_probes": [p.to_json() for p in self.probes],
            "consistency": self.consistency,
            "verification_ok": self.verification_ok,
            "notes": list(self.notes),
        }

    @property
    def rigidity_scope(self) -> str:
        return "criterion" if self.factorial else "criterion (factorial case)"

    def render_json(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def render_text(self) -> str:
        g = self.grading
        lines = [
            f"trinomial: {self.spec.polynomial()}",
            f"grading group K = {g.group.describe()}",
        ]
        for name, w in g.degree_map().items():
            lines.append(f"  deg {name} = {w}")
        lines.append(f"  mu = {g.mu}")
        if g.basis_change is not None:
            lines.append(f"  basis change (columns = images of canonical generators): {g.basis_change.tolist()}")
        fact = "n/a (linear term)" if self.factorial is None else str(self.factorial).lower()
        lines += [
            f"d = {self.d}",
            f"factorial: {fact}",
            f"linear term: {str(self.has_linear_term).lower()}",
            f"rigid ({self.rigidity_scope}): {str(self.rigid_criterion).lower()}",
            f"homogeneous LND exists: {str(self.existence_criterion).lower()}",
            f"only Type II possible: {str(self.theorem_hypothesis).lower()}",
            f"elementary families: {len(self.families)}",
        ]
        for v in self.families:
            nil = v.nilpotency
            idx = ", ".join(f"{k}:{m}" for k, m in nil.indices.items()) if nil.is_nilpotent else nil.status
            lines.append(f"  {v.family.label()}  beta={tuple(str(x) for x in v.beta)}  ok={v.ok}")
            lines.append(f"    delta = {v.derivation}")
            lines.append(f"    degree {v.degree}  primitive={v.primitive}  nilpotency [{idx}]")
        for p in self.probes:
            bound = ", ".join(
                f"{k}: none" if m is None else k if m == 1 else f"{k}^{m}"
                for k, m in p.power_boundary.items()
            )
            lines.append(f"  probe {p.family_label}: {len(p.nonprimitive)} non-primitive h "
                         f"(degree <= {p.max_degree}); first non-primitive powers: {bound or '-'}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines) + "\n"


def analyze_spec(
    s: TrinomialSpec,
    basis_target: Mapping[str, Sequence[int]] | None = None,
    nilpotency_bound: int | None = None,
    kernel_probe_degree: int = DEFAULT_PROBE_DEGREE,
) -> ClassificationReport:
    grading = compute_grading(s)
    if basis_target is not None:
        grading = grading.in_basis(basis_target)
    linear = has_linear_term(s)
    notes = []
    if linear:
        notes.append("linear term: the hypersurface is an affine space")
    if s.l in _CONE_NOTES:
        notes.append(_CONE_NOTES[s.l])
    verdicts = [verify_family(s, fam, grading, nilpotency_bound)
                for fam in enumerate_elementary_families(s)]
    for v in verdicts:
        if v.degree is not None and not v.primitive:
            notes.append(diagnose_primitivity(s, v))
    probes = [probe_kernel(grading, v, kernel_probe_degree) for v in verdicts] if kernel_probe_degree else []
    return ClassificationReport(
        spec=s,
        grading=grading,
        d=monomial_gcds(s),
        factorial=None if linear else is_factorial(s),
        has_linear_term=linear,
        rigid_criterion=rigidity_criterion(s),
        existence_criterion=existence_criterion(s),
        theorem_hypothesis=theorem_hypothesis(s),
        families=verdicts,
        probes=probes,
        notes=notes,
    )


def diagnose_primitivity(s: TrinomialSpec, verdict: FamilyVerdict) -> str:
    """Explain a non-primitive degree by redoing the computation in the
    canonical basis, where no user-supplied basis change is involved."""
    canon = compute_grading(s)
    deg = homogeneity_degree(verdict.derivation, canon)
    label = verdict.family.label()
    if deg is not None and is_primitive_degree(canon, deg):
        return f"{label}: degree is primitive in the canonical basis; the basis change is inconsistent"
    return f"{label}: degree {deg} lies in the weight cone in the canonical basis as well"


def analyze(req: AnalyzeRequest) -> ClassificationReport:
    return analyze_spec(
        read_input(req.input),
        basis_target=req.basis_target,
        nilpotency_bound=req.nilpotency_bound,
        kernel_probe_degree=req.kernel_probe_degree,
    )


# plot data ---------------------------------------------------------------


def cone_plot_data(
    s: TrinomialSpec,
    basis_target: Mapping[str, Sequence[int]] | None = None,
    probe_degree: int = 2,
) -> dict:
    """Generators, degrees and derivation degrees for an external plotter."""
    grading = compute_grading(s)
    if basis_target is not None:
        grading = grading.in_basis(basis_target)
    cone = weight_cone(grading)

    def vec(w: GroupElement) -> list[int]:
        return list(w.free)

    derivations, probes = [], []
    for fam in enumerate_elementary_families(s):
        v = verify_family(s, fam, grading)
        if v.degree is None:
            continue
        derivations.append({"label": v.family.label(), "degree": vec(v.degree), "primitive": v.primitive})
        for k in kernel_variables(v.derivation):
            for m in range(1, probe_degree + 1):
                w = m * grading.degrees[k] + v.degree
                h = s.names[k] if m == 1 else f"{s.names[k]}^{m}"
                probes.append({
                    "label": v.family.label(),
                    "h": h,
                    "degree": vec(w),
                    "primitive": not cone_contains(cone, w.free_part()),
                })
    points = [list(map(int, g)) for g in cone.generators]
    points += [d["degree"] for d in derivations] + [p["degree"] for p in probes] + [vec(grading.mu)]
    dim = cone.ambient_dim
    grid = {
        "min": [min([0] + [p[i] for p in points]) - 1 for i in range(dim)],
        "max": [max([0] + [p[i] for p in points]) + 1 for i in range(dim)],
    }
    ineq = cone_inequalities_2d(cone)
    return {
        "schema": SCHEMA,
        "spec": s.structured(),
        "ambient_dim": dim,
        "group": grading.group.to_json(),
        "basis_change": grading.basis_change.tolist() if grading.basis_change is not None else None,
        "generators": [list(map(int, g)) for g in cone.generators],
        "degrees": {name: w.to_json() for name, w in grading.degree_map().items()},
        "mu": grading.mu.to_json(),
        "inequalities": [[int(x) for x in a] for a in ineq] if ineq else None,
        "derivations": derivations,
        "probes": probes,
        "grid": grid,
        "notes": [_CONE_NOTES[s.l]] if s.l in _CONE_NOTES else [],
    }
