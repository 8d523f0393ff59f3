"""Problem-file schema (vjp-schema-1) and its translation into core objects.

A problem is one UTF-8 JSON document: jet space, named constants, atlas,
dynamics (Lagrangian or source form per chart), symmetries, sections,
cycles, representatives, partition of unity, bundle declaration, tolerance
overrides, and the RNG seed. Rational constants are substituted exactly at
load time; opaque constants (pi is built in) stay symbolic and carry their
numeric binding for evaluation.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import SchemaError
from .jetspace import JetSpaceDescriptor, as_fraction, const_symbol
from . import expr as ex
from .jetgeo import (
    GeneralForm,
    HorizontalForm,
    ProjectableVectorField,
    Section,
    SourceForm,
    current_from_components,
)
from .varcalc import Lagrangian
from .cech import Atlas, Chart, Cycle, CycleLeg, FaceMatch, Overlap, Representative

SCHEMA_VERSION = "vjp-schema-1"
GRAMMAR_VERSION = "vjp-grammar-1"

DEFAULT_TOLERANCES = {
    "tau_eq": 1e-9,
    "tau_quad": 1e-6,
    "tau_class": 1e-4,
    "tau_crit": 1e-8,
}


class ConstantModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    rational: str | None = None
    numeric: float | None = None


class SpaceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    base: list[str]
    fields: list[str]
    order: int


class ChartModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    id: str
    fiber_center: list[str] | None = None
    base_center: list[str] | None = None
    domain: dict = Field(default_factory=dict)


class OverlapModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    from_chart: str = Field(alias="from")
    to_chart: str = Field(alias="to")
    map: dict[str, str]


class AtlasModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    charts: list[ChartModel]
    overlaps: list[OverlapModel] = Field(default_factory=list)
    triples: list[list[str]] = Field(default_factory=list)


class SymmetryModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    id: str
    base: dict[str, list[str]] | list[str]
    fiber: dict[str, list[str]] | list[str]


class HomotopyModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    param: str
    components: dict[str, list[str]] | list[str]


class SectionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    id: str
    components: dict[str, list[str]] | list[str]
    homotopy_class: str | None = None
    # declared homotopy: section family in one extra parameter; homotopy
    # classes are identified by declaration, never computed
    homotopy: HomotopyModel | None = None
    box: list[list[float]] | None = None
    grid: int = 64


class LegModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    chart: str
    map: dict[str, str]
    orientation: int = 1


class FaceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    leg_a: int
    face_a: tuple[int, int]
    leg_b: int
    face_b: tuple[int, int]
    param_map: list[str] = Field(default_factory=list)


class CycleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    id: str
    dim: int
    target: str = "Y"
    legs: list[LegModel]
    faces: list[FaceModel] = Field(default_factory=list)


class FormTermModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    legs: list[str]
    coeff: str


class RepresentativeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    forms: dict[str, list[FormTermModel]]
    remainder_lagrangian: dict[str, str] | None = None
    remainder_current: dict[str, list[str]] | None = None


class BundleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: str = "unknown"
    base_betti: list[int] | None = None
    fiber_betti: list[int] | None = None


class ConservationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    initial_position: list[float]
    initial_velocity: list[float]
    t_span: list[float] = Field(default_factory=lambda: [0.0, 10.0])
    step: float = 1e-3
    currents: list[str] = Field(default_factory=list)


class ProblemModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)
    schema_version: str = Field(alias="schema")
    title: str = ""
    space: SpaceModel
    constants: dict[str, ConstantModel] = Field(default_factory=dict)
    tolerances: dict[str, float] = Field(default_factory=dict)
    seed: int = 0
    atlas: AtlasModel
    lagrangian: dict[str, str] | None = None
    source_form: dict[str, list[str]] | None = None
    symmetries: list[SymmetryModel] = Field(default_factory=list)
    sections: list[SectionModel] = Field(default_factory=list)
    cycles: list[CycleModel] = Field(default_factory=list)
    representatives: dict[str, RepresentativeModel] = Field(default_factory=dict)
    partition_of_unity: dict[str, str] | None = None
    bundle: BundleModel = Field(default_factory=BundleModel)
    conservation: ConservationModel | None = None


class Problem:
    """A validated problem with all expressions parsed into core objects."""

    def __init__(self, model: ProblemModel):
        if model.schema_version != SCHEMA_VERSION:
            raise SchemaError(
                f"unsupported schema {model.schema_version!r}; expected {SCHEMA_VERSION!r}"
            )
        self.model = model
        self.title = model.title
        self.seed = model.seed
        self.tolerances = dict(DEFAULT_TOLERANCES)
        for k, v in model.tolerances.items():
            if k not in DEFAULT_TOLERANCES:
                raise SchemaError(f"unknown tolerance {k!r}")
            self.tolerances[k] = float(v)
        self.space = JetSpaceDescriptor(
            model.space.base, model.space.fields, model.space.order
        )
        self.constants = {"pi": ex.from_symbol(const_symbol("pi", math.pi))}
        for name, c in model.constants.items():
            if not name.isidentifier():
                raise SchemaError(f"bad constant name {name!r}")
            if (c.rational is None) == (c.numeric is None):
                raise SchemaError(
                    f"constant {name!r} needs exactly one of rational/numeric"
                )
            if c.rational is not None:
                self.constants[name] = ex.from_fraction(Fraction(c.rational))
            else:
                self.constants[name] = ex.from_symbol(const_symbol(name, c.numeric))
        self._build_atlas()
        self._build_dynamics()
        self._build_symmetries()
        self._build_sections()
        self._build_cycles()
        self._build_representatives()
        self._build_partition()

    # -- parsing helpers -------------------------------------------------------

    def parse(self, text, max_order=None):
        return ex.parse(text, self.space, self.constants, max_order=max_order)

    def _parse_center(self, values, count, what):
        if values is None:
            return {}
        if len(values) != count:
            raise SchemaError(f"{what} has wrong arity")
        return {k + 1: as_fraction(v) for k, v in enumerate(values)}

    # -- builders ----------------------------------------------------------------

    def _build_atlas(self):
        space = self.space
        charts = []
        for cm in self.model.atlas.charts:
            charts.append(
                Chart(
                    cm.id,
                    space,
                    fiber_center=self._parse_center(
                        cm.fiber_center, space.m, f"fiber center of {cm.id!r}"
                    ),
                    base_center=self._parse_center(
                        cm.base_center, space.n, f"base center of {cm.id!r}"
                    ),
                    domain=cm.domain,
                )
            )
        overlaps = []
        max_order = 2 * space.order
        for om in self.model.atlas.overlaps:
            mapping = {}
            for name, text in om.map.items():
                if space.is_base(name):
                    sym = space.base_symbol(space.base_index(name))
                elif space.is_field(name):
                    sym = space.field_symbol(space.field_index(name))
                else:
                    raise SchemaError(f"overlap map names unknown coordinate {name!r}")
                mapping[sym] = self.parse(text, max_order=0)
            overlaps.append(Overlap(space, om.from_chart, om.to_chart, mapping))
        self.atlas = Atlas(
            space, charts, overlaps, triples=self.model.atlas.triples, verify=False
        )

    def _build_dynamics(self):
        space = self.space
        chart_ids = set(self.atlas.chart_ids())
        self.lagrangians = None
        self.eta = None
        if self.model.lagrangian:
            if set(self.model.lagrangian) != chart_ids:
                raise SchemaError("lagrangian must be given on every chart")
            self.lagrangians = {
                cid: Lagrangian(space, self.parse(text, max_order=space.order), cid)
                for cid, text in self.model.lagrangian.items()
            }
        if self.model.source_form:
            if set(self.model.source_form) != chart_ids:
                raise SchemaError("source form must be given on every chart")
            self.eta = {}
            for cid, comps in self.model.source_form.items():
                if len(comps) != space.m:
                    raise SchemaError(
                        f"source form on chart {cid!r} needs {space.m} components"
                    )
                self.eta[cid] = SourceForm(
                    space,
                    [self.parse(c, max_order=2 * space.order) for c in comps],
                )
        if self.lagrangians is None and self.eta is None:
            raise SchemaError("problem needs a lagrangian or a source form")

    def _per_chart(self, data, arity, what, max_order, allow_subset=False):
        chart_ids = self.atlas.chart_ids()
        if isinstance(data, list):
            data = {cid: data for cid in chart_ids}
        out = {}
        for cid, comps in data.items():
            if cid not in self.atlas.charts:
                raise SchemaError(f"{what} references unknown chart {cid!r}")
            if len(comps) != arity:
                raise SchemaError(f"{what} on chart {cid!r} has wrong arity")
            out[cid] = [self.parse(c, max_order=max_order) for c in comps]
        missing = set(chart_ids) - set(out)
        if missing and not allow_subset:
            raise SchemaError(f"{what} missing on charts {sorted(missing)}")
        return out

    def _build_symmetries(self):
        space = self.space
        self.symmetries = {}
        for sm in self.model.symmetries:
            base = self._per_chart(sm.base, space.n, f"symmetry {sm.id!r} base", 0)
            fiber = self._per_chart(sm.fiber, space.m, f"symmetry {sm.id!r} fiber", 0)
            self.symmetries[sm.id] = {
                cid: ProjectableVectorField(space, base[cid], fiber[cid])
                for cid in self.atlas.chart_ids()
            }

    def _build_sections(self):
        # a section's graph need not meet every chart: expressions are given
        # on the charts it passes through, compatibility checked pairwise
        space = self.space
        self.sections = {}
        for sm in self.model.sections:
            comps = self._per_chart(
                sm.components, space.m, f"section {sm.id!r}", 0, allow_subset=True
            )
            homotopy = None
            if sm.homotopy is not None:
                param = const_symbol(sm.homotopy.param)
                constants = dict(self.constants)
                constants[sm.homotopy.param] = ex.from_symbol(param)
                raw = sm.homotopy.components
                if isinstance(raw, list):
                    raw = {cid: raw for cid in comps}
                family = {
                    cid: [
                        ex.parse(text, space, constants, max_order=0)
                        for text in texts
                    ]
                    for cid, texts in raw.items()
                }
                homotopy = {"param": param, "family": family}
            self.sections[sm.id] = {
                "by_chart": {
                    cid: Section(space, cid, comps[cid]) for cid in comps
                },
                "homotopy_class": sm.homotopy_class or sm.id,
                "homotopy": homotopy,
                "box": sm.box,
                "grid": sm.grid,
            }

    def _build_cycles(self):
        space = self.space
        self.cycles = []
        for cm in self.model.cycles:
            pspace = JetSpaceDescriptor(
                [f"s{d}" for d in range(1, cm.dim + 1)], ["_cycdummy"], 0
            )
            legs = []
            for lm in cm.legs:
                if lm.chart not in self.atlas.charts:
                    raise SchemaError(
                        f"cycle {cm.id!r} references unknown chart {lm.chart!r}"
                    )
                mapping = {}
                for name, text in lm.map.items():
                    if space.is_base(name):
                        sym = space.base_symbol(space.base_index(name))
                    elif space.is_field(name):
                        sym = space.field_symbol(space.field_index(name))
                    else:
                        raise SchemaError(
                            f"cycle {cm.id!r} maps unknown coordinate {name!r}"
                        )
                    mapping[sym] = ex.parse(text, pspace, self.constants)
                legs.append(CycleLeg(lm.chart, mapping, lm.orientation))
            faces = [
                FaceMatch(
                    fm.leg_a,
                    tuple(fm.face_a),
                    fm.leg_b,
                    tuple(fm.face_b),
                    [
                        ex.parse(t, pspace, self.constants)
                        for t in fm.param_map
                    ],
                )
                for fm in cm.faces
            ]
            self.cycles.append(Cycle(cm.id, cm.dim, legs, faces, target=cm.target))

    def _leg_from_token(self, token):
        space = self.space
        if not token.startswith("d"):
            raise SchemaError(f"bad differential token {token!r}")
        name = token[1:]
        if "_" in name:
            head, _, suffix = name.partition("_")
            suffix = suffix.strip("{}")
            parts = suffix.split()
            names = []
            for part in parts or [suffix]:
                rest = part
                while rest:
                    for bn in sorted(space.base_names, key=len, reverse=True):
                        if rest.startswith(bn):
                            names.append(bn)
                            rest = rest[len(bn):]
                            break
                    else:
                        raise SchemaError(f"bad jet suffix in token {token!r}")
            jet = tuple(space.base_index(nm) for nm in names)
            return ("u", space.field_index(head), tuple(sorted(jet)))
        if space.is_base(name):
            return ("x", space.base_index(name))
        if space.is_field(name):
            return ("u", space.field_index(name), ())
        raise SchemaError(f"differential token {token!r} names no coordinate")

    def _build_representatives(self):
        space = self.space
        self.representatives = {}
        for key, rm in self.model.representatives.items():
            if key not in ("delta", "delta_prime"):
                raise SchemaError(f"unknown representative slot {key!r}")
            forms = {}
            for cid, terms in rm.forms.items():
                if cid not in self.atlas.charts:
                    raise SchemaError(
                        f"representative references unknown chart {cid!r}"
                    )
                degree = None
                gf = None
                for tm in terms:
                    legs = tuple(self._leg_from_token(tok) for tok in tm.legs)
                    if degree is None:
                        degree = len(legs)
                        gf = GeneralForm(space, degree)
                    if len(legs) != degree:
                        raise SchemaError("mixed degrees in a representative form")
                    gf.add_term(legs, self.parse(tm.coeff, max_order=2 * space.order))
                forms[cid] = gf if gf is not None else GeneralForm(space, space.n + 1)
            remainder_lagrangian = None
            if rm.remainder_lagrangian:
                remainder_lagrangian = {
                    cid: Lagrangian(space, self.parse(t, max_order=space.order), cid)
                    for cid, t in rm.remainder_lagrangian.items()
                }
            remainder_current = None
            if rm.remainder_current:
                remainder_current = {
                    cid: current_from_components(
                        space,
                        [self.parse(c, max_order=2 * space.order) for c in comps],
                    )
                    for cid, comps in rm.remainder_current.items()
                }
            self.representatives[key] = Representative(
                forms, remainder_lagrangian, remainder_current
            )

    def _build_partition(self):
        self.partition = None
        if self.model.partition_of_unity:
            self.partition = {
                cid: self.parse(text, max_order=0)
                for cid, text in self.model.partition_of_unity.items()
            }


def section_at_homotopy(problem, section_id, value):
    """Instantiate a declared section homotopy at a rational parameter value."""
    info = problem.sections[section_id]
    if not info.get("homotopy"):
        raise SchemaError(f"section {section_id!r} declares no homotopy")
    param = info["homotopy"]["param"]
    binding = {param: ex.from_fraction(as_fraction(value))}
    return {
        cid: Section(
            problem.space, cid, [ex.substitute(c, binding) for c in comps]
        )
        for cid, comps in info["homotopy"]["family"].items()
    }


def load_problem(source):
    """Parse a problem from a JSON string, dict, or file path."""
    if isinstance(source, dict):
        data = source
    else:
        text = source
        if "\n" not in str(source) and str(source).endswith(".json"):
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        data = json.loads(text)
    try:
        model = ProblemModel.model_validate(data)
    except ValidationError as err:
        raise SchemaError(f"problem file failed schema validation: {err}") from err
    return Problem(model)
