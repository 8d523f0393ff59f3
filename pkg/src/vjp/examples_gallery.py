"""Built-in problem documents (the worked examples shipped with the tool).

Each function returns a plain dict conforming to vjp-schema-1; the CLI
fixtures under problems/ are these documents serialized. Keeping them in
code lets the test suite and the shipped files never drift apart.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction


def free_particle():
    return {
        "schema": "vjp-schema-1",
        "title": "free particle on the line",
        "space": {"base": ["t"], "fields": ["u"], "order": 1},
        "seed": 7,
        "atlas": {"charts": [{"id": "main"}]},
        "lagrangian": {"main": "1/2*u_t^2"},
        "symmetries": [
            {"id": "shift", "base": ["0"], "fiber": ["1"]},
            {"id": "time", "base": ["1"], "fiber": ["0"]},
            {"id": "boost", "base": ["0"], "fiber": ["t"]},
        ],
        "sections": [
            {"id": "line", "components": ["1 + 2*t"], "box": [[0.0, 10.0]], "grid": 64},
            {"id": "curved", "components": ["t^2"], "box": [[0.0, 10.0]], "grid": 64},
        ],
        "bundle": {"kind": "vector"},
        "conservation": {
            "initial_position": [0.3],
            "initial_velocity": [1.7],
            "t_span": [0.0, 10.0],
            "step": 1e-3,
        },
    }


def wave_single_chart():
    return {
        "schema": "vjp-schema-1",
        "title": "wave equation on a single chart",
        "space": {"base": ["t", "x"], "fields": ["u"], "order": 1},
        "seed": 7,
        "atlas": {"charts": [{"id": "main"}]},
        "lagrangian": {"main": "1/2*u_t^2 - 1/2*u_x^2"},
        "symmetries": [{"id": "shift", "base": ["0", "0"], "fiber": ["1"]}],
        "bundle": {"kind": "vector"},
    }


def nonvariational_flow():
    return {
        "schema": "vjp-schema-1",
        "title": "first-order flow u_t (not locally variational)",
        "space": {"base": ["t"], "fields": ["u"], "order": 1},
        "seed": 7,
        "atlas": {"charts": [{"id": "main"}]},
        "source_form": {"main": ["u_t"]},
    }


def monopole(g="1", three_charts=False):
    """Charged particle on the unit sphere around a magnetic pole.

    Stereographic charts N/S with the orientation-compatible transition
    u' = u/(u^2+v^2), v' = -v/(u^2+v^2); the chart angle flips with v, so
    the vector-potential term reads the same on both charts and the gauge
    difference carries the full winding. The refined atlas adds an
    equatorial band chart in the N coordinates.
    """
    P = "(1+u^2+v^2)"
    lag = f"2*(u_t^2 + v_t^2)/{P}^2 + 2*g*(u*v_t - v*u_t)/{P}"
    inversion = {"t": "t", "u": "u/(u^2+v^2)", "v": "-v/(u^2+v^2)"}
    identity = {"t": "t", "u": "u", "v": "v"}
    charts = [{"id": "N"}, {"id": "S"}]
    overlaps = [
        {"from": "N", "to": "S", "map": inversion},
        {"from": "S", "to": "N", "map": inversion},
    ]
    triples = []
    if three_charts:
        charts.append({"id": "E"})
        overlaps += [
            {"from": "N", "to": "E", "map": identity},
            {"from": "E", "to": "N", "map": identity},
            {"from": "E", "to": "S", "map": inversion},
            {"from": "S", "to": "E", "map": inversion},
        ]
        triples = [["N", "E", "S"]]
    chart_ids = [c["id"] for c in charts]

    curvature = [{"legs": ["du", "dv"], "coeff": f"4*g/{P}^2"}]
    kinetic = f"2*(u_t^2 + v_t^2)/{P}^2"

    # closed orbit at radius 1/2: angular rate w = g*(1+R^2)/(R^2-1) = -5g/3
    w = Fraction(g) * Fraction(-5, 3)
    wtxt = f"({w.numerator}/{w.denominator})"
    section_N = [f"1/2*cos({wtxt}*t)", f"1/2*sin({wtxt}*t)"]
    section_S = [f"2*cos({wtxt}*t)", f"-2*sin({wtxt}*t)"]
    sections = {"N": section_N, "S": section_S}
    rotation_fiber = {"N": ["-v", "u"], "S": ["v", "-u"]}
    if three_charts:
        sections["E"] = section_N
        rotation_fiber["E"] = ["-v", "u"]

    polar = {"t": "0", "u": "s1*cos(2*pi*s2)", "v": "s1*sin(2*pi*s2)"}
    if not three_charts:
        cycle = {
            "id": "sphere",
            "dim": 2,
            "target": "Y",
            "legs": [{"chart": "N", "map": polar}, {"chart": "S", "map": polar}],
            "faces": [
                {
                    "leg_a": 0,
                    "face_a": [1, 1],
                    "leg_b": 1,
                    "face_b": [1, 1],
                    "param_map": ["1 - s1"],
                }
            ],
        }
    else:
        half_disk = {
            "t": "0",
            "u": "(1/2)*s1*cos(2*pi*s2)",
            "v": "(1/2)*s1*sin(2*pi*s2)",
        }
        band = {
            "t": "0",
            "u": "(1/2 + 3/2*s1)*cos(2*pi*s2)",
            "v": "(1/2 + 3/2*s1)*sin(2*pi*s2)",
        }
        cycle = {
            "id": "sphere",
            "dim": 2,
            "target": "Y",
            "legs": [
                {"chart": "N", "map": half_disk},
                {"chart": "E", "map": band},
                {"chart": "S", "map": half_disk},
            ],
            "faces": [
                {"leg_a": 0, "face_a": [1, 1], "leg_b": 1, "face_b": [1, 0]},
                {
                    "leg_a": 1,
                    "face_a": [1, 1],
                    "leg_b": 2,
                    "face_b": [1, 1],
                    "param_map": ["1 - s1"],
                },
            ],
        }

    return {
        "schema": "vjp-schema-1",
        "title": f"magnetic pole on the sphere (charge {g})",
        "space": {"base": ["t"], "fields": ["u", "v"], "order": 1},
        "seed": 11,
        "constants": {"g": {"rational": g}},
        "atlas": {"charts": charts, "overlaps": overlaps, "triples": triples},
        "lagrangian": {cid: lag for cid in chart_ids},
        "symmetries": [
            {
                "id": "rotation",
                "base": {cid: ["0"] for cid in chart_ids},
                "fiber": rotation_fiber,
            }
        ],
        "sections": [
            {
                "id": "orbit",
                "components": sections,
                "homotopy_class": "equatorial-orbit",
                "box": [[0.0, 10.0]],
                "grid": 80,
            }
        ],
        "cycles": [cycle],
        "representatives": {
            "delta": {
                "forms": {cid: curvature for cid in chart_ids},
                "remainder_lagrangian": {cid: kinetic for cid in chart_ids},
            }
        },
        "bundle": {"kind": "product", "base_betti": [1, 0], "fiber_betti": [1, 0, 1]},
        "conservation": {
            "initial_position": [0.5, 0.0],
            "initial_velocity": [0.0, 0.4],
            "t_span": [0.0, 10.0],
            "step": 1e-3,
        },
    }


def torus_winding():
    """Angle-valued field over the circle with a real partner field.

    Y = S^1 x S^1 x R over X = S^1, lambda = 1/2 u_x^2 + v*u_x (global).
    Shifting v is an equation-only symmetry whose contraction with the
    source form is u_x dx: its class is the fiber-angle form du, nonzero on
    winding cycles. Solutions have constant u, so sections of winding 1
    cannot be critical; the pullback periods separate the two homotopy
    classes by exactly 2*pi.

    Both circles carry three overlapping arcs (pairwise overlaps connected);
    chart C{k}{l} is base arc k times fiber arc l, transitions are shifts by
    0 or 2*pi per factor.
    """
    lag = "1/2*u_x^2 + v*u_x"
    charts = [
        {"id": f"C{k}{l}"} for k, l in itertools.product(range(3), range(3))
    ]
    chart_ids = [c["id"] for c in charts]

    def offset(a, b):
        if (a, b) == (2, 0):
            return "-2*pi"
        if (a, b) == (0, 2):
            return "2*pi"
        return "0"

    overlaps = []
    for (k1, l1), (k2, l2) in itertools.permutations(
        itertools.product(range(3), range(3)), 2
    ):
        xoff = offset(k1, k2)
        uoff = offset(l1, l2)
        overlaps.append(
            {
                "from": f"C{k1}{l1}",
                "to": f"C{k2}{l2}",
                "map": {
                    "x": "x" if xoff == "0" else f"x + ({xoff})",
                    "u": "u" if uoff == "0" else f"u + ({uoff})",
                    "v": "v",
                },
            }
        )
    # declared triples must have nonempty intersection: two arc factors may
    # repeat, three distinct arcs never meet
    triples = [["C00", "C01", "C10"], ["C00", "C10", "C11"]]

    # winding-0 section: constant angle 1/2, lives on the l=0 fiber arc
    winding0 = {f"C{k}0": ["1/2", "0"] for k in range(3)}
    # winding-1 section u = x, lives on the diagonal charts
    winding1 = {f"C{k}{k}": ["x", "0"] for k in range(3)}

    du_form = [{"legs": ["du"], "coeff": "1"}]
    fiber_loop_legs = [
        {
            "chart": f"C{k}{k}",
            "map": {
                "x": f"2*pi*({k} + s1)/3",
                "u": f"2*pi*({k} + s1)/3",
                "v": "0",
            },
        }
        for k in range(3)
    ]
    base_loop_legs = [
        {"chart": f"C{k}{k}", "map": {"x": f"2*pi*({k} + s1)/3"}} for k in range(3)
    ]

    def loop_faces(n_legs):
        return [
            {
                "leg_a": a,
                "face_a": [1, 1],
                "leg_b": (a + 1) % n_legs,
                "face_b": [1, 0],
            }
            for a in range(n_legs)
        ]

    return {
        "schema": "vjp-schema-1",
        "title": "angle field over the circle (winding obstruction)",
        "space": {"base": ["x"], "fields": ["u", "v"], "order": 1},
        "seed": 13,
        "atlas": {"charts": charts, "overlaps": overlaps, "triples": triples},
        "lagrangian": {cid: lag for cid in chart_ids},
        "symmetries": [
            {
                "id": "v-shift",
                "base": {cid: ["0"] for cid in chart_ids},
                "fiber": {cid: ["0", "1"] for cid in chart_ids},
            }
        ],
        "sections": [
            {
                "id": "winding0",
                "components": winding0,
                "homotopy_class": "winding-0",
                "box": [[0.1, 1.9]],
                "grid": 48,
            },
            {
                "id": "winding1",
                "components": winding1,
                "homotopy_class": "winding-1",
                "homotopy": {
                    "param": "h",
                    "components": {f"C{k}{k}": ["x + h", "0"] for k in range(3)},
                },
                "box": [[0.1, 1.9]],
                "grid": 48,
            },
        ],
        "cycles": [
            {
                "id": "lifted-fiber-loop",
                "dim": 1,
                "target": "Y",
                "legs": fiber_loop_legs,
                "faces": loop_faces(3),
            },
            {
                "id": "base-loop",
                "dim": 1,
                "target": "X",
                "legs": base_loop_legs,
                "faces": loop_faces(3),
            },
        ],
        "representatives": {
            "delta_prime": {"forms": {cid: du_form for cid in chart_ids}}
        },
        "bundle": {"kind": "product", "base_betti": [1, 1], "fiber_betti": [1, 1]},
    }


def chern_simons_kind():
    """Abelian Chern-Simons-flavoured problem on a contractible chart.

    First-order antisymmetric Lagrangian in three fields over R^3; the
    configuration bundle is affine, so the cohomology isomorphism holds and
    a flat critical section forces global conserved currents.
    """
    L = "A1*(A3_y - A2_z) + A2*(A1_z - A3_x) + A3*(A2_x - A1_y)"
    return {
        "schema": "vjp-schema-1",
        "title": "abelian Chern-Simons flavour on R^3",
        "space": {"base": ["x", "y", "z"], "fields": ["A1", "A2", "A3"], "order": 1},
        "seed": 19,
        "atlas": {"charts": [{"id": "main"}]},
        "lagrangian": {"main": L},
        "symmetries": [
            {"id": "shift-A1", "base": ["0", "0", "0"], "fiber": ["1", "0", "0"]}
        ],
        "sections": [
            {
                "id": "flat",
                "components": ["0", "0", "0"],
                "box": [[0.0, 1.0], [0.0, 1.0], [0.0, 1.0]],
                "grid": 12,
            }
        ],
        "bundle": {"kind": "affine"},
    }


def gauge_strip():
    """Free planar particle with a gauge-dressed two-chart presentation.

    The charts split the plane by the first fiber coordinate with a simply
    connected overlap strip, so the coboundary potential exists and the
    partition-of-unity collation path is exercised; the class is trivial.
    """
    kinetic = "1/2*(u_t^2 + v_t^2)"
    return {
        "schema": "vjp-schema-1",
        "title": "gauge-dressed free particle on two strip charts",
        "space": {"base": ["t"], "fields": ["u", "v"], "order": 1},
        "seed": 23,
        "atlas": {
            "charts": [{"id": "P"}, {"id": "M"}],
            "overlaps": [
                {"from": "P", "to": "M", "map": {"t": "t", "u": "u", "v": "v"}},
                {"from": "M", "to": "P", "map": {"t": "t", "u": "u", "v": "v"}},
            ],
        },
        "lagrangian": {
            "P": kinetic,
            "M": f"{kinetic} + u_t*v + u*v_t",
        },
        "symmetries": [
            {
                "id": "u-shift",
                "base": {"P": ["0"], "M": ["0"]},
                "fiber": {"P": ["1", "0"], "M": ["1", "0"]},
            }
        ],
        "partition_of_unity": {
            "P": "(1-u)^2/((1-u)^2 + (1+u)^2)",
            "M": "(1+u)^2/((1-u)^2 + (1+u)^2)",
        },
        "bundle": {"kind": "vector"},
        "conservation": {
            "initial_position": [0.1, 0.2],
            "initial_velocity": [0.5, -0.3],
        },
    }


GALLERY = {
    "free_particle": free_particle,
    "wave_single_chart": wave_single_chart,
    "nonvariational_flow": nonvariational_flow,
    "monopole_g1": lambda: monopole("1"),
    "monopole_g2": lambda: monopole("2"),
    "monopole_ghalf": lambda: monopole("1/2"),
    "monopole_g1_refined": lambda: monopole("1", three_charts=True),
    "torus_winding": torus_winding,
    "chern_simons_kind": chern_simons_kind,
    "gauge_strip": gauge_strip,
}


def write_all(directory):
    import os

    os.makedirs(directory, exist_ok=True)
    for name, builder in GALLERY.items():
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(builder(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return sorted(GALLERY)


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "problems"
    for name in write_all(target):
        print(name)
