"""
Result payloads and text rendering
Every command builds a JSON-native dict; text output is rendered from that dict
alone, so rendering the parsed JSON gives the same text.
"""

import json
from typing import Dict, List, Optional

from .abgroup import FgAbGroup, format_invariants
from .homology import HomologyResult
from .oracles import RankReport, ZIndependenceReport
from .rack import AxiomReport, RackTable, is_connected, orbits
from .rmod import ModuleReport, RackModule
from .tensor import CollapseReport, TensorGroup


def group_dict(group: FgAbGroup) -> Dict:
    free, torsion = group.invariants
    return {"free": free, "torsion": list(torsion)}


def _group_text(data: Dict) -> str:
    return format_invariants(data["free"], data["torsion"])


def validate_payload(source: str, report: AxiomReport, rack: Optional[RackTable] = None) -> Dict:
    payload = {"command": "validate", "source": source, "valid": report.ok}
    if rack is not None:
        payload.update(order=rack.order, quandle=rack.is_quandle, orbits=len(orbits(rack)))
    else:
        payload.update(axiom=report.axiom, witness=list(report.witness), message=report.message)
    return payload


def info_payload(rack: RackTable) -> Dict:
    return {
        "command": "info",
        "rack": str(rack),
        "order": rack.order,
        "quandle": rack.is_quandle,
        "connected": is_connected(rack),
        "orbits": orbits(rack),
        "table": [list(row) for row in rack.table],
        "inverted": [list(row) for row in rack.inverse_table],
    }


def homology_payload(result: HomologyResult, oracle: Optional[RankReport] = None) -> Dict:
    payload = {"command": result.metadata.get("direction", "homology")}
    payload.update(result.to_dict())
    if oracle is not None:
        payload["oracle"] = {
            "kind": "ranks",
            "ok": oracle.ok,
            "rows": [
                {"n": r.degree, "p": r.prime, "predicted": r.predicted, "snf": r.from_snf}
                for r in oracle.rows
            ],
        }
    return payload


def ext_payload(rack: RackTable, module: RackModule, group: FgAbGroup,
                oracle: Optional[tuple] = None) -> Dict:
    payload = {
        "command": "ext",
        "metadata": {"rack": str(rack), "module": module.describe()},
        "ext": group_dict(group),
    }
    if oracle is not None:
        cocycles, coboundaries, order = oracle
        payload["oracle"] = {
            "kind": "factor-sets",
            "cocycles": cocycles,
            "coboundaries": coboundaries,
            "order": order,
            "ok": group.is_finite() and group.order() == order,
        }
    return payload


def derivations_payload(rack: RackTable, module: RackModule, z: int, der: FgAbGroup,
                        pder: FgAbGroup, h1: FgAbGroup) -> Dict:
    return {
        "command": "derivations",
        "metadata": {"rack": str(rack), "module": module.describe(), "z": z},
        "der": group_dict(der),
        "pder": group_dict(pder),
        "h1": group_dict(h1),
    }


def tensor_payload(a: RackModule, b: RackModule, product: TensorGroup) -> Dict:
    return {
        "command": "tensor",
        "metadata": {"rack": str(a.rack), "a": a.describe(), "b": b.describe()},
        "generators": len(product.labels),
        "tensor": group_dict(product.group),
    }


def module_check_payload(module: RackModule, report: ModuleReport,
                         collapse: Optional[CollapseReport] = None) -> Dict:
    payload = {
        "command": "check-module",
        "metadata": {"rack": str(module.rack), "module": module.describe()},
        "ok": report.ok,
        "checked": list(report.checked),
        "failures": [
            {"axiom": f.axiom, "witness": list(f.witness), "message": f.message}
            for f in report.failures
        ],
    }
    if collapse is not None:
        payload["collapse"] = {
            "ok": collapse.ok,
            "word_length": collapse.word_length,
            "quandle": collapse.quandle,
            "groups": list(collapse.groups),
            "failures": list(collapse.failures),
        }
        payload["ok"] = report.ok and collapse.ok
    return payload


def z_independence_payload(rack: RackTable, module: RackModule, report: ZIndependenceReport) -> Dict:
    return {
        "command": "z-independence",
        "metadata": {"rack": str(rack), "module": module.describe()},
        "cohomology": {str(z): list(v) for z, v in report.cohomology.items()},
        "homology": {str(z): list(v) for z, v in report.homology.items()},
        "cohomology_independent": report.cohomology_independent,
        "homology_independent": report.homology_independent,
    }


def render_json(payload: Dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _render_validate(p: Dict) -> List[str]:
    if not p["valid"]:
        return [f"{p['source']}: invalid ({p['message']})"]
    kind = "quandle" if p["quandle"] else "rack"
    noun = "orbit" if p["orbits"] == 1 else "orbits"
    return [f"{p['source']}: valid {kind}, {p['orbits']} {noun} (order {p['order']})"]


def _render_info(p: Dict) -> List[str]:
    lines = [
        f"{p['rack']}: order {p['order']}, {'quandle' if p['quandle'] else 'rack'}, "
        f"{'connected' if p['connected'] else 'not connected'}",
        "orbits: " + " ".join("{" + ",".join(map(str, o)) + "}" for o in p["orbits"]),
        "table (row a, column b holds a^b):",
    ]
    width = len(str(p["order"] - 1))
    lines.extend("  " + " ".join(str(v).rjust(width) for v in row) for row in p["table"])
    lines.append("inverted table (row a, column b holds a^{b-bar}):")
    lines.extend("  " + " ".join(str(v).rjust(width) for v in row) for row in p["inverted"])
    return lines


def _render_homology(p: Dict) -> List[str]:
    meta = p["metadata"]
    cohomology = "H^" in p
    lines = [f"{meta['theory']} {meta['direction']} of {meta['rack']} with {meta['module']}, z = {meta['z']}"]
    for d in p["H^" if cohomology else "H"]:
        symbol = f"H^{d['n']}" if cohomology else f"H_{d['n']}"
        lines.append(f"  {symbol} = {_group_text(d)}")
    if "oracle" in p:
        bad = [r for r in p["oracle"]["rows"] if r["predicted"] != r["snf"]]
        lines.append(f"rank oracle: {_verdict(p['oracle']['ok'])} ({len(p['oracle']['rows'])} checks)")
        for r in bad:
            field = "Q" if r["p"] == 0 else f"GF({r['p']})"
            lines.append(f"  degree {r['n']} over {field}: ranks give {r['predicted']}, SNF gives {r['snf']}")
    return lines


def _render_ext(p: Dict) -> List[str]:
    lines = [f"Ext({p['metadata']['rack']}, {p['metadata']['module']}) = {_group_text(p['ext'])}"]
    if "oracle" in p:
        o = p["oracle"]
        lines.append(
            f"factor-set oracle: |Z| = {o['cocycles']}, |B| = {o['coboundaries']}, "
            f"order {o['order']} {_verdict(o['ok'])}"
        )
    return lines


def _render_derivations(p: Dict) -> List[str]:
    meta = p["metadata"]
    return [
        f"derivations over {meta['rack']} with {meta['module']}, z = {meta['z']}",
        f"  Der  = {_group_text(p['der'])}",
        f"  PDer = {_group_text(p['pder'])}",
        f"  H^1  = {_group_text(p['h1'])}",
    ]


def _render_tensor(p: Dict) -> List[str]:
    meta = p["metadata"]
    return [
        f"A = {meta['a']}",
        f"B = {meta['b']}",
        f"A (x)_X B = {_group_text(p['tensor'])} ({p['generators']} generators)",
    ]


def _render_check_module(p: Dict) -> List[str]:
    lines = [f"{p['metadata']['module']}: {_verdict(p['ok'])}"]
    lines.append(f"  checked: {', '.join(p['checked'])}")
    for f in p["failures"]:
        lines.append(f"  {f['axiom']} at {tuple(f['witness'])}: {f['message']}")
    if "collapse" in p:
        c = p["collapse"]
        mode = ", quandle" if c.get("quandle") else ""
        lines.append(f"  collapse (words <= {c['word_length']}{mode}): {_verdict(c['ok'])}")
        lines.extend(f"    {g}" for g in c["groups"])
        lines.extend(f"    {f}" for f in c["failures"])
    return lines


def _render_z_independence(p: Dict) -> List[str]:
    meta = p["metadata"]
    lines = [f"base-point check over {meta['rack']} with {meta['module']}"]
    for z, groups in sorted(p["cohomology"].items(), key=lambda kv: int(kv[0])):
        lines.append(f"  z = {z}: H^1 = {groups[0]}")
    for z, groups in sorted(p["homology"].items(), key=lambda kv: int(kv[0])):
        lines.append(f"  z = {z}: " + ", ".join(f"H_{k} = {g}" for k, g in enumerate(groups, start=1)))
    lines.append(f"cohomology independent of z: {'yes' if p['cohomology_independent'] else 'no'}")
    if p["homology"]:
        lines.append(f"homology independent of z: {'yes' if p['homology_independent'] else 'no'}")
    return lines


_RENDERERS = {
    "validate": _render_validate,
    "info": _render_info,
    "homology": _render_homology,
    "cohomology": _render_homology,
    "ext": _render_ext,
    "derivations": _render_derivations,
    "tensor": _render_tensor,
    "check-module": _render_check_module,
    "z-independence": _render_z_independence,
}


def render_text(payload: Dict) -> str:
    return "\n".join(_RENDERERS[payload["command"]](payload))
