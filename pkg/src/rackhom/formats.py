"""
Input formats for racks, groups and modules
JSON files and the `builtin:` / module shorthands used on the command line.
"""

import json
import re
from pathlib import Path
from typing import Any, Dict, List, Optional

from .abgroup import FgAbGroup, IntMatrix, parse_group
from .errors import ParseError, PreconditionError, ShapeError
from .rack import RackTable, builtin
from .rmod import CONSTRUCTORS, RackModule, Variance, explicit
from .utils import get_logger

logger = get_logger(__name__)

_BUILTIN = re.compile(r"^(trivial|dihedral|cyclic|alexander|conjS)(\d+(?:,-?\d+)*)$")
_MODULE = re.compile(r"^(?:(left|right):)?(?:trivial-(.+)|alexander(\d+),(-?\d+)|dihedral(\d+))$")


def load_json(path) -> Any:
    """Read a JSON file, mapping every failure to ParseError"""
    path = Path(path)
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except FileNotFoundError:
        raise ParseError(f"File not found: {path}")
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"Couldn't read {path}: {e}")


def parse_builtin(text: str) -> RackTable:
    """dihedral3, trivial1, cyclic4, alexander5,2, conjS3"""
    match = _BUILTIN.match(text.strip())
    if not match:
        raise ParseError(f"Unknown builtin rack {text!r}")
    kind, params = match.group(1), [int(p) for p in match.group(2).split(",")]
    return builtin("conj" if kind == "conjS" else kind, *params)


def rack_from_dict(data: Dict) -> RackTable:
    if not isinstance(data, dict):
        raise ParseError("Rack JSON must be an object")
    if "builtin" in data:
        kind = data["builtin"]
        keys = {"alexander": ("m", "t"), "conj": ("k",)}.get(kind, ("n",))
        try:
            params = [int(data[k]) for k in keys]
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"Builtin {kind!r} needs integer parameters {', '.join(keys)}")
        return builtin(kind, *params)
    return RackTable.from_dict(data)


def parse_rack_source(source: str) -> RackTable:
    """`builtin:<shorthand>` or a path to a rack JSON file"""
    if source.startswith("builtin:"):
        return parse_builtin(source[len("builtin:"):])
    return rack_from_dict(load_json(source))


def group_from_dict(data) -> FgAbGroup:
    """{"gens": g, "rels": [[...], ...]} with relator columns, or a string such as "Z/3" """
    if isinstance(data, str):
        return parse_group(data)
    try:
        gens = int(data["gens"])
        rels = [[int(v) for v in col] for col in data.get("rels", [])]
    except (KeyError, TypeError, ValueError):
        raise ParseError(f"Malformed group {data!r}")
    try:
        return FgAbGroup.from_relator_columns(gens, rels)
    except ShapeError as e:
        raise ParseError(f"Malformed group {data!r}: {e}")


def group_to_dict(group: FgAbGroup) -> Dict:
    return {"gens": group.gens, "rels": [list(c) for c in group.rels.columns()]}


def _matrix(rows, source: FgAbGroup, target: FgAbGroup) -> IntMatrix:
    try:
        if not rows and target.gens == 0:
            return IntMatrix.zeros(0, source.gens)
        return IntMatrix.from_rows(rows, source.gens)
    except (ShapeError, TypeError, ValueError) as e:
        raise ParseError(f"Malformed structure matrix {rows!r}: {e}")


def module_from_dict(data: Dict, rack: RackTable, variance: Optional[Variance] = None) -> RackModule:
    """Module JSON; the file's own variance wins over the requested one for explicit data"""
    if not isinstance(data, dict):
        raise ParseError("Module JSON must be an object")
    declared = data.get("variance")
    if declared is not None and declared not in ("left", "right"):
        raise ParseError(f"Unknown variance {declared!r}")
    kind = data.get("kind", "explicit")
    if kind != "explicit":
        want = variance or Variance(declared or "left")
        factory = CONSTRUCTORS.get((kind, want))
        if factory is None:
            raise ParseError(f"Unknown module kind {kind!r}")
        try:
            if kind == "trivial":
                return factory(rack, group_from_dict(data.get("group", "Z")))
            if kind == "alexander":
                return factory(rack, int(data["m"]), int(data["t"]))
            return factory(rack, int(data["m"]))
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"Module kind {kind!r} is missing integer parameters")

    if declared is None:
        raise ParseError("Explicit modules must declare their variance")
    var = Variance(declared)
    try:
        groups = [group_from_dict(g) for g in data["groups"]]
        raw_phi, raw_psi = data["phi"], data["psi"]
    except (KeyError, TypeError):
        raise ParseError("Explicit modules need 'groups', 'phi' and 'psi'")
    n = rack.order
    if len(groups) != n or len(raw_phi) != n or len(raw_psi) != n:
        raise ParseError(f"Explicit module needs {n} groups and {n} rows of phi and psi")
    left = var is Variance.LEFT
    phi: List[List[IntMatrix]] = []
    psi: List[List[IntMatrix]] = []
    for x in range(n):
        phi_row, psi_row = [], []
        for y in range(n):
            xy = rack.op(x, y)
            src, dst = (groups[x], groups[xy]) if left else (groups[xy], groups[x])
            phi_row.append(_matrix(raw_phi[x][y], src, dst))
            yx = rack.op(y, x)
            src, dst = (groups[x], groups[yx]) if left else (groups[yx], groups[x])
            psi_row.append(_matrix(raw_psi[x][y], src, dst))
        phi.append(phi_row)
        psi.append(psi_row)
    try:
        return explicit(rack, var, groups, phi, psi)
    except ShapeError as e:
        raise ParseError(f"Explicit module has inconsistent shapes: {e}")


def module_to_dict(module: RackModule) -> Dict:
    """Explicit form of any module; module_from_dict reproduces it exactly"""
    n = module.rack.order
    return {
        "variance": module.variance.value,
        "kind": "explicit",
        "groups": [group_to_dict(g) for g in module.groups],
        "phi": [[module.phi[x][y].matrix.to_rows() for y in range(n)] for x in range(n)],
        "psi": [[module.psi[x][y].matrix.to_rows() for y in range(n)] for x in range(n)],
    }


def parse_module_source(source: str, rack: RackTable, variance: Variance) -> RackModule:
    """Shorthand (trivial-Z, trivial-Z/3, alexander3,2, dihedral5, optionally prefixed
    with left: or right:) or a path to a module JSON file"""
    match = _MODULE.match(source.strip())
    if match:
        prefix, group, m, t, dm = match.groups()
        want = Variance(prefix) if prefix else variance
        if group is not None:
            return CONSTRUCTORS[("trivial", want)](rack, parse_group(group))
        if m is not None:
            return CONSTRUCTORS[("alexander", want)](rack, int(m), int(t))
        return CONSTRUCTORS[("dihedral", want)](rack, int(dm))
    if not Path(source).exists() and not source.endswith(".json"):
        raise ParseError(f"Unknown module {source!r}")
    return module_from_dict(load_json(source), rack, variance)


def require_variance(module: RackModule, variance: Variance) -> RackModule:
    """Return module in the wanted variance, via the same constructor when it differs"""
    from .rmod import counterpart

    if module.variance is variance:
        return module
    other = counterpart(module)
    if other is None:
        raise PreconditionError(
            f"Need a {variance.value} module; explicit {module.variance.value} data cannot be converted"
        )
    logger.info(f"Using the {variance.value} {module.kind} module in place of the {module.variance.value} one")
    return other
