"""
Rack and quandle modules
Left and right X-modules, their axiom checks, the scalar constructors and the
equivalence between left modules over X and right modules over X*.

Index conventions:
  left   phi[x][y]: A_x -> A_{x^y}     psi[y][x]: A_y -> A_{x^y}
  right  phi[x][y]: A_{x^y} -> A_x     psi[y][x]: A_{x^y} -> A_y
"""

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .abgroup import (
    FgAbGroup, GroupHom, IntMatrix, add, check_hom, compose, format_group, homs_equal, is_iso,
)
from .errors import ModuleAxiomError, PreconditionError, ShapeError, VarianceMismatchError
from .rack import RackTable, invert
from .utils import get_logger

logger = get_logger(__name__)

HomTable = Tuple[Tuple[GroupHom, ...], ...]


class Variance(Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def opposite(self) -> "Variance":
        return Variance.RIGHT if self is Variance.LEFT else Variance.LEFT


@dataclass(frozen=True)
class ModuleFailure:
    axiom: str
    witness: Tuple[int, ...]
    message: str


@dataclass
class ModuleReport:
    """Failures found by a module or module-hom check; empty means pass"""
    checked: List[str] = field(default_factory=list)
    failures: List[ModuleFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, axiom: str, witness: Tuple[int, ...], message: str):
        self.failures.append(ModuleFailure(axiom, witness, message))

    def merge(self, other: "ModuleReport") -> "ModuleReport":
        self.checked.extend(c for c in other.checked if c not in self.checked)
        self.failures.extend(other.failures)
        return self

    def summary(self) -> str:
        if self.ok:
            return f"PASS ({', '.join(self.checked)})"
        first = self.failures[0]
        return f"FAIL {first.axiom} at {first.witness}: {first.message} ({len(self.failures)} failures)"


@dataclass(frozen=True)
class RackModule:
    """An X-module: one presented group per element plus phi/psi structure maps"""
    rack: RackTable
    groups: Tuple[FgAbGroup, ...]
    phi: HomTable
    psi: HomTable
    kind: str = field(default="explicit", compare=False)
    params: Tuple[int, ...] = field(default=(), compare=False)

    variance = None

    def group(self, x: int) -> FgAbGroup:
        return self.groups[x]

    def describe(self) -> str:
        label = self.kind if not self.params else f"{self.kind}{','.join(map(str, self.params))}"
        groups = sorted({format_group(g) for g in self.groups})
        return f"{self.variance.value} {label} module over {self.rack} ({' | '.join(groups)})"


class LeftModule(RackModule):
    variance = Variance.LEFT


class RightModule(RackModule):
    variance = Variance.RIGHT


def _check_shapes(module: RackModule):
    rack, groups = module.rack, module.groups
    n = rack.order
    if len(groups) != n or len(module.phi) != n or len(module.psi) != n:
        raise ShapeError(f"Module data must have one entry per element of a rack of order {n}")
    left = module.variance is Variance.LEFT
    for x in range(n):
        if len(module.phi[x]) != n or len(module.psi[x]) != n:
            raise ShapeError(f"Structure map row {x} must have {n} entries")
    for x in range(n):
        for y in range(n):
            xy = rack.op(x, y)
            f, g = module.phi[x][y], module.psi[y][x]
            want_phi = (groups[x], groups[xy]) if left else (groups[xy], groups[x])
            want_psi = (groups[y], groups[xy]) if left else (groups[xy], groups[y])
            if (f.source, f.target) != want_phi:
                raise ShapeError(f"phi[{x}][{y}] has the wrong source or target")
            if (g.source, g.target) != want_psi:
                raise ShapeError(f"psi[{y}][{x}] has the wrong source or target")


def _check_homs(module: RackModule, report: ModuleReport):
    n = module.rack.order
    report.checked.append("homs")
    for x in range(n):
        for y in range(n):
            if not check_hom(module.phi[x][y]).ok:
                report.fail("hom", (x, y), f"phi[{x}][{y}] is not well defined")
            if not check_hom(module.psi[y][x]).ok:
                report.fail("hom", (y, x), f"psi[{y}][{x}] is not well defined")
    if not report.ok:
        return
    report.checked.append("iso")
    for x in range(n):
        for y in range(n):
            if not is_iso(module.phi[x][y]):
                report.fail("iso", (x, y), f"phi[{x}][{y}] is not an isomorphism")


def check_left(module: RackModule) -> ModuleReport:
    """Hom, iso, both squares and the psi expansion identity for a left module"""
    if module.variance is not Variance.LEFT:
        raise VarianceMismatchError("check_left needs a left module")
    _check_shapes(module)
    report = ModuleReport()
    _check_homs(module, report)
    if not report.ok:
        return report
    X, phi, psi = module.rack, module.phi, module.psi
    n = X.order
    report.checked.extend(["square-phi", "square-psi", "psi-expansion"])
    for x in range(n):
        for y in range(n):
            xy = X.op(x, y)
            for z in range(n):
                xz, yz = X.op(x, z), X.op(y, z)
                lhs = compose(phi[xy][z], phi[x][y])
                rhs = compose(phi[xz][yz], phi[x][z])
                if not homs_equal(lhs, rhs):
                    report.fail("square-phi", (x, y, z), "phi_{x^y,z} phi_{x,y} != phi_{x^z,y^z} phi_{x,z}")
                lhs = compose(phi[xy][z], psi[y][x])
                rhs = compose(psi[yz][xz], phi[y][z])
                if not homs_equal(lhs, rhs):
                    report.fail("square-psi", (x, y, z), "phi_{x^y,z} psi_{y,x} != psi_{y^z,x^z} phi_{y,z}")
                lhs = psi[z][xy]
                rhs = add(compose(phi[xz][yz], psi[z][x]), compose(psi[yz][xz], psi[z][y]))
                if not homs_equal(lhs, rhs):
                    report.fail(
                        "psi-expansion", (x, y, z),
                        "psi_{z,x^y} != phi_{x^z,y^z} psi_{z,x} + psi_{y^z,x^z} psi_{z,y}",
                    )
    return report


def check_right(module: RackModule) -> ModuleReport:
    """Hom, iso, both squares and the psi expansion identity for a right module"""
    if module.variance is not Variance.RIGHT:
        raise VarianceMismatchError("check_right needs a right module")
    _check_shapes(module)
    report = ModuleReport()
    _check_homs(module, report)
    if not report.ok:
        return report
    X, phi, psi = module.rack, module.phi, module.psi
    n = X.order
    report.checked.extend(["square-phi", "square-psi", "psi-expansion"])
    for x in range(n):
        for y in range(n):
            xy = X.op(x, y)
            for z in range(n):
                xz, yz = X.op(x, z), X.op(y, z)
                lhs = compose(phi[x][y], phi[xy][z])
                rhs = compose(phi[x][z], phi[xz][yz])
                if not homs_equal(lhs, rhs):
                    report.fail("square-phi", (x, y, z), "phi^{x,y} phi^{x^y,z} != phi^{x,z} phi^{x^z,y^z}")
                lhs = compose(psi[y][x], phi[xy][z])
                rhs = compose(phi[y][z], psi[yz][xz])
                if not homs_equal(lhs, rhs):
                    report.fail("square-psi", (x, y, z), "psi^{y,x} phi^{x^y,z} != phi^{y,z} psi^{y^z,x^z}")
                lhs = psi[z][xy]
                rhs = add(compose(psi[z][x], phi[xz][yz]), compose(psi[z][y], psi[yz][xz]))
                if not homs_equal(lhs, rhs):
                    report.fail(
                        "psi-expansion", (x, y, z),
                        "psi^{z,x^y} != psi^{z,x} phi^{x^z,y^z} + psi^{z,y} psi^{y^z,x^z}",
                    )
    return report


def _check_quandle(module: RackModule) -> ModuleReport:
    if not module.rack.is_quandle:
        raise PreconditionError("Quandle condition needs a quandle as base rack")
    report = ModuleReport(checked=["quandle"])
    for x in range(module.rack.order):
        total = add(module.psi[x][x], module.phi[x][x])
        if not homs_equal(total, GroupHom.identity(module.groups[x])):
            report.fail("quandle", (x,), "psi_{x,x} + phi_{x,x} != id")
    return report


def check_quandle_left(module: RackModule) -> ModuleReport:
    if module.variance is not Variance.LEFT:
        raise VarianceMismatchError("check_quandle_left needs a left module")
    return _check_quandle(module)


def check_quandle_right(module: RackModule) -> ModuleReport:
    if module.variance is not Variance.RIGHT:
        raise VarianceMismatchError("check_quandle_right needs a right module")
    return _check_quandle(module)


def check_module(module: RackModule, quandle: Optional[bool] = None) -> ModuleReport:
    """Full check for either variance; the quandle condition is added on quandle bases"""
    left = module.variance is Variance.LEFT
    report = check_left(module) if left else check_right(module)
    if quandle is None:
        quandle = module.rack.is_quandle
    if quandle and report.ok:
        report.merge(check_quandle_left(module) if left else check_quandle_right(module))
    return report


def is_quandle_module(module: RackModule) -> bool:
    return module.rack.is_quandle and _check_quandle(module).ok


def _enforce(module: RackModule, quandle: bool = False) -> RackModule:
    report = check_module(module, quandle=quandle and module.rack.is_quandle)
    if not report.ok:
        logger.warning(f"Module rejected: {report.summary()}")
        raise ModuleAxiomError(f"Module data fails its axioms: {report.summary()}", report)
    return module


def _scalar_module(cls, rack: RackTable, group: FgAbGroup, phi: int, psi: int,
                   kind: str, params: Tuple[int, ...]) -> RackModule:
    n = rack.order
    phi_hom = GroupHom.scalar(group, phi)
    psi_hom = GroupHom.scalar(group, psi)
    module = cls(
        rack,
        tuple(group for _ in range(n)),
        tuple(tuple(phi_hom for _ in range(n)) for _ in range(n)),
        tuple(tuple(psi_hom for _ in range(n)) for _ in range(n)),
        kind=kind,
        params=params,
    )
    return _enforce(module, quandle=True)


def trivial_left(rack: RackTable, group: FgAbGroup) -> RackModule:
    return _scalar_module(LeftModule, rack, group, 1, 0, "trivial", ())


def trivial_right(rack: RackTable, group: FgAbGroup) -> RackModule:
    return _scalar_module(RightModule, rack, group, 1, 0, "trivial", ())


def _alexander_params(m: int, t: int) -> FgAbGroup:
    if m < 0 or m == 1:
        raise PreconditionError(f"Alexander module needs m = 0 or m >= 2, got {m}")
    if gcd(t, m) != 1:
        raise PreconditionError(f"Alexander module needs t a unit mod {m}, got t={t}")
    return FgAbGroup.cyclic(m)


def alexander_left(rack: RackTable, m: int, t: int) -> RackModule:
    """A_x = Z/m, phi = t, psi = 1 - t"""
    group = _alexander_params(m, t)
    return _scalar_module(LeftModule, rack, group, t, 1 - t, "alexander", (m, t))


def alexander_right(rack: RackTable, m: int, t: int) -> RackModule:
    group = _alexander_params(m, t)
    return _scalar_module(RightModule, rack, group, t, 1 - t, "alexander", (m, t))


def dihedral_left(rack: RackTable, m: int) -> RackModule:
    group = _alexander_params(m, -1)
    return _scalar_module(LeftModule, rack, group, -1, 2, "dihedral", (m,))


def dihedral_right(rack: RackTable, m: int) -> RackModule:
    group = _alexander_params(m, -1)
    return _scalar_module(RightModule, rack, group, -1, 2, "dihedral", (m,))


def explicit(rack: RackTable, variance: Variance, groups: Sequence[FgAbGroup],
             phi: Sequence[Sequence[IntMatrix]], psi: Sequence[Sequence[IntMatrix]]) -> RackModule:
    """Build a module from matrices (phi[x][y], psi[y][x]) and check every axiom"""
    n = rack.order
    left = variance is Variance.LEFT
    groups = tuple(groups)
    if len(groups) != n or len(phi) != n or len(psi) != n:
        raise ShapeError(f"Explicit module needs {n} groups and {n} rows of phi and psi")

    def hom(source, target, matrix):
        return GroupHom(source, target, matrix)

    phi_homs, psi_homs = [], []
    for x in range(n):
        if len(phi[x]) != n or len(psi[x]) != n:
            raise ShapeError(f"Structure map row {x} must have {n} entries")
        row_phi, row_psi = [], []
        for y in range(n):
            xy = rack.op(x, y)
            src, dst = (groups[x], groups[xy]) if left else (groups[xy], groups[x])
            row_phi.append(hom(src, dst, phi[x][y]))
        for k in range(n):
            # row x of psi holds psi[x][k]: A_x -> A_{k^x} (left) or A_{k^x} -> A_x (right)
            kx = rack.op(k, x)
            src, dst = (groups[x], groups[kx]) if left else (groups[kx], groups[x])
            row_psi.append(hom(src, dst, psi[x][k]))
        phi_homs.append(tuple(row_phi))
        psi_homs.append(tuple(row_psi))
    cls = LeftModule if left else RightModule
    module = cls(rack, groups, tuple(phi_homs), tuple(psi_homs))
    return _enforce(module)


CONSTRUCTORS: Dict[Tuple[str, Variance], Callable[..., RackModule]] = {
    ("trivial", Variance.LEFT): trivial_left,
    ("trivial", Variance.RIGHT): trivial_right,
    ("alexander", Variance.LEFT): alexander_left,
    ("alexander", Variance.RIGHT): alexander_right,
    ("dihedral", Variance.LEFT): dihedral_left,
    ("dihedral", Variance.RIGHT): dihedral_right,
}


def counterpart(module: RackModule) -> Optional[RackModule]:
    """Same constructor in the opposite variance over the same rack, or None for explicit data"""
    if (module.kind, module.variance) not in CONSTRUCTORS:
        return None
    factory = CONSTRUCTORS[(module.kind, module.variance.opposite)]
    if module.kind == "trivial":
        return factory(module.rack, module.groups[0])
    return factory(module.rack, *module.params)


def is_homogeneous(module: RackModule) -> bool:
    """All A_x share invariant factors"""
    return len({g.invariants for g in module.groups}) <= 1


def _omega_index(rack: RackTable, x: int, y: int) -> int:
    # y^{y x-bar y-bar}
    v = rack.act(y, [(y, 1), (x, -1), (y, -1)])
    assert rack.op(v, rack.op_inv(x, y)) == y
    return v


def to_right_over_inverted(module: RackModule) -> RackModule:
    """Left module over X -> right module over X*.

    B_{x*} = A_x, chi^{x*,y*} = phi_{x^{y-bar},y}, omega^{y*,x*} = psi_{x^{y-bar}, y^{y x-bar y-bar}}
    """
    if module.variance is not Variance.LEFT:
        raise VarianceMismatchError("to_right_over_inverted needs a left module")
    X = module.rack
    n = X.order
    star = invert(X)
    chi, omega = [], []
    for x in range(n):
        chi.append(tuple(module.phi[X.op_inv(x, y)][y] for y in range(n)))
    for y in range(n):
        omega.append(tuple(module.psi[X.op_inv(x, y)][_omega_index(X, x, y)] for x in range(n)))
    result = RightModule(star, module.groups, tuple(chi), tuple(omega),
                         kind=module.kind, params=module.params)
    return _enforce(result)


def to_left_over_inverted(module: RackModule) -> RackModule:
    """Right module over X* -> left module over X (inverse of to_right_over_inverted).

    phi_{x,y} = chi^{(x^y)*, y*}, psi_{y,x} = omega^{(x^y)*, q} with q = y^{x^y}
    """
    if module.variance is not Variance.RIGHT:
        raise VarianceMismatchError("to_left_over_inverted needs a right module")
    star = module.rack
    X = invert(star)
    n = X.order
    phi = []
    for x in range(n):
        phi.append(tuple(module.phi[X.op(x, y)][y] for y in range(n)))
    psi = [[None] * n for _ in range(n)]
    for y in range(n):
        for x in range(n):
            xy = X.op(x, y)
            # y^{y-bar x y} evaluated in X*, which is y^{x^y} in X
            q = star.act(y, [(y, 1), (x, -1), (y, -1)])
            psi[y][x] = module.psi[xy][q]
    result = LeftModule(X, module.groups, tuple(phi), tuple(tuple(r) for r in psi),
                        kind=module.kind, params=module.params)
    return _enforce(result)


@dataclass(frozen=True)
class ModuleHom:
    """A family f_x: A_x -> B_x between modules of the same variance over the same rack"""
    source: RackModule
    target: RackModule
    components: Tuple[GroupHom, ...]

    @classmethod
    def identity(cls, module: RackModule) -> "ModuleHom":
        return cls(module, module, tuple(GroupHom.identity(g) for g in module.groups))

    @classmethod
    def zero(cls, source: RackModule, target: RackModule) -> "ModuleHom":
        return cls(source, target, tuple(
            GroupHom.zero(a, b) for a, b in zip(source.groups, target.groups)
        ))

    @classmethod
    def scalar(cls, module: RackModule, c: int) -> "ModuleHom":
        return cls(module, module, tuple(GroupHom.scalar(g, c) for g in module.groups))


def check_module_hom(h: ModuleHom) -> ModuleReport:
    """Naturality squares against phi and psi for all pairs"""
    src, dst = h.source, h.target
    if src.variance is not dst.variance:
        raise VarianceMismatchError("Module hom endpoints have different variances")
    if src.rack != dst.rack:
        raise PreconditionError("Module hom endpoints live over different racks")
    X = src.rack
    n = X.order
    f = h.components
    if len(f) != n:
        raise ShapeError(f"Module hom needs {n} components")
    report = ModuleReport(checked=["hom", "natural-phi", "natural-psi"])
    for x in range(n):
        if (f[x].source, f[x].target) != (src.groups[x], dst.groups[x]):
            raise ShapeError(f"Component {x} has the wrong source or target")
        if not check_hom(f[x]).ok:
            report.fail("hom", (x,), f"component {x} is not well defined")
    if not report.ok:
        return report
    left = src.variance is Variance.LEFT
    for x in range(n):
        for y in range(n):
            xy = X.op(x, y)
            if left:
                pairs = [
                    (compose(dst.phi[x][y], f[x]), compose(f[xy], src.phi[x][y]), "natural-phi"),
                    (compose(dst.psi[y][x], f[y]), compose(f[xy], src.psi[y][x]), "natural-psi"),
                ]
            else:
                pairs = [
                    (compose(f[x], src.phi[x][y]), compose(dst.phi[x][y], f[xy]), "natural-phi"),
                    (compose(f[y], src.psi[y][x]), compose(dst.psi[y][x], f[xy]), "natural-psi"),
                ]
            for lhs, rhs, axiom in pairs:
                if not homs_equal(lhs, rhs):
                    report.fail(axiom, (x, y), f"{axiom} square fails at ({x},{y})")
    return report


def hom_to_right_over_inverted(h: ModuleHom) -> ModuleHom:
    """The equivalence on morphisms: components are unchanged"""
    return ModuleHom(to_right_over_inverted(h.source), to_right_over_inverted(h.target), h.components)


def hom_to_left_over_inverted(h: ModuleHom) -> ModuleHom:
    return ModuleHom(to_left_over_inverted(h.source), to_left_over_inverted(h.target), h.components)
