"""
Rack and quandle (co)homology
The z-standard complex with module coefficients, its quandle quotient,
homology and cohomology groups, derivations and Ext.

Homology takes right modules and cohomology takes left modules; chain
groups are direct sums of A_{x(s)} over the basis tuples s of each degree.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .abgroup import (
    FgAbGroup, GroupHom, IntMatrix, compose, direct_sum_group, format_invariants, homology_at,
    homology_subquotient, image, is_zero_hom, kernel,
)
from .errors import ChainComplexError, PreconditionError, VarianceMismatchError
from .rack import RackTable
from .rmod import RackModule, Variance, is_quandle_module
from .utils import get_logger

logger = get_logger(__name__)


class Theory(Enum):
    RACK = "rack"
    QUANDLE = "quandle"


class Direction(Enum):
    HOMOLOGY = "homology"
    COHOMOLOGY = "cohomology"


@dataclass(frozen=True)
class BasisTuple:
    """(x1, ..., xn) with base x1^{x2...xn}; entries () is the degree-0 point at base"""
    entries: Tuple[int, ...]
    base: int

    @property
    def degree(self) -> int:
        return len(self.entries)

    def is_degenerate(self) -> bool:
        return any(a == b for a, b in zip(self.entries, self.entries[1:]))

    def __str__(self) -> str:
        if not self.entries:
            return f"(*)_{self.base}"
        return "(" + ",".join(map(str, self.entries)) + ")"


def make_tuple(rack: RackTable, entries: Sequence[int]) -> BasisTuple:
    entries = tuple(entries)
    return BasisTuple(entries, rack.power(entries[0], entries[1:]))


def enumerate_basis(rack: RackTable, n: int, theory: Theory = Theory.RACK) -> List[BasisTuple]:
    """Degree-n basis: points for n = 0, all of X^n (rack) or adjacent-distinct tuples (quandle)"""
    if n < 0:
        raise PreconditionError(f"Degree must be non-negative, got {n}")
    if n == 0:
        return [BasisTuple((), x) for x in range(rack.order)]
    basis = []
    for entries in product(range(rack.order), repeat=n):
        s = make_tuple(rack, entries)
        if theory is Theory.QUANDLE and s.is_degenerate():
            continue
        basis.append(s)
    return basis


@dataclass(frozen=True)
class Face:
    """One term of the boundary of a tuple: sign * (structure map) landing at target"""
    target: BasisTuple
    kind: str
    index: Tuple[int, int]
    sign: int


def faces(rack: RackTable, s: BasisTuple, z: int) -> Iterator[Face]:
    """Elision, shift and psi terms of the boundary of s"""
    entries = s.entries
    n = len(entries)
    if n == 1:
        x = entries[0]
        yield Face(BasisTuple((), z), "psi", (z, rack.op_inv(x, z)), 1)
        return
    for i in range(1, n):
        eps = 1 if i % 2 == 1 else -1
        elision = make_tuple(rack, entries[:i] + entries[i + 1:])
        v = rack.power(entries[i], entries[i + 1:])
        yield Face(elision, "phi", (elision.base, v), eps)
        pivot = entries[i]
        shifted = tuple(rack.op(a, pivot) for a in entries[:i]) + entries[i + 1:]
        yield Face(make_tuple(rack, shifted), "id", (s.base, s.base), -eps)
    rest = make_tuple(rack, entries[1:])
    yield Face(rest, "psi", (rest.base, rack.power(entries[0], entries[2:])), 1)


def _structure_map(module: RackModule, face: Face, base: int) -> IntMatrix:
    if face.kind == "id":
        return IntMatrix.identity(module.groups[base].gens)
    a, b = face.index
    if face.kind == "phi":
        return module.phi[a][b].matrix
    return module.psi[a][b].matrix


@dataclass(eq=False)
class ChainLayout:
    """Basis of one degree with the generator offset of each summand"""
    basis: List[BasisTuple]
    group: FgAbGroup
    offsets: Dict[BasisTuple, int]

    @classmethod
    def build(cls, module: RackModule, basis: List[BasisTuple]) -> "ChainLayout":
        offsets, pos = {}, 0
        for s in basis:
            offsets[s] = pos
            pos += module.groups[s.base].gens
        group = direct_sum_group([module.groups[s.base] for s in basis])
        return cls(basis, group, offsets)

    def indices(self, module: RackModule, keep) -> List[int]:
        out = []
        for s in self.basis:
            if keep(s):
                start = self.offsets[s]
                out.extend(range(start, start + module.groups[s.base].gens))
        return out


def _add_block(rows: List[Dict[int, int]], r0: int, c0: int, block: IntMatrix, sign: int):
    for i, srow in enumerate(block.sparse_rows()):
        row = rows[r0 + i]
        for j, v in srow.items():
            row[c0 + j] = row.get(c0 + j, 0) + sign * v


def _assemble(rack: RackTable, module: RackModule, upper: ChainLayout, lower: ChainLayout,
              z: int, direction: Direction) -> IntMatrix:
    """Boundary C_n -> C_{n-1} (homology) or coboundary C^{n-1} -> C^n (cohomology)"""
    homology = direction is Direction.HOMOLOGY
    m, k = lower.group.gens, upper.group.gens
    rows = [{} for _ in range(m if homology else k)]
    for s in upper.basis:
        top = upper.offsets[s]
        for face in faces(rack, s, z):
            block = _structure_map(module, face, s.base)
            low = lower.offsets[face.target]
            if homology:
                _add_block(rows, low, top, block, face.sign)
            else:
                _add_block(rows, top, low, block, face.sign)
    return IntMatrix.from_sparse(len(rows), k if homology else m, rows)


def _require_variance(module: RackModule, direction: Direction):
    want = Variance.RIGHT if direction is Direction.HOMOLOGY else Variance.LEFT
    if module.variance is not want:
        raise VarianceMismatchError(
            f"{direction.value} needs a {want.value} module, got a {module.variance.value} module"
        )


def boundary_homology(rack: RackTable, module: RackModule, n: int, z: int = 0) -> GroupHom:
    """Rack boundary C_n -> C_{n-1} with right-module coefficients"""
    _require_variance(module, Direction.HOMOLOGY)
    if n < 1:
        raise PreconditionError("Boundary degree must be at least 1")
    upper = ChainLayout.build(module, enumerate_basis(rack, n))
    lower = ChainLayout.build(module, enumerate_basis(rack, n - 1))
    matrix = _assemble(rack, module, upper, lower, z, Direction.HOMOLOGY)
    return GroupHom(upper.group, lower.group, matrix)


def coboundary(rack: RackTable, module: RackModule, n: int, z: int = 0) -> GroupHom:
    """Rack coboundary C^{n-1} -> C^n with left-module coefficients"""
    _require_variance(module, Direction.COHOMOLOGY)
    if n < 1:
        raise PreconditionError("Coboundary degree must be at least 1")
    upper = ChainLayout.build(module, enumerate_basis(rack, n))
    lower = ChainLayout.build(module, enumerate_basis(rack, n - 1))
    matrix = _assemble(rack, module, upper, lower, z, Direction.COHOMOLOGY)
    return GroupHom(lower.group, upper.group, matrix)


@dataclass(eq=False)
class ChainComplexZ:
    """C_0..C_N with maps[n] = boundary C_n -> C_{n-1} or coboundary C^{n-1} -> C^n"""
    rack: RackTable
    module: RackModule
    z: int
    theory: Theory
    direction: Direction
    max_degree: int
    layouts: List[ChainLayout] = field(default_factory=list)
    maps: Dict[int, GroupHom] = field(default_factory=dict)

    @property
    def groups(self) -> List[FgAbGroup]:
        return [layout.group for layout in self.layouts]

    def ranks(self) -> List[int]:
        """Number of basis tuples per degree"""
        return [len(layout.basis) for layout in self.layouts]

    def incoming(self, n: int) -> GroupHom:
        """The map whose image is divided out in degree n"""
        if self.direction is Direction.HOMOLOGY:
            return self.maps[n + 1]
        if n == 0:
            return GroupHom.zero(FgAbGroup.trivial(), self.groups[0])
        return self.maps[n]

    def outgoing(self, n: int) -> GroupHom:
        """The map whose kernel is taken in degree n"""
        if self.direction is Direction.COHOMOLOGY:
            return self.maps[n + 1]
        if n == 0:
            return GroupHom.zero(self.groups[0], FgAbGroup.trivial())
        return self.maps[n]


def _restrict(full: IntMatrix, module: RackModule, upper: ChainLayout, lower: ChainLayout,
              direction: Direction, n: int) -> IntMatrix:
    """Check the degenerate span is preserved and pass to the quotient (or subcomplex)"""
    keep_upper = upper.indices(module, lambda s: not s.is_degenerate())
    drop_upper = upper.indices(module, lambda s: s.is_degenerate())
    keep_lower = lower.indices(module, lambda s: not s.is_degenerate())
    if direction is Direction.HOMOLOGY:
        # degenerate columns must vanish on non-degenerate rows
        target = direct_sum_group([module.groups[s.base] for s in lower.basis if not s.is_degenerate()])
        block = full.select_rows(keep_lower).select_columns(drop_upper)
        if not is_zero_hom(GroupHom(FgAbGroup.free(block.cols), target, block)):
            raise ChainComplexError(
                f"Degenerate chains are not a subcomplex in degree {n}; "
                "the module fails the quandle condition"
            )
        return full.select_rows(keep_lower).select_columns(keep_upper)
    # degenerate rows must vanish on non-degenerate columns
    target = direct_sum_group([module.groups[s.base] for s in upper.basis if s.is_degenerate()])
    block = full.select_rows(drop_upper).select_columns(keep_lower)
    if not is_zero_hom(GroupHom(FgAbGroup.free(block.cols), target, block)):
        raise ChainComplexError(f"Cochains vanishing on degenerate tuples are not a subcomplex in degree {n}")
    return full.select_rows(keep_upper).select_columns(keep_lower)


def build_complex(rack: RackTable, module: RackModule, z: int = 0, max_degree: int = 3,
            theory: Theory = Theory.RACK, direction: Direction = Direction.HOMOLOGY) -> ChainComplexZ:
    """Assemble C_0..C_N and every map, asserting that consecutive maps compose to zero"""
    _require_variance(module, direction)
    if module.rack != rack:
        raise PreconditionError("Module lives over a different rack")
    if not 0 <= z < rack.order:
        raise PreconditionError(f"Base element {z} is not in a rack of order {rack.order}")
    if max_degree < 0:
        raise PreconditionError("max_degree must be non-negative")
    if theory is Theory.QUANDLE:
        if not rack.is_quandle:
            raise PreconditionError("Quandle theory needs a quandle")
        if not is_quandle_module(module):
            raise PreconditionError("Quandle theory needs a module satisfying psi_{x,x} + phi_{x,x} = id")

    full_layouts = [ChainLayout.build(module, enumerate_basis(rack, n)) for n in range(max_degree + 1)]
    cx = ChainComplexZ(rack, module, z, theory, direction, max_degree)
    if theory is Theory.RACK:
        cx.layouts = full_layouts
    else:
        cx.layouts = [
            ChainLayout.build(module, [s for s in layout.basis if not s.is_degenerate()])
            for layout in full_layouts
        ]

    for n in range(1, max_degree + 1):
        upper, lower = full_layouts[n], full_layouts[n - 1]
        matrix = _assemble(rack, module, upper, lower, z, direction)
        if theory is Theory.QUANDLE:
            matrix = _restrict(matrix, module, upper, lower, direction, n)
        up, low = cx.layouts[n].group, cx.layouts[n - 1].group
        if direction is Direction.HOMOLOGY:
            cx.maps[n] = GroupHom(up, low, matrix)
        else:
            cx.maps[n] = GroupHom(low, up, matrix)

    for n in range(2, max_degree + 1):
        if direction is Direction.HOMOLOGY:
            composite = compose(cx.maps[n - 1], cx.maps[n])
        else:
            composite = compose(cx.maps[n], cx.maps[n - 1])
        if not is_zero_hom(composite):
            raise ChainComplexError(f"Maps in degrees {n - 1} and {n} do not compose to zero")

    logger.info(
        f"Assembled {theory.value} {direction.value} complex over {rack} to degree {max_degree}, "
        f"ranks {cx.ranks()}"
    )
    return cx


@dataclass(frozen=True)
class DegreeGroup:
    n: int
    free: int
    torsion: Tuple[int, ...]

    def __str__(self) -> str:
        return format_invariants(self.free, self.torsion)

    def order(self) -> Optional[int]:
        if self.free:
            return None
        total = 1
        for d in self.torsion:
            total *= d
        return total

    def to_dict(self) -> Dict:
        return {"n": self.n, "free": self.free, "torsion": list(self.torsion)}


@dataclass
class HomologyResult:
    degrees: List[DegreeGroup]
    metadata: Dict = field(default_factory=dict)

    def __getitem__(self, n: int) -> DegreeGroup:
        return self.degrees[n]

    def to_dict(self) -> Dict:
        key = "H" if self.metadata.get("direction", "homology") == "homology" else "H^"
        return {key: [d.to_dict() for d in self.degrees], "metadata": dict(self.metadata)}


def _degree_group(cx: ChainComplexZ, n: int) -> DegreeGroup:
    group = homology_at(cx.incoming(n), cx.outgoing(n))
    free, torsion = group.invariants
    logger.info(f"{cx.direction.value} degree {n}: {format_invariants(free, torsion)}")
    return DegreeGroup(n, free, torsion)


def complex_metadata(cx: ChainComplexZ) -> Dict:
    return {
        "rack": cx.rack.name or f"order {cx.rack.order}",
        "module": cx.module.describe(),
        "z": cx.z,
        "theory": cx.theory.value,
        "direction": cx.direction.value,
    }


def homology_groups(cx: ChainComplexZ, workers: int = 1) -> HomologyResult:
    """Degrees 0..N-1 of an assembled complex; the top degree would need the next map"""
    degrees = range(cx.max_degree)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            groups = list(pool.map(lambda n: _degree_group(cx, n), degrees))
    else:
        groups = [_degree_group(cx, n) for n in degrees]
    return HomologyResult(groups, complex_metadata(cx))


def cocycle_representatives(cx: ChainComplexZ, n: int) -> List[Tuple[int, ...]]:
    """Chain-level representatives for the generators of H_n or H^n"""
    piece = homology_subquotient(cx.incoming(n), cx.outgoing(n))
    return [piece.representatives.column(k) for k in range(piece.group.gens)]


def augmentation_map(cx: ChainComplexZ) -> GroupHom:
    """epsilon: C_0 -> A summing the degree-0 summands; needs one shared coefficient group"""
    groups = {g for g in cx.module.groups}
    if len(groups) != 1:
        raise PreconditionError("The augmentation needs the same group at every element")
    a = cx.module.groups[0]
    c0 = cx.groups[0]
    cols = []
    for _ in range(cx.rack.order):
        for j in range(a.gens):
            cols.append(tuple(int(i == j) for i in range(a.gens)))
    return GroupHom(c0, a, IntMatrix.from_columns(cols, a.gens))


def check_augmentation(cx: ChainComplexZ) -> bool:
    """epsilon o d_1 = 0 for a homology complex"""
    if cx.direction is not Direction.HOMOLOGY or cx.max_degree < 1:
        raise PreconditionError("check_augmentation needs a homology complex of degree >= 1")
    return is_zero_hom(compose(augmentation_map(cx), cx.maps[1]))


def derivations(rack: RackTable, module: RackModule) -> FgAbGroup:
    """Der(X, A) = ker d^2"""
    return kernel(coboundary(rack, module, 2)).group


def principal_derivations(rack: RackTable, module: RackModule, z: int = 0) -> FgAbGroup:
    """PDer(X, A) = im d^1_z"""
    return image(coboundary(rack, module, 1, z))


def first_cohomology(rack: RackTable, module: RackModule, z: int = 0) -> FgAbGroup:
    """H^1 = Der / PDer"""
    return homology_at(coboundary(rack, module, 1, z), coboundary(rack, module, 2, z))


def ext_group(rack: RackTable, module: RackModule) -> FgAbGroup:
    """Ext(X, A) = Z(X, A) / B(X, A) = ker d^3 / im d^2"""
    group = homology_at(coboundary(rack, module, 2), coboundary(rack, module, 3))
    logger.info(f"Ext over {rack}: {group}")
    return group
