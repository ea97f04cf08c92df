"""
Independent cross-checks
Brute-force factor sets, mod-p and rational ranks, the trivial-coefficient
boundary and the base-point independence report.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import GF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .abgroup import FgAbGroup, IntMatrix, enumerate_elements, format_group
from .errors import BudgetExceededError, InfiniteGroupError, OracleMismatchError, PreconditionError
from .homology import (
    ChainComplexZ, Direction, build_complex, first_cohomology, homology_groups,
)
from .rack import RackTable
from .rmod import RackModule, Variance, counterpart
from .utils import get_logger

logger = get_logger(__name__)


class _ElementTable:
    """Enumerated finite group with index-level addition and hom lookup"""

    def __init__(self, group: FgAbGroup):
        self.group = group
        self.elements = enumerate_elements(group)
        self.index = {group.normal_form(e): k for k, e in enumerate(self.elements)}
        self.size = len(self.elements)
        self.zero = self.lookup(group.zero())
        self.add = [
            [self.lookup(tuple(p + q for p, q in zip(a, b))) for b in self.elements]
            for a in self.elements
        ]
        self.neg = [self.lookup(tuple(-p for p in a)) for a in self.elements]

    def lookup(self, vector: Sequence[int]) -> int:
        return self.index[self.group.normal_form(vector)]

    def image_table(self, hom, target: "_ElementTable") -> List[int]:
        return [target.lookup(hom(e)) for e in self.elements]


def oracle_factor_sets(rack: RackTable, module: RackModule, budget: int = 10 ** 8,
                       max_order: int = 4) -> Tuple[int, int, int]:
    """(|Z|, |B|, |Z|/|B|) by enumerating every family sigma_{x,y} in A_{x^y}"""
    if module.variance is not Variance.LEFT:
        raise PreconditionError("Factor sets need a left module")
    if rack.order > max_order:
        raise BudgetExceededError(f"Factor-set oracle is limited to racks of order <= {max_order}")
    if not all(g.is_finite() for g in module.groups):
        raise InfiniteGroupError("Factor-set oracle needs finite coefficient groups")
    n = rack.order
    op = rack.op
    tables = [_ElementTable(g) for g in module.groups]
    pairs = [(x, y) for x in range(n) for y in range(n)]
    candidates = 1
    for x, y in pairs:
        candidates *= tables[op(x, y)].size
    if candidates > budget:
        raise BudgetExceededError(f"Factor-set oracle would scan {candidates} candidates (budget {budget})")

    phi = [[tables[x].image_table(module.phi[x][y], tables[op(x, y)]) for y in range(n)] for x in range(n)]
    psi = [[tables[y].image_table(module.psi[y][x], tables[op(x, y)]) for x in range(n)] for y in range(n)]

    def is_cocycle(sigma: Dict[Tuple[int, int], int]) -> bool:
        # sigma_{x^y,z} + phi_{x^y,z} sigma_{x,y}
        #   = phi_{x^z,y^z} sigma_{x,z} + sigma_{x^z,y^z} + psi_{y^z,x^z} sigma_{y,z}
        for x in range(n):
            for y in range(n):
                xy = op(x, y)
                for z in range(n):
                    xz, yz = op(x, z), op(y, z)
                    t = tables[op(xy, z)]
                    lhs = t.add[sigma[(xy, z)]][phi[xy][z][sigma[(x, y)]]]
                    rhs = t.add[t.add[phi[xz][yz][sigma[(x, z)]]][sigma[(xz, yz)]]][psi[yz][xz][sigma[(y, z)]]]
                    if lhs != rhs:
                        return False
        return True

    cocycles = 0
    for values in product(*(range(tables[op(x, y)].size) for x, y in pairs)):
        if is_cocycle(dict(zip(pairs, values))):
            cocycles += 1

    boundaries = set()
    for upsilon in product(*(range(t.size) for t in tables)):
        # sigma_{x,y} = psi_{y,x} u_y - u_{x^y} + phi_{x,y} u_x
        sigma = []
        for x, y in pairs:
            t = tables[op(x, y)]
            value = t.add[psi[y][x][upsilon[y]]][t.neg[upsilon[op(x, y)]]]
            sigma.append(t.add[value][phi[x][y][upsilon[x]]])
        boundaries.add(tuple(sigma))
    if cocycles % len(boundaries):
        raise PreconditionError("Coboundary count does not divide cocycle count; inputs are not a module")
    logger.info(f"Factor sets over {rack}: |Z| = {cocycles}, |B| = {len(boundaries)}")
    return cocycles, len(boundaries), cocycles // len(boundaries)


def matrix_rank(matrix: IntMatrix, prime: int = 0) -> int:
    """Rank over Q (prime = 0) or over GF(prime)"""
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    rows = {i: {j: ZZ(v) for j, v in r.items()} for i, r in enumerate(matrix.sparse_rows()) if r}
    dm = DomainMatrix(rows, (matrix.rows, matrix.cols), ZZ)
    domain = QQ if prime == 0 else GF(prime)
    return dm.convert_to(domain).rank()


@dataclass(frozen=True)
class RankRow:
    degree: int
    prime: int
    predicted: int
    from_snf: int

    @property
    def agrees(self) -> bool:
        return self.predicted == self.from_snf


@dataclass
class RankReport:
    rows: List[RankRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.agrees for r in self.rows)


def oracle_mod_p_ranks(cx: ChainComplexZ, degrees: Optional[Sequence[int]] = None,
                       primes: Sequence[int] = (0, 2, 3, 5)) -> RankReport:
    """Dimensions of H_n(C (x) F) from ranks, against the SNF invariant factors (F = Q or GF(p))"""
    if any(not g.rels.is_zero() for g in cx.groups):
        raise PreconditionError("Rank oracle needs free chain groups")
    result = homology_groups(cx)
    top = cx.max_degree - 1
    homology = cx.direction is Direction.HOMOLOGY
    if degrees is None:
        # cohomology in degree n needs the torsion of H^{n+1}
        degrees = range(top + 1) if homology else range(top)
    sizes = [g.gens for g in cx.groups]
    report = RankReport()
    for p in primes:
        ranks = {n: matrix_rank(cx.maps[n].matrix, p) for n in cx.maps}
        ranks[0] = 0
        ranks[cx.max_degree + 1] = 0
        for n in degrees:
            if homology:
                predicted = sizes[n] - ranks[n] - ranks[n + 1]
                neighbour = result[n - 1] if n >= 1 else None
            else:
                predicted = sizes[n] - ranks[n + 1] - ranks.get(n, 0)
                neighbour = result[n + 1] if n + 1 <= top else None
            group = result[n]
            snf = group.free
            if p:
                snf += sum(1 for d in group.torsion if d % p == 0)
                if neighbour is not None:
                    snf += sum(1 for d in neighbour.torsion if d % p == 0)
            report.rows.append(RankRow(n, p, predicted, snf))
    logger.info(f"Rank oracle over primes {list(primes)}: ok={report.ok}")
    return report


def require_rank_agreement(report: RankReport) -> RankReport:
    """Pass the report through, or raise on the first rank the SNF result does not explain"""
    bad = [r for r in report.rows if not r.agrees]
    if bad:
        first = bad[0]
        field_name = "Q" if first.prime == 0 else f"GF({first.prime})"
        raise OracleMismatchError(
            f"Rank oracle disagrees in degree {first.degree} over {field_name}: "
            f"ranks give {first.predicted}, invariant factors give {first.from_snf}",
            details=bad,
        )
    return report


def require_ext_agreement(group: FgAbGroup, oracle: Tuple[int, int, int]) -> Tuple[int, int, int]:
    """Pass the factor-set counts through, or raise when |Z|/|B| differs from |Ext|"""
    order = oracle[2]
    if not group.is_finite() or group.order() != order:
        raise OracleMismatchError(
            f"Ext is {format_group(group)} but factor sets give order {order}", details=oracle
        )
    return oracle


def oracle_trivial_boundary(rack: RackTable, n: int) -> IntMatrix:
    """Boundary of the trivial-Z complex straight from the face formula"""
    size = rack.order
    lower = list(product(range(size), repeat=n - 1)) if n > 1 else [(x,) for x in range(size)]
    upper = list(product(range(size), repeat=n))
    row_of = {t: k for k, t in enumerate(lower)}
    rows = [[0] * len(upper) for _ in lower]
    if n == 1:
        return IntMatrix.from_rows(rows, len(upper))
    for col, s in enumerate(upper):
        for i in range(1, n):
            sign = (-1) ** (i + 1)
            elision = s[:i] + s[i + 1:]
            shifted = tuple(rack.table[a][s[i]] for a in s[:i]) + s[i + 1:]
            rows[row_of[elision]][col] += sign
            rows[row_of[shifted]][col] -= sign
    return IntMatrix.from_rows(rows, len(upper))


@dataclass
class ZIndependenceReport:
    cohomology: Dict[int, List[str]] = field(default_factory=dict)
    homology: Dict[int, List[str]] = field(default_factory=dict)

    @property
    def cohomology_independent(self) -> bool:
        return len({tuple(v) for v in self.cohomology.values()}) <= 1

    @property
    def homology_independent(self) -> bool:
        return len({tuple(v) for v in self.homology.values()}) <= 1

    @property
    def independent(self) -> bool:
        return self.cohomology_independent and self.homology_independent


def z_independence_report(rack: RackTable, module: RackModule, max_degree: int = 1,
                          right: Optional[RackModule] = None) -> ZIndependenceReport:
    """H^1 and H_1..H_N for every base element; reports without asserting"""
    if module.variance is not Variance.LEFT:
        raise PreconditionError("z-independence starts from a left module")
    if right is None:
        right = counterpart(module)
    report = ZIndependenceReport()
    for z in range(rack.order):
        report.cohomology[z] = [format_group(first_cohomology(rack, module, z))]
        if right is not None:
            cx = build_complex(rack, right, z, max_degree + 1, direction=Direction.HOMOLOGY)
            result = homology_groups(cx)
            report.homology[z] = [str(result[n]) for n in range(1, max_degree + 1)]
    logger.info(f"z-independence over {rack}: independent={report.independent}")
    return report
