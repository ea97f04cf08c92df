"""
Finite racks and quandles
Operation tables, axiom validation, orbits, the inverted rack, operator words
and the built-in families.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ParseError, PreconditionError, RackAxiomError
from .utils import get_logger

logger = get_logger(__name__)

Letter = Tuple[int, int]


@dataclass(frozen=True)
class OperatorWord:
    """Freely reduced word in rack elements and their inverses.

    A letter (y, +1) acts by a -> a^y and (y, -1) by a -> a^{y-bar};
    letters apply left to right.
    """
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        for (a, s), (b, t) in zip(self.letters, self.letters[1:]):
            if a == b and s == -t:
                raise ValueError(f"Word is not freely reduced at letter {a}")
        for _, s in self.letters:
            if s not in (1, -1):
                raise ValueError(f"Letter sign must be +1 or -1, got {s}")

    @classmethod
    def of(cls, letters: Iterable[Letter]) -> "OperatorWord":
        """Freely reduce and wrap"""
        stack: List[Letter] = []
        for y, s in letters:
            if stack and stack[-1] == (y, -s):
                stack.pop()
            else:
                stack.append((y, s))
        return cls(tuple(stack))

    @classmethod
    def letter(cls, y: int, sign: int = 1) -> "OperatorWord":
        return cls(((y, sign),))

    def __mul__(self, other: "OperatorWord") -> "OperatorWord":
        """self then other"""
        return OperatorWord.of(self.letters + other.letters)

    def inverse(self) -> "OperatorWord":
        return OperatorWord(tuple((y, -s) for y, s in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"{y}" if s > 0 else f"{y}'" for y, s in self.letters)

    def to_list(self) -> List[List[int]]:
        return [[y, s] for y, s in self.letters]


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of an axiom scan: ok, or the first violated axiom with witnesses"""
    ok: bool
    axiom: Optional[str] = None
    witness: Tuple[int, ...] = ()
    message: str = ""


@dataclass(frozen=True)
class RackTable:
    """Validated finite rack, table[a][b] = a^b on elements 0..order-1"""
    order: int
    table: Tuple[Tuple[int, ...], ...]
    is_quandle: bool
    name: str = ""

    def __eq__(self, other):
        if not isinstance(other, RackTable):
            return NotImplemented
        return self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverse_table(self) -> Tuple[Tuple[int, ...], ...]:
        """inverse_table[a][b] = a^{b-bar}, the c with c^b = a"""
        inv = [[0] * self.order for _ in range(self.order)]
        for b in range(self.order):
            for a in range(self.order):
                inv[self.table[a][b]][b] = a
        return tuple(tuple(r) for r in inv)

    def op_inv(self, a: int, b: int) -> int:
        return self.inverse_table[a][b]

    def act(self, x: int, word: Iterable[Letter]) -> int:
        for y, s in word:
            x = self.table[x][y] if s > 0 else self.inverse_table[x][y]
        return x

    def power(self, x: int, exponents: Sequence[int]) -> int:
        """x^{e1 e2 ... ek}, the left-to-right exponent string"""
        for y in exponents:
            x = self.table[x][y]
        return x

    def permutation(self, word: Iterable[Letter]) -> Tuple[int, ...]:
        """The element of Inn(X) a word acts by"""
        word = tuple(word)
        return tuple(self.act(a, word) for a in range(self.order))

    @property
    def elements(self) -> range:
        return range(self.order)

    def to_dict(self) -> Dict:
        data = {"order": self.order, "table": [list(r) for r in self.table]}
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "RackTable":
        if "table" not in data:
            raise ParseError("Rack data needs a 'table'")
        rack = validate(data["table"], name=data.get("name", ""))
        if "order" in data and data["order"] != rack.order:
            raise ParseError(f"Declared order {data['order']} differs from table order {rack.order}")
        return rack

    def __str__(self) -> str:
        return self.name or f"rack of order {self.order}"


def _normalize(table) -> Tuple[Tuple[int, ...], ...]:
    try:
        rows = tuple(tuple(int(v) for v in row) for row in table)
    except (TypeError, ValueError):
        raise ParseError("Rack table must be a list of integer rows")
    n = len(rows)
    if n == 0:
        raise ParseError("Racks of order 0 are not supported")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"Rack table is not square: row {i} has {len(row)} entries, expected {n}")
    return rows


def check_axioms(table) -> AxiomReport:
    """Scan range, R1, R2 in that order and stop at the first failure"""
    rows = _normalize(table)
    n = len(rows)
    for a in range(n):
        for b in range(n):
            if not 0 <= rows[a][b] < n:
                return AxiomReport(False, "range", (a, b), f"Entry table[{a}][{b}] = {rows[a][b]} out of range")
    for b in range(n):
        if len({rows[a][b] for a in range(n)}) != n:
            return AxiomReport(False, "R1", (b,), f"R1 violated at column {b}: not a permutation")
    for a in range(n):
        ra = rows[a]
        for b in range(n):
            rab = rows[ra[b]]
            rb = rows[b]
            for c in range(n):
                if rab[c] != rows[ra[c]][rb[c]]:
                    return AxiomReport(
                        False, "R2", (a, b, c),
                        f"R2 violated at (a,b,c) = ({a},{b},{c})",
                    )
    return AxiomReport(True)


def validate(table, name: str = "") -> RackTable:
    """Validate a table and return the rack, raising RackAxiomError on the first violation"""
    report = check_axioms(table)
    if not report.ok:
        logger.warning(f"Rack validation failed: {report.message}")
        raise RackAxiomError(report.axiom, report.witness, report.message)
    rows = _normalize(table)
    quandle = all(rows[a][a] == a for a in range(len(rows)))
    return RackTable(len(rows), rows, quandle, name)


def trivial_rack(n: int) -> RackTable:
    _require_order(n)
    return validate([[a for _ in range(n)] for a in range(n)], name=f"trivial{n}")


def dihedral_rack(n: int) -> RackTable:
    _require_order(n)
    return validate([[(2 * b - a) % n for b in range(n)] for a in range(n)], name=f"dihedral{n}")


def cyclic_rack(n: int) -> RackTable:
    _require_order(n)
    return validate([[(a + 1) % n for _ in range(n)] for a in range(n)], name=f"cyclic{n}")


def alexander_rack(m: int, t: int) -> RackTable:
    _require_order(m)
    if gcd(t, m) != 1:
        raise PreconditionError(f"Alexander quandle needs t a unit mod {m}, got t={t}")
    return validate(
        [[(t * a + (1 - t) * b) % m for b in range(m)] for a in range(m)],
        name=f"alexander{m},{t % m}",
    )


def conjugation_rack(mul: Sequence[Sequence[int]], name: str = "") -> RackTable:
    """Conjugation quandle a^b = b^-1 a b of a group given by mul[g][h] = gh"""
    n = len(mul)
    _require_order(n)
    identity = next(
        (e for e in range(n) if all(mul[e][g] == g and mul[g][e] == g for g in range(n))),
        None,
    )
    if identity is None:
        raise ParseError("Multiplication table has no identity element")
    inverse = []
    for g in range(n):
        inv = next((h for h in range(n) if mul[g][h] == identity), None)
        if inv is None:
            raise ParseError(f"Element {g} has no inverse")
        inverse.append(inv)
    table = [[mul[mul[inverse[b]][a]][b] for b in range(n)] for a in range(n)]
    return validate(table, name=name)


def symmetric_group_table(k: int) -> List[List[int]]:
    """Multiplication table of S_k on permutations in lexicographic order, (gh)(i) = g(h(i))"""
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(g[h[i]] for i in range(k))] for h in perms] for g in perms]


def _require_order(n: int):
    if n < 1:
        raise PreconditionError(f"Rack order must be at least 1, got {n}")


BUILTINS: Dict[str, Callable[..., RackTable]] = {
    "trivial": trivial_rack,
    "dihedral": dihedral_rack,
    "cyclic": cyclic_rack,
    "alexander": alexander_rack,
}


def builtin(kind: str, *params: int) -> RackTable:
    """Built-in family by name: trivial n, dihedral n, cyclic n, alexander m t, conj k (Conj(S_k))"""
    if kind == "conj":
        if len(params) != 1:
            raise ParseError("conj takes one parameter k (the symmetric group S_k)")
        return conjugation_rack(symmetric_group_table(params[0]), name=f"conjS{params[0]}")
    factory = BUILTINS.get(kind)
    if factory is None:
        raise ParseError(f"Unknown builtin rack family {kind!r}")
    try:
        return factory(*params)
    except TypeError:
        raise ParseError(f"Wrong number of parameters for builtin {kind!r}: {params}")


def invert(rack: RackTable) -> RackTable:
    """The inverted rack X*: x* ^ y* = (x^{y-bar})*"""
    name = rack.name[:-1] if rack.name.endswith("*") else (f"{rack.name}*" if rack.name else "")
    return RackTable(rack.order, rack.inverse_table, rack.is_quandle, name)


def orbits(rack: RackTable) -> List[List[int]]:
    """Connected components of the graph a -- a^b"""
    parent = list(range(rack.order))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(rack.order):
        for b in range(rack.order):
            ra, rb = find(a), find(rack.table[a][b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    classes: Dict[int, List[int]] = {}
    for a in range(rack.order):
        classes.setdefault(find(a), []).append(a)
    return sorted(classes.values())


def orbit_index(rack: RackTable) -> Tuple[int, ...]:
    """orbit_index[a] is the position of a's orbit in orbits(rack)"""
    index = [0] * rack.order
    for k, orbit in enumerate(orbits(rack)):
        for a in orbit:
            index[a] = k
    return tuple(index)


def is_connected(rack: RackTable) -> bool:
    return len(orbits(rack)) == 1


def act(x: int, word: Iterable[Letter], rack: RackTable) -> int:
    return rack.act(x, word)


def is_homomorphism(f: Sequence[int], source: RackTable, target: RackTable) -> bool:
    """f(a^b) = f(a)^{f(b)} for all a, b"""
    if len(f) != source.order or any(not 0 <= v < target.order for v in f):
        return False
    return all(
        f[source.table[a][b]] == target.table[f[a]][f[b]]
        for a in range(source.order)
        for b in range(source.order)
    )
