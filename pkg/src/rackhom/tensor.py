"""
Tensor products, Hom-modules and the collapse isomorphism
A (x) B over X for a right module A and a left module B, Hom(B, C) as a right
module, the adjunction between them, and ZX (x) A = A for left modules A.
"""

import random
from dataclasses import dataclass, field
from itertools import product
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .abgroup import (
    FgAbGroup, GroupHom, IntMatrix, Subquotient, compose, direct_sum, direct_sum_group, enumerate_homs,
    format_group, hom_key, homs_equal, induced_hom, invert_iso, is_iso, kernel,
)
from .errors import (
    BudgetExceededError, InfiniteGroupError, ModuleAxiomError, PreconditionError, VarianceMismatchError,
)
from .rack import OperatorWord, RackTable
from .rmod import RackModule, RightModule, Variance, check_right
from .utils import get_logger
from .wring import (
    TermKind, WringElement, WringTerm, is_degenerate_term, quandle_relation, term_source, words_up_to,
)

logger = get_logger(__name__)

Label = Tuple[int, int, int]


@dataclass(frozen=True)
class TensorGroup:
    """Presentation of A (x)_X B on generators (x, i, j) = a_i (x) b_j in A_x (x) B_x"""
    group: FgAbGroup
    labels: Tuple[Label, ...]

    @property
    def index(self) -> Dict[Label, int]:
        return {label: k for k, label in enumerate(self.labels)}


def _require_pair(a: RackModule, b: RackModule):
    if a.variance is not Variance.RIGHT or b.variance is not Variance.LEFT:
        raise VarianceMismatchError("tensor needs a right module on the left and a left module on the right")
    if a.rack != b.rack:
        raise PreconditionError("tensor factors live over different racks")


def tensor(a: RackModule, b: RackModule, order: Optional[Sequence[Label]] = None) -> TensorGroup:
    """Present A (x)_X B: bilinearity relators and the phi/psi transport relations on generators"""
    _require_pair(a, b)
    X = a.rack
    n = X.order
    labels = list(order) if order is not None else [
        (x, i, j) for x in range(n) for i in range(a.groups[x].gens) for j in range(b.groups[x].gens)
    ]
    index = {label: k for k, label in enumerate(labels)}
    if len(index) != sum(a.groups[x].gens * b.groups[x].gens for x in range(n)):
        raise PreconditionError("Generator order must list every (x, i, j) exactly once")
    size = len(labels)
    columns: List[Tuple[int, ...]] = []

    def push(entries: Dict[int, int]):
        if any(entries.values()):
            col = [0] * size
            for k, v in entries.items():
                col[k] += v
            columns.append(tuple(col))

    for x in range(n):
        ax, bx = a.groups[x], b.groups[x]
        for r in ax.rels.columns():
            for j in range(bx.gens):
                push({index[(x, i, j)]: r[i] for i in range(ax.gens) if r[i]})
        for s in bx.rels.columns():
            for i in range(ax.gens):
                push({index[(x, i, j)]: s[j] for j in range(bx.gens) if s[j]})

    for x in range(n):
        for y in range(n):
            xy = X.op(x, y)
            for up, down, at in ((a.phi[x][y], b.phi[x][y], x), (a.psi[y][x], b.psi[y][x], y)):
                # (up c) (x) d = c (x) (down d) for c a generator of A_{x^y}, d of B_at
                for k in range(a.groups[xy].gens):
                    for j in range(b.groups[at].gens):
                        entries: Dict[int, int] = {}
                        for i in range(a.groups[at].gens):
                            c = up.matrix[i, k]
                            if c:
                                key = index[(at, i, j)]
                                entries[key] = entries.get(key, 0) + c
                        for m in range(b.groups[xy].gens):
                            c = down.matrix[m, j]
                            if c:
                                key = index[(xy, k, m)]
                                entries[key] = entries.get(key, 0) - c
                        push(entries)

    group = FgAbGroup(size, IntMatrix.from_columns(columns, size))
    logger.info(f"Tensor presentation: {size} generators, {len(columns)} relations, group {format_group(group)}")
    return TensorGroup(group, tuple(labels))


def tensor_order_by_closure(a: RackModule, b: RackModule, limit: int = 10 ** 6) -> int:
    """Order of A (x)_X B by enumerating the relation subgroup of (Z/e)^N, all groups finite"""
    _require_pair(a, b)
    presented = tensor(a, b)
    groups = list(a.groups) + list(b.groups)
    if any(not g.is_finite() for g in groups):
        raise InfiniteGroupError("Closure oracle needs finite coefficient groups")
    e = 1
    for g in groups:
        if g.torsion:
            e = lcm(e, g.torsion[-1])
    size = presented.group.gens
    if e ** size > limit:
        raise BudgetExceededError(f"Closure oracle would visit {e ** size} elements")
    gens = {tuple(v % e for v in col) for col in presented.group.rels.columns()}
    gens.discard((0,) * size)
    seen = {(0,) * size}
    frontier = [(0,) * size]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((p + q) % e for p, q in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return e ** size // len(seen)


@dataclass(frozen=True)
class HomModule:
    """Hom(B, C) as a right module, with the subquotients realising each H_x"""
    module: RackModule
    pieces: Tuple[Subquotient, ...]
    coefficients: FgAbGroup
    source_groups: Tuple[FgAbGroup, ...]

    def as_hom(self, x: int, element: Sequence[int]) -> GroupHom:
        """The hom B_x -> C represented by an element of H_x"""
        vec = self.pieces[x].representatives.apply(element)
        c = self.coefficients.gens
        cols = [
            self.coefficients.canonical(vec[j * c:(j + 1) * c])
            for j in range(self.source_groups[x].gens)
        ]
        return GroupHom(self.source_groups[x], self.coefficients, IntMatrix.from_columns(cols, c))


def _hom_ambient(source: FgAbGroup, c: FgAbGroup) -> Tuple[FgAbGroup, GroupHom]:
    """C^{gens} and the map f -> (f(relator_k))_k into C^{relators}"""
    g, r = source.gens, source.rels.cols
    ambient = direct_sum_group([c] * g)
    target = direct_sum_group([c] * r)
    rows = [[0] * (g * c.gens) for _ in range(r * c.gens)]
    for k in range(r):
        for i in range(g):
            coeff = source.rels[i, k]
            if coeff:
                for m in range(c.gens):
                    rows[k * c.gens + m][i * c.gens + m] = coeff
    return ambient, GroupHom(ambient, target, IntMatrix.from_rows(rows, g * c.gens))


def _precompose_matrix(f: GroupHom, c: FgAbGroup) -> IntMatrix:
    """Ambient matrix of h -> h o f from C^{f.target.gens} to C^{f.source.gens}"""
    cg = c.gens
    src, dst = f.source.gens, f.target.gens
    rows = [[0] * (dst * cg) for _ in range(src * cg)]
    for j in range(src):
        for l in range(dst):
            coeff = f.matrix[l, j]
            if coeff:
                for m in range(cg):
                    rows[j * cg + m][l * cg + m] = coeff
    return IntMatrix.from_rows(rows, dst * cg)


def hom_module(b: RackModule, c: FgAbGroup) -> HomModule:
    """H_x = Hom(B_x, C); eta^{x,y}(f) = f chi_{x,y}, zeta^{y,x}(f) = f omega_{y,x}"""
    if b.variance is not Variance.LEFT:
        raise VarianceMismatchError("hom_module needs a left module")
    if not c.is_finite():
        raise InfiniteGroupError(f"hom_module needs a finite coefficient group, got {format_group(c)}")
    X = b.rack
    n = X.order
    pieces = [kernel(_hom_ambient(b.groups[x], c)[1]) for x in range(n)]
    groups = tuple(p.group for p in pieces)
    eta, zeta = [], []
    for x in range(n):
        eta.append(tuple(
            induced_hom(pieces[X.op(x, y)], pieces[x], _precompose_matrix(b.phi[x][y], c))
            for y in range(n)
        ))
    for y in range(n):
        zeta.append(tuple(
            induced_hom(pieces[X.op(x, y)], pieces[y], _precompose_matrix(b.psi[y][x], c))
            for x in range(n)
        ))
    module = RightModule(X, groups, tuple(eta), tuple(zeta), kind="hom")
    report = check_right(module)
    if not report.ok:
        raise ModuleAxiomError(f"Hom-module failed its axioms: {report.summary()}", report)
    return HomModule(module, tuple(pieces), c, tuple(b.groups))


@dataclass
class AdjunctionReport:
    tensor_homs: int
    family_homs: int
    bijective: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.tensor_homs == self.family_homs


def _natural_families(a: RackModule, h: RackModule, budget: int) -> List[Tuple[GroupHom, ...]]:
    X = a.rack
    n = X.order
    choices = [enumerate_homs(a.groups[x], h.groups[x]) for x in range(n)]
    total = 1
    for ch in choices:
        total *= len(ch)
    if total > budget:
        raise BudgetExceededError(f"Adjunction check would test {total} families")
    families = []
    for family in product(*choices):
        ok = True
        for x in range(n):
            for y in range(n):
                xy = X.op(x, y)
                if not homs_equal(compose(family[x], a.phi[x][y]), compose(h.phi[x][y], family[xy])) \
                        or not homs_equal(compose(family[y], a.psi[y][x]), compose(h.psi[y][x], family[xy])):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            families.append(family)
    return families


def tau(a: RackModule, hom: HomModule, labels: Sequence[Label], f: GroupHom) -> Tuple[GroupHom, ...]:
    """f(a (x) b) -> (x |-> (a -> (b -> f(a (x) b))))"""
    index = {label: k for k, label in enumerate(labels)}
    c = hom.coefficients
    family = []
    for x in range(a.rack.order):
        piece = hom.pieces[x]
        bx = hom.source_groups[x]
        cols = []
        for i in range(a.groups[x].gens):
            vec = []
            for j in range(bx.gens):
                vec.extend(f.matrix.column(index[(x, i, j)]))
            cols.append(piece.coordinates(vec))
        family.append(GroupHom(a.groups[x], piece.group, IntMatrix.from_columns(cols, piece.group.gens)))
    return tuple(family)


def adjunction_check(a: RackModule, b: RackModule, c: FgAbGroup, budget: int = 10 ** 6) -> AdjunctionReport:
    """Hom(A (x) B, C) = Hom_X(A, Hom(B, C)) by full enumeration of both sides"""
    _require_pair(a, b)
    if not all(g.is_finite() for g in list(a.groups) + list(b.groups)) or not c.is_finite():
        raise InfiniteGroupError("adjunction_check needs finite groups throughout")
    t = tensor(a, b)
    hom = hom_module(b, c)
    left = enumerate_homs(t.group, c)
    right = _natural_families(a, hom.module, budget)
    right_keys = {tuple(hom_key(f) for f in family) for family in right}
    images = {tuple(hom_key(f) for f in tau(a, hom, t.labels, g)) for g in left}
    bijective = len(images) == len(left) and images == right_keys
    logger.info(f"Adjunction: {len(left)} tensor homs, {len(right)} natural families, bijective={bijective}")
    return AdjunctionReport(len(left), len(right), bijective)


def letter_step(module: RackModule, cur: int, letter: Tuple[int, int]) -> Tuple[GroupHom, int]:
    """The map A_cur -> A_next for one letter of a word, and next"""
    X = module.rack
    y, s = letter
    if s > 0:
        return module.phi[cur][y], X.op(cur, y)
    prev = X.op_inv(cur, y)
    return invert_iso(module.phi[prev][y]), prev


def collapse_steps(module: RackModule, base: int, term: WringTerm,
                   lambda_position: Optional[int] = None) -> List[GroupHom]:
    """The rewrite steps taking term (x) a to (*) (x) a', in application order.

    A rho-lambda term applies its lambda first unless lambda_position moves it
    past that many letters of the word.
    """
    X = module.rack
    src = term_source(X, base, term)
    word = term.word.letters
    steps: List[GroupHom] = []
    if term.kind is TermKind.RHO:
        cur = src
        for letter in word:
            hom, cur = letter_step(module, cur, letter)
            steps.append(hom)
        assert cur == base
        return steps
    k = 0 if lambda_position is None else lambda_position
    partner = X.act(base, OperatorWord(word).inverse() * OperatorWord.letter(term.t, -1))
    cur, other = term.t, partner
    for letter in word[:k]:
        hom, cur = letter_step(module, cur, letter)
        steps.append(hom)
        other = X.act(other, [letter])
    steps.append(module.psi[cur][other])
    cur = X.op(other, cur)
    for letter in word[k:]:
        hom, cur = letter_step(module, cur, letter)
        steps.append(hom)
    assert cur == base
    return steps


def compose_steps(steps: Sequence[GroupHom], rnd: Optional[random.Random] = None) -> GroupHom:
    """Compose steps in order; with rnd, bracket the composition at random"""
    items = list(steps)
    while len(items) > 1:
        k = rnd.randrange(len(items) - 1) if rnd else 0
        items[k:k + 2] = [compose(items[k + 1], items[k])]
    return items[0]


def collapse_term(module: RackModule, base: int, term: WringTerm,
                  element: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """(term (x) a) -> (number of rewrites, a') with term (x) a = (*) (x) a'"""
    steps = collapse_steps(module, base, term)
    vec = tuple(element)
    for hom in steps:
        vec = hom(vec)
    return len(steps), module.groups[base].canonical(vec)


def collapse_element(module: RackModule, p: WringElement, element: Sequence[int]) -> Tuple[int, ...]:
    """Collapse a homogeneous element p (x) a"""
    total = module.groups[p.base].zero()
    for term, coeff in p.terms:
        _, vec = collapse_term(module, p.base, term, element)
        total = tuple(t + coeff * v for t, v in zip(total, vec))
    return module.groups[p.base].canonical(total)


@dataclass
class CollapseReport:
    """Per-element presentations of (ZX (x) A)_x and the comparison with A"""
    word_length: int
    invariants_match: bool = True
    isomorphisms: bool = True
    structure_maps_match: bool = True
    confluent: bool = True
    quandle: bool = False
    groups: List[str] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.invariants_match and self.isomorphisms and self.structure_maps_match and self.confluent


def _truncated_terms(rack: RackTable, base: int, length: int) -> List[WringTerm]:
    words = words_up_to(rack, length)
    terms = [WringTerm.rho(w) for w in words]
    terms.extend(WringTerm.rho_lambda(w, t) for w in words for t in range(rack.order))
    return terms


def _quandle_columns(rack: RackTable, base: int, terms: Sequence[WringTerm], offsets: Dict[WringTerm, int],
                     module: RackModule, size: int) -> List[Tuple[int, ...]]:
    """lambda_{t,t} relators on the truncated generators at base"""
    columns = []
    for term in terms:
        if not is_degenerate_term(rack, base, term):
            continue
        replacement = quandle_relation(term)
        if any(t not in offsets for t, _ in replacement):
            continue
        for i in range(module.groups[term.t].gens):
            col = [0] * size
            col[offsets[term] + i] += 1
            for t, k in replacement:
                col[offsets[t] + i] -= k
            columns.append(tuple(col))
    return columns


def _reduce_once(module: RackModule, base: int, term: WringTerm) -> Tuple[WringTerm, GroupHom]:
    """Peel the first rewrite off a term: term (x) a = shorter (x) step(a)"""
    X = module.rack
    if term.kind is TermKind.RHO:
        first, rest = term.word.letters[0], OperatorWord(term.word.letters[1:])
        hom, _ = letter_step(module, term_source(X, base, term), first)
        return WringTerm.rho(rest), hom
    if term.word:
        first, rest = term.word.letters[0], OperatorWord(term.word.letters[1:])
        hom, nxt = letter_step(module, term.t, first)
        return WringTerm.rho_lambda(rest, nxt), hom
    other = X.op_inv(base, term.t)
    return WringTerm.rho(), module.psi[term.t][other]


def collapse(module: RackModule, word_length: int = 1, seed: int = 0, quandle: bool = False) -> CollapseReport:
    """Check ZX (x)_X A = A on terms with words up to word_length.

    With quandle set, the presentations also impose lambda_{t,t} + rho_{t,t} = 1.
    """
    if module.variance is not Variance.LEFT:
        raise VarianceMismatchError("collapse needs a left module")
    X = module.rack
    if quandle and not X.is_quandle:
        raise PreconditionError("quandle collapse needs a quandle")
    n = X.order
    rnd = random.Random(seed)
    report = CollapseReport(word_length, quandle=quandle)
    truncated = [_truncated_terms(X, x, word_length) for x in range(n)]
    collapse_maps = []
    for x in range(n):
        terms = truncated[x]
        offsets, summands = {}, []
        for term in terms:
            offsets[term] = sum(g.gens for g in summands)
            summands.append(module.groups[term_source(X, x, term)])
        ambient = direct_sum_group(summands)
        size = ambient.gens
        rels = list(ambient.rels.columns())
        columns = []
        for term in terms:
            src = module.groups[term_source(X, x, term)]
            steps = collapse_steps(module, x, term)
            hom = compose_steps(steps) if steps else GroupHom.identity(src)
            for i in range(src.gens):
                e = tuple(int(k == i) for k in range(src.gens))
                columns.append(module.groups[x].canonical(hom(e)))
                if term != WringTerm.rho():
                    shorter, step = _reduce_once(module, x, term)
                    col = [0] * size
                    col[offsets[term] + i] += 1
                    image = step(e)
                    for k, v in enumerate(image):
                        col[offsets[shorter] + k] -= v
                    rels.append(tuple(col))
        if quandle:
            rels.extend(_quandle_columns(X, x, terms, offsets, module, size))
        presented = FgAbGroup(size, IntMatrix.from_columns(rels, size))
        c_x = GroupHom(presented, module.groups[x], IntMatrix.from_columns(columns, module.groups[x].gens))
        collapse_maps.append((presented, c_x, offsets))
        report.groups.append(format_group(presented))
        if presented.invariants != module.groups[x].invariants:
            report.invariants_match = False
            report.failures.append(f"B_{x} = {format_group(presented)} differs from A_{x}")
        if not is_iso(c_x):
            report.isomorphisms = False
            report.failures.append(f"collapse map at {x} is not an isomorphism")

        for term in terms:
            steps = collapse_steps(module, x, term)
            if len(steps) < 2 and term.kind is TermKind.RHO:
                continue
            reference = compose_steps(steps)
            shuffled = compose_steps(steps, rnd)
            if term.kind is TermKind.RHO_LAMBDA:
                moved = compose_steps(collapse_steps(module, x, term, rnd.randint(0, len(term.word))), rnd)
            else:
                moved = shuffled
            if not (homs_equal(reference, shuffled) and homs_equal(reference, moved)):
                report.confluent = False
                report.failures.append(f"rewrites of {term} at {x} disagree")

    for x in range(n):
        presented, c_x, offsets = collapse_maps[x]
        for term in truncated[x]:
            src = module.groups[term_source(X, x, term)]
            element = WringElement.build(X, x, [(term, 1)])
            for i in range(src.gens):
                e = tuple(int(k == i) for k in range(src.gens))
                base_value = collapse_element(module, element, e)
                for y in range(n):
                    lifted = WringElement.rho(X, X.op(x, y), OperatorWord.letter(y)) * element
                    got = collapse_element(module, lifted, e)
                    want = module.phi[x][y](base_value)
                    if not module.groups[X.op(x, y)].equal(got, want):
                        report.structure_maps_match = False
                        report.failures.append(f"chi_{x},{y} differs from phi on {term}")
                    # lambda_{x,y} lands at y^x
                    lifted = WringElement.lam(X, x, y) * element
                    got = collapse_element(module, lifted, e)
                    want = module.psi[x][y](base_value)
                    if not module.groups[X.op(y, x)].equal(got, want):
                        report.structure_maps_match = False
                        report.failures.append(f"omega_{x},{y} differs from psi on {term}")
    logger.info(f"Collapse check (words <= {word_length}): ok={report.ok}")
    return report


@dataclass(frozen=True)
class FreeSpace:
    """Direct sum over a labelled basis family, with its injections and projections"""
    group: FgAbGroup
    points: Tuple[int, ...]
    injections: Tuple[GroupHom, ...]
    projections: Tuple[GroupHom, ...]


def _free_space(points: Sequence[int], module: RackModule) -> FreeSpace:
    total = direct_sum([module.groups[x] for x in points])
    return FreeSpace(total.group, tuple(points), tuple(total.injections), tuple(total.projections))


def free_hom_space(points: Sequence[int], module: RackModule) -> FreeSpace:
    """Hom_X(F S, A) = product over s of A_{x(s)}"""
    if module.variance is not Variance.LEFT:
        raise VarianceMismatchError("free_hom_space needs a left module")
    return _free_space(points, module)


def free_tensor(points: Sequence[int], module: RackModule) -> FreeSpace:
    """F S (x)_X A = sum over s of A_{x(s)}"""
    if module.variance is not Variance.RIGHT:
        raise VarianceMismatchError("free_tensor needs a right module")
    return _free_space(points, module)
