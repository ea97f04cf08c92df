"""
The wring ZX
Finite integer combinations of rho and rho-lambda symbols at a base element,
with the multiplication table, the augmentation map and the quandle
quotient that imposes lambda_{x,x} + rho_{x,x} = 1.

A rho term with word w at base b stands for rho_{b^{w-bar}, w}(*) and has
source b^{w-bar}. A rho-lambda term (v, t) at base b stands for
rho_{b^{v-bar}, v} lambda_{t, b^{v-bar t-bar}}(*) and has source t.
"""

import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import IncompatibleBasesError, PreconditionError
from .rack import OperatorWord, RackTable, orbit_index
from .utils import get_logger

logger = get_logger(__name__)


class TermKind(Enum):
    RHO = "rho"
    RHO_LAMBDA = "rho_lambda"


@dataclass(frozen=True)
class WringTerm:
    kind: TermKind
    word: OperatorWord
    t: Optional[int] = None

    def __post_init__(self):
        if (self.kind is TermKind.RHO) != (self.t is None):
            raise ValueError("rho terms carry no t; rho-lambda terms need one")

    @classmethod
    def rho(cls, word: OperatorWord = OperatorWord()) -> "WringTerm":
        return cls(TermKind.RHO, word)

    @classmethod
    def rho_lambda(cls, word: OperatorWord, t: int) -> "WringTerm":
        return cls(TermKind.RHO_LAMBDA, word, t)

    def sort_key(self):
        return (self.kind.value, len(self.word), self.word.letters, -1 if self.t is None else self.t)

    def __str__(self) -> str:
        if self.kind is TermKind.RHO:
            return f"rho[{self.word}]"
        return f"rho[{self.word}]lambda[{self.t}]"


def term_source(rack: RackTable, base: int, term: WringTerm) -> int:
    if term.kind is TermKind.RHO:
        return rack.act(base, term.word.inverse())
    return term.t


@dataclass(frozen=True)
class WringElement:
    """Integer combination of terms at one base element; zero coefficients are dropped"""
    rack: RackTable
    base: int
    terms: Tuple[Tuple[WringTerm, int], ...] = ()

    @classmethod
    def build(cls, rack: RackTable, base: int, items: Iterable[Tuple[WringTerm, int]]) -> "WringElement":
        acc: Dict[WringTerm, int] = {}
        for term, c in items:
            acc[term] = acc.get(term, 0) + c
        ordered = sorted(((t, c) for t, c in acc.items() if c), key=lambda tc: tc[0].sort_key())
        return cls(rack, base, tuple(ordered))

    @classmethod
    def unit(cls, rack: RackTable, base: int) -> "WringElement":
        """(*) at base"""
        return cls.build(rack, base, [(WringTerm.rho(), 1)])

    @classmethod
    def rho(cls, rack: RackTable, base: int, word: OperatorWord, coeff: int = 1) -> "WringElement":
        return cls.build(rack, base, [(WringTerm.rho(word), coeff)])

    @classmethod
    def rho_lambda(cls, rack: RackTable, base: int, word: OperatorWord, t: int,
                   coeff: int = 1) -> "WringElement":
        return cls.build(rack, base, [(WringTerm.rho_lambda(word, t), coeff)])

    @classmethod
    def lam(cls, rack: RackTable, y: int, x: int) -> "WringElement":
        """lambda_{y,x}(*), at base x^y with source y"""
        return cls.rho_lambda(rack, rack.op(x, y), OperatorWord(), y)

    def is_zero(self) -> bool:
        return not self.terms

    def sources(self) -> set:
        return {term_source(self.rack, self.base, t) for t, _ in self.terms}

    def _same_base(self, other: "WringElement"):
        if self.rack != other.rack or self.base != other.base:
            raise IncompatibleBasesError("Wring elements live at different bases")

    def __add__(self, other: "WringElement") -> "WringElement":
        self._same_base(other)
        return WringElement.build(self.rack, self.base, self.terms + other.terms)

    def __neg__(self) -> "WringElement":
        return WringElement(self.rack, self.base, tuple((t, -c) for t, c in self.terms))

    def __sub__(self, other: "WringElement") -> "WringElement":
        return self + (-other)

    def scale(self, k: int) -> "WringElement":
        return WringElement.build(self.rack, self.base, ((t, k * c) for t, c in self.terms))

    def __mul__(self, other: "WringElement") -> "WringElement":
        return wring_mul(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{t}" for t, c in self.terms) + f" @ {self.base}"


def _term_product(rack: RackTable, p: WringTerm, q: WringTerm) -> List[Tuple[WringTerm, int]]:
    v, u = p.word, q.word
    if p.kind is TermKind.RHO and q.kind is TermKind.RHO:
        return [(WringTerm.rho(u * v), 1)]
    if p.kind is TermKind.RHO:
        return [(WringTerm.rho_lambda(u * v, q.t), 1)]
    if q.kind is TermKind.RHO:
        return [(WringTerm.rho_lambda(u * v, rack.act(p.t, u.inverse())), 1)]
    return [
        (WringTerm.rho_lambda(u * v, q.t), 1),
        (WringTerm.rho_lambda(u * OperatorWord.letter(p.t) * v, q.t), -1),
    ]


def wring_mul(p: WringElement, q: WringElement) -> WringElement:
    """Bilinear product; every term of p must have source q.base.

    rho(v) rho(u) = rho(uv), rho(v) rl(u,s) = rl(uv,s),
    rl(v,t) rho(u) = rl(uv, t^{u-bar}), rl(v,t) rl(u,s) = rl(uv,s) - rl(utv,s)
    """
    if p.rack != q.rack:
        raise IncompatibleBasesError("Wring elements over different racks")
    rack = p.rack
    for term, _ in p.terms:
        if term_source(rack, p.base, term) != q.base:
            raise IncompatibleBasesError(
                f"Term {term} at base {p.base} has source "
                f"{term_source(rack, p.base, term)}, right factor sits at {q.base}"
            )
    items = []
    for pt, pc in p.terms:
        for qt, qc in q.terms:
            for term, c in _term_product(rack, pt, qt):
                items.append((term, c * pc * qc))
    return WringElement.build(rack, p.base, items)


def augmentation(p: WringElement) -> int:
    """Sum of rho coefficients"""
    return sum(c for t, c in p.terms if t.kind is TermKind.RHO)


def word_image(rack: RackTable, word: OperatorWord) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Image of a word under As X -> Inn(X) x Z^orbits"""
    index = orbit_index(rack)
    counts = [0] * (max(index) + 1)
    for y, s in word:
        counts[index[y]] += s
    return rack.permutation(word), tuple(counts)


def project(p: WringElement) -> Dict[Tuple, int]:
    """Coefficients keyed by the operator image of each term's word"""
    acc: Counter = Counter()
    for term, c in p.terms:
        acc[(term.kind.value, word_image(p.rack, term.word), term.t)] += c
    return {k: v for k, v in acc.items() if v}


def equal_in_operator_image(p: WringElement, q: WringElement) -> bool:
    return p.base == q.base and project(p) == project(q)


def is_degenerate_term(rack: RackTable, base: int, term: WringTerm) -> bool:
    """A rho-lambda term whose lambda is lambda_{t,t}; over a quandle that means b^{v-bar} = t"""
    return term.kind is TermKind.RHO_LAMBDA and rack.act(base, term.word.inverse()) == term.t


def quandle_relation(term: WringTerm) -> List[Tuple[WringTerm, int]]:
    """rho_v lambda_{t,t} = rho_v - rho_v rho_{t,t}, as rho terms with coefficients"""
    return [(WringTerm.rho(term.word), 1), (WringTerm.rho(OperatorWord.letter(term.t) * term.word), -1)]


def quandle_reduce(p: WringElement) -> WringElement:
    """Image in the quandle wring: every degenerate rho-lambda term is rewritten with rho terms"""
    if not p.rack.is_quandle:
        raise PreconditionError("The quandle wring needs a quandle")
    items = []
    for term, c in p.terms:
        if is_degenerate_term(p.rack, p.base, term):
            items.extend((t, c * k) for t, k in quandle_relation(term))
        else:
            items.append((term, c))
    return WringElement.build(p.rack, p.base, items)


def equal_in_quandle_wring(p: WringElement, q: WringElement) -> bool:
    return equal_in_operator_image(quandle_reduce(p), quandle_reduce(q))


def words_up_to(rack: RackTable, length: int) -> List[OperatorWord]:
    """All freely reduced words of length <= length"""
    letters = [(y, s) for y in range(rack.order) for s in (1, -1)]
    words = [OperatorWord()]
    frontier = [OperatorWord()]
    for _ in range(length):
        grown = []
        for w in frontier:
            for letter in letters:
                if w.letters and w.letters[-1] == (letter[0], -letter[1]):
                    continue
                grown.append(OperatorWord(w.letters + (letter,)))
        words.extend(grown)
        frontier = grown
    return words


def terms_with_source(rack: RackTable, base: int, source: int, max_length: int) -> List[WringTerm]:
    """Every term at base with the given source and word length <= max_length"""
    words = words_up_to(rack, max_length)
    terms = [WringTerm.rho(w) for w in words if rack.act(base, w.inverse()) == source]
    terms.extend(WringTerm.rho_lambda(w, source) for w in words)
    return terms


def random_element(rack: RackTable, base: int, source: int, rnd: random.Random,
                   max_length: int = 2, max_terms: int = 3) -> WringElement:
    """Random homogeneous element: every term sits at base and has the given source"""
    pool = terms_with_source(rack, base, source, max_length)
    count = rnd.randint(1, max_terms)
    items = [(rnd.choice(pool), rnd.choice([-2, -1, 1, 2, 3])) for _ in range(count)]
    return WringElement.build(rack, base, items)
