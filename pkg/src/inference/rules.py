"""Sound inference rules over a FactBase.

Each rule yields :class:`Derivation` objects naming the conclusion, the
premise facts it used and the numeric side conditions it checked. Rules scan
facts in sorted order and the rule list has a fixed order, so closure is
deterministic.

Rules that move from h to h +/- 1 only act for h up to ``ceiling``; the
others fire at any h present in the base.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Tuple

from .facts import Fact, FactBase, Predicate

P = Predicate


@dataclass(frozen=True)
class RuleContext:
    """Numbers of the variety that rule side conditions refer to."""
    n: int
    N: int
    ceiling: int

    def dim_abstract(self, h: int) -> int:
        return h * (self.n + 1) - 1


@dataclass(frozen=True)
class Derivation:
    conclusion: Fact
    premises: Tuple[Fact, ...]
    side_conditions: Tuple[str, ...] = ()


RuleFn = Callable[[FactBase, RuleContext], Iterator[Derivation]]


@dataclass(frozen=True)
class Rule:
    rule_id: str
    description: str
    apply: RuleFn


def _not1twd_from_h1(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    f = base.lookup(P.NOT_TWD, 1)
    if f is not None:
        yield Derivation(Fact(P.NOT_1TWD), (f,))


def _h1_from_not1twd(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    f = base.lookup(P.NOT_1TWD)
    if f is not None:
        yield Derivation(Fact(P.NOT_TWD, 1), (f,))


def _nottwd_down(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for f in base.with_predicate(P.NOT_TWD):
        if 2 <= f.h <= ctx.ceiling:
            yield Derivation(Fact(P.NOT_TWD, f.h - 1), (f,), (f'{f.h} <= {ctx.ceiling}',))


def _twd_up(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for f in base.with_predicate(P.TWD):
        h = f.h + 1
        if h <= ctx.ceiling and ctx.dim_abstract(h) < ctx.N:
            yield Derivation(Fact(P.TWD, h), (f,), (f'dim_abstract({h}) = {ctx.dim_abstract(h)} < N = {ctx.N}',))


def _defective_fiber(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for f in base.with_predicate(P.DEFECTIVE):
        yield Derivation(Fact(P.FIBER_TYPE, f.h), (f,))


def _fiber_up(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for f in base.with_predicate(P.FIBER_TYPE):
        if f.h + 1 <= ctx.ceiling:
            yield Derivation(Fact(P.FIBER_TYPE, f.h + 1), (f,), (f'{f.h + 1} <= {ctx.ceiling}',))


def _finite_down(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for f in base.with_predicate(P.GENERICALLY_FINITE):
        if 2 <= f.h <= ctx.ceiling:
            yield Derivation(Fact(P.GENERICALLY_FINITE, f.h - 1), (f,), (f'{f.h} <= {ctx.ceiling}',))


def _nondefective_finite(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for f in base.with_predicate(P.NOT_DEFECTIVE):
        if ctx.dim_abstract(f.h) <= ctx.N:
            yield Derivation(Fact(P.GENERICALLY_FINITE, f.h), (f,),
                             (f'dim_abstract({f.h}) = {ctx.dim_abstract(f.h)} <= N = {ctx.N}',))


def _nondefective_dominant(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for f in base.with_predicate(P.NOT_DEFECTIVE):
        if ctx.dim_abstract(f.h) >= ctx.N:
            yield Derivation(Fact(P.DOMINANT, f.h), (f,),
                             (f'dim_abstract({f.h}) = {ctx.dim_abstract(f.h)} >= N = {ctx.N}',))


def _fiber_not_identifiable(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for f in base.with_predicate(P.FIBER_TYPE):
        yield Derivation(Fact(P.NOT_IDENTIFIABLE, f.h), (f,))


def _r1(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    """Not h-twd gives h-identifiable, here only when Sec_h is proper or h(n+1)-1 <= N."""
    for f in base.with_predicate(P.NOT_TWD):
        if ctx.dim_abstract(f.h) <= ctx.N:
            yield Derivation(Fact(P.IDENTIFIABLE, f.h), (f,),
                             (f'dim_abstract({f.h}) = {ctx.dim_abstract(f.h)} <= N = {ctx.N}',))
            continue
        proper = base.lookup(P.SEC_PROPER, f.h)
        if proper is not None:
            yield Derivation(Fact(P.IDENTIFIABLE, f.h), (f, proper))


def _finite_with_not1twd(base: FactBase) -> Iterator[Tuple[Fact, Fact]]:
    smooth = base.lookup(P.NOT_1TWD)
    if smooth is None:
        return
    for f in base.with_predicate(P.GENERICALLY_FINITE):
        yield smooth, f


def _r2a(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for smooth, f in _finite_with_not1twd(base):
        k = f.h
        if k >= ctx.n and k - ctx.n >= 1:
            yield Derivation(Fact(P.NOT_TWD, k - ctx.n), (smooth, f), (f'k = {k} >= n = {ctx.n}',))


def _r2b(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for smooth, f in _finite_with_not1twd(base):
        k = f.h
        proper = base.lookup(P.SEC_PROPER, k)
        if k >= ctx.n and proper is not None:
            yield Derivation(Fact(P.NOT_TWD, k - ctx.n + 1), (smooth, f, proper), (f'k = {k} >= n = {ctx.n}',))


def _r3a(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for smooth, f in _finite_with_not1twd(base):
        k = f.h
        if k > 2 * ctx.n:
            yield Derivation(Fact(P.NOT_TWD, k - 1), (smooth, f), (f'k = {k} > 2n = {2 * ctx.n}',))


def _r3b(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    for smooth, f in _finite_with_not1twd(base):
        k = f.h
        proper = base.lookup(P.SEC_PROPER, k)
        if k >= 2 * ctx.n and proper is not None:
            yield Derivation(Fact(P.NOT_TWD, k - 1), (smooth, f, proper), (f'k = {k} >= 2n = {2 * ctx.n}',))


def _r4(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    """h > n, not (h-1)-twd and not (h+1)-defective give h-identifiable."""
    for f in base.with_predicate(P.NOT_DEFECTIVE):
        h = f.h - 1
        if h <= ctx.n or ctx.dim_abstract(h + 1) > ctx.N:
            continue
        previous = base.lookup(P.NOT_TWD, h - 1)
        if previous is not None:
            yield Derivation(Fact(P.IDENTIFIABLE, h), (previous, f),
                             (f'h = {h} > n = {ctx.n}',
                              f'N = {ctx.N} >= (h+2)(n+1)-1 = {ctx.dim_abstract(h + 1)}'))


def _r5(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    """A generically finite (k+1)-secant map and not (k-1)-twd give not k-twd."""
    for f in base.with_predicate(P.GENERICALLY_FINITE):
        k = f.h - 1
        if k <= ctx.n or ctx.N < (k + 1) * (ctx.n + 1) - 1:
            continue
        previous = base.lookup(P.NOT_TWD, k - 1)
        if previous is not None:
            yield Derivation(Fact(P.NOT_TWD, k), (previous, f),
                             (f'k = {k} > n = {ctx.n}',
                              f'N = {ctx.N} >= (k+1)(n+1)-1 = {(k + 1) * (ctx.n + 1) - 1}'))


def _r6(base: FactBase, ctx: RuleContext) -> Iterator[Derivation]:
    """Contact dimension grows with h while the secant maps stay finite."""
    smooth = base.lookup(P.NOT_1TWD)
    if smooth is None:
        return
    for f in base.with_predicate(P.TWD):
        yield Derivation(Fact(P.FIBER_TYPE, f.h + ctx.n), (f, smooth))


RULES: List[Rule] = [
    Rule('not1twd-from-h1', 'NotTwd(1) => Not1Twd', _not1twd_from_h1),
    Rule('h1-from-not1twd', 'Not1Twd => NotTwd(1)', _h1_from_not1twd),
    Rule('nottwd-down', 'NotTwd(h) => NotTwd(h-1)', _nottwd_down),
    Rule('twd-up', 'Twd(h) and Sec_(h+1) proper => Twd(h+1)', _twd_up),
    Rule('defective-fiber', 'Defective(h) => FiberType(h)', _defective_fiber),
    Rule('fiber-up', 'FiberType(h) => FiberType(h+1)', _fiber_up),
    Rule('finite-down', 'GenericallyFinite(h) => GenericallyFinite(h-1)', _finite_down),
    Rule('nondefective-finite', 'NotDefective(h), h(n+1)-1 <= N => GenericallyFinite(h)', _nondefective_finite),
    Rule('nondefective-dominant', 'NotDefective(h), h(n+1)-1 >= N => Dominant(h)', _nondefective_dominant),
    Rule('fiber-not-identifiable', 'FiberType(h) => NotIdentifiable(h)', _fiber_not_identifiable),
    Rule('R1', 'NotTwd(h) and (SecProper(h) or h(n+1)-1 <= N) => Identifiable(h)', _r1),
    Rule('R2a', 'Not1Twd, GenericallyFinite(k), k >= n => NotTwd(k-n)', _r2a),
    Rule('R2b', 'Not1Twd, GenericallyFinite(k), SecProper(k), k >= n => NotTwd(k-n+1)', _r2b),
    Rule('R3a', 'Not1Twd, GenericallyFinite(k), k > 2n => NotTwd(k-1)', _r3a),
    Rule('R3b', 'Not1Twd, GenericallyFinite(k), SecProper(k), k >= 2n => NotTwd(k-1)', _r3b),
    Rule('R4', 'h > n, NotTwd(h-1), NotDefective(h+1) => Identifiable(h)', _r4),
    Rule('R5', 'k > n, N >= (k+1)(n+1)-1, NotTwd(k-1), GenericallyFinite(k+1) => NotTwd(k)', _r5),
    Rule('R6', 'Twd(j), Not1Twd => FiberType(j+n)', _r6),
]

RULES_BY_ID: Dict[str, Rule] = {rule.rule_id: rule for rule in RULES}
