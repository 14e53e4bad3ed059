"""The interaction-tree structure and its one-step observation.

A tree is observed one node at a time: ``observe`` resolves deferred
producers and pending bind continuations until a genuine return, silent
step, or event node surfaces.  Trees are immutable; binding is constant
work because the continuation is queued rather than pushed through the
structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .values import AnswerTagMismatch, UValue


class _RetN:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


class _TauN:
    __slots__ = ("rest",)

    def __init__(self, rest):
        self.rest = rest


class _VisN:
    __slots__ = ("event", "kont")

    def __init__(self, event, kont):
        self.event = event
        self.kont = kont


class _Thunk:
    """Deferred tree producer, evaluated at most once."""

    __slots__ = ("fn", "tree")

    def __init__(self, fn):
        self.fn = fn
        self.tree = None

    def force(self):
        if self.tree is None:
            tree = self.fn()
            if type(tree) is not ITree:
                raise TypeError(f"deferred producer returned {tree!r}, not an ITree")
            self.tree = tree
            self.fn = None
        return self.tree


# The pending-bind queue is None, a single continuation, or a _Cat node.
# Concatenation and push are O(1); popping rotates left spines rightward,
# which is amortized O(1) in the linear use observation makes of it.

class _Cat:
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right


def _cat(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return _Cat(a, b)


def _pop(q):
    while type(q) is _Cat:
        left = q.left
        if type(left) is _Cat:
            q = _Cat(left.left, _cat(left.right, q.right))
        else:
            return left, q.right
    return q, None


class ITree:
    """An interaction tree: a head producer plus queued bind continuations."""

    __slots__ = ("_head", "_konts")

    def __init__(self, head, konts=None):
        self._head = head
        self._konts = konts

    def __repr__(self):
        return f"<ITree at {id(self):#x}>"


@dataclass(frozen=True)
class RetO:
    value: UValue


@dataclass(frozen=True)
class TauO:
    rest: ITree


@dataclass(frozen=True)
class VisO:
    event: object
    k: Callable[[UValue], ITree]


Observation = RetO | TauO | VisO


def ret(v: UValue) -> ITree:
    """The computation that immediately returns ``v``."""
    if not isinstance(v, UValue):
        raise AnswerTagMismatch(f"trees return UValues, got {v!r}")
    return ITree(_RetN(v))


def tau(t: ITree) -> ITree:
    """One silent step, then ``t``."""
    return ITree(_TauN(t))


def vis(event, kont: Callable[[UValue], ITree]) -> ITree:
    """Emit ``event`` and continue with the environment's answer.

    The continuation is wrapped so that answers whose tag disagrees with the
    event's declared answer type raise :class:`AnswerTagMismatch` when
    applied.
    """
    answer = event.answer

    def checked(x, _answer=answer, _kont=kont):
        _answer.check(x, "answer")
        return _kont(x)

    return ITree(_VisN(event, checked))


def lazy(fn: Callable[[], ITree]) -> ITree:
    """Defer construction; ``fn`` runs at most once, at first observation."""
    return ITree(_Thunk(fn))


def bind(t: ITree, k: Callable[[UValue], ITree]) -> ITree:
    """Run ``t``; feed its return value to ``k``.  Constant work."""
    return ITree(t._head, _cat(t._konts, k))


def trigger(event) -> ITree:
    """Emit ``event`` and return whatever the environment answers."""
    return vis(event, ret)


def observe(t: ITree) -> Observation:
    """Resolve to the next return, silent step, or event node.

    Deferred producers are forced (once) and return-value continuations are
    consumed until a genuine node surfaces; each resolution step consumes a
    pending continuation or a produced node, so a single call terminates
    even on globally infinite trees.
    """
    head = t._head
    konts = t._konts
    while True:
        tp = type(head)
        if tp is _Thunk:
            u = head.force()
            konts = _cat(u._konts, konts)
            head = u._head
        elif tp is _RetN:
            if konts is None:
                return RetO(head.value)
            k, konts = _pop(konts)
            nxt = k(head.value)
            if type(nxt) is not ITree:
                raise TypeError(f"continuation returned {nxt!r}, not an ITree")
            konts = _cat(nxt._konts, konts)
            head = nxt._head
        elif tp is _TauN:
            rest = head.rest
            if konts is None:
                return TauO(rest)
            return TauO(ITree(rest._head, _cat(rest._konts, konts)))
        else:
            event, kf = head.event, head.kont
            if konts is None:
                return VisO(event, kf)

            def resumed(x, _kf=kf, _ks=konts):
                nxt = _kf(x)
                return ITree(nxt._head, _cat(nxt._konts, _ks))

            return VisO(event, resumed)


def burn(n: int, t: ITree) -> ITree:
    """Strip up to ``n`` leading silent steps."""
    for _ in range(n):
        ob = observe(t)
        if type(ob) is not TauO:
            break
        t = ob.rest
    return t


def run_to_head(t: ITree, fuel: int) -> tuple[Observation, int]:
    """Burn silent steps up to ``fuel``; return the last observation and the
    number of steps consumed."""
    steps = 0
    ob = observe(t)
    while type(ob) is TauO and steps < fuel:
        steps += 1
        ob = observe(ob.rest)
    return ob, steps


def spin() -> ITree:
    """The silently divergent tree: observing it always yields a silent step
    leading back to itself."""
    t = lazy(lambda: tau(t))
    return t
