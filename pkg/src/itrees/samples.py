"""Small well-known trees and recursive handlers used by tests and demos."""

from __future__ import annotations

from .combinators import RecHandler, rec_call
from .core import ITree, bind, lazy, ret, tau, trigger, vis
from .events import IOE, EventSig, KindSpec, event
from .values import BOOL_T, NAT_T, boolean, nat, nat_sub, unit


def input_ev(path=()):
    return event(IOE, "Input", path=path)


def output_ev(n: int, path=()):
    return event(IOE, "Output", nat(n), path=path)


def echo() -> ITree:
    """Forward every input to the output, forever."""
    t = lazy(lambda: bind(trigger(input_ev()),
                          lambda x: bind(trigger(event(IOE, "Output", x)),
                                         lambda _: tau(t))))
    return t


def kill9() -> ITree:
    """Probe the environment until it answers 9, then stop."""
    t = lazy(lambda: vis(input_ev(), lambda n: ret(unit()) if n.payload == 9 else t))
    return t


ACKERMANN_E = EventSig("AckCall", (KindSpec("Ackermann", (NAT_T, NAT_T), NAT_T),))


def ackermann_handler() -> RecHandler:
    def body(e):
        m, n = e.args[0].payload, e.args[1].payload
        if m == 0:
            return ret(nat(n + 1))
        if n == 0:
            return rec_call(ACKERMANN_E, "Ackermann", nat(m - 1), nat(1))
        inner = rec_call(ACKERMANN_E, "Ackermann", nat(m), nat(n - 1))
        return bind(inner, lambda r: rec_call(ACKERMANN_E, "Ackermann", nat(m - 1), r))

    return RecHandler(ACKERMANN_E, body)


def ackermann_event(m: int, n: int):
    return event(ACKERMANN_E, "Ackermann", nat(m), nat(n))


EVEN_ODD_E = EventSig(
    "Parity",
    (
        KindSpec("Even", (NAT_T,), BOOL_T),
        KindSpec("Odd", (NAT_T,), BOOL_T),
    ),
)


def even_odd_handler() -> RecHandler:
    def body(e):
        n = e.args[0].payload
        if e.kind == "Even":
            if n == 0:
                return ret(boolean(True))
            return rec_call(EVEN_ODD_E, "Odd", nat(nat_sub(n, 1)))
        if n == 0:
            return ret(boolean(False))
        return rec_call(EVEN_ODD_E, "Even", nat(nat_sub(n, 1)))

    return RecHandler(EVEN_ODD_E, body)
