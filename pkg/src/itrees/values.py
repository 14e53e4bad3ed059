"""Dynamically tagged values.

Every answer an environment can give, every argument an event can carry, and
every result a tree can return is a :class:`UValue`.  Tags replace the static
typing a dependently typed host would provide; misuse surfaces as
:class:`AnswerTagMismatch` at the point a continuation is applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

NAT_BITS = 64
NAT_MASK = (1 << NAT_BITS) - 1


class Tag(Enum):
    UNIT = "unit"
    NAT = "nat"
    BOOL = "bool"
    LABEL = "label"
    PAIR = "pair"
    SYM = "sym"
    MAP = "map"
    EMPTY = "empty"


class AnswerTagMismatch(TypeError):
    """A value with the wrong tag reached a tagged continuation or port."""


@dataclass(frozen=True)
class UValue:
    """A tagged runtime value.

    payload depends on the tag:
      UNIT  -> None
      NAT   -> int in [0, 2**64)
      BOOL  -> bool
      LABEL -> int index, with ``bound`` giving the finite domain size
      PAIR  -> (UValue, UValue)
      SYM   -> nonempty identifier string
      MAP   -> tuple of (key, UValue) pairs sorted by key; keys are str or int
      EMPTY -> never constructed (answer tag of halting events only)
    """

    tag: Tag
    payload: object = None
    bound: int | None = None

    def __repr__(self):
        return f"UValue<{render_value(self)}>"


UNIT = UValue(Tag.UNIT)
TRUE = UValue(Tag.BOOL, True)
FALSE = UValue(Tag.BOOL, False)


def unit() -> UValue:
    return UNIT


def nat(n: int) -> UValue:
    if not isinstance(n, int) or isinstance(n, bool) or not 0 <= n <= NAT_MASK:
        raise AnswerTagMismatch(f"not a 64-bit natural: {n!r}")
    return UValue(Tag.NAT, n)


def boolean(b: bool) -> UValue:
    return TRUE if b else FALSE


def label(index: int, bound: int) -> UValue:
    if not 0 <= index < bound:
        raise AnswerTagMismatch(f"label {index} out of bound {bound}")
    return UValue(Tag.LABEL, index, bound)


def pair(a: UValue, b: UValue) -> UValue:
    if not (isinstance(a, UValue) and isinstance(b, UValue)):
        raise AnswerTagMismatch("pair components must be UValues")
    return UValue(Tag.PAIR, (a, b))


def sym(name: str) -> UValue:
    if not isinstance(name, str) or not name:
        raise AnswerTagMismatch(f"not an identifier: {name!r}")
    return UValue(Tag.SYM, name)


def fst(v: UValue) -> UValue:
    if v.tag is not Tag.PAIR:
        raise AnswerTagMismatch(f"fst of non-pair {v!r}")
    return v.payload[0]


def snd(v: UValue) -> UValue:
    if v.tag is not Tag.PAIR:
        raise AnswerTagMismatch(f"snd of non-pair {v!r}")
    return v.payload[1]


# Sums are encoded as Pair(Bool is_left, payload); no dedicated tag.

def inl(v: UValue) -> UValue:
    return pair(TRUE, v)


def inr(v: UValue) -> UValue:
    return pair(FALSE, v)


def un_sum(v: UValue) -> tuple[bool, UValue]:
    """Split a sum-encoded value into (is_left, payload)."""
    if v.tag is not Tag.PAIR:
        raise AnswerTagMismatch(f"not a sum value: {v!r}")
    side, payload = v.payload
    if side.tag is not Tag.BOOL:
        raise AnswerTagMismatch(f"not a sum value: {v!r}")
    return side.payload, payload


# Saturating/wrapping 64-bit arithmetic, shared by both language semantics.

def nat_add(a: int, b: int) -> int:
    return (a + b) & NAT_MASK


def nat_sub(a: int, b: int) -> int:
    return a - b if a >= b else 0


def nat_mul(a: int, b: int) -> int:
    return (a * b) & NAT_MASK


# Finite maps: ordered association tuples inside a MAP UValue.  Absent keys
# are the concern of the map-event handlers (which carry a default); map
# equality is key set plus per-key values, which UValue equality gives us
# for free on the sorted representation.

def umap(items=()) -> UValue:
    entries = dict(items)
    for k, v in entries.items():
        if not isinstance(k, (str, int)) or isinstance(k, bool):
            raise AnswerTagMismatch(f"bad map key: {k!r}")
        if not isinstance(v, UValue):
            raise AnswerTagMismatch(f"bad map value: {v!r}")
    return UValue(Tag.MAP, tuple(sorted(entries.items())))


def map_items(m: UValue):
    if m.tag is not Tag.MAP:
        raise AnswerTagMismatch(f"not a map: {m!r}")
    return m.payload


def map_get(m: UValue, key, default: UValue) -> UValue:
    for k, v in map_items(m):
        if k == key:
            return v
    return default


def map_set(m: UValue, key, value: UValue) -> UValue:
    rest = tuple((k, v) for k, v in map_items(m) if k != key)
    return UValue(Tag.MAP, tuple(sorted(rest + ((key, value),))))


def map_remove(m: UValue, key) -> UValue:
    return UValue(Tag.MAP, tuple((k, v) for k, v in map_items(m) if k != key))


@dataclass(frozen=True)
class VType:
    """Shape of a value slot: a tag plus, for labels, the finite bound."""

    tag: Tag
    bound: int | None = None

    def accepts(self, v: UValue) -> bool:
        if self.tag is Tag.EMPTY:
            return False
        if v.tag is not self.tag:
            return False
        if self.tag is Tag.LABEL and self.bound is not None:
            return v.bound == self.bound
        return True

    def check(self, v: UValue, what: str = "value") -> UValue:
        if not self.accepts(v):
            raise AnswerTagMismatch(f"{what} {v!r} does not fit {self}")
        return v

    def __repr__(self):
        if self.tag is Tag.LABEL and self.bound is not None:
            return f"label<{self.bound}>"
        return self.tag.value


UNIT_T = VType(Tag.UNIT)
NAT_T = VType(Tag.NAT)
BOOL_T = VType(Tag.BOOL)
SYM_T = VType(Tag.SYM)
PAIR_T = VType(Tag.PAIR)
MAP_T = VType(Tag.MAP)
EMPTY_T = VType(Tag.EMPTY)


def label_t(bound: int) -> VType:
    return VType(Tag.LABEL, bound)


def render_value(v: UValue) -> str:
    """Stable textual form used by trace printing and the command line."""
    if v.tag is Tag.UNIT:
        return "()"
    if v.tag is Tag.NAT:
        return str(v.payload)
    if v.tag is Tag.BOOL:
        return "true" if v.payload else "false"
    if v.tag is Tag.LABEL:
        return f"L{v.payload}/{v.bound}"
    if v.tag is Tag.PAIR:
        a, b = v.payload
        return f"({render_value(a)},{render_value(b)})"
    if v.tag is Tag.SYM:
        return str(v.payload)
    if v.tag is Tag.MAP:
        inside = ",".join(f"{k}={render_value(x)}" for k, x in v.payload)
        return "{" + inside + "}"
    return "<empty>"
