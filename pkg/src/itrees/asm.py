"""Asm: basic blocks wired into open control-flow subgraphs.

A unit has entry, exit, and hidden internal labels; its denotation maps an
entry label to the tree of register/memory events executed up to the exit
label, with internal jumps hidden by the loop combinator.  Linking is pure
block-table surgery; the semantic equations tying surgery to combinators on
denotations are checked by the test suite.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .combinators import KTree, loop
from .core import ITree, bind, ret, trigger
from .events import LEFT, RIGHT, EventSig, KindSpec, event
from .interp import handler_bimap, handler_id, Handler, ITREES, interp, interp_map
from .values import (
    EMPTY_T,
    NAT_T,
    SYM_T,
    UNIT_T,
    UValue,
    inl,
    inr,
    label,
    label_t,
    nat,
    nat_add,
    nat_mul,
    nat_sub,
    sym,
    un_sum,
)


class BoundViolation(ValueError):
    """A label or register reference escapes its declared finite domain."""


# Syntax.

@dataclass(frozen=True)
class Oreg:
    reg: int


@dataclass(frozen=True)
class Oimm:
    value: int


Operand = Union[Oreg, Oimm]


@dataclass(frozen=True)
class Imov:
    dst: int
    src: Operand


@dataclass(frozen=True)
class Iadd:
    dst: int
    lhs: int
    rhs: Operand


@dataclass(frozen=True)
class Isub:
    dst: int
    lhs: int
    rhs: Operand


@dataclass(frozen=True)
class Imul:
    dst: int
    lhs: int
    rhs: Operand


@dataclass(frozen=True)
class Iload:
    dst: int
    addr: str


@dataclass(frozen=True)
class Istore:
    addr: str
    src: Operand


Instr = Union[Imov, Iadd, Isub, Imul, Iload, Istore]


@dataclass(frozen=True)
class Bjmp:
    target: int


@dataclass(frozen=True)
class Bbrz:
    test: int
    yes: int
    no: int


@dataclass(frozen=True)
class Bhalt:
    pass


Branch = Union[Bjmp, Bbrz, Bhalt]


@dataclass(frozen=True)
class Block:
    instrs: tuple[Instr, ...]
    branch: Branch


def _branch_targets(b: Branch):
    if isinstance(b, Bjmp):
        return (b.target,)
    if isinstance(b, Bbrz):
        return (b.yes, b.no)
    return ()


@dataclass(frozen=True)
class AsmUnit:
    """An open control-flow subgraph.

    ``code`` is total on the internal+entry label domain, internal labels
    first; every branch target stays below internal+exits.
    """

    entries: int
    exits: int
    internal: int
    code: tuple[Block, ...]

    def __post_init__(self):
        if min(self.entries, self.exits, self.internal) < 0:
            raise BoundViolation("negative label counts")
        if len(self.code) != self.internal + self.entries:
            raise BoundViolation(
                f"block table has {len(self.code)} entries, "
                f"domain needs {self.internal + self.entries}"
            )
        bound = self.internal + self.exits
        for j, blk in enumerate(self.code):
            for t in _branch_targets(blk.branch):
                if not 0 <= t < bound:
                    raise BoundViolation(f"block {j} targets label {t} >= {bound}")


# Events.

REG_E = EventSig(
    "Reg",
    (
        KindSpec("GetReg", (NAT_T,), NAT_T),
        KindSpec("SetReg", (NAT_T, NAT_T), UNIT_T),
    ),
)

MEM_E = EventSig(
    "Memory",
    (
        KindSpec("Load", (SYM_T,), NAT_T),
        KindSpec("Store", (SYM_T, NAT_T), UNIT_T),
    ),
)

DONE_E = EventSig("Done", (KindSpec("Done", (), EMPTY_T),))

# Layout of the full alphabet: Reg +' (Memory +' Done).
_REG_PATH = (LEFT,)
_MEM_PATH = (RIGHT, LEFT)
_DONE_PATH = (RIGHT, RIGHT)


def get_reg(r: int) -> ITree:
    return trigger(event(REG_E, "GetReg", nat(r), path=_REG_PATH))


def set_reg(r: int, v: UValue) -> ITree:
    return trigger(event(REG_E, "SetReg", nat(r), v, path=_REG_PATH))


def load(addr: str) -> ITree:
    return trigger(event(MEM_E, "Load", sym(addr), path=_MEM_PATH))


def store(addr: str, v: UValue) -> ITree:
    return trigger(event(MEM_E, "Store", sym(addr), v, path=_MEM_PATH))


def halt() -> ITree:
    return trigger(event(DONE_E, "Done", path=_DONE_PATH))


def denote_operand(op: Operand) -> ITree:
    if isinstance(op, Oreg):
        return get_reg(op.reg)
    return ret(nat(op.value))


def denote_instr(i: Instr) -> ITree:
    if isinstance(i, Imov):
        return bind(denote_operand(i.src), lambda v: set_reg(i.dst, v))
    if isinstance(i, Iload):
        return bind(load(i.addr), lambda v: set_reg(i.dst, v))
    if isinstance(i, Istore):
        return bind(denote_operand(i.src), lambda v: store(i.addr, v))
    if isinstance(i, Iadd):
        f = nat_add
    elif isinstance(i, Isub):
        f = nat_sub
    else:
        f = nat_mul
    return bind(
        get_reg(i.lhs),
        lambda a: bind(
            denote_operand(i.rhs),
            lambda b: set_reg(i.dst, nat(f(a.payload, b.payload))),
        ),
    )


def denote_br(b: Branch, exit_bound: int) -> ITree:
    if isinstance(b, Bjmp):
        return ret(label(b.target, exit_bound))
    if isinstance(b, Bbrz):
        yes, no = b.yes, b.no
        return bind(
            get_reg(b.test),
            lambda v: ret(label(yes if v.payload == 0 else no, exit_bound)),
        )
    return halt()


def denote_bk(blk: Block, exit_bound: int) -> ITree:
    t = denote_br(blk.branch, exit_bound)
    for i in reversed(blk.instrs):
        t = bind(denote_instr(i), lambda _, _rest=t: _rest)
    return t


def denote_bks(u: AsmUnit) -> KTree:
    dom_bound = u.internal + u.entries
    cod_bound = u.internal + u.exits
    dom_t = label_t(dom_bound)
    # Trees are immutable, so each block denotes once and replays freely.
    trees = tuple(denote_bk(blk, cod_bound) for blk in u.code)

    def go(v):
        return trees[dom_t.check(v, "entry label").payload]

    return KTree(go, dom_t)


def den_asm(u: AsmUnit) -> KTree:
    """Denote a unit as a map from entry labels to exit labels, hiding the
    internal labels behind the loop combinator's back-edge."""
    ia = u.internal + u.entries
    bks = denote_bks(u)
    internal = u.internal

    def split(l):
        i = l.payload
        if i < internal:
            return ret(inl(label(i, internal)))
        return ret(inr(label(i - internal, u.exits)))

    def body(ca):
        is_left, payload = un_sum(ca)
        j = payload.payload if is_left else internal + payload.payload
        return bind(bks(label(j, ia)), split)

    looped = loop(KTree(body))

    def go(a):
        label_t(u.entries).check(a, "entry label")
        return looped(a)

    return KTree(go, label_t(u.entries))


# Linking combinators: pure block-table surgery.

def _relabel_block(blk: Block, f: Callable[[int], int]) -> Block:
    b = blk.branch
    if isinstance(b, Bjmp):
        nb = Bjmp(f(b.target))
    elif isinstance(b, Bbrz):
        nb = Bbrz(b.test, f(b.yes), f(b.no))
    else:
        nb = b
    return Block(blk.instrs, nb)


def app_asm(u1: AsmUnit, u2: AsmUnit) -> AsmUnit:
    """Place two units side by side; entries and exits concatenate."""
    i1, i2 = u1.internal, u2.internal

    def re1(l):
        return l if l < i1 else i1 + i2 + (l - i1)

    def re2(l):
        return i1 + l if l < i2 else i1 + i2 + u1.exits + (l - i2)

    blocks = [_relabel_block(u1.code[j], re1) for j in range(i1)]
    blocks += [_relabel_block(u2.code[j], re2) for j in range(i2)]
    blocks += [_relabel_block(u1.code[i1 + a], re1) for a in range(u1.entries)]
    blocks += [_relabel_block(u2.code[i2 + c], re2) for c in range(u2.entries)]
    return AsmUnit(u1.entries + u2.entries, u1.exits + u2.exits, i1 + i2, tuple(blocks))


def loop_asm(u: AsmUnit, wires: int) -> AsmUnit:
    """Internalize the first ``wires`` exits as back-edges into the first
    ``wires`` entries.  Label indices are already aligned, so only the
    classification changes."""
    if u.entries < wires or u.exits < wires:
        raise BoundViolation(f"cannot wire {wires} ports on asm {u.entries}->{u.exits}")
    return AsmUnit(u.entries - wires, u.exits - wires, u.internal + wires, u.code)


def pure_asm(entries: int, exits: int, f: Callable[[int], int]) -> AsmUnit:
    """One jump block per entry, targeting ``f(entry)``."""
    blocks = tuple(Block((), Bjmp(f(a))) for a in range(entries))
    return AsmUnit(entries, exits, 0, blocks)


def relabel_asm(entry_map: Sequence[int], exit_map: Sequence[int],
                u: AsmUnit, exits: int) -> AsmUnit:
    """Precompose entries with ``entry_map`` and postcompose exits with
    ``exit_map`` (one slot per old exit, values below ``exits``)."""
    if len(exit_map) != u.exits:
        raise BoundViolation("exit map must cover every exit")
    if any(not 0 <= x < exits for x in exit_map):
        raise BoundViolation("exit map escapes the new exit bound")
    i = u.internal

    def re(l):
        return l if l < i else i + exit_map[l - i]

    blocks = [_relabel_block(u.code[j], re) for j in range(i)]
    for a in entry_map:
        if not 0 <= a < u.entries:
            raise BoundViolation(f"entry map references entry {a}")
        blocks.append(_relabel_block(u.code[i + a], re))
    return AsmUnit(len(entry_map), exits, i, tuple(blocks))


def id_asm() -> AsmUnit:
    return pure_asm(1, 1, lambda a: a)


def seq_asm(u1: AsmUnit, u2: AsmUnit) -> AsmUnit:
    """Feed every exit of ``u1`` into the matching entry of ``u2``."""
    b = u1.exits
    if u2.entries != b:
        raise BoundViolation(f"seq mismatch: {b} exits vs {u2.entries} entries")
    app = app_asm(u1, u2)
    entry_map = tuple(range(u1.entries, u1.entries + b)) + tuple(range(u1.entries))
    exit_map = tuple(range(app.exits))
    return loop_asm(relabel_asm(entry_map, exit_map, app, app.exits), b)


TMP_IF = 0  # register the guard code leaves its result in


def cond_asm(e: Sequence[Instr]) -> AsmUnit:
    """Run the guard code, then branch: exit 0 when the test register is
    nonzero (the truthy arm), exit 1 when it is zero."""
    return AsmUnit(1, 2, 0, (Block(tuple(e), Bbrz(TMP_IF, 1, 0)),))


def if_asm(e: Sequence[Instr], t: AsmUnit, f: AsmUnit) -> AsmUnit:
    if t.entries != 1 or f.entries != 1 or t.exits != f.exits:
        raise BoundViolation("if arms must be asm 1 A with equal exits")
    a = t.exits
    both = app_asm(t, f)
    merged = relabel_asm((0, 1), tuple(range(a)) + tuple(range(a)), both, a)
    return seq_asm(cond_asm(e), merged)


def while_asm(e: Sequence[Instr], p: AsmUnit) -> AsmUnit:
    if p.entries != 1 or p.exits != 1:
        raise BoundViolation("loop body must be asm 1 1")
    body = if_asm(e, relabel_asm((0,), (0,), p, 2), pure_asm(1, 2, lambda _: 1))
    reenter = pure_asm(1, 2, lambda _: 0)
    both = app_asm(body, reenter)
    merged = relabel_asm((0, 1), (0, 1, 0, 1), both, 2)
    return loop_asm(merged, 1)


# Stateful interpretation: registers inner, memory outer.

def _reg_map_sig(default: int) -> EventSig:
    from .events import map_default_sig

    return map_default_sig(NAT_T, NAT_T, nat(default))


def _mem_map_sig(default: int) -> EventSig:
    from .events import map_default_sig

    return map_default_sig(SYM_T, NAT_T, nat(default))


def _h_reg(map_sig: EventSig) -> Handler:
    def apply(e):
        if e.kind == "GetReg":
            return trigger(event(map_sig, "LookupDefault", e.args[0]))
        if e.kind == "SetReg":
            return trigger(event(map_sig, "Insert", e.args[0], e.args[1]))
        raise ValueError(f"not a register event: {e!r}")

    return Handler(REG_E, ITREES, apply)


def _h_mem(map_sig: EventSig) -> Handler:
    def apply(e):
        if e.kind == "Load":
            return trigger(event(map_sig, "LookupDefault", e.args[0]))
        if e.kind == "Store":
            return trigger(event(map_sig, "Insert", e.args[0], e.args[1]))
        raise ValueError(f"not a memory event: {e!r}")

    return Handler(MEM_E, ITREES, apply)


def interp_asm(t: ITree, mem0: UValue, regs0: UValue, default: int = 0) -> ITree:
    """Realize register and memory events as finite maps (absent cells read
    ``default``).  The result tree returns Pair(mem, Pair(regs, result))."""
    h = handler_bimap(
        _h_reg(_reg_map_sig(default)),
        handler_bimap(_h_mem(_mem_map_sig(default)), handler_id(None)),
    )
    translated = interp(h, t)
    regs_done = interp_map(translated, regs0)
    return interp_map(regs_done, mem0)


# Text format.

class AsmSyntaxError(SyntaxError):
    def __init__(self, msg, line):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def _print_operand(op: Operand) -> str:
    return f"r{op.reg}" if isinstance(op, Oreg) else str(op.value)


def _print_instr(i: Instr) -> str:
    if isinstance(i, Imov):
        return f"mov r{i.dst}, {_print_operand(i.src)}"
    if isinstance(i, Iadd):
        return f"add r{i.dst}, r{i.lhs}, {_print_operand(i.rhs)}"
    if isinstance(i, Isub):
        return f"sub r{i.dst}, r{i.lhs}, {_print_operand(i.rhs)}"
    if isinstance(i, Imul):
        return f"mul r{i.dst}, r{i.lhs}, {_print_operand(i.rhs)}"
    if isinstance(i, Iload):
        return f"load r{i.dst}, @{i.addr}"
    return f"store @{i.addr}, {_print_operand(i.src)}"


def _print_branch(b: Branch) -> str:
    if isinstance(b, Bjmp):
        return f"jmp {b.target}"
    if isinstance(b, Bbrz):
        return f"brz r{b.test} -> {b.yes}, {b.no}"
    return "halt"


def print_asm(u: AsmUnit) -> str:
    lines = [f"asm entries={u.entries} exits={u.exits} internal={u.internal}"]
    for j, blk in enumerate(u.code):
        lines.append(f"block {j}:")
        for i in blk.instrs:
            lines.append(f"  {_print_instr(i)}")
        lines.append(f"  {_print_branch(blk.branch)}")
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"asm entries=(\d+) exits=(\d+) internal=(\d+)$")
_BLOCK = re.compile(r"block (\d+):$")
_REG = re.compile(r"r(\d+)$")
_ADDR = re.compile(r"@([A-Za-z_][A-Za-z0-9_]*)$")


def _parse_operand(text: str, line: int) -> Operand:
    m = _REG.match(text)
    if m:
        return Oreg(int(m.group(1)))
    if text.isdigit():
        return Oimm(int(text))
    raise AsmSyntaxError(f"bad operand {text!r}", line)


def _parse_reg(text: str, line: int) -> int:
    m = _REG.match(text)
    if not m:
        raise AsmSyntaxError(f"expected a register, found {text!r}", line)
    return int(m.group(1))


def _parse_addr(text: str, line: int) -> str:
    m = _ADDR.match(text)
    if not m:
        raise AsmSyntaxError(f"expected @address, found {text!r}", line)
    return m.group(1)


def _parse_line(text: str, line: int):
    word, _, rest = text.partition(" ")
    args = [a.strip() for a in rest.split(",")] if rest.strip() else []

    def arity(n):
        if len(args) != n:
            raise AsmSyntaxError(f"{word} takes {n} operands", line)

    if word == "mov":
        arity(2)
        return Imov(_parse_reg(args[0], line), _parse_operand(args[1], line))
    if word in ("add", "sub", "mul"):
        arity(3)
        cls = {"add": Iadd, "sub": Isub, "mul": Imul}[word]
        return cls(_parse_reg(args[0], line), _parse_reg(args[1], line),
                   _parse_operand(args[2], line))
    if word == "load":
        arity(2)
        return Iload(_parse_reg(args[0], line), _parse_addr(args[1], line))
    if word == "store":
        arity(2)
        return Istore(_parse_addr(args[0], line), _parse_operand(args[1], line))
    if word == "jmp":
        arity(1)
        if not args[0].isdigit():
            raise AsmSyntaxError(f"bad jump target {args[0]!r}", line)
        return Bjmp(int(args[0]))
    if word == "brz":
        parts = rest.split("->")
        if len(parts) != 2:
            raise AsmSyntaxError("brz needs 'rK -> yes, no'", line)
        test = _parse_reg(parts[0].strip(), line)
        targets = [t.strip() for t in parts[1].split(",")]
        if len(targets) != 2 or not all(t.isdigit() for t in targets):
            raise AsmSyntaxError("brz needs two numeric targets", line)
        return Bbrz(test, int(targets[0]), int(targets[1]))
    if word == "halt":
        if rest.strip():
            raise AsmSyntaxError("halt takes no operands", line)
        return Bhalt()
    raise AsmSyntaxError(f"unknown instruction {word!r}", line)


def parse_asm(text: str) -> AsmUnit:
    lines = [(n + 1, raw.strip()) for n, raw in enumerate(text.splitlines())]
    lines = [(n, s) for n, s in lines if s and not s.startswith("#")]
    if not lines:
        raise AsmSyntaxError("empty input", 1)
    n0, header = lines[0]
    m = _HEADER.match(header)
    if not m:
        raise AsmSyntaxError("expected 'asm entries=A exits=B internal=I'", n0)
    entries, exits, internal = (int(g) for g in m.groups())
    blocks: list[Block] = []
    current: list[Instr] | None = None
    branch: Branch | None = None
    expected = 0

    def close(line):
        nonlocal current, branch
        if current is None:
            return
        if branch is None:
            raise AsmSyntaxError("block is missing its terminal branch", line)
        blocks.append(Block(tuple(current), branch))
        current, branch = None, None

    for n, s in lines[1:]:
        m = _BLOCK.match(s)
        if m:
            close(n)
            if int(m.group(1)) != expected:
                raise AsmSyntaxError(f"expected 'block {expected}:'", n)
            expected += 1
            current, branch = [], None
            continue
        if current is None:
            raise AsmSyntaxError("instruction outside any block", n)
        if branch is not None:
            raise AsmSyntaxError("instruction after the terminal branch", n)
        parsed = _parse_line(s, n)
        if isinstance(parsed, (Bjmp, Bbrz, Bhalt)):
            branch = parsed
        else:
            current.append(parsed)
    close(lines[-1][0])
    return AsmUnit(entries, exits, internal, tuple(blocks))
