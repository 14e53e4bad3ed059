"""Interaction trees: executable denotations for impure, possibly divergent
programs, with handlers, iteration/recursion combinators, bounded
bisimulation and trace checkers, and an Imp-to-Asm compiler harness."""

from .core import (
    ITree,
    Observation,
    RetO,
    TauO,
    VisO,
    bind,
    burn,
    lazy,
    observe,
    ret,
    run_to_head,
    spin,
    tau,
    trigger,
    vis,
)
from .values import (
    AnswerTagMismatch,
    BOOL_T,
    EMPTY_T,
    MAP_T,
    NAT_T,
    PAIR_T,
    SYM_T,
    Tag,
    UNIT_T,
    UValue,
    VType,
    boolean,
    fst,
    inl,
    inr,
    label,
    label_t,
    nat,
    pair,
    snd,
    sym,
    umap,
    un_sum,
    unit,
)
from .events import (
    AmbiguousSignature,
    EventInstance,
    EventSig,
    IOE,
    EMPTY_E,
    KindSpec,
    SignatureNotFound,
    SubeventWitness,
    SumSig,
    WrongSignature,
    derive_witness,
    event,
    inject,
    map_default_sig,
    project,
    state_sig,
)
from .combinators import (
    KTree,
    RecHandler,
    iterate,
    kt,
    kt_bimap,
    kt_case,
    kt_cat,
    kt_id,
    kt_inl,
    kt_inr,
    kt_pure,
    kt_swap,
    loop,
    merge_fin,
    mrec,
    rec_call,
    rec_lift,
    split_fin,
)
from .interp import (
    Handler,
    ITreeTarget,
    ITREES,
    StateTarget,
    UnhandledEvent,
    handle_map,
    handle_state,
    handler_bimap,
    handler_case,
    handler_cat,
    handler_id,
    handler_inl,
    handler_inr,
    interp,
    interp_map,
    interp_state,
)
from .bisim import (
    DEFAULT_NAT_PROBES,
    EQ,
    Reason,
    RelSpec,
    Status,
    Verdict,
    enumerate_answers,
    eutt,
    ktree_equiv,
    merge_verdicts,
    replay_witness,
    strong_bisim,
)
from .traces import (
    AnswerSpaceTooLarge,
    TEnd,
    TEventEnd,
    TEventResponse,
    TRet,
    Trace,
    enumerate_traces,
    is_trace_of,
    render_trace,
    trace_equiv,
    trace_refines,
)

__all__ = [name for name in dir() if not name.startswith("_")]
