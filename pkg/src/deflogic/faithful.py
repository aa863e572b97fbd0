"""Faithfulness checks between theories, strongest extensions, and counting.

Two extensions correspond when they are var-equivalent over the source
alphabet.  Each extension is reduced once to the set of its models projected
onto that alphabet; var-equivalence is then equality of projections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import ContractViolation
from .formula import conj
from .semantics import (
    DEFAULT_SET_BOUND,
    DefaultTheory,
    Extension,
    Semantics,
    extensions,
    minimal_ordering,
    process_key,
    selected_sets,
)
from .solver import entails, project


@dataclass
class FaithfulReport:
    faithful: bool
    bijective: bool
    # (source extension index, indices of the target extensions it matches)
    matching: list[tuple[int, list[int]]] = field(default_factory=list)
    unmatched_source: list[int] = field(default_factory=list)
    unmatched_target: list[int] = field(default_factory=list)
    source_count: int = 0
    target_count: int = 0

    def to_json(self) -> dict:
        return {
            "faithful": self.faithful,
            "bijective": self.bijective,
            "matching": [[i, list(js)] for i, js in self.matching],
            "unmatched_source": list(self.unmatched_source),
            "unmatched_target": list(self.unmatched_target),
            "source_count": self.source_count,
            "target_count": self.target_count,
        }


def match_extensions(
    source: Sequence[Extension], target: Sequence[Extension], alphabet: Iterable[str]
) -> FaithfulReport:
    xs = sorted(set(alphabet))
    src_proj = [project(e.generator, xs) for e in source]
    tgt_proj = [project(e.generator, xs) for e in target]
    forward = [[j for j, q in enumerate(tgt_proj) if q == p] for p in src_proj]
    backward = [[i for i, p in enumerate(src_proj) if p == q] for q in tgt_proj]
    unmatched_source = [i for i, js in enumerate(forward) if not js]
    unmatched_target = [j for j, is_ in enumerate(backward) if not is_]
    faithful = not unmatched_source and not unmatched_target
    bijective = (
        faithful
        and all(len(js) == 1 for js in forward)
        and all(len(is_) == 1 for is_ in backward)
    )
    return FaithfulReport(
        faithful=faithful,
        bijective=bijective,
        matching=list(enumerate(forward)),
        unmatched_source=unmatched_source,
        unmatched_target=unmatched_target,
        source_count=len(source),
        target_count=len(target),
    )


def check_faithful(
    src: DefaultTheory,
    src_sem: Semantics | str,
    tgt: DefaultTheory,
    tgt_sem: Semantics | str,
    alphabet: Iterable[str] | None = None,
    bound: int = DEFAULT_SET_BOUND,
) -> FaithfulReport:
    """Compare the extensions of ``src`` and ``tgt`` up to var-equivalence over
    ``alphabet`` (default: the declared alphabet of ``src``)."""
    xs = src.vars if alphabet is None else frozenset(alphabet)
    stray = xs - src.vars
    if stray:
        raise ContractViolation(f"atoms outside the source alphabet: {', '.join(sorted(stray))}")
    return match_extensions(extensions(src, src_sem, bound), extensions(tgt, tgt_sem, bound), xs)


def strongest_extensions(
    theory: DefaultTheory, sem: Semantics | str, bound: int = DEFAULT_SET_BOUND
) -> list[Extension]:
    """Extensions not strictly entailed by another extension."""
    exts = extensions(theory, sem, bound)
    return [
        e
        for e in exts
        if not any(o is not e and entails(o.generator, e.formula) for o in exts)
    ]


class ExtensionCount(NamedTuple):
    count: int
    geq_k: bool


def _equivalent_generators(g1, g2) -> bool:
    return entails(g1, conj(*g2)) and entails(g2, conj(*g1))


def count_extensions(
    theory: DefaultTheory, sem: Semantics | str, k: int = 1, bound: int = DEFAULT_SET_BOUND
) -> ExtensionCount:
    """Count extensions by counting minimal selected processes.

    A selected process is minimal when no other selected process generating
    an equivalent extension precedes it in the process ordering (shorter
    first, then lexicographic).  Within one set of defaults the greedy
    ordering is the least, so only those need to be compared.
    """
    procs = [minimal_ordering(theory, s) for s in selected_sets(theory, sem, bound)]
    gens = [theory.generator(p) for p in procs]
    count = 0
    for i, p in enumerate(procs):
        if all(
            process_key(p) < process_key(q) or not _equivalent_generators(gens[i], gens[j])
            for j, q in enumerate(procs)
            if j != i
        ):
            count += 1
    return ExtensionCount(count, count >= k)
