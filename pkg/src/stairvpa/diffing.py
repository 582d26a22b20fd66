"""Seeded random lasso generation and differential equivalence testing."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .core import CALL, Dvpa, INTERNAL, RETURN, PartitionedAlphabet, ValidationError
from .lasso import LassoWord, accepts

POLICIES = ("live", "any")


def random_lasso(alphabet: PartitionedAlphabet, seed: int, max_len: int,
                 policy: str = "live") -> LassoWord:
    """Draw one lasso, deterministically in (seed, max_len, policy, alphabet).

    ``live`` keeps every prefix of u·v·v non-negative and the period net
    non-negative, biased half/half between balanced and call-heavy
    periods; ``any`` draws symbols uniformly and freely produces lassos
    whose runs die.
    """
    if max_len < 1:
        raise ValidationError("max_len must be at least 1")
    if policy not in POLICIES:
        raise ValidationError(f"policy must be one of {POLICIES}")
    rng = random.Random(f"{seed}|{max_len}|{policy}|{','.join(alphabet.symbols)}")
    symbols = alphabet.symbols
    if policy == "any":
        u_len = rng.randrange(0, max_len + 1)
        v_len = rng.randrange(1, max_len + 1)
        return LassoWord(tuple(rng.choice(symbols) for _ in range(u_len)),
                         tuple(rng.choice(symbols) for _ in range(v_len)))

    call_heavy = bool(alphabet.calls) and rng.random() < 0.5
    u = _walk(rng, alphabet, rng.randrange(0, max_len + 1), floor=0, start=0)
    surplus = sum(+1 if alphabet.kind_of(a) == CALL else
                  -1 if alphabet.kind_of(a) == RETURN else 0 for a in u)
    for _ in range(200):
        v = _walk(rng, alphabet, rng.randrange(1, max_len + 1), floor=-surplus, start=0)
        net = sum(+1 if alphabet.kind_of(a) == CALL else
                  -1 if alphabet.kind_of(a) == RETURN else 0 for a in v)
        if v and (net >= 1 if call_heavy else net == 0):
            return LassoWord(tuple(u), tuple(v))
    if call_heavy:
        return LassoWord(tuple(u), (alphabet.calls[0],))
    if alphabet.internals:
        return LassoWord(tuple(u), (alphabet.internals[0],))
    if alphabet.calls and alphabet.returns:
        return LassoWord(tuple(u), (alphabet.calls[0], alphabet.returns[0]))
    return LassoWord(tuple(u), (alphabet.symbols[0],))


def _walk(rng: random.Random, alphabet: PartitionedAlphabet, length: int,
          floor: int, start: int) -> list[str]:
    word = []
    level = start
    for _ in range(length):
        choices = list(alphabet.calls) + list(alphabet.internals)
        if level > floor:
            choices += list(alphabet.returns)
        if not choices:
            break
        a = rng.choice(choices)
        word.append(a)
        k = alphabet.kind_of(a)
        level += 1 if k == CALL else -1 if k == RETURN else 0
    return word


@dataclass(frozen=True)
class DiffReport:
    """Outcome of a differential run over a lasso corpus."""

    samples: int
    seed: int
    mismatches: tuple[tuple[LassoWord, bool, bool], ...]
    first_mismatch_shrunk: Optional[LassoWord] = None
    corpus_size: int = 0


def exhaustive_corpus(alphabet: PartitionedAlphabet, max_u: int = 2, max_v: int = 4):
    """All lassos with |u| <= max_u and 1 <= |v| <= max_v, for alphabets
    of at most four symbols; empty otherwise."""
    symbols = alphabet.symbols
    if len(symbols) > 4:
        return
    prefixes = [()]
    for n in range(1, max_u + 1):
        prefixes.extend(product(symbols, repeat=n))
    periods = []
    for n in range(1, max_v + 1):
        periods.extend(product(symbols, repeat=n))
    for u in prefixes:
        for v in periods:
            yield LassoWord(u, v)


def diff(a: Dvpa, b: Dvpa, samples: int = 1000, seed: int = 0,
         max_len: int = 12) -> DiffReport:
    """Compare two automata on random lassos plus the exhaustive sub-corpus.

    Random draws alternate the live and any policies.  The first mismatch
    is shrunk by greedy symbol deletion that preserves the disagreement;
    mismatches are reported sorted by lasso length, then lexicographically.
    """
    if a.alphabet != b.alphabet:
        raise ValidationError("differential testing needs a shared partitioned alphabet")
    seen: set[tuple[tuple[str, ...], tuple[str, ...]]] = set()
    mismatches: list[tuple[LassoWord, bool, bool]] = []
    corpus_size = 0

    def check(lasso: LassoWord) -> None:
        nonlocal corpus_size
        key = (lasso.prefix, lasso.period)
        if key in seen:
            return
        seen.add(key)
        corpus_size += 1
        va = accepts(a, lasso).accepted
        vb = accepts(b, lasso).accepted
        if va != vb:
            mismatches.append((lasso, va, vb))

    for lasso in exhaustive_corpus(a.alphabet):
        check(lasso)
    for i in range(samples):
        policy = POLICIES[i % 2]
        check(random_lasso(a.alphabet, seed=seed * 1_000_003 + i, max_len=max_len,
                           policy=policy))

    mismatches.sort(key=lambda m: (len(m[0].prefix) + len(m[0].period),
                                   m[0].prefix, m[0].period))
    shrunk = _shrink(a, b, mismatches[0][0]) if mismatches else None
    return DiffReport(samples=samples, seed=seed, mismatches=tuple(mismatches),
                      first_mismatch_shrunk=shrunk, corpus_size=corpus_size)


def _disagree(a: Dvpa, b: Dvpa, lasso: LassoWord) -> bool:
    return accepts(a, lasso).accepted != accepts(b, lasso).accepted


def _shrink(a: Dvpa, b: Dvpa, lasso: LassoWord) -> LassoWord:
    changed = True
    while changed:
        changed = False
        for i in range(len(lasso.prefix)):
            cand = LassoWord(lasso.prefix[:i] + lasso.prefix[i + 1:], lasso.period)
            if _disagree(a, b, cand):
                lasso = cand
                changed = True
                break
        if changed:
            continue
        if len(lasso.period) > 1:
            for i in range(len(lasso.period)):
                cand = LassoWord(lasso.prefix, lasso.period[:i] + lasso.period[i + 1:])
                if _disagree(a, b, cand):
                    lasso = cand
                    changed = True
                    break
    return lasso
