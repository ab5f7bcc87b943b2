"""Micro-averaged span scoring and the stratified train/test splitter.

Correctness criteria:
  - a trigger is correct iff its subtype and token span match a gold trigger
  - an argument is identified iff the trigger match plus the argument span
    match a gold argument (role ignored)
  - an argument is classified iff the role matches as well

Matching is multiset-based: each gold item can be consumed at most once,
so duplicated predictions earn no double credit.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .model import SentenceAnnotation

ARG_MATCH_MODES = ("subtype-span", "subtype-only")


@dataclass(frozen=True)
class PRF:
    tp: int
    n_pred: int
    n_gold: int

    @property
    def precision(self) -> float:
        return self.tp / self.n_pred if self.n_pred else 0.0

    @property
    def recall(self) -> float:
        return self.tp / self.n_gold if self.n_gold else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def to_dict(self, task: str) -> dict:
        return {
            "task": task,
            "tp": self.tp,
            "n_pred": self.n_pred,
            "n_gold": self.n_gold,
            "p": self.precision,
            "r": self.recall,
            "f1": self.f1,
        }


def _score(gold_keys: list[Hashable], pred_keys: list[Hashable]) -> PRF:
    gold = Counter(gold_keys)
    pred = Counter(pred_keys)
    tp = sum(min(count, gold[key]) for key, count in pred.items())
    return PRF(tp=tp, n_pred=len(pred_keys), n_gold=len(gold_keys))


def _check_alignment(gold: Sequence[SentenceAnnotation], pred: Sequence[SentenceAnnotation]) -> None:
    gold_ids = sorted(d.doc_id for d in gold)
    pred_ids = sorted(d.doc_id for d in pred)
    if gold_ids != pred_ids:
        raise ValueError("gold and predicted corpora carry different document ids")


def _trigger_keys(docs: Sequence[SentenceAnnotation]) -> list[Hashable]:
    return [(d.doc_id, t.span, t.subtype) for d in docs for t in d.triggers]


def _argument_keys(
    docs: Sequence[SentenceAnnotation], mode: str, with_role: bool
) -> list[Hashable]:
    if mode not in ARG_MATCH_MODES:
        raise ValueError(f"arg-match mode must be one of {ARG_MATCH_MODES}")
    keys: list[Hashable] = []
    for d in docs:
        for a in d.arguments:
            trigger = d.trigger(a.trigger_id)
            entity = d.entity(a.entity_id)
            key: tuple = (d.doc_id, trigger.subtype)
            if mode == "subtype-span":
                key += (trigger.span,)
            key += (entity.span,)
            if with_role:
                key += (a.role,)
            keys.append(key)
    return keys


def score_triggers(
    gold: Sequence[SentenceAnnotation], pred: Sequence[SentenceAnnotation]
) -> PRF:
    _check_alignment(gold, pred)
    return _score(_trigger_keys(gold), _trigger_keys(pred))


def score_argument_identification(
    gold: Sequence[SentenceAnnotation],
    pred: Sequence[SentenceAnnotation],
    mode: str = "subtype-span",
) -> PRF:
    _check_alignment(gold, pred)
    return _score(_argument_keys(gold, mode, False), _argument_keys(pred, mode, False))


def score_argument_classification(
    gold: Sequence[SentenceAnnotation],
    pred: Sequence[SentenceAnnotation],
    mode: str = "subtype-span",
) -> PRF:
    _check_alignment(gold, pred)
    return _score(_argument_keys(gold, mode, True), _argument_keys(pred, mode, True))


def score_all(
    gold: Sequence[SentenceAnnotation],
    pred: Sequence[SentenceAnnotation],
    mode: str = "subtype-span",
) -> dict[str, PRF]:
    return {
        "triggers": score_triggers(gold, pred),
        "argument-identification": score_argument_identification(gold, pred, mode),
        "argument-classification": score_argument_classification(gold, pred, mode),
    }


# -- stratified split ---------------------------------------------------------


MIN_CLASS_SIZE = 5


def stratified_split(
    docs: Sequence[SentenceAnnotation],
    seed: int,
    frac: float = 0.15,
    frac_range: tuple[float, float] = (0.10, 0.20),
    min_class_size: int = MIN_CLASS_SIZE,
) -> tuple[list[SentenceAnnotation], list[SentenceAnnotation]]:
    """Per-subtype sampling into the test set, rarest subtypes first.

    Each sentence is assigned whole by the first (rarest) subtype that
    claims it; for every subtype with at least `min_class_size` sentences
    the picked count is clamped so the subtype's test share stays inside
    `frac_range`. Subtypes below the threshold get no test quota, and any
    sentence nothing claims falls to the train side. Deterministic in
    (docs order, seed).
    """
    if not docs:
        raise ValueError("cannot split an empty dataset")
    lo_frac, hi_frac = frac_range
    if not (0 < lo_frac <= frac <= hi_frac < 1):
        raise ValueError(f"need 0 < {lo_frac} <= {frac} <= {hi_frac} < 1")

    members: dict[str, list[int]] = {}
    for i, doc in enumerate(docs):
        for subtype in {t.subtype for t in doc.triggers}:
            members.setdefault(subtype, []).append(i)

    rng = random.Random(seed)
    assignment: dict[int, str] = {}
    order = sorted(members, key=lambda s: (len(members[s]), s))
    for subtype in order:
        idxs = members[subtype]
        n = len(idxs)
        if n < min_class_size:
            continue
        lo = math.ceil(lo_frac * n)
        hi = math.floor(hi_frac * n)
        target = min(max(round(frac * n), lo), hi)
        in_test = sum(1 for i in idxs if assignment.get(i) == "test")
        undecided = [i for i in idxs if i not in assignment]
        need = min(max(target - in_test, 0), len(undecided))
        picked = set(rng.sample(undecided, need)) if need else set()
        for i in undecided:
            assignment[i] = "test" if i in picked else "train"

    train = [doc for i, doc in enumerate(docs) if assignment.get(i, "train") == "train"]
    test = [doc for i, doc in enumerate(docs) if assignment.get(i) == "test"]
    return train, test
