"""Acceptance gate: one test per release criterion, each printing a
PASS/FAIL line (run with -s or check the captured output)."""

import json
import random
import threading
import time
from pathlib import Path

import pytest

from cofee.evaluation import (
    score_argument_classification,
    score_argument_identification,
    score_triggers,
    stratified_split,
)
from cofee.iob import iob_decode_triggers, iob_encode_triggers, trigger_label_alphabet
from cofee.lexicon import bundled_lexicon_path, coverage, load_lexicon, match
from cofee.model import SentenceAnnotation, annotate_text, from_json, to_dict
from cofee.ontology import load_ontology
from cofee.service import AnnotationService, ConflictError, SqliteStorage

from .conftest import random_scored_doc, random_trigger_set, synthetic_split_corpus
from .oracles import match_oracle, prf_oracle

FIXTURES = Path(__file__).parent / "fixtures"


class criterion:
    """Prints '[ACCEPT] name: PASS/FAIL' around a criterion body."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        verdict = "PASS" if exc_type is None else "FAIL"
        print(f"[ACCEPT] {self.name}: {verdict}")
        return False


def test_ontology_integrity():
    with criterion("ontology-integrity (12/119/21/11, slots resolve, <1s)"):
        start = time.perf_counter()
        o = load_ontology()
        elapsed = time.perf_counter() - start
        assert len(o.event_types) == 12
        assert len(o.subtypes) == 119
        assert len(o.roles) == 21
        assert len(o.entity_types) == 11
        for s in o.subtypes:
            slots = o.allowed_roles(s.id)
            assert slots, f"{s.id} has no slots"
            for slot in slots:
                assert o.allowed_entity_types(s.id, slot.role)
        assert elapsed < 1.0, f"load took {elapsed:.3f}s"


def test_iob_round_trip_1000_sets():
    with criterion("iob-round-trip (1000 random sets, alphabet 239, <5s)"):
        o = load_ontology()
        assert len(trigger_label_alphabet(o)) == 239
        subtypes = [s.id for s in o.subtypes]
        rng = random.Random(190)
        start = time.perf_counter()
        for _ in range(1000):
            n_tokens = rng.randint(1, 50)
            text = " ".join(["w"] * n_tokens)
            base = annotate_text("d", text)
            triggers = random_trigger_set(rng, n_tokens, subtypes, max_triggers=6)
            doc = SentenceAnnotation(
                doc_id="d", text=text, tokens=base.tokens, triggers=tuple(triggers)
            )
            decoded = iob_decode_triggers(iob_encode_triggers(doc), o)
            assert sorted((t.span, t.subtype) for t in decoded) == sorted(
                (t.span, t.subtype) for t in triggers
            )
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"round trips took {elapsed:.2f}s"


def test_scorer_oracle_equivalence_500_corpora():
    with criterion("scorer-oracle-equivalence (500 micro-corpora, exact)"):
        o = load_ontology()
        subtypes = [s.id for s in o.subtypes[:8]]
        rng = random.Random(2718)
        for _ in range(500):
            gold, pred = [], []
            for i in range(rng.randint(1, 10)):
                g, p = random_scored_doc(rng, f"d{i}", subtypes)
                gold.append(g)
                pred.append(p)

            def keys(docs, with_role):
                out = []
                for d in docs:
                    for a in d.arguments:
                        t = d.trigger(a.trigger_id)
                        e = d.entity(a.entity_id)
                        key = (d.doc_id, t.subtype, t.span, e.span)
                        if with_role:
                            key += (a.role,)
                        out.append(key)
                return out

            checks = [
                (score_triggers(gold, pred),
                 [(d.doc_id, t.span, t.subtype) for d in gold for t in d.triggers],
                 [(d.doc_id, t.span, t.subtype) for d in pred for t in d.triggers]),
                (score_argument_identification(gold, pred),
                 keys(gold, False), keys(pred, False)),
                (score_argument_classification(gold, pred),
                 keys(gold, True), keys(pred, True)),
            ]
            for got, gk, pk in checks:
                tp, n_pred, n_gold, p, r, f1 = prf_oracle(gk, pk)
                assert (got.tp, got.n_pred, got.n_gold) == (tp, n_pred, n_gold)
                assert abs(got.precision - p) <= 1e-12
                assert abs(got.recall - r) <= 1e-12
                assert abs(got.f1 - f1) <= 1e-12


def test_lexicon_matcher_criteria():
    with criterion("lexicon-matcher (bundle, brute-force equality, golden, monotone)"):
        o = load_ontology()
        lex = load_lexicon(bundled_lexicon_path(), o)
        assert lex.subtypes_for("quake") == {"natural-disasters.earthquake"}
        assert lex.subtypes_for("capture") == {"justice.arrest", "politics.conquering"}

        rng = random.Random(555)
        vocab = ["quake", "initial", "public", "offering", "kills", "capture",
                 "power", "outages", "hostage", "crisis", "word", "of", "the",
                 "human", "rights", "violation", "x1", "x2"]
        for _ in range(200):
            tokens = [rng.choice(vocab) for _ in range(rng.randint(0, 40))]
            got = [(h.span.start_token, h.span.end_token, h.phrase)
                   for h in match(tokens, lex)]
            assert got == match_oracle(tokens, lex.entries)

        headlines = (FIXTURES / "headlines_200.txt").read_text(encoding="utf-8").splitlines()
        report = coverage(headlines, lex)
        produced = json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n"
        golden = (FIXTURES / "coverage_golden.json").read_text(encoding="utf-8")
        assert produced == golden

        corpus = [" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 8)))
                  for _ in range(30)]
        base_coverage = coverage(corpus, lex).coverage
        extended = lex
        for _ in range(100):
            extended = extended.with_entry(rng.choice(vocab) + str(rng.randint(0, 9)),
                                           "life.death")
            new_coverage = coverage(corpus, extended).coverage
            assert new_coverage >= base_coverage
            base_coverage = new_coverage


def test_stratified_split_criteria():
    with criterion("stratified-split (2000 sentences, shares in [0.10,0.20], stable)"):
        o = load_ontology()
        subtypes = [s.id for s in o.subtypes[:40]]
        docs = synthetic_split_corpus(random.Random(77), 2000, subtypes)
        train, test = stratified_split(docs, seed=20)
        train2, test2 = stratified_split(docs, seed=20)
        assert [d.doc_id for d in train] == [d.doc_id for d in train2]
        assert [d.doc_id for d in test] == [d.doc_id for d in test2]
        assert len(train) + len(test) == 2000

        test_ids = {d.doc_id for d in test}
        members: dict[str, list[str]] = {}
        for d in docs:
            for s in {t.subtype for t in d.triggers}:
                members.setdefault(s, []).append(d.doc_id)
        checked = 0
        for s, ids in members.items():
            if len(ids) < 5:
                continue
            share = sum(1 for i in ids if i in test_ids) / len(ids)
            assert 0.10 <= share <= 0.20, (s, len(ids), share)
            checked += 1
        assert checked > 0


def test_service_linearizability():
    with criterion("service-linearizability (1000-trial race, gapless audit, lossless export)"):
        import tempfile

        tmp = tempfile.mkdtemp()
        svc = AnnotationService(storage=SqliteStorage(Path(tmp) / "race.db"))
        svc.bootstrap_admin("admin", "tok-a")
        admin = svc.authenticate("tok-a")
        ann_rec = svc.create_user(admin, "ann", "annotator", "tok-b")
        ann = svc.authenticate("tok-b")
        project = svc.create_project(admin, "race", member_ids=[ann_rec.id])
        svc.import_documents(admin, project.id, "text\nquake hits town tonight\n")
        (doc,) = svc.storage.list_documents(project.id)
        svc.assign_documents(admin, project.id, [ann_rec.id])

        empty = {"entities": [], "triggers": [], "arguments": []}
        version = 0
        for _ in range(1000):
            outcome: list[str] = []
            barrier = threading.Barrier(2)

            def submit(user):
                barrier.wait()
                try:
                    svc.submit_annotation(user, doc.id, empty, version)
                    outcome.append("win")
                except ConflictError:
                    outcome.append("conflict")

            threads = [threading.Thread(target=submit, args=(u,)) for u in (ann, admin)]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
            assert sorted(outcome) == ["conflict", "win"], outcome
            version += 1

        audit_versions = [entry[2] for entry in svc.storage.audit_log(doc.id)]
        assert audit_versions == list(range(1001))

        triggers = [{"id": "t1", "span": [0, 0], "subtype": "natural-disasters.earthquake",
                     "tense": "past", "polarity": "positive", "modality": "asserted"}]
        svc.submit_annotation(ann, doc.id, {"entities": [], "triggers": triggers,
                                            "arguments": []}, version)
        exported = svc.export_project(admin, project.id, "jsonl")
        docs_back = [from_json(line) for line in exported.splitlines()]
        stored = AnnotationService.document_annotation(svc.storage.get_document(doc.id))
        assert docs_back == [stored]


GOLD_DATASET = Path("data/cofee-gold.jsonl")


@pytest.mark.skipif(not GOLD_DATASET.exists(), reason="released dataset not present")
def test_optional_released_dataset_statistics():
    with criterion("released-dataset-stats (24119 sentences, 28393 triggers, tense map)"):
        from cofee.corpus import compute_stats
        from cofee.model import read_jsonl

        stats = compute_stats(read_jsonl(GOLD_DATASET))
        assert stats.n_sentences == 24119
        assert stats.n_triggers == 28393
        assert stats.triggers_by_tense == {
            "past": 18372, "present": 7068, "future": 1345, "unspecified": 1608,
        }
