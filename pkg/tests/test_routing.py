from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gutboard import tagrouting
from gutboard.errors import (
    ConfigInvalid,
    EmptyCorpus,
    ModelNotBuilt,
    NotAuthorized,
    SeedParseError,
    UnknownTopic,
)
from gutboard.store import Store
from gutboard.tagrouting import TagRouter, build_model, classify, normalize

from .oracles import oracle_classify, oracle_idf


class TestNormalize:
    def test_case_and_trim(self):
        assert normalize("  Pasta ") == "pasta"

    def test_plural_fold(self):
        assert normalize("noodles") == "noodle"

    def test_full_pipeline(self):
        # lowercase, collapse runs of whitespace, fold the plural
        assert normalize("Fermented   Foods") == "fermented food"

    def test_short_tokens_keep_trailing_s(self):
        assert normalize("gas") == "gas"

    def test_whitespace_only_is_empty(self):
        assert normalize("   \t ") == ""

    @given(st.text(max_size=60))
    def test_idempotent(self, raw):
        once = normalize(raw)
        assert normalize(once) == once


class TestManualTable:
    def test_seeded_lookups(self, platform):
        assert platform.router.resolve_manual("food") == "diet"
        assert platform.router.resolve_manual("noodle") == "diet"

    def test_miss_is_none(self, platform):
        assert platform.router.resolve_manual("sleep") is None

    def test_parse_rejects_duplicates(self, tmp_path):
        seed = tmp_path / "m.tsv"
        seed.write_text("food\tdiet\nFoods\tsleep\n")  # same canonical key
        with pytest.raises(SeedParseError):
            tagrouting.parse_mappings_file(seed)

    def test_parse_rejects_malformed_line(self, tmp_path):
        seed = tmp_path / "m.tsv"
        seed.write_text("food diet\n")  # space, not tab
        with pytest.raises(SeedParseError):
            tagrouting.parse_mappings_file(seed)

    def test_parse_normalizes_keys_and_skips_comments(self, tmp_path):
        seed = tmp_path / "m.tsv"
        seed.write_text("# comment\n\n  Noodles \tdiet\n")
        assert tagrouting.parse_mappings_file(seed) == {"noodle": "diet"}


class TestBuildModel:
    def test_disjoint_vocabularies_give_orthogonal_centroids(self):
        model = build_model(
            {"aa": ["apple banana cherry"], "bb": ["stone metal glass"]}
        )
        dot = float(np.dot(model.centroids["aa"], model.centroids["bb"]))
        assert abs(dot) < 1e-12

    def test_single_doc_centroid_is_that_vector(self):
        model = build_model({"only": ["gut microbes ferment fiber"]})
        vec = model.vectorize("gut microbes ferment fiber")
        assert np.allclose(model.centroids["only"], vec, atol=1e-12)

    def test_idf_of_ubiquitous_token_is_one(self):
        corpora = {
            "x": ["shared alpha", "shared beta"],
            "y": ["shared gamma"],
        }
        model = build_model(corpora)
        idx = model.vocabulary.index("shared")
        # ln((1+3)/(1+3)) + 1 with N=3 docs, df=3
        assert model.idf[idx] == pytest.approx(1.0, abs=1e-12)
        assert model.idf[idx] == pytest.approx(oracle_idf("shared", corpora), abs=1e-12)

    def test_centroids_unit_norm_and_idf_nonnegative(self, corpora):
        model = build_model(corpora)
        for topic, centroid in model.centroids.items():
            assert abs(np.linalg.norm(centroid) - 1.0) < 1e-9, topic
        assert (model.idf >= 0).all()

    def test_empty_topic_excluded(self):
        model = build_model({"full": ["some words here"], "empty": ["", "   "]})
        assert "empty" not in model.centroids
        assert "full" in model.centroids

    def test_all_empty_raises(self):
        with pytest.raises(EmptyCorpus):
            build_model({"a": ["", "!"], "b": []})

    def test_export_json_shape(self, corpora):
        model = build_model(corpora)
        payload = json.loads(model.to_json())
        assert set(payload) >= {"vocabulary", "idf", "centroids"}
        assert payload["vocabulary"] == model.vocabulary
        assert len(payload["idf"]) == len(model.vocabulary)
        assert set(payload["centroids"]) == set(model.centroids)


class TestClassify:
    def test_identity_text_scores_one(self):
        doc = "fermented cabbage is rich in lactic acid bacteria"
        model = build_model({"t": [doc]})
        result = classify(doc, model, 0.15)
        assert result.matched and result.topic_id == "t"
        assert result.score == pytest.approx(1.0, abs=1e-9)

    def test_fully_oov_text_unmapped(self, corpora):
        model = build_model(corpora)
        result = classify("zzqq xxyy", model, 0.15)
        assert not result.matched

    def test_matches_oracle_on_seed_corpus(self, corpora):
        model = build_model(corpora)
        result = classify("pasta recipe dinner", model, 0.15)
        expected = oracle_classify("pasta recipe dinner", corpora)
        assert expected is not None
        topic, score = expected
        assert result.matched
        assert result.topic_id == topic == "diet"
        assert result.score == pytest.approx(score, abs=1e-9)

    def test_tie_breaks_lexicographically(self):
        doc = "identical corpus text"
        model = build_model({"zebra": [doc], "aardvark": [doc]})
        result = classify("identical corpus", model, 0.15)
        assert result.topic_id == "aardvark"

    def test_below_threshold_unmapped(self, corpora):
        model = build_model(corpora)
        weak = classify("pasta recipe dinner", model, 0.999)
        assert not weak.matched

    def test_no_model_raises(self):
        with pytest.raises(ModelNotBuilt):
            classify("anything", None, 0.15)

    def test_bad_threshold_rejected(self, corpora):
        model = build_model(corpora)
        with pytest.raises(ConfigInvalid):
            classify("anything", model, 1.5)

    def test_deterministic(self, corpora):
        model = build_model(corpora)
        results = {classify("fermented kimchi meal", model, 0.15) for _ in range(5)}
        assert len(results) == 1


class TestRoute:
    def test_manual_hit_wins(self, platform):
        result = platform.router.route("EAT", "completely unrelated context")
        assert (result.topic_id, result.score, result.method) == ("diet", 1.0, "manual")

    def test_unmapped_creates_queue_entry(self, platform):
        result = platform.router.route("zq9x", "zq9x")
        assert not result.matched
        entries = platform.router.queue_entries()
        assert [e.canonical_tag for e in entries] == ["zq9x"]
        assert entries[0].occurrence_count == 1

    def test_queue_counts_occurrences_and_keeps_first_example(self, platform):
        platform.router.route("zq9x", "zq9x")
        platform.router.route("zq9x", "zq9x", question_id="q_1")
        platform.router.route("zq9x", "zq9x", question_id="q_2")
        (entry,) = platform.router.queue_entries()
        assert entry.occurrence_count == 3
        assert entry.example_question_id == "q_1"

    def test_classifier_fallback_matches_oracle(self, platform, corpora):
        text = "kimchi" + " " + "Do you eat fermented foods?"
        expected = oracle_classify(text, corpora)
        result = platform.router.route("kimchi", "Do you eat fermented foods?")
        assert expected is not None and expected[1] >= 0.15
        assert result.matched and result.method == "classifier"
        assert result.topic_id == expected[0]
        assert result.score == pytest.approx(expected[1], abs=1e-9)

    def test_no_model_manual_miss_flags_diagnostic(self, bare_platform):
        result = bare_platform.router.route("kimchi", "context")
        assert not result.matched
        assert result.diagnostic == "model_not_built"
        assert [e.canonical_tag for e in bare_platform.router.queue_entries()] == ["kimchi"]

    def test_preview_has_no_side_effects(self, platform):
        platform.router.preview("zq9x", "zq9x")
        assert platform.router.queue_entries() == []

    def test_empty_tag_never_queued(self, platform):
        result = platform.router.route("   ", "context")
        assert not result.matched
        assert platform.router.queue_entries() == []


class TestApprove:
    def test_moderator_approval_takes_precedence(self, platform):
        moderator = platform.board.create_user("mod", role="moderator")
        platform.router.route("kombucha", "zzz")  # queue it
        platform.approve_mapping(moderator.user_id, "kombucha", "diet")
        result = platform.router.route("kombucha", "totally unrelated sleep words")
        assert (result.topic_id, result.method) == ("diet", "manual")
        assert platform.router.queue_entries() == []

    def test_participant_rejected(self, platform):
        user = platform.board.create_user("plain")
        with pytest.raises(NotAuthorized):
            platform.approve_mapping(user.user_id, "kombucha", "diet")

    def test_unknown_topic_rejected(self, platform):
        moderator = platform.board.create_user("mod2", role="moderator")
        with pytest.raises(UnknownTopic):
            platform.approve_mapping(moderator.user_id, "kombucha", "nonexistent")

    def test_cli_actor_is_trusted(self, platform):
        platform.approve_mapping(None, "kombucha", "diet")
        assert platform.router.resolve_manual("kombucha") == "diet"

    def test_unmapped_closure(self, platform):
        author = platform.board.create_user("writer")
        question = platform.board.create_question(
            author.user_id, "Is zq9x real?", "Tell us more", ["zq9x"]
        )
        assert platform.board.get_question(question.question_id).topic_id is None
        platform.approve_mapping(None, "zq9x", "sleep")
        assert platform.board.get_question(question.question_id).topic_id == "sleep"
        assert "zq9x" not in [e.canonical_tag for e in platform.router.queue_entries()]

    def test_seeding_never_clobbers_curator_mapping(self, platform, tmp_path):
        platform.approve_mapping(None, "pasta", "exercise")
        seed = tmp_path / "m.tsv"
        seed.write_text("pasta\tdiet\nsoup\tdiet\n")
        platform.seed_mappings_file(seed)
        assert platform.router.resolve_manual("pasta") == "exercise"
        assert platform.router.resolve_manual("soup") == "diet"


def test_manual_precedence_property(platform):
    """Whatever the model says, a manual entry decides the topic."""
    platform.approve_mapping(None, "running", "diet")  # overrides seeded exercise mapping
    result = platform.router.route("running", "gym workout training cardio")
    assert (result.topic_id, result.method) == ("diet", "manual")


def test_route_is_deterministic(platform):
    results = [platform.router.preview("kimchi", "Do you eat fermented foods?") for _ in range(3)]
    assert results[0] == results[1] == results[2]
