import math
import os

import pytest

import mrbench

SCORES = os.path.join(mrbench.data_dir(), "scores")


def test_catalog_shape():
    cat = mrbench.load_catalog()
    assert len(cat["suts"]) == 9
    assert len(cat["mrs"]) == 72
    assert mrbench.executable_suts() == ["SIN", "SUM", "SHORTEST-PATH", "REGRESSION", "FFT"]


def test_evaluate_reference_and_mutant():
    out = mrbench.evaluate("SIN", {"kind": "angle", "x": 1.0})
    assert out["value"] == pytest.approx(math.sin(1.0), abs=1e-12)
    bent = mrbench.evaluate("SIN", {"kind": "angle", "x": 1.0}, variant="mutant-offset")
    assert bent["value"] - out["value"] == pytest.approx(0.01, abs=1e-12)


def test_campaign_reference_is_clean():
    doc = mrbench.run_campaign("SUM", trials=200, seed=3)
    assert len(doc["reports"]) == 8
    assert all(r["violations"] == 0 for r in doc["reports"])
    assert doc == mrbench.run_campaign("SUM", trials=200, seed=3)


def test_kill_matrix_kills_every_mutant():
    km = mrbench.mutation_matrix("SHORTEST-PATH", trials=50)
    rows = km["rows"]
    assert rows[0]["variant"] == "reference" and rows[0]["kills"] == 0
    assert all(r["kills"] > 0 for r in rows[1:])


def test_qualitative_sut_is_refused():
    with pytest.raises(mrbench.PreconditionError, match="QUALITATIVE"):
        mrbench.run_campaign("WFS", trials=10)


def test_score_and_gates():
    sheet = {
        "mr_id": "SIN-MR1",
        "evaluator_id": "py",
        "evaluator_kind": "human",
        "scheme": "updated",
        "scores": {
            "completeness": 1, "correctness": 3, "generalizability": 3, "novelty": 3,
            "clarity": 3, "computational_feasibility": 3, "applicability": 3,
        },
    }
    assert mrbench.score(sheet) == 19
    sheet["scores"]["completeness"] = 0
    kinds = [k for k, _ in mrbench.validate_sheet(sheet)]
    assert kinds and set(kinds) == {"completeness-gate"}
    with pytest.raises(mrbench.PreconditionError):
        mrbench.score(sheet)


def test_aggregate_reproduces_legacy_totals():
    rows = mrbench.aggregate([os.path.join(SCORES, "legacy-models")], group_by="model")
    totals = {r["group"]: round(r["total"], 1) for r in rows}
    assert totals == {"GPT-3.5": 22.2, "GPT-4": 24.0}


def test_offline_generate_and_evaluate(monkeypatch):
    monkeypatch.delenv("OPENAI_API_KEY", raising=False)
    monkeypatch.delenv("MRBENCH_LLM_API_KEY", raising=False)
    drafts = mrbench.generate_mrs("AV-PERCEPTION")
    assert len(drafts) == 8
    assert drafts[0]["title"] == "Image Brightness Adjustment MR"
    sheet = mrbench.evaluate_mr("SIN-MR1", created_at="2024-01-15T00:00:00Z")
    assert mrbench.score(sheet) == 19
    with pytest.raises(mrbench.PreconditionError):
        mrbench.generate_mrs("SIN", count=0)
