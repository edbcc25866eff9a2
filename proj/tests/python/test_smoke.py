import json
import math
import os
from pathlib import Path

import pytest

import tabtag

DEMO = Path(os.environ.get("TABTAG_DEMO_DIR", Path(__file__).resolve().parents[2] / "demo"))


@pytest.fixture(scope="module")
def tagger():
    return tabtag.Tagger(str(DEMO / "model.bin"), str(DEMO / "ontology.tsv"), ontology_format="tsv")


def test_tokenizer():
    assert tabtag.tokenize_cell("Class Size 2016-2017") == ["class", "size"]
    assert not tabtag.is_textual("3.14159")


def test_model_lookup_and_phrase(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("2 3\na 1 0 0\nb 0 2 0\n")
    model = tabtag.load_model(str(path), tabtag.ModelFormat.text)
    assert model.dimension == 3 and len(model) == 2
    assert model.lookup("b") == [0.0, 1.0, 0.0]
    assert model.lookup("zzz") is None
    ab = model.embed_phrase(["a", "b"])
    assert ab[0] == pytest.approx(1 / math.sqrt(2))
    assert tabtag.similarity([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_binary_and_text_models_agree():
    text = tabtag.load_model(str(DEMO / "model.txt"), tabtag.ModelFormat.text)
    binary = tabtag.load_model(str(DEMO / "model.bin"), tabtag.ModelFormat.binary)
    for token in ["river", "wine", "Athlete"]:
        for x, y in zip(text.lookup(token), binary.lookup(token)):
            assert abs(x - y) < 1e-6


def test_ontology_and_tree_update(tmp_path):
    path = tmp_path / "o.tsv"
    path.write_text("tree\tplant\nplant\teukaryote\n")
    onto = tabtag.load_ontology(str(path), tabtag.OntologyFormat.tsv)
    assert onto.depth("tree") == 2
    assert onto.children_of("plant") == ["tree"]
    out = onto.tree_aggregate({"eukaryote": 0.4, "plant": 0.4, "tree": 0.8}, "meanmax")
    assert out["plant"] == pytest.approx(0.6)
    assert out["eukaryote"] == pytest.approx(0.5)


def test_summarize_demo(tagger):
    result = tagger.summarize(str(DEMO / "baseball.csv"), k=3)
    assert result["tags"][0][0] == "BaseballPlayer"
    assert "Batting" in result["diagnostics"]["dropped_columns"]
    report = json.loads(tagger.summarize_json(str(DEMO / "coalfields.csv"), k=5))
    assert report["schema_version"] == 1
    assert {t["type"] for t in report["tags"]} >= {"River", "BodyOfWater"}


def test_grid_and_match_rate(tagger):
    rows = tagger.grid(str(DEMO / "corpus.jsonl"))
    assert len(rows) == 8
    assert sorted(r["config"] for r in rows) == sorted(tabtag.default_grid())
    assert rows[0]["match_rate"] >= rows[-1]["match_rate"]
    assert tabtag.match_rate(["a", "x", "y"], {"a", "b"}, 3) == 0.5


def test_errors_are_raised(tmp_path):
    with pytest.raises(tabtag.TabtagError, match="model"):
        tabtag.load_model(str(tmp_path / "missing.bin"))
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1\n")
    tagger = tabtag.Tagger(str(DEMO / "model.bin"), str(DEMO / "ontology.tsv"), ontology_format="tsv")
    with pytest.raises(tabtag.TabtagError, match="ingest"):
        tagger.summarize(str(bad))
