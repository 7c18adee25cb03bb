import json
import shutil

import pytest

from conftest import entry_ids
from speiser.corpus import PACKAGE_CORPUS, corpus_run, diff, load_manifest, run_entry
from speiser.errors import InputError, ManifestMalformed


@pytest.mark.parametrize("eid", entry_ids())
def test_entry_matches(corpus, eid):
    res = run_entry(corpus[eid], corpus)
    assert res.error is None, res.error
    bad = {k: c["mismatches"] for k, c in res.checks.items() if c["mismatches"]}
    assert not bad


def test_every_entry_has_provenance(corpus):
    assert all(e.provenance for e in corpus.values())
    assert len(corpus) == 20


def copy_corpus(tmp_path):
    dst = tmp_path / "corpus"
    shutil.copytree(PACKAGE_CORPUS, dst)
    return dst


def edit_manifest(dst, change):
    p = dst / "manifest.json"
    data = json.loads(p.read_text())
    change(data)
    p.write_text(json.dumps(data))
    return p


def test_wrong_count_reports_diff(tmp_path):
    dst = copy_corpus(tmp_path)

    def bump(data):
        for e in data["entries"]:
            if e["id"] == "airy":
                e["expected"]["decompose"]["ends"] = 4
    rep = corpus_run(edit_manifest(dst, bump), only=["airy"])
    assert not rep.passed
    (m,) = rep.entries[0].checks["decompose"]["mismatches"]
    assert m == {"path": "/ends", "expected": 4, "actual": 3}


def test_empty_manifest_warns(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"entries": []}')
    rep = corpus_run(p)
    assert rep.passed and rep.warnings


@pytest.mark.parametrize("body", [
    '[]',
    '{"entries": [{"id": "a"}]}',
    '{"entries": [{"id": "a", "file": "a.json"}, {"id": "a", "file": "b.json"}]}',
    '{"entries": [{"id": "a", "file": "a.json", "provenance": "x", "expected": {"colour": 1}}]}',
    '{"entries": [{"id": "a", "file": "a.json", "expected": {"structure": {}}}]}',
])
def test_malformed_manifest(tmp_path, body):
    p = tmp_path / "m.json"
    p.write_text(body)
    with pytest.raises(ManifestMalformed):
        load_manifest(p)


def test_invalid_json(tmp_path):
    p = tmp_path / "m.json"
    p.write_text("{")
    with pytest.raises(InputError):
        load_manifest(p)


def test_corpus_dir_env(tmp_path, monkeypatch):
    dst = copy_corpus(tmp_path)
    edit_manifest(dst, lambda d: d.update(entries=d["entries"][:2]))
    monkeypatch.setenv("SPEISER_CORPUS_DIR", str(dst))
    assert len(corpus_run().entries) == 2


def test_broken_graph_file_is_captured(tmp_path):
    dst = copy_corpus(tmp_path)
    (dst / "airy.json").write_text('{"vertices": []}')
    rep = corpus_run(dst / "manifest.json", only=["airy"])
    assert rep.entries[0].error is not None and not rep.passed


def test_parallel_run_is_identical():
    assert corpus_run(jobs=4).to_json() == corpus_run(jobs=1).to_json()


def test_diff_ignores_extra_keys():
    assert diff({"a": 1}, {"a": 1, "b": 2}) == []
    assert diff({"a": {"b": 1}}, {"a": 3}) == [{"path": "/a", "expected": {"b": 1}, "actual": 3}]
