import json
import subprocess
import sys

import pytest

from hadtowers import towers
from hadtowers.cli import main
from hadtowers.towers import Coord, is_complete, tower_from_json

T1_JSON = '{"sequents":[{"level":1,"index":0,"range":[[0,5]]},{"level":2,"index":0,"range":[[1,0],[0,3]]}]}'


@pytest.fixture
def t1_file(tmp_path):
    path = tmp_path / "t1.json"
    path.write_text(T1_JSON)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_gen_tower(capsys):
    assert run(capsys, "gen", "tower", "--levels", "1") == (0, '{"sequents":[]}', "")
    a = run(capsys, "gen", "tower", "--levels", "5", "--width", "6", "--seed", "7")
    b = run(capsys, "gen", "tower", "--levels", "5", "--width", "6", "--seed", "7")
    assert a == b
    p = tower_from_json(json.loads(a[1]))
    assert is_complete(p)
    assert json.dumps(towers.tower_to_json(p), separators=(",", ":")) == a[1]


def test_gen_condition_and_perm(capsys):
    code, out, _ = run(capsys, "gen", "condition", "--seed", "3")
    assert code == 0 and "cohen" in json.loads(out)
    code, out, _ = run(capsys, "gen", "perm", "--seed", "3")
    assert code == 0 and "levels" in json.loads(out)


def test_gen_invalid_params(capsys):
    code, _, err = run(capsys, "gen", "tower", "--levels", "0")
    assert code == 2 and "levels" in err


def test_gen_to_file(capsys, tmp_path):
    dest = tmp_path / "out.json"
    assert run(capsys, "gen", "tower", "--seed", "1", "--json", str(dest))[0] == 0
    assert tower_from_json(json.loads(dest.read_text()))


def test_query_rank(capsys):
    assert run(capsys, "query", "rank", "[[2,0],[1,0],[1,1]]") == (0, '"w^2 + w*2"', "")


def test_query_close(capsys, t1_file):
    assert run(capsys, "query", "close", t1_file, "[[2,0]]")[1] == "[[0,3],[0,5],[1,0],[2,0]]"


def test_query_union_incompatible(capsys, t1_file):
    code, _, err = run(capsys, "query", "union", t1_file, '{"sequents":[{"level":1,"index":1,"range":[[0,5]]}]}')
    assert code == 1 and err.startswith("Incompatible: same-level distinctness")


def test_query_ops(capsys, t1_file):
    assert run(capsys, "query", "complete", t1_file)[1] == "true"
    code, out, _ = run(capsys, "query", "add-target", t1_file, "[0,9]")
    assert json.loads(out)["sequents"][1] == {"level": 1, "index": 1, "range": [[0, 9]]}
    code, out, _ = run(capsys, "query", "cover", t1_file)
    assert json.loads(out)["coord"] == [3, 0]
    assert run(capsys, "query", "reduce", t1_file, "[[2,0],[1,0]]")[1] == "[[2,0]]"
    assert run(capsys, "query", "intersect", t1_file, "[[2,0]]", "[[1,0]]")[1] == "[[1,0]]"
    assert run(capsys, "query", "path", t1_file, "[2,0]", "[0,5]")[1] == "[0,0]"
    assert run(capsys, "query", "eval", t1_file, '[{"index":5,"bits":"1"},{"index":3,"bits":"01"}]', "[2,0]")[1] == '[["1"],"01"]'
    assert run(capsys, "query", "lexcmp", '"1"', '["0"]')[1] == '"lt"'
    code, out, _ = run(capsys, "query", "amalgamate", t1_file, "[[1,0]]")
    assert code == 0 and len(json.loads(out)["tower"]["sequents"]) == 3


def test_query_errors(capsys, t1_file):
    code, _, err = run(capsys, "query", "path", t1_file, "[1,0]", "[0,3]")
    assert code == 1 and "reachable" in err
    code, _, err = run(capsys, "query", "eval", t1_file, '[{"index":5,"bits":"1"}]', "[2,0]")
    assert code == 1 and "MissingAssignment" in err
    code, _, err = run(capsys, "query", "close", '{"sequents":[{"level":1,"index":0,"range":[[1,0]]}]}', "[]")
    assert code == 2 and "owner-level bound" in err
    code, _, err = run(capsys, "query", "close", "{not json", "[]")
    assert code == 2
    code, _, err = run(capsys, "query", "amalgamate", t1_file, "[[1,0],[0,3]]")
    assert code == 1 and "same-level distinctness" in err
    assert run(capsys, "query", "rank")[0] == 2


def test_query_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(T1_JSON))
    assert run(capsys, "query", "complete", "-")[1] == "true"


def test_suite_ordinals(capsys):
    code, out, _ = run(capsys, "suite", "ordinals", "--cases", "1000")
    assert code == 0 and out.startswith("[PASS] ordinals: 1000 cases, 0 failures")


def test_suite_json_format(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "suite", "closure", "--cases", "5", "--format", "json", "--json", str(dest))
    rep = json.loads(out)
    assert code == 0 and rep[0]["suite"] == "closure" and rep[0]["failures"] == [] and rep[0]["ok"]
    assert json.loads(dest.read_text())[0]["cases"] == 5


def test_suite_unknown(capsys):
    assert run(capsys, "suite", "nope")[0] == 2


def _flipped_target_of(p, e):
    # mutant: expands level-0 coords instead of higher ones
    seqs = towers.tower_part(p).sequents
    full = towers.target(p)
    out = {c for c in towers.coord_set(e) if c in full}
    todo = list(out)
    while todo:
        c = todo.pop()
        if c.level != 0:
            continue
        for child in seqs.get(c, ()):
            if child not in out:
                out.add(child)
                todo.append(child)
    return frozenset(out)


def test_mutant_closure_rule_fails_suite(monkeypatch, capsys):
    monkeypatch.setattr(towers, "target_of", _flipped_target_of)
    code, out, _ = run(capsys, "suite", "closure", "--cases", "50", "--quiet")
    assert code != 0 and out.startswith("[FAIL] closure")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hadtowers", "query", "rank", "[[0,3],[0,5]]"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == '"2"'
