import math
import os
import subprocess
from pathlib import Path

import pytest

import trackerlink as tl

CORPUS = Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "extraction"


def test_normalize():
    assert tl.normalize_id("UA-1374898-2") == "UA-1374898"
    assert tl.normalize_id("ca-pub-9657897336906985") == "pub-9657897336906985"
    assert tl.normalize_id("UA-XXXXXX-1") is None
    assert tl.normalize_id("pub-123") is None


def test_extract_hits_offsets():
    body = b"<script>ga('create', 'UA-12857229-1', 'auto');</script>"
    hits = tl.extract_hits(body, "https://a.sk/")
    assert [h["raw_token"] for h in hits] == ["UA-12857229-1"]
    assert hits[0]["offset"] == body.index(b"UA-")


def test_corpus_matches_annotations():
    import json

    ann = json.loads((CORPUS / "annotations.json").read_text())
    for name, want in ann.items():
        got = tl.extract_identities((CORPUS / "pages" / name).read_bytes())
        assert got == sorted(want), name


def test_dimension_stats_closed_form():
    dims = [9, 4, 4, 4, 4, 4, 3, 2, 2, 2, 2]
    pop = tl.dimension_stats(dims, "population")
    smp = tl.dimension_stats(dims, "sample")
    assert pop["n"] == 11 and pop["min"] == 2 and pop["max"] == 9
    assert math.isclose(pop["mean"], 40 / 11, abs_tol=1e-12)
    assert math.isclose(pop["sd"], math.sqrt(446) / 11, abs_tol=1e-12)
    assert math.isclose(smp["sd"], math.sqrt(446 / 110), abs_tol=1e-12)
    with pytest.raises(ValueError):
        tl.dimension_stats(dims, "bessel")


def test_coverage():
    assert tl.coverage_percent(44, 65) == "67.69"
    assert tl.coverage_percent(39, 46) == "84.78"


def test_project_networks_against_networkx():
    nx = pytest.importorskip("networkx")
    import random

    rng = random.Random(7)
    for _ in range(50):
        pairs = []
        for d in range(rng.randint(1, 40)):
            for i in range(12):
                if rng.random() < 0.06:
                    pairs.append((f"d{d}.sk", f"UA-{1000000 + i}-1"))
        got = {frozenset(n) for n in tl.project_networks(pairs)}
        g = nx.Graph()
        g.add_edges_from((d, "id:" + i) for d, i in pairs)
        want = set()
        for comp in nx.connected_components(g):
            doms = frozenset(n for n in comp if not n.startswith("id:"))
            if len(doms) >= 2:
                want.add(doms)
        assert got == want


def test_cli_usage_error():
    code, _, err = tl.run_cli(["frobnicate"])
    assert code == 2


@pytest.fixture(scope="module")
def world(tmp_path_factory):
    maker = os.environ.get("TL_MAKE_WORLD")
    if not maker:
        pytest.skip("TL_MAKE_WORLD not set")
    root = tmp_path_factory.mktemp("world")
    configs = subprocess.run([maker, str(root)], check=True, capture_output=True, text=True).stdout.split()
    return root, configs


def test_gexf_reimports_with_eleven_components(world):
    nx = pytest.importorskip("networkx")
    root, configs = world
    c19 = configs[0]
    for cmd in ("scan", "expand", "link"):
        code, out, err = tl.run_cli([cmd, "-c", c19])
        assert code == 0, (cmd, out, err)
    g = nx.read_gexf(root / "out" / "2019" / "graph.gexf")
    types = nx.get_node_attributes(g, "type")
    dims = []
    for comp in nx.connected_components(g):
        domains = [n for n in comp if types[n] == "domain"]
        if len(domains) >= 2:
            dims.append(len(domains))
    assert sorted(dims, reverse=True) == [9, 4, 4, 4, 4, 4, 3, 2, 2, 2, 2]
    gml = nx.read_graphml(root / "out" / "2019" / "graph.graphml")
    assert gml.number_of_nodes() == g.number_of_nodes()
    assert gml.number_of_edges() == g.number_of_edges()
