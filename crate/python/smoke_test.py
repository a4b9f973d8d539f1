"""Smoke test for the Python extension. Run after installing the wheel:

    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/coincident_rigidity-*.whl
    python python/smoke_test.py
"""

import json

import coincident_rigidity as cr


def main():
    assert "fig4" in cr.fixture_names()

    g, t = cr.fixture("fig4")
    assert (g.n, g.edge_count) == (8, 13)
    assert cr.pebble_rank(g) == 13
    assert cr.rank(g, t)["rank"] == 12

    s = cr.sparse(g, t, strong=True)
    assert not s["sparse"]
    assert s["violation"]["S"] == ["u", "v"]

    assert cr.mrank(g, t, oracle="mt")["rank"] == 12
    assert cr.mrank(g, t, oracle="rt")["rank"] == 12
    assert cr.cover_rank(g, t)["rank"] == 12

    v = cr.check(g, t)
    assert v["combinatorial"] is False and v["algebraic"] is False
    assert v["failing_S"] == ["u", "v"]

    k4 = cr.Graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    assert cr.rank(k4)["rigid"]
    assert cr.check(k4, [0, 1])["combinatorial"] is True

    h = cr.Graph.henneberg(12, 7)
    assert cr.pebble_rank(h) == 21
    h2, t2 = cr.Graph.parse(h.to_json([0, 1]))
    assert h2.edges() == h.edges() and t2 == [0, 1]
    assert h.zero_extension(0, 1).n == 13

    report = cr.xval(n_max=6, samples=20, seed=3)
    assert report["passed"]

    try:
        cr.Graph(3, [(0, 5)])
    except ValueError as e:
        assert "5" in str(e)
    else:
        raise AssertionError("bad edge accepted")

    print(json.dumps({"smoke_test": "ok", "fig4_rank": 12}))


if __name__ == "__main__":
    main()
