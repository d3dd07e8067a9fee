"""Smoke test for the tacx extension module. Run with pytest or directly."""

import json
from pathlib import Path

import tacx

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_ring_info():
    ring = tacx.Ring.from_file(str(FIXTURES / "counterex_r.ring"))
    assert (ring.dim1, ring.dim2) == (6, 3)
    assert ring.yoshino() == (6, 3, False)
    assert ring.verify_truncation()


def test_ezd_and_connected_sum():
    r1 = tacx.Ring.from_file(str(FIXTURES / "exnew_r1.ring"))
    s1 = tacx.Ring.from_file(str(FIXTURES / "exnew_s1.ring"))
    ring, ok = tacx.connected_sum(r1, s1)
    assert ok
    assert ring.verify_ezd("z1 + z2", "z1 - z2")
    assert ring.search_ezd(seed=1, trials=2000)


def test_doubling_and_assembly():
    left = tacx.Complex.from_file(str(FIXTURES / "ex1_l1.cx"))
    right = tacx.Complex.from_file(str(FIXTURES / "ex1_l2.cx"))
    assert left.is_complex()
    dl, alpha, ok = tacx.double(left, dec=[("x1", "y1")], alpha=1)
    assert ok and alpha == 1 and dl.ranks() == [2, 2]
    dr, _, ok = tacx.double(right, dec=[("x4", "y4")])
    assert ok
    total = tacx.assemble(dl, dr)
    assert total.is_complex()
    assert total.is_totally_acyclic()


def test_graph_and_cli():
    ring, ok = tacx.graph_ring((FIXTURES / "path6.graph").read_text())
    assert ok and ring.dim1 == 4
    assert ring.search_ezd(exhaustive=True, proxy_prime=3) == []
    code, out = tacx.run_cli(["complex", "verify", str(FIXTURES / "finalex.cx")])
    assert code == 0
    assert json.loads(out)["results"]["totally_acyclic"] is True


def test_errors():
    try:
        tacx.Ring.from_text("[vars]\nx\n[quadrics]\nx^2\n", prime=2)
    except tacx.TacxError as e:
        assert "characteristic 2" in str(e)
    else:
        raise AssertionError("p = 2 accepted")


if __name__ == "__main__":
    for name, f in list(globals().items()):
        if name.startswith("test_"):
            f()
            print("ok", name)
