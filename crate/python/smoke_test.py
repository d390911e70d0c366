"""Smoke test for the `cft` extension module.

Build first, e.g. `maturin develop -m crates/py/Cargo.toml`, or copy
target/release/libcft.so next to this file as cft.so.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import cft


def test_elements():
    z = cft.CycElem.zeta(5)
    one = cft.CycElem(5, [1])
    total = one
    for k in range(1, 5):
        total = total + z ** k
    assert total == cft.CycElem(5, [0]), total
    assert z.norm() == "1"
    assert z.trace() == "-1"
    assert (z * z.inverse()) == one
    assert z.apply(2) == z ** 2
    half = cft.CycElem(5, ["1/2", 0, 1])
    assert not half.is_algebraic_integer()
    assert half.coeffs()[0] == "1/2"
    assert cft.CycElem(5, [1, 1, 1, 1, 1]) == cft.CycElem(5, [])
    try:
        cft.CycElem(5, ["1/0"])
    except ValueError:
        pass
    else:
        raise AssertionError("zero denominator accepted")


def test_coprime():
    out = cft.coprime_seq([1, 2, 3])
    assert out == [2, 5, 31], out
    big = cft.coprime_seq([10**30, 7])
    assert big[0] == 10**30 + 1


def test_constructions():
    t = cft.trace_gen(5)
    assert [str(x) for x in t["denominators"]] == ["11", "111"], t["denominators"]
    n = cft.norm_gen(5, [[2], [4], [1]])
    assert n["telescoping"] is True
    assert all(c["generates"] for c in n["checks"])
    e = cft.normal_element(3)
    assert e["denominators"] == ["5", "1", "6", "91"], e["denominators"]
    assert cft.is_normal(cft.CycElem(5, [1, 1]), 5) in (True, False)
    d = cft.cm_degrees(-7, 3)
    assert isinstance(d, dict)


def test_modular():
    j = cft.modfun("j", "0,1", digits=40)
    assert j["re"].startswith("1728.0000000000"), j
    g = cft.modfun("siegel", "0,1", index="0,1,2", digits=40)
    assert g["im"].startswith("1.18920711500272"), g


def test_verify():
    res = dict(cft.verify([2, 8]))
    assert res == {2: True, 8: True}, res


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
