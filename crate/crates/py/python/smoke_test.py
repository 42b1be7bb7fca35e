"""Smoke test for the apnlab Python extension.

Build and install first, e.g. `pip install --no-build-isolation ./crates/py`
(needs maturin), then run `python crates/py/python/smoke_test.py`.
"""

import os
import tempfile

import apnlab


def main():
    f = apnlab.Field(8)
    assert f.modulus == 0x11B
    assert f.primitive == 0x3
    assert f.mul(0x53, f.inv(0x53)) == 1
    assert f.pow(f.primitive, 255) == 1

    gold = apnlab.Function.from_descriptor('{tag:"Gold", n:7, i:1}')
    assert gold.is_apn() and gold.is_apn_quadratic()
    assert gold.delta() == 2
    assert gold(1) == 1

    try:
        apnlab.Function.from_descriptor('{tag:"Gold", n:6, i:2}')
    except ValueError as e:
        assert "gcd(i,n)=1" in str(e)
    else:
        raise AssertionError("side condition not enforced")

    cube = apnlab.Function.from_lut(apnlab.Field(6), [apnlab.Field(6).pow(z, 3) for z in range(64)])
    assert cube.gamma_rank() == 1102
    assert cube.gamma_rank(out_of_core=True) == 1102

    biv = apnlab.Function.from_descriptor('{tag:"NewBivariate", m:4}')
    assert biv.delta() == 2
    assert biv.ddt_histogram()[2] == 255 * 128

    params = apnlab.search_trinomial(3)
    assert len(params) == 756
    assert apnlab.search_trinomial(2, narrow_s=True) == []
    s, mu = params[0]
    f9 = apnlab.Field(9)
    v = next(x for x in range(1, 512) if f9.pow(x, 8) == x)
    assert apnlab.verify_key_lemma_at(3, s, mu, v, 1)
    assert apnlab.verify_resultant(4)
    assert apnlab.cubic_root_count(apnlab.Field(5), 1, 1) == 0

    rows = apnlab.representative_rows(8)
    assert [r["published_gamma_rank"] for r in rows][:3] == [11818, 12370, 15358]

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "code.txt")
        gold.export_code(path, "plain-bits")
        with open(path) as fh:
            lines = fh.read().split()
        assert len(lines) == 15 and all(len(l) == 128 for l in lines)

    print("apnlab smoke test passed")


if __name__ == "__main__":
    main()
