"""Quick end-to-end check of the extension module. Run with pytest or plain python."""

import json

import pytest

import cbm

TRIANGLE = json.dumps({"vertices": [[0, 0], [1, 0], [0, 1]]})
SQUARE = json.dumps([[0, 0], [1, 0], [1, 1], [0, 1]])


def test_gen_round_trips():
    text = cbm.gen(10, seed=3)
    assert cbm.gen(10, seed=3) == text
    assert len(json.loads(text)["vertices"]) >= 3


def test_inscribe_triangle():
    out = json.loads(cbm.inscribe(TRIANGLE))
    assert out["lemma"]["holds"]
    assert out["residuals"]["boundary"] < 1e-9


def test_witness_triangle_is_three():
    out = json.loads(cbm.witness(TRIANGLE, TRIANGLE, tighten=True))
    assert abs(out["witness"]["lambda"] - 3.0) < 1e-9
    svg = cbm.render_svg(json.dumps(out["trace"]))
    assert svg.startswith("<svg")


def test_estimate_square_triangle():
    out = json.loads(cbm.estimate(SQUARE, TRIANGLE, budget="low"))
    assert out["verified"]
    assert abs(out["lambda_hat"] - 2.5) < 1e-3


def test_pentagon_triangle():
    out = json.loads(cbm.pentagon_triangle())
    assert out["verified"] and out["lambda"] < cbm.BOUND
    assert 'data-label="T*"' in cbm.render_svg()


def test_errors():
    with pytest.raises(ValueError):
        cbm.inscribe("[[0, 0], [1, 0]]")
    with pytest.raises(ValueError):
        cbm.estimate(SQUARE, TRIANGLE, mode="nope")
    with pytest.raises(ValueError):
        cbm.certify(grid=8)
    assert issubclass(cbm.VerificationError, RuntimeError)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
