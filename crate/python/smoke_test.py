"""Smoke test for the nrmsym extension module."""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import nrmsym

HERE = os.path.dirname(os.path.abspath(__file__))
SPECS = os.path.join(HERE, "..", "crates", "core", "specs")


def main():
    frame = nrmsym.Frame([("H", 3, "1/2"), ("N", 1, 0.5)])
    assert frame.slots == 4
    assert frame.spin_dim() == 16 and frame.spin_dim(False) == 8

    a = frame.element("(1 2 3)")
    b = frame.element("(1 2)*")
    assert (a * a * a) == frame.element("E")
    assert b.star and (b * b) == frame.element("E")
    assert frame.spin_character(frame.element("E")) == 16.0

    chain = nrmsym.GroupChain(frame, ["(1 2 3)", "(1 2)*"], ["E*"])
    assert (chain.r_order, chain.q_order, chain.cosets) == (6, 12, 2)
    assert chain.case == "B"
    labels = chain.irrep_labels("r")
    split = chain.splitting(labels[0])
    assert sum(split.values()) == 2, split
    assert sum(d * d for d in chain.irrep_dims("q")) == 12

    weights = chain.statistical_weights()
    assert sum(w * d for w, d in zip(weights.values(), chain.irrep_dims("q"))) > 0

    with open(os.path.join(SPECS, "nh3.json")) as f:
        spec = json.load(f)
    report = nrmsym.run("spectrum", spec)
    assert report["schema"] == "nrmsym-report/1"
    assert nrmsym.run("group", json.dumps(spec))["name"] == spec["name"]

    try:
        nrmsym.GroupChain(frame, ["(1 5)"])
    except nrmsym.ValidationError:
        pass
    else:
        raise AssertionError("expected ValidationError")

    print("smoke test OK:", chain, split, dict(weights))


if __name__ == "__main__":
    main()
