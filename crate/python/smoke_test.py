"""Smoke test for the nilgeom_py extension module."""

import nilgeom_py as ng


def main():
    c = ng.classify(family="F215", rho=0, delta=0, s=1, t=1)
    assert c["schema"] == ng.SCHEMA
    assert c["algebra"] == "h3" and c["complex_type"] == "abelian", c

    h = ng.holonomy(family="F214", t=1)
    assert h["dim"] == 8 and h["label"] == "su3", h

    s = ng.strominger(family="F215", rho=0, delta=0, t=1, **{"lambda": 1})
    print("h3 strominger:", {k: s[k] for k in ("anomaly", "heterotic") if k in s})

    d = ng.ddbar(family="DEF", backend="float", **{"lambda": "1/4"})
    assert d["verdict"] == "fails", d

    rows = ng.sweep("t", (1, 2), family="F214")
    assert [r[0] for r in rows[1:]] == ["1", "2"], rows

    try:
        ng.classify(family="F999")
    except ValueError as e:
        print("parse error:", e)
    else:
        raise AssertionError("expected ValueError")
    try:
        ng.classify(family="F214", t=0)
    except RuntimeError as e:
        print("precondition:", e)
    else:
        raise AssertionError("expected RuntimeError")

    code, out, _ = ng.run(["classify", "--preset", "h5"])
    assert code == 0 and out.startswith("algebra: h5"), out
    print("ok")


if __name__ == "__main__":
    main()
