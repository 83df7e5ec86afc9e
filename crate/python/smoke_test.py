"""Smoke test for the wildstrat Python extension."""

from fractions import Fraction

import wildstrat


def main() -> None:
    rd = wildstrat.RootDatum("gl3")
    assert (rd.rank, rd.dim, rd.cartan_dim, rd.num_roots) == (2, 9, 3, 6)
    assert len(rd.basis_names()) == 9
    assert rd.cartan_matrix() == [[2, -1], [-1, 2]]

    assert wildstrat.levi("gl3")["nodes"] == 5
    assert wildstrat.levi("B2")["nodes"] == 6
    assert wildstrat.levi("sl2", depth=3)["filtrations"] == 4

    zero = wildstrat.classify("gl2", [(1, "E11", 0)])
    assert zero["marking_filtration"] == [[0, 1], [0, 1]]
    same = wildstrat.classify("sl2", [(0, "H1", 1), (1, "H1", 1)], other=[(0, "H1", -1), (1, "H1", -1)], depth=2)
    assert isinstance(same, dict)

    sl2 = wildstrat.shapovalov("sl2", [[3]], height=3)
    assert sl2["nonsingular"] is True and len(sl2["blocks"]) > 0

    simple = wildstrat.simplicity("sl2", [[Fraction(1, 2)], [1]], height=3)
    assert "profile" in simple and "probe" in simple

    q = wildstrat.quantize("sl2", [[2], [-5]], height=3, order=2)
    assert q["associativity"]["equal"] is True

    try:
        wildstrat.quantize("sl2", [[0], [0]], height=3, order=2)
    except ValueError:
        pass
    else:
        raise AssertionError("singular formal type was accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
