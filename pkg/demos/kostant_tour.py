"""Straightening products in the Kostant form of osp(1|2) and sl(2|1)."""

from supchev.kostant import format_kostant, integrality_check, parse_kostant_expr, pbw_normalize
from supchev.superalg import build_chevalley_basis


def show(family: str, text: str) -> None:
    cb = build_chevalley_basis(family)
    out = pbw_normalize(parse_kostant_expr(text, cb.rd), cb)
    ok, _ = integrality_check(out)
    print(f"{family:9} {text:28} -> {format_kostant(out, cb.rd)}   (integral: {ok})")


if __name__ == "__main__":
    # an odd root vector squares to a root vector when twice the root is a root
    show("osp(1|2)", "Y(g1) Y(g1)")
    show("osp(1|2)", "Y(g2) Y(g1)")
    # moving an odd vector past a divided power of twice its root costs a single lower term
    for n in (1, 2, 3):
        show("osp(1|2)", f"Y(g2) X(a1)^({n})")
    show("sl(2|1)", "X(a2)^(2) X(a1)^(2)")
    show("sl(2|1)", "Y(g4) Y(g1) X(a1)^(3)")
