"""Factorizing a supergroup word into its normal form and recovering the odd coordinates."""

from pathlib import Path

from supchev.scalarring import format_grassmann
from supchev.superalg import build_chevalley_basis
from supchev.supergroup import (
    extract_odd_coordinates,
    factorize,
    group_module,
    matrix_to_json,
    parse_group_word,
    word_to_matrix,
)

if __name__ == "__main__":
    cb = build_chevalley_basis("sl(2|1)")
    gm = group_module(cb, n_gens=4)
    text = (Path(__file__).parent / "words" / "opposite_pair.txt").read_text()
    word = parse_group_word(text, cb, gm.ring)
    print("word matrix:")
    for row in matrix_to_json(word_to_matrix(word, gm)):
        print("  ", row)
    nf = factorize(word, gm)
    print("even factor g0:")
    for row in matrix_to_json(nf.g0):
        print("  ", row)
    for r, th in {**nf.theta_minus, **nf.theta_plus}.items():
        if not th.is_zero():
            print(f"theta[{cb.rd.label(r)}] = {format_grassmann(th)}")
    again = extract_odd_coordinates(word_to_matrix(word, gm), gm)
    print("coordinate extraction agrees:", again.coordinates() == nf.coordinates())
