"""The one D(2,1;a) golden-table bracket whose sign disagrees with the realization.

The bracket [f321, e'1123] is computed directly and compared with the listed
value -(1+a) e1.  The realization gives +(1+a) e1 for every tested a, which
also follows by expanding e'1123 = [e1, e123] with the super Jacobi identity.
"""

from supchev.acceptance import D21A_PARAMETERS, d21a_golden_mismatches
from supchev.superalg import D21ARealization

if __name__ == "__main__":
    for a in D21A_PARAMETERS:
        real = D21ARealization(a)
        el = real.named_elements()
        got = real.bracket(el["f321"], el["e'1123"])
        print(f"a = {a:2}: [f321, e'1123] == (1+a) e1: {got == el['e1'].scale(1 + a)}; mismatches: {d21a_golden_mismatches(a)}")
