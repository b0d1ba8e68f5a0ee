"""Turn the spectral sequence by hand for one branch and watch the pages.

The route followed here: all early differentials vanish, the degree-4
fiber class transgresses at page 5.  Every page is printed as a small
grid of dimensions (rows = fiber degree, columns = base degree).
"""

import numpy as np

from borelss import FiberPresentation, build_e2, extend_leibniz, turn_page
from borelss.spectral import advance, is_terminal, tot_series

fiber = FiberPresentation("R", 3)


def show(page, kmax=8):
    print(f"page {page.r}" + ("  (terminal)" if is_terminal(page) else ""))
    for l in range(fiber.top, -1, -1):
        row = " ".join(str(page.dim(k, l) or ".") for k in range(kmax + 1))
        print(f"  l={l}: {row}")
    print()


page = build_e2(fiber)
show(page)

page = advance(page, 5)
gen_b = next(g for g in page.generators if g.label == "b")
print(f"transgressing {gen_b.label} at page 5 onto the bottom row\n")
d5 = extend_leibniz(page, {gen_b: np.array([1], dtype=np.uint8)})
page = turn_page(page, d5)
show(page)

series, clean = tot_series(page)
print("total-degree dimensions:", " ".join(str(c) for c in series.coeffs))
print("compatible with a free involution:", clean)
