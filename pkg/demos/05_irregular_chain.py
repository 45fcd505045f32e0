"""What goes wrong for an irregular graph.

With strong reflections the cosine sum can exceed one in modulus, so some
separators are pierced.  Counting roots below each separator then no longer
reproduces the level index, and the explicit formula refuses to run.
"""
import numpy as np

from qgraph import (ClassRefusal, assemble, catalog, determine_mu, eigenvalue_explicit,
                    find_roots, spectral_model, staircase)
from qgraph.spectra import separator

asm = assemble(catalog.four_vertex_chain(0.98, 0.99))
model = spectral_model(asm)
print(f"alpha = {model.alpha:.4f} -> {model.regularity.value}")
model = model.with_mu(determine_mu(model, check=False))

n = np.arange(1, 201)
scan = find_roots(model, float(separator(model, 200)) + 1.0)
N = staircase(scan, separator(model, n))
print(f"N(khat_n) != n for {int(np.sum(N != n))} of 200 separators")
try:
    eigenvalue_explicit(model, asm, 1, 50)
except ClassRefusal as exc:
    print(f"explicit formula refused: {exc}")
