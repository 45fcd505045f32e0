"""How fast does the orbit sum converge?

The explicit formula truncates the periodic-orbit expansion at code length L.
Its relative error drops roughly like 1/L^2 for the step in a box; this script
prints the error table and a fitted log-log slope.
"""
import numpy as np

from qgraph import assemble, catalog, convergence_study, determine_mu, spectral_model

asm = assemble(catalog.step_in_box())
model = spectral_model(asm)
model = model.with_mu(determine_mu(model))

Ls = [10, 20, 40, 80, 150]
rows = convergence_study(model, asm, [1, 10, 100], Ls)
print(f"{'n':>4} " + " ".join(f"L={L:<8d}" for L in Ls))
for n in (1, 10, 100):
    errs = [eps for m, L, _, _, eps in rows if m == n]
    print(f"{n:4d} " + " ".join(f"{e:.2e}  " for e in errs))
    slope = np.polyfit(np.log(Ls), np.log(errs), 1)[0]
    print(f"     fitted slope {slope:.2f}")
