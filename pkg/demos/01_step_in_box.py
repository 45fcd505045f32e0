"""A potential step in a box, from graph to individual eigenvalues.

The box [0, 1] carries a step of height E/2 starting at x = 0.3.  Because the
potential scales with the energy, the problem becomes a three-vertex chain
whose spectral determinant is a short cosine sum.  We print that sum, the
regularity margin, and the first few eigenvalues from three routes: the
periodic-orbit formula, the implicit fixed-point equation and a root scan.
"""
from qgraph import assemble, catalog, compute_spectrum, determine_mu, spectral_model

asm = assemble(catalog.step_in_box(b=0.3, lam=0.5))
model = spectral_model(asm)
print(f"S0 = {model.S0:.6f}, gamma0 = {model.gamma0:.3f}")
for a, s, g in model.terms:
    print(f"  term: {a:+.6f} cos({s:.6f} k - pi*{g:.3f})")
print(f"alpha = {model.alpha:.6f} -> {model.regularity.value}")

model = model.with_mu(determine_mu(model))
result = compute_spectrum(model, asm, n_max=8, L=150)
print(f"\n{'n':>3} {'explicit':>14} {'implicit':>14} {'root scan':>14}")
for rec in result.levels:
    print(f"{rec.n:3d} {rec.k_explicit:14.10f} {rec.k_implicit:14.10f} {rec.k_oracle:14.10f}")
