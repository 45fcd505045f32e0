"""Counting periodic orbits on a small graph.

Prime periodic orbits proliferate exponentially with code length.  The growth
rate (topological entropy) is the log of the spectral radius of the bond
connectivity matrix.  We count orbits on a five-vertex, seven-bond graph and
compare the estimate with that benchmark.
"""
from qgraph import assemble, catalog, census

c = census(assemble(catalog.fig2()), 14)
print(f"{'l':>3} {'primes':>10}")
for l, n in enumerate(c.primes, start=1):
    print(f"{l:3d} {n:10d}")
print(f"entropy estimate {c.entropy:.6f}, benchmark {c.entropy_benchmark:.6f}")
