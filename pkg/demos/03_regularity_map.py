"""Where is a four-vertex chain regular?

The chain is parameterised by the reflection amplitudes r2 and r3 at its two
inner vertices.  It is regular exactly when |r2| + |r3| + |r2 r3| < 1.  We
draw a coarse character map of the computed classification.
"""
from qgraph.cli import regmap_rows

grid = 21
_, _, rows = regmap_rows("four-vertex-chain", grid)
symbol = {"Regular": "#", "Marginal": "+", "Irregular": "."}
print("r3 ^ (rows), r2 -> (columns); # regular, . irregular")
for j in reversed(range(grid)):
    print("".join(symbol[rows[i * grid + j][3]] for i in range(grid)))
