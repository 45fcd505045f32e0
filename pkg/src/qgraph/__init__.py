"""Spectra of quantum graphs with scaling potentials.

Build a graph, assemble its bond scattering matrix, expand the spectral
determinant into a finite cosine sum, classify the graph as regular,
marginal or irregular, and compute individual eigenvalues from periodic
orbit expansions.

>>> from qgraph import catalog, assemble, spectral_model
>>> model = spectral_model(assemble(catalog.step_in_box(b=0.3, lam=0.5)))
>>> model.regularity.value
'Regular'
"""
from .charpoly import (Classification, RegularityClass, SpectralModel, TrigPolynomial,
                       classify, expand_determinant, extract_model, spectral_model)
from .config import DEFAULT, Tolerances
from .errors import (ClassRefusal, ConsistencyError, InadmissibleCodeError,
                     InvalidGraphError, PreconditionError, QGraphError,
                     SearchWindowError, SizeCapError)
from .graph import (DIRICHLET, NEUMANN, Bond, Graph, PiecewisePotential, VertexCondition,
                    compile_potential, dump_graph, load_graph, validate)
from .oracle import average_staircase, convergence_study, find_roots, staircase
from .orbits import census, enumerate_primes, staircase_fluctuation, trace_powers
from .scattering import ScatteringAssembly, S_of_k, assemble, delta_direct
from .spectra import (compute_spectrum, determine_mu, eigenvalue_explicit,
                      eigenvalue_implicit, eigenvalue_simplified, moment, oracle_levels,
                      separators)
from . import catalog

__version__ = "0.1.0"
