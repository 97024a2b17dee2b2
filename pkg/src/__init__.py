"""
# tropcy
Builds toric degenerations of Calabi-Yau complete intersections in reflexive toric
varieties, and computes on them with exact rational arithmetic: nef partitions, Cayley
fans, the tropical spheres A and B, intersection numbers by lattice-point counting, and
a discrete Monge-Ampère (semi-discrete optimal transport) problem from B to A.

## Quick Start
Four scenarios are bundled: `sq` (the square, a plane curve), `p2` (the anticanonical
curve in the projective plane), `p3_22` (the (2,2) complete intersection in projective
3-space) and `quartic` (the quartic surface). Load one by name, or pass the path of a
scenario file of your own:
```py
>>> import tropcy as tc
>>> sq = tc.load("sq")
>>> sq.sphere_A.total
Fraction(8, 1)
>>> sq.sphere_B.total
Fraction(4, 1)
>>> sq.verify_volume_lemma().summary
'd!·μ(A_h) = 8 = (L_h^d)'
```
Every stage of the construction is computed on first access and then cached:
`npd` (the nef partition), `cayley`, `good` (the good subdivision), `h_tilde`,
`dual_complex`, `sphere_A`, `sphere_B`. `check()` evaluates every input condition and
returns a report with witnesses for the failures:
```py
>>> sq.check()
```

## Examples
### Counting sections
`hilbert()` tabulates h(I, kL) for every subset I of the parts, and fits polynomials
exactly when the window of k is long enough:
```py
>>> table = tc.load("p3_22").hilbert(k_max=5)
>>> table.to_frame()
```
The count h({1..r}, kL) equals the number of lattice points of k·A, which equals the
number of monomial sections found by brute force.

### Discrete transport
`solve()` discretizes A into atoms and finds weights whose Laguerre cells on B carry the
masses of the atoms:
```py
>>> result = tc.load("p2").solve(tc.SolverParams(s=2, tol=1e-9))
>>> result.weights.converged
True
>>> result.report.max_deviation < 1e-9
True
```

### Command line
The same operations are available from a shell:
```sh
$ tropcy check p3_22
$ tropcy volume sq
$ tropcy hilbert p3_22 --k-max 6
$ tropcy solve-ma p2 --s 2 --tol 1e-9 --out results
$ tropcy export quartic --out results --projection "1,0,0;0,1,0;0,0,1"
```
Exit codes: 0 on success, 1 for invalid input, 2 when a condition fails, 3 when the
solver does not converge.

### Scenario files
A scenario is a JSON object. Numbers are integers or decimal strings, parts are numbered
from 1:
```json
{
  "name": "sq",
  "rank": 2,
  "d": 1,
  "r": 1,
  "delta_vertices": [[-1, -1], [1, -1], [1, 1], [-1, 1]],
  "nef_partition": {"parts": [[[-1, -1], [1, -1], [1, 1], [-1, 1]]]},
  "solver": {"s": 1, "tol": "1e-9"}
}
```
Optional fields: `h_values` and `hcheck_values` (lists of `{"ray", "value"}`, by
default the anticanonical functions), `sigma_prime`, `sigma_check_prime` and
`sigma_tilde_prime` (lists of cones, each a list of rays), and
`nef_partition.ray_assignment` (a list of `{"ray", "part"}`) in place of `parts`.

## See Also
### Github repository
* https://github.com/tropcy/tropcy/

### PyPI project
* https://pypi.org/project/tropcy/

## License
This project falls under the BSD 3-Clause License.

"""

import lazyr

VERBOSE = 0

lazyr.register("pandas", verbose=VERBOSE)
lazyr.register("sympy", verbose=VERBOSE)

# pylint: disable=wrong-import-position
from . import (
    abc,
    cayley,
    cli,
    core,
    ehrhart,
    errors,
    fans,
    geometry,
    interaction,
    nef,
    scenario,
    spheres,
    transport,
    utils,
)
from .__version__ import __version__
from .abc import *
from .cayley import *
from .cli import *
from .core import *
from .ehrhart import *
from .errors import *
from .fans import *
from .geometry import *
from .interaction import *
from .nef import *
from .scenario import *
from .spheres import *
from .transport import *

__all__ = ["utils"]
__all__.extend(abc.__all__)
__all__.extend(cayley.__all__)
__all__.extend(cli.__all__)
__all__.extend(core.__all__)
__all__.extend(ehrhart.__all__)
__all__.extend(errors.__all__)
__all__.extend(fans.__all__)
__all__.extend(geometry.__all__)
__all__.extend(interaction.__all__)
__all__.extend(nef.__all__)
__all__.extend(scenario.__all__)
__all__.extend(spheres.__all__)
__all__.extend(transport.__all__)
