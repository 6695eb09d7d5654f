# %% [markdown]
# # Reach sets that look like a prescribed shape
#
# Take a non-convex star-shaped target: a half-size diamond with a spike
# along the first axis.  Build weights whose reach set at time t, scaled
# by 1/t, sits within 1/4 of it in the ℓ1 Hausdorff metric.

# %%
from fractions import Fraction as F
from pathlib import Path

from fpplab.constructions import build_shape_config, detour_witness_check, verify_shape_config
from fpplab.engine import reach_set
from fpplab.lattice import Window, constant_configuration
from fpplab.render import render_2d
from fpplab.shapes import check_shape_class, l1_ball_shape, segment_shape
from fpplab.values import INF, ValueSet

out = Path("notebook_out")
out.mkdir(exist_ok=True)
K = l1_ball_shape(F(1, 2), 8).union(segment_shape((0, 0), (1, 0), 8))
print(check_shape_class(K, ValueSet.interval(0, 2)).to_dict())

# %%
for A in (ValueSet.interval(0, INF, hi_closed=False), ValueSet.interval(0, 2)):
    cfg, claim = build_shape_config(A, K, 4)
    res = verify_shape_config(cfg, K, claim)
    print(f"case {claim.case}: t={claim.t} d_H={res['hausdorff']} bound={claim.bound} ok={res['verdict']}")
    B = reach_set(cfg, (0, 0), claim.t)
    (out / f"shape_case_{claim.case}.svg").write_text(render_2d(B, cell=8))

# %% [markdown]
# With weights in {1, 2} the spike is out of reach: from a point on the
# diamond boundary a diagonal detour is cheap, so the reach set always
# bulges away from the spike shape.

# %%
flat = constant_configuration(Window.box(46, 2), ValueSet.finite([1, 2]), 1)
rep = detour_witness_check(flat, 40, F(1, 8), 2)
print(len(rep.witnesses), "witnesses, e.g.", rep.witnesses[0])
