# %% [markdown]
# # Forcing geodesics through a corridor
#
# Cheap edges on two nested box boundaries and on one spoke between them,
# expensive edges everywhere else.  Every geodesic from the inner boundary
# to the outer boundary then has to run along the spoke.

# %%
from fractions import Fraction
from pathlib import Path

from fpplab.constructions import build_corridor, build_multi_corridor, verify_corridor
from fpplab.render import render_2d
from fpplab.values import ValueSet

out = Path("notebook_out")
out.mkdir(exist_ok=True)

A = ValueSet.interval(1, 10)
cfg, spec = build_corridor(A, 2, 3, eps=Fraction(1, 2), a=8)
print("outer radius p2 =", spec.p2, " expensive value a =", spec.a)

# %% exhaustive check over every (inner boundary, outer boundary) pair
rep = verify_corridor(cfg, spec)
print("verdict:", rep.verdict, " pairs checked:", rep.checked_pairs)

# %% shrink the outer box and the claim breaks
small_cfg, small_spec = build_corridor(A, 2, 3, eps=Fraction(1, 2), a=8, p2=4)
bad = verify_corridor(small_cfg, small_spec)
print("undersized verdict:", bad.verdict)
print("counterexample:", bad.counterexample["x1"], "->", bad.counterexample["x2"])

# %% picture: boxes dashed, forced segment in orange
(out / "corridor.svg").write_text(render_2d(cfg, segments=spec.segments, boxes=(spec.inner, spec.outer), cell=6))

# %% [markdown]
# With every axis spoke cheap, geodesics between the boxes must use one of
# the 2d spokes.  Since a ray keeps one spoke forever, at most 4d² rays
# can leave the origin.

# %%
mcfg, mspec = build_multi_corridor(ValueSet.finite([1, 2]), 2, 1, Fraction(3, 2))
mrep = verify_corridor(mcfg, mspec)
print("four spokes, p2 =", mspec.p2, " verdict:", mrep.verdict)
(out / "multi_corridor.svg").write_text(render_2d(mcfg, segments=mspec.segments, boxes=(mspec.inner, mspec.outer), cell=3))
