"""Case taxonomy and the semi-parallel verdict across the built-in meridian families.

The case comes from the measured curvatures (spherical curve kappa, profile
kappa_alpha); the branch predicted from them is checked against the verdict
measured by the semi-parallelity engine.
"""
from meridian4 import TolerancePolicy, classify_meridian
from meridian4.families import MERIDIAN_FAMILIES

policy = TolerancePolicy()
print(f"{'family':<18} {'case':<5} {'branch':<18} {'semi-par':<9} {'max residual':>13} {'K range':>24} {'span':>5}")
for name, fam in MERIDIAN_FAMILIES.items():
    r = classify_meridian(fam.handle(policy), fam.grid(6), policy)
    print(f"{name:<18} {r.case:<5} {r.theorem2_branch:<18} {str(r.semi_parallel):<9} "
          f"{r.semiparallel_residual_max:13.3e} {r.K_min:11.4f} .. {r.K_max:9.4f} {r.affine_span_dim:5d}")
    for note in r.notes:
        print(f"{'':<18} note: {note}")
