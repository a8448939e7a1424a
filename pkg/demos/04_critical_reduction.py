#!/usr/bin/env python3
"""From camera pairs to critical loci: the three worked configurations.

Reduces the 9x8 critical matrix of each builtin camera pair to its 4x3
matrix of linear forms, classifies it, prints the locus decomposition,
and spot-checks that sampled locus points are exactly critical.
"""

import numpy as np

from critloci.critical import (
    critical_point_test,
    fixtures,
    reduce_to_N,
)
from critloci.loci import decompose, sample_component
from critloci.multiview import center
from critloci.poly import compose_linear

rng = np.random.default_rng(5)

for tag in ("scroll_i", "cone_iv", "quadric_v", "quadric_v_model"):
    cfg = fixtures(tag)
    rcm = reduce_to_N(cfg)
    got = rcm.classification
    print(f"--- {tag}: classification {got.family}, "
          f"common factor {got.common_factor.to_text()}")
    dec = decompose(got)
    for comp in dec.components:
        print(f"    {comp.kind} (dim {comp.dim}, deg {comp.degree})")
    comp = next(c for c in dec.components if c.dim >= 2 and c.degree >= 2)
    pts = sample_component(comp, 3, rng)
    flags = [critical_point_test(cfg, p)[0] for p in pts]
    print(f"    sampled {comp.kind} points critical: {flags}")
    q = got.common_factor
    if q.degree() == 2:
        on_q = [compose_linear(q, list(center(P).basis)).is_zero for P in cfg.P]
        print(f"    camera centers on the quadric component: {on_q}")
