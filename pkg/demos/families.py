"""Sequences of shrinkers converging to the plane, the torus and the cylinder.

Each entry is found by bisecting the shooting parameter across a change in
the type of one segment. The printout lists parameter, topology, segment
count and the segment types seen just below the parameter.
"""

import sys

from shrinkers import AmbientConfig, IntegratorSettings, Near, build_family


def show(fam):
    print(f"near {fam.near.value}:")
    for e in fam.entries:
        print(f"  k={e.k}  t={e.t:.15f}  {e.topology.value:<9} "
              f"segments={e.segment_count}  types={' '.join(e.types)}")
    if fam.diagnostic:
        print(f"  stopped: {fam.diagnostic}")


def main(n=2):
    config = AmbientConfig(n)
    settings = IntegratorSettings()
    for near, count in ((Near.PLANE, 4), (Near.CYLINDER, 3), (Near.ANGENENT_TORUS, 4)):
        show(build_family(config, settings, near, count))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 2)
