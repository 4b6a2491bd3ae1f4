"""Rotationally symmetric self-shrinkers from geodesics of the Angenent metric."""

from .model import (AmbientConfig, Event, EventKind, GeodesicState, InitialData,
                    ProfileCurve, Reference, Termination, exact_solution, residual)
from .integrator import (Direction, IntegrationError, IntegratorSettings,
                         axis_series_coefficients, axis_series_start, integrate,
                         integrate_both, step_rhs)
from .segments import (Endpoint, EndpointKind, HalfEntire, HalfEntireKind, Segment,
                       admissible_limits, decompose, half_entire_kind, segment_distance)
from .shooting import (BisectionResult, BracketError, DepthError, Family, FamilyEntry,
                       Near, ShotOutcome, ShrinkerFamily, Topology, bracket_bisect,
                       build_family, closed_orbit, find_angenent_torus,
                       find_immersed_sphere, shoot)
from .verification import CheckReport, VerificationError, run_suite

__version__ = "0.1.0"
