"""Bounded distance equivalence of one-dimensional aperiodic point sets."""
from __future__ import annotations

from .bdl import (
    Boundedness,
    bijection_witness,
    classify_boundedness,
    discrepancy_profile,
    doubling_horizons,
    grid_points,
)
from .cutproject import CapSpec, gap_code, generate, kesten_decide, normalize, translate, unimodular_transform
from .morphisms import FixedPointStream, Morphism, fixed_point_window, incidence_matrix, parse_morphism
from .quadfield import Family, PisotUnit, QuadElem, QuadField, floor_elem, format_elem, golden_field, parse_elem
from .spectra import SpectrumSpec, average_lattice_xi, bdl_decide, generate_cap, generate_direct, rep_interval
from .spectral import (
    Verdict,
    adamczewski_verdict,
    char_poly,
    classify_matrix,
    classify_moduli,
    construct_bdl_lengths,
    perron_data,
)
from .words import Alphabet, WordWindow, balance_constant, parse_word

__version__ = "0.1.0"
