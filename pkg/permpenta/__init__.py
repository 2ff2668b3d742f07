#!/usr/bin/env python
# -*- coding: utf-8 -*-
# __init__.py

# Copyright (c) 2024, the Permpenta developers
#
# This file is part of Permpenta.
#
# Permpenta is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# Permpenta is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with Permpenta. If not, see <http://www.gnu.org/licenses/>

__version__ = '0.1.0'

from .config import Limits, RunConfig
from .exceptions import (DomainError, InvariantViolation, LimitsError, NotListedError, PermpentaError,
                         PreconditionError, UnsupportedCharacteristicError)
from .field_core import (ExtElem, ExtFieldCtx, FpPoly, MobiusMap, ProjPoint, ext_arith, field_context,
                         find_irreducible, find_omega, frobenius, in_subfield_q, enumerate_mu, mobius_eval)
from .pentanomial import (PentanomialSpec, ResidueTriple, Theorem, assemble_f, build_Bz, build_C,
                          canonicalize_sigma, construct, select_beta, table_closed_form)
from .sparse_poly import SparsePoly, poly_gcd_ext
from .verify import (brute_force_permutes, check_prop_cubic, criterion_T1, criterion_T2, mu_reduction_permutes,
                     verify_spec, verify_thm3)
