#!/usr/bin/env python
# -*- coding: utf-8 -*-
# exceptions.py

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

""" Exceptions raised by permpenta. """


class PermpentaError(Exception):
    pass


class DomainError(PermpentaError, ValueError):
    """ An argument lies outside the domain of a field operation (e.g. inverting zero). """


class UnsupportedCharacteristicError(DomainError):
    """ The pentanomial families do not exist in characteristic 3. """

    def __init__(self, p: int = 3):
        super().__init__(f"characteristic {p} unsupported")
        self.p = p


class PreconditionError(PermpentaError, ValueError):
    pass


class LimitsError(PermpentaError):
    """ A configured resource cap (oracle size, dense degree, exponent width) was exceeded. """


class NotListedError(PermpentaError, LookupError):
    pass


class InvariantViolation(PermpentaError, RuntimeError):
    """ A property guaranteed by construction did not hold. """
