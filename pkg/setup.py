#!/usr/bin/env python
# -*- coding: utf-8 -*-
# setup.py

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

# read the contents of your README file
from pathlib import Path

from setuptools import setup

this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text(encoding="utf-8")

setup(name='permpenta',
      version="0.1.0",
      description='Construction and exhaustive verification of permutation pentanomials over F_{q^2}',
      long_description=long_description,
      long_description_content_type="text/markdown",
      license="GPLv3",
      author='the Permpenta developers',
      packages=['permpenta'],
      include_package_data=True,
      python_requires='>=3.9',
      install_requires=[
          'numpy',
          'sympy',
      ],
      entry_points={
          'console_scripts': ['permpenta = permpenta.cli:main'],
      },
      )
