#!/usr/bin/env python3
"""
Setup script for fracest - functional a posteriori error bounds for the spectral fractional Laplacian
"""

from setuptools import setup, find_packages
import os
import re

# Read the version without importing the package (it pulls in numpy)
with open(os.path.join("src", "fracest", "__init__.py"), "r", encoding="utf-8") as fh:
    __version__ = re.search(r'^__version__ = "([^"]+)"', fh.read(), re.M).group(1)

# Read README for long description
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="fracest",
    version=__version__,
    author="fracest Development Team",
    description="Guaranteed error majorants and minorants for the spectral fractional Laplacian via its Caffarelli-Silvestre extension",
    long_description=long_description,
    long_description_content_type="text/markdown",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.11",
        "pyyaml>=6.0",
    ],
    extras_require={
        "test": ["mpmath>=1.3"],
    },
    entry_points={
        "console_scripts": [
            "fracest=fracest.cli:main",
        ],
    },
    data_files=[("templates", [os.path.join("templates", f) for f in sorted(os.listdir("templates")) if f.endswith(".yaml")])],
    include_package_data=True,
    zip_safe=False,
)
