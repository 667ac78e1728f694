# -*- coding: utf-8 -*-
from setuptools import setup, find_packages

CLASSIFIERS = [
    "Development Status :: 4 - Beta",
    "Intended Audience :: Science/Research",
    "License :: OSI Approved :: BSD License",
    "Programming Language :: Python",
    "Programming Language :: Python :: 3",
    "Topic :: Scientific/Engineering",
    "Topic :: Scientific/Engineering :: Mathematics",
    "Operating System :: Microsoft :: Windows",
    "Operating System :: POSIX",
    "Operating System :: Unix",
    "Operating System :: MacOS",
]

with open("README.md") as f:
    readme = f.read()

with open("LICENSE") as f:
    license = f.read()

setup(
    name="deseed",
    version="0.1.0",
    classifiers=CLASSIFIERS,
    description="Selected initial populations for Differential Evolution",
    long_description=readme,
    long_description_content_type="text/markdown",
    license=license,
    scripts=["bin/deseed"],
    packages=find_packages(exclude=("test", "tests", "docs")),
    package_data={"deseed": ["profiles/*.yml"]},
    python_requires=">=3.9",
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "pyyaml",
        "cerberus",
        "rich",
        "frictionless>=4.0,<5",
        "altair",
    ],
    extras_require={"test": ["pytest", "hypothesis"]},
)
