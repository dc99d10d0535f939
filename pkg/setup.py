#!/usr/bin/env python3
from setuptools import setup

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="germext",
    version="0.1.0",
    description="K-map germ extension and Borel-series verification toolkit",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=["src", "src.suites"],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
    ],
    extras_require={
        "test": [
            "pytest>=7.0",
            "hypothesis>=6.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "germext=src.germext:main",
        ],
    },
)
