"""
Setup script for boxproj.

Random projections of high-dimensional box and mixture models
"""

from setuptools import setup, find_packages
from pathlib import Path

# Read the README file
this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text(encoding="utf-8") if (this_directory / "README.md").exists() else ""

setup(
    name="boxproj",
    version="1.0.0",
    author="boxproj",
    author_email="",
    description="Random projections of high-dimensional box and mixture models",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.9",
        "pydantic>=2.0",
        "matplotlib>=3.5",
    ],
    extras_require={
        "dev": [
            "pytest",
            "coverage",
            "flake8",
            "black",
            "isort",
        ],
    },
    entry_points={
        "console_scripts": [
            "boxproj=boxproj.cli:main",
        ],
    },
    keywords=[
        "random-projection",
        "clustering",
        "monte-carlo",
        "high-dimensional",
        "simulation",
    ],
)
