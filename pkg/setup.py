"""
Setup script for elicitcheck
"""

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="elicitcheck",
    version="0.3.0",
    author="elicitcheck developers",
    description=(
        "Checks indirect elicitation, strong indirect elicitation and calibration "
        "of surrogate losses against discrete target losses"
    ),
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(),
    package_data={"elicitcheck": ["data/*.json"]},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.9",
        "matplotlib>=3.5",
        "psutil>=5.8.0",
        "rich>=13.0.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.0",
            "hypothesis>=6.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "elicitcheck=elicitcheck.main:main",
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
