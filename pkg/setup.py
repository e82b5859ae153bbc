"""Setup script for slicesum"""

from setuptools import setup, find_packages

setup(
    name="slicesum",
    version="1.0.0",
    description="Fast high-dimensional kernel summation via Fourier slicing",
    author="slicesum developers",
    packages=find_packages(include=["slicesum", "slicesum.*"]),
    py_modules=["main"],
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "mpmath>=1.3.0",
        "pydantic>=2.5.3",
        "rich>=13.7.0",
        "psutil>=5.9.6",
        "orjson>=3.9.10",
        "tabulate>=0.9.0",
        "pyyaml>=6.0.1",
    ],
    entry_points={
        "console_scripts": [
            "slicesum=main:main",
        ],
    },
    python_requires=">=3.10",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
)
