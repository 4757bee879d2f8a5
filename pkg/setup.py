import os
from setuptools import find_packages, setup

pycasimir_root = os.path.dirname(os.path.abspath(__file__))

# Read version from txt file
with open(os.path.join(pycasimir_root, "version.txt")) as version_file:
    version = version_file.read().strip()

# Use README as long description
with open(os.path.join(pycasimir_root, "README.md")) as readme_file:
    long_description = readme_file.read()

setup(
    name="pycasimir",
    version=version,
    description="Finite-temperature Casimir-Polder potentials of "
                "anisotropic particles near curved conductors",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    zip_safe=False,
    python_requires=">=3.7",
    install_requires=["numpy>=1.17", "scipy>=1.4", "psutil",
                      "importlib-metadata>=1.0;python_version<'3.8'",
                      "setuptools"],
    extras_require={
        "doc": ["sphinx", "sphinx-argparse", "sphinx_rtd_theme"],
        "userproject": ["tqdm", "matplotlib"],
        "test": ["mpmath", "pytest", "pytest-cov"]},
    entry_points={
        "console_scripts": ["pycasimir=pycasimir.cli:main"]})
