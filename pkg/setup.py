from setuptools import setup
import setuptools

long_description = "redist reinitializes level-set functions into signed distance functions on unstructured triangle meshes. It solves the flow-of-time Eikonal equation with a high-order local discontinuous Galerkin method, stabilizes elements with kinks by a finite-volume subcell limiter with WENO gradients, and recovers the distance from first arrival times."

setup(
    name='redist',
    version='0.1.0',
    license='LICENSE.txt',
    packages=setuptools.find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    py_modules=['redistance'],
    description='redist is a package for high-order level-set reinitialization on triangle meshes.',
    long_description=long_description,
    long_description_content_type='text/markdown',
    python_requires='>=3.8',
    install_requires=[
        "numba>=0.43.0",
        "meshio>=4.0.0",
        "scipy>=1.5.0",
        "tqdm>=4.24.0",
        "sphinxcontrib-napoleon",
        "sphinx-rtd-theme",
        "matplotlib",
        "numpy>=1.19.0",
        "pandas>=1.1.0",
        "pyyaml>=5.4.1",
        "dotmap~=1.3.24",
        "setuptools>=58.0.4",
            ],
    extras_require={'test': ["pytest>=6.0"]},
    entry_points={'console_scripts': ['redistance=redist.driver:cli']},
)
