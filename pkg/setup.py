"""Setup for PyTurnpike python package."""
from os import path
from setuptools import find_packages, setup

REQUIRES = ['numpy>=1.22', 'pydantic>=2.0']

TESTS_REQUIRE = ['pytest>=7.0', 'scipy>=1.8']

THIS_DIRECTORY = path.abspath(path.dirname(__file__))
with open(path.join(THIS_DIRECTORY, "README.md"), encoding="utf-8") as f:
    LONG_DESCRIPTION = f.read()

VERSION = {}
# pylint: disable=exec-used
with open(path.join(THIS_DIRECTORY, "turnpike/__version__.py"), encoding="utf-8") as fp:
    exec(fp.read(), VERSION)

setup(
    name='pyturnpike',
    description='Feedback-controlled Cucker-Smale particles, their hydrodynamic limits and turnpike certificates.',
    long_description=LONG_DESCRIPTION,
    long_description_content_type="text/markdown",
    version=VERSION["__version__"],
    license='MIT',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11'
    ],
    packages=find_packages(exclude=['examples', 'examples.*']),
    python_requires='>=3.9',
    install_requires=REQUIRES,
    extras_require={'test': TESTS_REQUIRE},
    entry_points={'console_scripts': ['turnpike=turnpike.__main__:main']},
    keywords='cucker-smale alignment mean-field hydrodynamics feedback turnpike',
    zip_safe=False)
