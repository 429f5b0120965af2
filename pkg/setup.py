#!/usr/bin/env python
from setuptools import setup

try:
    import pypandoc
    long_description = pypandoc.convert('README.md', 'rst')
except(IOError, ImportError):
    long_description = ""

packages = [
    "qtilt",
    "qtilt.loggers"
]

data_files = [
    ("qtilt/config", [
        "qtilt/config/config.yml"
    ])
]

requires = [
    "PyYAML",
    "numpy",
    "sympy"
]

setup(
    name='qtilt',
    version="2026.4.0",
    description='Exact tensor-product decompositions of twisted tilting modules for quantum GL2 at a root of unity in mixed characteristic',
    long_description=long_description,
    packages=packages,
    data_files=data_files,
    include_package_data=True,
    install_requires=requires,
    extras_require={
        "test": ["pytest"]
    },
    entry_points={
        'console_scripts': ['qtilt = qtilt.qtilt:execute']
    },
    license='MIT',
    zip_safe=False,
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics'
    ]
)
