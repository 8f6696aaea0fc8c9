import sys

if sys.version_info < (3, 8):
    sys.exit('clat requires Python >= 3.8')

from setuptools import setup, find_packages
from pathlib import Path

version = {}
with open("clat/_version.py") as fp:
    exec(fp.read(), version)


setup(
    name='clat',
    version=version['__version__'],
    license='BSD',
    description='Conditional LATent space toolkit',
    long_description=Path('README.md').read_text('utf-8'),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=['tests', 'tests.*']),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.8',
    install_requires=[
        x.split('#')[0].strip() for x in
        Path('requirements.txt').read_text('utf-8').splitlines()
        if x.split('#')[0].strip() != ''
    ],
    entry_points={
        'console_scripts': ['clat=clat.cli:main'],
    },
)
