from setuptools import setup

setup(
    name='esd',
    version='1.0',
    description='"esd" or "event/state duality" is a Python package for '
    'event-based and state-based partial order models of concurrent '
    'computations, the transforms between them and analyses over their '
    'lattices of consistent cuts.',
    license='GNU General Public License v3.0',
    packages=['esd'],
    install_requires=[
        'numpy',
        'networkx',
        'tqdm',
        'coloredlogs'
    ],
    entry_points={
        'console_scripts': ['esd=esd.cli:main'],
    },
    zip_safe=False
)
