from setuptools import setup

setup(
    name='unequal-crossover',
    version='0.1.0',
    packages=['crossover', 'crossover.test'],
    url='',
    test_suite='crossover.test',
    license='MIT',
    install_requires=['numpy', 'scipy', 'pandas'],
    entry_points={'console_scripts': ['uc = crossover.cli:main']},
    description='Recombination dynamics of copy numbers under unequal crossover'
)
