from setuptools import setup, find_packages


packages = find_packages('src')

test_requirements = [
    'pytest>=7.0',
    'pylama>=8.4',
    'hypothesis>=6.0',
    'mpmath>=1.2',
    'scipy>=1.8',
]

setup(
    name='smallgamma',
    version='0.1',
    description='Log-scale sampling from gamma distributions with a small shape parameter',
    author='Daniel O\'Connell',
    author_email='tojad99@gmail.com',
    packages=packages,
    package_dir={'': 'src'},
    package_data={'smallgamma.math': ['data/*.tsv']},
    python_requires='>=3.9',
    install_requires=[
        'numpy>=1.22',
        'path>=16.0',
    ],
    tests_require=test_requirements,
    extras_require={'test': test_requirements},
    entry_points={
        'console_scripts': ['smallgamma = smallgamma.cli:main'],
    },
)
