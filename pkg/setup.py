from setuptools import setup, find_packages

setup(
    name="kolmogorov_monotone",
    version="0.1",
    packages=find_packages(exclude=['examples', 'examples.*']),
    package_data={'config': ['parameters.json']},
    install_requires=[
        'numpy>=1.24.3',
        'pandas>=2.0.3',
        'python-dotenv>=1.0.0',
        'psutil>=5.9.0',
    ],
    extras_require={
        'test': ['hypothesis>=6.82.0'],
    },
    entry_points={
        'console_scripts': ['kolmogorov=app.cli:main'],
    },
)
