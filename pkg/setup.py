'''
Standard Python setup script.
'''

from setuptools import setup, find_packages

with open('README.md', 'r') as fh:
    long_description = fh.read()

setup(
    name='modular-qc-analytics',
    version='0.1.0',
    description='Scaling, timing and Reserve-Commit analytics of modular quantum architectures',
    license='MIT',
    long_description=long_description,
    long_description_content_type='text/markdown',
    python_requires='>=3.7',
    install_requires=[
        'numpy',
        'networkx',
        'PyYAML',
    ],
    tests_require=[
        'coverage',
        'pytest',
        'pytest-cov',
        'codecov'
    ],
    packages=find_packages(exclude=['tests']),
    scripts=['bin/modular_qc.py', 'scripts/verify_records.py'],
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
