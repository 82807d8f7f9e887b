from setuptools import setup, find_packages


with open('README.md') as f:
    long_description = ''.join(f.readlines())

setup(
    name='code_equivalence',
    version='1.0.0',
    description='Translate codes between secure index coding and secure network coding',
    long_description=long_description,
    long_description_content_type='text/markdown',
    keywords='index-coding network-coding information-theoretic-security reduction',
    license='Apache License 2.0',
    packages=find_packages(exclude=['tests', 'tests.*']),
    classifiers=[
        'Development Status :: 4 - Beta',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: POSIX :: Linux',
        'Programming Language :: Python',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    zip_safe=False,
    python_requires='>=3.8, <4',
    install_requires=[
        'click>=8.1,<8.2',
        'networkx',
        'PyYAML',
        'sentry-sdk',
    ],
    extras_require={
        'tests': [
            'hypothesis',
            'pytest',
        ],
    },
    entry_points={
        'console_scripts': [
            'sce=code_equivalence:main',
        ],
    },
)
