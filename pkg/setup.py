from setuptools import setup, find_packages

setup(
    name="scitrade",
    version="1.0.0",
    description="Trade indicators for citation flows between scientific fields",
    author="Your Name",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    install_requires=[
        'click>=8.1.7',
        'tabulate>=0.9.0',
        'pydantic>=2.5.2',
        'python-dotenv>=1.0.0',
        'rich>=13.7.0',
        'numpy>=1.24',
        'scipy>=1.10',
        'pandas>=1.5',
    ],
    extras_require={
        'test': ['pytest>=7.4.3'],
    },
    entry_points={
        'console_scripts': [
            'scitrade=src.cli:main',
        ],
    },
    python_requires='>=3.8',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],
)
