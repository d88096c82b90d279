"""
Setup script for counter-fitting.
"""
from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [
        line.split("#")[0].strip()
        for line in fh.read().splitlines()
        if line.split("#")[0].strip() and not line.startswith("pytest")
    ]

setup(
    name="counter-fitting",
    version="0.1.0",
    description="Counter-fit word vectors to synonymy and antonymy constraints and build semantic dictionaries",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
    install_requires=requirements,
    extras_require={"test": ["pytest>=7.4.0"]},
    entry_points={
        "console_scripts": [
            "counter-fit=src.app:main",
        ],
    },
)
