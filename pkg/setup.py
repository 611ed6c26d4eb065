import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="hermit",
    version="0.1.0",
    author="hermit contributors",
    description="Hermitian graph learning and grid state interpolation",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "examples", "examples.*"]),
    entry_points={
        "console_scripts": [
            "hermit = hermit.__main__:cli",
            "hmt = hermit.__main__:cli",
        ]
    },
    python_requires=">=3.8",
    install_requires=[
        "click>=7.0",
        "coloredlogs>=10.0",
        "colorama",
        "pyyaml",
        "numpy>=1.20",
        "scipy>=1.7",
        "joblib>=1.0",
    ],
    extras_require={
        "test": ["pytest"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
    ],
)
