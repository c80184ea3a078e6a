import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

with open("requirements.txt", "r") as fh:
    requirements = [line.strip() for line in fh if line.strip()]

setuptools.setup(
    name="sagnac_toolbox",
    version="1.0.0",
    description=("Simulation and analysis of a CW-pumped telecom Sagnac "
                 "polarization-entangled photon source."),
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=("tests", "examples", "examples.*")),
    install_requires=requirements,
    entry_points={
        "console_scripts": ["sagnac-toolbox=sagnac_toolbox.cli:main"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.8',
)
