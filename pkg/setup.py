import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="selfnorm",
    version="1.0.0",
    python_requires='>=3.10',
    description="Tail bounds for self-normalized sums of symmetric random variables",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"selfnorm": ["reference.conf", "documentation.md"], "selfnormcli": ["documentation.md"]},
    install_requires=[
        "numpy",
        "scipy",
        "structlog",
        "pyhocon",
        "dataclasses-json",
        "typing_extensions; python_version<'3.11'",
    ],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["selfnorm=selfnormcli.SelfNormCli:run"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
