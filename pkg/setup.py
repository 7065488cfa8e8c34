from setuptools import find_packages, setup

setup(
    name="mac-playground",
    version="0.1.0",
    author="Teron",
    author_email="teron131@gmail.com",
    description="Power-control games on the fading multiple-access channel, with and without an eavesdropper.",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    url="https://github.com/teron131/mac-playground",
    packages=find_packages(
        exclude=[
            "*.tests",
            "*.tests.*",
            "tests.*",
            "tests",
            "*test*",
            "*.__pycache__",
            "__pycache__",
            "results",
            "build",
            "mac_playground.egg-info",
        ]
    ),
    package_data={
        "mac_playground.Harness": [
            "scenarios/*.json",
            "sweeps/*.json",
        ],
    },
    install_requires=[
        # Numerics
        "numpy",
        "pandas",
        # Models and configuration
        "pydantic>=2",
        "python-dotenv",
        # Reporting
        "tabulate",
        "tqdm",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "mac-playground=mac_playground.Harness.cli:main",
        ],
    },
    python_requires=">=3.9",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
