"""Setup for skelsign.
"""

from pathlib import Path

from setuptools import setup, find_packages


INSTALL_REQUIRES = [
    "click",
    "exit_codes",
    "numpy",
    "qprompt",
    "rich",
    "scipy",
    "sqlalchemy",
    "stevedore",
    "toml",
]

setup(
    name="skelsign",
    version="1.0.0",
    packages=find_packages("src"),
    author="skelsign developers",
    description="Hand-gesture recognition on 3D skeleton sequences",
    license="MIT License",
    keywords="skeleton gesture recognition grad-cam self-supervised",
    package_dir={"": "src"},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ],
    python_requires=">=3.7",
    platforms="any",
    include_package_data=True,
    install_requires=INSTALL_REQUIRES,
    # List additional groups of dependencies here (e.g. development
    # dependencies). You can install these using the following syntax,
    # for example:
    # $ pip install -e .[dev,test]
    extras_require={
        "test": ["hypothesis", "pytest", "pytest-mock"],
        "dev": ["flake8", "black", "bumpversion", "twine"],
    },
    entry_points={
        "console_scripts": [
            "skelsign = skelsign.cli:main",
            "skelsign-report = skelsign.tools.report:report",
            "skelsign-accuracy = skelsign.tools.accuracy:format_accuracy",
        ],
        "skelsign.architectures": [
            "fc = skelsign.models.fc:FullyConnected",
            "cnn = skelsign.models.cnn:Convolutional",
            "lstm = skelsign.models.lstm:Recurrent",
            "autoencoder = skelsign.models.autoencoder:Autoencoder",
        ],
    },
    long_description=Path("README.rst").read_text(encoding="utf-8"),
)
