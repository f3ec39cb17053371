from setuptools import setup, find_packages

setup(
    name="crosszone",
    version="0.1.0",
    packages=find_packages(),
    package_data={"crosszone.core": ["data/*.csv"]},
    install_requires=[
        "click>=8.1.3",
        "pydantic>=2.0.0",
        "typer>=0.9.0",
        "rich>=13.0.0",
        "python-dotenv>=1.0.0",
        "numpy>=1.24.0",
    ],
    entry_points={
        "console_scripts": [
            "crosszone=crosszone.cli.main:app",
        ],
    },
    author="Your Name",
    author_email="your.email@example.com",
    description="Cross Z-complementary pairs and sparse MIMO training matrices",
    keywords="complementary sequences, golay pairs, channel estimation, spatial modulation",
    python_requires=">=3.10",
)
