from setuptools import setup, find_packages

setup(
    name="slelab",
    packages=find_packages(exclude=["tests", "examples"]),
    version="1.0.0"
)
