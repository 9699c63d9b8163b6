import sys
from setuptools import setup

assert sys.version_info >= (3, 8), "nqcalc requires Python 3.8+"

if __name__ == "__main__":
    setup()
