from setuptools import Extension, setup
from Cython.Build import cythonize

ext = Extension("qtoric._ctmc", ["src/qtoric/_ctmc.pyx"])

setup(ext_modules=cythonize([ext], language_level="3"))
