from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [Extension("qmqv._kernel", ["src/qmqv/_kernel.pyx"])],
        compiler_directives={"language_level": "3"},
    ),
)
