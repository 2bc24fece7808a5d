from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # without Cython the pure-Python kernel is used
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("galcoh._smith_ext", ["src/galcoh/_smith_ext.pyx"], extra_compile_args=["-O2"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
