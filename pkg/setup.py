from setuptools import Extension, setup

# The mod-p elimination kernel is optional: qmbmw.kernels falls back to a
# numpy implementation when the extension is absent or fails to build.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("qmbmw._modred", ["src/qmbmw/_modred.pyx"])],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
