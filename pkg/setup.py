from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    # Pure-Python install: periods.py falls back to _coeff_kernel_py at import.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "hodgeloci._coeff_kernel",
                ["src/hodgeloci/_coeff_kernel.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
        build_dir="build/cython",
    )

setup(ext_modules=ext_modules)
