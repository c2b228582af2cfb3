#! /usr/bin/python

'''pyinteract --- minimizers of one-dimensional attractive-repulsive
interaction energies.

pyinteract evaluates the explicit minimizers of the interaction energy
with power-law kernels, computes them numerically with two independent
solvers and certifies the integral identities and Euler-Lagrange
conditions behind the explicit solution by quadrature.

The O(N**2) pair sums are optionally compiled with Cython; without a
compiler the package falls back to numpy.
'''

import glob
import logging
import os
import sys
from setuptools import setup, Command
from setuptools.command.sdist import sdist
from setuptools.extension import Extension

try:
    from setuptools.errors import CompileError, LinkError
except ImportError:
    from distutils.errors import CompileError, LinkError

try:
    from Cython.Distutils import build_ext
except ImportError:
    from setuptools.command.build_ext import build_ext

try:
    import cython  # noqa
    HAVE_CYTHON = True
except ImportError:
    HAVE_CYTHON = False

log = logging.getLogger('pyinteract')


def get_pyinteract_version():
    sys.path.insert(0, "pyinteract")
    import version
    return version.__version__


# Override sdist command to ensure Cythonized *.c files are included.
class cythonize_sdist(sdist):

    def run(self):
        if HAVE_CYTHON:
            from Cython.Build import cythonize
            cythonize(self.distribution.ext_modules)
        super().run()


class CyExtension(Extension):
    def __init__(self, *args, **kwargs):
        self._optional_build = kwargs.pop("optional_build", True)
        super().__init__(*args, **kwargs)


class cy_build_ext(build_ext):
    '''build extensions, treating a failed optional build as a warning.

    pyinteract works without the compiled pair sums, so a missing
    compiler must not stop the installation.
    '''

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except (CompileError, LinkError) as e:
            if isinstance(ext, CyExtension) and ext._optional_build:
                log.warning("building %s failed (%s), using the numpy implementation", ext.name, e)
            else:
                raise


class clean_ext(Command):
    description = "clean up Cython temporary files"
    user_options = []

    def initialize_options(self):
        pass

    def finalize_options(self):
        pass

    def run(self):
        objs = glob.glob(os.path.join("pyinteract", "libc*.c"))
        if objs:
            log.info("removing 'pyinteract/libc*.c' (%s Cython objects)", len(objs))
        for obj in objs:
            os.remove(obj)

        shared = glob.glob(os.path.join("pyinteract", "libc*.so")) + \
            glob.glob(os.path.join("pyinteract", "libc*.pyd"))
        if shared:
            log.info("removing %s compiled extension modules", len(shared))
        for obj in shared:
            os.remove(obj)


# If cython is available, the extension is built from the .pyx file.
# Otherwise a shipped C file is used if present, and without either
# pyinteract installs as pure Python.
if HAVE_CYTHON:
    print(f"# pyinteract: Cython {cython.__version__} is available - using cythonize if necessary")
    source_pattern = "pyinteract/libc%s.pyx"
else:
    print("# pyinteract: no Cython available - using pre-compiled C if present")
    source_pattern = "pyinteract/libc%s.c"

modules = []
fn = source_pattern % "pairwise"
if os.path.exists(fn):
    modules.append(dict(name="pyinteract.libcpairwise",
                        sources=[fn],
                        language="c",
                        extra_compile_args=["-O2"]))
else:
    print(f"# pyinteract: {fn} not found - the compiled pair sums are skipped")

classifiers = """
Development Status :: 4 - Beta
Intended Audience :: Science/Research
Intended Audience :: Developers
License :: OSI Approved
Programming Language :: Python
Topic :: Scientific/Engineering :: Mathematics
Operating System :: POSIX
Operating System :: Unix
Operating System :: MacOS
"""

metadata = {
    'name': "pyinteract",
    'version': get_pyinteract_version(),
    'description': "Minimizers of one-dimensional attractive-repulsive interaction energies",
    'long_description': __doc__,
    'long_description_content_type': "text/x-rst",
    'license': "MIT",
    'platforms': ["POSIX", "UNIX", "MacOS"],
    'classifiers': [_f for _f in classifiers.split("\n") if _f],
    'packages': ['pyinteract'],
    'ext_modules': [CyExtension(**opts) for opts in modules],
    'cmdclass': {'build_ext': cy_build_ext, 'clean_ext': clean_ext, 'sdist': cythonize_sdist},
    'package_data': {'': ['*.pyx'], },
    'install_requires': ['numpy', 'scipy'],
    'entry_points': {'console_scripts': ['pyinteract = pyinteract.cli:main']},
    'zip_safe': False,
}

if __name__ == '__main__':
    dist = setup(**metadata)
