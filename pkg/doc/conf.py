# -*- coding: utf-8 -*-
#
# pyinteract documentation build configuration file
#
# This file is execfile()d with the current directory set to its containing dir.

import sys, os, setuptools

# the compiled pairwise module, if it has been built
_build_obj = setuptools.dist.Distribution().get_command_obj('build')
_build_obj.ensure_finalized()
_libdir = os.path.join('..', _build_obj.build_platlib)
if os.path.exists(_libdir):
    sys.path.insert(0, os.path.abspath(_libdir))
sys.path.insert(0, os.path.abspath('..'))

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.autosummary',
              'sphinx.ext.todo',
              'sphinx.ext.mathjax',
              'sphinx.ext.intersphinx',
              'sphinx.ext.napoleon']

intersphinx_mapping = {
    'python': ('https://docs.python.org/%d.%d' % sys.version_info[:2], None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
}

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'pyinteract'
copyright = '2025 the pyinteract developers'

rst_epilog = '''
.. _cython: https://cython.org/
.. _python: https://www.python.org/
.. _numpy: https://numpy.org/
.. _scipy: https://scipy.org/
.. _PyPI: https://pypi.org/
.. _pip: https://pip.pypa.io/
.. _conda: https://conda.io/docs/
.. _sphinx: https://www.sphinx-doc.org/en/master/usage/installation.html
.. _pytest-benchmark: https://pytest-benchmark.readthedocs.io/
'''

autosummary_generate = True

import pyinteract.version
version = pyinteract.version.__version__
release = version

exclude_trees = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = []
htmlhelp_basename = 'pyinteractdoc'

# -- Options for LaTeX output --------------------------------------------------

latex_documents = [
    ('index', 'pyinteract.tex', u'pyinteract documentation',
     'the pyinteract developers', 'manual'),
]
