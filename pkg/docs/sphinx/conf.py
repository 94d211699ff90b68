# Configuration file for the Sphinx documentation builder.

import sys
from pathlib import Path

import sphinx_rtd_theme

sys.path.insert(0, str(Path(__file__).resolve().parents[2]))
from hardmdp import __version__ as hardmdp_version

# -- Project information -----------------------------------------------------

project = 'hardmdp'
version = hardmdp_version
release = hardmdp_version
language = 'en'

# -- General configuration ---------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.autosummary',
              'sphinx.ext.napoleon']
napoleon_include_init_with_doc = False
napoleon_numpy_docstring = True
autodoc_default_options = {'members': True}
autosummary_generate = True

pygments_style = 'sphinx'
exclude_patterns = ['build', 'Thumbs.db', '.DS_Store']

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
html_theme_options = {'collapse_navigation': False,
                      'navigation_depth': 3}
modindex_common_prefix = ['hardmdp.']
html_show_sphinx = False
htmlhelp_basename = 'hardmdpdoc'
