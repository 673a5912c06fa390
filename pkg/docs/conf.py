"""Sphinx configuration for the isores documentation."""

import importlib.metadata

project = "isores"
author = "Massimo Gollo"
copyright = f"2026, {author}"

try:
    release = importlib.metadata.version(project)
except importlib.metadata.PackageNotFoundError:
    # building from a checkout without an installed package
    release = "0.1.0"
version = ".".join(release.split(".")[:2])

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx_autodoc_typehints",
    "sphinx_copybutton",
    "sphinxcontrib.autodoc_pydantic",
]

exclude_patterns = ["_build"]
default_role = "math"

html_theme = "furo"
html_title = f"isores {version}"
html_short_title = "isores"

# Module pages document arrays through their aliases, not the expanded numpy generics.
autodoc_default_options = {
    "members": True,
    "show-inheritance": True,
}
autodoc_member_order = "bysource"
autodoc_typehints = "description"
autodoc_type_aliases = {
    "FloatArray": "isores.geometry.bodies.FloatArray",
    "BoolArray": "isores.geometry.bodies.BoolArray",
    "UInt8Array": "isores.gridsolver.domain.UInt8Array",
    "ConvexBody": "isores.geometry.bodies.ConvexBody",
    "PolyhedralBody": "isores.geometry.bodies.PolyhedralBody",
}
# pycddlib is a compiled extension; the API pages only need its names
autodoc_mock_imports = ["cdd"]

typehints_defaults = "comma"
typehints_use_rtype = False

# Report models are large; the field table is enough, the JSON schema is in bodies.rst.
autodoc_pydantic_model_show_json = False
autodoc_pydantic_model_show_config_summary = False
autodoc_pydantic_model_show_validator_summary = False
autodoc_pydantic_field_list_validators = False
autodoc_pydantic_settings_show_json = False
autodoc_pydantic_settings_show_config_summary = False

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "matplotlib": ("https://matplotlib.org/stable/", None),
    "pydantic": ("https://docs.pydantic.dev/latest/", None),
}
