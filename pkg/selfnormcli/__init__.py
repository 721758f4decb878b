"""
.. include:: documentation.md
"""
