# This file is automatically generated by the setup.py script
long_description = """
Sequence Database Compression with Sequential Rules
===================================================
The comsr package selects a small set of sequential rules that best
compresses a sequence database under the minimum description length
principle, and encodes the database losslessly with it.

See more information in the README.
"""
short_version = '0.1.0'
version = '0.1.0'
full_version = '0.1.0.dev0+Unknown'
git_revision = 'Unknown'
release = False
if not release:
    version = full_version
