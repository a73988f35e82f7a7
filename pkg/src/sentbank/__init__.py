"""sentbank: a search-only translation memory.

Ingests text corpora into a deduplicated, hash-indexed sentence store,
measures sentence-repetition statistics, projects the corpus volume needed
for a target repetition percentage, and translates new text by exact
sentence lookup against crowd-contributed translations.
"""

__version__ = "0.1.0"
