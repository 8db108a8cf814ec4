"""infotriage: a human-in-the-loop search engine for disinformation triage.

Analysts search ingested text corpora with keyword, sentiment, aspect, and
stance criteria, iterate with feedback, and score results against gold
labels. Classifier backends are pluggable: a deterministic lexicon baseline
ships in-core, and neural models can be attached over an HTTP wire protocol.
"""

__version__ = "0.1.0"
