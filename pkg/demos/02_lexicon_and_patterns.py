"""The lexicon, spelling repair, and class-sequence pattern mining."""

import numpy as np

from shapetalk import TABLE1, default_lexicon, mine_patterns, parse, sample_pattern

lexicon = default_lexicon()

print("word classes:")
for cid, words in lexicon.classes().items():
    print(f"  class {cid}: {' '.join(words)}")

print("\nparses:")
for text in ("The blue square",
             "the green circle in the front",
             "blu sqare at the top",      # two misspellings
             "light-green rectangle"):
    d = parse(text, lexicon, TABLE1)
    words = " ".join(c.word for c in d.constraints)
    print(f"  {text!r:<38} -> pattern {d.pattern} words [{words}] flags {d.flags}")

print("\nmost frequent syntax patterns (reference table):")
for pattern, freq in list(TABLE1)[:8]:
    print(f"  {freq:6.2%}  {' '.join(map(str, pattern))}")

rng = np.random.default_rng(3)
sequences = [sample_pattern(rng) for _ in range(10_000)]
mined = mine_patterns(sequences)
print("\nre-mined from 10,000 sampled descriptions:")
for pattern, freq in list(TABLE1)[:8]:
    print(f"  {' '.join(map(str, pattern)):<14} reference {freq:.4f}   mined {mined.frequency(pattern):.4f}")
