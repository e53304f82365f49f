"""B-Rep tokenizer: point-grid solids to discrete token sequences and back."""
