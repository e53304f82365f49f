"""Test package for the B-Rep tokenizer.

Subpackages mirror ``app``:
- geometry: grids, boxes, canonicalization and augmentation
- fsq: scalar quantizer and the reference latent encoder
- topology: adjacency graph, traversal and reference windows
- tokens: vocabulary, stream containers, codec and autocomplete
- evaluation: validity, constraint detection and metrics
- corpus: synthetic generators and the stratified corpus
- schema: interchange documents
"""
