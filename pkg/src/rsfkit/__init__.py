"""Kernel reactive languages: YampaCore and Molholes, with a resource type checker,
normalizer, translator and law-testing harness."""
