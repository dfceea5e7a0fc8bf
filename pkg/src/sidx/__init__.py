"""Succinct set, multiset, prefix-sum and tree indexes."""
