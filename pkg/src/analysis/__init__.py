"""Pricing, repository, synthesis, clustering and cost calculators"""