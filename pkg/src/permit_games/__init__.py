"""Permit-games: cooperative analysis of capped, taxed emission permit markets."""

from .production import Situation, coalition_value, optimal_demand, production_revenue

__all__ = [
    "Situation",
    "coalition_value",
    "optimal_demand",
    "production_revenue",
]
