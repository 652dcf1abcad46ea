"""
Satellite / Cell-Free Load-Balancing Simulator

Uplink throughput analysis and fairness-driven user association for
networks where users are served by a LEO satellite, terrestrial APs, or both.
"""

__version__ = "1.0.0"
__author__ = "Simfair Development Team"
__description__ = "Closed-form throughput analysis and GA-based association optimization"
