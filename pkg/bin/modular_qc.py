#!/usr/bin/env python3
"""
Analytic tables and simulations of modular quantum architectures, see
modular_qc.cli for the subcommands.
"""
from modular_qc.cli import run


if __name__ == '__main__':
    run()
