#!/usr/bin/env python3
"""
Simple script to run counter-fitting from a source checkout.
"""
import os
import sys

# Add the project directory to the path
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

from src.app import main

if __name__ == "__main__":
    main()
