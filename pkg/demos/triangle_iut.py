"""A stand-alone Triangle implementation speaking the line protocol.

Each request line is a JSON array (integers, or one-character strings for
characters); each reply is one verdict line. Try it with

    vdm-oracle run triangle --suite table8 --iut "exec:python3 demos/triangle_iut.py"
"""

import json
import sys


def classify(sides):
    if len(sides) != 3 or not all(isinstance(s, int) and s >= 0 for s in sides):
        return "INVALID"
    if any(2 * s >= sum(sides) for s in sides):
        return "INVALID"
    return {1: "EQUILATERAL", 2: "ISOSCELES", 3: "SCALENE"}[len(set(sides))]


for line in sys.stdin:
    print(classify(json.loads(line)), flush=True)
