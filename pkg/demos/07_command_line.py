"""The same pipeline through the command line and its text formats.

Run: python3 demos/07_command_line.py
"""
import json
import tempfile
from pathlib import Path

from finmodels.cli import main

work = Path(tempfile.mkdtemp(prefix="finmodels-demo-"))
(work / "maps.txt").write_text("pl: (0,0) (1,1)\nbasepoint: 0\nconst: 1/2\n")
(work / "v.json").write_text(json.dumps({
    "elements": ["a", "b", "t"],
    "leq": [["a", "a"], ["b", "b"], ["t", "t"], ["a", "t"], ["b", "t"]]}))
(work / "swap.txt").write_text(
    "poset = v.json\na: a [0,1/2] b [1/2,1]\nb: b [0,1/2] a [1/2,1]\nt: t [0,1]\n")
(work / "sample.txt").write_text("t=0 pl: (0,0) (1,1)\nt=1 pl: (0,0) (1/2,1/4) (1,1)\n")

for argv in (
        ["quotient", "--space", "interval", "--index", "2,2"],
        ["project", "--space", "interval", "--index", "1,1", "--maps", str(work / "maps.txt")],
        ["homology", "--poset", str(work / "v.json")],
        ["isotopy-validate", "--isotopy", str(work / "swap.txt")],
        ["isotopy-decompose", "--isotopy", str(work / "swap.txt")],
        ["isotopy-approximate", "--space", "interval", "--sample", str(work / "sample.txt")]):
    print("$ finmodels " + " ".join(a if "/" not in a else Path(a).name for a in argv))
    code = main(argv)
    print("(exit %d)\n" % code)
